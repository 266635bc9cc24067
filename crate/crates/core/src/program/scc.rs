/// Tarjan's algorithm, iterative. Returns components in reverse
/// topological order (sinks first); nodes are `0..n`.
pub fn strongly_connected_components<F>(n: usize, successors: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> Vec<usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut sccs = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (node, successors, next successor position)
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, successors(root), 0));

        while let Some((v, succ, pos)) = call.last_mut() {
            let v = *v;
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, successors(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some((parent, _, _)) = call.last() {
                low[*parent] = low[*parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                sccs.push(comp);
            }
        }
    }
    sccs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reachability(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<bool>> {
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
            for &j in &edges[i] {
                row[j] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        reach
    }

    proptest! {
        #[test]
        fn matches_mutual_reachability(
            n in 1usize..20,
            raw in proptest::collection::vec((0usize..20, 0usize..20), 0..60),
        ) {
            let mut edges = vec![Vec::new(); n];
            for (a, b) in raw {
                edges[a % n].push(b % n);
            }
            let sccs = strongly_connected_components(n, |v| edges[v].clone());
            let reach = reachability(n, &edges);
            let mut comp = vec![usize::MAX; n];
            for (i, c) in sccs.iter().enumerate() {
                for &v in c {
                    prop_assert_eq!(comp[v], usize::MAX);
                    comp[v] = i;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let same = reach[i][j] && reach[j][i];
                    prop_assert_eq!(same, comp[i] == comp[j]);
                }
            }
        }
    }

    #[test]
    fn self_loop_is_singleton() {
        let sccs = strongly_connected_components(2, |v| if v == 0 { vec![0, 1] } else { vec![] });
        assert_eq!(sccs.len(), 2);
    }
}
