//! Brute-force reference semantics, kept deliberately naive.
//!
//! Answer sets are found by checking every atom subset against the least
//! model of its reduct. Nogood solutions are found by enumerating every
//! total assignment.

use crate::error::{Error, Result};
use crate::instance::{atom_var, body_var};
use crate::lit::Lit;
use crate::nogoods::{completion_nogoods, loop_nogood};
use crate::program::{AtomId, Program};

pub const DEFAULT_BOUND: usize = 20;

fn check_bound(size: usize, bound: usize) -> Result<()> {
    if size > bound {
        Err(Error::OracleBound { size, bound })
    } else {
        Ok(())
    }
}

/// Least model of the reduct `Π^X`, by naive iteration.
pub fn reduct_least_model(p: &Program, x: &[bool]) -> Vec<bool> {
    let mut m = vec![false; p.num_atoms()];
    loop {
        let mut changed = false;
        for r in p.rules() {
            let b = p.body(r.body);
            if m[r.head.index()] || b.neg.iter().any(|a| x[a.index()]) {
                continue;
            }
            if b.pos.iter().all(|a| m[a.index()]) {
                m[r.head.index()] = true;
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

fn subset(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn atoms_of(x: &[bool]) -> Vec<AtomId> {
    (0..x.len()).filter(|&i| x[i]).map(|i| AtomId(i as u32)).collect()
}

/// All answer sets, each sorted by atom id, in subset-enumeration order.
pub fn answer_sets(p: &Program) -> Result<Vec<Vec<AtomId>>> {
    answer_sets_bounded(p, DEFAULT_BOUND)
}

pub fn answer_sets_bounded(p: &Program, bound: usize) -> Result<Vec<Vec<AtomId>>> {
    let n = p.num_atoms();
    check_bound(n, bound)?;
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let x = subset(mask, n);
        if reduct_least_model(p, &x) == x {
            out.push(atoms_of(&x));
        }
    }
    Ok(out)
}

/// The total assignment over atoms and bodies induced by an atom set.
pub fn induced_solution(p: &Program, x: &[AtomId]) -> Vec<bool> {
    let mut v = vec![false; p.num_atoms() + p.num_bodies()];
    for &a in x {
        v[atom_var(a).index()] = true;
    }
    for b in p.bodies() {
        let holds = b.pos.iter().all(|a| v[a.index()]) && !b.neg.iter().any(|a| v[a.index()]);
        v[body_var(p, b.id).index()] = holds;
    }
    v
}

/// Whether `lits` is contained in the total assignment `values`.
pub fn contains(values: &[bool], lits: &[Lit]) -> bool {
    lits.iter().all(|l| values[l.var().index()] == l.sign())
}

/// No answer set's induced solution contains the nogood.
pub fn entails(p: &Program, nogood: &[Lit]) -> Result<bool> {
    let sols: Vec<Vec<bool>> = answer_sets(p)?.iter().map(|x| induced_solution(p, x)).collect();
    Ok(entails_given(&sols, nogood))
}

/// [`entails`] against precomputed solutions.
pub fn entails_given(solutions: &[Vec<bool>], nogood: &[Lit]) -> bool {
    !solutions.iter().any(|s| contains(s, nogood))
}

/// All total assignments over `num_vars` variables violating none of the
/// nogoods.
pub fn nogood_solutions(num_vars: usize, nogoods: &[Vec<Lit>], bound: usize) -> Result<Vec<Vec<bool>>> {
    check_bound(num_vars, bound)?;
    let mut out = Vec::new();
    for mask in 0..(1u64 << num_vars) {
        let v = subset(mask, num_vars);
        if !nogoods.iter().any(|ng| contains(&v, ng)) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Loop nogoods of every nonempty atom subset.
pub fn all_loop_nogoods(p: &Program) -> Vec<Vec<Lit>> {
    let n = p.num_atoms();
    let mut out = Vec::new();
    for mask in 1..(1u64 << n) {
        let u = atoms_of(&subset(mask, n));
        for &t in &u {
            out.push(loop_nogood(&u, p, t));
        }
    }
    out
}

fn project(p: &Program, sols: Vec<Vec<bool>>) -> Vec<Vec<AtomId>> {
    let mut out: Vec<Vec<AtomId>> = sols
        .into_iter()
        .map(|s| atoms_of(&s[..p.num_atoms()]))
        .collect();
    out.sort();
    out
}

/// Atom projections of the solutions of the completion nogoods.
pub fn completion_models(p: &Program, bound: usize) -> Result<Vec<Vec<AtomId>>> {
    let n = p.num_atoms() + p.num_bodies();
    let sols = nogood_solutions(n, &completion_nogoods(p), bound)?;
    Ok(project(p, sols))
}

/// Atom projections of the solutions of the completion nogoods together
/// with all loop nogoods.
pub fn completion_loop_models(p: &Program, bound: usize) -> Result<Vec<Vec<AtomId>>> {
    let n = p.num_atoms() + p.num_bodies();
    let mut ngs = completion_nogoods(p);
    ngs.extend(all_loop_nogoods(p));
    let sols = nogood_solutions(n, &ngs, bound)?;
    Ok(project(p, sols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::Var;
    use crate::program::parse_program;

    fn names(p: &Program, sets: &[Vec<AtomId>]) -> Vec<Vec<String>> {
        sets.iter()
            .map(|s| s.iter().map(|&a| p.atom(a).name.clone()).collect())
            .collect()
    }

    #[test]
    fn even_loop() {
        let p = parse_program("a :- not b. b :- not a.").unwrap();
        let mut got = names(&p, &answer_sets(&p).unwrap());
        got.sort();
        assert_eq!(got, [vec!["a"], vec!["b"]]);
    }

    #[test]
    fn positive_loop_unsupported() {
        let p = parse_program("a :- b. b :- a.").unwrap();
        assert_eq!(answer_sets(&p).unwrap(), vec![Vec::<AtomId>::new()]);
    }

    #[test]
    fn loop_with_external_support() {
        let p = parse_program("a :- b. b :- a. a :- not c. c :- not a.").unwrap();
        let mut got = names(&p, &answer_sets(&p).unwrap());
        got.sort();
        assert_eq!(got, [vec!["a", "b"], vec!["c"]]);
    }

    #[test]
    fn odd_loop_has_none() {
        let p = parse_program("a :- not a.").unwrap();
        assert!(answer_sets(&p).unwrap().is_empty());
    }

    #[test]
    fn induced_solution_bodies() {
        let p = parse_program("a :- b. b :- a. a :- not c. c :- not a.").unwrap();
        let a = p.atom_by_name("a").unwrap();
        let b = p.atom_by_name("b").unwrap();
        let v = induced_solution(&p, &[a, b]);
        for body in p.bodies() {
            let bv = body_var(&p, body.id).index();
            let expected = match (&body.pos[..], &body.neg[..]) {
                ([x], []) if *x == a || *x == b => true,
                ([], [x]) if p.atom(*x).name == "c" => true,
                ([], [x]) if *x == a => false,
                _ => unreachable!(),
            };
            assert_eq!(v[bv], expected);
        }
        let p = parse_program("a :- b. b :- a.").unwrap();
        assert!(induced_solution(&p, &[]).iter().all(|&x| !x));
        let p = parse_program("a.").unwrap();
        let v = induced_solution(&p, &[]);
        assert!(v[body_var(&p, crate::program::BodyId(0)).index()]);
    }

    #[test]
    fn entailment() {
        let p = parse_program("a :- not b. b :- not a.").unwrap();
        let a = Var(0);
        assert!(entails(&p, &[a.t(), a.f()]).unwrap());
        for ng in completion_nogoods(&p) {
            assert!(entails(&p, &ng).unwrap());
        }
        assert!(!entails(&p, &[a.f()]).unwrap());
    }

    #[test]
    fn bound_enforced() {
        let src: String = (0..21).map(|i| format!("a{}.\n", i)).collect();
        let p = parse_program(&src).unwrap();
        assert!(matches!(answer_sets(&p), Err(Error::OracleBound { .. })));
    }
}
