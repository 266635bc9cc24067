//! First-UIP conflict analysis with heuristic antecedent selection.
//!
//! Starting from a violated nogood `δ`, the literal `σ ∈ δ` assigned last is
//! resolved away against one of its antecedents as long as another literal
//! of `δ` shares its decision level. The antecedents are recomputed from the
//! occurrence lists: every stored nogood containing `σ̄` whose other
//! literals were all assigned before `σ`.

use std::fmt::Write;

use crate::heuristics::select;
use crate::instance::Instance;
use crate::lit::Lit;
use crate::nogoods::{NogoodId, NogoodStore};
use crate::solve::{Selection, Solver};
use crate::trail::{Antecedent, Trail};

#[derive(Debug, Clone, PartialEq)]
pub struct ConflictResult {
    /// The First-UIP nogood, ordered by trail position.
    pub nogood: Vec<Lit>,
    pub backjump_level: u32,
    pub resolution_steps: usize,
    /// The only literal of `nogood` at the conflict level. After
    /// backjumping, the nogood implies its complement.
    pub uip: Lit,
    /// Level of the violated nogood's last literal.
    pub conflict_level: u32,
    pub violated: NogoodId,
    /// Resolved literals with the antecedent chosen for each, in order.
    pub resolvents: Vec<(Lit, NogoodId)>,
}

/// All stored nogoods `ε` with `ε \ A[σ] = {σ̄}`, in registration order.
/// Empty for decisions.
pub fn antecedents(sigma: Lit, store: &NogoodStore, t: &Trail) -> Vec<NogoodId> {
    let Some(pos) = t.position(sigma.var()) else {
        return Vec::new();
    };
    if !t.is_true(sigma) {
        return Vec::new();
    }
    store
        .occurrences(!sigma)
        .iter()
        .copied()
        .filter(|&id| {
            store.lits(id).iter().all(|&l| {
                l == !sigma || (t.is_true(l) && t.position(l.var()).unwrap() < pos)
            })
        })
        .collect()
}

fn last_assigned(delta: &[Lit], t: &Trail) -> usize {
    (0..delta.len())
        .max_by_key(|&i| t.position(delta[i].var()).unwrap())
        .expect("empty nogood in conflict analysis")
}

impl<'a> Solver<'a> {
    /// Derives the First-UIP nogood from a violated nogood. Bumps the
    /// activity of every antecedent used as a resolvent.
    pub fn analyze(&mut self, violated: NogoodId) -> ConflictResult {
        let h = self.cfg.heuristic;
        let mut delta: Vec<Lit> = self.store.lits(violated).to_vec();
        debug_assert!(delta.iter().all(|&l| self.trail.is_true(l)), "nogood is not violated");
        let conflict_level = {
            let i = last_assigned(&delta, &self.trail);
            self.trail.level(delta[i].var())
        };
        let mut steps = 0;
        let mut resolvents = Vec::new();
        loop {
            let i = last_assigned(&delta, &self.trail);
            let sigma = delta[i];
            let level = self.trail.level(sigma.var());
            let k = delta
                .iter()
                .filter(|&&l| l != sigma)
                .map(|&l| self.trail.level(l.var()))
                .max()
                .unwrap_or(0);
            if k != level {
                delta.sort_by_key(|l| self.trail.position(l.var()).unwrap());
                return ConflictResult {
                    nogood: delta,
                    backjump_level: k,
                    resolution_steps: steps,
                    uip: sigma,
                    conflict_level,
                    violated,
                    resolvents,
                };
            }
            let sigma_set = antecedents(sigma, &self.store, &self.trail);
            assert!(!sigma_set.is_empty(), "literal to resolve has no antecedent");
            let chosen = select(h, sigma, &sigma_set, &self.trail, &self.store, conflict_level);
            if let Some(o) = self.observer.as_deref_mut() {
                o.on_selection(&Selection {
                    heuristic: h,
                    implied: sigma,
                    antecedents: &sigma_set,
                    chosen,
                    trail: &self.trail,
                    store: &self.store,
                    level: conflict_level,
                });
            }
            self.store.bump_activity(chosen, 1.0);
            delta.swap_remove(i);
            for &l in self.store.lits(chosen) {
                if l != !sigma && !delta.contains(&l) {
                    delta.push(l);
                }
            }
            steps += 1;
            resolvents.push((sigma, chosen));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Reason,
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub lit: Lit,
    pub level: u32,
    pub decision: bool,
    pub side: Side,
}

/// The conflict graph traced by one analysis: for every resolved literal
/// the reason of the chosen antecedent, plus the conflicting pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub level: u32,
    pub nodes: Vec<GraphNode>,
    /// `(source, target, antecedent)`.
    pub edges: Vec<(Lit, Lit, NogoodId)>,
    pub conflicting: (Lit, Lit),
    pub uip: Lit,
    /// The conflict nogood of the cut: the First-UIP nogood.
    pub cut: Vec<Lit>,
}

/// Builds the conflict graph of an analysis. Must be called before
/// backjumping, while the trail still holds the conflict.
pub fn export_conflict_graph(r: &ConflictResult, store: &NogoodStore, t: &Trail) -> ConflictGraph {
    let violated = store.lits(r.violated);
    let last = violated[last_assigned(violated, t)];
    let mut edges = Vec::new();
    for &l in violated {
        if l != last {
            edges.push((l, !last, r.violated));
        }
    }
    let mut conflict_side = vec![!last];
    for &(sigma, eps) in &r.resolvents {
        conflict_side.push(sigma);
        for &l in store.lits(eps) {
            if l != !sigma {
                edges.push((l, sigma, eps));
            }
        }
    }

    let mut order: Vec<Lit> = Vec::new();
    let mut add = |l: Lit| {
        if !order.contains(&l) {
            order.push(l);
        }
    };
    for &(s, d, _) in &edges {
        add(s);
        add(d);
    }
    add(last);
    add(!last);
    // Trail order, with the complement of the conflicting literal last.
    order.sort_by_key(|&l| if l == !last { usize::MAX } else { t.position(l.var()).unwrap() });
    let nodes = order
        .into_iter()
        .map(|lit| {
            let on_trail = lit != !last;
            GraphNode {
                lit,
                level: t.level(lit.var()),
                decision: on_trail && t.antecedent(lit.var()) == Some(Antecedent::Decision),
                side: if conflict_side.contains(&lit) { Side::Conflict } else { Side::Reason },
            }
        })
        .collect();
    ConflictGraph {
        level: r.conflict_level,
        nodes,
        edges,
        conflicting: (last, !last),
        uip: r.uip,
        cut: r.nogood.clone(),
    }
}

impl ConflictGraph {
    /// Plain-text rendering:
    ///
    /// ```text
    /// % conflict graph
    /// level: 3
    /// conflict: T x, F x
    /// uip: T s
    /// cut: F p, T s
    /// node: T s @3 implied reason
    /// T r -> T s [#2]
    /// ```
    ///
    /// Edge labels are registration indices of the antecedents.
    pub fn to_text(&self, inst: &Instance) -> String {
        let name = |l: Lit| inst.lit_name(l);
        let mut s = String::from("% conflict graph\n");
        let _ = writeln!(s, "level: {}", self.level);
        let _ = writeln!(s, "conflict: {}, {}", name(self.conflicting.0), name(self.conflicting.1));
        let _ = writeln!(s, "uip: {}", name(self.uip));
        let cut: Vec<String> = self.cut.iter().map(|&l| name(l)).collect();
        let _ = writeln!(s, "cut: {}", cut.join(", "));
        for n in &self.nodes {
            let kind = if n.lit == self.conflicting.1 {
                "conflicting"
            } else if n.decision {
                "decision"
            } else {
                "implied"
            };
            let side = match n.side {
                Side::Reason => "reason",
                Side::Conflict => "conflict",
            };
            let _ = writeln!(s, "node: {} @{} {} {}", name(n.lit), n.level, kind, side);
        }
        for &(a, b, id) in &self.edges {
            let _ = writeln!(s, "{} -> {} [#{}]", name(a), name(b), id.0);
        }
        s
    }
}
