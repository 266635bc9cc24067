//! Antecedent selection for conflict resolution.
//!
//! Given an implied literal and its antecedents (ordered by registration
//! index), each heuristic picks the antecedent with the best score. Ties
//! always go to the smallest registration index.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::lit::Lit;
use crate::nogoods::{NogoodId, NogoodStore};
use crate::trail::{Antecedent, Trail};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Heuristic {
    /// The antecedent propagation found first.
    #[default]
    First,
    /// Fewest literals.
    Short,
    /// Lexicographically smallest descending list of reason levels.
    Lex,
    /// Smallest mean reason level.
    Avg,
    /// Fewest reason literals at the current decision level.
    Res,
    /// Highest activity.
    Active,
    /// Smallest level at which the nogood ever fired.
    Prop,
}

impl Heuristic {
    pub const ALL: [Heuristic; 7] = [
        Heuristic::First,
        Heuristic::Short,
        Heuristic::Lex,
        Heuristic::Avg,
        Heuristic::Res,
        Heuristic::Active,
        Heuristic::Prop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::First => "first",
            Heuristic::Short => "short",
            Heuristic::Lex => "lex",
            Heuristic::Avg => "avg",
            Heuristic::Res => "res",
            Heuristic::Active => "active",
            Heuristic::Prop => "prop",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Heuristic::ALL
            .iter()
            .copied()
            .find(|h| h.name() == s)
            .ok_or_else(|| Error::UnknownHeuristic(s.to_string()))
    }
}

/// Decision levels of the reason `ε \ {σ̄}` in descending order.
pub fn levels_list(antecedent: &[Lit], implied: Lit, t: &Trail) -> Vec<u32> {
    let mut levels: Vec<u32> = antecedent
        .iter()
        .filter(|&&l| l != !implied)
        .map(|&l| t.level(l.var()))
        .collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels
}

/// The score an antecedent receives under a heuristic. Scores of the
/// same heuristic are compared with [`Score::beats`].
#[derive(Debug, Clone, PartialEq)]
pub enum Score {
    First { stored: bool },
    Short(usize),
    Lex(Vec<u32>),
    /// Mean as an exact fraction; an empty reason has mean 0.
    Avg { sum: u64, count: u64 },
    Res(usize),
    Active(f64),
    Prop(Option<u32>),
}

impl Score {
    /// Whether `self` is strictly better than `other`.
    pub fn beats(&self, other: &Score) -> bool {
        match (self, other) {
            (Score::First { stored: a }, Score::First { stored: b }) => *a && !*b,
            (Score::Short(a), Score::Short(b)) => a < b,
            (Score::Lex(a), Score::Lex(b)) => a.cmp(b) == Ordering::Less,
            (Score::Avg { sum: s1, count: n1 }, Score::Avg { sum: s2, count: n2 }) => {
                let (n1, n2) = ((*n1).max(1), (*n2).max(1));
                (*s1 as u128) * (n2 as u128) < (*s2 as u128) * (n1 as u128)
            }
            (Score::Res(a), Score::Res(b)) => a < b,
            (Score::Active(a), Score::Active(b)) => a > b,
            (Score::Prop(a), Score::Prop(b)) => match (a, b) {
                (Some(x), Some(y)) => x < y,
                (Some(_), None) => true,
                _ => false,
            },
            _ => panic!("comparing scores of different heuristics"),
        }
    }
}

pub fn score(
    h: Heuristic,
    id: NogoodId,
    implied: Lit,
    t: &Trail,
    store: &NogoodStore,
    current_level: u32,
) -> Score {
    let lits = store.lits(id);
    match h {
        Heuristic::First => Score::First {
            stored: t.antecedent(implied.var()) == Some(Antecedent::Nogood(id)),
        },
        Heuristic::Short => Score::Short(lits.len()),
        Heuristic::Lex => Score::Lex(levels_list(lits, implied, t)),
        Heuristic::Avg => {
            let levels = levels_list(lits, implied, t);
            Score::Avg {
                sum: levels.iter().map(|&l| l as u64).sum(),
                count: levels.len() as u64,
            }
        }
        Heuristic::Res => Score::Res(
            lits.iter()
                .filter(|&&l| l != !implied && t.level(l.var()) == current_level)
                .count(),
        ),
        Heuristic::Active => Score::Active(store.activity(id)),
        Heuristic::Prop => Score::Prop(store.get(id).min_implied_level),
    }
}

/// Picks an antecedent of `implied` from `sigma`, which must be nonempty
/// and ordered by registration index.
pub fn select(
    h: Heuristic,
    implied: Lit,
    sigma: &[NogoodId],
    t: &Trail,
    store: &NogoodStore,
    current_level: u32,
) -> NogoodId {
    assert!(!sigma.is_empty(), "no antecedent to select from");
    if h == Heuristic::First {
        if let Some(Antecedent::Nogood(id)) = t.antecedent(implied.var()) {
            if sigma.contains(&id) {
                return id;
            }
        }
        return sigma[0];
    }
    let mut best = sigma[0];
    let mut best_score = score(h, best, implied, t, store, current_level);
    for &id in &sigma[1..] {
        let s = score(h, id, implied, t, store, current_level);
        if s.beats(&best_score) {
            best = id;
            best_score = s;
        }
    }
    best
}
