#![allow(dead_code)]

use cdnl::analyze::ConflictResult;
use cdnl::heuristics::{score, Heuristic};
use cdnl::instance::{atom_var, Instance};
use cdnl::lit::Lit;
use cdnl::oracle::{answer_sets, contains, induced_solution};
use cdnl::program::{parse_program, AtomId, Program};
use cdnl::solve::{ConflictEvent, Observer, Selection};
use cdnl::{NogoodId, Origin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const IMPLICATION: &str = include_str!("../data/implication.ng");

pub fn implication() -> Instance {
    cdnl::cli::parse_nogood_file(IMPLICATION).unwrap()
}

/// Random program over at most `max_atoms` atoms with at most `max_rules`
/// rules; roughly one rule in ten is an integrity constraint.
pub fn random_program(seed: u64, max_atoms: usize, max_rules: usize) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_atoms);
    let m = rng.gen_range(1..=max_rules);
    let name = |i: usize| format!("a{}", i);
    let mut text = String::new();
    for _ in 0..m {
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            let a = name(rng.gen_range(0..n));
            if rng.gen_bool(0.4) {
                body.push(format!("not {}", a));
            } else {
                body.push(a);
            }
        }
        if rng.gen_bool(0.1) && !body.is_empty() {
            text.push_str(&format!(":- {}.\n", body.join(", ")));
        } else {
            let head = name(rng.gen_range(0..n));
            if body.is_empty() {
                text.push_str(&format!("{}.\n", head));
            } else {
                text.push_str(&format!("{} :- {}.\n", head, body.join(", ")));
            }
        }
    }
    parse_program(&text).unwrap()
}

pub const HAND_CASES: &[&str] = &[
    "",
    "a.",
    "a :- not a.",
    "a :- not b. b :- not a.",
    "a :- b. b :- a.",
    "a :- b. b :- a. a :- not c. c :- not a.",
    "a :- not b. b :- not c. c :- not a.",
    "a :- not b. b :- not a. :- a.",
    "a :- not b. b :- not a. :- a. :- b.",
    "a :- b. b :- c. c :- a. a :- not d. d :- not a.",
    "a :- b, c. b :- a. c :- a. b :- not d. d :- not b.",
    "a :- a.",
    "a :- not a, b. b.",
    "a :- not a, b. b :- not c. c :- not b.",
    "p :- q. q :- p. p :- not r. r :- not p. s :- p, not r. :- s, r.",
    "a :- b. b :- a, c. c :- not d. d :- not c. a :- d.",
    "a. b :- a. c :- b, not d. d :- not c.",
    "x :- y. y :- x. x :- z. z :- not w. w :- not z. :- w.",
    "a :- not b. b :- not a. c :- a. c :- b. :- not c.",
    "a :- b. b :- a. :- not a.",
    "a :- b. b :- c. c :- a. :- not b.",
    "a1 :- not a2. a2 :- not a1. a3 :- not a4. a4 :- not a3. a5 :- a1, a3. :- a5. :- a2, a4.",
    "a :- not b, not c. b :- not a, not c. c :- not a, not b.",
    "a :- b. b :- a. c :- not a. :- c.",
    ":- .",
];

pub fn hand_programs() -> Vec<Program> {
    HAND_CASES.iter().map(|s| parse_program(s).unwrap()).collect()
}

/// Induced solutions of all answer sets.
pub fn oracle_solutions(p: &Program) -> Vec<Vec<bool>> {
    answer_sets(p).unwrap().iter().map(|x| induced_solution(p, x)).collect()
}

/// Visible atom names of a model or answer set, sorted.
pub fn sorted_names(p: &Program, atoms: &[AtomId]) -> Vec<String> {
    let mut v: Vec<String> = atoms
        .iter()
        .filter(|&&a| !p.atom(a).hidden)
        .map(|&a| p.atom(a).name.clone())
        .collect();
    v.sort();
    v
}

/// Checks conflict-analysis invariants and tallies metrics independently
/// of the solver's own counters.
#[derive(Default)]
pub struct Audit {
    /// Solutions the recorded nogoods must not contain.
    pub solutions: Vec<Vec<bool>>,
    pub violations: Vec<String>,
    pub entailment_checks: usize,
    pub selections: usize,
    pub argmin_violations: usize,
    pub conflicts: u64,
    pub sum_len: u64,
    pub sum_backjump: u64,
    pub sum_steps: u64,
    pub loop_nogoods: u64,
    pub ufs_checks: u64,
    pending: Option<ConflictResult>,
}

impl Audit {
    pub fn new(solutions: Vec<Vec<bool>>) -> Self {
        Audit {
            solutions,
            ..Default::default()
        }
    }
}

impl Observer for Audit {
    fn on_selection(&mut self, s: &Selection<'_>) {
        self.selections += 1;
        if !s.antecedents.contains(&s.chosen) {
            self.argmin_violations += 1;
            return;
        }
        let chosen = score(s.heuristic, s.chosen, s.implied, s.trail, s.store, s.level);
        let beaten = s.antecedents.iter().any(|&id| {
            score(s.heuristic, id, s.implied, s.trail, s.store, s.level).beats(&chosen)
        });
        // Ties go to the earliest registered antecedent.
        let earlier_tie = s.heuristic != Heuristic::First
            && s.antecedents.iter().take_while(|&&id| id != s.chosen).any(|&id| {
                !chosen.beats(&score(s.heuristic, id, s.implied, s.trail, s.store, s.level))
            });
        if beaten || earlier_tie {
            self.argmin_violations += 1;
        }
    }

    fn on_conflict(&mut self, c: &ConflictEvent<'_>) {
        let r = c.result;
        let t = c.trail;
        self.conflicts += 1;
        self.sum_len += r.nogood.len() as u64;
        self.sum_backjump += (r.conflict_level - r.backjump_level) as u64;
        self.sum_steps += r.resolution_steps as u64;
        if !r.nogood.iter().all(|&l| t.is_true(l)) {
            self.violations.push(format!("nogood not contained in assignment: {:?}", r.nogood));
        }
        let at_level: Vec<Lit> = r
            .nogood
            .iter()
            .copied()
            .filter(|l| t.level(l.var()) == r.conflict_level)
            .collect();
        if at_level != [r.uip] {
            self.violations.push(format!("conflict-level literals {:?}", at_level));
        }
        if r.resolution_steps > t.level_lits(r.conflict_level).len() {
            self.violations.push("more resolution steps than literals at the conflict level".into());
        }
        if r.nogood.iter().any(|&l| l != r.uip && t.level(l.var()) > r.backjump_level) {
            self.violations.push("backjump level below a reason literal".into());
        }
        self.pending = Some(r.clone());
    }

    fn on_backjump(&mut self, c: &ConflictEvent<'_>) {
        let r = self.pending.take().expect("backjump without conflict");
        let t = c.trail;
        let asserting = t.current_level() == r.backjump_level
            && !t.is_assigned(r.uip.var())
            && r.nogood.iter().all(|&l| l == r.uip || t.is_true(l));
        if !asserting {
            self.violations.push(format!("nogood {:?} not asserting after backjump", r.nogood));
        }
    }

    fn on_record(&mut self, _id: NogoodId, lits: &[Lit], origin: Origin) {
        if origin == Origin::Loop {
            self.loop_nogoods += 1;
        }
        self.entailment_checks += 1;
        if self.solutions.iter().any(|s| contains(s, lits)) {
            self.violations.push(format!("{:?} nogood {:?} not entailed", origin, lits));
        }
    }

    fn on_unfounded_check(&mut self, _found: &[AtomId]) {
        self.ufs_checks += 1;
    }
}

/// Names of the true atoms of a program model.
pub fn model_atoms(p: &Program, model: &[cdnl::Var]) -> Vec<AtomId> {
    (0..p.num_atoms())
        .map(|i| AtomId(i as u32))
        .filter(|&a| model.contains(&atom_var(a)))
        .collect()
}
