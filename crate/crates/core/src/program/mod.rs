//! Ground normal logic programs and their structural indices.
//!
//! A [`Program`] holds an atom table, a deduplicated body table and the
//! rules over them, together with `body(p)` for every atom, the positive
//! dependency graph, its strongly connected components and the tightness
//! flag. Programs are immutable once built.

mod parser;
mod scc;

use std::collections::HashMap;
use std::fmt;

pub use parser::parse_program;
pub use scc::strongly_connected_components;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BodyId(pub u32);

impl AtomId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl BodyId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: AtomId,
    pub name: String,
    /// Fresh atoms introduced to encode integrity constraints.
    pub hidden: bool,
}

/// A rule body `p1, ..., pm, not pm+1, ..., not pn`. Both parts are sorted
/// by atom id and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Body {
    pub id: BodyId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl Body {
    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: AtomId,
    pub body: BodyId,
}

#[derive(Debug, Clone)]
pub struct Program {
    atoms: Vec<Atom>,
    bodies: Vec<Body>,
    rules: Vec<Rule>,
    bodies_of: Vec<Vec<BodyId>>,
    pos_dep: Vec<Vec<AtomId>>,
    sccs: Vec<Vec<AtomId>>,
    scc_of: Vec<usize>,
    cyclic: Vec<bool>,
    tight: bool,
}

impl Program {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, a: AtomId) -> &Atom {
        &self.atoms[a.index()]
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn body(&self, b: BodyId) -> &Body {
        &self.bodies[b.index()]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_bodies(&self) -> usize {
        self.bodies.len()
    }

    /// `body(p)`: the bodies of all rules with head `p`, in rule order.
    pub fn bodies_of(&self, p: AtomId) -> &[BodyId] {
        &self.bodies_of[p.index()]
    }

    /// Successors of `p` in the positive dependency graph.
    pub fn pos_dependencies(&self, p: AtomId) -> &[AtomId] {
        &self.pos_dep[p.index()]
    }

    pub fn sccs(&self) -> &[Vec<AtomId>] {
        &self.sccs
    }

    pub fn scc_of(&self, p: AtomId) -> usize {
        self.scc_of[p.index()]
    }

    /// An SCC is cyclic when it has more than one atom or a self-loop.
    pub fn is_cyclic_scc(&self, scc: usize) -> bool {
        self.cyclic[scc]
    }

    pub fn is_tight(&self) -> bool {
        self.tight
    }

    pub fn atom_by_name(&self, name: &str) -> Option<AtomId> {
        self.atoms
            .iter()
            .find(|a| !a.hidden && a.name == name)
            .map(|a| a.id)
    }

    /// Atoms shown in answer sets, in id (first-appearance) order.
    pub fn visible_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter().filter(|a| !a.hidden)
    }

    /// Renders the program in the textual rule format. Constraint encodings
    /// are printed back as `:- B.`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&self.rule_text(r, None));
            out.push('\n');
        }
        out
    }

    /// Renders one rule; `order` optionally permutes the body literals,
    /// indexing the list `pos ++ neg` (with the self-negation of a
    /// constraint head removed).
    pub fn rule_text(&self, r: &Rule, order: Option<&[usize]>) -> String {
        let head = self.atom(r.head);
        let body = self.body(r.body);
        let mut lits: Vec<String> = body
            .pos
            .iter()
            .map(|&a| self.atom(a).name.clone())
            .collect();
        for &a in &body.neg {
            if head.hidden && a == r.head {
                continue;
            }
            lits.push(format!("not {}", self.atom(a).name));
        }
        if let Some(order) = order {
            lits = order.iter().map(|&i| lits[i].clone()).collect();
        }
        let head_text = if head.hidden { String::new() } else { head.name.clone() };
        if lits.is_empty() {
            if head.hidden {
                ":- .".to_string()
            } else {
                format!("{}.", head_text)
            }
        } else if head.hidden {
            format!(":- {}.", lits.join(", "))
        } else {
            format!("{} :- {}.", head_text, lits.join(", "))
        }
    }

    /// Number of printable body literals of a rule (see [`Program::rule_text`]).
    pub fn rule_text_len(&self, r: &Rule) -> usize {
        let head = self.atom(r.head);
        let body = self.body(r.body);
        let self_neg = head.hidden && body.neg.contains(&r.head);
        body.len() - self_neg as usize
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Incremental construction of a [`Program`]. Atom and body ids follow
/// first-appearance order.
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    atoms: Vec<(String, bool)>,
    names: HashMap<String, AtomId>,
    bodies: Vec<Body>,
    body_ids: HashMap<(Vec<AtomId>, Vec<AtomId>), BodyId>,
    rules: Vec<Rule>,
    seen_rules: HashMap<Rule, ()>,
    constraints: HashMap<(Vec<AtomId>, Vec<AtomId>), AtomId>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn atom(&mut self, name: &str) -> AtomId {
        if let Some(&id) = self.names.get(name) {
            return id;
        }
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push((name.to_string(), false));
        self.names.insert(name.to_string(), id);
        id
    }

    fn hidden_atom(&mut self) -> AtomId {
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push((String::new(), true));
        id
    }

    fn body(&mut self, pos: &[AtomId], neg: &[AtomId]) -> BodyId {
        let key = (normalize(pos), normalize(neg));
        if let Some(&id) = self.body_ids.get(&key) {
            return id;
        }
        let id = BodyId(self.bodies.len() as u32);
        self.bodies.push(Body {
            id,
            pos: key.0.clone(),
            neg: key.1.clone(),
        });
        self.body_ids.insert(key, id);
        id
    }

    /// Adds `head :- pos, not neg.` Identical rules collapse.
    pub fn add_rule_ids(&mut self, head: AtomId, pos: &[AtomId], neg: &[AtomId]) {
        let body = self.body(pos, neg);
        let rule = Rule { head, body };
        if self.seen_rules.insert(rule, ()).is_none() {
            self.rules.push(rule);
        }
    }

    pub fn add_rule(&mut self, head: &str, pos: &[&str], neg: &[&str]) {
        let head = self.atom(head);
        let pos: Vec<AtomId> = pos.iter().map(|n| self.atom(n)).collect();
        let neg: Vec<AtomId> = neg.iter().map(|n| self.atom(n)).collect();
        self.add_rule_ids(head, &pos, &neg);
    }

    /// Adds the integrity constraint `:- pos, not neg.` as
    /// `x :- pos, not neg, not x.` with a fresh hidden atom `x`.
    pub fn add_constraint_ids(&mut self, pos: &[AtomId], neg: &[AtomId]) {
        let key = (normalize(pos), normalize(neg));
        if self.constraints.contains_key(&key) {
            return;
        }
        let x = self.hidden_atom();
        self.constraints.insert(key, x);
        let mut neg = neg.to_vec();
        neg.push(x);
        self.add_rule_ids(x, pos, &neg);
    }

    pub fn add_constraint(&mut self, pos: &[&str], neg: &[&str]) {
        let pos: Vec<AtomId> = pos.iter().map(|n| self.atom(n)).collect();
        let neg: Vec<AtomId> = neg.iter().map(|n| self.atom(n)).collect();
        self.add_constraint_ids(&pos, &neg);
    }

    pub fn build(self) -> Program {
        let n = self.atoms.len();
        // Hidden atoms are named `x0, x1, ...`, skipping names in use.
        let mut hidden_count = 0usize;
        let atoms: Vec<Atom> = self
            .atoms
            .into_iter()
            .enumerate()
            .map(|(i, (name, hidden))| {
                let name = if hidden {
                    let mut candidate = format!("x{}", hidden_count);
                    while self.names.contains_key(&candidate) {
                        candidate.push('_');
                    }
                    hidden_count += 1;
                    candidate
                } else {
                    name
                };
                Atom {
                    id: AtomId(i as u32),
                    name,
                    hidden,
                }
            })
            .collect();

        let mut bodies_of = vec![Vec::new(); n];
        for r in &self.rules {
            bodies_of[r.head.index()].push(r.body);
        }
        let mut pos_dep: Vec<Vec<AtomId>> = vec![Vec::new(); n];
        for (p, bs) in bodies_of.iter().enumerate() {
            let succ = &mut pos_dep[p];
            for b in bs {
                succ.extend_from_slice(&self.bodies[b.index()].pos);
            }
            succ.sort_unstable();
            succ.dedup();
        }
        let sccs = strongly_connected_components(n, |p| {
            pos_dep[p].iter().map(|a| a.index()).collect::<Vec<_>>()
        });
        let mut scc_of = vec![0; n];
        for (i, c) in sccs.iter().enumerate() {
            for &a in c {
                scc_of[a] = i;
            }
        }
        let cyclic: Vec<bool> = sccs
            .iter()
            .map(|c| c.len() > 1 || pos_dep[c[0]].contains(&AtomId(c[0] as u32)))
            .collect();
        let tight = !cyclic.iter().any(|&c| c);
        let sccs = sccs
            .into_iter()
            .map(|c| {
                let mut c: Vec<AtomId> = c.into_iter().map(|a| AtomId(a as u32)).collect();
                c.sort_unstable();
                c
            })
            .collect();

        Program {
            atoms,
            bodies: self.bodies,
            rules: self.rules,
            bodies_of,
            pos_dep,
            sccs,
            scc_of,
            cyclic,
            tight,
        }
    }
}

fn normalize(atoms: &[AtomId]) -> Vec<AtomId> {
    let mut v = atoms.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Free-standing tightness test.
pub fn is_tight(p: &Program) -> bool {
    p.is_tight()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(p: &Program) -> Vec<&str> {
        p.atoms().iter().map(|a| a.name.as_str()).collect()
    }

    #[test]
    fn basic_program() {
        let p = parse_program("a :- b, not c.\nb.").unwrap();
        assert_eq!(names(&p), ["a", "b", "c"]);
        assert_eq!(p.num_bodies(), 2);
        let b0 = p.body(BodyId(0));
        assert_eq!(b0.pos, [AtomId(1)]);
        assert_eq!(b0.neg, [AtomId(2)]);
        assert!(p.body(BodyId(1)).is_empty());
        assert!(p.is_tight());
    }

    #[test]
    fn positive_cycle() {
        let p = parse_program("a :- b.\nb :- a.").unwrap();
        assert!(!is_tight(&p));
        assert_eq!(p.sccs().len(), 1);
        assert_eq!(p.sccs()[0], [AtomId(0), AtomId(1)]);
    }

    #[test]
    fn tightness_examples() {
        assert!(is_tight(&parse_program("a :- not b. b :- not a.").unwrap()));
        assert!(!is_tight(&parse_program("a :- b. b :- a.").unwrap()));
        assert!(!is_tight(&parse_program("a :- a.").unwrap()));
    }

    #[test]
    fn constraint_encoding() {
        let p = parse_program(":- a.").unwrap();
        assert_eq!(p.num_atoms(), 2);
        let x = p.atom(AtomId(1));
        assert!(x.hidden);
        assert_eq!(x.name, "x0");
        let r = p.rules()[0];
        assert_eq!(r.head, AtomId(1));
        let b = p.body(r.body);
        assert_eq!(b.pos, [AtomId(0)]);
        assert_eq!(b.neg, [AtomId(1)]);
        assert_eq!(p.visible_atoms().count(), 1);
        assert_eq!(p.to_text(), ":- a.\n");
    }

    #[test]
    fn hidden_name_avoids_user_atoms() {
        let p = parse_program(":- a.\nx0 :- a.").unwrap();
        let hidden: Vec<_> = p.atoms().iter().filter(|a| a.hidden).collect();
        assert_eq!(hidden.len(), 1);
        assert_eq!(hidden[0].name, "x0_");
        assert_eq!(p.atom_by_name("x0"), Some(AtomId(2)));
    }

    #[test]
    fn duplicates_collapse() {
        let p = parse_program("a :- b, not c.\na :- not c, b, b.\n:- a.\n:- a.").unwrap();
        assert_eq!(p.rules().len(), 2);
        assert_eq!(p.bodies_of(AtomId(0)).len(), 1);
    }

    #[test]
    fn shared_bodies() {
        let p = parse_program("a :- c.\nb :- c.").unwrap();
        assert_eq!(p.num_bodies(), 1);
        assert_eq!(p.bodies_of(AtomId(0)), p.bodies_of(AtomId(2)));
    }

    #[test]
    fn contradictory_body_is_kept() {
        let p = parse_program("a :- b, not b.").unwrap();
        assert_eq!(p.rules().len(), 1);
        let b = p.body(p.rules()[0].body);
        assert_eq!(b.pos, b.neg);
    }

    #[test]
    fn round_trip_text() {
        let src = "a :- b, not c.\nb.\nc :- a.\n:- a, not b.\n";
        let p = parse_program(src).unwrap();
        let q = parse_program(&p.to_text()).unwrap();
        assert_eq!(p.to_text(), q.to_text());
    }
}
