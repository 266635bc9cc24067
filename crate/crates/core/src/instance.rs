//! The solver's view of a problem: a variable domain, the static nogoods
//! over it and, for logic programs, the program itself.

use crate::lit::{Lit, Var};
use crate::nogoods::completion_nogoods;
use crate::program::{AtomId, BodyId, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Atom(AtomId),
    Body(BodyId),
    /// A variable declared directly in a nogood file.
    Plain,
}

#[derive(Debug, Clone)]
pub struct Instance {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    nogoods: Vec<Vec<Lit>>,
    program: Option<Program>,
    visible: Vec<Var>,
    script: Vec<Lit>,
}

/// Variable of atom `a`: atoms occupy the low variable indices.
#[inline]
pub fn atom_var(a: AtomId) -> Var {
    Var(a.0)
}

/// Variable of body `b`, placed after all atoms.
#[inline]
pub fn body_var(p: &Program, b: BodyId) -> Var {
    Var(p.num_atoms() as u32 + b.0)
}

impl Instance {
    /// Wraps a program; the static nogoods are its completion nogoods.
    pub fn from_program(program: Program) -> Instance {
        let mut names = Vec::with_capacity(program.num_atoms() + program.num_bodies());
        let mut kinds = Vec::with_capacity(names.capacity());
        for a in program.atoms() {
            names.push(a.name.clone());
            kinds.push(VarKind::Atom(a.id));
        }
        for b in program.bodies() {
            names.push(format!("B{}", b.id.0));
            kinds.push(VarKind::Body(b.id));
        }
        let visible = program.visible_atoms().map(|a| atom_var(a.id)).collect();
        let nogoods = completion_nogoods(&program);
        Instance {
            names,
            kinds,
            nogoods,
            program: Some(program),
            visible,
            script: Vec::new(),
        }
    }

    /// A plain nogood problem over named variables. All variables are
    /// visible; nogoods keep their given registration order.
    pub fn from_nogoods(names: Vec<String>, nogoods: Vec<Vec<Lit>>, script: Vec<Lit>) -> Instance {
        let kinds = vec![VarKind::Plain; names.len()];
        let visible = (0..names.len() as u32).map(Var).collect();
        Instance {
            names,
            kinds,
            nogoods,
            program: None,
            visible,
            script,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, v: Var) -> VarKind {
        self.kinds[v.index()]
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        if let Some(p) = &self.program {
            return p.atom_by_name(name).map(atom_var);
        }
        self.names.iter().position(|n| n == name).map(|i| Var(i as u32))
    }

    /// The static nogoods in registration order.
    pub fn nogoods(&self) -> &[Vec<Lit>] {
        &self.nogoods
    }

    pub fn program(&self) -> Option<&Program> {
        self.program.as_ref()
    }

    /// Nogood instances have no loops to check.
    pub fn is_tight(&self) -> bool {
        self.program.as_ref().is_none_or(|p| p.is_tight())
    }

    pub fn visible(&self) -> &[Var] {
        &self.visible
    }

    pub fn script(&self) -> &[Lit] {
        &self.script
    }

    pub fn set_script(&mut self, script: Vec<Lit>) {
        self.script = script;
    }

    /// `T name` or `F name`.
    pub fn lit_name(&self, l: Lit) -> String {
        format!("{} {}", if l.sign() { 'T' } else { 'F' }, self.name(l.var()))
    }

    /// `{T a, F b}` in the given literal order.
    pub fn nogood_text(&self, lits: &[Lit]) -> String {
        let parts: Vec<String> = lits.iter().map(|&l| self.lit_name(l)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses `T name` / `F name` (the space is optional).
    pub fn parse_lit(&self, text: &str) -> Option<Lit> {
        let text = text.trim();
        let mut chars = text.chars();
        let sign = match chars.next()? {
            'T' => true,
            'F' => false,
            _ => return None,
        };
        let name = chars.as_str().trim();
        if name.is_empty() {
            return None;
        }
        let v = self
            .names
            .iter()
            .position(|n| n == name)
            .map(|i| Var(i as u32))?;
        Some(Lit::new(v, sign))
    }

    /// Renders the static nogoods in the nogood file format.
    pub fn to_nogood_file(&self) -> String {
        let mut out = String::new();
        out.push_str("vars:");
        for n in &self.names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for ng in &self.nogoods {
            let parts: Vec<String> = ng.iter().map(|&l| self.lit_name(l)).collect();
            out.push_str("nogood: ");
            out.push_str(&parts.join(", "));
            out.push('\n');
        }
        out
    }
}
