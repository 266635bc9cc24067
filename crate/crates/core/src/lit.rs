//! Variables and signed literals over the solver domain (atoms and bodies).

use std::fmt;
use std::ops::Not;

/// Index of a solver variable. Atoms come first, then bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The literal `T v`.
    #[inline]
    pub fn t(self) -> Lit {
        Lit::new(self, true)
    }

    /// The literal `F v`.
    #[inline]
    pub fn f(self) -> Lit {
        Lit::new(self, false)
    }
}

/// A signed literal `T v` or `F v`.
///
/// Encoded as `2 * var + (sign is F)`, so the two literals of a variable
/// are adjacent and complementation is a bit flip.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, sign: bool) -> Lit {
        Lit(var.0 << 1 | (!sign) as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    /// `true` for `T v`, `false` for `F v`.
    #[inline]
    pub fn sign(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense index usable for per-literal tables.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign() { 'T' } else { 'F' };
        write!(f, "{}{}", s, self.var().0)
    }
}
