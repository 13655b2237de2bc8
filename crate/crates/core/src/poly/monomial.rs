use core::cmp::Ordering;
use core::fmt;

/// One of the four coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    T = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z', 't'][self as usize]
    }

    pub fn from_name(c: char) -> Option<Var> {
        match c {
            'x' => Some(Var::X),
            'y' => Some(Var::Y),
            'z' => Some(Var::Z),
            't' => Some(Var::T),
            _ => None,
        }
    }
}

/// Largest exponent representable in a packed monomial.
pub const MAX_EXPONENT: u32 = u16::MAX as u32;

/// Exponent vector `(e_x, e_y, e_z, e_t)` packed into 16-bit fields.
///
/// Ordered graded-lexicographically with `x > y > z > t`. Multiplication is
/// addition of the packed words, which is exact as long as every exponent of
/// the product stays within [`MAX_EXPONENT`]; the degree cap guarantees it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub(crate) u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(e: [u32; 4]) -> Monomial {
        assert!(e.iter().all(|&v| v <= MAX_EXPONENT), "exponent overflow");
        Monomial((u64::from(e[0]) << 48) | (u64::from(e[1]) << 32) | (u64::from(e[2]) << 16) | u64::from(e[3]))
    }

    pub fn var(v: Var) -> Monomial {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Monomial::new(e)
    }

    #[inline]
    pub fn exp(self, v: Var) -> u32 {
        ((self.0 >> (48 - 16 * v.index() as u32)) & 0xffff) as u32
    }

    pub fn exponents(self) -> [u32; 4] {
        [self.exp(Var::X), self.exp(Var::Y), self.exp(Var::Z), self.exp(Var::T)]
    }

    #[inline]
    pub fn degree(self) -> u32 {
        let w = self.0;
        ((w >> 48) + ((w >> 32) & 0xffff) + ((w >> 16) & 0xffff) + (w & 0xffff)) as u32
    }

    /// Product; the caller guarantees no field overflows.
    #[inline]
    pub fn mul(self, o: Monomial) -> Monomial {
        Monomial(self.0 + o.0)
    }

    pub fn divides(self, o: Monomial) -> bool {
        Var::ALL.iter().all(|&v| self.exp(v) <= o.exp(v))
    }

    /// `o / self` when `self` divides `o`.
    pub fn div(self, o: Monomial) -> Option<Monomial> {
        if self.divides(o) {
            Some(Monomial(o.0 - self.0))
        } else {
            None
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    /// `1`, `x`, `x^2*y*t^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", v.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
