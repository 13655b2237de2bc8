//! The coordinate ring `k[x,y,z,t]/(xt - yz - 1)` of the quadric.

use core::fmt;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::poly::{det4, substitute_with, Monomial, QPoly, Rational, Var, MAX_EXPONENT};

/// Default bound on the total degree of any intermediate polynomial.
pub const DEFAULT_DEGREE_CAP: u32 = 5000;

/// A residue class, stored as its normal form: the unique representative
/// with no monomial divisible by `xt`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QElem {
    nf: QPoly,
}

impl QElem {
    pub fn nf(&self) -> &QPoly {
        &self.nf
    }

    pub fn into_nf(self) -> QPoly {
        self.nf
    }

    pub fn zero() -> Self {
        QElem { nf: QPoly::zero() }
    }

    pub fn one() -> Self {
        QElem { nf: QPoly::one() }
    }

    pub fn var(v: Var) -> Self {
        QElem { nf: QPoly::var(v) }
    }

    pub fn constant(c: Rational) -> Self {
        QElem { nf: QPoly::constant(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.nf.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.nf.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        QElem { nf: self.nf.add(&o.nf) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QElem { nf: self.nf.sub(&o.nf) }
    }

    pub fn neg(&self) -> Self {
        QElem { nf: self.nf.neg() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QElem { nf: self.nf.scale(c) }
    }

    /// Total degree of the normal form; `None` for the zero class.
    pub fn degree(&self) -> Option<u32> {
        self.nf.degree()
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.nf, f)
    }
}

impl fmt::Debug for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QElem({})", self.nf)
    }
}

/// Arithmetic context carrying the degree cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ring {
    cap: u32,
}

impl Default for Ring {
    fn default() -> Self {
        Ring { cap: DEFAULT_DEGREE_CAP }
    }
}

/// `xt - yz`.
pub fn quadratic_form() -> QPoly {
    QPoly::from_terms([
        (Monomial::new([1, 0, 0, 1]), Rational::one()),
        (Monomial::new([0, 1, 1, 0]), Rational::from_int(-1)),
    ])
}

impl Ring {
    /// A context with the given cap (clamped to the largest packable exponent).
    pub fn new(cap: u32) -> Self {
        Ring { cap: cap.min(MAX_EXPONENT) }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Rewrites `xt -> yz + 1` exhaustively.
    ///
    /// A monomial `x^a y^b z^c t^d` with `k = min(a, d)` becomes
    /// `x^(a-k) y^b z^c t^(d-k) (yz + 1)^k`, already reduced.
    pub fn reduce(&self, r: &QPoly) -> QElem {
        if r.terms().iter().all(|(m, _)| m.exp(Var::X) == 0 || m.exp(Var::T) == 0) {
            return QElem { nf: r.clone() };
        }
        let mut map: HashMap<Monomial, Rational> = HashMap::with_capacity(r.len() * 2);
        for (m, c) in r.terms() {
            let [a, b, cz, d] = m.exponents();
            let k = a.min(d);
            if k == 0 {
                *map.entry(*m).or_default() += c;
                continue;
            }
            for j in 0..=k {
                let mono = Monomial::new([a - k, b + j, cz + j, d - k]);
                let coef = c * &Rational::binomial(k, j);
                *map.entry(mono).or_default() += &coef;
            }
        }
        QElem { nf: QPoly::from_terms(map) }
    }

    pub fn parse(&self, s: &str) -> Result<QElem> {
        Ok(self.reduce(&s.parse()?))
    }

    pub fn mul(&self, a: &QElem, b: &QElem) -> Result<QElem> {
        Ok(self.reduce(&a.nf.mul(&b.nf, self.cap)?))
    }

    pub fn pow(&self, a: &QElem, e: u32) -> Result<QElem> {
        let mut acc = QElem::one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Class of `R(f_x, f_y, f_z, f_t)`.
    pub fn substitute(&self, r: &QPoly, images: &[QElem; 4]) -> Result<QElem> {
        let imgs = images.clone().map(QElem::into_nf);
        let out = substitute_with(r, &imgs, self.cap, |a, b| a.mul(b, self.cap), |p| self.reduce(&p).into_nf())?;
        Ok(self.reduce(&out))
    }

    /// Degree of a nonzero class.
    pub fn class_degree(&self, f: &QElem) -> Result<u32> {
        f.degree().ok_or(Error::ZeroElement)
    }

    /// `j(f1, f2, f3) = Jac(q, R1, R2, R3)` restricted to the quadric.
    pub fn pseudo_jacobian(&self, f1: &QElem, f2: &QElem, f3: &QElem) -> Result<QElem> {
        let q = quadratic_form();
        let rows = [&q, f1.nf(), f2.nf(), f3.nf()].map(|r| Var::ALL.map(|v| r.partial(v)));
        Ok(self.reduce(&det4(&rows, self.cap)?))
    }

    /// First coordinate `u` (in the order x, y, z, t) with `j(u, f1, f2) != 0`.
    pub fn independence_witness(&self, f1: &QElem, f2: &QElem) -> Result<Option<Var>> {
        for v in Var::ALL {
            if !self.pseudo_jacobian(&QElem::var(v), f1, f2)?.is_zero() {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}
