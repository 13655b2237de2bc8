//! Tame automorphisms: orthogonal and elementary generators, words, and
//! their evaluation as 4-tuples of residue classes.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::{QPoly, Rational, Var};
use crate::ring::{quadratic_form, QElem, Ring};

/// A generator of the tame group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Linear map `v -> M v` preserving `xt - yz`; `eps = det M`.
    Orth { m: [[Rational; 4]; 4], eps: i8 },
    /// `(ax, by, b^-1 (z + x P(x,y)), a^-1 (t + y P(x,y)))`.
    Ev { a: Rational, b: Rational, p: QPoly },
    /// `(ax, b (y + x P(x,z)), b^-1 z, a^-1 (t + z P(x,z)))`.
    Eh { a: Rational, b: Rational, p: QPoly },
}

fn linear_forms(m: &[[Rational; 4]; 4]) -> [QPoly; 4] {
    core::array::from_fn(|i| {
        Var::ALL.iter().fold(QPoly::zero(), |acc, v| acc.add(&QPoly::var(*v).scale(&m[i][v.index()])))
    })
}

/// Determinant and inverse by Gauss-Jordan elimination.
fn det_and_inverse(m: &[[Rational; 4]; 4]) -> (Rational, Option<[[Rational; 4]; 4]>) {
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.to_vec();
            r.extend((0..4).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let mut det = Rational::one();
    for col in 0..4 {
        let Some(piv) = (col..4).find(|&r| !a[r][col].is_zero()) else {
            return (Rational::zero(), None);
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        let inv = p.recip().expect("nonzero pivot");
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..8 {
                    let d = &a[col][c] * &f;
                    a[r][c] -= &d;
                }
            }
        }
    }
    let inv = core::array::from_fn(|i| core::array::from_fn(|j| a[i][4 + j].clone()));
    (det, Some(inv))
}

impl Generator {
    pub fn orth(m: [[Rational; 4]; 4]) -> Result<Self> {
        let forms = linear_forms(&m);
        let q = quadratic_form();
        if q.substitute4(&forms, u32::MAX)? != q {
            return Err(Error::NotOrthogonal);
        }
        let (det, _) = det_and_inverse(&m);
        let eps = if det.is_one() {
            1
        } else if det == Rational::from_int(-1) {
            -1
        } else {
            return Err(Error::NotOrthogonal);
        };
        Ok(Generator::Orth { m, eps })
    }

    pub fn ev(a: Rational, b: Rational, p: QPoly) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if !p.uses_only(&[Var::X, Var::Y]) {
            return Err(Error::VariableViolation { allowed: "{x, y}" });
        }
        Ok(Generator::Ev { a, b, p })
    }

    pub fn eh(a: Rational, b: Rational, p: QPoly) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if !p.uses_only(&[Var::X, Var::Z]) {
            return Err(Error::VariableViolation { allowed: "{x, z}" });
        }
        Ok(Generator::Eh { a, b, p })
    }

    /// The permutation `(x, z, y, t)`.
    pub fn sigma() -> Self {
        let mut m: [[Rational; 4]; 4] = Default::default();
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            m[i][j] = Rational::one();
        }
        Generator::Orth { m, eps: -1 }
    }

    /// `diag(a, b, 1/b, 1/a)`.
    pub fn diag(a: Rational, b: Rational) -> Result<Self> {
        let (ai, bi) = (a.recip().ok_or(Error::ZeroScalar)?, b.recip().ok_or(Error::ZeroScalar)?);
        let mut m: [[Rational; 4]; 4] = Default::default();
        m[0][0] = a;
        m[1][1] = b;
        m[2][2] = bi;
        m[3][3] = ai;
        Ok(Generator::Orth { m, eps: 1 })
    }

    pub fn eps(&self) -> i8 {
        match self {
            Generator::Orth { eps, .. } => *eps,
            _ => 1,
        }
    }

    /// Affine generators fix the standard square's centre.
    pub fn is_affine(&self) -> bool {
        match self {
            Generator::Orth { .. } => true,
            Generator::Ev { p, .. } | Generator::Eh { p, .. } => p.is_constant(),
        }
    }

    /// The four defining polynomials in `x, y, z, t`.
    pub fn components(&self) -> [QPoly; 4] {
        let [x, y, z, t] = Var::ALL.map(QPoly::var);
        match self {
            Generator::Orth { m, .. } => linear_forms(m),
            Generator::Ev { a, b, p } => {
                let (ai, bi) = (a.recip().expect("a != 0"), b.recip().expect("b != 0"));
                [
                    x.scale(a),
                    y.scale(b),
                    z.add(&x.mul(p, u32::MAX).expect("small")).scale(&bi),
                    t.add(&y.mul(p, u32::MAX).expect("small")).scale(&ai),
                ]
            }
            Generator::Eh { a, b, p } => {
                let (ai, bi) = (a.recip().expect("a != 0"), b.recip().expect("b != 0"));
                [
                    x.scale(a),
                    y.add(&x.mul(p, u32::MAX).expect("small")).scale(b),
                    z.scale(&bi),
                    t.add(&z.mul(p, u32::MAX).expect("small")).scale(&ai),
                ]
            }
        }
    }

    /// Closed-form inverse.
    ///
    /// `EV(a,b,P)^-1 = EV(1/a, 1/b, Q)` with `Q(x,y) = -P(x/a, y/b)/(ab)`;
    /// `EH(a,b,P)^-1 = EH(1/a, 1/b, Q)` with `Q(x,z) = -(b/a) P(x/a, b z)`.
    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Orth { m, eps } => {
                let (_, inv) = det_and_inverse(m);
                Generator::Orth { m: inv.expect("orthogonal matrices are invertible"), eps: *eps }
            }
            Generator::Ev { a, b, p } => {
                let (ai, bi) = (a.recip().expect("a != 0"), b.recip().expect("b != 0"));
                let [x, y, z, t] = Var::ALL.map(QPoly::var);
                let q = p.substitute4(&[x.scale(&ai), y.scale(&bi), z, t], u32::MAX).expect("linear substitution");
                let c = -(&ai * &bi);
                Generator::Ev { a: ai, b: bi, p: q.scale(&c) }
            }
            Generator::Eh { a, b, p } => {
                let (ai, bi) = (a.recip().expect("a != 0"), b.recip().expect("b != 0"));
                let [x, y, z, t] = Var::ALL.map(QPoly::var);
                let q = p.substitute4(&[x.scale(&ai), y, z.scale(b), t], u32::MAX).expect("linear substitution");
                let c = -(b * &ai);
                Generator::Eh { a: ai, b: bi, p: q.scale(&c) }
            }
        }
    }
}

/// A generator name with exponent `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

impl Letter {
    /// `"e1"` or `"e1'"` (trailing apostrophe = inverse).
    pub fn parse(s: &str) -> Letter {
        match s.strip_suffix('\'') {
            Some(n) => Letter { name: n.to_string(), inverse: true },
            None => Letter { name: s.to_string(), inverse: false },
        }
    }

    pub fn inv(&self) -> Letter {
        Letter { name: self.name.clone(), inverse: !self.inverse }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, if self.inverse { "'" } else { "" })
    }
}

/// A word `g_p ... g_1` over a table of named generators.
///
/// Letters are stored in written order: the first letter is the outermost
/// map and is applied last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    table: BTreeMap<String, Generator>,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(table: BTreeMap<String, Generator>, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| !table.contains_key(&l.name)) {
            return Err(Error::UnknownGenerator(l.name.clone()));
        }
        Ok(Word { table, letters })
    }

    /// Word of a single generator named `name`.
    pub fn single(name: &str, g: Generator) -> Self {
        let mut table = BTreeMap::new();
        table.insert(name.to_string(), g);
        Word { table, letters: alloc::vec![Letter::parse(name)] }
    }

    pub fn identity() -> Self {
        Word { table: BTreeMap::new(), letters: Vec::new() }
    }

    pub fn table(&self) -> &BTreeMap<String, Generator> {
        &self.table
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same table, different letters.
    pub fn with_letters(&self, letters: Vec<Letter>) -> Result<Self> {
        Word::new(self.table.clone(), letters)
    }

    /// The generator a letter denotes, inverted if needed.
    pub fn generator(&self, l: &Letter) -> Generator {
        let g = &self.table[&l.name];
        if l.inverse {
            g.inverse()
        } else {
            g.clone()
        }
    }

    /// Composition `self o other`; tables are merged, `self` wins on clashes.
    pub fn concat(&self, other: &Word) -> Word {
        let mut table = other.table.clone();
        table.extend(self.table.iter().map(|(k, v)| (k.clone(), v.clone())));
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { table, letters }
    }

    pub fn inverse(&self) -> Word {
        Word { table: self.table.clone(), letters: self.letters.iter().rev().map(Letter::inv).collect() }
    }

    pub fn power(&self, n: usize) -> Word {
        let letters = (0..n).flat_map(|_| self.letters.iter().cloned()).collect();
        Word { table: self.table.clone(), letters }
    }

    /// Product of determinants of the orthogonal letters.
    pub fn epsilon(&self) -> i8 {
        self.letters.iter().map(|l| self.table[&l.name].eps()).product()
    }

    /// Evaluates `g_p o ... o g_1` and checks `fx ft - fy fz = 1`.
    pub fn evaluate(&self, ring: &Ring) -> Result<TameAut> {
        let f = self.evaluate_unchecked(ring)?;
        if !f.relation_holds(ring)? {
            return Err(Error::InternalRelationViolation);
        }
        Ok(f)
    }

    /// Evaluation without the final relation check.
    pub fn evaluate_unchecked(&self, ring: &Ring) -> Result<TameAut> {
        let mut f = TameAut::identity();
        for l in self.letters.iter().rev() {
            f = f.compose_outer(&self.generator(l), ring)?;
        }
        Ok(f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// An evaluated automorphism: components `(fx, fy, fz, ft)` and `eps`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TameAut {
    comps: [QElem; 4],
    eps: i8,
}

impl TameAut {
    pub fn identity() -> Self {
        TameAut { comps: Var::ALL.map(QElem::var), eps: 1 }
    }

    pub fn components(&self) -> &[QElem; 4] {
        &self.comps
    }

    pub fn component(&self, v: Var) -> &QElem {
        &self.comps[v.index()]
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }

    /// `g o self`: substitutes the components of `self` into the formulas of `g`.
    pub fn compose_outer(&self, g: &Generator, ring: &Ring) -> Result<TameAut> {
        let forms = g.components();
        let mut comps: [QElem; 4] = Default::default();
        for (i, form) in forms.iter().enumerate() {
            comps[i] = ring.substitute(form, &self.comps)?;
        }
        Ok(TameAut { comps, eps: self.eps * g.eps() })
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &TameAut, ring: &Ring) -> Result<TameAut> {
        let mut comps: [QElem; 4] = Default::default();
        for (i, c) in self.comps.iter().enumerate() {
            comps[i] = ring.substitute(c.nf(), &inner.comps)?;
        }
        Ok(TameAut { comps, eps: self.eps * inner.eps })
    }

    /// Maximum degree of the components.
    pub fn degree(&self) -> u32 {
        self.comps.iter().filter_map(QElem::degree).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    pub fn relation_holds(&self, ring: &Ring) -> Result<bool> {
        let [fx, fy, fz, ft] = &self.comps;
        Ok(ring.mul(fx, ft)?.sub(&ring.mul(fy, fz)?) == QElem::one())
    }

    /// `j(fx, fy, fz) = -eps fx`.
    pub fn volume_check(&self, ring: &Ring) -> Result<bool> {
        let [fx, fy, fz, _] = &self.comps;
        let j = ring.pseudo_jacobian(fx, fy, fz)?;
        Ok(j == fx.scale(&Rational::from_int(-i64::from(self.eps))))
    }
}
