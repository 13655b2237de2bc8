//! Exact scalars and sparse polynomials in `x, y, z, t`.

mod monomial;
mod parse;
mod quadext;
mod rational;
mod weight;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::HashMap;

use crate::error::{Error, Result};

pub use monomial::{Monomial, Var, MAX_EXPONENT};
pub use quadext::QuadExt;
pub use rational::Rational;
pub use weight::Weight4;

/// Sparse polynomial with rational coefficients.
///
/// Terms are kept sorted by decreasing graded-lex monomial with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct QPoly {
    terms: Vec<(Monomial, Rational)>,
}

fn check_cap(degree: u64, cap: u32) -> Result<()> {
    if degree > u64::from(cap) || degree > u64::from(MAX_EXPONENT) {
        Err(Error::DegreeCapExceeded { degree, cap })
    } else {
        Ok(())
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            QPoly { terms: alloc::vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut map: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in it {
            *map.entry(m).or_default() += &c;
        }
        Self::from_map(map)
    }

    fn from_map(map: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<(Monomial, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        QPoly { terms }
    }

    /// Wraps terms already sorted decreasingly with distinct monomials and
    /// nonzero coefficients.
    fn from_sorted(terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        QPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the degree of zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if *m == Monomial::ONE => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        match self.terms.binary_search_by(|(k, _)| m.cmp(k)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(v)).max()
    }

    /// True when every monomial only involves variables in `vars`.
    pub fn uses_only(&self, vars: &[Var]) -> bool {
        self.terms.iter().all(|(m, _)| Var::ALL.iter().all(|v| vars.contains(v) || m.exp(*v) == 0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly::from_sorted(self.terms.iter().map(|(m, k)| (*m, k * c)).collect())
    }

    /// Multiplies by a monomial, which preserves the term order.
    pub fn mul_monomial(&self, mono: Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly::from_sorted(self.terms.iter().map(|(m, k)| (m.mul(mono), k * c)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly::from_sorted(self.terms.iter().map(|(m, k)| (*m, -k)).collect())
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Less => {
                    out.push((b[j].0, sign(&b[j].1)));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (*m, sign(c))));
        QPoly::from_sorted(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    /// Product, refusing to form anything of degree above `cap`.
    pub fn mul(&self, other: &Self, cap: u32) -> Result<Self> {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Ok(Self::zero());
        };
        check_cap(u64::from(da) + u64::from(db), cap)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return Ok(large.mul_monomial(*m, c));
        }
        let mut map: HashMap<u64, Rational> = HashMap::with_capacity(large.len() * 2);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                map.entry(m1.0 + m2.0).or_default().add_product(c1, c2);
            }
        }
        let mut terms: Vec<(Monomial, Rational)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (Monomial(m), c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Ok(QPoly::from_sorted(terms))
    }

    pub fn pow(&self, e: u32, cap: u32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        if let Some(d) = self.degree() {
            check_cap(u64::from(d) * u64::from(e), cap)?;
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = e;
        loop {
            if k & 1 == 1 {
                result = result.mul(&base, cap)?;
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base, cap)?;
        }
        Ok(result)
    }

    /// The algebra morphism sending `(x, y, z, t)` to `images`.
    pub fn substitute4(&self, images: &[QPoly; 4], cap: u32) -> Result<Self> {
        substitute_with(self, images, cap, |a, b| a.mul(b, cap), |p| p)
    }

    pub fn partial(&self, v: Var) -> Self {
        let unit = Monomial::var(v);
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| (Monomial(m.0 - unit.0), c * &Rational::from_int(i64::from(e))))
        });
        QPoly::from_terms(terms)
    }

    /// Re-expresses `self` in the centred coordinates `v - p_v`, i.e.
    /// substitutes `v -> v + p_v`.
    pub fn taylor_shift(&self, p: &[Rational; 4]) -> Self {
        let images = Var::ALL.map(|v| QPoly::var(v).add(&QPoly::constant(p[v.index()].clone())));
        self.substitute4(&images, u32::MAX).expect("shift preserves degree")
    }

    /// Value of the monomial valuation `min <I, alpha>`; `None` for zero.
    pub fn weighted_value(&self, w: &Weight4) -> Option<QuadExt> {
        self.terms.iter().map(|(m, _)| w.value(*m)).min()
    }

    /// Terms attaining the minimal weighted value, with that value.
    pub fn weighted_leading_part(&self, w: &Weight4) -> Result<(QPoly, QuadExt)> {
        let vals: Vec<QuadExt> = self.terms.iter().map(|(m, _)| w.value(*m)).collect();
        let min = vals.iter().min().cloned().ok_or(Error::ZeroPolynomial)?;
        let terms = self.terms.iter().zip(&vals).filter(|(_, v)| **v == min).map(|(t, _)| t.clone()).collect();
        Ok((QPoly::from_sorted(terms), min))
    }

    /// Exact quotient by `d` when `d` divides `self`.
    ///
    /// Uses division by a single polynomial with respect to the graded order;
    /// the remainder vanishes exactly when `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.leading_term()?.clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading_term().cloned() {
            let qm = lm.div(m)?;
            let qc = &c / &lc;
            rem = rem.sub(&d.mul_monomial(qm, &qc));
            quot.push((qm, qc));
        }
        Some(QPoly::from_sorted(quot))
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, p: &[Rational; 4]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                t = &t * &p[v.index()].pow(m.exp(v));
            }
            acc += &t;
        }
        acc
    }
}

/// Generic substitution driven by a multiplication and a post-processing map
/// (identity for plain polynomials, normal form in the quadric ring).
pub(crate) fn substitute_with<M, N>(p: &QPoly, images: &[QPoly; 4], cap: u32, mul: M, post: N) -> Result<QPoly>
where
    M: Fn(&QPoly, &QPoly) -> Result<QPoly>,
    N: Fn(QPoly) -> QPoly,
{
    let img_deg = images.clone().map(|i| i.degree().unwrap_or(0));
    for (m, _) in &p.terms {
        let d: u64 = Var::ALL.iter().map(|v| u64::from(m.exp(*v)) * u64::from(img_deg[v.index()])).sum();
        check_cap(d, cap)?;
    }
    let mut powers: [Vec<QPoly>; 4] = Default::default();
    for v in Var::ALL {
        let need = p.degree_in(v).unwrap_or(0);
        let mut table = alloc::vec![QPoly::one()];
        for k in 1..=need {
            let next =
                if k == 1 { images[v.index()].clone() } else { post(mul(&table[k as usize - 1], &images[v.index()])?) };
            table.push(next);
        }
        powers[v.index()] = table;
    }
    let mut acc = QPoly::zero();
    for (m, c) in &p.terms {
        let mut term = QPoly::constant(c.clone());
        for v in Var::ALL {
            let e = m.exp(v) as usize;
            if e > 0 {
                term = post(mul(&term, &powers[v.index()][e])?);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if *m == Monomial::ONE {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl FromStr for QPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse(s)
    }
}

/// 4x4 jacobian determinant of `(r1, r2, r3, r4)` with respect to `(x, y, z, t)`.
pub fn jac4(rows: [&QPoly; 4], cap: u32) -> Result<QPoly> {
    let d: [[QPoly; 4]; 4] = rows.map(|r| Var::ALL.map(|v| r.partial(v)));
    det4(&d, cap)
}

/// Determinant by expansion along the first row, via 2x2 minors of the last two rows.
pub(crate) fn det4(d: &[[QPoly; 4]; 4], cap: u32) -> Result<QPoly> {
    let mut minor2: [[QPoly; 4]; 4] = Default::default();
    for a in 0..4 {
        for b in (a + 1)..4 {
            minor2[a][b] = d[2][a].mul(&d[3][b], cap)?.sub(&d[2][b].mul(&d[3][a], cap)?);
        }
    }
    let mut det = QPoly::zero();
    for skip in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        // 3x3 minor of rows 1..3 on `cols`, expanded along row 1.
        let mut m3 = QPoly::zero();
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let t = d[1][c].mul(&minor2[rest[0]][rest[1]], cap)?;
            m3 = if k % 2 == 0 { m3.add(&t) } else { m3.sub(&t) };
        }
        let t = d[0][skip].mul(&m3, cap)?;
        det = if skip % 2 == 0 { det.add(&t) } else { det.sub(&t) };
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    const CAP: u32 = 5000;

    pub(crate) fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let q1 = p("x*t - y*z - 1");
        assert_eq!(q1.len(), 3);
        assert_eq!(q1.constant_term(), Rational::from_int(-1));
        assert_eq!(p("(x+1)^2"), p("x^2 + 2*x + 1"));
        let t = p("3/2*x^2*y");
        assert_eq!(t.terms(), &[(Monomial::new([2, 1, 0, 0]), Rational::new(3, 2))]);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("x^2*y").partial(Var::Y), p("x^2"));
        assert_eq!(p("x+y").pow(0, CAP).unwrap(), QPoly::one());
        let images = [p("x"), p("y"), p("z + x^2"), p("t + x*y")];
        let r = p("x*t - y*z - 1").substitute4(&images, CAP).unwrap();
        assert_eq!(r, p("x*t - y*z - 1"));
    }

    #[test]
    fn jacobian_examples() {
        let [x, y, z, t] = Var::ALL.map(QPoly::var);
        let q = p("x*t - y*z");
        assert_eq!(jac4([&x, &y, &z, &t], CAP).unwrap(), QPoly::one());
        assert_eq!(jac4([&q, &x, &y, &z], CAP).unwrap(), p("-x"));
        assert!(jac4([&q, &x, &x, &y], CAP).unwrap().is_zero());
    }

    #[test]
    fn leading_part_examples() {
        let all = Weight4::new(["-1", "-1", "-1", "-1"].map(|s| s.parse().unwrap())).unwrap();
        let (lp, v) = p("x + x^2").weighted_leading_part(&all).unwrap();
        assert_eq!((lp, v), (p("x^2"), QuadExt::from_int(-2)));
        let w44 = Weight4::new(["-1/2", "-3/5", "-9/10", "-1"].map(|s| s.parse().unwrap())).unwrap();
        let (lp, v) = p("x*t - y*z - 1").weighted_leading_part(&w44).unwrap();
        assert_eq!(lp, p("x*t - y*z"));
        assert_eq!(v, "-3/2".parse().unwrap());
        let (lp, v) = p("x^2 + t").weighted_leading_part(&w44).unwrap();
        assert_eq!((lp, v), (p("x^2 + t"), QuadExt::from_int(-1)));
        assert_eq!(QPoly::zero().weighted_leading_part(&w44), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn shift_examples() {
        let r = |a| Rational::from_int(a);
        assert_eq!(p("x").taylor_shift(&[r(1), r(0), r(0), r(0)]), p("x + 1"));
        let q1 = p("x*t - y*z - 1");
        assert_eq!(q1.taylor_shift(&[r(0), r(0), r(0), r(0)]), q1);
        assert_eq!(q1.taylor_shift(&[r(1), r(2), r(3), r(4)]), p("x*t - y*z + 4*x + t - 3*y - 2*z - 3"));
    }

    #[test]
    fn printing() {
        assert_eq!(format!("{}", p("t - 3 + x*t - y*z + 4*x")), "x*t - y*z + 4*x + t - 3");
        assert_eq!(format!("{}", p("-3/2*x^2*y + 1")), "-3/2*x^2*y + 1");
        assert_eq!(format!("{}", QPoly::zero()), "0");
    }

    #[test]
    fn cap_enforced() {
        let x = p("x^3");
        assert!(matches!(x.mul(&x, 5), Err(Error::DegreeCapExceeded { degree: 6, cap: 5 })));
        assert!(x.pow(2, 6).is_ok());
        assert!(p("y^2").substitute4(&[p("x"), p("x^3"), p("z"), p("t")], 5).is_err());
    }

    #[test]
    fn exact_division() {
        let q = p("x*t - y*z");
        let prod = q.mul(&p("x^2 + y*t - 3"), CAP).unwrap();
        assert_eq!(prod.div_exact(&q), Some(p("x^2 + y*t - 3")));
        assert_eq!(p("y*z").div_exact(&q), None);
    }
}
