//! Valuations of the family built from shifted monomial valuations: evaluation
//! through sup-achieving representatives, parachutes, resonance, and the
//! inequalities relating `R(f1, f2)` to its monomial prediction.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{Monomial, QPoly, QuadExt, Rational, Var, Weight4};
use crate::ring::{quadratic_form, QElem, Ring};

/// A valuation value: finite in `Q(sqrt 2)`, or `+infinity` for zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(QuadExt),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&QuadExt> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinity => None,
        }
    }

    pub fn add(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }

    /// `self - o`; `o` must be finite.
    pub fn sub(&self, o: &QuadExt) -> Value {
        match self {
            Value::Finite(a) => Value::Finite(a - o),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl core::fmt::Display for Value {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

/// Base point `p` and weights `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    p: [Rational; 4],
    w: Weight4,
}

/// Rewrites `xt -> yz` until no monomial is divisible by `xt`; the result
/// vanishes exactly when the input is a multiple of `xt - yz`.
fn reduce_mod_form(l: &QPoly) -> QPoly {
    let terms = l.terms().iter().map(|(m, c)| {
        let [a, b, cz, d] = m.exponents();
        let k = a.min(d);
        (Monomial::new([a - k, b + k, cz + k, d - k]), c.clone())
    });
    QPoly::from_terms(terms)
}

impl Valuation {
    pub fn new(p: [Rational; 4], w: Weight4) -> Self {
        Valuation { p, w }
    }

    /// Validates the weights and builds the valuation.
    pub fn from_parts(p: [Rational; 4], alpha: [QuadExt; 4]) -> Result<Self> {
        Ok(Valuation { p, w: Weight4::new(alpha)? })
    }

    /// Minus the degree.
    pub fn minus_degree() -> Self {
        Valuation { p: Default::default(), w: Weight4::minus_degree() }
    }

    pub fn at_origin(w: Weight4) -> Self {
        Valuation { p: Default::default(), w }
    }

    pub fn weights(&self) -> &Weight4 {
        &self.w
    }

    pub fn point(&self) -> &[Rational; 4] {
        &self.p
    }

    pub fn is_at_origin(&self) -> bool {
        self.p.iter().all(Rational::is_zero)
    }

    /// Shifted monomial value of a polynomial (not a class).
    pub fn monomial_value(&self, r: &QPoly) -> Value {
        match r.taylor_shift(&self.p).weighted_value(&self.w) {
            Some(v) => Value::Finite(v),
            None => Value::Infinity,
        }
    }

    /// A representative of `r`'s class, in centred coordinates, on which the
    /// shifted monomial valuation attains the supremum; with its value.
    ///
    /// While the weighted leading part is a multiple `q T` of the quadratic
    /// form, subtract `(q~ - 1) T` where `q~ - 1` is the shifted relation.
    pub fn sup_representative(&self, r: &QPoly, ring: &Ring) -> Result<(QPoly, Value)> {
        let q = quadratic_form();
        let rel = q.sub(&QPoly::one()).taylor_shift(&self.p);
        let mut s = r.taylor_shift(&self.p);
        loop {
            if s.is_zero() {
                return Ok((s, Value::Infinity));
            }
            let (lead, v) = s.weighted_leading_part(&self.w)?;
            match lead.div_exact(&q) {
                Some(t) => s = s.sub(&rel.mul(&t, ring.cap())?),
                None => return Ok((s, Value::Finite(v))),
            }
        }
    }

    /// `nu(f)`. At the origin the normal form already attains the supremum.
    pub fn eval(&self, f: &QElem, ring: &Ring) -> Result<Value> {
        if self.is_at_origin() {
            return Ok(match f.nf().weighted_value(&self.w) {
                Some(v) => Value::Finite(v),
                None => Value::Infinity,
            });
        }
        Ok(self.sup_representative(f.nf(), ring)?.1)
    }

    /// The general reduction loop, even at the origin.
    pub fn eval_by_reduction(&self, r: &QPoly, ring: &Ring) -> Result<Value> {
        Ok(self.sup_representative(r, ring)?.1)
    }

    fn eval_finite(&self, f: &QElem, ring: &Ring) -> Result<QuadExt> {
        match self.eval(f, ring)? {
            Value::Finite(v) => Ok(v),
            Value::Infinity => Err(Error::ConstantArgument),
        }
    }

    /// `nabla(f1, f2) = min_u nu(j(u, f1, f2)) - nu(f1) - nu(f2)`.
    pub fn parachute(&self, f1: &QElem, f2: &QElem, ring: &Ring) -> Result<QuadExt> {
        if ring.independence_witness(f1, f2)?.is_none() {
            return Err(Error::DependentPair);
        }
        let v1 = self.eval_finite(f1, ring)?;
        let v2 = self.eval_finite(f2, ring)?;
        let mut best = Value::Infinity;
        for u in Var::ALL {
            let j = ring.pseudo_jacobian(&QElem::var(u), f1, f2)?;
            best = best.min(self.eval(&j, ring)?);
        }
        match best {
            Value::Finite(m) => Ok(&(&m - &v1) - &v2),
            Value::Infinity => Err(Error::DependentPair),
        }
    }

    /// Classifies the pair `(f1, f2)` by the ratio of values and the
    /// existence of a key scalar.
    pub fn resonance(&self, f1: &QElem, f2: &QElem, ring: &Ring) -> Result<ResonanceClass> {
        if f1.is_constant() || f2.is_constant() {
            return Err(Error::ConstantArgument);
        }
        let v1 = self.eval_finite(f1, ring)?;
        let v2 = self.eval_finite(f2, ring)?;
        let ratio = &v1 / &v2;
        if !ratio.is_rational() {
            return Ok(ResonanceClass::QIndependent);
        }
        // s1 v1 = s2 v2 with v1 / v2 = s2 / s1 in lowest terms.
        let to_u32 = |b: num_bigint::BigInt| {
            u32::try_from(b).map_err(|_| Error::DegreeCapExceeded { degree: u64::MAX, cap: ring.cap() })
        };
        let s2 = to_u32(ratio.a.numer())?;
        let s1 = to_u32(ratio.a.denom())?;
        let lambda = self.key_scalar(f1, s1, f2, s2, ring)?;
        let key = if s1 >= 2 && s2 >= 2 {
            match lambda {
                Some(l) => Key::Proper { lambda: l },
                None => Key::None,
            }
        } else {
            match lambda {
                Some(l) if s1 == 1 => Key::Critical { k: s2, lambda: l, orientation: Orientation::FirstIsMultiple },
                Some(l) => Key::Critical {
                    k: s1,
                    lambda: l.recip().expect("key scalar is nonzero"),
                    orientation: Orientation::SecondIsMultiple,
                },
                None => Key::None,
            }
        };
        Ok(ResonanceClass::Dependent { s1, s2, key })
    }

    /// The unique `lambda` with `nu(f1^s1 - lambda f2^s2) > nu(f1^s1)`, if any.
    ///
    /// The candidate comes from matching leading coefficients of the
    /// sup-achieving representatives (reduced modulo the quadratic form);
    /// it is accepted only after exact evaluation.
    pub fn key_scalar(&self, f1: &QElem, s1: u32, f2: &QElem, s2: u32, ring: &Ring) -> Result<Option<Rational>> {
        let g = ring.pow(f1, s1)?;
        let h = ring.pow(f2, s2)?;
        let Some(lambda) = self.candidate_scalar(&g, &h, ring)? else {
            return Ok(None);
        };
        Ok(self.key_accepts(&g, &h, &lambda, ring)?.then_some(lambda))
    }

    fn candidate_scalar(&self, g: &QElem, h: &QElem, ring: &Ring) -> Result<Option<Rational>> {
        let (rg, _) = self.sup_representative(g.nf(), ring)?;
        let (rh, _) = self.sup_representative(h.nf(), ring)?;
        let lg = reduce_mod_form(&rg.weighted_leading_part(&self.w)?.0);
        let lh = reduce_mod_form(&rh.weighted_leading_part(&self.w)?.0);
        let Some((m, cg)) = lg.leading_term() else {
            return Ok(None);
        };
        let ch = lh.coeff(*m);
        if ch.is_zero() {
            return Ok(None);
        }
        Ok(Some(cg / &ch))
    }

    /// Acceptance test `nu(g - lambda h) > nu(g)`.
    pub fn key_accepts(&self, g: &QElem, h: &QElem, lambda: &Rational, ring: &Ring) -> Result<bool> {
        let diff = g.sub(&h.scale(lambda));
        Ok(self.eval(&diff, ring)? > self.eval(g, ring)?)
    }

    /// `nu0(R)`: the monomial value of `R(x, y)` with weights `(nu(f1), nu(f2))`.
    pub fn nu0(&self, r: &QPoly, f1: &QElem, f2: &QElem, ring: &Ring) -> Result<Value> {
        let v1 = self.eval_finite(f1, ring)?;
        let v2 = self.eval_finite(f2, ring)?;
        Ok(two_var_value(r, &v1, &v2))
    }

    /// Report comparing `nu(R(f1, f2))` with `nu0(R)`.
    pub fn theorem_417_report(&self, f1: &QElem, f2: &QElem, r: &QPoly, ring: &Ring) -> Result<Report417> {
        if !r.uses_only(&[Var::X, Var::Y]) {
            return Err(Error::VariableViolation { allowed: "{x, y}" });
        }
        if ring.independence_witness(f1, f2)?.is_none() {
            return Err(Error::DependentPair);
        }
        let class = self.resonance(f1, f2, ring)?;
        let lhs = self.eval(&eval_two_var(r, f1, f2, ring)?, ring)?;
        let nu0 = self.nu0(r, f1, f2, ring)?;
        let mut holds = lhs >= nu0;
        let mut bound = None;
        match &class {
            ResonanceClass::QIndependent => holds &= lhs == nu0,
            ResonanceClass::Dependent { key: Key::Critical { .. }, .. } if lhs > nu0 => {
                return Err(Error::CriticallyResonant);
            }
            ResonanceClass::Dependent { s1, s2, .. } if *s1 >= 2 && *s2 >= 2 && lhs > nu0 => {
                let b = resonant_bound(*s1, *s2, &self.eval_finite(f1, ring)?, &self.eval_finite(f2, ring)?);
                holds &= lhs < Value::Finite(b.clone());
                bound = Some(b);
            }
            _ => {}
        }
        Ok(Report417 { lhs, nu0, class, bound, bound_holds: holds })
    }

    /// Derivative inequality `nu(R(f1,f2)) < deg_y(R) nu(f2) + n nabla(f1,f2)`,
    /// under the hypothesis that `d^n R / dy^n` evaluated at `(f1, f2)`
    /// attains its monomial value.
    pub fn lemma_412_check(&self, f1: &QElem, f2: &QElem, r: &QPoly, n: u32, ring: &Ring) -> Result<bool> {
        if n == 0 || !r.uses_only(&[Var::X, Var::Y]) {
            return Err(Error::HypothesisFails);
        }
        let mut d = r.clone();
        for _ in 0..n {
            d = d.partial(Var::Y);
        }
        if d.is_zero() {
            return Err(Error::HypothesisFails);
        }
        if self.eval(&eval_two_var(&d, f1, f2, ring)?, ring)? != self.nu0(&d, f1, f2, ring)? {
            return Err(Error::HypothesisFails);
        }
        let nabla = self.parachute(f1, f2, ring)?;
        let v2 = self.eval_finite(f2, ring)?;
        let deg_y = Rational::from_int(i64::from(r.degree_in(Var::Y).unwrap_or(0)));
        let rhs = &v2.scale(&deg_y) + &nabla.scale(&Rational::from_int(i64::from(n)));
        let lhs = self.eval(&eval_two_var(r, f1, f2, ring)?, ring)?;
        Ok(lhs < Value::Finite(rhs))
    }
}

/// `min{(s1 - 1 - s1/s2) nu(f1), (s2 - 1 - s2/s1) nu(f2)}`.
pub fn resonant_bound(s1: u32, s2: u32, v1: &QuadExt, v2: &QuadExt) -> QuadExt {
    let (a, b) = (Rational::from_int(i64::from(s1)), Rational::from_int(i64::from(s2)));
    let one = Rational::one();
    let c1 = &(&a - &one) - &(&a / &b);
    let c2 = &(&b - &one) - &(&b / &a);
    v1.scale(&c1).min(v2.scale(&c2))
}

/// `R(f1, f2)` for `R` in `x, y`.
pub fn eval_two_var(r: &QPoly, f1: &QElem, f2: &QElem, ring: &Ring) -> Result<QElem> {
    ring.substitute(r, &[f1.clone(), f2.clone(), QElem::zero(), QElem::zero()])
}

/// Monomial value of `R(x, y)` with weights `(w1, w2)` on `x, y`.
pub fn two_var_value(r: &QPoly, w1: &QuadExt, w2: &QuadExt) -> Value {
    r.terms()
        .iter()
        .map(|(m, _)| {
            let i = Rational::from_int(i64::from(m.exp(Var::X)));
            let j = Rational::from_int(i64::from(m.exp(Var::Y)));
            Value::Finite(&w1.scale(&i) + &w2.scale(&j))
        })
        .min()
        .unwrap_or(Value::Infinity)
}

/// Terms of `R(x, y)` attaining [`two_var_value`].
pub fn two_var_leading_part(r: &QPoly, w1: &QuadExt, w2: &QuadExt) -> QPoly {
    let v = two_var_value(r, w1, w2);
    let terms: Vec<(Monomial, Rational)> = r
        .terms()
        .iter()
        .filter(|(m, _)| two_var_value(&QPoly::monomial(*m, Rational::one()), w1, w2) == v)
        .cloned()
        .collect();
    QPoly::from_terms(terms)
}

/// Largest `m` with `h^m | r` (for nonzero `r` and nonconstant `h`).
pub fn divisibility_order(r: &QPoly, h: &QPoly) -> u32 {
    let mut m = 0;
    let mut cur = r.clone();
    while let Some(q) = cur.div_exact(h) {
        if cur.is_zero() {
            break;
        }
        cur = q;
        m += 1;
    }
    m
}

/// Which argument carries the `k`-fold value in a critical resonance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `nu(f1) = k nu(f2)`; the key is `f1 - lambda f2^k`.
    FirstIsMultiple,
    /// `nu(f2) = k nu(f1)`; the key is `f2 - lambda f1^k`.
    SecondIsMultiple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Key {
    None,
    /// `f1^s1 - lambda f2^s2` has raised value.
    Proper {
        lambda: Rational,
    },
    Critical {
        k: u32,
        lambda: Rational,
        orientation: Orientation,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResonanceClass {
    QIndependent,
    Dependent { s1: u32, s2: u32, key: Key },
}

impl ResonanceClass {
    /// Both exponents at least 2 (whether or not a key exists).
    pub fn is_properly_resonant(&self) -> bool {
        matches!(self, ResonanceClass::Dependent { s1, s2, .. } if *s1 >= 2 && *s2 >= 2)
    }

    pub fn is_critically_resonant(&self) -> bool {
        matches!(self, ResonanceClass::Dependent { key: Key::Critical { .. }, .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report417 {
    pub lhs: Value,
    pub nu0: Value,
    pub class: ResonanceClass,
    /// The resonant upper bound, when it was asserted.
    pub bound: Option<QuadExt>,
    pub bound_holds: bool,
}
