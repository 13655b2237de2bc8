use super::{Monomial, QuadExt, Rational, Var};
use crate::error::{Error, Result};

/// Negative weights `(a0, a1, a2, a3)` on `(x, y, z, t)` with `a0 + a3 = a1 + a2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight4 {
    alpha: [QuadExt; 4],
}

impl Weight4 {
    pub fn new(alpha: [QuadExt; 4]) -> Result<Self> {
        if alpha.iter().any(|a| !a.is_negative()) {
            return Err(Error::WeightNotNegative);
        }
        if &alpha[0] + &alpha[3] != &alpha[1] + &alpha[2] {
            return Err(Error::BalanceViolated);
        }
        Ok(Weight4 { alpha })
    }

    /// All weights equal to `-1`: minus the total degree.
    pub fn minus_degree() -> Self {
        Weight4 { alpha: core::array::from_fn(|_| QuadExt::from_int(-1)) }
    }

    pub fn alpha(&self) -> &[QuadExt; 4] {
        &self.alpha
    }

    pub fn get(&self, v: Var) -> &QuadExt {
        &self.alpha[v.index()]
    }

    /// `<I, alpha>` for the exponent vector of `m`.
    pub fn value(&self, m: Monomial) -> QuadExt {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for v in Var::ALL {
            let e = m.exp(v);
            if e != 0 {
                let k = Rational::from_int(i64::from(e));
                a.add_product(&k, &self.alpha[v.index()].a);
                b.add_product(&k, &self.alpha[v.index()].b);
            }
        }
        QuadExt::new(a, b)
    }
}
