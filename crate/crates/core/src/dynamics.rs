//! Degree growth of iterates and the numeric growth checks built on it.

use alloc::vec::Vec;

use crate::complex::{skeleton_distance_upper, Gallery};
use crate::error::{Error, Result};
use crate::poly::{QuadExt, Rational};
use crate::ring::Ring;
use crate::tame::{TameAut, Word};

/// `deg f^1 .. f^n` and `deg f^-1 .. f^-n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    /// Requested length.
    pub n_max: usize,
    pub forward: Vec<u32>,
    pub backward: Vec<u32>,
    /// Set when the degree cap stopped a direction early.
    pub truncated: bool,
}

impl DegreeSequence {
    /// Number of indices available in both directions.
    pub fn len(&self) -> usize {
        self.forward.len().min(self.backward.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The iterates `w, w^2, ..., w^n` as automorphisms, built outward one copy of
/// `w` at a time. Stops early (returning what it has and `true`) when the
/// degree cap is hit.
pub fn iterates(w: &Word, n: usize, ring: &Ring) -> Result<(Vec<TameAut>, bool)> {
    let gens: Vec<_> = w.letters().iter().rev().map(|l| w.generator(l)).collect();
    let mut out = Vec::with_capacity(n);
    let mut h = TameAut::identity();
    for _ in 0..n {
        let step = gens.iter().try_fold(h.clone(), |acc, g| acc.compose_outer(g, ring));
        match step {
            Ok(next) => {
                h = next;
                out.push(h.clone());
            }
            Err(Error::DegreeCapExceeded { .. }) => return Ok((out, true)),
            Err(e) => return Err(e),
        }
    }
    Ok((out, false))
}

fn degrees(w: &Word, n: usize, ring: &Ring) -> Result<(Vec<u32>, bool)> {
    let (it, cut) = iterates(w, n, ring)?;
    Ok((it.iter().map(TameAut::degree).collect(), cut))
}

pub fn degree_sequence(w: &Word, n_max: usize, ring: &Ring) -> Result<DegreeSequence> {
    let (forward, a) = degrees(w, n_max, ring)?;
    let (backward, b) = degrees(&w.inverse(), n_max, ring)?;
    Ok(DegreeSequence { n_max, forward, backward, truncated: a || b })
}

/// Growth regime of a degree sequence, read off a tail window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    Bounded,
    /// Range of the eventual increments over both directions.
    Linear {
        slope_min: u32,
        slope_max: u32,
    },
    /// Range of the consecutive ratios on the tail window over both directions.
    Exponential {
        rate_min: Rational,
        rate_max: Rational,
    },
}

/// Tail window length for `n` entries.
pub fn tail_window(n: usize) -> usize {
    3.max(n / 2)
}

pub fn growth_classify(s: &DegreeSequence) -> Result<GrowthClass> {
    let n = s.len();
    if n < 6 {
        return Err(Error::SequenceTooShort { needed: 6 });
    }
    let w = tail_window(n);
    let tails = [&s.forward[n - w..n], &s.backward[n - w..n]];
    if tails.iter().all(|t| t.windows(2).all(|p| p[0] == p[1])) {
        return Ok(GrowthClass::Bounded);
    }
    let second = |t: &[u32]| t.windows(3).all(|p| i64::from(p[2]) - 2 * i64::from(p[1]) + i64::from(p[0]) == 0);
    if tails.iter().all(|t| second(t) && t[1] >= t[0]) {
        let slopes = tails.map(|t| t[1] - t[0]);
        return Ok(GrowthClass::Linear { slope_min: slopes[0].min(slopes[1]), slope_max: slopes[0].max(slopes[1]) });
    }
    let ratios: Vec<Rational> =
        tails.iter().flat_map(|t| t.windows(2).map(|p| Rational::new(i64::from(p[1]), i64::from(p[0])))).collect();
    Ok(GrowthClass::Exponential {
        rate_min: ratios.iter().min().cloned().expect("nonempty window"),
        rate_max: ratios.iter().max().cloned().expect("nonempty window"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Bound {
    /// `min_n min(deg f^n, deg f^-n) (3/4)^n`.
    pub c_fit: Rational,
    /// Index `n` (1-based) attaining the minimum.
    pub witness: usize,
    pub holds: bool,
}

pub fn check_theorem1_bound(s: &DegreeSequence) -> Result<Theorem1Bound> {
    if !matches!(growth_classify(s)?, GrowthClass::Exponential { .. }) {
        return Err(Error::NotExponential);
    }
    let q = Rational::new(3, 4);
    let (c_fit, witness) = (0..s.len())
        .map(|i| {
            let m = s.forward[i].min(s.backward[i]);
            (&Rational::from_int(i64::from(m)) * &q.pow(i as u32 + 1), i + 1)
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("nonempty");
    let holds = c_fit.signum() > 0;
    Ok(Theorem1Bound { c_fit, witness, holds })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem4Check {
    pub degree: u32,
    /// `log deg f`.
    pub lhs: f64,
    /// Skeleton path length from `[id]` to `[f]` along the gallery of the word.
    pub distance_upper: Option<QuadExt>,
    /// Right side evaluated at `distance_upper`.
    pub rhs_upper: Option<f64>,
    /// `true` certifies the inequality; `false` is inconclusive.
    pub holds: bool,
}

/// `log deg f >= log(4/3) / (2 sqrt 2) * d - 2 log(4/3)`, with the complex
/// distance `d` replaced by an upper bound.
pub fn check_theorem4(w: &Word, ring: &Ring) -> Result<Theorem4Check> {
    let g = Gallery::from_word(w, ring)?;
    let last = g.squares.last().expect("gallery has the base square");
    let degree = last.components.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    if degree <= 1 {
        return Err(Error::AffineInput);
    }
    let distance_upper = skeleton_distance_upper(&g, &g.squares[0].center, &last.center)?;
    let lhs = libm::log(f64::from(degree));
    let l43 = libm::log(4.0 / 3.0);
    let rhs_upper = distance_upper.as_ref().map(|d| l43 / (2.0 * libm::sqrt(2.0)) * d.to_f64() - 2.0 * l43);
    let holds = rhs_upper.is_some_and(|r| lhs >= r);
    Ok(Theorem4Check { degree, lhs, distance_upper, rhs_upper, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::QPoly;
    use crate::tame::{Generator, Letter};
    use crate::QElem;
    use alloc::string::String;
    use alloc::vec;

    fn word(entries: &[(&str, Generator)], letters: &[&str]) -> Word {
        let t = entries.iter().map(|(n, g)| (String::from(*n), g.clone())).collect();
        Word::new(t, letters.iter().map(|s| Letter::parse(s)).collect()).unwrap()
    }

    fn ev(p: &str) -> Generator {
        Generator::ev(Rational::one(), Rational::one(), p.parse().unwrap()).unwrap()
    }

    fn eh(p: &str) -> Generator {
        Generator::eh(Rational::one(), Rational::one(), p.parse().unwrap()).unwrap()
    }

    fn exponential() -> Word {
        word(&[("s", Generator::sigma()), ("e", ev("y^2"))], &["s", "e"])
    }

    fn linear() -> Word {
        word(&[("s", Generator::sigma()), ("h", eh("x*z"))], &["s", "h"])
    }

    /// Composes by plain substitution in four variables, reducing only at the end.
    fn dense_power(w: &Word, n: usize) -> [QPoly; 4] {
        let ring = Ring::default();
        let f = w.evaluate(&ring).unwrap().components().clone().map(QElem::into_nf);
        let mut h = f.clone();
        for _ in 1..n {
            h = core::array::from_fn(|i| f[i].substitute4(&h, u32::MAX).unwrap());
        }
        h.map(|c| ring.reduce(&c).into_nf())
    }

    #[test]
    fn sigma_is_bounded() {
        let ring = Ring::default();
        let s = degree_sequence(&Word::single("s", Generator::sigma()), 8, &ring).unwrap();
        assert_eq!(s.forward, vec![1; 8]);
        assert_eq!(s.backward, vec![1; 8]);
        assert_eq!(growth_classify(&s), Ok(GrowthClass::Bounded));
        assert_eq!(check_theorem1_bound(&s), Err(Error::NotExponential));
    }

    #[test]
    fn linear_fixture() {
        let ring = Ring::default();
        let s = degree_sequence(&linear(), 10, &ring).unwrap();
        assert_eq!(&s.forward[..4], &[3, 7, 11, 15]);
        assert_eq!(s.forward, s.backward);
        assert_eq!(growth_classify(&s), Ok(GrowthClass::Linear { slope_min: 4, slope_max: 4 }));
        assert_eq!(check_theorem1_bound(&s), Err(Error::NotExponential));
        let (it, _) = iterates(&linear(), 3, &ring).unwrap();
        for (n, f) in it.iter().enumerate() {
            assert_eq!(f.components().clone().map(QElem::into_nf), dense_power(&linear(), n + 1));
        }
    }

    #[test]
    fn exponential_fixture() {
        let ring = Ring::default();
        let s = degree_sequence(&exponential(), 6, &ring).unwrap();
        assert_eq!(s.forward, [3, 9, 21, 45, 93, 189]);
        for p in s.forward.windows(2) {
            assert!(3 * p[1] >= 4 * p[0]);
        }
        let (it, _) = iterates(&exponential(), 3, &ring).unwrap();
        for (n, f) in it.iter().enumerate() {
            assert_eq!(f.components().clone().map(QElem::into_nf), dense_power(&exponential(), n + 1));
        }
        let GrowthClass::Exponential { rate_min, rate_max } = growth_classify(&s).unwrap() else {
            panic!("expected exponential growth");
        };
        assert!(rate_min > Rational::new(19, 10) && rate_max < Rational::new(12, 5));
        let b = check_theorem1_bound(&s).unwrap();
        assert!(b.holds);
        assert_eq!((b.c_fit, b.witness), (Rational::new(9, 4), 1));
    }

    #[test]
    fn short_and_truncated() {
        let s = degree_sequence(&exponential(), 5, &Ring::default()).unwrap();
        assert_eq!(growth_classify(&s), Err(Error::SequenceTooShort { needed: 6 }));
        let s = degree_sequence(&exponential(), 8, &Ring::new(50)).unwrap();
        assert!(s.truncated);
        assert_eq!(s.forward, [3, 9, 21, 45]);
    }

    #[test]
    fn degree_distance_examples() {
        let ring = Ring::default();
        let c = check_theorem4(&Word::single("e", ev("x")), &ring).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.distance_upper, Some(QuadExt::from_int(2)));
        assert!(c.holds && c.rhs_upper.unwrap() < 0.0);
        assert_eq!(check_theorem4(&Word::single("s", Generator::sigma()), &ring), Err(Error::AffineInput));
        assert!(check_theorem4(&exponential().power(3), &ring).unwrap().holds);
    }
}
