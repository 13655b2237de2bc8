//! Random walks on the tame group: `g_n = s_n o ... o s_1` with the `s_k`
//! drawn independently from a finitely supported measure.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;
use quadtame::{Error as CoreError, Generator, Letter, Rational, Ring, TameAut, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::schema::{build_table, WalkFile};

pub const DEFAULT_WALK_CAP: u32 = 1000;

/// Total number of cached terms kept across all trials.
const CACHE_TERM_BUDGET: usize = 4_000_000;

/// Finitely supported probability measure on words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    table: BTreeMap<String, Generator>,
    support: BTreeMap<Vec<Letter>, Rational>,
}

fn bad_probabilities(msg: impl Into<String>) -> CliError {
    CliError::input("BadProbabilities", msg)
}

impl Measure {
    pub fn new(table: BTreeMap<String, Generator>, support: Vec<(Vec<Letter>, Rational)>) -> Result<Self, CliError> {
        if support.is_empty() {
            return Err(bad_probabilities("empty support"));
        }
        let probe = Word::new(table.clone(), Vec::new())?;
        let mut merged: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
        for (w, p) in support {
            if p.signum() <= 0 {
                return Err(bad_probabilities(format!("probability {p} is not positive")));
            }
            probe.with_letters(w.clone())?;
            *merged.entry(w).or_default() += &p;
        }
        let total = merged.values().fold(Rational::zero(), |acc, p| &acc + p);
        if !total.is_one() {
            return Err(bad_probabilities(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Measure { table, support: merged })
    }

    pub fn from_file(f: &WalkFile) -> Result<Self, CliError> {
        let table = build_table(&f.generators)?;
        let support = f
            .support
            .iter()
            .map(|s| Ok((s.word.iter().map(|l| Letter::parse(l)).collect(), s.prob.trim().parse::<Rational>()?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let m = Measure::new(table, support)?;
        Ok(if f.symmetrize { m.symmetrized() } else { m })
    }

    pub fn table(&self) -> &BTreeMap<String, Generator> {
        &self.table
    }

    pub fn support(&self) -> &BTreeMap<Vec<Letter>, Rational> {
        &self.support
    }

    fn mapped(&self, f: impl Fn(&[Letter]) -> Vec<Letter>, table: BTreeMap<String, Generator>) -> Measure {
        let mut support: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
        for (w, p) in &self.support {
            *support.entry(f(w)).or_default() += p;
        }
        Measure { table, support }
    }

    /// Push-forward under `g -> g^-1`.
    pub fn inverse(&self) -> Measure {
        self.mapped(invert, self.table.clone())
    }

    /// `(mu + inverse(mu)) / 2`.
    pub fn symmetrized(&self) -> Measure {
        let half = Rational::new(1, 2);
        let mut support: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
        for (w, p) in self.support.iter().chain(self.inverse().support.iter()) {
            *support.entry(w.clone()).or_default() += &(p * &half);
        }
        Measure { table: self.table.clone(), support }
    }

    pub fn is_symmetric(&self) -> bool {
        self.inverse().support == self.support
    }

    /// Push-forward under `g -> c o g o c^-1`.
    pub fn conjugated(&self, c: &Word) -> Measure {
        let mut table = self.table.clone();
        table.extend(c.table().iter().map(|(k, v)| (k.clone(), v.clone())));
        let cinv = invert(c.letters());
        self.mapped(|w| [c.letters(), w, &cinv].concat(), table)
    }

    /// Cumulative integer weights over the common denominator.
    fn sampler(&self) -> Result<Sampler, CliError> {
        let lcm = self
            .support
            .values()
            .fold(num_bigint::BigInt::from(1), |acc, p| num_integer::Integer::lcm(&acc, &p.denom()));
        let total = lcm.to_u64().ok_or_else(|| bad_probabilities("common denominator exceeds 64 bits"))?;
        let mut acc = 0u64;
        let mut cuts = Vec::new();
        for (w, p) in &self.support {
            let n = (p.numer() * &lcm / p.denom()).to_u64().expect("bounded by the common denominator");
            acc += n;
            cuts.push((acc, w.clone()));
        }
        Ok(Sampler { total, cuts })
    }
}

struct Sampler {
    total: u64,
    cuts: Vec<(u64, Vec<Letter>)>,
}

impl Sampler {
    fn draw<R: Rng>(&self, rng: &mut R) -> &[Letter] {
        let u = rng.random_range(0..self.total);
        let i = self.cuts.partition_point(|(c, _)| *c <= u);
        &self.cuts[i].1
    }
}

pub fn invert(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(Letter::inv).collect()
}

/// Evaluates words with a shared cache keyed by freely reduced letters.
pub struct Evaluator {
    gens: HashMap<Letter, Generator>,
    involutions: HashMap<String, bool>,
    ring: Ring,
    cache: Mutex<(HashMap<Vec<Letter>, Arc<TameAut>>, usize)>,
}

fn terms(h: &TameAut) -> usize {
    h.components().iter().map(|c| c.nf().len()).sum()
}

impl Evaluator {
    pub fn new(table: &BTreeMap<String, Generator>, ring: Ring) -> Self {
        let mut gens = HashMap::new();
        let mut involutions = HashMap::new();
        for (n, g) in table {
            let inv = g.inverse();
            involutions.insert(n.clone(), inv == *g);
            gens.insert(Letter::parse(n), g.clone());
            gens.insert(Letter::parse(n).inv(), inv);
        }
        let mut cache = HashMap::new();
        cache.insert(Vec::new(), Arc::new(TameAut::identity()));
        Evaluator { gens, involutions, ring, cache: Mutex::new((cache, 0)) }
    }

    /// Free reduction, with involutive generators treated as their own inverses.
    pub fn reduce(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for l in w {
            let l = if l.inverse && self.involutions.get(&l.name) == Some(&true) { l.inv() } else { l.clone() };
            if out.last().is_some_and(|last| *last == l.inv() || (*last == l && self.involutions[&l.name])) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    /// `c o f o c^-1` for `f` spelled by the reduced word `w`, computed by a
    /// single substitution into the sparse components of `f`.
    pub fn eval_conjugated(&self, w: &[Letter], c: &[Letter]) -> Result<Arc<TameAut>, CoreError> {
        let key = self.reduce(&[c, w, &invert(c)].concat());
        if let Some(h) = self.cache.lock().expect("cache lock").0.get(&key) {
            return Ok(h.clone());
        }
        let f = self.eval(w)?;
        let cinv = self.eval(&self.reduce(&invert(c)))?;
        let mut h = f.compose(&cinv, &self.ring)?;
        for l in c.iter().rev() {
            h = h.compose_outer(&self.gens[l], &self.ring)?;
        }
        let h = Arc::new(h);
        let mut guard = self.cache.lock().expect("cache lock");
        let size = terms(&h);
        if guard.1 + size <= CACHE_TERM_BUDGET {
            guard.1 += size;
            guard.0.insert(key, h.clone());
        }
        Ok(h)
    }

    /// The automorphism of a reduced word.
    pub fn eval(&self, w: &[Letter]) -> Result<Arc<TameAut>, CoreError> {
        let (start, mut h) = {
            let guard = self.cache.lock().expect("cache lock");
            (0..=w.len()).find_map(|k| guard.0.get(&w[k..]).map(|h| (k, h.clone()))).expect("identity is cached")
        };
        for i in (0..start).rev() {
            h = Arc::new(h.compose_outer(&self.gens[&w[i]], &self.ring)?);
            let mut guard = self.cache.lock().expect("cache lock");
            let size = terms(&h);
            if guard.1 + size <= CACHE_TERM_BUDGET {
                guard.1 += size;
                guard.0.insert(w[i..].to_vec(), h.clone());
            }
        }
        Ok(h)
    }
}

/// Seed of trial `i`: a splitmix64 finalisation of the master seed and index.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    /// `log deg g_k` for `k = 1..=steps`.
    pub forward: Vec<f64>,
    /// `log deg g_k^-1`.
    pub backward: Vec<f64>,
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub measure: Measure,
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    pub degree_cap: u32,
    /// When set, each trial reports `c o g_n o c^-1` instead of `g_n`: a walk
    /// for the conjugated measure, sharing the draws of the base walk.
    pub conjugator: Option<Vec<Letter>>,
}

impl WalkConfig {
    pub fn from_file(f: &WalkFile) -> Result<Self, CliError> {
        Ok(WalkConfig {
            measure: Measure::from_file(f)?,
            steps: f.steps,
            trials: f.trials,
            seed: f.seed,
            degree_cap: f.degree_cap,
            conjugator: None,
        })
    }

    pub fn with_measure(&self, measure: Measure) -> Self {
        WalkConfig { measure, conjugator: None, ..self.clone() }
    }

    /// The same draws, pushed forward by conjugation with `c`.
    pub fn conjugated_by(&self, c: &Word) -> Self {
        let mut measure = self.measure.clone();
        measure.table.extend(c.table().iter().map(|(k, v)| (k.clone(), v.clone())));
        WalkConfig { measure, conjugator: Some(c.letters().to_vec()), ..self.clone() }
    }
}

fn run_trial(cfg: &WalkConfig, sampler: &Sampler, ev: &Evaluator, trial: u64) -> Result<Trial, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, trial));
    let mut word: Vec<Letter> = Vec::new();
    let mut out =
        Trial { forward: Vec::with_capacity(cfg.steps), backward: Vec::with_capacity(cfg.steps), truncated: false };
    for _ in 0..cfg.steps {
        let s = sampler.draw(&mut rng);
        word = ev.reduce(&[s, &word[..]].concat());
        let inv = ev.reduce(&invert(&word));
        let pair = match &cfg.conjugator {
            None => ev.eval(&word).and_then(|f| Ok((f, ev.eval(&inv)?))),
            Some(c) => ev.eval_conjugated(&word, c).and_then(|f| Ok((f, ev.eval_conjugated(&inv, c)?))),
        };
        match pair {
            Ok((f, g)) => {
                out.forward.push(f64::from(f.degree()).ln());
                out.backward.push(f64::from(g.degree()).ln());
            }
            Err(CoreError::DegreeCapExceeded { .. }) => {
                out.truncated = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Moments of a sample, summed in sorted order so that the result does not
/// depend on the order of the trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
}

pub fn moments(values: &[f64]) -> Moments {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let central = |k: i32| {
        let mut d: Vec<f64> = v.iter().map(|x| (x - mean).powi(k)).collect();
        d.sort_by(f64::total_cmp);
        d.iter().sum::<f64>() / n
    };
    let (m2, m3, m4) = (central(2), central(3), central(4));
    let defined = m2 > 0.0;
    Moments {
        mean,
        variance: m2,
        skewness: defined.then(|| m3 / m2.powf(1.5)),
        excess_kurtosis: defined.then(|| m4 / (m2 * m2) - 3.0),
    }
}

/// Least-squares slope of `ys` against `1..=ys.len()`.
fn slope(ys: &[f64]) -> Option<f64> {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return None;
    }
    let xbar = (n + 1.0) / 2.0;
    let ybar = ys.iter().sum::<f64>() / n;
    let (num, den) = ys.iter().enumerate().fold((0.0, 0.0), |(a, b), (i, y)| {
        let dx = (i + 1) as f64 - xbar;
        (a + dx * (y - ybar), b + dx * dx)
    });
    Some(num / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    pub degree_cap: u32,
    pub support: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkReport {
    pub config: ConfigEcho,
    pub used_trials: usize,
    pub truncated_trials: usize,
    pub truncation_rate: f64,
    /// Mean of `log deg g_n / n` at the final step.
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// Regression slopes of the per-step means.
    pub lambda1_slope: Option<f64>,
    pub lambda2_slope: Option<f64>,
    pub mean_logdeg_forward: Vec<f64>,
    pub mean_logdeg_backward: Vec<f64>,
    pub variance_forward: Vec<f64>,
    pub variance_backward: Vec<f64>,
    /// Shape of `log deg g_n - n lambda1` at the final step; exploratory only.
    pub clt: Option<Moments>,
    #[serde(skip)]
    pub trials: Vec<Trial>,
}

fn word_name(w: &[Letter]) -> String {
    if w.is_empty() {
        return "id".into();
    }
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run_random_walk(cfg: &WalkConfig) -> Result<WalkReport, CliError> {
    let sampler = cfg.measure.sampler()?;
    let ev = Evaluator::new(cfg.measure.table(), Ring::new(cfg.degree_cap));
    let trials: Vec<Trial> =
        (0..cfg.trials as u64).into_par_iter().map(|t| run_trial(cfg, &sampler, &ev, t)).collect::<Result<_, _>>()?;
    Ok(aggregate(cfg, trials))
}

pub fn aggregate(cfg: &WalkConfig, trials: Vec<Trial>) -> WalkReport {
    let used: Vec<&Trial> = trials.iter().filter(|t| !t.truncated).collect();
    let n = cfg.steps;
    let column = |k: usize, fwd: bool| -> Vec<f64> {
        used.iter().map(|t| if fwd { t.forward[k] } else { t.backward[k] }).collect()
    };
    let stats: Vec<(Moments, Moments)> = if used.is_empty() {
        Vec::new()
    } else {
        (0..n).map(|k| (moments(&column(k, true)), moments(&column(k, false)))).collect()
    };
    let mean_f: Vec<f64> = stats.iter().map(|s| s.0.mean).collect();
    let mean_b: Vec<f64> = stats.iter().map(|s| s.1.mean).collect();
    let truncated = trials.len() - used.len();
    WalkReport {
        config: ConfigEcho {
            steps: n,
            trials: cfg.trials,
            seed: cfg.seed,
            degree_cap: cfg.degree_cap,
            support: cfg.measure.support().iter().map(|(w, p)| (word_name(w), p.to_string())).collect(),
            conjugator: cfg.conjugator.as_deref().map(word_name),
        },
        used_trials: used.len(),
        truncated_trials: truncated,
        truncation_rate: if trials.is_empty() { 0.0 } else { truncated as f64 / trials.len() as f64 },
        lambda1: mean_f.last().map(|m| m / n as f64),
        lambda2: mean_b.last().map(|m| m / n as f64),
        lambda1_slope: slope(&mean_f),
        lambda2_slope: slope(&mean_b),
        variance_forward: stats.iter().map(|s| s.0.variance).collect(),
        variance_backward: stats.iter().map(|s| s.1.variance).collect(),
        clt: stats.last().map(|s| s.0.clone()),
        mean_logdeg_forward: mean_f,
        mean_logdeg_backward: mean_b,
        trials,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop61Report {
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl Prop61Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn same_run(a: &WalkReport, b: &WalkReport) -> bool {
    (a.config.steps, a.config.trials, a.config.seed) == (b.config.steps, b.config.trials, b.config.seed)
}

/// Empirical versions of `lambda1 >= lambda2 / 2`, `lambda2(mu) = lambda1(inverse mu)`,
/// conjugation invariance, and `lambda1 = lambda2` for symmetric measures.
pub fn prop61_checks(
    base: &WalkReport,
    symmetric: bool,
    inverse: Option<&WalkReport>,
    conjugated: Option<&WalkReport>,
    tol: f64,
) -> Result<Prop61Report, CliError> {
    let others = [inverse, conjugated];
    if others.iter().flatten().any(|r| !same_run(base, r)) {
        return Err(CliError::input("MismatchedConfigs", "walks must share steps, trials and seed"));
    }
    let lam = |r: &WalkReport| -> Result<(f64, f64), CliError> {
        match (r.lambda1, r.lambda2) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(CliError::input("AllTrialsTruncated", "no complete trial to estimate from")),
        }
    };
    let (l1, l2) = lam(base)?;
    let mut checks =
        vec![Check { name: "lambda1 >= lambda2 / 2".into(), lhs: l1, rhs: l2 / 2.0, holds: l1 >= l2 / 2.0 - tol }];
    let close = |name: &str, a: f64, b: f64| Check { name: name.into(), lhs: a, rhs: b, holds: (a - b).abs() <= tol };
    if symmetric {
        checks.push(close("symmetric: lambda1 = lambda2", l1, l2));
    }
    if let Some(r) = inverse {
        checks.push(close("lambda2(mu) = lambda1(inverse mu)", l2, lam(r)?.0));
    }
    if let Some(r) = conjugated {
        let (c1, c2) = lam(r)?;
        checks.push(close("lambda1 conjugation invariance", c1, l1));
        checks.push(close("lambda2 conjugation invariance", c2, l2));
    }
    Ok(Prop61Report { tolerance: tol, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> BTreeMap<String, Generator> {
        let mut t = BTreeMap::new();
        t.insert("s".to_string(), Generator::sigma());
        t.insert("e".to_string(), Generator::ev(Rational::one(), Rational::one(), "y^2".parse().unwrap()).unwrap());
        t
    }

    fn letters(s: &str) -> Vec<Letter> {
        s.split_whitespace().map(Letter::parse).collect()
    }

    #[test]
    fn probabilities_are_exact() {
        let half = Rational::new(1, 2);
        assert!(Measure::new(table(), vec![(letters("s"), half.clone()), (letters("e"), half.clone())]).is_ok());
        let third = Rational::new(1, 3);
        let err = Measure::new(table(), vec![(letters("s"), third.clone()), (letters("e"), third)]).unwrap_err();
        assert_eq!(err.kind, "BadProbabilities");
        let m = Measure::new(table(), vec![(letters("s e"), Rational::one())]).unwrap();
        let s = m.symmetrized();
        assert!(s.is_symmetric() && !m.is_symmetric());
        assert_eq!(s.support()[&letters("e' s'")], half);
    }

    #[test]
    fn sampler_hits_each_atom() {
        let m = Measure::new(table(), vec![(letters("s"), Rational::new(1, 4)), (letters("e"), Rational::new(3, 4))])
            .unwrap();
        let smp = m.sampler().unwrap();
        assert_eq!(smp.total, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let hits = (0..4000).filter(|_| smp.draw(&mut rng) == letters("s").as_slice()).count();
        assert!((800..1200).contains(&hits), "{hits}");
    }

    #[test]
    fn reduction_and_cache() {
        let ev = Evaluator::new(&table(), Ring::default());
        assert_eq!(ev.reduce(&letters("s s' e e'")), Vec::<Letter>::new());
        assert_eq!(ev.reduce(&letters("s s e")), letters("e"));
        assert_eq!(ev.reduce(&letters("s' e")), letters("s e"));
        let w = letters("s e s e");
        let a = ev.eval(&w).unwrap();
        let direct = Word::new(table(), w.clone()).unwrap().evaluate(&Ring::default()).unwrap();
        assert_eq!(*a, direct);
        let b = ev.eval(&letters("e s e")).unwrap();
        assert_eq!(*b, Word::new(table(), letters("e s e")).unwrap().evaluate(&Ring::default()).unwrap());
    }

    #[test]
    fn conjugated_draws_match_conjugated_measure() {
        let mut t = table();
        t.insert("c".to_string(), Generator::ev(Rational::one(), Rational::one(), "x".parse().unwrap()).unwrap());
        let m = Measure::new(t.clone(), vec![(letters("s"), Rational::new(1, 2)), (letters("e"), Rational::new(1, 2))])
            .unwrap();
        let c = Word::new(t, letters("c")).unwrap();
        let base = WalkConfig { measure: m.clone(), steps: 4, trials: 12, seed: 3, degree_cap: 200, conjugator: None };
        let paired = run_random_walk(&base.conjugated_by(&c)).unwrap();
        let direct = run_random_walk(&base.with_measure(m.conjugated(&c))).unwrap();
        assert_eq!(paired.trials, direct.trials);
        assert_eq!(paired.lambda1, direct.lambda1);
    }

    #[test]
    fn seeds_are_mixed() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|t| trial_seed(1, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn moments_of_symmetric_sample() {
        let m = moments(&[1.0, 2.0, 3.0]);
        assert_eq!((m.mean, m.skewness), (2.0, Some(0.0)));
        assert!((m.variance - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(moments(&[0.0, 0.0]).skewness, None);
        assert_eq!(slope(&[1.0, 3.0, 5.0]), Some(2.0));
    }
}
