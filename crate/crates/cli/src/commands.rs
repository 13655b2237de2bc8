//! Subcommand implementations. Each returns the text for standard output and
//! an exit status.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadtame::complex::{verify_section5, CnuGraph, EdgeKind, Gallery, Link, Outcome};
use quadtame::dynamics::{
    check_theorem1_bound, check_theorem4, degree_sequence, growth_classify, DegreeSequence, GrowthClass,
};
use quadtame::valuation::{Key, Orientation};
use quadtame::{QElem, QPoly, ResonanceClass, Ring, Valuation, Value, Var, Word, DEFAULT_DEGREE_CAP};
use serde_json::{json, Value as Json};

use crate::error::CliError;
use crate::schema::{read_json, ValuationFile, WalkFile, WordFile};
use crate::walk::{prop61_checks, run_random_walk, WalkConfig, WalkReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "quadtame", version, about = "Tame automorphisms of the affine quadric threefold")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Word file.
    #[arg(long, global = true)]
    pub word: Option<PathBuf>,
    /// Valuation file.
    #[arg(long, global = true)]
    pub valuation: Option<PathBuf>,
    /// Walk configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Sequence length, or number of walk steps.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long = "degree-cap", global = true)]
    pub degree_cap: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree and components of the automorphism spelled by a word.
    Degree,
    /// Degrees of forward and backward iterates.
    Powers,
    /// Valuation of each component, or of `--poly`.
    Valuation {
        #[arg(long)]
        poly: Option<String>,
    },
    /// Resonance class of a pair of components.
    Resonance,
    /// Parachute of a pair of components.
    Parachute,
    /// Lower bound for `nu(R(f1, f2))`.
    Thm417 {
        #[arg(long)]
        poly: String,
    },
    /// Squares of the gallery of a word, and the oriented graph when a valuation is given.
    Complex,
    /// Square-level inequalities along the gallery of a word.
    Verify5,
    /// One-sided check of the degree versus distance bound.
    Thm4,
    /// Growth regime of the iterates.
    Classify,
    /// Random walk degree exponents.
    Walk {
        /// Also run the inverse and conjugated measures and compare.
        #[arg(long)]
        prop61: bool,
        /// Word file for the conjugating element.
        #[arg(long)]
        conjugator: Option<PathBuf>,
        /// Tolerance for the comparisons.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

pub struct Response {
    pub stdout: String,
    pub code: i32,
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    p.as_deref().ok_or_else(|| CliError::input("MissingArgument", format!("--{flag} is required")))
}

fn ring(c: &Common) -> Ring {
    Ring::new(c.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP))
}

fn load_word(c: &Common) -> Result<(WordFile, Word), CliError> {
    let f: WordFile = read_json(need(&c.word, "word")?)?;
    let w = f.word()?;
    Ok((f, w))
}

fn load_valuation(c: &Common) -> Result<Valuation, CliError> {
    read_json::<ValuationFile>(need(&c.valuation, "valuation")?)?.build()
}

fn load_pair(c: &Common, ring: &Ring) -> Result<(QElem, QElem), CliError> {
    let (f, w) = load_word(c)?;
    let [a, b] = f.pair_slots()?;
    let h = w.evaluate(ring)?;
    Ok((h.component(a).clone(), h.component(b).clone()))
}

fn value(v: &Value) -> String {
    v.to_string()
}

fn json_only(c: &Common) -> Result<(), CliError> {
    match c.format {
        Format::Json => Ok(()),
        f => Err(CliError::input(
            "UnsupportedFormat",
            format!("{f:?} output is not available for this command").to_lowercase(),
        )),
    }
}

pub fn error_json(e: &CliError) -> String {
    json!({ "error": { "kind": e.kind, "message": e.message } }).to_string()
}

pub fn run(cli: &Cli) -> Response {
    match dispatch(cli) {
        Ok(r) => r,
        Err(e) => Response { stdout: error_json(&e), code: EXIT_INPUT },
    }
}

fn ok(j: Json) -> Result<Response, CliError> {
    Ok(Response { stdout: serde_json::to_string_pretty(&j).expect("serialisable"), code: EXIT_OK })
}

fn dispatch(cli: &Cli) -> Result<Response, CliError> {
    let c = &cli.common;
    let ring = ring(c);
    match &cli.command {
        Command::Degree => {
            json_only(c)?;
            let (_, w) = load_word(c)?;
            let h = w.evaluate(&ring)?;
            ok(json!({
                "degree": h.degree(),
                "eps": h.eps(),
                "components": h.components().iter().map(ToString::to_string).collect::<Vec<_>>(),
            }))
        }
        Command::Powers => {
            let (_, w) = load_word(c)?;
            let s = degree_sequence(&w, c.n.unwrap_or(8), &ring)?;
            match c.format {
                Format::Csv => Ok(Response { stdout: sequence_csv(&s)?, code: EXIT_OK }),
                Format::Json => ok(sequence_json(&s)),
                Format::Dot => json_only(c).map(|_| unreachable!()),
            }
        }
        Command::Classify => {
            json_only(c)?;
            let (_, w) = load_word(c)?;
            let s = degree_sequence(&w, c.n.unwrap_or(8), &ring)?;
            let class = growth_classify(&s)?;
            let bound = match &class {
                GrowthClass::Exponential { .. } => {
                    let b = check_theorem1_bound(&s)?;
                    json!({ "c_fit": b.c_fit.to_string(), "witness": b.witness, "holds": b.holds })
                }
                _ => Json::Null,
            };
            ok(json!({ "sequence": sequence_json(&s), "class": class_json(&class), "growth_bound": bound }))
        }
        Command::Valuation { poly } => {
            json_only(c)?;
            let nu = load_valuation(c)?;
            match poly {
                Some(p) => {
                    let f = ring.parse(p)?;
                    ok(json!({ "value": value(&nu.eval(&f, &ring)?) }))
                }
                None => {
                    let (_, w) = load_word(c)?;
                    let h = w.evaluate(&ring)?;
                    let mut values = serde_json::Map::new();
                    for v in Var::ALL {
                        values.insert(v.name().to_string(), json!(value(&nu.eval(h.component(v), &ring)?)));
                    }
                    ok(json!({ "values": values }))
                }
            }
        }
        Command::Resonance => {
            json_only(c)?;
            let nu = load_valuation(c)?;
            let (f1, f2) = load_pair(c, &ring)?;
            ok(resonance_json(&nu.resonance(&f1, &f2, &ring)?))
        }
        Command::Parachute => {
            json_only(c)?;
            let nu = load_valuation(c)?;
            let (f1, f2) = load_pair(c, &ring)?;
            ok(json!({ "parachute": nu.parachute(&f1, &f2, &ring)?.to_string() }))
        }
        Command::Thm417 { poly } => {
            json_only(c)?;
            let nu = load_valuation(c)?;
            let (f1, f2) = load_pair(c, &ring)?;
            let r: QPoly = poly.parse()?;
            let rep = nu.theorem_417_report(&f1, &f2, &r, &ring)?;
            ok(json!({
                "lhs": value(&rep.lhs),
                "nu0": value(&rep.nu0),
                "resonance": resonance_json(&rep.class),
                "bound": rep.bound.map(|b| b.to_string()),
                "bound_holds": rep.bound_holds,
            }))
        }
        Command::Complex => {
            let (_, w) = load_word(c)?;
            let g = Gallery::from_word(&w, &ring)?;
            let graph = match &c.valuation {
                Some(_) => Some(CnuGraph::from_gallery(&g, &load_valuation(c)?, &ring)?),
                None => None,
            };
            match c.format {
                Format::Dot => {
                    let graph = graph
                        .ok_or_else(|| CliError::input("MissingArgument", "--valuation is required for dot output"))?;
                    Ok(Response { stdout: graph.to_dot(), code: EXIT_OK })
                }
                Format::Json => ok(complex_json(&g, graph.as_ref())),
                Format::Csv => json_only(c).map(|_| unreachable!()),
            }
        }
        Command::Verify5 => {
            json_only(c)?;
            let (_, w) = load_word(c)?;
            let nu = load_valuation(c)?;
            let g = Gallery::from_word(&w, &ring)?;
            let rep = verify_section5(&g, &nu, &ring)?;
            let outcome = |o: Outcome| format!("{o:?}").to_lowercase();
            ok(json!({
                "squares": rep.squares.iter().map(|s| json!({
                    "index": s.index, "min": s.min, "max": s.max,
                    "sum_identity": s.sum_identity, "duality": s.duality, "outcome": outcome(s.outcome),
                })).collect::<Vec<_>>(),
                "propagation": rep.propagation.iter().map(|p| json!({
                    "index": p.index, "vertex": p.vertex.to_string(), "outcome": outcome(p.outcome),
                })).collect::<Vec<_>>(),
                "drops": rep.drops.iter().map(|p| json!({
                    "index": p.index, "vertex": p.vertex.to_string(), "outcome": outcome(p.outcome),
                })).collect::<Vec<_>>(),
                "growth_bound": rep.growth_bound.iter().map(|b| json!({
                    "vertex": b.vertex.to_string(), "value": value(&b.value), "distance": b.distance,
                    "bound": b.bound.as_ref().map(ToString::to_string), "outcome": outcome(b.outcome),
                })).collect::<Vec<_>>(),
                "failures": rep.failures(),
                "inconclusive": rep.inconclusive(),
                "all_pass": rep.all_pass(),
            }))
        }
        Command::Thm4 => {
            json_only(c)?;
            let (_, w) = load_word(c)?;
            let t = check_theorem4(&w, &ring)?;
            let j = json!({
                "degree": t.degree,
                "lhs": t.lhs,
                "distance_upper": t.distance_upper.as_ref().map(ToString::to_string),
                "rhs_upper": t.rhs_upper,
                "holds": t.holds,
                "outcome": if t.holds { "verified" } else { "inconclusive" },
            });
            let mut r = ok(j)?;
            if !t.holds {
                r.code = EXIT_INCONCLUSIVE;
            }
            Ok(r)
        }
        Command::Walk { prop61, conjugator, tolerance } => {
            if c.format == Format::Dot {
                json_only(c)?;
            }
            let f: WalkFile = read_json(need(&c.config, "config")?)?;
            let mut cfg = WalkConfig::from_file(&f)?;
            if let Some(n) = c.n {
                cfg.steps = n;
            }
            if let Some(s) = c.seed {
                cfg.seed = s;
            }
            if let Some(cap) = c.degree_cap {
                cfg.degree_cap = cap;
            }
            let base = run_random_walk(&cfg)?;
            if c.format == Format::Csv {
                return Ok(Response { stdout: walk_csv(&base)?, code: EXIT_OK });
            }
            let mut j = serde_json::to_value(&base).expect("serialisable");
            if *prop61 {
                let inverse = run_random_walk(&cfg.with_measure(cfg.measure.inverse()))?;
                let conj = match conjugator {
                    Some(p) => {
                        let cw = read_json::<WordFile>(p)?.word()?;
                        Some(run_random_walk(&cfg.conjugated_by(&cw))?)
                    }
                    None => None,
                };
                let rep = prop61_checks(&base, cfg.measure.is_symmetric(), Some(&inverse), conj.as_ref(), *tolerance)?;
                j["prop61"] = serde_json::to_value(&rep).expect("serialisable");
            }
            ok(j)
        }
    }
}

fn sequence_json(s: &DegreeSequence) -> Json {
    json!({ "n_max": s.n_max, "forward": s.forward, "backward": s.backward, "truncated": s.truncated })
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::input("Io", e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::input("Io", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn sequence_csv(s: &DegreeSequence) -> Result<String, CliError> {
    let n = s.forward.len().max(s.backward.len());
    let cell = |v: &[u32], i: usize| v.get(i).map(ToString::to_string).unwrap_or_default();
    csv_text(
        &["n", "deg_forward", "deg_backward"],
        (0..n).map(|i| vec![(i + 1).to_string(), cell(&s.forward, i), cell(&s.backward, i)]),
    )
}

fn walk_csv(r: &WalkReport) -> Result<String, CliError> {
    let rows = r.trials.iter().enumerate().flat_map(|(t, tr)| {
        tr.forward.iter().enumerate().map(move |(k, v)| vec![(k + 1).to_string(), t.to_string(), v.to_string()])
    });
    csv_text(&["step", "trial", "logdeg"], rows)
}

fn class_json(c: &GrowthClass) -> Json {
    match c {
        GrowthClass::Bounded => json!({ "regime": "bounded" }),
        GrowthClass::Linear { slope_min, slope_max } => json!({ "regime": "linear", "slope": [slope_min, slope_max] }),
        GrowthClass::Exponential { rate_min, rate_max } => {
            json!({ "regime": "exponential", "rate": [rate_min.to_string(), rate_max.to_string()] })
        }
    }
}

pub fn resonance_json(c: &ResonanceClass) -> Json {
    match c {
        ResonanceClass::QIndependent => json!({ "class": "independent" }),
        ResonanceClass::Dependent { s1, s2, key } => match key {
            Key::Critical { k, lambda, orientation } => json!({
                "class": "critical", "k": k, "lambda": lambda.to_string(), "s1": s1, "s2": s2,
                "orientation": match orientation {
                    Orientation::FirstIsMultiple => "first",
                    Orientation::SecondIsMultiple => "second",
                },
            }),
            Key::Proper { lambda } => json!({ "class": "proper", "s1": s1, "s2": s2, "lambda": lambda.to_string() }),
            Key::None if c.is_properly_resonant() => json!({ "class": "proper", "s1": s1, "s2": s2, "lambda": null }),
            Key::None => json!({ "class": "dependent", "s1": s1, "s2": s2, "lambda": null }),
        },
    }
}

fn complex_json(g: &Gallery, graph: Option<&CnuGraph>) -> Json {
    let squares: Vec<Json> = g
        .squares
        .iter()
        .map(|s| {
            json!({
                "center": s.center.to_string(),
                "corners": s.corners.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "eps": s.eps,
            })
        })
        .collect();
    let links: Vec<Json> = g
        .links
        .iter()
        .map(|l| match l {
            Link::Same => json!({ "kind": "same" }),
            Link::Adjacent { shared } => json!({ "kind": "adjacent", "shared": [shared.0, shared.1] }),
            Link::Adherent { shared } => json!({ "kind": "adherent", "shared": [shared] }),
            Link::Disjoint => json!({ "kind": "disjoint" }),
        })
        .collect();
    let graph = graph.map(|gr| {
        json!({
            "nodes": gr.nodes().iter().zip(gr.values()).map(|(v, x)| json!({ "vertex": v.to_string(), "value": value(x) })).collect::<Vec<_>>(),
            "edges": gr.edges().map(|(a, b, k)| json!({
                "from": a.to_string(), "to": b.to_string(),
                "kind": match k { EdgeKind::Side => "side", EdgeKind::Diagonal => "diagonal" },
            })).collect::<Vec<_>>(),
        })
    });
    json!({ "squares": squares, "links": links, "graph": graph })
}
