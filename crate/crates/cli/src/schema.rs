//! JSON input files: words, valuations and walk configurations.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use quadtame::{Generator, Letter, QPoly, QuadExt, Rational, Valuation, Var, Word};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

fn one() -> String {
    "1".into()
}

/// One named generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Orth {
        matrix: Vec<Vec<String>>,
    },
    Ev {
        #[serde(default = "one")]
        a: String,
        #[serde(default = "one")]
        b: String,
        #[serde(rename = "P")]
        p: String,
    },
    Eh {
        #[serde(default = "one")]
        a: String,
        #[serde(default = "one")]
        b: String,
        #[serde(rename = "P")]
        p: String,
    },
}

fn rational(s: &str) -> Result<Rational, CliError> {
    s.trim().parse().map_err(CliError::from)
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Generator, CliError> {
        match self {
            GeneratorSpec::Orth { matrix } => {
                if matrix.len() != 4 || matrix.iter().any(|r| r.len() != 4) {
                    return Err(CliError::input("BadMatrix", "orthogonal matrix must be 4x4"));
                }
                let mut m: [[Rational; 4]; 4] = Default::default();
                for (i, row) in matrix.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        m[i][j] = rational(c)?;
                    }
                }
                Ok(Generator::orth(m)?)
            }
            GeneratorSpec::Ev { a, b, p } => Ok(Generator::ev(rational(a)?, rational(b)?, p.parse::<QPoly>()?)?),
            GeneratorSpec::Eh { a, b, p } => Ok(Generator::eh(rational(a)?, rational(b)?, p.parse::<QPoly>()?)?),
        }
    }
}

pub type GeneratorTable = BTreeMap<String, GeneratorSpec>;

pub fn build_table(t: &GeneratorTable) -> Result<BTreeMap<String, Generator>, CliError> {
    t.iter().map(|(n, g)| Ok((n.clone(), g.build()?))).collect()
}

pub fn build_word(table: &BTreeMap<String, Generator>, letters: &[String]) -> Result<Word, CliError> {
    Ok(Word::new(table.clone(), letters.iter().map(|s| Letter::parse(s)).collect())?)
}

/// A word over named generators. `pair` selects two component slots
/// (default `x`, `y`) for the commands that act on a pair of components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFile {
    pub generators: GeneratorTable,
    pub word: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[String; 2]>,
}

impl WordFile {
    pub fn word(&self) -> Result<Word, CliError> {
        build_word(&build_table(&self.generators)?, &self.word)
    }

    pub fn pair_slots(&self) -> Result<[Var; 2], CliError> {
        let names = self.pair.clone().unwrap_or_else(|| ["x".into(), "y".into()]);
        let slot = |n: &str| {
            let mut chars = n.trim().chars();
            let v = match (chars.next(), chars.next()) {
                (Some(c), None) => Var::from_name(c),
                _ => None,
            };
            v.ok_or_else(|| CliError::input("UnknownVariable", format!("unknown slot {n:?}")))
        };
        Ok([slot(&names[0])?, slot(&names[1])?])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationFile {
    #[serde(default = "origin")]
    pub p: [String; 4],
    pub alpha: [String; 4],
}

fn origin() -> [String; 4] {
    ["0", "0", "0", "0"].map(String::from)
}

impl ValuationFile {
    pub fn build(&self) -> Result<Valuation, CliError> {
        let mut p: [Rational; 4] = Default::default();
        let mut alpha: [QuadExt; 4] = Default::default();
        for i in 0..4 {
            p[i] = rational(&self.p[i])?;
            alpha[i] = self.alpha[i].trim().parse()?;
        }
        Ok(Valuation::from_parts(p, alpha)?)
    }
}

/// One support element of a walk measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub word: Vec<String>,
    pub prob: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkFile {
    pub generators: GeneratorTable,
    pub support: Vec<Step>,
    pub steps: usize,
    pub trials: usize,
    #[serde(default = "crate::default_seed")]
    pub seed: u64,
    #[serde(default = "default_walk_cap")]
    pub degree_cap: u32,
    #[serde(default)]
    pub symmetrize: bool,
}

fn default_walk_cap() -> u32 {
    crate::walk::DEFAULT_WALK_CAP
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input("Json", format!("{}: {e}", path.display())))
}
