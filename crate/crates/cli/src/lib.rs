//! File formats, the random-walk runner and the command-line surface for
//! `quadtame`.

pub mod commands;
mod error;
pub mod schema;
pub mod walk;

pub use error::CliError;

/// Seed used when none is given, so that default runs are reproducible.
pub const DEFAULT_SEED: u64 = 0x5e_ed0f_7a3e;

pub fn default_seed() -> u64 {
    DEFAULT_SEED
}
