use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rimetric::verify::{admissible_range, log_grid, DEFAULT_GRID_POINTS};

/// Inputs shared by the verification commands.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Space file (JSON).
    #[arg(long)]
    pub space: PathBuf,
    /// Function file(s), JSON arrays aligned with the space's points.
    #[arg(long = "fn", value_name = "PATH")]
    pub functions: Vec<PathBuf>,
    /// Gradient file(s) matching `--fn`; the canonical gradient is used when absent.
    #[arg(long = "g", value_name = "PATH")]
    pub gradients: Vec<PathBuf>,
    /// Smoothness exponent.
    #[arg(long)]
    pub s: f64,
    /// Lower-growth exponent of the measure.
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub t_grid: TGridRule,
    /// CSV report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Seed for subsampling probe centres.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            bail!("--s must be positive");
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            bail!("--alpha must be positive");
        }
        if !self.gradients.is_empty() && self.gradients.len() != self.functions.len() {
            bail!("{} gradient files for {} function files", self.gradients.len(), self.functions.len());
        }
        Ok(())
    }
}

/// Log-spaced `t` grid; bounds default to the admissible range.
#[derive(Debug, Clone, Args)]
pub struct TGridRule {
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub t_count: usize,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
}

impl TGridRule {
    pub fn build(&self, weights: &[f64]) -> Result<Vec<f64>> {
        let (lo, hi) = admissible_range(weights)?;
        Ok(log_grid(self.t_min.unwrap_or(lo), self.t_max.unwrap_or(hi), self.t_count)?)
    }
}

/// Every index when `n <= cap`, otherwise a seeded sorted subsample.
pub fn probe_centres(n: usize, cap: usize, seed: u64) -> Vec<usize> {
    if n <= cap {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, n, cap).into_vec();
    picked.sort_unstable();
    picked
}
