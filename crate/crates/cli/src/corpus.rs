//! Seeded random corpus of distributions for the bound suite.

use fde_core::bounds::{run_bound, BoundCheck, BoundOp};
use fde_core::{Alpha, DistributionSpec, Family, Normalization, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

pub const FAMILIES: [&str; 13] = [
    "uniform",
    "normal",
    "exponential",
    "pareto2",
    "triangular",
    "foldedt",
    "cramer",
    "cauchy",
    "gamma",
    "beta",
    "weibull",
    "gpd",
    "finiterange",
];

const ORDERS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn draw_family(rng: &mut ChaCha8Rng, name: &str) -> Family {
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
    match name {
        "uniform" => {
            let a = u(0.0, 3.0);
            Family::Uniform { a, b: a + u(0.5, 6.0) }
        }
        "normal" => Family::Normal { mu: u(0.0, 2.0), sigma: u(0.4, 3.0), norm: Normalization::Renormalized },
        "exponential" => Family::Exponential { lambda: u(0.1, 1.2) },
        "pareto2" => {
            let k = u(0.5, 4.0);
            Family::ParetoII { k, sigma: k * u(0.2, 1.2) }
        }
        "triangular" => Family::Triangular { beta: u(0.05, 1.0) },
        "foldedt" => Family::FoldedT { gamma: u(0.5, 6.0) },
        "cramer" => Family::Cramer { theta: u(0.2, 2.0), norm: Normalization::Renormalized },
        "cauchy" => Family::Cauchy { mu: u(0.0, 2.0), sigma: u(0.4, 3.0) },
        "gamma" => Family::Gamma { m: u(0.2, 2.0), n: u(1.0, 4.0) },
        "beta" => Family::Beta { m: u(1.0, 3.0), n: u(1.0, 3.0) },
        "weibull" => Family::Weibull { a: u(0.5, 4.0), b: u(1.0, 3.0) },
        "gpd" => Family::GeneralizedPareto { k: u(0.1, 1.0), sigma: u(0.5, 4.0), theta: u(0.0, 2.0) },
        "finiterange" => Family::FiniteRange { a: u(0.5, 3.0), theta: u(1.0, 8.0) },
        other => unreachable!("unknown family {other}"),
    }
}

/// One corpus entry with its checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub index: usize,
    pub op: BoundOp,
    pub checks: Vec<BoundCheck>,
}

/// Validated corpus parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusPlan {
    pub draws: usize,
    pub families: Vec<&'static str>,
    pub ops: Vec<BoundOp>,
}

impl CorpusPlan {
    pub fn new(draws: usize, families: &[String], ops: &[String]) -> Result<Self> {
        let families: Vec<&'static str> = if families.is_empty() {
            FAMILIES.to_vec()
        } else {
            families
                .iter()
                .map(|f| {
                    FAMILIES.iter().copied().find(|n| n == f).ok_or_else(|| {
                        CliError::Usage(format!("unknown family `{f}`; expected one of {}", FAMILIES.join(", ")))
                    })
                })
                .collect::<Result<_>>()?
        };
        let ops: Vec<BoundOp> = if ops.is_empty() {
            BoundOp::ALL.to_vec()
        } else {
            ops.iter()
                .map(|o| {
                    BoundOp::from_name(o).ok_or_else(|| {
                        let names: Vec<&str> = BoundOp::ALL.iter().map(|o| o.name()).collect();
                        CliError::Usage(format!("unknown bound `{o}`; expected one of {}", names.join(", ")))
                    })
                })
                .collect::<Result<_>>()?
        };
        if draws == 0 {
            return Err(CliError::Usage("--draws must be positive".into()));
        }
        Ok(Self { draws, families, ops })
    }

    /// Operations cycle in order so every one is covered; families, parameters
    /// and orders come from a ChaCha stream seeded with `seed`.
    pub fn run(&self, seed: u64, cfg: &QuadratureConfig) -> Result<Vec<Draw>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(self.draws);
        for index in 0..self.draws {
            let op = self.ops[index % self.ops.len()];
            let fx = self.families[rng.random_range(0..self.families.len())];
            let fy = self.families[rng.random_range(0..self.families.len())];
            let x = DistributionSpec::new(draw_family(&mut rng, fx))?;
            let y = DistributionSpec::new(draw_family(&mut rng, fy))?;
            let alpha = Alpha::new(ORDERS[rng.random_range(0..ORDERS.len())])?;
            out.push(Draw { index, op, checks: run_bound(op, &x, &y, alpha, cfg) });
        }
        Ok(out)
    }
}
