//! Sampling configuration and the deterministic sampling engine.
//!
//! Every universally quantified statement is checked on a finite sample. The
//! sample is cut into fixed-size chunks; chunk `k` of stream `s` draws from its
//! own ChaCha generator seeded from `(rng_seed, s, k)`, so reports do not
//! depend on how many worker threads execute the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::vector::Vector;

/// Tolerance for equality-like comparisons.
pub const EPSILON: f64 = 1e-9;
/// Margin for strict inequalities.
pub const EPSILON_STRICT: f64 = 1e-12;
/// One-sided limit probes, coarse to fine.
pub const PROBE_STEPS: [f64; 3] = [1e-3, 1e-6, 1e-9];
/// Probes left of the origin used for the `t <= 0` part of the domain.
pub const NEGATIVE_PROBES: [f64; 2] = [-1.0, -1e-3];
/// Stand-in for `t -> +-infinity` in limit checks.
pub const LIMIT_PROBE: f64 = 1e300;

pub const DEFAULT_T_MIN: f64 = 1e-3;
pub const DEFAULT_T_MAX: f64 = 1e3;
pub const DEFAULT_T_COUNT: usize = 64;

const CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleBudget {
    /// Vector draws for pointwise checks (axioms, Delta2, homogeneity).
    pub n_vectors: usize,
    /// Scalar draws (convexity weights, homogeneity scalars, `(s, t)` pairs)
    /// per vector draw.
    pub n_scalar_pairs: usize,
    /// Distribution functions examined by whole-function checks
    /// (Delta membership, continuity, strict monotonicity).
    pub n_functions: usize,
    /// Members drawn to verify each containment or disjointness claim.
    pub witness_samples: usize,
    pub t_grid: Vec<f64>,
    pub epsilon: f64,
    pub rng_seed: u64,
    /// Standard deviation of the Gaussian vector law.
    pub vector_scale: f64,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget {
            n_vectors: 10_000,
            n_scalar_pairs: 4,
            n_functions: 256,
            witness_samples: 200,
            t_grid: log_grid(DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_T_COUNT),
            epsilon: EPSILON,
            rng_seed: 0,
            vector_scale: 1.0,
        }
    }
}

impl SampleBudget {
    pub fn with_seed(&self, seed: u64) -> Self {
        SampleBudget {
            rng_seed: seed,
            ..self.clone()
        }
    }

    pub fn with_vectors(&self, n: usize) -> Self {
        SampleBudget {
            n_vectors: n,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_vectors == 0
            || self.n_scalar_pairs == 0
            || self.n_functions == 0
            || self.witness_samples == 0
        {
            return Err(Error::invalid("sample counts must be at least 1"));
        }
        if self.t_grid.is_empty() {
            return Err(Error::invalid("t grid must be nonempty"));
        }
        if self.t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::invalid("t grid entries must be positive and finite"));
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("t grid must be strictly increasing"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if !(self.vector_scale > 0.0 && self.vector_scale.is_finite()) {
            return Err(Error::invalid("vector scale must be positive"));
        }
        Ok(())
    }

    pub fn t_min(&self) -> f64 {
        self.t_grid[0]
    }

    pub fn t_max(&self) -> f64 {
        self.t_grid[self.t_grid.len() - 1]
    }

    /// Draws one grid point, or `0` with probability `p_zero`.
    pub(crate) fn grid_or_zero<R: Rng>(&self, rng: &mut R, p_zero: f64) -> f64 {
        if rng.random::<f64>() < p_zero {
            0.0
        } else {
            self.t_grid[rng.random_range(0..self.t_grid.len())]
        }
    }
}

/// `count` logarithmically spaced points spanning `[min, max]` inclusive.
pub fn log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    let (lo, hi) = (min.log10(), max.log10());
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| match i {
            0 => min,
            _ if i == count - 1 => max,
            _ => 10f64.powf(lo + step * i as f64),
        })
        .collect()
}

/// Parses the `min,max,count` flag syntax.
pub fn parse_t_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!(
            "t grid must be 'min,max,count', got '{text}'"
        )));
    }
    let bad = |what: &str| Error::invalid(format!("t grid {what} is not valid in '{text}'"));
    let min: f64 = parts[0].parse().map_err(|_| bad("min"))?;
    let max: f64 = parts[1].parse().map_err(|_| bad("max"))?;
    let count: usize = parts[2].parse().map_err(|_| bad("count"))?;
    if !(min > 0.0 && max > min && max.is_finite()) || count < 2 {
        return Err(Error::invalid(format!(
            "t grid needs 0 < min < max and count >= 2, got '{text}'"
        )));
    }
    Ok(log_grid(min, max, count))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for chunk `chunk` of stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha8Rng {
    let mixed = splitmix64(seed ^ splitmix64(stream ^ splitmix64(chunk)));
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Stable stream identifiers, one per check family.
pub(crate) mod streams {
    pub const PM1: u64 = 1;
    pub const PM2: u64 = 2;
    pub const PM3: u64 = 3;
    pub const PM4: u64 = 4;
    pub const DELTA2: u64 = 5;
    pub const HOMOGENEOUS: u64 = 6;
    pub const UPSILON: u64 = 7;
    pub const TRANSLATE: u64 = 10;
    pub const SCALING: u64 = 11;
    pub const MONO_SCALE: u64 = 12;
    pub const MONO_LEVEL: u64 = 13;
    pub const BALANCED: u64 = 14;
    pub const CONVEX: u64 = 15;
    pub const REFINE: u64 = 20;
    pub const INTERSECT: u64 = 21;
    pub const LOCAL_BASE: u64 = 22;
    pub const SEPARATE: u64 = 23;
    pub const HOMOGENEOUS_SEPARATE: u64 = 24;
    pub const ADDITION: u64 = 25;
    pub const SCALAR: u64 = 26;
    pub const REGISTRY: u64 = 40;
    pub const GENERATE: u64 = 41;
}

/// Runs `n` samples of `body` in deterministic chunks and merges the partial
/// reports in chunk order.
pub(crate) fn run_sampled<F>(seed: u64, stream: u64, n: usize, body: F) -> CheckReport
where
    F: Fn(&mut ChaCha8Rng, usize, &mut CheckReport) + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<CheckReport> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, stream, k as u64);
            let mut part = CheckReport::new(seed);
            let end = ((k + 1) * CHUNK).min(n);
            for i in k * CHUNK..end {
                body(&mut rng, i, &mut part);
                part.samples_run += 1;
            }
            part
        })
        .collect();
    let mut report = CheckReport::new(seed);
    for part in parts {
        report.merge(part);
    }
    report
}

pub(crate) fn gaussian_vector<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Vector {
    Vector::from_raw(
        (0..dim)
            .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
            .collect(),
    )
}

/// Convexity weight `a = |g| / (|g| + |g'|)`, `b = 1 - a`.
pub(crate) fn convex_weights<R: Rng>(rng: &mut R) -> (f64, f64) {
    let g: f64 = rng.sample::<f64, _>(StandardNormal).abs();
    let h: f64 = rng.sample::<f64, _>(StandardNormal).abs();
    if g + h == 0.0 {
        return (0.5, 0.5);
    }
    let a = g / (g + h);
    (a, 1.0 - a)
}

/// Log-uniform magnitude on `[1e-2, 1e2]` with a random sign.
pub(crate) fn signed_log_uniform<R: Rng>(rng: &mut R) -> f64 {
    let mag = 10f64.powf(rng.random_range(-2.0..=2.0));
    if rng.random::<bool>() {
        mag
    } else {
        -mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let b = SampleBudget::default();
        assert_eq!(b.t_grid.len(), 64);
        assert_eq!(b.t_min(), 1e-3);
        assert_eq!(b.t_max(), 1e3);
        b.validate().unwrap();
    }

    #[test]
    fn grid_flag_parses() {
        let g = parse_t_grid("0.1, 10, 3").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[1] - 1.0).abs() < 1e-12);
        assert!(parse_t_grid("1,0.5,3").is_err());
        assert!(parse_t_grid("1,2").is_err());
        assert!(parse_t_grid("a,2,3").is_err());
    }

    #[test]
    fn validation_rejects_bad_budgets() {
        assert!(SampleBudget::default().with_vectors(0).validate().is_err());
        let b = SampleBudget {
            t_grid: vec![1.0, 0.5],
            ..SampleBudget::default()
        };
        assert!(b.validate().is_err());
        let b = SampleBudget {
            epsilon: 0.0,
            ..SampleBudget::default()
        };
        assert!(b.validate().is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = stream_rng(7, 1, 0);
        let mut b = stream_rng(7, 1, 0);
        let mut c = stream_rng(7, 1, 1);
        let (x, y, z): (u64, u64, u64) = (a.random(), b.random(), c.random());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn sampled_runs_count_every_sample() {
        let r = run_sampled(3, 99, 1000, |_, _, _| {});
        assert_eq!(r.samples_run, 1000);
        assert!(r.passed);
    }

    #[test]
    fn convex_weights_sum_to_one() {
        let mut rng = stream_rng(0, 0, 0);
        for _ in 0..100 {
            let (a, b) = convex_weights(&mut rng);
            assert!((0.0..=1.0).contains(&a));
            assert!((a + b - 1.0).abs() < 1e-15);
        }
    }
}
