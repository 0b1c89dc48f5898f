//! Seeded synthetic instances.
//!
//! Generation is a pure function of [`GeneratorConfig`]. The random stream
//! comes from [`Xoshiro256StarStar`], defined below by its recurrence, so
//! the same seed reproduces the same instance in any language that follows
//! the same steps:
//!
//! 1. seed the four state words with four successive SplitMix64 outputs;
//! 2. if clustered, draw `cluster_count` centers as `(x, y)`, each
//!    coordinate `area * u`;
//! 3. for each demand point in order: its position (uniform: `x = area*u`,
//!    then `y = area*u`; clustered: one Box-Muller pair `(z0, z1)` added to
//!    center `i mod cluster_count` as `spread*z0`, `spread*z1`, clamped to
//!    `[0, area]`), then its weight `low + (high - low) * u`;
//! 4. for each site in order: `x = area*u`, then `y = area*u`.
//!
//! `u` is `(next_u64() >> 11) * 2^-53`, uniform on `[0, 1)`.

use crate::error::{Error, Result};
use crate::model::{BudgetMode, DemandPoint, FacilitySite, Instance};
use serde::{Deserialize, Serialize};

/// xoshiro256** (Blackman and Vigna), seeded through SplitMix64.
///
/// ```text
/// splitmix64: s += 0x9E3779B97F4A7C15
///             z = s; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///             z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
/// next:       result = rotl(s1 * 5, 7) * 9
///             t = s1 << 17
///             s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
/// ```
/// All arithmetic wraps modulo 2^64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        };
        Xoshiro256StarStar {
            s: [next(), next(), next(), next()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals (Box-Muller).
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    #[default]
    Uniform,
    Clustered,
}

impl std::str::FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "clustered" => Ok(Distribution::Clustered),
            other => Err(format!("unknown distribution `{other}` (expected uniform or clustered)")),
        }
    }
}

/// Parameters of a synthetic instance. Exactly one of `budget` and
/// `budget_fraction` must be set; a fraction maps to `ceil(fraction * m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_fraction: Option<f64>,
    #[serde(default)]
    pub budget_mode: BudgetMode,
    pub radius: f64,
    #[serde(default)]
    pub distribution: Distribution,
    #[serde(default = "default_cluster_count")]
    pub cluster_count: usize,
    #[serde(default = "default_cluster_spread")]
    pub cluster_spread: f64,
    #[serde(default = "default_weight_range")]
    pub weight_range: [f64; 2],
    #[serde(default = "default_area")]
    pub area: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_cluster_count() -> usize {
    3
}

fn default_cluster_spread() -> f64 {
    10.0
}

fn default_weight_range() -> [f64; 2] {
    [1.0, 10.0]
}

fn default_area() -> f64 {
    100.0
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n: 30,
            m: 10,
            budget: Some(4),
            budget_fraction: None,
            budget_mode: BudgetMode::AtMost,
            radius: 20.0,
            distribution: Distribution::Uniform,
            cluster_count: default_cluster_count(),
            cluster_spread: default_cluster_spread(),
            weight_range: default_weight_range(),
            area: default_area(),
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    /// The budget after resolving a fraction against `m`.
    pub fn resolved_budget(&self) -> Result<usize> {
        let budget = match (self.budget, self.budget_fraction) {
            (Some(b), None) => b,
            (None, Some(f)) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::InvalidConfig(format!("budget_fraction must lie in (0, 1], found {f}")));
                }
                // the slack absorbs products such as 0.6 * 5 = 3.0000000000000004
                ((f * self.m as f64 - 1e-9).ceil() as usize).max(1)
            }
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig("set only one of budget and budget_fraction".into()))
            }
            (None, None) => return Err(Error::InvalidConfig("one of budget or budget_fraction is required".into())),
        };
        if !(1..=self.m).contains(&budget) {
            return Err(Error::InvalidConfig(format!("budget must lie in [1, {}], found {budget}", self.m)));
        }
        Ok(budget)
    }

    pub fn validate(&self) -> Result<usize> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n == 0 || self.m == 0 {
            return bad(format!("n and m must be positive, found n={} m={}", self.n, self.m));
        }
        let budget = self.resolved_budget()?;
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad(format!("radius must be positive, found {}", self.radius));
        }
        if !(self.area.is_finite() && self.area > 0.0) {
            return bad(format!("area must be positive, found {}", self.area));
        }
        let [low, high] = self.weight_range;
        if !(low.is_finite() && high.is_finite() && low > 0.0 && low <= high) {
            return bad(format!("weight_range must satisfy 0 < low <= high, found [{low}, {high}]"));
        }
        if self.distribution == Distribution::Clustered {
            if self.cluster_count == 0 {
                return bad("cluster_count must be positive".into());
            }
            if !(self.cluster_spread.is_finite() && self.cluster_spread >= 0.0) {
                return bad(format!("cluster_spread must be nonnegative, found {}", self.cluster_spread));
            }
        }
        Ok(budget)
    }
}

pub fn generate(config: &GeneratorConfig) -> Result<Instance> {
    let budget = config.validate()?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(config.seed);
    let area = config.area;
    let [low, high] = config.weight_range;

    let centers: Vec<(f64, f64)> = match config.distribution {
        Distribution::Uniform => Vec::new(),
        Distribution::Clustered => (0..config.cluster_count)
            .map(|_| {
                let x = area * rng.next_f64();
                let y = area * rng.next_f64();
                (x, y)
            })
            .collect(),
    };

    let mut demand_points = Vec::with_capacity(config.n);
    for id in 0..config.n {
        let (x, y) = match config.distribution {
            Distribution::Uniform => {
                let x = area * rng.next_f64();
                let y = area * rng.next_f64();
                (x, y)
            }
            Distribution::Clustered => {
                let (cx, cy) = centers[id % centers.len()];
                let (z0, z1) = rng.next_gaussian_pair();
                (
                    (cx + config.cluster_spread * z0).clamp(0.0, area),
                    (cy + config.cluster_spread * z1).clamp(0.0, area),
                )
            }
        };
        let weight = low + (high - low) * rng.next_f64();
        demand_points.push(DemandPoint { id, x, y, weight });
    }

    let sites = (0..config.m)
        .map(|id| {
            let x = area * rng.next_f64();
            let y = area * rng.next_f64();
            FacilitySite { id, x, y }
        })
        .collect();

    Instance::new(demand_points, sites, config.radius, budget, config.budget_mode)
}
