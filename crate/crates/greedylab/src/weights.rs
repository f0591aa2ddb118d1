//! Continuous weight distributions and reproducible i.i.d. assignments to
//! nodes or edges.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::{Error, Result};

/// A continuous distribution with positive support, known density, and
/// finite first two moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDist {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    /// uniform on [1-eps, 1+eps]
    UniformEpsilon { eps: f64 },
}

impl WeightDist {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b && a >= 0.0) {
            return Err(Error::InvalidParameters(format!(
                "uniform needs 0 <= a < b, got a={a}, b={b}"
            )));
        }
        Ok(WeightDist::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidParameters(format!("exp needs rate > 0, got {rate}")));
        }
        Ok(WeightDist::Exponential { rate })
    }

    pub fn uniform_epsilon(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "ueps needs 0 < eps < 1, got {eps}"
            )));
        }
        Ok(WeightDist::UniformEpsilon { eps })
    }

    /// Parses the CLI descriptors `uniform:a,b`, `exp:rate`, `ueps:eps`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("bad distribution descriptor {descriptor:?}"));
        let (family, args) = descriptor.trim().split_once(':').ok_or_else(bad)?;
        match family {
            "uniform" => {
                let (a, b) = args.split_once(',').ok_or_else(bad)?;
                Self::uniform(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
            }
            "exp" => Self::exponential(args.trim().parse().map_err(|_| bad())?),
            "ueps" => Self::uniform_epsilon(args.trim().parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }

    fn bounds(self) -> (f64, f64) {
        match self {
            WeightDist::Uniform { a, b } => (a, b),
            WeightDist::Exponential { .. } => (0.0, f64::INFINITY),
            WeightDist::UniformEpsilon { eps } => (1.0 - eps, 1.0 + eps),
        }
    }

    pub fn cdf(self, x: f64) -> f64 {
        match self {
            WeightDist::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            WeightDist::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            WeightDist::UniformEpsilon { eps } => ((x - (1.0 - eps)) / (2.0 * eps)).clamp(0.0, 1.0),
        }
    }

    pub fn density(self, x: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if x < lo || x > hi {
            return 0.0;
        }
        match self {
            WeightDist::Uniform { a, b } => 1.0 / (b - a),
            WeightDist::Exponential { rate } => rate * (-rate * x).exp(),
            WeightDist::UniformEpsilon { eps } => 1.0 / (2.0 * eps),
        }
    }

    /// Inverse cdf; u must lie in [0, 1).
    pub fn quantile(self, u: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&u));
        match self {
            WeightDist::Uniform { a, b } => a + (b - a) * u,
            WeightDist::Exponential { rate } => -(-u).ln_1p() / rate,
            WeightDist::UniformEpsilon { eps } => 1.0 - eps + 2.0 * eps * u,
        }
    }

    pub fn mean(self) -> f64 {
        match self {
            WeightDist::Uniform { a, b } => (a + b) / 2.0,
            WeightDist::Exponential { rate } => 1.0 / rate,
            WeightDist::UniformEpsilon { .. } => 1.0,
        }
    }

    pub fn second_moment(self) -> f64 {
        match self {
            WeightDist::Uniform { a, b } => (a * a + a * b + b * b) / 3.0,
            WeightDist::Exponential { rate } => 2.0 / (rate * rate),
            WeightDist::UniformEpsilon { eps } => 1.0 + eps * eps / 3.0,
        }
    }
}

impl fmt::Display for WeightDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightDist::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            WeightDist::Exponential { rate } => write!(f, "exp:{rate}"),
            WeightDist::UniformEpsilon { eps } => write!(f, "ueps:{eps}"),
        }
    }
}

/// Whether weights sit on nodes or on edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Nodes,
    Edges,
}

impl Target {
    pub fn label(self) -> &'static str {
        match self {
            Target::Nodes => "node",
            Target::Edges => "edge",
        }
    }
}

/// One i.i.d. weight per node or edge; weights are strictly positive and
/// pairwise distinct.
#[derive(Debug, Clone)]
pub struct WeightAssignment {
    pub target: Target,
    values: Vec<f64>,
    pub dist: WeightDist,
    pub seed: u64,
}

impl WeightAssignment {
    /// Wraps explicit values, enforcing positivity and distinctness.
    pub fn from_values(target: Target, values: Vec<f64>, dist: WeightDist, seed: u64) -> Result<Self> {
        if values.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameters(
                "weights must be finite and strictly positive".into(),
            ));
        }
        let mut sorted = values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameters("weights must be pairwise distinct".into()));
        }
        Ok(WeightAssignment {
            target,
            values,
            dist,
            seed,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, id: usize) -> f64 {
        self.values[id]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Returns a copy with one value replaced (used by independence checks).
    pub fn with_value(&self, id: usize, value: f64) -> Result<Self> {
        let mut values = self.values.clone();
        values[id] = value;
        Self::from_values(self.target, values, self.dist, self.seed)
    }

    pub(crate) fn check_covers(&self, target: Target, expected: usize) -> Result<()> {
        if self.target != target || self.len() != expected {
            return Err(Error::MissingWeights {
                target: target.label(),
                expected,
                got: self.len(),
            });
        }
        Ok(())
    }
}

fn draw_weight(dist: WeightDist, rng: &mut ChaCha8Rng) -> f64 {
    // rejects u = 0 so that quantile(u) is strictly positive
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return dist.quantile(u);
        }
    }
}

/// Draws one i.i.d. weight per node (or edge) of `g`. Deterministic given
/// `seed`; float collisions are resolved by redrawing the later id.
pub fn assign_weights(g: &Graph, target: Target, dist: WeightDist, seed: u64) -> WeightAssignment {
    let count = match target {
        Target::Nodes => g.node_count(),
        Target::Edges => g.edge_count(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<f64> = (0..count).map(|_| draw_weight(dist, &mut rng)).collect();
    loop {
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_unstable_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
        let mut clean = true;
        for pair in order.windows(2) {
            if values[pair[0]] == values[pair[1]] {
                values[pair[0].max(pair[1])] = draw_weight(dist, &mut rng);
                clean = false;
            }
        }
        if clean {
            return WeightAssignment {
                target,
                values,
                dist,
                seed,
            };
        }
    }
}

/// Splittable per-trial seed: splitmix64 of (master, index).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
