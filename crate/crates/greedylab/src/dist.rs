//! Truncated laws of the integer recursions that describe greedy decisions
//! on regular trees, their generating functions, and the closed-form limits.
//!
//! The node variable starts at a point mass on 1 and evolves by
//! Z = r-fold sum, then Z+1 with probability 1/(Z+1), else 0.
//! The edge variable starts at a point mass on 0 and evolves by the same
//! thinning first, then the r-fold sum. Their means stay 1 and r exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::weights::WeightDist;
use crate::{Error, Result};

/// Any pmf whose tracked tail exceeds this is rejected as under-truncated.
pub const TAIL_LIMIT: f64 = 1e-6;

/// Truncation used by the CLI when none is given.
pub fn default_truncation(r: usize, d: usize) -> usize {
    64 * r * (d + 1)
}

/// Probability mass function on {0..K} with explicit tail mass. Entries are
/// pointwise lower bounds on the untruncated law; `tail_mass` upper-bounds
/// everything unaccounted for, so `sum(probs) + tail_mass = 1`.
#[derive(Debug, Clone)]
pub struct Pmf {
    // trailing exact zeros are trimmed; k_max records the nominal truncation
    probs: Vec<f64>,
    tail_mass: f64,
    r: usize,
    d: usize,
    k_max: usize,
}

impl Pmf {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// (r, d, K)
    pub fn params(&self) -> (usize, usize, usize) {
        (self.r, self.d, self.k_max)
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, &p)| k as f64 * p)
            .sum()
    }

    /// Generating function at s, from the truncated entries (a lower bound).
    pub fn pgf(&self, s: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&s));
        self.probs.iter().rev().fold(0.0, |acc, &p| acc * s + p)
    }

    /// [lower, upper] enclosure of the untruncated generating function.
    pub fn pgf_interval(&self, s: f64) -> (f64, f64) {
        let v = self.pgf(s);
        (v, v + self.tail_mass)
    }
}

// Convolution truncated at k_max; mass pushed past the cut is dropped here
// and resurfaces in the caller's tail bookkeeping.
fn convolve(a: &[f64], b: &[f64], k_max: usize) -> Vec<f64> {
    let len = (a.len() + b.len() - 1).min(k_max + 1);
    let mut out = vec![0.0; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 || i >= len {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn convolve_power(base: &[f64], r: usize, k_max: usize) -> Vec<f64> {
    let mut acc = base.to_vec();
    for _ in 1..r {
        acc = convolve(&acc, base, k_max);
    }
    acc
}

// Applies Z -> (Z+1) Bernoulli(1/(Z+1)): q[z+1] = c[z]/(z+1), the rest of
// c[z] lands on 0. Mass shifted past k_max is left for the tail.
fn thin_shift(c: &[f64], k_max: usize) -> Vec<f64> {
    let mut q = vec![0.0; (c.len() + 1).min(k_max + 1)];
    let mut q0 = 0.0;
    for (z, &cz) in c.iter().enumerate() {
        q0 += cz * z as f64 / (z + 1) as f64;
        if z < k_max {
            q[z + 1] = cz / (z + 1) as f64;
        }
    }
    q[0] = q0;
    q
}

fn trim(mut probs: Vec<f64>) -> Vec<f64> {
    while probs.len() > 1 && *probs.last().unwrap() == 0.0 {
        probs.pop();
    }
    probs
}

fn seal(probs: Vec<f64>, r: usize, d: usize, k_max: usize) -> Result<Pmf> {
    let probs = trim(probs);
    let tail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    if tail > TAIL_LIMIT {
        return Err(Error::TruncationTooSmall {
            k: k_max,
            tail,
            limit: TAIL_LIMIT,
        });
    }
    Ok(Pmf {
        probs,
        tail_mass: tail,
        r,
        d,
        k_max,
    })
}

fn check_params(r: usize, k_max: usize, k_min: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!("recursion needs r >= 2, got {r}")));
    }
    if k_max < k_min {
        return Err(Error::InvalidParameters(format!(
            "truncation K={k_max} must be >= {k_min}"
        )));
    }
    Ok(())
}

/// All node-recursion laws for depths 0..=d_max at truncation `k_max`.
pub fn x_pmf_chain(r: usize, d_max: usize, k_max: usize) -> Result<Vec<Pmf>> {
    check_params(r, k_max, 1)?;
    let mut chain = Vec::with_capacity(d_max + 1);
    chain.push(Pmf {
        probs: vec![0.0, 1.0],
        tail_mass: 0.0,
        r,
        d: 0,
        k_max,
    });
    for d in 1..=d_max {
        let prev = &chain[d - 1].probs;
        let q = thin_shift(&convolve_power(prev, r, k_max), k_max);
        chain.push(seal(q, r, d, k_max)?);
    }
    Ok(chain)
}

/// Node-recursion law at depth d: point mass on 1 at d = 0, then r-fold sum
/// followed by the size-biased thinning.
pub fn x_pmf(r: usize, d: usize, k_max: usize) -> Result<Pmf> {
    Ok(x_pmf_chain(r, d, k_max)?.pop().expect("chain is nonempty"))
}

/// All edge-recursion laws for depths 0..=d_max at truncation `k_max`.
pub fn y_pmf_chain(r: usize, d_max: usize, k_max: usize) -> Result<Vec<Pmf>> {
    check_params(r, k_max, r)?;
    let mut chain = Vec::with_capacity(d_max + 1);
    chain.push(Pmf {
        probs: vec![1.0],
        tail_mass: 0.0,
        r,
        d: 0,
        k_max,
    });
    for d in 1..=d_max {
        let prev = &chain[d - 1].probs;
        let c = convolve_power(&thin_shift(prev, k_max), r, k_max);
        chain.push(seal(c, r, d, k_max)?);
    }
    Ok(chain)
}

/// Edge-recursion law at depth d: point mass on 0 at d = 0, then the
/// size-biased thinning followed by the r-fold sum.
pub fn y_pmf(r: usize, d: usize, k_max: usize) -> Result<Pmf> {
    Ok(y_pmf_chain(r, d, k_max)?.pop().expect("chain is nonempty"))
}

/// Generating function of the depth limit of the node recursion:
/// (r - (r-1)s)^(-1/(r-1)).
pub fn limiting_pgf_x(r: usize, s: f64) -> f64 {
    assert!(r >= 2, "limit law needs r >= 2");
    assert!((0.0..=1.0).contains(&s), "pgf argument must lie in [0, 1]");
    let rf = r as f64;
    (rf - (rf - 1.0) * s).powf(-1.0 / (rf - 1.0))
}

/// Generating function of the depth limit of the edge recursion:
/// (r - (r-1)s)^(-r/(r-1)).
pub fn limiting_pgf_y(r: usize, s: f64) -> f64 {
    assert!(r >= 2, "limit law needs r >= 2");
    assert!((0.0..=1.0).contains(&s), "pgf argument must lie in [0, 1]");
    let rf = r as f64;
    (rf - (rf - 1.0) * s).powf(-rf / (rf - 1.0))
}

/// Draws k from the pmf, then the max of k i.i.d. weights (0 when k = 0).
pub fn sample_w_max_with(dist: WeightDist, pmf: &Pmf, rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    // if u falls in the tail region, use the largest tracked value;
    // constructors keep that region below TAIL_LIMIT
    let mut k = pmf.probs.len() - 1;
    let mut acc = 0.0;
    for (i, &p) in pmf.probs.iter().enumerate() {
        acc += p;
        if u < acc {
            k = i;
            break;
        }
    }
    let mut best = 0.0f64;
    for _ in 0..k {
        loop {
            let v: f64 = rng.random();
            if v > 0.0 {
                best = best.max(dist.quantile(v));
                break;
            }
        }
    }
    best
}

/// Seeded convenience wrapper around [`sample_w_max_with`].
pub fn sample_w_max(dist: WeightDist, pmf: &Pmf, seed: u64) -> f64 {
    sample_w_max_with(dist, pmf, &mut ChaCha8Rng::seed_from_u64(seed))
}
