//! Competence draws from truncated normals and reproducible random streams.

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::voting::CompetencePanel;

/// Consecutive rejections after which a draw is reported as a failure.
pub const MAX_REJECTIONS: usize = 100_000;

pub const DEFAULT_LO: f64 = 0.1;
pub const DEFAULT_HI: f64 = 0.9;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream identified by a 64-bit key.
///
/// Substreams are derived from the key alone, never from the generator
/// state, so deriving is pure and `s.derive(&[a, b]) == s.derive(&[a]).derive(&[b])`.
/// Any work item that owns its own derived stream produces the same draws no
/// matter which thread runs it or in what order.
#[derive(Debug, Clone)]
pub struct RandomStream {
    key: u64,
    rng: Xoshiro256PlusPlus,
}

impl RandomStream {
    pub fn from_seed(seed: u64) -> Self {
        Self::from_key(mix64(seed ^ GOLDEN))
    }

    fn from_key(key: u64) -> Self {
        Self {
            key,
            rng: Xoshiro256PlusPlus::seed_from_u64(key),
        }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Independent stream for the given index path. The parent is untouched.
    pub fn derive(&self, path: &[u64]) -> Self {
        let key = path.iter().fold(self.key, |k, &i| {
            mix64(k ^ mix64(i.wrapping_add(GOLDEN)).rotate_left(23))
        });
        Self::from_key(key)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

pub fn derive_substream(rng: &RandomStream, path: &[u64]) -> RandomStream {
    rng.derive(path)
}

/// `N(mu, sigma)` conditioned on the open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormalSpec {
    mu: f64,
    sigma: f64,
    lo: f64,
    hi: f64,
}

impl TruncatedNormalSpec {
    pub fn new(mu: f64, sigma: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "parameters must be finite (mu={mu}, sigma={sigma}, lo={lo}, hi={hi})"
            )));
        }
        if sigma <= 0.0 {
            return Err(Error::InvalidSpec(format!("sigma must be positive, got {sigma}")));
        }
        if lo >= hi {
            return Err(Error::InvalidSpec(format!(
                "lower bound {lo} must be below upper bound {hi}"
            )));
        }
        Ok(Self { mu, sigma, lo, hi })
    }

    /// Spec with the default competence bounds `(0.1, 0.9)`.
    pub fn with_default_bounds(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(mu, sigma, DEFAULT_LO, DEFAULT_HI)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    fn failure(&self) -> Error {
        Error::SamplingFailure {
            mu: self.mu,
            sigma: self.sigma,
            lo: self.lo,
            hi: self.hi,
            attempts: MAX_REJECTIONS,
        }
    }
}

/// One rejection-sampled draw, strictly inside `(lo, hi)`.
pub fn sample_truncated_normal(spec: &TruncatedNormalSpec, rng: &mut RandomStream) -> Result<f64> {
    for _ in 0..MAX_REJECTIONS {
        let z: f64 = rng.sample(StandardNormal);
        let x = spec.mu + spec.sigma * z;
        if x > spec.lo && x < spec.hi {
            return Ok(x);
        }
    }
    Err(spec.failure())
}

pub(crate) fn fill_truncated_normal(
    spec: &TruncatedNormalSpec,
    rng: &mut RandomStream,
    out: &mut [f64],
) -> Result<()> {
    for slot in out {
        *slot = sample_truncated_normal(spec, rng)?;
    }
    Ok(())
}

/// `size` independent competences. Bounds must lie within `[0, 1]`, so the
/// result is a valid expert panel (and therefore also a valid judge panel).
pub fn sample_panel(
    size: usize,
    spec: &TruncatedNormalSpec,
    rng: &mut RandomStream,
) -> Result<CompetencePanel> {
    if size == 0 {
        return Err(Error::Empty {
            what: "sampled panel",
        });
    }
    if spec.lo < 0.0 || spec.hi > 1.0 {
        return Err(Error::InvalidSpec(format!(
            "competence bounds ({}, {}) must lie within [0, 1]",
            spec.lo, spec.hi
        )));
    }
    let mut probs = vec![0.0; size];
    fill_truncated_normal(spec, rng, &mut probs)?;
    CompetencePanel::experts(probs)
}
