//! Quantile functions and seeded sampling for the two distribution families
//! the model uses: normal task times and Poisson defect counts.
//!
//! Everything random in the crate is drawn through [`SampleStream`], a
//! ChaCha8 generator keyed by an [`RngSeed`]. Streams are cheap to create, so
//! callers derive one per run (and per task within a run) instead of sharing.

use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};

/// Seed for a reproducible family of sample streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Seed for child `index`, computed as `seed ^ splitmix64(index)`.
    pub fn derive(self, index: u64) -> RngSeed {
        RngSeed(self.0 ^ splitmix64(index))
    }

    /// The primary stream for this seed.
    pub fn stream(self) -> SampleStream {
        self.substream(0)
    }

    /// An independent ChaCha stream under the same key.
    pub fn substream(self, stream_id: u64) -> SampleStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream_id);
        SampleStream(rng)
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Single-owner random stream. Not `Clone`: two owners would silently share draws.
#[derive(Debug)]
pub struct SampleStream(ChaCha8Rng);

impl SampleStream {
    pub fn next_u64(&mut self) -> u64 {
        self.0.random()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalParams {
    pub mean: f64,
    pub sd: f64,
}

impl NormalParams {
    pub const fn new(mean: f64, sd: f64) -> Self {
        Self { mean, sd }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonParams {
    pub rate: f64,
}

/// Standard normal CDF, `0.5 * erfc(-x / sqrt 2)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

// Acklam's rational approximation, relative error about 1.15e-9 before refinement.
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.38357751867269e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

fn acklam_lower_half(p: f64) -> f64 {
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Inverse of the standard normal CDF.
///
/// The lower half is computed directly (rational approximation plus one
/// Halley step against [`normal_cdf`]); the upper half uses the reflection
/// `z(p) = -z(1 - p)`, where `1 - p` is exact for `p >= 0.5`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            function: "normal_quantile",
            value: p,
            domain: "(0, 1)",
        });
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    let x = acklam_lower_half(p);
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Running partial sums of the Poisson pmf, `P(X <= 0), P(X <= 1), ...`.
///
/// Terms follow `t_i = t_{i-1} * rate / i`. Above `LOG_DOMAIN_RATE` the
/// recurrence runs on logarithms because `exp(-rate)` underflows.
struct PoissonPartialSums {
    rate: f64,
    i: u64,
    term: f64,
    log_term: f64,
    sum: f64,
}

const LOG_DOMAIN_RATE: f64 = 700.0;

impl PoissonPartialSums {
    fn new(rate: f64) -> Self {
        let term = (-rate).exp();
        Self {
            rate,
            i: 0,
            term,
            log_term: -rate,
            sum: term,
        }
    }

    /// True once the remaining tail can no longer change the sum.
    fn converged(&self) -> bool {
        self.i as f64 > self.rate && self.term <= self.sum * f64::EPSILON * 0.25
    }

    fn advance(&mut self) {
        self.i += 1;
        let i = self.i as f64;
        if self.rate < LOG_DOMAIN_RATE {
            self.term *= self.rate / i;
        } else {
            self.log_term += self.rate.ln() - i.ln();
            self.term = self.log_term.exp();
        }
        self.sum += self.term;
    }
}

/// `P(X <= k)` for `X ~ Poisson(rate)`.
pub fn poisson_cdf(k: u64, rate: f64) -> Result<f64> {
    check_rate("poisson_cdf", rate)?;
    if rate == 0.0 {
        return Ok(1.0);
    }
    let mut sums = PoissonPartialSums::new(rate);
    while sums.i < k && !sums.converged() {
        sums.advance();
    }
    Ok(sums.sum.clamp(0.0, 1.0))
}

/// Smallest `k` with `poisson_cdf(k, rate) >= p`. `p = 0` gives 0.
pub fn poisson_quantile(p: f64, rate: f64) -> Result<u64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain {
            function: "poisson_quantile",
            value: p,
            domain: "[0, 1)",
        });
    }
    check_rate("poisson_quantile", rate)?;
    if p == 0.0 || rate == 0.0 {
        return Ok(0);
    }
    let mut sums = PoissonPartialSums::new(rate);
    while sums.sum.clamp(0.0, 1.0) < p && !sums.converged() {
        sums.advance();
    }
    Ok(sums.i)
}

fn check_rate(function: &'static str, rate: f64) -> Result<()> {
    if rate >= 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: rate,
            domain: "[0, inf)",
        })
    }
}

/// Draw from `N(mean, sd^2)`, clamped below at zero.
pub fn sample_normal(params: NormalParams, stream: &mut SampleStream) -> f64 {
    if params.sd == 0.0 {
        return params.mean.max(0.0);
    }
    let z: f64 = StandardNormal.sample(&mut stream.0);
    (params.mean + params.sd * z).max(0.0)
}

/// Poisson draw; a zero rate returns 0 without consuming the stream.
pub fn sample_poisson(params: PoissonParams, stream: &mut SampleStream) -> u64 {
    if params.rate.is_nan() || params.rate <= 0.0 {
        return 0;
    }
    // Poisson::new only rejects non-positive or non-finite rates.
    match Poisson::new(params.rate) {
        Ok(d) => d.sample(&mut stream.0) as u64,
        Err(_) => 0,
    }
}
