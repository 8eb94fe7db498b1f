//! The six sampling distributions: parameter bundles, seeded samplers,
//! closed-form moments and densities.
//!
//! Samplers draw from [`crate::rng::SimRng`] only:
//!
//! | kind        | method                                                     |
//! |-------------|------------------------------------------------------------|
//! | uniform     | inverse CDF, `a + (b - a) u`                               |
//! | normal      | Marsaglia polar method (second variate discarded)          |
//! | poisson     | Knuth multiplication for `λt <= 30`, rounded normal above  |
//! | binomial    | sum of Bernoulli trials for `n <= 64`, inverse CDF above   |
//! | exponential | inverse CDF, `-β ln(1 - u)`                                |
//! | chi-square  | sum of `v` squared standard normals                        |

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::{seeded, SimRng};

/// Poisson rates above this switch from Knuth's method to a normal
/// approximation.
pub const POISSON_KNUTH_LIMIT: f64 = 30.0;

/// Binomial trial counts above this switch from summed Bernoullis to
/// inverse-CDF sampling.
pub const BINOMIAL_BERNOULLI_LIMIT: u64 = 64;

pub const DEFAULT_POISSON_RATE: f64 = 4.0;
pub const DEFAULT_BINOMIAL_TRIALS: u64 = 20;
pub const DEFAULT_BINOMIAL_P: f64 = 0.5;

fn default_poisson_rate() -> f64 {
    DEFAULT_POISSON_RATE
}

fn default_binomial_trials() -> u64 {
    DEFAULT_BINOMIAL_TRIALS
}

fn default_binomial_p() -> f64 {
    DEFAULT_BINOMIAL_P
}

/// A distribution and its parameters.
///
/// Serialized as a JSON object tagged by `kind`, e.g.
/// `{"kind": "normal", "mu": 0.0, "sigma": 1.0}`. Poisson and binomial
/// parameters may be omitted, in which case `λt = 4` and `(n, p) = (20, 0.5)`
/// are filled in (and written back out when the spec is re-serialized).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Uniform {
        a: f64,
        b: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
    Poisson {
        #[serde(default = "default_poisson_rate")]
        lambda_t: f64,
    },
    Binomial {
        #[serde(default = "default_binomial_trials")]
        n: u64,
        #[serde(default = "default_binomial_p")]
        p: f64,
    },
    Exponential {
        beta: f64,
    },
    ChiSquare {
        v: u32,
    },
}

/// Mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl DistributionSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        DistributionSpec::Uniform { a, b }.validated()
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        DistributionSpec::Normal { mu, sigma }.validated()
    }

    pub fn poisson(lambda_t: f64) -> Result<Self> {
        DistributionSpec::Poisson { lambda_t }.validated()
    }

    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        DistributionSpec::Binomial { n, p }.validated()
    }

    pub fn exponential(beta: f64) -> Result<Self> {
        DistributionSpec::Exponential { beta }.validated()
    }

    pub fn chi_square(v: u32) -> Result<Self> {
        DistributionSpec::ChiSquare { v }.validated()
    }

    pub fn name(&self) -> &'static str {
        match self {
            DistributionSpec::Uniform { .. } => "uniform",
            DistributionSpec::Normal { .. } => "normal",
            DistributionSpec::Poisson { .. } => "poisson",
            DistributionSpec::Binomial { .. } => "binomial",
            DistributionSpec::Exponential { .. } => "exponential",
            DistributionSpec::ChiSquare { .. } => "chi_square",
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            DistributionSpec::Poisson { .. } | DistributionSpec::Binomial { .. }
        )
    }

    /// Checks the parameter constraints of each kind.
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{what} must be finite, got {x}")))
            }
        };
        match *self {
            DistributionSpec::Uniform { a, b } => {
                finite(a, "a")?;
                finite(b, "b")?;
                if a >= b {
                    return Err(invalid(format!("uniform needs a < b, got a={a}, b={b}")));
                }
            }
            DistributionSpec::Normal { mu, sigma } => {
                finite(mu, "mu")?;
                finite(sigma, "sigma")?;
                if sigma <= 0.0 {
                    return Err(invalid(format!("normal needs sigma > 0, got {sigma}")));
                }
            }
            DistributionSpec::Poisson { lambda_t } => {
                finite(lambda_t, "lambda_t")?;
                if lambda_t <= 0.0 {
                    return Err(invalid(format!("poisson needs lambda_t > 0, got {lambda_t}")));
                }
            }
            DistributionSpec::Binomial { n, p } => {
                if n < 1 {
                    return Err(invalid("binomial needs n >= 1"));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(invalid(format!("binomial needs 0 <= p <= 1, got {p}")));
                }
            }
            DistributionSpec::Exponential { beta } => {
                finite(beta, "beta")?;
                if beta <= 0.0 {
                    return Err(invalid(format!("exponential needs beta > 0, got {beta}")));
                }
            }
            DistributionSpec::ChiSquare { v } => {
                if v < 1 {
                    return Err(invalid("chi-square needs v >= 1"));
                }
            }
        }
        Ok(())
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Closed-form mean and variance.
    pub fn moments(&self) -> Moments {
        let (mean, variance) = match *self {
            DistributionSpec::Uniform { a, b } => ((a + b) / 2.0, (b - a).powi(2) / 12.0),
            DistributionSpec::Normal { mu, sigma } => (mu, sigma * sigma),
            DistributionSpec::Poisson { lambda_t } => (lambda_t, lambda_t),
            DistributionSpec::Binomial { n, p } => {
                let n = n as f64;
                (n * p, n * p * (1.0 - p))
            }
            DistributionSpec::Exponential { beta } => (beta, beta * beta),
            DistributionSpec::ChiSquare { v } => (v as f64, 2.0 * v as f64),
        };
        Moments { mean, variance }
    }

    /// Density at `x`; the probability mass for the discrete kinds (zero off
    /// the integer support).
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            DistributionSpec::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sigma)
            }
            DistributionSpec::Poisson { lambda_t } => match as_count(x) {
                Some(k) => (-lambda_t + k as f64 * lambda_t.ln() - ln_factorial(k)).exp(),
                None => 0.0,
            },
            DistributionSpec::Binomial { n, p } => match as_count(x) {
                Some(k) if k <= n => binomial_pmf(n, p, k),
                _ => 0.0,
            },
            DistributionSpec::Exponential { beta } => {
                if x > 0.0 {
                    (-x / beta).exp() / beta
                } else {
                    0.0
                }
            }
            DistributionSpec::ChiSquare { v } => {
                if x > 0.0 {
                    let half = v as f64 / 2.0;
                    ((half - 1.0) * x.ln() - x / 2.0 - half * 2f64.ln() - ln_gamma_half(v)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// One draw using `rng`.
    pub fn draw(&self, rng: &mut SimRng) -> f64 {
        match *self {
            DistributionSpec::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            DistributionSpec::Normal { mu, sigma } => mu + sigma * standard_normal(rng),
            DistributionSpec::Poisson { lambda_t } => {
                if lambda_t <= POISSON_KNUTH_LIMIT {
                    poisson_knuth(lambda_t, rng) as f64
                } else {
                    (lambda_t + lambda_t.sqrt() * standard_normal(rng)).round().max(0.0)
                }
            }
            DistributionSpec::Binomial { n, p } => {
                if n <= BINOMIAL_BERNOULLI_LIMIT {
                    (0..n).filter(|_| rng.random::<f64>() < p).count() as f64
                } else {
                    binomial_inverse_cdf(n, p, rng.random::<f64>()) as f64
                }
            }
            DistributionSpec::Exponential { beta } => -beta * (1.0 - rng.random::<f64>()).ln(),
            DistributionSpec::ChiSquare { v } => (0..v)
                .map(|_| {
                    let z = standard_normal(rng);
                    z * z
                })
                .sum(),
        }
    }
}

/// `count` independent draws from a fresh generator seeded with `seed`.
pub fn sample(spec: &DistributionSpec, count: usize, seed: u64) -> Result<Vec<f64>> {
    spec.validate()?;
    if count == 0 {
        return Err(invalid("sample count must be positive"));
    }
    let mut rng = seeded(seed);
    Ok((0..count).map(|_| spec.draw(&mut rng)).collect())
}

/// Validated closed-form moments.
pub fn analytic_moments(spec: &DistributionSpec) -> Result<Moments> {
    spec.validate()?;
    Ok(spec.moments())
}

/// Validated pointwise density.
pub fn density(spec: &DistributionSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    Ok(spec.density(x))
}

/// Marsaglia's polar method.
fn standard_normal(rng: &mut SimRng) -> f64 {
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

fn poisson_knuth(lambda: f64, rng: &mut SimRng) -> u64 {
    let limit = (-lambda).exp();
    let mut k = 0;
    let mut product = rng.random::<f64>();
    while product > limit {
        k += 1;
        product *= rng.random::<f64>();
    }
    k
}

fn binomial_inverse_cdf(n: u64, p: f64, u: f64) -> u64 {
    let mut cumulative = 0.0;
    for k in 0..n {
        cumulative += binomial_pmf(n, p, k);
        if u < cumulative {
            return k;
        }
    }
    n
}

fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let ln_choose = ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
    (ln_choose + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
}

fn as_count(x: f64) -> Option<u64> {
    (x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64).then_some(x as u64)
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `ln Γ(v / 2)` for a positive integer `v`, via `Γ(1) = 1`, `Γ(1/2) = √π`
/// and `Γ(x + 1) = x Γ(x)`.
fn ln_gamma_half(v: u32) -> f64 {
    let (mut x, mut acc) = if v.is_multiple_of(2) { (1.0, 0.0) } else { (0.5, 0.5 * PI.ln()) };
    let target = v as f64 / 2.0;
    while x < target {
        acc += x.ln();
        x += 1.0;
    }
    acc
}
