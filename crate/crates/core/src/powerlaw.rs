//! Capped power-law distributions and the per-iteration parameter sampler.
//!
//! `Pr[X = k] = k^-beta / C_r(beta)` on `1..=r`, where `C_r(beta)` is the
//! normalizing sum. Draws use inverse-CDF lookup on a precomputed cumulative
//! table.

use rand::distr::Distribution;
use rand::Rng;

use crate::brkga::Params;
use crate::error::{Error, Result};

/// Exponent used when none is given.
pub const DEFAULT_BETA: f64 = 1.5;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerLaw {
    beta: f64,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl PowerLaw {
    pub fn new(beta: f64, range: usize) -> Result<Self> {
        if !beta.is_finite() || beta <= 1.0 {
            return Err(Error::invalid(format!(
                "power-law exponent must be a finite number > 1, got {beta}"
            )));
        }
        if range < 1 {
            return Err(Error::invalid("power-law range must be at least 1"));
        }
        let weights: Vec<f64> = (1..=range).map(|k| (k as f64).powf(-beta)).collect();
        let norm = neumaier_sum(weights.iter().copied());
        let masses: Vec<f64> = weights.iter().map(|w| w / norm).collect();

        let mut cumulative = Vec::with_capacity(range);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for &m in &masses {
            neumaier_add(&mut sum, &mut comp, m);
            cumulative.push(sum + comp);
        }
        *cumulative.last_mut().expect("range >= 1") = 1.0;

        Ok(PowerLaw {
            beta,
            masses,
            cumulative,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Upper end `r` of the support `1..=r`.
    pub fn range(&self) -> usize {
        self.masses.len()
    }

    /// `Pr[X = k]`, zero outside the support.
    pub fn pmf(&self, k: usize) -> f64 {
        if (1..=self.range()).contains(&k) {
            self.masses[k - 1]
        } else {
            0.0
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `Pr[X <= k]` for `k = 1..=r`; the last entry is exactly 1.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }
}

impl Distribution<usize> for PowerLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cumulative.partition_point(|&c| c <= u) + 1
    }
}

fn neumaier_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

fn neumaier_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0, 0.0);
    for x in xs {
        neumaier_add(&mut sum, &mut comp, x);
    }
    sum + comp
}

pub const ELITE_SUPPORT: usize = 15;
pub const MUTANT_SUPPORT: usize = 20;
pub const BIAS_SUPPORT: usize = 30;

/// Elite fraction for a draw `x` in `1..=15`: `0.1 + 0.01 (15 - x)`.
pub fn elite_fraction(x: usize) -> f64 {
    (10 + ELITE_SUPPORT - x) as f64 / 100.0
}

/// Mutant fraction for a draw `x` in `1..=20`: `0.1 + 0.01 x`.
pub fn mutant_fraction(x: usize) -> f64 {
    (10 + x) as f64 / 100.0
}

/// Crossover bias for a draw `x` in `1..=30`: `0.5 + 0.01 x`.
pub fn crossover_bias(x: usize) -> f64 {
    (50 + x) as f64 / 100.0
}

/// Draws a fresh `(p_e, p_m, p_bias)` triple from three capped power-laws.
///
/// The most likely elite fraction is 0.24, the most likely mutant fraction
/// 0.11 and the most likely bias 0.51.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSampler {
    elite: PowerLaw,
    mutant: PowerLaw,
    bias: PowerLaw,
}

impl ParameterSampler {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(ParameterSampler {
            elite: PowerLaw::new(beta, ELITE_SUPPORT)?,
            mutant: PowerLaw::new(beta, MUTANT_SUPPORT)?,
            bias: PowerLaw::new(beta, BIAS_SUPPORT)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.elite.beta()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Params {
        let x_e = self.elite.sample(rng);
        let x_m = self.mutant.sample(rng);
        let x_b = self.bias.sample(rng);
        Params {
            elite: elite_fraction(x_e),
            mutant: mutant_fraction(x_m),
            bias: crossover_bias(x_b),
        }
    }
}

impl Default for ParameterSampler {
    fn default() -> Self {
        Self::new(DEFAULT_BETA).expect("default exponent is valid")
    }
}
