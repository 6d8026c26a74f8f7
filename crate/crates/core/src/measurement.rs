//! Heralding statistics of the spin x-basis measurement.
//!
//! After the light-ensemble interaction, measuring the collective spin along
//! x projects the optical mode onto one of `2J + 1` Kraus branches. This
//! module gives the Kraus amplitudes, the full outcome distribution, and the
//! probability of the two "success" outcomes `x = +-J` in several forms
//! (exact finite sum, closed binomial form, large-J asymptotic).

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{LN_2, PI};

use crate::spin::{d_column, ln_binomial_real, SpinError, TotalSpin};
use crate::state::{EncodingParams, StateError};

/// Distribution over magnetic sublevels of the initial collective spin.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPrior {
    j: TotalSpin,
    /// Real amplitudes indexed like `magnetic_indices()` (ascending `m`).
    amplitudes: Vec<f64>,
}

impl SpinPrior {
    /// Spin coherent state along +x: amplitudes `d_{m,J}(pi/2)`.
    pub fn coherent_x(j: TotalSpin) -> Self {
        let amplitudes = d_column(j, j.two_j() as i64).unwrap();
        let prior = Self { j, amplitudes };
        debug_assert!((prior.norm_sq() - 1.0).abs() <= 1e-12);
        prior
    }

    /// Arbitrary real amplitudes over the `2J + 1` sublevels; must have the
    /// right length and norm within 1e-9.
    pub fn custom(j: TotalSpin, amplitudes: Vec<f64>) -> Result<Self, StateError> {
        if amplitudes.len() != j.dimension() {
            return Err(StateError::DomainError(format!(
                "prior needs {} amplitudes, got {}",
                j.dimension(),
                amplitudes.len()
            )));
        }
        let prior = Self { j, amplitudes };
        if (prior.norm_sq() - 1.0).abs() > 1e-9 {
            return Err(StateError::DomainError(format!(
                "prior norm^2 = {}, expected 1",
                prior.norm_sq()
            )));
        }
        Ok(prior)
    }

    pub fn j(&self) -> TotalSpin {
        self.j
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Amplitude for sublevel `m` given as `2m`.
    pub fn amplitude(&self, two_m: i64) -> Result<f64, SpinError> {
        let idx = self.j.check_index(two_m)?;
        Ok(self.amplitudes[idx as usize])
    }
}

/// The measurement operator for outcome `x` as a superposition of position
/// shifts: pairs `(g m, c_m d_{m,x})` over the magnetic sublevels. Feeding
/// the pairs to [`crate::state::apply_kraus`] on the squeezed vacuum and
/// normalizing reproduces the heralded state.
pub fn kraus_amplitudes(
    params: &EncodingParams,
    prior: &SpinPrior,
    two_x: i64,
) -> Result<Vec<(f64, Complex64)>, StateError> {
    Ok(kraus_weights(params, prior, two_x)?
        .into_iter()
        .zip(params.j.magnetic_indices())
        .map(|(w, two_m)| (params.g * two_m as f64 / 2.0, Complex64::new(w, 0.0)))
        .collect())
}

fn kraus_weights(
    params: &EncodingParams,
    prior: &SpinPrior,
    two_x: i64,
) -> Result<Vec<f64>, StateError> {
    if prior.j() != params.j {
        return Err(StateError::DomainError(
            "prior spin differs from encoding spin".into(),
        ));
    }
    let col = d_column(params.j, two_x)?;
    Ok(params
        .j
        .magnetic_indices()
        .zip(col)
        .map(|(two_m, d)| prior.amplitude(two_m).unwrap() * d)
        .collect())
}

/// Probability of outcome `x` for an arbitrary prior: the double sum over
/// sublevels with squeezed-Gaussian overlap factors
/// `exp[-(g^2 e^{2r}/4)(m - m')^2]`.
pub fn outcome_probability(
    params: &EncodingParams,
    prior: &SpinPrior,
    two_x: i64,
) -> Result<f64, StateError> {
    let w = kraus_weights(params, prior, two_x)?;
    let quarter = params.g * params.g * (2.0 * params.r).exp() / 4.0;
    let mut acc = 0.0;
    for (i, two_m) in params.j.magnetic_indices().enumerate() {
        for (k, two_mp) in params.j.magnetic_indices().enumerate() {
            let dm = (two_m - two_mp) as f64 / 2.0;
            acc += w[i] * w[k] * (-quarter * dm * dm).exp();
        }
    }
    Ok(acc)
}

/// `outcome_probability` specialized to the spin coherent prior.
pub fn outcome_probability_coherent(
    params: &EncodingParams,
    two_x: i64,
) -> Result<f64, StateError> {
    outcome_probability(params, &SpinPrior::coherent_x(params.j), two_x)
}

/// Probability of every outcome, ordered by ascending `x`.
#[derive(Debug, Clone, Serialize)]
pub struct OutcomeDistribution {
    pub two_xs: Vec<i64>,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

pub fn outcome_distribution(
    params: &EncodingParams,
    prior: &SpinPrior,
) -> Result<OutcomeDistribution, StateError> {
    let two_xs: Vec<i64> = params.j.magnetic_indices().collect();
    let probabilities = two_xs
        .iter()
        .map(|&two_x| outcome_probability(params, prior, two_x))
        .collect::<Result<_, _>>()?;
    Ok(OutcomeDistribution {
        two_xs,
        probabilities,
    })
}

/// How to compute the success probability `P(+J) + P(-J)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuccessMethod {
    /// Full two-outcome sum `P(+J) + P(-J)` under the coherent prior and
    /// symmetric encoding; ground truth, includes the finite-spike-width
    /// cross terms.
    ExactSum,
    /// `2^{1-4J} C(4J, 2J)`: the narrow-spike limit, where the cross terms
    /// `e^{-pi^2 J (m-m')^2 / 8}` are dropped.
    ClosedBinomial,
    /// `sqrt(2/(pi J)) (1 - 1/(16 J))`, large-J expansion of the binomial.
    Asymptotic,
}

/// Success probability of a single run at spin `J` under the symmetric
/// encoding.
pub fn success_probability(j: TotalSpin, method: SuccessMethod) -> Result<f64, StateError> {
    match method {
        SuccessMethod::ExactSum => {
            let params = crate::metrics::symmetric_params(j);
            let p = outcome_probability_coherent(&params, j.two_j() as i64)?;
            let m = outcome_probability_coherent(&params, -(j.two_j() as i64))?;
            Ok(p + m)
        }
        SuccessMethod::ClosedBinomial => Ok(success_probability_continuous(j.j(), method)),
        SuccessMethod::Asymptotic => Ok(success_probability_continuous(j.j(), method)),
    }
}

/// Closed-form and asymptotic success probabilities for arbitrary real
/// `J > 0` (the binomial form continues via the gamma function).
pub fn success_probability_continuous(j: f64, method: SuccessMethod) -> f64 {
    match method {
        SuccessMethod::ExactSum => panic!("exact sum needs a discrete half-integer spin"),
        SuccessMethod::ClosedBinomial => {
            ((1.0 - 4.0 * j) * LN_2 + ln_binomial_real(4.0 * j, 2.0 * j)).exp()
        }
        SuccessMethod::Asymptotic => (2.0 / (PI * j)).sqrt() * (1.0 - 1.0 / (16.0 * j)),
    }
}

/// Success probability as a function of target squeezing in dB:
/// `10^{-dB/20} - (pi/32) 10^{-3 dB/20}`.
pub fn success_probability_from_db(db: f64) -> f64 {
    10f64.powf(-db / 20.0) - PI / 32.0 * 10f64.powf(-3.0 * db / 20.0)
}

/// Success probability of the repeat-until-success variant that reuses the
/// ensemble: `2^{1-2J}` for `N = 2J` atoms.
pub fn iterated_scheme_probability(j: f64) -> f64 {
    ((1.0 - 2.0 * j) * LN_2).exp()
}

#[allow(dead_code)]
fn ln_gamma_alias(x: f64) -> f64 {
    ln_gamma(x)
}
