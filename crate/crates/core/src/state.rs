//! Wavefunctions as analytic Gaussian combs.
//!
//! Every state handled here is a finite superposition of Gaussian components
//! in one quadrature. A component may carry a linear phase (`phase_slope`),
//! which is what a momentum displacement does to a position-space Gaussian;
//! with that one extension, all constructions in the protocol stay in closed
//! form: norms, overlaps, displacements, and modulations never touch a grid.
//! Grid evaluation and the discrete Fourier check live alongside as the
//! numerical cross-checks of the analytic forms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use thiserror::Error;

use crate::measurement;
use crate::spin::{d_column, ln_binomial, SpinError, TotalSpin};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error(transparent)]
    Spin(#[from] SpinError),
    /// The requested outcome has numerically vanishing heralding probability.
    #[error("outcome 2x = {two_x} has vanishing probability ({prob:.3e}); it cannot herald")]
    ZeroProbabilityOutcome { two_x: i64, prob: f64 },
    #[error("grid step {step} exceeds sigma_min/8 = {max_step} for this comb")]
    GridTooCoarse { step: f64, max_step: f64 },
    #[error("grid [{min}, {max}] does not cover the comb support [{need_min}, {need_max}]")]
    GridTooNarrow {
        min: f64,
        max: f64,
        need_min: f64,
        need_max: f64,
    },
    #[error("operands live in different quadratures")]
    QuadratureMismatch,
    #[error("{0}")]
    DomainError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    Position,
    Momentum,
}

/// One Gaussian component: `amp * exp(i k (u - c)) * exp(-(u - c)^2 / 2 v)`
/// with center `c`, variance `v`, and phase slope `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub center: f64,
    pub variance: f64,
    pub amplitude: Complex64,
    /// Linear phase in the conjugate variable; zero for plain combs.
    pub phase_slope: f64,
}

impl GaussianComponent {
    pub fn new(center: f64, variance: f64, amplitude: Complex64) -> Self {
        Self {
            center,
            variance,
            amplitude,
            phase_slope: 0.0,
        }
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        let du = u - self.center;
        self.amplitude
            * (Complex64::new(-du * du / (2.0 * self.variance), self.phase_slope * du)).exp()
    }
}

// Serialized form: {center, variance, amp_re, amp_im} plus the slope only
// when it is nonzero, so plain combs round-trip in the documented schema.
#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    center: f64,
    variance: f64,
    amp_re: f64,
    amp_im: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    phase_slope: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl Serialize for GaussianComponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComponentRepr {
            center: self.center,
            variance: self.variance,
            amp_re: self.amplitude.re,
            amp_im: self.amplitude.im,
            phase_slope: self.phase_slope,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianComponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ComponentRepr::deserialize(d)?;
        Ok(Self {
            center: r.center,
            variance: r.variance,
            amplitude: Complex64::new(r.amp_re, r.amp_im),
            phase_slope: r.phase_slope,
        })
    }
}

/// Finite superposition of Gaussian components in one quadrature.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GaussianComb {
    pub quadrature: Quadrature,
    pub components: Vec<GaussianComponent>,
    #[serde(skip)]
    pub normalized: bool,
}

impl<'de> Deserialize<'de> for GaussianComb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            quadrature: Quadrature,
            components: Vec<GaussianComponent>,
        }
        let r = Repr::deserialize(d)?;
        let mut comb = GaussianComb {
            quadrature: r.quadrature,
            components: r.components,
            normalized: false,
        };
        comb.normalized = (comb.norm_sq() - 1.0).abs() <= 1e-9;
        Ok(comb)
    }
}

/// `int exp(-alpha u^2 + beta u + gamma) du` over the real line.
fn gaussian_integral(alpha: f64, beta: Complex64, gamma: Complex64) -> Complex64 {
    (PI / alpha).sqrt() * (beta * beta / (4.0 * alpha) + gamma).exp()
}

fn pair_overlap(a: &GaussianComponent, b: &GaussianComponent) -> Complex64 {
    // int conj(psi_a) psi_b du, amplitudes excluded.
    let alpha = 0.5 / a.variance + 0.5 / b.variance;
    let beta = Complex64::new(
        a.center / a.variance + b.center / b.variance,
        b.phase_slope - a.phase_slope,
    );
    let gamma = Complex64::new(
        -a.center * a.center / (2.0 * a.variance) - b.center * b.center / (2.0 * b.variance),
        a.phase_slope * a.center - b.phase_slope * b.center,
    );
    gaussian_integral(alpha, beta, gamma)
}

impl GaussianComb {
    pub fn new(quadrature: Quadrature, components: Vec<GaussianComponent>) -> Self {
        Self {
            quadrature,
            components,
            normalized: false,
        }
    }

    /// Unit-norm squeezed/vacuum Gaussian centered at `center`.
    pub fn single_gaussian(quadrature: Quadrature, center: f64, variance: f64) -> Self {
        let amp = Complex64::new((PI * variance).powf(-0.25), 0.0);
        let mut comb = Self::new(
            quadrature,
            vec![GaussianComponent::new(center, variance, amp)],
        );
        comb.normalized = true;
        comb
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        self.components.iter().map(|c| c.eval(u)).sum()
    }

    /// Analytic `int |psi|^2 du` via pairwise Gaussian overlaps.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in &self.components {
            for b in &self.components {
                acc += a.amplitude.conj() * b.amplitude * pair_overlap(a, b);
            }
        }
        acc.re
    }

    /// Rescale amplitudes to unit analytic norm.
    pub fn normalize(&mut self) {
        let n = self.norm_sq().sqrt();
        for c in &mut self.components {
            c.amplitude /= n;
        }
        self.normalized = true;
    }

    /// Displace in the comb's own variable: centers move by `du`.
    pub fn displaced(&self, du: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.center += du;
        }
        out
    }

    /// Multiply by `exp(i k u)`, i.e. displace the conjugate variable by `k`.
    pub fn modulated(&self, k: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.amplitude *= Complex64::new(0.0, k * c.center).exp();
            c.phase_slope += k;
        }
        out
    }

    fn min_sigma(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.variance)
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    fn max_sigma(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.variance)
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Grid satisfying the step and coverage invariants for this comb.
    pub fn default_grid(&self) -> QuadratureGrid {
        let lo = self
            .components
            .iter()
            .map(|c| c.center)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .components
            .iter()
            .map(|c| c.center)
            .fold(f64::NEG_INFINITY, f64::max);
        let pad = 6.0 * self.max_sigma();
        QuadratureGrid {
            min: lo - pad,
            max: hi + pad,
            step: self.min_sigma() / 8.0,
        }
    }
}

/// `<a|b>` in closed form. Errors if the states live in different quadratures.
pub fn overlap(a: &GaussianComb, b: &GaussianComb) -> Result<Complex64, StateError> {
    if a.quadrature != b.quadrature {
        return Err(StateError::QuadratureMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for ca in &a.components {
        for cb in &b.components {
            acc += ca.amplitude.conj() * cb.amplitude * pair_overlap(ca, cb);
        }
    }
    Ok(acc)
}

/// `|<a|b>|^2 / (<a|a><b|b>)`; invariant under global phases by construction.
pub fn fidelity(a: &GaussianComb, b: &GaussianComb) -> Result<f64, StateError> {
    let ov = overlap(a, b)?;
    Ok(ov.norm_sqr() / (a.norm_sq() * b.norm_sq()))
}

/// One preparation run: total spin `J`, optical squeezing `r`, coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncodingParams {
    pub j: TotalSpin,
    pub r: f64,
    pub g: f64,
}

impl EncodingParams {
    pub fn new(j: TotalSpin, r: f64, g: f64) -> Self {
        Self { j, r, g }
    }

    /// Spike variance of the conditional position comb, `e^{-2r}`.
    pub fn spike_variance_q(&self) -> f64 {
        (-2.0 * self.r).exp()
    }

    /// True iff `e^{2r} = pi J / 2` and `g = sqrt(pi)` within 1e-12.
    pub fn is_symmetric(&self) -> bool {
        let target = PI * self.j.j() / 2.0;
        ((2.0 * self.r).exp() - target).abs() <= 1e-12 * target.max(1.0)
            && (self.g - PI.sqrt()).abs() <= 1e-12
    }
}

/// Conditional optical state for spin-measurement outcome `x`, as a position
/// comb of `2J + 1` spikes at `g m` with common variance `e^{-2r}`.
pub fn conditional_position_state(
    params: &EncodingParams,
    two_x: i64,
) -> Result<GaussianComb, StateError> {
    params.j.check_index(two_x)?;
    let prob = measurement::outcome_probability_coherent(params, two_x)?;
    if prob < 1e-280 {
        return Err(StateError::ZeroProbabilityOutcome { two_x, prob });
    }
    let pref = (params.r / 2.0).exp() / (prob.sqrt() * PI.powf(0.25));
    let variance = params.spike_variance_q();
    let edge = d_column(params.j, params.j.two_j() as i64)?;
    let col = d_column(params.j, two_x)?;
    let components = params
        .j
        .magnetic_indices()
        .zip(edge.iter().zip(&col))
        .map(|(two_m, (de, dx))| {
            let m = two_m as f64 / 2.0;
            GaussianComponent::new(
                params.g * m,
                variance,
                Complex64::new(pref * de * dx, 0.0),
            )
        })
        .collect();
    let mut comb = GaussianComb::new(Quadrature::Position, components);
    comb.normalized = (comb.norm_sq() - 1.0).abs() <= 1e-9;
    debug_assert!(comb.normalized);
    Ok(comb)
}

/// Pointwise momentum-space amplitude of the conditional state: the generic
/// sum over magnetic sublevels, valid for every outcome.
pub fn conditional_momentum_amplitude(
    params: &EncodingParams,
    two_x: i64,
    p: f64,
) -> Result<Complex64, StateError> {
    params.j.check_index(two_x)?;
    let prob = measurement::outcome_probability_coherent(params, two_x)?;
    if prob < 1e-280 {
        return Err(StateError::ZeroProbabilityOutcome { two_x, prob });
    }
    let pref = (-params.r / 2.0).exp() / (prob.sqrt() * PI.powf(0.25));
    let envelope = (-p * p / (2.0 * (2.0 * params.r).exp())).exp();
    let edge = d_column(params.j, params.j.two_j() as i64)?;
    let col = d_column(params.j, two_x)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (two_m, (de, dx)) in params.j.magnetic_indices().zip(edge.iter().zip(&col)) {
        let m = two_m as f64 / 2.0;
        acc += de * dx * Complex64::new(0.0, -params.g * m * p).exp();
    }
    Ok(pref * envelope * acc)
}

/// Closed product form of the momentum wavefunction for `x = +-J`:
/// `cos^{2J}(gp/2)` for `+J`, `e^{iJpi} sin^{2J}(gp/2)` for `-J`.
pub fn momentum_closed_edge(
    params: &EncodingParams,
    sign: i8,
    p: f64,
) -> Result<Complex64, StateError> {
    let two_x = if sign >= 0 {
        params.j.two_j() as i64
    } else {
        -(params.j.two_j() as i64)
    };
    let prob = measurement::outcome_probability_coherent(params, two_x)?;
    if prob < 1e-280 {
        return Err(StateError::ZeroProbabilityOutcome { two_x, prob });
    }
    let pref = (-params.r / 2.0).exp() / (prob.sqrt() * PI.powf(0.25));
    let envelope = (-p * p / (2.0 * (2.0 * params.r).exp())).exp();
    let n = params.j.two_j(); // 2J
    let comb = if sign >= 0 {
        Complex64::new((params.g * p / 2.0).cos().powi(n as i32), 0.0)
    } else {
        Complex64::from_polar(1.0, params.j.j() * PI) * (params.g * p / 2.0).sin().powi(n as i32)
    };
    Ok(pref * envelope * comb)
}

/// Closed form of the momentum wavefunction for `x = 0` (integer `J` only):
/// `i^J 2^{-J} C(2J,J)^{1/2} sin^J(gp)` under the Gaussian envelope.
pub fn momentum_closed_x0(params: &EncodingParams, p: f64) -> Result<Complex64, StateError> {
    if !params.j.is_integer() {
        return Err(SpinError::HalfIntegerUnsupported {
            two_j: params.j.two_j(),
        }
        .into());
    }
    let prob = measurement::outcome_probability_coherent(params, 0)?;
    if prob < 1e-280 {
        return Err(StateError::ZeroProbabilityOutcome { two_x: 0, prob });
    }
    let pref = (-params.r / 2.0).exp() / (prob.sqrt() * PI.powf(0.25));
    let envelope = (-p * p / (2.0 * (2.0 * params.r).exp())).exp();
    let j_int = params.j.two_j() / 2;
    let scale = (0.5 * ln_binomial(params.j.two_j(), j_int) - params.j.j() * LN_2).exp();
    let i_pow_j = Complex64::new(0.0, 1.0).powu(j_int);
    Ok(pref * i_pow_j * scale * envelope * (params.g * p).sin().powi(j_int as i32))
}

/// Approximate momentum-side comb for `x` in `{+J, -J, 0}`: each peak of the
/// trigonometric product replaced by a Gaussian of matched curvature under
/// the `e^{-p^2 / 2 e^{2r}}` envelope. Labeled approximate: the exact
/// momentum wavefunctions are the closed product forms above.
pub fn momentum_comb_approx(
    params: &EncodingParams,
    two_x: i64,
) -> Result<GaussianComb, StateError> {
    let two_j = params.j.two_j() as i64;
    if two_x != two_j && two_x != -two_j && !(two_x == 0 && params.j.is_integer()) {
        return Err(StateError::DomainError(format!(
            "approximate momentum comb exists only for 2x in {{+-2J, 0}}, got {two_x}"
        )));
    }
    let prob = measurement::outcome_probability_coherent(params, two_x)?;
    if prob < 1e-280 {
        return Err(StateError::ZeroProbabilityOutcome { two_x, prob });
    }
    let pref = (-params.r / 2.0).exp() / (prob.sqrt() * PI.powf(0.25));
    let env_var = (2.0 * params.r).exp();
    let g = params.g;
    let jf = params.j.j();
    // peak spacing, offset, curvature variance, and per-peak phase
    let (spacing, offset, spike_var, scale): (f64, f64, f64, Complex64) = if two_x == two_j {
        (2.0 * PI / g, 0.0, 2.0 / (jf * g * g), Complex64::new(1.0, 0.0))
    } else if two_x == -two_j {
        (
            2.0 * PI / g,
            PI / g,
            2.0 / (jf * g * g),
            Complex64::from_polar(1.0, jf * PI),
        )
    } else {
        let j_int = params.j.two_j() / 2;
        let amp = (0.5 * ln_binomial(params.j.two_j(), j_int) - jf * LN_2).exp();
        (
            PI / g,
            PI / (2.0 * g),
            1.0 / (jf * g * g),
            Complex64::new(0.0, 1.0).powu(j_int) * amp,
        )
    };
    // cover the envelope out to 7 sigma
    let reach = 7.0 * env_var.sqrt();
    let kmax = ((reach - offset) / spacing).ceil() as i64;
    let mut components = Vec::new();
    for k in -kmax..=kmax {
        let center = offset + k as f64 * spacing;
        if center.abs() > reach {
            continue;
        }
        // x = 0 peaks alternate sign for odd J (sin^J flips each half period)
        let sign = if two_x == 0 && params.j.two_j() / 2 % 2 == 1 && k.rem_euclid(2) == 1 {
            -1.0
        } else {
            1.0
        };
        let amp = pref * sign * (-center * center / (2.0 * env_var)).exp() * scale;
        components.push(GaussianComponent::new(center, spike_var, amp));
    }
    Ok(GaussianComb::new(Quadrature::Momentum, components))
}

/// Logical-basis label for the `|+>` / `|->` target states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

/// Spike count bound keeping truncated envelope weight below 1e-12.
pub fn default_truncation(sigma: f64) -> u32 {
    (7.4 / (sigma * PI.sqrt())).ceil() as u32
}

/// Target logical state: spikes on the sqrt(pi) grid with variance sigma^2,
/// weighted by a Gaussian envelope of variance 1/sigma^2 centered at `q0`,
/// with uniform (+) or alternating (-) spike phases.
pub fn target_state(
    parity: Parity,
    sigma: f64,
    q0: f64,
    truncation: u32,
) -> Result<GaussianComb, StateError> {
    if !(sigma > 0.0) {
        return Err(StateError::DomainError(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if q0.abs() > PI.sqrt() / 2.0 + 1e-12 {
        return Err(StateError::DomainError(format!(
            "|q0| = {} exceeds sqrt(pi)/2; reduce modulo the spike spacing",
            q0.abs()
        )));
    }
    let t = truncation as i64;
    let components = (-t..=t)
        .map(|s| {
            let center = s as f64 * PI.sqrt();
            let envelope = (-sigma * sigma * (center - q0) * (center - q0) / 2.0).exp();
            let sign = match parity {
                Parity::Plus => 1.0,
                Parity::Minus => {
                    if s % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            GaussianComponent::new(center, sigma * sigma, Complex64::new(sign * envelope, 0.0))
        })
        .collect();
    let mut comb = GaussianComb::new(Quadrature::Position, components);
    comb.normalize();
    Ok(comb)
}

/// Heralded resource state for outcome `x = +-J`: the conditional state, with
/// the centering shift of -g/2 applied for half-integer `J` so that a spike
/// sits at `q = 0`.
pub fn resource_state(params: &EncodingParams, sign: i8) -> Result<GaussianComb, StateError> {
    let two_x = if sign >= 0 {
        params.j.two_j() as i64
    } else {
        -(params.j.two_j() as i64)
    };
    let comb = conditional_position_state(params, two_x)?;
    if params.j.is_integer() {
        Ok(comb)
    } else {
        Ok(comb.displaced(-params.g / 2.0))
    }
}

/// `x = 0` conditional state with the momentum displacement `exp(i pi q/2g)`
/// applied; approximates the logical `|0>` (integer `J` only).
pub fn x0_logical_state(params: &EncodingParams) -> Result<GaussianComb, StateError> {
    if !params.j.is_integer() {
        return Err(SpinError::HalfIntegerUnsupported {
            two_j: params.j.two_j(),
        }
        .into());
    }
    let comb = conditional_position_state(params, 0)?;
    Ok(comb.modulated(PI / (2.0 * params.g)))
}

/// Uniform evaluation grid in one quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl QuadratureGrid {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        Self { min, max, step }
    }

    /// Default grid for one encoding: spikes extend to +-gJ, padded by six
    /// spike widths, sampled at eight points per spike sigma.
    pub fn default_for(params: &EncodingParams) -> Self {
        let sigma = (-params.r).exp();
        let half = params.g * params.j.j() + 6.0 * sigma;
        Self {
            min: -half,
            max: half,
            step: sigma / 8.0,
        }
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.min + k as f64 * self.step)
    }

    fn validate_for(&self, comb: &GaussianComb) -> Result<(), StateError> {
        let max_step = comb.min_sigma() / 8.0;
        if self.step > max_step * (1.0 + 1e-9) {
            return Err(StateError::GridTooCoarse {
                step: self.step,
                max_step,
            });
        }
        let pad = 6.0 * comb.max_sigma();
        let lo = comb
            .components
            .iter()
            .map(|c| c.center)
            .fold(f64::INFINITY, f64::min)
            - pad;
        let hi = comb
            .components
            .iter()
            .map(|c| c.center)
            .fold(f64::NEG_INFINITY, f64::max)
            + pad;
        if self.min > lo + 1e-9 || self.max < hi - 1e-9 {
            return Err(StateError::GridTooNarrow {
                min: self.min,
                max: self.max,
                need_min: lo,
                need_max: hi,
            });
        }
        Ok(())
    }
}

/// Sample a comb on a grid after checking the grid invariants.
pub fn evaluate(comb: &GaussianComb, grid: &QuadratureGrid) -> Result<Vec<Complex64>, StateError> {
    grid.validate_for(comb)?;
    Ok(grid.points().map(|u| comb.eval(u)).collect())
}

/// Discrete approximation of `(2 pi)^{-1/2} int dq e^{-iqp} psi(q)` by direct
/// summation, returning the conjugate grid and samples on it. The conjugate
/// grid has the same point count with spacing `2 pi / (N dq)`, centered on 0.
pub fn fourier_numeric(
    samples: &[Complex64],
    grid: &QuadratureGrid,
) -> (QuadratureGrid, Vec<Complex64>) {
    let n = samples.len();
    let dq = grid.step;
    let dp = 2.0 * PI / (n as f64 * dq);
    let half = (n / 2) as f64;
    let conj = QuadratureGrid::new(-half * dp, (n as f64 - 1.0 - half) * dp, dp);
    let scale = dq / (2.0 * PI).sqrt();
    let qs: Vec<f64> = grid.points().collect();
    let out = conj
        .points()
        .map(|p| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (q, &s) in qs.iter().zip(samples) {
                acc += s * Complex64::new(0.0, -q * p).exp();
            }
            scale * acc
        })
        .collect();
    (conj, out)
}

/// `L^2` distance `sqrt(step * sum |a - b|^2)` between two sample vectors.
pub fn l2_distance(a: &[Complex64], b: &[Complex64], step: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    (step
        * a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>())
    .sqrt()
}

/// Apply a Kraus superposition of position shifts `(shift, weight)` to a comb
/// (unnormalized result). Components landing on identical (center, variance,
/// slope) triples are merged.
pub fn apply_kraus(comb: &GaussianComb, shifts: &[(f64, Complex64)]) -> GaussianComb {
    let mut components: Vec<GaussianComponent> = Vec::new();
    for &(shift, weight) in shifts {
        for c in &comb.components {
            let cand = GaussianComponent {
                center: c.center + shift,
                variance: c.variance,
                amplitude: c.amplitude * weight,
                phase_slope: c.phase_slope,
            };
            match components.iter_mut().find(|e| {
                e.center == cand.center
                    && e.variance == cand.variance
                    && e.phase_slope == cand.phase_slope
            }) {
                Some(e) => e.amplitude += cand.amplitude,
                None => components.push(cand),
            }
        }
    }
    components.sort_by(|a, b| a.center.partial_cmp(&b.center).unwrap());
    GaussianComb::new(comb.quadrature, components)
}
