//! Error variances and squeezing-dB conversions.
//!
//! The heralded comb is characterized by four variances: spike and envelope
//! widths in each quadrature. Position-side values are elementary; the
//! momentum spike variance has a closed form in the Hurwitz zeta function
//! `zeta(2, J)`, cross-checked here by brute-force quadrature of the
//! `cos^{2J}` peak profile.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::spin::TotalSpin;
use crate::state::{EncodingParams, StateError};

/// Spike/envelope variances of a heralded comb in both quadratures, plus the
/// equivalent squeezing in dB. Variances are wavefunction (`|psi|^2`)
/// variances by default; see [`ErrorProfile::measured`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorProfile {
    pub spike_var_q: f64,
    pub env_var_q: f64,
    pub spike_var_p: f64,
    pub env_var_p: f64,
    pub db: f64,
}

impl ErrorProfile {
    /// Variances as seen in homodyne statistics of the ideal code states,
    /// where each Gaussian factor contributes half the wavefunction variance.
    pub fn measured(&self) -> ErrorProfile {
        ErrorProfile {
            spike_var_q: self.spike_var_q / 2.0,
            env_var_q: self.env_var_q / 2.0,
            spike_var_p: self.spike_var_p / 2.0,
            env_var_p: self.env_var_p / 2.0,
            db: self.db,
        }
    }
}

/// Hurwitz zeta `zeta(2, j) = sum_{k>=0} (k + j)^{-2}` to absolute error
/// below 1e-12: direct sum of the first 10^4 terms (accumulated smallest
/// first) plus the first Euler-Maclaurin tail corrections.
pub fn hurwitz_zeta2(j: f64) -> Result<f64, StateError> {
    if !(j > 0.0) {
        return Err(StateError::DomainError(format!(
            "hurwitz_zeta2 needs j > 0, got {j}"
        )));
    }
    const K: u32 = 10_000;
    let mut acc = 0.0;
    for k in (0..K).rev() {
        let t = k as f64 + j;
        acc += 1.0 / (t * t);
    }
    let t = K as f64 + j;
    // integral + half endpoint + first Bernoulli correction
    acc += 1.0 / t + 1.0 / (2.0 * t * t) + 1.0 / (6.0 * t * t * t);
    Ok(acc)
}

/// Momentum spike variance in closed form: `2 (J^2 zeta(2,J) - 1) / (g^2 J^2)`.
pub fn spike_var_p(j: f64, g: f64) -> f64 {
    let z = hurwitz_zeta2(j).expect("j > 0");
    2.0 * (j * j * z - 1.0) / (g * g * j * j)
}

/// All four variances for one encoding, with the dB figure from the position
/// spike variance.
pub fn error_profile(params: &EncodingParams) -> ErrorProfile {
    let j = params.j.j();
    let spike_q = params.spike_variance_q();
    ErrorProfile {
        spike_var_q: spike_q,
        env_var_q: params.g * params.g * j / 2.0,
        spike_var_p: spike_var_p(j, params.g),
        env_var_p: (2.0 * params.r).exp(),
        db: db_from_sigma_sq(spike_q),
    }
}

/// Brute-force check of the momentum spike variance: adaptive quadrature of
/// `int p^2 P(p) dp` over one period, with the single-peak profile
/// `P(p) = g Gamma(J+1) / (2 sqrt(pi) Gamma(J+1/2)) cos^{2J}(pg/2)`.
pub fn peak_variance_oracle(j: TotalSpin, g: f64) -> f64 {
    let n = j.two_j() as i32; // exponent 2J
    let jf = j.j();
    let ln_norm = (g / (2.0 * PI.sqrt())).ln() + ln_gamma(jf + 1.0) - ln_gamma(jf + 0.5);
    let norm = ln_norm.exp();
    let f = |p: f64| norm * (p * g / 2.0).cos().powi(n) * p * p;
    adaptive_simpson(&f, -PI / g, PI / g, 1e-13, 60)
}

/// Integral of the bare single-peak profile over one period; should be 1.
pub fn peak_norm_oracle(j: TotalSpin, g: f64) -> f64 {
    let n = j.two_j() as i32;
    let jf = j.j();
    let norm = ((g / (2.0 * PI.sqrt())).ln() + ln_gamma(jf + 1.0) - ln_gamma(jf + 0.5)).exp();
    let f = |p: f64| norm * (p * g / 2.0).cos().powi(n);
    adaptive_simpson(&f, -PI / g, PI / g, 1e-13, 60)
}

fn simpson(_f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(f, a, b, fa, fm, fb);
    rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(f, a, m, fa, flm, fm);
    let right = simpson(f, m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Balanced encoding for spin `J`: `g = sqrt(pi)`, `r = ln(pi J / 2) / 2`,
/// which equates spike and envelope variances across quadratures.
pub fn symmetric_params(j: TotalSpin) -> EncodingParams {
    EncodingParams::new(j, 0.5 * (PI * j.j() / 2.0).ln(), PI.sqrt())
}

/// Continuous spin giving a target squeezing level: `J = (2/pi) 10^{dB/10}`.
pub fn j_from_db(db: f64) -> f64 {
    2.0 / PI * 10f64.powf(db / 10.0)
}

/// Squeezing level of the symmetric encoding at spin `j`.
pub fn db_from_j(j: f64) -> f64 {
    10.0 * (PI * j / 2.0).log10()
}

pub fn db_from_sigma_sq(sigma_sq: f64) -> f64 {
    -10.0 * sigma_sq.log10()
}

pub fn db_from_r(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

pub fn r_from_db(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

/// Consistent triple (dB, spike width, envelope width) from a spike variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DbTriple {
    pub db: f64,
    pub sigma: f64,
    pub envelope_width: f64,
}

pub fn db_conversions_from_sigma_sq(sigma_sq: f64) -> Result<DbTriple, StateError> {
    if !(sigma_sq > 0.0) {
        return Err(StateError::DomainError(format!(
            "variance must be positive, got {sigma_sq}"
        )));
    }
    Ok(DbTriple {
        db: db_from_sigma_sq(sigma_sq),
        sigma: sigma_sq.sqrt(),
        envelope_width: 1.0 / sigma_sq.sqrt(),
    })
}

pub fn db_conversions_from_r(r: f64) -> Result<DbTriple, StateError> {
    db_conversions_from_sigma_sq((-2.0 * r).exp())
}

pub fn db_conversions_from_j(j: f64) -> Result<DbTriple, StateError> {
    if !(j > 0.0) {
        return Err(StateError::DomainError(format!(
            "spin must be positive, got {j}"
        )));
    }
    db_conversions_from_sigma_sq(2.0 / (PI * j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spin(two_j: u32) -> TotalSpin {
        TotalSpin::from_two_j(two_j)
    }

    #[test]
    fn zeta_values() {
        assert_abs_diff_eq!(
            hurwitz_zeta2(1.0).unwrap(),
            PI * PI / 6.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            hurwitz_zeta2(4.0).unwrap(),
            PI * PI / 6.0 - 1.0 - 0.25 - 1.0 / 9.0,
            epsilon = 1e-12
        );
        // recurrence zeta(2, j+1) = zeta(2, j) - j^{-2}
        for &j in &[0.5, 1.7, 9.0, 42.3] {
            assert_abs_diff_eq!(
                hurwitz_zeta2(j + 1.0).unwrap(),
                hurwitz_zeta2(j).unwrap() - 1.0 / (j * j),
                epsilon = 1e-12
            );
        }
        // large-j expansion 1/J + 1/(2J^2) + O(J^{-3})
        let z100 = hurwitz_zeta2(100.0).unwrap();
        assert_abs_diff_eq!(z100, 0.0100502, epsilon = 1e-7);
        assert!((z100 - (0.01 + 0.00005)).abs() < 1e-6);
        assert!(hurwitz_zeta2(0.0).is_err());
    }

    #[test]
    fn profile_examples() {
        let p4 = symmetric_params(spin(8));
        let prof = error_profile(&p4);
        assert_abs_diff_eq!(prof.spike_var_q, 1.0 / (2.0 * PI), epsilon = 1e-12);
        assert_abs_diff_eq!(prof.env_var_q, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(prof.env_var_p, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(prof.spike_var_p, 0.14090, epsilon = 1e-4);
        assert_abs_diff_eq!(prof.spike_var_q * prof.env_var_q, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(prof.db, 7.98, epsilon = 5e-3);

        assert_abs_diff_eq!(spike_var_p(1.0, PI.sqrt()), 0.410578, epsilon = 1e-6);
        assert_abs_diff_eq!(
            spike_var_p(1.0, PI.sqrt()),
            2.0 * (PI * PI / 6.0 - 1.0) / PI,
            epsilon = 1e-14
        );

        let half = prof.measured();
        assert_abs_diff_eq!(half.spike_var_q, prof.spike_var_q / 2.0, epsilon = 0.0);
    }

    #[test]
    fn oracle_agrees_with_zeta_form() {
        for two_j in 1u32..=60 {
            let j = spin(two_j);
            let g = PI.sqrt();
            let closed = spike_var_p(j.j(), g);
            let oracle = peak_variance_oracle(j, g);
            assert!(
                ((oracle - closed) / closed).abs() <= 1e-8,
                "2J={two_j}: {oracle} vs {closed}"
            );
            assert_abs_diff_eq!(peak_norm_oracle(j, g), 1.0, epsilon = 1e-10);
        }
        // different coupling too
        assert!(
            ((peak_variance_oracle(spin(6), 2.0) - spike_var_p(3.0, 2.0)) / spike_var_p(3.0, 2.0))
                .abs()
                <= 1e-8
        );
    }

    #[test]
    fn symmetric_examples() {
        let p = symmetric_params(spin(8));
        assert_abs_diff_eq!(p.r, 0.5 * (2.0 * PI).ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.r, 0.91894, epsilon = 1e-5);
        assert!(p.is_symmetric());
        assert_abs_diff_eq!(error_profile(&p).db, 7.9818, epsilon = 1e-4);
        assert_abs_diff_eq!(
            error_profile(&symmetric_params(spin(9))).db,
            8.4933,
            epsilon = 1e-4
        );
        // r = 0 at J = 2/pi is outside half-integer spins; check via formula
        assert_abs_diff_eq!(db_from_j(2.0 / PI), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn db_j_round_trips() {
        for &db in &[0.0, 5.0, 10.0, 15.0, 20.0, 7.3] {
            assert_abs_diff_eq!(db_from_j(j_from_db(db)), db, epsilon = 1e-12);
        }
        for &r in &[0.1, 0.5, 1.0, 2.0] {
            assert_abs_diff_eq!(r_from_db(db_from_r(r)), r, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(j_from_db(20.0), 63.66, epsilon = 5e-3);
        assert_abs_diff_eq!(j_from_db(15.0), 20.13, epsilon = 5e-3);
        assert_abs_diff_eq!(db_from_j(1.0), 1.9612, epsilon = 1e-4);
    }

    #[test]
    fn conversion_triples() {
        let t = db_conversions_from_sigma_sq(0.1).unwrap();
        assert_abs_diff_eq!(t.db, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.sigma, 0.31623, epsilon = 1e-5);
        assert_abs_diff_eq!(t.envelope_width, 3.1623, epsilon = 1e-4);
        assert_abs_diff_eq!(db_conversions_from_r(1.0).unwrap().db, 8.686, epsilon = 1e-3);
        assert_abs_diff_eq!(db_conversions_from_j(4.0).unwrap().db, 7.98, epsilon = 5e-3);
        assert!(db_conversions_from_sigma_sq(-1.0).is_err());
    }

    #[test]
    fn asymptotic_variance_relation() {
        // |spike_var_p - 2/(g^2 J)| <= C / J^2 with stable C
        let g = PI.sqrt();
        let mut cs = Vec::new();
        for &j in &[4.0, 8.0, 16.0, 32.0, 64.0] {
            let gap = (spike_var_p(j, g) - 2.0 / (g * g * j)).abs();
            cs.push(gap * j * j);
        }
        let cmax = cs.iter().cloned().fold(0.0, f64::max);
        let cmin = cs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(cmax / cmin < 1.5, "C range [{cmin}, {cmax}]");
    }

    #[test]
    fn symmetric_variance_symmetry() {
        for two_j in [8u32, 16, 32, 64] {
            let p = symmetric_params(spin(two_j));
            let prof = error_profile(&p);
            assert_abs_diff_eq!(prof.env_var_q, prof.env_var_p, epsilon = 1e-12);
            let j = p.j.j();
            assert!((prof.spike_var_p - prof.spike_var_q).abs() < 2.0 / (j * j));
        }
    }
}
