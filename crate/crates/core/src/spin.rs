//! Wigner (small) d-matrix elements at rotation angle pi/2.
//!
//! Everything here is specialized to the single rotation angle used by the
//! state-preparation circuit. Two independent evaluation routes are provided:
//! the explicit factorial sum (evaluated exactly with big integers, then
//! scaled once in the log domain) and a closed form in terms of Jacobi
//! polynomials at argument zero. The special cases `m' = +-J` and `m' = 0`
//! collapse to single binomial terms and are exposed separately because the
//! conditional-state amplitudes are built from their products.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinError {
    /// `2m` is out of range or has the wrong parity for `2J`.
    #[error("magnetic index 2m = {two_m} is invalid for 2J = {two_j}")]
    InvalidIndex { two_j: u32, two_m: i64 },
    /// The requested quantity only exists for integer total spin.
    #[error("operation requires integer J, got 2J = {two_j}")]
    HalfIntegerUnsupported { two_j: u32 },
}

/// Total collective spin `J`, stored exactly as `2J` so that half-integer
/// values and all parity checks stay in integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TotalSpin {
    two_j: u32,
}

impl TotalSpin {
    pub fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    /// Construct from a floating value that must be an exact half-integer.
    pub fn from_j(j: f64) -> Option<Self> {
        let two_j = 2.0 * j;
        if two_j >= 0.0 && two_j.fract() == 0.0 && two_j <= u32::MAX as f64 {
            Some(Self { two_j: two_j as u32 })
        } else {
            None
        }
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Ensemble size `N = 2J`.
    pub fn n_atoms(self) -> u32 {
        self.two_j
    }

    pub fn is_integer(self) -> bool {
        self.two_j % 2 == 0
    }

    /// Number of magnetic sublevels, `2J + 1`.
    pub fn dimension(self) -> usize {
        self.two_j as usize + 1
    }

    /// `J + m` as a non-negative integer; errors on range or parity.
    pub fn check_index(self, two_m: i64) -> Result<u32, SpinError> {
        let two_j = self.two_j as i64;
        if two_m.abs() > two_j || (two_m - two_j) % 2 != 0 {
            return Err(SpinError::InvalidIndex {
                two_j: self.two_j,
                two_m,
            });
        }
        Ok(((two_j + two_m) / 2) as u32)
    }

    /// All valid `2m` in ascending order, `-2J, -2J + 2, ..., +2J`.
    pub fn magnetic_indices(self) -> impl Iterator<Item = i64> {
        let two_j = self.two_j as i64;
        (-two_j..=two_j).step_by(2)
    }
}

/// Evaluation route for [`wigner_d`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DMethod {
    /// Explicit sum over factorial ratios (Sakurai form).
    ExplicitSum,
    /// Jacobi-polynomial closed form at argument zero.
    Jacobi,
}

/// One d-matrix element together with its indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DMatrixElement {
    pub j: TotalSpin,
    pub two_m: i64,
    pub two_mp: i64,
    pub value: f64,
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln C(n, k)` for integer arguments.
pub(crate) fn ln_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln C(n, k)` continued to real arguments via the gamma function.
pub fn ln_binomial_real(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

fn big_binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1u32);
    let k = k.min(n - k);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn ln_big(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    // Magnitudes stay far below f64 overflow for any 2J reachable in f64
    // log-domain arithmetic, but split off high bits just in case.
    match n.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let bits = n.bits();
            let shifted = n >> (bits - 64);
            shifted.to_f64().unwrap().ln() + (bits - 64) as f64 * std::f64::consts::LN_2
        }
    }
}

/// `d_{m,m'} = d^{(J)}_{m,m'}(pi/2)` by the requested route.
pub fn wigner_d(j: TotalSpin, two_m: i64, two_mp: i64, method: DMethod) -> Result<f64, SpinError> {
    j.check_index(two_m)?;
    j.check_index(two_mp)?;
    Ok(match method {
        DMethod::ExplicitSum => explicit_sum(j, two_m, two_mp),
        DMethod::Jacobi => jacobi_closed_form(j, two_m, two_mp),
    })
}

/// Explicit sum route. The alternating sum over `k` cancels catastrophically
/// in floating point at large `J`, so the rational part is accumulated as an
/// exact integer: multiplying each term by `(J+m')! (J-m')!` turns it into
/// `(-1)^{k-m'+m} C(J+m', k) C(J-m', k-m'+m)`. The square-root prefactor and
/// the removed factorials are then applied once in the log domain.
fn explicit_sum(j: TotalSpin, two_m: i64, two_mp: i64) -> f64 {
    let a = j.check_index(two_mp).unwrap(); // J + m'
    let b = j.two_j() - a; // J - m'
    let c = j.check_index(two_m).unwrap(); // J + m
    let d = j.two_j() - c; // J - m
    let e = (two_mp - two_m) / 2; // m' - m

    let k_min = e.max(0) as u32;
    let k_max = a.min(d);
    let mut sum = BigInt::zero();
    for k in k_min..=k_max {
        let term = big_binomial(a, k) * big_binomial(b, (k as i64 - e) as u32);
        if (k as i64 - e) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let ln_pref = 0.5 * (ln_factorial(a) + ln_factorial(b) + ln_factorial(c) + ln_factorial(d));
    let ln_mag = ln_big(&sum.abs()) + ln_pref
        - ln_factorial(a)
        - ln_factorial(b)
        - j.j() * std::f64::consts::LN_2;
    let sign = if sum.is_negative() { -1.0 } else { 1.0 };
    sign * ln_mag.exp()
}

/// Jacobi polynomial `P_n^{(a,b)}(0)` by the three-term recurrence in the
/// degree, seeded from `P_0 = 1` and `P_1^{(a,b)}(0) = (a - b)/2`.
fn jacobi_p0(n: u32, a: u32, b: u32) -> f64 {
    let (a, b) = (a as f64, b as f64);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b);
    for k in 2..=n as u64 {
        let k = k as f64;
        let tot = 2.0 * k + a + b;
        let next = ((tot - 1.0) * (a * a - b * b) * cur
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * tot * prev)
            / (2.0 * k * (k + a + b) * (tot - 2.0));
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi-route closed form at beta = pi/2, including the piecewise sign
/// `varsigma_{m,m'}`. Agreement with the explicit sum is asserted by test
/// rather than assumed.
fn jacobi_closed_form(j: TotalSpin, two_m: i64, two_mp: i64) -> f64 {
    let mu = ((two_m - two_mp).unsigned_abs() / 2) as u32;
    let nu = ((two_m + two_mp).unsigned_abs() / 2) as u32;
    let s = (j.two_j() - two_m.unsigned_abs().max(two_mp.unsigned_abs()) as u32) / 2;
    let varsigma = if two_mp >= two_m {
        1.0
    } else if (two_m - two_mp) / 2 % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let ln_mag = 0.5 * (ln_binomial(j.two_j(), s + mu) - ln_binomial(j.two_j(), s))
        + (s as f64 - j.j()) * std::f64::consts::LN_2;
    varsigma * ln_mag.exp() * jacobi_p0(s, mu, nu)
}

/// `d_{m,+-J} = (+-1)^{J+m} 2^{-J} C(2J, J-m)^{1/2}`.
pub fn d_edge(j: TotalSpin, two_m: i64, sign: i8) -> Result<f64, SpinError> {
    let j_plus_m = j.check_index(two_m)?;
    let j_minus_m = j.two_j() - j_plus_m;
    let mag = (0.5 * ln_binomial(j.two_j(), j_minus_m) - j.j() * std::f64::consts::LN_2).exp();
    let s = if sign >= 0 || j_plus_m % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    Ok(s * mag)
}

/// `d_{m,0}`; only defined for integer `J`. Vanishes when `J + m` is odd.
pub fn d_center(j: TotalSpin, two_m: i64) -> Result<f64, SpinError> {
    if !j.is_integer() {
        return Err(SpinError::HalfIntegerUnsupported { two_j: j.two_j() });
    }
    let j_plus_m = j.check_index(two_m)?;
    let j_minus_m = j.two_j() - j_plus_m;
    if j_plus_m % 2 != 0 {
        return Ok(0.0); // Re(i^{J+m}) = 0
    }
    let re_i = if j_plus_m % 4 == 0 { 1.0 } else { -1.0 };
    let j_int = j.two_j() / 2;
    let ln_mag = 0.5 * (ln_binomial(j.two_j(), j.two_j() / 2) - ln_binomial(j.two_j(), j_minus_m))
        + ln_binomial(j_int, j_minus_m / 2)
        - j.j() * std::f64::consts::LN_2;
    Ok(re_i * ln_mag.exp())
}

/// Outcome selector for the amplitude products `d_{m,J} d_{m,x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeOutcome {
    PlusJ,
    MinusJ,
    Zero,
}

/// Closed-form product `d_{m,J} d_{m,x}` for `x` in `{+J, -J, 0}`.
pub fn envelope_product(j: TotalSpin, two_m: i64, x: EnvelopeOutcome) -> Result<f64, SpinError> {
    let j_plus_m = j.check_index(two_m)?;
    let j_minus_m = j.two_j() - j_plus_m;
    match x {
        EnvelopeOutcome::PlusJ | EnvelopeOutcome::MinusJ => {
            let mag =
                (ln_binomial(j.two_j(), j_minus_m) - j.two_j() as f64 * std::f64::consts::LN_2)
                    .exp();
            let s = if matches!(x, EnvelopeOutcome::PlusJ) || j_plus_m % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            Ok(s * mag)
        }
        EnvelopeOutcome::Zero => {
            if !j.is_integer() {
                return Err(SpinError::HalfIntegerUnsupported { two_j: j.two_j() });
            }
            if j_plus_m % 2 != 0 {
                return Ok(0.0);
            }
            let re_i = if j_plus_m % 4 == 0 { 1.0 } else { -1.0 };
            let ln_mag = 0.5 * ln_binomial(j.two_j(), j.two_j() / 2)
                + ln_binomial(j.two_j() / 2, j_minus_m / 2)
                - j.two_j() as f64 * std::f64::consts::LN_2;
            Ok(re_i * ln_mag.exp())
        }
    }
}

/// Gaussian approximation to [`envelope_product`]:
/// `(+-1)^{J+m} (pi J)^{-1/2} exp(-m^2/J)` for `x = +-J`, and
/// `Re(i^{J+m}) sqrt(2) (pi J)^{-3/4} exp(-m^2/2J)` for `x = 0`.
pub fn gaussian_envelope_approx(
    j: TotalSpin,
    two_m: i64,
    x: EnvelopeOutcome,
) -> Result<f64, SpinError> {
    let j_plus_m = j.check_index(two_m)?;
    let jf = j.j();
    let m = two_m as f64 / 2.0;
    match x {
        EnvelopeOutcome::PlusJ | EnvelopeOutcome::MinusJ => {
            let mag = (std::f64::consts::PI * jf).powf(-0.5) * (-m * m / jf).exp();
            let s = if matches!(x, EnvelopeOutcome::PlusJ) || j_plus_m % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            Ok(s * mag)
        }
        EnvelopeOutcome::Zero => {
            if !j.is_integer() {
                return Err(SpinError::HalfIntegerUnsupported { two_j: j.two_j() });
            }
            if j_plus_m % 2 != 0 {
                return Ok(0.0);
            }
            let re_i = if j_plus_m % 4 == 0 { 1.0 } else { -1.0 };
            Ok(re_i
                * std::f64::consts::SQRT_2
                * (std::f64::consts::PI * jf).powf(-0.75)
                * (-m * m / (2.0 * jf)).exp())
        }
    }
}

/// Single column `d_{m, x}` over ascending `m`, using the closed forms for
/// the edge (`x = +-J`) and center (`x = 0`, integer `J`) columns and the
/// exact sum otherwise. O(J) or O(J^2) instead of the O(J^3) full table.
pub fn d_column(j: TotalSpin, two_x: i64) -> Result<Vec<f64>, SpinError> {
    j.check_index(two_x)?;
    j.magnetic_indices()
        .map(|two_m| {
            if two_x.unsigned_abs() == j.two_j() as u64 {
                d_edge(j, two_m, two_x.signum() as i8)
            } else if two_x == 0 && j.is_integer() {
                d_center(j, two_m)
            } else {
                wigner_d(j, two_m, two_x, DMethod::ExplicitSum)
            }
        })
        .collect()
}

/// Dense table of all `(2J+1)^2` elements, computed once by a single route.
/// Immutable after construction, so it may be shared freely across threads.
#[derive(Debug, Clone)]
pub struct DMatrix {
    j: TotalSpin,
    // Row index: (2J + 2m)/2, column index: (2J + 2m')/2.
    values: Vec<f64>,
}

impl DMatrix {
    pub fn new(j: TotalSpin, method: DMethod) -> Self {
        let dim = j.dimension();
        let mut values = Vec::with_capacity(dim * dim);
        for two_m in j.magnetic_indices() {
            for two_mp in j.magnetic_indices() {
                values.push(wigner_d(j, two_m, two_mp, method).unwrap());
            }
        }
        Self { j, values }
    }

    pub fn j(&self) -> TotalSpin {
        self.j
    }

    pub fn get(&self, two_m: i64, two_mp: i64) -> f64 {
        let dim = self.j.dimension();
        let row = self.j.check_index(two_m).expect("row index") as usize;
        let col = self.j.check_index(two_mp).expect("column index") as usize;
        self.values[row * dim + col]
    }

    /// Column `d_{m, x}` over ascending `m`, for fixed outcome `x`.
    pub fn column(&self, two_x: i64) -> Vec<f64> {
        self.j
            .magnetic_indices()
            .map(|two_m| self.get(two_m, two_x))
            .collect()
    }

    pub fn element(&self, two_m: i64, two_mp: i64) -> DMatrixElement {
        DMatrixElement {
            j: self.j,
            two_m,
            two_mp,
            value: self.get(two_m, two_mp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn spin(two_j: u32) -> TotalSpin {
        TotalSpin::from_two_j(two_j)
    }

    #[test]
    fn half_spin_diagonal_element() {
        let d = wigner_d(spin(1), 1, 1, DMethod::ExplicitSum).unwrap();
        assert_abs_diff_eq!(d, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
    }

    #[test]
    fn spin_two_center_is_legendre_p2_at_zero() {
        let d = wigner_d(spin(4), 0, 0, DMethod::Jacobi).unwrap();
        assert_abs_diff_eq!(d, -0.5, epsilon = 1e-14);
        let d_sum = wigner_d(spin(4), 0, 0, DMethod::ExplicitSum).unwrap();
        assert_abs_diff_eq!(d, d_sum, epsilon = 1e-14);
    }

    #[test]
    fn spin_four_edge_element() {
        let expect = 70.0_f64.sqrt() / 16.0;
        for method in [DMethod::ExplicitSum, DMethod::Jacobi] {
            let d = wigner_d(spin(8), 0, 8, method).unwrap();
            assert_abs_diff_eq!(d, expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn invalid_indices_rejected() {
        assert!(wigner_d(spin(8), 10, 0, DMethod::ExplicitSum).is_err());
        // wrong parity: integer J with half-integer m
        assert!(wigner_d(spin(8), 1, 0, DMethod::ExplicitSum).is_err());
        assert!(d_center(spin(3), 1).is_err());
    }

    #[test]
    fn d_edge_examples() {
        assert_abs_diff_eq!(
            d_edge(spin(1), -1, 1).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            d_edge(spin(2), 0, -1).unwrap(),
            -std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(d_edge(spin(8), 8, 1).unwrap(), 0.0625, epsilon = 1e-14);
    }

    #[test]
    fn d_edge_matches_general_element() {
        for two_j in 0..=24 {
            let j = spin(two_j);
            for two_m in j.magnetic_indices() {
                for (sign, two_x) in [(1i8, two_j as i64), (-1, -(two_j as i64))] {
                    let edge = d_edge(j, two_m, sign).unwrap();
                    let full = wigner_d(j, two_m, two_x, DMethod::ExplicitSum).unwrap();
                    assert_abs_diff_eq!(edge, full, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn d_center_examples_and_general_agreement() {
        assert_abs_diff_eq!(d_center(spin(4), 0).unwrap(), -0.5, epsilon = 1e-13);
        assert_eq!(d_center(spin(4), 2).unwrap(), 0.0);
        assert_abs_diff_eq!(
            d_center(spin(8), 8).unwrap(),
            70.0_f64.sqrt() / 16.0,
            epsilon = 1e-14
        );
        for two_j in (0..=40).step_by(2) {
            let j = spin(two_j);
            for two_m in j.magnetic_indices() {
                let center = d_center(j, two_m).unwrap();
                let full = wigner_d(j, two_m, 0, DMethod::ExplicitSum).unwrap();
                assert_abs_diff_eq!(center, full, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn envelope_product_examples() {
        assert_abs_diff_eq!(
            envelope_product(spin(2), 0, EnvelopeOutcome::PlusJ).unwrap(),
            0.5,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            envelope_product(spin(2), 2, EnvelopeOutcome::MinusJ).unwrap(),
            0.25,
            epsilon = 1e-13
        );
        let expect = d_edge(spin(4), 0, 1).unwrap() * d_center(spin(4), 0).unwrap();
        assert_abs_diff_eq!(
            envelope_product(spin(4), 0, EnvelopeOutcome::Zero).unwrap(),
            expect,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(expect, -0.30619, epsilon = 5e-6);
    }

    #[test]
    fn envelope_product_matches_element_products() {
        for two_j in 1..=20 {
            let j = spin(two_j);
            for two_m in j.magnetic_indices() {
                let d_pj = d_edge(j, two_m, 1).unwrap();
                for (x, other) in [
                    (EnvelopeOutcome::PlusJ, d_edge(j, two_m, 1).unwrap()),
                    (EnvelopeOutcome::MinusJ, d_edge(j, two_m, -1).unwrap()),
                ] {
                    assert_abs_diff_eq!(
                        envelope_product(j, two_m, x).unwrap(),
                        d_pj * other,
                        epsilon = 1e-12
                    );
                }
                if j.is_integer() {
                    assert_abs_diff_eq!(
                        envelope_product(j, two_m, EnvelopeOutcome::Zero).unwrap(),
                        d_pj * d_center(j, two_m).unwrap(),
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn gaussian_approx_examples() {
        let a = gaussian_envelope_approx(spin(8), 0, EnvelopeOutcome::PlusJ).unwrap();
        assert_abs_diff_eq!(a, (4.0 * std::f64::consts::PI).powf(-0.5), epsilon = 1e-13);
        assert_abs_diff_eq!(a, 0.28209, epsilon = 1e-5);
        let tail = gaussian_envelope_approx(spin(8), 8, EnvelopeOutcome::PlusJ).unwrap();
        assert_abs_diff_eq!(tail, 0.0051667, epsilon = 1e-6);
    }

    #[test]
    fn gaussian_approx_two_percent_within_sqrt_j() {
        // Max relative error over |m| <= sqrt(J) stays below 2% for J >= 10.
        for two_j in [20u32, 32, 50, 80] {
            let j = spin(two_j);
            let bound = j.j().sqrt();
            let mut worst = 0.0_f64;
            for two_m in j.magnetic_indices() {
                if (two_m as f64 / 2.0).abs() > bound {
                    continue;
                }
                let exact = envelope_product(j, two_m, EnvelopeOutcome::PlusJ).unwrap();
                let approx = gaussian_envelope_approx(j, two_m, EnvelopeOutcome::PlusJ).unwrap();
                worst = worst.max(((approx - exact) / exact).abs());
            }
            assert!(worst <= 0.02, "2J = {two_j}: worst = {worst}");
        }
    }

    #[test]
    fn gaussian_approx_ratio_tends_to_one() {
        let mut prev = f64::INFINITY;
        for two_j in [8u32, 32, 128, 512] {
            let j = spin(two_j);
            let exact = envelope_product(j, 0, EnvelopeOutcome::PlusJ).unwrap();
            let approx = gaussian_envelope_approx(j, 0, EnvelopeOutcome::PlusJ).unwrap();
            let err = (approx / exact - 1.0).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn explicit_vs_jacobi_dense_grid() {
        // The acceptance suite pushes this to 2J = 100; keep the unit test lean.
        for two_j in 0..=30 {
            let j = spin(two_j);
            for two_m in j.magnetic_indices() {
                for two_mp in j.magnetic_indices() {
                    let a = wigner_d(j, two_m, two_mp, DMethod::ExplicitSum).unwrap();
                    let b = wigner_d(j, two_m, two_mp, DMethod::Jacobi).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-10,
                        "2J={two_j} 2m={two_m} 2m'={two_mp}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn rows_orthonormal() {
        for two_j in [1u32, 4, 9, 16, 25] {
            let j = spin(two_j);
            let d = DMatrix::new(j, DMethod::ExplicitSum);
            for two_x in j.magnetic_indices() {
                for two_xp in j.magnetic_indices() {
                    let dot: f64 = j
                        .magnetic_indices()
                        .map(|two_m| d.get(two_m, two_x) * d.get(two_m, two_xp))
                        .sum();
                    let expect = if two_x == two_xp { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn elements_bounded_by_one() {
        for two_j in 0..=40 {
            let j = spin(two_j);
            for two_m in j.magnetic_indices() {
                for two_mp in j.magnetic_indices() {
                    let v = wigner_d(j, two_m, two_mp, DMethod::ExplicitSum).unwrap();
                    assert!(v.abs() <= 1.0 + 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn routes_agree_on_random_elements(two_j in 0u32..=80, row in 0usize..=80, col in 0usize..=80) {
            let j = spin(two_j);
            let idx: Vec<i64> = j.magnetic_indices().collect();
            let two_m = idx[row % idx.len()];
            let two_mp = idx[col % idx.len()];
            let a = explicit_sum(j, two_m, two_mp);
            let b = jacobi_closed_form(j, two_m, two_mp);
            prop_assert!((a - b).abs() <= 1e-10);
        }

        #[test]
        fn symmetry_under_index_swap(two_j in 1u32..=40, row in 0usize..=40, col in 0usize..=40) {
            let j = spin(two_j);
            let idx: Vec<i64> = j.magnetic_indices().collect();
            let two_m = idx[row % idx.len()];
            let two_mp = idx[col % idx.len()];
            // d_{m',m} = (-1)^{m-m'} d_{m,m'}
            let lhs = explicit_sum(j, two_mp, two_m);
            let sign = if (two_m - two_mp) / 2 % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((lhs - sign * explicit_sum(j, two_m, two_mp)).abs() <= 1e-12);
        }
    }
}
