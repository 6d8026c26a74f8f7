//! Dispersive-coupling budget for the atom-light interface.
//!
//! Pure algebra in dimensionless ratios: rotation angle per photon `chi`,
//! photon number `N_L`, detuning ratio `Delta/Gamma`, optical density per
//! atom `eta`, and photon flux. No unit system is imposed.

use serde::Serialize;

/// Physical inputs of the interface. `chi = eta / (2 Delta/Gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaradayParams {
    /// Rotation angle per photon per unit angular momentum (radians).
    pub chi: f64,
    /// Total photon number of the probe pulse.
    pub n_photons: f64,
    /// Detuning in linewidths, Delta/Gamma.
    pub detuning_over_gamma: f64,
    /// Photon flux (photons per second).
    pub photon_flux: f64,
}

impl FaradayParams {
    /// Optical density per atom implied by `chi` and the detuning.
    pub fn eta(&self) -> f64 {
        2.0 * self.detuning_over_gamma * self.chi
    }
}

/// Effective quadrature coupling `g = chi sqrt(N_L / 2)`.
pub fn effective_coupling(chi: f64, n_photons: f64) -> f64 {
    chi * (n_photons / 2.0).sqrt()
}

/// Optical density per atom needed to reach `g_target`:
/// `eta = 2 (Delta/Gamma) g_target sqrt(2 / N_L)`.
pub fn required_eta(n_photons: f64, detuning_over_gamma: f64, g_target: f64) -> f64 {
    2.0 * detuning_over_gamma * g_target * (2.0 / n_photons).sqrt()
}

/// Pulse duration for one full run, `t = 2 pi / (chi^2 flux)`.
pub fn interaction_time(chi: f64, photon_flux: f64) -> f64 {
    2.0 * std::f64::consts::PI / (chi * chi * photon_flux)
}

/// Overlap probability of meter states a distance `g delta_m` apart, plus
/// the projectivity figure of merit `4 sigma_M^2 / g^2` (want << 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distinguishability {
    pub overlap: f64,
    pub figure_of_merit: f64,
}

/// `exp[-(g / 2 sigma_M)^2 delta_m^2]` for meter (measured) variance
/// `meter_variance = sigma_M^2`.
pub fn meter_distinguishability(g: f64, meter_variance: f64, delta_m: f64) -> Distinguishability {
    Distinguishability {
        overlap: (-(g * g) / (4.0 * meter_variance) * delta_m * delta_m).exp(),
        figure_of_merit: 4.0 * meter_variance / (g * g),
    }
}

/// Everything a bench plan needs, serialized as flat JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlannerReport {
    pub g: f64,
    pub chi: f64,
    pub eta: f64,
    /// `t * flux`: photons spent per run.
    pub interaction_time_ratio: f64,
    pub projectivity_fom: f64,
    pub neighbor_overlap: f64,
}

/// Plan a run at coupling `g` with meter variance `sigma_M^2`.
pub fn plan(params: &FaradayParams, meter_variance: f64) -> PlannerReport {
    let g = effective_coupling(params.chi, params.n_photons);
    let d = meter_distinguishability(g, meter_variance, 1.0);
    PlannerReport {
        g,
        chi: params.chi,
        eta: params.eta(),
        interaction_time_ratio: interaction_time(params.chi, params.photon_flux)
            * params.photon_flux,
        projectivity_fom: d.figure_of_merit,
        neighbor_overlap: d.overlap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{overlap, GaussianComb, Quadrature};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn coupling_examples() {
        let chi = (2.0 * PI).sqrt() / 100.0;
        assert_abs_diff_eq!(effective_coupling(chi, 1e4), PI.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(effective_coupling(0.05, 800.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(effective_coupling(0.0, 1e4), 0.0, epsilon = 0.0);
    }

    #[test]
    fn eta_examples() {
        assert_abs_diff_eq!(required_eta(1e4, 500.0, PI.sqrt()), 25.066, epsilon = 1e-3);
        assert_abs_diff_eq!(required_eta(1e4, 500.0, 0.0), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(required_eta(4e4, 500.0, PI.sqrt()), 12.533, epsilon = 1e-3);
    }

    #[test]
    fn eta_coupling_round_trip() {
        // chi from eta reproduces the target g
        for &(n, dg, g) in &[(1e4, 500.0, PI.sqrt()), (3e5, 120.0, 0.8)] {
            let eta = required_eta(n, dg, g);
            let chi = eta / (2.0 * dg);
            assert_abs_diff_eq!(effective_coupling(chi, n), g, epsilon = 1e-12);
        }
    }

    #[test]
    fn time_examples() {
        assert_abs_diff_eq!(interaction_time(1.0, 2.0 * PI), 1.0, epsilon = 1e-15);
        let chi = (2.0 * PI / 1e4_f64).sqrt();
        assert_abs_diff_eq!(interaction_time(chi, 1e6), 1e-2, epsilon = 1e-12);
        // g = sqrt(pi) setting: t * flux = N_L
        assert_abs_diff_eq!(interaction_time(chi, 1e6) * 1e6, 1e4, epsilon = 1e-8);
    }

    #[test]
    fn distinguishability_examples() {
        let d = meter_distinguishability(PI.sqrt(), 0.1, 1.0);
        assert_abs_diff_eq!(d.overlap, (-PI / 0.4).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.overlap, 3.9e-4, epsilon = 1e-5);
        assert_abs_diff_eq!(d.figure_of_merit, 0.12732, epsilon = 1e-5);
        assert_abs_diff_eq!(
            meter_distinguishability(PI.sqrt(), 0.1, 0.0).overlap,
            1.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn distinguishability_matches_state_overlap() {
        // meter states = Gaussians of wavefunction variance 2 sigma_M^2 at g m
        let g = PI.sqrt();
        for &mv in &[0.05, 0.1, 0.5] {
            for &dm in &[1.0, 2.0, 3.5] {
                let a = GaussianComb::single_gaussian(Quadrature::Position, 0.0, 2.0 * mv);
                let b = GaussianComb::single_gaussian(Quadrature::Position, g * dm, 2.0 * mv);
                let ov = overlap(&a, &b).unwrap().norm_sqr();
                let d = meter_distinguishability(g, mv, dm).overlap;
                assert_abs_diff_eq!(ov, d, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn overlap_monotonicity() {
        let base = meter_distinguishability(1.5, 0.2, 1.0).overlap;
        assert!(meter_distinguishability(1.5, 0.2, 2.0).overlap < base);
        assert!(meter_distinguishability(2.0, 0.2, 1.0).overlap < base);
        assert!(meter_distinguishability(1.5, 0.1, 1.0).overlap < base);
    }

    #[test]
    fn planner_report() {
        let params = FaradayParams {
            chi: (2.0 * PI / 1e4_f64).sqrt(),
            n_photons: 1e4,
            detuning_over_gamma: 500.0,
            photon_flux: 1e6,
        };
        let rep = plan(&params, 0.1);
        assert_abs_diff_eq!(rep.g, PI.sqrt(), epsilon = 1e-12);
        assert!(rep.eta > 24.5 && rep.eta < 25.5);
        assert_abs_diff_eq!(rep.interaction_time_ratio, 1e4, epsilon = 1e-6);
        let json = serde_json::to_value(&rep).unwrap();
        for key in [
            "g",
            "chi",
            "eta",
            "interaction_time_ratio",
            "projectivity_fom",
            "neighbor_overlap",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
