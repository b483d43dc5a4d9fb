//! Speed-limit quantities: mean energy, dispersion, and which bound binds.
//!
//! Two lower bounds constrain the orthogonality time, `pi / (2 eps)` from the
//! mean energy above the lowest populated level and `pi / (2 sigma)` from the
//! energy dispersion. Their ratio `alpha = sigma / eps` decides which one is
//! active: dispersion (MT) for `alpha < 1`, mean energy (ML) for `alpha > 1`.
//! Balanced two-level states have `alpha = 1` exactly and are the only states
//! that reach the combined bound.

use crate::error::Error;
use crate::families::{classify_triad, FamilyLabel, SimplexEdge, CLASSIFY_TOL};
use crate::state::{Spectrum, Triad};
use crate::{EQUAL_BAND_TOL, ZERO_POPULATION_TOL};

/// Which lower bound on the orthogonality time is the active one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingBound {
    /// Dispersion bound `pi / (2 sigma)` binds (`alpha < 1`).
    MandelstamTamm,
    /// Mean-energy bound `pi / (2 eps)` binds (`alpha > 1`).
    MargolusLevitin,
    /// Both coincide within the equality band.
    Equal,
}

impl std::fmt::Display for BindingBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BindingBound::MandelstamTamm => write!(f, "MT"),
            BindingBound::MargolusLevitin => write!(f, "ML"),
            BindingBound::Equal => write!(f, "EQUAL"),
        }
    }
}

/// Everything the speed limit needs, in the units of the given spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslReport {
    pub mean_energy: f64,
    pub dispersion: f64,
    pub alpha: f64,
    pub tau_qsl: f64,
    pub bound: BindingBound,
}

/// Mean energy measured from the lowest level that actually carries
/// population: `eps = sum_i r_i (E_i - E_ref)`. For a fully populated triad
/// the reference is `E1` and `eps = omega21 (r2 + r3 (1 + Omega))`; a state
/// living on the upper pair is referenced to `E2` instead.
pub fn mean_energy(triad: &Triad, spectrum: &Spectrum) -> Result<f64, Error> {
    let populated = triad.populated(ZERO_POPULATION_TOL);
    if populated.len() < 2 {
        return Err(Error::StationaryState);
    }
    let levels = spectrum.levels();
    let reference = levels[populated[0]];
    let r = triad.as_array();
    Ok(populated.iter().map(|&i| r[i] * (levels[i] - reference)).sum())
}

/// Energy dispersion `sigma = sqrt(sum over pairs of r_i r_k omega_ik^2)`,
/// independent of any energy reference.
pub fn energy_dispersion(triad: &Triad, spectrum: &Spectrum) -> Result<f64, Error> {
    if triad.populated(ZERO_POPULATION_TOL).len() < 2 {
        return Err(Error::StationaryState);
    }
    let [r1, r2, r3] = triad.as_array();
    let w21 = spectrum.omega21();
    let w31 = spectrum.omega31();
    let w32 = spectrum.omega32();
    Ok((r1 * r2 * w21 * w21 + r1 * r3 * w31 * w31 + r2 * r3 * w32 * w32).sqrt())
}

/// The ratio `sigma / eps`, which depends only on the populations and the
/// spacing ratio, never on the overall scale.
///
/// Balanced two-level states return exactly 1 (there `eps` and `sigma` are
/// both half the pair spacing). Fully populated triads use the closed form
/// `sqrt((r2 + r3 (1 + Omega)^2) / (r2 + r3 (1 + Omega))^2 - 1)`; other
/// states fall back to the quotient of the two moments.
pub fn alpha(triad: &Triad, omega_ratio: f64) -> Result<f64, Error> {
    if !(omega_ratio.is_finite() && omega_ratio > 0.0) {
        return Err(Error::InvalidRatio { value: omega_ratio });
    }
    match classify_triad(triad, CLASSIFY_TOL) {
        FamilyLabel::Stationary { .. } => Err(Error::StationaryState),
        FamilyLabel::IQubit { .. } => Ok(1.0),
        _ => {
            let [_, r2, r3] = triad.as_array();
            if triad.min_component() > ZERO_POPULATION_TOL {
                let scaled = r2 + r3 * (1.0 + omega_ratio) * (1.0 + omega_ratio);
                let eps = r2 + r3 * (1.0 + omega_ratio);
                Ok((scaled / (eps * eps) - 1.0).sqrt())
            } else {
                // unbalanced two-level state: no closed form referenced to E1
                let s = Spectrum::new(1.0, omega_ratio)?;
                Ok(energy_dispersion(triad, &s)? / mean_energy(triad, &s)?)
            }
        }
    }
}

/// Assembles the full report: both moments, their ratio, the binding bound,
/// and `tau_qsl = max(pi / (2 eps), pi / (2 sigma))`.
pub fn qsl_report(triad: &Triad, spectrum: &Spectrum) -> Result<QslReport, Error> {
    let eps = mean_energy(triad, spectrum)?;
    let sigma = energy_dispersion(triad, spectrum)?;
    let alpha = match classify_triad(triad, CLASSIFY_TOL) {
        FamilyLabel::IQubit { .. } => 1.0,
        _ => sigma / eps,
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let tau_qsl = (half_pi / eps).max(half_pi / sigma);
    let bound = if alpha < 1.0 - EQUAL_BAND_TOL {
        BindingBound::MandelstamTamm
    } else if alpha > 1.0 + EQUAL_BAND_TOL {
        BindingBound::MargolusLevitin
    } else {
        BindingBound::Equal
    };
    Ok(QslReport { mean_energy: eps, dispersion: sigma, alpha, tau_qsl, bound })
}

/// Closed forms for `alpha` along the three pinned edges, with the
/// parametrizations of [`SimplexEdge`].
///
/// On `r1 = 1/2` the ratio exceeds 1 everywhere; on `r3 = 1/2` it stays
/// below 1; on `r2 = 1/2` its position relative to 1 flips sign at
/// `r = 1 / (1 + Omega)` once `Omega > 1`, and stays below 1 otherwise.
pub fn edge_alpha(edge: SimplexEdge, r: f64, omega_ratio: f64) -> Result<f64, Error> {
    if !(omega_ratio.is_finite() && omega_ratio > 0.0) {
        return Err(Error::InvalidRatio { value: omega_ratio });
    }
    if !(r.is_finite() && r > 0.0 && r < 0.5) {
        return Err(Error::EdgeParameterOutOfRange { r });
    }
    let w = omega_ratio;
    let value = match edge {
        SimplexEdge::R1Half => {
            let eps = r + (0.5 - r) * (1.0 + w);
            1.0 + r * (1.0 - 2.0 * r) * w * w / (eps * eps)
        }
        SimplexEdge::R3Half => {
            let eps = 1.0 - r + 0.5 * w;
            1.0 - (1.0 - 2.0 * r) * (1.0 - r + w) / (eps * eps)
        }
        SimplexEdge::R2Half => {
            let eps = 1.0 - r + w * (0.5 - r);
            1.0 + (1.0 - 2.0 * r) * (1.0 + w) * (r * (1.0 + w) - 1.0) / (eps * eps)
        }
    };
    Ok(value.sqrt())
}

/// Parameter on the `r2 = 1/2` edge where `alpha` crosses 1, present only
/// for `Omega > 1`: `r = 1 / (1 + Omega)`. Below the crossover the
/// dispersion bound binds, above it the mean-energy bound takes over.
pub fn edge_crossover(omega_ratio: f64) -> Option<f64> {
    if omega_ratio.is_finite() && omega_ratio > 1.0 {
        Some(1.0 / (1.0 + omega_ratio))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::LevelPair;
    use std::f64::consts::PI;

    fn spectrum(w21: f64, w32: f64) -> Spectrum {
        Spectrum::new(w21, w32).unwrap()
    }

    fn triad(r1: f64, r2: f64, r3: f64) -> Triad {
        Triad::new(r1, r2, r3).unwrap()
    }

    #[test]
    fn mean_energy_reference_follows_population() {
        let s = spectrum(1.0, 1.0);
        assert!((mean_energy(&triad(0.5, 0.0, 0.5), &s).unwrap() - 1.0).abs() < 1e-15);
        let thirds = 1.0 / 3.0;
        assert!((mean_energy(&triad(thirds, thirds, thirds), &s).unwrap() - 1.0).abs() < 1e-15);
        // upper-pair state: referenced to E2, not E1
        let s = spectrum(1.0, 2.0);
        assert!((mean_energy(&triad(0.0, 0.5, 0.5), &s).unwrap() - 1.0).abs() < 1e-15);
        assert!(mean_energy(&triad(1.0, 0.0, 0.0), &s).is_err());
    }

    #[test]
    fn mean_energy_closed_form_for_full_triads() {
        let cases = [
            (0.2, 0.3, 0.5, 1.3, 0.9),
            (0.6, 0.1, 0.3, 0.4, 2.2),
            (0.05, 0.9, 0.05, 3.0, 0.01),
        ];
        for (r1, r2, r3, w21, w32) in cases {
            let s = spectrum(w21, w32);
            let omega = s.ratio();
            let expected = w21 * (r2 + r3 * (1.0 + omega));
            let got = mean_energy(&triad(r1, r2, r3), &s).unwrap();
            assert!((got - expected).abs() < 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn dispersion_examples_and_identities() {
        assert!((energy_dispersion(&triad(0.5, 0.5, 0.0), &spectrum(1.0, 7.0)).unwrap() - 0.5).abs() < 1e-15);
        let thirds = 1.0 / 3.0;
        let sigma = energy_dispersion(&triad(thirds, thirds, thirds), &spectrum(1.0, 1.0)).unwrap();
        assert!((sigma - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(energy_dispersion(&triad(0.0, 1.0, 0.0), &spectrum(1.0, 1.0)).is_err());

        // pairwise form vs raw second moment about the mean
        let cases = [(0.2, 0.3, 0.5, 1.3, 0.9), (0.11, 0.44, 0.45, 2.0, 0.5)];
        for (r1, r2, r3, w21, w32) in cases {
            let s = spectrum(w21, w32);
            let t = triad(r1, r2, r3);
            let levels = s.levels();
            let mean: f64 = (0..3).map(|i| t.component(i) * levels[i]).sum();
            let second: f64 = (0..3).map(|i| t.component(i) * levels[i] * levels[i]).sum();
            let moments = (second - mean * mean).sqrt();
            let pairwise = energy_dispersion(&t, &s).unwrap();
            assert!((pairwise - moments).abs() < 1e-12);

            let omega = s.ratio();
            let closed = w21
                * (r1 * r2 + r1 * r3 * (1.0 + omega) * (1.0 + omega) + r2 * r3 * omega * omega)
                    .sqrt();
            assert!((pairwise - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn balanced_pairs_sit_exactly_on_alpha_one() {
        for pair in LevelPair::ALL {
            let t = pair.qubit_triad();
            for omega in [0.3, 1.0, 4.7] {
                assert_eq!(alpha(&t, omega).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn alpha_closed_form_matches_moment_quotient() {
        let cases = [
            (0.2, 0.3, 0.5, 0.7),
            (0.4, 0.35, 0.25, 1.0),
            (0.1, 0.6, 0.3, 2.9),
            (0.33, 0.33, 0.34, 5.5),
        ];
        for (r1, r2, r3, omega) in cases {
            let t = triad(r1, r2, r3);
            let a = alpha(&t, omega).unwrap();
            for w21 in [0.1, 1.0, 10.0] {
                let s = spectrum(w21, w21 * omega);
                let quotient =
                    energy_dispersion(&t, &s).unwrap() / mean_energy(&t, &s).unwrap();
                assert!((a - quotient).abs() < 1e-12, "omega = {omega}, w21 = {w21}");
            }
        }
    }

    #[test]
    fn equal_weights_alpha_value() {
        let thirds = 1.0 / 3.0;
        let a = alpha(&triad(thirds, thirds, thirds), 1.0).unwrap();
        assert!((a - 0.81649658092772603).abs() < 1e-12);
    }

    #[test]
    fn report_for_upper_pair_attains_its_bound() {
        let s = spectrum(1.0, 1.0);
        let report = qsl_report(&triad(0.5, 0.0, 0.5), &s).unwrap();
        assert_eq!(report.bound, BindingBound::Equal);
        assert!((report.tau_qsl - PI / 2.0).abs() < 1e-14);
        // the first orthogonality time of this state is exactly pi / omega31
        assert!((report.tau_qsl - PI / s.omega31()).abs() < 1e-14);
    }

    #[test]
    fn report_for_equal_weights() {
        let thirds = 1.0 / 3.0;
        let report = qsl_report(&triad(thirds, thirds, thirds), &spectrum(1.0, 1.0)).unwrap();
        assert_eq!(report.bound, BindingBound::MandelstamTamm);
        assert!((report.mean_energy - 1.0).abs() < 1e-14);
        assert!((report.dispersion - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((report.tau_qsl - 1.9238247452427961).abs() < 1e-12);
        // attained time 2 pi / 3 stays above the bound
        assert!(2.0 * PI / 3.0 > report.tau_qsl);
    }

    #[test]
    fn lower_pair_reaches_bound_at_first_zero() {
        let report = qsl_report(&triad(0.5, 0.5, 0.0), &spectrum(1.0, 3.3)).unwrap();
        assert_eq!(report.bound, BindingBound::Equal);
        assert!((report.tau_qsl - PI).abs() < 1e-14);
    }

    #[test]
    fn edge_alpha_signs() {
        assert!(edge_alpha(SimplexEdge::R1Half, 0.25, 1.0).unwrap() > 1.0);
        let a = edge_alpha(SimplexEdge::R3Half, 0.25, 1.0).unwrap();
        assert!((a - 0.44f64.sqrt()).abs() < 1e-15);
        assert!(a < 1.0);
        // crossover point of the r2 edge at Omega = 3
        let a = edge_alpha(SimplexEdge::R2Half, 0.25, 3.0).unwrap();
        assert!((a - 1.0).abs() < 1e-12);
        assert!(edge_alpha(SimplexEdge::R2Half, 0.0, 1.0).is_err());
        assert!(edge_alpha(SimplexEdge::R2Half, 0.5, 1.0).is_err());
    }

    #[test]
    fn edge_alpha_agrees_with_general_form() {
        for edge in SimplexEdge::ALL {
            for k in 1..10 {
                let r = k as f64 * 0.05;
                for omega in [0.4, 1.0, 2.0, 3.0, 5.0, 11.0] {
                    let from_edge = edge_alpha(edge, r, omega).unwrap();
                    let from_triad = alpha(&edge.triad(r).unwrap(), omega).unwrap();
                    assert!(
                        (from_edge - from_triad).abs() < 1e-12,
                        "{edge}, r = {r}, omega = {omega}"
                    );
                }
            }
        }
    }

    #[test]
    fn crossover_only_above_unit_ratio() {
        assert_eq!(edge_crossover(3.0), Some(0.25));
        assert_eq!(edge_crossover(1.0), None);
        assert_eq!(edge_crossover(0.5), None);
        // single sign change across the edge when it exists
        for omega in [2.0, 3.0, 5.0] {
            let crossing = edge_crossover(omega).unwrap();
            let mut flips = 0;
            let mut last = edge_alpha(SimplexEdge::R2Half, 1e-3, omega).unwrap() - 1.0;
            for k in 1..2000 {
                let r = k as f64 * (0.5 - 2e-3) / 2000.0 + 1e-3;
                let now = edge_alpha(SimplexEdge::R2Half, r, omega).unwrap() - 1.0;
                if now.signum() != last.signum() {
                    flips += 1;
                    assert!((r - crossing).abs() < 3e-4);
                }
                last = now;
            }
            assert_eq!(flips, 1, "omega = {omega}");
        }
    }
}
