//! Brute-force verification, independent of every closed form.
//!
//! The oracle knows nothing about families or stripes: it evaluates the
//! survival amplitude on a dense time grid, brackets local minima of the
//! magnitude, and refines them. A zero of the magnitude is generically a
//! touch, not a sign change, so refinement minimizes rather than bisects:
//! golden section narrows the bracket, then Newton steps on the derivative
//! of the squared magnitude pin the minimum to machine precision.

use crate::error::Error;
use crate::exec;
use crate::state::{survival_amplitude, Spectrum, Triad};
use crate::{ORTHOGONALITY_TOL, ZERO_POPULATION_TOL};

use std::f64::consts::PI;

/// Sampled minima above this magnitude are not even candidate zeros. With
/// the default step the amplitude cannot climb this far between a true zero
/// and its nearest sample (slope is at most omega31 / 2 after regauging).
pub const BRACKET_THRESHOLD: f64 = 0.05;

/// Time-domain search parameters. Build one with [`ZeroSearchConfig::for_spectrum`]
/// unless a test needs a specific horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSearchConfig {
    /// Search horizon; zeros beyond it are reported as absent.
    pub t_max: f64,
    /// Sampling step; must stay at or below `pi / (10 omega31)` so no zero
    /// can hide between samples.
    pub scan_step: f64,
    /// Two times closer than this count as the same zero.
    pub refine_tol: f64,
    /// Magnitude below which a refined minimum counts as a zero.
    pub amp_tol: f64,
}

impl ZeroSearchConfig {
    /// Defaults scaled to the spectrum: step at 1/80 of the fastest period,
    /// horizon covering twenty beats even when `Omega` is extreme.
    pub fn for_spectrum(spectrum: &Spectrum) -> Self {
        let omega = spectrum.ratio();
        Self {
            t_max: 20.0 * (2.0 * PI / spectrum.omega21()) * (1.0f64).max(1.0 / omega),
            scan_step: PI / (40.0 * spectrum.omega31()),
            refine_tol: 1e-9,
            amp_tol: ORTHOGONALITY_TOL,
        }
    }

    /// Same defaults with a caller-chosen horizon.
    pub fn with_horizon(spectrum: &Spectrum, t_max: f64) -> Self {
        Self { t_max, ..Self::for_spectrum(spectrum) }
    }

    fn validate(&self, spectrum: &Spectrum) -> Result<(), Error> {
        let bound = PI / (10.0 * spectrum.omega31());
        if !(self.scan_step.is_finite() && self.scan_step > 0.0) || self.scan_step > bound {
            return Err(Error::ScanStepTooCoarse {
                step: self.scan_step,
                bound,
                omega31: spectrum.omega31(),
            });
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidConfig { reason: format!("t_max = {} must be positive", self.t_max) });
        }
        if !(self.refine_tol.is_finite() && self.refine_tol > 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!("refine_tol = {} must be positive", self.refine_tol),
            });
        }
        if !(self.amp_tol.is_finite() && self.amp_tol > 0.0) {
            return Err(Error::InvalidConfig { reason: format!("amp_tol = {} must be positive", self.amp_tol) });
        }
        Ok(())
    }
}

/// What the oracle thinks of one claimed orthogonality time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub claimed_tau: f64,
    pub oracle_first_zero: Option<f64>,
    pub amplitude_at_claim: f64,
    /// The amplitude really vanishes at the claim (within `amp_tol`).
    pub agrees: bool,
    /// The claim is also the first zero (within `refine_tol`).
    pub is_first: bool,
}

/// Smallest `t` in `(0, t_max]` where the overlap magnitude drops below
/// `amp_tol`, or `None` when the horizon holds no zero.
pub fn first_orthogonality_time(
    triad: &Triad,
    spectrum: &Spectrum,
    config: &ZeroSearchConfig,
) -> Result<Option<f64>, Error> {
    Ok(zeros_up_to(triad, spectrum, config, 1)?.first().copied())
}

/// Second distinct zero on the horizon, if any.
pub fn second_zero(
    triad: &Triad,
    spectrum: &Spectrum,
    config: &ZeroSearchConfig,
) -> Result<Option<f64>, Error> {
    Ok(zeros_up_to(triad, spectrum, config, 2)?.get(1).copied())
}

/// Evaluates the amplitude at the claim and compares against the scanned
/// first zero.
pub fn verify_solution(
    triad: &Triad,
    spectrum: &Spectrum,
    claimed_tau: f64,
    config: &ZeroSearchConfig,
) -> Result<VerificationReport, Error> {
    if !(claimed_tau.is_finite() && claimed_tau >= 0.0) {
        return Err(Error::InvalidTime { t: claimed_tau });
    }
    let amplitude_at_claim = survival_amplitude(triad, spectrum, claimed_tau).magnitude();
    let oracle_first_zero = first_orthogonality_time(triad, spectrum, config)?;
    Ok(VerificationReport {
        claimed_tau,
        oracle_first_zero,
        amplitude_at_claim,
        agrees: amplitude_at_claim < config.amp_tol,
        is_first: oracle_first_zero
            .map_or(false, |z| (z - claimed_tau).abs() < config.refine_tol),
    })
}

/// Verifies a batch of claims with per-case default configs, in input order.
pub fn verify_batch(cases: &[(Triad, Spectrum, f64)]) -> Vec<Result<VerificationReport, Error>> {
    exec::map_indexed(cases.len(), |i| {
        let (triad, spectrum, tau) = &cases[i];
        verify_solution(triad, spectrum, *tau, &ZeroSearchConfig::for_spectrum(spectrum))
    })
}

/// Single-threaded variant of [`verify_batch`]; same reports, same order.
pub fn verify_batch_seq(cases: &[(Triad, Spectrum, f64)]) -> Vec<Result<VerificationReport, Error>> {
    exec::map_indexed_seq(cases.len(), |i| {
        let (triad, spectrum, tau) = &cases[i];
        verify_solution(triad, spectrum, *tau, &ZeroSearchConfig::for_spectrum(spectrum))
    })
}

fn zeros_up_to(
    triad: &Triad,
    spectrum: &Spectrum,
    config: &ZeroSearchConfig,
    count: usize,
) -> Result<Vec<f64>, Error> {
    config.validate(spectrum)?;
    if triad.populated(ZERO_POPULATION_TOL).len() < 2 {
        return Err(Error::StationaryState);
    }
    let n = (config.t_max / config.scan_step).ceil() as usize;
    let mag = |t: f64| survival_amplitude(triad, spectrum, t).magnitude();

    let mut zeros: Vec<f64> = Vec::new();
    let mut prev = mag(0.0);
    let mut here = mag(config.scan_step);
    for i in 1..n {
        let next = mag((i + 1) as f64 * config.scan_step);
        if here <= prev && here <= next && here < BRACKET_THRESHOLD {
            let lo = (i - 1) as f64 * config.scan_step;
            let hi = (i + 1) as f64 * config.scan_step;
            let t = refine_minimum(triad, spectrum, lo, hi);
            let distinct = zeros
                .last()
                .map_or(true, |z| t - z > 2.0 * config.scan_step);
            if mag(t) < config.amp_tol && distinct {
                zeros.push(t);
                if zeros.len() == count {
                    break;
                }
            }
        }
        prev = here;
        here = next;
    }
    Ok(zeros)
}

/// Golden-section narrowing followed by Newton steps on `d|f|^2/dt`. The
/// squared magnitude is analytic, so near an isolated zero its derivative is
/// dominated by a linear term and Newton lands on the minimum to roundoff.
fn refine_minimum(triad: &Triad, spectrum: &Spectrum, mut a: f64, mut b: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mag = |t: f64| survival_amplitude(triad, spectrum, t).magnitude();
    let (lo, hi) = (a, b);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = mag(c);
    let mut fd = mag(d);
    for _ in 0..80 {
        if b - a < 1e-10 * b.max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = mag(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = mag(d);
        }
    }
    let mut t = 0.5 * (a + b);
    for _ in 0..12 {
        let (g1, g2) = magnitude_sqr_derivatives(triad, spectrum, t);
        if !(g2 > 0.0) {
            break;
        }
        let step = g1 / g2;
        let candidate = t - step;
        if !candidate.is_finite() || candidate < lo || candidate > hi {
            break;
        }
        t = candidate;
        if step.abs() < 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    t
}

/// First and second derivatives of `|f(t)|^2` for
/// `f = r1 + r2 exp(-i w21 t) + r3 exp(-i w31 t)`.
fn magnitude_sqr_derivatives(triad: &Triad, spectrum: &Spectrum, t: f64) -> (f64, f64) {
    let [r1, r2, r3] = triad.as_array();
    let w2 = spectrum.omega21();
    let w3 = spectrum.omega31();
    let (s2, c2) = (w2 * t).sin_cos();
    let (s3, c3) = (w3 * t).sin_cos();

    let re = r1 + r2 * c2 + r3 * c3;
    let im = -(r2 * s2 + r3 * s3);
    let re1 = -(r2 * w2 * s2 + r3 * w3 * s3);
    let im1 = -(r2 * w2 * c2 + r3 * w3 * c3);
    let re2 = -(r2 * w2 * w2 * c2 + r3 * w3 * w3 * c3);
    let im2 = r2 * w2 * w2 * s2 + r3 * w3 * w3 * s3;

    let g1 = 2.0 * (re * re1 + im * im1);
    let g2 = 2.0 * (re1 * re1 + im1 * im1 + re * re2 + im * im2);
    (g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family2_triad;
    use crate::qsl::qsl_report;

    fn spectrum(w21: f64, w32: f64) -> Spectrum {
        Spectrum::new(w21, w32).unwrap()
    }

    fn triad(r1: f64, r2: f64, r3: f64) -> Triad {
        Triad::new(r1, r2, r3).unwrap()
    }

    #[test]
    fn finds_qubit_first_zero() {
        let s = spectrum(1.0, 1.0);
        let cfg = ZeroSearchConfig::for_spectrum(&s);
        let t = first_orthogonality_time(&triad(0.5, 0.5, 0.0), &s, &cfg).unwrap().unwrap();
        assert!((t - PI).abs() < cfg.refine_tol);
    }

    #[test]
    fn finds_equal_weight_first_and_second_zeros() {
        let s = spectrum(1.0, 1.0);
        let cfg = ZeroSearchConfig::for_spectrum(&s);
        let thirds = triad(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        let t1 = first_orthogonality_time(&thirds, &s, &cfg).unwrap().unwrap();
        assert!((t1 - 2.0 * PI / 3.0).abs() < 1e-8);
        let t2 = second_zero(&thirds, &s, &cfg).unwrap().unwrap();
        assert!((t2 - 4.0 * PI / 3.0).abs() < 1e-8);
        assert!((t2 - 2.0 * t1).abs() < 1e-8);
    }

    #[test]
    fn qubit_second_zero_is_third_harmonic() {
        let s = spectrum(1.0, 1.0);
        let cfg = ZeroSearchConfig::for_spectrum(&s);
        let t2 = second_zero(&triad(0.5, 0.5, 0.0), &s, &cfg).unwrap().unwrap();
        assert!((t2 - 3.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn dominant_population_never_reaches_zero() {
        let s = spectrum(1.0, 1.0);
        let cfg = ZeroSearchConfig::with_horizon(&s, 100.0);
        let heavy = triad(0.6, 0.2, 0.2);
        assert_eq!(first_orthogonality_time(&heavy, &s, &cfg).unwrap(), None);
        // the magnitude floor is 2 * 0.6 - 1 = 0.2: the other phasors are
        // too short to cancel the dominant one
        let mut floor = f64::INFINITY;
        let mut t = 0.0;
        while t < 100.0 {
            floor = floor.min(survival_amplitude(&heavy, &s, t).magnitude());
            t += cfg.scan_step;
        }
        assert!(floor > 0.199, "observed floor {floor}");
    }

    #[test]
    fn stationary_input_is_an_error() {
        let s = spectrum(1.0, 1.0);
        let cfg = ZeroSearchConfig::for_spectrum(&s);
        assert!(matches!(
            first_orthogonality_time(&triad(1.0, 0.0, 0.0), &s, &cfg),
            Err(Error::StationaryState)
        ));
        assert!(matches!(
            second_zero(&triad(0.0, 1.0, 0.0), &s, &cfg),
            Err(Error::StationaryState)
        ));
    }

    #[test]
    fn rejects_coarse_steps() {
        let s = spectrum(1.0, 1.0);
        let mut cfg = ZeroSearchConfig::for_spectrum(&s);
        cfg.scan_step = PI / (5.0 * s.omega31());
        assert!(matches!(
            first_orthogonality_time(&triad(0.5, 0.5, 0.0), &s, &cfg),
            Err(Error::ScanStepTooCoarse { .. })
        ));
        cfg = ZeroSearchConfig::for_spectrum(&s);
        cfg.refine_tol = 0.0;
        assert!(first_orthogonality_time(&triad(0.5, 0.5, 0.0), &s, &cfg).is_err());
    }

    #[test]
    fn verifies_analytic_claims() {
        let s = spectrum(1.0, 0.5);
        let cfg = ZeroSearchConfig::for_spectrum(&s);
        let t = family2_triad(&s, 2.5).unwrap().unwrap();
        let report = verify_solution(&t, &s, 2.5, &cfg).unwrap();
        assert!(report.agrees);
        assert!(report.is_first);

        // a later qubit zero: correct but not first
        let s = spectrum(1.0, 1.0);
        let cfg = ZeroSearchConfig::for_spectrum(&s);
        let report =
            verify_solution(&triad(0.5, 0.0, 0.5), &s, 3.0 * PI / 2.0, &cfg).unwrap();
        assert!(report.agrees);
        assert!(!report.is_first);
        assert!((report.oracle_first_zero.unwrap() - PI / 2.0).abs() < 1e-8);

        // a wrong claim
        let thirds = triad(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
        let report = verify_solution(&thirds, &s, PI / 2.0, &cfg).unwrap();
        assert!(!report.agrees);
    }

    #[test]
    fn batch_matches_sequential() {
        let mut cases = Vec::new();
        for k in 1..20 {
            let s = spectrum(1.0, 0.3 + 0.2 * k as f64);
            let x = 0.6 * PI;
            if let Ok(Some(t)) = family2_triad(&s, x) {
                cases.push((t, s, x));
            }
        }
        assert!(cases.len() > 5);
        let par = verify_batch(&cases);
        let seq = verify_batch_seq(&cases);
        assert_eq!(par, seq);
        for report in par {
            assert!(report.unwrap().agrees);
        }
    }

    #[test]
    fn halving_the_step_does_not_move_zeros() {
        for (w32, x) in [(0.5, 2.5), (1.0, 2.0), (3.0, 0.8 )] {
            let s = spectrum(1.0, w32);
            let t = match family2_triad(&s, x).unwrap() {
                Some(t) => t,
                None => continue,
            };
            let coarse = ZeroSearchConfig::for_spectrum(&s);
            let mut fine = coarse;
            fine.scan_step /= 2.0;
            let a = first_orthogonality_time(&t, &s, &coarse).unwrap().unwrap();
            let b = first_orthogonality_time(&t, &s, &fine).unwrap().unwrap();
            assert!((a - b).abs() < coarse.refine_tol, "w32 = {w32}");
        }
    }

    #[test]
    fn zeros_respect_the_speed_limit() {
        // modest in-module sweep; the full randomized sweep lives in the
        // integration suite
        for k in 1..30 {
            let s = spectrum(1.0, 0.2 * k as f64);
            let cfg = ZeroSearchConfig::for_spectrum(&s);
            for x in [0.55 * PI, 0.75 * PI, 0.95 * PI] {
                if let Ok(Some(t)) = family2_triad(&s, x) {
                    let zero = first_orthogonality_time(&t, &s, &cfg).unwrap().unwrap();
                    let bound = qsl_report(&t, &s).unwrap().tau_qsl;
                    assert!(zero >= bound - 1e-9, "k = {k}, x = {x}");
                }
            }
        }
    }
}
