//! Solution families of the vanishing-overlap condition.
//!
//! At a candidate time `tau`, either some angle `omega_ij * tau` is a
//! multiple of pi (boundary case) or none is. In the generic case the
//! populations are forced: each is a quotient of sines of the three angles,
//! valid only where all three quotients land strictly inside `(0, 1)`. The
//! boundary case splits by parity: odd multiples on one pair alone give the
//! balanced two-level states, and a rational spacing ratio lets two angles
//! hit multiples simultaneously, pinning one population at exactly 1/2 while
//! the remaining pair trades weight freely.

use crate::error::Error;
use crate::state::{LevelPair, Spectrum, Triad};
use crate::ANGLE_TOL;

/// `|D|` below this is treated as a vanishing denominator: no generic
/// solution, even though no angle sits on a boundary.
pub const DENOMINATOR_TOL: f64 = 1e-9;

/// Default tolerance used by classification helpers.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Outcome of triad classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyLabel {
    /// One level holds everything; the state never moves.
    Stationary { level: usize },
    /// Balanced superposition of exactly two levels.
    IQubit { pair: LevelPair },
    /// One population pinned at 1/2, the other two strictly positive.
    IB { edge: SimplexEdge },
    /// All three populations strictly inside `(0, 1/2)`.
    II,
    /// Outside every family; such a state never becomes orthogonal, since a
    /// population above 1/2 leaves the other two phasors too short to cancel.
    NotClassified,
}

/// An edge of the admissible triangle, named by which population sits at 1/2.
///
/// Parametrizations follow one convention throughout the crate:
/// `R1Half -> (1/2, r, 1/2 - r)`, `R2Half -> (r, 1/2, 1/2 - r)`,
/// `R3Half -> (r, 1/2 - r, 1/2)`, with the free `r` strictly in `(0, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimplexEdge {
    R1Half,
    R2Half,
    R3Half,
}

impl SimplexEdge {
    pub const ALL: [SimplexEdge; 3] = [SimplexEdge::R1Half, SimplexEdge::R2Half, SimplexEdge::R3Half];

    /// 0-based index of the pinned population.
    pub fn pinned_index(&self) -> usize {
        match self {
            SimplexEdge::R1Half => 0,
            SimplexEdge::R2Half => 1,
            SimplexEdge::R3Half => 2,
        }
    }

    /// Concrete triad at parameter `r`.
    pub fn triad(&self, r: f64) -> Result<Triad, Error> {
        if !(r.is_finite() && r > 0.0 && r < 0.5) {
            return Err(Error::EdgeParameterOutOfRange { r });
        }
        match self {
            SimplexEdge::R1Half => Triad::new(0.5, r, 0.5 - r),
            SimplexEdge::R2Half => Triad::new(r, 0.5, 0.5 - r),
            SimplexEdge::R3Half => Triad::new(r, 0.5 - r, 0.5),
        }
    }
}

impl std::fmt::Display for SimplexEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimplexEdge::R1Half => write!(f, "r1=1/2"),
            SimplexEdge::R2Half => write!(f, "r2=1/2"),
            SimplexEdge::R3Half => write!(f, "r3=1/2"),
        }
    }
}

/// First orthogonality times of a balanced two-level state.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyITimes {
    pub pair: LevelPair,
    pub times: Vec<f64>,
}

/// Parity split of a rational spacing ratio `Omega = m/n` in lowest terms.
/// Coprimality rules out both even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityCase {
    NOddMEven,
    NEvenMOdd,
    NOddMOdd,
}

impl ParityCase {
    /// Which population gets pinned at 1/2 when both angles hit multiples
    /// of pi with these parities.
    pub fn edge(&self) -> SimplexEdge {
        match self {
            ParityCase::NOddMEven => SimplexEdge::R1Half,
            ParityCase::NEvenMOdd => SimplexEdge::R3Half,
            ParityCase::NOddMOdd => SimplexEdge::R2Half,
        }
    }
}

/// Rational spacing ratio `omega32 / omega21 = m / n`, coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalRelation {
    pub m: u64,
    pub n: u64,
    pub parity: ParityCase,
}

/// A one-parameter family pinned on `edge`, orthogonal at `tau` and at every
/// odd multiple of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbSolution {
    pub edge: SimplexEdge,
    pub tau: f64,
}

impl IbSolution {
    /// The first `count` orthogonality times: odd multiples of the base time.
    /// Even multiples realign all three phasors and drop out.
    pub fn times(&self, count: usize) -> Vec<f64> {
        (0..count).map(|k| (2 * k + 1) as f64 * self.tau).collect()
    }
}

/// Populations forced by a vanishing overlap at `tau` when no angle
/// `omega_ij * tau` sits on a multiple of pi:
/// `r_i = sin(omega_jk tau) / D` with `(i, j, k)` cyclic and
/// `D = sin(omega31 tau) + sin(omega12 tau) + sin(omega23 tau)`.
///
/// Returns `Ok(None)` when `|D| < DENOMINATOR_TOL` or any quotient leaves
/// `(0, 1)`; those times simply admit no solution. A boundary angle
/// (`|sin| < ANGLE_TOL`) is an `Err`: the caller must switch to the
/// boundary-family solvers.
pub fn family2_triad(spectrum: &Spectrum, tau: f64) -> Result<Option<Triad>, Error> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTime { t: tau });
    }
    let a = spectrum.omega21() * tau;
    let b = spectrum.omega32() * tau;
    let c = spectrum.omega31() * tau;
    let (sa, sb, sc) = (a.sin(), b.sin(), c.sin());
    for (pair, angle, s) in [
        (LevelPair::TwoOne, a, sa),
        (LevelPair::ThreeTwo, b, sb),
        (LevelPair::ThreeOne, c, sc),
    ] {
        if s.abs() < ANGLE_TOL {
            return Err(Error::BoundaryAngle {
                pair: pair_name(pair),
                multiple: (angle / std::f64::consts::PI).round() as i64,
            });
        }
    }
    let d = sc - sa - sb;
    if d.abs() < DENOMINATOR_TOL {
        return Ok(None);
    }
    let r1 = -sb / d;
    let r2 = sc / d;
    let r3 = -sa / d;
    if [r1, r2, r3].iter().any(|r| *r <= 0.0 || *r >= 1.0) {
        return Ok(None);
    }
    // quotients over a common denominator: the sum is 1 up to rounding
    let triad = Triad::new(r1, r2, r3).expect("sine quotients sum to one");
    Ok(Some(triad))
}

fn pair_name(pair: LevelPair) -> &'static str {
    match pair {
        LevelPair::TwoOne => "21",
        LevelPair::ThreeOne => "31",
        LevelPair::ThreeTwo => "32",
    }
}

/// Sorts a triad into its family, testing against `tol`-wide bands around
/// 0 and 1/2. Hits on an edge endpoint fall back to the adjacent vertex:
/// `(1/2, r, 1/2 - r)` with `r` within `tol` of 0 is a qubit, not an edge
/// point.
pub fn classify_triad(triad: &Triad, tol: f64) -> FamilyLabel {
    let r = triad.as_array();
    for (i, ri) in r.iter().enumerate() {
        if *ri >= 1.0 - tol {
            return FamilyLabel::Stationary { level: i };
        }
    }
    for pair in LevelPair::ALL {
        let k = pair.spectator();
        let (i, j) = other_two(k);
        if r[k] <= tol && (r[i] - 0.5).abs() <= tol && (r[j] - 0.5).abs() <= tol {
            return FamilyLabel::IQubit { pair };
        }
    }
    if r.iter().all(|ri| *ri > tol) {
        let pinned: Vec<usize> = (0..3).filter(|&i| (r[i] - 0.5).abs() <= tol).collect();
        if pinned.len() == 1 {
            let edge = match pinned[0] {
                0 => SimplexEdge::R1Half,
                1 => SimplexEdge::R2Half,
                _ => SimplexEdge::R3Half,
            };
            return FamilyLabel::IB { edge };
        }
        if r.iter().all(|ri| *ri < 0.5 - tol) {
            return FamilyLabel::II;
        }
    }
    FamilyLabel::NotClassified
}

fn other_two(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Orthogonality times of the balanced state on `pair`: odd multiples of
/// `pi / omega_ij`, smallest first.
pub fn family1_qubit_times(pair: LevelPair, spectrum: &Spectrum, count: usize) -> FamilyITimes {
    let spacing = pair.spacing(spectrum);
    let times = (0..count)
        .map(|k| (2 * k + 1) as f64 * std::f64::consts::PI / spacing)
        .collect();
    FamilyITimes { pair, times }
}

/// Detects `omega32 / omega21 = m / n` with `n <= max_denominator` and
/// `|Omega - m/n| < tol`, via the continued fraction of the ratio. Returns
/// the best such fraction, or `None` when no denominator that small comes
/// within `tol`.
pub fn detect_rational_relation(
    spectrum: &Spectrum,
    max_denominator: u64,
    tol: f64,
) -> Option<RationalRelation> {
    let target = spectrum.ratio();
    let (m, n) = limit_denominator(target, max_denominator.max(1))?;
    if m == 0 || (target - m as f64 / n as f64).abs() >= tol {
        return None;
    }
    let parity = match (n % 2, m % 2) {
        (1, 0) => ParityCase::NOddMEven,
        (0, 1) => ParityCase::NEvenMOdd,
        (1, 1) => ParityCase::NOddMOdd,
        // coprime pairs are never both even
        _ => unreachable!("continued fraction convergents are coprime"),
    };
    Some(RationalRelation { m, n, parity })
}

/// Closest fraction to `x` with denominator at most `limit`, in lowest terms.
fn limit_denominator(x: f64, limit: u64) -> Option<(u64, u64)> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    // walk the continued fraction, keeping the last two convergents
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut value = x;
    loop {
        let a = value.floor();
        if a >= u64::MAX as f64 {
            return None;
        }
        let a_int = a as u64;
        let q2 = q0.checked_add(a_int.checked_mul(q1)?)?;
        if q2 > limit {
            break;
        }
        let p2 = p0.checked_add(a_int.checked_mul(p1)?)?;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = value - a;
        if frac < 1e-15 {
            return Some((p1, q1));
        }
        value = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    // best semiconvergent under the limit, then the final convergent
    let k = (limit - q0) / q1;
    let (sp, sq) = (p0 + k * p1, q0 + k * q1);
    let err_semi = (x - sp as f64 / sq as f64).abs();
    let err_conv = (x - p1 as f64 / q1 as f64).abs();
    if sq > 0 && err_semi < err_conv {
        Some((sp, sq))
    } else {
        Some((p1, q1))
    }
}

/// The pinned-edge family granted by a rational ratio: both lower angles hit
/// multiples of pi at `tau = n pi / omega21`, and the parity of `(n, m)`
/// selects which population locks at 1/2.
pub fn family1b_solutions(relation: &RationalRelation, spectrum: &Spectrum) -> IbSolution {
    IbSolution {
        edge: relation.parity.edge(),
        tau: relation.n as f64 * std::f64::consts::PI / spectrum.omega21(),
    }
}

/// Specialization to equal spacings (`Omega = 1`, both gaps `omega`):
/// `r2 = cos(omega tau) / (cos(omega tau) - 1)`, `r1 = r3 = 1 / (2 (1 -
/// cos(omega tau)))`. Agrees with [`family2_triad`] wherever both apply, and
/// additionally covers the boundary angle `omega tau = pi`, where it lands on
/// the `r2 = 1/2` edge.
pub fn equally_spaced_triad(omega: f64, tau: f64) -> Result<Option<Triad>, Error> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidSpectrum { omega21: omega, omega32: omega });
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTime { t: tau });
    }
    let c = (omega * tau).cos();
    let gap = 1.0 - c;
    if gap < 1e-14 {
        return Err(Error::DegeneratePeriod);
    }
    let r2 = c / (c - 1.0);
    let r13 = 1.0 / (2.0 * gap);
    if r2 <= 0.0 || r2 >= 1.0 || r13 <= 0.0 || r13 >= 1.0 {
        return Ok(None);
    }
    Ok(Some(Triad::new(r13, r2, r13).expect("components sum to one")))
}
