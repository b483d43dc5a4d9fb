//! Three-level states, spectra, and the survival amplitude.
//!
//! The Hamiltonian is diagonal with eigenvalues `E1 < E2 < E3`; only the two
//! spacings matter, so a [`Spectrum`] stores `omega21` and `omega32` and the
//! energy gauge is fixed at `E1 = 0`. The survival amplitude of a state with
//! populations `r_i` is `sum_i r_i * exp(-i E_i t)`: relative phases of the
//! superposition cancel against their conjugates and never appear.

use crate::error::Error;
use crate::TRIAD_SUM_TOL;

/// Two positive level spacings, `omega21 = E2 - E1` and `omega32 = E3 - E2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    omega21: f64,
    omega32: f64,
}

impl Spectrum {
    pub fn new(omega21: f64, omega32: f64) -> Result<Self, Error> {
        if !(omega21.is_finite() && omega32.is_finite() && omega21 > 0.0 && omega32 > 0.0) {
            return Err(Error::InvalidSpectrum { omega21, omega32 });
        }
        Ok(Self { omega21, omega32 })
    }

    pub fn omega21(&self) -> f64 {
        self.omega21
    }

    pub fn omega32(&self) -> f64 {
        self.omega32
    }

    pub fn omega31(&self) -> f64 {
        self.omega21 + self.omega32
    }

    /// Spacing ratio `Omega = omega32 / omega21`.
    pub fn ratio(&self) -> f64 {
        self.omega32 / self.omega21
    }

    /// Eigenvalues in the `E1 = 0` gauge.
    pub fn levels(&self) -> [f64; 3] {
        [0.0, self.omega21, self.omega31()]
    }
}

/// A pair of levels `(i, j)` with `i > j`, named by the spacing it subtends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelPair {
    TwoOne,
    ThreeOne,
    ThreeTwo,
}

impl LevelPair {
    pub const ALL: [LevelPair; 3] = [LevelPair::TwoOne, LevelPair::ThreeOne, LevelPair::ThreeTwo];

    /// The spacing `omega_ij` this pair subtends.
    pub fn spacing(&self, spectrum: &Spectrum) -> f64 {
        match self {
            LevelPair::TwoOne => spectrum.omega21(),
            LevelPair::ThreeOne => spectrum.omega31(),
            LevelPair::ThreeTwo => spectrum.omega32(),
        }
    }

    /// Index (0-based) of the level left out of the pair.
    pub fn spectator(&self) -> usize {
        match self {
            LevelPair::TwoOne => 2,
            LevelPair::ThreeOne => 1,
            LevelPair::ThreeTwo => 0,
        }
    }

    /// The equal-weight triad living on this pair alone.
    pub fn qubit_triad(&self) -> Triad {
        let mut r = [0.5, 0.5, 0.5];
        r[self.spectator()] = 0.0;
        Triad { r }
    }
}

impl std::fmt::Display for LevelPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevelPair::TwoOne => write!(f, "21"),
            LevelPair::ThreeOne => write!(f, "31"),
            LevelPair::ThreeTwo => write!(f, "32"),
        }
    }
}

/// Populations `(r1, r2, r3)`: nonnegative, summing to 1 within
/// [`TRIAD_SUM_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triad {
    r: [f64; 3],
}

impl Triad {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self, Error> {
        let ok = r1.is_finite()
            && r2.is_finite()
            && r3.is_finite()
            && r1 >= 0.0
            && r2 >= 0.0
            && r3 >= 0.0
            && (r1 + r2 + r3 - 1.0).abs() <= TRIAD_SUM_TOL;
        if ok {
            Ok(Self { r: [r1, r2, r3] })
        } else {
            Err(Error::InvalidTriad { r1, r2, r3, tol: TRIAD_SUM_TOL })
        }
    }

    /// Divides by the sum first; rejects only nonpositive or non-finite input.
    /// Returns the triad and whether the sum actually needed adjusting.
    pub fn renormalized(r1: f64, r2: f64, r3: f64) -> Result<(Self, bool), Error> {
        let sum = r1 + r2 + r3;
        if !(sum.is_finite() && sum > 0.0 && r1 >= 0.0 && r2 >= 0.0 && r3 >= 0.0) {
            return Err(Error::InvalidTriad { r1, r2, r3, tol: TRIAD_SUM_TOL });
        }
        let adjusted = (sum - 1.0).abs() > 1e-9;
        Ok((Self { r: [r1 / sum, r2 / sum, r3 / sum] }, adjusted))
    }

    pub fn r1(&self) -> f64 {
        self.r[0]
    }

    pub fn r2(&self) -> f64 {
        self.r[1]
    }

    pub fn r3(&self) -> f64 {
        self.r[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.r
    }

    pub fn component(&self, i: usize) -> f64 {
        self.r[i]
    }

    pub fn max_component(&self) -> f64 {
        self.r[0].max(self.r[1]).max(self.r[2])
    }

    pub fn min_component(&self) -> f64 {
        self.r[0].min(self.r[1]).min(self.r[2])
    }

    /// Indices of levels with population above `tol`, in level order.
    pub fn populated(&self, tol: f64) -> Vec<usize> {
        (0..3).filter(|&i| self.r[i] > tol).collect()
    }
}

/// Full initial state: populations plus relative phases. Phases are stored
/// reduced to `[0, 2 pi)`; no quantity in this crate depends on them, which
/// the state-level amplitude method makes checkable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritState {
    triad: Triad,
    phases: [f64; 3],
}

impl QutritState {
    pub fn new(triad: Triad, phases: [f64; 3]) -> Result<Self, Error> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidTime { t: phases[0] });
        }
        let tau = std::f64::consts::TAU;
        let phases = [
            phases[0].rem_euclid(tau),
            phases[1].rem_euclid(tau),
            phases[2].rem_euclid(tau),
        ];
        Ok(Self { triad, phases })
    }

    pub fn triad(&self) -> &Triad {
        &self.triad
    }

    pub fn phases(&self) -> [f64; 3] {
        self.phases
    }

    /// Identical to [`survival_amplitude`] on the bare triad, bit for bit.
    pub fn survival_amplitude(&self, spectrum: &Spectrum, t: f64) -> Amplitude {
        survival_amplitude(&self.triad, spectrum, t)
    }
}

/// Value of the overlap `<psi(0)|psi(t)>`. Its magnitude never exceeds 1
/// beyond rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl Amplitude {
    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn magnitude_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Overlap of the freely evolved state with itself at `t = 0`:
/// `r1 + r2 exp(-i omega21 t) + r3 exp(-i omega31 t)`.
pub fn survival_amplitude(triad: &Triad, spectrum: &Spectrum, t: f64) -> Amplitude {
    let (s2, c2) = (spectrum.omega21() * t).sin_cos();
    let (s3, c3) = (spectrum.omega31() * t).sin_cos();
    let [r1, r2, r3] = triad.as_array();
    Amplitude { re: r1 + r2 * c2 + r3 * c3, im: -(r2 * s2 + r3 * s3) }
}

/// `|<psi(0)|psi(t)>|^2`.
pub fn survival_probability(triad: &Triad, spectrum: &Spectrum, t: f64) -> f64 {
    survival_amplitude(triad, spectrum, t).magnitude_sqr()
}

/// Whether the overlap magnitude falls below `tol` at time `t`.
pub fn is_orthogonal_at(triad: &Triad, spectrum: &Spectrum, t: f64, tol: f64) -> bool {
    survival_amplitude(triad, spectrum, t).magnitude() < tol
}
