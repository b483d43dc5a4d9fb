//! Where solutions live in the `(Omega, omega21 tau)` plane and on the
//! population simplex.
//!
//! With `omega21 tau` restricted to `(0, pi)`, generic solutions fill a
//! family of stripes indexed by `l = 0, 1, 2, ...`. Stripe `l` opens once
//! `Omega > 2l`, its lower border is always `(2l+1) pi / (1 + Omega)`, and
//! its upper border is flat at `pi` until `Omega = 2l + 1`, decaying as
//! `(2l+1) pi / Omega` beyond. Populations degenerate to balanced two-level
//! states on the borders, and border crossings at rational `Omega` carry the
//! pinned-edge families. The same machinery rasterizes the plane into a grid
//! of classified cells and projects solutions onto the simplex.

use crate::error::Error;
use crate::exec;
use crate::families::{family2_triad, SimplexEdge};
use crate::qsl::{alpha, BindingBound};
use crate::state::{LevelPair, Spectrum, Triad};
use crate::EQUAL_BAND_TOL;

use std::f64::consts::PI;

/// Earliest possible orthogonality time over every family and triad:
/// `pi / omega31`, attained only by the balanced state on the outer pair.
pub fn tau_min(spectrum: &Spectrum) -> f64 {
    PI / spectrum.omega31()
}

/// How a stripe's upper border behaves at this `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripeRegime {
    /// `2l <= Omega <= 2l + 1`: upper border pinned at `pi`.
    Plateau,
    /// `Omega > 2l + 1`: upper border `(2l+1) pi / Omega`.
    Decay,
}

/// Open interval of `omega21 tau` occupied by stripe `l` at a fixed ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripeBounds {
    pub l: u32,
    pub lower: f64,
    pub upper: f64,
    pub regime: StripeRegime,
}

impl StripeBounds {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, omega21_tau: f64) -> bool {
        omega21_tau > self.lower && omega21_tau < self.upper
    }
}

/// Bounds of stripe `l`, or `None` where the stripe is absent
/// (`Omega <= 2l`, including the degenerate zero-width tip).
pub fn stripe_bounds(l: u32, omega_ratio: f64) -> Result<Option<StripeBounds>, Error> {
    if !(omega_ratio.is_finite() && omega_ratio > 0.0) {
        return Err(Error::InvalidRatio { value: omega_ratio });
    }
    let odd = (2 * l + 1) as f64;
    let lower = odd * PI / (1.0 + omega_ratio);
    let (upper, regime) = if omega_ratio <= odd {
        (PI, StripeRegime::Plateau)
    } else {
        (odd * PI / omega_ratio, StripeRegime::Decay)
    };
    if lower >= upper {
        return Ok(None);
    }
    Ok(Some(StripeBounds { l, lower, upper, regime }))
}

/// Number of stripes present at this ratio, counted straight off the bounds.
pub fn stripe_count(omega_ratio: f64) -> Result<u32, Error> {
    let mut count = 0;
    while stripe_bounds(count, omega_ratio)?.is_some() {
        count += 1;
    }
    Ok(count)
}

/// The three border curve families, named by their plot color. Each curve
/// carries one balanced pair: the population of the spectator level vanishes
/// as a stripe interior approaches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderKind {
    /// `omega21 tau` at an odd multiple of pi.
    Blue,
    /// `omega31 tau` at an odd multiple of pi; stripe lower borders.
    Red,
    /// `omega32 tau` at an odd multiple of pi; stripe upper borders past
    /// the plateau.
    Green,
}

impl BorderKind {
    pub const ALL: [BorderKind; 3] = [BorderKind::Red, BorderKind::Green, BorderKind::Blue];

    pub fn pair(&self) -> LevelPair {
        match self {
            BorderKind::Blue => LevelPair::TwoOne,
            BorderKind::Red => LevelPair::ThreeOne,
            BorderKind::Green => LevelPair::ThreeTwo,
        }
    }

    /// The balanced triad this border carries.
    pub fn qubit_triad(&self) -> Triad {
        self.pair().qubit_triad()
    }

    /// The angle this border constrains, as a function of `(x, Omega)` with
    /// `x = omega21 tau`.
    fn angle(&self, x: f64, omega_ratio: f64) -> f64 {
        match self {
            BorderKind::Blue => x,
            BorderKind::Red => x * (1.0 + omega_ratio),
            BorderKind::Green => x * omega_ratio,
        }
    }
}

impl std::fmt::Display for BorderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BorderKind::Blue => write!(f, "blue"),
            BorderKind::Red => write!(f, "red"),
            BorderKind::Green => write!(f, "green"),
        }
    }
}

/// A border curve passing within tolerance of a point: which family, and the
/// curve index `l` (the angle sits near `(2l+1) pi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BorderHit {
    pub kind: BorderKind,
    pub l: u32,
}

/// All border curves whose constrained angle lies within `tol` of an odd
/// multiple of pi at `(omega21_tau, Omega)`. Several can match at once at
/// curve crossings; the result lists them in red, green, blue order.
pub fn border_kind(omega21_tau: f64, omega_ratio: f64, tol: f64) -> Vec<BorderHit> {
    let mut hits = Vec::new();
    for kind in BorderKind::ALL {
        let angle = kind.angle(omega21_tau, omega_ratio);
        if let Some(l) = nearest_odd_index(angle, tol) {
            hits.push(BorderHit { kind, l });
        }
    }
    hits
}

/// Index `l >= 0` such that `|angle - (2l+1) pi| < tol`, if any.
fn nearest_odd_index(angle: f64, tol: f64) -> Option<u32> {
    let k = ((angle / PI - 1.0) / 2.0).round();
    if k < 0.0 {
        return None;
    }
    let dist = (angle - (2.0 * k + 1.0) * PI).abs();
    (dist < tol).then_some(k as u32)
}

/// Index `l >= 0` such that `|angle - 2(l+1) pi| < tol`, if any.
fn nearest_even_index(angle: f64, tol: f64) -> Option<u32> {
    let k = (angle / (2.0 * PI) - 1.0).round();
    if k < 0.0 {
        return None;
    }
    let dist = (angle - 2.0 * (k + 1.0) * PI).abs();
    (dist < tol).then_some(k as u32)
}

/// Marked crossings of border curves, each carrying one pinned-edge family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionKind {
    /// Blue meets red: `omega21 tau = (2l+1) pi`, `Omega = 2(l'+1) / (2l+1)`.
    Star,
    /// Blue meets green: `omega21 tau = (2l+1) pi`, `Omega = (2l'+1) / (2l+1)`.
    Triangle,
    /// Red meets green: `omega21 tau = 2(l+1) pi`, `Omega = (2l'+1) / (2(l+1))`.
    Square,
}

impl IntersectionKind {
    /// Which population the family at this crossing pins at 1/2.
    pub fn edge(&self) -> SimplexEdge {
        match self {
            IntersectionKind::Star => SimplexEdge::R1Half,
            IntersectionKind::Triangle => SimplexEdge::R2Half,
            IntersectionKind::Square => SimplexEdge::R3Half,
        }
    }
}

impl std::fmt::Display for IntersectionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntersectionKind::Star => write!(f, "star"),
            IntersectionKind::Triangle => write!(f, "triangle"),
            IntersectionKind::Square => write!(f, "square"),
        }
    }
}

/// A crossing match: the kind plus both curve indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntersectionHit {
    pub kind: IntersectionKind,
    pub l: u32,
    pub l_prime: u32,
}

/// Looks for a marked crossing within `tol` of the point, applying `tol`
/// both to the angle and to the ratio. Indices are searched up to
/// `max_index`; with a tolerance below the local grid spacing at most one
/// kind can match, and the closer ratio wins if two do.
pub fn intersection_kind(
    omega21_tau: f64,
    omega_ratio: f64,
    tol: f64,
    max_index: u32,
) -> Option<IntersectionHit> {
    intersection_kind_with(omega21_tau, omega_ratio, tol, tol, max_index)
}

/// Crossing search with separate angle and ratio tolerances; the grid scan
/// uses half a cell in each direction.
pub fn intersection_kind_with(
    omega21_tau: f64,
    omega_ratio: f64,
    angle_tol: f64,
    ratio_tol: f64,
    max_index: u32,
) -> Option<IntersectionHit> {
    // on an odd blue line: star (even numerator) or triangle (odd numerator)
    if let Some(l) = nearest_odd_index(omega21_tau, angle_tol) {
        if l <= max_index {
            let denom = (2 * l + 1) as f64;
            let star = nearest_ratio(omega_ratio, denom, true, ratio_tol, max_index)
                .map(|(lp, d)| (IntersectionHit { kind: IntersectionKind::Star, l, l_prime: lp }, d));
            let tri = nearest_ratio(omega_ratio, denom, false, ratio_tol, max_index)
                .map(|(lp, d)| (IntersectionHit { kind: IntersectionKind::Triangle, l, l_prime: lp }, d));
            match (star, tri) {
                (Some((s, ds)), Some((t, dt))) => return Some(if ds <= dt { s } else { t }),
                (Some((s, _)), None) => return Some(s),
                (None, Some((t, _))) => return Some(t),
                (None, None) => {}
            }
        }
    }
    // on an even blue line: square (odd numerator over even denominator)
    if let Some(l) = nearest_even_index(omega21_tau, angle_tol) {
        if l <= max_index {
            let denom = (2 * (l + 1)) as f64;
            if let Some((lp, _)) = nearest_ratio(omega_ratio, denom, false, ratio_tol, max_index) {
                return Some(IntersectionHit { kind: IntersectionKind::Square, l, l_prime: lp });
            }
        }
    }
    None
}

/// Closest `l'` such that `Omega` is within `tol` of
/// `(2l'+2)/denom` (even numerators) or `(2l'+1)/denom` (odd numerators).
/// Returns the index and the distance.
fn nearest_ratio(
    omega_ratio: f64,
    denom: f64,
    even_numerator: bool,
    tol: f64,
    max_index: u32,
) -> Option<(u32, f64)> {
    let target = omega_ratio * denom;
    let k = if even_numerator {
        (target / 2.0 - 1.0).round()
    } else {
        ((target - 1.0) / 2.0).round()
    };
    if k < 0.0 || k > max_index as f64 {
        return None;
    }
    let numerator = if even_numerator { 2.0 * k + 2.0 } else { 2.0 * k + 1.0 };
    let dist = (omega_ratio - numerator / denom).abs();
    (dist < tol).then_some((k as u32, dist))
}

/// Classification of one rasterized cell, by its center point.
#[derive(Debug, Clone, PartialEq)]
pub enum CellContent {
    /// A generic solution with its forced populations.
    InteriorII(Triad),
    /// A border curve passes through the cell; populations degenerate to the
    /// balanced pair.
    Border { kind: BorderKind, triad: Triad },
    /// A marked crossing passes through the cell.
    Intersection(IntersectionHit),
    /// No solution of any family.
    Empty,
}

/// One grid cell: center coordinates plus content.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramCell {
    pub omega: f64,
    pub omega21_tau: f64,
    pub content: CellContent,
}

/// Rasterized diagram over `(0, omega_max] x (0, tau_max]`, cells stored
/// ratio-major (all `tau` cells of the first ratio column first).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramGrid {
    pub omega_max: f64,
    pub tau_max: f64,
    pub resolution: usize,
    pub cells: Vec<DiagramCell>,
}

impl DiagramGrid {
    pub fn cell(&self, omega_index: usize, tau_index: usize) -> &DiagramCell {
        &self.cells[omega_index * self.resolution + tau_index]
    }
}

/// Classifies every cell of a `resolution x resolution` grid of cell centers.
/// Detection tolerance for borders and crossings is half a cell in each
/// direction, so a curve marks exactly the cells it passes through.
pub fn scan_diagram(omega_max: f64, tau_max: f64, resolution: usize) -> Result<DiagramGrid, Error> {
    let (step_o, step_t) = check_scan_params(omega_max, tau_max, resolution)?;
    let columns = exec::map_indexed(resolution, |i| scan_column(i, resolution, step_o, step_t));
    Ok(DiagramGrid { omega_max, tau_max, resolution, cells: columns.into_iter().flatten().collect() })
}

/// Single-threaded variant of [`scan_diagram`]; same output, cell for cell.
pub fn scan_diagram_seq(
    omega_max: f64,
    tau_max: f64,
    resolution: usize,
) -> Result<DiagramGrid, Error> {
    let (step_o, step_t) = check_scan_params(omega_max, tau_max, resolution)?;
    let columns = exec::map_indexed_seq(resolution, |i| scan_column(i, resolution, step_o, step_t));
    Ok(DiagramGrid { omega_max, tau_max, resolution, cells: columns.into_iter().flatten().collect() })
}

fn check_scan_params(omega_max: f64, tau_max: f64, resolution: usize) -> Result<(f64, f64), Error> {
    if resolution == 0 {
        return Err(Error::ZeroResolution);
    }
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(Error::InvalidRatio { value: omega_max });
    }
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::InvalidTime { t: tau_max });
    }
    Ok((omega_max / resolution as f64, tau_max / resolution as f64))
}

fn scan_column(i: usize, resolution: usize, step_o: f64, step_t: f64) -> Vec<DiagramCell> {
    let omega = (i as f64 + 0.5) * step_o;
    (0..resolution)
        .map(|j| {
            let x = (j as f64 + 0.5) * step_t;
            DiagramCell { omega, omega21_tau: x, content: classify_cell(x, omega, step_t, step_o) }
        })
        .collect()
}

/// Cell-center classification. Crossings outrank borders, borders outrank
/// the generic solver. Ties at cell boundaries are made inclusive by a
/// relative nudge so adjacent grids stay deterministic.
fn classify_cell(x: f64, omega: f64, step_t: f64, step_o: f64) -> CellContent {
    let half_t = 0.5 * step_t * (1.0 + 1e-9);
    let half_o = 0.5 * step_o * (1.0 + 1e-9);
    // generous cap: crossing numerators grow like Omega * (angle / pi)
    let max_index = ((omega + 2.0) * (x / PI + 2.0)) as u32 + 2;
    if let Some(hit) = intersection_kind_with(x, omega, half_t, half_o, max_index) {
        return CellContent::Intersection(hit);
    }
    if let Some(kind) = nearest_border_in_x(x, omega, half_t) {
        return CellContent::Border { kind: kind.kind, triad: kind.kind.qubit_triad() };
    }
    let spectrum = Spectrum::new(1.0, omega).expect("scan ratios are validated positive");
    match family2_triad(&spectrum, x) {
        Ok(Some(triad)) => CellContent::InteriorII(triad),
        _ => CellContent::Empty,
    }
}

/// The border curve closest to `x` in the tau direction, within `tol`,
/// measured by where each curve crosses this ratio column.
fn nearest_border_in_x(x: f64, omega_ratio: f64, tol: f64) -> Option<BorderHit> {
    let mut best: Option<(BorderHit, f64)> = None;
    for kind in BorderKind::ALL {
        // slope of the constrained angle in x converts angle distance back
        let slope = match kind {
            BorderKind::Blue => 1.0,
            BorderKind::Red => 1.0 + omega_ratio,
            BorderKind::Green => omega_ratio,
        };
        let angle = kind.angle(x, omega_ratio);
        if let Some(l) = nearest_odd_index(angle, tol * slope) {
            let dist = (angle - (2 * l + 1) as f64 * PI).abs() / slope;
            if best.map_or(true, |(_, d)| dist < d) {
                best = Some((BorderHit { kind, l }, dist));
            }
        }
    }
    best.map(|(hit, _)| hit)
}

/// Where a simplex point comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimplexPointKind {
    /// Generic solution sampled inside stripe `l`.
    Interior { stripe: u32 },
    /// Pinned-edge family point.
    Edge(SimplexEdge),
    /// Balanced two-level vertex.
    Vertex(LevelPair),
}

/// One point of the simplex map: populations, speed-limit ratio, binding
/// bound, and the ratio it was sampled at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint {
    pub triad: Triad,
    pub alpha: f64,
    pub bound: BindingBound,
    pub omega: f64,
    pub kind: SimplexPointKind,
}

/// Projects solutions onto the population simplex for each given ratio:
/// `tau_resolution` interior samples per stripe, the same number of points
/// per pinned edge, and the three vertices. Interior populations always land
/// strictly inside the half-open triangle (`0 < r_i < 1/2`); edges and
/// vertices carry the boundary.
pub fn scan_simplex(omega_samples: &[f64], tau_resolution: usize) -> Result<Vec<SimplexPoint>, Error> {
    check_simplex_params(omega_samples, tau_resolution)?;
    let groups =
        exec::map_indexed(omega_samples.len(), |i| simplex_points_at(omega_samples[i], tau_resolution));
    Ok(groups.into_iter().flatten().collect())
}

/// Single-threaded variant of [`scan_simplex`]; same points, same order.
pub fn scan_simplex_seq(
    omega_samples: &[f64],
    tau_resolution: usize,
) -> Result<Vec<SimplexPoint>, Error> {
    check_simplex_params(omega_samples, tau_resolution)?;
    let groups = exec::map_indexed_seq(omega_samples.len(), |i| {
        simplex_points_at(omega_samples[i], tau_resolution)
    });
    Ok(groups.into_iter().flatten().collect())
}

fn check_simplex_params(omega_samples: &[f64], tau_resolution: usize) -> Result<(), Error> {
    if tau_resolution == 0 {
        return Err(Error::ZeroResolution);
    }
    for &omega in omega_samples {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidRatio { value: omega });
        }
    }
    Ok(())
}

fn simplex_points_at(omega: f64, tau_resolution: usize) -> Vec<SimplexPoint> {
    let mut points = Vec::new();
    let spectrum = Spectrum::new(1.0, omega).expect("validated positive");
    let class = |a: f64| {
        if a < 1.0 - EQUAL_BAND_TOL {
            BindingBound::MandelstamTamm
        } else if a > 1.0 + EQUAL_BAND_TOL {
            BindingBound::MargolusLevitin
        } else {
            BindingBound::Equal
        }
    };
    let mut l = 0;
    while let Some(bounds) = stripe_bounds(l, omega).expect("validated positive") {
        for k in 0..tau_resolution {
            let x = bounds.lower + (k as f64 + 0.5) * bounds.width() / tau_resolution as f64;
            if let Ok(Some(triad)) = family2_triad(&spectrum, x) {
                let a = alpha(&triad, omega).expect("solution triads are never stationary");
                points.push(SimplexPoint {
                    triad,
                    alpha: a,
                    bound: class(a),
                    omega,
                    kind: SimplexPointKind::Interior { stripe: l },
                });
            }
        }
        l += 1;
    }
    for edge in SimplexEdge::ALL {
        for k in 0..tau_resolution {
            let r = (k as f64 + 0.5) * 0.5 / tau_resolution as f64;
            let triad = edge.triad(r).expect("sampled strictly inside (0, 1/2)");
            let a = crate::qsl::edge_alpha(edge, r, omega).expect("validated domain");
            points.push(SimplexPoint { triad, alpha: a, bound: class(a), omega, kind: SimplexPointKind::Edge(edge) });
        }
    }
    for pair in LevelPair::ALL {
        points.push(SimplexPoint {
            triad: pair.qubit_triad(),
            alpha: 1.0,
            bound: BindingBound::Equal,
            omega,
            kind: SimplexPointKind::Vertex(pair),
        });
    }
    points
}
