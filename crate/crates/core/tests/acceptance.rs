//! End-to-end gates for the whole crate: closed forms against the scanning
//! oracle, bounds against sampled solutions, rasterized maps against the
//! analytic region layout. Each test prints one summary line so a full run
//! reads as a checklist.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orthotime::families::{
    classify_triad, detect_rational_relation, family1_qubit_times, family1b_solutions,
    family2_triad, FamilyLabel, SimplexEdge,
};
use orthotime::oracle::{first_orthogonality_time, second_zero, verify_batch, ZeroSearchConfig};
use orthotime::qsl::{alpha, edge_alpha, energy_dispersion, mean_energy, qsl_report};
use orthotime::regions::{stripe_bounds, tau_min, scan_diagram, BorderKind, CellContent};
use orthotime::{survival_amplitude, LevelPair, Spectrum, Triad};

/// Interior point of stripe `l` at parameter `u` in `(0, 1)`, if the stripe
/// is open at this ratio.
fn stripe_point(l: u32, omega: f64, u: f64) -> Option<f64> {
    let bounds = stripe_bounds(l, omega).unwrap()?;
    Some(bounds.lower + u * bounds.width())
}

/// A ratio whose stripe `l` is open, drawn from `(0.2, 6)`.
fn random_open_stripe(rng: &mut ChaCha8Rng) -> (f64, u32) {
    loop {
        let omega: f64 = rng.random_range(0.2..6.0);
        let count = orthotime::regions::stripe_count(omega).unwrap();
        let l = rng.random_range(0..count.max(1));
        if let Some(bounds) = stripe_bounds(l, omega).unwrap() {
            if bounds.width() > 0.05 {
                return (omega, l);
            }
        }
    }
}

#[test]
fn acceptance_01_closed_form_orthogonality_is_exact_on_a_dense_grid() {
    let start = Instant::now();
    let res = 200;
    let mut checked = 0u32;
    for i in 0..res {
        let omega = (i as f64 + 0.5) * 6.0 / res as f64;
        let spectrum = Spectrum::new(1.0, omega).unwrap();
        let count = orthotime::regions::stripe_count(omega).unwrap().max(1);
        for j in 0..res {
            let l = j % count;
            let u = 0.02 + 0.96 * (j as f64 + 0.5) / res as f64;
            let Some(x) = stripe_point(l, omega, u) else { continue };
            let triad = family2_triad(&spectrum, x)
                .unwrap()
                .unwrap_or_else(|| panic!("no solution at omega = {omega}, x = {x}"));
            let [r1, r2, r3] = triad.as_array();
            assert!((r1 + r2 + r3 - 1.0).abs() < 1e-12);
            let residual = survival_amplitude(&triad, &spectrum, x).magnitude();
            assert!(residual < 1e-10, "residual {residual} at omega = {omega}, x = {x}");
            checked += 1;
        }
    }
    assert!(checked > 30_000, "grid too sparse: {checked}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("acceptance 01 closed-form orthogonality exact on {checked} grid points: PASS");
}

#[test]
fn acceptance_02_equal_weight_benchmark() {
    let spectrum = Spectrum::new(1.0, 1.0).unwrap();
    let tau = 2.0 * PI / 3.0;
    let triad = family2_triad(&spectrum, tau).unwrap().unwrap();
    for r in triad.as_array() {
        assert!((r - 1.0 / 3.0).abs() < 1e-12, "unbalanced component {r}");
    }
    let cfg = ZeroSearchConfig::for_spectrum(&spectrum);
    let first = first_orthogonality_time(&triad, &spectrum, &cfg).unwrap().unwrap();
    let second = second_zero(&triad, &spectrum, &cfg).unwrap().unwrap();
    assert!((first - tau).abs() < 1e-8);
    assert!((second - 2.0 * tau).abs() < 1e-8);
    println!("acceptance 02 equal-weight benchmark at 2pi/3 and 4pi/3: PASS");
}

#[test]
fn acceptance_03_no_family_beats_the_global_floor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let omega21: f64 = rng.random_range(0.3..3.0);
        let ratio: f64 = rng.random_range(0.1..8.0);
        let spectrum = Spectrum::new(omega21, ratio * omega21).unwrap();
        let floor = tau_min(&spectrum);

        // balanced pairs: first time of the outer pair is the floor itself
        for pair in LevelPair::ALL {
            let times = family1_qubit_times(pair, &spectrum, 3);
            for t in &times.times {
                assert!(*t >= floor - 1e-9);
            }
            if pair == LevelPair::ThreeOne {
                assert_eq!(times.times[0], floor);
                let outer = pair.qubit_triad();
                let residual = survival_amplitude(&outer, &spectrum, floor).magnitude();
                assert!(residual < 1e-10);
            }
        }

        // generic solutions: sampled across every open stripe of this ratio
        for l in 0..orthotime::regions::stripe_count(ratio).unwrap() {
            for _ in 0..6 {
                let u: f64 = rng.random_range(0.02..0.98);
                let Some(x) = stripe_point(l, ratio, u) else { continue };
                let tau = x / spectrum.omega21();
                if family2_triad(&spectrum, tau).unwrap().is_some() {
                    assert!(tau >= floor - 1e-9, "stripe {l} at x = {x}");
                }
            }
        }

        // arbitrary states: the scanning oracle finds nothing earlier either
        let cfg = ZeroSearchConfig::for_spectrum(&spectrum);
        for _ in 0..5 {
            let a: f64 = rng.random_range(0.0..1.0f64);
            let b: f64 = rng.random_range(0.0..1.0 - a);
            let triad = Triad::new(a, b, 1.0 - a - b).unwrap();
            if triad.populated(1e-12).len() < 2 {
                continue;
            }
            if let Some(zero) = first_orthogonality_time(&triad, &spectrum, &cfg).unwrap() {
                assert!(zero >= floor - 1e-9, "oracle zero {zero} under floor {floor}");
            }
        }
    }
    println!("acceptance 03 global floor pi/omega31 never undercut: PASS");
}

#[test]
fn acceptance_04_stripe_bounds_separate_solutions_from_gaps() {
    let eps = 1e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for l in 0..3u32 {
        let lf = l as f64;
        for regime in 0..2 {
            for _ in 0..20 {
                let omega: f64 = if regime == 0 {
                    // plateau: the upper bound saturates at pi
                    rng.random_range(2.0 * lf + 0.05..2.0 * lf + 0.98)
                } else {
                    // decay: the upper bound falls as (2l+1) pi / Omega
                    rng.random_range(2.0 * lf + 1.05..2.0 * lf + 7.0)
                };
                let spectrum = Spectrum::new(1.0, omega).unwrap();
                let bounds = stripe_bounds(l, omega).unwrap().unwrap();
                assert!(bounds.width() > 2.0 * eps);

                for inside in [bounds.lower + eps, bounds.upper - eps] {
                    let triad = family2_triad(&spectrum, inside).unwrap();
                    assert!(triad.is_some(), "l = {l}, omega = {omega}, x = {inside}");
                }
                for outside in [bounds.lower - eps, bounds.upper + eps] {
                    let triad = family2_triad(&spectrum, outside).unwrap();
                    assert!(triad.is_none(), "l = {l}, omega = {omega}, x = {outside}");
                }
            }
        }
    }
    println!("acceptance 04 stripe bounds separate solutions from gaps: PASS");
}

#[test]
fn acceptance_05_balanced_pairs_and_the_edge_crossover() {
    for pair in LevelPair::ALL {
        let triad = pair.qubit_triad();
        let a = alpha(&triad, 1.7).unwrap();
        assert!((a - 1.0).abs() <= 1e-12);
        // the raw moment quotient agrees without the convention
        let spectrum = Spectrum::new(0.9, 0.9 * 1.7).unwrap();
        let quotient =
            energy_dispersion(&triad, &spectrum).unwrap() / mean_energy(&triad, &spectrum).unwrap();
        assert!((quotient - 1.0).abs() <= 1e-12);
    }

    for omega in [2.0, 3.0, 5.0] {
        let expected = 1.0 / (1.0 + omega);
        let h = |r: f64| edge_alpha(SimplexEdge::R2Half, r, omega).unwrap() - 1.0;
        let (mut lo, mut hi) = (0.01, 0.49);
        assert!(h(lo) != 0.0 && h(hi) != 0.0 && (h(lo) < 0.0) != (h(hi) < 0.0));
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (h(mid) < 0.0) == (h(lo) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!(
            (root - expected).abs() < 1e-9,
            "omega = {omega}: flip at {root}, expected {expected}"
        );
    }
    println!("acceptance 05 balanced-pair alpha and r2-edge crossover: PASS");
}

#[test]
fn acceptance_06_every_verified_solution_respects_the_speed_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases: Vec<(Triad, Spectrum, f64)> = Vec::with_capacity(10_000);
    while cases.len() < 10_000 {
        let k = cases.len();
        if k % 13 == 0 {
            // balanced pair at an odd harmonic; the first one attains the bound
            let pair = LevelPair::ALL[k % 3];
            let omega21: f64 = rng.random_range(0.3..3.0);
            let spectrum = Spectrum::new(omega21, rng.random_range(0.1..8.0) * omega21).unwrap();
            let harmonic = rng.random_range(0..3);
            let tau = family1_qubit_times(pair, &spectrum, 3).times[harmonic];
            cases.push((pair.qubit_triad(), spectrum, tau));
        } else if k % 29 == 1 {
            // pinned-edge family from a small rational ratio, one case per parity
            let (n, m) = [(1u64, 1u64), (1, 2), (2, 1), (3, 1), (3, 2), (2, 3), (1, 3), (3, 5)]
                [k % 8];
            let omega21: f64 = rng.random_range(0.3..3.0);
            let spectrum = Spectrum::new(omega21, (m as f64 / n as f64) * omega21).unwrap();
            let relation = detect_rational_relation(&spectrum, 10, 1e-9).unwrap();
            let solution = family1b_solutions(&relation, &spectrum);
            let r: f64 = rng.random_range(0.05..0.45);
            cases.push((solution.edge.triad(r).unwrap(), spectrum, solution.tau));
        } else {
            let (omega, l) = random_open_stripe(&mut rng);
            let u: f64 = rng.random_range(0.05..0.95);
            let Some(x) = stripe_point(l, omega, u) else { continue };
            let omega21: f64 = rng.random_range(0.3..3.0);
            let spectrum = Spectrum::new(omega21, omega * omega21).unwrap();
            let tau = x / omega21;
            if let Ok(Some(triad)) = family2_triad(&spectrum, tau) {
                cases.push((triad, spectrum, tau));
            }
        }
    }

    let reports = verify_batch(&cases);
    let mut attained = 0u32;
    for ((triad, spectrum, tau), report) in cases.iter().zip(reports) {
        let report = report.unwrap();
        assert!(report.agrees, "claim {tau} rejected, residual {}", report.amplitude_at_claim);
        let bound = qsl_report(triad, spectrum).unwrap().tau_qsl;
        assert!(*tau >= bound - 1e-9, "tau = {tau} under bound {bound}");
        if (tau - bound).abs() < 1e-9 {
            attained += 1;
            let label = classify_triad(triad, 1e-9);
            assert!(
                matches!(label, FamilyLabel::IQubit { .. }),
                "bound attained by non-balanced state {:?}",
                triad.as_array()
            );
        }
    }
    assert!(attained > 100, "attainment cases undersampled: {attained}");
    println!("acceptance 06 speed limit holds on 10000 verified solutions ({attained} attain it): PASS");
}

#[test]
fn acceptance_07_alpha_formulas_cross_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // closed form against the raw moment quotient, away from simplex corners
    // where the quotient itself loses digits
    for _ in 0..10_000 {
        let triad = loop {
            let a: f64 = rng.random_range(0.0..1.0f64);
            let b: f64 = rng.random_range(0.0..1.0 - a);
            let t = Triad::new(a, b, 1.0 - a - b).unwrap();
            if t.min_component() >= 0.05 {
                break t;
            }
        };
        let omega: f64 = rng.random_range(0.1..10.0);
        let spectrum = Spectrum::new(1.0, omega).unwrap();
        let closed = alpha(&triad, omega).unwrap();
        let quotient =
            energy_dispersion(&triad, &spectrum).unwrap() / mean_energy(&triad, &spectrum).unwrap();
        assert!(
            (closed - quotient).abs() <= 1e-12,
            "triad {:?}, omega {omega}: {closed} vs {quotient}",
            triad.as_array()
        );
    }

    // reduced edge forms against the general formula
    for _ in 0..10_000 {
        let edge = SimplexEdge::ALL[rng.random_range(0..3)];
        let r: f64 = rng.random_range(0.02..0.48);
        let omega: f64 = rng.random_range(0.1..10.0);
        let direct = edge_alpha(edge, r, omega).unwrap();
        let general = alpha(&edge.triad(r).unwrap(), omega).unwrap();
        assert!(
            (direct - general).abs() <= 1e-12,
            "{edge} at r = {r}, omega = {omega}: {direct} vs {general}"
        );
    }
    println!("acceptance 07 alpha formulas agree within 1e-12 on 20000 cases: PASS");
}

#[test]
fn acceptance_08_rasterized_diagram_matches_the_analytic_layout() {
    let res = 600usize;
    let omega_max = 18.0 * PI;
    let grid = scan_diagram(omega_max, PI, res).unwrap();
    let step_o = omega_max / res as f64;
    let step_t = PI / res as f64;
    let half_t = 0.5 * step_t;

    // (a) no solution cell below the global floor curve
    for cell in &grid.cells {
        if let CellContent::InteriorII(_) = cell.content {
            let floor = PI / (1.0 + cell.omega);
            assert!(
                cell.omega21_tau >= floor - 1e-12,
                "solution below the floor at ({}, {})",
                cell.omega,
                cell.omega21_tau
            );
        }
    }

    // x-distances from a column point to every border curve at this ratio
    let border_distance = |x: f64, omega: f64| -> f64 {
        let mut d = f64::INFINITY;
        // odd and even multiples of pi (the latter carry crossings)
        let k = (x / PI).round();
        d = d.min((x - k * PI).abs());
        let mut l = 0u32;
        loop {
            let lower = (2 * l + 1) as f64 * PI / (1.0 + omega);
            let upper = (2 * l + 1) as f64 * PI / omega;
            if lower > PI + step_t && upper > PI + step_t {
                break;
            }
            d = d.min((x - lower).abs()).min((x - upper).abs());
            l += 1;
        }
        d
    };

    let stripes_at = |omega: f64| -> Vec<(u32, f64, f64)> {
        let mut out = Vec::new();
        let mut l = 0u32;
        while let Some(b) = stripe_bounds(l, omega).unwrap() {
            out.push((l, b.lower, b.upper.min(PI)));
            l += 1;
        }
        out
    };

    let mut resolved_pairs = 0u64;
    let mut adjacency_checks = 0u64;
    for i in 0..res {
        let omega = (i as f64 + 0.5) * step_o;
        let stripes = stripes_at(omega);

        // (b) stripes observed in this column, identified per solution cell
        let mut observed = vec![false; stripes.len()];
        for j in 0..res {
            let cell = grid.cell(i, j);
            if let CellContent::InteriorII(_) = cell.content {
                let x = cell.omega21_tau;
                let hit = stripes
                    .iter()
                    .position(|&(_, lower, upper)| x >= lower - 1e-9 && x <= upper + 1e-9);
                let l = hit.unwrap_or_else(|| {
                    panic!("solution cell outside every stripe at ({omega}, {x})")
                });
                observed[l] = true;
            }
        }
        // a stripe with a center safely away from every curve must be seen
        let mut expected = vec![false; stripes.len()];
        for &(l, lower, upper) in &stripes {
            let j_min = ((lower / step_t) - 0.5).ceil().max(0.0) as usize;
            for j in j_min..res {
                let x = (j as f64 + 0.5) * step_t;
                if x > upper {
                    break;
                }
                if x > lower && border_distance(x, omega) > 1.2 * half_t {
                    expected[l as usize] = true;
                    break;
                }
            }
        }
        for (l, (seen, must)) in observed.iter().zip(&expected).enumerate() {
            assert!(
                *seen || !*must,
                "stripe {l} lost in rasterization at omega = {omega}"
            );
            if *must {
                resolved_pairs += 1;
            }
        }

        // (c) border cells sit next to interiors whose smallest population
        // is the one the border pins at zero. Near a crossing the limit is an
        // edge family instead of a balanced pair, so the check only applies
        // where the two off-border angles stay clear of pi multiples by more
        // than the border angle can drift across a few cells.
        let multiple_distance = |angle: f64| (angle / PI - (angle / PI).round()).abs() * PI;
        for j in 1..res - 1 {
            let CellContent::Border { kind, .. } = &grid.cell(i, j).content else { continue };
            let x = grid.cell(i, j).omega21_tau;
            let (a, b, c) = (x, omega * x, (1.0 + omega) * x);
            let clear = |other: f64, slope_other: f64, slope_border: f64| {
                multiple_distance(other) > 2.0 * step_t * (slope_border + slope_other)
            };
            let clean = match kind {
                BorderKind::Blue => clear(b, omega, 1.0) && clear(c, 1.0 + omega, 1.0),
                BorderKind::Red => clear(a, 1.0, 1.0 + omega) && clear(b, omega, 1.0 + omega),
                BorderKind::Green => clear(a, 1.0, omega) && clear(c, 1.0 + omega, omega),
            };
            if !clean {
                continue;
            }
            let vanishing = match kind {
                BorderKind::Blue => 2,
                BorderKind::Red => 1,
                BorderKind::Green => 0,
            };
            for jj in [j - 1, j + 1] {
                if let CellContent::InteriorII(triad) = &grid.cell(i, jj).content {
                    let r = triad.as_array();
                    let argmin =
                        (0..3).min_by(|&a, &b| r[a].partial_cmp(&r[b]).unwrap()).unwrap();
                    assert_eq!(
                        argmin, vanishing,
                        "border {kind} at ({omega}, {}) next to {r:?}",
                        grid.cell(i, j).omega21_tau
                    );
                    adjacency_checks += 1;
                }
            }
        }
    }
    assert!(resolved_pairs > 3_000, "only {resolved_pairs} resolved stripe columns");
    assert!(adjacency_checks > 5_000, "only {adjacency_checks} adjacency checks");
    println!(
        "acceptance 08 rasterized diagram matches analytic layout ({adjacency_checks} adjacency checks): PASS"
    );
}
