//! CSV and JSON assembly. One rule everywhere: identical inputs, seed
//! included, must serialize to identical bytes, so reports diff cleanly
//! across runs and machines.

use serde_json::{json, Value};

use orthotime::families::{FamilyLabel, SimplexEdge};
use orthotime::qsl::QslReport;
use orthotime::regions::{CellContent, DiagramGrid, SimplexPoint, SimplexPointKind};
use orthotime::{LevelPair, Spectrum, Triad};

pub fn label_name(label: &FamilyLabel) -> String {
    match label {
        FamilyLabel::Stationary { .. } => "STATIONARY".into(),
        FamilyLabel::IQubit { .. } => "I_QUBIT".into(),
        FamilyLabel::IB { .. } => "I_B".into(),
        FamilyLabel::II => "II".into(),
        FamilyLabel::NotClassified => "NOT_CLASSIFIED".into(),
    }
}

pub fn triad_value(triad: &Triad) -> Value {
    json!({ "r1": triad.r1(), "r2": triad.r2(), "r3": triad.r3() })
}

pub fn qsl_value(report: &QslReport) -> Value {
    json!({
        "mean_energy": report.mean_energy,
        "dispersion": report.dispersion,
        "alpha": report.alpha,
        "tau_qsl": report.tau_qsl,
        "bound": report.bound.to_string(),
    })
}

pub fn spectrum_value(spectrum: &Spectrum) -> Value {
    json!({
        "omega21": spectrum.omega21(),
        "omega32": spectrum.omega32(),
        "omega31": spectrum.omega31(),
        "ratio": spectrum.ratio(),
    })
}

/// What `solve` found at the requested time.
pub enum SolveOutcome {
    /// Forced triad away from every boundary angle.
    Generic { triad: Triad },
    /// Exactly one angle on an odd multiple of pi: a balanced pair.
    Qubit { pair: LevelPair, times: Vec<f64> },
    /// All angles on multiples of pi: a one-parameter pinned-edge family.
    Edge { edge: SimplexEdge, representative: Triad },
    NoSolution { reason: &'static str },
}

pub fn solve_json(
    spectrum: &Spectrum,
    tau: f64,
    outcome: &SolveOutcome,
    label: Option<&FamilyLabel>,
    qsl: Option<&QslReport>,
) -> String {
    let solution = match outcome {
        SolveOutcome::Generic { triad } => json!({
            "kind": "generic",
            "label": label.map(label_name),
            "triad": triad_value(triad),
            "qsl": qsl.map(qsl_value),
        }),
        SolveOutcome::Qubit { pair, times } => json!({
            "kind": "balanced_pair",
            "label": "I_QUBIT",
            "pair": pair.to_string(),
            "triad": triad_value(&pair.qubit_triad()),
            "times": times,
            "qsl": qsl.map(qsl_value),
        }),
        SolveOutcome::Edge { edge, representative } => json!({
            "kind": "pinned_edge_family",
            "label": "I_B",
            "edge": edge.to_string(),
            "free_parameter": { "min": 0.0, "max": 0.5, "exclusive": true },
            "representative": triad_value(representative),
            "qsl_at_representative": qsl.map(qsl_value),
        }),
        SolveOutcome::NoSolution { reason } => json!({
            "kind": "none",
            "reason": reason,
        }),
    };
    pretty(&json!({
        "command": "solve",
        "input": { "spectrum": spectrum_value(spectrum), "tau": tau },
        "solution": solution,
    }))
}

pub fn solve_csv(outcome: &SolveOutcome, label: Option<&FamilyLabel>, qsl: Option<&QslReport>) -> String {
    let mut out = String::from("kind,r1,r2,r3,label,alpha,tau_qsl,bound\n");
    let row = |kind: &str, triad: Option<&Triad>| -> String {
        let (r1, r2, r3) = match triad {
            Some(t) => (t.r1().to_string(), t.r2().to_string(), t.r3().to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        let name = label.map(label_name).unwrap_or_default();
        match qsl {
            Some(q) => format!(
                "{kind},{r1},{r2},{r3},{name},{},{},{}\n",
                q.alpha, q.tau_qsl, q.bound
            ),
            None => format!("{kind},{r1},{r2},{r3},{name},,,\n"),
        }
    };
    match outcome {
        SolveOutcome::Generic { triad } => out.push_str(&row("generic", Some(triad))),
        SolveOutcome::Qubit { pair, .. } => {
            out.push_str(&row("balanced_pair", Some(&pair.qubit_triad())))
        }
        SolveOutcome::Edge { representative, .. } => {
            out.push_str(&row("pinned_edge_family", Some(representative)))
        }
        SolveOutcome::NoSolution { .. } => out.push_str(&row("none", None)),
    }
    out
}

pub fn classify_json(
    triad: &Triad,
    label: &FamilyLabel,
    detail: Value,
    times: Option<Vec<f64>>,
    notes: Vec<String>,
) -> String {
    pretty(&json!({
        "command": "classify",
        "triad": triad_value(triad),
        "label": label_name(label),
        "detail": detail,
        "times": times,
        "notes": notes,
    }))
}

fn cell_type(content: &CellContent) -> String {
    match content {
        CellContent::InteriorII(_) => "interior".into(),
        CellContent::Border { kind, .. } => kind.to_string(),
        CellContent::Intersection(hit) => hit.kind.to_string(),
        CellContent::Empty => "empty".into(),
    }
}

fn cell_triad(content: &CellContent) -> Option<[f64; 3]> {
    match content {
        CellContent::InteriorII(triad) => Some(triad.as_array()),
        CellContent::Border { triad, .. } => Some(triad.as_array()),
        // a crossing hosts a whole pinned-edge family, not one triad
        CellContent::Intersection(_) | CellContent::Empty => None,
    }
}

pub fn diagram_csv(grid: &DiagramGrid) -> String {
    let mut out = String::from("omega,omega21_tau,cell_type,r1,r2,r3\n");
    for cell in &grid.cells {
        match cell_triad(&cell.content) {
            Some([r1, r2, r3]) => out.push_str(&format!(
                "{},{},{},{r1},{r2},{r3}\n",
                cell.omega,
                cell.omega21_tau,
                cell_type(&cell.content)
            )),
            None => out.push_str(&format!(
                "{},{},{},,,\n",
                cell.omega,
                cell.omega21_tau,
                cell_type(&cell.content)
            )),
        }
    }
    out
}

pub fn diagram_json(grid: &DiagramGrid) -> String {
    let cells: Vec<Value> = grid
        .cells
        .iter()
        .map(|cell| {
            json!({
                "omega": cell.omega,
                "omega21_tau": cell.omega21_tau,
                "cell_type": cell_type(&cell.content),
                "triad": cell_triad(&cell.content),
            })
        })
        .collect();
    pretty(&json!({
        "metadata": metadata("scan", json!({
            "mode": "diagram",
            "omega_max": grid.omega_max,
            "tau_max": grid.tau_max,
            "resolution": grid.resolution,
            "seed": Value::Null,
        })),
        "cells": cells,
    }))
}

fn point_kind(kind: &SimplexPointKind) -> Value {
    match kind {
        SimplexPointKind::Interior { stripe } => json!({ "interior": { "stripe": stripe } }),
        SimplexPointKind::Edge(edge) => json!({ "edge": edge.to_string() }),
        SimplexPointKind::Vertex(pair) => json!({ "vertex": pair.to_string() }),
    }
}

pub fn simplex_csv(points: &[SimplexPoint]) -> String {
    let mut out = String::from("r1,r2,r3,alpha,class,omega\n");
    for p in points {
        let [r1, r2, r3] = p.triad.as_array();
        out.push_str(&format!("{r1},{r2},{r3},{},{},{}\n", p.alpha, p.bound, p.omega));
    }
    out
}

pub fn simplex_json(points: &[SimplexPoint], seed: u64, tau_res: usize) -> String {
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "triad": p.triad.as_array(),
                "alpha": p.alpha,
                "class": p.bound.to_string(),
                "omega": p.omega,
                "kind": point_kind(&p.kind),
            })
        })
        .collect();
    pretty(&json!({
        "metadata": metadata("scan", json!({
            "mode": "simplex",
            "tau_resolution": tau_res,
            "seed": seed,
        })),
        "points": rows,
    }))
}

fn metadata(command: &str, extra: Value) -> Value {
    let mut base = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "tolerances": {
            "orthogonality": orthotime::ORTHOGONALITY_TOL,
            "angle": orthotime::ANGLE_TOL,
            "triad_sum": orthotime::TRIAD_SUM_TOL,
        },
    });
    if let (Value::Object(base_map), Value::Object(extra_map)) = (&mut base, extra) {
        base_map.extend(extra_map);
    }
    base
}

pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report values are plain data");
    text.push('\n');
    text
}
