//! Deterministic text writers. Floats use 17 significant digits.

use std::fmt::Write as _;

use gauss_ent::entanglement::{EntanglementMetrics, LogNegativity};
use gauss_ent::experiments::{PhaseCell, PhaseClassification, PhaseDiagram, SweepResult};
use gauss_ent::types::CovarianceMatrix;
use gauss_ent::Trajectory;
use serde_json::{json, Map, Value};

/// `{:.16e}`: 17 significant digits, round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    // fold -0.0 into 0.0 so signed zeros never make diffs noisy
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        // parse back so JSON carries the same 17-digit value as CSV
        Value::from(fmt_f64(x).parse::<f64>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

fn l_fields(l: &LogNegativity) -> (String, &'static str) {
    match l.value() {
        Some(v) => (fmt_f64(v), "1"),
        None => ("nan".to_string(), "0"),
    }
}

fn l_json(l: &LogNegativity) -> Value {
    l.value().map_or(Value::Null, json_f64)
}

pub fn entries_json(sigma: &CovarianceMatrix) -> Value {
    let mut map = Map::new();
    for (name, v) in CovarianceMatrix::ENTRY_NAMES
        .iter()
        .zip(sigma.independent_entries())
    {
        map.insert((*name).to_string(), json_f64(v));
    }
    Value::Object(map)
}

pub fn steady_csv(sigma: &CovarianceMatrix) -> String {
    let mut out = String::from("entry,value\n");
    for (name, v) in CovarianceMatrix::ENTRY_NAMES
        .iter()
        .zip(sigma.independent_entries())
    {
        let _ = writeln!(out, "{name},{}", fmt_f64(v));
    }
    out
}

pub fn steady_json(sigma: &CovarianceMatrix, residual: f64) -> Value {
    json!({
        "command": "steady",
        "entries": entries_json(sigma),
        "lyapunov_residual": json_f64(residual),
    })
}

pub fn trajectory_csv(traj: &Trajectory, metrics: &[EntanglementMetrics]) -> String {
    let mut out = String::from("t");
    for name in CovarianceMatrix::ENTRY_NAMES {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",S,L,defined\n");
    for ((t, s), m) in traj.times.iter().zip(&traj.states).zip(metrics) {
        out.push_str(&fmt_f64(*t));
        for v in s.independent_entries() {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        let (l, defined) = l_fields(&m.log_negativity);
        let _ = writeln!(out, ",{},{l},{defined}", fmt_f64(m.simon_s));
    }
    out
}

pub fn trajectory_json(traj: &Trajectory, metrics: &[EntanglementMetrics]) -> Value {
    let samples: Vec<Value> = traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(metrics)
        .map(|((t, s), m)| {
            json!({
                "t": json_f64(*t),
                "sigma": entries_json(s),
                "S": json_f64(m.simon_s),
                "L": l_json(&m.log_negativity),
            })
        })
        .collect();
    json!({ "command": "evolve", "samples": samples })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), fmt_f64)
}

pub fn metrics_csv(t: f64, m: &EntanglementMetrics) -> String {
    let (l, defined) = l_fields(&m.log_negativity);
    let rows = [
        ("t", fmt_f64(t)),
        ("S", fmt_f64(m.simon_s)),
        ("seralian_tilde", fmt_f64(m.seralian_tilde)),
        ("nu_tilde_minus_sq", opt(m.nu_tilde_minus_sq)),
        ("nu_tilde_plus_sq", opt(m.nu_tilde_plus_sq)),
        ("L", l),
        ("defined", defined.to_string()),
        ("separable", u8::from(m.separable).to_string()),
        ("boundary", u8::from(m.boundary).to_string()),
    ];
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

pub fn metrics_json(t: f64, sigma: &CovarianceMatrix, m: &EntanglementMetrics) -> Value {
    json!({
        "command": "metrics",
        "t": json_f64(t),
        "sigma": entries_json(sigma),
        "S": json_f64(m.simon_s),
        "seralian_tilde": json_f64(m.seralian_tilde),
        "nu_tilde_minus_sq": m.nu_tilde_minus_sq.map_or(Value::Null, json_f64),
        "nu_tilde_plus_sq": m.nu_tilde_plus_sq.map_or(Value::Null, json_f64),
        "L": l_json(&m.log_negativity),
        "defined": m.log_negativity.is_defined(),
        "separable": m.separable,
        "boundary": m.boundary,
    })
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("t,c,S,L,defined\n");
    for p in &result.points {
        let (l, defined) = l_fields(&p.l);
        let _ = writeln!(
            out,
            "{},{},{},{l},{defined}",
            fmt_f64(p.t),
            fmt_f64(p.c),
            fmt_f64(p.s)
        );
    }
    out
}

fn classification_json(pc: &PhaseClassification) -> Value {
    json!({
        "label": pc.label.name(),
        "event_times": pc.event_times.iter().map(|t| json_f64(*t)).collect::<Vec<_>>(),
        "initial_s": json_f64(pc.initial_s),
        "s_infinity": json_f64(pc.s_infinity),
        "warnings": pc.warnings,
    })
}

pub fn sweep_json(result: &SweepResult) -> Value {
    let rows: Vec<Value> = result
        .times
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let cells: Vec<Value> = (0..result.c_values.len())
                .map(|j| {
                    let p = result.point(i, j);
                    json!({ "c": json_f64(p.c), "S": json_f64(p.s), "L": l_json(&p.l) })
                })
                .collect();
            json!({ "t": json_f64(*t), "cells": cells })
        })
        .collect();
    let columns: Vec<Value> = result
        .columns
        .iter()
        .map(|col| {
            json!({
                "c": json_f64(col.c),
                "classification": col.classification.as_ref().map_or(Value::Null, classification_json),
            })
        })
        .collect();
    json!({ "command": "sweep", "rows": rows, "columns": columns })
}

pub fn classify_csv(rows: &[(f64, PhaseClassification)]) -> String {
    let mut out = String::from("c,label,event_times\n");
    for (c, pc) in rows {
        let times: Vec<String> = pc.event_times.iter().map(|t| fmt_f64(*t)).collect();
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(*c),
            pc.label.name(),
            times.join(";")
        );
    }
    out
}

pub fn classify_json(rows: &[(f64, PhaseClassification)]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(c, pc)| {
            let mut v = classification_json(pc);
            v["c"] = json_f64(*c);
            v
        })
        .collect();
    json!({ "command": "classify", "rows": rows })
}

fn cell_name(c: PhaseCell) -> &'static str {
    match c {
        PhaseCell::Entangled => "entangled",
        PhaseCell::Separable => "separable",
        PhaseCell::Unphysical => "unphysical",
    }
}

pub fn phase_diagram_csv(d: &PhaseDiagram) -> String {
    let mut out = String::from("d_xpy,c,cell\n");
    for (row, d_xpy) in d.d_xpy.iter().enumerate() {
        for (col, c) in d.c.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f64(*d_xpy),
                fmt_f64(*c),
                cell_name(d.cells[row][col])
            );
        }
    }
    out
}

pub fn phase_diagram_json(d: &PhaseDiagram) -> Value {
    json!({
        "command": "phase-diagram",
        "lambda": json_f64(d.lambda),
        "omega": json_f64(d.omega),
        "d_xpy": d.d_xpy.iter().map(|v| json_f64(*v)).collect::<Vec<_>>(),
        "c": d.c.iter().map(|v| json_f64(*v)).collect::<Vec<_>>(),
        "cells": d.cells.iter().map(|r| r.iter().map(|c| cell_name(*c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}
