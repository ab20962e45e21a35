//! CSV and JSON renderings of an [`Outcome`].
//!
//! Floats in CSV carry 17 significant digits. Rows backed by exact analytic
//! values print `lhs`, `rhs` and `margin` as reduced fractions `p/q`.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use speclab_core::analytic::Quarters;
use speclab_core::inequalities::{Provenance, ReportRow, Spectrum};

use crate::pipeline::{CheckBody, CheckResult, IdentityReport, Outcome};

pub const INEQUALITY_HEADER: &str = "claim,k,lhs,rhs,margin,uncertainty,verdict";
pub const IDENTITY_HEADER: &str = "domain,j,k,m,extra_id,lhs,rhs,residual";
pub const SPECTRUM_HEADER: &str = "k,value,uncertainty,exact";

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(b - a)` as a signed reduced fraction.
pub fn exact_margin(a: Quarters, b: Quarters) -> String {
    let (num, neg) = if b.0 >= a.0 {
        (b.0 - a.0, false)
    } else {
        (a.0 - b.0, true)
    };
    let g = gcd(num, 4);
    let sign = if neg && num != 0 { "-" } else { "" };
    format!("{sign}{}/{}", num / g, 4 / g)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn inequality_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(INEQUALITY_HEADER);
    out.push('\n');
    for r in rows {
        let (lhs, rhs, margin) = match r.exact {
            Some((a, b)) => (a.to_string(), b.to_string(), exact_margin(a, b)),
            None => (float(r.lhs), float(r.rhs), float(r.margin)),
        };
        let _ = writeln!(
            out,
            "{},{},{lhs},{rhs},{margin},{},{}",
            csv_field(&r.claim),
            r.k,
            float(r.uncertainty),
            r.verdict
        );
    }
    out
}

pub fn identity_csv(report: &IdentityReport) -> String {
    let mut out = String::from(IDENTITY_HEADER);
    out.push('\n');
    for c in &report.cases {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_field(&report.domain),
            c.j.index(),
            c.k.index(),
            c.m.index(),
            c.extra_id,
            float(c.result.lhs),
            float(c.result.rhs),
            float(c.result.residual)
        );
    }
    out
}

pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for (i, (v, u)) in s.values.iter().zip(&s.uncertainties).enumerate() {
        let exact = s
            .exact
            .as_ref()
            .map(|e| e[i].to_string())
            .unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{exact}", i + 1, float(*v), float(*u));
    }
    out
}

pub fn check_csv(c: &CheckResult) -> String {
    match &c.body {
        CheckBody::Inequality(r) => inequality_csv(&r.rows),
        CheckBody::Identity(r) => identity_csv(r),
    }
}

fn verdict_json(c: &CheckResult) -> Value {
    let (rows, violations) = match &c.body {
        CheckBody::Inequality(r) => (r.rows.len(), r.violations()),
        CheckBody::Identity(r) => (
            r.cases.len(),
            r.cases
                .iter()
                .filter(|x| x.result.relative() >= speclab_core::identity::CERTIFY_TOL)
                .count(),
        ),
    };
    let mut v = json!({
        "check": c.id,
        "claim": c.claim(),
        "role": c.role(),
        "hypothesis_satisfied": c.hypothesis_satisfied(),
        "probe": c.probe(),
        "overall": c.overall().as_str(),
        "row_count": rows,
        "violations": violations,
        "theorem_failure": c.is_theorem_failure(),
    });
    if let CheckBody::Identity(r) = &c.body {
        v["worst_relative_residual"] = json!(r.worst_relative);
    }
    v
}

pub fn exit_status(o: &Outcome) -> u8 {
    if o.has_theorem_failure() {
        crate::error::EXIT_VIOLATION
    } else {
        crate::error::EXIT_OK
    }
}

/// `{scenario, verdicts, timings, exit_status}`.
pub fn summary_json(o: &Outcome) -> Value {
    let timings: Map<String, Value> = o
        .timings
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    json!({
        "scenario": o.scenario,
        "verdicts": o.checks.iter().map(verdict_json).collect::<Vec<_>>(),
        "timings": timings,
        "exit_status": exit_status(o),
    })
}

fn spectrum_json(s: &Spectrum) -> Value {
    let values: Vec<Value> = s
        .values
        .iter()
        .zip(&s.uncertainties)
        .enumerate()
        .map(|(i, (v, u))| {
            let mut row = json!({"k": i + 1, "value": v, "uncertainty": u});
            if let Some(e) = &s.exact {
                row["exact"] = json!(e[i].to_string());
            }
            row
        })
        .collect();
    let provenance = match &s.provenance {
        Provenance::Analytic => json!("analytic"),
        Provenance::FemExtrapolated { levels } => json!({"fem_extrapolated": {"levels": levels}}),
    };
    let mut v = json!({"kind": s.kind.name(), "provenance": provenance, "values": values});
    if let Some(d) = &s.diagnostics {
        v["free_dofs"] = json!(d.free_dofs);
        v["observed_orders"] = json!(d.observed_orders);
        v["inflated"] = json!(d.inflated);
    }
    v
}

fn rows_json(c: &CheckResult) -> Value {
    match &c.body {
        CheckBody::Inequality(r) => r
            .rows
            .iter()
            .map(|r| {
                let mut row = json!({
                    "claim": r.claim, "k": r.k, "lhs": r.lhs, "rhs": r.rhs,
                    "margin": r.margin, "uncertainty": r.uncertainty, "verdict": r.verdict.as_str(),
                });
                if let Some((a, b)) = r.exact {
                    row["exact"] = json!({"lhs": a.to_string(), "rhs": b.to_string(), "margin": exact_margin(a, b)});
                }
                row
            })
            .collect(),
        CheckBody::Identity(r) => r
            .cases
            .iter()
            .map(|c| {
                json!({
                    "domain": r.domain, "j": c.j.index(), "k": c.k.index(), "m": c.m.index(),
                    "extra_id": c.extra_id, "lhs": c.result.lhs, "rhs": c.result.rhs,
                    "residual": c.result.residual, "relative": c.result.relative(),
                })
            })
            .collect(),
    }
}

/// Summary plus every spectrum and row.
pub fn full_json(o: &Outcome) -> Value {
    let mut v = summary_json(o);
    v["spectra"] = o.spectra.iter().map(spectrum_json).collect();
    v["checks"] = o
        .checks
        .iter()
        .map(|c| {
            let mut x = verdict_json(c);
            x["rows"] = rows_json(c);
            x
        })
        .collect();
    v
}

/// One line per check for terminal output.
pub fn summary_lines(o: &Outcome) -> String {
    let mut out = String::new();
    for c in &o.checks {
        let note = match (c.overall(), c.role()) {
            (speclab_core::inequalities::Verdict::Violated, "theorem") => " (THEOREM FAILURE)",
            (speclab_core::inequalities::Verdict::Violated, _) => " (expected)",
            _ => "",
        };
        let _ = writeln!(
            out,
            "{}: {} {} [{}]{note}",
            o.scenario,
            c.id,
            c.overall(),
            c.role()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_margins_are_signed_and_reduced() {
        assert_eq!(exact_margin(Quarters(1), Quarters(4)), "3/4");
        assert_eq!(exact_margin(Quarters(20), Quarters(12)), "-2/1");
        assert_eq!(exact_margin(Quarters(4), Quarters(4)), "0/1");
    }

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
