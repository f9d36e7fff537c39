//! Machine-readable command reports.
//!
//! Reports serialize through `serde_json::Value`, whose object maps keep keys
//! sorted; terms print in canonical order. Identical inputs therefore give
//! byte-identical output.

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Basis, CocycleSign, JacobiReport};
use crate::derivation::{
    AuditReport, DecomposeError, DerivationError, LeibnizReport, LeibnizViolation,
};
use crate::two_local::{KernelTarget, LemmaReport, ReductionCertificate, Verdict};
use crate::{Coefficient, DerivationParams, Element};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violations,
    Refuted,
    Inconsistent,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violations => "violations",
            Status::Refuted => "refuted",
            Status::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Vec<String>,
    /// Sign convention, or `"both"` for commands that sweep both.
    pub sign: String,
    pub status: Status,
    pub payload: Value,
    /// Human-readable summary lines for `--output text`.
    pub text: Vec<String>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "sign": self.sign,
            "status": self.status,
            "payload": self.payload,
            "engine_version": ENGINE_VERSION,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for line in &self.text {
            s.push_str(line);
            s.push('\n');
        }
        s
    }
}

fn pair_json(a: Basis, b: Basis) -> Value {
    json!([a.to_string(), b.to_string()])
}

fn violation_json(v: &LeibnizViolation<Coefficient>) -> Value {
    json!({ "pair": pair_json(v.left, v.right), "defect": v.defect.to_string() })
}

pub fn params_json(p: &DerivationParams) -> Value {
    let p = p.modulo_center();
    let map = |m: &std::collections::BTreeMap<i64, Coefficient>| {
        m.iter()
            .map(|(j, c)| (j.to_string(), Value::String(c.to_string())))
            .collect::<serde_json::Map<_, _>>()
    };
    json!({
        "a": map(&p.a),
        "b": map(&p.b),
        "alpha": p.alpha.to_string(),
        "beta": p.beta.to_string(),
        "gamma": p.gamma.to_string(),
    })
}

fn params_text(p: &DerivationParams) -> String {
    let p = p.modulo_center();
    let z = p.inner();
    format!(
        "ad({z}) + ({})*D1 + ({})*D2 + ({})*D3",
        p.alpha, p.beta, p.gamma
    )
}

pub fn bracket_report(
    command: Vec<String>,
    sign: CocycleSign,
    x: &Element,
    y: &Element,
    result: &Element,
) -> Report {
    Report {
        command,
        sign: sign.name().into(),
        status: Status::Ok,
        payload: json!({
            "left": x.to_string(),
            "right": y.to_string(),
            "result": result.to_string(),
        }),
        text: vec![result.to_string()],
    }
}

pub fn jacobi_report(command: Vec<String>, r: &JacobiReport<Coefficient>) -> Report {
    let status = if r.is_clean() {
        Status::Ok
    } else {
        Status::Violations
    };
    let mut text = vec![format!(
        "jacobi max-degree {} sign {}: {} triples, {} violations",
        r.max_degree,
        r.sign,
        r.triples_checked,
        r.violations.len()
    )];
    text.extend(r.violations.iter().map(|v| {
        format!(
            "  ({}, {}, {}) -> {}",
            v.triple[0], v.triple[1], v.triple[2], v.value
        )
    }));
    Report {
        command,
        sign: r.sign.name().into(),
        status,
        payload: json!({
            "max_degree": r.max_degree,
            "triples_checked": r.triples_checked,
            "violations": r.violations.iter().map(|v| json!({
                "triple": v.triple.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "value": v.value.to_string(),
            })).collect::<Vec<_>>(),
        }),
        text,
    }
}

pub fn audit_report(command: Vec<String>, r: &AuditReport<Coefficient>) -> Report {
    let holds = r.expected_pattern_holds();
    let mut text = vec![format!(
        "sign audit max-degree {}: expected pattern {}",
        r.max_degree,
        if holds { "holds" } else { "DOES NOT hold" }
    )];
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            let first = e.first_violation();
            text.push(format!(
                "  {} {:<10} {} (expected {}){}",
                e.kind,
                e.sign.name(),
                if e.passed() { "pass" } else { "fail" },
                if e.expected_pass { "pass" } else { "fail" },
                first
                    .map(|v| format!(
                        ", first violation ({}, {}) defect {}",
                        v.left, v.right, v.defect
                    ))
                    .unwrap_or_default()
            ));
            json!({
                "derivation": e.kind.to_string(),
                "sign": e.sign.name(),
                "result": if e.passed() { "pass" } else { "fail" },
                "expected": if e.expected_pass { "pass" } else { "fail" },
                "pairs_checked": e.report.pairs_checked,
                "pairs_skipped": e.report.pairs_skipped,
                "violation_count": e.report.violations.len(),
                "first_violation": first.map(violation_json),
            })
        })
        .collect();
    text.extend(r.notes.iter().map(|n| format!("  note: {n}")));
    Report {
        command,
        sign: "both".into(),
        status: if holds {
            Status::Ok
        } else {
            Status::Violations
        },
        payload: json!({
            "max_degree": r.max_degree,
            "expected_pattern_holds": holds,
            "entries": entries,
            "central_terms": r.central_terms.iter().map(|c| json!({
                "index": c.index,
                "quoted": c.quoted.to_string(),
                "paper_sign": c.paper_sign.to_string(),
                "consistent_sign": c.consistent_sign.to_string(),
                "agrees": c.agrees(),
            })).collect::<Vec<_>>(),
            "notes": r.notes,
        }),
        text,
    }
}

fn leibniz_json(r: &LeibnizReport<Coefficient>) -> Value {
    json!({
        "window": r.window,
        "pairs_checked": r.pairs_checked,
        "pairs_skipped": r.pairs_skipped,
        "violations": r.violations.iter().map(violation_json).collect::<Vec<_>>(),
    })
}

pub fn decompose_report(
    command: Vec<String>,
    sign: CocycleSign,
    outcome: &Result<DerivationParams, DecomposeError<Coefficient>>,
) -> Report {
    let (status, payload, text) = match outcome {
        Ok(p) => (
            Status::Ok,
            json!({ "params": params_json(p) }),
            vec![params_text(p)],
        ),
        Err(DecomposeError::NotADerivation(r)) => {
            let mut text = vec![format!(
                "not a derivation: {} violating pairs",
                r.violations.len()
            )];
            text.extend(
                r.violations
                    .iter()
                    .take(10)
                    .map(|v| format!("  ({}, {}) defect {}", v.left, v.right, v.defect)),
            );
            (
                Status::Violations,
                json!({ "leibniz": leibniz_json(r) }),
                text,
            )
        }
        Err(DecomposeError::Derivation(e)) => {
            let status = match e {
                DerivationError::InconsistentTable => Status::Inconsistent,
                _ => Status::Violations,
            };
            (
                status,
                json!({ "error": e.to_string() }),
                vec![e.to_string()],
            )
        }
    };
    Report {
        command,
        sign: sign.name().into(),
        status,
        payload,
        text,
    }
}

pub fn certificate_report(
    command: Vec<String>,
    cert: &ReductionCertificate<Coefficient>,
    keys: usize,
) -> Report {
    let nonzero: Vec<Value> = cert
        .residual_report
        .iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(s, r)| json!({ "sample": s.to_string(), "residual": r.to_string() }))
        .collect();
    let (status, verdict, mut text) = match &cert.verdict {
        Verdict::Certified => (
            Status::Ok,
            json!({ "certified": true }),
            vec![format!(
                "certified on {keys} keys and {} samples: Delta = {}",
                cert.residual_report.len(),
                params_text(&cert.reconstructed())
            )],
        ),
        Verdict::Refuted {
            step,
            element,
            residual,
        } => (
            Status::Refuted,
            json!({
                "certified": false,
                "step": step.to_string(),
                "element": element.to_string(),
                "residual": residual.to_string(),
            }),
            vec![format!(
                "refuted at {step}: element {element}, residual {residual}"
            )],
        ),
    };
    text.push(format!(
        "  witness(L[0], L[1]) = {}",
        params_text(&cert.witness01.params)
    ));
    if let Some(l) = &cert.lambda {
        text.push(format!("  lambda = {l}"));
    }
    Report {
        command,
        sign: cert.sign.name().into(),
        status,
        payload: json!({
            "window": cert.window,
            "witness01": {
                "pair": [cert.witness01.pair.0.to_string(), cert.witness01.pair.1.to_string()],
                "params": params_json(&cert.witness01.params),
            },
            "lambda": cert.lambda.as_ref().map(ToString::to_string),
            "reconstructed": params_json(&cert.reconstructed()),
            "verdict": verdict,
            "keys_in_assignment": keys,
            "samples_checked": cert.residual_report.len(),
            "nonzero_residuals": nonzero,
            "scope": "verified on the supplied keys and samples only",
        }),
        text,
    }
}

fn target_name(t: KernelTarget) -> String {
    match t {
        KernelTarget::Virasoro(i) => format!("D(L[{i}]) = 0"),
        KernelTarget::ZeroMode => "D(I[0]) = 0".into(),
        KernelTarget::Mixed(p) => format!("D(L[{}] + I[{p}]) = 0", 2 * p),
    }
}

pub fn lemma_report(command: Vec<String>, r: &LemmaReport) -> Report {
    let mut text = vec![format!(
        "kernel suite window {} ({} unknowns): {}",
        r.window,
        r.unknowns,
        if r.passed() {
            "all shapes match"
        } else {
            "MISMATCHES"
        }
    )];
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            text.push(format!(
                "  {:<24} dim {:>3}  forced outer {:?}{}",
                target_name(c.target),
                c.kernel_dim,
                c.forced_outer
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
                if c.mismatches.is_empty() {
                    String::new()
                } else {
                    format!("  MISMATCH: {}", c.mismatches.join("; "))
                }
            ));
            json!({
                "constraint": target_name(c.target),
                "kernel_dim": c.kernel_dim,
                "forced_outer": c.forced_outer.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "forced_total": c.forced_total,
                "beta_gamma_ratio": c.outer_ratio.map(|(b, g)| json!([b, g])),
                "mismatches": c.mismatches,
            })
        })
        .collect();
    Report {
        command,
        sign: r.sign.name().into(),
        status: if r.passed() {
            Status::Ok
        } else {
            Status::Violations
        },
        payload: json!({
            "window": r.window,
            "unknowns": r.unknowns,
            "checks": checks,
        }),
        text,
    }
}
