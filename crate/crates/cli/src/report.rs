use std::collections::BTreeMap;

use carlitz_core::{Laurent, Valuation, VerifyReport};
use serde::Serialize;
use serde_json::Value;

#[derive(Serialize, Debug, Clone)]
pub struct Envelope {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub result: ResultBlock,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

#[derive(Serialize, Debug, Clone, Default)]
pub struct ResultBlock {
    pub residual_valuation: Option<i64>,
    pub lhs_valuation: Option<i64>,
    pub rhs_valuation: Option<i64>,
    pub dmax_used: Option<u32>,
    pub checks: BTreeMap<String, bool>,
    pub pass: bool,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

/// Exact valuations and lower bounds both report their number; an exact zero is null.
pub fn valuation_number(v: Valuation) -> Option<i64> {
    match v {
        Valuation::Exact(x) | Valuation::AtLeast(x) => Some(x),
        Valuation::Infinite => None,
    }
}

/// `[[exponent, "coefficient"], ...]`, highest exponent first.
pub fn terms_json(x: &Laurent) -> Value {
    let f = x.field();
    Value::Array(
        x.terms()
            .map(|(e, c)| Value::Array(vec![e.into(), f.render(c).into()]))
            .collect(),
    )
}

pub fn from_verify(report: &VerifyReport) -> ResultBlock {
    let mut checks = report.checks.clone();
    checks.insert("residual_zero".into(), report.residual_zero());
    checks.insert("sides_nonzero".into(), report.sides_nonzero());
    let mut extra = BTreeMap::new();
    extra.insert("residual_exact".into(), Value::Bool(report.residual_valuation().is_exact()));
    extra.insert("slack".into(), report.slack.into());
    extra.insert("lhs_digits".into(), report.lhs.significant_digits().into());
    extra.insert("rhs_digits".into(), report.rhs.significant_digits().into());
    if !report.diagnostics.is_empty() {
        let diag: Vec<Value> = report
            .diagnostics
            .iter()
            .map(|(k, v)| Value::Array(vec![k.clone().into(), v.clone().into()]))
            .collect();
        extra.insert("diagnostics".into(), Value::Array(diag));
    }
    ResultBlock {
        residual_valuation: valuation_number(report.residual_valuation()),
        lhs_valuation: valuation_number(report.lhs_valuation()),
        rhs_valuation: valuation_number(report.rhs_valuation()),
        dmax_used: report.dmax_used,
        checks,
        pass: report.pass(),
        extra,
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn opt_text(v: Option<i64>) -> String {
    v.map_or_else(|| "exact zero".to_string(), |x| x.to_string())
}

impl Envelope {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", value_text(v))).collect();
        out.push_str(&format!("params: {}\n", params.join(" ")));
        let r = &self.result;
        if r.residual_valuation.is_some() || r.lhs_valuation.is_some() {
            out.push_str(&format!("residual valuation: {}\n", opt_text(r.residual_valuation)));
            out.push_str(&format!("lhs valuation: {}\n", opt_text(r.lhs_valuation)));
            out.push_str(&format!("rhs valuation: {}\n", opt_text(r.rhs_valuation)));
        }
        if let Some(d) = r.dmax_used {
            out.push_str(&format!("dmax used: {d}\n"));
        }
        for (k, v) in &r.extra {
            out.push_str(&format!("{k}: {}\n", value_text(v)));
        }
        for (k, v) in &r.checks {
            out.push_str(&format!("check {k}: {}\n", if *v { "ok" } else { "FAILED" }));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!("result: {}\n", if r.pass { "pass" } else { "FAIL" }));
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out
    }
}
