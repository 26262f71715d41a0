use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use carlitz_core::carlitz::{generating_function_defect, CarlitzTables};
use carlitz_core::classical::{verify_classical_euler, verify_classical_ramanujan, ClassicalReport};
use carlitz_core::period::{period_w_kernel, period_w_product, validate_w, zero_within, PeriodValue};
use carlitz_core::ramanujan::{
    normalized_identity_doc, telescoping_check, verify_ramanujan, verify_reciprocal, RamanujanContext,
};
use carlitz_core::zeta::{verify_euler_carlitz, zeta_pos};
use carlitz_core::{Error, Field, FieldCtx, Laurent, Poly, RatFunc, Result};
use serde_json::{json, Value};

use crate::args::{Command, GlobalOpts, PeriodMethod, Verify};
use crate::report::{from_verify, terms_json, valuation_number, Envelope, ResultBlock};

pub const MIN_PREC: i64 = 20;
const SELFTEST_PREC: i64 = 30;
const EULER_TOLERANCE: f64 = 1e-11;
const RAMANUJAN_TOLERANCE: f64 = 1e-9;

pub fn parse_modulus(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidParameter(format!("bad modulus coefficient '{}'", t.trim())))
        })
        .collect()
}

pub fn field_from(opts: &GlobalOpts) -> Result<Field> {
    let modulus = opts.modulus.as_deref().map(parse_modulus).transpose()?;
    FieldCtx::new(opts.q, modulus.as_deref())
}

fn base_params(opts: &GlobalOpts, field: &Field) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("q".into(), json!(opts.q));
    p.insert("p".into(), json!(field.p()));
    p.insert("e".into(), json!(field.e()));
    if field.e() > 1 {
        p.insert("modulus".into(), json!(field.modulus()));
    }
    p.insert("prec".into(), json!(opts.prec));
    p
}

pub fn execute(opts: &GlobalOpts, command: &Command) -> Result<Envelope> {
    if opts.prec < MIN_PREC {
        return Err(Error::InvalidParameter(format!("prec must be at least {MIN_PREC}")));
    }
    if opts.threads == Some(0) {
        return Err(Error::InvalidParameter("threads must be at least 1".into()));
    }
    let start = Instant::now();
    let field = field_from(opts)?;
    let mut params = base_params(opts, &field);
    let floor = -opts.prec;
    let mut notes = Vec::new();
    let (name, result) = match command {
        Command::Bc { max } => {
            params.insert("max".into(), json!(max));
            ("bc", bc(&field, *max)?)
        }
        Command::Zeta { m, dmax } => {
            params.insert("m".into(), json!(m));
            params.insert("dmax".into(), json!(dmax));
            ("zeta", zeta(&field, *m, floor, *dmax)?)
        }
        Command::Period { method } => {
            let label = match method {
                PeriodMethod::Product => "product",
                PeriodMethod::Kernel => "kernel",
                PeriodMethod::Both => "both",
            };
            params.insert("method".into(), json!(label));
            ("period", period(&field, *method, floor, &mut notes)?)
        }
        Command::Verify(Verify::EulerCarlitz { i }) => {
            params.insert("i".into(), json!(i));
            let r = verify_euler_carlitz(&field, *i, floor)?;
            notes.extend(r.notes.iter().cloned());
            ("verify euler-carlitz", from_verify(&r))
        }
        Command::Verify(Verify::Ramanujan { j, dmax }) => {
            if *j < 1 {
                return Err(Error::InvalidParameter("j is a positive integer".into()));
            }
            let j = u32::try_from(*j).map_err(|_| Error::InvalidParameter("j is too large".into()))?;
            params.insert("j".into(), json!(j));
            params.insert("dmax".into(), json!(dmax));
            let doc = normalized_identity_doc(field.q(), j)?;
            let r = verify_ramanujan(&field, j, floor, *dmax)?;
            notes.extend(r.notes.iter().cloned());
            let mut block = from_verify(&r);
            block.extra.insert("identity".into(), json!(doc.text));
            ("verify ramanujan", block)
        }
        Command::Verify(Verify::Classical { m, alpha }) => {
            params.remove("prec");
            params.insert("m".into(), json!(m));
            params.insert("alpha".into(), json!(alpha));
            let r = classical(*m, *alpha)?;
            notes.push("Euler's formula is evaluated with the sign (-1)^(m+1)".into());
            ("verify classical", r)
        }
        Command::Selftest => {
            params.insert("prec".into(), json!(SELFTEST_PREC));
            ("selftest", selftest(&field)?)
        }
    };
    Ok(Envelope {
        command: name.into(),
        params,
        result,
        notes,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn bc(field: &Field, max: u64) -> Result<ResultBlock> {
    let q = field.q() as u64;
    let mut imax = 1;
    while q.pow(imax as u32 + 1) - 1 <= max {
        imax += 1;
    }
    let tables = CarlitzTables::build(field, imax)?;
    let table = tables.bc_numbers(max)?;
    let mut values = serde_json::Map::new();
    let mut vanish = true;
    for (m, v) in table.iter() {
        values.insert(m.to_string(), json!(v.to_string()));
        vanish &= v.is_zero() == (m % (q - 1) != 0);
    }
    let mut block = ResultBlock::default();
    block.checks.insert("bc0_is_one".into(), table.value(0)?.num().is_one() && table.value(0)?.den().is_one());
    block.checks.insert("vanish_off_multiples".into(), vanish);
    block
        .checks
        .insert("generating_function".into(), generating_function_defect(&tables, &table)?.is_none());
    block.pass = block.checks.values().all(|&c| c);
    block.extra.insert("values".into(), Value::Object(values));
    Ok(block)
}

fn zeta(field: &Field, m: u32, floor: i64, dmax: Option<u32>) -> Result<ResultBlock> {
    let z = zeta_pos(field, m, floor, dmax)?;
    let rest = &z.value - &Laurent::one(field);
    let mut block = ResultBlock {
        lhs_valuation: valuation_number(z.value.valuation()),
        dmax_used: Some(z.dmax_used),
        ..Default::default()
    };
    block.checks.insert("even_exponents".into(), z.value.exponents_have_parity(false));
    block.checks.insert("leading_one".into(), z.value.hi() == Some(0) && z.value.leading_coeff() == Some(field.one()));
    block
        .checks
        .insert("tail_valuation".into(), rest.valuation().bound() >= 2 * (m as i64 + 1));
    block.pass = block.checks.values().all(|&c| c);
    block.extra.insert("value".into(), json!(z.value.to_string()));
    block.extra.insert("terms".into(), terms_json(&z.value));
    Ok(block)
}

fn period_json(v: &PeriodValue, floor: i64) -> Result<(Value, bool)> {
    let check = validate_w(&v.w, floor)?;
    let vals: serde_json::Map<String, Value> = check
        .valuations()
        .iter()
        .map(|(k, val)| (k.to_string(), json!(valuation_number(*val))))
        .collect();
    Ok((
        json!({
            "method": v.method.as_str(),
            "w": v.w.to_string(),
            "terms": terms_json(&v.w),
            "steps": v.steps,
            "kernel_residual_valuation": valuation_number(v.kernel_residual_valuation),
            "validation": vals,
        }),
        check.pass,
    ))
}

fn period(field: &Field, method: PeriodMethod, floor: i64, notes: &mut Vec<String>) -> Result<ResultBlock> {
    let q = field.q() as i64;
    let mut block = ResultBlock::default();
    let mut values = Vec::new();
    if matches!(method, PeriodMethod::Product | PeriodMethod::Both) {
        values.push(period_w_product(field, floor)?);
    }
    if matches!(method, PeriodMethod::Kernel | PeriodMethod::Both) {
        values.push(period_w_kernel(field, floor, None)?);
    }
    for v in &values {
        let (j, ok) = period_json(v, floor)?;
        let key = v.method.as_str();
        block.checks.insert(format!("{key}_validated"), ok);
        block.checks.insert(format!("{key}_degree"), v.w.hi() == Some(2 * q));
        block.extra.insert(key.into(), j);
        notes.extend(v.notes.iter().cloned());
    }
    block.lhs_valuation = valuation_number(values[0].w.valuation());
    if let [a, b] = values.as_slice() {
        let diff = &a.w - &b.w;
        block.rhs_valuation = valuation_number(b.w.valuation());
        block.residual_valuation = valuation_number(diff.valuation());
        block.checks.insert("agreement".into(), zero_within(&diff, -floor, 5));
    } else {
        block.residual_valuation = valuation_number(values[0].kernel_residual_valuation);
    }
    block.pass = block.checks.values().all(|&c| c);
    Ok(block)
}

fn classical_json(r: &ClassicalReport) -> Value {
    json!({
        "m": r.m,
        "alpha": r.alpha,
        "beta": r.beta,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "residual": r.residual,
    })
}

fn classical(m: u32, alpha: Option<f64>) -> Result<ResultBlock> {
    let euler = verify_classical_euler(m)?;
    let ramanujan = verify_classical_ramanujan(m, alpha.unwrap_or(PI))?;
    let mut block = ResultBlock::default();
    block.checks.insert("euler".into(), euler.residual < EULER_TOLERANCE);
    block.checks.insert("ramanujan".into(), ramanujan.residual < RAMANUJAN_TOLERANCE);
    block.pass = block.checks.values().all(|&c| c);
    block.extra.insert("euler".into(), classical_json(&euler));
    block.extra.insert("ramanujan".into(), classical_json(&ramanujan));
    Ok(block)
}

fn selftest(field: &Field) -> Result<ResultBlock> {
    let floor = -SELFTEST_PREC;
    let q = field.q();
    let mut block = ResultBlock::default();
    let mut put = |name: &str, ok: bool| {
        block.checks.insert(name.to_string(), ok);
    };

    let els: Vec<_> = field.elements().take(32).collect();
    let mut axioms = true;
    for &a in &els {
        for &b in &els {
            axioms &= field.add(a, b) == field.add(b, a) && field.mul(a, b) == field.mul(b, a);
            if !a.is_zero() {
                axioms &= field.mul(a, field.inv(a)?) == field.one();
            }
        }
    }
    put("field_axioms", axioms);

    let bc = bc(field, 4 * (q as u64 - 1))?;
    put("bc_structure", bc.pass);

    let mut zeta_ok = true;
    for m in 1..=3 {
        let a = zeta_pos(field, m, floor, None)?;
        let b = zeta_pos(field, m, floor, Some(a.dmax_used + 2))?;
        let rest = &a.value - &Laurent::one(field);
        zeta_ok &= a.value.agrees_with(&b.value) && rest.valuation().bound() >= 2 * (m as i64 + 1);
    }
    put("zeta_structure", zeta_ok);

    let product = period_w_product(field, floor)?;
    let kernel = period_w_kernel(field, floor, None)?;
    put("period_agreement", zero_within(&(&product.w - &kernel.w), -floor, 5));
    put("period_validation", validate_w(&product.w, floor)?.pass);

    put("euler_carlitz", verify_euler_carlitz(field, 1, floor)?.pass());
    let mut ram = true;
    for j in 1..=2 {
        ram &= verify_ramanujan(field, j, floor, None)?.pass();
    }
    put("ramanujan", ram);
    if q == 3 {
        let ctx = RamanujanContext::new(field, 1, floor, None)?;
        let bracket = Poly::from_ints(field, &[0, -1, 0, 1]);
        let closed = RatFunc::new(Poly::from_ints(field, &[1, 1, 1]), &Poly::t(field) * &bracket.pow(2))?;
        let closed = &ctx.w().pow(2)? * &Laurent::embed_ratfunc(&closed, floor - 20)?;
        put("closed_form_rhs", ctx.rhs_convolution(floor)?.agrees_with(&closed));
    }
    put(
        "reciprocal",
        verify_reciprocal(field, &Laurent::u(field), floor, false, None)?.pass(),
    );
    let mut tele = true;
    for j in 1..=3 {
        tele &= telescoping_check(field, j, 10, 0x5eed + j as u64)?.pass();
    }
    put("telescoping", tele);
    put(
        "classical",
        classical(1, None)?.pass && verify_classical_ramanujan(1, 2.0 * PI)?.residual < RAMANUJAN_TOLERANCE,
    );
    block.pass = block.checks.values().all(|&c| c);
    Ok(block)
}
