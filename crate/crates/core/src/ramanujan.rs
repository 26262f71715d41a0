//! The function-field Ramanujan identity in `pi~`-free form.
//!
//! With `alpha = U pi~`, `beta = U^-1 pi~` (so `alpha beta = pi~^2`) and
//! `e(pi~ z) = pi~ l(z)`, multiplying both sides by `pi~^(D+1)` gives
//!
//! ```text
//! U^-D T_U + U^D T_(1/U) = w^(j+1) sum_{k=0}^{j+1} b_(j-k+1) b_k U^(c(2k-j-1))
//! T_x = sum_{A monic} A^-M / l(x A),      b_k = BC_((q-1)k) / Gamma_((q-1)k)
//! c = (q-1)/2,  D = c(j-1) + q - 2,  M = (q-1)j + q - 2
//! ```
//!
//! which lives in `F_q((1/U))` and needs only `w = pi~^(q-1)`. Arguments
//! `U^(+-1) A` have odd `U`-degree, so they never meet the lattice `R`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basealg::{checked_monic_count, Field, MonicPolys, Poly, RatFunc};
use crate::carlitz::{ell_degree, required_imax, BcTable, CarlitzTables, LatticeExp};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, GUARD_DIGITS};
use crate::period::period_w;
use crate::report::VerifyReport;

/// Residual slack for the main identity.
pub const RAMANUJAN_SLACK: i64 = 10;
/// Residual slack for the reciprocal expansion of `1/l(z)`.
pub const RECIPROCAL_SLACK: i64 = 6;

const CHUNK: u64 = 64;
/// Extra relative digits carried by `w` beyond the planned need.
const W_CUSHION: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityParams {
    pub q: u32,
    pub j: u32,
    pub c: i64,
    pub d: i64,
    pub m: i64,
}

impl IdentityParams {
    pub fn new(q: u32, j: u32) -> Result<Self> {
        if q % 2 == 0 {
            return Err(Error::InvalidParameter("q must be odd".into()));
        }
        if j == 0 {
            return Err(Error::InvalidParameter("j is a positive integer".into()));
        }
        let (qi, ji) = (q as i64, j as i64);
        let c = (qi - 1) / 2;
        Ok(IdentityParams {
            q,
            j,
            c,
            d: c * (ji - 1) + qi - 2,
            m: (qi - 1) * ji + qi - 2,
        })
    }

    /// `D + 1 + c(j+1) = (q-1)(j+1)`: the power of `pi~` left on the right
    /// after clearing is a power of `w`.
    pub fn exponent_audit(&self) -> bool {
        let j1 = self.j as i64 + 1;
        self.d + 1 + self.c * j1 == (self.q as i64 - 1) * j1
    }

    /// `U`-exponents `c(2k - j - 1)` of the right-hand convolution, `k = 0..=j+1`.
    pub fn u_exponents(&self) -> Vec<i64> {
        let j = self.j as i64;
        (0..=j + 1).map(|k| self.c * (2 * k - j - 1)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct IdentityDoc {
    pub params: IdentityParams,
    pub w_exponent: i64,
    pub u_exponents: Vec<i64>,
    pub text: String,
}

/// The cleared identity for `(q, j)` with its exponent audit; an audit
/// failure is an error.
pub fn normalized_identity_doc(q: u32, j: u32) -> Result<IdentityDoc> {
    let p = IdentityParams::new(q, j)?;
    if !p.exponent_audit() {
        return Err(Error::Domain(format!("exponent audit failed for q={q}, j={j}")));
    }
    let w_exponent = j as i64 + 1;
    let u_exponents = p.u_exponents();
    let text = format!(
        "alpha = U*pi, beta = U^-1*pi, e(pi*z) = pi*l(z)\n\
         c = {c}, D = {d}, M = {m}\n\
         U^-{d}*T_U + U^{d}*T_(1/U) = w^{w_exponent} * sum_k b_(j-k+1)*b_k*U^(c(2k-j-1))\n\
         T_x = sum_A A^-{m} / l(x*A), b_k = BC_((q-1)k)/Gamma_((q-1)k)\n\
         audit: D + 1 + c(j+1) = {lhs} = (q-1)(j+1) = {rhs}\n\
         U-exponents: {u_exponents:?}",
        c = p.c,
        d = p.d,
        m = p.m,
        lhs = p.d + 1 + p.c * w_exponent,
        rhs = (q as i64 - 1) * w_exponent,
    );
    Ok(IdentityDoc {
        params: p,
        w_exponent,
        u_exponents,
        text,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    U,
    InvU,
}

impl Scale {
    fn shift(self) -> i64 {
        match self {
            Scale::U => 1,
            Scale::InvU => -1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockInfo {
    pub degree: u32,
    pub terms: u64,
    /// Exact `U`-degree shared by every term of the block.
    pub top: i64,
}

#[derive(Clone, Debug)]
pub struct LatticeSum {
    pub value: Laurent,
    pub dmax_used: u32,
    pub blocks: Vec<BlockInfo>,
    pub odd_parity: bool,
    pub degree_formula: bool,
}

/// Exact `U`-degree of `A^-M / l(s A)` for `deg A = d`.
fn term_top(p: &IdentityParams, scale: Scale, d: u32) -> i64 {
    -2 * p.m * d as i64 - ell_degree(p.q, 2 * d as i64 + scale.shift())
}

/// Last degree whose terms reach `floor - GUARD_DIGITS`.
fn lattice_dmax(p: &IdentityParams, scale: Scale, floor: i64) -> u32 {
    let mut d = 0;
    while term_top(p, scale, d + 1) >= floor - GUARD_DIGITS {
        d += 1;
    }
    d
}

/// Relative digits needed for a term of degree `top` to reach `floor`.
fn term_relprec(top: i64, floor: i64) -> i64 {
    (top - floor).max(0) + 2 * GUARD_DIGITS
}

/// Shared state for one `(q, j, N)` verification: validated `w`, lattice
/// exponential coefficients and Bernoulli-Carlitz numbers.
pub struct RamanujanContext {
    field: Field,
    params: IdentityParams,
    n: i64,
    dmax_override: Option<u32>,
    w: Laurent,
    ell: LatticeExp,
    bc: BcTable,
}

impl RamanujanContext {
    pub fn new(field: &Field, j: u32, floor: i64, dmax: Option<u32>) -> Result<Self> {
        let params = IdentityParams::new(field.q(), j)?;
        if !params.exponent_audit() {
            return Err(Error::Domain("exponent audit failed".into()));
        }
        let n = -floor;
        let q = field.q() as i64;
        let j1 = j as i64 + 1;
        let relprec_w = n + (params.c * j1).max(params.d + 1) + 2 * GUARD_DIGITS + W_CUSHION;
        let w = period_w(field, 2 * q - relprec_w)?;

        let mut imax = 1usize;
        while q.pow(imax as u32 + 1) - 1 <= (q - 1) * j1 {
            imax += 1;
        }
        for (scale, sum_floor) in [(Scale::U, floor + params.d), (Scale::InvU, floor - params.d)] {
            let dmax = dmax.unwrap_or_else(|| lattice_dmax(&params, scale, sum_floor));
            for d in 0..=dmax {
                let h = 2 * d as i64 + scale.shift();
                let top = term_top(&params, scale, d);
                let ell_floor = ell_degree(field.q(), h) - term_relprec(top, sum_floor);
                imax = imax.max(required_imax(field.q(), 2 * q, h, ell_floor));
            }
        }
        // Also covers the reciprocal check at z = U.
        imax = imax.max(required_imax(field.q(), 2 * q, 1, -relprec_w));
        let tables = CarlitzTables::build(field, imax)?;
        let ell = LatticeExp::new(&w, &tables)?;
        let bc = tables.bc_numbers(((q - 1) * j1) as u64)?;
        Ok(RamanujanContext {
            field: field.clone(),
            params,
            n,
            dmax_override: dmax,
            w,
            ell,
            bc,
        })
    }

    pub fn params(&self) -> &IdentityParams {
        &self.params
    }

    pub fn w(&self) -> &Laurent {
        &self.w
    }

    pub fn ell(&self) -> &LatticeExp {
        &self.ell
    }

    /// `T_scale = sum_A A^-M / l(scale A)` down to `floor`.
    pub fn lattice_sum(&self, scale: Scale, floor: i64) -> Result<LatticeSum> {
        let p = &self.params;
        let dmax = self
            .dmax_override
            .unwrap_or_else(|| lattice_dmax(p, scale, floor));
        let mut value = Laurent::zero_to_precision(&self.field, floor);
        let mut blocks = Vec::new();
        let mut odd_parity = true;
        let mut degree_formula = true;
        for d in 0..=dmax {
            let top = term_top(p, scale, d);
            let h = 2 * d as i64 + scale.shift();
            let ell_deg = ell_degree(p.q, h);
            let ell_floor = ell_deg - term_relprec(top, floor);
            let count = checked_monic_count(&self.field, d)?;
            let chunks: Vec<(u64, u64)> = (0..count.div_ceil(CHUNK))
                .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(count)))
                .collect();
            let partials: Vec<(Laurent, bool, bool)> = chunks
                .into_par_iter()
                .map(|(start, end)| {
                    let mut acc = Laurent::zero_to_precision(&self.field, floor);
                    let (mut parity, mut degree) = (true, true);
                    for a in MonicPolys::range(&self.field, d, start, end) {
                        let z = Laurent::embed_poly(&a).shift(scale.shift());
                        parity &= z.exponents_have_parity(true);
                        let l = self.ell.eval(&z, ell_floor)?;
                        if l.is_zero_to_precision() {
                            return Err(Error::precision(
                                format!("l({}) vanished to precision at A = {a}", z),
                                l.valuation(),
                            ));
                        }
                        degree &= l.hi() == Some(ell_deg) && ell_deg >= h;
                        let denom = &Laurent::embed_poly(&a.pow(p.m as u64)) * &l;
                        acc = &acc + &denom.inv()?.truncate(floor);
                    }
                    Ok((acc, parity, degree))
                })
                .collect::<Result<_>>()?;
            for (part, parity, degree) in partials {
                value = &value + &part;
                odd_parity &= parity;
                degree_formula &= degree;
            }
            blocks.push(BlockInfo {
                degree: d,
                terms: count,
                top,
            });
        }
        Ok(LatticeSum {
            value,
            dmax_used: dmax,
            blocks,
            odd_parity,
            degree_formula,
        })
    }

    /// `b_k = BC_((q-1)k)/Gamma_((q-1)k)` for `k = 0..=j+1`.
    pub fn b_values(&self) -> Result<Vec<RatFunc>> {
        let q1 = self.params.q as u64 - 1;
        (0..=self.params.j as u64 + 1)
            .map(|k| self.bc.ratio(q1 * k).cloned())
            .collect()
    }

    /// `w^(j+1) sum_k b_(j-k+1) b_k U^(c(2k-j-1))` down to `floor`.
    pub fn rhs_convolution(&self, floor: i64) -> Result<Laurent> {
        let b = self.b_values()?;
        if let Some(k) = b.iter().position(|x| x.is_zero()) {
            return Err(Error::Domain(format!("b_{k} vanishes")));
        }
        let j = self.params.j as usize;
        let j1 = j as i64 + 1;
        let w_pow = self.w.pow(j1)?;
        let w_hi = w_pow.hi().expect("w is nonzero");
        // The bracket must be known to floor - w_hi, with guard digits.
        let inner_floor = floor - w_hi - 2 * GUARD_DIGITS;
        let mut acc = Laurent::zero_to_precision(&self.field, inner_floor);
        for (k, &u_exp) in self.params.u_exponents().iter().enumerate() {
            let prod = b[j + 1 - k].mul(&b[k]);
            let deg = 2 * prod.degree().expect("nonzero");
            let prec = (deg + u_exp - inner_floor).max(0) + GUARD_DIGITS;
            let e = Laurent::embed_ratfunc(&prod, deg - prec)?.shift(u_exp);
            acc = &acc + &e;
        }
        Ok((&w_pow * &acc).truncate(floor))
    }

    /// Both sides of the cleared identity down to `floor`.
    pub fn verify(&self) -> Result<VerifyReport> {
        let start = Instant::now();
        let p = self.params;
        let floor = -self.n;
        let t_u = self.lattice_sum(Scale::U, floor + p.d)?;
        let t_inv = self.lattice_sum(Scale::InvU, floor - p.d)?;
        let lhs = &t_u.value.shift(-p.d) + &t_inv.value.shift(p.d);
        let rhs = self.rhs_convolution(floor)?;
        let mut report = VerifyReport::compare(lhs.truncate(floor), rhs, self.n, RAMANUJAN_SLACK);
        report.dmax_used = Some(t_u.dmax_used.max(t_inv.dmax_used));
        report.check("exponent_audit", p.exponent_audit());
        report.check("odd_parity", t_u.odd_parity && t_inv.odd_parity);
        report.check("degree_formula", t_u.degree_formula && t_inv.degree_formula);
        for (name, sum) in [("T_U", &t_u), ("T_1/U", &t_inv)] {
            for b in &sum.blocks {
                report.diagnostic(
                    format!("{name} d={}", b.degree),
                    format!("terms={} top={}", b.terms, b.top),
                );
            }
        }
        report.elapsed = start.elapsed();
        Ok(report)
    }
}

/// Checks the identity at `(q, j)` with working precision `-floor`.
pub fn verify_ramanujan(field: &Field, j: u32, floor: i64, dmax: Option<u32>) -> Result<VerifyReport> {
    let start = Instant::now();
    let ctx = RamanujanContext::new(field, j, floor, dmax)?;
    let mut report = ctx.verify()?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// The right-hand side alone.
pub fn rhs_convolution(field: &Field, j: u32, floor: i64) -> Result<Laurent> {
    RamanujanContext::new(field, j, floor, None)?.rhs_convolution(floor)
}

/// `T_scale` alone, for the identity's exponent `M` at `j`.
pub fn lattice_sum(field: &Field, scale: Scale, j: u32, floor: i64) -> Result<LatticeSum> {
    let p = IdentityParams::new(field.q(), j)?;
    let ctx_floor = match scale {
        Scale::U => floor - p.d,
        Scale::InvU => floor + p.d,
    };
    RamanujanContext::new(field, j, ctx_floor, None)?.lattice_sum(scale, floor)
}

/// Lower bound for the `U`-valuation of `z^(q-2) sum_{deg A = d} 1/(z^(q-1) - A^(q-1))`
/// when `2d > deg_U z = h`.
fn reciprocal_block_bound(q: u32, h: i64, d: u32) -> i64 {
    let q = q as i64;
    let qd = q.checked_pow(d).unwrap_or(i64::MAX / 4);
    2 * (q - 1) * d as i64 + 2 * (qd - 1) - (q - 2) * h
}

/// Compares `1/l(z)` with `1/z - z^(q-2) sum_A 1/(z^(q-1) - A^(q-1))`.
/// Only `z = U` is accepted unless `allow_arbitrary` is set.
pub fn verify_reciprocal(
    field: &Field,
    z: &Laurent,
    floor: i64,
    allow_arbitrary: bool,
    dmax: Option<u32>,
) -> Result<VerifyReport> {
    let start = Instant::now();
    if !allow_arbitrary && *z != Laurent::u(field) {
        return Err(Error::InvalidParameter(
            "reciprocal check runs at z = U unless arbitrary arguments are allowed".into(),
        ));
    }
    let Some(h) = z.hi() else {
        return Err(Error::Domain("reciprocal of l(0)".into()));
    };
    let q = field.q();
    let n = -floor;
    let qm1 = q as i64 - 1;

    let ell_deg = if h.rem_euclid(2) == 1 { ell_degree(q, h) } else { ell_degree(q, h + 1) };
    let relprec = term_relprec(-ell_deg, floor);
    let w = period_w(field, 2 * q as i64 - relprec - W_CUSHION)?;
    let tables = CarlitzTables::build(field, required_imax(q, 2 * q as i64, h, ell_deg - relprec))?;
    let ell = LatticeExp::new(&w, &tables)?;
    let l = ell.eval(z, ell_deg - relprec)?;
    if l.is_zero_to_precision() {
        return Err(Error::precision("l(z) vanished to precision; z is too close to R", l.valuation()));
    }
    let lhs = l.inv()?.truncate(floor);

    let zq2 = z.pow(q as i64 - 2)?;
    let zq1 = &zq2 * z;
    let sum_floor = floor - (q as i64 - 2) * h - GUARD_DIGITS;
    let mut sum = Laurent::zero_to_precision(field, sum_floor);
    let mut d = 0u32;
    let mut used = 0;
    loop {
        let past_bound = 2 * d as i64 > h && reciprocal_block_bound(q, h, d) > n + GUARD_DIGITS;
        match dmax {
            Some(limit) if d > limit => break,
            None if past_bound => break,
            _ => {}
        }
        let count = checked_monic_count(field, d)?;
        let chunks: Vec<(u64, u64)> = (0..count.div_ceil(CHUNK))
            .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(count)))
            .collect();
        let partials: Vec<Laurent> = chunks
            .into_par_iter()
            .map(|(start, end)| {
                let mut acc = Laurent::zero_to_precision(field, sum_floor);
                for a in MonicPolys::range(field, d, start, end) {
                    let x = &zq1 - &Laurent::embed_poly(&a.pow(qm1 as u64));
                    if x.is_zero_to_precision() {
                        return Err(Error::precision(
                            format!("z^(q-1) - A^(q-1) vanished at A = {a}"),
                            x.valuation(),
                        ));
                    }
                    acc = &acc + &x.inv_to(sum_floor)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        for part in partials {
            sum = &sum + &part;
        }
        used = d;
        d += 1;
    }
    let z_inv = z.inv_to(floor)?;
    let rhs = (&z_inv - &(&zq2 * &sum)).truncate(floor);

    let mut report = VerifyReport::compare(lhs, rhs, n, RECIPROCAL_SLACK);
    report.dmax_used = Some(used);
    report.diagnostic("deg l(z)", l.hi().unwrap_or(ell_deg));
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Both sides of `1/(x^j (x - y)) = -sum_{k=1}^{j} x^-(j-k+1) y^-k + 1/(y^j (x - y))`.
pub fn telescoping_sides(x: &RatFunc, y: &RatFunc, j: u32) -> Result<(RatFunc, RatFunc)> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::Domain("telescoping needs nonzero x and y".into()));
    }
    let diff = x.sub(y);
    if diff.is_zero() {
        return Err(Error::Domain("telescoping needs x != y".into()));
    }
    let j = j as i64;
    let lhs = x.pow(j)?.mul(&diff).inv()?;
    let mut rhs = y.pow(j)?.mul(&diff).inv()?;
    for k in 1..=j {
        rhs = rhs.sub(&x.pow(-(j - k + 1))?.mul(&y.pow(-k)?));
    }
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopingOutcome {
    pub j: u32,
    pub trials: usize,
    pub passed: usize,
    /// Random draws discarded because `x = y`.
    pub rejected: usize,
}

impl TelescopingOutcome {
    pub fn pass(&self) -> bool {
        self.passed == self.trials
    }
}

fn random_poly(field: &Field, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs = (0..=deg)
            .map(|_| field.elem(rng.gen_range(0..field.q())))
            .collect();
        let p = Poly::new(field, coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_ratfunc(field: &Field, rng: &mut ChaCha8Rng, max_deg: usize) -> RatFunc {
    let num = random_poly(field, rng, max_deg);
    let den = random_poly(field, rng, max_deg);
    RatFunc::new(num, den).expect("nonzero denominator")
}

/// Runs [`telescoping_sides`] on `trials` seeded random pairs.
pub fn telescoping_check(field: &Field, j: u32, trials: usize, seed: u64) -> Result<TelescopingOutcome> {
    if j == 0 {
        return Err(Error::InvalidParameter("j is a positive integer".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TelescopingOutcome {
        j,
        trials,
        passed: 0,
        rejected: 0,
    };
    let mut done = 0;
    while done < trials {
        let x = random_ratfunc(field, &mut rng, 3);
        let y = random_ratfunc(field, &mut rng, 3);
        if x == y {
            out.rejected += 1;
            continue;
        }
        let (lhs, rhs) = telescoping_sides(&x, &y, j)?;
        if lhs == rhs {
            out.passed += 1;
        }
        done += 1;
    }
    Ok(out)
}
