//! Goss zeta values `zeta_inf(m) = sum_{A monic} A^-m` at positive integers,
//! and the Euler-Carlitz comparison `zeta_inf((q-1)i) = w^i BC_(q-1)i / Gamma_(q-1)i`.

use std::time::Instant;

use rayon::prelude::*;

use crate::basealg::{checked_monic_count, Field, MonicPolys};
use crate::carlitz::CarlitzTables;
use crate::error::{Error, Result};
use crate::laurent::{Laurent, GUARD_DIGITS};
use crate::period::period_w;
use crate::report::VerifyReport;

/// Residual slack for the Euler-Carlitz comparison.
pub const EULER_CARLITZ_SLACK: i64 = 6;

const CHUNK: u64 = 256;

#[derive(Clone, Debug)]
pub struct ZetaValue {
    pub m: u32,
    pub value: Laurent,
    pub dmax_used: u32,
}

/// Lower bound for the `U`-valuation of `S_d(-m) = sum_{deg A = d} A^-m`.
///
/// Expanding `(T^d + a)^-m` in `a/T^d`, the `n`-th term carries
/// `sum_{deg a < d} a^n`, which vanishes unless the base-`q` digit sum of `n`
/// reaches `(q-1)d`, forcing `n >= q^d - 1`.
pub fn block_valuation_bound(q: u32, m: u32, d: u32) -> i64 {
    if d == 0 {
        return 0;
    }
    let qd = (q as i64).checked_pow(d).unwrap_or(i64::MAX / 4);
    2 * (m as i64 * d as i64 + qd - 1)
}

/// Largest degree whose block can still reach the floor `-n` (plus guard).
pub fn zeta_dmax(q: u32, m: u32, n: i64) -> u32 {
    let mut d = 0;
    while block_valuation_bound(q, m, d + 1) <= n + GUARD_DIGITS {
        d += 1;
    }
    d
}

fn reciprocal_power(a: &crate::basealg::Poly, m: u32, floor: i64) -> Result<Laurent> {
    Laurent::embed_poly(&a.pow(m as u64)).inv_to(floor)
}

/// `sum_{deg A = d, A monic} A^-m` down to `floor`, split across the rayon pool.
pub fn power_sum_block(field: &Field, m: u32, d: u32, floor: i64) -> Result<Laurent> {
    let count = checked_monic_count(field, d)?;
    let chunks: Vec<(u64, u64)> = (0..count.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(count)))
        .collect();
    let partials: Vec<Laurent> = chunks
        .into_par_iter()
        .map(|(start, end)| {
            let mut acc = Laurent::zero_to_precision(field, floor);
            for a in MonicPolys::range(field, d, start, end) {
                acc = &acc + &reciprocal_power(&a, m, floor)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(partials
        .into_iter()
        .fold(Laurent::zero_to_precision(field, floor), |acc, x| &acc + &x))
}

/// `zeta_inf(m)` down to `floor`; `dmax` overrides the degree cutoff.
pub fn zeta_pos(field: &Field, m: u32, floor: i64, dmax: Option<u32>) -> Result<ZetaValue> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be a positive integer".into()));
    }
    let dmax_used = dmax.unwrap_or_else(|| zeta_dmax(field.q(), m, -floor));
    let mut value = Laurent::zero_to_precision(field, floor);
    for d in 0..=dmax_used {
        value = &value + &power_sum_block(field, m, d, floor)?;
    }
    Ok(ZetaValue { m, value, dmax_used })
}

/// Compares `zeta_inf((q-1)i)` with `w^i BC_(q-1)i / Gamma_(q-1)i` down to `floor`.
pub fn verify_euler_carlitz(field: &Field, i: u32, floor: i64) -> Result<VerifyReport> {
    if i == 0 {
        return Err(Error::InvalidParameter("i must be a positive integer".into()));
    }
    let start = Instant::now();
    let q = field.q();
    let m = (q - 1) * i;
    let n = -floor;
    let mut imax = 1;
    while (q as u64).pow(imax as u32 + 1) - 1 <= m as u64 {
        imax += 1;
    }
    let tables = CarlitzTables::build(field, imax)?;
    let bc = tables.bc_numbers(m as u64)?;
    let b = bc.ratio(m as u64)?;
    let b_deg = 2 * b
        .degree()
        .ok_or_else(|| Error::Domain(format!("BC_{m} vanishes")))?;

    let w = period_w(field, floor - 2 * GUARD_DIGITS)?;
    let b_emb = Laurent::embed_ratfunc(b, b_deg + floor - 2 * GUARD_DIGITS)?;
    let rhs = (&w.pow(i as i64)? * &b_emb).truncate(floor);
    let zeta = zeta_pos(field, m, floor, None)?;

    let mut report = VerifyReport::compare(zeta.value, rhs, n, EULER_CARLITZ_SLACK);
    report.dmax_used = Some(zeta.dmax_used);
    report.check("even_exponents", report.lhs.exponents_have_parity(false));
    report.diagnostic("m", m);
    report.diagnostic("bc_ratio", b);
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basealg::FieldCtx;

    /// `sum_{deg A <= dmax} A^-m` as a power series in `x = 1/T` over `Z/p`,
    /// `terms` coefficients, using plain integer arithmetic.
    fn zeta_series_oracle(p: i64, m: u32, dmax: u32, terms: usize) -> Vec<i64> {
        let md = |v: i64| v.rem_euclid(p);
        let mul = |a: &[i64], b: &[i64]| {
            let mut out = vec![0; terms];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    if i + j < terms {
                        out[i + j] = md(out[i + j] + x * y);
                    }
                }
            }
            out
        };
        let mut total = vec![0i64; terms];
        for d in 0..=dmax {
            for idx in 0..(p as u64).pow(d) {
                // A = T^d (1 + c_(d-1) x + ... + c_0 x^d).
                let mut rev = vec![0i64; terms];
                rev[0] = 1;
                let mut k = idx;
                for j in (1..=d as usize).rev() {
                    if j < terms {
                        rev[j] = (k % p as u64) as i64;
                    }
                    k /= p as u64;
                }
                // Invert rev as a power series.
                let mut inv = vec![0i64; terms];
                inv[0] = 1;
                for n in 1..terms {
                    let s: i64 = (1..=n).map(|k| rev[k] * inv[n - k]).sum();
                    inv[n] = md(-s);
                }
                let mut pw = vec![0i64; terms];
                pw[0] = 1;
                for _ in 0..m {
                    pw = mul(&pw, &inv);
                }
                let shift = (d * m) as usize;
                for n in 0..terms.saturating_sub(shift) {
                    total[n + shift] = md(total[n + shift] + pw[n]);
                }
            }
        }
        total
    }

    #[test]
    fn zeta2_q3_against_integer_series() {
        let f = FieldCtx::prime(3).unwrap();
        let z = zeta_pos(&f, 2, -40, None).unwrap().value;
        let oracle = zeta_series_oracle(3, 2, 4, 16);
        for (k, &c) in oracle.iter().enumerate() {
            assert_eq!(z.coeff(-2 * k as i64).unwrap().index() as i64, c, "T^-{k}");
            assert!(z.coeff(-2 * k as i64 - 1).unwrap().is_zero());
        }
        assert_eq!(&oracle[..9], &[1, 0, 0, 0, 0, 0, 1, 0, 2]);
    }

    #[test]
    fn valuation_of_zeta_minus_one() {
        for q in [3u64, 5] {
            let f = FieldCtx::new(q, None).unwrap();
            for m in 1..=6 {
                let z = zeta_pos(&f, m, -60, None).unwrap().value;
                let rest = &z - &Laurent::one(&f);
                assert!(rest.valuation().bound() >= 2 * (m as i64 + 1), "q={q} m={m}");
            }
        }
    }

    #[test]
    fn dmax_is_sufficient() {
        for (q, m) in [(3u64, 1u32), (3, 2), (3, 4), (5, 1), (5, 4)] {
            let f = FieldCtx::new(q, None).unwrap();
            let a = zeta_pos(&f, m, -60, None).unwrap();
            let b = zeta_pos(&f, m, -60, Some(a.dmax_used + 2)).unwrap();
            assert!(a.value.agrees_with(&b.value), "q={q} m={m}");
        }
    }

    #[test]
    fn block_bound_is_respected() {
        let f = FieldCtx::prime(3).unwrap();
        for m in 1..=3 {
            for d in 1..=3 {
                let s = power_sum_block(&f, m, d, -80).unwrap();
                assert!(s.valuation().bound() >= block_valuation_bound(3, m, d), "m={m} d={d}");
            }
        }
    }

    #[test]
    fn degree_grouping_matches_flat_sum() {
        let f = FieldCtx::prime(3).unwrap();
        let z = zeta_pos(&f, 3, -40, Some(3)).unwrap().value;
        let mut flat = Laurent::zero_to_precision(&f, -40);
        for d in (0..=3).rev() {
            for a in crate::basealg::monic_polys(&f, d) {
                flat = &flat + &Laurent::embed_poly(&a.pow(3)).inv_to(-40).unwrap();
            }
        }
        assert!(z.agrees_with(&flat));
    }

    #[test]
    fn euler_carlitz_small() {
        let f = FieldCtx::prime(3).unwrap();
        for i in 1..=2 {
            let r = verify_euler_carlitz(&f, i, -60).unwrap();
            assert!(r.pass(), "i={i}: {}", r.residual_valuation());
        }
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(verify_euler_carlitz(&f5, 1, -60).unwrap().pass());
    }
}
