//! The period constant `w = pi~^(q-1)`, by a product formula and by solving
//! the kernel condition `l(1) = 0`, i.e. `f(w) = sum_i w^(n_i)/D_i = 0` with
//! `n_i = (q^i - 1)/(q - 1)`.

use crate::basealg::{Field, Poly};
use crate::carlitz::{required_imax, CarlitzTables, LatticeExp};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, Valuation, GUARD_DIGITS};

/// Allowed shortfall, in `U`-digits, when declaring `l(z)` zero to precision.
pub const VALIDATION_SLACK: i64 = 6;

const MAX_KERNEL_ITERATIONS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Product,
    Kernel,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Product => "product",
            Method::Kernel => "kernel",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodValue {
    pub w: Laurent,
    pub method: Method,
    /// Valuation of `f(w)` evaluated to the same floor as `w`.
    pub kernel_residual_valuation: Valuation,
    /// Product factors used, or fixed-point iterations run.
    pub steps: usize,
    pub notes: Vec<String>,
}

/// Valuations of `l(1)`, `l(T)`, `l(T+1)` computed from a candidate `w`.
#[derive(Clone, Debug)]
pub struct WValidation {
    pub l_one: Valuation,
    pub l_t: Valuation,
    pub l_t_plus_one: Valuation,
    pub pass: bool,
}

impl WValidation {
    pub fn valuations(&self) -> [(&'static str, Valuation); 3] {
        [("l(1)", self.l_one), ("l(T)", self.l_t), ("l(T+1)", self.l_t_plus_one)]
    }
}

fn bracket(field: &Field, i: u32) -> Poly {
    let q = field.q() as u64;
    &Poly::monomial(field, field.one(), q.pow(i) as usize) - &Poly::t(field)
}

/// True when `x` is zero to precision with valuation bound at least `n - slack`.
pub fn zero_within(x: &Laurent, n: i64, slack: i64) -> bool {
    x.is_zero_to_precision() && x.valuation().bound() >= n - slack
}

/// `w = -[1] prod_{i>=1} (1 - [i]/[i+1])^(q-1)`, validated against the kernel
/// condition. A failed validation negates the product and retries once.
pub fn period_w_product(field: &Field, floor: i64) -> Result<PeriodValue> {
    let q = field.q() as i64;
    let top = 2 * q;
    let relprec = top - floor + GUARD_DIGITS;
    let b1 = bracket(field, 1);
    let mut acc = Laurent::embed_poly(&b1).scale(field.neg(field.one()));
    let one = Laurent::one(field);
    let mut lower = b1;
    let mut steps = 0;
    for i in 1u32.. {
        let dev = 2 * (q.pow(i) - q.pow(i + 1));
        if dev < -relprec {
            break;
        }
        let upper = bracket(field, i + 1);
        let upper_inv = Laurent::embed_poly(&upper).inv_to(-(2 * q.pow(i + 1)) - relprec)?;
        let ratio = &Laurent::embed_poly(&lower) * &upper_inv;
        acc = &acc * &(&one - &ratio).pow(q - 1)?;
        lower = upper;
        steps += 1;
    }
    let mut w = acc.truncate(floor);
    let mut notes = Vec::new();
    if !validate_w(&w, floor)?.pass {
        let negated = -&w;
        if validate_w(&negated, floor)?.pass {
            notes.push("product formula sign corrected by kernel validation".to_string());
            w = negated;
        } else {
            notes.push("product result failed kernel validation with either sign".to_string());
        }
    }
    Ok(PeriodValue {
        kernel_residual_valuation: kernel_residual(&w, floor)?,
        w,
        method: Method::Product,
        steps,
        notes,
    })
}

/// Terms `w^(n_i)/D_i` for `i >= 2`, summed down to `sum_floor`.
fn kernel_tail(w: &Laurent, sum_floor: i64) -> Result<Laurent> {
    let field = w.field();
    let w_hi = w.hi().ok_or_else(|| Error::precision("period iterate vanished", w.valuation()))?;
    let mut acc = Laurent::zero(field);
    let mut w_pow = &w.pow_q_power(1) * w;
    let mut d_inv_poly = bracket(field, 1);
    let mut i = 2u32;
    loop {
        d_inv_poly = &bracket(field, i) * &d_inv_poly.pow_q();
        let d_hi = 2 * d_inv_poly.degree().expect("nonzero") as i64;
        let pow_hi = w_pow.hi().unwrap_or(w_hi);
        let term_top = pow_hi - d_hi;
        if term_top < sum_floor {
            break;
        }
        let d_inv = Laurent::embed_poly(&d_inv_poly).inv_to(sum_floor - pow_hi - GUARD_DIGITS)?;
        acc = &acc + &(&w_pow * &d_inv).truncate(sum_floor);
        w_pow = &w_pow.pow_q_power(1) * w;
        i += 1;
    }
    Ok(acc.truncate(sum_floor))
}

/// Fixed point of `w <- -D_1 (1 + sum_{i>=2} w^(n_i)/D_i)`, starting from
/// `seed` or `-D_1`.
pub fn period_w_kernel(field: &Field, floor: i64, seed: Option<&Laurent>) -> Result<PeriodValue> {
    let q = field.q() as i64;
    let d1 = Laurent::embed_poly(&bracket(field, 1));
    let neg_d1 = -&d1;
    let sum_floor = floor - 2 * q - GUARD_DIGITS;
    let one = Laurent::one(field);
    // The seed is an approximation: unknown digits are taken as zero.
    let mut w = match seed {
        Some(s) => {
            let hi = s.hi().ok_or_else(|| Error::precision("seed is zero", s.valuation()))?;
            let mut coeffs = vec![field.zero(); (hi - floor + 1).max(0) as usize];
            for (e, c) in s.terms().filter(|&(e, _)| e >= floor) {
                coeffs[(hi - e) as usize] = c;
            }
            Laurent::from_coeffs(field, hi, coeffs, Some(floor))
        }
        None => neg_d1.truncate(floor),
    };
    let mut last_gap: Option<i64> = None;
    for step in 1..=MAX_KERNEL_ITERATIONS {
        let tail = kernel_tail(&w, sum_floor)?;
        let next = (&neg_d1 * &(&one + &tail)).truncate(floor);
        let update = &next - &w;
        w = next;
        if update.is_zero_to_precision() {
            return Ok(PeriodValue {
                kernel_residual_valuation: kernel_residual(&w, floor)?,
                w,
                method: Method::Kernel,
                steps: step,
                notes: Vec::new(),
            });
        }
        let gap = update.valuation().bound();
        if last_gap.is_some_and(|g| gap <= g) {
            return Err(Error::Convergence(format!(
                "kernel iteration stalled: update valuation {gap} after step {step}"
            )));
        }
        last_gap = Some(gap);
    }
    Err(Error::Convergence(format!(
        "kernel iteration did not settle in {MAX_KERNEL_ITERATIONS} steps"
    )))
}

/// `f(w) = sum_i w^(n_i)/D_i`, reported to the floor `floor`.
pub fn kernel_residual(w: &Laurent, floor: i64) -> Result<Valuation> {
    let field = w.field();
    let q = field.q() as i64;
    let sum_floor = floor - 2 * q;
    let d1 = Laurent::embed_poly(&bracket(field, 1));
    let first = w * &d1.inv_to(sum_floor - w.hi().unwrap_or(0) - GUARD_DIGITS)?;
    let total = &(&Laurent::one(field) + &first) + &kernel_tail(w, sum_floor)?;
    Ok(total.truncate(floor).valuation())
}

/// Evaluates `l` at the lattice points `1`, `T`, `T + 1`; passes when all
/// three vanish to within [`VALIDATION_SLACK`] of the floor.
pub fn validate_w(w: &Laurent, floor: i64) -> Result<WValidation> {
    let field = w.field();
    let w_hi = w.hi().unwrap_or(2 * field.q() as i64);
    let imax = required_imax(field.q(), w_hi, 2, floor).max(2);
    let tables = CarlitzTables::build(field, imax)?;
    let ell = LatticeExp::new(w, &tables)?;
    let t = Poly::t(field);
    let points = [Poly::one(field), t.clone(), &t + &Poly::one(field)];
    let mut vals = Vec::with_capacity(3);
    let mut pass = true;
    for p in &points {
        let v = ell.eval(&Laurent::embed_poly(p), floor)?;
        pass &= zero_within(&v, -floor, VALIDATION_SLACK);
        vals.push(v.valuation());
    }
    Ok(WValidation {
        l_one: vals[0],
        l_t: vals[1],
        l_t_plus_one: vals[2],
        pass,
    })
}

/// The validated period constant to `floor`, via the product formula.
pub fn period_w(field: &Field, floor: i64) -> Result<Laurent> {
    let value = period_w_product(field, floor)?;
    if !validate_w(&value.w, floor)?.pass {
        return Err(Error::Convergence("period constant failed kernel validation".into()));
    }
    Ok(value.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basealg::FieldCtx;

    #[test]
    fn product_shape_q3() {
        let f = FieldCtx::prime(3).unwrap();
        let v = period_w_product(&f, -60).unwrap();
        assert_eq!(v.w.hi(), Some(6));
        assert_eq!((-&v.w).leading_coeff(), Some(f.one()));
        assert!(v.w.exponents_have_parity(false));
        assert!(v.notes.is_empty(), "{:?}", v.notes);
        assert!(v.kernel_residual_valuation.bound() >= 60);
    }

    #[test]
    fn methods_agree() {
        for (q, modulus) in [(3u64, None), (5, None), (7, None), (9, Some(vec![1u32, 0, 1]))] {
            let f = FieldCtx::new(q, modulus.as_deref()).unwrap();
            let n = 60;
            let p = period_w_product(&f, -n).unwrap();
            let k = period_w_kernel(&f, -n, None).unwrap();
            let diff = &p.w - &k.w;
            assert!(zero_within(&diff, n, 5), "q={q}: {}", diff.valuation());
            assert_eq!(k.w.hi(), Some(2 * q as i64));
        }
    }

    #[test]
    fn first_correction_q3() {
        let f = FieldCtx::prime(3).unwrap();
        let w = period_w_kernel(&f, -60, None).unwrap().w;
        let d1 = Laurent::embed_poly(&Poly::from_ints(&f, &[0, -1, 0, 1]));
        let correction = &w + &d1;
        let rel = correction.valuation().finite().unwrap() - w.valuation().finite().unwrap();
        assert_eq!(rel, 12);
    }

    #[test]
    fn validation_behaviour() {
        let f = FieldCtx::prime(3).unwrap();
        let w = period_w(&f, -60).unwrap();
        let check = validate_w(&w, -60).unwrap();
        assert!(check.pass);
        for (_, v) in check.valuations() {
            assert!(!v.is_exact());
        }
        assert!(!validate_w(&-&w, -60).unwrap().pass);

        let tables = CarlitzTables::build(&f, 4).unwrap();
        let ell = LatticeExp::new(&w, &tables).unwrap();
        let at_u = ell.eval(&Laurent::u(&f), -60).unwrap();
        assert!(at_u.valuation().finite().unwrap() <= -1);
    }
}
