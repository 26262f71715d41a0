//! Carlitz module constants: brackets `[i] = T^(q^i) - T`, factorials
//! `D_i = [i] D_{i-1}^q`, digit factorials `Gamma_m`, Bernoulli-Carlitz
//! numbers, and the exponential of the lattice `R`.
//!
//! The Carlitz exponential with period lattice `pi~ R` is
//! `e(z) = sum_i z^(q^i) / D_i`. Rather than representing `pi~` (which needs a
//! `(q-1)`-st root) we work with its normalization
//!
//! ```text
//! l(z) = pi~^-1 e(pi~ z) = sum_i pi~^(q^i - 1) z^(q^i) / D_i
//!      = sum_i w^((q^i - 1)/(q - 1)) z^(q^i) / D_i,     w = pi~^(q-1),
//! ```
//!
//! whose zero set is exactly `R` and whose coefficients lie in `k_inf`.
//! In product form `l(z) = z prod_{A monic} (1 - (z/A)^(q-1))`.

use std::collections::BTreeMap;

use crate::basealg::{monic_polys, Field, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, GUARD_DIGITS};

/// Largest `T`-degree of `D_imax` the tables will materialize.
pub const MAX_FACTORIAL_DEGREE: u64 = 1 << 22;
/// Largest index accepted by [`CarlitzTables::bc_numbers`].
pub const MAX_BC_INDEX: u64 = 20_000;

/// Brackets and Carlitz factorials up to index `imax`, as exact polynomials.
#[derive(Clone, Debug)]
pub struct CarlitzTables {
    field: Field,
    imax: usize,
    brackets: Vec<Poly>,
    factorials: Vec<Poly>,
}

impl CarlitzTables {
    pub fn build(field: &Field, imax: usize) -> Result<Self> {
        if imax < 1 {
            return Err(Error::InvalidParameter("imax must be at least 1".into()));
        }
        let q = field.q() as u64;
        let too_big = q
            .checked_pow(imax as u32)
            .and_then(|v| v.checked_mul(imax as u64))
            .is_none_or(|deg| deg > MAX_FACTORIAL_DEGREE);
        if too_big {
            return Err(Error::Capacity(format!(
                "D_{imax} has degree beyond {MAX_FACTORIAL_DEGREE}"
            )));
        }
        let t = Poly::t(field);
        let mut brackets = vec![Poly::zero(field)];
        let mut factorials = vec![Poly::one(field)];
        let mut t_qi = t.clone();
        for i in 1..=imax {
            t_qi = t_qi.pow_q();
            let bracket = &t_qi - &t;
            let d = &bracket * &factorials[i - 1].pow_q();
            brackets.push(bracket);
            factorials.push(d);
        }
        Ok(CarlitzTables {
            field: field.clone(),
            imax,
            brackets,
            factorials,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn imax(&self) -> usize {
        self.imax
    }

    /// `[i] = T^(q^i) - T` for `1 <= i <= imax`.
    pub fn bracket(&self, i: usize) -> &Poly {
        assert!((1..=self.imax).contains(&i), "bracket index {i} out of range");
        &self.brackets[i]
    }

    /// `D_i` for `0 <= i <= imax`.
    pub fn factorial(&self, i: usize) -> &Poly {
        &self.factorials[i]
    }

    /// Digit factorial `Gamma_m = prod_i D_i^(m_i)` over the base-`q` digits of `m`.
    pub fn gamma(&self, m: u64) -> Result<Poly> {
        let q = self.field.q() as u64;
        let mut acc = Poly::one(&self.field);
        let mut rest = m;
        let mut i = 0;
        while rest > 0 {
            let digit = rest % q;
            if digit > 0 {
                if i > self.imax {
                    return Err(Error::Capacity(format!(
                        "Gamma_{m} needs D_{i}, tables stop at D_{}",
                        self.imax
                    )));
                }
                acc = &acc * &self.factorials[i].pow(digit);
            }
            rest /= q;
            i += 1;
        }
        Ok(acc)
    }

    /// Bernoulli-Carlitz numbers `BC_0..=BC_mmax`, from the exact inverse of
    /// `e(z)/z = sum_i z^(q^i - 1)/D_i` over `F_q(T)`.
    pub fn bc_numbers(&self, mmax: u64) -> Result<BcTable> {
        let q = self.field.q() as u64;
        if mmax > MAX_BC_INDEX {
            return Err(Error::Capacity(format!("BC_{mmax} beyond the supported index {MAX_BC_INDEX}")));
        }
        let limit = q
            .checked_pow(self.imax as u32 + 1)
            .map(|v| v - 1)
            .unwrap_or(u64::MAX);
        if mmax >= limit {
            return Err(Error::Capacity(format!(
                "BC_{mmax} needs factorials beyond D_{}",
                self.imax
            )));
        }
        let f = &self.field;
        let inv_d: Vec<RatFunc> = self
            .factorials
            .iter()
            .map(|d| RatFunc::new(Poly::one(f), d.clone()))
            .collect::<Result<_>>()?;
        let mut ratios: Vec<RatFunc> = Vec::with_capacity(mmax as usize + 1);
        ratios.push(RatFunc::one(f));
        for n in 1..=mmax {
            let mut acc = RatFunc::zero(f);
            let mut i = 1;
            while let Some(shift) = q.checked_pow(i as u32).map(|v| v - 1).filter(|&s| s <= n) {
                let g = &ratios[(n - shift) as usize];
                if !g.is_zero() {
                    acc = acc.add(&g.mul(&inv_d[i]));
                }
                i += 1;
            }
            ratios.push(acc.neg());
        }
        let values = ratios
            .iter()
            .enumerate()
            .map(|(m, r)| Ok(r.mul(&RatFunc::from_poly(self.gamma(m as u64)?))))
            .collect::<Result<_>>()?;
        Ok(BcTable { values, ratios })
    }
}

/// `BC_m` and `BC_m / Gamma_m` for `0 <= m <= mmax`.
#[derive(Clone, Debug)]
pub struct BcTable {
    values: Vec<RatFunc>,
    ratios: Vec<RatFunc>,
}

impl BcTable {
    pub fn mmax(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `BC_m`.
    pub fn value(&self, m: u64) -> Result<&RatFunc> {
        self.values
            .get(m as usize)
            .ok_or_else(|| Error::Capacity(format!("BC_{m} beyond table size {}", self.mmax())))
    }

    /// `BC_m / Gamma_m`, the coefficient of `z^m` in `z / e(z)`.
    pub fn ratio(&self, m: u64) -> Result<&RatFunc> {
        self.ratios
            .get(m as usize)
            .ok_or_else(|| Error::Capacity(format!("BC_{m} beyond table size {}", self.mmax())))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &RatFunc)> {
        self.values.iter().enumerate().map(|(m, v)| (m as u64, v))
    }

    pub fn to_map(&self) -> BTreeMap<u64, RatFunc> {
        self.iter().map(|(m, v)| (m, v.clone())).collect()
    }
}

/// Multiplies `sum_m (BC_m/Gamma_m) z^m` by `e(z)/z` coefficientwise and
/// returns the first order at which the product differs from `1`, or `None`
/// if it equals `1 + O(z^(mmax+1))`.
pub fn generating_function_defect(tables: &CarlitzTables, bc: &BcTable) -> Result<Option<u64>> {
    let f = tables.field();
    let q = f.q() as u64;
    let mmax = bc.mmax();
    for n in 0..=mmax {
        let mut acc = RatFunc::zero(f);
        let mut i = 0usize;
        while let Some(k) = q.checked_pow(i as u32).map(|v| v - 1).filter(|&k| k <= n) {
            let e_coeff = RatFunc::new(Poly::one(f), tables.factorial(i).clone())?;
            acc = acc.add(&e_coeff.mul(bc.ratio(n - k)?));
            i += 1;
        }
        let expected = if n == 0 { RatFunc::one(f) } else { RatFunc::zero(f) };
        if acc != expected {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `U`-degree of `l(z)` for `z` of odd `U`-degree `h`, read off the product
/// `z prod_A (1 - (z/A)^(q-1))`: every factor with `2 deg A < h` contributes
/// `(q-1)(h - 2 deg A)`, the others have degree zero.
pub fn ell_degree(q: u32, h: i64) -> i64 {
    let q = q as i64;
    let mut deg = h;
    let mut b = 0;
    let mut count = 1i64;
    while 2 * b < h {
        deg += (q - 1) * count * (h - 2 * b);
        b += 1;
        count *= q;
    }
    deg
}

/// `n_i = (q^i - 1)/(q - 1)`.
fn w_exponent(q: u64, i: u32) -> u64 {
    (0..i).fold(0, |acc, _| acc * q + 1)
}

/// Predicted top exponent of the `i`-th term `w^(n_i) z^(q^i) / D_i`.
fn predicted_term_top(q: u32, w_hi: i64, z_hi: i64, i: u32) -> i64 {
    let qi = (q as i64).pow(i);
    w_hi * w_exponent(q as u64, i) as i64 - 2 * i as i64 * qi + qi * z_hi
}

/// Largest term index [`LatticeExp::eval`] touches for an argument of `U`-degree
/// `z_hi` evaluated down to `floor`, given `deg_U w = w_hi`.
pub fn required_imax(q: u32, w_hi: i64, z_hi: i64, floor: i64) -> usize {
    let mut prev = predicted_term_top(q, w_hi, z_hi, 0);
    let mut i = 1u32;
    loop {
        let t = predicted_term_top(q, w_hi, z_hi, i);
        if t < floor && t < prev {
            return i as usize;
        }
        prev = t;
        i += 1;
    }
}

/// The lattice-`R` exponential `l(z) = sum_i c_i z^(q^i)` with
/// `c_i = w^((q^i-1)/(q-1)) / D_i`, precomputed for `i <= tables.imax()`.
#[derive(Clone, Debug)]
pub struct LatticeExp {
    field: Field,
    coeffs: Vec<Laurent>,
}

impl LatticeExp {
    pub fn new(w: &Laurent, tables: &CarlitzTables) -> Result<Self> {
        let field = w.field().clone();
        let (Some(w_hi), Some(w_floor)) = (w.hi(), w.floor()) else {
            return Err(Error::precision("period constant must be nonzero and truncated", w.valuation()));
        };
        let relprec = w_hi - w_floor;
        let mut coeffs = vec![Laurent::one(&field)];
        let mut w_pow = Laurent::one(&field);
        for i in 1..=tables.imax() {
            w_pow = &w_pow.pow_q_power(1) * w;
            let d = tables.factorial(i);
            let d_hi = 2 * d.degree().expect("D_i is nonzero") as i64;
            let d_inv = Laurent::embed_poly_truncated(d, d_hi - relprec).inv()?;
            coeffs.push(&w_pow * &d_inv);
        }
        Ok(LatticeExp { field, coeffs })
    }

    /// Number of precomputed coefficients (`imax + 1`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient `w^((q^i-1)/(q-1)) / D_i`.
    pub fn coefficient(&self, i: usize) -> &Laurent {
        &self.coeffs[i]
    }

    /// `l(z)` known down to `floor` (or less, if `w` runs out of digits).
    /// Terms are summed until their top exponent falls below `floor` while
    /// the term degrees are decreasing.
    pub fn eval(&self, z: &Laurent, floor: i64) -> Result<Laurent> {
        Ok(self.eval_counting(z, floor)?.0)
    }

    /// As [`eval`](Self::eval), also returning the number of terms summed.
    pub fn eval_counting(&self, z: &Laurent, floor: i64) -> Result<(Laurent, usize)> {
        let Some(z_hi) = z.hi() else {
            return Ok((z.truncate(floor), 0));
        };
        let q = self.field.q() as i64;
        let mut acc = Laurent::zero(&self.field);
        let mut z_pow = z.clone();
        let mut prev_top = i64::MIN;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                z_pow = z_pow.pow_q_power(1);
            }
            let c_hi = c.hi().expect("coefficients are nonzero");
            let top = c_hi + z_hi * q.pow(i as u32);
            if i > 0 && top < floor && top < prev_top {
                return Ok((acc.truncate(floor), i));
            }
            prev_top = top;
            acc = &acc + &(c * &z_pow);
        }
        Err(Error::Capacity(format!(
            "l(z) for deg_U z = {z_hi} down to U^{floor} needs more than {} terms",
            self.coeffs.len()
        )))
    }
}

/// One-shot evaluation of `l(z)`; builds the coefficient table from `w`.
pub fn ell_eval(z: &Laurent, w: &Laurent, tables: &CarlitzTables, floor: i64) -> Result<Laurent> {
    LatticeExp::new(w, tables)?.eval(z, floor)
}

/// Reference evaluation of `l(z)` from the truncated product
/// `z prod_{A monic, deg A <= dmax} (1 - (z/A)^(q-1))`. Cross-check only.
pub fn ell_product_ref(z: &Laurent, dmax: u32, floor: i64) -> Result<Laurent> {
    let field = z.field().clone();
    let Some(h) = z.hi() else {
        return Ok(z.truncate(floor));
    };
    let q = field.q();
    let qm1 = (q - 1) as i64;
    let predicted_top = h + (0..=dmax as i64)
        .map(|d| qm1 * (q as i64).pow(d as u32) * (h - 2 * d).max(0))
        .sum::<i64>();
    let relprec = (predicted_top - floor).max(GUARD_DIGITS) + GUARD_DIGITS;
    let z = z.truncate(h - relprec);
    let one = Laurent::one(&field);
    let mut acc = z.clone();
    for d in 0..=dmax {
        for a in monic_polys(&field, d) {
            let a_inv = Laurent::embed_poly(&a).inv_to(-2 * d as i64 - relprec)?;
            let ratio = (&z * &a_inv).pow(qm1)?;
            acc = &acc * &(&one - &ratio);
        }
    }
    Ok(acc.truncate(floor))
}
