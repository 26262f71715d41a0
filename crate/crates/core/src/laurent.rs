//! Truncated Laurent series in `U^{-1}` over `F_q`, with `U^2 = T`.
//!
//! A value is either *exact* (a finite Laurent polynomial in `U`), or known
//! only down to a `floor` exponent: it stands for
//! `sum_{floor <= n <= hi} c_n U^n + O(U^(floor - 1))`. Even exponents carry
//! `k_inf = F_q((1/T))`; odd exponents give the ramified quadratic extension
//! `F_q((1/U))`.
//!
//! Floors propagate ultrametrically: a sum is known down to the larger of the
//! two floors and a product `a * b` down to `max(a.floor + b.hi, b.floor + a.hi)`.
//! In other words multiplication and inversion preserve the number of known
//! digits below the leading term.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::basealg::{Field, FieldElem, Poly, RatFunc};
use crate::error::{Error, Result};

/// Minimum number of known digits below the leading term required to invert.
pub const GUARD_DIGITS: i64 = 4;

/// The additive `U`-adic valuation `-(top exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// A nonzero coefficient is known; the valuation is exact.
    Exact(i64),
    /// All known coefficients vanish: the value is zero to precision.
    AtLeast(i64),
    /// The exact zero.
    Infinite,
}

impl Valuation {
    /// The valuation, or its lower bound; `i64::MAX` for exact zero.
    pub fn bound(self) -> i64 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
            Valuation::Infinite => i64::MAX,
        }
    }

    /// As an optional integer, `None` standing for infinity.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Infinite => None,
            v => Some(v.bound()),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Valuation::Exact(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: Field,
    /// Exponent of `coeffs[0]`.
    hi: i64,
    /// Coefficients of `U^hi, U^(hi-1), ...`; `coeffs[0]` is nonzero when present.
    coeffs: Vec<FieldElem>,
    /// Lowest known exponent; `None` marks an exact value.
    floor: Option<i64>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.max(y)),
    }
}

impl Laurent {
    /// Builds from coefficients of `U^hi, U^(hi-1), ...`, normalizing leading
    /// zeros. With a finite floor, coefficients below it are dropped and
    /// missing ones above it are taken as zero.
    pub fn from_coeffs(field: &Field, hi: i64, mut coeffs: Vec<FieldElem>, floor: Option<i64>) -> Self {
        if let Some(f) = floor {
            let len = (hi - f + 1).max(0) as usize;
            coeffs.resize(len, field.zero());
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        let mut hi = hi - lead as i64;
        match floor {
            None => {
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
                if coeffs.is_empty() {
                    hi = 0;
                }
            }
            Some(f) => {
                if coeffs.is_empty() {
                    hi = f - 1;
                }
            }
        }
        Laurent {
            field: field.clone(),
            hi,
            coeffs,
            floor,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_coeffs(field, 0, Vec::new(), None)
    }

    pub fn one(field: &Field) -> Self {
        Self::monomial(field, field.one(), 0)
    }

    /// The exact monomial `c * U^n`.
    pub fn monomial(field: &Field, c: FieldElem, n: i64) -> Self {
        Self::from_coeffs(field, n, vec![c], None)
    }

    /// The generator `U`.
    pub fn u(field: &Field) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    /// `O(U^(floor - 1))`: nothing known except that all coefficients from
    /// `floor` upward vanish.
    pub fn zero_to_precision(field: &Field, floor: i64) -> Self {
        Self::from_coeffs(field, floor - 1, Vec::new(), Some(floor))
    }

    /// Exact image of a polynomial under `T -> U^2`.
    pub fn embed_poly(p: &Poly) -> Self {
        let field = p.field();
        let Some(deg) = p.degree() else {
            return Self::zero(field);
        };
        let mut coeffs = vec![field.zero(); 2 * deg + 1];
        for (k, &c) in p.coeffs().iter().enumerate() {
            coeffs[2 * (deg - k)] = c;
        }
        Self::from_coeffs(field, 2 * deg as i64, coeffs, None)
    }

    /// Image of a polynomial known only down to `floor` (avoids materializing
    /// the low coefficients of very large polynomials).
    pub fn embed_poly_truncated(p: &Poly, floor: i64) -> Self {
        let field = p.field();
        let Some(deg) = p.degree() else {
            return Self::zero_to_precision(field, floor);
        };
        let hi = 2 * deg as i64;
        if floor > hi {
            return Self::zero_to_precision(field, floor);
        }
        let len = (hi - floor + 1) as usize;
        let mut coeffs = vec![field.zero(); len];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let e = hi - k as i64;
            if e >= 0 && e % 2 == 0 {
                *c = p.coeff((e / 2) as usize);
            }
        }
        Self::from_coeffs(field, hi, coeffs, Some(floor))
    }

    /// `num * inv(den)`, known down to `floor`.
    pub fn embed_ratfunc(r: &RatFunc, floor: i64) -> Result<Self> {
        let field = r.field();
        if r.is_zero() {
            return Ok(Self::zero(field));
        }
        let num = Self::embed_poly(r.num());
        if r.den().is_one() {
            return Ok(num.truncate(floor));
        }
        let den = Self::embed_poly(r.den());
        let hi = num.hi - den.hi;
        if hi < floor {
            return Ok(Self::zero_to_precision(field, floor));
        }
        let relprec = (hi - floor).max(GUARD_DIGITS);
        let den_inv = den.truncate(den.hi - relprec).inv()?;
        Ok((&num * &den_inv).truncate(floor))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.floor.is_none() && self.coeffs.is_empty()
    }

    /// True when every known coefficient vanishes (including the exact zero).
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest known exponent; `None` for exact values.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    /// Exponent of the leading known nonzero coefficient.
    pub fn hi(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.hi)
    }

    /// Top of the known range: `hi` if nonzero, else `floor - 1`.
    fn top(&self) -> i64 {
        self.hi
    }

    /// Lowest stored exponent.
    fn lo(&self) -> i64 {
        self.hi - self.coeffs.len() as i64 + 1
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `U^n`, or `None` if it lies below the floor.
    pub fn coeff(&self, n: i64) -> Option<FieldElem> {
        if self.floor.is_some_and(|f| n < f) {
            return None;
        }
        Some(self.get(n))
    }

    fn get(&self, n: i64) -> FieldElem {
        if n > self.hi || n < self.lo() {
            self.field.zero()
        } else {
            self.coeffs[(self.hi - n) as usize]
        }
    }

    /// Nonzero coefficients as `(exponent, coefficient)`, highest first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.hi - k as i64, c))
    }

    pub fn valuation(&self) -> Valuation {
        match (self.coeffs.is_empty(), self.floor) {
            (false, _) => Valuation::Exact(-self.hi),
            (true, Some(f)) => Valuation::AtLeast(-f + 1),
            (true, None) => Valuation::Infinite,
        }
    }

    /// Known digits from the leading term down to the floor, inclusive;
    /// `None` for exact values, `Some(0)` when zero to precision.
    pub fn significant_digits(&self) -> Option<i64> {
        let f = self.floor?;
        Some(if self.coeffs.is_empty() { 0 } else { self.hi - f + 1 })
    }

    /// True when every nonzero coefficient sits at an exponent of the given parity.
    pub fn exponents_have_parity(&self, odd: bool) -> bool {
        self.terms().all(|(n, _)| (n.rem_euclid(2) == 1) == odd)
    }

    /// Raises the floor to `new_floor`; never lowers it.
    pub fn truncate(&self, new_floor: i64) -> Self {
        if self.floor.is_some_and(|f| f >= new_floor) {
            return self.clone();
        }
        if self.coeffs.is_empty() {
            return Self::zero_to_precision(&self.field, new_floor);
        }
        let keep = (self.hi - new_floor + 1).max(0) as usize;
        let mut coeffs: Vec<FieldElem> = self.coeffs.iter().copied().take(keep).collect();
        coeffs.resize(keep, self.field.zero());
        Self::from_coeffs(&self.field, self.hi, coeffs, Some(new_floor))
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        let f = &self.field;
        Self::from_coeffs(f, self.hi, self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), self.floor)
    }

    /// Multiplication by `U^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            field: self.field.clone(),
            hi: if self.is_exact_zero() { 0 } else { self.hi + k },
            coeffs: self.coeffs.clone(),
            floor: self.floor.map(|f| f + k),
        }
    }

    /// Multiplicative inverse to the precision carried by `self`.
    pub fn inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::precision(
                "inversion of an element that is zero to precision",
                self.valuation(),
            ));
        }
        let f = &self.field;
        let lead_inv = f.inv(self.coeffs[0])?;
        let floor = match self.floor {
            None if self.coeffs.len() == 1 => {
                return Ok(Self::monomial(f, lead_inv, -self.hi));
            }
            None => {
                return Err(Error::precision(
                    "exact element has an infinite inverse expansion; truncate it or use inv_to",
                    self.valuation(),
                ))
            }
            Some(fl) => fl,
        };
        let known = self.hi - floor;
        if known < GUARD_DIGITS {
            return Err(Error::precision(
                format!("only {known} digits known below the leading term, need {GUARD_DIGITS}"),
                self.valuation(),
            ));
        }
        let len = self.coeffs.len();
        let a: Vec<FieldElem> = self.coeffs.iter().map(|&c| f.mul(c, lead_inv)).collect();
        let mut b = vec![f.zero(); len];
        b[0] = f.one();
        for n in 1..len {
            let mut acc = f.zero();
            for k in 1..=n {
                if !a[k].is_zero() && !b[n - k].is_zero() {
                    acc = f.add(acc, f.mul(a[k], b[n - k]));
                }
            }
            b[n] = f.neg(acc);
        }
        let coeffs = b.into_iter().map(|c| f.mul(c, lead_inv)).collect();
        Ok(Self::from_coeffs(f, -self.hi, coeffs, Some(floor - 2 * self.hi)))
    }

    /// Inverse known down to `floor` (works for exact inputs too).
    pub fn inv_to(&self, floor: i64) -> Result<Self> {
        if self.coeffs.is_empty() {
            return self.inv();
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            return self.inv();
        }
        let wanted = floor + 2 * self.hi;
        let src_floor = wanted.min(self.hi - GUARD_DIGITS);
        Ok(self.truncate(src_floor).inv()?.truncate(floor))
    }

    /// Integer powers by binary powering; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `self^(q^i)`, computed coefficientwise as `U -> U^(q^i)` because the
    /// `q`-power Frobenius fixes `F_q`. Unknown content `O(U^(floor-1))` maps
    /// to `O(U^((floor-1) q^i))`.
    pub fn pow_q_power(&self, i: u32) -> Self {
        let f = &self.field;
        let m = (f.q() as i64).pow(i);
        if m == 1 || self.is_exact_zero() {
            return self.clone();
        }
        let floor = self.floor.map(|fl| (fl - 1) * m + 1);
        if self.coeffs.is_empty() {
            return Self::zero_to_precision(f, floor.expect("finite floor"));
        }
        let hi = self.hi * m;
        let len = match floor {
            Some(fl) => (hi - fl + 1) as usize,
            None => (self.coeffs.len() - 1) * m as usize + 1,
        };
        let mut coeffs = vec![f.zero(); len];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * m as usize] = c;
        }
        Self::from_coeffs(f, hi, coeffs, floor)
    }

    /// Exact equality of everything known to both operands.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self - other).is_zero_to_precision()
    }

    fn binary_add(&self, rhs: &Laurent, negate_rhs: bool) -> Laurent {
        let f = &self.field;
        if rhs.is_exact_zero() {
            return self.clone();
        }
        if self.is_exact_zero() {
            return if negate_rhs { -rhs } else { rhs.clone() };
        }
        let floor = max_floor(self.floor, rhs.floor);
        let top = self.top().max(rhs.top());
        let bottom = floor.unwrap_or_else(|| self.lo().min(rhs.lo()));
        if top < bottom {
            return Self::zero_to_precision(f, floor.expect("exact operands are nonempty"));
        }
        let len = (top - bottom + 1) as usize;
        let mut coeffs = vec![f.zero(); len];
        for (n, c) in self.terms() {
            if n >= bottom {
                coeffs[(top - n) as usize] = c;
            }
        }
        for (n, c) in rhs.terms() {
            if n >= bottom {
                let slot = &mut coeffs[(top - n) as usize];
                *slot = if negate_rhs { f.sub(*slot, c) } else { f.add(*slot, c) };
            }
        }
        Self::from_coeffs(f, top, coeffs, floor)
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        self.binary_add(rhs, false)
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self.binary_add(rhs, true)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        let f = &self.field;
        Laurent {
            field: f.clone(),
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            floor: self.floor,
        }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let f = &self.field;
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Laurent::zero(f);
        }
        let floor = match (self.floor, rhs.floor) {
            (None, None) => None,
            (Some(a), None) => Some(a + rhs.top()),
            (None, Some(b)) => Some(b + self.top()),
            (Some(a), Some(b)) => Some((a + rhs.top()).max(b + self.top())),
        };
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Laurent::zero_to_precision(f, floor.expect("zero to precision has a floor"));
        }
        let hi = self.hi + rhs.hi;
        let bottom = floor.unwrap_or(self.lo() + rhs.lo());
        if hi < bottom {
            return Laurent::zero_to_precision(f, bottom);
        }
        let len = (hi - bottom + 1) as usize;
        let coeffs = f.convolve(&self.coeffs, &rhs.coeffs, len);
        Laurent::from_coeffs(f, hi, coeffs, floor)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent { (&self).$m(&rhs) }
        }
        impl $tr<&Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &Laurent) -> Laurent { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl std::iter::Sum for Laurent {
    fn sum<I: Iterator<Item = Laurent>>(mut iter: I) -> Laurent {
        let first = iter.next().expect("sum of an empty Laurent iterator has no field");
        iter.fold(first, |acc, x| &acc + &x)
    }
}

/// Renders as `c_hi*U^hi + ... + c_lo*U^lo + O(U^(floor-1))`, skipping zero
/// coefficients.
impl fmt::Display for Laurent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(n, c)| format!("{}*U^{}", self.field.render(c), n))
            .collect();
        if let Some(f) = self.floor {
            parts.push(format!("O(U^({}))", f - 1));
        }
        if parts.is_empty() {
            return write!(out, "0");
        }
        write!(out, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basealg::FieldCtx;

    fn f3() -> Field {
        FieldCtx::prime(3).unwrap()
    }

    fn lp(f: &Field, hi: i64, c: &[i64], floor: Option<i64>) -> Laurent {
        Laurent::from_coeffs(f, hi, c.iter().map(|&x| f.from_int(x)).collect(), floor)
    }

    #[test]
    fn ring_examples() {
        let f = f3();
        let u2 = Laurent::monomial(&f, f.one(), 2);
        let um2 = Laurent::monomial(&f, f.one(), -2).truncate(-40);
        let p = &u2 * &um2;
        assert_eq!(p.hi(), Some(0));
        assert_eq!(p.floor(), Some(-38));
        assert!((&p - &Laurent::one(&f)).is_zero_to_precision());

        let a = lp(&f, 0, &[1, 1, 2, 0, 1], Some(-10));
        assert!((&a + &(-&a)).is_zero_to_precision());

        let x = lp(&f, 0, &[1, 1], None);
        let y = lp(&f, 0, &[1, -1], None);
        assert_eq!(&x * &y, lp(&f, 0, &[1, 0, 2], None));
    }

    #[test]
    fn floor_rules() {
        let f = f3();
        let a = lp(&f, 3, &[1, 2, 0, 1, 1, 1], Some(-2));
        let b = lp(&f, 1, &[2, 1, 1, 1, 1], Some(-5));
        assert_eq!((&a + &b).floor(), Some(-2));
        assert_eq!((&a * &b).floor(), Some((-2i64 + 1).max(-5 + 3)));
    }

    #[test]
    fn inversion() {
        let f = f3();
        let x = lp(&f, 0, &[1, -1], None).truncate(-30);
        let inv = x.inv().unwrap();
        assert!(inv.terms().all(|(_, c)| c == f.one()));
        assert_eq!(inv.terms().count(), 31);
        assert!((&(&x * &inv) - &Laurent::one(&f)).is_zero_to_precision());

        let u3 = Laurent::monomial(&f, f.one(), 3);
        assert_eq!(u3.inv().unwrap(), Laurent::monomial(&f, f.one(), -3));

        let short = lp(&f, 0, &[1, 1, 1], Some(-2));
        assert!(matches!(short.inv(), Err(Error::Precision { .. })));
        assert!(Laurent::zero_to_precision(&f, -5).inv().is_err());
        assert!(x.inv_to(-20).is_ok());
    }

    #[test]
    fn inverse_matches_exact_rational() {
        let f = f3();
        let t3_t = Poly::from_ints(&f, &[0, -1, 0, 1]);
        let floor = -60;
        let inv = Laurent::embed_poly(&t3_t).inv_to(floor).unwrap();
        let oracle = Laurent::embed_ratfunc(&RatFunc::new(Poly::one(&f), t3_t).unwrap(), floor).unwrap();
        assert_eq!(inv.floor(), Some(floor));
        assert_eq!(inv, oracle);
        // 1/(T^3 - T) = T^-3 (1 + T^-2 + T^-4 + ...)
        assert!(inv.terms().all(|(n, c)| c == f.one() && n <= -6 && n.rem_euclid(4) == 2));
        assert_eq!(inv.terms().count(), 14);
    }

    #[test]
    fn powers() {
        let f = f3();
        let u = Laurent::u(&f);
        assert_eq!(u.pow(-2).unwrap(), Laurent::monomial(&f, f.one(), -2));
        let a = lp(&f, 0, &[1, 1], None);
        assert_eq!(a.pow(1).unwrap(), a);
        assert_eq!(a.pow(2).unwrap(), lp(&f, 0, &[1, 2, 1], None));
        let t = a.truncate(-30);
        assert!(t.pow(-3).unwrap().agrees_with(&t.pow(3).unwrap().inv().unwrap()));
        assert!(t.pow_q_power(2).agrees_with(&t.pow(9).unwrap()));
    }

    #[test]
    fn embeddings() {
        let f = f3();
        let t3_t = Poly::from_ints(&f, &[0, -1, 0, 1]);
        assert_eq!(Laurent::embed_poly(&t3_t), lp(&f, 6, &[1, 0, 0, 0, 2], None));
        assert_eq!(Laurent::embed_poly(&Poly::one(&f)), Laurent::one(&f));
        let r = RatFunc::new(Poly::one(&f), Poly::t(&f)).unwrap();
        let e = Laurent::embed_ratfunc(&r, -40).unwrap();
        assert_eq!(e.terms().collect::<Vec<_>>(), vec![(-2, f.one())]);
        assert!(e.exponents_have_parity(false));
        assert_eq!(
            Laurent::embed_poly_truncated(&t3_t, 3),
            Laurent::embed_poly(&t3_t).truncate(3)
        );
    }

    #[test]
    fn valuation_and_truncate() {
        let f = f3();
        let x = &Laurent::monomial(&f, f.one(), -3) + &Laurent::monomial(&f, f.one(), -7);
        assert_eq!(x.valuation(), Valuation::Exact(3));
        let z = Laurent::zero_to_precision(&f, -40);
        assert_eq!(z.valuation(), Valuation::AtLeast(41));
        let y = lp(&f, 2, &[1, 2, 0, 1, 1, 2, 1], None);
        assert_eq!(y.truncate(-1).truncate(-1), y.truncate(-1));
        assert_eq!(y.truncate(-1).truncate(-3), y.truncate(-1));
        assert_eq!(y.truncate(0).to_string(), "1*U^2 + 2*U^1 + O(U^(-1))");
    }
}
