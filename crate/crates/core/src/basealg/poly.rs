//! Dense univariate polynomials over `F_q` and enumeration of monics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

/// An element of `F_q[T]`, coefficients stored low-to-high.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds from integer coefficients (low-to-high), reduced into `F_p`.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: FieldElem) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `c * T^n`.
    pub fn monomial(field: &Field, c: FieldElem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// The variable `T`.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(self.field.one())
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(self.field.inv(l).expect("leading coefficient is nonzero")),
        }
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^q`, computed as `self(T^q)` since `c^q = c` on `F_q`.
    pub fn pow_q(&self) -> Poly {
        let q = self.field.q() as usize;
        let mut coeffs = vec![self.field.zero(); self.coeffs.len().saturating_sub(1) * q + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * q] = c;
        }
        Poly::new(&self.field, coeffs)
    }

    /// Returns `(quotient, remainder)` with `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("polynomial division by zero".into()))?;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Horner evaluation at a field point.
    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|k| f.add(self.coeff(k), rhs.coeff(k))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|k| f.sub(self.coeff(k), rhs.coeff(k))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        Poly::new(&self.field, self.field.convolve(&self.coeffs, &rhs.coeffs, n))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{k}"),
            };
            match (c == f.one(), k) {
                (_, 0) => write!(out, "{}", f.render(c))?,
                (true, _) => write!(out, "{var}")?,
                (false, _) => write!(out, "{}*{var}", f.render(c))?,
            }
        }
        Ok(())
    }
}

/// Number of monic polynomials of degree `d`, `q^d`.
pub fn monic_count(field: &Field, d: u32) -> u64 {
    (field.q() as u64).pow(d)
}

/// Largest number of monics of a single degree a summation will enumerate.
pub const MAX_MONICS_PER_DEGREE: u64 = 1 << 24;

/// [`monic_count`], or a capacity error past [`MAX_MONICS_PER_DEGREE`].
pub fn checked_monic_count(field: &Field, d: u32) -> crate::error::Result<u64> {
    (field.q() as u64)
        .checked_pow(d)
        .filter(|&n| n <= MAX_MONICS_PER_DEGREE)
        .ok_or_else(|| {
            crate::error::Error::Capacity(format!("q^{d} monics of degree {d} exceed the enumeration limit"))
        })
}

/// The `index`-th monic polynomial of degree `d` in the lexicographic order of
/// coefficient tuples `(c_0, ..., c_{d-1})`: `c_0` is the most significant digit.
pub fn monic_poly(field: &Field, d: u32, index: u64) -> Poly {
    let q = field.q() as u64;
    let mut coeffs = vec![field.zero(); d as usize + 1];
    coeffs[d as usize] = field.one();
    let mut rest = index;
    for k in (0..d as usize).rev() {
        coeffs[k] = field.elem((rest % q) as u32);
        rest /= q;
    }
    Poly::new(field, coeffs)
}

/// Ordered stream of the `q^d` monic polynomials of degree `d`.
pub struct MonicPolys {
    field: Field,
    degree: u32,
    next: u64,
    end: u64,
}

impl MonicPolys {
    pub fn new(field: &Field, degree: u32) -> Self {
        Self::range(field, degree, 0, monic_count(field, degree))
    }

    /// The sub-stream of indices `start..end`, for partitioning by prefix.
    pub fn range(field: &Field, degree: u32, start: u64, end: u64) -> Self {
        MonicPolys {
            field: field.clone(),
            degree,
            next: start,
            end: end.min(monic_count(field, degree)),
        }
    }
}

impl Iterator for MonicPolys {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        (self.next < self.end).then(|| {
            let p = monic_poly(&self.field, self.degree, self.next);
            self.next += 1;
            p
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.end.saturating_sub(self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for MonicPolys {}

/// Shorthand for [`MonicPolys::new`].
pub fn monic_polys(field: &Field, d: u32) -> MonicPolys {
    MonicPolys::new(field, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basealg::FieldCtx;
    use std::collections::HashSet;

    fn f3() -> Field {
        FieldCtx::prime(3).unwrap()
    }

    #[test]
    fn product_and_gcd() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 1]);
        let b = Poly::from_ints(&f, &[2, 1]);
        assert_eq!(&a * &b, Poly::from_ints(&f, &[2, 0, 1]));

        let t3_t = Poly::from_ints(&f, &[0, -1, 0, 1]);
        let t2_1 = Poly::from_ints(&f, &[-1, 0, 1]);
        assert_eq!(t3_t.gcd(&t2_1), Poly::from_ints(&f, &[2, 0, 1]));
        assert!(Poly::t(&f).pow(0).is_one());
    }

    #[test]
    fn division() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 2, 0, 1, 1]);
        let b = Poly::from_ints(&f, &[2, 0, 1]);
        let (qt, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&qt * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
        assert!(a.div_rem(&Poly::zero(&f)).is_err());
    }

    #[test]
    fn pow_q_matches_pow() {
        let f = FieldCtx::new(9, Some(&[1, 0, 1])).unwrap();
        let a = Poly::new(&f, vec![f.elem(4), f.elem(7), f.one()]);
        assert_eq!(a.pow_q(), a.pow(9));
    }

    #[test]
    fn monic_enumeration() {
        let f = f3();
        let d0: Vec<_> = monic_polys(&f, 0).collect();
        assert_eq!(d0, vec![Poly::one(&f)]);
        let d1: Vec<String> = monic_polys(&f, 1).map(|p| p.to_string()).collect();
        assert_eq!(d1, ["T", "T + 1", "T + 2"]);
        let d3: Vec<_> = monic_polys(&f, 3).collect();
        assert_eq!(d3.len(), 27);
        assert!(d3.iter().all(|p| p.is_monic() && p.degree() == Some(3)));
        let distinct: HashSet<String> = d3.iter().map(|p| p.to_string()).collect();
        assert_eq!(distinct.len(), 27);
        // c_0 varies slowest
        assert_eq!(d3[1].to_string(), "T^3 + T^2");
        assert_eq!(d3[3].to_string(), "T^3 + T");
        assert_eq!(d3[9].to_string(), "T^3 + 1");
    }
}
