//! The coefficient field `F_q`, `q = p^e` with `p` an odd prime.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! encoding are the coefficients of the element as a polynomial in the
//! generator `x` of `F_p[x] / (modulus)`. Prime fields use plain residues.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest extension field for which addition and log tables are built.
pub const MAX_EXTENSION_ORDER: u32 = 1024;

/// Largest supported prime characteristic.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

/// An element of `F_q`, meaningful only together with its [`FieldCtx`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// The integer encoding in `[0, q)`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

struct ExtTables {
    add: Vec<u16>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u16>,
}

pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    ext: Option<ExtTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, e))
}

impl FieldCtx {
    /// Builds `F_q`; an extension degree `e > 1` needs a monic irreducible
    /// modulus of degree `e` over `F_p`, given low-to-high.
    pub fn new(q: u64, modulus: Option<&[u32]>) -> Result<Field> {
        if q % 2 == 0 {
            return Err(Error::InvalidParameter("q must be odd".into()));
        }
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
        match (e, modulus) {
            (1, None) => Self::prime(p as u32),
            (1, Some(m)) if m.len() == 2 => Self::prime(p as u32),
            (_, Some(m)) => {
                if m.len() != e as usize + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "modulus must have degree {e} for q = {q}"
                    )));
                }
                Self::extension(p as u32, m)
            }
            (_, None) => Err(Error::InvalidParameter(format!(
                "q = {p}^{e} needs an irreducible modulus of degree {e}"
            ))),
        }
    }

    pub fn prime(p: u32) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidParameter("q must be odd".into()));
        }
        if p > MAX_PRIME || !is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("{p} is not a supported odd prime")));
        }
        Ok(Arc::new(FieldCtx {
            p,
            e: 1,
            q: p,
            modulus: None,
            ext: None,
        }))
    }

    /// `F_p[x] / (modulus)`; `modulus` is low-to-high and must be monic.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidParameter("q must be odd".into()));
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        let modulus: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::Domain("modulus must be monic of degree >= 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        if e == 1 {
            return Self::prime(p);
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_EXTENSION_ORDER as u64)
            .ok_or_else(|| {
                Error::Capacity(format!("extension fields limited to q <= {MAX_EXTENSION_ORDER}"))
            })? as u32;
        if !fp::is_irreducible(p, &modulus) {
            return Err(Error::Domain(format!(
                "modulus {:?} is not irreducible over F_{p}",
                modulus
            )));
        }
        let ext = ExtTables::build(p, e, q, &modulus)?;
        Ok(Arc::new(FieldCtx {
            p,
            e,
            q,
            modulus: Some(modulus),
            ext: Some(ext),
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Element with encoding `index`; panics if `index >= q`.
    pub fn elem(&self, index: u32) -> FieldElem {
        assert!(index < self.q, "field index {index} out of range for q = {}", self.q);
        FieldElem(index)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// All `q` elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.ext {
            None => {
                let s = a.0 as u64 + b.0 as u64;
                let p = self.p as u64;
                FieldElem(if s >= p { s - p } else { s } as u32)
            }
            Some(t) => FieldElem(t.add[(a.0 * self.q + b.0) as usize] as u32),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match &self.ext {
            None => FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 }),
            Some(t) => FieldElem(t.neg[a.0 as usize] as u32),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.ext {
            None => FieldElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElem(0)
                } else {
                    let k = (t.log[a.0 as usize] as u32 + t.log[b.0 as usize] as u32) % (self.q - 1);
                    FieldElem(t.exp[k as usize] as u32)
                }
            }
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::Domain("inversion of zero in F_q".into()));
        }
        Ok(match &self.ext {
            None => self.pow(a, (self.p - 2) as u64),
            Some(t) => {
                let k = (self.q - 1 - t.log[a.0 as usize] as u32) % (self.q - 1);
                FieldElem(t.exp[k as usize] as u32)
            }
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        match self.ext {
            None => a,
            Some(_) => self.pow(a, self.p as u64),
        }
    }

    /// `out[t] = sum_{i + j = t} a[i] * b[j]` for `t < out_len`.
    pub(crate) fn convolve(&self, a: &[FieldElem], b: &[FieldElem], out_len: usize) -> Vec<FieldElem> {
        let mut out = vec![FieldElem(0); out_len];
        if a.is_empty() || b.is_empty() || out_len == 0 {
            return out;
        }
        match &self.ext {
            None if self.p < (1 << 16) => {
                let mut acc = vec![0u64; out_len];
                for (i, &x) in a.iter().enumerate().take(out_len) {
                    if x.0 == 0 {
                        continue;
                    }
                    let x = x.0 as u64;
                    let row = &mut acc[i..];
                    for (slot, &y) in row.iter_mut().zip(b) {
                        *slot += x * y.0 as u64;
                    }
                }
                let p = self.p as u64;
                for (o, v) in out.iter_mut().zip(acc) {
                    *o = FieldElem((v % p) as u32);
                }
            }
            _ => {
                for (i, &x) in a.iter().enumerate().take(out_len) {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate().take(out_len - i) {
                        out[i + j] = self.add(out[i + j], self.mul(x, y));
                    }
                }
            }
        }
        out
    }

    /// Human-readable rendering: residues for prime fields, polynomials in
    /// `x` for extensions.
    pub fn render(&self, a: FieldElem) -> String {
        if self.e == 1 {
            return a.0.to_string();
        }
        let digits = fp::digits(self.p, self.e, a.0);
        let mut parts = Vec::new();
        for (k, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            parts.push(match (d, k) {
                (_, 0) => d.to_string(),
                (1, _) => var,
                _ => format!("{d}{var}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join("+"))
        }
    }
}

impl ExtTables {
    fn build(p: u32, e: u32, q: u32, modulus: &[u32]) -> Result<Self> {
        let encode = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let mut add = vec![0u16; (q * q) as usize];
        let mut neg = vec![0u16; q as usize];
        for a in 0..q {
            let da = fp::digits(p, e, a);
            let dn: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = encode(&dn) as u16;
            for b in 0..q {
                let db = fp::digits(p, e, b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s) as u16;
            }
        }
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = fp::mul(p, &fp::digits(p, e, a), &fp::digits(p, e, b));
            let mut r = fp::rem(p, &prod, modulus);
            r.resize(e as usize, 0);
            encode(&r)
        };
        let order = q - 1;
        let generator = (2..q)
            .chain(std::iter::once(1))
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = slow_mul(x, g);
                    k += 1;
                }
                k == order
            })
            .ok_or_else(|| Error::Domain("no primitive element found".into()))?;
        let mut exp = vec![0u16; order as usize];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x as u16;
            log[x as usize] = k as u16;
            x = slow_mul(x, generator);
        }
        Ok(ExtTables { add, neg, exp, log })
    }
}

/// Dense polynomial helpers over the prime field, used for building
/// extension tables and testing irreducibility. Coefficients low-to-high.
mod fp {
    pub(super) fn digits(p: u32, e: u32, mut n: u32) -> Vec<u32> {
        (0..e)
            .map(|_| {
                let d = n % p;
                n /= p;
                d
            })
            .collect()
    }

    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(p: u32, a: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut n = p - 2;
        while n > 0 {
            if n & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            n >>= 1;
        }
        r as u32
    }

    pub(super) fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub(super) fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(p, m[dm]) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
            for (k, &mk) in m.iter().enumerate() {
                let idx = shift + k;
                r[idx] = ((r[idx] as u64 + (p as u64 - c) * mk as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|k| {
                    let x = a.get(k).copied().unwrap_or(0);
                    let y = b.get(k).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(p, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(p: u32, base: &[u32], mut n: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(p, base, m);
        while n > 0 {
            if n & 1 == 1 {
                acc = rem(p, &mul(p, &acc, &b), m);
            }
            b = rem(p, &mul(p, &b, &b), m);
            n >>= 1;
        }
        acc
    }

    /// `gcd(x^{p^i} - x, f) = 1` for `1 <= i <= e/2` and `x^{p^e} = x mod f`.
    pub(super) fn is_irreducible(p: u32, f: &[u32]) -> bool {
        let e = f.len() - 1;
        let x = vec![0u32, 1];
        let mut xp = x.clone();
        for i in 1..=e {
            xp = pow_mod(p, &xp, p as u64, f);
            if i <= e / 2 {
                let g = gcd(p, &sub(p, &xp, &x), f);
                if g.len() != 1 {
                    return false;
                }
            }
        }
        sub(p, &xp, &rem(p, &x, f)).is_empty()
    }
}
