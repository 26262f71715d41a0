//! Double-precision checks of Euler's even zeta values and Ramanujan's
//! formula for `zeta(2m+1)`, with exact Bernoulli numbers.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Largest index accepted by [`bernoulli`].
pub const BERNOULLI_MAX: u32 = 30;

/// Reduced fraction with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational64 {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational64 {
    pub const ZERO: Rational64 = Rational64 { num: 0, den: 1 };
    pub const ONE: Rational64 = Rational64 { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::reduce(num as i128, den as i128)
    }

    fn reduce(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        let (n, d) = (sign * num / g, sign * den / g);
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Ok(Rational64 { num, den }),
            _ => Err(Error::Capacity(format!("{n}/{d} does not fit in 64 bits"))),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Rational64 { num: n, den: 1 }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn add(self, o: Self) -> Result<Self> {
        let (a, b, c, d) = (self.num as i128, self.den as i128, o.num as i128, o.den as i128);
        Self::reduce(a * d + c * b, b * d)
    }

    pub fn mul(self, o: Self) -> Result<Self> {
        Self::reduce(self.num as i128 * o.num as i128, self.den as i128 * o.den as i128)
    }

    pub fn div_int(self, k: i64) -> Result<Self> {
        Self::reduce(self.num as i128, self.den as i128 * k as i128)
    }

    pub fn neg(self) -> Self {
        Rational64 {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational64 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let k = k.min(n - k) as i64;
    (0..k).fold(1i64, |acc, i| acc * (n as i64 - i) / (i + 1))
}

/// `B_0..=B_nmax` with `B_1 = -1/2`, from `sum_{k<=n} C(n+1,k) B_k = 0`.
pub fn bernoulli(nmax: u32) -> Result<Vec<Rational64>> {
    if nmax > BERNOULLI_MAX {
        return Err(Error::Capacity(format!(
            "Bernoulli numbers are limited to index {BERNOULLI_MAX}"
        )));
    }
    let mut b = vec![Rational64::ONE];
    for n in 1..=nmax {
        let mut acc = Rational64::ZERO;
        for (k, bk) in b.iter().enumerate() {
            acc = acc.add(bk.mul(Rational64::from_int(binomial(n + 1, k as u32)))?)?;
        }
        b.push(acc.neg().div_int(n as i64 + 1)?);
    }
    Ok(b)
}

fn bernoulli_f64(n: u32) -> f64 {
    bernoulli(n).expect("index within range")[n as usize].to_f64()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `zeta(s)` for integer `s >= 2`: a direct head with an Euler-Maclaurin tail.
pub fn zeta_real(s: u32) -> Result<f64> {
    if s < 2 {
        return Err(Error::InvalidParameter("zeta_real needs s >= 2".into()));
    }
    const HEAD: u32 = 16;
    const CORRECTIONS: u32 = 10;
    let sf = s as f64;
    let n = HEAD as f64;
    let head: f64 = (1..HEAD).rev().map(|k| (k as f64).powf(-sf)).sum();
    let mut tail = n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    let b = bernoulli(2 * CORRECTIONS)?;
    // Rising factorial s(s+1)...(s+2k-2).
    let mut rising = sf;
    for k in 1..=CORRECTIONS {
        if k > 1 {
            rising *= (sf + 2.0 * k as f64 - 3.0) * (sf + 2.0 * k as f64 - 2.0);
        }
        tail += b[2 * k as usize].to_f64() / factorial(2 * k) * rising * n.powf(-sf - 2.0 * k as f64 + 1.0);
    }
    Ok(head + tail)
}

#[derive(Clone, Debug)]
pub struct ClassicalReport {
    pub m: u32,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub notes: Vec<String>,
}

fn relative(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
}

fn check_m(m: u32) -> Result<()> {
    if !(1..=7).contains(&m) {
        return Err(Error::InvalidParameter("m must lie in 1..=7".into()));
    }
    Ok(())
}

/// `zeta(2m)` against `(2 pi)^(2m) (-1)^(m+1) B_2m / (2 (2m)!)`.
pub fn verify_classical_euler(m: u32) -> Result<ClassicalReport> {
    check_m(m)?;
    let lhs = zeta_real(2 * m)?;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let rhs = (2.0 * PI).powi(2 * m as i32) * sign * bernoulli_f64(2 * m) / (2.0 * factorial(2 * m));
    Ok(ClassicalReport {
        m,
        alpha: None,
        beta: None,
        lhs,
        rhs,
        residual: relative(lhs, rhs),
        notes: vec!["sign (-1)^(m+1) used; (-1)^m would make zeta(2) negative".into()],
    })
}

/// `sum_{n>=1} n^(-2m-1) / (e^(2 x n) - 1)`, stopped once terms drop below 1e-18.
fn lambert_tail(m: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    for n in 1.. {
        let nf = n as f64;
        let term = nf.powi(-(2 * m as i32) - 1) / (2.0 * x * nf).exp_m1();
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    sum
}

/// Both sides of Ramanujan's formula for `zeta(2m+1)` with `beta = pi^2/alpha`.
pub fn verify_classical_ramanujan(m: u32, alpha: f64) -> Result<ClassicalReport> {
    check_m(m)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter("alpha must be a positive number".into()));
    }
    let beta = PI * PI / alpha;
    let mi = m as i32;
    let half_zeta = 0.5 * zeta_real(2 * m + 1)?;
    let left = alpha.powi(-mi) * (half_zeta + lambert_tail(m, alpha));
    let right = (-beta).powi(-mi) * (half_zeta + lambert_tail(m, beta));
    let lhs = left - right;
    let mut scale = left.abs().max(right.abs());
    let b = bernoulli(2 * m + 2)?;
    let mut sum = 0.0;
    for k in 0..=m + 1 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let bk = b[2 * k as usize].to_f64() * b[(2 * m + 2 - 2 * k) as usize].to_f64();
        let term = sign * bk / (factorial(2 * k) * factorial(2 * m + 2 - 2 * k))
            * alpha.powi((m + 1 - k) as i32)
            * beta.powi(k as i32);
        scale = scale.max(4f64.powi(mi) * term.abs());
        sum += term;
    }
    let rhs = 4f64.powi(mi) * sum;
    Ok(ClassicalReport {
        m,
        alpha: Some(alpha),
        beta: Some(beta),
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / scale,
        notes: vec!["residual relative to the largest summand; at even m with alpha = beta both sides vanish".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(30).unwrap();
        assert_eq!(b[0], Rational64::ONE);
        assert_eq!(b[1], Rational64::new(-1, 2).unwrap());
        assert_eq!(b[2], Rational64::new(1, 6).unwrap());
        assert_eq!(b[12], Rational64::new(-691, 2730).unwrap());
        assert_eq!(b[30], Rational64::new(8615841276005, 14322).unwrap());
        for k in 1..15 {
            assert!(b[2 * k + 1].is_zero());
        }
        assert!(bernoulli(31).is_err());
    }

    #[test]
    fn recurrence_holds_exactly() {
        let b = bernoulli(30).unwrap();
        for n in 1..=30u32 {
            let mut acc = Rational64::ZERO;
            for k in 0..=n {
                acc = acc.add(b[k as usize].mul(Rational64::from_int(binomial(n + 1, k))).unwrap()).unwrap();
            }
            assert!(acc.is_zero(), "n={n}");
        }
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_real(2).unwrap() - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta_real(4).unwrap() - PI.powi(4) / 90.0).abs() < 1e-13);
        // Direct summation with the integral tail bound as an independent check.
        let n = 200_000u32;
        let direct: f64 = (1..=n).rev().map(|k| (k as f64).powi(-3)).sum::<f64>() + 0.5 / (n as f64).powi(2);
        assert!((zeta_real(3).unwrap() - direct).abs() < 1e-12);
        assert!((zeta_real(3).unwrap() - 1.2020569031595942).abs() < 1e-12);
    }

    #[test]
    fn euler_and_ramanujan() {
        for m in 1..=5 {
            assert!(verify_classical_euler(m).unwrap().residual < 1e-11, "m={m}");
            assert!(verify_classical_ramanujan(m, PI).unwrap().residual < 1e-9, "m={m}");
        }
        assert!(verify_classical_ramanujan(1, 2.0 * PI).unwrap().residual < 1e-9);
        let m1 = verify_classical_ramanujan(1, PI).unwrap();
        let s = lambert_tail(1, PI);
        assert!((m1.lhs * PI - (zeta_real(3).unwrap() + 2.0 * s)).abs() < 1e-12);
    }
}
