//! Recovering point-count polynomials from counts over several prime fields.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational with positive denominator in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Self {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn integer(v: i128) -> Self {
        Self { num: v, den: 1 }
    }

    pub fn num(self) -> i128 {
        self.num
    }

    pub fn den(self) -> i128 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn recip(self) -> Self {
        Rational::new(self.den, self.num)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, o: Rational) -> Rational {
        let g = gcd(self.den, o.den);
        let l = self.den / g * o.den;
        Rational::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, o: Rational) -> Rational {
        self + (-o)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, o: Rational) -> Rational {
        let g1 = gcd(self.num, o.den).max(1);
        let g2 = gcd(o.num, self.den).max(1);
        Rational::new((self.num / g1) * (o.num / g2), (self.den / g2) * (o.den / g1))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.den == 1 {
            s.serialize_i128(self.num)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

/// How the coefficients were determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationMethod {
    /// Unique polynomial of degree below the sample count through all samples.
    Lagrange,
    /// Base-`q` digits of the count at the largest sample, confirmed at every
    /// other sample. Used when there are too few samples for `max_degree`;
    /// assumes coefficients in `0..q_max`.
    Digits,
}

/// Point-count polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountPolynomial {
    pub coefficients: Vec<Rational>,
    pub degree: usize,
    pub integral: bool,
    pub nonnegative: bool,
    pub method: InterpolationMethod,
}

impl PointCountPolynomial {
    fn from_coefficients(mut c: Vec<Rational>, method: InterpolationMethod) -> Self {
        while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self {
            degree: c.len().saturating_sub(1),
            integral: c.iter().all(|x| x.is_integer()),
            nonnegative: c.iter().all(|x| x.num() >= 0),
            coefficients: c,
            method,
        }
    }

    pub fn eval(&self, q: u64) -> Rational {
        let x = Rational::integer(q as i128);
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::ZERO, |acc, &c| acc * x + c)
    }

    /// Integer coefficients, when integral.
    pub fn integer_coefficients(&self) -> Option<Vec<i128>> {
        self.integral
            .then(|| self.coefficients.iter().map(|c| c.num()).collect())
    }
}

impl fmt::Display for PointCountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let power = match k {
                    0 => return c.to_string(),
                    1 => "q".to_string(),
                    _ => format!("q^{k}"),
                };
                if *c == Rational::ONE {
                    power
                } else {
                    format!("{c}*{power}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Lagrange interpolation through every sample, over the rationals.
pub fn lagrange(samples: &[(u64, u128)]) -> Vec<Rational> {
    let m = samples.len();
    let mut out = vec![Rational::ZERO; m.max(1)];
    for (k, &(xk, yk)) in samples.iter().enumerate() {
        // basis polynomial prod_{j != k} (x - x_j) / (x_k - x_j)
        let mut basis = vec![Rational::ONE];
        let mut denom = Rational::ONE;
        for (j, &(xj, _)) in samples.iter().enumerate() {
            if j == k {
                continue;
            }
            let mut next = vec![Rational::ZERO; basis.len() + 1];
            for (d, &c) in basis.iter().enumerate() {
                next[d + 1] = next[d + 1] + c;
                next[d] = next[d] - c * Rational::integer(xj as i128);
            }
            basis = next;
            denom = denom * Rational::integer(xk as i128 - xj as i128);
        }
        let scale = Rational::integer(yk as i128) * denom.recip();
        for (d, &c) in basis.iter().enumerate() {
            out[d] = out[d] + c * scale;
        }
    }
    out
}

fn digits(mut v: u128, base: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    while v > 0 {
        out.push(Rational::integer((v % base as u128) as i128));
        v /= base as u128;
    }
    if out.is_empty() {
        out.push(Rational::ZERO);
    }
    out
}

/// Polynomial `f` with `f(q) = counts[q]` and degree at most `max_degree`.
///
/// With at least `max_degree + 1` samples this is Lagrange interpolation. With
/// fewer, the base-`q_max` expansion of the largest sample is proposed and
/// accepted only if it reproduces every sample and has degree at most
/// `max_degree`.
pub fn point_count_polynomial(
    counts: &BTreeMap<u64, u128>,
    max_degree: usize,
) -> Result<PointCountPolynomial> {
    let samples: Vec<(u64, u128)> = counts.iter().map(|(&q, &c)| (q, c)).collect();
    if samples.is_empty() {
        return Err(Error::InsufficientSamples {
            needed: max_degree + 1,
            got: 0,
        });
    }
    if samples.len() > max_degree {
        let poly = PointCountPolynomial::from_coefficients(
            lagrange(&samples),
            InterpolationMethod::Lagrange,
        );
        if !poly.integral {
            return Err(Error::NonIntegralCoefficients);
        }
        return Ok(poly);
    }
    let &(q_max, c_max) = samples.last().unwrap();
    let poly = PointCountPolynomial::from_coefficients(digits(c_max, q_max), InterpolationMethod::Digits);
    let reproduces = samples
        .iter()
        .all(|&(q, c)| poly.eval(q) == Rational::integer(c as i128));
    if poly.degree > max_degree || !reproduces {
        return Err(Error::InsufficientSamples {
            needed: max_degree + 1,
            got: samples.len(),
        });
    }
    if poly.degree < samples.len() {
        // determined by the samples alone, so Lagrange must agree
        let check = PointCountPolynomial::from_coefficients(
            lagrange(&samples),
            InterpolationMethod::Lagrange,
        );
        if check.coefficients != poly.coefficients {
            return Err(Error::InternalInvariantViolation(
                "digit and Lagrange reconstructions disagree".into(),
            ));
        }
        return Ok(check);
    }
    Ok(poly)
}
