//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Also hosts the constructions built on them: cyclotomic polynomials, the
//! minimal polynomial of `2cos(pi/k)`, the stability index, the even-exponent
//! substitution and recurrence kernels.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decimal::Decimals;
use crate::error::{Error, Result};

/// Integer polynomial stored in ascending exponent order; `coeffs[j]` is the
/// coefficient of `x^j`. The zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Decimals", from = "Decimals")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl From<IntPolynomial> for Decimals {
    fn from(p: IntPolynomial) -> Self {
        Decimals(p.coeffs)
    }
}

impl From<Decimals> for IntPolynomial {
    fn from(d: Decimals) -> Self {
        IntPolynomial::new(d.0)
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^degree`
    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Euclidean division by a monic divisor; exact over the integers.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        if !divisor.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((IntPolynomial::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[top]);
            if c.is_zero() {
                continue;
            }
            let shift = top - dd;
            for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                if !dc.is_zero() {
                    rem[shift + j] -= &c * dc;
                }
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        Ok((IntPolynomial::new(quot), IntPolynomial::new(rem)))
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        self.div_rem_monic(divisor).map(|(_, r)| r)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `p(x^2)` for this polynomial `p`.
    pub fn substitute_square(&self) -> IntPolynomial {
        let mut coeffs = vec![BigInt::zero(); (2 * self.coeffs.len()).saturating_sub(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * j] = c.clone();
        }
        IntPolynomial::new(coeffs)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    /// Descending-order rendering, e.g. `x^2 - x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "x")
    }
}

/// Renders ascending coefficients as a polynomial in `var`, highest power first.
pub(crate) fn write_poly(f: &mut impl fmt::Write, coeffs: &[BigInt], var: &str) -> fmt::Result {
    if coeffs.iter().all(Zero::is_zero) {
        return write!(f, "0");
    }
    let mut first = true;
    for (j, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        let show_coeff = j == 0 || !abs.is_one();
        if show_coeff {
            write!(f, "{abs}")?;
        }
        match j {
            0 => {}
            1 => write!(f, "{var}")?,
            _ => write!(f, "{var}^{j}")?,
        }
    }
    Ok(())
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn x_pow_minus_one(n: u64) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n as usize] = BigInt::one();
    IntPolynomial::new(coeffs)
}

/// The n-th cyclotomic polynomial, by dividing `x^n - 1` by `Phi_m` for every
/// proper divisor `m` of `n`.
pub fn cyclotomic(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::InvalidCyclotomicIndex(n));
    }
    // Divisors of a divisor of n are divisors of n, so ascending order lets
    // every Phi_d reuse the ones already built.
    let divs = divisors(n);
    let mut built: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for &d in &divs {
        let mut poly = x_pow_minus_one(d);
        for (&e, phi_e) in built.iter().filter(|(&e, _)| d % e == 0) {
            debug_assert!(e < d);
            let (q, r) = poly.div_rem_monic(phi_e)?;
            assert!(r.is_zero(), "Phi_{e} does not divide x^{d} - 1");
            poly = q;
        }
        built.insert(d, poly);
    }
    Ok(built.remove(&n).expect("n divides itself"))
}

/// Binomial coefficients of `(z^2 + 1)^j` placed at even exponents, shifted
/// up by `shift`: the expansion of `z^shift * (z^2 + 1)^j`.
fn shifted_square_plus_one_power(j: usize, shift: usize) -> Vec<(usize, BigInt)> {
    let mut binom = BigInt::one();
    let mut out = Vec::with_capacity(j + 1);
    for i in 0..=j {
        out.push((shift + 2 * i, binom.clone()));
        binom = binom * BigInt::from(j - i) / BigInt::from(i + 1);
    }
    out
}

/// Monic minimal polynomial of `2cos(pi/k)` over the rationals.
///
/// Writes `Phi_{2k}(z) = z^m p(z + 1/z)` with `m = phi(2k)/2` and peels off
/// `p`'s coefficients from the top: `z^m (z + 1/z)^j = z^(m-j) (z^2 + 1)^j`
/// has leading term `z^(m+j)`.
pub fn minimal_poly_2cos(k: i64) -> Result<IntPolynomial> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let cyc = cyclotomic(2 * k as u64)?;
    let full_degree = cyc.degree().expect("cyclotomic polynomials are nonzero");
    assert!(full_degree % 2 == 0, "Phi_2k has even degree for k >= 2");
    let m = full_degree / 2;

    let mut residual: Vec<BigInt> = cyc.coeffs().to_vec();
    let mut p = vec![BigInt::zero(); m + 1];
    for j in (0..=m).rev() {
        let c = std::mem::take(&mut residual[m + j]);
        if c.is_zero() {
            continue;
        }
        for (exp, binom) in shifted_square_plus_one_power(j, m - j) {
            if exp != m + j {
                residual[exp] -= &c * binom;
            }
        }
        p[j] = c;
    }
    assert!(
        residual.iter().all(Zero::is_zero),
        "Phi_{} is not of the form z^m p(z + 1/z)",
        2 * k
    );
    Ok(IntPolynomial::new(p))
}

fn gcd_usize(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

/// Gcd of the exponents carrying nonzero coefficients, with `gcd(a, 0) = a`.
/// A nonzero constant yields 0.
pub fn gamma(t: &IntPolynomial) -> Result<usize> {
    if t.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(t.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(0, |g, (j, _)| gcd_usize(g, j)))
}

/// Returns `q` with `q(x^2) = p(x)`.
pub fn even_substitute(p: &IntPolynomial) -> Result<IntPolynomial> {
    if let Some((j, _)) = p
        .coeffs()
        .iter()
        .enumerate()
        .find(|(j, c)| j % 2 == 1 && !c.is_zero())
    {
        return Err(Error::NotEven(j));
    }
    Ok(IntPolynomial::new(p.coeffs().iter().step_by(2).cloned().collect()))
}

/// Coefficients `{-a_(d-1), ..., -a_0}` of the order-`d` recurrence attached to
/// a monic polynomial; `entries[i-1]` multiplies the term `i` steps back.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Kernel {
    #[serde(with = "crate::decimal::vec")]
    entries: Vec<BigInt>,
}

impl Kernel {
    /// Any nonempty coefficient list is a valid kernel.
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ConstantPolynomial);
        }
        Ok(Kernel { entries })
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The monic polynomial this kernel comes from.
    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        let d = self.entries.len();
        let mut coeffs: Vec<BigInt> = (0..d).map(|j| -&self.entries[d - 1 - j]).collect();
        coeffs.push(BigInt::one());
        IntPolynomial::new(coeffs)
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn kernel_of(p: &IntPolynomial) -> Result<Kernel> {
    if !p.is_monic() {
        return Err(if p.is_zero() { Error::ZeroPolynomial } else { Error::NotMonic });
    }
    let d = p.degree().expect("monic implies nonzero");
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    Kernel::new((1..=d).map(|i| -p.coeff(d - i)).collect())
}
