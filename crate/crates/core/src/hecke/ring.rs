use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{minimal_poly_2cos, write_poly, IntPolynomial};

/// The ring `Z[lambda]/(p)` for `lambda = 2cos(pi/k)` and `p` its minimal polynomial.
#[derive(Clone, Debug)]
pub struct HeckeContext {
    k: i64,
    p: IntPolynomial,
    degree: usize,
    lambda_float: f64,
    /// `lambda^d = sum_j reduction[j] lambda^j`
    reduction: Vec<BigInt>,
}

impl HeckeContext {
    pub fn new(k: i64) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        let p = minimal_poly_2cos(k)?;
        let degree = p.degree().expect("minimal polynomial is nonzero");
        let reduction = p.coeffs()[..degree].iter().map(|c| -c).collect();
        let lambda_float = 2.0 * (std::f64::consts::PI / k as f64).cos();
        Ok(HeckeContext {
            k,
            p,
            degree,
            lambda_float,
            reduction,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.p
    }

    /// Degree `d` of the modulus; residues have `d` coefficients.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lambda_float(&self) -> f64 {
        self.lambda_float
    }

    pub fn zero(&self) -> ResidueElement {
        ResidueElement::zero(self.degree)
    }

    pub fn one(&self) -> ResidueElement {
        self.constant(BigInt::one())
    }

    pub fn constant(&self, c: BigInt) -> ResidueElement {
        let mut r = self.zero();
        r.coeffs[0] = c;
        r
    }

    /// `c * lambda`, reduced.
    pub fn lambda_multiple(&self, c: BigInt) -> ResidueElement {
        let mut r = self.constant(c);
        self.mul_lambda_in_place(&mut r);
        r
    }

    /// Canonical remainder of `t` modulo `p`.
    pub fn reduce(&self, t: &IntPolynomial) -> ResidueElement {
        let r = t.rem_monic(&self.p).expect("modulus is monic");
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(self.degree, BigInt::zero());
        ResidueElement { coeffs }
    }

    pub fn mul_lambda(&self, x: &ResidueElement) -> ResidueElement {
        let mut r = x.clone();
        self.mul_lambda_in_place(&mut r);
        r
    }

    pub fn mul_lambda_in_place(&self, x: &mut ResidueElement) {
        let top = x.coeffs.pop().expect("residues have degree >= 1");
        x.coeffs.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (c, r) in x.coeffs.iter_mut().zip(&self.reduction) {
                if !r.is_zero() {
                    *c += &top * r;
                }
            }
        }
    }

    pub fn mul(&self, x: &ResidueElement, y: &ResidueElement) -> ResidueElement {
        let d = self.degree;
        let mut full = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[i + j] += a * b;
                }
            }
        }
        for e in (d..full.len()).rev() {
            let top = std::mem::take(&mut full[e]);
            if top.is_zero() {
                continue;
            }
            for (j, r) in self.reduction.iter().enumerate() {
                if !r.is_zero() {
                    full[e - d + j] += &top * r;
                }
            }
        }
        full.truncate(d);
        ResidueElement { coeffs: full }
    }

    /// Value at `lambda = 2cos(pi/k)` in double precision.
    pub fn eval(&self, x: &ResidueElement) -> f64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * self.lambda_float + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// A residue class modulo `p`, stored as its `d` remainder coefficients
/// (`coeffs[j]` multiplies `lambda^j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResidueElement {
    #[serde(with = "crate::decimal::vec")]
    coeffs: Vec<BigInt>,
}

impl ResidueElement {
    pub fn zero(degree: usize) -> Self {
        ResidueElement {
            coeffs: vec![BigInt::zero(); degree],
        }
    }

    /// Wraps an already reduced coefficient vector.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        ResidueElement { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> &BigInt {
        &self.coeffs[power]
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigInt) -> ResidueElement {
        ResidueElement {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn to_polynomial(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.clone())
    }
}

impl AddAssign<&ResidueElement> for ResidueElement {
    fn add_assign(&mut self, rhs: &ResidueElement) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Add for &ResidueElement {
    type Output = ResidueElement;
    fn add(self, rhs: &ResidueElement) -> ResidueElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ResidueElement {
    type Output = ResidueElement;
    fn sub(self, rhs: &ResidueElement) -> ResidueElement {
        ResidueElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ResidueElement {
    type Output = ResidueElement;
    fn neg(self) -> ResidueElement {
        ResidueElement {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for ResidueElement {
    type Output = ResidueElement;
    fn neg(mut self) -> ResidueElement {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl fmt::Display for ResidueElement {
    /// Renders as a polynomial in `L` (lambda).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "L")
    }
}
