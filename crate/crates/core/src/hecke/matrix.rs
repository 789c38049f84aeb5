use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ring::{HeckeContext, ResidueElement};
use crate::combinatorics::Word;
use crate::error::{Error, Result};

/// `[[a, b], [c, d]]` over `Z[lambda]/(p)`, acting as `z -> (a z + b)/(c z + d)`.
///
/// Matrices are compared exactly; [`HeckeMatrix::same_transformation`] compares
/// up to sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeMatrix {
    pub a: ResidueElement,
    pub b: ResidueElement,
    pub c: ResidueElement,
    pub d: ResidueElement,
}

impl HeckeMatrix {
    pub fn identity(ctx: &HeckeContext) -> Self {
        HeckeMatrix {
            a: ctx.one(),
            b: ctx.zero(),
            c: ctx.zero(),
            d: ctx.one(),
        }
    }

    /// `S: z -> -1/z`
    pub fn s(ctx: &HeckeContext) -> Self {
        HeckeMatrix {
            a: ctx.zero(),
            b: ctx.constant(BigInt::from(-1)),
            c: ctx.one(),
            d: ctx.zero(),
        }
    }

    /// `T^m: z -> z + m lambda`
    pub fn t_power(ctx: &HeckeContext, m: i64) -> Self {
        HeckeMatrix {
            a: ctx.one(),
            b: ctx.lambda_multiple(BigInt::from(m)),
            c: ctx.zero(),
            d: ctx.one(),
        }
    }

    pub fn mul(&self, rhs: &HeckeMatrix, ctx: &HeckeContext) -> HeckeMatrix {
        let dot = |x: &ResidueElement, y: &ResidueElement, u: &ResidueElement, v: &ResidueElement| {
            &ctx.mul(x, y) + &ctx.mul(u, v)
        };
        HeckeMatrix {
            a: dot(&self.a, &rhs.a, &self.b, &rhs.c),
            b: dot(&self.a, &rhs.b, &self.b, &rhs.d),
            c: dot(&self.c, &rhs.a, &self.d, &rhs.c),
            d: dot(&self.c, &rhs.b, &self.d, &rhs.d),
        }
    }

    /// Right multiplication by `T^m`, without a general product.
    fn mul_t_power(&mut self, m: i64, ctx: &HeckeContext) {
        if m == 0 {
            return;
        }
        let m = BigInt::from(m);
        self.b += &ctx.mul_lambda(&self.a.scale(&m));
        self.d += &ctx.mul_lambda(&self.c.scale(&m));
    }

    /// Right multiplication by `S`: `[[a, b], [c, d]] -> [[b, -a], [d, -c]]`.
    fn mul_s(&mut self) {
        std::mem::swap(&mut self.a, &mut self.b);
        std::mem::swap(&mut self.c, &mut self.d);
        self.b = -std::mem::replace(&mut self.b, ResidueElement::zero(0));
        self.d = -std::mem::replace(&mut self.d, ResidueElement::zero(0));
    }

    pub fn negate(&self) -> HeckeMatrix {
        HeckeMatrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn determinant(&self, ctx: &HeckeContext) -> ResidueElement {
        &ctx.mul(&self.a, &self.d) - &ctx.mul(&self.b, &self.c)
    }

    /// Equality as linear fractional transformations (`M` or `-M`).
    pub fn same_transformation(&self, other: &HeckeMatrix) -> bool {
        self == other || *self == other.negate()
    }

    /// `(a z + b) / (c z + d)` with entries evaluated at `lambda = 2cos(pi/k)`.
    pub fn apply(&self, ctx: &HeckeContext, z: Complex64) -> Result<Complex64> {
        let num = z * ctx.eval(&self.a) + ctx.eval(&self.b);
        let den = z * ctx.eval(&self.c) + ctx.eval(&self.d);
        if den.norm() == 0.0 || !den.is_finite() {
            return Err(Error::ZeroDenominator);
        }
        Ok(num / den)
    }
}

/// `T^{w_1} S T^{w_2} S ... S T^{w_n}`; the identity for the empty word.
pub fn word_matrix(ctx: &HeckeContext, w: &Word) -> HeckeMatrix {
    let mut m = HeckeMatrix::identity(ctx);
    for (i, &letter) in w.letters().iter().enumerate() {
        if i > 0 {
            m.mul_s();
        }
        m.mul_t_power(letter, ctx);
    }
    m
}

pub fn apply_lft(m: &HeckeMatrix, ctx: &HeckeContext, z: Complex64) -> Result<Complex64> {
    m.apply(ctx, z)
}

pub fn determinant(m: &HeckeMatrix, ctx: &HeckeContext) -> ResidueElement {
    m.determinant(ctx)
}
