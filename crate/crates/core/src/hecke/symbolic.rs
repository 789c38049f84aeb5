//! Word matrices with formal letters.
//!
//! Each entry is multilinear in `w_1, ..., w_n`: a map from index subsets `s`
//! to the residue coefficient of the monomial `m_s = prod_{i in s} w_i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::HeckeMatrix;
use super::ring::{HeckeContext, ResidueElement};
use crate::combinatorics::{IndexSubset, Word, MAX_WORD_LEN};
use crate::error::{Error, Result};

/// Default ceiling on the number of terms in one symbolic entry.
pub const DEFAULT_MAX_TERMS: usize = 5_000_000;

/// Sparse multilinear polynomial with residue coefficients. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultilinearPoly {
    terms: BTreeMap<IndexSubset, ResidueElement>,
}

impl MultilinearPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: ResidueElement) -> Self {
        let mut p = Self::new();
        p.add_term(IndexSubset::EMPTY, c);
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, s: IndexSubset) -> Option<&ResidueElement> {
        self.terms.get(&s)
    }

    /// Terms in lexicographic subset order.
    pub fn terms(&self) -> impl Iterator<Item = (IndexSubset, &ResidueElement)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn add_term(&mut self, s: IndexSubset, c: ResidueElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn negate(&mut self) {
        for c in self.terms.values_mut() {
            *c = -std::mem::replace(c, ResidueElement::zero(0));
        }
    }

    /// Adds `lambda * w_index * other` to `self`.
    fn add_lambda_letter_multiple(&mut self, other: &MultilinearPoly, index: usize, ctx: &HeckeContext) {
        for (s, c) in other.terms() {
            debug_assert!(!s.contains(index));
            self.add_term(s.with(index), ctx.mul_lambda(c));
        }
    }

    /// Substitutes concrete letters for the formal variables.
    pub fn evaluate(&self, w: &Word, ctx: &HeckeContext) -> ResidueElement {
        let mut acc = ctx.zero();
        for (s, c) in self.terms() {
            acc += &c.scale(&s.monomial(w));
        }
        acc
    }
}

/// The product `T^{w_1} S ... S T^{w_n}` with formal letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicMatrix {
    pub a: MultilinearPoly,
    pub b: MultilinearPoly,
    pub c: MultilinearPoly,
    pub d: MultilinearPoly,
    pub n: usize,
    pub k: i64,
    /// Degree of the modulus; every coefficient has this many lambda powers.
    pub degree: usize,
}

impl SymbolicMatrix {
    /// Entry by position letter.
    pub fn entry(&self, position: char) -> Option<&MultilinearPoly> {
        match position {
            'a' => Some(&self.a),
            'b' => Some(&self.b),
            'c' => Some(&self.c),
            'd' => Some(&self.d),
            _ => None,
        }
    }

    pub fn max_entry_terms(&self) -> usize {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|e| e.len()).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SymbolicOptions {
    pub max_terms: usize,
}

impl Default for SymbolicOptions {
    fn default() -> Self {
        SymbolicOptions {
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

pub fn symbolic_matrix(ctx: &HeckeContext, n: usize) -> Result<SymbolicMatrix> {
    symbolic_matrix_with(ctx, n, SymbolicOptions::default(), |_, _| {})
}

/// Builds the symbolic product left to right, calling `progress(i, terms)`
/// after each letter.
pub fn symbolic_matrix_with(
    ctx: &HeckeContext,
    n: usize,
    options: SymbolicOptions,
    mut progress: impl FnMut(usize, usize),
) -> Result<SymbolicMatrix> {
    if n == 0 {
        return Err(Error::EmptySymbolicWord);
    }
    if n > MAX_WORD_LEN {
        return Err(Error::WordTooLong(n));
    }
    let mut m = SymbolicMatrix {
        a: MultilinearPoly::constant(ctx.one()),
        b: MultilinearPoly::new(),
        c: MultilinearPoly::new(),
        d: MultilinearPoly::constant(ctx.one()),
        n,
        k: ctx.k(),
        degree: ctx.degree(),
    };
    for i in 1..=n {
        if i > 1 {
            // times S: [[a, b], [c, d]] -> [[b, -a], [d, -c]]
            std::mem::swap(&mut m.a, &mut m.b);
            std::mem::swap(&mut m.c, &mut m.d);
            m.b.negate();
            m.d.negate();
        }
        // times T^{w_i}: b += w_i lambda a, d += w_i lambda c
        let SymbolicMatrix { a, b, c, d, .. } = &mut m;
        rayon::join(
            || b.add_lambda_letter_multiple(a, i, ctx),
            || d.add_lambda_letter_multiple(c, i, ctx),
        );
        for (entry, poly) in [('b', &m.b), ('d', &m.d)] {
            if poly.len() > options.max_terms {
                return Err(Error::TermLimitExceeded {
                    entry,
                    terms: poly.len(),
                    limit: options.max_terms,
                });
            }
        }
        progress(i, m.max_entry_terms());
    }
    Ok(m)
}

pub fn evaluate_symbolic(m: &SymbolicMatrix, ctx: &HeckeContext, w: &Word) -> Result<HeckeMatrix> {
    if w.len() != m.n {
        return Err(Error::LengthMismatch {
            expected: m.n,
            actual: w.len(),
        });
    }
    Ok(HeckeMatrix {
        a: m.a.evaluate(w, ctx),
        b: m.b.evaluate(w, ctx),
        c: m.c.evaluate(w, ctx),
        d: m.d.evaluate(w, ctx),
    })
}
