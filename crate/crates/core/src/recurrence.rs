//! Exact linear recurrences, ratio-limit (Kepler limit) analysis and search
//! for initial segments that contain prescribed values.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Kernel;

/// Significant decimal digits kept when dividing consecutive terms.
pub const RATIO_DIGITS: u32 = 40;

/// A kernel together with its initial segment (seed) of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRecurrence {
    kernel: Kernel,
    #[serde(with = "crate::decimal::vec")]
    seed: Vec<BigInt>,
}

impl LinearRecurrence {
    pub fn new(kernel: Kernel, seed: Vec<BigInt>) -> Result<Self> {
        if seed.len() != kernel.len() {
            return Err(Error::SeedLength {
                seed: seed.len(),
                kernel: kernel.len(),
            });
        }
        Ok(LinearRecurrence { kernel, seed })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn seed(&self) -> &[BigInt] {
        &self.seed
    }

    /// First `count` terms: the seed, then `s_n = sum_i kernel[i-1] s_{n-i}`.
    pub fn generate(&self, count: usize) -> Vec<BigInt> {
        let d = self.kernel.len();
        let mut out: Vec<BigInt> = self.seed.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len();
            let next = self
                .kernel
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .fold(BigInt::zero(), |acc, (i, c)| acc + c * &out[n - 1 - i]);
            out.push(next);
        }
        debug_assert!(count < d || out[..d] == self.seed[..]);
        out
    }
}

pub fn generate(r: &LinearRecurrence, count: usize) -> Vec<BigInt> {
    r.generate(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Convergent,
    TwoSubsequence,
    DegenerateZeros,
    Unresolved,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Convergent => "convergent",
            Classification::TwoSubsequence => "two_subsequence",
            Classification::DegenerateZeros => "degenerate_zeros",
            Classification::Unresolved => "unresolved",
        })
    }
}

/// `(n, ln|r_limit - r_n|)` points for one ratio sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    /// `all`, `even` or `odd` index ratios.
    pub label: String,
    pub points: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeplerAnalysis {
    pub classification: Classification,
    pub limits: Vec<f64>,
    /// The same limits rendered from the scaled integer ratios.
    pub limits_decimal: Vec<String>,
    /// Least-squares slope of the log-error series; the steepest (most
    /// negative) one when two subsequences are fitted. Negative infinity when
    /// the ratios are exactly constant.
    pub slope: f64,
    pub terms_used: usize,
    pub series: Vec<ErrorSeries>,
}

/// `s_{n+1}/s_n` scaled by `10^RATIO_DIGITS`, or `None` where `s_n = 0`.
fn scaled_ratios(seq: &[BigInt]) -> Vec<Option<BigInt>> {
    let scale = BigInt::from(10u32).pow(RATIO_DIGITS);
    seq.windows(2)
        .map(|w| {
            if w[0].is_zero() {
                None
            } else {
                let num = &w[1] * &scale;
                let (q, r) = num.div_rem(&w[0]);
                // round half away from zero
                if r.abs() * 2 >= w[0].abs() {
                    let away = if num.is_negative() == w[0].is_negative() { 1 } else { -1 };
                    Some(q + away)
                } else {
                    Some(q)
                }
            }
        })
        .collect()
}

fn scaled_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN) / 10f64.powi(RATIO_DIGITS as i32)
}

fn scaled_to_decimal(x: &BigInt) -> String {
    let digits = x.abs().to_string();
    let width = RATIO_DIGITS as usize + 1;
    let padded = format!("{digits:0>width$}");
    let (int, frac) = padded.split_at(padded.len() - RATIO_DIGITS as usize);
    format!("{}{int}.{frac}", if x.is_negative() { "-" } else { "" })
}

fn least_squares_slope(points: &[(usize, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

struct SeriesFit {
    limit: BigInt,
    slope: f64,
    series: ErrorSeries,
}

/// Convergence test on one indexed ratio sequence: the last `window` ratios lie
/// within `tol` of the final one, and the log-errors before that window trend
/// downward.
fn fit_ratio_sequence(label: &str, ratios: &[(usize, Option<BigInt>)], tol: f64, window: usize) -> Option<SeriesFit> {
    if ratios.len() < window + 2 {
        return None;
    }
    let tail = &ratios[ratios.len() - window..];
    let limit = tail.last()?.1.clone()?;
    let scaled_tol = tol * 10f64.powi(RATIO_DIGITS as i32);
    for (_, r) in tail {
        let r = r.as_ref()?;
        let err = (r - &limit).abs().to_f64().unwrap_or(f64::INFINITY);
        if !(err < scaled_tol) {
            return None;
        }
    }
    // Only ratios before the tail window enter the fit; the tail is the
    // convergence evidence itself.
    let tail_start = tail[0].0;
    let mut points = Vec::new();
    let mut exact = false;
    for (n, r) in &ratios[..ratios.len() - 1] {
        let Some(r) = r else { continue };
        let err = (r - &limit).abs();
        if err.is_zero() {
            exact = true;
        } else {
            points.push((*n, scaled_to_f64(&err).ln()));
        }
    }
    let fit: Vec<(usize, f64)> = points.iter().copied().filter(|p| p.0 < tail_start).collect();
    let slope = if fit.len() >= 2 {
        least_squares_slope(&fit)
    } else if exact {
        f64::NEG_INFINITY
    } else {
        return None;
    };
    if !(slope < 0.0) {
        return None;
    }
    Some(SeriesFit {
        limit,
        slope,
        series: ErrorSeries {
            label: label.to_string(),
            points,
        },
    })
}

/// True when every term of one index-parity class in the second half of the
/// sequence is zero.
fn parity_class_vanishes(seq: &[BigInt], window: usize) -> bool {
    let start = seq.len() - (seq.len() / 2).max(2 * window).min(seq.len());
    (0..2).any(|parity| {
        seq.iter()
            .enumerate()
            .skip(start)
            .filter(|(i, _)| i % 2 == parity)
            .all(|(_, t)| t.is_zero())
    })
}

/// Classifies the ratio behaviour of an exact integer sequence.
pub fn kepler_analyze(seq: &[BigInt], tol: f64, window: usize) -> Result<KeplerAnalysis> {
    if window < 2 {
        return Err(Error::WindowTooSmall);
    }
    if seq.len() < 2 * window {
        return Err(Error::SequenceTooShort {
            len: seq.len(),
            window,
        });
    }
    let unresolved = |series: Vec<ErrorSeries>| KeplerAnalysis {
        classification: Classification::Unresolved,
        limits: Vec::new(),
        limits_decimal: Vec::new(),
        slope: f64::NAN,
        terms_used: seq.len(),
        series,
    };

    if parity_class_vanishes(seq, window) {
        return Ok(KeplerAnalysis {
            classification: Classification::DegenerateZeros,
            limits: Vec::new(),
            limits_decimal: Vec::new(),
            slope: f64::NAN,
            terms_used: seq.len(),
            series: Vec::new(),
        });
    }

    let ratios: Vec<(usize, Option<BigInt>)> = scaled_ratios(seq).into_iter().enumerate().collect();
    // Leading zeros of the seed leave undefined ratios at the start.
    let first_defined = ratios.iter().position(|(_, r)| r.is_some()).unwrap_or(ratios.len());
    let defined = &ratios[first_defined..];

    if let Some(fit) = fit_ratio_sequence("all", defined, tol, window) {
        return Ok(KeplerAnalysis {
            classification: Classification::Convergent,
            limits: vec![scaled_to_f64(&fit.limit)],
            limits_decimal: vec![scaled_to_decimal(&fit.limit)],
            slope: fit.slope,
            terms_used: seq.len(),
            series: vec![fit.series],
        });
    }

    let split = |parity: usize| -> Vec<(usize, Option<BigInt>)> {
        defined.iter().filter(|(n, _)| n % 2 == parity).cloned().collect()
    };
    let even = fit_ratio_sequence("even", &split(0), tol, window);
    let odd = fit_ratio_sequence("odd", &split(1), tol, window);
    match (even, odd) {
        (Some(e), Some(o)) => {
            let gap = scaled_to_f64(&(&e.limit - &o.limit).abs());
            if gap > tol {
                Ok(KeplerAnalysis {
                    classification: Classification::TwoSubsequence,
                    limits: vec![scaled_to_f64(&e.limit), scaled_to_f64(&o.limit)],
                    limits_decimal: vec![scaled_to_decimal(&e.limit), scaled_to_decimal(&o.limit)],
                    slope: e.slope.min(o.slope),
                    terms_used: seq.len(),
                    series: vec![e.series, o.series],
                })
            } else {
                Ok(unresolved(vec![e.series, o.series]))
            }
        }
        (e, o) => Ok(unresolved(e.into_iter().chain(o).map(|f| f.series).collect())),
    }
}

/// Whether targets are matched by absolute value or exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matching {
    #[default]
    Absolute,
    Signed,
}

/// True iff every target `v` equals some term (or its absolute value).
pub fn contains_values(seq: &[BigInt], targets: &BTreeSet<BigInt>, matching: Matching) -> bool {
    if targets.is_empty() {
        return true;
    }
    let present: BTreeSet<BigInt> = match matching {
        Matching::Absolute => seq.iter().map(Signed::abs).collect(),
        Matching::Signed => seq.iter().cloned().collect(),
    };
    targets.iter().all(|t| present.contains(t))
}

/// Candidate seeds with max-absolute-entry exactly `m`, indexed in
/// lexicographic order (most negative first).
struct Shell {
    m: i64,
    len: usize,
}

impl Shell {
    fn count(&self) -> Option<u64> {
        (2 * self.m as u64 + 1).checked_pow(self.len as u32)
    }

    fn decode(&self, mut index: u64) -> Vec<i64> {
        let base = 2 * self.m as u64 + 1;
        let mut out = vec![0i64; self.len];
        for slot in out.iter_mut().rev() {
            *slot = (index % base) as i64 - self.m;
            index /= base;
        }
        out
    }
}

/// Runs the recurrence with `i128` arithmetic, falling back to `BigInt` on overflow.
fn run_candidate(kernel: &[BigInt], kernel_small: &Option<Vec<i128>>, seed: &[i64], count: usize) -> Vec<BigInt> {
    if let Some(ks) = kernel_small {
        let mut out: Vec<i128> = seed.iter().map(|&s| s as i128).collect();
        let mut ok = true;
        'outer: while out.len() < count {
            let n = out.len();
            let mut acc: i128 = 0;
            for (i, c) in ks.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                match c.checked_mul(out[n - 1 - i]).and_then(|p| acc.checked_add(p)) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            out.push(acc);
        }
        if ok {
            out.truncate(count);
            return out.into_iter().map(BigInt::from).collect();
        }
    }
    let kernel = Kernel::new(kernel.to_vec()).expect("nonempty kernel");
    let seed = seed.iter().map(|&s| BigInt::from(s)).collect();
    LinearRecurrence::new(kernel, seed).expect("seed length checked").generate(count)
}

/// First seed, in order of increasing max-absolute entry and then
/// lexicographically, whose `run_length`-term sequence contains every target.
pub fn seed_search(
    kernel: &Kernel,
    targets: &BTreeSet<BigInt>,
    bound: i64,
    run_length: usize,
    matching: Matching,
) -> Result<Option<Vec<BigInt>>> {
    if bound < 1 {
        return Err(Error::InvalidSearch(format!("bound must be at least 1, got {bound}")));
    }
    if run_length < kernel.len() {
        return Err(Error::InvalidSearch(format!(
            "run length {run_length} is shorter than the kernel ({})",
            kernel.len()
        )));
    }
    let kernel_small: Option<Vec<i128>> = kernel.entries().iter().map(|c| c.to_i128()).collect();
    for m in 0..=bound {
        let shell = Shell { m, len: kernel.len() };
        let count = shell.count().ok_or_else(|| {
            Error::InvalidSearch(format!("search space with bound {m} and length {} is too large", kernel.len()))
        })?;
        let hit = (0..count).into_par_iter().find_first(|&index| {
            let seed = shell.decode(index);
            if seed.iter().all(|e| e.abs() != m) {
                return false;
            }
            let seq = run_candidate(kernel.entries(), &kernel_small, &seed, run_length);
            contains_values(&seq, targets, matching)
        });
        if let Some(index) = hit {
            return Ok(Some(shell.decode(index).into_iter().map(BigInt::from).collect()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rec(kernel: &[i64], seed: &[i64]) -> LinearRecurrence {
        LinearRecurrence::new(Kernel::from_i64(kernel).unwrap(), big(seed)).unwrap()
    }

    fn targets(v: &[i64]) -> BTreeSet<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn generation_examples() {
        assert_eq!(rec(&[1, 1], &[0, 1]).generate(8), big(&[0, 1, 1, 2, 3, 5, 8, 13]));
        assert_eq!(rec(&[0, 3], &[0, 1]).generate(7), big(&[0, 1, 0, 3, 0, 9, 0]));
        assert_eq!(rec(&[1], &[5]).generate(4), big(&[5, 5, 5, 5]));
        assert!(matches!(
            LinearRecurrence::new(Kernel::from_i64(&[1, 1]).unwrap(), big(&[1])),
            Err(Error::SeedLength { seed: 1, kernel: 2 })
        ));
    }

    #[test]
    fn scaled_ratio_rounding() {
        let r = scaled_ratios(&big(&[3, 2, -2, 0, 5]));
        let scale = BigInt::from(10u32).pow(RATIO_DIGITS);
        // 2/3 rounds the last digit up
        let two_thirds = (&scale * 2 + 1) / 3;
        assert_eq!(r[0], Some(two_thirds));
        assert_eq!(r[1], Some(-scale.clone()));
        assert_eq!(r[2], Some(BigInt::zero()));
        assert_eq!(r[3], None);
        assert_eq!(scaled_to_decimal(&(-&scale * 3 / 2)), format!("-1.5{}", "0".repeat(39)));
    }

    #[test]
    fn fibonacci_converges_to_golden_ratio() {
        let seq = rec(&[1, 1], &[0, 1]).generate(60);
        let a = kepler_analyze(&seq, 1e-10, 10).unwrap();
        assert_eq!(a.classification, Classification::Convergent);
        assert!((a.limits[0] - 1.618_033_988_749_895).abs() < 1e-10);
        assert!(a.slope < 0.0);
        assert!(a.limits_decimal[0].starts_with("1.6180339887498948482"));
    }

    #[test]
    fn alternating_zeros_are_degenerate() {
        let seq = rec(&[0, 3], &[0, 1]).generate(60);
        let a = kepler_analyze(&seq, 1e-10, 10).unwrap();
        assert_eq!(a.classification, Classification::DegenerateZeros);
        assert!(a.limits.is_empty());
    }

    #[test]
    fn two_subsequences() {
        let seq = rec(&[0, 4, 0, -2], &[0, 0, 1, 2]).generate(400);
        let a = kepler_analyze(&seq, 1e-10, 10).unwrap();
        assert_eq!(a.classification, Classification::TwoSubsequence);
        assert_eq!(a.limits.len(), 2);
        assert!((a.limits[0] - a.limits[1]).abs() > 1e-10);
        // The product of the two limits is the dominant root squared, 2 + sqrt 2 squared... of y = x^2.
        let dominant_sq = 2.0 + 2f64.sqrt();
        assert!((a.limits[0] * a.limits[1] - dominant_sq).abs() < 1e-8);
    }

    #[test]
    fn constant_sequence_is_convergent() {
        let seq = rec(&[1], &[5]).generate(30);
        let a = kepler_analyze(&seq, 1e-10, 5).unwrap();
        assert_eq!(a.classification, Classification::Convergent);
        assert_eq!(a.limits, vec![1.0]);
        assert_eq!(a.slope, f64::NEG_INFINITY);
    }

    #[test]
    fn oscillation_is_unresolved() {
        // Roots +-i: period-4 sequence with nonzero terms in both parities.
        let seq = rec(&[1, -1, 1], &[1, 2, 3]).generate(80);
        let a = kepler_analyze(&seq, 1e-10, 5).unwrap();
        assert_eq!(a.classification, Classification::Unresolved);
    }

    #[test]
    fn analysis_input_checks() {
        let seq = big(&[1, 1, 2]);
        assert_eq!(
            kepler_analyze(&seq, 1e-10, 2),
            Err(Error::SequenceTooShort { len: 3, window: 2 })
        );
        assert_eq!(kepler_analyze(&seq, 1e-10, 1), Err(Error::WindowTooSmall));
    }

    #[test]
    fn containment() {
        let fib = big(&[0, 1, 1, 2, 3, 5, 8, 13, 21, 34]);
        assert!(contains_values(&fib, &targets(&[1, 2, 5, 13, 34]), Matching::Absolute));
        assert!(contains_values(&fib, &BTreeSet::new(), Matching::Absolute));
        assert!(!contains_values(&big(&[0, 1, 0, 3, 0, 9]), &targets(&[2]), Matching::Absolute));
        assert!(contains_values(&big(&[-3]), &targets(&[3]), Matching::Absolute));
        assert!(!contains_values(&big(&[-3]), &targets(&[3]), Matching::Signed));
    }

    #[test]
    fn search_examples() {
        let k = Kernel::from_i64(&[1, 1]).unwrap();
        let seed = seed_search(&k, &targets(&[1, 2, 5, 13, 34]), 3, 40, Matching::Absolute)
            .unwrap()
            .unwrap();
        let found = LinearRecurrence::new(k.clone(), seed).unwrap().generate(40);
        assert!(contains_values(&found, &targets(&[1, 2, 5, 13, 34]), Matching::Absolute));
        assert!(contains_values(&rec(&[1, 1], &[0, 1]).generate(40), &targets(&[1, 2, 5, 13, 34]), Matching::Absolute));

        let k1 = Kernel::from_i64(&[1]).unwrap();
        assert_eq!(seed_search(&k1, &targets(&[7]), 9, 5, Matching::Absolute).unwrap(), Some(big(&[-7])));
        assert_eq!(seed_search(&k1, &targets(&[7]), 9, 5, Matching::Signed).unwrap(), Some(big(&[7])));
        assert_eq!(seed_search(&k1, &targets(&[7]), 6, 5, Matching::Absolute).unwrap(), None);

        let k3 = Kernel::from_i64(&[0, 3]).unwrap();
        let t = targets(&[1, 3, 9, 27]);
        let seed = seed_search(&k3, &t, 3, 30, Matching::Absolute).unwrap().unwrap();
        assert!(contains_values(&LinearRecurrence::new(k3.clone(), seed).unwrap().generate(30), &t, Matching::Absolute));
        assert!(contains_values(&rec(&[0, 3], &[0, 1]).generate(30), &t, Matching::Absolute));
    }

    #[test]
    fn search_parameter_checks() {
        let k = Kernel::from_i64(&[1, 1]).unwrap();
        assert!(seed_search(&k, &BTreeSet::new(), 0, 10, Matching::Absolute).is_err());
        assert!(seed_search(&k, &BTreeSet::new(), 1, 1, Matching::Absolute).is_err());
        // Empty targets: the all-zero seed is first.
        assert_eq!(seed_search(&k, &BTreeSet::new(), 1, 5, Matching::Absolute).unwrap(), Some(big(&[0, 0])));
    }
}
