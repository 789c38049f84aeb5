//! Library results checked against independent implementations written here.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use hecke_core::combinatorics::{enumerate_admissible, fibonacci, subword_rel, IndexSubset, Relation, SingletonRule};
use hecke_core::poly::{cyclotomic, minimal_poly_2cos, totient, IntPolynomial, Kernel};
use hecke_core::recurrence::{contains_values, seed_search, LinearRecurrence, Matching};

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Phi_n as prod_{d | n} (x^d - 1)^{mu(n/d)}, built by exact multiplication
/// and division of power series truncated at degree totient(n).
fn cyclotomic_mobius(n: u64) -> Vec<BigInt> {
    let deg = totient(n) as usize;
    let mut series = vec![BigInt::zero(); deg + 1];
    series[0] = BigInt::one();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let d_us = d as usize;
        match mobius(n / d) {
            // times (1 - x^d), sign fixed below
            1 => {
                for i in (d_us..=deg).rev() {
                    let t = series[i - d_us].clone();
                    series[i] -= t;
                }
            }
            // divide by (1 - x^d): multiply by 1 + x^d + x^2d + ...
            -1 => {
                for i in d_us..=deg {
                    let t = series[i - d_us].clone();
                    series[i] += t;
                }
            }
            _ => {}
        }
    }
    // prod (x^d - 1)^mu = (-1)^{sum mu} prod (1 - x^d)^mu; sum of mu over divisors
    // is 0 for n > 1.
    if n == 1 {
        series.iter_mut().for_each(|c| *c = -c.clone());
    }
    series
}

#[test]
fn cyclotomic_matches_mobius_product() {
    for n in 1..=60 {
        let got = cyclotomic(n).unwrap();
        assert_eq!(got.coeffs(), cyclotomic_mobius(n).as_slice(), "n = {n}");
    }
    let phi10 = cyclotomic(10).unwrap();
    assert_eq!(phi10, IntPolynomial::from_i64(&[1, -1, 1, -1, 1]));
}

#[test]
fn cyclotomic_divides_x_n_minus_one() {
    for n in 1..=200u64 {
        let phi = cyclotomic(n).unwrap();
        assert_eq!(phi.degree(), Some(totient(n) as usize));
        let mut x_n = vec![BigInt::zero(); n as usize + 1];
        x_n[0] = BigInt::from(-1);
        x_n[n as usize] = BigInt::one();
        assert!(IntPolynomial::new(x_n).rem_monic(&phi).unwrap().is_zero(), "n = {n}");
    }
}

#[test]
fn minimal_polynomial_has_the_right_root_and_degree() {
    for k in 3..=100i64 {
        let p = minimal_poly_2cos(k).unwrap();
        assert_eq!(p.degree(), Some(totient(2 * k as u64) as usize / 2), "k = {k}");
        assert!(p.is_monic());
        let x = 2.0 * (std::f64::consts::PI / k as f64).cos();
        // relative to the size of the terms, since coefficients grow with k
        let scale: f64 = p.coeffs().iter().enumerate().map(|(j, c)| c.to_string().parse::<f64>().unwrap().abs() * x.powi(j as i32)).sum();
        assert!(p.eval_f64(x).abs() < 1e-12 * scale, "k = {k}: p(lambda) = {}", p.eval_f64(x));
    }
}

fn fib_doubling(n: u64) -> (BigInt, BigInt) {
    // returns (F_n, F_{n+1})
    if n == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_doubling(n / 2);
    let c = &a * (&b * 2 - &a);
    let d = &a * &a + &b * &b;
    if n % 2 == 0 {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

#[test]
fn fibonacci_matches_fast_doubling() {
    for n in [0u64, 1, 2, 10, 50, 93, 94, 150, 300] {
        assert_eq!(fibonacci(n as i64).unwrap(), fib_doubling(n).0, "n = {n}");
    }
    assert_eq!(
        fibonacci(300).unwrap().to_string(),
        "222232244629420445529739893461909967206666939096499764990979600"
    );
}

fn brute_admits(s: &[usize], relation: u8) -> bool {
    let start_parity = if relation <= 2 { 1 } else { 0 };
    let no_singleton = relation % 2 == 0;
    if no_singleton && s.len() == 1 {
        return false;
    }
    if let Some(&first) = s.first() {
        if first % 2 != start_parity {
            return false;
        }
    }
    s.windows(2).all(|w| (w[1] - w[0]) % 2 == 1)
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 0..=14 {
        for relation in 1..=4u8 {
            let rel = Relation::from_id(relation).unwrap();
            let listed_vec = enumerate_admissible(n, rel, SingletonRule::NotOne).unwrap();
            assert!(listed_vec.windows(2).all(|w| w[0] < w[1]), "not in lexicographic order");
            let listed: BTreeSet<IndexSubset> = listed_vec.into_iter().collect();
            let mut expected = BTreeSet::new();
            for bits in 0..(1u64 << n) {
                let s = IndexSubset::from_bits(bits);
                let ix: Vec<usize> = s.indices().collect();
                let by_rel = subword_rel(s, n, relation).unwrap();
                assert_eq!(by_rel, brute_admits(&ix, relation), "n={n} rel={relation} s={s}");
                if by_rel {
                    expected.insert(s);
                }
            }
            assert_eq!(listed, expected, "n={n} rel={relation}");
        }
    }
}

/// Seeds in the documented order: shells of increasing max-abs, each shell in
/// lexicographic order from the most negative entries.
fn serial_seed_search(kernel: &Kernel, targets: &BTreeSet<BigInt>, bound: i64, run_length: usize) -> Option<Vec<BigInt>> {
    let d = kernel.len();
    for m in 0..=bound {
        let width = (2 * m + 1) as u64;
        for index in 0..width.pow(d as u32) {
            let mut rest = index;
            let mut seed = vec![0i64; d];
            for slot in seed.iter_mut().rev() {
                *slot = (rest % width) as i64 - m;
                rest /= width;
            }
            if seed.iter().map(|v| v.abs()).max().unwrap_or(0) != m {
                continue;
            }
            let seed: Vec<BigInt> = seed.into_iter().map(BigInt::from).collect();
            let run = LinearRecurrence::new(kernel.clone(), seed.clone()).unwrap().generate(run_length);
            if contains_values(&run, targets, Matching::Absolute) {
                return Some(seed);
            }
        }
    }
    None
}

#[test]
fn seed_search_matches_serial_scan() {
    let cases: [(&[i64], &[i64]); 5] = [
        (&[1, 1], &[1, 2, 3, 5, 8]),
        (&[1, 1], &[4, 7, 11]),
        (&[2, -1], &[3, 7, 10]),
        (&[1, 2, -1], &[1, 4, 9]),
        (&[0, 1], &[2, 6]),
    ];
    for (kernel, targets) in cases {
        let kernel = Kernel::from_i64(kernel).unwrap();
        let targets: BTreeSet<BigInt> = targets.iter().map(|&t| BigInt::from(t)).collect();
        let got = seed_search(&kernel, &targets, 3, 30, Matching::Absolute).unwrap();
        assert_eq!(got, serial_seed_search(&kernel, &targets, 3, 30), "kernel {kernel}");
    }
}
