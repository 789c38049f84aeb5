//! Reference tables for `k = 5..33` and the per-`k` checks that reproduce them.
//!
//! The tables live in a plain-text data file (`data/tables.txt`) so they can be
//! audited and corrected without touching code. Each record is one line:
//!
//! ```text
//! <tag> <k>: <comma-separated integers>
//! ```
//!
//! with tags `coefficients`, `p-seed`, `q-seed`, `p-kernel` and `q-kernel`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{symbolic_matrix_with, HeckeContext, SymbolicOptions};
use crate::nu::{distinct_abs_values, extract_nu, Position};
use crate::poly::{even_substitute, kernel_of, minimal_poly_2cos, Kernel};
use crate::recurrence::{contains_values, kepler_analyze, Classification, LinearRecurrence, Matching};

/// The tables shipped with the crate.
pub const BUNDLED_TABLES: &str = include_str!("../data/tables.txt");

/// Word length the coefficient lists were compiled at.
pub const COEFFICIENT_WORD_LENGTH: usize = 25;

/// Terms generated when checking that a seed's run contains the coefficient list.
pub const SEED_RUN_LENGTH: usize = 60;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixtureSet {
    pub coefficients: BTreeMap<i64, Vec<BigInt>>,
    pub p_seeds: BTreeMap<i64, Vec<BigInt>>,
    pub q_seeds: BTreeMap<i64, Vec<BigInt>>,
    pub p_kernels: BTreeMap<i64, Vec<BigInt>>,
    pub q_kernels: BTreeMap<i64, Vec<BigInt>>,
}

impl FixtureSet {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TABLES).expect("bundled tables parse")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut set = FixtureSet::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("format:") {
                continue;
            }
            let err = |message: String| Error::FixtureParse {
                line: lineno + 1,
                message,
            };
            let (head, body) = line.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
            let mut head = head.split_whitespace();
            let tag = head.next().ok_or_else(|| err("missing tag".into()))?;
            let k: i64 = head
                .next()
                .ok_or_else(|| err("missing k".into()))?
                .parse()
                .map_err(|e| err(format!("bad k: {e}")))?;
            if head.next().is_some() {
                return Err(err("trailing tokens before ':'".into()));
            }
            let values = body
                .split(',')
                .map(|v| v.trim().parse::<BigInt>().map_err(|e| err(format!("bad integer {v:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let table = match tag {
                "coefficients" => &mut set.coefficients,
                "p-seed" => &mut set.p_seeds,
                "q-seed" => &mut set.q_seeds,
                "p-kernel" => &mut set.p_kernels,
                "q-kernel" => &mut set.q_kernels,
                other => return Err(err(format!("unknown tag {other:?}"))),
            };
            if table.insert(k, values).is_some() {
                return Err(err(format!("duplicate {tag} record for k = {k}")));
            }
        }
        Ok(set)
    }

    pub fn ks(&self, table: Table) -> Vec<i64> {
        match table {
            Table::Coefficients => self.coefficients.keys().copied().collect(),
            Table::PSeeds => self.p_seeds.keys().copied().collect(),
            Table::QSeeds => self.q_seeds.keys().copied().collect(),
            Table::Kernels => self.p_kernels.keys().chain(self.q_kernels.keys()).copied().collect::<BTreeSet<_>>().into_iter().collect(),
        }
    }

    /// Whether `table` has a reference record for `k`.
    pub fn has_record(&self, table: Table, k: i64) -> bool {
        match table {
            Table::Coefficients => self.coefficients.contains_key(&k),
            Table::PSeeds => self.p_seeds.contains_key(&k),
            Table::QSeeds => self.q_seeds.contains_key(&k),
            Table::Kernels => self.p_kernels.contains_key(&k),
        }
    }

    pub fn coefficient_set(&self, k: i64) -> Option<BTreeSet<BigInt>> {
        self.coefficients.get(&k).map(|v| v.iter().cloned().collect())
    }
}

/// The four reference tables, addressable as `4.1`..`4.4` or by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    Coefficients,
    PSeeds,
    QSeeds,
    Kernels,
}

impl Table {
    pub fn id(self) -> &'static str {
        match self {
            Table::Coefficients => "4.1",
            Table::PSeeds => "4.2",
            Table::QSeeds => "4.3",
            Table::Kernels => "4.4",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Table {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "4.1" | "coefficients" => Ok(Table::Coefficients),
            "4.2" | "p-seeds" => Ok(Table::PSeeds),
            "4.3" | "q-seeds" => Ok(Table::QSeeds),
            "4.4" | "kernels" => Ok(Table::Kernels),
            _ => Err(format!("unknown table {s:?}; expected 4.1, 4.2, 4.3 or 4.4")),
        }
    }
}

/// Result of checking one `k` against one table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordCheck {
    pub k: i64,
    pub table: Table,
    pub pass: bool,
    pub detail: String,
}

fn to_big(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn p_kernel(k: i64) -> Result<Kernel> {
    kernel_of(&minimal_poly_2cos(k)?)
}

pub fn q_kernel(k: i64) -> Result<Kernel> {
    kernel_of(&even_substitute(&minimal_poly_2cos(k)?)?)
}

/// Distinct absolute coefficients of the `lambda^0` part of the `z`
/// coefficient (entry `a`) for words of length `n`.
pub fn coefficient_list(k: i64, n: usize, options: SymbolicOptions, progress: impl FnMut(usize, usize)) -> Result<Vec<BigInt>> {
    let ctx = HeckeContext::new(k)?;
    let m = symbolic_matrix_with(&ctx, n, options, progress)?;
    Ok(distinct_abs_values(&extract_nu(&m, Position::A, 0)?))
}

/// Checks one `k` of one table. Missing reference records fail with a detail
/// message rather than erroring.
pub fn check_record(
    fixtures: &FixtureSet,
    table: Table,
    k: i64,
    word_length: usize,
    options: SymbolicOptions,
) -> Result<RecordCheck> {
    let done = |pass: bool, detail: String| {
        Ok(RecordCheck {
            k,
            table,
            pass,
            detail,
        })
    };
    match table {
        Table::Kernels => {
            let Some(expected) = fixtures.p_kernels.get(&k) else {
                return done(false, "no kernel record".into());
            };
            let got = p_kernel(k)?;
            if got.entries() != expected.as_slice() {
                return done(false, format!("p-kernel {{{got}}} != {{{}}}", to_big(expected)));
            }
            if let Some(expected_q) = fixtures.q_kernels.get(&k) {
                let got_q = q_kernel(k)?;
                if got_q.entries() != expected_q.as_slice() {
                    return done(false, format!("q-kernel {{{got_q}}} != {{{}}}", to_big(expected_q)));
                }
                return done(true, format!("p-kernel {{{got}}}, q-kernel {{{got_q}}}"));
            }
            done(true, format!("p-kernel {{{got}}}"))
        }
        Table::Coefficients => {
            let Some(expected) = fixtures.coefficients.get(&k) else {
                return done(false, "no coefficient record".into());
            };
            let got = coefficient_list(k, word_length, options, |_, _| {})?;
            if &got == expected {
                done(true, format!("{} distinct values", got.len()))
            } else {
                done(false, format!("computed {} != expected {}", to_big(&got), to_big(expected)))
            }
        }
        Table::PSeeds | Table::QSeeds => {
            let (seeds, kernel) = if table == Table::PSeeds {
                (&fixtures.p_seeds, p_kernel(k))
            } else {
                (&fixtures.q_seeds, q_kernel(k))
            };
            let Some(seed) = seeds.get(&k) else {
                return done(false, "no seed record".into());
            };
            let Some(targets) = fixtures.coefficient_set(k) else {
                return done(false, "no coefficient record".into());
            };
            let rec = match LinearRecurrence::new(kernel?, seed.clone()) {
                Ok(r) => r,
                Err(e) => return done(false, e.to_string()),
            };
            let run = rec.generate(SEED_RUN_LENGTH);
            if !contains_values(&run, &targets, Matching::Absolute) {
                return done(false, format!("{SEED_RUN_LENGTH}-term run misses some coefficients"));
            }
            if table == Table::QSeeds {
                let lambda = 2.0 * (std::f64::consts::PI / k as f64).cos();
                let analysis = kepler_analyze(&rec.generate(400), 1e-10, 20)?;
                let ok = analysis.classification == Classification::Convergent
                    && (analysis.limits[0] - lambda * lambda).abs() < 1e-8;
                if !ok {
                    return done(false, format!("ratios are {}, not convergent to lambda^2", analysis.classification));
                }
                return done(true, format!("contains all coefficients; ratio limit {}", analysis.limits_decimal[0]));
            }
            done(true, "contains all coefficients".into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_cover_expected_ranges() {
        let f = FixtureSet::bundled();
        assert_eq!(f.ks(Table::Coefficients), (5..=33).collect::<Vec<_>>());
        assert_eq!(f.p_kernels.keys().copied().collect::<Vec<_>>(), (5..=33).collect::<Vec<_>>());
        let p_seeds: Vec<i64> = (5..=33).filter(|&k| k != 20).collect();
        assert_eq!(f.ks(Table::PSeeds), p_seeds);
        assert_eq!(f.ks(Table::QSeeds), vec![12, 14, 20, 22, 24, 28, 30]);
        assert_eq!(f.q_kernels.keys().copied().collect::<Vec<_>>(), vec![12, 14, 20, 22, 24, 28, 30]);
        assert_eq!(f.coefficients[&5].len(), 12);
        assert_eq!(f.coefficients[&6].len(), 13);
        assert_eq!(f.coefficients[&7].len(), 11);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = FixtureSet::parse("# ok\ncoefficients 5: 1, x\n").unwrap_err();
        assert!(matches!(e, Error::FixtureParse { line: 2, .. }));
        assert!(FixtureSet::parse("bogus 5: 1").is_err());
        assert!(FixtureSet::parse("p-seed 5 1").is_err());
        assert!(FixtureSet::parse("p-seed 5: 1\np-seed 5: 2").is_err());
    }

    #[test]
    fn short_q_seed_for_k20_is_rejected() {
        // the three-term segment as originally listed cannot seed an order-4 recurrence
        let short = vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)];
        assert_eq!(
            LinearRecurrence::new(q_kernel(20).unwrap(), short),
            Err(Error::SeedLength { seed: 3, kernel: 4 })
        );
        let f = FixtureSet::bundled();
        assert_eq!(f.q_seeds[&20].len(), 4);
    }

    #[test]
    fn table_ids() {
        assert_eq!("4.3".parse::<Table>().unwrap(), Table::QSeeds);
        assert_eq!("kernels".parse::<Table>().unwrap(), Table::Kernels);
        assert!("4.5".parse::<Table>().is_err());
    }

    #[test]
    fn record_checks() {
        let f = FixtureSet::bundled();
        let opts = SymbolicOptions::default();
        assert!(check_record(&f, Table::Kernels, 12, 25, opts).unwrap().pass);
        assert!(check_record(&f, Table::PSeeds, 5, 25, opts).unwrap().pass);
        assert!(check_record(&f, Table::QSeeds, 12, 25, opts).unwrap().pass);
        assert!(!check_record(&f, Table::PSeeds, 20, 25, opts).unwrap().pass);
        let mut broken = f.clone();
        broken.p_kernels.insert(5, vec![BigInt::from(1), BigInt::from(2)]);
        assert!(!check_record(&broken, Table::Kernels, 5, 25, opts).unwrap().pass);
    }
}
