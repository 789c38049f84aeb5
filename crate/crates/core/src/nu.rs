//! Integer coefficient tables extracted from symbolic word matrices, the
//! closed forms for the golden-ratio case, and checks run over them.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{chi, enumerate_admissible, fibonacci, IndexSubset, Relation, SingletonRule};
use crate::error::{Error, Result};
use crate::hecke::{symbolic_matrix_with, HeckeContext, MultilinearPoly, SymbolicMatrix, SymbolicOptions};

/// Matrix entry: `a` and `b` are the numerator coefficients of `z` and `1`,
/// `c` and `d` the denominator ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    A,
    B,
    C,
    D,
}

impl Position {
    pub const ALL: [Position; 4] = [Position::A, Position::B, Position::C, Position::D];

    pub fn letter(self) -> char {
        match self {
            Position::A => 'a',
            Position::B => 'b',
            Position::C => 'c',
            Position::D => 'd',
        }
    }

    /// Relation that every nonzero coefficient's subset satisfies.
    pub fn admissibility(self) -> Relation {
        match self {
            Position::A | Position::B => Relation::OddStart,
            Position::C | Position::D => Relation::EvenStart,
        }
    }

    fn entry(self, m: &SymbolicMatrix) -> &MultilinearPoly {
        match self {
            Position::A => &m.a,
            Position::B => &m.b,
            Position::C => &m.c,
            Position::D => &m.d,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Position {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Position::A),
            "b" => Ok(Position::B),
            "c" => Ok(Position::C),
            "d" => Ok(Position::D),
            _ => Err(Error::InvalidPosition(s.to_string())),
        }
    }
}

/// The eight golden-ratio slots: `(position, lambda power)` for `j = 1..=8`.
pub fn slot(j: u8) -> Result<(Position, usize)> {
    Ok(match j {
        1 => (Position::A, 1),
        2 => (Position::A, 0),
        3 => (Position::B, 1),
        4 => (Position::B, 0),
        5 => (Position::C, 1),
        6 => (Position::C, 0),
        7 => (Position::D, 1),
        8 => (Position::D, 0),
        _ => return Err(Error::InvalidSlot(j)),
    })
}

/// Nonzero integer coefficients of one `lambda` power of one matrix entry,
/// keyed by subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuTable {
    pub k: i64,
    pub n: usize,
    pub position: Position,
    pub lambda_power: usize,
    #[serde(with = "table_entries")]
    pub values: BTreeMap<IndexSubset, BigInt>,
}

mod table_entries {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        subset: IndexSubset,
        #[serde(with = "crate::decimal")]
        value: BigInt,
    }

    pub fn serialize<S: Serializer>(
        values: &BTreeMap<IndexSubset, BigInt>,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(values.iter().map(|(s, v)| Entry {
            subset: *s,
            value: v.clone(),
        }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<BTreeMap<IndexSubset, BigInt>, D::Error> {
        let entries = Vec::<Entry>::deserialize(deserializer)?;
        Ok(entries.into_iter().map(|e| (e.subset, e.value)).collect())
    }
}

impl NuTable {
    pub fn get(&self, s: IndexSubset) -> BigInt {
        self.values.get(&s).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First stored subset that violates the position's admissibility relation.
    pub fn first_non_admissible(&self) -> Option<IndexSubset> {
        let relation = self.position.admissibility();
        self.values
            .keys()
            .copied()
            .find(|s| !relation.admits(*s, SingletonRule::NotOne))
    }

    /// Line-oriented text form: a header block, then one `subset value` line
    /// per entry in lexicographic subset order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "format: nu-table/1").unwrap();
        writeln!(out, "k: {}", self.k).unwrap();
        writeln!(out, "n: {}", self.n).unwrap();
        writeln!(out, "position: {}", self.position).unwrap();
        writeln!(out, "lambda_power: {}", self.lambda_power).unwrap();
        writeln!(out, "entries: {}", self.values.len()).unwrap();
        for (s, v) in &self.values {
            writeln!(out, "{s} {v}").unwrap();
        }
        out
    }
}

/// Extracts a coefficient table, rejecting any nonzero coefficient on a subset
/// outside the position's admissibility relation.
pub fn extract_nu(m: &SymbolicMatrix, position: Position, lambda_power: usize) -> Result<NuTable> {
    let table = extract_nu_unchecked(m, position, lambda_power)?;
    if let Some(s) = table.first_non_admissible() {
        return Err(Error::NonAdmissible {
            subset: s.to_string(),
            position: position.letter(),
        });
    }
    Ok(table)
}

/// [`extract_nu`] without the admissibility assertion.
pub fn extract_nu_unchecked(m: &SymbolicMatrix, position: Position, lambda_power: usize) -> Result<NuTable> {
    if lambda_power >= m.degree {
        return Err(Error::LambdaPowerOutOfRange {
            power: lambda_power,
            degree: m.degree,
        });
    }
    let entry = position.entry(m);
    let values = entry
        .terms()
        .filter_map(|(s, c)| {
            let v = c.coeff(lambda_power);
            (!v.is_zero()).then(|| (s, v.clone()))
        })
        .collect();
    Ok(NuTable {
        k: m.k,
        n: m.n,
        position,
        lambda_power,
        values,
    })
}

/// Selects between the corrected closed forms and the formulas exactly as
/// originally stated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaVariant {
    /// `true` uses `F_{|s|}` in slot 5; `false` uses `F_{|s|-1}`.
    pub slot5_uses_fib_s: bool,
    pub singleton_rule: SingletonRule,
}

impl FormulaVariant {
    pub const CORRECTED: FormulaVariant = FormulaVariant {
        slot5_uses_fib_s: true,
        singleton_rule: SingletonRule::NotOne,
    };
    pub const AS_PRINTED: FormulaVariant = FormulaVariant {
        slot5_uses_fib_s: false,
        singleton_rule: SingletonRule::GreaterThanOne,
    };

    fn notes(self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.slot5_uses_fib_s {
            notes.push("slot 5 uses F(|s|) instead of F(|s|-1)".to_string());
        } else {
            notes.push("slot 5 uses F(|s|-1)".to_string());
        }
        match self.singleton_rule {
            SingletonRule::NotOne => {
                notes.push("relations 2 and 4 exclude only singletons (|s| != 1); the empty subset is admitted".to_string())
            }
            SingletonRule::GreaterThanOne => notes.push("relations 2 and 4 require |s| > 1".to_string()),
        }
        notes
    }
}

impl Default for FormulaVariant {
    fn default() -> Self {
        FormulaVariant::CORRECTED
    }
}

/// Closed form for the coefficient of `m_s` in slot `j` of a length-`n`
/// golden-ratio word matrix.
pub fn closed_form_nu(j: u8, s: IndexSubset, n: usize, variant: FormulaVariant) -> Result<BigInt> {
    let (relation, sign, chi_shift, fib_shift): (u8, i64, i64, i64) = match j {
        1 => (1, 1, 0, 0),
        2 => (1, 1, 0, -1),
        3 => (1, -1, -1, 0),
        4 => (2, -1, -1, -1),
        5 => (3, 1, -1, if variant.slot5_uses_fib_s { 0 } else { -1 }),
        6 => (4, 1, -1, -1),
        7 => (3, 1, 0, 0),
        8 => (3, 1, 0, -1),
        _ => return Err(Error::InvalidSlot(j)),
    };
    if !s.is_valid_for(n) || !Relation::from_id(relation)?.admits(s, variant.singleton_rule) {
        return Ok(BigInt::zero());
    }
    let size = s.len() as i64;
    let c = chi(n as i64 - size + chi_shift);
    if c == 0 {
        return Ok(BigInt::zero());
    }
    Ok(fibonacci(size + fib_shift)? * (sign * c as i64))
}

/// Per-(slot, length) comparison counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotCount {
    pub slot: u8,
    pub n: usize,
    pub compared: usize,
    pub matched: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub slot: u8,
    pub subset: IndexSubset,
    pub n: usize,
    #[serde(with = "crate::decimal")]
    pub extracted: BigInt,
    #[serde(with = "crate::decimal")]
    pub closed_form: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub k: i64,
    pub max_length: usize,
    pub variant: FormulaVariant,
    pub notes: Vec<String>,
    pub counts: Vec<SlotCount>,
    pub mismatches: Vec<Mismatch>,
    pub verified: bool,
}

impl VerificationReport {
    pub fn total_compared(&self) -> usize {
        self.counts.iter().map(|c| c.compared).sum()
    }

    /// Distinct slots with at least one mismatch.
    pub fn mismatched_slots(&self) -> Vec<u8> {
        let mut slots: Vec<u8> = self.mismatches.iter().map(|m| m.slot).collect();
        slots.sort_unstable();
        slots.dedup();
        slots
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "format: verification-report/1").unwrap();
        writeln!(out, "k: {}", self.k).unwrap();
        writeln!(out, "max_length: {}", self.max_length).unwrap();
        for note in &self.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        writeln!(out, "compared: {}", self.total_compared()).unwrap();
        writeln!(out, "mismatches: {}", self.mismatches.len()).unwrap();
        writeln!(out, "verified: {}", self.verified).unwrap();
        for c in &self.counts {
            writeln!(out, "count slot={} n={} compared={} matched={}", c.slot, c.n, c.compared, c.matched).unwrap();
        }
        for m in &self.mismatches {
            writeln!(
                out,
                "mismatch slot={} n={} subset={} extracted={} closed_form={}",
                m.slot, m.n, m.subset, m.extracted, m.closed_form
            )
            .unwrap();
        }
        out
    }
}

/// Compares extracted golden-ratio coefficients against the closed forms for
/// every subset of every word length up to `max_length`.
pub fn verify_obs1(max_length: usize, variant: FormulaVariant, options: SymbolicOptions) -> Result<VerificationReport> {
    const K: i64 = 5;
    let ctx = HeckeContext::new(K)?;
    let per_length: Vec<(Vec<SlotCount>, Vec<Mismatch>)> = (1..=max_length)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let m = symbolic_matrix_with(&ctx, n, options, |_, _| {})?;
            let mut counts = Vec::new();
            let mut mismatches = Vec::new();
            for j in 1..=8u8 {
                let (position, power) = slot(j)?;
                let table = extract_nu_unchecked(&m, position, power)?;
                let mut matched = 0;
                let total = 1u64 << n;
                for bits in 0..total {
                    let s = IndexSubset::from_bits(bits);
                    let extracted = table.get(s);
                    let expected = closed_form_nu(j, s, n, variant)?;
                    if extracted == expected {
                        matched += 1;
                    } else {
                        mismatches.push(Mismatch {
                            slot: j,
                            subset: s,
                            n,
                            extracted,
                            closed_form: expected,
                        });
                    }
                }
                counts.push(SlotCount {
                    slot: j,
                    n,
                    compared: total as usize,
                    matched,
                });
            }
            Ok((counts, mismatches))
        })
        .collect::<Result<_>>()?;

    let mut counts = Vec::new();
    let mut mismatches = Vec::new();
    for (c, m) in per_length {
        counts.extend(c);
        mismatches.extend(m);
    }
    Ok(VerificationReport {
        k: K,
        max_length,
        variant,
        notes: variant.notes(),
        verified: mismatches.is_empty(),
        counts,
        mismatches,
    })
}

/// Sorted distinct `|value|` over a table.
pub fn distinct_abs_values(t: &NuTable) -> Vec<BigInt> {
    distinct_values(t, false)
}

/// Sorted distinct values; absolute values unless `signed`.
pub fn distinct_values(t: &NuTable, signed: bool) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = t
        .values
        .values()
        .map(|v| if signed { v.clone() } else { v.abs() })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Outcome of the equal-cardinality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Eq3Check {
    Holds,
    Fails {
        cardinality: usize,
        first: IndexSubset,
        #[serde(with = "crate::decimal")]
        first_value: BigInt,
        second: IndexSubset,
        #[serde(with = "crate::decimal")]
        second_value: BigInt,
    },
}

impl Eq3Check {
    pub fn holds(&self) -> bool {
        matches!(self, Eq3Check::Holds)
    }
}

/// Checks that subsets of equal size carry coefficients of equal absolute
/// value. Only subsets present in the table take part.
pub fn check_eq3(t: &NuTable) -> Eq3Check {
    let mut seen: BTreeMap<usize, (IndexSubset, &BigInt)> = BTreeMap::new();
    for (s, v) in &t.values {
        match seen.get(&s.len()) {
            None => {
                seen.insert(s.len(), (*s, v));
            }
            Some((first, fv)) => {
                if fv.abs() != v.abs() {
                    return Eq3Check::Fails {
                        cardinality: s.len(),
                        first: *first,
                        first_value: (*fv).clone(),
                        second: *s,
                        second_value: v.clone(),
                    };
                }
            }
        }
    }
    Eq3Check::Holds
}

/// [`check_eq3`], additionally treating every admissible subset absent from
/// the table as a zero coefficient.
pub fn check_eq3_strict(t: &NuTable) -> Result<Eq3Check> {
    let loose = check_eq3(t);
    if !loose.holds() {
        return Ok(loose);
    }
    let mut by_size: BTreeMap<usize, (IndexSubset, BigInt)> = BTreeMap::new();
    for (s, v) in &t.values {
        by_size.entry(s.len()).or_insert((*s, v.clone()));
    }
    for s in enumerate_admissible(t.n, t.position.admissibility(), SingletonRule::NotOne)? {
        if t.values.contains_key(&s) {
            continue;
        }
        if let Some((first, fv)) = by_size.get(&s.len()) {
            return Ok(Eq3Check::Fails {
                cardinality: s.len(),
                first: *first,
                first_value: fv.clone(),
                second: s,
                second_value: BigInt::zero(),
            });
        }
    }
    Ok(Eq3Check::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::symbolic_matrix;

    fn subset(ix: &[usize], n: usize) -> IndexSubset {
        IndexSubset::from_indices(ix, n).unwrap()
    }

    fn table(k: i64, n: usize, position: Position, power: usize) -> NuTable {
        let ctx = HeckeContext::new(k).unwrap();
        let m = symbolic_matrix(&ctx, n).unwrap();
        extract_nu(&m, position, power).unwrap()
    }

    #[test]
    fn extraction_examples() {
        let t = table(5, 3, Position::B, 1);
        let expected: BTreeMap<_, _> = [
            (subset(&[1, 2, 3], 3), BigInt::from(2)),
            (subset(&[1], 3), BigInt::from(-1)),
            (subset(&[3], 3), BigInt::from(-1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(t.values, expected);
        assert!(table(5, 3, Position::C, 0).is_empty());
        let t = table(5, 1, Position::A, 0);
        assert_eq!(t.values.into_iter().collect::<Vec<_>>(), vec![(IndexSubset::EMPTY, BigInt::from(1))]);
    }

    #[test]
    fn lambda_power_range() {
        let ctx = HeckeContext::new(5).unwrap();
        let m = symbolic_matrix(&ctx, 2).unwrap();
        assert_eq!(
            extract_nu(&m, Position::A, 2),
            Err(Error::LambdaPowerOutOfRange { power: 2, degree: 2 })
        );
    }

    #[test]
    fn closed_form_examples() {
        let c = FormulaVariant::CORRECTED;
        assert_eq!(closed_form_nu(3, subset(&[1], 1), 1, c).unwrap(), BigInt::from(1));
        assert_eq!(closed_form_nu(8, IndexSubset::EMPTY, 3, c).unwrap(), BigInt::from(-1));
        assert_eq!(closed_form_nu(1, subset(&[2], 2), 2, c).unwrap(), BigInt::from(0));
        assert_eq!(closed_form_nu(4, IndexSubset::EMPTY, 2, c).unwrap(), BigInt::from(-1));
        assert_eq!(
            closed_form_nu(4, IndexSubset::EMPTY, 2, FormulaVariant::AS_PRINTED).unwrap(),
            BigInt::from(0)
        );
        // Denominator z-coefficient of a three-letter word is w_2 * lambda.
        assert_eq!(closed_form_nu(5, subset(&[2], 3), 3, c).unwrap(), BigInt::from(1));
        assert_eq!(closed_form_nu(9, IndexSubset::EMPTY, 1, c), Err(Error::InvalidSlot(9)));
    }

    #[test]
    fn short_verification() {
        for max in [1, 3] {
            let report = verify_obs1(max, FormulaVariant::CORRECTED, SymbolicOptions::default()).unwrap();
            assert!(report.verified, "{}", report.to_text());
            assert!(report.mismatches.is_empty());
        }
    }

    #[test]
    fn distinct_values_small() {
        assert_eq!(distinct_abs_values(&table(5, 1, Position::A, 0)), vec![BigInt::from(1)]);
        let t = table(5, 3, Position::B, 1);
        assert_eq!(distinct_abs_values(&t), vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(distinct_values(&t, true), vec![BigInt::from(-1), BigInt::from(2)]);
    }

    #[test]
    fn eq3_examples() {
        assert!(check_eq3(&table(5, 3, Position::B, 1)).holds());
        assert!(check_eq3(&table(5, 1, Position::A, 0)).holds());
        let mut t = table(5, 3, Position::B, 1);
        t.values.insert(subset(&[3], 3), BigInt::from(4));
        assert!(!check_eq3(&t).holds());
    }

    #[test]
    fn strict_eq3_flags_absent_admissible_subsets() {
        let mut t = table(5, 3, Position::B, 1);
        assert!(check_eq3_strict(&t).unwrap().holds());
        t.values.remove(&subset(&[3], 3));
        match check_eq3_strict(&t).unwrap() {
            Eq3Check::Fails { second, second_value, .. } => {
                assert_eq!(second, subset(&[3], 3));
                assert!(second_value.is_zero());
            }
            Eq3Check::Holds => panic!("absent admissible subset not flagged"),
        }
    }

    #[test]
    fn text_format_is_sorted() {
        let text = table(5, 3, Position::B, 1).to_text();
        let lines: Vec<&str> = text.lines().skip(6).collect();
        assert_eq!(lines, vec!["{1} -1", "{1,2,3} 2", "{3} -1"]);
    }

    #[test]
    fn positions_parse() {
        assert_eq!("c".parse::<Position>().unwrap(), Position::C);
        assert!("e".parse::<Position>().is_err());
    }
}
