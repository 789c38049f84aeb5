use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use hecke_core::combinatorics::Word;
use hecke_core::fixtures::{check_record, FixtureSet, Table, COEFFICIENT_WORD_LENGTH};
use hecke_core::hecke::{apply_lft, symbolic_matrix_with, word_matrix, HeckeContext, SymbolicOptions, DEFAULT_MAX_TERMS};
use hecke_core::nu::{distinct_values, extract_nu, verify_obs1, FormulaVariant, Position};
use hecke_core::poly::{even_substitute, gamma, kernel_of, minimal_poly_2cos, IntPolynomial, Kernel};
use hecke_core::recurrence::{kepler_analyze, seed_search, LinearRecurrence, Matching};

const EXIT_VERIFICATION_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact Hecke-group word matrices, coefficient tables and recurrence limits")]
struct Cli {
    /// Output format. JSON is the stable machine contract.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reference tables to use instead of the bundled ones.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Ceiling on terms per symbolic matrix entry.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct KArg {
    /// Hecke group index (lambda = 2cos(pi/k)).
    #[arg(long, value_parser = clap::value_parser!(i64).range(3..))]
    k: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal polynomial of 2cos(pi/k) and its recurrence kernel.
    Minpoly(KArg),
    /// Exact matrix of a word, optionally applied to a point.
    Element {
        #[command(flatten)]
        k: KArg,
        /// Comma-separated letters, e.g. 1,-2,3.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true, value_parser = parse_i64)]
        word: Vec<i64>,
        /// Point RE,IM to apply the transformation to.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        eval: Option<Complex64>,
    },
    /// Coefficient table of one entry and one lambda power.
    Expand {
        #[command(flatten)]
        k: KArg,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "a")]
        position: Position,
        #[arg(long, default_value_t = 0)]
        power: usize,
    },
    /// Sorted distinct absolute coefficients.
    Distinct {
        #[command(flatten)]
        k: KArg,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "a")]
        position: Position,
        #[arg(long, default_value_t = 0)]
        power: usize,
        /// Keep signs instead of taking absolute values.
        #[arg(long)]
        signed: bool,
    },
    /// Exhaustive closed-form check at k = 5.
    #[command(name = "verify-obs1")]
    VerifyObs1 {
        #[arg(long)]
        max_length: usize,
        /// Use the closed forms exactly as originally printed (expected to fail).
        #[arg(long)]
        strict_paper_formulas: bool,
    },
    /// Ratio-limit analysis of a linear recurrence.
    Kepler {
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true, value_parser = parse_big)]
        kernel: Vec<BigInt>,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true, value_parser = parse_big)]
        seed: Vec<BigInt>,
        #[arg(long, default_value_t = 400)]
        terms: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        window: usize,
        /// Also print the (n, log-error) series in text mode.
        #[arg(long)]
        series: bool,
    },
    /// First small seed whose run contains every target.
    #[command(name = "seed-search")]
    SeedSearch {
        #[command(flatten)]
        k: KArg,
        /// Values to find; defaults to the reference coefficient row for k.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_big)]
        targets: Option<Vec<BigInt>>,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 60)]
        run: usize,
        /// Use the kernel of the even-substituted polynomial.
        #[arg(long)]
        even_sub: bool,
        /// Match signed values instead of absolute values.
        #[arg(long)]
        signed: bool,
    },
    /// Gcd of the exponents of the minimal polynomial.
    Gamma(KArg),
    /// Even substitution q with q(x^2) = p(x) of the minimal polynomial.
    #[command(name = "even-sub")]
    EvenSub(KArg),
    /// Check computed values against the reference tables.
    Reproduce {
        /// 4.1 (coefficients), 4.2 (seeds), 4.3 (even-substituted seeds) or 4.4 (kernels).
        #[arg(long)]
        table: Table,
        #[arg(long, value_parser = clap::value_parser!(i64).range(3..))]
        k_from: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(3..))]
        k_to: i64,
        /// Word length for table 4.1.
        #[arg(long, default_value_t = COEFFICIENT_WORD_LENGTH)]
        length: usize,
    },
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    let s = s.trim();
    s.parse().map_err(|e| format!("bad integer {s:?}: {e}"))
}

fn parse_i64(s: &str) -> Result<i64, String> {
    parse_int(s)
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    parse_int(s)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected RE,IM")?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// A command that could not run: bad input or an impossible request.
enum Failure {
    Usage(String),
}

impl From<hecke_core::Error> for Failure {
    fn from(e: hecke_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Output, Failure>;

/// What a command produced, plus whether it counts as a verification failure.
struct Output {
    text: String,
    json: Value,
    failed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> CmdResult {
        Ok(Output { text, json, failed: false })
    }
}

fn with_format(format: &str, mut v: Value) -> Value {
    v.as_object_mut().expect("object").insert("format".into(), json!(format));
    v
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn joined(v: &[BigInt]) -> String {
    strings(v).join(",")
}

fn progress_printer(label: String) -> impl FnMut(usize, usize) {
    move |i, terms| {
        eprintln!("{label}: letter {i}, {terms} terms");
    }
}

fn minpoly(k: i64) -> CmdResult {
    let p = minimal_poly_2cos(k)?;
    let kernel = kernel_of(&p)?;
    let coeffs = strings(p.coeffs());
    let text = format!(
        "k: {k}\ndegree: {}\npolynomial: {p}\ncoefficients: {}\nkernel: {kernel}\n",
        kernel.len(),
        coeffs.join(",")
    );
    let json = json!({
        "k": k,
        "degree": kernel.len(),
        "polynomial": p.to_string(),
        "coefficients": coeffs,
        "kernel": strings(kernel.entries()),
    });
    Output::ok(text, with_format("hecke-minpoly/1", json))
}

fn element(k: i64, word: Vec<i64>, eval: Option<Complex64>) -> CmdResult {
    let ctx = HeckeContext::new(k)?;
    let w = Word::new(word);
    let m = word_matrix(&ctx, &w);
    let mut text = format!("k: {k}\nword: {}\n", w.letters().iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    let mut entries = serde_json::Map::new();
    for (name, e) in [("a", &m.a), ("b", &m.b), ("c", &m.c), ("d", &m.d)] {
        writeln!(text, "{name}: {e}").unwrap();
        entries.insert(
            name.into(),
            json!({ "polynomial": e.to_string(), "coefficients": strings(e.coeffs()), "value": ctx.eval(e) }),
        );
    }
    let det_one = m.determinant(&ctx).is_one();
    writeln!(text, "determinant_is_one: {det_one}").unwrap();
    let mut json = json!({ "k": k, "word": w.letters(), "entries": entries, "determinant_is_one": det_one });
    if let Some(z) = eval {
        let image = apply_lft(&m, &ctx, z)?;
        writeln!(text, "image: {} {}", image.re, image.im).unwrap();
        json["point"] = json!({ "re": z.re, "im": z.im });
        json["image"] = json!({ "re": image.re, "im": image.im });
    }
    Output::ok(text, with_format("hecke-element/1", json))
}

fn expand(k: i64, n: usize, position: Position, power: usize, options: SymbolicOptions) -> CmdResult {
    let ctx = HeckeContext::new(k)?;
    let m = symbolic_matrix_with(&ctx, n, options, progress_printer(format!("k={k}")))?;
    let table = extract_nu(&m, position, power)?;
    let json = serde_json::to_value(&table).expect("serializable");
    Output::ok(table.to_text(), with_format("nu-table/1", json))
}

fn distinct(k: i64, n: usize, position: Position, power: usize, signed: bool, options: SymbolicOptions) -> CmdResult {
    let ctx = HeckeContext::new(k)?;
    let m = symbolic_matrix_with(&ctx, n, options, progress_printer(format!("k={k}")))?;
    let values = distinct_values(&extract_nu(&m, position, power)?, signed);
    let text = format!("{}\n", strings(&values).join(", "));
    let json = json!({
        "k": k,
        "n": n,
        "position": position.to_string(),
        "lambda_power": power,
        "signed": signed,
        "count": values.len(),
        "values": strings(&values),
    });
    Output::ok(text, with_format("hecke-distinct/1", json))
}

fn verify(max_length: usize, strict: bool, options: SymbolicOptions) -> CmdResult {
    let variant = if strict { FormulaVariant::AS_PRINTED } else { FormulaVariant::CORRECTED };
    let report = verify_obs1(max_length, variant, options)?;
    let mut text = report.to_text();
    if !report.verified {
        let slots: Vec<String> = report.mismatched_slots().iter().map(|s| format!("nu{s}")).collect();
        writeln!(text, "mismatched_slots: {}", slots.join(",")).unwrap();
    }
    let mut json = serde_json::to_value(&report).expect("serializable");
    json["mismatched_slots"] = json!(report.mismatched_slots());
    Ok(Output {
        text,
        json: with_format("verification-report/1", json),
        failed: !report.verified,
    })
}

fn kepler(kernel: Vec<BigInt>, seed: Vec<BigInt>, terms: usize, tol: f64, window: usize, series: bool) -> CmdResult {
    let rec = LinearRecurrence::new(Kernel::new(kernel)?, seed)?;
    let a = kepler_analyze(&rec.generate(terms), tol, window)?;
    let mut text = format!(
        "classification: {}\nlimits: {}\nslope: {}\nterms_used: {}\n",
        a.classification,
        a.limits_decimal.join(", "),
        a.slope,
        a.terms_used
    );
    if series {
        for s in &a.series {
            for (n, e) in &s.points {
                writeln!(text, "series {} {n} {e}", s.label).unwrap();
            }
        }
    }
    let json = serde_json::to_value(&a).expect("serializable");
    Output::ok(text, with_format("kepler-analysis/1", json))
}

#[allow(clippy::too_many_arguments)]
fn seed_search_cmd(
    fixtures: &FixtureSet,
    k: i64,
    targets: Option<Vec<BigInt>>,
    bound: i64,
    run: usize,
    even_sub: bool,
    signed: bool,
) -> CmdResult {
    let p = minimal_poly_2cos(k)?;
    let kernel = if even_sub { kernel_of(&even_substitute(&p)?)? } else { kernel_of(&p)? };
    let targets: BTreeSet<BigInt> = match targets {
        Some(t) => t.into_iter().collect(),
        None => fixtures
            .coefficient_set(k)
            .ok_or_else(|| Failure::Usage(format!("no reference coefficients for k = {k}; pass --targets")))?,
    };
    let matching = if signed { Matching::Signed } else { Matching::Absolute };
    let hit = seed_search(&kernel, &targets, bound, run, matching)?;
    let text = match &hit {
        Some(seed) => format!("kernel: {kernel}\nseed: {}\n", joined(seed)),
        None => format!("kernel: {kernel}\nseed: none\n"),
    };
    let json = json!({
        "k": k,
        "even_sub": even_sub,
        "kernel": strings(kernel.entries()),
        "targets": strings(&targets.into_iter().collect::<Vec<_>>()),
        "bound": bound,
        "run": run,
        "seed": hit.as_deref().map(strings),
    });
    Output::ok(text, with_format("hecke-seed-search/1", json))
}

fn gamma_cmd(k: i64) -> CmdResult {
    let g = gamma(&minimal_poly_2cos(k)?)?;
    Output::ok(format!("{g}\n"), with_format("hecke-gamma/1", json!({ "k": k, "gamma": g })))
}

fn even_sub(k: i64) -> CmdResult {
    let q: IntPolynomial = even_substitute(&minimal_poly_2cos(k)?)?;
    let kernel = kernel_of(&q)?;
    let text = format!("polynomial: {q}\ncoefficients: {}\nkernel: {kernel}\n", joined(q.coeffs()));
    let json = json!({
        "k": k,
        "polynomial": q.to_string(),
        "coefficients": strings(q.coeffs()),
        "kernel": strings(kernel.entries()),
    });
    Output::ok(text, with_format("hecke-even-sub/1", json))
}

fn reproduce(fixtures: &FixtureSet, table: Table, from: i64, to: i64, length: usize, options: SymbolicOptions) -> CmdResult {
    if from > to {
        return Err(Failure::Usage(format!("--k-from {from} exceeds --k-to {to}")));
    }
    let ks: Vec<i64> = (from..=to).collect();
    let results = ks
        .par_iter()
        .map(|&k| {
            if !fixtures.has_record(table, k) {
                return Ok(None);
            }
            let r = check_record(fixtures, table, k, length, options)?;
            eprintln!("table {table} k={k}: {}", if r.pass { "done" } else { "mismatch" });
            Ok(Some(r))
        })
        .collect::<Result<Vec<_>, hecke_core::Error>>()?;
    let mut text = String::new();
    let mut skipped = Vec::new();
    for (&k, r) in ks.iter().zip(&results) {
        match r {
            Some(r) => writeln!(text, "{table} k={k} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.detail).unwrap(),
            None => {
                writeln!(text, "{table} k={k} SKIP no reference record").unwrap();
                skipped.push(k);
            }
        }
    }
    let results: Vec<_> = results.into_iter().flatten().collect();
    let failed = results.iter().filter(|r| !r.pass).count();
    writeln!(text, "summary: {} passed, {failed} failed, {} skipped", results.len() - failed, skipped.len()).unwrap();
    let json = json!({
        "table": table.id(),
        "results": results,
        "passed": results.len() - failed,
        "failed": failed,
        "skipped": skipped,
    });
    Ok(Output {
        text,
        json: with_format("hecke-reproduce/1", json),
        failed: failed > 0,
    })
}

fn run(cli: Cli) -> CmdResult {
    let options = SymbolicOptions { max_terms: cli.max_terms };
    let fixtures = match &cli.fixtures {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            FixtureSet::parse(&text)?
        }
        None => FixtureSet::bundled(),
    };
    match cli.command {
        Command::Minpoly(KArg { k }) => minpoly(k),
        Command::Element { k, word, eval } => element(k.k, word, eval),
        Command::Expand { k, length, position, power } => expand(k.k, length, position, power, options),
        Command::Distinct { k, length, position, power, signed } => distinct(k.k, length, position, power, signed, options),
        Command::VerifyObs1 { max_length, strict_paper_formulas } => verify(max_length, strict_paper_formulas, options),
        Command::Kepler { kernel, seed, terms, tol, window, series } => kepler(kernel, seed, terms, tol, window, series),
        Command::SeedSearch { k, targets, bound, run, even_sub, signed } => {
            seed_search_cmd(&fixtures, k.k, targets, bound, run, even_sub, signed)
        }
        Command::Gamma(KArg { k }) => gamma_cmd(k),
        Command::EvenSub(KArg { k }) => even_sub(k),
        Command::Reproduce { table, k_from, k_to, length } => reproduce(&fixtures, table, k_from, k_to, length, options),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = match format {
                Format::Text => stdout.write_all(out.text.as_bytes()),
                Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            };
            if written.is_err() {
                return ExitCode::FAILURE;
            }
            if out.failed {
                ExitCode::from(EXIT_VERIFICATION_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
