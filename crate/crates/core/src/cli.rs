//! Command-line front end. Every command writes JSON to stdout (DOT for
//! `hasse --format dot`); `--pretty` switches to indented JSON or a table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::blocks::BlockData;
use crate::classify::{classify, rank_profile};
use crate::error::{Error, Result};
use crate::finiteness::{are_conjugate, is_finite, witness_family};
use crate::invariants::{builtin, evaluate, is_toric_on_samples, toric_exponents, weight, Builtin, SemiInvDatum};
use crate::linalg::{format_rat, parse_rat, RatMatrix};
use crate::normal_form::{normal_form, u_normal_form};
use crate::patterns::{enumerate, Eolp};
use crate::poset::{hasse, leq, to_dot};
use crate::quiver::orbit_dimension;

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser, Debug)]
#[command(name = "nilorb", version, about = "Parabolic orbits of nilpotent matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct DatumArgs {
    /// Datum JSON file.
    #[arg(long, conflicts_with = "builtin")]
    datum: Option<PathBuf>,
    /// Built-in datum name, e.g. det_2, f_1, f_3_1, uthree_f1, g.
    #[arg(long)]
    builtin: Option<String>,
    /// Matrix size for built-in data and sampling.
    #[arg(long)]
    size: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all orbits on 2-nilpotent matrices.
    Orbits {
        #[arg(long)]
        blocks: BlockData,
        #[arg(long)]
        pretty: bool,
    },
    /// Link pattern of a 2-nilpotent matrix.
    Classify {
        #[arg(long)]
        blocks: BlockData,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Whether orbit A lies in the closure of orbit B.
    Leq {
        #[arg(long)]
        blocks: BlockData,
        /// Pattern JSON file, as in the `pattern` field of `orbits` or `classify`.
        #[arg(long)]
        a: PathBuf,
        /// Pattern JSON file.
        #[arg(long)]
        b: PathBuf,
    },
    /// Hasse diagram of the orbit poset.
    Hasse {
        #[arg(long)]
        blocks: BlockData,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        pretty: bool,
    },
    /// Generic normal form H = gNg^-1 for the given blocks.
    NormalForm {
        #[arg(long)]
        blocks: BlockData,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Normal form under the unipotent upper triangular group.
    UNormalForm {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Evaluate a semi-invariant at a matrix.
    InvariantEval {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Character weight of a semi-invariant.
    InvariantWeight {
        #[command(flatten)]
        datum: DatumArgs,
    },
    /// Test a semi-invariant for toric behaviour on sampled normal forms.
    ToricCheck {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Decide whether the parabolic has finitely many orbits on x-nilpotent matrices.
    Finiteness {
        #[arg(long)]
        blocks: BlockData,
        #[arg(long)]
        nilpotency: usize,
        /// Also print the witness member for this parameter.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        pretty: bool,
    },
    /// Decide parabolic conjugacy of two matrices, with a certificate.
    ConjugateTest {
        #[arg(long)]
        blocks: BlockData,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Run the built-in consistency checks.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Accepts `{"rows","cols","entries"}` or a bare array of rows.
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Value::Array(rows) = &v {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => parse_rat(s),
                        Value::Number(n) => parse_rat(&n.to_string()),
                        _ => Err(Error::Parse(format!("bad matrix entry {x}"))),
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        return RatMatrix::from_rows(rows);
    }
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn read_matrix(path: &Path) -> Result<RatMatrix> {
    parse_matrix(&read(path)?)
}

fn read_datum(args: &DatumArgs) -> Result<(SemiInvDatum, Option<usize>)> {
    match (&args.datum, &args.builtin) {
        (Some(path), _) => Ok((SemiInvDatum::from_json(&read(path)?)?, args.size)),
        (None, Some(name)) => {
            let n = args.size.ok_or_else(|| Error::Precondition("--builtin needs --size".into()))?;
            Ok((builtin(name.parse::<Builtin>()?, n)?, Some(n)))
        }
        (None, None) => Err(Error::Precondition("one of --datum or --builtin is required".into())),
    }
}

fn emit(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("json value serializes")
    } else {
        v.to_string()
    }
}

fn orbit_entry(e: &Eolp, blocks: &BlockData) -> Result<Value> {
    Ok(json!({
        "pattern": e,
        "label": e.label(),
        "decomposition": e.to_multiplicities().to_string(),
        "dim": orbit_dimension(&e.to_multiplicities(), blocks)?,
    }))
}

fn execute(cmd: Command) -> Result<(String, i32)> {
    let ok = |s: String| Ok((s, 0));
    match cmd {
        Command::Orbits { blocks, pretty } => {
            let list = enumerate(&blocks).iter().map(|e| orbit_entry(e, &blocks)).collect::<Result<Vec<_>>>()?;
            if pretty {
                let mut s = format!("{:<4} {:<5} {}\n", "#", "dim", "pattern");
                for (i, e) in list.iter().enumerate() {
                    writeln!(s, "{:<4} {:<5} {}", i, e["dim"], e["label"].as_str().unwrap_or_default()).unwrap();
                }
                return ok(s.trim_end().to_string());
            }
            ok(Value::Array(list).to_string())
        }
        Command::Classify { blocks, matrix, pretty } => {
            let n = read_matrix(&matrix)?;
            let e = classify(&n, &blocks)?;
            let rp = rank_profile(&n, &blocks)?;
            let mut v = orbit_entry(&e, &blocks)?;
            v["a"] = json!(rp.a);
            v["b"] = json!(rp.b);
            ok(emit(&v, pretty))
        }
        Command::Leq { blocks, a, b } => {
            let x = Eolp::from_json(&read(&a)?)?;
            let y = Eolp::from_json(&read(&b)?)?;
            let r = leq(&x, &y, &blocks)?;
            ok(json!({"leq": r, "a": x.label(), "b": y.label()}).to_string())
        }
        Command::Hasse { blocks, format, pretty } => {
            let p = hasse(&blocks);
            match format {
                Format::Dot => ok(to_dot(&p)),
                Format::Json if pretty => ok(p.to_json_pretty()),
                Format::Json => ok(p.to_json()),
            }
        }
        Command::NormalForm { blocks, matrix, pretty } => {
            let nf = normal_form(&read_matrix(&matrix)?, &blocks)?;
            ok(emit(&serde_json::to_value(&nf).expect("normal form serializes"), pretty))
        }
        Command::UNormalForm { matrix, pretty } => {
            let nf = u_normal_form(&read_matrix(&matrix)?)?;
            ok(emit(&serde_json::to_value(&nf).expect("normal form serializes"), pretty))
        }
        Command::InvariantEval { datum, matrix } => {
            let (d, n) = read_datum(&datum)?;
            let m = read_matrix(&matrix)?;
            if n.is_some_and(|n| n != m.rows()) {
                return Err(Error::Shape(format!("--size {} but the matrix is {}x{}", n.unwrap(), m.rows(), m.cols())));
            }
            let v = evaluate(&d, &m)?;
            ok(json!({"value": format_rat(&v)}).to_string())
        }
        Command::InvariantWeight { datum } => {
            let (d, n) = read_datum(&datum)?;
            let n = n.ok_or_else(|| Error::Precondition("--size is required".into()))?;
            ok(json!({"n": n, "weight": weight(&d, n)?}).to_string())
        }
        Command::ToricCheck { datum, trials, seed, pretty } => {
            let (d, n) = read_datum(&datum)?;
            let n = n.ok_or_else(|| Error::Precondition("--size is required".into()))?;
            let report = is_toric_on_samples(&d, n, trials, seed)?;
            let mut v = serde_json::to_value(&report).expect("report serializes");
            if report.toric {
                v["exponents"] = match toric_exponents(&d, n) {
                    Ok(e) => serde_json::to_value(e).expect("exponents serialize"),
                    Err(e) => json!({"error": e.to_string()}),
                };
            }
            ok(emit(&v, pretty))
        }
        Command::Finiteness { blocks, nilpotency, lambda, pretty } => {
            let verdict = is_finite(&blocks, nilpotency)?;
            let mut v = serde_json::to_value(&verdict).expect("verdict serializes");
            if let (Some(l), Some(fam)) = (lambda, verdict.family) {
                v["matrix"] = serde_json::to_value(witness_family(&fam, &parse_rat(&l)?)?).expect("matrix serializes");
            }
            ok(emit(&v, pretty))
        }
        Command::ConjugateTest { blocks, a, b, trials, seed, pretty } => {
            let c = are_conjugate(&read_matrix(&a)?, &read_matrix(&b)?, &blocks, seed, trials)?;
            ok(emit(&serde_json::to_value(&c).expect("answer serializes"), pretty))
        }
        Command::Selftest { seed, pretty } => {
            let r = crate::selftest::run(seed);
            let code = if r.ok() { 0 } else { 1 };
            Ok((emit(&serde_json::to_value(&r).expect("report serializes"), pretty), code))
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(cli.command) {
        Ok((stdout, code)) => Output { code, stdout, stderr: String::new() },
        Err(e) => Output {
            code: 1,
            stdout: String::new(),
            stderr: json!({"error": e.kind(), "message": e.to_string()}).to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Output {
        run(std::iter::once("nilorb").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).code, 2);
        assert_eq!(call(&["orbits"]).code, 2);
        assert_eq!(call(&["orbits", "--blocks", "1,x"]).code, 2);
        assert_eq!(call(&["--help"]).code, 0);
    }

    #[test]
    fn orbits_and_finiteness() {
        let o = call(&["orbits", "--blocks", "1,1,1"]);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 7);
        let f = call(&["finiteness", "--blocks", "1,1,1", "--nilpotency", "3"]);
        let v: Value = serde_json::from_str(&f.stdout).unwrap();
        assert_eq!(v["finite"], false);
        assert_eq!(v["witness"], "D");
        let bad = call(&["finiteness", "--blocks", "1,1", "--nilpotency", "5"]);
        assert_eq!(bad.code, 1);
        assert!(bad.stderr.contains("precondition"));
    }

    #[test]
    fn matrix_formats() {
        let a = parse_matrix(r#"[[0, 0], ["1/2", 0]]"#).unwrap();
        let b = parse_matrix(&a.to_json()).unwrap();
        assert_eq!(a, b);
        assert!(parse_matrix("[[1],[2,3]]").is_err());
        assert!(parse_matrix("{").is_err());
    }
}
