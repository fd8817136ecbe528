//! Command-line front end. Every verb reads one matrix (file or stdin),
//! runs one operation and prints text or, with `--json`, a single JSON
//! object whose numbers are decimal strings.
//!
//! Exit status: 0 on success, 1 on domain errors, 2 on parse and usage
//! errors.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{parse_int_matrix, parse_rat_matrix, rat_to_string, IndexSet, IntMat, RatMat};
use crate::fans::{enumerate_sf, DEFAULT_CAP};
use crate::fw::{classify_f, classify_w, f_reduce, positivize, w_reduce, w_reduce_steps};
use crate::gale::{check_all_identities, gale_dual};
use crate::lattice::{
    dual_lattice, gcd_max_minors, lattice_intersection, quotient_structure, Lattice, QuotientStructure,
};
use crate::normal_forms::{hnf, hnf_rat, positive_row_echelon, snf};
use crate::toric::{
    cartier_index, class_group, full_report, is_pws, torsion_via_tn, FanChoice, ReportInput, ToricReport,
};

#[derive(Parser, Debug)]
#[command(name = "galekit", version, about = "Exact lattice tools for fan and weight matrices")]
struct Cli {
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Largest number of rays accepted by fan enumeration
    #[arg(long, global = true, env = "GALEKIT_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Matrix file; `-` or absent reads stdin
    file: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct FanArgs {
    /// 1-based position of the fan in the enumeration order
    #[arg(long, conflicts_with = "fan_file")]
    fan: Option<usize>,

    /// File listing maximal cones, one per line, as 1-based column indices
    #[arg(long)]
    fan_file: Option<PathBuf>,

    /// Whether the input matrix holds weights or rays
    #[arg(long, value_enum, default_value_t = InputKind::Auto)]
    input: InputKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputKind {
    /// Weights if the matrix is a W-matrix, rays otherwise
    Auto,
    Weights,
    Fan,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hermite normal form H = U A
    Hnf(Input),
    /// Smith normal form S = alpha A beta
    Snf(Input),
    /// Positive row echelon form E = alpha A beta of a W-positive matrix
    Echelon(Input),
    /// Gale dual in Hermite normal form
    Gale {
        #[command(flatten)]
        input: Input,
        /// Also verify the quotient and determinant identities
        #[arg(long)]
        check: bool,
        /// Largest index set size used by --check (default: all)
        #[arg(long)]
        max_subset: Option<usize>,
    },
    /// Dual of the lattice spanned by the rows
    Dual(Input),
    /// Intersection of the row lattices of several matrices
    Intersect {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Z^m modulo the row lattice
    Quotient(Input),
    /// gcd of the maximal minors
    MinorsGcd(Input),
    /// F-matrix and CF-matrix clauses
    CheckF(Input),
    /// W-matrix clauses
    CheckW(Input),
    /// Positive matrix with the row lattice of a W-matrix
    Positivize(Input),
    /// Divide each column by its gcd
    ReduceF(Input),
    /// W-reduction through successive column reductions
    ReduceW(Input),
    /// All simplicial fans with the columns as rays
    Fans(Input),
    /// Class group Z^m / L_r(V)
    ClassGroup(Input),
    /// Torsion-freeness of the class group, four ways
    Pws(Input),
    /// Divisor invariants for one fan
    Report {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        fan: FanArgs,
    },
    /// Least multiple of a divisor that is Cartier
    CartierIndex {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        fan: FanArgs,
        /// Divisor coefficients a1,...,am
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        divisor: Vec<String>,
    },
}

struct Output {
    text: String,
    json: Value,
}

fn s<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

fn int_json(m: &IntMat) -> Value {
    Value::Array(m.rows_iter().map(|r| Value::Array(r.iter().map(s).collect())).collect())
}

fn rat_json(m: &RatMat) -> Value {
    Value::Array(
        m.rows_iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(rat_to_string(x))).collect()))
            .collect(),
    )
}

fn vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn clauses(v: &[char]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.iter().map(char::to_string).collect::<Vec<_>>().join(",")
    }
}

fn quotient_json(q: &QuotientStructure) -> Value {
    json!({ "free_rank": s(q.free_rank), "torsion": vec_json(&q.torsion), "group": q.to_string() })
}

fn quotient_text(q: &QuotientStructure) -> String {
    format!(
        "group: {q}\nfree_rank: {}\ntorsion: {}\n",
        q.free_rank,
        if q.torsion.is_empty() {
            "none".into()
        } else {
            join(&q.torsion)
        }
    )
}

fn section(text: &mut String, title: &str, body: impl std::fmt::Display) {
    let _ = write!(text, "{title}:\n{body}");
}

fn read_source(input: &Input, stdin: &mut dyn Read) -> Result<String> {
    match &input.file {
        Some(p) if p.as_os_str() != "-" => read_path(p),
        _ => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| Error::Usage(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn read_path(p: &PathBuf) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Usage(format!("cannot read {}: {e}", p.display())))
}

fn parse_cones(text: &str, ncols: usize) -> Result<Vec<IndexSet>> {
    let mut cones = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let idx = line
            .split(|c: char| c.is_whitespace() || c == ',' || c == '{' || c == '}')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("fan file line {}: bad index {t:?}", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        cones.push(IndexSet::new(idx, ncols).map_err(|e| Error::Parse(format!("fan file line {}: {e}", lineno + 1)))?);
    }
    if cones.is_empty() {
        return Err(Error::Parse("fan file lists no cones".into()));
    }
    Ok(cones)
}

fn fan_choice(args: &FanArgs, ncols: usize) -> Result<FanChoice> {
    match (&args.fan_file, args.fan) {
        (Some(p), _) => Ok(FanChoice::Cones(parse_cones(&read_path(p)?, ncols)?)),
        (None, Some(k)) => Ok(FanChoice::Index(k)),
        (None, None) => Ok(FanChoice::Index(1)),
    }
}

fn report_input(m: IntMat, kind: InputKind) -> ReportInput {
    match kind {
        InputKind::Weights => ReportInput::Weights(m),
        InputKind::Fan => ReportInput::Fan(m),
        InputKind::Auto => {
            if classify_w(&m).is_w_matrix {
                ReportInput::Weights(m)
            } else {
                ReportInput::Fan(m)
            }
        }
    }
}

fn cones_text(cones: &[IndexSet]) -> String {
    cones.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn cones_json(cones: &[IndexSet]) -> Value {
    Value::Array(
        cones
            .iter()
            .map(|c| Value::Array(c.one_based().iter().map(|&i| s(i)).collect()))
            .collect(),
    )
}

fn report_output(rep: &ToricReport) -> Output {
    let mut text = String::new();
    let _ = writeln!(text, "n: {}\nr: {}", rep.n, rep.r);
    section(&mut text, "V", &rep.v);
    section(&mut text, "Q", &rep.q);
    let _ = writeln!(text, "fan: {}", cones_text(rep.fan.cones()));
    if let Some(c) = rep.fan_count {
        let _ = writeln!(text, "fan_count: {c}");
    }
    let _ = writeln!(text, "class_group: {}\npws: {}", rep.cl, yes(rep.is_pws));
    section(&mut text, "cl_generators", &rep.cl_generators);
    section(&mut text, "picard_basis", &rep.picard_basis);
    section(&mut text, "cartier_basis", &rep.cartier_basis);
    let _ = writeln!(
        text,
        "picard_index: {}\ndelta_sigma: {}\ncartier_indices: {}",
        rep.picard_index,
        rep.delta_sigma,
        join(&rep.cartier_indices)
    );
    let json = json!({
        "n": s(rep.n),
        "r": s(rep.r),
        "v": int_json(&rep.v),
        "q": int_json(&rep.q),
        "fan": cones_json(rep.fan.cones()),
        "fan_count": rep.fan_count.map(s),
        "cl": quotient_json(&rep.cl),
        "is_pws": rep.is_pws,
        "cl_generators": int_json(&rep.cl_generators),
        "picard_basis": int_json(&rep.picard_basis),
        "cartier_basis": int_json(&rep.cartier_basis),
        "picard_index": s(&rep.picard_index),
        "delta_sigma": s(&rep.delta_sigma),
        "cartier_indices": vec_json(&rep.cartier_indices),
    });
    Output { text, json }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output> {
    let int_input =
        |input: &Input, stdin: &mut dyn Read| -> Result<IntMat> { parse_int_matrix(&read_source(input, stdin)?) };
    match &cli.command {
        Command::Hnf(input) => {
            let a = parse_rat_matrix(&read_source(input, stdin)?)?;
            let (h_text, h_json, u, pivots) = match a.to_int() {
                Some(ai) => {
                    let r = hnf(&ai);
                    (r.h.to_string(), int_json(&r.h), r.u, r.pivots)
                }
                None => {
                    let r = hnf_rat(&a);
                    (r.h.to_string(), rat_json(&r.h), r.u, r.pivots)
                }
            };
            let mut text = String::new();
            section(&mut text, "H", h_text);
            section(&mut text, "U", &u);
            let _ = writeln!(text, "rank: {}", pivots.len());
            Ok(Output {
                text,
                json: json!({ "h": h_json, "u": int_json(&u), "rank": s(pivots.len()) }),
            })
        }
        Command::Snf(input) => {
            let a = int_input(input, stdin)?;
            let r = snf(&a);
            let mut text = String::new();
            section(&mut text, "S", &r.s);
            section(&mut text, "alpha", &r.alpha);
            section(&mut text, "beta", &r.beta);
            let _ = writeln!(text, "factors: {}", join(&r.factors));
            Ok(Output {
                text,
                json: json!({
                    "s": int_json(&r.s),
                    "alpha": int_json(&r.alpha),
                    "beta": int_json(&r.beta),
                    "factors": vec_json(&r.factors),
                }),
            })
        }
        Command::Echelon(input) => {
            let a = int_input(input, stdin)?;
            let r = positive_row_echelon(&a)?;
            let mut text = String::new();
            section(&mut text, "E", &r.e);
            section(&mut text, "alpha", &r.alpha);
            section(&mut text, "beta", &r.beta);
            Ok(Output {
                text,
                json: json!({ "e": int_json(&r.e), "alpha": int_json(&r.alpha), "beta": int_json(&r.beta) }),
            })
        }
        Command::Gale {
            input,
            check,
            max_subset,
        } => {
            let a = int_input(input, stdin)?;
            let g = gale_dual(&a)?;
            let mut text = g.to_string();
            let mut obj = json!({ "gale": int_json(&g) });
            if *check {
                let limit = max_subset.unwrap_or(a.ncols());
                if let Some(bad) = check_all_identities(&a, &g, limit)? {
                    return Err(Error::Invariant(format!("duality identities fail on index set {bad}")));
                }
                let _ = writeln!(text, "check: ok");
                obj["check"] = json!("ok");
            }
            Ok(Output { text, json: obj })
        }
        Command::Dual(input) => {
            let a = parse_rat_matrix(&read_source(input, stdin)?)?;
            let d = dual_lattice(&Lattice::from_generators(&a));
            Ok(Output {
                text: d.basis().to_string(),
                json: json!({ "dual": rat_json(d.basis()) }),
            })
        }
        Command::Intersect { files } => {
            let ls = files
                .iter()
                .map(|p| parse_rat_matrix(&read_path(p)?).map(|m| Lattice::from_generators(&m)))
                .collect::<Result<Vec<_>>>()?;
            let l = lattice_intersection(&ls)?;
            let text = if l.rank() == 0 {
                "0\n".into()
            } else {
                l.basis().to_string()
            };
            Ok(Output {
                text,
                json: json!({ "rank": s(l.rank()), "basis": rat_json(l.basis()) }),
            })
        }
        Command::Quotient(input) => {
            let a = int_input(input, stdin)?;
            let q = quotient_structure(a.ncols(), &Lattice::row_lattice(&a))?;
            Ok(Output {
                text: quotient_text(&q),
                json: quotient_json(&q),
            })
        }
        Command::MinorsGcd(input) => {
            let g = gcd_max_minors(&int_input(input, stdin)?)?;
            Ok(Output {
                text: format!("{g}\n"),
                json: json!({ "gcd": s(g) }),
            })
        }
        Command::CheckF(input) => {
            let r = classify_f(&int_input(input, stdin)?);
            Ok(Output {
                text: format!(
                    "f_matrix: {}\ncf_matrix: {}\nviolated: {}\n",
                    yes(r.is_f_matrix),
                    yes(r.is_cf_matrix),
                    clauses(&r.violated)
                ),
                json: json!({
                    "is_f_matrix": r.is_f_matrix,
                    "is_cf_matrix": r.is_cf_matrix,
                    "violated": r.violated.iter().map(char::to_string).collect::<Vec<_>>(),
                }),
            })
        }
        Command::CheckW(input) => {
            let r = classify_w(&int_input(input, stdin)?);
            let witness = r.positive_witness.as_deref().map_or_else(|| "none".into(), join);
            Ok(Output {
                text: format!(
                    "w_matrix: {}\nviolated: {}\nwitness: {witness}\n",
                    yes(r.is_w_matrix),
                    clauses(&r.violated)
                ),
                json: json!({
                    "is_w_matrix": r.is_w_matrix,
                    "violated": r.violated.iter().map(char::to_string).collect::<Vec<_>>(),
                    "positive_witness": r.positive_witness.as_deref().map(vec_json),
                }),
            })
        }
        Command::Positivize(input) => {
            let p = positivize(&int_input(input, stdin)?)?;
            Ok(Output {
                text: p.to_string(),
                json: json!({ "positive": int_json(&p) }),
            })
        }
        Command::ReduceF(input) => {
            let (v, d) = f_reduce(&int_input(input, stdin)?)?;
            let mut text = v.to_string();
            let _ = writeln!(text, "divisors: {}", join(&d));
            Ok(Output {
                text,
                json: json!({ "reduced": int_json(&v), "divisors": vec_json(&d) }),
            })
        }
        Command::ReduceW(input) => {
            let q = int_input(input, stdin)?;
            let steps = w_reduce_steps(&q)?;
            let out = w_reduce(&q)?;
            let v = gale_dual(&out)?;
            let mut text = String::new();
            for st in &steps {
                section(
                    &mut text,
                    &format!("step {} (d = {})", st.column, st.divisor),
                    &st.result,
                );
            }
            section(&mut text, "reduced", &out);
            section(&mut text, "gale", &v);
            let steps_json: Vec<Value> = steps
                .iter()
                .map(|st| json!({ "column": s(st.column), "divisor": s(&st.divisor), "result": int_json(&st.result) }))
                .collect();
            Ok(Output {
                text,
                json: json!({ "steps": steps_json, "reduced": int_json(&out), "gale": int_json(&v) }),
            })
        }
        Command::Fans(input) => {
            let v = int_input(input, stdin)?;
            let fans = enumerate_sf(&v, cli.cap)?;
            let mut text = format!("count: {}\n", fans.len());
            for (k, f) in fans.iter().enumerate() {
                let _ = writeln!(text, "fan {}: {}", k + 1, cones_text(f.cones()));
            }
            let _ = writeln!(text, "divisorially_detected: {}", yes(fans.len() == 1));
            Ok(Output {
                text,
                json: json!({
                    "count": s(fans.len()),
                    "fans": fans.iter().map(|f| cones_json(f.cones())).collect::<Vec<_>>(),
                    "divisorially_detected": fans.len() == 1,
                }),
            })
        }
        Command::ClassGroup(input) => {
            let v = int_input(input, stdin)?;
            let cl = class_group(&v)?;
            let tors = torsion_via_tn(&v)?;
            if tors.torsion != cl.torsion {
                return Err(Error::Invariant("torsion computed two ways disagrees".into()));
            }
            Ok(Output {
                text: quotient_text(&cl),
                json: quotient_json(&cl),
            })
        }
        Command::Pws(input) => {
            let (ok, r) = is_pws(&int_input(input, stdin)?)?;
            Ok(Output {
                text: format!(
                    "pws: {}\ntorsion_free: {}\nhnf_identity_block: {}\ncolumn_lattice_full: {}\ncoprime_minors: {}\n",
                    yes(ok),
                    yes(r.torsion_free),
                    yes(r.hnf_identity_block),
                    yes(r.column_lattice_full),
                    yes(r.coprime_minors)
                ),
                json: json!({
                    "is_pws": ok,
                    "torsion_free": r.torsion_free,
                    "hnf_identity_block": r.hnf_identity_block,
                    "column_lattice_full": r.column_lattice_full,
                    "coprime_minors": r.coprime_minors,
                }),
            })
        }
        Command::Report { input, fan } => {
            let m = int_input(input, stdin)?;
            let choice = fan_choice(fan, m.ncols())?;
            let rep = full_report(&report_input(m, fan.input), &choice, cli.cap)?;
            Ok(report_output(&rep))
        }
        Command::CartierIndex { input, fan, divisor } => {
            let m = int_input(input, stdin)?;
            let a = divisor
                .iter()
                .map(|t| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("invalid divisor coefficient {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let v = match report_input(m, fan.input) {
                ReportInput::Weights(q) => gale_dual(&q)?,
                ReportInput::Fan(v) => v,
            };
            let fan_obj = match fan_choice(fan, v.ncols())? {
                FanChoice::Cones(cones) => crate::fans::Fan::new(v.clone(), cones),
                FanChoice::Index(k) => {
                    let fans = enumerate_sf(&v, cli.cap)?;
                    let count = fans.len();
                    fans.into_iter()
                        .nth(k.wrapping_sub(1))
                        .ok_or(Error::IndexOutOfRange { index: k, max: count })?
                }
            };
            let k = cartier_index(&v, &fan_obj, &a)?;
            Ok(Output {
                text: format!("{k}\n"),
                json: json!({ "cartier_index": s(k), "fan": cones_json(fan_obj.cones()) }),
            })
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Usage(_) => 2,
        _ => 1,
    }
}

/// Runs one invocation; `args[0]` is the program name.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, stdin) {
        Ok(o) => {
            let _ = if cli.json {
                writeln!(out, "{}", o.json)
            } else {
                write!(out, "{}", o.text)
            };
            0
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let kind = if code == 2 { "usage" } else { "domain" };
                let _ = writeln!(out, "{}", json!({ "error": e.to_string(), "kind": kind }));
            }
            let _ = writeln!(err, "galekit: {e}");
            code
        }
    }
}
