//! `periodfix` command-line front end.
//!
//! Every subcommand reads one JSON document, writes one document to stdout and
//! exits 0; domain errors exit 1 and usage errors exit 2, both with a JSON
//! error object on stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use periodfix::grassmannian_oracle::{check_finiteness_criterion, parse_rep_spec, OracleLimits};
use periodfix::period_formula::{assemble_equal_rank, assemble_period, whittaker_normalization};
use periodfix::weyl::MAX_RANK;
use periodfix::{
    check_regularity, enumerate_fix, enumerate_min_reps, has_pole_at_one, is_even, parse_datum,
    tangent_l_data, w_p_q, w_p_semicolon_q, Composition, CuspidalDatum, SCHEMA_VERSION,
};

const HARD_K_MAX: usize = 20;
const HARD_WEYL_N_MAX: usize = MAX_RANK;
const HARD_ORACLE_N_MAX: usize = 6;
const HARD_Q_MAX: u32 = 7;

#[derive(Debug, Parser)]
#[command(name = "periodfix", version, about = "Fixed points, Weyl double cosets and period formulas for GL(2n+m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for the oracle enumeration (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Largest number of blocks accepted in a datum
    #[arg(long, global = true)]
    k_max: Option<usize>,

    /// Largest rank N accepted (weyl: at most 10, oracle: at most 6)
    #[arg(long, global = true)]
    n_max: Option<usize>,

    /// Largest field size accepted by the oracle (at most 7)
    #[arg(long, global = true)]
    q_max: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regularity and evenness of a cuspidal datum
    CheckRegularity(CommonArgs),
    /// The fixed points I with their tangent data
    FixPoints(CommonArgs),
    /// The period formula as a sum over fixed points
    Formula(FormulaArgs),
    /// Minimal double-coset representatives for a pair of compositions
    Weyl(CommonArgs),
    /// Brute-force finiteness check over finite fields
    Oracle(OracleArgs),
    /// Normalisation of the Whittaker period
    Whittaker(FormulaArgs),
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, clap::Args)]
struct FormulaArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Tag of the finite set of places
    #[arg(long, default_value = "S")]
    places: String,
    /// Schwartz function tag; selects the equal-rank formula (needs m = 0)
    #[arg(long)]
    schwartz: Option<String>,
}

#[derive(Debug, clap::Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Comma-separated field sizes; defaults to the q of the input
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Table,
}

struct Failure {
    exit: u8,
    code: String,
    message: String,
    path: String,
}

impl Failure {
    fn domain(code: &str, message: impl ToString, path: impl Into<String>) -> Self {
        Failure { exit: 1, code: code.into(), message: message.to_string(), path: path.into() }
    }

    fn usage(code: &str, message: impl ToString) -> Self {
        Failure { exit: 2, code: code.into(), message: message.to_string(), path: "$".into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(Failure::usage("usage", first));
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    let doc = json!({"error": {"code": f.code, "message": f.message, "path": f.path}});
    eprintln!("{doc}");
    ExitCode::from(f.exit)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Failure::usage("threads", e))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::CheckRegularity(a) => {
            let format = pick(a.format, Format::Json, &[Format::Json, Format::Table])?;
            let d = load_datum(&a.input, cli)?;
            Ok(regularity(&d, format))
        }
        Command::FixPoints(a) => {
            let format = pick(a.format, Format::Json, &[Format::Json, Format::Table])?;
            let d = load_datum(&a.input, cli)?;
            Ok(fix_points(&d, format))
        }
        Command::Formula(a) => {
            let format = pick(a.format, Format::Latex, &[Format::Latex, Format::Json])?;
            let d = load_datum(&a.input, cli)?;
            let formula = match &a.schwartz {
                Some(phi) => assemble_equal_rank(&d, &a.places, phi)
                    .map_err(|e| Failure::domain(e.code(), &e, "$.m"))?,
                None => assemble_period(&d, &a.places),
            };
            Ok(match format {
                Format::Latex => format!("{}\n", formula.expr.to_latex()),
                _ => pretty(&formula.to_json()),
            })
        }
        Command::Whittaker(a) => {
            let format = pick(a.format, Format::Latex, &[Format::Latex, Format::Json])?;
            if a.schwartz.is_some() {
                return Err(Failure::usage("usage", "--schwartz is not accepted by whittaker"));
            }
            let d = load_datum(&a.input, cli)?;
            let expr = whittaker_normalization(&d, &a.places);
            Ok(match format {
                Format::Latex => format!("{}\n", expr.to_latex()),
                _ => pretty(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "datum": d.to_json(),
                    "places": a.places,
                    "expr": expr.to_json(),
                })),
            })
        }
        Command::Weyl(a) => {
            let format = pick(a.format, Format::Json, &[Format::Json, Format::Table])?;
            let n_max = cap(cli.n_max, HARD_WEYL_N_MAX, "--n-max")?;
            let (p, q) = load_pair(&a.input)?;
            if p.total() > n_max {
                return Err(Failure::domain("cap_exceeded", format!("N = {} exceeds --n-max {n_max}", p.total()), "$.P"));
            }
            weyl(&p, &q, format)
        }
        Command::Oracle(a) => {
            let format = pick(a.format, Format::Json, &[Format::Json, Format::Table])?;
            let limits = OracleLimits {
                max_dim: cap(cli.n_max, HARD_ORACLE_N_MAX, "--n-max")?,
                max_q: cap(cli.q_max.map(|q| q as usize), HARD_Q_MAX as usize, "--q-max")? as u32,
            };
            let spec = parse_rep_spec(&read(&a.input)?).map_err(|e| Failure::domain(e.code(), &e, e.path()))?;
            let report = check_finiteness_criterion(&spec, spec.n, &a.q, &limits)
                .map_err(|e| Failure::domain(e.code(), &e, e.path()))?;
            Ok(match format {
                Format::Table => report.to_table(),
                _ => pretty(&report.to_json()),
            })
        }
    }
}

fn pick(requested: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| format_name(*f)).collect();
        Err(Failure::usage(
            "unsupported_format",
            format!("format {} is not available here (expected {})", format_name(f), names.join(" or ")),
        ))
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Latex => "latex",
        Format::Table => "table",
    }
}

fn cap(requested: Option<usize>, hard: usize, flag: &str) -> Result<usize, Failure> {
    match requested {
        None => Ok(hard),
        Some(v) if v <= hard => Ok(v),
        Some(v) => Err(Failure::usage("cap_out_of_range", format!("{flag} {v} exceeds the hard limit {hard}"))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::domain("io", format!("{}: {e}", path.display()), "$"))
}

fn load_datum(path: &Path, cli: &Cli) -> Result<CuspidalDatum, Failure> {
    let k_max = cap(cli.k_max, HARD_K_MAX, "--k-max")?;
    let d = parse_datum(&read(path)?).map_err(|e| Failure::domain(e.code(), &e, e.path()))?;
    if d.k() > k_max {
        return Err(Failure::domain("cap_exceeded", format!("k = {} exceeds --k-max {k_max}", d.k()), "$.parts"));
    }
    Ok(d)
}

/// `{"P": [..], "Q": [..]}`, optionally with `schema_version`.
fn load_pair(path: &Path) -> Result<(Composition, Composition), Failure> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::domain("schema_violation", e, "$"))?;
    let obj = v.as_object().ok_or_else(|| Failure::domain("schema_violation", "expected an object", "$"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "schema_version" | "P" | "Q") {
            return Err(Failure::domain("schema_violation", "unknown field", format!("$.{key}")));
        }
    }
    if let Some(s) = obj.get("schema_version") {
        if s.as_u64() != Some(SCHEMA_VERSION) {
            return Err(Failure::domain("schema_violation", "unsupported schema version", "$.schema_version"));
        }
    }
    let comp = |key: &str| -> Result<Composition, Failure> {
        let path = format!("$.{key}");
        let arr = obj
            .get(key)
            .ok_or_else(|| Failure::domain("schema_violation", "missing field", &path))?
            .as_array()
            .ok_or_else(|| Failure::domain("schema_violation", "expected an array", &path))?;
        let parts = arr
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Failure::domain("schema_violation", "expected a positive integer", format!("{path}[{i}]")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Composition::new(parts).map_err(|e| Failure::domain(e.code(), &e, e.path().replacen("$.parts", &path, 1)))
    };
    Ok((comp("P")?, comp("Q")?))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn regularity(d: &CuspidalDatum, format: Format) -> String {
    let regular = check_regularity(d);
    let even = is_even(d);
    let collision = d.has_label_collision();
    match format {
        Format::Table => format!(
            "regular          {regular}\neven             {even}\nlabel_collision  {collision}\n"
        ),
        _ => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "datum": d.to_json(),
            "regular": regular,
            "even": even,
            "label_collision": collision,
        })),
    }
}

fn fix_points(d: &CuspidalDatum, format: Format) -> String {
    let fix = enumerate_fix(d);
    match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<16} {:<16} {:<20} {:>8} {:>5}", "I", "I^c", "sigma", "tangent", "pole");
            for fp in &fix {
                let one = |v: &[usize]| format!("{:?}", v.iter().map(|x| x + 1).collect::<Vec<_>>());
                let _ = writeln!(
                    out,
                    "{:<16} {:<16} {:<20} {:>8} {:>5}",
                    one(fp.subset()),
                    one(fp.complement()),
                    format!("{:?}", fp.sigma().sigma_one_line()),
                    tangent_l_data(fp).factors.len(),
                    has_pole_at_one(fp)
                );
            }
            let _ = writeln!(out, "{} fixed points", fix.len());
            out
        }
        _ => {
            let points: Vec<Value> = fix
                .iter()
                .map(|fp| {
                    let mut v = fp.to_json();
                    v["weyl_element"] = json!(fp.sigma().element().one_line());
                    v["tangent_factors"] = json!(tangent_l_data(fp).factors.len());
                    v["tangent_pole_at_one"] = json!(has_pole_at_one(fp));
                    v
                })
                .collect();
            pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "datum": d.to_json(),
                "count": fix.len(),
                "fixed_points": points,
            }))
        }
    }
}

fn weyl(p: &Composition, q: &Composition, format: Format) -> Result<String, Failure> {
    let err = |e: periodfix::WeylError| Failure::domain(e.code(), &e, "$.Q");
    let reps = enumerate_min_reps(p, q).map_err(err)?;
    let into = w_p_semicolon_q(p, q).map_err(err)?;
    let onto = w_p_q(p, q).map_err(err)?;
    Ok(match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "P  {:?}\nQ  {:?}", p.parts(), q.parts());
            let _ = writeln!(out, "{:<24} {:>6} {:>8} {:>8}", "w", "length", "W(P;Q)", "W(P,Q)");
            for w in &reps {
                let in_into = into.iter().any(|x| x == w);
                let in_onto = onto.iter().any(|b| b.element() == w);
                let _ = writeln!(out, "{:<24} {:>6} {:>8} {:>8}", format!("{:?}", w.one_line()), w.length(), in_into, in_onto);
            }
            let _ = writeln!(out, "{} double cosets, |W(P;Q)| = {}, |W(P,Q)| = {}", reps.len(), into.len(), onto.len());
            out
        }
        _ => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "P": p.parts(),
            "Q": q.parts(),
            "min_reps": reps.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            "w_p_semicolon_q": into.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            "w_p_q": onto.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            "associate": !onto.is_empty(),
        })),
    })
}
