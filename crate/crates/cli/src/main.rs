use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use amdkit::amd::{build_code, evaluate, AmdCode, Models};
use amdkit::bounds::{effective_tag_window, optimality_verdict, trace_witness_ku, WindowModel, Witness};
use amdkit::derive::{extract_from_triples, random_corpus_code, theorem3_check, theorem4_check};
use amdkit::functions::{
    cdfpw_func, dillon_dual_func, dillon_func, mm_func, read_table, read_triples, trace_mult_func,
    write_table, Func, Split,
};
use amdkit::nonlinearity::differential_spectrum;
use amdkit::report::{full_report, summarize, AmdReport};
use amdkit::{limits, Error};

#[derive(Parser)]
#[command(name = "amdkit", version, about = "AMD codes from highly nonlinear functions")]
struct Cli {
    /// Largest table or enumeration the run may allocate.
    #[arg(long, global = true, env = "AMDKIT_MAX_CELLS")]
    max_cells: Option<u64>,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the code parameters (m, n, t) and tag size.
    Build(CodeArgs),
    /// Write the differential spectrum as CSV.
    Spectrum {
        #[command(flatten)]
        code: CodeArgs,
        /// Only offsets with a nonzero source component.
        #[arg(long)]
        restricted: bool,
    },
    /// Exact success probabilities under every attack model.
    Eval(CodeArgs),
    /// Success probabilities with bound verdicts, or a tag-size window.
    Bounds {
        #[command(flatten)]
        code: CodeArgs,
        /// Security bits; switches to the tag-size window.
        #[arg(long, requires = "u")]
        k: Option<u32>,
        /// Source bits for the window.
        #[arg(long, requires = "k")]
        u: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModelArg::Weak)]
        model: ModelArg,
        #[arg(long, value_enum)]
        witness: Option<WitnessArg>,
    },
    /// Extract the tag function and check its nonlinearity bounds.
    Derive(CodeArgs),
    /// Write the function table of a code.
    ExportTable(CodeArgs),
    /// Validate a table file and print its parameters.
    ImportTable {
        #[arg(long)]
        table: PathBuf,
    },
    /// Parameters, spectrum peaks, success profile, bounds and derivation.
    Report(CodeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Mm,
    Dillon,
    DillonDual,
    TraceMult,
    Cdfpw,
    Table,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Weak,
    Strong,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessArg {
    Mm,
    TraceMult,
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    m1: Option<usize>,
    #[arg(long)]
    m2: Option<usize>,
    #[arg(long, default_value = "weak")]
    split: Split,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Table file for `--family table`.
    #[arg(long)]
    table: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Math(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Io(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Outcome<T> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --family {family}")))
}

impl CodeArgs {
    fn family(&self) -> Outcome<Family> {
        self.family.ok_or_else(|| Failure::Usage("--family is required".into()))
    }

    fn func(&self) -> Outcome<Func> {
        let f = match self.family()? {
            Family::Mm => mm_func(need(self.q, "q", "mm")?, self.r, self.split)?,
            Family::Dillon => dillon_func(need(self.q, "q", "dillon")?, self.r, None, self.split)?,
            Family::DillonDual => dillon_dual_func(need(self.q, "q", "dillon-dual")?, self.r, None)?,
            Family::TraceMult => {
                let q = need(self.q, "q", "trace-mult")?;
                let order = q
                    .checked_pow(self.r)
                    .map(|v| v as usize - 1)
                    .ok_or(Error::SizeCapExceeded { requested: u128::MAX, cap: limits::max_cells() })?;
                let (m1, m2) = match (self.m1, self.m2) {
                    (Some(a), Some(b)) => (a, b),
                    (Some(a), None) if a > 0 => (a, order / a),
                    (None, Some(b)) if b > 0 => (order / b, b),
                    (None, None) => (order, 1),
                    _ => return Err(Failure::Usage("--m1 and --m2 must be positive".into())),
                };
                trace_mult_func(q, self.r, None, m1, m2)?
            }
            Family::Cdfpw => cdfpw_func(need(self.q, "q", "cdfpw")?, need(self.t, "t", "cdfpw")?)?,
            Family::Table => {
                let path = need(self.table.as_ref(), "table", "table")?;
                read_table(BufReader::new(File::open(path)?))?
            }
            Family::Random => return Ok(random_corpus_code(self.seed, 0, 8)?.func().clone()),
        };
        Ok(f)
    }

    fn code(&self) -> Outcome<AmdCode> {
        Ok(build_code(self.func()?))
    }

    /// Which verdict the construction is known to meet.
    fn claims(&self) -> (bool, bool) {
        match self.family {
            Some(Family::Mm | Family::Dillon) if self.split == Split::Weak => (true, false),
            Some(Family::Mm) if self.r == 1 => (false, true),
            Some(Family::DillonDual) if self.r == 1 => (false, true),
            _ => (false, false),
        }
    }
}

fn emit(out: &Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Outcome<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Outcome<()> {
    let text = serde_json::to_string_pretty(v)?;
    emit(out, |w| writeln!(w, "{text}"))
}

fn text_lines(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            let shown = match val {
                Value::Object(o) if o.len() == 2 && o.contains_key("num") && o.contains_key("den") => {
                    format!("{}/{}", o["num"], o["den"])
                }
                other => other.to_string(),
            };
            s.push_str(&format!("{k} {shown}\n"));
        }
    }
    s
}

fn emit_value(cli: &Cli, v: &Value) -> Outcome<()> {
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&cli.out, v),
        Format::Text => {
            let text = text_lines(v);
            emit(&cli.out, |w| w.write_all(text.as_bytes()))
        }
        Format::Csv => Err(Failure::Usage("csv output is only available for `spectrum`".into())),
    }
}

fn eval_value(report: &AmdReport) -> Outcome<Value> {
    Ok(serde_json::to_value(report)?)
}

fn run(cli: &Cli) -> Outcome<()> {
    match &cli.command {
        Command::Build(args) => {
            let code = args.code()?;
            let s = summarize(&code);
            match cli.format.unwrap_or(Format::Text) {
                Format::Text => {
                    let line = format!(
                        "m={} n={} t={} tagSize={} ratio={}\n",
                        s.m, s.n, s.t, s.tag_size.rendered, s.tag_size.ratio
                    );
                    emit(&cli.out, |w| w.write_all(line.as_bytes()))
                }
                _ => emit_value(cli, &serde_json::to_value(&s)?),
            }
        }
        Command::Spectrum { code, restricted } => {
            let f = code.func()?;
            let spec = differential_spectrum(&f, *restricted)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => emit(&cli.out, |w| spec.write_csv(w)),
                _ => emit_value(
                    cli,
                    &json!({
                        "restricted": restricted,
                        "nonlinearity": spec.peak_ratio(),
                        "peak": spec.peak(),
                    }),
                ),
            }
        }
        Command::Eval(args) => {
            let code = args.code()?;
            let report = AmdReport::new(&code, evaluate(&code, Models::ALL)?, None);
            emit_value(cli, &eval_value(&report)?)
        }
        Command::Bounds { code, k: Some(k), u: Some(u), model, witness } => {
            let model = match model {
                ModelArg::Weak => WindowModel::Weak,
                ModelArg::Strong => WindowModel::Strong,
            };
            let witness = match witness {
                None => None,
                Some(WitnessArg::Mm) => Some(Witness::MaioranaMcFarland),
                Some(WitnessArg::TraceMult) => Some(Witness::TraceMult {
                    q: need(code.q, "q", "trace-mult")?,
                    r: code.r,
                    m2: code.m2.unwrap_or(1) as u64,
                }),
            };
            let w = effective_tag_window(*k, *u, model, witness)?;
            let mut v = serde_json::to_value(&w)?;
            if let Some(Witness::TraceMult { q, r, m2 }) = witness {
                let (wk, wu) = trace_witness_ku(q, r, m2)?;
                v["witnessKU"] = json!([wk, wu]);
            }
            emit_value(cli, &v)?;
            if !w.non_empty {
                return Err(Failure::Math("tag-size window is empty".into()));
            }
            Ok(())
        }
        Command::Bounds { code: args, .. } => {
            let code = args.code()?;
            let p = evaluate(&code, Models::ALL)?;
            let verdict = optimality_verdict(&code, &p)?;
            let (claim_r, claim_g) = args.claims();
            let failed = (claim_r && !verdict.r_optimal)
                || (claim_g && !verdict.g_optimal)
                || !verdict.consistent;
            let report = AmdReport::new(&code, p, Some(verdict.clone()));
            let mut v = eval_value(&report)?;
            v["rOptimal"] = json!(verdict.r_optimal);
            v["gOptimal"] = json!(verdict.g_optimal);
            emit_value(cli, &v)?;
            if failed {
                return Err(Failure::Math("code does not meet its expected bound".into()));
            }
            Ok(())
        }
        Command::Derive(args) => {
            let code = match (args.family, &args.table) {
                (Some(Family::Table), Some(path)) => {
                    let t = read_triples(BufReader::new(File::open(path)?))?;
                    extract_from_triples(&t)?.into_code()
                }
                _ => args.code()?,
            };
            let t3 = theorem3_check(&code)?;
            let t4 = theorem4_check(&code)?;
            let holds = t3.holds && t4.holds;
            let v = json!({
                "lhs": t3.lhs,
                "rhs": t3.rhs,
                "holds": t3.holds,
                "weakRho": t3.weak_rho,
                "perSource": t3.per_source,
                "theorem4": t4,
            });
            emit_value(cli, &v)?;
            if !holds {
                return Err(Failure::Math("derived nonlinearity exceeds its bound".into()));
            }
            Ok(())
        }
        Command::ExportTable(args) => {
            let f = args.func()?;
            emit(&cli.out, |w| write_table(&f, w))
        }
        Command::ImportTable { table } => {
            let f = read_table(BufReader::new(File::open(table)?))?;
            let s = summarize(&build_code(f));
            emit_value(cli, &serde_json::to_value(&s)?)
        }
        Command::Report(args) => {
            let code = args.code()?;
            emit_value(cli, &serde_json::to_value(full_report(&code)?)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.max_cells {
        limits::set_max_cells(cap);
    }
    let result = limits::with_workers(cli.workers, || run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e @ Error::SizeCapExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
