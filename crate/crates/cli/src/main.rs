use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use regseq::bounds::{
    correlation_dimension, information_dimension, lower_bound_row_with, rn_abs_norm_with,
    EnumConfig, LowerRow, UpperRow, LOWER_DEFAULT_MAX, LOWER_OVERRIDE_MAX, UPPER_DEFAULT_MAX,
    UPPER_OVERRIDE_MAX,
};
use regseq::fmt::sig17;
use regseq::linrep::{block_sum, builtin, partial_sum_with, power_lift, SumEngine};
use regseq::repfile::RepFile;
use regseq::sequences::{eta, twisted_sum_series, SequenceId};
use regseq::spectral::dumas_exponent;
use regseq::{Error, LinearRep, Parallelism};

#[derive(Parser)]
#[command(
    name = "regseq",
    version,
    about = "Exact computations with k-regular sequences and Thue-Morse autocorrelations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact value of eta(m)
    Eta {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        json: bool,
    },
    /// Partial sum up to --x, or block sum over [0, k^j), of a representation
    Sum {
        #[command(flatten)]
        source: RepSource,
        #[arg(long, required_unless_present = "block", conflicts_with = "block")]
        x: Option<u64>,
        #[arg(long)]
        block: Option<u32>,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        #[arg(long)]
        json: bool,
    },
    /// Running sums of f(m)*eta(m) for x = 0..=x-max
    Twist {
        /// tm, pf, rs, eta or sign:<n>
        #[arg(long, value_parser = parse_seq)]
        seq: SequenceId,
        #[arg(long)]
        x_max: u64,
        #[arg(long, value_enum)]
        normalize: Option<Normalize>,
        #[arg(long)]
        json: bool,
    },
    /// Growth exponent log_k(rho) of the summatory function, with dominance checks
    Exponent {
        #[command(flatten)]
        source: RepSource,
        /// Lift the representation to radix k^lift first
        #[arg(long, default_value_t = 1)]
        lift: u32,
        #[arg(long, default_value_t = 1)]
        jsr_depth: u32,
        #[arg(long)]
        json: bool,
    },
    /// Lower-bound exponents log_{2^n} rho(A)
    LowerTable(TableArgs),
    /// Upper-bound norms ||R_n||_abs and their exponents
    UpperTable(TableArgs),
    /// Correlation and information dimension estimates
    Dims {
        /// Number of Dirichlet-series terms for the information dimension
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check a representation file
    ValidateRep {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct RepSource {
    /// JSON representation file
    #[arg(long)]
    rep: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    /// Allow levels above the default budget
    #[arg(long)]
    budget_override: bool,
    #[arg(long)]
    json: bool,
    /// Report wall_ms as 0 so output is reproducible byte for byte
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Auto,
    Naive,
    Digit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalize {
    Sqrt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Eta,
    EtaShifted,
    Tm,
    TEta,
    EtaSquared,
    EtaEtaShifted,
    One,
}

fn parse_seq(s: &str) -> Result<SequenceId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LevelOutOfRange { .. } => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(source: &RepSource) -> Result<LinearRep, Failure> {
    if let Some(path) = &source.rep {
        return Ok(RepFile::load(path)?.to_rep()?);
    }
    Ok(match source.builtin.expect("clap enforces one source") {
        Builtin::Eta => builtin::eta(),
        Builtin::EtaShifted => builtin::eta_shifted(),
        Builtin::Tm => builtin::thue_morse(),
        Builtin::TEta => builtin::t_eta(),
        Builtin::EtaSquared => builtin::eta_squared(),
        Builtin::EtaEtaShifted => builtin::eta_eta_shifted(),
        Builtin::One => builtin::one(2),
    })
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Eta { m, json } => {
            let v = eta(m);
            Ok(if json {
                json_line(&json!({"m": m, "value": v.to_string(), "float": v.to_f64()}))
            } else {
                format!("{v}\n")
            })
        }
        Command::Sum {
            source,
            x,
            block,
            engine,
            json,
        } => {
            let rep = load(&source)?;
            let v = match (x, block) {
                (_, Some(j)) => block_sum(&rep, j)?,
                (Some(x), None) => match engine {
                    Engine::Auto => regseq::linrep::partial_sum(&rep, x),
                    Engine::Naive => partial_sum_with(&rep, x, SumEngine::Naive)?,
                    Engine::Digit => partial_sum_with(&rep, x, SumEngine::DigitRecursive)?,
                },
                (None, None) => unreachable!("clap requires --x or --block"),
            };
            Ok(if json {
                json_line(&json!({"value": v.to_string(), "float": v.to_f64()}))
            } else {
                format!("{v}\n")
            })
        }
        Command::Twist {
            seq,
            x_max,
            normalize,
            json,
        } => twist(seq, x_max, normalize, json),
        Command::Exponent {
            source,
            lift,
            jsr_depth,
            json,
        } => {
            let mut rep = load(&source)?;
            if lift > 1 {
                rep = power_lift(&rep, lift)?;
            }
            let (exponent, r) = dumas_exponent(&rep, jsr_depth)?;
            if json {
                let mut v = serde_json::to_value(&r).map_err(Error::from)?;
                v["exponent"] = json!(exponent);
                v["radix"] = json!(rep.digit_mats().len());
                return Ok(json_line(&v));
            }
            let mut out = String::from(
                "exponent,rho,unique_dominant,algebraic_mult,geometric_mult,jsr_lower,jsr_upper,dumas_applicable,char_poly\n",
            );
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                sig17(exponent),
                sig17(r.rho),
                r.unique_dominant,
                r.algebraic_mult,
                r.geometric_mult,
                sig17(r.jsr_lower),
                sig17(r.jsr_upper),
                r.dumas_applicable,
                r.char_poly.join(" ")
            )
            .unwrap();
            Ok(out)
        }
        Command::LowerTable(args) => lower_table(&args),
        Command::UpperTable(args) => upper_table(&args),
        Command::Dims { terms, json } => {
            let c = correlation_dimension()?;
            let i = information_dimension(terms)?;
            if json {
                return Ok(json_line(&json!({"correlation": c, "information": i})));
            }
            let mut out = String::from("quantity,value\n");
            for (name, v) in [
                ("correlation_closed_form", c.closed_form),
                ("correlation_empirical", c.empirical),
                ("correlation_naive_slope", c.naive_slope),
                ("information_estimate", i.estimate),
                ("information_tail_bound", i.tail_bound),
            ] {
                writeln!(out, "{name},{}", sig17(v)).unwrap();
            }
            Ok(out)
        }
        Command::ValidateRep { rep, json } => {
            let report = RepFile::load(&rep)?.check();
            Ok(if json {
                json_line(&serde_json::to_value(report).map_err(Error::from)?)
            } else {
                format!(
                    "shapes_ok,leading_zero_invariant\n{},{}\n",
                    report.shapes_ok, report.leading_zero_invariant
                )
            })
        }
    }
}

fn twist(
    seq: SequenceId,
    x_max: u64,
    normalize: Option<Normalize>,
    json: bool,
) -> Result<String, Failure> {
    let series = twisted_sum_series(seq, x_max)?;
    let float = |x: u64| match normalize {
        Some(Normalize::Sqrt) => series.sqrt_normalized(x),
        None => series.value_f64(x),
    };
    let mut out = String::with_capacity(48 * series.len());
    if json {
        let rows: Vec<Value> = (0..=x_max)
            .map(|x| {
                let (p, q) = series.reduced(x);
                json!({"x": x, "value_num": p.to_string(), "value_den": q.to_string(), "value_float": float(x)})
            })
            .collect();
        out.push_str(&json_line(&json!({"seq": seq.to_string(), "rows": rows})));
    } else {
        out.push_str("x,value_num,value_den,value_float\n");
        for x in 0..=x_max {
            let (p, q) = series.reduced(x);
            writeln!(out, "{x},{p},{q},{}", sig17(float(x))).unwrap();
        }
    }
    Ok(out)
}

fn table_config(
    args: &TableArgs,
    what: &'static str,
    default_min: u32,
    default_max: u32,
    override_max: u32,
) -> Result<(EnumConfig, u32, u32), Failure> {
    let n_min = args.n_min.unwrap_or(default_min);
    let n_max = args.n_max.unwrap_or(default_max.max(n_min));
    if n_min == 0 || n_min > n_max {
        return Err(Failure::Usage(format!(
            "--n-min {n_min} and --n-max {n_max} do not form a range of positive levels"
        )));
    }
    let cfg = EnumConfig {
        parallelism: args
            .threads
            .map_or_else(Parallelism::available, Parallelism::new),
        budget_override: args.budget_override,
        ..EnumConfig::default()
    };
    cfg.check_level(what, n_max, default_max, override_max)?;
    Ok((cfg, n_min, n_max))
}

fn lower_table(args: &TableArgs) -> Result<String, Failure> {
    let (cfg, n_min, n_max) = table_config(
        args,
        "lower-bound table",
        3,
        LOWER_DEFAULT_MAX,
        LOWER_OVERRIDE_MAX,
    )?;
    let rows = (n_min..=n_max)
        .map(|n| lower_bound_row_with(n, &cfg))
        .collect::<Result<Vec<LowerRow>, _>>()?;
    let ms = |r: &LowerRow| if args.no_timing { 0 } else { r.wall_ms() };
    if args.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "statistic_exact": r.statistic_exact(),
                    "statistic_float": r.rho,
                    "log_value": r.log_value,
                    "dominant_ok": r.checks.dominant_ok,
                    "rho_gt_2": r.checks.rho_gt_2,
                    "jsr_guard_ok": r.checks.jsr_guard_ok,
                    "margin": r.checks.margin,
                    "rho_interval": r.rho_interval.as_ref().map(|(lo, hi)| [lo.to_string(), hi.to_string()]),
                    "wall_ms": ms(r) as u64,
                })
            })
            .collect();
        return Ok(json_line(&Value::Array(rows)));
    }
    let mut out =
        String::from("n,statistic_exact,statistic_float,log_value,dominant_ok,rho_gt_2,wall_ms\n");
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.statistic_exact(),
            sig17(r.rho),
            sig17(r.log_value),
            r.checks.dominant_ok,
            r.checks.rho_gt_2,
            ms(r)
        )
        .unwrap();
    }
    Ok(out)
}

fn upper_table(args: &TableArgs) -> Result<String, Failure> {
    let (cfg, n_min, n_max) = table_config(
        args,
        "upper-bound table",
        1,
        UPPER_DEFAULT_MAX,
        UPPER_OVERRIDE_MAX,
    )?;
    let rows = (n_min..=n_max)
        .map(|n| rn_abs_norm_with(n, &cfg))
        .collect::<Result<Vec<UpperRow>, _>>()?;
    let ms = |r: &UpperRow| if args.no_timing { 0 } else { r.wall_ms() };
    if args.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "norm_num": r.norm.numerator().to_string(),
                    "norm_exp2": r.norm.exponent(),
                    "norm_float": r.norm_float,
                    "log_value": r.log_value,
                    "wall_ms": ms(r) as u64,
                })
            })
            .collect();
        return Ok(json_line(&Value::Array(rows)));
    }
    let mut out = String::from("n,norm_num,norm_exp2,norm_float,log_value,wall_ms\n");
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.norm.numerator(),
            r.norm.exponent(),
            sig17(r.norm_float),
            sig17(r.log_value),
            ms(r)
        )
        .unwrap();
    }
    Ok(out)
}
