use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use starlike::coxeter::{coxeter_polynomial, p_polynomial, qrs_blocks};
use starlike::factorize::{
    factor_coxeter, mann_modulus, multiplicity_bound, salem_degree_lower_bound, verify_mann,
    FactorizationRecord,
};
use starlike::roots::{certify, converge_general, converge_mbonacci, ConvergenceRecord};
use starlike::scan::{grid_verify, periodicity_scan};
use starlike::{Error, StarTree};

mod output;

use output::{Format, Sink};

#[derive(Parser)]
#[command(name = "starlike", version, about = "Coxeter polynomials of star-like trees")]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Shorthand for --format json.
    #[arg(long, global = true, conflicts_with = "format")]
    json: bool,
    /// Write data here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print R_T, P and (for three arms) the Q/R/S blocks.
    Poly {
        #[arg(required = true, num_args = 2..)]
        arms: Vec<u32>,
    },
    /// Split R_T into cyclotomic factors and a Salem or Pisot factor.
    Factor {
        #[arg(required = true, num_args = 2..)]
        arms: Vec<u32>,
        #[arg(long, default_value_t = 30, value_parser = parse_digits)]
        digits: u32,
    },
    /// Dominant roots of a family against the limit.
    Converge {
        #[command(subcommand)]
        mode: ConvergeMode,
    },
    /// Which Phi_k divide R_T(a0, a1, a1 + eta), and the residue-class law.
    Scan {
        #[arg(long, default_value_t = 2)]
        a0: u32,
        #[arg(long, default_value_t = 1)]
        eta: u32,
        #[arg(long, default_value_t = 64)]
        k_max: u32,
        /// a1 range, `lo..hi` inclusive
        #[arg(long, default_value = "4..132", value_parser = parse_range)]
        a1: RangeInclusive<u32>,
    },
    /// Verify every bound on a grid of strictly ordered triples.
    Grid {
        #[arg(long, default_value = "2..15", value_parser = parse_range)]
        a0: RangeInclusive<u32>,
        #[arg(long, default_value = "2..15", value_parser = parse_range)]
        a1: RangeInclusive<u32>,
        #[arg(long, default_value = "2..15", value_parser = parse_range)]
        a2: RangeInclusive<u32>,
    },
    /// The multiplicity constant m(a0, delta) with its full trace.
    Bound { a0: u32, delta: u32 },
    /// Roots of unity solving a z^p + b z^q + c = 0.
    #[command(allow_negative_numbers = true)]
    Mann {
        a: i64,
        b: i64,
        c: i64,
        p: i64,
        q: i64,
        /// Largest order searched; default max(72, 2 * 6 gcd(p, q)).
        #[arg(long)]
        search: Option<u64>,
    },
}

#[derive(Subcommand)]
enum ConvergeMode {
    /// T(a0, a1, a1 + eta) against the a0-bonacci constant.
    Mbonacci {
        #[arg(long)]
        a0: u32,
        #[arg(long, default_value_t = 1)]
        eta: u32,
        #[arg(long, value_delimiter = ',', default_value = "10,20,30,40")]
        a1: Vec<u32>,
        #[arg(long, default_value_t = 30, value_parser = parse_digits)]
        digits: u32,
    },
    /// T(prefix, tail) for each tail against the limit polynomial's root.
    General {
        #[arg(long, value_delimiter = ',', required = true)]
        prefix: Vec<u32>,
        /// index of the last arm
        #[arg(long)]
        r: usize,
        /// comma-separated tail, repeatable: --tail 10,11 --tail 20,21
        #[arg(long = "tail", required = true, value_parser = parse_list)]
        tails: Vec<Vec<u32>>,
        #[arg(long, default_value_t = 30, value_parser = parse_digits)]
        digits: u32,
    },
}

fn parse_digits(s: &str) -> Result<u32, String> {
    let d: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if d < 10 {
        return Err("digits must be at least 10".into());
    }
    Ok(d)
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok(lo..=hi)
        }
        None => num(s).map(|v| v..=v),
    }
}

fn parse_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

/// Exit status for a library error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidTree(_) | Error::Arity { .. } | Error::Order(_) | Error::InvalidArgument(_) => 2,
        Error::Classification { .. } | Error::PeriodicityViolation { .. } => 3,
        _ => 1,
    }
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
    ChecksFailed(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn tree(arms: &[u32]) -> Result<StarTree, Error> {
    StarTree::new(arms.to_vec())
}

fn warn_unordered(t: &StarTree) {
    if !t.is_strictly_ordered() {
        eprintln!("warning: {t} does not have strictly increasing arms; outside the Salem-factor hypotheses");
    }
}

fn cmd_poly(sink: &mut Sink, arms: &[u32]) -> Result<(), Failure> {
    let t = tree(arms)?;
    warn_unordered(&t);
    let r_t = coxeter_polynomial(&t)?;
    let p = p_polynomial(&t);
    let blocks = (t.r() == 2 && t.is_strictly_ordered())
        .then(|| qrs_blocks(&t))
        .transpose()?;
    match sink.format(Format::Text) {
        Format::Json => sink.json(&json!({
            "arms": t.arms(),
            "coxeter": r_t,
            "coxeter_degree": r_t.degree(),
            "p": p,
            "blocks": blocks,
        })),
        _ => {
            let mut s = format!("tree  {t}\nR_T   {r_t}\n      {}\nP     {p}\n", output::coeff_list(&r_t));
            if let Some(b) = blocks {
                s += &format!(
                    "Q     {}\nR     {}\nS     {}\nP = z^{} Q + z^{} R + S\n",
                    b.q, b.r, b.s, b.high_shift, b.mid_shift
                );
            }
            sink.text(&s)
        }
    }
}

fn cmd_factor(sink: &mut Sink, arms: &[u32], digits: u32) -> Result<(), Failure> {
    let t = tree(arms)?;
    warn_unordered(&t);
    let fac = factor_coxeter(&t)?;
    let lower = if t.in_three_arm_setting() {
        let a = t.arms();
        let m = multiplicity_bound(a[0], a[2] - a[1])?.m;
        Some(salem_degree_lower_bound(&t, &m)?)
    } else {
        None
    };
    let record = FactorizationRecord::new(&fac, lower);
    let cert = certify(&fac, digits)?;
    match sink.format(Format::Text) {
        Format::Json => {
            let mut v = serde_json::to_value(&record).expect("record serializes");
            v["certificate"] = serde_json::to_value(&cert).expect("certificate serializes");
            sink.json(&v)
        }
        _ => {
            let cyc: Vec<String> = record
                .cyclotomic
                .iter()
                .map(|c| match c.multiplicity {
                    1 => format!("Phi_{}", c.order),
                    m => format!("Phi_{}^{m}", c.order),
                })
                .collect();
            let mut s = format!(
                "tree            {t}\nclassification  {:?}\ncyclotomic      {}\nremainder       {}\ndegree          {}\norder bound     {}{}\nunramified      {}\n",
                record.classification,
                if cyc.is_empty() { "none".into() } else { cyc.join(" ") },
                record.salem_coeffs,
                record.salem_degree,
                record.order_bound,
                if fac.order_bound_proved { "" } else { " (degree cap)" },
                record.unramified,
            );
            if let Some(lb) = record.degree_lower_bound {
                s += &format!("degree bound    {lb}\n");
            }
            if let Some(c) = cert {
                s += &format!(
                    "tau             {}\nlambda          {:.15}\nbridge gap      {:e}\nunit residual   {:e}\n",
                    c.tau, c.lambda, c.bridge_gap, c.unit_residual
                );
            }
            sink.text(&s)
        }
    }
}

fn write_convergence(sink: &mut Sink, recs: &[ConvergenceRecord]) -> Result<(), Failure> {
    for r in recs.iter().filter(|r| r.note.is_some()) {
        let arms: Vec<String> = r.arms.iter().map(u32::to_string).collect();
        eprintln!("note: T({}) skipped, {}", arms.join(","), r.note.as_deref().unwrap_or(""));
    }
    match sink.format(Format::Csv) {
        Format::Json => sink.json(&serde_json::to_value(recs).expect("records serialize")),
        _ => {
            let rows = recs.iter().map(|r| {
                let arms: Vec<String> = r.arms.iter().map(u32::to_string).collect();
                [
                    arms.join(" "),
                    r.tau.as_ref().map(ToString::to_string).unwrap_or_default(),
                    r.limit.to_string(),
                    r.gap.as_ref().map(ToString::to_string).unwrap_or_default(),
                ]
            });
            sink.csv(&["a_arms", "tau", "limit", "gap"], rows)
        }
    }
}

fn cmd_scan(
    sink: &mut Sink,
    a0: u32,
    eta: u32,
    k_max: u32,
    a1: RangeInclusive<u32>,
) -> Result<(), Failure> {
    let recs = periodicity_scan(a0, eta, k_max, a1)?;
    match sink.format(Format::Csv) {
        Format::Json => sink.json(&serde_json::to_value(&recs).expect("records serialize")),
        _ => {
            let rows = recs.iter().map(|r| {
                [
                    r.a0.to_string(),
                    r.eta.to_string(),
                    r.a1.to_string(),
                    r.k.to_string(),
                    r.a1_mod_k.to_string(),
                    r.divides.to_string(),
                ]
            });
            sink.csv(&["a0", "eta", "a1", "k", "a1_mod_k", "divides"], rows)
        }
    }
}

fn cmd_grid(
    sink: &mut Sink,
    a0: RangeInclusive<u32>,
    a1: RangeInclusive<u32>,
    a2: RangeInclusive<u32>,
) -> Result<(), Failure> {
    let summary = grid_verify(a0, a1, a2);
    let v = serde_json::to_value(&summary).expect("summary serializes");
    let written: Result<(), Failure> = match sink.format(Format::Json) {
        Format::Text => sink.text(&format!(
            "triples {}  checked {}  passed {}  failed {}  skipped {}\nmax order {}  max multiplicity {}  vacuous degree bounds {}\n{}",
            summary.triples,
            summary.checked,
            summary.passed,
            summary.failed,
            summary.skipped,
            summary.max_observed_order,
            summary.max_observed_multiplicity,
            summary.vacuous_degree_bounds,
            summary.failures.iter().map(|f| format!("FAIL {f}\n")).collect::<String>(),
        )),
        _ => sink.json(&v),
    };
    written?;
    if summary.failed > 0 {
        return Err(Failure::ChecksFailed(summary.failed));
    }
    Ok(())
}

fn cmd_bound(sink: &mut Sink, a0: u32, delta: u32) -> Result<(), Failure> {
    let trace = multiplicity_bound(a0, delta)?;
    sink.json(&serde_json::to_value(&trace).expect("trace serializes"))
}

fn cmd_mann(sink: &mut Sink, coeffs: [i64; 5], search: Option<u64>) -> Result<(), Failure> {
    let [a, b, c, p, q] = coeffs;
    let modulus = mann_modulus(p, q);
    let search = search.unwrap_or_else(|| (2 * modulus).max(72));
    let w = verify_mann(a, b, c, p, q, search)?;
    let all_divide = w.iter().all(|w| modulus % w.order == 0);
    match sink.format(Format::Json) {
        Format::Text => {
            let mut s = format!("6 gcd(p, q) = {modulus}, searched orders <= {search}\n");
            for w in &w {
                s += &format!("order {:>4}  exp(2 pi i {}/{})\n", w.order, w.exponent, w.order);
            }
            s += &format!("{} solutions, all orders divide {modulus}: {all_divide}\n", w.len());
            sink.text(&s)
        }
        _ => sink.json(&json!({
            "equation": {"a": a, "b": b, "c": c, "p": p, "q": q},
            "modulus": modulus,
            "search_order": search,
            "witnesses": w,
            "all_divide": all_divide,
        })),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = match (cli.out.json, cli.out.format) {
        (true, _) => Some(Format::Json),
        (false, Some(FormatArg::Csv)) => Some(Format::Csv),
        (false, Some(FormatArg::Json)) => Some(Format::Json),
        (false, Some(FormatArg::Text)) => Some(Format::Text),
        (false, None) => None,
    };
    let mut sink = Sink::new(format, cli.out.output)?;
    match cli.command {
        Command::Poly { arms } => cmd_poly(&mut sink, &arms)?,
        Command::Factor { arms, digits } => cmd_factor(&mut sink, &arms, digits)?,
        Command::Converge { mode } => {
            let recs = match mode {
                ConvergeMode::Mbonacci { a0, eta, a1, digits } => {
                    converge_mbonacci(a0, eta, &a1, digits)?
                }
                ConvergeMode::General {
                    prefix,
                    r,
                    tails,
                    digits,
                } => converge_general(&prefix, r, &tails, digits)?,
            };
            write_convergence(&mut sink, &recs)?
        }
        Command::Scan { a0, eta, k_max, a1 } => cmd_scan(&mut sink, a0, eta, k_max, a1)?,
        Command::Grid { a0, a1, a2 } => cmd_grid(&mut sink, a0, a1, a2)?,
        Command::Bound { a0, delta } => cmd_bound(&mut sink, a0, delta)?,
        Command::Mann { a, b, c, p, q, search } => cmd_mann(&mut sink, [a, b, c, p, q], search)?,
    }
    sink.finish()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::ChecksFailed(n)) => {
            eprintln!("error: {n} triples failed verification");
            ExitCode::FAILURE
        }
    }
}
