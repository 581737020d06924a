use std::fmt;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use primemeans::catalog::{catalog_table, CatalogRow};
use primemeans::quantity::format_sig;
use primemeans::series::{self, cipolla, format_ratio_expansion, CipollaKind, SeriesError};
use primemeans::sieve::SieveConfig;
use primemeans::verifier::{self, Outcome, RunOptions, VerificationJob, VerifyError};
use primemeans::{Precision, PrimeState, PrimeStream, Quantity};
use serde::Serialize;

use crate::{Command, Format, OutputArgs, RunArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verify(VerifyError),
    Io(std::io::Error),
    Other(String),
}

impl CliError {
    /// 2 for usage and configuration errors, 3 for failures during a run.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Verify(e) => match e {
                VerifyError::UnknownBound(_)
                | VerifyError::BadStart
                | VerifyError::CapacityExceeded { .. }
                | VerifyError::BadCapacity(_)
                | VerifyError::HashMismatch { .. }
                | VerifyError::Corrupt(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            },
            CliError::Io(_) | CliError::Other(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Other(m) => f.write_str(m),
            CliError::Verify(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Verify(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Constants { order, format } => constants(order, format),
        Command::Expand { order } => {
            println!("{}", format_ratio_expansion(&series::ratio_expansion(order)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Tabulate {
            n,
            from,
            to,
            step,
            precision,
            format,
        } => tabulate(n, from, to, step, precision, format),
        Command::Verify(args) => verify(args),
        Command::Crossover { bound, to, precision } => {
            match verifier::crossover(&bound, to, precision, &RunOptions::default())? {
                Some(n) => println!("{n}"),
                None => println!("none: {bound} does not hold at n = {to}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Monotone {
            from,
            to,
            precision,
            format,
        } => monotone(from, to, precision, format),
        Command::Resume {
            checkpoint,
            run,
            output,
        } => {
            let opts = run_options(&run, Some(checkpoint.clone()))?;
            let outcome = verifier::resume(&checkpoint, None, &opts)?;
            finish_run(outcome, &output, Some(&checkpoint))
        }
        Command::Catalog { format } => catalog(format),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

#[derive(Serialize)]
struct Constants {
    k: Vec<String>,
    r: Vec<String>,
    q: Vec<String>,
    r_poly: Vec<String>,
    t: Vec<String>,
}

fn constants(order: usize, format: Format) -> Result<ExitCode> {
    let k: Vec<String> = series::k_sequence(order)?.iter().map(|v| v.to_string()).collect();
    let r: Vec<String> = series::r_sequence(order)?.iter().map(|v| v.to_string()).collect();
    let polys = |kind| -> Result<Vec<String>> { (1..=3).map(|i| Ok(cipolla(kind, i)?.to_string())).collect() };
    let c = Constants {
        k,
        r,
        q: polys(CipollaKind::Q)?,
        r_poly: polys(CipollaKind::R)?,
        t: polys(CipollaKind::T)?,
    };
    let text = match format {
        Format::Json => json(&c),
        Format::Text | Format::Csv => {
            let mut s = format!("k: {}\nr: {}\n", c.k.join(", "), c.r.join(", "));
            for (name, list) in [("Q", &c.q), ("R", &c.r_poly), ("T", &c.t)] {
                for (i, p) in list.iter().enumerate() {
                    s.push_str(&format!("{name}_{} = {p}\n", i + 1));
                }
            }
            s
        }
    };
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Row {
    n: u64,
    p: u64,
    a: Quantity,
    g: Quantity,
    d: Quantity,
    r: Quantity,
    ratio: Quantity,
}

fn rows(wanted: &[u64], precision: Precision) -> Result<Vec<Row>> {
    let mut out = Vec::with_capacity(wanted.len());
    let mut state = PrimeState::empty(precision);
    let mut stream = PrimeStream::new(SieveConfig::default());
    for &n in wanted {
        while state.n() < n {
            let p = stream.next().expect("primes are unbounded");
            state = state.try_advance(p).map_err(|e| CliError::Other(e.to_string()))?;
        }
        let q = state.quantities().map_err(|e| CliError::Other(e.to_string()))?;
        out.push(Row {
            n: q.n,
            p: q.p,
            a: q.a,
            g: q.g,
            d: q.d,
            r: q.r,
            ratio: q.ratio,
        });
    }
    Ok(out)
}

fn tabulate(n: Vec<u64>, from: u64, to: u64, step: u64, precision: Precision, format: Format) -> Result<ExitCode> {
    let mut wanted = if n.is_empty() {
        if from == 0 || step == 0 {
            return Err(CliError::Usage("--from and --step must be at least 1".into()));
        }
        (from..=to).step_by(step as usize).collect()
    } else {
        n
    };
    if wanted.contains(&0) {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let cap = verifier::capacity()?;
    if let Some(&max) = wanted.iter().max() {
        if max > cap {
            return Err(VerifyError::CapacityExceeded {
                limit: max,
                capacity: cap,
            }
            .into());
        }
    }
    wanted.sort_unstable();
    wanted.dedup();
    let rows = rows(&wanted, precision)?;
    let text = match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "p_n",
                "A_n",
                "A_n_err",
                "G_n",
                "G_n_err",
                "D",
                "D_err",
                "R",
                "R_err",
                "ratio",
                "ratio_err",
            ])?;
            for r in &rows {
                let mut rec = vec![r.n.to_string(), r.p.to_string()];
                for q in [r.a, r.g, r.d, r.r, r.ratio] {
                    rec.push(format_sig(q.value, 15));
                    rec.push(format!("{:.1e}", q.error));
                }
                w.write_record(&rec)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Other(e.to_string()))?).expect("utf-8")
        }
        Format::Text => {
            let mut s = String::from("n\tp_n\tA_n\tG_n\tD(n)\tR(n)\tA_n/G_n\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.n, r.p, r.a, r.g, r.d, r.r, r.ratio
                ));
            }
            s
        }
    };
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run_options(run: &RunArgs, checkpoint: Option<std::path::PathBuf>) -> Result<RunOptions> {
    let sieve = match run.segment_bits {
        Some(bits) => SieveConfig::new(bits).map_err(|e| CliError::Usage(e.to_string()))?,
        None => SieveConfig::default(),
    };
    Ok(RunOptions {
        sieve,
        checkpoint,
        checkpoint_interval: run.checkpoint_every,
        halt_at: run.halt_at,
    })
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let bounds = if args.bound.is_empty() {
        primemeans::catalog().iter().map(|b| b.id.to_string()).collect()
    } else {
        args.bound
    };
    if args.from.is_some_and(|f| f > args.to) {
        return Err(CliError::Usage("--from exceeds --to".into()));
    }
    let job = VerificationJob::new(bounds, args.from, args.to, args.precision);
    let opts = run_options(&args.run, args.checkpoint.clone())?;
    let outcome = verifier::run(&job, &opts)?;
    finish_run(outcome, &args.output, args.checkpoint.as_deref())
}

fn finish_run(outcome: Outcome, output: &OutputArgs, checkpoint: Option<&Path>) -> Result<ExitCode> {
    let Outcome { report, stats, halted } = outcome;
    let text = match output.format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json(),
    };
    emit(output.out.as_deref(), &text)?;
    eprintln!(
        "{} primes in {:.3} s ({:.3e} primes/s), {} bound evaluations",
        stats.primes,
        stats.elapsed.as_secs_f64(),
        stats.primes_per_second(),
        stats.evaluations
    );
    if halted {
        match checkpoint {
            Some(p) => eprintln!("halted before the limit; checkpoint written to {}", p.display()),
            None => eprintln!("halted before the limit; no checkpoint path was given"),
        }
    }
    Ok(if report.has_violations() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn monotone(from: u64, to: u64, precision: Precision, format: Format) -> Result<ExitCode> {
    let m = verifier::monotone_check(from, to, precision, &RunOptions::default())?;
    let text = match format {
        Format::Json => json(&serde_json::json!({
            "from": from,
            "to": to,
            "non_decreasing": m.non_decreasing,
            "indeterminate": m.indeterminate,
        })),
        Format::Csv => {
            let mut s = String::from("n,comparison\n");
            for n in &m.non_decreasing {
                s.push_str(&format!("{n},non_decreasing\n"));
            }
            for n in &m.indeterminate {
                s.push_str(&format!("{n},indeterminate\n"));
            }
            s
        }
        Format::Text => {
            let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
            format!(
                "n in [{from}, {to}) with A_(n+1)/G_(n+1) >= A_n/G_n: {}\nundecided pairs: {}\n",
                if m.non_decreasing.is_empty() {
                    "none".into()
                } else {
                    list(&m.non_decreasing)
                },
                if m.indeterminate.is_empty() {
                    "none".into()
                } else {
                    list(&m.indeterminate)
                },
            )
        }
    };
    emit(None, &text)?;
    Ok(if m.non_decreasing.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn catalog(format: Format) -> Result<ExitCode> {
    let rows: Vec<CatalogRow> = catalog_table();
    let text = match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "id",
                "statement",
                "claimed_start",
                "claimed_end",
                "exploratory",
                "coefficients",
            ])?;
            for r in &rows {
                w.write_record([
                    r.id.to_string(),
                    r.statement.clone(),
                    r.claimed.start.to_string(),
                    r.claimed.end.map_or(String::new(), |e| e.to_string()),
                    r.exploratory.to_string(),
                    r.coefficients.join(" "),
                ])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Other(e.to_string()))?).expect("utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let tag = if r.exploratory { " [exploratory]" } else { "" };
                s.push_str(&format!("{}{}: {} for {}\n", r.id, tag, r.statement, r.claimed));
                if let Some(note) = r.note {
                    s.push_str(&format!("    note: {note}\n"));
                }
            }
            s
        }
    };
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}
