//! `sumrules`: zero tables, identity verification, moment lists, Stark
//! comparisons and plot data from the command line.
//!
//! Exit codes: 0 all checks pass, 1 a verification or accuracy failure,
//! 2 a usage error.

mod config;
mod output;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use parity_sumrules::matelem::moment_table;
use parity_sumrules::spectra::{zero_table, Parity, SpectralPoint, SystemId, ZeroKind};
use parity_sumrules::stark::{
    fig1_series, pt1_half_sho, pt2_shift, pt2_shift_with, semiclassical_density_check,
    stark_linear_closed_form, stark_linear_wkb, wkb_half_sho, write_fig1_csv, Fig1Row,
    StarkResult,
};
use parity_sumrules::sumrules::{
    registry, write_reports_csv, IdentityRecord, SumEngine, VerificationReport, Verifier,
};
use parity_sumrules::Error as CoreError;

use config::{parse_tail_flag, parse_tolerance, Format, Overrides, RunConfig};
use output::{open_output, Table};

#[derive(Parser)]
#[command(name = "sumrules", version, about = "Sum-rule, matrix-element and Stark-shift checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
struct Common {
    /// Flat key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Indices summed term by term before the tail estimate.
    #[arg(long)]
    explicit_terms: Option<usize>,
    /// Zeros up to this index are Newton-refined.
    #[arg(long)]
    refine_upto: Option<usize>,
    /// Tail treatment: integral_euler_maclaurin or none.
    #[arg(long, value_parser = parse_tail_flag)]
    tail: Option<parity_sumrules::sumrules::TailMethod>,
    /// Tolerance override ID=VALUE (identity or report id); repeatable.
    #[arg(long = "tol", value_parser = parse_tolerance)]
    tol: Vec<(String, f64)>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let overrides = Overrides {
            explicit_terms: self.explicit_terms,
            refine_upto: self.refine_upto,
            tail: self.tail,
            tolerances: self.tol.clone(),
            format: self.format,
            output: self.output.clone(),
        };
        RunConfig::resolve(self.config.as_deref(), &overrides)
    }
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum KindArg {
    Ai,
    Aiprime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Odd => Parity::Odd,
            ParityArg::Even => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum SystemArg {
    Linear,
    Halfsho,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate zeros of Ai or Ai'.
    Zeros {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        count: usize,
        /// Newton-refine up to this index (default: min(count, 200)).
        #[arg(long)]
        refine_upto: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify registered identities over a range of states.
    Verify {
        /// Identity id; repeatable.
        #[arg(long, conflicts_with = "all")]
        id: Vec<String>,
        /// Verify every registered identity.
        #[arg(long)]
        all: bool,
        /// State range `a..b` (inclusive) or a single index.
        #[arg(long, value_parser = parse_range)]
        n: Option<RangeInclusive<usize>>,
        #[command(flatten)]
        common: Common,
    },
    /// Print exact moment expressions <|y|^p> of the symmetric linear potential.
    Moments {
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        max_p: u32,
        /// State whose eigenvalue is used for the numeric column.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Second-order Stark shifts: closed forms, perturbation sums and WKB.
    Stark {
        #[arg(long, value_enum)]
        system: SystemArg,
        /// Required for the linear system.
        #[arg(long, value_enum)]
        parity: Option<ParityArg>,
        #[arg(long, value_parser = parse_range)]
        n: Option<RangeInclusive<usize>>,
        #[command(flatten)]
        common: Common,
    },
    /// WKB versus perturbation theory for the half oscillator, n = 0..=n_max.
    Fig1 {
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run every identity plus the Stark and density checks and summarize.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad index `{t}` in `{s}`: {e}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

/// Usage errors exit with 2, accuracy failures with 1.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Accuracy { .. }) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Zeros {
            kind,
            count,
            refine_upto,
            format,
            output,
        } => cmd_zeros(kind, count, refine_upto, format, output),
        Command::Verify { id, all, n, common } => cmd_verify(&id, all, n, &common),
        Command::Moments {
            parity,
            max_p,
            n,
            format,
            output,
        } => cmd_moments(parity.into(), max_p, n, format, output),
        Command::Stark {
            system,
            parity,
            n,
            common,
        } => cmd_stark(system, parity, n, &common),
        Command::Fig1 { n_max, common } => cmd_fig1(n_max, &common),
        Command::Report { common } => cmd_report(&common),
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_zeros(
    kind: KindArg,
    count: usize,
    refine_upto: Option<usize>,
    format: Option<Format>,
    output: Option<PathBuf>,
) -> Result<bool> {
    let kind = match kind {
        KindArg::Ai => ZeroKind::AiZero,
        KindArg::Aiprime => ZeroKind::AiPrimeZero,
    };
    if count == 0 {
        bail!(CoreError::Argument("--count must be at least 1".into()));
    }
    let refine = refine_upto.unwrap_or(count.min(200));
    let table = zero_table::<f64>(kind, count, refine)?;
    let mut out = open_output(output.as_deref())?;
    match format.unwrap_or(Format::Table) {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Jsonl => {
            #[derive(Serialize)]
            struct Row<'a> {
                kind: &'a str,
                k: usize,
                value: f64,
                refined: bool,
            }
            for (i, &value) in table.values.iter().enumerate() {
                let row = Row {
                    kind: kind.as_str(),
                    k: i + 1,
                    value,
                    refined: i < refine,
                };
                writeln!(out, "{}", serde_json::to_string(&row)?)?;
            }
        }
        Format::Table => {
            let mut t = Table::new(["k", "value", "refined"]);
            for (i, &v) in table.values.iter().enumerate() {
                t.row([(i + 1).to_string(), fmt17(v), (i < refine).to_string()]);
            }
            t.write(&mut out)?;
        }
    }
    out.flush()?;
    Ok(true)
}

fn default_range(record: &IdentityRecord) -> RangeInclusive<usize> {
    let first = record.first_index();
    first..=first + 19
}

fn select_records(ids: &[String], all: bool) -> Result<Vec<IdentityRecord>> {
    let reg = registry();
    if all {
        return Ok(reg);
    }
    if ids.is_empty() {
        bail!(CoreError::Argument("give --id ID or --all".into()));
    }
    ids.iter()
        .map(|id| {
            reg.iter()
                .find(|r| r.id == id)
                .cloned()
                .ok_or_else(|| anyhow!(CoreError::UnknownIdentity(id.clone())))
        })
        .collect()
}

/// Runs each record over its range on its own thread; results keep registry order.
fn run_verification(
    verifier: &Verifier,
    records: &[IdentityRecord],
    range: Option<&RangeInclusive<usize>>,
) -> Result<Vec<VerificationReport>> {
    if let Some(r) = range {
        for rec in records {
            if *r.start() < rec.first_index() && records.len() == 1 {
                bail!(CoreError::Index(format!(
                    "{} is indexed from n = {}",
                    rec.id,
                    rec.first_index()
                )));
            }
        }
    }
    let results: Vec<parity_sumrules::Result<Vec<VerificationReport>>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = records
                .iter()
                .map(|rec| {
                    let range = range.cloned().unwrap_or_else(|| default_range(rec));
                    scope.spawn(move || {
                        let mut rows = Vec::new();
                        for n in range.filter(|&n| n >= rec.first_index()) {
                            rows.extend(verifier.verify_record(rec, n)?);
                        }
                        Ok(rows)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification thread panicked"))
                .collect()
        });
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}

fn write_reports(cfg: &RunConfig, reports: &[VerificationReport]) -> Result<()> {
    let mut out = open_output(cfg.output.as_deref())?;
    match cfg.format.unwrap_or(Format::Jsonl) {
        Format::Jsonl => {
            for r in reports {
                writeln!(out, "{}", r.to_json_line())?;
            }
        }
        Format::Csv => write_reports_csv(&mut out, reports)?,
        Format::Table => {
            let mut t = Table::new(["id", "n", "lhs", "rhs", "rel_res", "abs_res", "pass"]);
            for r in reports {
                t.row([
                    r.id.clone(),
                    r.n.to_string(),
                    fmt17(r.lhs),
                    fmt17(r.rhs),
                    format!("{:.3e}", r.rel_res),
                    format!("{:.3e}", r.abs_res),
                    r.pass.to_string(),
                ]);
            }
            t.write(&mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn list_failures(reports: &[VerificationReport]) -> bool {
    let mut ok = true;
    for r in reports.iter().filter(|r| !r.pass) {
        ok = false;
        eprintln!(
            "FAIL {} n={} lhs={} rhs={} rel_res={:e} abs_res={:e} tol={:e}",
            r.id, r.n, r.lhs, r.rhs, r.rel_res, r.abs_res, r.tolerance
        );
    }
    ok
}

fn cmd_verify(
    ids: &[String],
    all: bool,
    range: Option<RangeInclusive<usize>>,
    common: &Common,
) -> Result<bool> {
    let records = select_records(ids, all)?;
    let cfg = common.resolve()?;
    let verifier = Verifier::new(cfg.verification())?;
    let reports = run_verification(&verifier, &records, range.as_ref())?;
    write_reports(&cfg, &reports)?;
    Ok(list_failures(&reports))
}

fn cmd_moments(
    parity: Parity,
    max_p: u32,
    n: usize,
    format: Option<Format>,
    output: Option<PathBuf>,
) -> Result<bool> {
    if max_p == 0 {
        bail!(CoreError::Argument("--max-p must be at least 1".into()));
    }
    let table = moment_table(parity, max_p)?;
    let state = SpectralPoint::<f64>::linear(parity, n)?;
    let mut out = open_output(output.as_deref())?;
    let rows = table.iter().skip(1);
    match format.unwrap_or(Format::Table) {
        Format::Jsonl => {
            for m in rows {
                let mut v = serde_json::to_value(m)?;
                v["expression"] = m.to_string().into();
                v["n"] = n.into();
                v["value"] = m.eval(state.lambda).into();
                writeln!(out, "{}", serde_json::to_string(&v)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "parity,p,expression,n,value")?;
            for m in rows {
                writeln!(
                    out,
                    "{},{},{},{n},{}",
                    parity.as_str(),
                    m.p,
                    m,
                    fmt17(m.eval(state.lambda))
                )?;
            }
        }
        Format::Table => {
            let mut t = Table::new(["p", "<|y|^p>", "value at n"]);
            for m in rows {
                t.row([m.p.to_string(), m.to_string(), fmt17(m.eval(state.lambda))]);
            }
            t.write(&mut out)?;
        }
    }
    out.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct StarkRow {
    source: &'static str,
    #[serde(flatten)]
    result: StarkResult<f64>,
    coefficient: f64,
}

impl StarkRow {
    fn new(source: &'static str, result: StarkResult<f64>) -> Self {
        Self {
            source,
            coefficient: result.coefficient(),
            result,
        }
    }
}

fn cmd_stark(
    system: SystemArg,
    parity: Option<ParityArg>,
    range: Option<RangeInclusive<usize>>,
    common: &Common,
) -> Result<bool> {
    let cfg = common.resolve()?;
    let mut rows = Vec::new();
    let mut ok = true;
    match system {
        SystemArg::Linear => {
            let parity: Parity = parity
                .ok_or_else(|| anyhow!(CoreError::Argument("--parity is required for the linear system".into())))?
                .into();
            let engine = SumEngine::<f64>::new(cfg.sum.clone())?;
            for n in range.unwrap_or(1..=10) {
                let closed = stark_linear_closed_form::<f64>(parity, n)?;
                let sum = pt2_shift_with(&engine, SystemId::SymmetricLinear, parity, n)?;
                if (sum.coefficient() - closed.coefficient()).abs() > 1e-6 {
                    ok = false;
                    eprintln!(
                        "FAIL linear {} n={n}: sum coefficient {} vs closed form {}",
                        parity.as_str(),
                        sum.coefficient(),
                        closed.coefficient()
                    );
                }
                rows.push(StarkRow::new("closed_form", closed));
                rows.push(StarkRow::new("sum", sum));
                rows.push(StarkRow::new("wkb", stark_linear_wkb::<f64>(parity, n)?));
            }
        }
        SystemArg::Halfsho => {
            for n in range.unwrap_or(0..=10) {
                for order in 0..=2 {
                    rows.push(StarkRow::new("wkb", wkb_half_sho::<f64>(n, order)?));
                }
                rows.push(StarkRow::new("closed_form", pt1_half_sho::<f64>(n)));
                rows.push(StarkRow::new(
                    "sum",
                    pt2_shift::<f64>(SystemId::HalfSho, Parity::None, n, &cfg.sum)?,
                ));
            }
        }
    }
    let mut out = open_output(cfg.output.as_deref())?;
    let header = [
        "source", "system", "parity", "n", "order", "method", "value", "coefficient", "terms",
        "tail", "est_error",
    ];
    let cells = |r: &StarkRow| {
        let s = &r.result;
        [
            r.source.to_string(),
            format!("{:?}", s.system),
            s.parity.as_str().to_string(),
            s.n.to_string(),
            s.order.to_string(),
            s.method.as_str().to_string(),
            fmt17(s.value),
            fmt17(r.coefficient),
            s.terms.to_string(),
            fmt17(s.tail),
            format!("{:.3e}", s.est_error),
        ]
    };
    match cfg.format.unwrap_or(Format::Table) {
        Format::Jsonl => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "{}", header.join(","))?;
            for r in &rows {
                writeln!(out, "{}", cells(r).join(","))?;
            }
        }
        Format::Table => {
            let mut t = Table::new(header);
            for r in &rows {
                t.row(cells(r));
            }
            t.write(&mut out)?;
        }
    }
    out.flush()?;
    Ok(ok)
}

fn cmd_fig1(n_max: usize, common: &Common) -> Result<bool> {
    let cfg = common.resolve()?;
    let rows = fig1_series::<f64>(n_max, &cfg.sum)?;
    let mut out = open_output(cfg.output.as_deref())?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => write_fig1_csv(&mut out, &rows)?,
        Format::Jsonl => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Table => {
            let mut t = Table::new(["n", "r1", "r2", "pt2_terms", "pt2_tail"]);
            for r in &rows {
                t.row([
                    r.n.to_string(),
                    fmt17(r.r1),
                    fmt17(r.r2),
                    r.pt2_terms.to_string(),
                    fmt17(r.pt2_tail),
                ]);
            }
            t.write(&mut out)?;
        }
    }
    out.flush()?;
    Ok(true)
}

fn cmd_report(common: &Common) -> Result<bool> {
    let cfg = common.resolve()?;
    let verifier = Verifier::new(cfg.verification())
        .context("building the verification engine")?;
    let records = registry();
    let reports = run_verification(&verifier, &records, None)?;
    let mut out = open_output(cfg.output.as_deref())?;
    let mut ok = true;

    writeln!(out, "Identities (default ranges, {} explicit terms)", cfg.sum.explicit_terms)?;
    let mut t = Table::new(["id", "rows", "passed", "worst rel_res", "worst abs_res"]);
    let mut ids: Vec<&str> = Vec::new();
    for r in &reports {
        if !ids.contains(&r.id.as_str()) {
            ids.push(&r.id);
        }
    }
    for id in ids {
        let rows: Vec<_> = reports.iter().filter(|r| r.id == id).collect();
        let passed = rows.iter().filter(|r| r.pass).count();
        ok &= passed == rows.len();
        let worst_rel = rows.iter().map(|r| r.rel_res).fold(0.0, f64::max);
        let worst_abs = rows.iter().map(|r| r.abs_res).fold(0.0, f64::max);
        t.row([
            id.to_string(),
            rows.len().to_string(),
            passed.to_string(),
            format!("{worst_rel:.3e}"),
            format!("{worst_abs:.3e}"),
        ]);
    }
    t.write(&mut out)?;
    list_failures(&reports);

    writeln!(out, "\nStark, symmetric linear potential (n = 1..10)")?;
    let engine = verifier.engine();
    let mut worst = [0.0f64; 2];
    for n in 1..=10 {
        for (i, (parity, c)) in [(Parity::Odd, -7.0 / 9.0), (Parity::Even, -5.0 / 9.0)]
            .into_iter()
            .enumerate()
        {
            let s = pt2_shift_with(engine, SystemId::SymmetricLinear, parity, n)?;
            worst[i] = worst[i].max((s.coefficient() - c).abs());
        }
    }
    let stark_ok = worst.iter().all(|&w| w <= 1e-6);
    ok &= stark_ok;
    writeln!(out, "  max |coefficient + 7/9| (odd)  = {:.3e}", worst[0])?;
    writeln!(out, "  max |coefficient + 5/9| (even) = {:.3e}", worst[1])?;

    writeln!(out, "\nHalf oscillator, WKB versus perturbation theory")?;
    let rows: Vec<Fig1Row<f64>> = fig1_series(64, &cfg.sum)?;
    let r1_monotone = rows.windows(2).all(|w| w[1].r1.abs() < w[0].r1.abs());
    let r2_ok = rows[64].r2.abs() <= rows[0].r2.abs() / 10.0;
    ok &= r1_monotone && r2_ok;
    writeln!(out, "  r1(0) = {:.6}, r1(64) = {:.4e}, |r1| decreasing: {r1_monotone}", rows[0].r1, rows[64].r1)?;
    writeln!(out, "  r2(0) = {:.6}, r2(64) = {:.4e}, |r2(64)| <= |r2(0)|/10: {r2_ok}", rows[0].r2, rows[64].r2)?;

    writeln!(out, "\nBouncer density, 3-wavelength window averages")?;
    let d50 = semiclassical_density_check(50, 3.0f64)?;
    let d200 = semiclassical_density_check(200, 3.0f64)?;
    let density_ok = d50 < 0.05 && d200 < d50;
    ok &= density_ok;
    writeln!(out, "  max relative deviation n=50: {d50:.4e}, n=200: {d200:.4e}")?;

    writeln!(out, "\noverall: {}", if ok { "PASS" } else { "FAIL" })?;
    out.flush()?;
    Ok(ok)
}
