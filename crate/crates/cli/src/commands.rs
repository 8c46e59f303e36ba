//! Subcommand implementations.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use serde_json::json;
use skewgof::data::{pit_observations, read_observations};
use skewgof::gof_statistics::all_values;
use skewgof::local_efficiency::{eigen_constants, table1};
use skewgof::montecarlo::{
    cache_dir, cached_null_tables, power_curve, NullSampler, NullTable, Sidedness, SCHEMA_VERSION, VERSION,
};
use skewgof::verify::{run_suite, Suite, SuiteOptions};
use skewgof::{make_density, Error, StatisticKind};

use crate::args::{CacheArgs, Command, EigenArgs, Format, NullArgs, OutputArgs, PowerArgs, Table1Args, TestArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(Error::Numeric { .. } | Error::Dependency(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Verification(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Table1(a) => cmd_table1(a),
        Command::Test(a) => cmd_test(a),
        Command::Nulltable(a) => cmd_nulltable(a),
        Command::Power(a) => cmd_power(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Eigen(a) => cmd_eigen(a),
    }
}

fn emit(out: &OutputArgs, text: &str) -> CliResult {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn unsupported(cmd: &str, format: Format) -> CliError {
    CliError::Usage(format!("`{cmd}` does not support --format {format:?}").to_lowercase())
}

fn parse_kinds(names: &[String]) -> CliResult<Vec<StatisticKind>> {
    if names.is_empty() {
        return Ok(StatisticKind::ALL.to_vec());
    }
    names.iter().map(|s| s.trim().parse().map_err(usage)).collect()
}

fn parse_sidedness(s: &Option<String>) -> CliResult<Option<Sidedness>> {
    s.as_deref().map(|x| x.parse().map_err(usage)).transpose()
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn check_level(level: f64) -> CliResult {
    if [0.01, 0.05, 0.10].iter().any(|l| (l - level).abs() < 1e-12) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("level must be one of 0.01, 0.05, 0.10, got {level}")))
    }
}

fn cache_location(c: &CacheArgs) -> Option<PathBuf> {
    if c.no_cache {
        None
    } else {
        Some(c.cache_dir.clone().unwrap_or_else(cache_dir))
    }
}

fn cmd_table1(a: Table1Args) -> CliResult {
    let format = if a.latex { Format::Latex } else { a.format };
    let table = table1()?;
    let text = match format {
        Format::Text => table.to_text(),
        Format::Csv => table.to_csv(),
        Format::Latex => table.to_latex(),
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "version": VERSION,
                "tolerance": a.tolerance,
                "table": table,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    emit(&a.out, &text)?;
    // Float slack so a cell exactly on the tolerance passes.
    let failing = table.failing_cells(a.tolerance + 1e-12);
    if !failing.is_empty() {
        let cells: Vec<String> = failing
            .iter()
            .map(|c| format!("{}/{} ({:+.2e})", c.report.statistic, c.report.density, c.diff))
            .collect();
        return Err(CliError::Verification(format!(
            "{} of 40 cells differ from the reference by more than {}: {}",
            failing.len(),
            a.tolerance,
            cells.join(", ")
        )));
    }
    Ok(())
}

struct Decision {
    kind: StatisticKind,
    value: f64,
    sidedness: Sidedness,
    critical: f64,
    reject: bool,
}

fn cmd_test(a: TestArgs) -> CliResult {
    let density = make_density(&a.density).map_err(usage)?;
    let kinds = parse_kinds(&a.kinds)?;
    let sidedness = parse_sidedness(&a.sidedness)?;
    check_level(a.level)?;
    let obs = read_observations(&a.input, a.column.as_deref())?;
    let sample = pit_observations(&obs, &density)?;
    let n = sample.len();
    let values = all_values(&sample);
    let tables = cached_null_tables(&NullSampler::Uniform, n, a.replicates, a.seed, cache_location(&a.cache).as_deref())?;
    let decisions: Vec<Decision> = kinds
        .iter()
        .map(|&kind| {
            let side = sidedness.unwrap_or(Sidedness::default_for(kind));
            let rule = side.rule(&tables[kind.index()], a.level)?;
            let value = values[kind.index()];
            Ok(Decision {
                kind,
                value,
                sidedness: side,
                critical: rule.threshold(),
                reject: rule.rejects(value),
            })
        })
        .collect::<Result<_, Error>>()?;

    let verdict = |r: bool| if r { "reject" } else { "accept" };
    let text = match a.format {
        Format::Text => {
            let mut s = format!(
                "n = {n}, density = {density}, level = {}, null replicates = {}, seed = {}\n",
                a.level, a.replicates, a.seed
            );
            let _ = writeln!(s, "{:<8}{:>14}{:>14}  {:<10}decision", "stat", "value", "critical", "side");
            for d in &decisions {
                let _ = writeln!(
                    s,
                    "{:<8}{:>14.6}{:>14.6}  {:<10}{}",
                    d.kind.as_str(),
                    d.value,
                    d.critical,
                    d.sidedness.as_str(),
                    verdict(d.reject)
                );
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("kind,n,value,critical,sidedness,decision\n");
            for d in &decisions {
                let _ = writeln!(s, "{},{n},{},{},{},{}", d.kind, d.value, d.critical, d.sidedness, verdict(d.reject));
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = decisions
                .iter()
                .map(|d| {
                    json!({
                        "kind": d.kind,
                        "value": d.value,
                        "critical_value": d.critical,
                        "sidedness": d.sidedness,
                        "reject": d.reject,
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "version": VERSION,
                "density": density.as_str(),
                "n": n,
                "level": a.level,
                "replicates": a.replicates,
                "seed": a.seed,
                "quantile_method": "type-7",
                "results": rows,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        f => return Err(unsupported("test", f)),
    };
    emit(&a.out, &text)
}

fn null_csv(tables: &[&NullTable]) -> String {
    let mut s = String::from("kind,n,replicates,seed,level,quantile,abs_quantile\n");
    for t in tables {
        for &(level, q) in &t.quantiles {
            let abs = t.abs_quantile(level).map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{},{level},{q},{abs}", t.statistic, t.n, t.replicates, t.seed);
        }
    }
    s
}

fn cmd_nulltable(a: NullArgs) -> CliResult {
    let kinds = parse_kinds(&a.kinds)?;
    let tables = cached_null_tables(&NullSampler::Uniform, a.n, a.replicates, a.seed, cache_location(&a.cache).as_deref())?;
    let chosen: Vec<&NullTable> = kinds.iter().map(|k| &tables[k.index()]).collect();
    let text = match a.format {
        Format::Json => {
            let doc = json!({ "schema_version": SCHEMA_VERSION, "version": VERSION, "tables": chosen });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => null_csv(&chosen),
        f => return Err(unsupported("nulltable", f)),
    };
    emit(&a.out, &text)
}

/// Seed offset separating the θ replicates from the null simulation.
const POWER_STREAM_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

fn cmd_power(a: PowerArgs) -> CliResult {
    let kind: StatisticKind = a.kind.parse().map_err(usage)?;
    let f = make_density(&a.density).map_err(usage)?;
    let g = make_density(&a.skew).map_err(usage)?;
    let sidedness = parse_sidedness(&a.sidedness)?.unwrap_or(Sidedness::default_for(kind));
    check_level(a.level)?;
    if a.theta.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(CliError::Usage("θ values must be finite and nonnegative".into()));
    }
    let tables = cached_null_tables(&NullSampler::Uniform, a.n, a.null_replicates, a.seed, cache_location(&a.cache).as_deref())?;
    let curve = power_curve(
        kind,
        f.shared(),
        g.shared(),
        a.n,
        a.level,
        &a.theta,
        a.replicates,
        a.seed ^ POWER_STREAM_OFFSET,
        Some(&tables[kind.index()]),
        sidedness,
    )?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("theta,power,std_error,rejections\n");
            for p in &curve.points {
                let _ = writeln!(s, "{},{},{},{}", p.theta, p.power, p.std_error, p.rejections);
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&curve)? + "\n",
        f => return Err(unsupported("power", f)),
    };
    emit(&a.out, &text)
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let suite: Suite = a.suite.parse().map_err(usage)?;
    let opts = SuiteOptions {
        mu0_tolerance: a.mu0_tolerance,
        route_tolerance: a.route_tolerance,
        samples: a.samples,
        grid: a.grid,
        seed: a.seed,
    };
    let checks = run_suite(suite, &opts)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let _ = writeln!(s, "{suite}: {} passed, {failed} failed", checks.len() - failed);
            s
        }
        Format::Json => {
            let doc = json!({ "schema_version": SCHEMA_VERSION, "suite": suite, "checks": checks });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        f => return Err(unsupported("verify", f)),
    };
    emit(&a.out, &text)?;
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} check(s) failed in suite {suite}")));
    }
    Ok(())
}

fn cmd_eigen(a: EigenArgs) -> CliResult {
    let e = eigen_constants(a.count).map_err(|e| match e {
        Error::Validation(m) => CliError::Usage(m),
        other => CliError::Core(other),
    })?;
    let text = match a.format {
        Format::Text => {
            let mut s = String::new();
            for (j, k) in e.kappa.iter().enumerate() {
                let _ = writeln!(s, "kappa_{} = {:.15}", j + 1, k);
            }
            let _ = writeln!(s, "mu0 = {:.12}", e.mu0);
            s
        }
        Format::Csv => {
            let mut s = String::from("j,kappa\n");
            for (j, k) in e.kappa.iter().enumerate() {
                let _ = writeln!(s, "{},{}", j + 1, k);
            }
            s
        }
        Format::Json => {
            let doc = json!({ "schema_version": SCHEMA_VERSION, "kappa": e.kappa, "mu0": e.mu0 });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        f => return Err(unsupported("eigen", f)),
    };
    emit(&a.out, &text)
}
