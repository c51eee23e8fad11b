use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::json;

use qudit_shadow::field::Field;
use qudit_shadow::magic::TGateSpec;
use qudit_shadow::shadow::{
    gamma_tilde, norm_bounds, norm_stab_projector, randobs, run_experiment, ExperimentConfig,
    ObservableSpec, RandObsConfig, Scheme, StateFamily, SCHEMA_VERSION,
};
use qudit_shadow::verify::{run_criteria, Criterion, Fault, VerifyOptions};
use qudit_shadow::weyl::{SymplecticVector, WeylOperator};
use qudit_shadow::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qudit-shadow",
    version,
    about = "Qudit shadow estimation with Clifford and T-gate ensembles"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Directory for result files written without `--out`.
    #[arg(long, global = true, env = "QUDIT_SHADOW_OUT", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity estimation experiment.
    Estimate(EstimateArgs),
    /// Squared shadow norms and bounds.
    Norm(NormArgs),
    /// Run acceptance criteria A1-A10.
    Verify(VerifyArgs),
    /// Exact shadow norms of random two-qudit observables.
    Randobs(RandObsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateArg {
    Ghz,
    TGhz,
    Cluster,
    Depolarized,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Global,
    #[value(name = "clifford+t", alias = "clifford-t")]
    CliffordT,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = StateArg::Ghz)]
    state: StateArg,
    /// T gates in the target for `t-ghz`.
    #[arg(long, default_value_t = 1)]
    t_count: usize,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Mixing probability for `depolarized`.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Global)]
    scheme: SchemeArg,
    /// Layer T gates; `k > 0` selects the clifford+T scheme.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// T gate: `canonical`, `cubic:c3,c2,c1,c0`, `ternary:c3,c2` or `class:0|1|2`.
    /// One value is used for every layer gate; give `k` values (repeated flag
    /// or `;`-separated) for distinct gates.
    #[arg(long = "t", default_value = "canonical")]
    t: Vec<String>,
    /// Shot counts, comma separated.
    #[arg(long = "N", value_delimiter = ',', required = true)]
    shots: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Median-of-means groups.
    #[arg(long = "L")]
    groups: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Output file; defaults to a generated name inside `--out-dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormArgs {
    /// Rank-K stabilizer projector under the global scheme.
    #[arg(long, group = "kind")]
    stab_projector: bool,
    /// gamma_tilde(d, k) of the clifford+T scheme.
    #[arg(long, group = "kind")]
    gamma: bool,
    /// m-local Weyl operator under the local scheme.
    #[arg(long, group = "kind")]
    local_weyl: bool,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "K", default_value_t = 1)]
    rank: u64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Criteria by id (A5) or name (tableau), comma separated.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Negative control, e.g. `perturbed-phase-rule`.
    #[arg(long)]
    fault: Option<String>,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RandObsArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    diagonal: bool,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_t_spec(field: Field, s: &str) -> Result<TGateSpec> {
    let bad = || Error::ConfigError(format!("cannot parse T gate '{s}'"));
    let nums = |rest: &str| -> Result<Vec<u32>> {
        rest.split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
            .collect()
    };
    match s.split_once(':') {
        None if s == "canonical" => Ok(TGateSpec::canonical(field)),
        Some(("cubic", rest)) => match nums(rest)?.as_slice() {
            [c3, c2, c1, c0] => TGateSpec::cubic(field, *c3, *c2, *c1, *c0),
            _ => Err(bad()),
        },
        Some(("ternary", rest)) => match nums(rest)?.as_slice() {
            [c3, c2] if field.d() == 3 => TGateSpec::ternary(*c3, *c2),
            _ => Err(bad()),
        },
        Some(("class", rest)) => {
            let c: u8 = rest.trim().parse().map_err(|_| bad())?;
            TGateSpec::from_character_class(field, c)
        }
        _ => Err(bad()),
    }
}

/// `k` specs from the `--t` list; a single entry is repeated.
fn layer_specs(field: Field, raw: &[String], k: usize) -> Result<Vec<TGateSpec>> {
    let parsed: Vec<TGateSpec> = raw
        .iter()
        .flat_map(|s| s.split(';'))
        .map(|s| parse_t_spec(field, s.trim()))
        .collect::<Result<_>>()?;
    match parsed.len() {
        1 => Ok(vec![parsed[0]; k]),
        l if l == k => Ok(parsed),
        l => Err(Error::ConfigError(format!("{l} T gates given for k = {k}"))),
    }
}

fn output_path(out: Option<PathBuf>, dir: &Path, stem: String, format: Format) -> PathBuf {
    out.unwrap_or_else(|| dir.join(format!("{stem}.{}", format.ext())))
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_json<W: Write>(mut w: W, v: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w).map_err(|e| Error::Io(e.to_string()))
}

fn estimate(a: EstimateArgs, format: Format, dir: &Path) -> Result<()> {
    let field = Field::new(a.d).map_err(|e| Error::ConfigError(e.to_string()))?;
    let family = match a.state {
        StateArg::Ghz => StateFamily::Ghz,
        StateArg::TGhz => StateFamily::TGhz {
            t_count: a.t_count,
            spec: layer_specs(field, &a.t, 1)?[0],
        },
        StateArg::Cluster => {
            let rows = a
                .rows
                .ok_or_else(|| Error::ConfigError("cluster needs --rows".into()))?;
            StateFamily::Cluster {
                rows,
                cols: a.cols.unwrap_or(a.n / rows.max(1)),
            }
        }
        StateArg::Depolarized => StateFamily::DepolarizedGhz { p: a.p },
    };
    let scheme = match (a.scheme, a.k) {
        (SchemeArg::Global, 0) => Scheme::GlobalClifford,
        (_, 0) => return Err(Error::ConfigError("clifford+t needs --k >= 1".into())),
        (_, k) => Scheme::CliffordT(layer_specs(field, &a.t, k)?),
    };
    let config = ExperimentConfig {
        d: a.d,
        n: a.n,
        family,
        scheme,
        shots: a.shots,
        runs: a.runs,
        groups: a.groups,
        seed: a.seed,
    };
    let output = run_experiment(&config)?;
    let stem = format!("estimate_d{}_n{}_k{}_seed{}", a.d, a.n, a.k, a.seed);
    let path = output_path(a.out, dir, stem, format);
    let w = create(&path)?;
    match format {
        Format::Csv => output.write_csv(w)?,
        Format::Json => write_json(w, &output.to_json())?,
    }
    println!(
        "truth {:.6}, theory bound {:.4}",
        output.truth, output.theory_bound
    );
    for r in &output.rows {
        println!(
            "{} N={:<8} mean {:.6}  N*MSE {:.4}",
            r.scheme,
            r.shots,
            r.estimate_mean,
            r.shots as f64 * r.mse
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn norm(a: NormArgs, format: Format) -> Result<()> {
    let field = Field::new(a.d).map_err(|e| Error::ConfigError(e.to_string()))?;
    let value = if a.stab_projector {
        let n = a.n.unwrap_or(1);
        let ratio = norm_stab_projector(n, a.d, a.rank)?;
        let report = norm_bounds(
            &ObservableSpec::StabilizerProjector { rank: a.rank },
            &Scheme::GlobalClifford,
            a.d,
            n,
        )?;
        json!({
            "kind": "stab-projector", "d": a.d, "n": n, "K": a.rank,
            "ratio": ratio, "shadow_norm2": ratio * report.hs_norm2, "report": report,
        })
    } else if a.gamma {
        json!({ "kind": "gamma", "d": a.d, "k": a.k, "gamma_tilde": gamma_tilde(a.d, a.k) })
    } else if a.local_weyl {
        let n = a.n.unwrap_or(a.m);
        if a.m == 0 || a.m > n {
            return Err(Error::ConfigError(format!("m = {} on {n} qudits", a.m)));
        }
        let z: Vec<u32> = (0..n).map(|j| u32::from(j < a.m)).collect();
        let w = WeylOperator::new(SymplecticVector::new(field, &z, &vec![0; n])?, 0);
        let report = norm_bounds(
            &ObservableSpec::WeylSum(vec![(C64::new(1.0, 0.0), w)]),
            &Scheme::LocalClifford,
            a.d,
            n,
        )?;
        json!({ "kind": "local-weyl", "d": a.d, "n": n, "m": a.m, "shadow_norm2": report.exact, "report": report })
    } else {
        return Err(Error::ConfigError(
            "choose --stab-projector, --gamma or --local-weyl".into(),
        ));
    };
    match format {
        Format::Json => write_json(io::stdout().lock(), &value)?,
        Format::Csv => {
            let obj = value.as_object().expect("object literal");
            for (key, v) in obj.iter().filter(|(k, _)| k.as_str() != "report") {
                println!("{key},{v}");
            }
        }
    }
    Ok(())
}

fn verify(a: VerifyArgs, format: Format) -> Result<bool> {
    let only = a
        .only
        .iter()
        .map(|s| Criterion::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let fault = a.fault.as_deref().map(Fault::parse).transpose()?;
    let reports = run_criteria(&VerifyOptions { only, fault });
    let passed = reports.iter().all(|r| r.passed);
    let value = json!({ "version": SCHEMA_VERSION, "passed": passed, "criteria": reports });
    match format {
        Format::Json => write_json(io::stdout().lock(), &value)?,
        Format::Csv => {
            for r in &reports {
                println!("{r}");
            }
        }
    }
    if let Some(path) = &a.report {
        write_json(create(path)?, &value)?;
    }
    Ok(passed)
}

fn randobs_cmd(a: RandObsArgs, format: Format, dir: &Path) -> Result<()> {
    let config = RandObsConfig {
        d: a.d,
        n: a.n,
        k: a.k,
        samples: a.samples,
        diagonal: a.diagonal,
        seed: a.seed,
    };
    let records = randobs(&config)?;
    let stem = format!(
        "randobs_d{}_n{}_k{}_{}_seed{}",
        a.d,
        a.n,
        a.k,
        if a.diagonal { "diag" } else { "general" },
        a.seed
    );
    let path = output_path(a.out, dir, stem, format);
    let mut w = create(&path)?;
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in &records {
                csv.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            csv.flush().map_err(|e| Error::Io(e.to_string()))?;
        }
        Format::Json => write_json(
            &mut w,
            &json!({ "config": config, "results": records, "version": SCHEMA_VERSION }),
        )?,
    }
    let max_ratio = records.iter().map(|r| r.norm / r.bound).fold(0.0, f64::max);
    println!(
        "{} observables, max norm/bound {max_ratio:.4}",
        records.len()
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let res = match cli.command {
        Command::Estimate(a) => estimate(a, cli.format, &cli.out_dir).map(|_| true),
        Command::Norm(a) => norm(a, cli.format).map(|_| true),
        Command::Verify(a) => verify(a, cli.format),
        Command::Randobs(a) => randobs_cmd(a, cli.format, &cli.out_dir).map(|_| true),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
