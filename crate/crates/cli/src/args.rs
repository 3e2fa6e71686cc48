//! Argument parsing and dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use econe_core::bipartitions::enumerate_bipartitions;
use econe_core::enhanced_cone::PointDoc;
use econe_core::pi::{fit_pi, pi_table, PiPolynomial, PiTable};
use econe_core::resolution::DatumFault;
use econe_core::{Bipartition, Partition};
use serde::Serialize;
use serde_json::json;

use crate::cache::{canonical_key, write_atomic, Cache};
use crate::commands::{self, CensusChoice};
use crate::config::{Format, RunConfig};
use crate::logging::Logger;
use crate::suites::verify_all;
use crate::CliError;

/// Accepts decimal or `0x`-prefixed hexadecimal.
fn parse_u64(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("{s:?}: {e}"))
}

/// Comma-separated list of integers; the empty string is the empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct U64List(pub Vec<u64>);

fn parse_u64_list(s: &str) -> Result<U64List, String> {
    if s.trim().is_empty() {
        return Ok(U64List::default());
    }
    s.split(',').map(|t| parse_u64(t.trim())).collect::<Result<_, _>>().map(U64List)
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: econe_core::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "econe", version, about = "Orbits, slices, resolution fibres and fibre-count polynomials on the enhanced nilpotent cone")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random choice (decimal or 0x-hex).
    #[arg(long, global = true, value_parser = parse_u64)]
    pub seed: Option<u64>,
    /// Node budget for fibre enumeration and matrix budget for censuses.
    #[arg(long, global = true, value_parser = parse_u64)]
    pub budget: Option<u64>,
    /// Output file (a directory for verify-slice); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache directory; overrides ECONE_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Suppress JSON-line progress logs on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, value_parser = parse_partition, default_value = "")]
    pub mu: Partition,
    #[arg(long, value_parser = parse_partition, default_value = "")]
    pub nu: Partition,
    #[arg(long, value_parser = parse_partition, default_value = "")]
    pub target_mu: Partition,
    #[arg(long, value_parser = parse_partition, default_value = "")]
    pub target_nu: Partition,
}

impl PairArgs {
    fn source(&self) -> Bipartition {
        Bipartition::new(self.mu.clone(), self.nu.clone())
    }

    fn target(&self) -> Bipartition {
        Bipartition::new(self.target_mu.clone(), self.target_nu.clone())
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sample primes, used in order and extended when the degree bound needs more.
    #[arg(long, value_parser = parse_u64_list)]
    pub fit_primes: Option<U64List>,
    /// Held-out field orders.
    #[arg(long, value_parser = parse_u64_list)]
    pub holdout: Option<U64List>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the bi-partitions of n with their orbit dimensions.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Identify the orbit of a point given as JSON, or of a seeded conjugate of a representative.
    Identify {
        /// JSON point `{"q":…,"v":[…],"x":{"p":…,"k":…,"rows":…,"cols":…,"entries":[…]}}`; `-` for stdin.
        #[arg(long, conflicts_with_all = ["mu", "nu"])]
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_partition)]
        mu: Option<Partition>,
        #[arg(long, value_parser = parse_partition)]
        nu: Option<Partition>,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Point count of every orbit over F_q.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = CensusChoice::Auto)]
        method: CensusChoice,
    },
    /// Transversality and contraction certificates for every bi-partition of n.
    VerifySlice {
        #[arg(long)]
        n: usize,
    },
    /// Validate the resolution datum of every bi-partition of n (or one source).
    ValidateResolution {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_u64_list, default_value = "2,3,5")]
        q: U64List,
        #[arg(long, value_parser = parse_partition)]
        mu: Option<Partition>,
        #[arg(long, value_parser = parse_partition)]
        nu: Option<Partition>,
        #[arg(long, value_enum, hide = true)]
        fault: Option<FaultArg>,
    },
    /// Count (or list) the fibre of a source's resolution over a target representative.
    CountFibre {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        list: bool,
    },
    /// Fit and certify one fibre-count polynomial.
    FitPi {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Certified fibre-count polynomials for all closure pairs of n.
    PiTable {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Certified polynomials over targets with v outside ker x.
    ProbePaving {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_u64_list, default_value = "2,3,5,7,11,13")]
        q: U64List,
    },
    /// Run every validation suite.
    VerifyAll {
        /// Cap every suite at this n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, hide = true)]
        fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FaultArg {
    ShiftVStep,
}

impl From<FaultArg> for DatumFault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::ShiftVStep => DatumFault::ShiftVStep,
        }
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(budget) = g.budget {
        cfg.node_budget = budget;
        cfg.census_budget = budget;
    }
    if let Some(format) = g.format {
        cfg.format = format;
    }
    let fit = match &cli.command {
        Command::FitPi { fit, .. } | Command::PiTable { fit, .. } => Some(fit),
        _ => None,
    };
    if let Some(fit) = fit {
        if let Some(U64List(p)) = &fit.fit_primes {
            cfg.fit_primes = p.clone();
        }
        if let Some(U64List(h)) = &fit.holdout {
            cfg.holdout = h.clone();
        }
    }
    match &cli.command {
        Command::ValidateResolution { fault, .. } | Command::VerifyAll { fault, .. } => {
            if let Some(f) = fault {
                cfg.fault = Some((*f).into());
            }
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_text(value: &impl Serialize) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn emit(cli: &Cli, cfg: &RunConfig, value: &impl Serialize, csv: Option<Result<String, CliError>>) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Json => json_text(value)?,
        Format::Csv => csv.ok_or_else(|| CliError::BadArgs("csv output is not available for this command".into()))??,
    };
    write_output(cli.global.out.as_deref(), &text)
}

fn cached<T, F>(cli: &Cli, log: &Logger, command: &str, args: &impl Serialize, compute: F) -> Result<T, CliError>
where
    T: Serialize + serde::de::DeserializeOwned,
    F: FnOnce() -> Result<T, CliError>,
{
    if cli.global.no_cache {
        return compute();
    }
    let cache = Cache::locate(cli.global.cache_dir.as_deref());
    let key = canonical_key(command, args)?;
    let (value, hit) = cache.get_or_compute(&key, compute)?;
    log.event("cache", json!({ "command": command, "hit": hit, "dir": cache.dir().display().to_string() }));
    Ok(value)
}

fn source_filter(n: usize, mu: &Option<Partition>, nu: &Option<Partition>) -> Result<Vec<Bipartition>, CliError> {
    if mu.is_none() && nu.is_none() {
        return Ok(enumerate_bipartitions(n));
    }
    let b = Bipartition::new(mu.clone().unwrap_or_default(), nu.clone().unwrap_or_default());
    if b.n() != n {
        return Err(CliError::BadArgs(format!("{b} is not a bi-partition of {n}")));
    }
    Ok(vec![b])
}

/// Runs the parsed command. `Ok(false)` means a validation failed.
pub fn execute(cli: &Cli, log: &Logger) -> Result<bool, CliError> {
    let cfg = run_config(cli)?;
    log.event("start", json!({ "command": format!("{:?}", cli.command), "seed": cfg.seed }));
    let passed = match &cli.command {
        Command::Enumerate { n } => {
            let r = commands::cmd_enumerate(*n);
            emit(cli, &cfg, &r, Some(r.to_csv()))?;
            true
        }
        Command::Identify { input, mu, nu, q } => {
            let pt = match input {
                Some(path) => {
                    let text = if path.as_os_str() == "-" {
                        std::io::read_to_string(std::io::stdin())?
                    } else {
                        std::fs::read_to_string(path)?
                    };
                    let doc: PointDoc =
                        serde_json::from_str(&text).map_err(|e| CliError::BadArgs(format!("point: {e}")))?;
                    doc.into_point()?
                }
                None => {
                    let b = Bipartition::new(mu.clone().unwrap_or_default(), nu.clone().unwrap_or_default());
                    commands::sample_point(&b, *q, cfg.seed)?
                }
            };
            emit(cli, &cfg, &commands::cmd_identify(&pt)?, None)?;
            true
        }
        Command::Census { n, q, method } => {
            let c = commands::cmd_census(*n, *q, *method, cfg.census_budget)?;
            emit(cli, &cfg, &c, Some(commands::census_csv(&c)))?;
            true
        }
        Command::VerifySlice { n } => {
            let certs = commands::cmd_verify_slice(*n)?;
            let passed = certs.iter().all(|c| c.passed);
            match &cli.global.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    let mut files = Vec::new();
                    for c in &certs {
                        let name = format!("{}.json", c.bipartition.file_stem());
                        write_atomic(&dir.join(&name), json_text(c)?.as_bytes())?;
                        files.push(name);
                    }
                    let summary = json!({ "n": n, "count": certs.len(), "passed": passed, "files": files });
                    write_output(None, &json_text(&summary)?)?;
                }
                None => {
                    let summary = json!({ "n": n, "count": certs.len(), "passed": passed, "certificates": certs });
                    emit(cli, &cfg, &summary, None)?;
                }
            }
            passed
        }
        Command::ValidateResolution { n, q, mu, nu, .. } => {
            let sources = source_filter(*n, mu, nu)?;
            let run = commands::cmd_validate_resolution(&sources, *n, &q.0, &cfg)?;
            emit(cli, &cfg, &run, None)?;
            run.passed
        }
        Command::CountFibre { pair, q, list } => {
            let r = commands::cmd_count_fibre(&pair.source(), &pair.target(), *q, *list, cfg.node_budget)?;
            emit(cli, &cfg, &r, None)?;
            true
        }
        Command::FitPi { pair, .. } => {
            let (source, target) = (pair.source(), pair.target());
            let fit = cfg.fit_config();
            let key = json!({ "source": source.to_string(), "target": target.to_string(), "fit": fit });
            let p: PiPolynomial = cached(cli, log, "fit-pi", &key, || Ok(fit_pi(&source, &target, &fit)?))?;
            emit(cli, &cfg, &p, None)?;
            p.certificate.passed
        }
        Command::PiTable { n, .. } => {
            let fit = cfg.fit_config();
            let key = json!({ "n": n, "fit": fit });
            let table: PiTable = cached(cli, log, "pi-table", &key, || Ok(pi_table(*n, &fit)?))?;
            emit(cli, &cfg, &table, Some(table.to_csv().map_err(CliError::from)))?;
            table.passed
        }
        Command::ProbePaving { n, q } => {
            let r = commands::cmd_probe_paving(*n, &q.0, &cfg)?;
            if r.findings > 0 {
                log.event("findings", json!({ "count": r.findings }));
            }
            emit(cli, &cfg, &r, None)?;
            true
        }
        Command::VerifyAll { n, .. } => {
            let cfg = match n {
                Some(n) => cfg.clone().capped(*n),
                None => cfg.clone(),
            };
            let summary = verify_all(&cfg, log)?;
            emit(cli, &cfg, &summary, None)?;
            summary.passed
        }
    };
    log.event("done", json!({ "passed": passed }));
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsing() {
        assert_eq!(parse_u64_list("").unwrap(), U64List(vec![]));
        assert_eq!(parse_u64_list("2, 3,5").unwrap(), U64List(vec![2, 3, 5]));
        assert!(parse_u64_list("2,,3").is_err());
        assert_eq!(parse_u64("0xC0FFEE").unwrap(), 0xC0FFEE);
    }

    #[test]
    fn parses_documented_invocations() {
        let cli = Cli::try_parse_from([
            "econe", "count-fibre", "--mu", "1", "--nu", "1", "--target-mu", "", "--target-nu", "1,1", "--q", "2", "--list",
        ])
        .unwrap();
        match cli.command {
            Command::CountFibre { pair, q, list } => {
                assert_eq!(pair.source().to_string(), "1|1");
                assert_eq!(pair.target().to_string(), "|1,1");
                assert_eq!((q, list), (2, true));
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from([
            "econe", "pi-table", "--n", "3", "--fit-primes", "2,3,5,7,11,13", "--holdout", "17,4,9", "--out", "t.json",
        ])
        .unwrap();
        let cfg = run_config(&cli).unwrap();
        assert_eq!(cfg.holdout, vec![17, 4, 9]);
        let cli = Cli::try_parse_from(["econe", "verify-all", "--seed", "5", "--fault", "shift-v-step"]).unwrap();
        let cfg = run_config(&cli).unwrap();
        assert_eq!((cfg.seed, cfg.fault), (5, Some(DatumFault::ShiftVStep)));
    }
}
