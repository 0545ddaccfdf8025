use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vercong::harness::{
    cache_warm, resolve_cache_dir, run_scenario, sigma_suite, CheckKind, Report, ScenarioConfig, CACHE_DIR_ENV,
};
use vercong::numberfield::cache::{write_atomic, EnumerationCache};
use vercong::sigma::{parse_setup, verify_c_identity};
use vercong::zeta::{FrobeniusChoice, LocallyConstantFn, Side, ZetaEngine};

#[derive(Parser)]
#[command(name = "vercong", version, about = "Exact finite-level checks of the transfer congruence between pseudomeasures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (TOML); the bundled p=3, f_L=7, a=2 scenario when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Enumeration cache directory
    #[arg(long, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification family
    Verify {
        #[arg(value_enum)]
        what: VerifyTarget,
        #[command(flatten)]
        common: Common,
    },
    /// Independent routes for zeta values, integrality, pairings and ideal counts
    Crosscheck {
        #[command(flatten)]
        common: Common,
    },
    /// Every check listed in the scenario
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Synthetic group-theoretic suite, or the conjugation identity of a setup file
    Sigma {
        /// Setup in the text format of `vercong::sigma::parse_setup`
        #[arg(long)]
        setup: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Partial zeta values or Delta values at the scenario level
    Zeta {
        #[arg(long, value_enum, default_value = "q")]
        side: SideArg,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Classes to query (all classes when omitted)
        #[arg(long = "class")]
        classes: Vec<u64>,
        /// Report Delta_g(1-k, delta^(x)) for this Frobenius choice instead
        #[arg(long)]
        delta: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Populate the ideal and lattice enumeration caches
    CacheWarm {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    #[value(alias = "theorem")]
    Transfer,
    #[value(alias = "prop4")]
    EvenFunctions,
    #[value(alias = "lemma9")]
    QExpansion,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Q,
    L,
}

impl Common {
    fn config(&self) -> Result<ScenarioConfig> {
        match &self.config {
            Some(path) => ScenarioConfig::load(path).with_context(|| format!("loading {}", path.display())),
            None => Ok(ScenarioConfig::bundled()),
        }
    }

    fn cache(&self) -> EnumerationCache {
        EnumerationCache::new(resolve_cache_dir(self.cache_dir.clone()))
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.json_out {
            Some(path) => write_atomic(path, format!("{text}\n").as_bytes())
                .with_context(|| format!("writing {}", path.display())),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}

fn print_summary(report: &Report) {
    for c in &report.payload.checks {
        let mark = if c.verdict { "PASS" } else { "FAIL" };
        eprintln!("{mark} {:?}: {}", c.check, c.name);
    }
    for t in &report.runtime.timings {
        eprintln!("time {:?}: {} ms", t.check, t.millis);
    }
}

fn run_checks(common: &Common, checks: Option<Vec<CheckKind>>) -> Result<bool> {
    let mut config = common.config()?;
    if let Some(checks) = checks {
        config.checks = checks;
    }
    let report = run_scenario(&config, &common.cache())?;
    print_summary(&report);
    common.emit(&report.to_json())?;
    Ok(report.verdict())
}

fn zeta_query(common: &Common, side: Side, k: u32, classes: &[u64], delta: Option<u64>) -> Result<bool> {
    let config = common.config()?;
    let level = config.level()?;
    let engine = ZetaEngine::new(level.clone()).with_scaling(config.scaling);
    let classes: Vec<u64> =
        if classes.is_empty() { level.classes(side).residues().to_vec() } else { classes.to_vec() };
    let frob = delta.map(|n| FrobeniusChoice::new(&level, side, n)).transpose()?;
    let mut rows = Vec::new();
    for &x in &classes {
        let value = match &frob {
            Some(g) => engine.delta(g, &LocallyConstantFn::indicator(&level, side, x)?, k)?,
            None => engine.zeta_of(&LocallyConstantFn::indicator(&level, side, x)?, k)?,
        };
        rows.push(json!({ "class": x, "value": value.to_string() }));
    }
    let out = json!({
        "modulus": level.modulus(),
        "side": side,
        "k": k,
        "delta": delta,
        "scaling": config.scaling,
        "values": rows,
    });
    common.emit(&serde_json::to_string_pretty(&out)?)?;
    Ok(true)
}

fn sigma(common: &Common, setup: Option<&PathBuf>) -> Result<bool> {
    match setup {
        None => {
            let outcomes = sigma_suite();
            for c in &outcomes {
                eprintln!("{} {}", if c.verdict { "PASS" } else { "FAIL" }, c.name);
            }
            common.emit(&serde_json::to_string_pretty(&outcomes)?)?;
            Ok(outcomes.iter().all(|c| c.verdict))
        }
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let st = parse_setup(&text)?;
            let rep = verify_c_identity(&st)?;
            eprintln!("{} conjugation identity", if rep.verdict { "PASS" } else { "FAIL" });
            common.emit(&serde_json::to_string_pretty(&rep)?)?;
            Ok(rep.verdict)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { what, common } => {
            let kind = match what {
                VerifyTarget::Transfer => CheckKind::Transfer,
                VerifyTarget::EvenFunctions => CheckKind::EvenFunctions,
                VerifyTarget::QExpansion => CheckKind::QExpansion,
            };
            run_checks(&common, Some(vec![kind]))
        }
        Command::Crosscheck { common } => run_checks(&common, Some(vec![CheckKind::Crosscheck])),
        Command::Run { common } => run_checks(&common, None),
        Command::Sigma { setup, common } => sigma(&common, setup.as_ref()),
        Command::Zeta { side, k, classes, delta, common } => {
            let side = match side {
                SideArg::Q => Side::Q,
                SideArg::L => Side::L,
            };
            zeta_query(&common, side, k, &classes, delta)
        }
        Command::CacheWarm { common } => {
            let cache = common.cache();
            if cache.dir().is_none() {
                bail!("cache-warm needs --cache-dir or {CACHE_DIR_ENV}");
            }
            let paths = cache_warm(&common.config()?, &cache)?;
            let out = json!({ "files": paths, "stats": cache.stats() });
            common.emit(&serde_json::to_string_pretty(&out)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
