//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopt_core::Bounds;

use crate::dsl::parse;
use crate::output::{Config, RunReport, SavedReport, EXIT_INPUT, EXIT_PASS, EXIT_VIOLATION};
use crate::program::{elaborate, parse_backend, Env, Suite};
use crate::suites::{run_checks, run_selected, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "hopt", version, about = "Check enriched-category laws on finite exact models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one suite (or all) on a standard model.
    Check {
        #[arg(long, default_value = "finset")]
        model: String,
        /// enriched, faithful, linked, closed, pm, karoubi, combs, tower, causlite or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Rerun violation CASE (`S.V` or a flat index) of a saved JSON report.
        #[arg(long, value_name = "FILE#CASE")]
        replay: Option<String>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run the check statements of a `.hopt` program.
    EvalFile {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct RunOpts {
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, env = "HOPT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Idempotents per carrier in the Karoubi suite.
    #[arg(long, default_value_t = 4)]
    pub idempotent_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Treat exceeded bounds as failure (exit 3).
    #[arg(long)]
    pub strict_bounds: bool,
    /// Record elapsed time per suite; reports are no longer byte-stable.
    #[arg(long)]
    pub timings: bool,
    /// Suites run in parallel; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl RunOpts {
    fn run_config(&self) -> RunConfig {
        let jobs = match self.jobs {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            n => n,
        };
        RunConfig { bounds: self.bounds(), jobs }
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            max_size: self.max_size,
            depth: self.depth,
            samples: self.samples,
            seed: self.seed,
            idempotent_cap: self.idempotent_cap,
            ..Bounds::default()
        }
    }

    fn config(&self, command: &str) -> Config {
        let b = self.bounds();
        Config {
            command: command.into(),
            file: None,
            model: None,
            suite: None,
            max_size: b.max_size,
            depth: b.depth,
            samples: b.samples,
            seed: b.seed,
            idempotent_cap: b.idempotent_cap,
            member_cap: b.member_cap,
            strict_bounds: self.strict_bounds,
        }
    }
}

/// Either a finished run or a message for stderr with its exit code.
pub struct Finished {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn input_error(msg: String) -> Finished {
    Finished { code: EXIT_INPUT, stdout: String::new(), stderr: msg }
}

/// The program a `check` invocation stands for.
pub fn check_source(model: &str, suite: &str) -> Result<String, String> {
    if parse_backend(model).is_none() {
        return Err(format!("unknown model `{}`; expected finset, finrel or matq", model));
    }
    let suites: Vec<&str> = if suite == "all" {
        Suite::ALL.iter().map(|s| s.name()).collect()
    } else if Suite::parse(suite).is_some() {
        vec![suite]
    } else {
        return Err(format!("unknown suite `{}`", suite));
    };
    let mut src = format!("model {};\n", model);
    for s in suites {
        src.push_str(&format!("check {};\n", s));
    }
    Ok(src)
}

pub fn load(src: &str, default_size: usize) -> Result<Env, String> {
    let p = parse(src).map_err(|e| e.to_string())?;
    elaborate(&p, default_size).map_err(|e| e.to_string())
}

/// Runs a program source and renders the report.
pub fn run_source(src: &str, config: Config, opts: &RunOpts) -> Finished {
    let env = match load(src, opts.max_size) {
        Ok(env) => env,
        Err(e) => return input_error(e),
    };
    let outcomes = run_checks(&env, &opts.run_config());
    let report = RunReport::new(config, &env, outcomes, opts.timings);
    let stdout = match opts.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Finished { code: report.exit_code(opts.strict_bounds), stdout, stderr: String::new() }
}

pub fn execute(cli: Cli) -> Finished {
    match cli.command {
        Command::Check { replay: Some(target), opts, .. } => replay(&target, &opts),
        Command::Check { model, suite, opts, .. } => match check_source(&model, &suite) {
            Ok(src) => {
                let config = Config { model: Some(model), suite: Some(suite), ..opts.config("check") };
                run_source(&src, config, &opts)
            }
            Err(e) => input_error(e),
        },
        Command::EvalFile { file, opts } => match std::fs::read_to_string(&file) {
            Ok(src) => {
                let config = Config { file: Some(file.display().to_string()), ..opts.config("eval-file") };
                run_source(&src, config, &opts)
            }
            Err(e) => input_error(format!("cannot read {}: {}", file.display(), e)),
        },
    }
}

/// Reruns the check that produced one violation of a saved report.
/// Exits 1 when the same inequality comes back, 0 when it no longer does.
pub fn replay(target: &str, opts: &RunOpts) -> Finished {
    let Some((path, case)) = target.rsplit_once('#') else {
        return input_error(format!("--replay expects FILE#CASE, got `{}`", target));
    };
    let saved: SavedReport = match std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|s| serde_json::from_str(&s).map_err(|e| e.to_string()))
    {
        Ok(r) => r,
        Err(e) => return input_error(format!("cannot load report {}: {}", path, e)),
    };
    let Some((si, vi)) = saved.locate(case) else {
        return input_error(format!("no violation `{}` in {}", case, path));
    };
    let c = &saved.config;
    let src = match (c.command.as_str(), &c.file) {
        ("eval-file", Some(f)) => std::fs::read_to_string(f).map_err(|e| format!("cannot read {}: {}", f, e)),
        _ => check_source(c.model.as_deref().unwrap_or("finset"), c.suite.as_deref().unwrap_or("all")),
    };
    let env = match src.and_then(|s| load(&s, c.max_size)) {
        Ok(env) => env,
        Err(e) => return input_error(e),
    };
    let bounds = Bounds {
        max_size: c.max_size,
        depth: c.depth,
        samples: c.samples,
        seed: c.seed,
        idempotent_cap: c.idempotent_cap,
        member_cap: c.member_cap,
        ..Bounds::default()
    };
    let suite = &saved.suites[si];
    let want = &suite.violations[vi];
    if suite.check >= env.checks.len() {
        return input_error(format!("report names check {} but the program has {}", suite.check, env.checks.len()));
    }
    let cfg = RunConfig { bounds, jobs: opts.run_config().jobs };
    let outcomes = run_selected(&env, &cfg, &[suite.check]);
    let hit = outcomes
        .iter()
        .filter(|o| o.report.suite == suite.suite)
        .flat_map(|o| o.report.violations.iter())
        .find(|v| v.law == want.law && v.instance == want.instance);
    let mut out = format!("replaying {} at {} from `{}`\n", want.law, want.instance, env.checks[suite.check].text);
    match hit {
        Some(v) if v.lhs == want.lhs && v.rhs == want.rhs => {
            out.push_str(&format!("reproduced\n  lhs {}\n  rhs {}\n", v.lhs, v.rhs));
            Finished { code: EXIT_VIOLATION, stdout: out, stderr: String::new() }
        }
        Some(v) => {
            out.push_str(&format!("violated differently\n  lhs {}\n  rhs {}\n", v.lhs, v.rhs));
            Finished { code: EXIT_VIOLATION, stdout: out, stderr: String::new() }
        }
        None => {
            out.push_str("not reproduced\n");
            Finished { code: EXIT_PASS, stdout: out, stderr: String::new() }
        }
    }
}
