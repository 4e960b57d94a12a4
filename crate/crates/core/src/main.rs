use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fairstop::audit::{AuditMode, AuditOptions, Baseline, OrderSet};
use fairstop::gen::{GenParams, GENERATOR_NAMES};
use fairstop::lp::Setting;
use fairstop::report::{self, InstanceSource, Target};
use fairstop::{ArrivalOrder, Instance, ReportError, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "fairstop", version, about = "Fair stopping rules for the hiring problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a generated instance as JSON.
    Gen {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one of the linear programs and print the policy.
    Solve {
        #[command(flatten)]
        src: Source,
        /// online-iif, online-tif, offline-relaxation, must-hire-iif, must-hire-tif
        #[arg(long, default_value = "online-iif")]
        setting: Setting,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded trials of a rule.
    Simulate {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the trace of one run of a fair rule as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a rule for IIF and TIF; exits 2 when either fails.
    Audit {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        rule: RuleArgs,
        /// Orders to audit: `all` or `;`-separated 1-based lists like `2,1;1,2`.
        #[arg(long = "orders", default_value = "all")]
        orders: String,
        #[arg(long, default_value = "exact")]
        mode: AuditMode,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Permit `all` beyond six candidates.
        #[arg(long)]
        allow_many_orders: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ratio of a rule's value to a baseline.
    Ratio {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        rule: RuleArgs,
        /// prophet, opt_online, opt_offline_iif, opt_online_iif, opt_online_tif
        #[arg(long, default_value = "prophet")]
        baseline: Baseline,
        #[arg(long, default_value = "exact")]
        mode: AuditMode,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the headline comparisons; exits 2 if any claim fails.
    Reproduce {
        /// fig1-iif, fig1-tif, impossibility, samples or all
        #[arg(default_value = "all")]
        target: Target,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Instance JSON file.
    #[arg(long, conflicts_with = "gen")]
    instance: Option<PathBuf>,
    /// Named generator instead of a file.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long)]
    delta: Option<f64>,
    /// Candidates, for `--gen random`.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Support size, for `--gen random`.
    #[arg(long, default_value_t = 3)]
    support: usize,
    /// Generator seed, for `--gen random`.
    #[arg(long)]
    gen_seed: Option<u64>,
    /// 1-based arrival order, e.g. `2,1`; defaults to the instance's.
    #[arg(long)]
    order: Option<ArrivalOrder>,
}

#[derive(Args, Debug)]
struct RuleArgs {
    /// iif, tif, halved, halved-tif, must-hire-iif, sc, kw, threshold=T, dp,
    /// never, single-sample, double-sample
    #[arg(long, default_value = "iif")]
    rule: String,
    /// Policy JSON (bare policy or `solve` output) for iif/tif.
    #[arg(long)]
    policy: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

struct Loaded {
    instance: Instance,
    order: ArrivalOrder,
    label: String,
}

impl Source {
    fn load(&self) -> Result<Loaded, ReportError> {
        let src = match (&self.instance, &self.gen) {
            (Some(p), None) => InstanceSource::File(p.clone()),
            (None, Some(name)) => InstanceSource::Gen {
                name: name.clone(),
                params: GenParams {
                    eps: self.eps,
                    delta: self.delta,
                    n: self.n,
                    support_size: self.support,
                    seed: self.gen_seed.unwrap_or(GenParams::default().seed),
                },
            },
            _ => {
                return Err(ReportError::Usage(format!(
                    "give --instance FILE or --gen NAME ({})",
                    GENERATOR_NAMES.join(", ")
                )))
            }
        };
        let (instance, default_order) = report::load_instance(&src)?;
        let order = match &self.order {
            Some(o) => o.clone(),
            None => default_order.unwrap_or_else(|| ArrivalOrder::identity(instance.n())),
        };
        order.check_for(&instance)?;
        Ok(Loaded {
            instance,
            order,
            label: src.label(),
        })
    }
}

impl RuleArgs {
    fn resolve(&self, l: &Loaded) -> Result<fairstop::RuleSpec, ReportError> {
        let policy = self.policy.as_deref().map(report::load_policy).transpose()?;
        report::resolve_rule(&self.rule, &l.instance, &l.order, policy)
    }
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("fairstop: using default seed {DEFAULT_SEED}");
        DEFAULT_SEED
    })
}

fn parse_orders(text: &str) -> Result<OrderSet, ReportError> {
    if text.trim() == "all" {
        return Ok(OrderSet::All);
    }
    text.split(';')
        .map(|o| o.trim().parse::<ArrivalOrder>().map_err(ReportError::from))
        .collect::<Result<Vec<_>, _>>()
        .map(OrderSet::List)
}

/// Ok(true) when every checked claim held.
fn run(cmd: Command) -> Result<bool, ReportError> {
    match cmd {
        Command::Gen { src, out } => {
            let l = src.load()?;
            let file = fairstop::InstanceFile {
                instance: l.instance,
                order: Some(l.order),
            };
            report::emit(out.as_deref(), &report::to_json(&file)?)?;
            Ok(true)
        }
        Command::Solve { src, setting, out } => {
            let l = src.load()?;
            let r = report::cmd_solve(&l.instance, &l.label, setting, &l.order)?;
            report::emit(out.as_deref(), &report::to_json(&r)?)?;
            Ok(true)
        }
        Command::Simulate {
            src,
            rule,
            trials,
            seed,
            format,
            trace,
            out,
        } => {
            let l = src.load()?;
            let spec = rule.resolve(&l)?;
            let seed = seed_or_default(seed);
            let summary = report::cmd_simulate(&l.instance, &spec, &l.order, trials, seed)?;
            if let Some(path) = trace {
                let text = report::trace_fair_run(&l.instance, &spec, &l.order, seed)?;
                report::write_file(&path, &text)?;
            }
            let text = match format {
                Format::Json => report::to_json(&summary)?,
                Format::Csv => summary.to_csv()?,
            };
            report::emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Audit {
            src,
            rule,
            orders,
            mode,
            trials,
            seed,
            tolerance,
            allow_many_orders,
            format,
            out,
        } => {
            let l = src.load()?;
            let spec = rule.resolve(&l)?;
            let seed = match mode {
                AuditMode::Mc => seed_or_default(seed),
                AuditMode::Exact => seed.unwrap_or(DEFAULT_SEED),
            };
            let opts = AuditOptions {
                orders: parse_orders(&orders)?,
                mode,
                trials,
                seed,
                tolerance,
                allow_many_orders,
            };
            let r = report::cmd_audit(&l.instance, &l.label, &spec, &opts)?;
            let text = match format {
                Format::Json => report::to_json(&r)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    r.report.write_csv(&mut buf)?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
            };
            report::emit(out.as_deref(), &text)?;
            eprintln!(
                "IIF {} (max deviation {:.3e}), TIF {} (max deviation {:.3e})",
                verdict(r.report.iif.pass),
                r.report.iif_max_dev,
                verdict(r.report.tif.pass),
                r.report.tif_max_dev
            );
            Ok(r.report.passed())
        }
        Command::Ratio {
            src,
            rule,
            baseline,
            mode,
            trials,
            seed,
            out,
        } => {
            let l = src.load()?;
            let spec = rule.resolve(&l)?;
            let seed = match mode {
                AuditMode::Mc => seed_or_default(seed),
                AuditMode::Exact => seed.unwrap_or(DEFAULT_SEED),
            };
            let r = report::cmd_ratio(&l.instance, &l.label, &spec, &l.order, baseline, mode, trials, seed)?;
            report::emit(out.as_deref(), &report::to_json(&r)?)?;
            Ok(true)
        }
        Command::Reproduce { target, out } => {
            let tables = report::cmd_reproduce(target)?;
            report::write_reproduction(&out, &tables, target)?;
            let mut ok = true;
            for t in &tables {
                for r in &t.rows {
                    eprintln!(
                        "{:<14} {:<40} {} / {} = {:.6} (bound {:.6}) {}",
                        t.target,
                        r.instance,
                        r.setting_b,
                        r.setting_a,
                        r.ratio,
                        r.bound,
                        verdict(r.pass)
                    );
                }
                ok &= t.passed();
            }
            eprintln!("wrote {}", out.display());
            Ok(ok)
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn init_threads() -> Result<(), ReportError> {
    if let Ok(v) = std::env::var("FAIRSTOP_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| ReportError::Usage(format!("FAIRSTOP_THREADS='{v}' is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ReportError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = init_threads().and_then(|()| run(cli.command));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("fairstop: {e}");
            ExitCode::from(1)
        }
    }
}
