//! Command line front end.  Settings flow through three layers with
//! increasing precedence (built-in defaults, an optional `key=value`
//! config file, command line flags); every run writes structured reports
//! that are byte reproducible for a fixed seed apart from wall clock
//! timings.
//!
//! Exit codes: 0 all asserted checks passed (audits always exit 0),
//! 1 at least one asserted check failed, 2 usage or configuration error.

mod config;
mod output;
mod suites;

pub use config::{resolve as config_resolve, ConfigError, ConfigLayer, OutputFormat, SuiteConfig};
pub use suites::{parse_axis, run_suite, suite_mellin, Ctx, GridAxis, Suite};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;
use thetatrace_core::report::{AuditReport, CheckRow, Provenance, Timing};
use thetatrace_core::{logkernel, specfun, zeros};

#[derive(Parser, Debug)]
#[command(
    name = "thetatrace",
    version,
    about = "numerical verification for cycle traces, theta kernels, and their transforms"
)]
struct Cli {
    #[command(flatten)]
    globals: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Flat key=value settings file; flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Pin the canonical self dual geometry.
    #[arg(long, global = true)]
    self_dual: bool,

    /// Circumference of the underlying circle.
    #[arg(
        long = "L",
        global = true,
        value_name = "LENGTH",
        allow_hyphen_values = true
    )]
    length: Option<f64>,

    /// Diffusion coefficient.
    #[arg(
        long = "D",
        global = true,
        value_name = "DIFFUSION",
        allow_hyphen_values = true
    )]
    diffusion: Option<f64>,

    /// Seed for every randomized sweep.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Absolute series truncation target.
    #[arg(long, global = true)]
    eps: Option<f64>,

    /// Worker threads for independent suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Summary file path; per-suite reports land next to it.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report serialization.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Allow tolerance overrides looser than the built-in defaults.
    #[arg(long, global = true)]
    relax: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    fn into_format(self) -> OutputFormat {
        match self {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and fail on out-of-tolerance checks.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,

        /// Real axis of the transform identification grid, start:end:count.
        #[arg(long = "grid-re", value_name = "A:B:N", allow_hyphen_values = true)]
        grid_re: Option<String>,

        /// Imaginary axis of the grid, start:end:count.
        #[arg(long = "grid-im", value_name = "A:B:N", allow_hyphen_values = true)]
        grid_im: Option<String>,
    },
    /// Run informational audits; measurements only, never a failure.
    Audit {
        #[arg(value_enum)]
        which: AuditArg,
    },
    /// Count zeros by winding number or locate one on the axis.
    Zeros {
        #[command(subcommand)]
        action: ZerosAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Specfun,
    Cycle,
    Theta,
    Arch,
    Mellin,
    Logkernel,
    Tp,
    Zeros,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AuditArg {
    Symmetry,
    Tp,
    Expansion,
}

#[derive(Subcommand, Debug)]
enum ZerosAction {
    /// Zeros minus poles inside a rectangle, by boundary winding.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        re_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        re_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        im_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        im_max: f64,
        /// Initial samples per rectangle edge.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Which function to scan.
        #[arg(long, value_enum, default_value = "xi")]
        function: CountTarget,
    },
    /// Locate a real zero of the completed axis function.
    Find {
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountTarget {
    /// Completed zeta, shifted to the critical line at re = 1/2.
    Xi,
    /// Gamma function (poles count negative).
    Gamma,
    /// Closed form bilateral transform of the logarithmic kernel.
    Transform,
}

/// Parse and execute; returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let argv: Vec<String> = std::iter::once("thetatrace".to_string())
        .chain(args)
        .collect();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e);
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, ConfigError> {
    let mut layers = Vec::new();
    if let Some(path) = &cli.globals.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {}", path.display(), e)))?;
        layers.push(config::parse_config_file(&text)?);
    }
    layers.push(flags_layer(&cli.globals));
    let cfg = config::resolve(&layers)?;

    match cli.command {
        Command::Verify {
            suite,
            grid_re,
            grid_im,
        } => run_verify(&cfg, suite, grid_re, grid_im),
        Command::Audit { which } => run_audit(&cfg, which),
        Command::Zeros { action } => run_zeros(&cfg, action),
    }
}

fn flags_layer(globals: &GlobalArgs) -> ConfigLayer {
    let mut layer = ConfigLayer::default();
    if globals.self_dual {
        layer.self_dual = Some(true);
    }
    layer.length = globals.length;
    layer.diffusion = globals.diffusion;
    layer.seed = globals.seed;
    layer.eps = globals.eps;
    layer.jobs = globals.jobs;
    layer.out = globals.out.clone();
    layer.format = globals.format.map(FormatArg::into_format);
    if globals.relax {
        layer.relax = Some(true);
    }
    layer
}

fn run_verify(
    cfg: &SuiteConfig,
    suite: SuiteArg,
    grid_re: Option<String>,
    grid_im: Option<String>,
) -> Result<i32, ConfigError> {
    if suite != SuiteArg::Mellin && (grid_re.is_some() || grid_im.is_some()) {
        return Err(ConfigError::new("grid flags only apply to `verify mellin`"));
    }
    let started = Instant::now();
    let reports = if suite == SuiteArg::Mellin {
        let re_axis = suites::parse_axis(grid_re.as_deref().unwrap_or("0.3:2:5"), 10.0)?;
        let im_axis = suites::parse_axis(grid_im.as_deref().unwrap_or("-5:5:5"), 30.0)?;
        let ctx = Ctx::new(cfg);
        let mut rep = suites::suite_mellin(&ctx, &re_axis, &im_axis);
        rep.timing = Some(Timing {
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        vec![rep]
    } else {
        let list: Vec<Suite> = match suite {
            SuiteArg::All => Suite::ALL.to_vec(),
            SuiteArg::Specfun => vec![Suite::Specfun],
            SuiteArg::Cycle => vec![Suite::Cycle],
            SuiteArg::Theta => vec![Suite::Theta],
            SuiteArg::Arch => vec![Suite::Arch],
            SuiteArg::Logkernel => vec![Suite::Logkernel],
            SuiteArg::Tp => vec![Suite::Tp],
            SuiteArg::Zeros => vec![Suite::Zeros],
            SuiteArg::Mellin => unreachable!("handled above"),
        };
        run_parallel(cfg, &list)
    };
    let summary = output::build_summary(
        cfg,
        &reports,
        Some(Timing {
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        }),
    );
    output::emit(cfg, &reports, &summary)?;
    Ok(if reports.iter().any(|r| r.failed()) {
        1
    } else {
        0
    })
}

/// Run suites on up to `jobs` worker threads; report order matches the
/// request order regardless of scheduling.
fn run_parallel(cfg: &SuiteConfig, list: &[Suite]) -> Vec<AuditReport> {
    let workers = cfg.jobs.min(list.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<AuditReport>>> = Mutex::new(vec![None; list.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= list.len() {
                    break;
                }
                let started = Instant::now();
                let ctx = Ctx::new(cfg);
                let mut rep = suites::run_suite(&ctx, list[i]);
                rep.timing = Some(Timing {
                    wall_ms: started.elapsed().as_secs_f64() * 1e3,
                });
                slots.lock().expect("no panics hold the lock")[i] = Some(rep);
            });
        }
    });
    slots
        .into_inner()
        .expect("scope joined all workers")
        .into_iter()
        .map(|slot| slot.expect("every suite produced a report"))
        .collect()
}

fn run_audit(cfg: &SuiteConfig, which: AuditArg) -> Result<i32, ConfigError> {
    let started = Instant::now();
    let mut rep = match which {
        AuditArg::Symmetry => suites::audit_symmetry(&Ctx::new(cfg)),
        AuditArg::Tp => suites::audit_tp(&Ctx::new(cfg)),
        AuditArg::Expansion => suites::audit_expansion(&Ctx::new(cfg)),
    };
    rep.timing = Some(Timing {
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    });
    let reports = vec![rep];
    let summary = output::build_summary(cfg, &reports, None);
    output::emit(cfg, &reports, &summary)?;
    // Audits are measurements; they never fail the process.
    Ok(0)
}

fn run_zeros(cfg: &SuiteConfig, action: ZerosAction) -> Result<i32, ConfigError> {
    match action {
        ZerosAction::Count {
            re_min,
            re_max,
            im_min,
            im_max,
            samples,
            function,
        } => {
            if !(2..=(1usize << 14)).contains(&samples) {
                return Err(ConfigError::new("samples must lie in 2..=16384"));
            }
            let rect = zeros::Rectangle::new(re_min, re_max, im_min, im_max)
                .map_err(|e| ConfigError::new(format!("{}", e)))?;
            let params = cfg.params;
            let g: Box<dyn Fn(Complex64) -> Option<Complex64>> = match function {
                CountTarget::Xi => Box::new(|w| specfun::xi_completed(w).ok()),
                CountTarget::Gamma => Box::new(|z| specfun::gamma(z).ok()),
                CountTarget::Transform => {
                    Box::new(move |s| logkernel::bilateral_laplace_closed(&params, s).ok())
                }
            };
            match zeros::argument_count(&*g, &rect, samples) {
                Ok(n) => {
                    let mut rep = AuditReport::new("zeros_count");
                    rep.metadata.insert(
                        "rectangle".into(),
                        format!("re [{}, {}], im [{}, {}]", re_min, re_max, im_min, im_max),
                    );
                    rep.metadata.insert(
                        "function".into(),
                        match function {
                            CountTarget::Xi => "xi",
                            CountTarget::Gamma => "gamma",
                            CountTarget::Transform => "transform",
                        }
                        .into(),
                    );
                    rep.push(CheckRow::audit(
                        "count",
                        "zeros minus poles, boundary winding",
                        format!("{}", n),
                        n as f64,
                        Provenance::Derived,
                    ));
                    let rep = rep.into_audit_only();
                    let reports = vec![rep];
                    let summary = output::build_summary(cfg, &reports, None);
                    output::emit(cfg, &reports, &summary)?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("count failed: {}", e);
                    Ok(1)
                }
            }
        }
        ZerosAction::Find { lo, hi, tol } => {
            if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
                return Err(ConfigError::new("find wants finite lo < hi"));
            }
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(ConfigError::new("find wants a positive finite tol"));
            }
            let f = |x: f64| {
                specfun::big_xi(Complex64::new(2.0 * x, 0.0))
                    .map(|v| v.re)
                    .unwrap_or(f64::NAN)
            };
            match zeros::find_real_zero(&f, lo, hi, tol) {
                Ok(root) => {
                    let mut rep = AuditReport::new("zeros_find");
                    rep.metadata
                        .insert("bracket".into(), format!("({}, {})", lo, hi));
                    rep.push(CheckRow::audit(
                        "root",
                        "completed axis function, doubled argument",
                        format!("{}", root),
                        root,
                        Provenance::Derived,
                    ));
                    let rep = rep.into_audit_only();
                    let reports = vec![rep];
                    let summary = output::build_summary(cfg, &reports, None);
                    output::emit(cfg, &reports, &summary)?;
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("find failed: {}", e);
                    Ok(1)
                }
            }
        }
    }
}
