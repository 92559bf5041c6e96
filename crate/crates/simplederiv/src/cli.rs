//! Argument parsing and the process entry point.
//!
//! Exit status: 0 when every verdict is as expected, 1 when a run produced a
//! counterexample, 2 on usage or input errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use crate::config::{
    parse_list, Control, DerivationSource, RunConfig, Task, DEFAULT_DEGREE, DEFAULT_ISOTROPY_BOX,
    DEFAULT_TRIANGULAR_BOX,
};
use crate::format::DerivationFile;
use crate::report::{Output, Status, OUT_DIR_ENV};
use crate::run::run;

#[derive(Debug, Parser)]
#[command(name = "simplederiv", version, about = "Exact checks for polynomial derivations")]
pub struct Cli {
    /// Print the JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory receiving a copy of the JSON report [env: SIMPLEDERIV_OUT_DIR].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a derivation to a polynomial.
    Apply {
        #[command(flatten)]
        derivation: DerivationArgs,
        #[arg(long)]
        target: String,
    },
    /// Decide whether a target lies in the image of polynomials of bounded degree.
    Image {
        #[command(flatten)]
        derivation: DerivationArgs,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u32,
    },
    /// Look for units and affine targets a*x_n + b in the image of the family.
    ScanUnits {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u32,
    },
    /// Emit the case-analysis certificate for (m, alpha).
    LemmaCert {
        /// Comma list or ranges, e.g. 2,3 or 2..6.
        #[arg(long)]
        m: String,
        #[arg(long)]
        alpha: String,
        /// Also reconstruct and report the coefficient chain at this j0.
        #[arg(long)]
        j0: Option<u32>,
    },
    /// Search for Darboux polynomials with integer cofactors in a box.
    Darboux {
        #[command(flatten)]
        derivation: DerivationArgs,
        #[arg(long, default_value_t = 6)]
        deg_p: u32,
        #[arg(long)]
        cofactor_deg: Option<u32>,
        /// `B` for -B..B, or `lo..hi`.
        #[arg(long = "box", default_value = "2")]
        bound: String,
    },
    /// Scan affine maps commuting with the family.
    Isotropy {
        #[command(flatten)]
        family: FamilyArgs,
        /// Entries range over -B..B (default 2, or 1 with --full-affine).
        #[arg(long = "box")]
        bound: Option<i64>,
        /// Scan lower-triangular instead of diagonal linear parts.
        #[arg(long)]
        full_affine: bool,
    },
    /// Re-run the configuration echoed in a JSON report.
    Replay { report: PathBuf },
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// Comma list or ranges, e.g. 2,3 or 2..4.
    #[arg(long)]
    m: String,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    n: String,
}

impl FamilyArgs {
    /// `(n, m, alpha)` in grid order, `m` slowest.
    fn grid(&self) -> anyhow::Result<Vec<(usize, u32, u32)>> {
        let ms: Vec<u32> = parse_list(&self.m).context("--m")?;
        let alphas: Vec<u32> = parse_list(&self.alpha).context("--alpha")?;
        let ns: Vec<usize> = parse_list::<u32>(&self.n)
            .context("--n")?
            .into_iter()
            .map(|n| n as usize)
            .collect();
        let mut out = Vec::new();
        for &m in &ms {
            for &alpha in &alphas {
                for &n in &ns {
                    out.push((n, m, alpha));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Args)]
struct DerivationArgs {
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Comma list of ddx, euler.
    #[arg(long)]
    control: Option<String>,
    /// JSON file {arity, coefficients}.
    #[arg(long)]
    derivation: Option<PathBuf>,
}

impl DerivationArgs {
    fn sources(&self) -> anyhow::Result<Vec<DerivationSource>> {
        let family = self.m.is_some() || self.alpha.is_some();
        match (family, &self.control, &self.derivation) {
            (true, None, None) => {
                let (Some(m), Some(alpha)) = (&self.m, &self.alpha) else {
                    bail!("--m and --alpha go together");
                };
                let n = self.n.as_deref().unwrap_or("2");
                let args = FamilyArgs {
                    m: m.clone(),
                    alpha: alpha.clone(),
                    n: n.to_string(),
                };
                Ok(args
                    .grid()?
                    .into_iter()
                    .map(|(n, m, alpha)| DerivationSource::Family { n, m, alpha })
                    .collect())
            }
            (false, Some(controls), None) => {
                let ns: Vec<u32> = parse_list(self.n.as_deref().unwrap_or("2")).context("--n")?;
                let mut out = Vec::new();
                for name in controls.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let control: Control = name.parse()?;
                    for &n in &ns {
                        out.push(DerivationSource::Control { control, n: n as usize });
                    }
                }
                Ok(out)
            }
            (false, None, Some(path)) => {
                if self.n.is_some() {
                    bail!("--n does not apply to --derivation");
                }
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let file: DerivationFile =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                file.to_derivation()?;
                Ok(vec![DerivationSource::Explicit(file)])
            }
            (false, None, None) => bail!("choose a derivation: --m/--alpha[/--n], --control, or --derivation FILE"),
            _ => bail!("--m/--alpha, --control and --derivation are mutually exclusive"),
        }
    }
}

fn parse_box(text: &str) -> anyhow::Result<(i64, i64)> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: i64 = lo.trim().parse().context("box start")?;
        let hi: i64 = hi.trim().trim_start_matches('=').parse().context("box end")?;
        if lo > hi {
            bail!("empty box {text:?}");
        }
        Ok((lo, hi))
    } else {
        let b: i64 = text.parse().context("box")?;
        if b < 0 {
            bail!("box bound must be non-negative");
        }
        Ok((-b, b))
    }
}

impl Cli {
    pub fn run_config(&self) -> anyhow::Result<RunConfig> {
        if let Command::Replay { report } = &self.command {
            return replay_config(report);
        }
        let tasks = match &self.command {
            Command::Apply { derivation, target } => derivation
                .sources()?
                .into_iter()
                .map(|derivation| Task::Apply {
                    derivation,
                    target: target.clone(),
                })
                .collect(),
            Command::Image {
                derivation,
                target,
                degree,
            } => derivation
                .sources()?
                .into_iter()
                .map(|derivation| Task::Image {
                    derivation,
                    target: target.clone(),
                    degree: *degree,
                })
                .collect(),
            Command::ScanUnits { family, degree } => family
                .grid()?
                .into_iter()
                .map(|(n, m, alpha)| Task::ScanUnits {
                    n,
                    m,
                    alpha,
                    degree: *degree,
                })
                .collect(),
            Command::LemmaCert { m, alpha, j0 } => {
                let ms: Vec<u32> = parse_list(m).context("--m")?;
                let alphas: Vec<u32> = parse_list(alpha).context("--alpha")?;
                ms.iter()
                    .flat_map(|&m| alphas.iter().map(move |&alpha| Task::LemmaCert { m, alpha, j0: *j0 }))
                    .collect()
            }
            Command::Darboux {
                derivation,
                deg_p,
                cofactor_deg,
                bound,
            } => {
                let coefficient_box = parse_box(bound)?;
                derivation
                    .sources()?
                    .into_iter()
                    .map(|derivation| Task::Darboux {
                        derivation,
                        deg_p: *deg_p,
                        cofactor_deg: *cofactor_deg,
                        coefficient_box,
                    })
                    .collect()
            }
            Command::Isotropy {
                family,
                bound,
                full_affine,
            } => {
                let default = if *full_affine {
                    DEFAULT_TRIANGULAR_BOX
                } else {
                    DEFAULT_ISOTROPY_BOX
                };
                let bound = bound.unwrap_or(default);
                if bound < 0 {
                    bail!("box bound must be non-negative");
                }
                family
                    .grid()?
                    .into_iter()
                    .map(|(n, m, alpha)| Task::Isotropy {
                        n,
                        m,
                        alpha,
                        bound,
                        full_affine: *full_affine,
                    })
                    .collect()
            }
            Command::Replay { .. } => unreachable!("handled above"),
        };
        Ok(RunConfig { seed: self.seed, tasks })
    }
}

fn replay_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let output: Output = serde_json::from_str(&text).with_context(|| format!("parsing report {}", path.display()))?;
    Ok(output.run_config())
}

/// Parses `args`, runs, prints, and maps the outcome to an exit status.
pub fn main_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(Status::Expected) => ExitCode::SUCCESS,
        Ok(Status::Counterexample) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<Status> {
    let config = cli.run_config()?;
    let output = run(&config)?;
    let warnings: BTreeSet<&String> = output.points().iter().flat_map(|p| &p.warnings).collect();
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if cli.json {
        out.write_all(output.to_json().as_bytes())?;
    } else {
        for p in output.points() {
            let tag = match p.verdict.status {
                Status::Expected => "ok",
                Status::Counterexample => "COUNTEREXAMPLE",
            };
            writeln!(
                out,
                "[{tag}] {} {}: {}",
                p.command,
                point_label(&p.config),
                p.verdict.summary
            )?;
        }
        if let Output::Grid(g) = &output {
            writeln!(out, "{}", g.verdict.summary)?;
        }
    }
    let dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    if let Some(dir) = dir {
        let path = output.write_to(&dir)?;
        eprintln!("report written to {}", path.display());
    }
    Ok(output.status())
}

fn point_label(task: &Task) -> String {
    match task {
        Task::Apply { derivation, .. } | Task::Image { derivation, .. } | Task::Darboux { derivation, .. } => {
            derivation.label()
        }
        Task::ScanUnits { n, m, alpha, .. } | Task::Isotropy { n, m, alpha, .. } => DerivationSource::Family {
            n: *n,
            m: *m,
            alpha: *alpha,
        }
        .label(),
        Task::LemmaCert { m, alpha, .. } => format!("m={m}, alpha={alpha}"),
    }
}
