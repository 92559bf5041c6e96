//! Run configurations. Each one is echoed verbatim into its report, and a
//! report's `config` object deserializes back into the [`Task`] that made it.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use simplederiv_core::{jordan_derivation, Derivation, FamilyParams};

use crate::format::DerivationFile;

pub const DEFAULT_DEGREE: u32 = 8;
pub const DEFAULT_ISOTROPY_BOX: i64 = 2;
pub const DEFAULT_TRIANGULAR_BOX: i64 = 1;

/// Non-simple reference derivations with known stable ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Control {
    /// `∂/∂x1`; `(x2)` is stable.
    Ddx,
    /// `Σ x_i ∂/∂x_i`; `(x1)` is stable.
    Euler,
}

impl Control {
    pub fn derivation(self, n: usize) -> Derivation {
        match self {
            Control::Ddx => Derivation::partial(n, 0),
            Control::Euler => Derivation::euler(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Control::Ddx => "ddx",
            Control::Euler => "euler",
        }
    }
}

impl FromStr for Control {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "ddx" => Ok(Control::Ddx),
            "euler" => Ok(Control::Euler),
            other => bail!("unknown control {other:?}; expected ddx or euler"),
        }
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a derivation comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DerivationSource {
    /// `(1 - x1*x2^alpha) ∂1 + x1^m ∂2 + x2 ∂3 + ... + x_{n-1} ∂n`.
    Family {
        n: usize,
        m: u32,
        alpha: u32,
    },
    Control {
        control: Control,
        n: usize,
    },
    Explicit(DerivationFile),
}

impl DerivationSource {
    pub fn build(&self) -> anyhow::Result<Derivation> {
        match self {
            DerivationSource::Family { n, m, alpha } => Ok(jordan_derivation(FamilyParams::new(*n, *m, *alpha)?)),
            DerivationSource::Control { control, n } => {
                if *n < 2 {
                    bail!("controls need at least two variables");
                }
                Ok(control.derivation(*n))
            }
            DerivationSource::Explicit(file) => file.to_derivation(),
        }
    }

    /// `m` of a family member, if this is one.
    pub fn family_m(&self) -> Option<u32> {
        match self {
            DerivationSource::Family { m, .. } => Some(*m),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            DerivationSource::Family { n, m, alpha } => format!("d_{n}(m={m}, alpha={alpha})"),
            DerivationSource::Control { control, n } => format!("{control} on {n} variables"),
            DerivationSource::Explicit(file) => format!("explicit derivation on {} variables", file.arity),
        }
    }
}

/// One unit of work; one report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    Apply {
        derivation: DerivationSource,
        target: String,
    },
    Image {
        derivation: DerivationSource,
        target: String,
        degree: u32,
    },
    ScanUnits {
        n: usize,
        m: u32,
        alpha: u32,
        degree: u32,
    },
    LemmaCert {
        m: u32,
        alpha: u32,
        j0: Option<u32>,
    },
    Darboux {
        derivation: DerivationSource,
        deg_p: u32,
        /// Defaults to the largest admissible degree for the derivation.
        cofactor_deg: Option<u32>,
        coefficient_box: (i64, i64),
    },
    Isotropy {
        n: usize,
        m: u32,
        alpha: u32,
        /// Scan parameters range over `-box..=box`.
        #[serde(rename = "box")]
        bound: i64,
        full_affine: bool,
    },
}

impl Task {
    pub fn command(&self) -> &'static str {
        match self {
            Task::Apply { .. } => "apply",
            Task::Image { .. } => "image",
            Task::ScanUnits { .. } => "scan-units",
            Task::LemmaCert { .. } => "lemma-cert",
            Task::Darboux { .. } => "darboux",
            Task::Isotropy { .. } => "isotropy",
        }
    }

    /// `m = 1` lies outside the hypothesis of the simplicity results.
    pub fn outside_hypothesis(&self) -> bool {
        let m = match self {
            Task::ScanUnits { m, .. } | Task::LemmaCert { m, .. } | Task::Isotropy { m, .. } => Some(*m),
            Task::Apply { derivation, .. } | Task::Image { derivation, .. } | Task::Darboux { derivation, .. } => {
                derivation.family_m()
            }
        };
        m == Some(1)
    }
}

/// A run: the tasks of a parameter grid, in grid order, plus the seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tasks: Vec<Task>,
}

/// A comma-separated list of integers or inclusive ranges `a..b`.
pub fn parse_list<T>(text: &str) -> anyhow::Result<Vec<T>>
where
    T: FromStr + Copy + PartialOrd + TryFrom<i64>,
    <T as FromStr>::Err: std::error::Error + Send + Sync + 'static,
{
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: i64 = a
                .trim()
                .parse()
                .with_context(|| format!("bad range start in {item:?}"))?;
            let b: i64 = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .with_context(|| format!("bad range end in {item:?}"))?;
            if a > b {
                bail!("empty range {item:?}");
            }
            for v in a..=b {
                out.push(T::try_from(v).map_err(|_| anyhow::anyhow!("{v} out of range in {item:?}"))?);
            }
        } else {
            out.push(item.parse().with_context(|| format!("bad value {item:?}"))?);
        }
    }
    if out.is_empty() {
        bail!("empty list {text:?}");
    }
    Ok(out)
}
