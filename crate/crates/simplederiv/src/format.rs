//! File formats: derivations as JSON, rationals and polynomials as strings.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use simplederiv_core::poly::{parse, Polynomial, Rational};
use simplederiv_core::Derivation;

/// `{"arity": n, "coefficients": ["1 - x1*x2", ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationFile {
    pub arity: usize,
    pub coefficients: Vec<String>,
}

impl DerivationFile {
    pub fn from_derivation(d: &Derivation) -> Self {
        DerivationFile {
            arity: d.arity(),
            coefficients: d.coefficients().iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_derivation(&self) -> anyhow::Result<Derivation> {
        if self.coefficients.len() != self.arity {
            bail!(
                "arity is {} but {} coefficients were given",
                self.arity,
                self.coefficients.len()
            );
        }
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, text)| parse(text, self.arity).with_context(|| format!("coefficient {}: {text:?}", i + 1)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Derivation::new(coefficients)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Derivation> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: DerivationFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        file.to_derivation()
    }

    pub fn save(d: &Derivation, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(&Self::from_derivation(d))?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

pub fn poly_string(p: &Polynomial) -> String {
    p.to_string()
}
