//! Suite configuration: JSON file with a versioned schema id, overridable by flags.

use clap::ValueEnum;
use mockperiods::kernel::{parse_float, Complex, PrecisionContext};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::forms::FormId;

pub const SCHEMA: &str = "mockperiods.suite/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Superm,
    Wk2,
    Mockes,
    Perstar,
    Poincare,
    Special,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Superm, Suite::Wk2, Suite::Mockes, Suite::Perstar, Suite::Poincare, Suite::Special];

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::EACH.to_vec(),
            s => vec![s],
        }
    }
}

/// Evaluation points: a named grid or explicit `[re, im]` decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSet {
    Named(String),
    Explicit(Vec<[String; 2]>),
}

impl Default for PointSet {
    fn default() -> Self {
        PointSet::Named("generic5".into())
    }
}

// Off the unit circle and the imaginary axis, heights between 0.5 and 3.
const GENERIC: [(&str, &str); 10] = [
    ("0.1", "0.5"),
    ("0.35", "0.8"),
    ("0.6", "1.1"),
    ("0.2", "1.4"),
    ("0.75", "1.7"),
    ("0.45", "2.0"),
    ("0.9", "0.5"),
    ("0.15", "2.4"),
    ("0.85", "2.7"),
    ("0.5", "3.0"),
];

impl PointSet {
    pub fn resolve(&self, prec: u32) -> Result<Vec<Complex>, CliError> {
        match self {
            PointSet::Named(name) => {
                let n = match name.as_str() {
                    "generic3" => 3,
                    "generic5" => 5,
                    "generic10" => 10,
                    _ => return Err(CliError::Config(format!("unknown point grid `{name}`"))),
                };
                Ok(GENERIC[..n]
                    .iter()
                    .map(|&(x, y)| Complex::new(parse_float(prec, x).expect("grid literal"), parse_float(prec, y).expect("grid literal")))
                    .collect())
            }
            PointSet::Explicit(list) => list
                .iter()
                .map(|[re, im]| {
                    let part = |s: &str| parse_float(prec, s).ok_or_else(|| CliError::Config(format!("bad number `{s}`")));
                    let z = Complex::new(part(re)?, part(im)?);
                    if z.im <= 0 {
                        return Err(CliError::Config(format!("point {re} + {im}i is not in the upper half-plane")));
                    }
                    Ok(z)
                })
                .collect(),
        }
    }
}

fn default_digits() -> u32 {
    50
}

fn default_forms() -> Vec<String> {
    vec!["delta".into(), "cusp16".into()]
}

fn default_terms() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub schema: String,
    #[serde(default = "default_digits")]
    pub digits: u32,
    #[serde(default)]
    pub tol_tight: Option<f64>,
    #[serde(default)]
    pub tol_fd: Option<f64>,
    #[serde(default)]
    pub points: PointSet,
    #[serde(default = "default_forms")]
    pub forms: Vec<String>,
    /// q-expansion length for every form.
    #[serde(default = "default_terms")]
    pub terms: usize,
    #[serde(default)]
    pub suites: Vec<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA.into(),
            digits: default_digits(),
            tol_tight: None,
            tol_fd: None,
            points: PointSet::default(),
            forms: default_forms(),
            terms: default_terms(),
            suites: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema != SCHEMA {
            return Err(CliError::Config(format!("schema `{}` is not `{SCHEMA}`", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn context(&self) -> Result<PrecisionContext, CliError> {
        let mut ctx = PrecisionContext::new(self.digits)?;
        if let Some(t) = self.tol_tight {
            ctx.tol_tight = t;
        }
        if let Some(t) = self.tol_fd {
            ctx.tol_fd = t;
        }
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn form_ids(&self) -> Result<Vec<FormId>, CliError> {
        self.forms.iter().map(|s| s.parse()).collect()
    }
}
