//! Experiment configuration: one JSON document, with CLI flags layered on
//! top (precedence CLI > file > defaults).

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use toeplab_core::ensemble::{EnsembleSpec, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Growth,
    MeanCase,
    NoniidLimsup,
    Concentration,
    HankelCheck,
    SandwichAudit,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::Growth => "growth",
            ExperimentKind::MeanCase => "mean_case",
            ExperimentKind::NoniidLimsup => "noniid_limsup",
            ExperimentKind::Concentration => "concentration",
            ExperimentKind::HankelCheck => "hankel_check",
            ExperimentKind::SandwichAudit => "sandwich_audit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub ensemble: EnsembleSpec,
    pub n_grid: Vec<usize>,
    pub samples_per_n: usize,
    /// Relative tolerance for norm estimation; also the absolute certificate
    /// tolerance requested from the symbol sup evaluations.
    pub tol: f64,
    /// 0 means "resolve from the environment" (TOEPLAB_WORKERS, then the
    /// number of CPUs).
    pub workers: usize,
    pub out_path: Option<String>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Growth,
            ensemble: EnsembleSpec::new(Family::Rademacher, 1),
            n_grid: vec![256, 1024, 4096],
            samples_per_n: 200,
            tol: 1e-7,
            workers: 0,
            out_path: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            bail!("n_grid must be nonempty");
        }
        for w in self.n_grid.windows(2) {
            if w[1] <= w[0] {
                bail!("n_grid must be strictly increasing, got {:?}", self.n_grid);
            }
        }
        if self.n_grid[0] < 1 {
            bail!("n_grid entries must be positive");
        }
        if self.samples_per_n < 1 {
            bail!("samples_per_n must be at least 1");
        }
        if !(self.tol > 0.0) {
            bail!("tol must be positive, got {}", self.tol);
        }
        self.ensemble
            .family
            .validate()
            .context("invalid ensemble")?;
        Ok(())
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }
}

/// Effective worker count: explicit setting, else the TOEPLAB_WORKERS
/// environment variable, else the number of available CPUs.
pub fn resolve_workers(configured: usize) -> usize {
    if configured > 0 {
        return configured;
    }
    if let Ok(v) = std::env::var("TOEPLAB_WORKERS") {
        if let Ok(w) = v.trim().parse::<usize>() {
            if w > 0 {
                return w;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Parses the `--dist` shorthand: `rademacher`, `gaussian:MEAN,SD`,
/// `uniform:HALFWIDTH`, `student_t:DOF`, `two_point_heavy`, `constant:M`.
pub fn parse_family(text: &str) -> Result<Family> {
    let (name, args) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (text.trim(), None),
    };
    let parse_one = |a: Option<&str>, what: &str| -> Result<f64> {
        a.with_context(|| format!("{name} needs {what}, e.g. {name}:1.0"))?
            .parse::<f64>()
            .with_context(|| format!("bad numeric argument in --dist {text}"))
    };
    let family = match name {
        "rademacher" => Family::Rademacher,
        "gaussian" => {
            let a = args.context("gaussian needs mean,sd, e.g. gaussian:0,1")?;
            let (m, s) = a
                .split_once(',')
                .context("gaussian needs mean,sd, e.g. gaussian:0,1")?;
            Family::Gaussian {
                mean: m.trim().parse().context("bad gaussian mean")?,
                sd: s.trim().parse().context("bad gaussian sd")?,
            }
        }
        "uniform" | "uniform_centered" => Family::UniformCentered {
            halfwidth: parse_one(args, "a halfwidth")?,
        },
        "student_t" => Family::StudentT {
            dof: parse_one(args, "degrees of freedom")?,
        },
        "two_point_heavy" => Family::TwoPointHeavy,
        "constant" => Family::Constant {
            value: parse_one(args, "a value")?,
        },
        other => bail!("unknown distribution family: {other}"),
    };
    family.validate()?;
    Ok(family)
}
