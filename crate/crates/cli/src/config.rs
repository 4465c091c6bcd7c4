//! Run configuration: one TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    pub vocabulary: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Dims {
    pub wire_dim: usize,
    pub d_max: usize,
    /// Fixed-point angle bits for oracle tables.
    pub precision: u32,
}

impl Default for Dims {
    fn default() -> Self {
        Dims {
            wire_dim: 2,
            d_max: qdiscocirc::ir::DEFAULT_D_MAX,
            precision: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Task {
    pub epsilon: f64,
    pub delta: f64,
    pub mode: ModeName,
    pub seed: u64,
}

impl Default for Task {
    fn default() -> Self {
        Task {
            epsilon: 0.125,
            delta: 0.05,
            mode: ModeName::Exact,
            seed: 0,
        }
    }
}

/// Caps for oracle synthesis; unset caps are taken from the corpus.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Synthesis {
    pub texts: Option<usize>,
    pub boxes: Option<usize>,
    /// Simulate W against direct compilation when it has at most this
    /// many qubits.
    pub verify_qubits: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sampler {
    pub gamma: f64,
    pub c3: f64,
    pub c1: f64,
    pub zipf_exponent: f64,
    /// Success probability of the arity distribution (geometric, truncated
    /// at `d_max`).
    pub arity_p: f64,
}

impl Default for Sampler {
    fn default() -> Self {
        let p = qdiscocirc::ir::SamplerParams::default();
        let arity_p = match p.arity {
            qdiscocirc::ir::ArityDist::Geometric { p } => p,
            _ => 0.5,
        };
        Sampler {
            gamma: p.gamma,
            c3: p.c3,
            c1: p.c1,
            zipf_exponent: p.zipf_exponent,
            arity_p,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub paths: Paths,
    pub dims: Dims,
    pub task: Task,
    pub synthesis: Synthesis,
    pub sampler: Sampler,
}

/// Flags that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub mode: Option<ModeName>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Read `path` (relative paths inside it resolve against its
    /// directory), apply overrides and validate.
    pub fn load(path: Option<&Path>, o: &Overrides) -> Result<RunConfig, CliError> {
        let mut c = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                let mut c: RunConfig = toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                let base = p.parent().unwrap_or(Path::new(""));
                for slot in [
                    &mut c.paths.vocabulary,
                    &mut c.paths.embeddings,
                    &mut c.paths.out,
                ] {
                    if let Some(x) = slot {
                        if x.is_relative() {
                            *x = base.join(&*x);
                        }
                    }
                }
                c
            }
            None => RunConfig::default(),
        };
        if let Some(s) = o.seed {
            c.task.seed = s;
        }
        if let Some(e) = o.epsilon {
            c.task.epsilon = e;
        }
        if let Some(d) = o.delta {
            c.task.delta = d;
        }
        if let Some(m) = o.mode {
            c.task.mode = m;
        }
        if let Some(out) = &o.out {
            c.paths.out = Some(out.clone());
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.dims.wire_dim < 2 || !self.dims.wire_dim.is_power_of_two() {
            return bad(format!(
                "wire_dim {} is not a power of two",
                self.dims.wire_dim
            ));
        }
        if !(self.task.epsilon > 0.0 && self.task.epsilon < 1.0) {
            return bad(format!("epsilon {} is outside (0,1)", self.task.epsilon));
        }
        if !(self.task.delta > 0.0 && self.task.delta < 1.0) {
            return bad(format!("delta {} is outside (0,1)", self.task.delta));
        }
        if self.dims.d_max == 0 {
            return bad("d_max must be positive".into());
        }
        if self.dims.precision == 0 || self.dims.precision > 30 {
            return bad(format!(
                "precision {} is outside 1..=30",
                self.dims.precision
            ));
        }
        for p in [&self.paths.vocabulary, &self.paths.embeddings]
            .into_iter()
            .flatten()
        {
            if !p.is_file() {
                return bad(format!("{} does not exist", p.display()));
            }
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.paths
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn mode(&self, seed: u64) -> qdiscocirc::tasks::Mode {
        match self.task.mode {
            ModeName::Exact => qdiscocirc::tasks::Mode::Exact,
            ModeName::Sampled => qdiscocirc::tasks::Mode::Sampled {
                epsilon: self.task.epsilon,
                delta: self.task.delta,
                seed,
            },
        }
    }

    pub fn sampler_params(&self) -> qdiscocirc::ir::SamplerParams {
        qdiscocirc::ir::SamplerParams {
            gamma: self.sampler.gamma,
            c3: self.sampler.c3,
            c1: self.sampler.c1,
            zipf_exponent: self.sampler.zipf_exponent,
            arity: qdiscocirc::ir::ArityDist::Geometric {
                p: self.sampler.arity_p,
            },
            d_max: self.dims.d_max,
        }
    }
}
