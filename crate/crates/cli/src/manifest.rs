//! Run identity: the config hash every artifact is stamped with, seed
//! derivation and the manifest file.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex(&Sha256::digest(data))
}

/// Seed for one (component, purpose) pair, derived from the run seed.
pub fn derive_seed(seed: u64, component: &str, purpose: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(component.as_bytes());
    h.update([0]);
    h.update(purpose.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything that determines a run's artifacts.
#[derive(Clone, Debug, Serialize)]
struct Identity<'a> {
    command: &'a str,
    args: &'a serde_json::Value,
    config: &'a RunConfig,
    inputs: &'a [InputDigest],
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub command: String,
    pub args: serde_json::Value,
    pub config: RunConfig,
    pub config_hash: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub artifacts: Vec<String>,
    pub exit_code: i32,
    pub error: Option<String>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub finished_at: u64,
}

/// Collects a run's inputs and artifacts and writes them under the output
/// directory.
pub struct Run {
    pub command: String,
    pub args: serde_json::Value,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub artifacts: Vec<String>,
    out: PathBuf,
    sealed: std::cell::OnceCell<String>,
}

impl Run {
    pub fn new(command: &str, args: serde_json::Value, config: RunConfig) -> Run {
        let out = config.out_dir();
        Run {
            command: command.into(),
            args,
            config,
            inputs: Vec::new(),
            artifacts: Vec::new(),
            out,
            sealed: Default::default(),
        }
    }

    /// Read an input file and record its digest. All inputs must be read
    /// before the first artifact is written.
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        assert!(
            self.sealed.get().is_none(),
            "input read after the run hash was fixed"
        );
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes)
            .map_err(|_| CliError::Config(format!("{} is not UTF-8", path.display())))
    }

    /// Fixed at first use, so every artifact carries the same value.
    pub fn hash(&self) -> String {
        self.sealed.get_or_init(|| self.identity_hash()).clone()
    }

    /// The output directory is left out so reruns elsewhere match.
    fn identity_hash(&self) -> String {
        let mut config = self.config.clone();
        config.paths.out = None;
        let id = Identity {
            command: &self.command,
            args: &self.args,
            config: &config,
            inputs: &self.inputs,
        };
        sha256_hex(
            serde_json::to_string(&id)
                .expect("identity serializes")
                .as_bytes(),
        )
    }

    pub fn seed(&self, component: &str, purpose: &str) -> u64 {
        derive_seed(self.config.task.seed, component, purpose)
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }

    /// Write `body` to `name` in the output directory behind a
    /// `# run: <hash>` line.
    pub fn write(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.out.join(name);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        let text = format!("# run: {}\n{body}", self.hash());
        std::fs::write(&path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.artifacts.push(name.into());
        Ok(())
    }

    /// Write rows as CSV behind the run line.
    pub fn write_csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(format!("{name}: {e}"));
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Io(format!("{name}: {e}")))?;
        self.write(
            name,
            &String::from_utf8(bytes).expect("csv of strings is UTF-8"),
        )
    }

    pub fn finish(&self, result: &Result<(), CliError>) -> Result<(), CliError> {
        let finished_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let m = Manifest {
            tool: format!("qdisco {}", env!("CARGO_PKG_VERSION")),
            command: self.command.clone(),
            args: self.args.clone(),
            config: self.config.clone(),
            config_hash: self.hash(),
            seed: self.config.task.seed,
            inputs: self.inputs.clone(),
            artifacts: self.artifacts.clone(),
            exit_code: result.as_ref().map_or_else(CliError::exit_code, |_| 0),
            error: result.as_ref().err().map(ToString::to_string),
            finished_at,
        };
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Io(format!("{}: {e}", self.out.display())))?;
        let path = self.out.join("manifest.json");
        let text = serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n";
        std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
