use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::args::Command;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] covarfit::Error),
}

impl CliError {
    /// 1 for failures of the numerics, 2 for bad flags or unreadable input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() || matches!(e, covarfit::Error::InsufficientTarget { .. }) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

pub fn open(path: &Path) -> CliResult<std::io::BufReader<File>> {
    File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// `path` with `suffix` appended to the file name (`a/model.json` → `a/model.json.manifest.json`).
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

/// `path` with its extension replaced (`model.json` → `model.report.csv`).
pub fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

/// Files produced by one command, in the order written.
#[derive(Default)]
pub struct Outputs {
    pub files: Vec<PathBuf>,
}

impl Outputs {
    /// Writes through a temporary file in the same directory, renamed into place on success.
    pub fn write(
        &mut self,
        path: &Path,
        body: impl FnOnce(&mut BufWriter<File>) -> covarfit::Result<()>,
    ) -> CliResult<()> {
        let io_err = |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io_err)?;
        }
        let tmp = with_suffix(path, &format!(".tmp{}", std::process::id()));
        let result = (|| {
            let mut w = BufWriter::new(File::create(&tmp).map_err(io_err)?);
            body(&mut w)?;
            w.flush().map_err(io_err)?;
            w.get_ref().sync_all().map_err(io_err)?;
            fs::rename(&tmp, path).map_err(io_err)
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        result?;
        self.files.push(path.to_path_buf());
        Ok(())
    }
}

/// Record of a run, written next to its primary output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Every flag after defaults and seed overrides were applied.
    pub parameters: Command,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub rng_seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(parameters: Command, inputs: Vec<PathBuf>, outputs: Vec<PathBuf>, rng_seed: Option<u64>) -> Self {
        let command = serde_json::to_value(&parameters)
            .ok()
            .and_then(|v| v.get("command").and_then(|c| c.as_str()).map(str::to_string))
            .unwrap_or_default();
        Self {
            command,
            parameters,
            inputs,
            outputs,
            rng_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        serde_json::from_reader(open(path)?)
            .map_err(|e| CliError::Usage(format!("{}: not a run manifest: {e}", path.display())))
    }
}
