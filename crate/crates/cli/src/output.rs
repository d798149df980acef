use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output directory plus the provenance stamped on every file.
pub struct Sink {
    pub dir: PathBuf,
    pub hash: String,
}

impl Sink {
    pub fn new(dir: &Path, hash: String) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), hash })
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn csv(&self, name: &str, table: &Csv) -> Result<PathBuf, CliError> {
        let fail = |e: csv::Error| CliError::Runtime(format!("writing {name}: {e}"));
        let mut w = csv::Writer::from_writer(format!("# cosserat-plate {VERSION}\n# config_sha256 {}\n", self.hash).into_bytes());
        w.write_record(&table.header).map_err(fail)?;
        for row in &table.rows {
            w.write_record(row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Runtime(format!("writing {name}: {e}")))?;
        self.write(name, &String::from_utf8(bytes).expect("utf-8 records"))
    }

    /// JSON object with `version` and `config_sha256` next to the payload.
    pub fn json<T: Serialize>(&self, name: &str, payload: &T) -> Result<PathBuf, CliError> {
        #[derive(Serialize)]
        struct Stamped<'a, T> {
            version: &'static str,
            config_sha256: &'a str,
            #[serde(flatten)]
            payload: &'a T,
        }
        let text = serde_json::to_string_pretty(&Stamped { version: VERSION, config_sha256: &self.hash, payload })
            .map_err(|e| CliError::Runtime(format!("serializing {name}: {e}")))?;
        self.write(name, &(text + "\n"))
    }
}

pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip representation; deterministic across runs.
pub fn num(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{x:e}").expect("string write");
    s
}
