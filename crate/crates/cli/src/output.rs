use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::commands::CliError;

/// Collects output files and writes `report.json` listing them.
pub struct Output {
    dir: PathBuf,
    artifacts: Vec<String>,
}

impl Output {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    /// Writes `report.json`: the `body` fields plus `schema`, `command`,
    /// `seed` and `artifacts`.
    pub fn finish(self, command: &str, seed: u64, body: &impl Serialize) -> Result<(), CliError> {
        let mut map = match serde_json::to_value(body).map_err(|e| CliError::Io(e.to_string()))? {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        map.insert("schema".into(), Value::from(pqc_lens::SCHEMA_VERSION));
        map.insert("command".into(), Value::from(command));
        map.insert("seed".into(), Value::from(seed));
        map.insert("artifacts".into(), Value::from(self.artifacts.clone()));
        let text = serde_json::to_string_pretty(&Value::Object(map)).map_err(|e| CliError::Io(e.to_string()))?;
        let path = self.dir.join("report.json");
        fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
