//! CSV writers with a resolved-configuration comment header, plus the
//! optional JSON mirror.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;

pub struct CsvSink<'a> {
    pub dir: &'a Path,
    pub config_lines: &'a [(String, String)],
    pub json: bool,
}

impl CsvSink<'_> {
    /// Writes `name.csv` (and `name.json` when mirroring) with the resolved
    /// configuration as `# key=value` comment lines ahead of the column
    /// header. Returns the CSV path.
    pub fn write(
        &self,
        name: &str,
        columns: &[&str],
        rows: &[Vec<String>],
    ) -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(self.dir)
            .with_context(|| format!("cannot create output dir {}", self.dir.display()))?;
        let path = self.dir.join(format!("{name}.csv"));
        let file = std::fs::File::create(&path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = std::io::BufWriter::new(file);
        for (key, value) in self.config_lines {
            writeln!(w, "# {key}={value}")?;
        }
        writeln!(w, "{}", columns.join(","))?;
        for row in rows {
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;

        if self.json {
            let json_path = self.dir.join(format!("{name}.json"));
            let objects: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (col, val) in columns.iter().zip(row.iter()) {
                        let v = val
                            .parse::<f64>()
                            .map(|f| {
                                serde_json::Number::from_f64(f)
                                    .map(serde_json::Value::Number)
                                    .unwrap_or_else(|| serde_json::Value::String(val.clone()))
                            })
                            .unwrap_or_else(|_| serde_json::Value::String(val.clone()));
                        obj.insert((*col).to_string(), v);
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut config = serde_json::Map::new();
            for (key, value) in self.config_lines {
                config.insert(key.clone(), serde_json::Value::String(value.clone()));
            }
            let doc = serde_json::json!({ "config": config, "rows": objects });
            std::fs::write(&json_path, serde_json::to_string_pretty(&doc)?)
                .with_context(|| format!("cannot write {}", json_path.display()))?;
        }
        Ok(path)
    }
}

/// Fixed-precision scientific notation keeps the files byte-reproducible
/// and plot-tool friendly.
pub fn fmt(value: f64) -> String {
    format!("{value:.9e}")
}
