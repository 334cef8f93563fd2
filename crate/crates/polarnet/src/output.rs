//! Report files. Every CSV starts with a `#` line naming the seed and
//! parameters that produced it; every JSON object carries `seed` and
//! `params` keys.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub struct OutputDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

/// Seed and parameters stamped onto a file.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub seed: u64,
    pub params: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(seed: u64) -> Self {
        Self { seed, params: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    fn comment(&self) -> String {
        let mut s = format!("# seed={}", self.seed);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s.push('\n');
        s
    }

    fn json(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        Value::Object(params)
    }
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<String> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(name.to_string())
    }

    pub fn csv<I>(&mut self, name: &str, prov: &Provenance, header: &[&str], rows: I) -> Result<String>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.dir.join(name);
        let wrap = |e: csv::Error| Error::io(&path, e.into());
        let mut w = csv::Writer::from_writer(prov.comment().into_bytes());
        w.write_record(header).map_err(wrap)?;
        for row in rows {
            w.write_record(&row).map_err(wrap)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::io(&path, e.into_error()))?;
        self.write(name, &bytes)
    }

    /// Writes `value` (an object) with `seed` and `params` added.
    pub fn json(&mut self, name: &str, prov: &Provenance, value: Value) -> Result<String> {
        let mut obj = match value {
            Value::Object(m) => m,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        obj.insert("seed".into(), Value::from(prov.seed));
        obj.insert("params".into(), prov.json());
        self.raw_json(name, &Value::Object(obj))
    }

    pub fn raw_json(&mut self, name: &str, value: &Value) -> Result<String> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("JSON values serialize");
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    /// Renames everything written so far to `<name>.partial`.
    pub fn mark_partial(&mut self) -> Result<()> {
        for path in self.written.drain(..) {
            let mut target = path.clone().into_os_string();
            target.push(".partial");
            fs::rename(&path, &target).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Shortest round-trip form (as in the JSON outputs); empty for NaN and
/// missing values.
pub fn num(x: f64) -> String {
    serde_json::Number::from_f64(x).map(|n| n.to_string()).unwrap_or_default()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(-1.5e-16), "-1.5e-16");
        assert_eq!(num(f64::NAN), "");
        assert_eq!(opt(None), "");
    }

    #[test]
    fn files_carry_provenance_and_go_partial() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path()).unwrap();
        let prov = Provenance::new(3).with("gamma", 1);
        out.csv("x.csv", &prov, &["a"], vec![vec!["1".to_string()]]).unwrap();
        out.json("x.json", &prov, serde_json::json!({"k": 1})).unwrap();
        let csv = fs::read_to_string(dir.path().join("x.csv")).unwrap();
        assert_eq!(csv, "# seed=3 gamma=1\na\n1\n");
        let json: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("x.json")).unwrap()).unwrap();
        assert_eq!(json["seed"], 3);
        assert_eq!(json["params"]["gamma"], "1");
        out.mark_partial().unwrap();
        assert!(dir.path().join("x.csv.partial").exists());
        assert!(!dir.path().join("x.json").exists());
    }
}
