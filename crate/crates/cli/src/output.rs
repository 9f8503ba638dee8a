use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::args::OutputArgs;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Validation(String),
    /// A solver or integrator did not reach its tolerance: exit code 3.
    NonConvergence(String),
    /// I/O and everything else: exit code 1.
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::NonConvergence(m) | CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<sk2d::Error> for CliError {
    fn from(e: sk2d::Error) -> Self {
        use sk2d::Error as E;
        let m = e.to_string();
        match e {
            E::Dimension(_) | E::Domain(_) | E::Invalid(_) => CliError::Validation(m),
            E::Solver(_) | E::Integration(_) | E::Accuracy(_) | E::Contour(_) | E::Fit(_) | E::Construction(_) => {
                CliError::NonConvergence(m)
            }
            E::Io(_) | E::Csv(_) | E::Json(_) => CliError::Other(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(format!("I/O error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(format!("JSON error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attach the schema tag as the first key.
pub fn document(body: impl Serialize) -> CliResult<Value> {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), Value::from(sk2d::SCHEMA));
    match serde_json::to_value(body)? {
        Value::Object(o) => {
            for (k, v) in o {
                if k != "schema" {
                    map.insert(k, v);
                }
            }
        }
        other => {
            map.insert("result".into(), other);
        }
    }
    Ok(Value::Object(map))
}

/// Directory for field dumps; created if missing.
pub fn out_dir(o: &OutputArgs) -> CliResult<Option<PathBuf>> {
    match &o.out {
        None => Ok(None),
        Some(p) => {
            fs::create_dir_all(p)?;
            Ok(Some(p.clone()))
        }
    }
}

pub fn write_json(path: &Path, doc: &Value) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_string_pretty(doc)? + "\n")?;
    Ok(())
}

/// Print `doc` as JSON (with --json) or as `key: value` lines of its scalar
/// entries, and write it to --out when that names a file.
pub fn emit(o: &OutputArgs, doc: &Value, out_is_dir: bool) -> CliResult<()> {
    if let Some(p) = &o.out {
        if out_is_dir {
            write_json(&p.join("summary.json"), doc)?;
        } else {
            write_json(p, doc)?;
        }
    }
    if o.json {
        println!("{}", serde_json::to_string_pretty(doc)?);
    } else if let Value::Object(m) = doc {
        for (k, v) in m {
            match v {
                Value::Object(_) => {}
                Value::Array(a) if a.iter().any(|x| x.is_object()) => {}
                other => println!("{k}: {other}"),
            }
        }
    }
    Ok(())
}
