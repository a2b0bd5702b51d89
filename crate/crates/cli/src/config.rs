//! `--config` files: a flat JSON object keyed by option names in
//! snake_case. Options given on the command line win.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::Failure;

pub fn load(path: &Path) -> Result<Map<String, Value>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Failure::usage(format!("config {} is not a JSON object", path.display()))),
        Err(e) => Err(Failure::usage(format!("config {}: {e}", path.display()))),
    }
}

/// Overlays the options set on the command line onto `config`. Unset
/// options (null, false, empty lists) fall through to the config value.
/// Keys unknown to `T` are ignored so one file can serve every subcommand.
pub fn merge<T>(cli: &T, config: &Map<String, Value>) -> Result<T, Failure>
where
    T: Serialize + DeserializeOwned,
{
    let Value::Object(flags) = serde_json::to_value(cli).expect("options serialize") else {
        unreachable!("options are structs");
    };
    let mut merged = config.clone();
    for (key, value) in flags {
        let unset = match &value {
            Value::Null | Value::Bool(false) => true,
            Value::Array(items) => items.is_empty(),
            _ => false,
        };
        if !unset || !merged.contains_key(&key) {
            merged.insert(key, value);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Failure::usage(format!("config: {e}")))
}
