//! JSON group configurations and point lists.
//!
//! Indices are 1-based in files and rationals are strings such as `"-3/2"`.
//!
//! ```json
//! {"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 3, "1"]]}
//! {"preset": "heisenberg", "n": 1}
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lie::{preset, StratifiedAlgebra};
use crate::scalar::{format_rational, parse_rational, rational_from_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupConfig {
    Preset {
        preset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
    },
    Explicit {
        step: usize,
        layer_dims: Vec<usize>,
        #[serde(default)]
        brackets: Vec<(usize, usize, usize, Value)>,
    },
}

impl GroupConfig {
    pub fn preset(name: &str, param: Option<usize>) -> Self {
        let (n, m) = if name == "free_step2" { (None, param) } else { (param, None) };
        GroupConfig::Preset {
            preset: name.to_string(),
            n,
            m,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group config: {e}")))
    }

    pub fn build(&self) -> Result<Arc<StratifiedAlgebra>> {
        match self {
            GroupConfig::Preset { preset: name, n, m } => {
                if n.is_some() && m.is_some() {
                    return Err(Error::InvalidPresetParams("give at most one of `n` and `m`".into()));
                }
                Ok(Arc::new(preset(name, n.or(*m))?))
            }
            GroupConfig::Explicit {
                step,
                layer_dims,
                brackets,
            } => {
                if *step != layer_dims.len() {
                    return Err(Error::InvalidAlgebra(format!(
                        "step {step} does not match {} layer dimensions",
                        layer_dims.len()
                    )));
                }
                let entries = brackets
                    .iter()
                    .map(|(i, j, k, c)| {
                        for idx in [i, j, k] {
                            if *idx == 0 {
                                return Err(Error::Parse("bracket indices are 1-based".into()));
                            }
                        }
                        Ok((i - 1, j - 1, k - 1, scalar_value(c)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Arc::new(StratifiedAlgebra::new(layer_dims.clone(), entries)?))
            }
        }
    }
}

/// Explicit form of an algebra, with every nonzero constant listed.
pub fn explicit_config(alg: &StratifiedAlgebra) -> Value {
    let brackets: Vec<Value> = alg
        .bracket_entries()
        .into_iter()
        .map(|(i, j, k, c)| serde_json::json!([i, j, k, format_rational(&c)]))
        .collect();
    serde_json::json!({
        "step": alg.step(),
        "layer_dims": alg.layer_dims(),
        "brackets": brackets,
    })
}

/// SHA-256 of the canonical explicit form, as lowercase hex.
pub fn group_hash(alg: &StratifiedAlgebra) -> String {
    let canonical = serde_json::to_string(&explicit_config(alg)).expect("plain JSON");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// A rational from a JSON string (`"p/q"`, decimal) or number.
pub fn scalar_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                parse_rational(&num.to_string())
            }
        }
        other => Err(Error::Parse(format!("expected a number or rational string, got {other}"))),
    }
}

pub fn rational_vector(v: &Value) -> Result<Vec<Rational>> {
    match v {
        Value::Array(items) => items.iter().map(scalar_value).collect(),
        other => Err(Error::Parse(format!("expected an array, got {other}"))),
    }
}

/// A list of points: either a bare array of coordinate arrays or
/// `{"points": [...]}`.
pub fn point_list(v: &Value) -> Result<Vec<Vec<Rational>>> {
    let items = match v {
        Value::Array(items) => items,
        Value::Object(map) => match map.get("points") {
            Some(Value::Array(items)) => items,
            _ => return Err(Error::Parse("expected a `points` array".into())),
        },
        other => return Err(Error::Parse(format!("expected a point list, got {other}"))),
    };
    items.iter().map(rational_vector).collect()
}

pub fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn exact_from_f64(v: &[f64]) -> Result<Vec<Rational>> {
    v.iter().map(|&x| rational_from_f64(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{heisenberg, validate};
    use crate::scalar::rat;

    #[test]
    fn explicit_and_preset_agree() {
        let a = GroupConfig::from_json(r#"{"step": 2, "layer_dims": [2, 1], "brackets": [[1, 2, 3, "1"]]}"#)
            .unwrap()
            .build()
            .unwrap();
        let b = GroupConfig::from_json(r#"{"preset": "heisenberg", "n": 1}"#).unwrap().build().unwrap();
        assert_eq!(*a, heisenberg(1).unwrap());
        assert_eq!(group_hash(&a), group_hash(&b));
        assert!(validate(&a).passed());
        let round = GroupConfig::from_json(&explicit_config(&a).to_string()).unwrap().build().unwrap();
        assert_eq!(round, a);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(GroupConfig::from_json(r#"{"step": 3, "layer_dims": [2, 1]}"#).unwrap().build().is_err());
        assert!(GroupConfig::from_json(r#"{"step": 2, "layer_dims": [2, 1], "brackets": [[0, 2, 3, "1"]]}"#)
            .unwrap()
            .build()
            .is_err());
        assert!(matches!(
            GroupConfig::from_json(r#"{"preset": "sl2"}"#).unwrap().build(),
            Err(Error::UnknownPreset(_))
        ));
        assert!(GroupConfig::from_json("{").is_err());
    }

    #[test]
    fn parses_points() {
        let v: Value = serde_json::from_str(r#"{"points": [["1/2", 3, -0.25]]}"#).unwrap();
        assert_eq!(point_list(&v).unwrap(), vec![vec![rat(1, 2), rat(3, 1), rat(-1, 4)]]);
    }
}
