//! Bundled algebras, automorphisms and holonomy data.
//!
//! The files are compiled into the binary. Setting `NILGRADE_FIXTURES` to a
//! directory makes lookups read `<dir>/<name>.json` from disk first.

use std::path::PathBuf;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::qlinalg::Matrix;
use crate::serial;

pub const ENV_VAR: &str = "NILGRADE_FIXTURES";

const BUNDLED: &[(&str, &str)] = &[
    ("abelian2", include_str!("../fixtures/abelian2.json")),
    ("abelian3", include_str!("../fixtures/abelian3.json")),
    ("heisenberg", include_str!("../fixtures/heisenberg.json")),
    ("heisenberg5", include_str!("../fixtures/heisenberg5.json")),
    ("filiform4", include_str!("../fixtures/filiform4.json")),
    ("filiform5", include_str!("../fixtures/filiform5.json")),
    ("filiform5b", include_str!("../fixtures/filiform5b.json")),
    ("filiform6", include_str!("../fixtures/filiform6.json")),
    ("class3dim6", include_str!("../fixtures/class3dim6.json")),
    ("class4dim6", include_str!("../fixtures/class4dim6.json")),
    ("nilp5", include_str!("../fixtures/nilp5.json")),
    ("notcohopf", include_str!("../fixtures/notcohopf.json")),
    (
        "automorphisms",
        include_str!("../fixtures/automorphisms.json"),
    ),
    (
        "heisenberg_holonomy",
        include_str!("../fixtures/heisenberg_holonomy.json"),
    ),
    (
        "notcohopf_phi",
        include_str!("../fixtures/notcohopf_phi.json"),
    ),
];

/// Algebra fixtures, in a fixed order.
pub const ALGEBRAS: &[&str] = &[
    "abelian2",
    "abelian3",
    "heisenberg",
    "heisenberg5",
    "filiform4",
    "filiform5",
    "filiform5b",
    "filiform6",
    "class3dim6",
    "class4dim6",
    "nilp5",
    "notcohopf",
];

/// The curated spot-check corpus of algebras of dimension at most 6.
pub const SMALL_CORPUS: &[&str] = &[
    "abelian2",
    "abelian3",
    "heisenberg",
    "heisenberg5",
    "filiform4",
    "filiform5",
    "filiform5b",
    "filiform6",
    "class3dim6",
    "class4dim6",
];

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR).map(PathBuf::from)
}

/// Raw text of a fixture, honouring the override directory.
pub fn text(name: &str) -> Result<String> {
    if let Some(dir) = override_dir() {
        let path = dir.join(format!("{name}.json"));
        if path.is_file() {
            return std::fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())));
        }
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Io(format!("no fixture named {name:?}")))
}

pub fn json(name: &str) -> Result<Value> {
    serde_json::from_str(&text(name)?).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

pub fn algebra(name: &str) -> Result<LieAlgebra> {
    LieAlgebra::from_json(&json(name)?)
}

/// Bundled automorphisms of the named algebra (possibly none).
pub fn automorphisms(name: &str) -> Result<Vec<Matrix>> {
    let all = json("automorphisms")?;
    match all.get(name).and_then(Value::as_array) {
        None => Ok(Vec::new()),
        Some(ms) => ms.iter().map(serial::parse_matrix).collect(),
    }
}
