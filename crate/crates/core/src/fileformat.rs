//! The JSON map file format.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "type": "A->B",
//!   "dims": {"A": 2, "B": 2},
//!   "matrix": [[[re, im], ...], ...],
//!   "convention": "rowmajor-v1"
//! }
//! ```
//!
//! `matrix` rows and columns follow the typed-map shape contract for the
//! serialized type. Floats serialize in shortest-round-trip decimal form, so
//! a load/save cycle is bit-exact.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linmap::{C64, CMatrix, TypedMap, COORDINATE_CONVENTION};
use crate::parse::parse_type_in;
use crate::registry::SystemRegistry;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MapFile {
    format_version: u32,
    #[serde(rename = "type")]
    type_expr: String,
    dims: BTreeMap<String, u32>,
    matrix: Vec<Vec<[f64; 2]>>,
    convention: String,
}

/// Encode a typed map as a JSON document.
pub fn map_to_json(map: &TypedMap) -> String {
    let registry = map.registry();
    let dims = registry
        .entries()
        .map(|(label, dim)| (label.to_string(), dim))
        .collect();
    let matrix = map
        .matrix()
        .row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let file = MapFile {
        format_version: FORMAT_VERSION,
        type_expr: map.ty().to_string(),
        dims,
        matrix,
        convention: COORDINATE_CONVENTION.to_string(),
    };
    serde_json::to_string_pretty(&file).expect("map file serialization cannot fail")
}

/// Decode a JSON document into a typed map, validating version, convention,
/// type expression, and matrix shape.
pub fn map_from_json(json: &str) -> Result<TypedMap> {
    let file: MapFile =
        serde_json::from_str(json).map_err(|e| Error::Format(format!("invalid JSON: {e}")))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }
    if file.convention != COORDINATE_CONVENTION {
        return Err(Error::Format(format!(
            "unsupported convention `{}` (expected `{COORDINATE_CONVENTION}`)",
            file.convention
        )));
    }
    let registry = Arc::new(
        SystemRegistry::from_pairs(file.dims.iter().map(|(l, d)| (l.as_str(), *d)))
            .map_err(|e| Error::Format(format!("bad dims: {e}")))?,
    );
    let ty = parse_type_in(&file.type_expr, &registry)
        .map_err(|e| Error::Format(format!("bad type expression: {e}")))?;

    let rows = file.matrix.len();
    let cols = file.matrix.first().map_or(0, Vec::len);
    if file.matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("ragged matrix rows".to_string()));
    }
    let matrix = CMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = file.matrix[i][j];
        C64::new(re, im)
    });
    TypedMap::new(ty, registry, matrix)
        .map_err(|e| Error::Format(format!("matrix does not satisfy the shape contract: {e}")))
}

pub fn save_map(map: &TypedMap, path: &Path) -> Result<()> {
    std::fs::write(path, map_to_json(map) + "\n")?;
    Ok(())
}

pub fn load_map(path: &Path) -> Result<TypedMap> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    map_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Type;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ty(s: &str) -> Type {
        s.parse().unwrap()
    }

    fn qubits() -> Arc<SystemRegistry> {
        Arc::new(SystemRegistry::from_pairs([("A", 2), ("B", 2)]).unwrap())
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let reg = qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // awkward decimals exercise the shortest-round-trip formatting
        let m = TypedMap::new(
            ty("A->B"),
            reg,
            CMatrix::from_fn(4, 4, |_, _| {
                C64::new(rng.gen::<f64>() / 3.0, rng.gen::<f64>() * 1e-17 - 0.1)
            }),
        )
        .unwrap();
        let json = map_to_json(&m);
        let back = map_from_json(&json).unwrap();
        assert_eq!(back.ty(), m.ty());
        assert_eq!(back.matrix(), m.matrix());
        // and through a file
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.json");
        save_map(&m, &path).unwrap();
        let loaded = load_map(&path).unwrap();
        assert_eq!(loaded.matrix(), m.matrix());
    }

    #[test]
    fn scalar_maps_serialize_as_one_by_one() {
        let reg = qubits();
        let m = TypedMap::scalar(C64::new(0.5, -0.25), reg);
        let json = map_to_json(&m);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["type"], "I");
        assert_eq!(v["matrix"][0][0][0], 0.5);
        let back = map_from_json(&json).unwrap();
        assert!(back.ty().is_trivial());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(map_from_json("{"), Err(Error::Format(_))));

        let reg = qubits();
        let m = TypedMap::zero(ty("A"), reg).unwrap();
        let good = map_to_json(&m);

        let wrong_version = good.replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(matches!(map_from_json(&wrong_version), Err(Error::Format(_))));

        let wrong_convention = good.replace("rowmajor-v1", "colmajor-v0");
        assert!(matches!(map_from_json(&wrong_convention), Err(Error::Format(_))));

        let wrong_type = good.replace("\"type\": \"A\"", "\"type\": \"A->\"");
        assert!(matches!(map_from_json(&wrong_type), Err(Error::Format(_))));

        let unknown_label = good.replace("\"type\": \"A\"", "\"type\": \"X\"");
        assert!(matches!(map_from_json(&unknown_label), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_shape_violations() {
        let reg = qubits();
        let m = TypedMap::zero(ty("A"), reg).unwrap();
        let good = map_to_json(&m);
        let v: serde_json::Value = serde_json::from_str(&good).unwrap();
        let mut doc = v.clone();
        // drop a row: 1x... no longer matches the 2x2 contract for `A`
        doc["matrix"] = serde_json::json!([[[0.0, 0.0], [0.0, 0.0]]]);
        assert!(matches!(
            map_from_json(&doc.to_string()),
            Err(Error::Format(_))
        ));
    }
}
