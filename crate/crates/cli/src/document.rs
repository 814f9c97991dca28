//! JSON documents for models, statistics and σ-algebras.
//!
//! Rationals are strings ("3/16") so files stay exact; canonical
//! serialization sorts object keys and renders lowest-terms rationals, and
//! parsing a canonical document back is byte-identical.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use statcat_core::measure::RationalMeasure;
use statcat_core::model::{FamilyMember, FiniteModel};
use statcat_core::rational::{format_rational, parse_rational, Rational};
use statcat_core::space::{FiniteSpace, SigmaAlgebra};
use statcat_core::{MeasurableMap, Parametrisation};

use crate::error::CliError;

/// A parsed model file: the validated model plus its optional
/// parametrisation block (validated lazily, against the model).
#[derive(Debug, Clone)]
pub struct ModelDocument {
    pub model: FiniteModel,
    pub parametrisation: Option<Parametrisation>,
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn document_error(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Document {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn as_object<'v>(
    path: &Path,
    value: &'v Value,
    context: &str,
) -> Result<&'v Map<String, Value>, CliError> {
    value
        .as_object()
        .ok_or_else(|| document_error(path, format!("{context}: expected an object")))
}

fn as_array<'v>(path: &Path, value: &'v Value, context: &str) -> Result<&'v Vec<Value>, CliError> {
    value
        .as_array()
        .ok_or_else(|| document_error(path, format!("{context}: expected an array")))
}

fn as_string<'v>(path: &Path, value: &'v Value, context: &str) -> Result<&'v str, CliError> {
    value
        .as_str()
        .ok_or_else(|| document_error(path, format!("{context}: expected a string")))
}

fn parse_space(path: &Path, labels: &Value, context: &str) -> Result<FiniteSpace, CliError> {
    let labels = as_array(path, labels, context)?;
    let mut points = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        points.push(as_string(path, label, &format!("{context}[{i}]"))?.to_string());
    }
    FiniteSpace::new(points).map_err(|e| document_error(path, format!("{context}: {e}")))
}

fn parse_partition(
    path: &Path,
    space: &FiniteSpace,
    value: &Value,
    context: &str,
) -> Result<SigmaAlgebra, CliError> {
    let blocks_value = as_array(path, value, context)?;
    let mut blocks = Vec::with_capacity(blocks_value.len());
    for (b, block_value) in blocks_value.iter().enumerate() {
        let labels = as_array(path, block_value, &format!("{context}[{b}]"))?;
        let mut block = Vec::with_capacity(labels.len());
        for label_value in labels {
            let label = as_string(path, label_value, &format!("{context}[{b}]"))?;
            let point = space.index_of(label).ok_or_else(|| {
                document_error(
                    path,
                    format!("{context}[{b}]: unknown point label {label:?}"),
                )
            })?;
            block.push(point);
        }
        blocks.push(block);
    }
    SigmaAlgebra::new(space.clone(), blocks)
        .map_err(|e| document_error(path, format!("{context}: {e}")))
}

fn parse_mass_map(
    path: &Path,
    space: &FiniteSpace,
    value: &Value,
    context: &str,
) -> Result<Vec<Rational>, CliError> {
    let map = as_object(path, value, context)?;
    let mut mass = vec![Rational::from_integer(0.into()); space.len()];
    for (label, entry) in map {
        let point = space.index_of(label).ok_or_else(|| {
            document_error(path, format!("{context}: unknown point label {label:?}"))
        })?;
        let text = as_string(path, entry, &format!("{context}.{label}"))?;
        mass[point] = parse_rational(text)
            .map_err(|e| document_error(path, format!("{context}.{label}: {e}")))?;
    }
    Ok(mass)
}

/// Parses and validates a model document.
pub fn parse_model(path: &Path) -> Result<ModelDocument, CliError> {
    let value = read_json(path)?;
    let root = as_object(path, &value, "model document")?;
    let space_value = root
        .get("space")
        .ok_or_else(|| document_error(path, "missing \"space\""))?;
    let space = parse_space(path, space_value, "space")?;
    let sigma = match root.get("sigma") {
        Some(v) => parse_partition(path, &space, v, "sigma")?,
        None => SigmaAlgebra::power_set(space.clone()),
    };
    let family_value = root
        .get("family")
        .ok_or_else(|| document_error(path, "missing \"family\""))?;
    let family_items = as_array(path, family_value, "family")?;
    let mut family = Vec::with_capacity(family_items.len());
    for (i, item) in family_items.iter().enumerate() {
        let entry = as_object(path, item, &format!("family[{i}]"))?;
        let name = as_string(
            path,
            entry
                .get("name")
                .ok_or_else(|| document_error(path, format!("family[{i}]: missing \"name\"")))?,
            &format!("family[{i}].name"),
        )?
        .to_string();
        let mass_value = entry.get("mass").ok_or_else(|| {
            document_error(path, format!("family[{i}] ({name}): missing \"mass\""))
        })?;
        let mass = parse_mass_map(path, &space, mass_value, &format!("family[{i}].mass"))?;
        let measure = RationalMeasure::probability(space.clone(), mass)
            .map_err(|e| document_error(path, format!("family[{i}] ({name}): {e}")))?;
        family.push(FamilyMember { name, measure });
    }
    let dominating = match root.get("dominating") {
        Some(v) => {
            let mass = parse_mass_map(path, &space, v, "dominating")?;
            Some(
                RationalMeasure::new(space.clone(), mass)
                    .map_err(|e| document_error(path, format!("dominating: {e}")))?,
            )
        }
        None => None,
    };
    let model = FiniteModel::new(sigma, family, dominating)
        .map_err(|e| document_error(path, e.to_string()))?;

    let parametrisation = match root.get("parametrisation") {
        Some(v) => Some(parse_parametrisation(path, v, &model)?),
        None => None,
    };
    Ok(ModelDocument {
        model,
        parametrisation,
    })
}

fn parse_parametrisation(
    path: &Path,
    value: &Value,
    model: &FiniteModel,
) -> Result<Parametrisation, CliError> {
    let block = as_object(path, value, "parametrisation")?;
    let vectors_value = block
        .get("vectors")
        .ok_or_else(|| document_error(path, "parametrisation: missing \"vectors\""))?;
    let mut vectors = Vec::new();
    for (i, vector_value) in as_array(path, vectors_value, "parametrisation.vectors")?
        .iter()
        .enumerate()
    {
        let entries = as_array(path, vector_value, &format!("parametrisation.vectors[{i}]"))?;
        let mut vector = Vec::with_capacity(entries.len());
        for (j, entry) in entries.iter().enumerate() {
            let text = as_string(path, entry, &format!("parametrisation.vectors[{i}][{j}]"))?;
            vector.push(parse_rational(text).map_err(|e| {
                document_error(path, format!("parametrisation.vectors[{i}][{j}]: {e}"))
            })?);
        }
        vectors.push(vector);
    }
    let assignment_value = block
        .get("assignment")
        .ok_or_else(|| document_error(path, "parametrisation: missing \"assignment\""))?;
    let mut assignment = Vec::new();
    for (i, entry) in as_array(path, assignment_value, "parametrisation.assignment")?
        .iter()
        .enumerate()
    {
        let index = entry.as_u64().ok_or_else(|| {
            document_error(
                path,
                format!("parametrisation.assignment[{i}]: expected a family index"),
            )
        })?;
        assignment.push(index as usize);
    }
    Parametrisation::new(vectors, assignment, model)
        .map_err(|e| document_error(path, format!("parametrisation: {e}")))
}

/// Parses a statistic (measurable map) document.
pub fn parse_map(path: &Path) -> Result<MeasurableMap, CliError> {
    let value = read_json(path)?;
    let root = as_object(path, &value, "statistic document")?;
    let endpoint = |key: &str| -> Result<SigmaAlgebra, CliError> {
        let end = root
            .get(key)
            .ok_or_else(|| document_error(path, format!("missing {key:?}")))?;
        let obj = as_object(path, end, key)?;
        let space_value = obj
            .get("space")
            .ok_or_else(|| document_error(path, format!("{key}: missing \"space\"")))?;
        let space = parse_space(path, space_value, &format!("{key}.space"))?;
        Ok(match obj.get("sigma") {
            Some(v) => parse_partition(path, &space, v, &format!("{key}.sigma"))?,
            None => SigmaAlgebra::power_set(space),
        })
    };
    let domain = endpoint("domain")?;
    let codomain = endpoint("codomain")?;
    let table = as_object(
        path,
        root.get("map")
            .ok_or_else(|| document_error(path, "missing \"map\""))?,
        "map",
    )?;
    let mut assignment = vec![usize::MAX; domain.space().len()];
    for (from, to_value) in table {
        let from_idx = domain
            .space()
            .index_of(from)
            .ok_or_else(|| document_error(path, format!("map: unknown domain label {from:?}")))?;
        let to = as_string(path, to_value, &format!("map.{from}"))?;
        let to_idx = codomain.space().index_of(to).ok_or_else(|| {
            document_error(path, format!("map.{from}: unknown codomain label {to:?}"))
        })?;
        assignment[from_idx] = to_idx;
    }
    if let Some(missing) = assignment.iter().position(|&a| a == usize::MAX) {
        return Err(document_error(
            path,
            format!(
                "map: no image for point {:?}",
                domain.space().label(missing)
            ),
        ));
    }
    MeasurableMap::new(domain, codomain, assignment)
        .map_err(|e| document_error(path, e.to_string()))
}

/// Parses a σ-algebra document ({"space": [...], "partition": [[...]]}).
pub fn parse_sigma(path: &Path) -> Result<SigmaAlgebra, CliError> {
    let value = read_json(path)?;
    let root = as_object(path, &value, "σ-algebra document")?;
    let space = parse_space(
        path,
        root.get("space")
            .ok_or_else(|| document_error(path, "missing \"space\""))?,
        "space",
    )?;
    parse_partition(
        path,
        &space,
        root.get("partition")
            .ok_or_else(|| document_error(path, "missing \"partition\""))?,
        "partition",
    )
}

fn mass_map_value(space: &FiniteSpace, masses: &[Rational]) -> Value {
    let map: BTreeMap<String, Value> = space
        .labels()
        .iter()
        .zip(masses)
        .map(|(label, mass)| (label.clone(), Value::String(format_rational(mass))))
        .collect();
    json!(map)
}

fn partition_value(sigma: &SigmaAlgebra) -> Value {
    Value::Array(
        sigma
            .atoms()
            .iter()
            .map(|block| {
                Value::Array(
                    block
                        .iter()
                        .map(|&p| Value::String(sigma.space().label(p).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Canonical JSON for a model document: sorted keys, lowest-terms
/// rationals, canonical atom order, trailing newline.
pub fn model_to_value(doc: &ModelDocument) -> Value {
    let model = &doc.model;
    let mut root = Map::new();
    root.insert(
        "space".into(),
        Value::Array(
            model
                .space()
                .labels()
                .iter()
                .map(|l| Value::String(l.clone()))
                .collect(),
        ),
    );
    root.insert("sigma".into(), partition_value(model.sigma()));
    root.insert(
        "family".into(),
        Value::Array(
            model
                .family()
                .iter()
                .map(|member| {
                    let mut entry = Map::new();
                    entry.insert("name".into(), Value::String(member.name.clone()));
                    entry.insert(
                        "mass".into(),
                        mass_map_value(model.space(), member.measure.masses()),
                    );
                    Value::Object(entry)
                })
                .collect(),
        ),
    );
    if let Some(dom) = model.explicit_dominating() {
        root.insert(
            "dominating".into(),
            mass_map_value(model.space(), dom.masses()),
        );
    }
    if let Some(theta) = &doc.parametrisation {
        let vectors = Value::Array(
            theta
                .vectors()
                .iter()
                .map(|v| {
                    Value::Array(
                        v.iter()
                            .map(|r| Value::String(format_rational(r)))
                            .collect(),
                    )
                })
                .collect(),
        );
        let assignment = Value::Array(
            theta
                .assignment()
                .iter()
                .map(|&i| Value::Number((i as u64).into()))
                .collect(),
        );
        root.insert(
            "parametrisation".into(),
            json!({ "vectors": vectors, "assignment": assignment }),
        );
    }
    Value::Object(root)
}

/// Renders any JSON value canonically: 2-space pretty printing (object keys
/// already sorted by the map representation) plus a trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    const COIN_PAIR: &str = r#"{
  "space": ["00", "01", "10", "11"],
  "family": [
    {"name": "P_1/4", "mass": {"00": "9/16", "01": "3/16", "10": "3/16", "11": "1/16"}},
    {"name": "P_1/2", "mass": {"00": "1/4", "01": "1/4", "10": "1/4", "11": "1/4"}},
    {"name": "P_3/4", "mass": {"00": "1/16", "01": "3/16", "10": "3/16", "11": "9/16"}}
  ]
}"#;

    #[test]
    fn parses_the_coin_pair_document() {
        let file = write_temp(COIN_PAIR);
        let doc = parse_model(file.path()).unwrap();
        assert_eq!(doc.model.space().len(), 4);
        assert_eq!(doc.model.len(), 3);
        assert_eq!(doc.model.member(0).name, "P_1/4");
    }

    #[test]
    fn bad_mass_sum_names_the_family_member() {
        let text = COIN_PAIR.replace("\"11\": \"1/16\"", "\"11\": \"2/16\"");
        let file = write_temp(&text);
        let err = parse_model(file.path()).unwrap_err();
        let message = err.to_string();
        assert!(
            message.contains("P_1/4"),
            "diagnostic must name the entry: {message}"
        );
        assert!(
            message.contains("17/16"),
            "diagnostic must show the bad sum: {message}"
        );
    }

    #[test]
    fn duplicate_point_labels_are_a_parse_error() {
        let text = COIN_PAIR.replace("\"01\", \"10\"", "\"00\", \"10\"");
        let file = write_temp(&text);
        let err = parse_model(file.path()).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn malformed_json_reports_position() {
        let file = write_temp("{\"space\": [\"a\",]}");
        let err = parse_model(file.path()).unwrap_err();
        assert!(matches!(err, CliError::Json { .. }));
        assert!(err.to_string().contains("line"));
    }

    #[test]
    fn canonical_serialization_round_trips_byte_identically() {
        let file = write_temp(COIN_PAIR);
        let doc = parse_model(file.path()).unwrap();
        let canonical = to_canonical_string(&model_to_value(&doc));
        let file2 = write_temp(&canonical);
        let doc2 = parse_model(file2.path()).unwrap();
        let canonical2 = to_canonical_string(&model_to_value(&doc2));
        assert_eq!(canonical, canonical2);
    }

    #[test]
    fn parses_a_map_document() {
        let text = r#"{
  "name": "sum",
  "domain": {"space": ["00", "01", "10", "11"]},
  "codomain": {"space": ["0", "1", "2"]},
  "map": {"00": "0", "01": "1", "10": "1", "11": "2"}
}"#;
        let file = write_temp(text);
        let map = parse_map(file.path()).unwrap();
        assert_eq!(map.assignment(), &[0, 1, 1, 2]);
    }

    #[test]
    fn map_with_missing_point_is_rejected() {
        let text = r#"{
  "domain": {"space": ["a", "b"]},
  "codomain": {"space": ["z"]},
  "map": {"a": "z"}
}"#;
        let file = write_temp(text);
        let err = parse_map(file.path()).unwrap_err();
        assert!(err.to_string().contains("no image for point \"b\""));
    }
}
