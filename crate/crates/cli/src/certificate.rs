//! Rendering of verdicts, witnesses and kernels into canonical certificate
//! JSON, and reloading of emitted kernels for re-verification.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use statcat_core::kernel::MarkovKernel;
use statcat_core::rational::{format_rational, parse_rational};
use statcat_core::report::{CertificatePayload, CheckReport, Verdict, Witness};
use statcat_core::space::{FiniteSpace, SigmaAlgebra};

use crate::error::CliError;

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn tool_value() -> Value {
    json!({ "name": "statcat", "version": env!("CARGO_PKG_VERSION") })
}

pub fn verdict_str(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

/// σ-algebras used to render atom indices as labels in witnesses.
#[derive(Default, Clone, Copy)]
pub struct WitnessContext<'a> {
    pub x_sigma: Option<&'a SigmaAlgebra>,
    pub y_sigma: Option<&'a SigmaAlgebra>,
    pub density_space: Option<&'a FiniteSpace>,
}

fn atom_label(sigma: Option<&SigmaAlgebra>, atom: usize) -> Value {
    match sigma {
        Some(sigma) => Value::String(sigma.atom_label(atom)),
        None => Value::Number((atom as u64).into()),
    }
}

pub fn witness_value(witness: &Witness, ctx: WitnessContext<'_>) -> Value {
    match witness {
        Witness::MemberAtomPair {
            member,
            x_atom,
            y_atom,
        } => json!({
            "kind": "member-atom-pair",
            "member": member,
            "x_atom": atom_label(ctx.x_sigma, *x_atom),
            "y_atom": atom_label(ctx.y_sigma, *y_atom),
        }),
        Witness::AtomPair { x_atom, y_atom } => json!({
            "kind": "atom-pair",
            "x_atom": atom_label(ctx.x_sigma, *x_atom),
            "y_atom": atom_label(ctx.y_sigma, *y_atom),
        }),
        Witness::NullDensity { values } => {
            let rendered: Value = match ctx.density_space {
                Some(space) => {
                    let map: serde_json::Map<String, Value> = space
                        .labels()
                        .iter()
                        .zip(values)
                        .map(|(l, v)| (l.clone(), Value::String(format_rational(v))))
                        .collect();
                    Value::Object(map)
                }
                None => Value::Array(
                    values
                        .iter()
                        .map(|v| Value::String(format_rational(v)))
                        .collect(),
                ),
            };
            json!({ "kind": "null-density", "values": rendered })
        }
        Witness::MemberCollision { left, right, atom } => json!({
            "kind": "member-collision",
            "left": left,
            "right": right,
            "atom": atom_label(ctx.x_sigma, *atom),
        }),
        Witness::UnhitTarget { member } => json!({ "kind": "unhit-target", "member": member }),
        Witness::UnmatchedDistribution { name, in_target } => json!({
            "kind": "unmatched-distribution",
            "name": name,
            "side": if *in_target { "target" } else { "source" },
        }),
        Witness::RoundTrip { member, forward } => json!({
            "kind": "round-trip",
            "member": member,
            "direction": if *forward { "forward" } else { "backward" },
        }),
        Witness::InfeasibleTransport => json!({ "kind": "infeasible-transport" }),
        Witness::ParameterCollision { left, right } => json!({
            "kind": "parameter-collision",
            "left": left,
            "right": right,
        }),
        Witness::ClassCountMismatch { left, right } => json!({
            "kind": "class-count-mismatch",
            "left": left,
            "right": right,
        }),
        Witness::NoHomeomorphism {
            left_classes,
            right_classes,
        } => json!({
            "kind": "no-homeomorphism",
            "left_classes": left_classes,
            "right_classes": right_classes,
        }),
    }
}

/// A kernel as certificate JSON: rational-string rows plus the atom labels
/// that index them.
pub fn kernel_value(kernel: &MarkovKernel) -> Value {
    let rows: Vec<Value> = kernel
        .rows()
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|v| Value::String(format_rational(v)))
                    .collect(),
            )
        })
        .collect();
    let row_atoms: Vec<Value> = (0..kernel.domain().atom_count())
        .map(|a| Value::String(kernel.domain().atom_label(a)))
        .collect();
    let column_atoms: Vec<Value> = (0..kernel.codomain().atom_count())
        .map(|a| Value::String(kernel.codomain().atom_label(a)))
        .collect();
    json!({ "rows": rows, "row_atoms": row_atoms, "column_atoms": column_atoms })
}

/// Rebuilds a kernel from its certificate JSON for re-verification.
pub fn kernel_from_value(
    value: &Value,
    domain: &SigmaAlgebra,
    codomain: &SigmaAlgebra,
) -> Result<MarkovKernel, CliError> {
    let bad = |msg: &str| CliError::Usage(format!("malformed kernel certificate: {msg}"));
    let rows_value = value
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing rows"))?;
    let mut rows = Vec::with_capacity(rows_value.len());
    for row_value in rows_value {
        let entries = row_value
            .as_array()
            .ok_or_else(|| bad("row is not an array"))?;
        let mut row = Vec::with_capacity(entries.len());
        for entry in entries {
            let text = entry.as_str().ok_or_else(|| bad("entry is not a string"))?;
            row.push(parse_rational(text).map_err(CliError::Core)?);
        }
        rows.push(row);
    }
    MarkovKernel::new(domain.clone(), codomain.clone(), rows).map_err(CliError::Core)
}

pub fn payload_value(
    payload: &CertificatePayload,
    member_names: Option<(&[String], &[String])>,
) -> Value {
    match payload {
        CertificatePayload::ReverseKernel(kernel) => {
            json!({ "kind": "reverse-kernel", "kernel": kernel_value(kernel) })
        }
        CertificatePayload::Infeasibility(cert) => json!({
            "kind": "infeasibility",
            "farkas_multipliers": cert
                .multipliers
                .iter()
                .map(|v| Value::String(format_rational(v)))
                .collect::<Vec<_>>(),
        }),
        CertificatePayload::ClassBijection(pairs) => {
            let rendered: Vec<Value> = pairs
                .iter()
                .map(|&(left, right)| match member_names {
                    Some((left_names, right_names)) => {
                        json!([left_names[left].clone(), right_names[right].clone()])
                    }
                    None => json!([left, right]),
                })
                .collect();
            json!({ "kind": "class-bijection", "pairs": rendered })
        }
    }
}

pub fn report_value(
    report: &CheckReport,
    ctx: WitnessContext<'_>,
    member_names: Option<(&[String], &[String])>,
) -> Value {
    let mut map = Map::new();
    map.insert("route".into(), Value::String(report.route.clone()));
    map.insert(
        "verdict".into(),
        Value::String(verdict_str(report.verdict).into()),
    );
    map.insert(
        "checked".into(),
        Value::Number((report.checked as u64).into()),
    );
    if let Some(witness) = &report.witness {
        map.insert("witness".into(), witness_value(witness, ctx));
    }
    if let Some(payload) = &report.certificate {
        map.insert("certificate".into(), payload_value(payload, member_names));
    }
    Value::Object(map)
}
