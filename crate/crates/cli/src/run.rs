//! Command execution: load documents, run the requested check, emit a
//! canonical certificate and the contracted exit code (0 = property holds,
//! 1 = property fails with witness, 2 = input or usage error).

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use statcat_core::inference::{
    check_equivalence_with, equivalence_oracle, generated_image_sigma, is_complete, is_sufficient,
};
use statcat_core::kernel::{
    bayes_identity_check, detailed_balance_check, dual_conditional, kernel_from_map,
    regular_conditional,
};
use statcat_core::model::FiniteModel;
use statcat_core::param::{
    analyze_parametrisation, minimal_length, structural_equivalence_with_bound, Category,
};
use statcat_core::rational::format_rational;
use statcat_core::report::Witness;
use statcat_core::topology::{
    canonical_topology, is_kolmogorov_equivalent_with_bound, kolmogorov_quotient,
    DEFAULT_SEARCH_BOUND,
};
use statcat_core::{classify_morphism, induce_morphism};

use crate::certificate::{
    digest, kernel_value, report_value, tool_value, verdict_str, witness_value, WitnessContext,
};
use crate::document::{parse_map, parse_model, parse_sigma, to_canonical_string};
use crate::error::CliError;

#[derive(Debug, Clone)]
pub enum Command {
    Sufficient {
        model: PathBuf,
        map: PathBuf,
        members: Option<Vec<String>>,
    },
    Complete {
        model: PathBuf,
        map: PathBuf,
        target: Option<PathBuf>,
        source_sigma: Option<PathBuf>,
    },
    Equivalent {
        model_a: PathBuf,
        model_b: PathBuf,
        map: PathBuf,
        oracle: bool,
        threads: usize,
    },
    Classify {
        model: PathBuf,
        map: PathBuf,
    },
    Bayes {
        model: PathBuf,
        map: PathBuf,
        member: Option<String>,
    },
    Balance {
        model: PathBuf,
        map: PathBuf,
    },
    Quotient {
        model: PathBuf,
    },
    CanonicalTopology {
        model: PathBuf,
    },
    KqEquivalent {
        model_a: PathBuf,
        model_b: PathBuf,
    },
    Param {
        model: PathBuf,
    },
    Minimal {
        model: PathBuf,
        category: String,
    },
    Structural {
        model_a: PathBuf,
        model_b: PathBuf,
        category: String,
    },
}

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub certificate: String,
}

/// The homeomorphism-search class bound, overridable via the environment.
pub fn search_bound() -> Result<usize, CliError> {
    match std::env::var("STATCAT_SEARCH_BOUND") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "STATCAT_SEARCH_BOUND must be a positive integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEARCH_BOUND),
    }
}

fn parse_category(text: &str) -> Result<Category, CliError> {
    match text.to_ascii_lowercase().as_str() {
        "set" => Ok(Category::Set),
        "fintop" => Ok(Category::FinTop),
        other => Err(CliError::Usage(format!(
            "unsupported category {other:?} (expected \"set\" or \"fintop\")"
        ))),
    }
}

fn input_digest(path: &Path) -> Result<Value, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Value::String(digest(&bytes)))
}

fn envelope(command: &str, inputs: &[(&str, &Path)]) -> Result<Map<String, Value>, CliError> {
    let mut map = Map::new();
    map.insert("command".into(), Value::String(command.into()));
    let mut digests = Map::new();
    for (role, path) in inputs {
        digests.insert((*role).into(), input_digest(path)?);
    }
    map.insert("inputs".into(), Value::Object(digests));
    map.insert("tool".into(), tool_value());
    Ok(map)
}

fn member_names(model: &FiniteModel) -> Vec<String> {
    model.family().iter().map(|m| m.name.clone()).collect()
}

fn finish(mut root: Map<String, Value>, pass: bool) -> Outcome {
    root.insert(
        "verdict".into(),
        Value::String(if pass { "pass" } else { "fail" }.into()),
    );
    Outcome {
        exit_code: if pass { 0 } else { 1 },
        certificate: to_canonical_string(&Value::Object(root)),
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Sufficient {
            model,
            map,
            members,
        } => run_sufficient(model, map, members.as_deref()),
        Command::Complete {
            model,
            map,
            target,
            source_sigma,
        } => run_complete(model, map, target.as_deref(), source_sigma.as_deref()),
        Command::Equivalent {
            model_a,
            model_b,
            map,
            oracle,
            threads,
        } => run_equivalent(model_a, model_b, map, *oracle, *threads),
        Command::Classify { model, map } => run_classify(model, map),
        Command::Bayes { model, map, member } => run_bayes(model, map, member.as_deref()),
        Command::Balance { model, map } => run_balance(model, map),
        Command::Quotient { model } => run_quotient(model),
        Command::CanonicalTopology { model } => run_canonical_topology(model),
        Command::KqEquivalent { model_a, model_b } => run_kq_equivalent(model_a, model_b),
        Command::Param { model } => run_param(model),
        Command::Minimal { model, category } => run_minimal(model, category),
        Command::Structural {
            model_a,
            model_b,
            category,
        } => run_structural(model_a, model_b, category),
    }
}

fn run_sufficient(
    model_path: &Path,
    map_path: &Path,
    members: Option<&[String]>,
) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let map = parse_map(map_path)?;
    let subfamily: Vec<usize> = match members {
        Some(names) => names
            .iter()
            .map(|name| {
                model
                    .member_by_name(name)
                    .map(|(i, _)| i)
                    .ok_or_else(|| CliError::Usage(format!("unknown family member {name:?}")))
            })
            .collect::<Result<_, _>>()?,
        None => (0..model.len()).collect(),
    };
    let report = is_sufficient(&model, &map, &subfamily)?;
    let mut root = envelope("sufficient", &[("model", model_path), ("map", map_path)])?;
    let ctx = WitnessContext {
        x_sigma: Some(model.sigma()),
        y_sigma: Some(map.codomain()),
        density_space: None,
    };
    root.insert("report".into(), report_value(&report, ctx, None));
    root.insert(
        "members".into(),
        Value::Array(
            subfamily
                .iter()
                .map(|&i| Value::String(model.member(i).name.clone()))
                .collect(),
        ),
    );
    Ok(finish(root, report.passed()))
}

fn run_complete(
    model_path: &Path,
    map_path: &Path,
    target_path: Option<&Path>,
    sigma_path: Option<&Path>,
) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let map = parse_map(map_path)?;
    let target = match target_path {
        Some(path) => parse_model(path)?.model,
        None => induce_morphism(&model, &map)?.target().clone(),
    };
    let source_sigma = match sigma_path {
        Some(path) => parse_sigma(path)?,
        None => model.sigma().clone(),
    };
    let report = is_complete(&target, &map, &source_sigma)?;
    let generated = generated_image_sigma(&map, &source_sigma)?;
    let mut inputs: Vec<(&str, &Path)> = vec![("model", model_path), ("map", map_path)];
    if let Some(path) = target_path {
        inputs.push(("target", path));
    }
    if let Some(path) = sigma_path {
        inputs.push(("source_sigma", path));
    }
    let mut root = envelope("complete", &inputs)?;
    let ctx = WitnessContext {
        x_sigma: Some(&source_sigma),
        y_sigma: Some(map.codomain()),
        density_space: Some(target.space()),
    };
    root.insert("report".into(), report_value(&report, ctx, None));
    root.insert(
        "image_sigma".into(),
        Value::Array(
            (0..generated.atom_count())
                .map(|a| Value::String(generated.atom_label(a)))
                .collect(),
        ),
    );
    Ok(finish(root, report.passed()))
}

fn run_equivalent(
    a_path: &Path,
    b_path: &Path,
    map_path: &Path,
    oracle: bool,
    threads: usize,
) -> Result<Outcome, CliError> {
    let a = parse_model(a_path)?.model;
    let b = parse_model(b_path)?.model;
    let map = parse_map(map_path)?;
    let verdict = check_equivalence_with(&a, &b, &map, threads > 1)?;
    let mut root = envelope(
        "equivalent",
        &[("model_a", a_path), ("model_b", b_path), ("map", map_path)],
    )?;
    let ctx = WitnessContext {
        x_sigma: Some(a.sigma()),
        y_sigma: Some(b.sigma()),
        density_space: Some(b.space()),
    };
    root.insert(
        "routes".into(),
        Value::Array(vec![
            report_value(&verdict.route_iso, ctx, None),
            report_value(&verdict.route_detailed_balance, ctx, None),
            report_value(&verdict.route_suff_complete, ctx, None),
        ]),
    );
    root.insert("agree".into(), Value::Bool(verdict.agree));
    root.insert("equivalent".into(), Value::Bool(verdict.equivalent()));
    root.insert(
        "forward_kernel".into(),
        kernel_value(&verdict.forward_kernel),
    );
    if let Some(reverse) = &verdict.reverse_kernel {
        root.insert("reverse_kernel".into(), kernel_value(reverse));
    }
    if oracle {
        let report = equivalence_oracle(&a, &b, 4)?;
        let passing_map = match &report.passing_assignment {
            Some(assignment) => {
                let map: Map<String, Value> = assignment
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| {
                        (
                            a.space().label(x).to_string(),
                            Value::String(b.space().label(y).into()),
                        )
                    })
                    .collect();
                Value::Object(map)
            }
            None => Value::Null,
        };
        root.insert(
            "oracle".into(),
            json!({
                "maps_searched": report.maps_searched,
                "any_pass": report.any_pass,
                "passing_map": passing_map,
            }),
        );
    }
    Ok(finish(root, verdict.equivalent()))
}

fn run_classify(model_path: &Path, map_path: &Path) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let map = parse_map(map_path)?;
    let morphism = induce_morphism(&model, &map)?;
    let classification = classify_morphism(&morphism)?;
    let mut root = envelope("classify", &[("model", model_path), ("map", map_path)])?;
    root.insert("mono".into(), Value::Bool(classification.mono));
    root.insert("epi".into(), Value::Bool(classification.epi));
    root.insert("iso_naive".into(), Value::Bool(classification.iso_naive));
    root.insert(
        "iso_reverse_kernel".into(),
        Value::Bool(classification.iso_reverse_kernel),
    );
    if let Some(kernel) = &classification.reverse_kernel {
        root.insert("reverse_kernel".into(), kernel_value(kernel));
    }
    if let Some(cert) = &classification.infeasibility {
        root.insert(
            "infeasibility".into(),
            json!({
                "farkas_multipliers": cert
                    .multipliers
                    .iter()
                    .map(|v| Value::String(format_rational(v)))
                    .collect::<Vec<_>>(),
            }),
        );
    }
    let ctx = WitnessContext {
        x_sigma: Some(model.sigma()),
        y_sigma: Some(map.codomain()),
        density_space: None,
    };
    let mut witnesses = Map::new();
    if let Some((i, j, atom)) = classification.mono_witness {
        let witness = Witness::MemberCollision {
            left: model.member(i).name.clone(),
            right: model.member(j).name.clone(),
            atom,
        };
        witnesses.insert("mono".into(), witness_value(&witness, ctx));
    }
    if let Some(member) = &classification.epi_witness {
        witnesses.insert(
            "epi".into(),
            witness_value(
                &Witness::UnhitTarget {
                    member: member.clone(),
                },
                ctx,
            ),
        );
    }
    if let Some((member, forward)) = &classification.round_trip_witness {
        let witness = Witness::RoundTrip {
            member: member.clone(),
            forward: *forward,
        };
        witnesses.insert("round_trip".into(), witness_value(&witness, ctx));
    }
    if !witnesses.is_empty() {
        root.insert("witnesses".into(), Value::Object(witnesses));
    }
    Ok(finish(root, classification.iso_reverse_kernel))
}

fn run_bayes(
    model_path: &Path,
    map_path: &Path,
    member: Option<&str>,
) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let map = parse_map(map_path)?;
    if map.domain() != model.sigma() {
        return Err(CliError::Usage(
            "map domain does not match the model".into(),
        ));
    }
    let kernel = kernel_from_map(&map);
    let selected: Vec<(String, statcat_core::RationalMeasure)> = match member {
        Some(name) => {
            let (_, found) = model
                .member_by_name(name)
                .ok_or_else(|| CliError::Usage(format!("unknown family member {name:?}")))?;
            vec![(found.name.clone(), found.measure.clone())]
        }
        None => {
            let mut all: Vec<(String, statcat_core::RationalMeasure)> = model
                .family()
                .iter()
                .map(|m| (m.name.clone(), m.measure.clone()))
                .collect();
            all.push(("(dominating)".into(), model.effective_dominating()));
            all
        }
    };
    let ctx = WitnessContext {
        x_sigma: Some(model.sigma()),
        y_sigma: Some(map.codomain()),
        density_space: None,
    };
    let mut all_pass = true;
    let mut total_checked = 0;
    let mut entries = Vec::new();
    for (name, measure) in &selected {
        let report = bayes_identity_check(&kernel, measure)?;
        all_pass &= report.passed();
        total_checked += report.checked;
        let mut entry = Map::new();
        entry.insert("member".into(), Value::String(name.clone()));
        entry.insert(
            "verdict".into(),
            Value::String(verdict_str(report.verdict).into()),
        );
        entry.insert(
            "checked".into(),
            Value::Number((report.checked as u64).into()),
        );
        if let Some(witness) = &report.witness {
            entry.insert("witness".into(), witness_value(witness, ctx));
        }
        entries.push(Value::Object(entry));
    }
    let mut root = envelope("bayes", &[("model", model_path), ("map", map_path)])?;
    root.insert("members".into(), Value::Array(entries));
    root.insert(
        "checked".into(),
        Value::Number((total_checked as u64).into()),
    );
    Ok(finish(root, all_pass))
}

fn run_balance(model_path: &Path, map_path: &Path) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let map = parse_map(map_path)?;
    if map.domain() != model.sigma() {
        return Err(CliError::Usage(
            "map domain does not match the model".into(),
        ));
    }
    let kernel = kernel_from_map(&map);
    let mu = model.effective_dominating();
    let forward = regular_conditional(&kernel, &mu)?;
    let backward = dual_conditional(&kernel, &mu)?;
    let family: Vec<(String, statcat_core::RationalMeasure)> = model
        .family()
        .iter()
        .map(|m| (m.name.clone(), m.measure.clone()))
        .collect();
    let report = detailed_balance_check(&forward, &backward, &family)?;
    let mut root = envelope("balance", &[("model", model_path), ("map", map_path)])?;
    let ctx = WitnessContext {
        x_sigma: Some(model.sigma()),
        y_sigma: Some(map.codomain()),
        density_space: None,
    };
    root.insert("report".into(), report_value(&report, ctx, None));
    root.insert("backward_kernel".into(), kernel_value(backward.kernel()));
    Ok(finish(root, report.passed()))
}

fn run_quotient(model_path: &Path) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let topology = canonical_topology(&model)?;
    let quotient = kolmogorov_quotient(&topology);
    let names = member_names(&model);
    let mut root = envelope("quotient", &[("model", model_path)])?;
    root.insert(
        "classes".into(),
        Value::Array(
            quotient
                .classes()
                .iter()
                .map(|class| {
                    Value::Array(
                        class
                            .iter()
                            .map(|&i| Value::String(names[i].clone()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    root.insert(
        "quotient_opens".into(),
        Value::Array(
            quotient
                .quotient()
                .opens()
                .into_iter()
                .map(|open| {
                    Value::Array(
                        open.into_iter()
                            .map(|c| Value::Number((c as u64).into()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    root.insert("t0".into(), Value::Bool(quotient.quotient().is_t0()));
    Ok(finish(root, true))
}

fn run_canonical_topology(model_path: &Path) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let topology = canonical_topology(&model)?;
    let names = member_names(&model);
    let mut root = envelope("canonical-topology", &[("model", model_path)])?;
    root.insert(
        "opens".into(),
        Value::Array(
            topology
                .opens()
                .into_iter()
                .map(|open| {
                    Value::Array(
                        open.into_iter()
                            .map(|i| Value::String(names[i].clone()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    root.insert(
        "indistinguishability_classes".into(),
        Value::Array(
            topology
                .indistinguishability_classes()
                .into_iter()
                .map(|class| {
                    Value::Array(
                        class
                            .into_iter()
                            .map(|i| Value::String(names[i].clone()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    Ok(finish(root, true))
}

fn run_kq_equivalent(a_path: &Path, b_path: &Path) -> Result<Outcome, CliError> {
    let a = parse_model(a_path)?.model;
    let b = parse_model(b_path)?.model;
    let bound = search_bound()?;
    let ta = canonical_topology(&a)?;
    let tb = canonical_topology(&b)?;
    let outcome = is_kolmogorov_equivalent_with_bound(&ta, &tb, bound)?;
    let qa = kolmogorov_quotient(&ta);
    let qb = kolmogorov_quotient(&tb);
    let names_a = member_names(&a);
    let names_b = member_names(&b);
    let mut root = envelope("kq-equivalent", &[("model_a", a_path), ("model_b", b_path)])?;
    match outcome {
        Some(bijection) => {
            root.insert(
                "bijection".into(),
                Value::Array(
                    bijection
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| {
                            json!([
                                names_a[qa.classes()[i][0]].clone(),
                                names_b[qb.classes()[j][0]].clone()
                            ])
                        })
                        .collect(),
                ),
            );
            Ok(finish(root, true))
        }
        None => {
            let witness = Witness::NoHomeomorphism {
                left_classes: qa.classes().len(),
                right_classes: qb.classes().len(),
            };
            root.insert(
                "witness".into(),
                witness_value(&witness, WitnessContext::default()),
            );
            Ok(finish(root, false))
        }
    }
}

fn run_param(model_path: &Path) -> Result<Outcome, CliError> {
    let document = parse_model(model_path)?;
    let theta = document.parametrisation.ok_or_else(|| {
        CliError::Usage(format!(
            "{} has no \"parametrisation\" block",
            model_path.display()
        ))
    })?;
    let report = analyze_parametrisation(&theta, &document.model)?;
    let mut root = envelope("param", &[("model", model_path)])?;
    root.insert("identifiable".into(), Value::Bool(report.identifiable));
    root.insert(
        "cardinality".into(),
        Value::Number((report.cardinality as u64).into()),
    );
    root.insert(
        "length".into(),
        Value::Number((report.length as u64).into()),
    );
    root.insert(
        "affine_rank".into(),
        Value::Number((report.affine_rank as u64).into()),
    );
    if let Some((left, right)) = report.collision {
        root.insert(
            "witness".into(),
            witness_value(
                &Witness::ParameterCollision { left, right },
                WitnessContext::default(),
            ),
        );
    }
    Ok(finish(root, report.identifiable))
}

fn run_minimal(model_path: &Path, category: &str) -> Result<Outcome, CliError> {
    let model = parse_model(model_path)?.model;
    let category = parse_category(category)?;
    let (length, theta) = minimal_length(&model, category)?;
    let mut root = envelope("minimal", &[("model", model_path)])?;
    root.insert("length".into(), Value::Number((length as u64).into()));
    root.insert(
        "parametrisation".into(),
        json!({
            "vectors": theta
                .vectors()
                .iter()
                .map(|v| Value::Array(v.iter().map(|r| Value::String(format_rational(r))).collect()))
                .collect::<Vec<_>>(),
            "assignment": theta
                .assignment()
                .iter()
                .map(|&i| Value::String(model.member(i).name.clone()))
                .collect::<Vec<_>>(),
        }),
    );
    Ok(finish(root, true))
}

fn run_structural(a_path: &Path, b_path: &Path, category: &str) -> Result<Outcome, CliError> {
    let a = parse_model(a_path)?.model;
    let b = parse_model(b_path)?.model;
    let category = parse_category(category)?;
    let bound = search_bound()?;
    let report = structural_equivalence_with_bound(&a, &b, category, bound)?;
    let names_a = member_names(&a);
    let names_b = member_names(&b);
    let mut root = envelope("structural", &[("model_a", a_path), ("model_b", b_path)])?;
    root.insert(
        "category".into(),
        Value::String(match category {
            Category::Set => "set".into(),
            Category::FinTop => "fintop".into(),
        }),
    );
    root.insert(
        "report".into(),
        report_value(
            &report,
            WitnessContext::default(),
            Some((&names_a, &names_b)),
        ),
    );
    Ok(finish(root, report.passed()))
}
