//! JSON exchange format for derivations.
//!
//! ```json
//! {"system": {"k": 2, "n": 2},
//!  "lines": [{"formula": "...", "just": {"kind": "axiom", "schema": "CONT",
//!                                        "params": {"k": 2}, "subst": {"p1": "..."}}},
//!            {"formula": "...", "just": {"kind": "mp", "from": [0, 1]}},
//!            {"formula": "...", "just": {"kind": "nec", "op": "box", "from": 2}}]}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::FormulaError;
use crate::formula::Substitution;
use crate::model::parse_atom_name;
use crate::parser::parse;
use crate::proof::axiom::{Axiom, AxiomInstance, SchemaId};
use crate::proof::kernel::{Derivation, Justification, Line, NecOp, SystemDescriptor};

#[derive(Debug, thiserror::Error)]
pub enum DerivationError {
    #[error("derivation document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {source}")]
    Formula { line: usize, source: FormulaError },
    #[error("line {line}: {msg}")]
    Params { line: usize, msg: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    system: Option<SystemDescriptor>,
    lines: Vec<LineDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineDoc {
    formula: String,
    just: JustDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum JustDoc {
    Axiom {
        schema: String,
        #[serde(default)]
        params: Value,
        #[serde(default)]
        subst: BTreeMap<String, String>,
    },
    Mp {
        from: [usize; 2],
    },
    Nec {
        op: NecOp,
        from: usize,
    },
}

fn axiom_params(a: &Axiom) -> Value {
    match a {
        Axiom::Taut(base) => json!({ "base": base.to_string() }),
        Axiom::FixTangle(atoms) => json!({ "P": atoms }),
        Axiom::IndTangle(atoms, p) => json!({ "P": atoms, "p": p }),
        Axiom::Cont(k) => json!({ "k": k }),
        _ => json!({}),
    }
}

pub fn derivation_to_json(d: &Derivation, system: Option<&SystemDescriptor>) -> String {
    let lines = d
        .lines
        .iter()
        .map(|l| LineDoc {
            formula: l.formula.to_string(),
            just: match &l.just {
                Justification::Axiom(inst) => JustDoc::Axiom {
                    schema: inst.axiom.id().to_string(),
                    params: axiom_params(&inst.axiom),
                    subst: inst.subst.iter().map(|(i, f)| (format!("p{i}"), f.to_string())).collect(),
                },
                Justification::Mp(i, j) => JustDoc::Mp { from: [*i, *j] },
                Justification::Nec(op, i) => JustDoc::Nec { op: *op, from: *i },
            },
        })
        .collect();
    let doc = Document { system: system.copied(), lines };
    serde_json::to_string_pretty(&doc).expect("derivation serializes")
}

fn atom_list(params: &Value, key: &str, line: usize) -> Result<Vec<u32>, DerivationError> {
    params
        .get(key)
        .and_then(Value::as_array)
        .and_then(|xs| xs.iter().map(|x| x.as_u64().map(|v| v as u32)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| DerivationError::Params { line, msg: format!("expected integer list `{key}`") })
}

fn number(params: &Value, key: &str, line: usize) -> Result<u32, DerivationError> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .map(|v| v as u32)
        .ok_or_else(|| DerivationError::Params { line, msg: format!("expected integer `{key}`") })
}

fn parse_axiom(schema: SchemaId, params: &Value, line: usize) -> Result<Axiom, DerivationError> {
    Ok(match schema {
        SchemaId::Taut => {
            let text = params.get("base").and_then(Value::as_str).ok_or_else(|| DerivationError::Params {
                line,
                msg: "TAUT needs a `base` formula".into(),
            })?;
            Axiom::Taut(parse(text).map_err(|source| DerivationError::Formula { line, source })?)
        }
        SchemaId::K => Axiom::K,
        SchemaId::T => Axiom::T,
        SchemaId::Four => Axiom::Four,
        SchemaId::FixTangle => Axiom::FixTangle(atom_list(params, "P", line)?),
        SchemaId::IndTangle => Axiom::IndTangle(atom_list(params, "P", line)?, number(params, "p", line)?),
        SchemaId::NegNext => Axiom::NegNext,
        SchemaId::AndNext => Axiom::AndNext,
        SchemaId::FixHence => Axiom::FixHence,
        SchemaId::IndHence => Axiom::IndHence,
        SchemaId::KHence => Axiom::KHence,
        SchemaId::Cont => Axiom::Cont(number(params, "k", line)?),
    })
}

pub fn derivation_from_json(text: &str) -> Result<(Derivation, Option<SystemDescriptor>), DerivationError> {
    let doc: Document = serde_json::from_str(text)?;
    let mut lines = Vec::with_capacity(doc.lines.len());
    for (idx, l) in doc.lines.into_iter().enumerate() {
        let formula = parse(&l.formula).map_err(|source| DerivationError::Formula { line: idx, source })?;
        let just = match l.just {
            JustDoc::Mp { from: [i, j] } => Justification::Mp(i, j),
            JustDoc::Nec { op, from } => Justification::Nec(op, from),
            JustDoc::Axiom { schema, params, subst } => {
                let id: SchemaId =
                    schema.parse().map_err(|msg| DerivationError::Params { line: idx, msg })?;
                let axiom = parse_axiom(id, &params, idx)?;
                let mut sigma = Substitution::new();
                for (atom, f) in subst {
                    let i = parse_atom_name(&atom).map_err(|_| DerivationError::Params {
                        line: idx,
                        msg: format!("bad substitution key `{atom}`"),
                    })?;
                    let f = parse(&f).map_err(|source| DerivationError::Formula { line: idx, source })?;
                    sigma.insert(i, f);
                }
                Justification::Axiom(AxiomInstance::new(axiom, sigma))
            }
        };
        lines.push(Line { formula, just });
    }
    Ok((Derivation { lines }, doc.system))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::instantiate_axiom;

    #[test]
    fn round_trip() {
        let sigma = Substitution::from([(1, parse("p1 & G p2").unwrap())]);
        let inst = AxiomInstance::new(Axiom::Cont(2), sigma);
        let a = instantiate_axiom(&inst).unwrap();
        let fix = AxiomInstance::plain(Axiom::IndTangle(vec![1, 2], 3));
        let b = instantiate_axiom(&fix).unwrap();
        let d = Derivation {
            lines: vec![
                Line { formula: a.clone(), just: Justification::Axiom(inst) },
                Line { formula: b, just: Justification::Axiom(fix) },
                Line { formula: crate::Formula::next(a), just: Justification::Nec(NecOp::Next, 0) },
            ],
        };
        let sys = SystemDescriptor::bounded(2, 1);
        let text = derivation_to_json(&d, Some(&sys));
        let (back, back_sys) = derivation_from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back_sys, Some(sys));
    }

    #[test]
    fn bad_documents() {
        let bad = r#"{"lines":[{"formula":"p1 ->","just":{"kind":"mp","from":[0,0]}}]}"#;
        assert!(matches!(derivation_from_json(bad), Err(DerivationError::Formula { line: 0, .. })));
        let bad = r#"{"lines":[{"formula":"p1","just":{"kind":"axiom","schema":"NOPE"}}]}"#;
        assert!(matches!(derivation_from_json(bad), Err(DerivationError::Params { line: 0, .. })));
        let unbounded = r#"{"system":{"k":"unbounded","n":3},"lines":[]}"#;
        let (_, sys) = derivation_from_json(unbounded).unwrap();
        assert_eq!(sys, Some(SystemDescriptor::new(crate::bisim::Cap::Unbounded, crate::bisim::Cap::Bounded(3))));
    }
}
