//! Model-level audit of derivations: every line must be valid on the model.

use rayon::prelude::*;

use crate::error::ModelError;
use crate::model::DynModel;
use crate::proof::kernel::Derivation;
use crate::report::ExperimentReport;

pub fn audit_soundness(d: &Derivation, m: &DynModel) -> Result<ExperimentReport, ModelError> {
    let refuted: Vec<Option<String>> = d
        .lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| {
            Ok(m.refutation(&line.formula)?
                .map(|x| format!("line {i} refuted at {}: {}", m.name(x), line.formula)))
        })
        .collect::<Result<_, ModelError>>()?;
    let failures = refuted.into_iter().flatten().collect();
    let mut report = ExperimentReport::new("soundness-audit").param("lines", d.lines.len()).param("points", m.len());
    report.check_all("every line valid on the model", d.lines.len(), failures);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::gen_d;
    use crate::parser::parse;
    use crate::proof::axiom::{Axiom, AxiomInstance};
    use crate::proof::kernel::{Justification, Line};
    use crate::proof::derive_trouble;

    #[test]
    fn trouble_derivation_valid_below_its_width() {
        let r = audit_soundness(&derive_trouble(1), &gen_d(3, 2).unwrap()).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn refuted_line_reported() {
        let f = parse("[]p1 -> p1").unwrap();
        let d = Derivation { lines: vec![Line { formula: f, just: Justification::Axiom(AxiomInstance::plain(Axiom::T)) }] };
        let m = DynModel::from_json(r#"{"points":["a"],"f":{"a":"a"}}"#).unwrap();
        assert!(audit_soundness(&d, &m).unwrap().pass);
        let bad = Derivation { lines: vec![Line { formula: parse("p1").unwrap(), just: Justification::Mp(0, 0) }] };
        assert!(!audit_soundness(&bad, &m).unwrap().pass);
    }
}
