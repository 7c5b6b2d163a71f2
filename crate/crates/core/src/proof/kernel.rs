//! Derivations and the checker that decides membership in a bounded system.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bisim::Cap;
use crate::formula::Formula;
use crate::proof::axiom::{instantiate_axiom, Axiom, AxiomError, AxiomInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NecOp {
    Box,
    Next,
    Hence,
}

impl NecOp {
    pub fn apply(self, f: Formula) -> Formula {
        match self {
            NecOp::Box => Formula::boxed(f),
            NecOp::Next => Formula::next(f),
            NecOp::Hence => Formula::hence(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Axiom(AxiomInstance),
    /// `Mp(i, j)`: line `i` is `φ`, line `j` is `φ → ψ`.
    Mp(usize, usize),
    Nec(NecOp, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub lines: Vec<Line>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.lines.iter().any(|l| &l.formula == f)
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.lines.iter().position(|l| &l.formula == f)
    }
}

/// The system `DTL^k_n`: continuity instances of arity at most `k` whose
/// substituends have depth at most `n`. `k = 0` forbids continuity; `km`
/// additionally bounds the width of every line by one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDescriptor {
    #[serde(rename = "k")]
    pub width_cap: Cap,
    #[serde(rename = "n")]
    pub depth_cap: Cap,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub km: bool,
}

impl SystemDescriptor {
    pub fn new(width_cap: Cap, depth_cap: Cap) -> Self {
        SystemDescriptor { width_cap, depth_cap, km: false }
    }

    pub fn bounded(k: usize, n: usize) -> Self {
        Self::new(Cap::Bounded(k), Cap::Bounded(n))
    }

    pub fn unbounded() -> Self {
        Self::new(Cap::Unbounded, Cap::Unbounded)
    }
}

impl fmt::Display for SystemDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, n={}{})", self.width_cap, self.depth_cap, if self.km { ", KM" } else { "" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    BadIndex,
    NotImplication,
    MpMismatch,
    FormulaMismatch,
    BadAxiom,
    ContForbidden,
    ContArity,
    ContDepth,
    WidthExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject { line: usize, reason: RejectReason, detail: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("accepted"),
            Verdict::Reject { line, reason, detail } => {
                write!(f, "rejected at line {line} ({reason:?}): {detail}")
            }
        }
    }
}

struct Reject(RejectReason, String);

fn reject<T>(reason: RejectReason, detail: impl Into<String>) -> Result<T, Reject> {
    Err(Reject(reason, detail.into()))
}

fn check_line(lines: &[Line], idx: usize, sys: &SystemDescriptor) -> Result<(), Reject> {
    let line = &lines[idx];
    let earlier = |i: usize| -> Result<&Formula, Reject> {
        if i < idx {
            Ok(&lines[i].formula)
        } else {
            reject(RejectReason::BadIndex, format!("premise {i} is not an earlier line"))
        }
    };
    if sys.km && line.formula.width() > 1 {
        return reject(RejectReason::WidthExceeded, "line has width above 1");
    }
    let expected = match &line.just {
        Justification::Mp(i, j) => {
            let (minor, major) = (earlier(*i)?, earlier(*j)?);
            let Some((ante, cons)) = major.as_implication() else {
                return reject(RejectReason::NotImplication, format!("line {j} is not an implication"));
            };
            if ante != minor {
                return reject(
                    RejectReason::MpMismatch,
                    format!("antecedent of line {j} differs from line {i}"),
                );
            }
            cons
        }
        Justification::Nec(op, i) => op.apply(earlier(*i)?.clone()),
        Justification::Axiom(inst) => {
            if let Axiom::Cont(k) = inst.axiom {
                check_cont(inst, k, sys)?;
            }
            instantiate_axiom(inst).or_else(|e: AxiomError| reject(RejectReason::BadAxiom, e.to_string()))?
        }
    };
    if expected != line.formula {
        return reject(
            RejectReason::FormulaMismatch,
            format!("justification yields {expected}, line states {}", line.formula),
        );
    }
    Ok(())
}

fn check_cont(inst: &AxiomInstance, k: u32, sys: &SystemDescriptor) -> Result<(), Reject> {
    match sys.width_cap {
        Cap::Bounded(0) => return reject(RejectReason::ContForbidden, "system has no continuity axiom"),
        cap if !cap.admits(k as usize) => {
            return reject(RejectReason::ContArity, format!("continuity of arity {k} exceeds width cap {cap}"))
        }
        _ => {}
    }
    for i in 1..=k {
        let depth = inst.subst.get(&i).map_or(0, Formula::depth);
        if !sys.depth_cap.admits(depth) {
            return reject(
                RejectReason::ContDepth,
                format!("substituend for p{i} has depth {depth}, above {}", sys.depth_cap),
            );
        }
    }
    Ok(())
}

/// Accepts iff every line is justified in `sys`; otherwise names the least
/// failing line.
pub fn check_derivation(d: &Derivation, sys: &SystemDescriptor) -> Verdict {
    for idx in 0..d.lines.len() {
        if let Err(Reject(reason, detail)) = check_line(&d.lines, idx, sys) {
            return Verdict::Reject { line: idx, reason, detail };
        }
    }
    Verdict::Accept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Substitution;
    use crate::parser::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn taut(s: &str) -> Line {
        Line { formula: f(s), just: Justification::Axiom(AxiomInstance::plain(Axiom::Taut(f(s)))) }
    }

    #[test]
    fn modus_ponens_and_necessitation() {
        let d = Derivation {
            lines: vec![
                taut("p1 -> p1"),
                taut("(p1 -> p1) -> (p2 | ~p2)"),
                Line { formula: f("p2 | ~p2"), just: Justification::Mp(0, 1) },
                Line { formula: f("[](p2 | ~p2)"), just: Justification::Nec(NecOp::Box, 2) },
                Line { formula: f("G [](p2 | ~p2)"), just: Justification::Nec(NecOp::Hence, 3) },
            ],
        };
        assert_eq!(check_derivation(&d, &SystemDescriptor::bounded(0, 0)), Verdict::Accept);
    }

    #[test]
    fn forward_reference_rejected() {
        let d = Derivation {
            lines: vec![taut("p1 -> p1"), Line { formula: f("p1 -> p1"), just: Justification::Mp(0, 1) }],
        };
        let v = check_derivation(&d, &SystemDescriptor::unbounded());
        assert!(matches!(v, Verdict::Reject { line: 1, reason: RejectReason::BadIndex, .. }));
    }

    #[test]
    fn cont_caps() {
        let sigma = Substitution::from([(1, f("X p1")), (2, f("p2"))]);
        let inst = AxiomInstance::new(Axiom::Cont(2), sigma);
        let formula = instantiate_axiom(&inst).unwrap();
        let d = Derivation { lines: vec![Line { formula, just: Justification::Axiom(inst) }] };
        let verdict = |k, n| check_derivation(&d, &SystemDescriptor::bounded(k, n));
        assert!(verdict(2, 1).is_accept());
        assert!(matches!(verdict(2, 0), Verdict::Reject { reason: RejectReason::ContDepth, .. }));
        assert!(matches!(verdict(1, 5), Verdict::Reject { reason: RejectReason::ContArity, .. }));
        assert!(matches!(verdict(0, 5), Verdict::Reject { reason: RejectReason::ContForbidden, .. }));
    }

    #[test]
    fn stated_formula_must_match() {
        let mut line = taut("p1 -> p1");
        line.formula = f("p2 -> p2");
        let v = check_derivation(&Derivation { lines: vec![line] }, &SystemDescriptor::unbounded());
        assert!(matches!(v, Verdict::Reject { line: 0, reason: RejectReason::FormulaMismatch, .. }));
    }

    #[test]
    fn km_flag_bounds_width() {
        let sigma = Substitution::from([(1, f("<>{p1,p2}"))]);
        let inst = AxiomInstance::new(Axiom::Taut(f("p1 | ~p1")), sigma);
        let formula = instantiate_axiom(&inst).unwrap();
        let d = Derivation { lines: vec![Line { formula, just: Justification::Axiom(inst) }] };
        assert!(check_derivation(&d, &SystemDescriptor::bounded(0, 0)).is_accept());
        let v = check_derivation(&d, &SystemDescriptor { km: true, ..SystemDescriptor::unbounded() });
        assert!(matches!(v, Verdict::Reject { reason: RejectReason::WidthExceeded, .. }));
    }
}
