//! Incremental construction of derivations from primitive steps, plus a small
//! library of admissible rules (syllogism, monotonicity of the modalities,
//! propositional consequence) expanded into primitive lines.

use std::collections::HashMap;

use crate::formula::{Formula, Substitution};
use crate::proof::axiom::{instantiate_axiom, Axiom, AxiomInstance};
use crate::proof::kernel::{Derivation, Justification, Line, NecOp};
use crate::proof::taut::is_tautology;

/// Builds a derivation line by line; a formula already derived is reused
/// instead of being derived twice.
#[derive(Default)]
pub struct ProofBuilder {
    lines: Vec<Line>,
    index: HashMap<Formula, usize>,
}

fn implication(f: &Formula) -> (Formula, Formula) {
    let (a, b) = f.as_implication().unwrap_or_else(|| panic!("not an implication: {f}"));
    (a.clone(), b)
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.lines[i].formula
    }

    pub fn finish(self) -> Derivation {
        Derivation { lines: self.lines }
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        if let Some(&i) = self.index.get(&formula) {
            return i;
        }
        let i = self.lines.len();
        self.index.insert(formula.clone(), i);
        self.lines.push(Line { formula, just });
        i
    }

    pub fn axiom(&mut self, axiom: Axiom, subst: Substitution) -> usize {
        let inst = AxiomInstance::new(axiom, subst);
        let f = instantiate_axiom(&inst).unwrap_or_else(|e| panic!("bad axiom instance: {e}"));
        self.push(f, Justification::Axiom(inst))
    }

    /// From line `i` (`φ`) and line `j` (`φ → ψ`), derives `ψ`.
    pub fn mp(&mut self, i: usize, j: usize) -> usize {
        let (a, b) = implication(self.formula(j));
        assert_eq!(&a, self.formula(i), "modus ponens premise mismatch");
        self.push(b, Justification::Mp(i, j))
    }

    pub fn nec(&mut self, op: NecOp, i: usize) -> usize {
        let f = op.apply(self.formula(i).clone());
        self.push(f, Justification::Nec(op, i))
    }

    /// Derives `phi` as a substitution instance of a propositional
    /// tautology, treating maximal modal subformulas and every member of
    /// `opaque` as atoms.
    pub fn taut(&mut self, phi: &Formula, opaque: &[Formula]) -> usize {
        let mut leaves: Vec<Formula> = Vec::new();
        let skeleton = abstract_leaves(phi, opaque, &mut leaves);
        let subst: Substitution =
            leaves.into_iter().enumerate().map(|(i, f)| (i as u32 + 1, f)).collect();
        debug_assert_eq!(&skeleton.substitute(&subst), phi);
        assert!(
            is_tautology(&skeleton).unwrap_or(false),
            "not a propositional tautology: {phi}"
        );
        self.axiom(Axiom::Taut(skeleton), subst)
    }

    /// Derives `concl` from the premise lines by one tautology and a chain of
    /// modus ponens steps.
    pub fn prop(&mut self, premises: &[usize], concl: &Formula, opaque: &[Formula]) -> usize {
        let chain = premises
            .iter()
            .rev()
            .fold(concl.clone(), |acc, &p| Formula::implies(self.formula(p).clone(), acc));
        let mut cur = self.taut(&chain, opaque);
        for &p in premises {
            cur = self.mp(p, cur);
        }
        cur
    }

    /// Hypothetical syllogism: from `a → b` and `b → c`, derives `a → c`.
    pub fn hs(&mut self, i: usize, j: usize) -> usize {
        let (a, b) = implication(self.formula(i));
        let (b2, c) = implication(self.formula(j));
        assert_eq!(b, b2, "syllogism middle terms differ");
        let concl = Formula::implies(a.clone(), c.clone());
        self.prop(&[i, j], &concl, &[a, b, c])
    }

    /// From `a → b`, derives `□a → □b`.
    pub fn box_mono(&mut self, i: usize) -> usize {
        let (a, b) = implication(self.formula(i));
        let boxed = self.nec(NecOp::Box, i);
        let k = self.axiom(Axiom::K, Substitution::from([(1, a), (2, b)]));
        self.mp(boxed, k)
    }

    /// From `a → b`, derives `◇a → ◇b`.
    pub fn dia_mono(&mut self, i: usize) -> usize {
        let (a, b) = implication(self.formula(i));
        let contra = Formula::implies(Formula::not(b.clone()), Formula::not(a.clone()));
        let contra = self.prop(&[i], &contra, &[a.clone(), b.clone()]);
        let boxed = self.box_mono(contra);
        self.prop(&[boxed], &Formula::implies(Formula::dia(a), Formula::dia(b)), &[])
    }

    /// From `a → b`, derives `[f]a → [f]b`.
    pub fn hence_mono(&mut self, i: usize) -> usize {
        let (a, b) = implication(self.formula(i));
        let g = self.nec(NecOp::Hence, i);
        let k = self.axiom(Axiom::KHence, Substitution::from([(1, a), (2, b)]));
        self.mp(g, k)
    }

    /// `□(c → e) → (◇c → ◇e)`
    pub fn k_dia(&mut self, c: &Formula, e: &Formula) -> usize {
        let imp = Formula::implies(c.clone(), e.clone());
        let contra = Formula::implies(Formula::not(e.clone()), Formula::not(c.clone()));
        let t = self.taut(&Formula::implies(imp.clone(), contra), &[c.clone(), e.clone()]);
        let boxed = self.box_mono(t);
        let k = self.axiom(
            Axiom::K,
            Substitution::from([(1, Formula::not(e.clone())), (2, Formula::not(c.clone()))]),
        );
        let concl = Formula::implies(
            Formula::boxed(imp),
            Formula::implies(Formula::dia(c.clone()), Formula::dia(e.clone())),
        );
        self.prop(&[boxed, k], &concl, &[])
    }
}

fn abstract_leaves(f: &Formula, opaque: &[Formula], leaves: &mut Vec<Formula>) -> Formula {
    let boolean = matches!(f, Formula::Not(_) | Formula::And(..));
    if !boolean || opaque.contains(f) {
        let pos = leaves.iter().position(|l| l == f).unwrap_or_else(|| {
            leaves.push(f.clone());
            leaves.len() - 1
        });
        return Formula::atom(pos as u32 + 1);
    }
    match f {
        Formula::Not(a) => Formula::not(abstract_leaves(a, opaque, leaves)),
        Formula::And(a, b) => {
            let a = abstract_leaves(a, opaque, leaves);
            Formula::and(a, abstract_leaves(b, opaque, leaves))
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::proof::kernel::{check_derivation, SystemDescriptor};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn accepted(b: ProofBuilder) -> Derivation {
        let d = b.finish();
        let v = check_derivation(&d, &SystemDescriptor::bounded(0, 0));
        assert!(v.is_accept(), "{v}");
        d
    }

    #[test]
    fn templates_produce_checked_lines() {
        let mut b = ProofBuilder::new();
        let ab = b.taut(&f("(p1 & p2) -> p1"), &[]);
        let bx = b.box_mono(ab);
        let dm = b.dia_mono(ab);
        let hm = b.hence_mono(ab);
        assert_eq!(b.formula(bx), &f("[](p1 & p2) -> []p1"));
        assert_eq!(b.formula(dm), &f("<>(p1 & p2) -> <>p1"));
        assert_eq!(b.formula(hm), &f("G(p1 & p2) -> G p1"));
        let kd = b.k_dia(&f("p3"), &f("X p4"));
        assert_eq!(b.formula(kd), &f("[](p3 -> X p4) -> (<>p3 -> <>X p4)"));
        let one = b.taut(&f("<>p1 -> (<>p1 | p2)"), &[]);
        let two = b.taut(&f("(<>p1 | p2) -> ~~(<>p1 | p2)"), &[]);
        let s = b.hs(one, two);
        assert_eq!(b.formula(s), &f("<>p1 -> (<>p1 | p2)"));
        accepted(b);
    }

    #[test]
    fn duplicate_lines_are_shared() {
        let mut b = ProofBuilder::new();
        let x = b.taut(&f("p1 -> p1"), &[]);
        let y = b.taut(&f("p1 -> p1"), &[]);
        assert_eq!(x, y);
        assert_eq!(accepted(b).lines.len(), 1);
    }

    #[test]
    #[should_panic(expected = "not a propositional tautology")]
    fn non_tautology_panics() {
        ProofBuilder::new().taut(&f("<>p1 -> p1"), &[]);
    }
}
