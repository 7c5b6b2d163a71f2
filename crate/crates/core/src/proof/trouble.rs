//! A primitive-step derivation of `Trouble^k`, using continuity only at
//! arity `k` with substituends of depth 2.
//!
//! Writing `S_i = start(k,i)`, `B = bundle(k)`, `T = tangle(k)` and
//! `D = ◇p_k`, the derivation passes through the milestones
//!
//! 1. `B → T` (necessitation and tangle induction),
//! 2. `T → D` (tangle fixpoint),
//! 3. `T → ◇{X S_1, .., X S_k}` (the cycle moves each `S_i` to `X S_{i+1}`),
//! 4. `T → X T` (continuity of arity `k`),
//! 5. `T → [f]T` (necessitation and henceforth induction),
//! 6. `B → [f]D`, which is `Trouble^k`.

use crate::formula::{Formula, Substitution};
use crate::proof::axiom::Axiom;
use crate::proof::builder::ProofBuilder;
use crate::proof::kernel::{Derivation, NecOp};
use crate::schema::{self, succ};

fn p(i: u32) -> Formula {
    Formula::atom(i)
}

/// The six milestone formulas, in the order they appear in the derivation.
pub fn trouble_milestones(k: u32) -> [Formula; 6] {
    let (b, t, d) = (schema::bundle(k), schema::tangle(k), Formula::dia(p(k)));
    let next_starts = Formula::tangle((1..=k).map(|i| Formula::next(schema::start(k, i)))).expect("k >= 1");
    [
        Formula::implies(b, t.clone()),
        Formula::implies(t.clone(), d),
        Formula::implies(t.clone(), next_starts),
        Formula::implies(t.clone(), Formula::next(t.clone())),
        Formula::implies(t.clone(), Formula::hence(t)),
        schema::trouble(k),
    ]
}

pub fn derive_trouble(k: u32) -> Derivation {
    assert!(k >= 1, "Trouble is defined for k >= 1");
    let mut pb = ProofBuilder::new();
    let s: Vec<Formula> = (1..=k).map(|i| schema::start(k, i)).collect();
    let si = |i: u32| s[i as usize - 1].clone();
    let bundle = schema::bundle(k);
    let phi = Formula::big_and(s.iter().map(|x| Formula::dia(x.clone())));
    let tangle = schema::tangle(k);
    let d = Formula::dia(p(k));
    let cycle = schema::cycle(k);
    let hence_cycle = Formula::hence(cycle.clone());
    let starts: Substitution = (1..=k).map(|i| (i, si(i))).collect();
    let atoms: Vec<u32> = (1..=k).collect();

    // 1. Bundle -> Tangle
    let four = pb.axiom(Axiom::Four, Substitution::from([(1, phi.clone())]));
    let refl = pb.axiom(Axiom::T, Substitution::from([(1, phi.clone())]));
    let mut steps = Vec::new();
    for i in 1..=k {
        let with_b = Formula::and(si(i), bundle.clone());
        let t = pb.taut(&Formula::implies(bundle.clone(), Formula::implies(si(i), with_b.clone())), &[]);
        let boxed = pb.box_mono(t);
        let kd = pb.k_dia(&si(i), &with_b);
        let goal = Formula::implies(bundle.clone(), Formula::dia(with_b));
        steps.push(pb.prop(&[four, boxed, kd, refl], &goal, &[]));
    }
    let conj = Formula::big_and(steps.iter().map(|&l| pb.formula(l).clone()));
    let conj = pb.prop(&steps, &conj, &[]);
    let boxed = pb.nec(NecOp::Box, conj);
    let mut sigma = starts.clone();
    sigma.insert(k + 1, bundle.clone());
    let ind = pb.axiom(Axiom::IndTangle(atoms.clone(), k + 1), sigma);
    let m1 = pb.mp(boxed, ind);

    // 2. Tangle -> <>p_k
    let fix = pb.axiom(Axiom::FixTangle(atoms.clone()), starts.clone());
    let to_witness = |pb: &mut ProofBuilder, i: u32| {
        let goal = Formula::implies(tangle.clone(), Formula::dia(Formula::and(si(i), tangle.clone())));
        pb.prop(&[fix], &goal, &[])
    };
    let wk = to_witness(&mut pb, k);
    let drop = pb.taut(&Formula::implies(Formula::and(si(k), tangle.clone()), p(k)), &[]);
    let drop = pb.dia_mono(drop);
    let m2 = pb.hs(wk, drop);

    // 3. Tangle -> <>{X S_1, .., X S_k}
    let fix_hence = pb.axiom(Axiom::FixHence, Substitution::from([(1, cycle.clone())]));
    let mut moved = Vec::new();
    for i in 1..=k {
        let j = succ(i, k);
        let step = Formula::implies(
            cycle.clone(),
            Formula::implies(Formula::and(d.clone(), p(i)), Formula::next(p(j))),
        );
        let step = pb.taut(&step, &[]);
        let and_next =
            pb.axiom(Axiom::AndNext, Substitution::from([(1, p(j)), (2, hence_cycle.clone())]));
        let advance = Formula::implies(
            Formula::and(si(i), tangle.clone()),
            Formula::and(Formula::next(si(j)), tangle.clone()),
        );
        let advance = pb.prop(&[fix_hence, step, m2, and_next], &advance, std::slice::from_ref(&cycle));
        let advance = pb.dia_mono(advance);
        let wi = to_witness(&mut pb, i);
        moved.push((j, pb.hs(wi, advance)));
    }
    moved.sort_by_key(|&(j, _)| j);
    let moved: Vec<usize> = moved.into_iter().map(|(_, l)| l).collect();
    let conj = Formula::big_and(moved.iter().map(|&l| pb.formula(l).clone()));
    let conj = pb.prop(&moved, &conj, &[]);
    let boxed = pb.nec(NecOp::Box, conj);
    let mut sigma: Substitution = (1..=k).map(|i| (i, Formula::next(si(i)))).collect();
    sigma.insert(k + 1, tangle.clone());
    let ind = pb.axiom(Axiom::IndTangle(atoms, k + 1), sigma);
    let m3 = pb.mp(boxed, ind);

    // 4. Tangle -> X Tangle
    let cont = pb.axiom(Axiom::Cont(k), starts);
    let m4 = pb.hs(m3, cont);

    // 5. Tangle -> [f]Tangle
    let g = pb.nec(NecOp::Hence, m4);
    let ind = pb.axiom(Axiom::IndHence, Substitution::from([(1, tangle.clone())]));
    let m5 = pb.mp(g, ind);

    // 6. Bundle -> [f]<>p_k
    let mono = pb.hence_mono(m2);
    let t_to_gd = pb.hs(m5, mono);
    let m6 = pb.hs(m1, t_to_gd);

    let d = pb.finish();
    debug_assert_eq!(d.lines.len() - 1, m6);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::Cap;
    use crate::parser::parse;
    use crate::proof::kernel::{check_derivation, Justification, RejectReason, SystemDescriptor, Verdict};

    #[test]
    fn accepted_with_milestones_in_order() {
        for k in 1..=3 {
            let d = derive_trouble(k);
            let v = check_derivation(&d, &SystemDescriptor::bounded(k as usize, 2));
            assert!(v.is_accept(), "k={k}: {v}");
            assert_eq!(d.conclusion(), Some(&schema::trouble(k)));
            let pos: Vec<usize> =
                trouble_milestones(k).iter().map(|m| d.position(m).expect("milestone present")).collect();
            assert!(pos.windows(2).all(|w| w[0] < w[1]), "k={k}: {pos:?}");
        }
    }

    #[test]
    fn first_instance_shape() {
        let d = derive_trouble(1);
        assert_eq!(d.conclusion(), Some(&parse("[]<>(p1 & G(<>p1 -> (p1 -> X p1))) -> G <>p1").unwrap()));
        let d2 = derive_trouble(2);
        assert!(d2.contains(&Formula::implies(schema::tangle(2), parse("<>p2").unwrap())));
    }

    #[test]
    fn continuity_substituends_have_depth_two() {
        let d = derive_trouble(3);
        let conts: Vec<_> = d
            .lines
            .iter()
            .filter_map(|l| match &l.just {
                Justification::Axiom(inst) if matches!(inst.axiom, Axiom::Cont(_)) => Some(inst),
                _ => None,
            })
            .collect();
        assert_eq!(conts.len(), 1);
        assert!(conts[0].subst.values().all(|f| f.depth() == 2));
    }

    #[test]
    fn rejected_below_its_width() {
        let d = derive_trouble(2);
        let cont_line = d
            .lines
            .iter()
            .position(|l| matches!(&l.just, Justification::Axiom(i) if matches!(i.axiom, Axiom::Cont(_))))
            .unwrap();
        let v = check_derivation(&d, &SystemDescriptor::new(Cap::Bounded(1), Cap::Unbounded));
        assert_eq!(
            v,
            Verdict::Reject {
                line: cont_line,
                reason: RejectReason::ContArity,
                detail: "continuity of arity 2 exceeds width cap 1".into()
            }
        );
        let v = check_derivation(&d, &SystemDescriptor::bounded(2, 1));
        assert!(matches!(v, Verdict::Reject { reason: RejectReason::ContDepth, .. }));
    }
}
