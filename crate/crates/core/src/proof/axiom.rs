//! Axiom schemas and their substitution instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, Substitution};
use crate::random::random_formula;
use crate::proof::taut::{is_tautology, TautError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    Taut,
    K,
    T,
    Four,
    FixTangle,
    IndTangle,
    NegNext,
    AndNext,
    FixHence,
    IndHence,
    KHence,
    Cont,
}

impl SchemaId {
    pub const ALL: [SchemaId; 12] = [
        SchemaId::Taut,
        SchemaId::K,
        SchemaId::T,
        SchemaId::Four,
        SchemaId::FixTangle,
        SchemaId::IndTangle,
        SchemaId::NegNext,
        SchemaId::AndNext,
        SchemaId::FixHence,
        SchemaId::IndHence,
        SchemaId::KHence,
        SchemaId::Cont,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemaId::Taut => "TAUT",
            SchemaId::K => "K",
            SchemaId::T => "T",
            SchemaId::Four => "FOUR",
            SchemaId::FixTangle => "FIX_TANGLE",
            SchemaId::IndTangle => "IND_TANGLE",
            SchemaId::NegNext => "NEG_NEXT",
            SchemaId::AndNext => "AND_NEXT",
            SchemaId::FixHence => "FIX_HENCE",
            SchemaId::IndHence => "IND_HENCE",
            SchemaId::KHence => "K_HENCE",
            SchemaId::Cont => "CONT",
        }
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom schema `{s}`"))
    }
}

/// An axiom schema together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// A propositional tautology over the atoms it mentions.
    Taut(Formula),
    K,
    T,
    Four,
    FixTangle(Vec<u32>),
    IndTangle(Vec<u32>, u32),
    NegNext,
    AndNext,
    FixHence,
    IndHence,
    KHence,
    Cont(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("tautology base: {0}")]
    Taut(#[from] TautError),
    #[error("tautology base is not a tautology")]
    NotTautology,
    #[error("atom list must be nonempty and without repeats")]
    MalformedAtoms,
    #[error("continuity arity must be at least 1")]
    ContArity,
}

impl Axiom {
    pub fn id(&self) -> SchemaId {
        match self {
            Axiom::Taut(_) => SchemaId::Taut,
            Axiom::K => SchemaId::K,
            Axiom::T => SchemaId::T,
            Axiom::Four => SchemaId::Four,
            Axiom::FixTangle(_) => SchemaId::FixTangle,
            Axiom::IndTangle(..) => SchemaId::IndTangle,
            Axiom::NegNext => SchemaId::NegNext,
            Axiom::AndNext => SchemaId::AndNext,
            Axiom::FixHence => SchemaId::FixHence,
            Axiom::IndHence => SchemaId::IndHence,
            Axiom::KHence => SchemaId::KHence,
            Axiom::Cont(_) => SchemaId::Cont,
        }
    }

    /// The schema's base formula over `p = p1`, `q = p2` (or the listed atoms).
    pub fn base(&self) -> Result<Formula, AxiomError> {
        let p = Formula::atom(1);
        let q = Formula::atom(2);
        Ok(match self {
            Axiom::Taut(base) => {
                if !is_tautology(base)? {
                    return Err(AxiomError::NotTautology);
                }
                base.clone()
            }
            Axiom::K => Formula::implies(
                Formula::boxed(Formula::implies(p.clone(), q.clone())),
                Formula::implies(Formula::boxed(p), Formula::boxed(q)),
            ),
            Axiom::T => Formula::implies(Formula::boxed(p.clone()), p),
            Axiom::Four => Formula::implies(Formula::boxed(p.clone()), Formula::boxed(Formula::boxed(p))),
            Axiom::FixTangle(atoms) => {
                check_atoms(atoms)?;
                let tangle = atom_tangle(atoms);
                let parts = atoms
                    .iter()
                    .map(|&a| Formula::dia(Formula::and(Formula::atom(a), tangle.clone())));
                Formula::implies(tangle.clone(), Formula::big_and(parts))
            }
            Axiom::IndTangle(atoms, pivot) => {
                check_atoms(atoms)?;
                let pv = Formula::atom(*pivot);
                let parts = atoms.iter().map(|&a| {
                    Formula::implies(pv.clone(), Formula::dia(Formula::and(Formula::atom(a), pv.clone())))
                });
                Formula::implies(
                    Formula::boxed(Formula::big_and(parts)),
                    Formula::implies(pv, atom_tangle(atoms)),
                )
            }
            Axiom::NegNext => Formula::iff(
                Formula::not(Formula::next(p.clone())),
                Formula::next(Formula::not(p)),
            ),
            Axiom::AndNext => Formula::iff(
                Formula::next(Formula::and(p.clone(), q.clone())),
                Formula::and(Formula::next(p), Formula::next(q)),
            ),
            Axiom::FixHence => Formula::implies(
                Formula::hence(p.clone()),
                Formula::and(p.clone(), Formula::next(Formula::hence(p))),
            ),
            Axiom::IndHence => Formula::implies(
                Formula::hence(Formula::implies(p.clone(), Formula::next(p.clone()))),
                Formula::implies(p.clone(), Formula::hence(p)),
            ),
            Axiom::KHence => Formula::implies(
                Formula::hence(Formula::implies(p.clone(), q.clone())),
                Formula::implies(Formula::hence(p), Formula::hence(q)),
            ),
            Axiom::Cont(k) => {
                if *k < 1 {
                    return Err(AxiomError::ContArity);
                }
                crate::schema::cont(*k)
            }
        })
    }
}

fn check_atoms(atoms: &[u32]) -> Result<(), AxiomError> {
    let mut sorted = atoms.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if atoms.is_empty() || sorted.len() != atoms.len() || atoms.contains(&0) {
        return Err(AxiomError::MalformedAtoms);
    }
    Ok(())
}

fn atom_tangle(atoms: &[u32]) -> Formula {
    Formula::tangle(atoms.iter().map(|&a| Formula::atom(a))).expect("nonempty atom list")
}

/// A schema instance: the base formula under a simultaneous substitution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxiomInstance {
    pub axiom: Axiom,
    pub subst: Substitution,
}

impl AxiomInstance {
    pub fn new(axiom: Axiom, subst: Substitution) -> Self {
        AxiomInstance { axiom, subst }
    }

    pub fn plain(axiom: Axiom) -> Self {
        AxiomInstance { axiom, subst: Substitution::new() }
    }
}

pub fn instantiate_axiom(inst: &AxiomInstance) -> Result<Formula, AxiomError> {
    Ok(inst.axiom.base()?.substitute(&inst.subst))
}

/// Tautology skeletons used when sampling `TAUT` instances.
const TAUT_SKELETONS: [&str; 6] = [
    "p1 -> (p2 -> p1)",
    "(p1 -> (p2 -> p3)) -> ((p1 -> p2) -> (p1 -> p3))",
    "(~p1 -> ~p2) -> (p2 -> p1)",
    "(p1 & p2) -> (p2 & p1)",
    "p1 | ~p1",
    "((p1 -> p2) -> p1) -> p1",
];

/// A random instance of `schema` whose substituends are random formulas
/// over `p1..p_atoms` with the given depth and width bounds. Continuity
/// instances have arity `cont_arity`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    schema: SchemaId,
    atoms: u32,
    depth: usize,
    width: usize,
    cont_arity: u32,
) -> AxiomInstance {
    let axiom = match schema {
        SchemaId::Taut => {
            let text = TAUT_SKELETONS[rng.gen_range(0..TAUT_SKELETONS.len())];
            Axiom::Taut(crate::parser::parse(text).expect("skeleton parses"))
        }
        SchemaId::K => Axiom::K,
        SchemaId::T => Axiom::T,
        SchemaId::Four => Axiom::Four,
        SchemaId::FixTangle => Axiom::FixTangle(random_atoms(rng, 4)),
        SchemaId::IndTangle => Axiom::IndTangle(random_atoms(rng, 4), 5),
        SchemaId::NegNext => Axiom::NegNext,
        SchemaId::AndNext => Axiom::AndNext,
        SchemaId::FixHence => Axiom::FixHence,
        SchemaId::IndHence => Axiom::IndHence,
        SchemaId::KHence => Axiom::KHence,
        SchemaId::Cont => Axiom::Cont(cont_arity),
    };
    let base = axiom.base().expect("well-formed schema");
    let subst = base
        .atoms()
        .into_iter()
        .map(|i| (i, random_formula(rng, atoms, depth, width, true)))
        .collect();
    AxiomInstance::new(axiom, subst)
}

fn random_atoms<R: Rng>(rng: &mut R, max: u32) -> Vec<u32> {
    let n = rng.gen_range(1..=max);
    let mut atoms: Vec<u32> = (1..=max).collect();
    atoms.shuffle(rng);
    atoms.truncate(n as usize);
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn k_instance() {
        let sigma = Substitution::from([(1, f("p1")), (2, f("p2"))]);
        let got = instantiate_axiom(&AxiomInstance::new(Axiom::K, sigma)).unwrap();
        assert_eq!(got, f("[](p1 -> p2) -> ([]p1 -> []p2)"));
    }

    #[test]
    fn fix_tangle_display() {
        let got = instantiate_axiom(&AxiomInstance::plain(Axiom::FixTangle(vec![1, 2]))).unwrap();
        assert_eq!(got, f("<>{p1,p2} -> (<>(p1 & <>{p1,p2}) & <>(p2 & <>{p1,p2}))"));
    }

    #[test]
    fn ind_tangle_display() {
        let got = instantiate_axiom(&AxiomInstance::plain(Axiom::IndTangle(vec![1, 2], 3))).unwrap();
        assert_eq!(got, f("[]((p3 -> <>(p1 & p3)) & (p3 -> <>(p2 & p3))) -> (p3 -> <>{p1,p2})"));
    }

    #[test]
    fn cont_collapses_under_substitution() {
        let sigma = Substitution::from([(2, f("p1"))]);
        let got = instantiate_axiom(&AxiomInstance::new(Axiom::Cont(2), sigma)).unwrap();
        assert_eq!(got, f("<>X p1 -> X <>p1"));
        assert_eq!(got.width(), 1);
    }

    #[test]
    fn temporal_displays() {
        let base = |a: Axiom| instantiate_axiom(&AxiomInstance::plain(a)).unwrap();
        assert_eq!(base(Axiom::FixHence), f("G p1 -> (p1 & X G p1)"));
        assert_eq!(base(Axiom::IndHence), f("G(p1 -> X p1) -> (p1 -> G p1)"));
        assert_eq!(base(Axiom::T), f("[]p1 -> p1"));
        assert_eq!(base(Axiom::Four), f("[]p1 -> [][]p1"));
    }

    #[test]
    fn random_instances_are_well_formed() {
        let mut rng = crate::random::rng_from_seed(1);
        for id in SchemaId::ALL {
            for _ in 0..5 {
                let inst = random_instance(&mut rng, id, 3, 2, 2, 2);
                assert_eq!(inst.axiom.id(), id);
                assert!(instantiate_axiom(&inst).is_ok());
            }
        }
    }

    #[test]
    fn errors() {
        let bad = |a: Axiom| instantiate_axiom(&AxiomInstance::plain(a)).unwrap_err();
        assert_eq!(bad(Axiom::Taut(f("p1 -> p2"))), AxiomError::NotTautology);
        assert_eq!(bad(Axiom::Taut(f("<>p1 -> <>p1"))), AxiomError::Taut(TautError::NotPropositional));
        assert_eq!(bad(Axiom::FixTangle(vec![])), AxiomError::MalformedAtoms);
        assert_eq!(bad(Axiom::IndTangle(vec![1, 1], 2)), AxiomError::MalformedAtoms);
        assert_eq!(bad(Axiom::Cont(0)), AxiomError::ContArity);
        assert_eq!("fix_tangle".parse::<SchemaId>(), Ok(SchemaId::FixTangle));
    }
}
