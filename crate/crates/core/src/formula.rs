//! Abstract syntax of the polyadic language: atoms, Booleans, next, henceforth
//! and the tangled diamond `<>{..}` acting on finite sets of formulas.
//!
//! Derived connectives are never stored. Negation is built through
//! [`Formula::not`], which collapses double negations, so structural equality
//! is equality up to `~~φ = φ` and up to reordering of tangle arguments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::FormulaError;

/// A formula of the polyadic language.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `p_i` with `i >= 1`.
    Atom(u32),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `X φ`, the preimage under the point map.
    Next(Box<Formula>),
    /// `G φ`, true at `x` when `φ` holds along the whole orbit of `x`.
    Hence(Box<Formula>),
    /// Tangled diamond over a nonempty, sorted, duplicate-free argument list.
    Tangle(Vec<Formula>),
}

/// Substitution of formulas for atoms.
pub type Substitution = BTreeMap<u32, Formula>;

impl Formula {
    pub fn atom(i: u32) -> Formula {
        assert!(i >= 1, "atom indices start at 1");
        Formula::Atom(i)
    }

    /// Negation with double-negation collapse.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `a | b` as `~(~a & ~b)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `a -> b` as `~(a & ~b)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    /// `a <-> b` as `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn hence(f: Formula) -> Formula {
        Formula::Hence(Box::new(f))
    }

    /// `F φ` as `~G~φ`.
    pub fn eventually(f: Formula) -> Formula {
        Formula::not(Formula::hence(Formula::not(f)))
    }

    /// Tangled diamond; the arguments are sorted and deduplicated.
    pub fn tangle<I: IntoIterator<Item = Formula>>(args: I) -> Result<Formula, FormulaError> {
        let set: BTreeSet<Formula> = args.into_iter().collect();
        if set.is_empty() {
            return Err(FormulaError::EmptyTangle);
        }
        Ok(Formula::Tangle(set.into_iter().collect()))
    }

    /// Unary diamond, the tangle of a singleton.
    pub fn dia(f: Formula) -> Formula {
        Formula::Tangle(vec![f])
    }

    /// `[]φ` as `~<>{~φ}`.
    pub fn boxed(f: Formula) -> Formula {
        Formula::not(Formula::dia(Formula::not(f)))
    }

    /// Left-nested conjunction `((a1 & a2) & a3) ...`. Panics on an empty list.
    pub fn big_and<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .expect("conjunction of an empty list")
    }

    /// Modal nesting depth. Next, henceforth and tangle each count one.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(a) => a.depth(),
            Formula::And(a, b) => a.depth().max(b.depth()),
            Formula::Next(a) | Formula::Hence(a) => 1 + a.depth(),
            Formula::Tangle(args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    /// Largest tangle argument count occurring in the formula, 0 if tangle-free.
    pub fn width(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Next(a) | Formula::Hence(a) => a.width(),
            Formula::And(a, b) => a.width().max(b.width()),
            Formula::Tangle(args) => args
                .iter()
                .map(Formula::width)
                .max()
                .unwrap_or(0)
                .max(args.len()),
        }
    }

    /// True when no modal operator occurs.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) => a.is_propositional() && b.is_propositional(),
            _ => false,
        }
    }

    /// True when `X` or `G` occurs.
    pub fn is_temporal(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Not(a) => a.is_temporal(),
            Formula::And(a, b) => a.is_temporal() || b.is_temporal(),
            Formula::Next(_) | Formula::Hence(_) => true,
            Formula::Tangle(args) => args.iter().any(Formula::is_temporal),
        }
    }

    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Atom(i) => {
                out.insert(*i);
            }
            Formula::Not(a) | Formula::Next(a) | Formula::Hence(a) => a.collect_atoms(out),
            Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Tangle(args) => args.iter().for_each(|a| a.collect_atoms(out)),
        }
    }

    /// Simultaneous substitution. Atoms outside the map are left alone and
    /// tangle argument sets are re-canonicalized.
    pub fn substitute(&self, sigma: &Substitution) -> Formula {
        match self {
            Formula::Atom(i) => sigma.get(i).cloned().unwrap_or(Formula::Atom(*i)),
            Formula::Not(a) => Formula::not(a.substitute(sigma)),
            Formula::And(a, b) => Formula::and(a.substitute(sigma), b.substitute(sigma)),
            Formula::Next(a) => Formula::next(a.substitute(sigma)),
            Formula::Hence(a) => Formula::hence(a.substitute(sigma)),
            Formula::Tangle(args) => Formula::tangle(args.iter().map(|a| a.substitute(sigma)))
                .expect("substitution keeps tangles nonempty"),
        }
    }

    /// Number of nodes, used to keep generated inputs bounded.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Next(a) | Formula::Hence(a) => 1 + a.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::Tangle(args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// If the formula reads as `a -> b`, returns `(a, b)`.
    pub fn as_implication(&self) -> Option<(&Formula, Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(a, b) => Some((a, Formula::not((**b).clone()))),
                _ => None,
            },
            _ => None,
        }
    }
}

/// The unique `m` in `[1, k]` with `n ≡ m (mod k)`.
pub fn mod_index(n: i64, k: i64) -> Result<i64, FormulaError> {
    if k < 1 {
        return Err(FormulaError::ZeroModulus);
    }
    Ok((n - 1).rem_euclid(k) + 1)
}

// Printing. Binary connectives are always parenthesized; `->`, `[]`, `<>` and
// `F` are resugared where the shape is unambiguous.

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(i) => write!(f, "p{i}"),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(a, b) => match b.as_ref() {
                    Formula::Not(c) => write!(f, "({a} -> {c})"),
                    _ => write!(f, "~({a} & {b})"),
                },
                Formula::Tangle(args) if args.len() == 1 => match &args[0] {
                    Formula::Not(c) => write!(f, "[]{}", Unary(c)),
                    other => write!(f, "~<>{}", Unary(other)),
                },
                Formula::Hence(g) => match g.as_ref() {
                    Formula::Not(c) => write!(f, "F {}", Unary(c)),
                    other => write!(f, "~G {}", Unary(other)),
                },
                other => write!(f, "~{}", Unary(other)),
            },
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Next(a) => write!(f, "X {}", Unary(a)),
            Formula::Hence(a) => write!(f, "G {}", Unary(a)),
            Formula::Tangle(args) if args.len() == 1 => write!(f, "<>{}", Unary(&args[0])),
            Formula::Tangle(args) => {
                write!(f, "<>{{")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Operand of a prefix operator. Every printed form already binds at least as
/// tightly as a prefix operand, so this is only a marker for readability.
struct Unary<'a>(&'a Formula);

impl fmt::Display for Unary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u32) -> Formula {
        Formula::atom(i)
    }

    #[test]
    fn mod_index_examples() {
        assert_eq!(mod_index(5, 5).unwrap(), 5);
        assert_eq!(mod_index(5, 2).unwrap(), 1);
        assert_eq!(mod_index(2, 1).unwrap(), 1);
        assert_eq!(mod_index(0, 3).unwrap(), 3);
        assert_eq!(mod_index(-1, 3).unwrap(), 2);
        assert!(mod_index(3, 0).is_err());
    }

    #[test]
    fn tangle_is_canonical() {
        let a = Formula::tangle([p(2), p(1), p(2)]).unwrap();
        let b = Formula::tangle([p(1), p(2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "<>{p1,p2}");
        assert!(Formula::tangle(Vec::new()).is_err());
    }

    #[test]
    fn double_negation_collapses() {
        assert_eq!(Formula::not(Formula::not(p(1))), p(1));
        // [](~p1) is ~<>{p1}
        assert_eq!(Formula::boxed(Formula::not(p(1))), Formula::not(Formula::dia(p(1))));
    }

    #[test]
    fn depth_and_width() {
        assert_eq!(p(1).depth(), 0);
        assert_eq!(Formula::tangle([p(1), p(2)]).unwrap().depth(), 1);
        assert_eq!(Formula::next(p(1)).width(), 0);
        let nested = Formula::dia(Formula::tangle([p(1), p(2), p(3)]).unwrap());
        assert_eq!(nested.width(), 3);
        assert_eq!(nested.depth(), 2);
    }

    #[test]
    fn substitution_collapses_sets() {
        let f = Formula::tangle([p(1), p(2)]).unwrap();
        let sigma: Substitution = [(1, p(2))].into_iter().collect();
        assert_eq!(f.substitute(&sigma), Formula::dia(p(2)));
        assert_eq!(p(1).substitute(&sigma), p(2));
        assert_eq!(p(3).substitute(&sigma), p(3));
    }

    #[test]
    fn implication_view() {
        let f = Formula::implies(p(1), Formula::not(p(2)));
        let (a, b) = f.as_implication().unwrap();
        assert_eq!(a, &p(1));
        assert_eq!(b, Formula::not(p(2)));
    }
}
