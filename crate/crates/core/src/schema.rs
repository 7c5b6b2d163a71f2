//! Builders for the named formula families: the `Trouble` family, the
//! separating tangle `eta`, and the `Cont` axioms.

use std::fmt;
use std::str::FromStr;

use crate::error::FormulaError;
use crate::formula::{mod_index, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemaName {
    Cycle,
    Start,
    Bundle,
    Tangle,
    Trouble,
    Eta,
    Cont,
}

impl FromStr for SchemaName {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "CYCLE" => SchemaName::Cycle,
            "START" => SchemaName::Start,
            "BUNDLE" => SchemaName::Bundle,
            "TANGLE" => SchemaName::Tangle,
            "TROUBLE" => SchemaName::Trouble,
            "ETA" => SchemaName::Eta,
            "CONT" => SchemaName::Cont,
            other => return Err(FormulaError::SchemaRange(format!("unknown schema `{other}`"))),
        })
    }
}

impl fmt::Display for SchemaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SchemaName::Cycle => "CYCLE",
            SchemaName::Start => "START",
            SchemaName::Bundle => "BUNDLE",
            SchemaName::Tangle => "TANGLE",
            SchemaName::Trouble => "TROUBLE",
            SchemaName::Eta => "ETA",
            SchemaName::Cont => "CONT",
        };
        f.write_str(s)
    }
}

pub fn build_schema(name: SchemaName, k: u32, i: Option<u32>) -> Result<Formula, FormulaError> {
    if k < 1 {
        return Err(FormulaError::SchemaRange("k must be at least 1".into()));
    }
    match (name, i) {
        (SchemaName::Start, Some(i)) if (1..=k).contains(&i) => Ok(start(k, i)),
        (SchemaName::Start, Some(i)) => {
            Err(FormulaError::SchemaRange(format!("start index {i} outside [1,{k}]")))
        }
        (SchemaName::Start, None) => Err(FormulaError::SchemaRange("START needs an index".into())),
        (_, Some(_)) => Err(FormulaError::SchemaRange(format!("{name} takes no index"))),
        (SchemaName::Cycle, None) => Ok(cycle(k)),
        (SchemaName::Bundle, None) => Ok(bundle(k)),
        (SchemaName::Tangle, None) => Ok(tangle(k)),
        (SchemaName::Trouble, None) => Ok(trouble(k)),
        (SchemaName::Eta, None) => Ok(eta(k)),
        (SchemaName::Cont, None) => Ok(cont(k)),
    }
}

fn p(i: u32) -> Formula {
    Formula::atom(i)
}

/// Successor of `i` in the cyclic order `1..=k`.
pub fn succ(i: u32, k: u32) -> u32 {
    mod_index(i as i64 + 1, k as i64).expect("k >= 1") as u32
}

/// The `i`-th conjunct `p_i -> X p_{|i+1|_k}` of `cycle(k)`.
pub fn cycle_step(k: u32, i: u32) -> Formula {
    Formula::implies(p(i), Formula::next(p(succ(i, k))))
}

/// `<>p_k -> AND_i (p_i -> X p_{|i+1|_k})`
pub fn cycle(k: u32) -> Formula {
    Formula::implies(Formula::dia(p(k)), Formula::big_and((1..=k).map(|i| cycle_step(k, i))))
}

/// `p_i & G cycle(k)`
pub fn start(k: u32, i: u32) -> Formula {
    Formula::and(p(i), Formula::hence(cycle(k)))
}

/// `[] AND_i <>start(k,i)`
pub fn bundle(k: u32) -> Formula {
    Formula::boxed(Formula::big_and((1..=k).map(|i| Formula::dia(start(k, i)))))
}

/// `<>{start(k,1), .., start(k,k)}`
pub fn tangle(k: u32) -> Formula {
    Formula::tangle((1..=k).map(|i| start(k, i))).expect("k >= 1")
}

/// `bundle(k) -> G <>p_k`
pub fn trouble(k: u32) -> Formula {
    Formula::implies(bundle(k), Formula::hence(Formula::dia(p(k))))
}

/// `<>{p_1, .., p_{k+1}}`
pub fn eta(k: u32) -> Formula {
    Formula::tangle((1..=k + 1).map(p)).expect("nonempty")
}

/// `<>{X p_1, .., X p_k} -> X <>{p_1, .., p_k}`
pub fn cont(k: u32) -> Formula {
    let lhs = Formula::tangle((1..=k).map(|i| Formula::next(p(i)))).expect("k >= 1");
    let rhs = Formula::next(Formula::tangle((1..=k).map(p)).expect("k >= 1"));
    Formula::implies(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn cycle_two_and_one() {
        assert_eq!(cycle(2), parse("<>p2 -> ((p1 -> X p2) & (p2 -> X p1))").unwrap());
        assert_eq!(cycle(1), parse("<>p1 -> (p1 -> X p1)").unwrap());
    }

    #[test]
    fn cont_one() {
        assert_eq!(cont(1), parse("<>{X p1} -> X <>{p1}").unwrap());
        assert_eq!(cont(2), parse("<>{X p1, X p2} -> X <>{p1,p2}").unwrap());
    }

    #[test]
    fn metrics() {
        for k in 1..=6 {
            assert_eq!(cycle(k).depth(), 1);
            assert_eq!(Formula::hence(cycle(k)).depth(), 2);
            assert_eq!(start(k, 1).depth(), 2);
            assert_eq!(trouble(k).width(), 1, "k = {k}");
            assert_eq!(cont(k).width(), k as usize);
            assert_eq!(tangle(k).width(), k as usize);
            assert_eq!(eta(k).width(), k as usize + 1);
        }
    }

    #[test]
    fn ranges() {
        assert!(build_schema(SchemaName::Start, 2, Some(3)).is_err());
        assert!(build_schema(SchemaName::Start, 2, None).is_err());
        assert!(build_schema(SchemaName::Cycle, 0, None).is_err());
        assert_eq!(build_schema(SchemaName::Start, 3, Some(2)).unwrap(), start(3, 2));
        assert_eq!("trouble".parse::<SchemaName>().unwrap(), SchemaName::Trouble);
    }

    #[test]
    fn trouble_roundtrips() {
        for k in 1..=4 {
            let t = trouble(k);
            assert_eq!(parse(&t.to_string()).unwrap(), t);
        }
    }
}
