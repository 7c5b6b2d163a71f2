//! Truth-table tautology checking, 64 valuations per machine word.

use crate::formula::Formula;

pub const MAX_TAUT_ATOMS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TautError {
    #[error("formula is not propositional")]
    NotPropositional,
    #[error("{0} distinct atoms exceed the limit of {MAX_TAUT_ATOMS}")]
    TooManyAtoms(usize),
}

pub fn is_tautology(f: &Formula) -> Result<bool, TautError> {
    if !f.is_propositional() {
        return Err(TautError::NotPropositional);
    }
    let atoms: Vec<u32> = f.atoms().into_iter().collect();
    if atoms.len() > MAX_TAUT_ATOMS {
        return Err(TautError::TooManyAtoms(atoms.len()));
    }
    let rows = 1usize << atoms.len();
    let words = rows.div_ceil(64);
    let columns: Vec<Vec<u64>> = (0..atoms.len())
        .map(|bit| {
            (0..words)
                .map(|w| {
                    (0..64).fold(0u64, |acc, r| {
                        let row = w * 64 + r;
                        if row < rows && row >> bit & 1 == 1 {
                            acc | 1 << r
                        } else {
                            acc
                        }
                    })
                })
                .collect()
        })
        .collect();
    let table = eval(f, &atoms, &columns);
    let tail = rows % 64;
    Ok(table.iter().enumerate().all(|(w, &v)| {
        let mask = if w == words - 1 && tail != 0 { (1u64 << tail) - 1 } else { u64::MAX };
        v & mask == mask
    }))
}

fn eval(f: &Formula, atoms: &[u32], columns: &[Vec<u64>]) -> Vec<u64> {
    match f {
        Formula::Atom(i) => {
            let pos = atoms.binary_search(i).expect("collected atom");
            columns[pos].clone()
        }
        Formula::Not(a) => eval(a, atoms, columns).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) => {
            let (x, y) = (eval(a, atoms, columns), eval(b, atoms, columns));
            x.into_iter().zip(y).map(|(u, v)| u & v).collect()
        }
        _ => unreachable!("checked propositional"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn taut(s: &str) -> bool {
        is_tautology(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn classics() {
        assert!(taut("p1 | ~p1"));
        assert!(taut("(p1 -> p2) -> ((p2 -> p3) -> (p1 -> p3))"));
        assert!(!taut("p1 -> p2"));
        assert!(!taut("p1"));
        assert!(taut("((p1 -> p2) -> p1) -> p1"));
    }

    #[test]
    fn many_atoms() {
        let wide = (1..=16).map(|i| format!("p{i}")).collect::<Vec<_>>().join(" & ");
        assert!(taut(&format!("({wide}) -> p16")));
        assert!(!taut(&format!("({wide}) -> ~p7")));
        let too_wide = (1..=17).map(|i| format!("p{i}")).collect::<Vec<_>>().join(" | ");
        assert_eq!(is_tautology(&parse(&too_wide).unwrap()), Err(TautError::TooManyAtoms(17)));
    }

    #[test]
    fn rejects_modal() {
        assert_eq!(is_tautology(&parse("<>p1 | ~<>p1").unwrap()), Err(TautError::NotPropositional));
    }
}
