//! Compositional evaluation of formulas on finite models.

use crate::error::ModelError;
use crate::formula::Formula;
use crate::model::{DynModel, PointSet};

impl DynModel {
    /// Points of the orbit of `x`, as a set.
    pub fn orbit_set(&self, x: usize) -> Result<PointSet, ModelError> {
        let orbit = self.orbit(x)?;
        Ok(self.set_of(orbit.points()))
    }

    /// The extension `⟦φ⟧`.
    pub fn eval(&self, phi: &Formula) -> Result<PointSet, ModelError> {
        match phi {
            Formula::Atom(i) => Ok(self.atom_set(*i)),
            Formula::Not(a) => {
                let mut s = self.eval(a)?;
                s.toggle_range(..);
                Ok(s)
            }
            Formula::And(a, b) => {
                let mut s = self.eval(a)?;
                s.intersect_with(&self.eval(b)?);
                Ok(s)
            }
            Formula::Next(a) => self.preimage(&self.eval(a)?),
            Formula::Hence(a) => {
                if !self.is_dynamic() {
                    return Err(ModelError::StaticModel);
                }
                let inner = self.eval(a)?;
                let mut out = self.empty_set();
                for x in 0..self.len() {
                    if self.orbit(x)?.points().all(|y| inner.contains(y)) {
                        out.insert(x);
                    }
                }
                Ok(out)
            }
            Formula::Tangle(args) => {
                let family = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                self.tangled_clusters(&family)
            }
        }
    }

    /// Henceforth as the greatest fixpoint of `S ↦ ⟦φ⟧ ∩ f⁻¹(S)`.
    pub fn hence_gfp(&self, inner: &PointSet) -> Result<PointSet, ModelError> {
        let mut s = inner.clone();
        loop {
            let mut next = self.preimage(&s)?;
            next.intersect_with(inner);
            if next == s {
                return Ok(s);
            }
            s = next;
        }
    }

    pub fn holds(&self, x: usize, phi: &Formula) -> Result<bool, ModelError> {
        Ok(self.eval(phi)?.contains(x))
    }

    pub fn valid_on(&self, phi: &Formula) -> Result<bool, ModelError> {
        Ok(self.eval(phi)?.count_ones(..) == self.len())
    }

    /// First point (in point order) refuting `φ`, if any.
    pub fn refutation(&self, phi: &Formula) -> Result<Option<usize>, ModelError> {
        let s = self.eval(phi)?;
        Ok((0..self.len()).find(|&x| !s.contains(x)))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::parser::parse;

    fn model(json: &str) -> DynModel {
        DynModel::from_json(json).unwrap()
    }

    #[test]
    fn atoms_and_booleans() {
        let m = model(r#"{"points":["a","b"],"valuation":{"p1":["a"]}}"#);
        assert_eq!(m.eval(&parse("p1").unwrap()).unwrap(), m.set_of([0]));
        assert!(m.valid_on(&parse("p1 | ~p1").unwrap()).unwrap());
        assert_eq!(m.refutation(&parse("p1").unwrap()).unwrap(), Some(1));
        assert_eq!(m.eval(&parse("p7").unwrap()).unwrap(), m.empty_set());
    }

    #[test]
    fn box_on_a_cluster() {
        let m = model(
            r#"{"points":["a","b"],"order":[["a","b"],["b","a"]],
                "valuation":{"p1":["a"],"p2":["b"]}}"#,
        );
        assert!(m.valid_on(&parse("[](p1 | p2)").unwrap()).unwrap());
        assert!(m.valid_on(&parse("<>{p1,p2}").unwrap()).unwrap());
    }

    #[test]
    fn temporal_needs_map() {
        let m = model(r#"{"points":["a"]}"#);
        assert!(matches!(m.eval(&parse("X p1").unwrap()), Err(ModelError::StaticModel)));
        assert!(matches!(m.eval(&parse("G p1").unwrap()), Err(ModelError::StaticModel)));
    }

    #[test]
    fn hence_matches_gfp_on_chain() {
        // 0 -> 1 -> 2 -> 3 -> 2
        let names = (0..4).map(|i| format!("w{i}")).collect();
        let val = BTreeMap::from([(1, vec![1, 2, 3])]);
        let m = DynModel::new(names, &[], Some(vec![1, 2, 3, 2]), val).unwrap();
        let g = m.eval(&parse("G p1").unwrap()).unwrap();
        assert_eq!(g, m.set_of([1, 2, 3]));
        assert_eq!(m.hence_gfp(&m.atom_set(1)).unwrap(), g);
        assert_eq!(m.eval(&parse("F ~p1").unwrap()).unwrap(), m.set_of([0]));
    }
}
