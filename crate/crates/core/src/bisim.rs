//! Rank-stratified tangled bisimulations between two finite models.
//!
//! Level 0 relates points with the same atoms. A pair is in level `m+1` when
//! it is in level 0 and, against level `m`:
//!
//! * every set of fewer than `k` points taken from one cluster below `x` is
//!   matched pointwise by points of a single cluster below `y`, and back;
//! * the images under the point map are related;
//! * every orbit point of `x` is related to some orbit point of `y`, and back.
//!
//! Tuples are enumerated as duplicate-free subsets. A tuple with repeated
//! entries is matched exactly when its underlying set is, because the
//! matching tuple may repeat its entries too. The cluster clause for a block
//! `C` below `x` therefore only depends on `C` and on the block of `y`, and
//! is precomputed once per level.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::formula::Formula;
use crate::model::DynModel;

/// Width bound of a bisimulation or proof system; `Unbounded` is the `*` case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cap {
    Bounded(usize),
    Unbounded,
}

impl Cap {
    pub fn admits(self, v: usize) -> bool {
        match self {
            Cap::Bounded(c) => v <= c,
            Cap::Unbounded => true,
        }
    }
}

impl std::fmt::Display for Cap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cap::Bounded(c) => write!(f, "{c}"),
            Cap::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Cap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cap::Bounded(c) => s.serialize_u64(*c as u64),
            Cap::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Cap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Cap::Bounded(n as usize)),
            Raw::S(s) if s == "unbounded" => Ok(Cap::Unbounded),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad cap `{s}`"))),
        }
    }
}

/// A relation between the points of two models, one bit row per left point.
pub type Relation = Vec<FixedBitSet>;

pub struct BisimTable<'a> {
    pub left: &'a DynModel,
    pub right: &'a DynModel,
    pub max_rank: usize,
    pub width: Cap,
    /// `levels[m][x]` is the set of right points related to `x` at rank `m`.
    pub levels: Vec<Relation>,
}

impl BisimTable<'_> {
    pub fn related(&self, m: usize, x: usize, y: usize) -> bool {
        self.levels[m][x].contains(y)
    }

    pub fn pairs(&self, m: usize) -> Vec<(usize, usize)> {
        self.levels[m]
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: BTreeMap<String, Vec<(String, String)>> = (0..=self.max_rank)
            .map(|m| {
                let pairs = self
                    .pairs(m)
                    .into_iter()
                    .map(|(x, y)| (self.left.name(x).to_string(), self.right.name(y).to_string()))
                    .collect();
                (m.to_string(), pairs)
            })
            .collect();
        serde_json::json!({ "n": self.max_rank, "k": self.width, "levels": levels })
    }
}

fn atom_profile(m: &DynModel, atoms: &BTreeSet<u32>) -> Vec<Vec<bool>> {
    let sets: Vec<_> = atoms.iter().map(|&a| m.atom_set(a)).collect();
    (0..m.len()).map(|x| sets.iter().map(|s| s.contains(x)).collect()).collect()
}

/// For every block `c` of `a` and block `d` of `b`, the members of `c` related
/// to some member of `d`, as a bitmask over the positions inside `c`.
fn matched_masks(a: &DynModel, b: &DynModel, rel: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<u64>> {
    let (ca, cb) = (a.clusters(), b.clusters());
    ca.blocks
        .iter()
        .map(|c| {
            cb.blocks
                .iter()
                .map(|d| {
                    c.iter().enumerate().fold(0u64, |mask, (i, &u)| {
                        if d.iter().any(|&v| rel(u, v)) {
                            mask | (1 << i)
                        } else {
                            mask
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// `ok[c][e]`: every subset of block `c` of size at most `r` is matched inside
/// one block below block `e` of the other model.
fn cluster_clause(a: &DynModel, b: &DynModel, masks: &[Vec<u64>], width: Cap) -> Vec<Vec<bool>> {
    let (ca, cb) = (a.clusters(), b.clusters());
    ca.blocks
        .iter()
        .enumerate()
        .map(|(c, block)| {
            let size = block.len();
            let r = match width {
                Cap::Bounded(k) => k.saturating_sub(1).min(size),
                Cap::Unbounded => size,
            };
            (0..cb.len())
                .map(|e| {
                    if r == 0 {
                        return true;
                    }
                    let avail: Vec<u64> = cb.below[e].ones().map(|d| masks[c][d]).collect();
                    (0..size).combinations(r).all(|combo| {
                        let want = combo.iter().fold(0u64, |m, &i| m | (1 << i));
                        avail.iter().any(|&have| have & want == want)
                    })
                })
                .collect()
        })
        .collect()
}

/// Computes levels `0..=n` of the width-`k` tangled bisimulation.
pub fn compute_bisim<'a>(
    left: &'a DynModel,
    right: &'a DynModel,
    n: usize,
    width: Cap,
) -> Result<BisimTable<'a>, ModelError> {
    if left.is_dynamic() != right.is_dynamic() {
        return Err(ModelError::MixedDynamics);
    }
    if let Cap::Bounded(0) = width {
        return Err(ModelError::Parameter("bisimulation width must be at least 1".into()));
    }
    for m in [left, right] {
        let big = m.clusters().max_size();
        if big > 64 {
            return Err(ModelError::Parameter(format!("cluster of size {big} exceeds 64")));
        }
        if big > 8 {
            log::warn!("cluster of size {big}: cluster tuple enumeration is exponential");
        }
    }
    let dynamic = left.is_dynamic();
    let atoms: BTreeSet<u32> = left.atom_indices().chain(right.atom_indices()).collect();
    let (pl, pr) = (atom_profile(left, &atoms), atom_profile(right, &atoms));
    let level0: Relation = (0..left.len())
        .map(|x| {
            let mut row = right.empty_set();
            (0..right.len()).filter(|&y| pl[x] == pr[y]).for_each(|y| row.insert(y));
            row
        })
        .collect();

    let (orbits_l, orbits_r) = if dynamic {
        let ol = (0..left.len()).map(|x| left.orbit_set(x)).collect::<Result<Vec<_>, _>>()?;
        let or = (0..right.len()).map(|y| right.orbit_set(y)).collect::<Result<Vec<_>, _>>()?;
        (ol, or)
    } else {
        (Vec::new(), Vec::new())
    };

    let mut levels = vec![level0];
    for _ in 0..n {
        let prev = levels.last().unwrap();
        let fwd = matched_masks(left, right, &|u, v| prev[u].contains(v));
        let bwd = matched_masks(right, left, &|v, u| prev[u].contains(v));
        let forth = cluster_clause(left, right, &fwd, width);
        let back = cluster_clause(right, left, &bwd, width);
        let (cl, cr) = (left.clusters(), right.clusters());
        // For the orbit clauses: the left points related to something in O_y.
        let next: Relation = (0..left.len())
            .into_par_iter()
            .map(|x| {
                let bx = cl.block_of[x];
                let mut row = right.empty_set();
                for y in levels[0][x].ones() {
                    let by = cr.block_of[y];
                    if !cl.below[bx].ones().all(|c| forth[c][by]) {
                        continue;
                    }
                    if !cr.below[by].ones().all(|d| back[d][bx]) {
                        continue;
                    }
                    if dynamic {
                        let (fl, fr) = (left.fmap().unwrap(), right.fmap().unwrap());
                        if !prev[fl[x]].contains(fr[y]) {
                            continue;
                        }
                        let (ox, oy) = (&orbits_l[x], &orbits_r[y]);
                        let forth_orbit = ox.ones().all(|a| !prev[a].is_disjoint(oy));
                        let back_orbit = oy.ones().all(|b| ox.ones().any(|a| prev[a].contains(b)));
                        if !(forth_orbit && back_orbit) {
                            continue;
                        }
                    }
                    row.insert(y);
                }
                row
            })
            .collect();
        levels.push(next);
    }
    Ok(BisimTable { left, right, max_rank: n, width, levels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub formula: usize,
    pub left: String,
    pub right: String,
}

#[derive(Debug, thiserror::Error)]
pub enum AgreementError {
    #[error("formula {index} has depth {depth} and width {width}, outside rank {rank} / width {cap}")]
    OutOfCaps { index: usize, depth: usize, width: usize, rank: usize, cap: Cap },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Lists every pair in `levels[depth φ]` on which the two models disagree
/// about `φ`. For formulas within the caps this list is always empty.
pub fn check_agreement(
    table: &BisimTable<'_>,
    formulas: &[Formula],
) -> Result<Vec<Disagreement>, AgreementError> {
    for (index, phi) in formulas.iter().enumerate() {
        let (depth, width) = (phi.depth(), phi.width());
        let width_ok = match table.width {
            Cap::Bounded(k) => width < k,
            Cap::Unbounded => true,
        };
        if depth > table.max_rank || !width_ok {
            return Err(AgreementError::OutOfCaps {
                index,
                depth,
                width,
                rank: table.max_rank,
                cap: table.width,
            });
        }
    }
    Ok(disagreements(table, formulas)?)
}

fn disagreements(table: &BisimTable<'_>, formulas: &[Formula]) -> Result<Vec<Disagreement>, ModelError> {
    let mut out = Vec::new();
    for (i, phi) in formulas.iter().enumerate() {
        let (sl, sr) = (table.left.eval(phi)?, table.right.eval(phi)?);
        for (x, y) in table.pairs(phi.depth()) {
            if sl.contains(x) != sr.contains(y) {
                out.push(Disagreement {
                    formula: i,
                    left: table.left.name(x).to_string(),
                    right: table.right.name(y).to_string(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::parser::parse;

    #[test]
    fn one_point_models() {
        let m = DynModel::new(vec!["a".into()], &[], Some(vec![0]), BTreeMap::new()).unwrap();
        let t = compute_bisim(&m, &m, 3, Cap::Bounded(2)).unwrap();
        for lvl in 0..=3 {
            assert_eq!(t.pairs(lvl), vec![(0, 0)]);
        }
    }

    #[test]
    fn mixed_dynamics_rejected() {
        let a = DynModel::new(vec!["a".into()], &[], Some(vec![0]), BTreeMap::new()).unwrap();
        let b = DynModel::new(vec!["a".into()], &[], None, BTreeMap::new()).unwrap();
        assert!(matches!(compute_bisim(&a, &b, 1, Cap::Unbounded), Err(ModelError::MixedDynamics)));
    }

    #[test]
    fn cluster_clause_sees_tangles() {
        // left: a two point cluster {p1, p2}; right: p1 below p2 in a chain.
        let left = DynModel::from_json(
            r#"{"points":["a","b"],"order":[["a","b"],["b","a"]],"valuation":{"p1":["a"],"p2":["b"]}}"#,
        )
        .unwrap();
        let right = DynModel::from_json(
            r#"{"points":["c","d"],"order":[["c","d"]],"valuation":{"p1":["c"],"p2":["d"]}}"#,
        )
        .unwrap();
        // width 2 (single points) cannot tell b from d at rank 1
        let t2 = compute_bisim(&left, &right, 1, Cap::Bounded(2)).unwrap();
        assert!(t2.related(1, 1, 1));
        // width 3 (pairs) can: <>{p1,p2} holds at b but not at d
        let t3 = compute_bisim(&left, &right, 1, Cap::Bounded(3)).unwrap();
        assert!(!t3.related(1, 1, 1));
        let eta = parse("<>{p1,p2}").unwrap();
        assert!(check_agreement(&t2, std::slice::from_ref(&eta)).is_err());
        assert!(check_agreement(&t3, &[eta]).unwrap().is_empty());
        let json = t3.to_json();
        assert_eq!(json["k"], 3);
        assert_eq!(json["levels"]["0"].as_array().unwrap().len(), 2);
    }
}
