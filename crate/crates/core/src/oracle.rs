//! Brute-force oracle for the sets definable with bounded depth and width.
//!
//! `D_0` is the Boolean closure of the atom extensions and `D_{i+1}` the
//! Boolean closure of `D_i` together with every tangled closure of at most
//! `w` members of `D_i`. Any formula of depth `≤ d` and width `≤ w` over the
//! given atoms has its extension in `D_d`. Only the order of the model is
//! used; a point map, if present, is ignored.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::ModelError;
use crate::model::{DynModel, PointSet};

pub const MAX_ORACLE_POINTS: usize = 12;

pub type Mask = u32;

pub fn mask_of(s: &PointSet) -> Mask {
    s.ones().fold(0, |m, i| m | 1 << i)
}

/// Boolean closure of `family` inside a universe of `n` points.
fn boolean_closure(n: usize, family: &BTreeSet<Mask>) -> BTreeSet<Mask> {
    // points with the same membership vector form the atoms of the algebra
    let mut classes: Vec<Mask> = Vec::new();
    let mut seen: Vec<Vec<bool>> = Vec::new();
    for x in 0..n {
        let sig: Vec<bool> = family.iter().map(|s| s >> x & 1 == 1).collect();
        match seen.iter().position(|v| *v == sig) {
            Some(i) => classes[i] |= 1 << x,
            None => {
                seen.push(sig);
                classes.push(1 << x);
            }
        }
    }
    (0..1u32 << classes.len())
        .map(|pick| {
            classes.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0, |m, (_, c)| m | c)
        })
        .collect()
}

/// `D_0 ..= D_depth` for the atoms given, with tangles of at most `width`
/// arguments.
pub fn definable_sets(
    m: &DynModel,
    atoms: &[u32],
    width: usize,
    depth: usize,
) -> Result<Vec<BTreeSet<Mask>>, ModelError> {
    let n = m.len();
    if n > MAX_ORACLE_POINTS {
        return Err(ModelError::Parameter(format!(
            "definability oracle is limited to {MAX_ORACLE_POINTS} points, model has {n}"
        )));
    }
    let clusters = m.clusters();
    let block_mask: Vec<Mask> =
        clusters.blocks.iter().map(|b| b.iter().fold(0, |acc, &x| acc | 1 << x)).collect();
    let block_up: Vec<Mask> =
        block_mask.iter().map(|&bm| mask_of(&m.closure_up(&m.set_of(bits(bm))))).collect();
    let tangle = |fam: &[Mask]| -> Mask {
        block_mask
            .iter()
            .zip(&block_up)
            .filter(|(bm, _)| fam.iter().all(|a| a & **bm != 0))
            .fold(0, |acc, (_, up)| acc | up)
    };

    let base: BTreeSet<Mask> = atoms.iter().map(|&i| mask_of(&m.atom_set(i))).collect();
    let mut levels = vec![boolean_closure(n, &base)];
    for _ in 0..depth {
        let prev = levels.last().expect("level 0");
        let members: Vec<Mask> = prev.iter().copied().collect();
        let mut gen = prev.clone();
        for r in 1..=width.min(members.len()) {
            for fam in members.iter().copied().combinations(r) {
                gen.insert(tangle(&fam));
            }
        }
        levels.push(boolean_closure(n, &gen));
    }
    Ok(levels)
}

fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}
