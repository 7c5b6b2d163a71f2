//! Seeded generators for test inputs: random models, all small preorders,
//! random formulas.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::formula::Formula;
use crate::model::DynModel;

/// Largest size accepted by [`enumerate_preorders`].
pub const MAX_ENUMERATED: usize = 4;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Random dynamic model with at most `point_budget` points, at most
/// `cluster_budget` clusters and atoms `p1..p_{atom_budget}`.
///
/// With `continuous` set the map sends clusters into clusters along a
/// monotone map of the cluster order, so `continuity_check` is empty.
pub fn gen_random_model(
    seed: u64,
    point_budget: usize,
    cluster_budget: usize,
    atom_budget: u32,
    continuous: bool,
) -> Result<DynModel, ModelError> {
    if point_budget == 0 || cluster_budget == 0 || atom_budget == 0 {
        return Err(ModelError::Parameter("budgets must be positive".into()));
    }
    if cluster_budget > 8 {
        log::warn!("cluster budget {cluster_budget} is large; bisimulation checks may be slow");
    }
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(1..=point_budget);
    let c = rng.gen_range(1..=cluster_budget.min(n));

    // every cluster gets one point, the rest are spread at random
    let mut cluster_of: Vec<usize> = (0..c).collect();
    cluster_of.extend((c..n).map(|_| rng.gen_range(0..c)));
    cluster_of.shuffle(&mut rng);

    // cluster order: random DAG on indices, a ≤ b only if a ≤ b as integers
    let mut below = vec![vec![false; c]; c];
    for (a, row) in below.iter_mut().enumerate() {
        row[a] = true;
        for cell in row.iter_mut().skip(a + 1) {
            *cell = rng.gen_bool(0.4);
        }
    }
    for m in 0..c {
        for a in 0..c {
            for b in 0..c {
                if below[a][m] && below[m][b] {
                    below[a][b] = true;
                }
            }
        }
    }

    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && below[cluster_of[x]][cluster_of[y]])
        .collect();

    let mut valuation: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 1..=atom_budget {
        let pts: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        valuation.insert(i, pts);
    }

    let fmap = if continuous {
        let g = monotone_cluster_map(&below, &mut rng);
        let members: Vec<Vec<usize>> =
            (0..c).map(|b| (0..n).filter(|&x| cluster_of[x] == b).collect()).collect();
        (0..n)
            .map(|x| *members[g[cluster_of[x]]].choose(&mut rng).expect("nonempty cluster"))
            .collect()
    } else {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    };

    DynModel::new(point_names(n), &edges, Some(fmap), valuation)
}

/// Monotone self-map of the cluster order, built greedily bottom-up with a
/// few retries; falls back to the identity.
fn monotone_cluster_map(below: &[Vec<bool>], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let c = below.len();
    'attempt: for _ in 0..8 {
        let mut g = vec![0; c];
        for a in 0..c {
            let candidates: Vec<usize> = (0..c)
                .filter(|&d| (0..a).filter(|&b| below[b][a]).all(|b| below[g[b]][d]))
                .collect();
            match candidates.choose(rng) {
                Some(&d) => g[a] = d,
                None => continue 'attempt,
            }
        }
        return g;
    }
    (0..c).collect()
}

/// Every labeled preorder on `size` points, as static models without atoms.
pub fn enumerate_preorders(size: usize) -> Result<impl Iterator<Item = DynModel>, ModelError> {
    if size > MAX_ENUMERATED {
        return Err(ModelError::Parameter(format!(
            "preorder enumeration is capped at {MAX_ENUMERATED} points"
        )));
    }
    let pairs: Vec<(usize, usize)> =
        (0..size).flat_map(|x| (0..size).map(move |y| (x, y))).filter(|(x, y)| x != y).collect();
    let total: u32 = 1 << pairs.len();
    Ok((0..total).filter_map(move |mask| {
        let rel = |x: usize, y: usize| {
            x == y || pairs.iter().position(|&p| p == (x, y)).is_some_and(|i| mask >> i & 1 == 1)
        };
        let transitive = (0..size).all(|x| {
            (0..size).all(|y| !rel(x, y) || (0..size).all(|z| !rel(y, z) || rel(x, z)))
        });
        if !transitive {
            return None;
        }
        let edges: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(x, y)| rel(x, y)).collect();
        Some(DynModel::new(point_names(size), &edges, None, BTreeMap::new()).expect("valid preorder"))
    }))
}

/// Random formula over `p1..p_atoms` with modal depth at most `depth` and
/// width at most `width`; `temporal` allows `X` and `G`.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    atoms: u32,
    depth: usize,
    width: usize,
    temporal: bool,
) -> Formula {
    gen_formula(rng, atoms.max(1), depth, width, temporal, 3)
}

fn gen_formula<R: Rng>(
    rng: &mut R,
    atoms: u32,
    depth: usize,
    width: usize,
    temporal: bool,
    fuel: usize,
) -> Formula {
    let mut kinds: Vec<u8> = vec![0, 0];
    if fuel > 0 {
        kinds.extend([1, 2, 2]);
    }
    if depth > 0 {
        if width > 0 {
            kinds.extend([3, 3]);
        }
        if temporal {
            kinds.extend([4, 5]);
        }
    }
    let atom = |rng: &mut R| Formula::atom(rng.gen_range(1..=atoms));
    match *kinds.choose(rng).expect("nonempty") {
        0 => atom(rng),
        1 => Formula::not(gen_formula(rng, atoms, depth, width, temporal, fuel - 1)),
        2 => Formula::and(
            gen_formula(rng, atoms, depth, width, temporal, fuel - 1),
            gen_formula(rng, atoms, depth, width, temporal, fuel - 1),
        ),
        3 => {
            let r = rng.gen_range(1..=width);
            let args: Vec<Formula> =
                (0..r).map(|_| gen_formula(rng, atoms, depth - 1, width, temporal, 2)).collect();
            Formula::tangle(args).expect("nonempty tangle")
        }
        4 => Formula::next(gen_formula(rng, atoms, depth - 1, width, temporal, 2)),
        _ => Formula::hence(gen_formula(rng, atoms, depth - 1, width, temporal, 2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = gen_random_model(7, 6, 3, 2, false).unwrap();
        let b = gen_random_model(7, 6, 3, 2, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn continuous_models_are_continuous() {
        for seed in 0..200 {
            let m = gen_random_model(seed, 7, 4, 2, true).unwrap();
            assert!(m.continuity_check().unwrap().is_empty(), "seed {seed}");
            assert!(m.clusters().len() <= 4);
        }
    }

    #[test]
    fn preorder_counts() {
        // independent count of reflexive-transitive relations on labeled sets
        let counts: Vec<usize> =
            (0..=4).map(|n| enumerate_preorders(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
        assert!(enumerate_preorders(5).is_err());
    }

    #[test]
    fn formula_bounds() {
        let mut rng = rng_from_seed(3);
        for _ in 0..500 {
            let f = random_formula(&mut rng, 3, 3, 2, true);
            assert!(f.depth() <= 3);
            assert!(f.width() <= 2);
            assert!(f.atoms().iter().all(|&i| (1..=3).contains(&i)));
        }
        for _ in 0..100 {
            let f = random_formula(&mut rng, 2, 2, 0, false);
            assert!(f.is_propositional());
        }
    }
}
