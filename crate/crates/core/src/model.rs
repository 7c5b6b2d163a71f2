//! Finite dynamic preorder models.
//!
//! Topology convention: open sets are the `≼`-downsets, so `<>` looks down
//! along `≼` and the closure of a set is its upset. `x ≼ y` is read "x lies
//! below y"; a witness for `<>φ` at `y` is some `x ≼ y` satisfying `φ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub type PointSet = FixedBitSet;

/// On-disk model document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub points: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

/// Partition of the points into clusters (mutual `≼`-classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPartition {
    /// Blocks ordered by their least member; members ascending.
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
    /// `below[b]` holds every block `c` with `c ≼ b` (reflexive).
    pub below: Vec<FixedBitSet>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_leq(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn max_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Eventually periodic orbit `x, f(x), f²(x), ...` split at the first repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Orbit {
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefix.iter().chain(self.cycle.iter()).copied()
    }

    /// `f^n(x)` read off the orbit.
    pub fn nth(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }
}

#[derive(Clone, Debug)]
pub struct DynModel {
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<PointSet>,
    down: Vec<PointSet>,
    fmap: Option<Vec<usize>>,
    valuation: BTreeMap<u32, PointSet>,
    clusters: ClusterPartition,
}

impl PartialEq for DynModel {
    fn eq(&self, other: &Self) -> bool {
        let nonempty = |m: &DynModel| -> BTreeMap<u32, PointSet> {
            m.valuation
                .iter()
                .filter(|(_, s)| s.count_ones(..) > 0)
                .map(|(k, s)| (*k, s.clone()))
                .collect()
        };
        self.names == other.names
            && self.up == other.up
            && self.fmap == other.fmap
            && nonempty(self) == nonempty(other)
    }
}

impl DynModel {
    /// Builds a model from generator edges `(x, y)` meaning `x ≼ y`; the
    /// reflexive-transitive closure is taken here.
    pub fn new(
        names: Vec<String>,
        edges: &[(usize, usize)],
        fmap: Option<Vec<usize>>,
        valuation: BTreeMap<u32, Vec<usize>>,
    ) -> Result<DynModel, ModelError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicatePoint(name.clone()));
            }
        }
        let check = |i: usize| -> Result<(), ModelError> {
            if i < n {
                Ok(())
            } else {
                Err(ModelError::UnknownPoint(format!("#{i}")))
            }
        };
        let mut up: Vec<PointSet> = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(i);
                s
            })
            .collect();
        for &(a, b) in edges {
            check(a)?;
            check(b)?;
            up[a].insert(b);
        }
        // Warshall over bit rows.
        for k in 0..n {
            let row = up[k].clone();
            for (a, ups) in up.iter_mut().enumerate() {
                if a != k && ups.contains(k) {
                    ups.union_with(&row);
                }
            }
        }
        let mut down: Vec<PointSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (a, row) in up.iter().enumerate() {
            for x in row.ones() {
                down[x].insert(a);
            }
        }
        if let Some(f) = &fmap {
            if f.len() != n {
                let missing = names.get(f.len()).cloned().unwrap_or_default();
                return Err(ModelError::PartialMap(missing));
            }
            for &y in f {
                check(y)?;
            }
        }
        let mut val = BTreeMap::new();
        for (atom, pts) in valuation {
            if atom == 0 {
                return Err(ModelError::BadAtom("p0".into()));
            }
            let mut s = FixedBitSet::with_capacity(n);
            for p in pts {
                check(p)?;
                s.insert(p);
            }
            val.insert(atom, s);
        }
        let clusters = compute_clusters(&up, &down);
        Ok(DynModel { names, index, up, down, fmap, valuation: val, clusters })
    }

    pub fn from_document(doc: &ModelDocument) -> Result<DynModel, ModelError> {
        let names = doc.points.clone();
        let lookup: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let find = |s: &str| -> Result<usize, ModelError> {
            lookup.get(s).copied().ok_or_else(|| ModelError::UnknownPoint(s.to_string()))
        };
        let mut edges = Vec::with_capacity(doc.order.len());
        for (a, b) in &doc.order {
            edges.push((find(a)?, find(b)?));
        }
        let fmap = match &doc.f {
            None => None,
            Some(map) => {
                for key in map.keys() {
                    find(key)?;
                }
                let mut f = Vec::with_capacity(names.len());
                for name in &names {
                    let target = map.get(name).ok_or_else(|| ModelError::PartialMap(name.clone()))?;
                    f.push(find(target)?);
                }
                Some(f)
            }
        };
        let mut valuation = BTreeMap::new();
        for (atom, pts) in &doc.valuation {
            let idx = parse_atom_name(atom)?;
            let pts = pts.iter().map(|p| find(p)).collect::<Result<Vec<_>, _>>()?;
            valuation.insert(idx, pts);
        }
        DynModel::new(names, &edges, fmap, valuation)
    }

    pub fn from_json(text: &str) -> Result<DynModel, ModelError> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        DynModel::from_document(&doc)
    }

    /// Document with a reduced generator set: a cycle through each cluster plus
    /// one edge per covering pair of clusters.
    pub fn to_document(&self) -> ModelDocument {
        let mut order = Vec::new();
        let cp = &self.clusters;
        for block in &cp.blocks {
            if block.len() > 1 {
                for w in 0..block.len() {
                    let a = block[w];
                    let b = block[(w + 1) % block.len()];
                    order.push((self.names[a].clone(), self.names[b].clone()));
                }
            }
        }
        for (hi, covered) in self.cluster_covers().into_iter().enumerate() {
            for lo in covered {
                order.push((
                    self.names[cp.blocks[lo][0]].clone(),
                    self.names[cp.blocks[hi][0]].clone(),
                ));
            }
        }
        let f = self.fmap.as_ref().map(|f| {
            f.iter()
                .enumerate()
                .map(|(x, &y)| (self.names[x].clone(), self.names[y].clone()))
                .collect()
        });
        let valuation = self
            .valuation
            .iter()
            .filter(|(_, s)| s.count_ones(..) > 0)
            .map(|(k, s)| (format!("p{k}"), s.ones().map(|i| self.names[i].clone()).collect()))
            .collect();
        ModelDocument { points: self.names.clone(), order, f, valuation }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("model documents serialize")
    }

    /// For each block, the blocks it immediately covers.
    fn cluster_covers(&self) -> Vec<Vec<usize>> {
        let cp = &self.clusters;
        (0..cp.len())
            .map(|hi| {
                cp.below[hi]
                    .ones()
                    .filter(|&lo| lo != hi)
                    .filter(|&lo| {
                        !cp.below[hi]
                            .ones()
                            .any(|mid| mid != hi && mid != lo && cp.block_leq(lo, mid))
                    })
                    .collect()
            })
            .collect()
    }

    /// Graphviz rendering: clusters as boxed subgraphs, covering order as solid
    /// edges between cluster representatives, the point map dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph model {\n  rankdir=BT;\n  node [shape=circle];\n");
        let labels: Vec<String> = (0..self.len())
            .map(|x| {
                let atoms: Vec<String> = self
                    .valuation
                    .iter()
                    .filter(|(_, s)| s.contains(x))
                    .map(|(k, _)| format!("p{k}"))
                    .collect();
                if atoms.is_empty() {
                    self.names[x].clone()
                } else {
                    format!("{}\\n{}", self.names[x], atoms.join(","))
                }
            })
            .collect();
        for (b, block) in self.clusters.blocks.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{b} {{\n    style=rounded;");
            for &x in block {
                let _ = writeln!(out, "    \"{}\" [label=\"{}\"];", self.names[x], labels[x]);
            }
            out.push_str("  }\n");
        }
        for (hi, covered) in self.cluster_covers().into_iter().enumerate() {
            for lo in covered {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\";",
                    self.names[self.clusters.blocks[lo][0]],
                    self.names[self.clusters.blocks[hi][0]]
                );
            }
        }
        if let Some(f) = &self.fmap {
            for (x, &y) in f.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [style=dashed, constraint=false];",
                    self.names[x], self.names[y]
                );
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn point(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn is_dynamic(&self) -> bool {
        self.fmap.is_some()
    }

    pub fn fmap(&self) -> Option<&[usize]> {
        self.fmap.as_deref()
    }

    /// `x ≼ y`
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `{y : x ≼ y}`
    pub fn up_of(&self, x: usize) -> &PointSet {
        &self.up[x]
    }

    /// `{y : y ≼ x}`
    pub fn down_of(&self, x: usize) -> &PointSet {
        &self.down[x]
    }

    pub fn clusters(&self) -> &ClusterPartition {
        &self.clusters
    }

    pub fn atom_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.valuation.keys().copied()
    }

    /// Extension of `p_i`; unlisted atoms are empty.
    pub fn atom_set(&self, i: u32) -> PointSet {
        self.valuation
            .get(&i)
            .cloned()
            .unwrap_or_else(|| FixedBitSet::with_capacity(self.len()))
    }

    pub fn empty_set(&self) -> PointSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, pts: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = self.empty_set();
        pts.into_iter().for_each(|p| s.insert(p));
        s
    }

    /// Topological closure: `{x : ∃a ∈ s, a ≼ x}`.
    pub fn closure_up(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for a in s.ones() {
            out.union_with(&self.up[a]);
        }
        out
    }

    /// Interior: `{x : ↓x ⊆ s}`.
    pub fn interior(&self, s: &PointSet) -> PointSet {
        self.set_of((0..self.len()).filter(|&x| self.down[x].is_subset(s)))
    }

    /// Tangled closure via clusters: the upset of every cluster meeting all
    /// members of the family.
    pub fn tangled_clusters(&self, family: &[PointSet]) -> Result<PointSet, ModelError> {
        if family.is_empty() {
            return Err(ModelError::EmptyFamily);
        }
        let mut out = self.empty_set();
        for block in &self.clusters.blocks {
            if family.iter().all(|a| block.iter().any(|&c| a.contains(c))) {
                out.union_with(&self.up[block[0]]);
            }
        }
        Ok(out)
    }

    /// Tangled closure as the greatest fixpoint of
    /// `E ↦ E ∩ ⋂_A closure_up(A ∩ E)`.
    pub fn tangled_gfp(&self, family: &[PointSet]) -> Result<PointSet, ModelError> {
        if family.is_empty() {
            return Err(ModelError::EmptyFamily);
        }
        let mut e = self.full_set();
        loop {
            let mut next = e.clone();
            for a in family {
                let mut meet = a.clone();
                meet.intersect_with(&e);
                next.intersect_with(&self.closure_up(&meet));
            }
            if next == e {
                return Ok(e);
            }
            e = next;
        }
    }

    pub fn orbit(&self, x: usize) -> Result<Orbit, ModelError> {
        let f = self.fmap.as_ref().ok_or(ModelError::StaticModel)?;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut seq = Vec::new();
        let mut cur = x;
        while let std::collections::hash_map::Entry::Vacant(e) = seen.entry(cur) {
            e.insert(seq.len());
            seq.push(cur);
            cur = f[cur];
        }
        let start = seen[&cur];
        let cycle = seq.split_off(start);
        Ok(Orbit { prefix: seq, cycle })
    }

    /// `f⁻¹(s)`
    pub fn preimage(&self, s: &PointSet) -> Result<PointSet, ModelError> {
        let f = self.fmap.as_ref().ok_or(ModelError::StaticModel)?;
        Ok(self.set_of((0..self.len()).filter(|&x| s.contains(f[x]))))
    }

    /// Pairs `(x, y)` with `x ≼ y` but not `f(x) ≼ f(y)`. Empty exactly when
    /// the map is continuous for the downset topology.
    pub fn continuity_check(&self) -> Result<Vec<(usize, usize)>, ModelError> {
        let f = self.fmap.as_ref().ok_or(ModelError::StaticModel)?;
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].ones() {
                if !self.leq(f[x], f[y]) {
                    out.push((x, y));
                }
            }
        }
        Ok(out)
    }

    /// Same model with the point map dropped.
    pub fn to_static(&self) -> DynModel {
        DynModel { fmap: None, ..self.clone() }
    }
}

pub(crate) fn parse_atom_name(s: &str) -> Result<u32, ModelError> {
    s.strip_prefix('p')
        .and_then(|d| d.parse::<u32>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| ModelError::BadAtom(s.to_string()))
}

fn compute_clusters(up: &[PointSet], down: &[PointSet]) -> ClusterPartition {
    let n = up.len();
    let mut block_of = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if block_of[x] != usize::MAX {
            continue;
        }
        let mut eq = up[x].clone();
        eq.intersect_with(&down[x]);
        let members: Vec<usize> = eq.ones().collect();
        for &m in &members {
            block_of[m] = blocks.len();
        }
        blocks.push(members);
    }
    let nb = blocks.len();
    let below = (0..nb)
        .map(|b| {
            let mut s = FixedBitSet::with_capacity(nb);
            for lo in down[blocks[b][0]].ones() {
                s.insert(block_of[lo]);
            }
            s
        })
        .collect();
    ClusterPartition { blocks, block_of, below }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("w{i}")).collect()
    }

    #[test]
    fn single_point_static() {
        let m = DynModel::from_json(r#"{"points":["a"]}"#).unwrap();
        assert_eq!(m.len(), 1);
        assert!(!m.is_dynamic());
        assert!(m.leq(0, 0));
        assert_eq!(m.clusters().len(), 1);
    }

    #[test]
    fn two_cycle_is_one_cluster() {
        let m =
            DynModel::from_json(r#"{"points":["a","b"],"order":[["a","b"],["b","a"]]}"#).unwrap();
        assert_eq!(m.clusters().blocks, vec![vec![0, 1]]);
    }

    #[test]
    fn antichain_blocks() {
        let m = DynModel::new(names(4), &[], None, BTreeMap::new()).unwrap();
        assert_eq!(m.clusters().len(), 4);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            DynModel::from_json(r#"{"points":["a"],"order":[["a","b"]]}"#),
            Err(ModelError::UnknownPoint(_))
        ));
        assert!(matches!(
            DynModel::from_json(r#"{"points":["a","b"],"f":{"a":"b"}}"#),
            Err(ModelError::PartialMap(_))
        ));
        assert!(matches!(
            DynModel::from_json(r#"{"points":["a"],"colour":1}"#),
            Err(ModelError::Document(_))
        ));
        assert!(matches!(
            DynModel::from_json(r#"{"points":["a"],"valuation":{"q":["a"]}}"#),
            Err(ModelError::BadAtom(_))
        ));
        assert!(matches!(
            DynModel::from_json(r#"{"points":["a","a"]}"#),
            Err(ModelError::DuplicatePoint(_))
        ));
    }

    #[test]
    fn closure_direction() {
        // a ≼ b: the closure of {a} is {a, b}, the closure of {b} is {b}.
        let m = DynModel::new(names(2), &[(0, 1)], None, BTreeMap::new()).unwrap();
        assert_eq!(m.closure_up(&m.set_of([0])), m.set_of([0, 1]));
        assert_eq!(m.closure_up(&m.set_of([1])), m.set_of([1]));
        assert_eq!(m.closure_up(&m.empty_set()), m.empty_set());
        assert_eq!(m.closure_up(&m.full_set()), m.full_set());
    }

    #[test]
    fn tangle_algorithms_basic() {
        let m = DynModel::new(names(3), &[(0, 1), (1, 2)], None, BTreeMap::new()).unwrap();
        assert!(m.tangled_clusters(&[]).is_err());
        assert!(m.tangled_gfp(&[]).is_err());
        assert_eq!(m.tangled_gfp(&[m.empty_set()]).unwrap(), m.empty_set());
        assert_eq!(m.tangled_gfp(&[m.full_set()]).unwrap(), m.full_set());
        let a = m.set_of([1]);
        assert_eq!(m.tangled_clusters(std::slice::from_ref(&a)).unwrap(), m.closure_up(&a));
    }

    #[test]
    fn orbits() {
        let fixed = DynModel::new(names(1), &[], Some(vec![0]), BTreeMap::new()).unwrap();
        assert_eq!(fixed.orbit(0).unwrap(), Orbit { prefix: vec![], cycle: vec![0] });
        let swap = DynModel::new(names(2), &[], Some(vec![1, 0]), BTreeMap::new()).unwrap();
        assert_eq!(swap.orbit(0).unwrap(), Orbit { prefix: vec![], cycle: vec![0, 1] });
        let tail = DynModel::new(names(3), &[], Some(vec![1, 2, 1]), BTreeMap::new()).unwrap();
        let o = tail.orbit(0).unwrap();
        assert_eq!(o, Orbit { prefix: vec![0], cycle: vec![1, 2] });
        assert_eq!(o.nth(4), 2);
        let stat = DynModel::new(names(1), &[], None, BTreeMap::new()).unwrap();
        assert!(matches!(stat.orbit(0), Err(ModelError::StaticModel)));
        assert!(matches!(stat.continuity_check(), Err(ModelError::StaticModel)));
    }

    #[test]
    fn identity_is_continuous() {
        let m = DynModel::new(names(3), &[(0, 1), (2, 1)], Some(vec![0, 1, 2]), BTreeMap::new())
            .unwrap();
        assert!(m.continuity_check().unwrap().is_empty());
        // collapsing the top onto a bottom point breaks monotonicity
        let bad =
            DynModel::new(names(2), &[(0, 1)], Some(vec![1, 0]), BTreeMap::new()).unwrap();
        assert_eq!(bad.continuity_check().unwrap(), vec![(0, 1)]);
    }
}
