//! Witness model families.
//!
//! * `A(N,K)`: static, points `(h,k)` with `h ∈ [0,NK]`, `k ∈ [1,K]` and
//!   `h = 0` or `k ≠ |h|_K`; `(h,k) ≼ (h',k')` iff `h ≥ h'`.
//! * `B(N,K)`: dynamic, points `(h,t,k)`; `(h1,t1,_) ≼ (h2,t2,_)` iff
//!   `t1 = t2` and `h1 ≥ h2`.
//! * `C(K)`: a single cluster `(0,-1,k)`.
//! * `D(N,K)`: the disjoint union of `C(K)` and `B(N,K)` with a map that sends
//!   the cluster discontinuously into `B`.
//!
//! Every model is `K`-simple with `p(x) = p_{k(x)}`.
//!
//! The point map of `B` is total only after two repairs to the case split:
//! the straight tail step also applies at `t = NK` (the point `(0,NK,k)` is
//! otherwise unmapped), and the wrap-around from the end of the tail rotates
//! `k` modulo `K-1`, because `(0,0,K)` is not a point of `B`. With the second
//! repair the map restricted to `h = 0` is a single cycle through all
//! `(K-1)(NK+N+1)` such points.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::ModelError;
use crate::formula::mod_index;
use crate::model::DynModel;

/// Coordinates of a gallery point; `t` is `None` for the static family `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GalleryPoint {
    pub h: i64,
    pub t: Option<i64>,
    pub k: i64,
}

impl GalleryPoint {
    pub fn a(h: i64, k: i64) -> Self {
        GalleryPoint { h, t: None, k }
    }

    pub fn b(h: i64, t: i64, k: i64) -> Self {
        GalleryPoint { h, t: Some(t), k }
    }

    /// `s(x) = h(x) + t(x)`
    pub fn s(&self) -> i64 {
        self.h + self.t.unwrap_or(0)
    }

    pub fn parse(name: &str) -> Option<GalleryPoint> {
        let parts: Vec<i64> = name.split('.').map(|p| p.parse().ok()).collect::<Option<_>>()?;
        match parts.as_slice() {
            [h, k] => Some(GalleryPoint::a(*h, *k)),
            [h, t, k] => Some(GalleryPoint::b(*h, *t, *k)),
            _ => None,
        }
    }
}

impl fmt::Display for GalleryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t {
            None => write!(f, "{}.{}", self.h, self.k),
            Some(t) => write!(f, "{}.{}.{}", self.h, t, self.k),
        }
    }
}

fn md(n: i64, k: i64) -> i64 {
    mod_index(n, k).expect("positive modulus")
}

fn check_params(n: u32, k: u32, min_k: u32) -> Result<(), ModelError> {
    if n < 1 {
        return Err(ModelError::Parameter("N must be at least 1".into()));
    }
    if k < min_k {
        return Err(ModelError::Parameter(format!("K must be at least {min_k}")));
    }
    Ok(())
}

/// Builds a simple model: order from `leq`, map from `f`, `p(x) = p_{k(x)}`.
fn assemble(
    points: &[GalleryPoint],
    leq: impl Fn(&GalleryPoint, &GalleryPoint) -> bool,
    f: Option<impl Fn(&GalleryPoint) -> GalleryPoint>,
) -> Result<DynModel, ModelError> {
    let names: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    let index: BTreeMap<GalleryPoint, usize> =
        points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut edges = Vec::new();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            if i != j && leq(x, y) {
                edges.push((i, j));
            }
        }
    }
    let fmap = match f {
        None => None,
        Some(f) => Some(
            points
                .iter()
                .map(|p| {
                    let q = f(p);
                    index.get(&q).copied().ok_or_else(|| {
                        ModelError::Parameter(format!("map sends {p} outside the model ({q})"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let mut valuation: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        valuation.entry(p.k as u32).or_default().push(i);
    }
    DynModel::new(names, &edges, fmap, valuation)
}

pub fn a_points(n: u32, k: u32) -> Vec<GalleryPoint> {
    let (n, k) = (n as i64, k as i64);
    let mut out = Vec::new();
    for h in 0..=n * k {
        for kk in 1..=k {
            if h == 0 || kk != md(h, k) {
                out.push(GalleryPoint::a(h, kk));
            }
        }
    }
    out
}

pub fn gen_a(n: u32, k: u32) -> Result<DynModel, ModelError> {
    check_params(n, k, 1)?;
    let pts = a_points(n, k);
    assemble(&pts, |x, y| x.h >= y.h, None::<fn(&GalleryPoint) -> GalleryPoint>)
}

pub fn b_points(n: u32, k: u32) -> Vec<GalleryPoint> {
    let (n, k) = (n as i64, k as i64);
    let mut out = Vec::new();
    for t in 0..=n * (k + 1) {
        if t <= n * k {
            for h in 0..=n * k - t {
                for kk in 1..=k {
                    if (kk - (h + t)).rem_euclid(k) != 0 {
                        out.push(GalleryPoint::b(h, t, kk));
                    }
                }
            }
        } else {
            for kk in 1..k {
                out.push(GalleryPoint::b(0, t, kk));
            }
        }
    }
    out
}

/// Point map of `B(N,K)`, including the two totality repairs.
pub fn b_map(n: u32, k: u32, p: &GalleryPoint) -> GalleryPoint {
    let (n, k) = (n as i64, k as i64);
    let t = p.t.expect("B point");
    let s = p.h + t;
    if s < n * k {
        GalleryPoint::b(p.h, t + 1, md(p.k + 1, k))
    } else if s == n * k && p.h > 0 {
        GalleryPoint::b(p.h - 1, t + 1, p.k)
    } else if t < n * (k + 1) {
        GalleryPoint::b(p.h, t + 1, p.k)
    } else {
        GalleryPoint::b(0, 0, md(p.k + 1, k - 1))
    }
}

fn b_leq(x: &GalleryPoint, y: &GalleryPoint) -> bool {
    x.t == y.t && x.h >= y.h
}

pub fn gen_b(n: u32, k: u32) -> Result<DynModel, ModelError> {
    check_params(n, k, 2)?;
    let pts = b_points(n, k);
    assemble(&pts, b_leq, Some(|p: &GalleryPoint| b_map(n, k, p)))
}

pub fn c_points(k: u32) -> Vec<GalleryPoint> {
    (1..=k as i64).map(|kk| GalleryPoint::b(0, -1, kk)).collect()
}

pub fn gen_c(k: u32) -> Result<DynModel, ModelError> {
    if k < 1 {
        return Err(ModelError::Parameter("K must be at least 1".into()));
    }
    assemble(&c_points(k), |_, _| true, None::<fn(&GalleryPoint) -> GalleryPoint>)
}

/// Point map of `D(N,K)`.
pub fn d_map(n: u32, k: u32, p: &GalleryPoint) -> GalleryPoint {
    if p.t == Some(-1) {
        let kk = k as i64;
        if p.k != kk - 1 {
            GalleryPoint::b(0, 0, md(p.k + 1, kk))
        } else {
            GalleryPoint::b(1, 0, kk)
        }
    } else {
        b_map(n, k, p)
    }
}

pub fn gen_d(n: u32, k: u32) -> Result<DynModel, ModelError> {
    check_params(n, k, 2)?;
    let mut pts = c_points(k);
    pts.extend(b_points(n, k));
    assemble(&pts, b_leq, Some(|p: &GalleryPoint| d_map(n, k, p)))
}

/// Coordinates of every point of a gallery model, in point order.
pub fn coordinates(m: &DynModel) -> Vec<GalleryPoint> {
    m.names()
        .iter()
        .map(|n| GalleryPoint::parse(n).expect("gallery point name"))
        .collect()
}

/// The similarity `x ∼ᵐ y` on `B(N,K)`: same atom and either the same `s`,
/// both `s ≤ K(N-m)`, or both `s ∈ [NK, N(K+1)-m]`.
pub fn sim_m(b: &DynModel, n: u32, k: u32, m: u32) -> Result<Vec<FixedBitSet>, ModelError> {
    if m >= n {
        return Err(ModelError::Parameter(format!("similarity index m = {m} must be below N = {n}")));
    }
    let (n, k, m) = (n as i64, k as i64, m as i64);
    let coords = coordinates(b);
    let low = |s: i64| s <= k * (n - m);
    let high = |s: i64| (n * k..=n * (k + 1) - m).contains(&s);
    Ok(coords
        .iter()
        .map(|x| {
            let mut row = b.empty_set();
            for (j, y) in coords.iter().enumerate() {
                let (sx, sy) = (x.s(), y.s());
                if x.k == y.k && (sx == sy || (low(sx) && low(sy)) || (high(sx) && high(sy))) {
                    row.insert(j);
                }
            }
            row
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(m: &DynModel, name: &str) -> usize {
        m.point(name).unwrap_or_else(|| panic!("no point {name}"))
    }

    /// Independent count of the A points straight from the membership rule.
    fn count_a(n: i64, k: i64) -> usize {
        let mut c = 0;
        for h in 0..=n * k {
            for kk in 1..=k {
                let r = ((h - 1).rem_euclid(k)) + 1;
                if h == 0 || kk != r {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn a_sizes_and_clusters() {
        assert_eq!(gen_a(1, 3).unwrap().len(), 9);
        assert_eq!(gen_a(2, 2).unwrap().len(), 6);
        for (n, k) in [(3, 2), (2, 3), (3, 3)] {
            assert_eq!(gen_a(n, k).unwrap().len(), count_a(n as i64, k as i64));
        }
        let a13 = gen_a(1, 3).unwrap();
        assert_eq!(a13.clusters().blocks[0], vec![0, 1, 2]);
        let a22 = gen_a(2, 2).unwrap();
        let blocks = &a22.clusters().blocks;
        assert_eq!(blocks.len(), 5);
        assert_eq!(blocks[0], vec![idx(&a22, "0.1"), idx(&a22, "0.2")]);
        assert!(blocks[1..].iter().all(|b| b.len() == 1));
    }

    #[test]
    fn b_and_d_sizes() {
        assert_eq!(gen_b(1, 2).unwrap().len(), 7);
        assert_eq!(gen_b(2, 2).unwrap().len(), 17);
        assert_eq!(gen_d(2, 2).unwrap().len(), 19);
        assert!(gen_b(2, 1).is_err());
        assert!(gen_d(2, 1).is_err());
        assert!(gen_b(0, 2).is_err());
    }

    #[test]
    fn c_is_one_cluster() {
        let c = gen_c(3).unwrap();
        assert_eq!(c.clusters().blocks, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn d_map_values() {
        let d = gen_d(2, 2).unwrap();
        let f = d.fmap().unwrap();
        assert_eq!(d.name(f[idx(&d, "0.-1.2")]), "0.0.1");
        assert_eq!(d.name(f[idx(&d, "0.-1.1")]), "1.0.2");
    }

    #[test]
    fn names_parse_back() {
        for p in [GalleryPoint::a(3, 2), GalleryPoint::b(0, -1, 2), GalleryPoint::b(4, 0, 1)] {
            assert_eq!(GalleryPoint::parse(&p.to_string()), Some(p));
        }
        assert_eq!(GalleryPoint::parse("x"), None);
    }

    #[test]
    fn sim_is_reflexive_and_symmetric() {
        for (n, k) in [(2, 2), (3, 2), (2, 3)] {
            let b = gen_b(n, k).unwrap();
            for m in 0..n {
                let rel = sim_m(&b, n, k, m).unwrap();
                for x in 0..b.len() {
                    assert!(rel[x].contains(x));
                    for y in rel[x].ones() {
                        assert!(rel[y].contains(x));
                        if m > 0 {
                            assert_eq!(rel[x], rel[y]);
                        }
                    }
                }
            }
            assert!(sim_m(&b, n, k, n).is_err());
        }
    }

    #[test]
    fn sim_zero_is_not_transitive() {
        // at m = 0 the low and high ranges share s = NK
        let b = gen_b(2, 2).unwrap();
        let rel = sim_m(&b, 2, 2, 0).unwrap();
        let (x, mid, y) = (idx(&b, "0.2.1"), idx(&b, "0.4.1"), idx(&b, "0.5.1"));
        assert!(rel[x].contains(mid) && rel[mid].contains(y));
        assert!(!rel[x].contains(y));
    }

    #[test]
    fn slide_to_axis() {
        let b = gen_b(2, 2).unwrap();
        let rel = sim_m(&b, 2, 2, 1).unwrap();
        for (i, p) in coordinates(&b).iter().enumerate() {
            let axis = GalleryPoint::b(0, p.s(), p.k);
            assert!(rel[i].contains(idx(&b, &axis.to_string())));
        }
    }
}
