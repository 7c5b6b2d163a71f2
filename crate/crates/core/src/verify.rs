//! Finite checks of the gallery lemmas, each producing an [`ExperimentReport`].

use crate::bisim::{compute_bisim, Cap};
use crate::error::ModelError;
use itertools::Itertools;

use crate::formula::{mod_index, Formula, Substitution};
use crate::gallery::{coordinates, gen_a, gen_b, gen_d, sim_m, GalleryPoint};
use crate::proof::{instantiate_axiom, random_instance, Axiom, AxiomInstance, SchemaId};
use crate::random::rng_from_seed;
use crate::report::ExperimentReport;
use crate::schema;

fn need(cond: bool, msg: &str) -> Result<(), ModelError> {
    if cond {
        Ok(())
    } else {
        Err(ModelError::Parameter(msg.into()))
    }
}

/// On `A(N,K)`: `(0,k)` and `(h,k)` are width-`K` bisimilar at rank `m` for
/// every `h ∈ [1,(N-m)K]` with `h ≢ k (mod K)`.
pub fn verify_nkbis(n: u32, k: u32, m: u32) -> Result<ExperimentReport, ModelError> {
    need(m <= n, "m must not exceed N")?;
    let a = gen_a(n, k)?;
    let table = compute_bisim(&a, &a, m as usize, Cap::Bounded(k as usize))?;
    let mut report = ExperimentReport::new("nkbis").param("N", n).param("K", k).param("m", m);
    let (mut checked, mut failures) = (0, Vec::new());
    for kk in 1..=k as i64 {
        for h in 1..=((n - m) * k) as i64 {
            if (h - kk).rem_euclid(k as i64) == 0 {
                continue;
            }
            checked += 1;
            let x = a.point(&GalleryPoint::a(0, kk).to_string()).expect("axis point");
            let y = a.point(&GalleryPoint::a(h, kk).to_string()).expect("gallery point");
            if !table.related(m as usize, x, y) {
                failures.push(format!("(0,{kk}) and ({h},{kk}) not related"));
            }
        }
    }
    report.check_all("axis points bisimilar to their diagonal copies", checked, failures);
    Ok(report)
}

/// On `B(N,K)`: `∼ᵐ` is contained in rank-`m` unbounded-width bisimilarity.
pub fn verify_bislemm(n: u32, k: u32, m: u32) -> Result<ExperimentReport, ModelError> {
    let b = gen_b(n, k)?;
    let sim = sim_m(&b, n, k, m)?;
    let table = compute_bisim(&b, &b, m as usize, Cap::Unbounded)?;
    let mut report = ExperimentReport::new("bislemm").param("N", n).param("K", k).param("m", m);
    let (mut checked, mut failures) = (0, Vec::new());
    for (x, row) in sim.iter().enumerate() {
        for y in row.ones() {
            checked += 1;
            if !table.related(m as usize, x, y) {
                failures.push(format!("{} ~ {} but not bisimilar", b.name(x), b.name(y)));
            }
        }
    }
    report.check_all("similar pairs are bisimilar", checked, failures);
    Ok(report)
}

/// On `B(N,K)`: every point is `∼ᵐ`-similar to an axis point, every orbit
/// covers the axis, and the axis is one cycle advancing `k` by one every
/// `N(K+1)+1` steps.
pub fn verify_mainaxis(n: u32, k: u32, m: u32) -> Result<ExperimentReport, ModelError> {
    let b = gen_b(n, k)?;
    let sim = sim_m(&b, n, k, m)?;
    let coords = coordinates(&b);
    let axis: Vec<usize> = (0..b.len()).filter(|&i| coords[i].h == 0).collect();
    let axis_set = b.set_of(axis.iter().copied());
    let mut report = ExperimentReport::new("mainaxis").param("N", n).param("K", k).param("m", m);

    let failures: Vec<String> = (0..b.len())
        .filter(|&x| sim[x].is_disjoint(&axis_set))
        .map(|x| format!("{} has no similar axis point", b.name(x)))
        .collect();
    report.check_all("every point is similar to an axis point", b.len(), failures);

    let mut failures = Vec::new();
    for x in 0..b.len() {
        let orbit = b.orbit_set(x)?;
        if !axis_set.is_subset(&orbit) {
            failures.push(format!("orbit of {} misses part of the axis", b.name(x)));
        }
    }
    report.check_all("every orbit contains the whole axis", b.len(), failures);

    let (ni, ki) = (n as i64, k as i64);
    let f = b.fmap().expect("dynamic");
    let start = axis[0];
    let mut cycle_len = 1;
    let mut y = f[start];
    while y != start && cycle_len <= b.len() {
        y = f[y];
        cycle_len += 1;
    }
    report.check("axis cycle length", (ki - 1) * (ni * ki + ni + 1), cycle_len);

    let steps = (ni * (ki + 1) + 1) as usize;
    let mut failures = Vec::new();
    for kk in 1..ki {
        let from = GalleryPoint::b(0, 0, kk);
        let expected = GalleryPoint::b(0, 0, mod_index(kk + 1, ki - 1).expect("K >= 2"));
        let mut z = b.point(&from.to_string()).expect("axis point");
        for _ in 0..steps {
            z = f[z];
        }
        if b.name(z) != expected.to_string() {
            failures.push(format!("{from} reaches {} after {steps} steps, not {expected}", b.name(z)));
        }
    }
    report.check_all("axis rotation after N(K+1)+1 steps", (k - 1) as usize, failures);
    Ok(report)
}

/// On `D(N,K)`: every cluster point refutes `Trouble^K` and `Cycle^K` is
/// valid.
pub fn verify_trouble_fails(n: u32, k: u32) -> Result<ExperimentReport, ModelError> {
    let d = gen_d(n, k)?;
    let coords = coordinates(&d);
    let not_trouble = Formula::not(schema::trouble(k));
    let ext = d.eval(&not_trouble)?;
    let mut report = ExperimentReport::new("trouble-fails").param("N", n).param("K", k);
    let c_points: Vec<usize> = (0..d.len()).filter(|&i| coords[i].t == Some(-1)).collect();
    let failures = c_points
        .iter()
        .filter(|&&x| !ext.contains(x))
        .map(|&x| format!("{} satisfies Trouble", d.name(x)))
        .collect();
    report.check_all("cluster points refute Trouble", c_points.len(), failures);
    let cycle_ext = d.eval(&schema::cycle(k))?;
    let failures = (0..d.len())
        .filter(|&x| !cycle_ext.contains(x))
        .map(|x| format!("{} refutes Cycle", d.name(x)))
        .collect();
    report.check_all("Cycle holds everywhere", d.len(), failures);
    Ok(report)
}

/// On `D(N+1,K+1)`: continuity of arity `K` holds for every atomic
/// substitution over `p1..p_{K+1}`, for `sample_size` random substitutions of
/// depth at most `N`, and every other schema holds on random instances.
pub fn verify_cont_soundness(
    n: u32,
    k: u32,
    sample_size: usize,
    seed: u64,
) -> Result<ExperimentReport, ModelError> {
    need(n >= 1 && k >= 1, "N and K must be at least 1")?;
    let d = gen_d(n + 1, k + 1)?;
    let mut report = ExperimentReport::new("cont-soundness")
        .param("N", n)
        .param("K", k)
        .param("samples", sample_size)
        .param("seed", seed);
    let refute = |f: &Formula| -> Result<Option<String>, ModelError> {
        Ok(d.refutation(f)?.map(|x| format!("{f} fails at {}", d.name(x))))
    };

    report.check("canonical continuity instance valid", true, refute(&schema::cont(k))?.is_none());

    let mut failures = Vec::new();
    let mut checked = 0;
    for choice in (0..k).map(|_| 1..=k + 1).multi_cartesian_product() {
        let sigma: Substitution =
            choice.into_iter().enumerate().map(|(i, a)| (i as u32 + 1, Formula::atom(a))).collect();
        checked += 1;
        failures.extend(refute(&instantiate_axiom(&AxiomInstance::new(Axiom::Cont(k), sigma)).expect("arity >= 1"))?);
    }
    report.check_all("atomic continuity instances valid", checked, failures);

    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    for _ in 0..sample_size {
        let inst = random_instance(&mut rng, SchemaId::Cont, k + 1, n as usize, k as usize + 1, k);
        failures.extend(refute(&instantiate_axiom(&inst).expect("well-formed"))?);
    }
    report.check_all("sampled continuity instances valid", sample_size, failures);

    let mut failures = Vec::new();
    let mut checked = 0;
    for id in SchemaId::ALL.into_iter().filter(|&id| id != SchemaId::Cont) {
        for _ in 0..OTHER_SCHEMA_SAMPLES {
            checked += 1;
            let inst = random_instance(&mut rng, id, k + 1, n as usize, k as usize + 1, k);
            failures.extend(refute(&instantiate_axiom(&inst).expect("well-formed"))?);
        }
    }
    report.check_all("sampled instances of the other schemas valid", checked, failures);
    Ok(report)
}

const OTHER_SCHEMA_SAMPLES: usize = 10;
