//! Invariant suites shared by the `selftest` command and the acceptance
//! tests. Each suite is seeded and returns an [`ExperimentReport`].

use std::collections::BTreeMap;

use rand::Rng;

use crate::bisim::{check_agreement, compute_bisim, Cap};
use crate::error::ModelError;
use crate::formula::Formula;
use crate::gallery::{gen_b, gen_d};
use crate::model::DynModel;
use crate::parser::parse;
use crate::proof::{
    audit_soundness, check_derivation, derive_trouble, instantiate_axiom, is_tautology, random_instance,
    trouble_milestones, Derivation, Justification, Line, SchemaId, SystemDescriptor, Verdict,
};
use crate::random::{enumerate_preorders, gen_random_model, random_formula, rng_from_seed};
use crate::report::ExperimentReport;
use crate::verify::{verify_bislemm, verify_mainaxis, verify_nkbis};

/// `derive_trouble(k)` is accepted under `(k, 2)`, ends in `Trouble^k`, lists
/// the milestones in order, and is rejected once the width cap drops below
/// `k`.
pub fn trouble_derivations(ks: &[u32]) -> ExperimentReport {
    let mut report = ExperimentReport::new("trouble-derivations").param("k", ks.to_vec());
    for &k in ks {
        let d = derive_trouble(k);
        let verdict = check_derivation(&d, &SystemDescriptor::bounded(k as usize, 2));
        report.check(&format!("k={k}: accepted with width {k} and depth 2"), "accepted", &verdict);
        let bigger = check_derivation(&d, &SystemDescriptor::bounded(k as usize + 1, 3));
        report.check(&format!("k={k}: accepted with larger caps"), "accepted", &bigger);
        report.check_true(
            &format!("k={k}: concludes Trouble^{k}"),
            d.conclusion() == Some(&crate::schema::trouble(k)),
        );
        let positions: Vec<Option<usize>> = trouble_milestones(k).iter().map(|m| d.position(m)).collect();
        let ordered = positions.iter().all(Option::is_some)
            && positions.windows(2).all(|w| w[0] < w[1]);
        report.check_true(&format!("k={k}: six milestones present in order"), ordered);
        if k >= 2 {
            let narrow = check_derivation(&d, &SystemDescriptor::new(Cap::Bounded(k as usize - 1), Cap::Unbounded));
            report.check_true(&format!("k={k}: rejected with width {}", k - 1), !narrow.is_accept());
        }
    }
    report
}

/// `tangled_clusters` agrees with the greatest-fixpoint definition on every
/// labeled preorder up to `max_size` points, for `families` seeded families
/// per preorder.
pub fn tangle_oracle(max_size: usize, families: usize, seed: u64) -> Result<ExperimentReport, ModelError> {
    let mut report = ExperimentReport::new("tangle-oracle")
        .param("max_size", max_size)
        .param("families", families)
        .param("seed", seed);
    let mut rng = rng_from_seed(seed);
    let (mut checked, mut failures) = (0, Vec::new());
    for size in 1..=max_size {
        for m in enumerate_preorders(size)? {
            for _ in 0..families {
                let count = rng.gen_range(1..=3);
                let family: Vec<_> =
                    (0..count).map(|_| m.set_of((0..size).filter(|_| rng.gen_bool(0.5)))).collect();
                checked += 1;
                let (a, b) = (m.tangled_clusters(&family)?, m.tangled_gfp(&family)?);
                if a != b {
                    failures.push(format!("{} with family {:?}", m.to_json(), family));
                }
            }
        }
    }
    report.check_all("cluster and fixpoint tangled closures agree", checked, failures);
    Ok(report)
}

/// Formulas of depth `≤ n` and width `< k` never distinguish points related
/// at rank `n` by the width-`k` bisimulation, and the levels shrink with the
/// rank.
pub fn bisim_agreement(trials: usize, seed: u64) -> Result<ExperimentReport, ModelError> {
    let mut report = ExperimentReport::new("bisim-agreement").param("trials", trials).param("seed", seed);
    let mut rng = rng_from_seed(seed);
    let (mut pairs, mut agree_fail, mut mono_fail, mut related) = (0, Vec::new(), Vec::new(), 0);
    for trial in 0..trials {
        let left = gen_random_model(rng.gen(), 5, 3, 2, rng.gen_bool(0.5))?;
        let right = if rng.gen_bool(0.3) { left.clone() } else { gen_random_model(rng.gen(), 5, 3, 2, rng.gen_bool(0.5))? };
        let n = rng.gen_range(0..=3);
        let k = rng.gen_range(1..=3);
        let table = compute_bisim(&left, &right, n, Cap::Bounded(k))?;
        for m in 0..n {
            for (x, row) in table.levels[m + 1].iter().enumerate() {
                if !row.is_subset(&table.levels[m][x]) {
                    mono_fail.push(format!("trial {trial}: level {} not inside level {m}", m + 1));
                }
            }
        }
        let formulas: Vec<Formula> = (0..12).map(|_| random_formula(&mut rng, 2, n, k - 1, true)).collect();
        related += table.pairs(n).len();
        pairs += 1;
        match check_agreement(&table, &formulas) {
            Ok(dis) => agree_fail.extend(dis.into_iter().map(|d| {
                format!("trial {trial}: {} distinguishes {} / {}", formulas[d.formula], d.left, d.right)
            })),
            Err(e) => agree_fail.push(format!("trial {trial}: {e}")),
        }
    }
    report.check_all("bisimilar points agree on bounded formulas", pairs, agree_fail);
    report.check_all("levels decrease with rank", pairs, mono_fail);
    report.check_true("some related pairs were exercised", related > 0);
    Ok(report)
}

/// The gallery lemmas on every `(N,K,m)` with `N ≤ max_n`, `K ∈ ks`, `m < N`,
/// plus continuity of `B` and the `K-1` discontinuities of `D`.
pub fn gallery_grid(max_n: u32, ks: &[u32]) -> Result<ExperimentReport, ModelError> {
    let mut report = ExperimentReport::new("gallery-grid").param("max_N", max_n).param("K", ks.to_vec());
    for n in 1..=max_n {
        for &k in ks {
            for m in 0..n {
                report.absorb(&format!("nkbis N={n} K={k} m={m}"), &verify_nkbis(n, k, m)?);
                report.absorb(&format!("bislemm N={n} K={k} m={m}"), &verify_bislemm(n, k, m)?);
                report.absorb(&format!("mainaxis N={n} K={k} m={m}"), &verify_mainaxis(n, k, m)?);
            }
            report.check(&format!("B({n},{k}) discontinuities"), 0, gen_b(n, k)?.continuity_check()?.len());
            report.check(&format!("D({n},{k}) discontinuities"), k - 1, gen_d(n, k)?.continuity_check()?.len());
        }
    }
    Ok(report)
}

fn swap_atoms(f: &Formula) -> Formula {
    let sigma = BTreeMap::from([(1, Formula::atom(2)), (2, Formula::atom(1))]);
    f.substitute(&sigma)
}

/// Applies one seeded mutation to `d`, returning the mutated derivation and
/// the mutated line.
pub fn mutate<R: Rng>(d: &Derivation, rng: &mut R) -> (Derivation, usize) {
    let mut out = d.clone();
    let i = rng.gen_range(0..d.lines.len());
    let line = &mut out.lines[i];
    let forward = i + rng.gen_range(0..3);
    match (&mut line.just, rng.gen_bool(0.5)) {
        (Justification::Mp(a, _), true) => *a = forward,
        (Justification::Nec(_, a), true) => *a = forward,
        _ => {
            let swapped = swap_atoms(&line.formula);
            line.formula = if swapped != line.formula { swapped } else { Formula::not(line.formula.clone()) };
        }
    }
    (out, i)
}

/// Single-line mutations of `derive_trouble(k)` are rejected exactly at the
/// mutated line.
pub fn kernel_mutations(k: u32, count: usize, seed: u64) -> ExperimentReport {
    let mut report = ExperimentReport::new("kernel-mutations").param("k", k).param("count", count).param("seed", seed);
    let d = derive_trouble(k);
    let sys = SystemDescriptor::bounded(k as usize, 2);
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    for trial in 0..count {
        let (bad, line) = mutate(&d, &mut rng);
        match check_derivation(&bad, &sys) {
            Verdict::Reject { line: l, .. } if l == line => {}
            v => failures.push(format!("mutation {trial} of line {line}: {v}")),
        }
    }
    report.check_all("mutations rejected at the mutated line", count, failures);
    report
}

/// A pool of accepted derivations: the Trouble derivations and single-line
/// derivations of random axiom instances.
pub fn accepted_pool(seed: u64) -> Vec<Derivation> {
    let mut pool: Vec<Derivation> = (1..=3).map(derive_trouble).collect();
    let mut rng = rng_from_seed(seed);
    for id in SchemaId::ALL {
        for _ in 0..4 {
            let arity = rng.gen_range(1..=3);
            let inst = random_instance(&mut rng, id, 3, 2, 2, arity);
            let formula = instantiate_axiom(&inst).expect("well-formed instance");
            pool.push(Derivation { lines: vec![Line { formula, just: Justification::Axiom(inst) }] });
        }
    }
    pool
}

/// Every accepted derivation is valid on seeded continuous random models.
pub fn kernel_soundness(models: usize, seed: u64) -> Result<ExperimentReport, ModelError> {
    let mut report = ExperimentReport::new("kernel-soundness").param("models", models).param("seed", seed);
    let pool = accepted_pool(seed);
    let sys = SystemDescriptor::unbounded();
    let rejected = pool.iter().filter(|d| !check_derivation(d, &sys).is_accept()).count();
    report.check("pool derivations rejected by the kernel", 0, rejected);
    let mut failures = Vec::new();
    for i in 0..models {
        let m = gen_random_model(seed.wrapping_add(i as u64), 6, 3, 3, true)?;
        for (j, d) in pool.iter().enumerate() {
            let audit = audit_soundness(d, &m)?;
            if !audit.pass {
                failures.push(format!("model {i}, derivation {j}: {}", audit.failures.join("; ")));
            }
        }
    }
    report.check_all("accepted derivations valid on continuous models", models * pool.len(), failures);
    Ok(report)
}

/// The tautology checker agrees with evaluation on a static model that has
/// one point per valuation.
pub fn taut_agreement(count: usize, seed: u64) -> Result<ExperimentReport, ModelError> {
    let mut report = ExperimentReport::new("taut-agreement").param("count", count).param("seed", seed);
    let atoms = 3u32;
    let n = 1usize << atoms;
    let valuation = (1..=atoms).map(|i| (i, (0..n).filter(|x| x >> (i - 1) & 1 == 1).collect())).collect();
    let names = (0..n).map(|x| format!("v{x}")).collect();
    let m = DynModel::new(names, &[], None, valuation)?;
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let f = random_formula(&mut rng, atoms, 3, 0, false);
        let f = if rng.gen_bool(0.3) { Formula::or(f.clone(), Formula::not(f)) } else { f };
        let by_table = is_tautology(&f).expect("propositional, 3 atoms");
        if by_table != m.valid_on(&f)? {
            failures.push(f.to_string());
        }
    }
    report.check_all("truth table matches model evaluation", count, failures);
    Ok(report)
}

/// Printing then parsing returns the same formula.
pub fn round_trip(count: usize, seed: u64) -> ExperimentReport {
    let mut report = ExperimentReport::new("round-trip").param("count", count).param("seed", seed);
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let f = random_formula(&mut rng, 4, 4, 3, true);
        match parse(&f.to_string()) {
            Ok(g) if g == f => {}
            Ok(g) => failures.push(format!("{f} reparsed as {g}")),
            Err(e) => failures.push(format!("{f}: {e}")),
        }
    }
    report.check_all("print/parse round trip", count, failures);
    report
}

/// Randomized orbits: `G` by orbit traversal equals the fixpoint computation,
/// and continuous random models pass the continuity check.
pub fn semantics_consistency(models: usize, seed: u64) -> Result<ExperimentReport, ModelError> {
    let mut report = ExperimentReport::new("semantics").param("models", models).param("seed", seed);
    let mut rng = rng_from_seed(seed);
    let (mut hence_fail, mut cont_fail) = (Vec::new(), Vec::new());
    for i in 0..models {
        let m = gen_random_model(rng.gen(), 7, 4, 2, i % 2 == 0)?;
        let phi = random_formula(&mut rng, 2, 2, 2, true);
        let inner = m.eval(&phi)?;
        if m.eval(&Formula::hence(phi.clone()))? != m.hence_gfp(&inner)? {
            hence_fail.push(format!("model {i}: G {phi}"));
        }
        if i % 2 == 0 && !m.continuity_check()?.is_empty() {
            cont_fail.push(format!("model {i} not continuous"));
        }
    }
    report.check_all("orbit and fixpoint henceforth agree", models, hence_fail);
    report.check_all("continuous generator yields continuous maps", models.div_ceil(2), cont_fail);
    Ok(report)
}

/// The quick suite run by the `selftest` command.
pub fn run_selftest(seed: u64) -> Result<Vec<ExperimentReport>, ModelError> {
    Ok(vec![
        round_trip(200, seed),
        taut_agreement(200, seed)?,
        semantics_consistency(60, seed)?,
        tangle_oracle(3, 5, seed)?,
        bisim_agreement(40, seed)?,
        gallery_grid(2, &[2, 3])?,
        trouble_derivations(&[1, 2, 3]),
        kernel_mutations(2, 20, seed),
        kernel_soundness(5, seed)?,
        crate::experiments::separation(1, 2, seed)?,
        crate::experiments::expressiveness(1, 1)?,
    ])
}
