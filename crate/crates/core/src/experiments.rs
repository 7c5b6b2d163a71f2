//! End-to-end experiments: separation of the bounded continuity systems and
//! the expressiveness gap between widths.

use crate::bisim::{compute_bisim, Cap};
use crate::error::ModelError;
use crate::gallery::{coordinates, gen_a, gen_d};
use crate::oracle::{definable_sets, mask_of};
use crate::proof::{audit_soundness, check_derivation, derive_trouble, Axiom, Justification, SystemDescriptor, Verdict};
use crate::report::ExperimentReport;
use crate::schema;
use crate::verify::{verify_cont_soundness, verify_trouble_fails};

pub const CONT_SAMPLES: usize = 200;

fn need(cond: bool, msg: &str) -> Result<(), ModelError> {
    if cond {
        Ok(())
    } else {
        Err(ModelError::Parameter(msg.into()))
    }
}

/// `Trouble^{k+1}` is derivable with continuity of arity `k+1` and depth 2,
/// yet `D(n+1,k+1)` validates every arity-`k`, depth-`n` system while
/// refuting it.
pub fn separation(k: u32, n: u32, seed: u64) -> Result<ExperimentReport, ModelError> {
    need(k >= 1, "k must be at least 1")?;
    need(n >= 2, "n must be at least 2")?;
    let mut report = ExperimentReport::new("separation").param("k", k).param("n", n).param("seed", seed);
    let d = gen_d(n + 1, k + 1)?;

    let wide = derive_trouble(k + 1);
    let verdict = check_derivation(&wide, &SystemDescriptor::bounded(k as usize + 1, 2));
    report.check(&format!("derivation of Trouble^{} accepted with width {} and depth 2", k + 1, k + 1), "accepted", &verdict);
    let cont_line = wide
        .lines
        .iter()
        .position(|l| matches!(&l.just, Justification::Axiom(i) if matches!(i.axiom, Axiom::Cont(_))));
    let narrow = check_derivation(&wide, &SystemDescriptor::new(Cap::Bounded(k as usize), Cap::Unbounded));
    let rejected_at = match narrow {
        Verdict::Reject { line, .. } => Some(line),
        Verdict::Accept => None,
    };
    report.check(
        &format!("same derivation rejected with width {k} at its continuity line"),
        format!("{cont_line:?}"),
        format!("{rejected_at:?}"),
    );

    report.absorb(
        &format!("D({},{}) refutes Trouble^{} at every cluster point", n + 1, k + 1, k + 1),
        &verify_trouble_fails(n + 1, k + 1)?,
    );
    report.absorb(
        &format!("every line of the Trouble^{k} derivation is valid on D({},{})", n + 1, k + 1),
        &audit_soundness(&derive_trouble(k), &d)?,
    );
    report.absorb(
        &format!("continuity of arity {k} with depth {n} is sound on D({},{})", n + 1, k + 1),
        &verify_cont_soundness(n, k, CONT_SAMPLES, seed)?,
    );

    let coords = coordinates(&d);
    let ext = d.eval(&schema::cont(k + 1))?;
    let anchor = d.point("0.-1.1").expect("cluster point");
    report.check(&format!("canonical continuity of arity {} fails at 0.-1.1", k + 1), false, ext.contains(anchor));
    let failing: Vec<&str> = (0..d.len()).filter(|&x| !ext.contains(x)).map(|x| d.name(x)).collect();
    report.check_true(
        "canonical continuity only fails on the cluster",
        failing.iter().all(|name| d.point(name).is_some_and(|x| coords[x].t == Some(-1))),
    );
    Ok(report)
}

/// `η^k` separates two points of `A(n+1,k+1)` that are bisimilar for width
/// `k+1` at rank `n`; for `k = 1` the definability oracle confirms that no
/// width-1 formula of depth `≤ n` defines `⟦η¹⟧`.
pub fn expressiveness(k: u32, n: u32) -> Result<ExperimentReport, ModelError> {
    need(k >= 1, "k must be at least 1")?;
    need(n >= 1, "n must be at least 1")?;
    let mut report = ExperimentReport::new("expressiveness").param("k", k).param("n", n);
    let a = gen_a(n + 1, k + 1)?;
    let (x, y) = (a.point("0.2").expect("axis point"), a.point("1.2").expect("gallery point"));
    let table = compute_bisim(&a, &a, n as usize, Cap::Bounded(k as usize + 1))?;
    report.check_true(
        &format!("(0,2) and (1,2) bisimilar for width {} at rank {n}", k + 1),
        table.related(n as usize, x, y),
    );
    let eta = a.eval(&schema::eta(k))?;
    report.check(&format!("eta^{k} holds at (0,2)"), true, eta.contains(x));
    report.check(&format!("eta^{k} holds at (1,2)"), false, eta.contains(y));

    if k == 1 {
        let levels = definable_sets(&a, &[1, 2], 1, n as usize)?;
        let top = levels.last().expect("depth levels");
        report.check_true("width-1 definable sets exclude eta^1", !top.contains(&mask_of(&eta)));
        let split = top.iter().filter(|&&s| (s >> x & 1) != (s >> y & 1)).count();
        report.check("width-1 definable sets separating (0,2) from (1,2)", 0, split);
    }
    Ok(report)
}
