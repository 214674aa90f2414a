use super::{par_check, Context, Oracle};
use crate::error::Result;
use crate::matching::BoundaryClass::{A, C};
use crate::poset::{find_p3_shelling, GradedPoset, Strictness};
use crate::report::CheckReport;

pub fn catalan(n: usize) -> u64 {
    (0..n as u64).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

/// Möbius values `mu(x, y) = (-1)^(rank y - rank x)` on all of `P̂_n`.
pub fn check_eulerian(ctx: &Context) -> Result<CheckReport> {
    ctx.poset.is_eulerian()
}

/// Every interval `[x, y]` with `x < y` has as many even as odd ranks.
pub fn check_chi_intervals(ctx: &Context) -> Result<CheckReport> {
    let mut report = ctx.poset.eulerian_by_parity()?;
    report.name = "chi".into();
    Ok(report)
}

pub fn check_thin(ctx: &Context) -> CheckReport {
    ctx.poset.is_thin()
}

/// The minimal elements of `P_n` are the noncrossing matchings, `C_n` of them.
pub fn check_catalan(n: usize) -> CheckReport {
    let p = GradedPoset::build(n, false);
    let mut report = CheckReport::new("catalan", format!("minimal elements of P_{n}"));
    let minimal = p.minimal_elements();
    report.expect(minimal.len() as u64 == catalan(n), || {
        format!(
            "{} minimal elements, expected {}",
            minimal.len(),
            catalan(n)
        )
    });
    for id in 0..p.len() {
        let m = p.matching(id).expect("no bottom");
        report.expect(m.is_noncrossing() == minimal.contains(&id), || {
            format!("{m} misclassified")
        });
    }
    report
}

/// Counts read off the drawing of `P̂_3`.
pub fn check_p3_figure() -> CheckReport {
    let p = GradedPoset::build(3, true);
    let mut report = CheckReport::new("figure", "P̂_3 against its Hasse diagram");
    let sizes = p.rank_sizes();
    report.expect(sizes == [1, 5, 6, 3, 1], || format!("rank sizes {sizes:?}"));
    for id in (0..p.len()).filter(|&id| p.rank(id) == 2) {
        let below = p.lower_covers(id).len();
        report.expect(below == 4, || {
            format!("{} has {below} lower covers", p.describe(id))
        });
    }
    let edges = p.covers().len();
    report.expect(edges == 32, || format!("{edges} Hasse edges"));
    report
}

/// `sigma <= tau` in `P_n` iff `g_tau <= g_sigma` in Bruhat order.
pub fn check_duality(ctx: &Context, oracle: &Oracle) -> CheckReport {
    let ids: Vec<usize> = ctx.ids().collect();
    let mut report = CheckReport::new("duality", format!("all ordered pairs of P_{}", ctx.n));
    par_check(&mut report, &ids, |&a, bad| {
        for &b in &ids {
            let bruhat = oracle(ctx.embedding(b), ctx.embedding(a));
            if ctx.leq(a, b) != bruhat {
                bad.push(format!(
                    "sigma={} tau={}: poset {} bruhat {bruhat}",
                    ctx.describe(a),
                    ctx.describe(b),
                    ctx.leq(a, b)
                ));
            }
        }
        ids.len() as u64
    });
    report
}

/// For `i` in `A(tau)` conjugation by `s_i` shortens `g_tau` by two, for `i`
/// in `B(tau)` it lengthens it by two, and in both cases lands on the image
/// of `s_i . tau`.
pub fn check_trichotomy(ctx: &Context) -> CheckReport {
    let ids: Vec<usize> = ctx.ids().collect();
    let mut report = CheckReport::new(
        "trichotomy",
        format!("every tau in P_{} and i in A(tau) ∪ B(tau)", ctx.n),
    );
    par_check(&mut report, &ids, |&t, bad| {
        let g = ctx.embedding(t);
        let mut cases = 0;
        for i in 1..=ctx.points() {
            let class = ctx.class(t, i);
            if class == C {
                continue;
            }
            cases += 1;
            let conj = g.conj_simple(i);
            let (before, after) = (g.length() as i64, conj.length() as i64);
            let expected = if class == A { before - 2 } else { before + 2 };
            if after != expected {
                bad.push(format!(
                    "tau={} i={i} {class:?}: length {before} -> {after}",
                    ctx.describe(t)
                ));
            }
            if conj != *ctx.embedding(ctx.act(t, i)) {
                bad.push(format!(
                    "tau={} i={i}: s_i g s_i is not g of s_i.tau",
                    ctx.describe(t)
                ));
            }
        }
        cases
    });
    report
}

/// The `C` line taken literally: `s_i g_tau s_i = g_tau` for `i` in `C(tau)`.
pub fn check_trichotomy_c(ctx: &Context) -> CheckReport {
    let ids: Vec<usize> = ctx.ids().collect();
    let mut report = CheckReport::new(
        "trichotomy-c",
        format!("every tau in P_{} and i in C(tau)", ctx.n),
    );
    par_check(&mut report, &ids, |&t, bad| {
        let g = ctx.embedding(t);
        let members = ctx.matching(t).class_members(C);
        for &i in &members {
            let conj = g.conj_simple(i);
            if conj != *g {
                bad.push(format!(
                    "tau={} i={i}: s_i g s_i = {conj}, length {} vs {}",
                    ctx.describe(t),
                    conj.length(),
                    g.length()
                ));
            }
        }
        members.len() as u64
    });
    report
}

/// `length(g_tau) = 2 (C(n, 2) - c(tau))`.
pub fn check_rank_length(ctx: &Context) -> CheckReport {
    let n = ctx.n;
    let pairs = n * n.saturating_sub(1) / 2;
    let mut report = CheckReport::new("rank-length", format!("every tau in P_{n}"));
    for t in ctx.ids() {
        let c = ctx.matching(t).crossing_number();
        let len = ctx.embedding(t).length();
        report.expect(len == 2 * (pairs - c), || {
            format!("tau={} c={c} length={len}", ctx.describe(t))
        });
    }
    report
}

/// The five-symbol labeling of `P̂_3`, under the first dihedral relabeling
/// that makes it an EL-labeling.
pub fn check_shelling(ctx: &Context) -> Result<CheckReport> {
    if ctx.n != 3 {
        let mut report = CheckReport::new("shelling", format!("P̂_{}", ctx.n));
        report.violation("the labeling is defined on P̂_3 only");
        return Ok(report);
    }
    let found = find_p3_shelling(&ctx.poset, Strictness::Weak)?;
    let mut report = found.report;
    report.name = "shelling".into();
    report.universe = format!("{}; relabeling {:?}", report.universe, found.relabeling);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{bruhat_oracle, negated_bruhat};

    #[test]
    fn catalan_numbers() {
        let got: Vec<u64> = (0..=6).map(catalan).collect();
        assert_eq!(got, [1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn structure_small() {
        for n in 1..=3 {
            let ctx = Context::new(n);
            for r in [
                check_eulerian(&ctx).unwrap(),
                check_chi_intervals(&ctx).unwrap(),
                check_thin(&ctx),
                check_catalan(n),
                check_duality(&ctx, &bruhat_oracle),
                check_trichotomy(&ctx),
                check_rank_length(&ctx),
            ] {
                assert!(r.passed(), "{r}");
            }
        }
        assert!(check_p3_figure().passed());
    }

    #[test]
    fn negated_duality_fails() {
        let r = check_duality(&Context::new(2), &negated_bruhat);
        assert_eq!(r.violations.len() as u64, r.cases_checked);
    }

    #[test]
    fn c_line_fails_with_counterexample() {
        let ctx = Context::new(2);
        let r = check_trichotomy_c(&ctx);
        assert!(!r.passed());
        assert!(r.cases_checked > 0);
    }

    #[test]
    fn shelling_n3() {
        let ctx = Context::new(3);
        let r = check_shelling(&ctx).unwrap();
        assert!(r.passed(), "{r}");
        assert!(!check_shelling(&Context::new(2)).unwrap().passed());
    }
}
