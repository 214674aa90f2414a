use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{par_check, Context, Coverage};
use crate::affine::{bruhat_leq, AffinePermutation, DescentSet, Side};
use crate::error::Result;
use crate::matching::BoundaryClass::{A, B, C};
use crate::medial::kappa_diagram;
use crate::report::CheckReport;

/// An order on affine permutations, pluggable so that broken ones can be fed in.
pub type Oracle = dyn Fn(&AffinePermutation, &AffinePermutation) -> bool + Sync;

pub fn bruhat_oracle(u: &AffinePermutation, w: &AffinePermutation) -> bool {
    bruhat_leq(u, w).expect("equal periods")
}

pub fn negated_bruhat(u: &AffinePermutation, w: &AffinePermutation) -> bool {
    !bruhat_oracle(u, w)
}

/// Comparison of lengths alone, which is not Bruhat order.
pub fn length_oracle(u: &AffinePermutation, w: &AffinePermutation) -> bool {
    u.length() <= w.length()
}

/// Diagram-level κ is compared on at most this many sampled `(eta, i)`.
const KAPPA_DIAGRAM_SAMPLES: usize = 200;

fn pair_tag(ctx: &Context, x: usize, y: usize, i: usize) -> String {
    format!("tau={} eta={} i={i}", ctx.describe(x), ctx.describe(y))
}

/// Lifting property of Bruhat order on both sides, over embedded pairs
/// `f <= g` according to `oracle`.
pub fn check_lifting(ctx: &Context, coverage: Coverage, oracle: &Oracle) -> CheckReport {
    let points = ctx.points();
    let ids: Vec<usize> = ctx.ids().collect();
    let pairs: Vec<(usize, usize)> = match coverage {
        Coverage::Exhaustive => ids
            .iter()
            .copied()
            .cartesian_product(ids.iter().copied())
            .collect(),
        // sampled elements of P_n, read through the order reversal
        Coverage::Sampled { .. } => ctx
            .comparable_pairs(coverage)
            .into_iter()
            .map(|(x, y)| (y, x))
            .collect(),
    };
    let pairs: Vec<(usize, usize)> = pairs
        .into_iter()
        .filter(|&(a, b)| oracle(ctx.embedding(a), ctx.embedding(b)))
        .collect();
    let descents: Vec<Option<[DescentSet; 2]>> = std::iter::once(None)
        .chain(ids.iter().map(|&id| {
            let g = ctx.embedding(id);
            Some([g.descents(Side::Left), g.descents(Side::Right)])
        }))
        .collect();
    let mut report = CheckReport::new(
        "lifting",
        format!(
            "embedded pairs f <= g ({}, {} pairs) x {points} residues, both sides",
            coverage.describe(),
            pairs.len()
        ),
    );
    par_check(&mut report, &pairs, |&(a, b), bad| {
        let (f, g) = (ctx.embedding(a), ctx.embedding(b));
        let [fl, fr] = descents[a].as_ref().unwrap();
        let [gl, gr] = descents[b].as_ref().unwrap();
        for i in 1..=points {
            if gl.contains(i)
                && !fl.contains(i)
                && !(oracle(f, &g.left_simple(i)) && oracle(&f.left_simple(i), g))
            {
                bad.push(format!("left, f={f} g={g} i={i}"));
            }
            if gr.contains(i)
                && !fr.contains(i)
                && !(oracle(f, &g.right_simple(i)) && oracle(&f.right_simple(i), g))
            {
                bad.push(format!("right, f={f} g={g} i={i}"));
            }
        }
        points as u64
    });
    report
}

/// `tau <= eta`, `i in A(tau) ∩ B(eta)` give `tau <= s_i.eta` and `s_i.tau <= eta`.
pub fn check_lemma_main(ctx: &Context, coverage: Coverage) -> CheckReport {
    let pairs = ctx.comparable_pairs(coverage);
    let mut report = CheckReport::new(
        "lemma-main",
        format!(
            "tau <= eta ({}) and i in A(tau) ∩ B(eta)",
            coverage.describe()
        ),
    );
    par_check(&mut report, &pairs, |&(t, e), bad| {
        let mut cases = 0;
        for i in 1..=ctx.points() {
            if ctx.class(t, i) == A && ctx.class(e, i) == B {
                cases += 1;
                if !ctx.leq(t, ctx.act(e, i)) {
                    bad.push(format!("{}: tau not <= s_i.eta", pair_tag(ctx, t, e, i)));
                }
                if !ctx.leq(ctx.act(t, i), e) {
                    bad.push(format!("{}: s_i.tau not <= eta", pair_tag(ctx, t, e, i)));
                }
            }
        }
        cases
    });
    report
}

/// `tau <= eta` and `i in A(tau)` give `i not in C(eta)`.
pub fn check_lemma_empty(ctx: &Context, coverage: Coverage) -> CheckReport {
    let pairs = ctx.comparable_pairs(coverage);
    let points = ctx.points();
    let mut report = CheckReport::new(
        "lemma-empty",
        format!("tau <= eta ({}) x {points} positions", coverage.describe()),
    );
    par_check(&mut report, &pairs, |&(t, e), bad| {
        for i in 1..=points {
            if ctx.class(t, i) == A && ctx.class(e, i) == C {
                bad.push(format!("{}: i in C(eta)", pair_tag(ctx, t, e, i)));
            }
        }
        points as u64
    });
    report
}

fn minus(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.difference_with(b);
    out
}

fn show(ctx: &Context, set: &FixedBitSet) -> String {
    let ids: Vec<String> = set.ones().map(|x| ctx.describe(x)).collect();
    format!("{{{}}}", ids.join(", "))
}

/// Case 1 of the proof: for `i in A(tau) ∩ A(eta)` the set
/// `{tau <= sigma <= s_i.eta, sigma not <= eta}` equals the one starting at
/// `s_i.tau`, equals `[s_i.tau, s_i.eta] \ [s_i.tau, eta]`, every member has
/// `i in B(sigma)`, and `[tau, eta] = [tau, s_i.eta]` minus it.
pub fn check_case1_sets(ctx: &Context, coverage: Coverage) -> CheckReport {
    let pairs = ctx.comparable_pairs(coverage);
    let mut report = CheckReport::new(
        "case1",
        format!(
            "tau <= eta ({}) and i in A(tau) ∩ A(eta)",
            coverage.describe()
        ),
    );
    let p = &ctx.poset;
    par_check(&mut report, &pairs, |&(t, e), bad| {
        let mut cases = 0;
        for i in 1..=ctx.points() {
            if ctx.class(t, i) != A || ctx.class(e, i) != A {
                continue;
            }
            cases += 1;
            let (st, se) = (ctx.act(t, i), ctx.act(e, i));
            let below_eta = p.down_set(e);
            let x = minus(&p.between(t, se), below_eta);
            let y = minus(&p.between(st, se), below_eta);
            let tag = || pair_tag(ctx, t, e, i);
            if x != y {
                bad.push(format!(
                    "{}: sets differ, {} vs {}",
                    tag(),
                    show(ctx, &x),
                    show(ctx, &y)
                ));
            }
            if y != minus(&p.between(st, se), &p.between(st, e)) {
                bad.push(format!("{}: difference of intervals disagrees", tag()));
            }
            for s in x.ones() {
                if ctx.class(s, i) != B {
                    bad.push(format!(
                        "{}: sigma={} has i outside B",
                        tag(),
                        ctx.describe(s)
                    ));
                }
            }
            if p.between(t, e) != minus(&p.between(t, se), &x) {
                bad.push(format!(
                    "{}: [tau, eta] is not [tau, s_i.eta] minus the set",
                    tag()
                ));
            }
        }
        cases
    });
    report
}

/// Case 2 and the bottom case: `s_i` acts as a parity-reversing involution on
/// `[tau, eta]` for `i in A(tau) ∩ B(eta)`, and on
/// `{sigma in (0̂, eta] : i not in C(sigma)}` for `i in B(eta)`.
pub fn check_case2_involution(ctx: &Context, coverage: Coverage) -> CheckReport {
    let pairs = ctx.comparable_pairs(coverage);
    let points = ctx.points();
    let p = &ctx.poset;
    let mut report = CheckReport::new(
        "case2",
        format!(
            "tau <= eta ({}) with i in A(tau) ∩ B(eta); every eta with i in B(eta)",
            coverage.describe()
        ),
    );
    let flips = |s: usize, i: usize| (p.rank(ctx.act(s, i)) - p.rank(s)).abs() == 1;
    par_check(&mut report, &pairs, |&(t, e), bad| {
        let mut cases = 0;
        for i in 1..=points {
            if ctx.class(t, i) != A || ctx.class(e, i) != B {
                continue;
            }
            cases += 1;
            let interval = p.between(t, e);
            for s in interval.ones() {
                if !interval.contains(ctx.act(s, i)) {
                    bad.push(format!(
                        "{}: s_i moves {} out",
                        pair_tag(ctx, t, e, i),
                        ctx.describe(s)
                    ));
                } else if !flips(s, i) {
                    bad.push(format!(
                        "{}: s_i keeps the rank of {}",
                        pair_tag(ctx, t, e, i),
                        ctx.describe(s)
                    ));
                }
            }
        }
        cases
    });
    let etas: Vec<usize> = ctx.ids().collect();
    par_check(&mut report, &etas, |&e, bad| {
        let mut cases = 0;
        for i in (1..=points).filter(|&i| ctx.class(e, i) == B) {
            cases += 1;
            let set: Vec<usize> = p
                .down_set(e)
                .ones()
                .filter(|&s| s != 0 && ctx.class(s, i) != C)
                .collect();
            for &s in &set {
                let image = ctx.act(s, i);
                let ok = set.binary_search(&image).is_ok() && ctx.act(image, i) == s && flips(s, i);
                if !ok {
                    bad.push(format!(
                        "eta={} i={i}: s_i fails at {}",
                        ctx.describe(e),
                        ctx.describe(s)
                    ));
                }
            }
        }
        cases
    });
    report
}

/// The unique maximum of `{sigma < eta : i in C(sigma)} ∪ {0̂}`, if any.
pub fn poset_kappa(ctx: &Context, eta: usize, i: usize) -> std::result::Result<usize, String> {
    let p = &ctx.poset;
    let set: Vec<usize> = p
        .down_set(eta)
        .ones()
        .filter(|&s| s == 0 || (s != eta && ctx.class(s, i) == C))
        .collect();
    let maxima: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&s| set.iter().all(|&r| r == s || !p.leq(s, r)))
        .collect();
    match maxima[..] {
        [k] => {
            let mut members = FixedBitSet::with_capacity(p.len());
            members.extend(set.iter().copied());
            if &members == p.down_set(k) {
                Ok(k)
            } else {
                Err(format!("S is not [0̂, {}]", ctx.describe(k)))
            }
        }
        _ => Err(format!("S has {} maximal elements", maxima.len())),
    }
}

/// The final step: `S` has a unique maximum κ, `S = [0̂, κ]`, `chi(S) = 0`,
/// and κ agrees with the diagram construction.
pub fn check_kappa(ctx: &Context, coverage: Coverage) -> Result<CheckReport> {
    let p = &ctx.poset;
    let cases: Vec<(usize, usize)> = ctx
        .ids()
        .flat_map(|e| {
            (1..=ctx.points())
                .filter(move |&i| ctx.class(e, i) == B)
                .map(move |i| (e, i))
        })
        .collect();
    let diagram_cases: Vec<(usize, usize)> = match coverage {
        Coverage::Exhaustive => cases.clone(),
        Coverage::Sampled { seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sample: Vec<(usize, usize)> = cases
                .choose_multiple(&mut rng, KAPPA_DIAGRAM_SAMPLES.min(cases.len()))
                .copied()
                .collect();
            sample.sort_unstable();
            sample
        }
    };
    let mut report = CheckReport::new(
        "kappa",
        format!(
            "every eta and i in B(eta) ({} pairs); diagram comparison on {}",
            cases.len(),
            if diagram_cases.len() == cases.len() {
                "all".to_string()
            } else {
                format!("{} sampled", diagram_cases.len())
            }
        ),
    );
    let diagram = |e: usize, i: usize| -> Result<Option<usize>> {
        if diagram_cases.binary_search(&(e, i)).is_err() {
            return Ok(None);
        }
        Ok(p.id_of(&kappa_diagram(ctx.matching(e), i)?))
    };
    let results: Vec<Result<(u64, Vec<String>)>> = {
        use rayon::prelude::*;
        cases
            .par_iter()
            .map(|&(e, i)| {
                let mut bad = Vec::new();
                let tag = format!("eta={} i={i}", ctx.describe(e));
                match poset_kappa(ctx, e, i) {
                    Err(why) => bad.push(format!("{tag}: {why}")),
                    Ok(k) => {
                        if p.chi_of_set(p.down_set(k)) != 0 {
                            bad.push(format!("{tag}: chi(S) != 0"));
                        }
                        if let Some(d) = diagram(e, i)? {
                            if d != k {
                                bad.push(format!(
                                    "{tag}: diagram gives {}, poset gives {}",
                                    ctx.describe(d),
                                    ctx.describe(k)
                                ));
                            }
                        }
                    }
                }
                Ok((1, bad))
            })
            .collect()
    };
    report.absorb(results.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::Matching;

    fn id(ctx: &Context, n: usize, chords: &[(usize, usize)]) -> usize {
        ctx.poset
            .id_of(&Matching::from_chords(n, chords).unwrap())
            .unwrap()
    }

    #[test]
    fn lifting_small_and_negative_control() {
        for n in 2..=3 {
            let ctx = Context::new(n);
            let r = check_lifting(&ctx, Coverage::Exhaustive, &bruhat_oracle);
            assert!(r.passed(), "{r}");
            let comparable = ctx.comparable_pairs(Coverage::Exhaustive).len() as u64;
            assert_eq!(r.cases_checked, comparable * 2 * n as u64);
            assert!(!check_lifting(&ctx, Coverage::Exhaustive, &length_oracle).passed());
        }
    }

    #[test]
    fn negated_order_satisfies_lifting() {
        // f !<= g forces f !<= s_i g and s_i f !<= g, so the negation lifts too
        for n in 2..=3 {
            let ctx = Context::new(n);
            let r = check_lifting(&ctx, Coverage::Exhaustive, &negated_bruhat);
            assert!(r.passed() && r.cases_checked > 0);
        }
    }

    #[test]
    fn lemma_main_single_trace() {
        let ctx = Context::new(3);
        let tau = id(&ctx, 3, &[(1, 2), (3, 4), (5, 6)]);
        let eta = id(&ctx, 3, &[(1, 4), (2, 5), (3, 6)]);
        assert!(ctx.leq(tau, eta));
        assert_eq!((ctx.class(tau, 2), ctx.class(eta, 2)), (A, B));
        assert!(ctx.leq(tau, ctx.act(eta, 2)));
        assert!(ctx.leq(ctx.act(tau, 2), eta));
    }

    #[test]
    fn lemma_checks_small() {
        for n in 2..=3 {
            let ctx = Context::new(n);
            for r in [
                check_lemma_main(&ctx, Coverage::Exhaustive),
                check_lemma_empty(&ctx, Coverage::Exhaustive),
                check_case1_sets(&ctx, Coverage::Exhaustive),
                check_case2_involution(&ctx, Coverage::Exhaustive),
                check_kappa(&ctx, Coverage::Exhaustive).unwrap(),
            ] {
                assert!(r.passed(), "{r}");
                assert!(r.cases_checked > 0);
            }
        }
    }

    #[test]
    fn lemma_main_universe_size() {
        let ctx = Context::new(3);
        let expected: u64 = ctx
            .comparable_pairs(Coverage::Exhaustive)
            .iter()
            .map(|&(t, e)| {
                (1..=6)
                    .filter(|&i| ctx.class(t, i) == A && ctx.class(e, i) == B)
                    .count() as u64
            })
            .sum();
        assert_eq!(
            check_lemma_main(&ctx, Coverage::Exhaustive).cases_checked,
            expected
        );
    }

    #[test]
    fn contrapositive_of_lemma_empty() {
        let ctx = Context::new(3);
        for (t, e) in ctx.comparable_pairs(Coverage::Exhaustive) {
            for i in 1..=6 {
                if ctx.class(e, i) == C {
                    assert_ne!(ctx.class(t, i), A);
                }
            }
        }
    }

    #[test]
    fn case2_bottom_example() {
        // eta = top_2, i = 1: (0̂, eta] minus C-elements is {top, s_1.top}
        let ctx = Context::new(2);
        let top = id(&ctx, 2, &[(1, 3), (2, 4)]);
        let set: Vec<usize> = ctx
            .poset
            .down_set(top)
            .ones()
            .filter(|&s| s != 0 && ctx.class(s, 1) != C)
            .collect();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&ctx.act(top, 1)));
    }

    #[test]
    fn kappa_examples() {
        let ctx = Context::new(2);
        let top = id(&ctx, 2, &[(1, 3), (2, 4)]);
        let k = poset_kappa(&ctx, top, 1).unwrap();
        assert_eq!(k, id(&ctx, 2, &[(1, 2), (3, 4)]));
        assert_eq!(ctx.poset.down_set(k).count_ones(..), 2);

        let ctx = Context::new(3);
        let top = id(&ctx, 3, &[(1, 4), (2, 5), (3, 6)]);
        let k = poset_kappa(&ctx, top, 1).unwrap();
        assert_eq!(k, id(&ctx, 3, &[(1, 2), (3, 5), (4, 6)]));
        assert_eq!(ctx.poset.rank(k), 1);
        let s: Vec<usize> = ctx.poset.down_set(k).ones().collect();
        let mut expected = vec![
            0,
            id(&ctx, 3, &[(1, 2), (3, 4), (5, 6)]),
            id(&ctx, 3, &[(1, 2), (3, 6), (4, 5)]),
            k,
        ];
        expected.sort_unstable();
        assert_eq!(s, expected);
    }

    #[test]
    fn sampled_lemmas_are_deterministic() {
        let ctx = Context::new(3);
        let coverage = Coverage::Sampled {
            seed: 11,
            cases: 300,
        };
        let a = check_lemma_main(&ctx, coverage);
        assert_eq!(a, check_lemma_main(&ctx, coverage));
        assert!(a.passed());
    }
}
