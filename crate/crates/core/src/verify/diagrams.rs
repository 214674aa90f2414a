use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{par_check, Context};
use crate::error::Result;
use crate::matching::{enumerate_matchings, Matching};
use crate::medial::MedialGraph;
use crate::report::CheckReport;

/// Random multi-smoothings added per run at `n = 4`.
const CONFLUENCE_EXTRA: usize = 200;
const MOREUNCROSSING_TRIALS: usize = 1000;

/// `to_matching(from_matching(tau)) = tau`, with `c(tau)` crossings and no lens.
pub fn check_round_trip(ctx: &Context) -> Result<CheckReport> {
    let ids: Vec<usize> = ctx.ids().collect();
    let mut report = CheckReport::new("round-trip", format!("every tau in P_{}", ctx.n));
    par_check(&mut report, &ids, |&t, bad| {
        let tau = ctx.matching(t);
        let g = MedialGraph::from_matching(tau);
        if g.crossing_count() != tau.crossing_number() || !g.is_lensless() {
            bad.push(format!(
                "{tau}: drawing has {} crossings",
                g.crossing_count()
            ));
        }
        match g.to_matching() {
            Ok(back) if &back == tau => {}
            Ok(back) => bad.push(format!("{tau} came back as {back}")),
            Err(e) => bad.push(format!("{tau}: {e}")),
        }
        1
    });
    Ok(report)
}

/// Diagrams that need reducing: every single smoothing leaving a lens for
/// `n <= 3`, plus seeded multi-smoothings of `P_4`.
fn confluence_fixtures(n: usize, seed: u64) -> Result<Vec<MedialGraph>> {
    let mut out = Vec::new();
    for m in 1..=n.min(3) {
        for tau in enumerate_matchings(m) {
            let g = MedialGraph::from_matching(&tau);
            for v in g.crossings() {
                for dir in 0..2 {
                    let r = g.resolve_crossing(v, dir)?;
                    if !r.is_lensless() {
                        out.push(r);
                    }
                }
            }
        }
    }
    if n >= 4 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<Matching> = enumerate_matchings(4)
            .into_iter()
            .filter(|t| t.crossing_number() >= 2)
            .collect();
        let target = out.len() + CONFLUENCE_EXTRA;
        while out.len() < target {
            let tau = pool.choose(&mut rng).expect("nonempty");
            let g = MedialGraph::from_matching(tau);
            let mut crossings: Vec<usize> = g.crossings().collect();
            crossings.shuffle(&mut rng);
            let k = rng.gen_range(2..=crossings.len());
            let choices: Vec<(usize, u8)> = crossings[..k]
                .iter()
                .map(|&v| (v, rng.gen_range(0..2)))
                .collect();
            let r = g.resolve_many(&choices)?;
            if !r.is_lensless() {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Randomized reduction orders of each fixture all reach the same matching.
pub fn check_confluence(n: usize, seed: u64, runs: usize) -> Result<CheckReport> {
    let fixtures = confluence_fixtures(n, seed)?;
    let mut report = CheckReport::new(
        "confluence",
        format!(
            "{} diagrams x {runs} randomized move orders, seed {seed}",
            fixtures.len()
        ),
    );
    let indexed: Vec<(usize, &MedialGraph)> = fixtures.iter().enumerate().collect();
    par_check(&mut report, &indexed, |&(k, g), bad| {
        let expected = match g.to_matching() {
            Ok(m) => m,
            Err(e) => {
                bad.push(format!("fixture {k}: {e}"));
                return 0;
            }
        };
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        for run in 0..runs {
            let got = g
                .reduce_randomized(&mut rng)
                .and_then(|r| Matching::new(r.strand_partners()));
            match got {
                Ok(m) if m == expected => {}
                Ok(m) => bad.push(format!("fixture {k} run {run}: {m} vs {expected}")),
                Err(e) => bad.push(format!("fixture {k} run {run}: {e}")),
            }
        }
        runs as u64
    });
    Ok(report)
}

/// Smoothing any set of crossings of a lensless diagram of `tau` gives a
/// matching `<= tau`; every keep/smooth assignment for `n <= 3`, seeded
/// random ones beyond.
pub fn check_moreuncrossing(ctx: &Context, seed: u64) -> Result<CheckReport> {
    let mut trials: Vec<(usize, Vec<(usize, u8)>)> = Vec::new();
    let universe;
    if ctx.n <= 3 {
        for t in ctx.ids() {
            let crossings = MedialGraph::from_matching(ctx.matching(t)).crossings();
            for code in 0..3usize.pow(crossings.len() as u32) {
                let mut rest = code;
                let mut choices = Vec::new();
                for v in crossings.clone() {
                    if rest % 3 > 0 {
                        choices.push((v, (rest % 3 - 1) as u8));
                    }
                    rest /= 3;
                }
                trials.push((t, choices));
            }
        }
        universe = format!("every assignment on P_{}", ctx.n);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ids: Vec<usize> = ctx.ids().collect();
        for _ in 0..MOREUNCROSSING_TRIALS {
            let t = *ids.choose(&mut rng).expect("nonempty");
            let crossings = MedialGraph::from_matching(ctx.matching(t)).crossings();
            let choices = crossings.filter_map(|v| match rng.gen_range(0..3u8) {
                0 => None,
                d => Some((v, d - 1)),
            });
            trials.push((t, choices.collect()));
        }
        universe = format!(
            "{MOREUNCROSSING_TRIALS} random assignments on P_{}, seed {seed}",
            ctx.n
        );
    }
    let mut report = CheckReport::new("moreuncrossing", universe);
    par_check(&mut report, &trials, |(t, choices), bad| {
        let tau = ctx.matching(*t);
        let sigma = MedialGraph::from_matching(tau)
            .resolve_many(choices)
            .and_then(|g| g.to_matching());
        match sigma {
            Ok(s) => {
                let below = ctx.poset.id_of(&s).is_some_and(|s| ctx.leq(s, *t));
                if !below {
                    bad.push(format!("{tau} smoothed by {choices:?} gives {s}"));
                }
            }
            Err(e) => bad.push(format!("{tau} smoothed by {choices:?}: {e}")),
        }
        1
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_checks_small() {
        for n in 1..=3 {
            let ctx = Context::new(n);
            assert!(check_round_trip(&ctx).unwrap().passed());
            let r = check_moreuncrossing(&ctx, 0).unwrap();
            assert!(r.passed(), "{r}");
        }
        let r = check_confluence(3, 0, 5).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.cases_checked > 0);
    }

    #[test]
    fn moreuncrossing_assignment_count() {
        // top_2 has one crossing: keep it, or either smoothing
        let ctx = Context::new(2);
        let r = check_moreuncrossing(&ctx, 0).unwrap();
        assert_eq!(r.cases_checked, 2 + 3);
    }
}
