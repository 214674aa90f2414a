//! Executable checks of the Eulerian theorem and the statements its proof
//! rests on.  Every check returns a [`CheckReport`].

mod diagrams;
mod lemmas;
mod structure;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{embed, AffinePermutation};
use crate::error::{Error, Result};
use crate::matching::{BoundaryClass, Matching};
use crate::poset::GradedPoset;
use crate::report::CheckReport;

pub use diagrams::{check_confluence, check_moreuncrossing, check_round_trip};
pub use lemmas::{
    bruhat_oracle, check_case1_sets, check_case2_involution, check_kappa, check_lemma_empty,
    check_lemma_main, check_lifting, length_oracle, negated_bruhat, poset_kappa, Oracle,
};
pub use structure::{
    catalan, check_catalan, check_chi_intervals, check_duality, check_eulerian, check_p3_figure,
    check_rank_length, check_shelling, check_thin, check_trichotomy, check_trichotomy_c,
};

/// Minimum number of sampled cases for a non-exhaustive check.
pub const SAMPLE_CASES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive,
    Sampled { seed: u64, cases: usize },
}

impl Coverage {
    /// Exhaustive up to `n = 4`, sampled beyond.
    pub fn for_n(n: usize, seed: u64) -> Self {
        if n <= 4 {
            Coverage::Exhaustive
        } else {
            Coverage::Sampled {
                seed,
                cases: SAMPLE_CASES,
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            Coverage::Exhaustive => "exhaustive".into(),
            Coverage::Sampled { seed, cases } => format!("{cases} samples, seed {seed}"),
        }
    }
}

/// `P̂_n` with the per-element data every check needs.
pub struct Context {
    pub n: usize,
    pub poset: GradedPoset,
    embeds: Vec<Option<AffinePermutation>>,
    classes: Vec<Vec<BoundaryClass>>,
    acts: Vec<Vec<usize>>,
}

impl Context {
    pub fn new(n: usize) -> Self {
        let poset = GradedPoset::build(n, true);
        let points = 2 * n;
        let mut embeds = vec![None];
        let mut classes = vec![Vec::new()];
        let mut acts = vec![Vec::new()];
        for id in 1..poset.len() {
            let m = poset.matching(id).expect("non-bottom ids carry matchings");
            embeds.push(Some(embed(m)));
            classes.push((1..=points).map(|i| m.abc_class(i)).collect());
            acts.push(
                (1..=points)
                    .map(|i| poset.id_of(&m.simple_act(i)).expect("closed under s_i"))
                    .collect(),
            );
        }
        Context {
            n,
            poset,
            embeds,
            classes,
            acts,
        }
    }

    pub fn points(&self) -> usize {
        2 * self.n
    }

    /// Ids of the matchings (everything except the bottom).
    pub fn ids(&self) -> std::ops::Range<usize> {
        1..self.poset.len()
    }

    pub fn matching(&self, id: usize) -> &Matching {
        self.poset.matching(id).expect("matching id")
    }

    pub fn embedding(&self, id: usize) -> &AffinePermutation {
        self.embeds[id].as_ref().expect("matching id")
    }

    pub fn class(&self, id: usize, i: usize) -> BoundaryClass {
        self.classes[id][i - 1]
    }

    /// Id of `s_i . tau`.
    pub fn act(&self, id: usize, i: usize) -> usize {
        self.acts[id][i - 1]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn describe(&self, id: usize) -> String {
        self.poset.describe(id)
    }

    /// Pairs of matching ids `x <= y`, all of them or a seeded sample.
    pub fn comparable_pairs(&self, coverage: Coverage) -> Vec<(usize, usize)> {
        match coverage {
            Coverage::Exhaustive => self
                .ids()
                .flat_map(|y| {
                    self.poset
                        .down_set(y)
                        .ones()
                        .filter(|&x| x != 0)
                        .map(move |x| (x, y))
                })
                .collect(),
            Coverage::Sampled { seed, cases } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..cases)
                    .map(|_| {
                        let y = rng.gen_range(self.ids());
                        let below: Vec<usize> =
                            self.poset.down_set(y).ones().filter(|&x| x != 0).collect();
                        (below[rng.gen_range(0..below.len())], y)
                    })
                    .collect()
            }
        }
    }
}

/// Names accepted by [`run_check`], in default report order.
pub const CHECK_NAMES: &[&str] = &[
    "eulerian",
    "chi",
    "thin",
    "catalan",
    "figure",
    "duality",
    "trichotomy",
    "trichotomy-c",
    "rank-length",
    "lifting",
    "lemma-main",
    "lemma-empty",
    "case1",
    "case2",
    "kappa",
    "round-trip",
    "confluence",
    "moreuncrossing",
    "shelling",
];

pub const LEMMA_CHECKS: &[&str] = &["lifting", "lemma-main", "lemma-empty", "case1", "case2"];

/// The suite run when no checks are named.
pub fn default_checks(n: usize) -> Vec<&'static str> {
    let mut out = vec!["eulerian", "thin", "duality"];
    out.extend_from_slice(LEMMA_CHECKS);
    out.extend_from_slice(&["kappa", "confluence"]);
    if n == 3 {
        out.push("shelling");
    }
    out
}

/// Expands `lemmas` and rejects unknown names.
pub fn expand_checks(names: &[String]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for name in names {
        if name == "lemmas" {
            out.extend_from_slice(LEMMA_CHECKS);
        } else if let Some(&known) = CHECK_NAMES.iter().find(|&&k| k == name) {
            out.push(known);
        } else {
            return Err(Error::UnknownCheck(name.clone()));
        }
    }
    Ok(out)
}

pub fn run_check(name: &str, ctx: &Context, seed: u64) -> Result<CheckReport> {
    let coverage = Coverage::for_n(ctx.n, seed);
    Ok(match name {
        "eulerian" => check_eulerian(ctx)?,
        "chi" => check_chi_intervals(ctx)?,
        "thin" => check_thin(ctx),
        "catalan" => check_catalan(ctx.n),
        "figure" => check_p3_figure(),
        "duality" => check_duality(ctx, &bruhat_oracle),
        "trichotomy" => check_trichotomy(ctx),
        "trichotomy-c" => check_trichotomy_c(ctx),
        "rank-length" => check_rank_length(ctx),
        "lifting" => check_lifting(ctx, coverage, &bruhat_oracle),
        "lemma-main" => check_lemma_main(ctx, coverage),
        "lemma-empty" => check_lemma_empty(ctx, coverage),
        "case1" => check_case1_sets(ctx, coverage),
        "case2" => check_case2_involution(ctx, coverage),
        "kappa" => check_kappa(ctx, coverage)?,
        "round-trip" => check_round_trip(ctx)?,
        "confluence" => check_confluence(ctx.n, seed, 100)?,
        "moreuncrossing" => check_moreuncrossing(ctx, seed)?,
        "shelling" => check_shelling(ctx)?,
        other => return Err(Error::UnknownCheck(other.to_string())),
    })
}

/// Splits `items` across threads and folds the per-item results in order.
pub(crate) fn par_check<T: Sync>(
    report: &mut CheckReport,
    items: &[T],
    check: impl Fn(&T, &mut Vec<String>) -> u64 + Sync,
) {
    use rayon::prelude::*;
    let parts: Vec<(u64, Vec<String>)> = items
        .par_iter()
        .map(|item| {
            let mut bad = Vec::new();
            let cases = check(item, &mut bad);
            (cases, bad)
        })
        .collect();
    report.absorb(parts);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_tables_agree_with_matchings() {
        let ctx = Context::new(3);
        for id in ctx.ids() {
            for i in 1..=6 {
                assert_eq!(ctx.class(id, i), ctx.matching(id).abc_class(i));
                assert_eq!(
                    ctx.matching(ctx.act(id, i)),
                    &ctx.matching(id).simple_act(i)
                );
            }
        }
    }

    #[test]
    fn sampled_pairs_are_comparable_and_deterministic() {
        let ctx = Context::new(3);
        let coverage = Coverage::Sampled { seed: 3, cases: 50 };
        let a = ctx.comparable_pairs(coverage);
        assert_eq!(a, ctx.comparable_pairs(coverage));
        assert!(a.iter().all(|&(x, y)| ctx.leq(x, y)));
        // strict pairs above the bottom are traded for the reflexive pairs
        let exhaustive = ctx.comparable_pairs(Coverage::Exhaustive).len() as u64;
        assert_eq!(exhaustive, ctx.poset.comparable_pair_count());
    }

    #[test]
    fn unknown_check_rejected() {
        assert!(expand_checks(&["nope".to_string()]).is_err());
        assert_eq!(
            expand_checks(&["lemmas".to_string()]).unwrap().len(),
            LEMMA_CHECKS.len()
        );
    }
}
