use std::collections::BTreeMap;

use serde::Serialize;

use super::GradedPoset;
use crate::error::{Error, Result};
use crate::matching::{dihedral_relabelings, Matching};
use crate::report::CheckReport;

/// Whether consecutive equal labels count as increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strictness {
    Weak,
    Strict,
}

impl Strictness {
    fn increasing(self, a: usize, b: usize) -> bool {
        match self {
            Strictness::Weak => a <= b,
            Strictness::Strict => a < b,
        }
    }
}

/// Labels on Hasse edges; a label is an index into `symbols`, which are
/// listed in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    symbols: Vec<String>,
    labels: BTreeMap<(usize, usize), usize>,
}

impl EdgeLabeling {
    pub fn new(symbols: Vec<String>) -> Self {
        EdgeLabeling {
            symbols,
            labels: BTreeMap::new(),
        }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn set(&mut self, lower: usize, upper: usize, symbol: usize) {
        assert!(symbol < self.symbols.len(), "unknown symbol {symbol}");
        self.labels.insert((lower, upper), symbol);
    }

    pub fn get(&self, lower: usize, upper: usize) -> Result<usize> {
        self.labels
            .get(&(lower, upper))
            .copied()
            .ok_or(Error::UnlabeledEdge(lower, upper))
    }

    pub fn symbol(&self, lower: usize, upper: usize) -> Result<&str> {
        Ok(&self.symbols[self.get(lower, upper)?])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn chains(&self, poset: &GradedPoset, x: usize, y: usize) -> Vec<Vec<usize>> {
        fn walk(
            l: &EdgeLabeling,
            p: &GradedPoset,
            at: usize,
            y: usize,
            word: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if at == y {
                out.push(word.clone());
                return;
            }
            for &u in p.upper_covers(at) {
                if p.leq(u, y) {
                    word.push(l.labels[&(at, u)]);
                    walk(l, p, u, y, word, out);
                    word.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, poset, x, y, &mut Vec::new(), &mut out);
        out
    }

    /// EL test: every interval has exactly one increasing maximal chain and
    /// its label word precedes every other chain's word.
    pub fn el_check(&self, poset: &GradedPoset, strictness: Strictness) -> Result<CheckReport> {
        for &(a, b) in poset.covers() {
            self.get(a, b)?;
        }
        let mut report = CheckReport::new(
            "el-labeling",
            format!(
                "all x < y in a poset of {} elements ({strictness:?})",
                poset.len()
            ),
        );
        for (x, y) in poset.strict_pairs().collect::<Vec<_>>() {
            let words = self.chains(poset, x, y);
            let increasing: Vec<&Vec<usize>> = words
                .iter()
                .filter(|w| w.windows(2).all(|p| strictness.increasing(p[0], p[1])))
                .collect();
            let least = words.iter().min().expect("x < y has a chain");
            let ok = increasing.len() == 1
                && increasing[0] == least
                && words.iter().filter(|w| *w == least).count() == 1;
            report.expect(ok, || {
                format!(
                    "[{}, {}]: {} chains, {} increasing, least word {}",
                    poset.describe(x),
                    poset.describe(y),
                    words.len(),
                    increasing.len(),
                    self.word(least)
                )
            });
        }
        Ok(report)
    }

    fn word(&self, w: &[usize]) -> String {
        let parts: Vec<&str> = w.iter().map(|&s| self.symbols[s].as_str()).collect();
        parts.join(" ")
    }
}

const SYMBOLS: [&str; 5] = ["α1", "β1", "β2", "β3", "α2"];

/// The five noncrossing matchings of six points in symbol order.
fn base_symbols() -> [Matching; 5] {
    let m = |c: &[(usize, usize)]| Matching::from_chords(3, c).expect("valid chords");
    [
        m(&[(1, 2), (3, 4), (5, 6)]),
        m(&[(1, 2), (3, 6), (4, 5)]),
        m(&[(1, 4), (2, 3), (5, 6)]),
        m(&[(1, 6), (2, 5), (3, 4)]),
        m(&[(1, 6), (2, 3), (4, 5)]),
    ]
}

fn unique<T: Copy>(candidates: Vec<T>, rule: impl FnOnce() -> String) -> Result<T> {
    match candidates[..] {
        [one] => Ok(one),
        _ => Err(Error::LabelingRule(format!(
            "{} ({} candidates)",
            rule(),
            candidates.len()
        ))),
    }
}

/// The labeling of `P̂_3` by the symbols α1 < β1 < β2 < β3 < α2.
pub fn p3_labeling(poset: &GradedPoset) -> Result<EdgeLabeling> {
    p3_labeling_relabeled(poset, &[1, 2, 3, 4, 5, 6])
}

/// As [`p3_labeling`], with the symbol matchings moved by a boundary
/// relabeling.
pub fn p3_labeling_relabeled(poset: &GradedPoset, perm: &[usize]) -> Result<EdgeLabeling> {
    if poset.n() != 3 || !poset.includes_bottom() {
        return Err(Error::LabelingRule("expected P̂_3".into()));
    }
    let mut symbol_ids = [0usize; 5];
    for (k, m) in base_symbols().iter().enumerate() {
        symbol_ids[k] = poset
            .id_of(&m.relabel(perm))
            .ok_or(Error::Internal("symbol matching missing".into()))?;
    }
    let symbol_of = |id: usize| symbol_ids.iter().position(|&s| s == id);
    let betas = &symbol_ids[1..4];
    let top = poset.top().ok_or(Error::Unbounded)?;
    let mut labeling = EdgeLabeling::new(SYMBOLS.iter().map(|s| s.to_string()).collect());

    for &(lower, upper) in poset.covers() {
        let symbol = match poset.rank(upper) {
            0 => symbol_of(upper).ok_or(Error::Internal("atom is not a symbol".into()))?,
            1 => {
                let other = unique(
                    poset
                        .lower_covers(upper)
                        .iter()
                        .copied()
                        .filter(|&a| a != lower)
                        .collect(),
                    || format!("second atom below {}", poset.describe(upper)),
                )?;
                symbol_of(other).expect("atoms are symbols")
            }
            _ if upper == top => {
                let beta = unique(
                    betas
                        .iter()
                        .copied()
                        .filter(|&b| !poset.leq(b, lower))
                        .collect(),
                    || format!("β not below {}", poset.describe(lower)),
                )?;
                symbol_of(beta).unwrap()
            }
            2 => {
                let beta = unique(
                    betas
                        .iter()
                        .copied()
                        .filter(|&b| poset.leq(b, upper) && !poset.leq(b, lower))
                        .collect(),
                    || {
                        format!(
                            "β below {} and not below {}",
                            poset.describe(upper),
                            poset.describe(lower)
                        )
                    },
                )?;
                symbol_of(beta).unwrap()
            }
            r => {
                return Err(Error::LabelingRule(format!(
                    "unexpected cover into rank {r}"
                )))
            }
        };
        labeling.set(lower, upper, symbol);
    }
    Ok(labeling)
}

#[derive(Clone, Debug)]
pub struct P3Shelling {
    /// Boundary relabeling applied to the symbol matchings.
    pub relabeling: Vec<usize>,
    pub labeling: EdgeLabeling,
    pub report: CheckReport,
}

/// Tries the labeling under each dihedral relabeling, identity first, and
/// returns the first one passing `el_check`; if none passes, the identity
/// attempt is returned.
pub fn find_p3_shelling(poset: &GradedPoset, strictness: Strictness) -> Result<P3Shelling> {
    let mut first = None;
    for perm in dihedral_relabelings(6) {
        let labeling = p3_labeling_relabeled(poset, &perm)?;
        let report = labeling.el_check(poset, strictness)?;
        let attempt = P3Shelling {
            relabeling: perm,
            labeling,
            report,
        };
        if attempt.report.passed() {
            return Ok(attempt);
        }
        first.get_or_insert(attempt);
    }
    Ok(first.expect("twelve relabelings tried"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(ranks: Vec<i32>, edges: &[(usize, usize, usize)]) -> (GradedPoset, EdgeLabeling) {
        let p = GradedPoset::from_covers(ranks, edges.iter().map(|&(a, b, _)| (a, b)).collect())
            .unwrap();
        let mut l = EdgeLabeling::new(vec!["a".into(), "b".into(), "c".into()]);
        for &(a, b, s) in edges {
            l.set(a, b, s);
        }
        (p, l)
    }

    #[test]
    fn chain_with_increasing_labels() {
        let (p, l) = labeled(vec![0, 1, 2, 3], &[(0, 1, 0), (1, 2, 1), (2, 3, 2)]);
        assert!(l.el_check(&p, Strictness::Strict).unwrap().passed());
        assert_eq!(l.el_check(&p, Strictness::Weak).unwrap().cases_checked, 6);
    }

    #[test]
    fn diamond_with_two_increasing_chains_fails() {
        let (p, l) = labeled(
            vec![0, 1, 1, 2],
            &[(0, 1, 0), (1, 3, 1), (0, 2, 0), (2, 3, 2)],
        );
        assert!(!l.el_check(&p, Strictness::Weak).unwrap().passed());
        let (p, l) = labeled(
            vec![0, 1, 1, 2],
            &[(0, 1, 0), (1, 3, 1), (0, 2, 1), (2, 3, 0)],
        );
        assert!(l.el_check(&p, Strictness::Weak).unwrap().passed());
    }

    #[test]
    fn unlabeled_edge_rejected() {
        let (p, mut l) = labeled(vec![0, 1], &[(0, 1, 0)]);
        l.labels.clear();
        assert_eq!(
            l.el_check(&p, Strictness::Weak),
            Err(Error::UnlabeledEdge(0, 1))
        );
    }

    #[test]
    fn p3_labeling_is_total_and_shells() {
        let p = GradedPoset::build(3, true);
        let l = p3_labeling(&p).unwrap();
        assert_eq!(l.len(), 32);
        let shelling = find_p3_shelling(&p, Strictness::Weak).unwrap();
        assert!(shelling.report.passed(), "{}", shelling.report);
    }

    #[test]
    fn p3_labeling_rejects_other_posets() {
        assert!(p3_labeling(&GradedPoset::build(2, true)).is_err());
    }
}
