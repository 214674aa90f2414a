//! Finite graded posets stored as rank-stratified bitset reachability.
//!
//! Every element keeps its down-set and up-set (both containing itself) as a
//! bitset, so `leq` is a bit test and an interval is the intersection of an
//! up-set with a down-set.

mod export;
mod labeling;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matching::{enumerate_matchings, Matching};
use crate::report::CheckReport;

pub use export::{ElementJson, PosetJson};
pub use labeling::{
    find_p3_shelling, p3_labeling, p3_labeling_relabeled, EdgeLabeling, P3Shelling, Strictness,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    /// The adjoined minimum, of rank -1.
    Bottom,
    Matching(Matching),
    /// A bare element of a poset given by its covers.
    Abstract(usize),
}

impl Element {
    pub fn matching(&self) -> Option<&Matching> {
        match self {
            Element::Matching(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Element::Bottom)
    }
}

#[derive(Clone, Debug)]
pub struct GradedPoset {
    n: usize,
    includes_bottom: bool,
    elements: Vec<Element>,
    ranks: Vec<i32>,
    covers: Vec<(usize, usize)>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    index: HashMap<Matching, usize>,
}

impl GradedPoset {
    /// `P_n`, or `P̂_n` when `include_bottom` is set (the bottom gets id 0).
    pub fn build(n: usize, include_bottom: bool) -> Self {
        assert!(n >= 1, "n must be positive");
        let matchings = enumerate_matchings(n);
        let offset = usize::from(include_bottom);
        let mut elements = Vec::with_capacity(matchings.len() + offset);
        let mut ranks = Vec::with_capacity(matchings.len() + offset);
        if include_bottom {
            elements.push(Element::Bottom);
            ranks.push(-1);
        }
        let mut index = HashMap::with_capacity(matchings.len());
        for (k, m) in matchings.iter().enumerate() {
            index.insert(m.clone(), k + offset);
            ranks.push(m.crossing_number() as i32);
        }
        let cover_lists: Vec<Vec<(usize, usize)>> = matchings
            .par_iter()
            .enumerate()
            .map(|(k, m)| {
                let upper = k + offset;
                m.covers_down()
                    .iter()
                    .map(|lower| (index[lower], upper))
                    .collect()
            })
            .collect();
        let mut covers: Vec<(usize, usize)> = cover_lists.into_iter().flatten().collect();
        if include_bottom {
            for (k, m) in matchings.iter().enumerate() {
                if m.is_noncrossing() {
                    covers.push((0, k + offset));
                }
            }
        }
        elements.extend(matchings.into_iter().map(Element::Matching));
        let mut poset =
            Self::assemble(elements, ranks, covers).expect("uncrossing covers are graded");
        poset.n = n;
        poset.includes_bottom = include_bottom;
        poset.index = index;
        poset
    }

    /// An abstract graded poset from ranks and cover pairs `(lower, upper)`.
    pub fn from_covers(ranks: Vec<i32>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let elements = (0..ranks.len()).map(Element::Abstract).collect();
        Self::assemble(elements, ranks, covers)
    }

    fn assemble(
        elements: Vec<Element>,
        ranks: Vec<i32>,
        mut covers: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let size = elements.len();
        covers.sort_unstable();
        covers.dedup();
        let mut lower = vec![Vec::new(); size];
        let mut upper = vec![Vec::new(); size];
        for &(a, b) in &covers {
            if a >= size || b >= size {
                return Err(Error::UnknownElement(a.max(b)));
            }
            if ranks[b] != ranks[a] + 1 {
                return Err(Error::Internal(format!(
                    "cover {a} < {b} changes rank from {} to {}",
                    ranks[a], ranks[b]
                )));
            }
            lower[b].push(a);
            upper[a].push(b);
        }
        let mut by_rank: Vec<usize> = (0..size).collect();
        by_rank.sort_by_key(|&x| (ranks[x], x));

        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for &x in &by_rank {
            let mut set = FixedBitSet::with_capacity(size);
            set.insert(x);
            for &l in &lower[x] {
                set.union_with(&down[l]);
            }
            down[x] = set;
        }
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for &x in by_rank.iter().rev() {
            let mut set = FixedBitSet::with_capacity(size);
            set.insert(x);
            for &u in &upper[x] {
                set.union_with(&up[u]);
            }
            up[x] = set;
        }
        Ok(GradedPoset {
            n: 0,
            includes_bottom: false,
            elements,
            ranks,
            covers,
            lower,
            upper,
            down,
            up,
            index: HashMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn includes_bottom(&self) -> bool {
        self.includes_bottom
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: usize) -> &Element {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn rank(&self, id: usize) -> i32 {
        self.ranks[id]
    }

    pub fn ranks(&self) -> &[i32] {
        &self.ranks
    }

    /// Sorted `(lower, upper)` pairs.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, id: usize) -> &[usize] {
        &self.lower[id]
    }

    pub fn upper_covers(&self, id: usize) -> &[usize] {
        &self.upper[id]
    }

    pub fn id_of(&self, m: &Matching) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn matching(&self, id: usize) -> Option<&Matching> {
        self.elements[id].matching()
    }

    pub fn check_id(&self, id: usize) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(id))
        }
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.lower[x].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.upper[x].is_empty())
            .collect()
    }

    pub fn bottom(&self) -> Option<usize> {
        match self.minimal_elements()[..] {
            [x] => Some(x),
            _ => None,
        }
    }

    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements()[..] {
            [x] => Some(x),
            _ => None,
        }
    }

    /// Element counts per rank, from the lowest rank upward.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let (Some(&lo), Some(&hi)) = (self.ranks.iter().min(), self.ranks.iter().max()) else {
            return Vec::new();
        };
        let mut sizes = vec![0; (hi - lo + 1) as usize];
        for &r in &self.ranks {
            sizes[(r - lo) as usize] += 1;
        }
        sizes
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `[x, y]` as a bitset; errors unless `x <= y`.
    pub fn interval(&self, x: usize, y: usize) -> Result<FixedBitSet> {
        self.check_id(x)?;
        self.check_id(y)?;
        if !self.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        Ok(self.between(x, y))
    }

    /// `up(x) ∩ down(y)`: the interval when `x <= y`, empty otherwise.
    pub fn between(&self, x: usize, y: usize) -> FixedBitSet {
        let mut set = self.up[x].clone();
        set.intersect_with(&self.down[y]);
        set
    }

    pub fn interval_ids(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        Ok(self.interval(x, y)?.ones().collect())
    }

    /// `sum (-1)^rank` over a set of elements.
    pub fn chi<'a>(&self, ids: impl IntoIterator<Item = &'a usize>) -> i64 {
        ids.into_iter().map(|&x| sign(self.ranks[x])).sum()
    }

    pub fn chi_of_set(&self, set: &FixedBitSet) -> i64 {
        set.ones().map(|x| sign(self.ranks[x])).sum()
    }

    /// `chi([x, y])` computed with popcounts against rank-parity masks.
    pub fn chi_of_interval(&self, x: usize, y: usize, even_mask: &FixedBitSet) -> i64 {
        let interval = self.between(x, y);
        let even = interval.intersection_count(even_mask) as i64;
        let total = interval.count_ones(..) as i64;
        even - (total - even)
    }

    pub fn even_rank_mask(&self) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.len());
        for (x, &r) in self.ranks.iter().enumerate() {
            if r.rem_euclid(2) == 0 {
                mask.insert(x);
            }
        }
        mask
    }

    /// Ids ordered by rank, then id.
    fn rank_order(&self, set: &FixedBitSet) -> Vec<usize> {
        let mut ids: Vec<usize> = set.ones().collect();
        ids.sort_by_key(|&z| (self.ranks[z], z));
        ids
    }

    /// `mu(x, y)` for every `y >= x`; entries for other ids are `None`.
    pub fn mobius_row(&self, x: usize) -> Vec<Option<i64>> {
        let mut row = vec![None; self.len()];
        for y in self.rank_order(&self.up[x]) {
            if y == x {
                row[y] = Some(1);
                continue;
            }
            let mut interval = self.up[x].clone();
            interval.intersect_with(&self.down[y]);
            let sum: i64 = interval
                .ones()
                .filter(|&z| z != y)
                .map(|z| row[z].expect("lower rank first"))
                .sum();
            row[y] = Some(-sum);
        }
        row
    }

    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        self.check_id(x)?;
        self.check_id(y)?;
        if !self.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        Ok(self.mobius_row(x)[y].expect("y is above x"))
    }

    /// Pairs `(x, y)` with `x < y`, in id order.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |x| {
            self.up[x]
                .ones()
                .filter(move |&y| y != x)
                .map(move |y| (x, y))
        })
    }

    pub fn comparable_pair_count(&self) -> u64 {
        self.up.iter().map(|s| s.count_ones(..) as u64 - 1).sum()
    }

    pub fn describe(&self, id: usize) -> String {
        match &self.elements[id] {
            Element::Bottom => format!("#{id} 0̂"),
            Element::Matching(m) => format!("#{id} {m} (rank {})", self.ranks[id]),
            Element::Abstract(_) => format!("#{id} (rank {})", self.ranks[id]),
        }
    }

    /// Eulerian test: `mu(x, y) = (-1)^(rank y - rank x)` for all `x < y`.
    pub fn is_eulerian(&self) -> Result<CheckReport> {
        if self.bottom().is_none() || self.top().is_none() {
            return Err(Error::Unbounded);
        }
        let mut report = CheckReport::new(
            "eulerian",
            format!("all x < y in a poset of {} elements", self.len()),
        );
        let parts: Vec<(u64, Vec<String>)> = (0..self.len())
            .into_par_iter()
            .map(|x| {
                let row = self.mobius_row(x);
                let mut cases = 0;
                let mut bad = Vec::new();
                for y in self.up[x].ones().filter(|&y| y != x) {
                    cases += 1;
                    let mu = row[y].unwrap();
                    let expected = sign(self.ranks[y] - self.ranks[x]);
                    if mu != expected {
                        bad.push(format!(
                            "mu({}, {}) = {mu}, expected {expected}",
                            self.describe(x),
                            self.describe(y)
                        ));
                    }
                }
                (cases, bad)
            })
            .collect();
        report.absorb(parts);
        Ok(report)
    }

    /// The same property by counting odd and even ranks in each interval.
    pub fn eulerian_by_parity(&self) -> Result<CheckReport> {
        if self.bottom().is_none() || self.top().is_none() {
            return Err(Error::Unbounded);
        }
        let mut report = CheckReport::new(
            "eulerian-parity",
            format!("all x < y in a poset of {} elements", self.len()),
        );
        let even = self.even_rank_mask();
        let parts: Vec<(u64, Vec<String>)> = (0..self.len())
            .into_par_iter()
            .map(|x| {
                let mut cases = 0;
                let mut bad = Vec::new();
                for y in self.up[x].ones().filter(|&y| y != x) {
                    cases += 1;
                    let chi = self.chi_of_interval(x, y, &even);
                    if chi != 0 {
                        bad.push(format!(
                            "chi([{}, {}]) = {chi}",
                            self.describe(x),
                            self.describe(y)
                        ));
                    }
                }
                (cases, bad)
            })
            .collect();
        report.absorb(parts);
        Ok(report)
    }

    /// Every interval of length two has exactly two middle elements.
    pub fn is_thin(&self) -> CheckReport {
        let mut report = CheckReport::new("thin", "all intervals [x, y] with rank y - rank x = 2");
        for x in 0..self.len() {
            for y in self.up[x]
                .ones()
                .filter(|&y| self.ranks[y] == self.ranks[x] + 2)
            {
                let size = self.between(x, y).count_ones(..);
                report.expect(size == 4, || {
                    format!(
                        "[{}, {}] has {} middle elements",
                        self.describe(x),
                        self.describe(y),
                        size - 2
                    )
                });
            }
        }
        report
    }
}

pub(crate) fn sign(rank: i32) -> i64 {
    if rank.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(len: usize) -> GradedPoset {
        let ranks = (0..=len as i32).collect();
        let covers = (0..len).map(|k| (k, k + 1)).collect();
        GradedPoset::from_covers(ranks, covers).unwrap()
    }

    #[test]
    fn build_examples() {
        let p3 = GradedPoset::build(3, true);
        assert_eq!(p3.rank_sizes(), vec![1, 5, 6, 3, 1]);
        assert_eq!(p3.covers().len(), 32);

        let p2 = GradedPoset::build(2, false);
        assert_eq!(p2.len(), 3);
        assert_eq!(p2.minimal_elements().len(), 2);

        let p4 = GradedPoset::build(4, false);
        assert_eq!(p4.len(), 105);
        assert_eq!(p4.minimal_elements().len(), 14);
        assert_eq!(p4.rank(p4.top().unwrap()), 6);
        assert_eq!(p4.matching(p4.top().unwrap()), Some(&Matching::top(4)));
    }

    #[test]
    fn bottom_is_id_zero_and_ids_follow_enumeration() {
        let p = GradedPoset::build(3, true);
        assert!(p.element(0).is_bottom());
        assert_eq!(p.bottom(), Some(0));
        for (k, m) in enumerate_matchings(3).iter().enumerate() {
            assert_eq!(p.id_of(m), Some(k + 1));
        }
    }

    #[test]
    fn leq_examples() {
        let p = GradedPoset::build(3, true);
        let top = p.top().unwrap();
        for x in 0..p.len() {
            assert!(p.leq(x, x));
            assert!(p.leq(x, top));
        }
        let p2 = GradedPoset::build(2, false);
        let mins = p2.minimal_elements();
        assert!(!p2.leq(mins[0], mins[1]) && !p2.leq(mins[1], mins[0]));
    }

    #[test]
    fn interval_examples() {
        let p = GradedPoset::build(3, true);
        let top = p.top().unwrap();
        assert_eq!(p.interval_ids(5, 5).unwrap(), vec![5]);
        assert_eq!(p.interval_ids(0, top).unwrap().len(), p.len());
        let mins: Vec<_> = p.upper_covers(0).to_vec();
        assert!(matches!(
            p.interval(mins[0], mins[1]),
            Err(Error::NotComparable(..))
        ));
        for (x, y) in p.strict_pairs() {
            if p.rank(y) - p.rank(x) == 2 {
                assert_eq!(p.interval_ids(x, y).unwrap().len(), 4);
            }
        }
    }

    #[test]
    fn chi_examples() {
        let p = GradedPoset::build(3, true);
        assert_eq!(p.chi(&[]), 0);
        assert_eq!(p.chi(&[0]), -1);
        let all: Vec<usize> = (0..p.len()).collect();
        assert_eq!(p.chi(&all), 0);
    }

    #[test]
    fn mobius_examples() {
        let p = GradedPoset::build(3, true);
        assert_eq!(p.mobius(4, 4).unwrap(), 1);
        for &(a, b) in p.covers() {
            assert_eq!(p.mobius(a, b).unwrap(), -1);
        }
        assert_eq!(p.mobius(0, p.top().unwrap()).unwrap(), 1);
        assert!(p.mobius(p.top().unwrap(), 0).is_err());
        assert!(p.mobius(0, 99).is_err());
    }

    #[test]
    fn eulerian_small_cases() {
        for n in 1..=3 {
            let p = GradedPoset::build(n, true);
            assert!(p.is_eulerian().unwrap().passed(), "n={n}");
            let parity = p.eulerian_by_parity().unwrap();
            assert!(parity.passed());
            assert_eq!(parity.cases_checked, p.comparable_pair_count());
        }
        assert!(matches!(
            GradedPoset::build(3, false).is_eulerian(),
            Err(Error::Unbounded)
        ));
        // a chain of length two is bounded but not Eulerian
        let report = chain(2).is_eulerian().unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn thin_examples() {
        assert!(GradedPoset::build(2, true).is_thin().passed());
        assert!(GradedPoset::build(3, true).is_thin().passed());
        let report = chain(2).is_thin();
        assert_eq!(report.cases_checked, 1);
        assert!(!report.passed());
    }

    #[test]
    fn non_graded_covers_rejected() {
        assert!(GradedPoset::from_covers(vec![0, 2], vec![(0, 1)]).is_err());
    }
}
