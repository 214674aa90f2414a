//! Matchings of `2n` points on a circle, viewed as chord diagrams.
//!
//! Points are labelled `1..=2n` counterclockwise. All boundary arithmetic is
//! cyclic: the successor of `2n` is `1`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A chord with its endpoints stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub lo: usize,
    pub hi: usize,
}

impl Chord {
    pub fn new(a: usize, b: usize) -> Self {
        Chord {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.lo == p || self.hi == p
    }

    /// The endpoint that is not `p`.
    pub fn other(&self, p: usize) -> usize {
        if self.lo == p {
            self.hi
        } else {
            self.lo
        }
    }

    fn strictly_inside(&self, p: usize) -> bool {
        self.lo < p && p < self.hi
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Two chords naming a crossing site of a chord diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordPair {
    pub first: Chord,
    pub second: Chord,
}

impl ChordPair {
    pub fn new(first: Chord, second: Chord) -> Self {
        ChordPair { first, second }
    }
}

/// Relative position of the strands at `i` and `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundaryClass {
    /// The two strands are distinct and do not cross.
    A,
    /// The two strands cross.
    B,
    /// `i` is matched with `i + 1`.
    C,
}

/// Whether two chords with four distinct endpoints cross.
pub fn interleaves(c1: Chord, c2: Chord) -> Result<bool> {
    if c1.contains(c2.lo) || c1.contains(c2.hi) {
        return Err(Error::SharedEndpoint(c1.lo, c1.hi, c2.lo, c2.hi));
    }
    Ok(interleaves_unchecked(c1, c2))
}

#[inline]
fn interleaves_unchecked(c1: Chord, c2: Chord) -> bool {
    c1.strictly_inside(c2.lo) != c1.strictly_inside(c2.hi)
}

/// A fixed-point-free involution of `{1..2n}`.
///
/// The derived ordering is lexicographic on the partner sequence, which is the
/// canonical element order used by the poset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Matching {
    // partner[i - 1] is the point matched with i
    partner: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Matching {
    type Error = Error;

    fn try_from(partners: Vec<usize>) -> Result<Self> {
        Matching::new(partners)
    }
}

impl From<Matching> for Vec<usize> {
    fn from(m: Matching) -> Self {
        m.partner
    }
}

impl Matching {
    /// Validates a 1-based partner sequence.
    pub fn new(partners: Vec<usize>) -> Result<Self> {
        let len = partners.len();
        if len < 2 || !len.is_multiple_of(2) {
            return Err(Error::InvalidMatching(format!(
                "need an even number of points >= 2, got {len}"
            )));
        }
        for (idx, &p) in partners.iter().enumerate() {
            let i = idx + 1;
            if p < 1 || p > len {
                return Err(Error::InvalidMatching(format!(
                    "partner of {i} is {p}, out of range"
                )));
            }
            if p == i {
                return Err(Error::InvalidMatching(format!("{i} is a fixed point")));
            }
            if partners[p - 1] != i {
                return Err(Error::InvalidMatching(format!(
                    "not an involution: {i} -> {p} -> {}",
                    partners[p - 1]
                )));
            }
        }
        Ok(Matching { partner: partners })
    }

    pub fn from_chords(n: usize, chords: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![0; 2 * n];
        for &(a, b) in chords {
            if a < 1 || b < 1 || a > 2 * n || b > 2 * n {
                return Err(Error::InvalidMatching(format!(
                    "chord ({a},{b}) out of range"
                )));
            }
            if partner[a - 1] != 0 || partner[b - 1] != 0 {
                return Err(Error::InvalidMatching(format!(
                    "chord ({a},{b}) reuses a point"
                )));
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        Matching::new(partner)
    }

    /// The matching `{(i, i + n)}`, the unique maximum of the order.
    pub fn top(n: usize) -> Self {
        let partner = (1..=2 * n)
            .map(|i| if i <= n { i + n } else { i - n })
            .collect();
        Matching { partner }
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// Number of boundary points, `2n`.
    pub fn points(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Cyclic successor of a boundary label.
    pub fn succ(&self, i: usize) -> usize {
        i % self.points() + 1
    }

    pub fn chord_through(&self, i: usize) -> Chord {
        Chord::new(i, self.partner(i))
    }

    /// Chords ordered by their lower endpoint.
    pub fn chords(&self) -> Vec<Chord> {
        (1..=self.points())
            .filter(|&i| i < self.partner(i))
            .map(|i| Chord {
                lo: i,
                hi: self.partner(i),
            })
            .collect()
    }

    /// All crossing chord pairs, `first.lo < second.lo`.
    pub fn crossing_pairs(&self) -> Vec<ChordPair> {
        self.chords()
            .into_iter()
            .array_combinations()
            .filter(|&[a, b]| interleaves_unchecked(a, b))
            .map(|[a, b]| ChordPair::new(a, b))
            .collect()
    }

    /// Number of interleaving chord pairs; the rank of the matching.
    pub fn crossing_number(&self) -> usize {
        let chords = self.chords();
        let mut count = 0;
        for (k, &a) in chords.iter().enumerate() {
            count += chords[k + 1..]
                .iter()
                .filter(|&&b| interleaves_unchecked(a, b))
                .count();
        }
        count
    }

    pub fn is_noncrossing(&self) -> bool {
        self.crossing_number() == 0
    }

    pub fn abc_class(&self, i: usize) -> BoundaryClass {
        let j = self.succ(i);
        if self.partner(i) == j {
            BoundaryClass::C
        } else if interleaves_unchecked(self.chord_through(i), self.chord_through(j)) {
            BoundaryClass::B
        } else {
            BoundaryClass::A
        }
    }

    /// Positions `i` in the given class, in increasing order.
    pub fn class_members(&self, class: BoundaryClass) -> Vec<usize> {
        (1..=self.points())
            .filter(|&i| self.abc_class(i) == class)
            .collect()
    }

    /// `s_i . tau`: swap the boundary points `i` and `i + 1`.
    pub fn simple_act(&self, i: usize) -> Matching {
        let j = self.succ(i);
        let swap = |p: usize| {
            if p == i {
                j
            } else if p == j {
                i
            } else {
                p
            }
        };
        let partner = (1..=self.points())
            .map(|p| swap(self.partner(swap(p))))
            .collect();
        Matching { partner }
    }

    /// The two smoothings of a crossing: for `a < b < c < d` with chords
    /// `(a,c), (b,d)`, returns the matchings using `{(a,b),(c,d)}` and
    /// `{(a,d),(b,c)}`.
    pub fn resolutions(&self, pair: ChordPair) -> Result<(Matching, Matching)> {
        let ChordPair { first, second } = pair;
        for c in [first, second] {
            if self.partner(c.lo) != c.hi {
                return Err(Error::InvalidMatching(format!(
                    "{c} is not a chord of {self}"
                )));
            }
        }
        if !interleaves(first, second)? {
            return Err(Error::NotInterleaving(
                first.lo, first.hi, second.lo, second.hi,
            ));
        }
        let mut pts = [first.lo, first.hi, second.lo, second.hi];
        pts.sort_unstable();
        let [a, b, c, d] = pts;
        Ok((self.repaired(a, b, c, d), self.repaired(a, d, b, c)))
    }

    fn repaired(&self, a: usize, b: usize, c: usize, d: usize) -> Matching {
        let mut partner = self.partner.clone();
        partner[a - 1] = b;
        partner[b - 1] = a;
        partner[c - 1] = d;
        partner[d - 1] = c;
        Matching { partner }
    }

    /// Lower covers: single smoothings that drop the crossing number by one.
    pub fn covers_down(&self) -> BTreeSet<Matching> {
        let target = match self.crossing_number().checked_sub(1) {
            Some(t) => t,
            None => return BTreeSet::new(),
        };
        let mut out = BTreeSet::new();
        for pair in self.crossing_pairs() {
            let (x, y) = self.resolutions(pair).expect("crossing pair resolves");
            for m in [x, y] {
                if m.crossing_number() == target {
                    out.insert(m);
                }
            }
        }
        out
    }

    /// Upper covers, found by re-pairing every pair of chords both other ways.
    pub fn covers_up(&self) -> BTreeSet<Matching> {
        let target = self.crossing_number() + 1;
        let chords = self.chords();
        let mut out = BTreeSet::new();
        for (k, &x) in chords.iter().enumerate() {
            for &y in &chords[k + 1..] {
                let mut pts = [x.lo, x.hi, y.lo, y.hi];
                pts.sort_unstable();
                let [a, b, c, d] = pts;
                for m in [
                    self.repaired(a, b, c, d),
                    self.repaired(a, c, b, d),
                    self.repaired(a, d, b, c),
                ] {
                    if m.crossing_number() == target {
                        out.insert(m);
                    }
                }
            }
        }
        out
    }

    /// Image under a permutation of the boundary labels (`perm[p - 1]` is
    /// the new label of `p`).
    pub fn relabel(&self, perm: &[usize]) -> Matching {
        let mut partner = vec![0; self.points()];
        for p in 1..=self.points() {
            partner[perm[p - 1] - 1] = perm[self.partner(p) - 1];
        }
        Matching { partner }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.chords().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matching{self}")
    }
}

/// All `(2n - 1)!!` matchings on `2n` points in lexicographic order of their
/// partner sequences.
pub fn enumerate_matchings(n: usize) -> Vec<Matching> {
    fn rec(partner: &mut Vec<usize>, out: &mut Vec<Matching>) {
        let Some(first) = partner.iter().position(|&p| p == 0) else {
            out.push(Matching {
                partner: partner.clone(),
            });
            return;
        };
        for second in first + 1..partner.len() {
            if partner[second] == 0 {
                partner[first] = second + 1;
                partner[second] = first + 1;
                rec(partner, out);
                partner[first] = 0;
                partner[second] = 0;
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(&mut vec![0; 2 * n], &mut out);
    out.sort();
    out
}

/// Symmetries of the regular polygon on `points` vertices as label
/// permutations, rotations first.
pub fn dihedral_relabelings(points: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * points);
    for r in 0..points {
        out.push((0..points).map(|p| (p + r) % points + 1).collect());
    }
    for r in 0..points {
        out.push((0..points).map(|p| (points - p + r) % points + 1).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[usize]) -> Matching {
        Matching::new(p.to_vec()).unwrap()
    }

    fn double_factorial(n: usize) -> usize {
        (1..=n).map(|k| 2 * k - 1).product()
    }

    #[test]
    fn make_matching_examples() {
        assert_eq!(m(&[2, 1]).n(), 1);
        let x = m(&[3, 4, 1, 2]);
        assert_eq!(x.chords(), vec![Chord::new(1, 3), Chord::new(2, 4)]);
        assert!(Matching::new(vec![2, 3, 1, 4]).is_err());
        assert!(Matching::new(vec![1, 2]).is_err());
        assert!(Matching::new(vec![2, 5, 4, 3]).is_err());
        assert!(Matching::new(vec![2]).is_err());
        assert!(Matching::new(vec![]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_matchings(1).len(), 1);
        assert_eq!(enumerate_matchings(3).len(), 15);
        for n in 1..=5 {
            let all = enumerate_matchings(n);
            assert_eq!(all.len(), double_factorial(n));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn interleaving_examples() {
        assert!(interleaves(Chord::new(1, 3), Chord::new(2, 4)).unwrap());
        assert!(!interleaves(Chord::new(1, 2), Chord::new(3, 4)).unwrap());
        assert!(!interleaves(Chord::new(2, 9), Chord::new(3, 8)).unwrap());
        assert!(interleaves(Chord::new(1, 3), Chord::new(3, 4)).is_err());
    }

    #[test]
    fn crossing_number_examples() {
        assert_eq!(m(&[2, 1, 4, 3]).crossing_number(), 0);
        let fig = Matching::from_chords(5, &[(1, 7), (2, 9), (3, 8), (4, 10), (5, 6)]).unwrap();
        assert_eq!(fig.crossing_number(), 5);
        assert_eq!(Matching::top(3).crossing_number(), 3);
    }

    #[test]
    fn abc_examples() {
        let x = m(&[2, 1, 4, 3]);
        assert_eq!(x.abc_class(1), BoundaryClass::C);
        assert_eq!(x.abc_class(2), BoundaryClass::A);
        assert_eq!(m(&[3, 4, 1, 2]).abc_class(4), BoundaryClass::B);
    }

    #[test]
    fn simple_act_examples() {
        let x = m(&[2, 1, 4, 3]);
        assert_eq!(x.simple_act(2), m(&[3, 4, 1, 2]));
        assert_eq!(x.simple_act(1), x);
        assert_eq!(m(&[3, 4, 1, 2]).simple_act(4), x);
    }

    #[test]
    fn resolution_examples() {
        let top2 = Matching::top(2);
        let (a, b) = top2
            .resolutions(ChordPair::new(Chord::new(1, 3), Chord::new(2, 4)))
            .unwrap();
        assert_eq!(a, m(&[2, 1, 4, 3]));
        assert_eq!(b, m(&[4, 3, 2, 1]));

        let top3 = Matching::top(3);
        let (a, b) = top3
            .resolutions(ChordPair::new(Chord::new(1, 4), Chord::new(2, 5)))
            .unwrap();
        assert_eq!(
            a,
            Matching::from_chords(3, &[(1, 2), (4, 5), (3, 6)]).unwrap()
        );
        assert_eq!(
            b,
            Matching::from_chords(3, &[(1, 5), (2, 4), (3, 6)]).unwrap()
        );

        let x = m(&[2, 1, 4, 3]);
        assert!(x
            .resolutions(ChordPair::new(Chord::new(1, 2), Chord::new(3, 4)))
            .is_err());
        assert!(top2
            .resolutions(ChordPair::new(Chord::new(1, 2), Chord::new(3, 4)))
            .is_err());
    }

    #[test]
    fn resolutions_drop_rank_exhaustively() {
        for n in 1..=4 {
            for t in enumerate_matchings(n) {
                let c = t.crossing_number();
                for pair in t.crossing_pairs() {
                    let (a, b) = t.resolutions(pair).unwrap();
                    assert!(a.crossing_number() < c && b.crossing_number() < c);
                }
            }
        }
    }

    #[test]
    fn cover_examples() {
        let top2 = Matching::top(2);
        let down: Vec<_> = top2.covers_down().into_iter().collect();
        assert_eq!(down, vec![m(&[2, 1, 4, 3]), m(&[4, 3, 2, 1])]);
        assert!(m(&[2, 1, 4, 3]).covers_down().is_empty());
        assert_eq!(
            m(&[2, 1, 4, 3]).covers_up().into_iter().collect::<Vec<_>>(),
            vec![top2]
        );
        assert!(Matching::top(4).covers_up().is_empty());

        let p3 = enumerate_matchings(3);
        for t in p3.iter().filter(|t| t.crossing_number() == 2) {
            assert_eq!(t.covers_down().len(), 4, "{t}");
        }
        let up_from_rank0: usize = p3
            .iter()
            .filter(|t| t.crossing_number() == 0)
            .map(|t| t.covers_up().len())
            .sum();
        assert_eq!(up_from_rank0, 12);
    }

    #[test]
    fn trichotomy_and_covers_consistency() {
        for n in 1..=4 {
            let all = enumerate_matchings(n);
            for t in &all {
                let c = t.crossing_number() as i64;
                for i in 1..=2 * n {
                    let s = t.simple_act(i);
                    assert_eq!(&s.simple_act(i), t);
                    let d = s.crossing_number() as i64 - c;
                    let expect = match t.abc_class(i) {
                        BoundaryClass::A => 1,
                        BoundaryClass::B => -1,
                        BoundaryClass::C => 0,
                    };
                    assert_eq!(d, expect, "{t} i={i}");
                }
                for lower in t.covers_down() {
                    assert!(lower.covers_up().contains(t));
                }
                for upper in t.covers_up() {
                    assert!(upper.covers_down().contains(t));
                }
            }
        }
    }

    #[test]
    fn catalan_minimal_and_unique_maximum() {
        let catalan = [1, 2, 5, 14, 42];
        for n in 1..=5 {
            let all = enumerate_matchings(n);
            let minimal: Vec<_> = all.iter().filter(|t| t.covers_down().is_empty()).collect();
            assert!(minimal.iter().all(|t| t.crossing_number() == 0));
            assert_eq!(minimal.len(), catalan[n - 1]);
            let max = n * (n - 1) / 2;
            let tops: Vec<_> = all.iter().filter(|t| t.crossing_number() == max).collect();
            assert_eq!(tops, vec![&Matching::top(n)]);
        }
    }

    #[test]
    fn serde_round_trip() {
        let t = Matching::top(3);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, "[4,5,6,1,2,3]");
        assert_eq!(serde_json::from_str::<Matching>(&s).unwrap(), t);
        assert!(serde_json::from_str::<Matching>("[2,3,1,4]").is_err());
    }

    #[test]
    fn dihedral_group_has_4n_elements() {
        let all = dihedral_relabelings(6);
        assert_eq!(all.len(), 12);
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 12);
        let t = Matching::top(3);
        for d in &all {
            assert_eq!(t.relabel(d).crossing_number(), 3);
        }
    }
}
