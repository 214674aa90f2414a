//! Affine permutations of period `2n` in window notation.
//!
//! We work in the extended affine symmetric group: windows need distinct
//! residues but may have any shift sum. Bruhat comparison only relates
//! elements with equal shift sum, which covers every element the order
//! embedding produces together with its `s_i` multiples.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::Matching;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct AffinePermutation {
    window: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentSet {
    pub side: Side,
    /// Residues in `1..=2n`; `2n` stands for residue 0.
    pub members: BTreeSet<usize>,
}

impl DescentSet {
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

impl TryFrom<Vec<i64>> for AffinePermutation {
    type Error = Error;

    fn try_from(window: Vec<i64>) -> Result<Self> {
        AffinePermutation::from_window(window)
    }
}

impl From<AffinePermutation> for Vec<i64> {
    fn from(g: AffinePermutation) -> Self {
        g.window
    }
}

impl AffinePermutation {
    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let period = window.len();
        if period == 0 || !period.is_multiple_of(2) {
            return Err(Error::InvalidWindow(format!(
                "period must be even and positive, got {period}"
            )));
        }
        let m = period as i64;
        let mut seen = vec![false; period];
        for &v in &window {
            let r = v.rem_euclid(m) as usize;
            if seen[r] {
                return Err(Error::InvalidWindow(format!(
                    "residue of {v} repeats in {window:?}"
                )));
            }
            seen[r] = true;
        }
        Ok(AffinePermutation { window })
    }

    pub fn identity(n: usize) -> Self {
        AffinePermutation {
            window: (1..=2 * n as i64).collect(),
        }
    }

    pub fn period(&self) -> usize {
        self.window.len()
    }

    pub fn n(&self) -> usize {
        self.window.len() / 2
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// `g(i)` for any integer `i`, using `g(i + 2n) = g(i) + 2n`.
    pub fn apply(&self, i: i64) -> i64 {
        let m = self.period() as i64;
        let k = (i - 1).div_euclid(m);
        let r = (i - 1).rem_euclid(m) as usize;
        self.window[r] + m * k
    }

    /// `sum(g(i) - i)` over one window; a multiple of `2n`.
    pub fn shift_sum(&self) -> i64 {
        self.window.iter().zip(1..).map(|(&v, i)| v - i).sum()
    }

    pub fn inverse(&self) -> Self {
        let m = self.period() as i64;
        let mut window = vec![0; self.period()];
        for (r, &v) in self.window.iter().enumerate() {
            let rho = (v - 1).rem_euclid(m);
            let q = (v - 1).div_euclid(m);
            window[rho as usize] = r as i64 + 1 - m * q;
        }
        AffinePermutation { window }
    }

    /// Inversions `(i, j)` with `1 <= i <= 2n`, `i < j`, `g(i) > g(j)`.
    pub fn length(&self) -> usize {
        let m = self.period() as i64;
        let mut total = 0i64;
        for i in 1..=m {
            let gi = self.window[(i - 1) as usize];
            for r in 1..=m {
                let gr = self.window[(r - 1) as usize];
                let k_min = (i - r).div_euclid(m) + 1;
                let k_max = ceil_div(gi - gr, m) - 1;
                total += (k_max - k_min + 1).max(0);
            }
        }
        total as usize
    }

    pub fn descents(&self, side: Side) -> DescentSet {
        let base = match side {
            Side::Right => self.clone(),
            Side::Left => self.inverse(),
        };
        let m = self.period() as i64;
        let members = (1..=m)
            .filter(|&i| base.apply(i) > base.apply(i + 1))
            .map(|i| i as usize)
            .collect();
        DescentSet { side, members }
    }

    /// `s_i g`: swaps the values congruent to `i` and `i + 1`.
    pub fn left_simple(&self, i: usize) -> Self {
        let m = self.period() as i64;
        let i = i as i64;
        let j = i % m + 1;
        let window = self
            .window
            .iter()
            .map(|&v| {
                let r = (v - 1).rem_euclid(m) + 1;
                if r == i {
                    v + 1
                } else if r == j {
                    v - 1
                } else {
                    v
                }
            })
            .collect();
        AffinePermutation { window }
    }

    /// `g s_i`: swaps the positions `i` and `i + 1`.
    pub fn right_simple(&self, i: usize) -> Self {
        let m = self.period();
        let mut window = self.window.clone();
        if i == m {
            // positions 2n and 2n + 1 = 1 + 2n
            let last = self.window[m - 1];
            let first = self.window[0];
            window[m - 1] = first + m as i64;
            window[0] = last - m as i64;
        } else {
            window.swap(i - 1, i);
        }
        AffinePermutation { window }
    }

    pub fn conj_simple(&self, i: usize) -> Self {
        self.left_simple(i).right_simple(i)
    }

    /// `#{a <= i : g(a) >= j}`; finite by periodicity.
    pub fn rank_count(&self, i: i64, j: i64) -> i64 {
        let m = self.period() as i64;
        self.window
            .iter()
            .zip(1..)
            .map(|(&gr, r)| ((i - r).div_euclid(m) - ceil_div(j - gr, m) + 1).max(0))
            .sum()
    }
}

fn ceil_div(a: i64, m: i64) -> i64 {
    -((-a).div_euclid(m))
}

/// Bruhat order by the counting criterion: `u <= w` iff
/// `#{a <= i : u(a) >= j} <= #{a <= i : w(a) >= j}` for all `i, j`.
///
/// `i` ranges over one window and `j` over
/// `[min window - 2n, max window + 2n]`; outside that box both counts agree
/// whenever the shift sums do.
pub fn bruhat_leq(u: &AffinePermutation, w: &AffinePermutation) -> Result<bool> {
    if u.period() != w.period() {
        return Err(Error::PeriodMismatch(u.period(), w.period()));
    }
    if u.shift_sum() != w.shift_sum() {
        return Ok(false);
    }
    let m = u.period() as i64;
    let lo = u.window.iter().chain(&w.window).copied().min().unwrap() - m;
    let hi = u.window.iter().chain(&w.window).copied().max().unwrap() + m;
    for i in 1..=m {
        for j in lo..=hi {
            if u.rank_count(i, j) > w.rank_count(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The order-reversing embedding `tau -> g_tau`.
pub fn embed(tau: &Matching) -> AffinePermutation {
    let m = tau.points();
    let window = (1..=m)
        .map(|i| {
            let p = tau.partner(i);
            if p > i {
                p as i64
            } else {
                (p + m) as i64
            }
        })
        .collect();
    AffinePermutation { window }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.window)
    }
}

impl fmt::Debug for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Affine{:?}", self.window)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{enumerate_matchings, BoundaryClass};

    fn w(v: &[i64]) -> AffinePermutation {
        AffinePermutation::from_window(v.to_vec()).unwrap()
    }

    /// Inversion count straight from the definition, scanning `j` far enough
    /// that no inversion with position `i` in the first window is missed.
    fn brute_length(g: &AffinePermutation) -> usize {
        let m = g.period() as i64;
        let spread = g.window().iter().map(|v| v.abs()).max().unwrap() + 4 * m;
        let mut count = 0;
        for i in 1..=m {
            for j in i + 1..=i + 2 * spread {
                if g.apply(i) > g.apply(j) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn window_examples() {
        assert_eq!(w(&[1, 2]), AffinePermutation::identity(1));
        let t = Matching::new(vec![2, 1]).unwrap();
        assert_eq!(embed(&t), w(&[2, 3]));
        assert!(AffinePermutation::from_window(vec![1, 1]).is_err());
        assert!(AffinePermutation::from_window(vec![1, 3]).is_err());
        assert!(AffinePermutation::from_window(vec![1, 2, 3]).is_err());
    }

    #[test]
    fn apply_examples() {
        assert_eq!(AffinePermutation::identity(2).apply(7), 7);
        assert_eq!(w(&[3, 4, 5, 6]).apply(5), 7);
        assert_eq!(w(&[2, 5, 4, 7]).apply(0), 3);
        assert_eq!(w(&[2, 5, 4, 7]).apply(-3), -2);
    }

    #[test]
    fn length_examples() {
        assert_eq!(AffinePermutation::identity(3).length(), 0);
        assert_eq!(w(&[3, 4, 5, 6]).length(), 0);
        assert_eq!(w(&[2, 5, 4, 7]).length(), 2);
        for v in [
            [2, 1, 4, 3],
            [4, 1, 2, 3],
            [0, 5, 2, 3],
            [-2, 5, 4, 3],
            [6, 1, 3, 0],
        ] {
            let g = w(&v);
            assert_eq!(g.length(), brute_length(&g), "{g}");
        }
    }

    #[test]
    fn descent_examples() {
        let id = AffinePermutation::identity(2);
        assert!(id.descents(Side::Left).members.is_empty());
        assert!(id.descents(Side::Right).members.is_empty());
        let g = w(&[2, 5, 4, 7]);
        assert_eq!(g.descents(Side::Right).members, BTreeSet::from([2, 4]));
        for n in 1..=3 {
            for t in enumerate_matchings(n)
                .into_iter()
                .filter(|t| t.is_noncrossing())
            {
                let g = embed(&t);
                assert_eq!(
                    g.descents(Side::Left).members,
                    g.descents(Side::Right).members
                );
            }
        }
    }

    #[test]
    fn descents_agree_with_length() {
        for n in 1..=3 {
            for t in enumerate_matchings(n) {
                let g = embed(&t);
                let len = g.length();
                let left = g.descents(Side::Left);
                let right = g.descents(Side::Right);
                for i in 1..=2 * n {
                    assert_eq!(left.contains(i), g.left_simple(i).length() < len);
                    assert_eq!(right.contains(i), g.right_simple(i).length() < len);
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        for v in [[2, 5, 4, 7], [-2, 5, 4, 3], [6, 1, 3, 0]] {
            let g = w(&v);
            let inv = g.inverse();
            for i in -10..10 {
                assert_eq!(inv.apply(g.apply(i)), i);
                assert_eq!(g.apply(inv.apply(i)), i);
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let top = w(&[3, 4, 5, 6]);
        let a = w(&[2, 5, 4, 7]);
        let b = w(&[4, 3, 6, 5]);
        assert!(bruhat_leq(&a, &a).unwrap());
        assert!(bruhat_leq(&top, &a).unwrap());
        assert!(!bruhat_leq(&a, &top).unwrap());
        assert!(!bruhat_leq(&a, &b).unwrap());
        assert!(!bruhat_leq(&b, &a).unwrap());
        assert!(bruhat_leq(&top, &AffinePermutation::identity(3)).is_err());
        // unequal shift sums are incomparable
        assert!(!bruhat_leq(&AffinePermutation::identity(2), &top).unwrap());
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(&Matching::top(2)), w(&[3, 4, 5, 6]));
        assert_eq!(
            embed(&Matching::new(vec![2, 1, 4, 3]).unwrap()),
            w(&[2, 5, 4, 7])
        );
        for n in 1..=4 {
            let all = enumerate_matchings(n);
            let images: BTreeSet<_> = all.iter().map(embed).collect();
            assert_eq!(images.len(), all.len());
            for t in &all {
                let g = embed(t);
                assert_eq!(g.shift_sum(), (2 * n * n) as i64);
                for i in 1..=2 * n as i64 {
                    assert_eq!(g.apply(g.apply(i)), i + 2 * n as i64);
                }
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let id = AffinePermutation::identity(2);
        for i in 1..=4 {
            assert_eq!(id.conj_simple(i), id);
        }
        let t = Matching::new(vec![2, 1, 4, 3]).unwrap();
        assert_eq!(embed(&t).conj_simple(2), embed(&t.simple_act(2)));
        for n in 1..=3 {
            for t in enumerate_matchings(n) {
                let g = embed(&t);
                for i in 1..=2 * n {
                    let c = g.conj_simple(i);
                    if t.abc_class(i) == BoundaryClass::C {
                        // s_i fixes tau, but conjugation leaves the image of the
                        // embedding and lengthens g by two
                        assert_ne!(c, g);
                        assert_eq!(c.length(), g.length() + 2);
                    } else {
                        assert_eq!(c, embed(&t.simple_act(i)));
                    }
                }
            }
        }
    }
}
