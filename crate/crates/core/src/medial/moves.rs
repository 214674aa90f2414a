use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{MedialGraph, GONE};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MoveKind {
    YangBaxter,
    LensRemoval,
    LoopRemoval,
}

impl MoveKind {
    pub fn face_degree(self) -> usize {
        match self {
            MoveKind::YangBaxter => 3,
            MoveKind::LensRemoval => 2,
            MoveKind::LoopRemoval => 1,
        }
    }
}

/// A move and the internal face it rewrites, given as its half-edge orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub kind: MoveKind,
    pub site: Vec<usize>,
}

impl MedialGraph {
    /// Smooths crossing `v`: dir 0 joins rotation slots (0,1) and (2,3),
    /// dir 1 joins (1,2) and (3,0).
    pub fn resolve_crossing(&self, v: usize, dir: u8) -> Result<MedialGraph> {
        self.resolve_many(&[(v, dir)])
    }

    /// Smooths crossing `v` so that the ends at the two given half-edge pairs
    /// are connected; the pairs must be rotation-adjacent.
    pub fn resolve_joining(&self, v: usize, pairs: [(usize, usize); 2]) -> Result<MedialGraph> {
        self.smooth(&[(v, pairs)])
    }

    /// Smooths several distinct crossings at once, each by direction as in
    /// [`MedialGraph::resolve_crossing`].
    pub fn resolve_many(&self, choices: &[(usize, u8)]) -> Result<MedialGraph> {
        let mut plan = Vec::with_capacity(choices.len());
        for &(v, dir) in choices {
            if !self.is_crossing(v) {
                return Err(Error::NotACrossing(v));
            }
            let r = &self.rotations[v];
            plan.push((
                v,
                if dir == 0 {
                    [(r[0], r[1]), (r[2], r[3])]
                } else {
                    [(r[1], r[2]), (r[3], r[0])]
                },
            ));
        }
        self.smooth(&plan)
    }

    fn smooth(&self, plan: &[(usize, [(usize, usize); 2])]) -> Result<MedialGraph> {
        let mut join = HashMap::new();
        for &(v, pairs) in plan {
            if !self.is_crossing(v) {
                return Err(Error::NotACrossing(v));
            }
            let mut covered: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            covered.sort_unstable();
            let mut expected = self.rotations[v].clone();
            expected.sort_unstable();
            let adjacent = pairs
                .iter()
                .all(|&(a, b)| self.next(a) == b || self.next(b) == a);
            if covered != expected || !adjacent {
                return Err(Error::InapplicableMove(format!(
                    "{pairs:?} is not a smoothing of vertex {v}"
                )));
            }
            for (a, b) in pairs {
                join.insert(a, b);
                join.insert(b, a);
            }
        }
        if join.len() != 4 * plan.len() {
            return Err(Error::InapplicableMove(
                "a crossing is smoothed twice".into(),
            ));
        }
        let mut g = self.clone();
        let mut walked = HashSet::new();
        for e in 0..self.twin.len() {
            if join.contains_key(&e) || !join.contains_key(&self.twin[e]) || walked.contains(&e) {
                continue;
            }
            let mut d = self.twin[e];
            let end = loop {
                let d2 = join[&d];
                walked.insert(d);
                walked.insert(d2);
                let t = self.twin[d2];
                if !join.contains_key(&t) {
                    break t;
                }
                d = t;
            };
            walked.insert(end);
            g.twin[e] = end;
            g.twin[end] = e;
        }
        let mut sorted: Vec<usize> = join.keys().copied().collect();
        sorted.sort_unstable();
        for &start in &sorted {
            if walked.contains(&start) {
                continue;
            }
            g.free_loops += 1;
            let mut d = start;
            while walked.insert(d) {
                let d2 = join[&d];
                walked.insert(d2);
                d = self.twin[d2];
            }
        }
        for &(v, _) in plan {
            for &d in &self.rotations[v] {
                g.twin[d] = GONE;
            }
            g.rotations[v].clear();
        }
        g.renormalize()?;
        Ok(g)
    }

    fn renormalize(&mut self) -> Result<()> {
        self.normalize()?;
        if cfg!(debug_assertions) {
            self.validate()?;
        }
        Ok(())
    }

    /// Orbit `site` as an internal face with distinct crossings, or an error.
    fn check_site(&self, kind: MoveKind, site: &[usize]) -> Result<Vec<usize>> {
        let bad = || Error::InapplicableMove(format!("{kind:?} at {site:?}"));
        if site.len() != kind.face_degree() || site.iter().any(|&h| h >= self.twin.len()) {
            return Err(bad());
        }
        for k in 0..site.len() {
            let h = site[k];
            if !self.is_crossing(self.vertex_of[h])
                || self.next(self.twin[h]) != site[(k + 1) % site.len()]
            {
                return Err(bad());
            }
        }
        let mut vs: Vec<usize> = site.iter().map(|&h| self.vertex_of[h]).collect();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != site.len() {
            return Err(bad());
        }
        Ok(site.iter().map(|&h| self.vertex_of[h]).collect())
    }

    pub fn apply_move(&self, m: &Move) -> Result<MedialGraph> {
        self.check_site(m.kind, &m.site)?;
        match m.kind {
            MoveKind::LoopRemoval => self.remove_loop(m.site[0]),
            MoveKind::LensRemoval => self.remove_lens(m.site[0], m.site[1]),
            MoveKind::YangBaxter => self.yang_baxter([m.site[0], m.site[1], m.site[2]]),
        }
    }

    /// Deletes the kink at the monogon `h`, leaving its strand in one piece.
    fn remove_loop(&self, h: usize) -> Result<MedialGraph> {
        let t = self.twin[h];
        let v = self.vertex_of[h];
        let a = self.next(h);
        let b = self.next(a);
        debug_assert_eq!(self.next(b), t);
        self.resolve_joining(v, [(h, a), (b, t)])
    }

    /// Collapses the bigon `h0: u -> v`, `h1: v -> u` to one crossing whose
    /// strands re-pair the four outer ends.
    fn remove_lens(&self, h0: usize, h1: usize) -> Result<MedialGraph> {
        let u = self.vertex_of[h0];
        let v = self.vertex_of[h1];
        let outer = |x: usize| [self.step(x, 2), self.step(x, 3)];
        let [yu, zu] = outer(self.twin[h1]);
        let [yv, zv] = outer(self.twin[h0]);
        let mut g = self.clone();
        for d in [h0, h1, self.twin[h0], self.twin[h1]] {
            g.twin[d] = GONE;
        }
        g.rotations[u] = vec![yu, zu, yv, zv];
        g.rotations[v].clear();
        g.renormalize()?;
        Ok(g)
    }

    /// Slides one strand across the crossing of the other two through the
    /// triangle `h0: v0 -> v1`, `h1: v1 -> v2`, `h2: v2 -> v0`.
    fn yang_baxter(&self, h: [usize; 3]) -> Result<MedialGraph> {
        let v = [
            self.vertex_of[h[0]],
            self.vertex_of[h[1]],
            self.vertex_of[h[2]],
        ];
        // corner at v[k + 1] is entered by twin(h[k])
        let outer = |k: usize| {
            let x = self.twin[h[k]];
            [self.step(x, 2), self.step(x, 3)]
        };
        let [e0, e1] = outer(2);
        let [e2, e3] = outer(1);
        let [e4, e5] = outer(0);
        let t = [self.twin[h[0]], self.twin[h[1]], self.twin[h[2]]];
        let mut g = self.clone();
        g.rotations[v[0]] = vec![e1, e2, h[0], t[2]];
        g.rotations[v[1]] = vec![e3, e4, h[1], t[0]];
        g.rotations[v[2]] = vec![e5, e0, h[2], t[1]];
        g.renormalize()?;
        Ok(g)
    }

    /// Every move applicable to some internal face.
    pub fn applicable_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for face in self.internal_faces() {
            let kind = match face.len() {
                1 => MoveKind::LoopRemoval,
                2 => MoveKind::LensRemoval,
                3 => MoveKind::YangBaxter,
                _ => continue,
            };
            if self.check_site(kind, &face).is_ok() {
                out.push(Move { kind, site: face });
            }
        }
        out
    }
}
