//! Strand diagrams in the disk as rotation systems.
//!
//! Vertices `0..2n` are the boundary stubs (stub `k - 1` carries label `k`),
//! each with a single half-edge; every other vertex is a 4-valent crossing
//! whose rotation lists its half-edges counterclockwise.  Opposite positions
//! (`p` and `p + 2`) lie on the same strand.  Closed strands that touch no
//! other strand are not stored as half-edges; they are counted in
//! `free_loops`.

mod build;
mod moves;
mod reduce;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use moves::{Move, MoveKind};
pub use reduce::{kappa_diagram, kappa_preparation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedialGraph {
    n: usize,
    rotations: Vec<Vec<usize>>,
    twin: Vec<usize>,
    vertex_of: Vec<usize>,
    pos_of: Vec<usize>,
    free_loops: usize,
}

/// A strand as the half-edges leaving each vertex along it, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub half_edges: Vec<usize>,
    /// Boundary labels at the two ends, or `None` for a closed strand.
    pub ends: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MedialDump {
    pub n: usize,
    pub vertices: Vec<VertexDump>,
    pub twin: Vec<usize>,
    pub next: Vec<usize>,
    pub free_loops: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDump {
    pub id: usize,
    pub label: Option<usize>,
    pub rotation: Vec<usize>,
}

const GONE: usize = usize::MAX;

impl MedialGraph {
    /// Assembles and validates a map; components without a boundary stub are
    /// turned into free loops.
    pub fn from_parts(
        n: usize,
        rotations: Vec<Vec<usize>>,
        twin: Vec<usize>,
        free_loops: usize,
    ) -> Result<Self> {
        let mut g = MedialGraph {
            n,
            rotations,
            twin,
            vertex_of: Vec::new(),
            pos_of: Vec::new(),
            free_loops,
        };
        g.normalize()?;
        g.validate()?;
        Ok(g)
    }

    pub fn from_dump(dump: &MedialDump) -> Result<Self> {
        let rotations = dump.vertices.iter().map(|v| v.rotation.clone()).collect();
        let g = Self::from_parts(dump.n, rotations, dump.twin.clone(), dump.free_loops)?;
        if g.dump().next != dump.next {
            return Err(Error::InvalidGraph(
                "next array disagrees with rotations".into(),
            ));
        }
        Ok(g)
    }

    pub fn dump(&self) -> MedialDump {
        MedialDump {
            n: self.n,
            vertices: (0..self.vertex_count())
                .map(|v| VertexDump {
                    id: v,
                    label: (v < 2 * self.n).then_some(v + 1),
                    rotation: self.rotations[v].clone(),
                })
                .collect(),
            twin: self.twin.clone(),
            next: (0..self.half_edge_count()).map(|h| self.next(h)).collect(),
            free_loops: self.free_loops,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.dump()).expect("dump serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.twin.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn crossing_count(&self) -> usize {
        self.rotations.len() - 2 * self.n
    }

    pub fn crossings(&self) -> std::ops::Range<usize> {
        2 * self.n..self.rotations.len()
    }

    pub fn is_crossing(&self, v: usize) -> bool {
        v >= 2 * self.n && v < self.rotations.len()
    }

    pub fn stub(&self, label: usize) -> usize {
        label - 1
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    pub fn vertex(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn position(&self, h: usize) -> usize {
        self.pos_of[h]
    }

    /// Counterclockwise successor of `h` at its vertex.
    pub fn next(&self, h: usize) -> usize {
        self.step(h, 1)
    }

    fn step(&self, h: usize, k: usize) -> usize {
        let rot = &self.rotations[self.vertex_of[h]];
        rot[(self.pos_of[h] + k) % rot.len()]
    }

    /// The half-edge continuing the strand of `h` through its vertex.
    pub fn opposite(&self, h: usize) -> usize {
        self.step(h, 2)
    }

    fn normalize(&mut self) -> Result<()> {
        let points = 2 * self.n;
        if self.rotations.len() < points {
            return Err(Error::InvalidGraph(
                "fewer vertices than boundary stubs".into(),
            ));
        }
        self.drop_detached()?;
        let mut vertex_map = vec![GONE; self.rotations.len()];
        let mut kept = 0;
        for (v, rot) in self.rotations.iter().enumerate() {
            if v < points || !rot.is_empty() {
                vertex_map[v] = kept;
                kept += 1;
            }
        }
        let mut dart_map = vec![GONE; self.twin.len()];
        let mut used: Vec<usize> = self.rotations.iter().flatten().copied().collect();
        used.sort_unstable();
        if used.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(
                "half-edge in two rotation slots".into(),
            ));
        }
        for (k, &h) in used.iter().enumerate() {
            if h >= self.twin.len() {
                return Err(Error::InvalidGraph(format!("half-edge {h} out of range")));
            }
            dart_map[h] = k;
        }
        let mut twin = vec![GONE; used.len()];
        for &h in &used {
            let t = self.twin[h];
            if t >= dart_map.len() || dart_map[t] == GONE {
                return Err(Error::InvalidGraph(format!("twin of {h} is missing")));
            }
            twin[dart_map[h]] = dart_map[t];
        }
        let rotations: Vec<Vec<usize>> = self
            .rotations
            .iter()
            .enumerate()
            .filter(|&(v, _)| vertex_map[v] != GONE)
            .map(|(_, rot)| rot.iter().map(|&h| dart_map[h]).collect())
            .collect();
        let mut vertex_of = vec![GONE; used.len()];
        let mut pos_of = vec![GONE; used.len()];
        for (v, rot) in rotations.iter().enumerate() {
            for (p, &h) in rot.iter().enumerate() {
                vertex_of[h] = v;
                pos_of[h] = p;
            }
        }
        self.rotations = rotations;
        self.twin = twin;
        self.vertex_of = vertex_of;
        self.pos_of = pos_of;
        Ok(())
    }

    /// Removes crossings unreachable from the boundary, counting their
    /// strands as free loops.
    fn drop_detached(&mut self) -> Result<()> {
        let points = 2 * self.n;
        let mut owner = vec![GONE; self.twin.len()];
        for (v, rot) in self.rotations.iter().enumerate() {
            for &h in rot {
                if h >= owner.len() {
                    return Err(Error::InvalidGraph(format!("half-edge {h} out of range")));
                }
                owner[h] = v;
            }
        }
        let mut seen = vec![false; self.rotations.len()];
        let mut queue: VecDeque<usize> = (0..points).collect();
        for v in 0..points {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &h in &self.rotations[v] {
                let t = self.twin.get(h).copied().unwrap_or(GONE);
                let w = owner.get(t).copied().unwrap_or(GONE);
                if w == GONE {
                    return Err(Error::InvalidGraph(format!("twin of {h} is missing")));
                }
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let detached: Vec<usize> = (points..self.rotations.len())
            .filter(|&v| !seen[v] && !self.rotations[v].is_empty())
            .collect();
        if detached.is_empty() {
            return Ok(());
        }
        let mut pos = vec![GONE; self.twin.len()];
        for &v in &detached {
            if self.rotations[v].len() != 4 {
                return Err(Error::InvalidGraph(format!("vertex {v} is not 4-valent")));
            }
            for (p, &h) in self.rotations[v].iter().enumerate() {
                pos[h] = p;
            }
        }
        let mut walked = vec![false; self.twin.len()];
        for &v in &detached {
            for &start in &self.rotations[v] {
                if walked[start] {
                    continue;
                }
                self.free_loops += 1;
                let mut h = start;
                while !walked[h] {
                    walked[h] = true;
                    let t = self.twin[h];
                    walked[t] = true;
                    h = self.rotations[owner[t]][(pos[t] + 2) % 4];
                }
            }
        }
        for &v in &detached {
            self.rotations[v].clear();
        }
        Ok(())
    }

    /// Checks the rotation degrees, the twin involution and Euler's formula
    /// for the disk closed up by its boundary arcs.
    pub fn validate(&self) -> Result<()> {
        let points = 2 * self.n;
        if self.n == 0 {
            return Err(Error::InvalidGraph("n must be positive".into()));
        }
        for (v, rot) in self.rotations.iter().enumerate() {
            let expected = if v < points { 1 } else { 4 };
            if rot.len() != expected {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has degree {}",
                    rot.len()
                )));
            }
        }
        for (h, &t) in self.twin.iter().enumerate() {
            if t == h || self.twin[t] != h {
                return Err(Error::InvalidGraph(format!(
                    "twin is not an involution at {h}"
                )));
            }
        }
        let faces = self.closed_faces().len();
        let vertices = self.rotations.len() as i64;
        let edges = (self.twin.len() / 2 + points) as i64;
        if vertices - edges + faces as i64 != 2 {
            return Err(Error::InvalidGraph(format!(
                "Euler check failed: V={vertices} E={edges} F={faces}"
            )));
        }
        Ok(())
    }

    /// Face orbits of `d -> next(twin(d))` with the boundary arcs added,
    /// outer face included.  Ids from `half_edge_count()` on are arc darts:
    /// `H + 2k` runs from stub `k` to stub `k + 1`, `H + 2k + 1` back.
    pub fn closed_faces(&self) -> Vec<Vec<usize>> {
        let points = 2 * self.n;
        let real = self.twin.len();
        let total = real + 2 * points;
        let twin = |d: usize| {
            if d < real {
                self.twin[d]
            } else if (d - real).is_multiple_of(2) {
                d + 1
            } else {
                d - 1
            }
        };
        // rotation at stub k: [to k+1, strand, to k-1]
        let next = |d: usize| {
            if d < real {
                let v = self.vertex_of[d];
                if v < points {
                    real + 2 * ((v + points - 1) % points) + 1
                } else {
                    self.next(d)
                }
            } else {
                let k = (d - real) / 2;
                if (d - real).is_multiple_of(2) {
                    self.rotations[k][0]
                } else {
                    real + 2 * ((k + 1) % points)
                }
            }
        };
        let mut seen = vec![false; total];
        let mut faces = Vec::new();
        for start in 0..total {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                orbit.push(d);
                d = next(twin(d));
            }
            faces.push(orbit);
        }
        faces
    }

    /// Faces not touching the boundary, as orbits of real half-edges.
    pub fn internal_faces(&self) -> Vec<Vec<usize>> {
        let real = self.twin.len();
        self.closed_faces()
            .into_iter()
            .filter(|f| f.iter().all(|&d| d < real))
            .collect()
    }

    /// All strands: one per boundary pair, lowest label first, then closed
    /// strands (free loops last, with no half-edges).
    pub fn strands(&self) -> Vec<Strand> {
        let mut out = self.traced_strands();
        for _ in 0..self.free_loops {
            out.push(Strand {
                half_edges: Vec::new(),
                ends: None,
            });
        }
        out
    }

    fn traced_strands(&self) -> Vec<Strand> {
        let points = 2 * self.n;
        let mut walked = vec![false; self.twin.len()];
        let mut out = Vec::new();
        for s in 0..points {
            let h0 = self.rotations[s][0];
            if walked[h0] {
                continue;
            }
            let mut half_edges = Vec::new();
            let mut h = h0;
            let end = loop {
                walked[h] = true;
                half_edges.push(h);
                let t = self.twin[h];
                walked[t] = true;
                let w = self.vertex_of[t];
                if w < points {
                    break w;
                }
                h = self.opposite(t);
            };
            out.push(Strand {
                half_edges,
                ends: Some((s + 1, end + 1)),
            });
        }
        for start in 0..self.twin.len() {
            if walked[start] {
                continue;
            }
            let mut half_edges = Vec::new();
            let mut h = start;
            while !walked[h] {
                walked[h] = true;
                half_edges.push(h);
                let t = self.twin[h];
                walked[t] = true;
                h = self.opposite(t);
            }
            out.push(Strand {
                half_edges,
                ends: None,
            });
        }
        out
    }

    /// Boundary pairing realized by the strands as drawn (no reduction).
    pub fn strand_partners(&self) -> Vec<usize> {
        let mut partner = vec![0; 2 * self.n];
        for s in self.strands() {
            if let Some((a, b)) = s.ends {
                partner[a - 1] = b;
                partner[b - 1] = a;
            }
        }
        partner
    }

    /// Strand index through each half-edge (both halves of an edge agree).
    fn strand_index(&self, strands: &[Strand]) -> Vec<usize> {
        let mut index = vec![GONE; self.twin.len()];
        for (k, s) in strands.iter().enumerate() {
            for &h in &s.half_edges {
                index[h] = k;
                index[self.twin[h]] = k;
            }
        }
        index
    }

    /// No closed strands, no self-crossings, and no two strands crossing twice.
    pub fn is_lensless(&self) -> bool {
        self.free_loops == 0 && self.lensless_ignoring_free_loops()
    }

    pub(crate) fn lensless_ignoring_free_loops(&self) -> bool {
        let strands = self.traced_strands();
        if strands.iter().any(|s| s.ends.is_none()) {
            return false;
        }
        let index = self.strand_index(&strands);
        let mut met = HashMap::new();
        for v in self.crossings() {
            let a = index[self.rotations[v][0]];
            let b = index[self.rotations[v][1]];
            if a == b {
                return false;
            }
            let count = met.entry((a.min(b), a.max(b))).or_insert(0);
            *count += 1;
            if *count > 1 {
                return false;
            }
        }
        true
    }

    /// Relabeling-invariant key: breadth-first numbering from the stubs,
    /// each rotation read from the half-edge it was reached by.
    pub fn canonical_form(&self) -> Vec<(u32, u8)> {
        let points = 2 * self.n;
        let mut order = vec![GONE; self.rotations.len()];
        let mut start = vec![0usize; self.rotations.len()];
        let mut queue = VecDeque::new();
        for v in 0..points {
            order[v] = v;
            queue.push_back(v);
        }
        let mut count = points;
        let mut visit = Vec::with_capacity(self.rotations.len());
        while let Some(v) = queue.pop_front() {
            visit.push(v);
            let rot = &self.rotations[v];
            for k in 0..rot.len() {
                let h = rot[(start[v] + k) % rot.len()];
                let t = self.twin[h];
                let w = self.vertex_of[t];
                if order[w] == GONE {
                    order[w] = count;
                    count += 1;
                    start[w] = self.pos_of[t];
                    queue.push_back(w);
                }
            }
        }
        let mut key = Vec::with_capacity(self.twin.len() + 1);
        for &v in &visit {
            let rot = &self.rotations[v];
            for k in 0..rot.len() {
                let t = self.twin[rot[(start[v] + k) % rot.len()]];
                let w = self.vertex_of[t];
                let len = self.rotations[w].len();
                let p = (self.pos_of[t] + len - start[w]) % len;
                key.push((order[w] as u32, p as u8));
            }
        }
        key.push((self.free_loops as u32, u8::MAX));
        key
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::Matching;

    #[test]
    fn free_loop_reported_as_closed_strand() {
        let g = MedialGraph::from_parts(1, vec![vec![0], vec![1]], vec![1, 0], 1).unwrap();
        let strands = g.strands();
        assert_eq!(strands.len(), 2);
        assert_eq!(strands[0].ends, Some((1, 2)));
        assert_eq!(strands[1].ends, None);
        assert!(!g.is_lensless());
    }

    #[test]
    fn invalid_parts_rejected() {
        // twin not an involution
        assert!(MedialGraph::from_parts(1, vec![vec![0], vec![1]], vec![0, 1], 0).is_err());
        // crossing of degree 2
        let bad =
            MedialGraph::from_parts(1, vec![vec![0], vec![1], vec![2, 3]], vec![2, 3, 0, 1], 0);
        assert!(bad.is_err());
    }

    #[test]
    fn non_planar_rotation_fails_euler() {
        // two chords (1,3), (2,4) drawn without their crossing
        let g = MedialGraph::from_parts(
            2,
            vec![vec![0], vec![1], vec![2], vec![3]],
            vec![2, 3, 0, 1],
            0,
        );
        assert!(matches!(g, Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn dump_round_trip() {
        let g = MedialGraph::from_matching(&Matching::top(3));
        let json = g.to_json();
        let dump: MedialDump = serde_json::from_str(&json).unwrap();
        assert_eq!(MedialGraph::from_dump(&dump).unwrap(), g);
        assert_eq!(dump.vertices[0].label, Some(1));
        assert_eq!(dump.vertices[6].label, None);
    }

    #[test]
    fn detached_component_becomes_free_loops() {
        // stubs 1-2 joined, plus a figure-eight (one crossing, two loop edges)
        let g = MedialGraph::from_parts(
            1,
            vec![vec![0], vec![1], vec![2, 3, 4, 5]],
            vec![1, 0, 3, 2, 5, 4],
            0,
        )
        .unwrap();
        assert_eq!(g.crossing_count(), 0);
        assert_eq!(g.free_loops(), 1);
    }
}
