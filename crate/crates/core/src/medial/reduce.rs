use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;

use super::{MedialGraph, Move, MoveKind};
use crate::error::{Error, Result};
use crate::matching::{BoundaryClass, Matching};

/// Upper bound on diagrams explored by one Yang-Baxter search.
const SEARCH_LIMIT: usize = 200_000;

impl MedialGraph {
    /// Lensless apart from crossing-free closed loops.
    fn is_reduced(&self) -> bool {
        self.lensless_ignoring_free_loops()
    }

    fn removals(&self) -> Vec<Move> {
        let mut moves: Vec<Move> = self
            .applicable_moves()
            .into_iter()
            .filter(|m| m.kind != MoveKind::YangBaxter)
            .collect();
        moves.sort_by_key(|m| m.kind != MoveKind::LoopRemoval);
        moves
    }

    fn yb_moves(&self) -> Vec<Move> {
        self.applicable_moves()
            .into_iter()
            .filter(|m| m.kind == MoveKind::YangBaxter)
            .collect()
    }

    /// Breadth-first search over Yang-Baxter moves for the nearest diagrams
    /// satisfying `goal`; returns the indices (into `yb_moves()`) of first
    /// moves lying on a shortest path, together with one such goal diagram
    /// reached through the smallest index.
    fn yb_search(
        &self,
        goal: impl Fn(&MedialGraph) -> bool,
    ) -> Result<(BTreeSet<usize>, MedialGraph)> {
        if goal(self) {
            return Ok((BTreeSet::new(), self.clone()));
        }
        let mut visited = HashSet::new();
        visited.insert(self.canonical_form());
        let mut layer: Vec<(MedialGraph, BTreeSet<usize>)> = Vec::new();
        for (k, mv) in self.yb_moves().iter().enumerate() {
            let g = self.apply_move(mv)?;
            let key = g.canonical_form();
            if visited.insert(key) {
                layer.push((g, BTreeSet::from([k])));
            } else if let Some(entry) = layer
                .iter_mut()
                .find(|(h, _)| h.canonical_form() == g.canonical_form())
            {
                entry.1.insert(k);
            }
        }
        while !layer.is_empty() {
            let hits: Vec<&(MedialGraph, BTreeSet<usize>)> =
                layer.iter().filter(|(g, _)| goal(g)).collect();
            if !hits.is_empty() {
                let firsts: BTreeSet<usize> =
                    hits.iter().flat_map(|(_, f)| f.iter().copied()).collect();
                let smallest = *firsts.iter().next().unwrap();
                let example = hits
                    .iter()
                    .find(|(_, f)| f.contains(&smallest))
                    .unwrap()
                    .0
                    .clone();
                return Ok((firsts, example));
            }
            if visited.len() > SEARCH_LIMIT {
                return Err(Error::Internal(format!(
                    "Yang-Baxter search exceeded {SEARCH_LIMIT} diagrams"
                )));
            }
            let mut next: Vec<(MedialGraph, BTreeSet<usize>)> = Vec::new();
            let mut slot: HashMap<Vec<(u32, u8)>, usize> = HashMap::new();
            for (g, firsts) in &layer {
                for mv in g.yb_moves() {
                    let h = g.apply_move(&mv)?;
                    let key = h.canonical_form();
                    if let Some(&k) = slot.get(&key) {
                        next[k].1.extend(firsts.iter().copied());
                    } else if visited.insert(key.clone()) {
                        slot.insert(key, next.len());
                        next.push((h, firsts.clone()));
                    }
                }
            }
            layer = next;
        }
        Err(Error::Internal(
            "no diagram reachable by Yang-Baxter moves meets the goal".into(),
        ))
    }

    /// The next reduction move: a loop removal, else a lens removal, else the
    /// first Yang-Baxter move on a shortest path to a diagram with an empty
    /// monogon or bigon.  `None` iff the diagram is already reduced.
    pub fn find_move(&self) -> Result<Option<Move>> {
        if self.is_reduced() {
            return Ok(None);
        }
        if let Some(m) = self.removals().into_iter().next() {
            return Ok(Some(m));
        }
        let (firsts, _) = self.yb_search(|g| !g.removals().is_empty())?;
        let k = *firsts.iter().next().expect("goal not met at the start");
        Ok(Some(self.yb_moves().swap_remove(k)))
    }

    fn reduce_by(&self, mut choose: impl FnMut(usize) -> usize) -> Result<MedialGraph> {
        let mut g = self.clone();
        while !g.is_reduced() {
            let removals = g.removals();
            let mv = if !removals.is_empty() {
                removals[choose(removals.len())].clone()
            } else {
                let (firsts, _) = g.yb_search(|h| !h.removals().is_empty())?;
                let firsts: Vec<usize> = firsts.into_iter().collect();
                g.yb_moves().swap_remove(firsts[choose(firsts.len())])
            };
            g = g.apply_move(&mv)?;
        }
        g.free_loops = 0;
        Ok(g)
    }

    /// A lensless diagram reached with the moves chosen by [`find_move`];
    /// crossing-free closed loops are discarded.
    ///
    /// [`find_move`]: MedialGraph::find_move
    pub fn reduce(&self) -> Result<MedialGraph> {
        self.reduce_by(|_| 0)
    }

    /// As [`MedialGraph::reduce`], choosing uniformly among the available
    /// removals, or among the Yang-Baxter moves that start a shortest path
    /// to one.
    pub fn reduce_randomized(&self, rng: &mut impl Rng) -> Result<MedialGraph> {
        self.reduce_by(|len| rng.gen_range(0..len))
    }

    /// The matching represented by the diagram.
    pub fn to_matching(&self) -> Result<Matching> {
        Matching::new(self.reduce()?.strand_partners())
    }
}

/// The diagram of `eta` after Yang-Baxter moves bring the strands from `i`
/// and `i + 1` straight to a common crossing, with that crossing and its
/// half-edges toward `i` and `i + 1`.
pub fn kappa_preparation(eta: &Matching, i: usize) -> Result<(MedialGraph, usize, [usize; 2])> {
    if eta.abc_class(i) != BoundaryClass::B {
        return Err(Error::NotInB {
            matching: eta.to_string(),
            i,
        });
    }
    let points = eta.points();
    let corner = move |g: &MedialGraph| -> Option<(usize, [usize; 2])> {
        let t = g.twin(g.rotation(i - 1)[0]);
        let u = g.twin(g.rotation(i % points)[0]);
        let q = g.vertex(t);
        (g.is_crossing(q) && g.vertex(u) == q && (g.next(t) == u || g.next(u) == t))
            .then_some((q, [t, u]))
    };
    let start = MedialGraph::from_matching(eta);
    let (_, g) = start.yb_search(|g| corner(g).is_some())?;
    let (q, ends) = corner(&g).expect("search goal");
    Ok((g, q, ends))
}

/// Uncrosses the first crossing of the strands from `i` and `i + 1` so that
/// `i` is joined to `i + 1`, and returns the matching represented.
pub fn kappa_diagram(eta: &Matching, i: usize) -> Result<Matching> {
    let (g, q, [t, u]) = kappa_preparation(eta, i)?;
    let (a, b) = if g.next(t) == u {
        (g.next(u), g.next(g.next(u)))
    } else {
        (g.next(t), g.next(g.next(t)))
    };
    g.resolve_joining(q, [(t, u), (a, b)])?.to_matching()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::enumerate_matchings;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(n: usize, chords: &[(usize, usize)]) -> Matching {
        Matching::from_chords(n, chords).unwrap()
    }

    #[test]
    fn lensless_graph_is_fixed() {
        let g = MedialGraph::from_matching(&Matching::top(3));
        assert_eq!(g.find_move().unwrap(), None);
        assert_eq!(g.reduce().unwrap(), g);
    }

    #[test]
    fn round_trip_through_reduction() {
        for n in 1..=3 {
            for tau in enumerate_matchings(n) {
                assert_eq!(MedialGraph::from_matching(&tau).to_matching().unwrap(), tau);
            }
        }
    }

    #[test]
    fn smoothing_top_3_toward_1_2_reduces_to_one_crossing() {
        let top = MedialGraph::from_matching(&Matching::top(3));
        let (v, dir) = top
            .crossings()
            .flat_map(|v| [(v, 0), (v, 1)])
            .find(|&(v, d)| top.resolve_crossing(v, d).unwrap().strand_partners()[0] == 2)
            .unwrap();
        let g = top.resolve_crossing(v, dir).unwrap();
        assert!(!g.is_lensless());
        let r = g.reduce().unwrap();
        assert!(r.is_lensless());
        assert_eq!(r.crossing_count(), 1);
        assert_eq!(g.to_matching().unwrap(), m(3, &[(1, 2), (3, 5), (4, 6)]));
    }

    #[test]
    fn covers_stay_lensless_after_one_smoothing() {
        for tau in enumerate_matchings(3) {
            let g = MedialGraph::from_matching(&tau);
            for v in g.crossings() {
                for dir in 0..2 {
                    let r = g.resolve_crossing(v, dir).unwrap();
                    let sigma = r.to_matching().unwrap();
                    if sigma.crossing_number() + 1 == tau.crossing_number() {
                        assert_eq!(sigma.partners(), &r.strand_partners()[..]);
                    }
                }
            }
        }
    }

    #[test]
    fn free_loop_is_ignored() {
        let tau = m(2, &[(1, 2), (3, 4)]);
        let base = MedialGraph::from_matching(&tau);
        let mut dump = base.dump();
        dump.free_loops = 1;
        let g = MedialGraph::from_dump(&dump).unwrap();
        assert!(!g.is_lensless());
        assert_eq!(g.to_matching().unwrap(), tau);
        assert_eq!(g.reduce().unwrap().free_loops(), 0);
    }

    #[test]
    fn confluence_on_small_fixture() {
        let top = MedialGraph::from_matching(&Matching::top(3));
        let g = top
            .resolve_crossing(top.crossings().next().unwrap(), 0)
            .unwrap();
        let expected = g.to_matching().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = g.reduce_randomized(&mut rng).unwrap();
            assert_eq!(Matching::new(r.strand_partners()).unwrap(), expected);
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(
            kappa_diagram(&Matching::top(2), 1).unwrap(),
            m(2, &[(1, 2), (3, 4)])
        );
        assert_eq!(
            kappa_diagram(&Matching::top(3), 1).unwrap(),
            m(3, &[(1, 2), (3, 5), (4, 6)])
        );
        let not_b = m(2, &[(1, 2), (3, 4)]);
        assert!(matches!(
            kappa_diagram(&not_b, 1),
            Err(Error::NotInB { .. })
        ));
    }

    #[test]
    fn yang_baxter_fixture_for_interior_strand() {
        // some smoothing of a diagram of P_4 leaves a lens crossed by a strand
        let found = enumerate_matchings(4).into_iter().any(|tau| {
            let g = MedialGraph::from_matching(&tau);
            g.crossings().any(|v| {
                (0..2).any(|d| {
                    let r = g.resolve_crossing(v, d).unwrap();
                    matches!(
                        r.find_move().unwrap(),
                        Some(Move {
                            kind: MoveKind::YangBaxter,
                            ..
                        })
                    )
                })
            })
        });
        assert!(found);
    }
}
