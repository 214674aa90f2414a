use std::cmp::Ordering;

use super::MedialGraph;
use crate::matching::Matching;

type Point = (i128, i128);

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: Point, b: Point) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

/// Intersection parameter along segment `p0 -> p1` with segment `q0 -> q1`,
/// as a fraction with positive denominator.
fn param(p0: Point, p1: Point, q0: Point, q1: Point) -> (i128, i128) {
    let d = sub(p1, p0);
    let e = sub(q1, q0);
    let num = cross(sub(q0, p0), e);
    let den = cross(d, e);
    if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

fn cmp_frac(a: (i128, i128), b: (i128, i128)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

/// Boundary points in convex counterclockwise position on `y = x^2`.
fn points(count: usize, attempt: u64) -> Vec<Point> {
    (1..=count as i128)
        .map(|k| {
            let x = if attempt == 0 {
                k
            } else {
                64 * k + ((k * k * (2 * attempt as i128 + 1)) % 61)
            };
            (x, x * x)
        })
        .collect()
}

struct Layout {
    /// Crossing vertices along each chord, ordered from its lower endpoint.
    along: Vec<Vec<usize>>,
    /// For each crossing: the two chord indices and whether the second
    /// points counterclockwise of the first.
    crossings: Vec<(usize, usize, bool)>,
}

fn layout(chords: &[(usize, usize)], pts: &[Point]) -> Option<Layout> {
    let mut crossings = Vec::new();
    let mut hits: Vec<Vec<((i128, i128), usize)>> = vec![Vec::new(); chords.len()];
    for a in 0..chords.len() {
        for b in a + 1..chords.len() {
            let (a0, a1) = chords[a];
            let (b0, b1) = chords[b];
            let interleave = (a0 < b0 && b0 < a1) != (a0 < b1 && b1 < a1);
            if !interleave {
                continue;
            }
            let (pa, qa) = (pts[a0 - 1], pts[a1 - 1]);
            let (pb, qb) = (pts[b0 - 1], pts[b1 - 1]);
            let id = crossings.len();
            let ccw = cross(sub(qa, pa), sub(qb, pb)) > 0;
            crossings.push((a, b, ccw));
            hits[a].push((param(pa, qa, pb, qb), id));
            hits[b].push((param(pb, qb, pa, qa), id));
        }
    }
    let mut along = Vec::with_capacity(chords.len());
    for mut h in hits {
        h.sort_by(|x, y| cmp_frac(x.0, y.0));
        if h.windows(2)
            .any(|w| cmp_frac(w[0].0, w[1].0) == Ordering::Equal)
        {
            return None;
        }
        along.push(h.into_iter().map(|(_, id)| id).collect());
    }
    Some(Layout { along, crossings })
}

impl MedialGraph {
    /// A lensless diagram of `tau` from straight chords between points in
    /// convex position; crossings are exactly the interleaving chord pairs.
    pub fn from_matching(tau: &Matching) -> Self {
        let n = tau.n();
        let chords: Vec<(usize, usize)> = tau.chords().iter().map(|c| (c.lo, c.hi)).collect();
        let layout = (0..)
            .find_map(|attempt| layout(&chords, &points(2 * n, attempt)))
            .expect("some perturbation avoids triple points");

        let points = 2 * n;
        let crossing_count = layout.crossings.len();
        // per crossing: [fwd, back] half-edge for each of its two chords
        let mut slots = vec![[[usize::MAX; 2]; 2]; crossing_count];
        let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); points + crossing_count];
        let mut twin = Vec::new();
        let new_edge = |twin: &mut Vec<usize>| {
            let h = twin.len();
            twin.push(h + 1);
            twin.push(h);
            (h, h + 1)
        };
        for (c, &(lo, hi)) in chords.iter().enumerate() {
            let mut path: Vec<Option<usize>> = vec![None];
            path.extend(layout.along[c].iter().map(|&x| Some(x)));
            path.push(None);
            for w in path.windows(2) {
                let (out, back) = new_edge(&mut twin);
                match w[0] {
                    None => rotations[lo - 1].push(out),
                    Some(x) => {
                        let side = usize::from(layout.crossings[x].1 == c);
                        slots[x][side][0] = out;
                    }
                }
                match w[1] {
                    None => rotations[hi - 1].push(back),
                    Some(x) => {
                        let side = usize::from(layout.crossings[x].1 == c);
                        slots[x][side][1] = back;
                    }
                }
            }
        }
        for (x, &(_, _, ccw)) in layout.crossings.iter().enumerate() {
            let [[a_fwd, a_back], [b_fwd, b_back]] = slots[x];
            rotations[points + x] = if ccw {
                vec![a_fwd, b_fwd, a_back, b_back]
            } else {
                vec![a_fwd, b_back, a_back, b_fwd]
            };
        }
        MedialGraph::from_parts(n, rotations, twin, 0)
            .expect("straight-line drawing is a valid map")
    }
}
