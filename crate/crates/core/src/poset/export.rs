use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Element, GradedPoset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub id: usize,
    pub partner: Option<Vec<usize>>,
    pub rank: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PosetJson {
    pub n: usize,
    pub includes_bottom: bool,
    pub elements: Vec<ElementJson>,
    pub covers: Vec<[usize; 2]>,
}

impl GradedPoset {
    pub fn to_json_value(&self) -> PosetJson {
        PosetJson {
            n: self.n,
            includes_bottom: self.includes_bottom,
            elements: (0..self.len())
                .map(|id| ElementJson {
                    id,
                    partner: self.matching(id).map(|m| m.partners().to_vec()),
                    rank: self.rank(id),
                })
                .collect(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("poset serializes")
    }

    /// Hasse diagram in DOT, bottom to top, one `rank=same` group per rank.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
        let mut by_rank: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for id in 0..self.len() {
            by_rank.entry(self.rank(id)).or_default().push(id);
        }
        for (rank, ids) in &by_rank {
            writeln!(
                out,
                "  subgraph rank_{} {{\n    rank=same;",
                rank_tag(*rank)
            )
            .unwrap();
            for &id in ids {
                let label = match &self.elements[id] {
                    Element::Bottom => "0̂".to_string(),
                    Element::Matching(m) => m
                        .partners()
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    Element::Abstract(k) => k.to_string(),
                };
                writeln!(out, "    n{id} [label=\"{label}\"];").unwrap();
            }
            out.push_str("  }\n");
        }
        for &(a, b) in &self.covers {
            writeln!(out, "  n{a} -> n{b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn rank_tag(rank: i32) -> String {
    if rank < 0 {
        format!("m{}", -rank)
    } else {
        rank.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot_counts(dot: &str) -> (usize, usize) {
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        (nodes, edges)
    }

    #[test]
    fn dot_counts_match_hasse_diagrams() {
        assert_eq!(dot_counts(&GradedPoset::build(3, true).to_dot()), (16, 32));
        assert_eq!(dot_counts(&GradedPoset::build(2, true).to_dot()), (4, 4));
        assert_eq!(dot_counts(&GradedPoset::build(1, true).to_dot()), (2, 1));
    }

    #[test]
    fn json_round_trip() {
        let p = GradedPoset::build(2, true);
        let text = p.to_json();
        let back: PosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p.to_json_value());
        assert!(text.contains("\"includesBottom\": true"));
        assert_eq!(back.elements[0].partner, None);
        assert_eq!(back.elements[0].rank, -1);
        assert_eq!(back.covers.len(), 4);
    }
}
