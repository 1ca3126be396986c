//! Canonical orderings of maximal planar graphs, computed by reverse
//! deletion: repeatedly remove a non-base outer vertex not incident to a
//! chord of the current boundary cycle.

use crate::plane_graph::{GraphError, PlaneGraph, Vertex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    Ear,
    Fan,
}

/// One incremental attachment: `vertex` joins the disk along the contiguous
/// boundary path `path` (in boundary-walk order, endpoints included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingStep {
    pub vertex: Vertex,
    pub path: Vec<Vertex>,
    pub kind: StepKind,
}

/// Vertex sequence v1..vn plus per-step attachment paths.
#[derive(Debug, Clone)]
pub struct CanonicalOrdering {
    pub sequence: Vec<Vertex>,
    pub base_edge: (Vertex, Vertex),
    /// Steps for i = 4..=n, in placement order.
    pub steps: Vec<OrderingStep>,
    /// Boundary walk of the initial triangle D3, oriented like the outer
    /// face walk of the sub-embedding.
    pub base_walk: [Vertex; 3],
}

/// How to break ties among removal candidates.
#[derive(Debug, Clone, Copy)]
pub enum TieBreak {
    /// Smallest vertex id (string order); fully deterministic.
    SmallestId,
    /// Uniform choice from a ChaCha stream seeded per run.
    Seeded(u64),
}

pub fn canonical_ordering(
    g: &PlaneGraph,
    base_edge: (Vertex, Vertex),
    tie_break: TieBreak,
) -> Result<CanonicalOrdering, GraphError> {
    if !g.is_maximal_planar() {
        return Err(GraphError::NotMaximal(format!(
            "V={}, E={}, expected E={}",
            g.vertex_count(),
            g.edge_count(),
            3 * g.vertex_count().max(2) - 6
        )));
    }
    let (v1, v2) = base_edge;
    if !g.edge_on_outer_face(v1, v2) {
        return Err(GraphError::BaseEdgeNotOnOuterFace(
            g.id_of(v1).to_string(),
            g.id_of(v2).to_string(),
        ));
    }

    let n = g.vertex_count();
    let mut rng = match tie_break {
        TieBreak::SmallestId => None,
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };

    let mut alive = vec![true; n];
    let mut boundary: Vec<Vertex> = g.outer_face().clone();
    let mut steps_rev: Vec<OrderingStep> = Vec::new();

    for i in (4..=n).rev() {
        let on_boundary = |v: Vertex, b: &[Vertex]| b.contains(&v);
        let mut candidates: Vec<usize> = (0..boundary.len())
            .filter(|&k| {
                let b = boundary[k];
                if b == v1 || b == v2 {
                    return false;
                }
                let deg_on_boundary = g
                    .rotation(b)
                    .iter()
                    .filter(|&&w| alive[w] && on_boundary(w, &boundary))
                    .count();
                deg_on_boundary == 2
            })
            .collect();
        if candidates.is_empty() {
            return Err(GraphError::NoOrderingCandidate(i));
        }
        candidates.sort_by(|&a, &b| g.id_of(boundary[a]).cmp(g.id_of(boundary[b])));
        let pick = match &mut rng {
            None => candidates[0],
            Some(r) => candidates[r.random_range(0..candidates.len())],
        };

        let m = boundary.len();
        let b = boundary[pick];
        let walk_pred = boundary[(pick + m - 1) % m];
        let walk_succ = boundary[(pick + 1) % m];

        // Attachment path: alive neighbors of b in counterclockwise rotation
        // order, rotated to start at the walk predecessor; it must end at
        // the walk successor.
        let alive_neigh: Vec<Vertex> = {
            alive[b] = false;
            g.rotation(b).iter().copied().filter(|&w| alive[w]).collect()
        };
        let start = alive_neigh
            .iter()
            .position(|&w| w == walk_pred)
            .ok_or(GraphError::NoOrderingCandidate(i))?;
        let path: Vec<Vertex> = (0..alive_neigh.len())
            .map(|k| alive_neigh[(start + k) % alive_neigh.len()])
            .collect();
        if *path.last().unwrap() != walk_succ || path.len() < 2 {
            return Err(GraphError::NoOrderingCandidate(i));
        }
        debug_assert!(!path_contains_edge(&path, v1, v2), "path covers base edge");

        // New boundary: replace b by the interior path vertices.
        let mut new_boundary = Vec::with_capacity(m - 1 + path.len() - 2);
        for (k, &w) in boundary.iter().enumerate() {
            if k == pick {
                new_boundary.extend_from_slice(&path[1..path.len() - 1]);
            } else {
                new_boundary.push(w);
            }
        }
        boundary = new_boundary;

        let kind = if path.len() == 2 { StepKind::Ear } else { StepKind::Fan };
        steps_rev.push(OrderingStep { vertex: b, path, kind });
    }

    // Remaining vertices: v1, v2 and the apex of the face behind the base
    // edge.
    debug_assert_eq!(boundary.len(), 3);
    let v3 = *boundary
        .iter()
        .find(|&&w| w != v1 && w != v2)
        .expect("third base vertex");
    let base_walk = [boundary[0], boundary[1], boundary[2]];

    let mut sequence = vec![v1, v2, v3];
    steps_rev.reverse();
    sequence.extend(steps_rev.iter().map(|s| s.vertex));

    Ok(CanonicalOrdering {
        sequence,
        base_edge,
        steps: steps_rev,
        base_walk,
    })
}

fn path_contains_edge(path: &[Vertex], u: Vertex, v: Vertex) -> bool {
    path.windows(2)
        .any(|w| (w[0], w[1]) == (u, v) || (w[0], w[1]) == (v, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::parse_plane_graph;

    fn k4() -> PlaneGraph {
        parse_plane_graph(
            "v a\nv b\nv c\nv d\n\
             rot a: b d c\nrot b: c d a\nrot c: a d b\nrot d: c a b\n\
             outer: b a c\n",
        )
        .unwrap()
    }

    #[test]
    fn triangle_has_no_steps() {
        let g = parse_plane_graph(
            "v a\nv b\nv c\nrot a: b c\nrot b: c a\nrot c: a b\nouter: b a c\n",
        )
        .unwrap();
        let base = (
            g.vertex_by_id("a").unwrap(),
            g.vertex_by_id("b").unwrap(),
        );
        let ord = canonical_ordering(&g, base, TieBreak::SmallestId).unwrap();
        assert_eq!(ord.sequence.len(), 3);
        assert!(ord.steps.is_empty());
    }

    #[test]
    fn k4_ordering_and_fan_path() {
        let g = k4();
        let a = g.vertex_by_id("a").unwrap();
        let b = g.vertex_by_id("b").unwrap();
        let c = g.vertex_by_id("c").unwrap();
        let d = g.vertex_by_id("d").unwrap();
        let ord = canonical_ordering(&g, (a, b), TieBreak::SmallestId).unwrap();
        // The interior vertex d is v3; the remaining outer vertex c fans
        // over the path a-d-b.
        assert_eq!(ord.sequence, vec![a, b, d, c]);
        assert_eq!(ord.steps.len(), 1);
        assert_eq!(ord.steps[0].vertex, c);
        assert_eq!(ord.steps[0].path, vec![a, d, b]);
        assert_eq!(ord.steps[0].kind, StepKind::Fan);
    }

    #[test]
    fn base_edge_must_be_on_outer_face() {
        let g = k4();
        let a = g.vertex_by_id("a").unwrap();
        let d = g.vertex_by_id("d").unwrap();
        assert!(matches!(
            canonical_ordering(&g, (a, d), TieBreak::SmallestId),
            Err(GraphError::BaseEdgeNotOnOuterFace(_, _))
        ));
    }

    #[test]
    fn non_maximal_rejected() {
        let g = parse_plane_graph(
            "v a\nv b\nv c\nv d\nrot a: b d\nrot b: c a\nrot c: d b\nrot d: a c\nouter: d c b a\n",
        )
        .unwrap();
        assert!(matches!(
            canonical_ordering(&g, (0, 1), TieBreak::SmallestId),
            Err(GraphError::NotMaximal(_))
        ));
    }

    #[test]
    fn seeded_tie_break_is_deterministic() {
        let g = k4();
        let a = g.vertex_by_id("a").unwrap();
        let b = g.vertex_by_id("b").unwrap();
        let o1 = canonical_ordering(&g, (a, b), TieBreak::Seeded(7)).unwrap();
        let o2 = canonical_ordering(&g, (a, b), TieBreak::Seeded(7)).unwrap();
        assert_eq!(o1.sequence, o2.sequence);
        assert_eq!(o1.steps, o2.steps);
    }
}
