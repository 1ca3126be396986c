//! Augmentation of a connected plane graph to a maximal planar one
//! (every face a triangle, E = 3V - 6) by repeatedly cutting ears off
//! non-triangular face walks, skipping chords that would create parallel
//! edges or self-loops.

use crate::plane_graph::{FaceWalk, GraphError, PlaneGraph, Vertex};
use std::collections::BTreeSet;

/// Record of what augmentation added and how faces map back.
#[derive(Debug, Clone)]
pub struct AugmentationRecord {
    /// Edges added, as (min, max) index pairs in insertion order.
    pub added_edges: Vec<(Vertex, Vertex)>,
    /// For each face of the augmented graph (indexed as in
    /// `PlaneGraph::faces`), the index of the original face containing it.
    pub face_origin: Vec<usize>,
}

struct WorkFace {
    walk: FaceWalk,
    origin: usize,
    outer: bool,
}

/// Triangulate every face of `g`, producing a maximal planar graph that
/// contains `g` as a sub-embedding.
pub fn augment_to_maximal(g: &PlaneGraph) -> Result<(PlaneGraph, AugmentationRecord), GraphError> {
    if g.vertex_count() < 3 {
        return Err(GraphError::TooFewVertices(g.vertex_count(), 3));
    }
    let mut rotation: Vec<Vec<Vertex>> = g.rotations().to_vec();
    let mut edge_set: BTreeSet<(Vertex, Vertex)> = g.edges().into_iter().collect();
    let mut added: Vec<(Vertex, Vertex)> = Vec::new();

    // Finished triangles with their original-face origin.
    let mut done: Vec<(FaceWalk, usize, bool)> = Vec::new();
    let mut queue: Vec<WorkFace> = g
        .faces()
        .iter()
        .enumerate()
        .map(|(i, f)| WorkFace {
            walk: f.clone(),
            origin: i,
            outer: i == g.outer_face_index(),
        })
        .collect();

    while let Some(mut face) = queue.pop() {
        if face.walk.len() <= 3 {
            done.push((face.walk, face.origin, face.outer));
            continue;
        }
        let m = face.walk.len();
        let mut cut_at: Option<usize> = None;
        for i in 0..m {
            let a = face.walk[(i + m - 1) % m];
            let x = face.walk[i];
            let b = face.walk[(i + 1) % m];
            debug_assert!(a != x && b != x);
            if a != b && !edge_set.contains(&ordered(a, b)) {
                cut_at = Some(i);
                break;
            }
        }
        let i = match cut_at {
            Some(i) => i,
            None => return Err(GraphError::AugmentationStuck),
        };
        let a = face.walk[(i + m - 1) % m];
        let x = face.walk[i];
        let b = face.walk[(i + 1) % m];

        // Draw chord (a, b) inside this face: in rot(a) the new neighbor b
        // goes immediately after x; in rot(b), immediately before x.
        let pa = rotation[a].iter().position(|&w| w == x).expect("x in rot(a)");
        rotation[a].insert(pa + 1, b);
        let pb = rotation[b].iter().position(|&w| w == x).expect("x in rot(b)");
        rotation[b].insert(pb, a);
        edge_set.insert(ordered(a, b));
        added.push(ordered(a, b));

        done.push((vec![a, x, b], face.origin, false));
        face.walk.remove(i);
        queue.push(face);
    }

    let v = g.vertex_count();
    let e = edge_set.len();
    if e != 3 * v - 6 {
        return Err(GraphError::NotMaximal(format!(
            "augmentation produced E={e}, expected {}",
            3 * v - 6
        )));
    }

    // The outer designation follows the reduced walk of the original outer
    // face down to its final triangle.
    let outer_walk = done
        .iter()
        .find(|(_, _, outer)| *outer)
        .map(|(w, _, _)| w.clone())
        .expect("outer lineage surviving");

    let ids = g.ids().to_vec();
    let index = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let augmented = PlaneGraph::from_indexed(ids, index, rotation, outer_walk)?;

    // Match traced faces of the rebuilt graph to the tracked triangles to
    // recover the origin of every augmented face.
    let mut face_origin = vec![usize::MAX; augmented.face_count()];
    let mut tracked: Vec<(FaceWalk, usize)> = done
        .into_iter()
        .map(|(w, o, _)| (canonical(w), o))
        .collect();
    for (fi, f) in augmented.faces().iter().enumerate() {
        let pos = tracked
            .iter()
            .position(|(w, _)| w == f)
            .unwrap_or_else(|| panic!("augmented face {f:?} missing from tracked triangles"));
        face_origin[fi] = tracked.swap_remove(pos).1;
    }
    assert!(tracked.is_empty(), "tracked triangles left over");

    Ok((augmented, AugmentationRecord {
        added_edges: added,
        face_origin,
    }))
}

fn ordered(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Canonicalize one cyclic walk (rotate to lexicographically smallest),
/// matching the form `plane_graph::trace_faces` produces.
fn canonical(walk: FaceWalk) -> FaceWalk {
    let n = walk.len();
    if n == 0 {
        return walk;
    }
    let mut best = 0;
    for s in 1..n {
        for k in 0..n {
            let a = walk[(s + k) % n];
            let b = walk[(best + k) % n];
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    (0..n).map(|k| walk[(best + k) % n]).collect()
}

/// Sanity helper used by tests and the drawer: check the record's claim
/// that removing the added edges recovers the input embedding.
pub fn contains_as_subembedding(original: &PlaneGraph, augmented: &PlaneGraph) -> bool {
    if original.vertex_count() != augmented.vertex_count() {
        return false;
    }
    for (u, neigh) in original.rotations().iter().enumerate() {
        // The original rotation must be a subsequence (cyclically) of the
        // augmented rotation.
        let aug: Vec<Vertex> = augmented.rotation(u).to_vec();
        let orig: Vec<Vertex> = neigh.clone();
        if orig.is_empty() {
            continue;
        }
        let filtered: Vec<Vertex> = aug
            .iter()
            .copied()
            .filter(|w| orig.contains(w))
            .collect();
        if filtered.len() != orig.len() {
            return false;
        }
        // Compare cyclically.
        let start = match filtered.iter().position(|&w| w == orig[0]) {
            Some(s) => s,
            None => return false,
        };
        let n = orig.len();
        if !(0..n).all(|k| filtered[(start + k) % n] == orig[k]) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::parse_plane_graph;

    #[test]
    fn already_maximal_unchanged() {
        let g = parse_plane_graph(
            "v a\nv b\nv c\nrot a: b c\nrot b: c a\nrot c: a b\nouter: b a c\n",
        )
        .unwrap();
        let (aug, rec) = augment_to_maximal(&g).unwrap();
        assert!(rec.added_edges.is_empty());
        assert_eq!(aug.edge_count(), 3);
        assert!(aug.is_maximal_planar());
    }

    #[test]
    fn four_cycle_becomes_k4() {
        // ccw square a,b,c,d: inner face walk (a,b,c,d), outer reversed.
        let g = parse_plane_graph(
            "v a\nv b\nv c\nv d\nrot a: b d\nrot b: c a\nrot c: d b\nrot d: a c\nouter: d c b a\n",
        )
        .unwrap();
        assert_eq!(g.face_count(), 2);
        let (aug, rec) = augment_to_maximal(&g).unwrap();
        assert_eq!(rec.added_edges.len(), 2);
        assert_eq!(aug.edge_count(), 6);
        assert!(aug.is_maximal_planar());
        assert!(contains_as_subembedding(&g, &aug));
        // One chord per quadrilateral face: the two added chords are the two
        // diagonals (one inside, one outside).
        let mut chords = rec.added_edges.clone();
        chords.sort_unstable();
        assert_eq!(chords.len(), 2);
        assert_ne!(chords[0], chords[1]);
    }

    #[test]
    fn three_vertex_path_becomes_triangle() {
        let g = parse_plane_graph("v a\nv b\nv c\nrot a: b\nrot b: a c\nrot c: b\nouter: a b c b\n")
            .unwrap();
        let (aug, rec) = augment_to_maximal(&g).unwrap();
        assert_eq!(rec.added_edges.len(), 1);
        assert_eq!(rec.added_edges[0], (0, 2));
        assert_eq!(aug.edge_count(), 3);
        assert!(aug.is_maximal_planar());
    }

    #[test]
    fn face_origin_is_partition() {
        let g = parse_plane_graph(
            "v a\nv b\nv c\nv d\nrot a: b d\nrot b: c a\nrot c: d b\nrot d: a c\nouter: d c b a\n",
        )
        .unwrap();
        let (aug, rec) = augment_to_maximal(&g).unwrap();
        assert_eq!(rec.face_origin.len(), aug.face_count());
        assert!(rec.face_origin.iter().all(|&o| o < g.face_count()));
        // Both original faces are represented.
        let set: BTreeSet<usize> = rec.face_origin.iter().copied().collect();
        assert_eq!(set.len(), g.face_count());
    }

    #[test]
    fn star_and_trees_augment() {
        let star = parse_plane_graph(
            "v h\nv a\nv b\nv c\nrot h: a b c\nrot a: h\nrot b: h\nrot c: h\nouter: a h b h c h\n",
        )
        .unwrap();
        let (aug, _) = augment_to_maximal(&star).unwrap();
        assert!(aug.is_maximal_planar());
        assert!(contains_as_subembedding(&star, &aug));
    }

    #[test]
    fn too_few_vertices_rejected() {
        let g = parse_plane_graph("v a\nv b\nrot a: b\nrot b: a\nouter: a b\n").unwrap();
        assert!(matches!(
            augment_to_maximal(&g),
            Err(GraphError::TooFewVertices(2, 3))
        ));
    }
}
