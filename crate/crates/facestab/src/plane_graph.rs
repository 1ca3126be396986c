//! Embedded planar graphs given by a rotation system (counterclockwise
//! neighbor order per vertex) plus a designated outer face.
//!
//! Face tracing convention: the successor of dart `u -> v` is
//! `v -> prev_rot(v, u)`, the cyclic predecessor of `u` in the rotation at
//! `v`. In a drawing consistent with the rotations, faces traced this way
//! have their interior on the left of each dart, so inner face cycles are
//! counterclockwise and the outer face cycle is clockwise.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("parallel edge: `{1}` listed twice in rotation of `{0}`")]
    ParallelEdge(String, String),
    #[error("asymmetric rotation: `{0}` lists `{1}` but not vice versa")]
    AsymmetricRotation(String, String),
    #[error("Euler check failed: V={v}, E={e}, F={f} (expected V-E+F=2; embedding is non-planar or disconnected)")]
    EulerCheckFailed { v: usize, e: usize, f: usize },
    #[error("declared outer face does not match any traced face")]
    OuterFaceNotFound,
    #[error("missing outer face declaration")]
    MissingOuterFace,
    #[error("graph has {0} vertices; at least {1} required")]
    TooFewVertices(usize, usize),
    #[error("graph is not maximal planar: {0}")]
    NotMaximal(String),
    #[error("base edge ({0}, {1}) is not on the outer face")]
    BaseEdgeNotOnOuterFace(String, String),
    #[error("augmentation stuck: no admissible ear chord in any face")]
    AugmentationStuck,
    #[error("no canonical-ordering candidate at step {0}; embedding is not a valid triangulation")]
    NoOrderingCandidate(usize),
}

/// Dense internal vertex index.
pub type Vertex = usize;

/// A face as the cyclic sequence of dart origins, in trace order.
pub type FaceWalk = Vec<Vertex>;

/// A simple planar graph with a fixed combinatorial embedding.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    ids: Vec<String>,
    index: HashMap<String, Vertex>,
    rotation: Vec<Vec<Vertex>>,
    faces: Vec<FaceWalk>,
    outer_face: usize,
    edge_count: usize,
}

impl PlaneGraph {
    /// Build and validate a plane graph from string-id rotations and the
    /// outer face walk. Rotations are counterclockwise neighbor orders.
    pub fn new(
        ids: Vec<String>,
        rotations_by_id: Vec<Vec<String>>,
        outer: Vec<String>,
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let mut rotation = vec![Vec::new(); ids.len()];
        for (i, neigh) in rotations_by_id.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for name in neigh {
                let j = *index
                    .get(name)
                    .ok_or_else(|| GraphError::UnknownVertex(name.clone()))?;
                if j == i {
                    return Err(GraphError::SelfLoop(ids[i].clone()));
                }
                if !seen.insert(j) {
                    return Err(GraphError::ParallelEdge(ids[i].clone(), name.clone()));
                }
                rotation[i].push(j);
            }
        }
        let outer_ids: Result<Vec<Vertex>, GraphError> = outer
            .iter()
            .map(|name| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex(name.clone()))
            })
            .collect();
        Self::from_indexed(ids, index, rotation, outer_ids?)
    }

    /// Internal constructor over dense indices.
    pub fn from_indexed(
        ids: Vec<String>,
        index: HashMap<String, Vertex>,
        rotation: Vec<Vec<Vertex>>,
        outer: Vec<Vertex>,
    ) -> Result<Self, GraphError> {
        // Symmetry.
        for (u, neigh) in rotation.iter().enumerate() {
            for &v in neigh {
                if !rotation[v].contains(&u) {
                    return Err(GraphError::AsymmetricRotation(
                        ids[u].clone(),
                        ids[v].clone(),
                    ));
                }
            }
        }
        let edge_count: usize = rotation.iter().map(Vec::len).sum::<usize>() / 2;
        let faces = trace_faces(&rotation);
        let v = ids.len();
        let f = faces.len();
        if v == 0 || v + f != edge_count + 2 {
            return Err(GraphError::EulerCheckFailed {
                v,
                e: edge_count,
                f,
            });
        }
        if outer.is_empty() {
            return Err(GraphError::MissingOuterFace);
        }
        let outer_face = match find_face(&faces, &outer) {
            Some(i) => i,
            None => {
                // Accept a reversed listing, normalizing to the traced
                // orientation.
                let mut rev = outer.clone();
                rev.reverse();
                find_face(&faces, &rev).ok_or(GraphError::OuterFaceNotFound)?
            }
        };
        Ok(PlaneGraph {
            ids,
            index,
            rotation,
            faces,
            outer_face,
            edge_count,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id_of(&self, v: Vertex) -> &str {
        &self.ids[v]
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<Vertex> {
        self.index.get(id).copied()
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rotation[u].contains(&v)
    }

    /// All undirected edges as (min, max) pairs, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, neigh) in self.rotation.iter().enumerate() {
            for &v in neigh {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn faces(&self) -> &[FaceWalk] {
        &self.faces
    }

    pub fn outer_face_index(&self) -> usize {
        self.outer_face
    }

    pub fn outer_face(&self) -> &FaceWalk {
        &self.faces[self.outer_face]
    }

    /// Whether undirected edge {u, v} lies on the outer face walk.
    pub fn edge_on_outer_face(&self, u: Vertex, v: Vertex) -> bool {
        let w = self.outer_face();
        (0..w.len()).any(|i| {
            let a = w[i];
            let b = w[(i + 1) % w.len()];
            (a, b) == (u, v) || (a, b) == (v, u)
        })
    }

    /// True when every face is a triangle and E = 3V - 6.
    pub fn is_maximal_planar(&self) -> bool {
        self.vertex_count() >= 3
            && self.edge_count == 3 * self.vertex_count() - 6
            && self.faces.iter().all(|f| f.len() == 3)
    }

    /// Serialize to the external text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for id in &self.ids {
            out.push_str(&format!("v {id}\n"));
        }
        for (i, neigh) in self.rotation.iter().enumerate() {
            out.push_str(&format!("rot {}:", self.ids[i]));
            for &j in neigh {
                out.push_str(&format!(" {}", self.ids[j]));
            }
            out.push('\n');
        }
        out.push_str("outer:");
        for &v in self.outer_face() {
            out.push_str(&format!(" {}", self.ids[v]));
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for PlaneGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PlaneGraph(V={}, E={}, F={})",
            self.vertex_count(),
            self.edge_count,
            self.face_count()
        )
    }
}

/// Trace all faces of a rotation system. Each dart (directed edge) belongs
/// to exactly one face; faces are returned as dart-origin cycles, rotated so
/// the smallest (vertex, successor) pair comes first, and sorted for
/// determinism.
pub fn trace_faces(rotation: &[Vec<Vertex>]) -> Vec<FaceWalk> {
    let mut pos: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for (u, neigh) in rotation.iter().enumerate() {
        for (k, &v) in neigh.iter().enumerate() {
            pos.insert((u, v), k);
        }
    }
    let mut visited: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut faces = Vec::new();
    for (u, neigh) in rotation.iter().enumerate() {
        for &v in neigh {
            if visited.contains(&(u, v)) {
                continue;
            }
            let mut walk = Vec::new();
            let (mut a, mut b) = (u, v);
            loop {
                walk.push(a);
                visited.insert((a, b));
                // successor dart of (a, b): (b, prev_rot(b, a))
                let k = pos[&(b, a)];
                let deg = rotation[b].len();
                let next = rotation[b][(k + deg - 1) % deg];
                a = b;
                b = next;
                if (a, b) == (u, v) {
                    break;
                }
            }
            faces.push(canonical_rotation(walk));
        }
    }
    // Isolated vertices have no darts and hence no faces; a single-vertex
    // graph still has one face (the whole plane).
    if faces.is_empty() && rotation.len() == 1 {
        faces.push(vec![0]);
    }
    faces.sort();
    faces
}

/// Rotate a cyclic sequence so that its lexicographically smallest rotation
/// comes first (stable canonical form for comparisons).
fn canonical_rotation(walk: FaceWalk) -> FaceWalk {
    if walk.is_empty() {
        return walk;
    }
    let n = walk.len();
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

/// Find the face equal to `target` as a cyclic sequence.
fn find_face(faces: &[FaceWalk], target: &[Vertex]) -> Option<usize> {
    let canon = canonical_rotation(target.to_vec());
    faces.iter().position(|f| *f == canon)
}

/// Parse the external graph file format:
/// `v <id>` lines, then `rot <id>: <id> ...` lines (counterclockwise
/// neighbor order), then one `outer: <id> ...` line. Blank lines and `#`
/// comments are ignored.
pub fn parse_plane_graph(text: &str) -> Result<PlaneGraph, GraphError> {
    let mut ids: Vec<String> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut rot_lines: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut outer: Option<Vec<String>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        if let Some(rest) = line.strip_prefix("v ") {
            let id = rest.trim().to_string();
            if id.is_empty() || id.contains(char::is_whitespace) {
                return Err(GraphError::Syntax {
                    line: lineno,
                    msg: "vertex id must be a single token".into(),
                });
            }
            if seen.insert(id.clone(), ids.len()).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
            ids.push(id);
        } else if let Some(rest) = line.strip_prefix("rot ") {
            let (name, tail) = rest.split_once(':').ok_or(GraphError::Syntax {
                line: lineno,
                msg: "expected `rot <id>: <neighbors>`".into(),
            })?;
            let name = name.trim().to_string();
            let neigh: Vec<String> = tail.split_whitespace().map(str::to_string).collect();
            rot_lines.push((lineno, name, neigh));
        } else if let Some(rest) = line.strip_prefix("outer:") {
            if outer.is_some() {
                return Err(GraphError::Syntax {
                    line: lineno,
                    msg: "duplicate outer line".into(),
                });
            }
            outer = Some(rest.split_whitespace().map(str::to_string).collect());
        } else {
            return Err(GraphError::Syntax {
                line: lineno,
                msg: format!("unrecognized directive `{line}`"),
            });
        }
    }
    let mut rotations = vec![Vec::new(); ids.len()];
    let mut have_rot = vec![false; ids.len()];
    for (lineno, name, neigh) in rot_lines {
        let i = *seen.get(&name).ok_or_else(|| GraphError::UnknownVertex(name.clone()))?;
        if have_rot[i] {
            return Err(GraphError::Syntax {
                line: lineno,
                msg: format!("duplicate rotation for `{name}`"),
            });
        }
        have_rot[i] = true;
        rotations[i] = neigh;
    }
    let outer = outer.ok_or(GraphError::MissingOuterFace)?;
    PlaneGraph::new(ids, rotations, outer)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "\n# smallest maximal planar graph\nv a\nv b\nv c\nrot a: b c\nrot b: c a\nrot c: a b\nouter: b a c\n";

    #[test]
    fn parse_triangle() {
        let g = parse_plane_graph(TRIANGLE).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.face_count(), 2);
        assert!(g.is_maximal_planar());
    }

    #[test]
    fn euler_face_count_matches_formula() {
        // Independent route: F from Euler's formula versus traced count.
        let g = parse_plane_graph(TRIANGLE).unwrap();
        let f_formula = 2 + g.edge_count() - g.vertex_count();
        assert_eq!(g.face_count(), f_formula);
    }

    #[test]
    fn asymmetric_rotation_rejected() {
        let text = "v a\nv b\nv c\nrot a: b c\nrot b: c\nrot c: a b\nouter: b a c\n";
        match parse_plane_graph(text) {
            Err(GraphError::AsymmetricRotation(_, _)) => {}
            other => panic!("expected asymmetric rotation error, got {other:?}"),
        }
    }

    #[test]
    fn parallel_edge_rejected() {
        let text = "v a\nv b\nrot a: b b\nrot b: a a\nouter: a b\n";
        assert!(matches!(
            parse_plane_graph(text),
            Err(GraphError::ParallelEdge(_, _))
        ));
    }

    #[test]
    fn disconnected_fails_euler() {
        // Two disjoint edges: V=4, E=2, traced faces 2 => 4-2+2=4 != 2.
        let text = "v a\nv b\nv c\nv d\nrot a: b\nrot b: a\nrot c: d\nrot d: c\nouter: a b\n";
        assert!(matches!(
            parse_plane_graph(text),
            Err(GraphError::EulerCheckFailed { .. })
        ));
    }

    #[test]
    fn path_graph_single_face() {
        let text = "v a\nv b\nv c\nrot a: b\nrot b: a c\nrot c: b\nouter: a b c b\n";
        let g = parse_plane_graph(text).unwrap();
        assert_eq!(g.face_count(), 1);
        assert_eq!(g.outer_face().len(), 4);
    }

    #[test]
    fn outer_face_reversed_accepted() {
        let text = "v a\nv b\nv c\nrot a: b c\nrot b: c a\nrot c: a b\nouter: c a b\n";
        let g = parse_plane_graph(text).unwrap();
        // Normalized to a traced face either way.
        assert_eq!(g.outer_face().len(), 3);
    }

    #[test]
    fn text_round_trip() {
        let g = parse_plane_graph(TRIANGLE).unwrap();
        let g2 = parse_plane_graph(&g.to_text()).unwrap();
        assert_eq!(g.edges(), g2.edges());
        assert_eq!(g.outer_face(), g2.outer_face());
    }
}
