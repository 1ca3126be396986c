//! The constructive core: build a straight-line drawing of a maximal plane
//! graph incrementally along a canonical ordering, keeping every
//! intermediate triangulated disk adequate with respect to a smooth convex
//! curve.
//!
//! Adequacy of a disk drawing means: every boundary vertex is exterior to
//! the convex hull of the curve; every non-base boundary edge is crossed
//! exactly twice, and the pocket arcs bounded by those crossing pairs are
//! disjoint from the disk and from each other; and all crossings together
//! span an arc of total curvature below pi.
//!
//! Each placement uses an epsilon-search: start from a quarter of the local
//! feature scale and halve until the step-local adequacy and planarity
//! checks pass.

use crate::augment::{augment_to_maximal, AugmentationRecord};
use crate::canonical::{canonical_ordering, CanonicalOrdering, StepKind, TieBreak};
use crate::curve::{ArcInterval, ConvexCurveModel, CurveError};
use crate::geom::{self, Point};
use crate::plane_graph::{GraphError, PlaneGraph, Vertex};
use crate::verifier;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DrawError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("curve has no arc of nonzero curvature (lies on a line)")]
    NoCurvedArc,
    #[error("epsilon search exhausted at step {step} (vertex {vertex})")]
    EpsilonExhausted { step: usize, vertex: String },
    #[error("the base edge cannot take an ear")]
    BaseEdgeForbidden,
    #[error("({0}, {1}) is not a boundary edge of the disk")]
    NotBoundaryEdge(String, String),
    #[error("path is not a contiguous boundary path")]
    NotBoundaryPath,
    #[error("path passes through the base edge")]
    PathTouchesBase,
    #[error("fan rays diverge; an adequacy invariant was violated upstream")]
    RaysDiverge,
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

/// Knobs for the construction.
#[derive(Debug, Clone)]
pub struct DrawOptions {
    /// Curvature margin: the base working arc turns by at most `pi - delta`.
    pub delta: f64,
    /// Absolute lower bound for the epsilon search (test hook; 0 disables).
    pub eps_floor: f64,
    /// Maximum halvings per placement before giving up.
    pub max_halvings: u32,
    /// Seed for canonical-ordering tie-breaking; `None` = smallest id.
    pub seed: Option<u64>,
    /// Swap which base endpoint takes the high-parameter extreme (used to
    /// match the combinatorial orientation of the embedding).
    pub mirror_base: bool,
}

impl Default for DrawOptions {
    fn default() -> Self {
        DrawOptions {
            delta: 0.2,
            eps_floor: 0.0,
            max_halvings: 80,
            seed: None,
            mirror_base: false,
        }
    }
}

/// The evolving drawing of the prefix disk, together with the data backing
/// its adequacy certificate.
#[derive(Debug, Clone)]
pub struct DiskState {
    ids: Arc<Vec<String>>,
    positions: BTreeMap<Vertex, Point>,
    /// Boundary cycle in outer-walk order (clockwise around the disk in a
    /// drawing consistent with counterclockwise rotations).
    boundary: Vec<Vertex>,
    base_edge: (Vertex, Vertex),
    /// All edges of the disk, as (min, max) pairs.
    edges: Vec<(Vertex, Vertex)>,
    /// Pocket arc of each non-base boundary edge, keyed by (min, max).
    edge_arcs: BTreeMap<(Vertex, Vertex), ArcInterval>,
    /// Minimal arc covering every crossing of the curve with the disk.
    spanned_arc: Option<ArcInterval>,
    curve: Arc<ConvexCurveModel>,
}

impl DiskState {
    pub fn ids(&self) -> &Arc<Vec<String>> {
        &self.ids
    }

    pub fn id_of(&self, v: Vertex) -> &str {
        &self.ids[v]
    }

    pub fn positions(&self) -> &BTreeMap<Vertex, Point> {
        &self.positions
    }

    pub fn boundary(&self) -> &[Vertex] {
        &self.boundary
    }

    pub fn base_edge(&self) -> (Vertex, Vertex) {
        self.base_edge
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_arcs(&self) -> &BTreeMap<(Vertex, Vertex), ArcInterval> {
        &self.edge_arcs
    }

    pub fn spanned_arc(&self) -> Option<ArcInterval> {
        self.spanned_arc
    }

    pub fn curve(&self) -> &Arc<ConvexCurveModel> {
        &self.curve
    }

    pub fn boundary_polygon(&self) -> Vec<Point> {
        self.boundary.iter().map(|v| self.positions[v]).collect()
    }

    /// Walk-ordered boundary dart starting at `u` toward `v`, if present.
    fn boundary_dart_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let m = self.boundary.len();
        (0..m).find(|&i| self.boundary[i] == u && self.boundary[(i + 1) % m] == v)
    }

    /// Construct a state directly from parts; used by certificate loading
    /// and synthetic tests. No geometric validation is performed here.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        ids: Arc<Vec<String>>,
        positions: BTreeMap<Vertex, Point>,
        boundary: Vec<Vertex>,
        base_edge: (Vertex, Vertex),
        edges: Vec<(Vertex, Vertex)>,
        edge_arcs: BTreeMap<(Vertex, Vertex), ArcInterval>,
        spanned_arc: Option<ArcInterval>,
        curve: Arc<ConvexCurveModel>,
    ) -> Self {
        DiskState {
            ids,
            positions,
            boundary,
            base_edge,
            edges,
            edge_arcs,
            spanned_arc,
            curve,
        }
    }
}

/// Auxiliary geometry recorded for each placement.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepDetail {
    Base {
        working_arc: ArcInterval,
        tangent_params: [f64; 3],
        centroid: Point,
    },
    Ear {
        edge: (String, String),
        tangent_param: f64,
        tangent_point: Point,
    },
    Fan {
        path: Vec<String>,
        apex: Point,
    },
}

/// One step of the construction, for audit and certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepTrace {
    /// Index of the placed vertex in the canonical ordering (3 for the base
    /// triangle, then 4, 5, ...).
    pub index: usize,
    pub vertex: String,
    pub epsilon: f64,
    #[serde(flatten)]
    pub detail: StepDetail,
}

/// Everything `draw_all` produces.
#[derive(Debug)]
pub struct Drawing {
    pub positions: BTreeMap<Vertex, Point>,
    pub traces: Vec<StepTrace>,
    pub final_state: DiskState,
    pub augmented: PlaneGraph,
    pub record: AugmentationRecord,
    pub ordering: CanonicalOrdering,
}

fn ordered(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Inscribe the base triangle: tangent points at the 10%/50%/90% quantiles
/// of the working arc's tangent-angle range, scaled outward around the
/// centroid by `1 + eps` so that the corners leave the hull while interior
/// points of the non-base edges stay inside.
pub fn inscribe_base_triangle(
    curve: &Arc<ConvexCurveModel>,
    ids: &Arc<Vec<String>>,
    v1: Vertex,
    v2: Vertex,
    v3: Vertex,
    options: &DrawOptions,
) -> Result<(DiskState, StepTrace), DrawError> {
    let total = curve.total_turn();
    if total <= 1e-9 {
        return Err(DrawError::NoCurvedArc);
    }
    let delta = options.delta.clamp(1e-6, PI - 1e-6);
    let span = total.min(PI - delta);
    let (t_lo, _) = curve.domain();
    let phi_lo = curve.tangent_angle(t_lo)?;

    let thetas = [phi_lo + 0.1 * span, phi_lo + 0.5 * span, phi_lo + 0.9 * span];
    let params = [
        curve.param_for_angle(thetas[0])?,
        curve.param_for_angle(thetas[1])?,
        curve.param_for_angle(thetas[2])?,
    ];
    let pts = [
        curve.point_at(params[0])?,
        curve.point_at(params[1])?,
        curve.point_at(params[2])?,
    ];
    let area2 = geom::orient2d(pts[0], pts[1], pts[2]).abs();
    if area2 <= (1e-12 * curve.scale()).powi(2) {
        return Err(DrawError::NoCurvedArc);
    }
    let centroid = Point::new(
        (pts[0].x + pts[1].x + pts[2].x) / 3.0,
        (pts[0].y + pts[1].y + pts[2].y) / 3.0,
    );
    let perimeter = pts[0].dist(pts[1]) + pts[1].dist(pts[2]) + pts[2].dist(pts[0]);
    let inradius = area2 / perimeter;

    // Low/high extremes take the base endpoints, middle takes v3; the
    // mirror flag selects which endpoint is which, fixing the drawing's
    // orientation to the embedding's.
    let (lo_v, hi_v) = if options.mirror_base { (v1, v2) } else { (v2, v1) };
    let assignment = [(lo_v, pts[0]), (v3, pts[1]), (hi_v, pts[2])];
    // Boundary in outer-walk order (clockwise): high, middle, low.
    let boundary = vec![hi_v, v3, lo_v];

    let mut eps = inradius / 4.0;
    for _ in 0..=options.max_halvings {
        if eps < options.eps_floor {
            break;
        }
        let mut positions = BTreeMap::new();
        for &(v, p) in &assignment {
            positions.insert(v, centroid + (p - centroid) * (1.0 + eps));
        }
        if let Some(state) = try_base_state(
            curve,
            ids,
            &positions,
            &boundary,
            (v1, v2),
        ) {
            let trace = StepTrace {
                index: 3,
                vertex: ids[v3].clone(),
                epsilon: eps,
                detail: StepDetail::Base {
                    working_arc: ArcInterval::new(t_lo, params[2]),
                    tangent_params: params,
                    centroid,
                },
            };
            return Ok((state, trace));
        }
        eps *= 0.5;
    }
    Err(DrawError::EpsilonExhausted {
        step: 3,
        vertex: ids[v3].clone(),
    })
}

fn try_base_state(
    curve: &Arc<ConvexCurveModel>,
    ids: &Arc<Vec<String>>,
    positions: &BTreeMap<Vertex, Point>,
    boundary: &[Vertex],
    base_edge: (Vertex, Vertex),
) -> Option<DiskState> {
    let tol = curve.geom_tol();
    for &v in boundary {
        if curve.hull_signed_distance(positions[&v]) <= tol {
            return None;
        }
    }
    let mut edges = Vec::new();
    let mut edge_arcs = BTreeMap::new();
    let mut all_params: Vec<f64> = Vec::new();
    let m = boundary.len();
    for i in 0..m {
        let u = boundary[i];
        let v = boundary[(i + 1) % m];
        edges.push(ordered(u, v));
        let hits = curve.segment_crossings(positions[&u], positions[&v]).ok()?;
        let params: Vec<f64> = hits.crossings.iter().map(|h| h.t).collect();
        all_params.extend(params.iter().copied());
        if ordered(u, v) == ordered(base_edge.0, base_edge.1) {
            continue; // the base edge carries no crossing requirement
        }
        if hits.crossings.len() != 2 {
            return None;
        }
        edge_arcs.insert(ordered(u, v), curve.minor_arc(params[0], params[1]));
    }
    edges.sort_unstable();
    let normalized: Vec<f64> = normalize_params(curve, &all_params);
    let spanned = curve.covering_interval(&normalized);
    let spanned_arc = spanned?;
    if curve.arc_curvature(&spanned_arc) >= PI {
        return None;
    }
    let state = DiskState {
        ids: ids.clone(),
        positions: positions.clone(),
        boundary: boundary.to_vec(),
        base_edge,
        edges,
        edge_arcs,
        spanned_arc: Some(spanned_arc),
        curve: curve.clone(),
    };
    // Pocket arcs must avoid the triangle and each other.
    if !arcs_valid(&state, state.edge_arcs.keys().copied().collect::<Vec<_>>().as_slice()) {
        return None;
    }
    Some(state)
}

/// Reduce parameters of a closed curve into one period for covering-arc
/// computation; open-curve parameters pass through.
fn normalize_params(curve: &ConvexCurveModel, params: &[f64]) -> Vec<f64> {
    if !curve.is_closed() {
        return params.to_vec();
    }
    let (t_lo, _) = curve.domain();
    let p = curve.period();
    params
        .iter()
        .map(|t| (t - t_lo).rem_euclid(p) + t_lo)
        .collect()
}

/// Check that the named pocket arcs are pairwise disjoint from each other
/// and from the disk polygon (sampled), and that every other pocket arc
/// stays clear of them in parameter space.
fn arcs_valid(state: &DiskState, fresh: &[(Vertex, Vertex)]) -> bool {
    let curve = &state.curve;
    let period = curve.is_closed().then(|| curve.period());
    let slack = curve.param_tol();
    let arcs: Vec<(&(Vertex, Vertex), &ArcInterval)> = state.edge_arcs.iter().collect();
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            if arcs[i].1.overlaps(arcs[j].1, period, slack) {
                return false;
            }
        }
    }
    let polygon = state.boundary_polygon();
    for key in fresh {
        let interval = &state.edge_arcs[key];
        if verifier::arc_meets_polygon(curve, interval, &polygon).is_some() {
            return false;
        }
    }
    true
}

/// Attach a new vertex `w` across the non-base boundary edge `uv` (in
/// boundary-walk order), placing it just outside the tangent point of the
/// pocket arc.
pub fn attach_ear(
    state: &DiskState,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    options: &DrawOptions,
    step_index: usize,
) -> Result<(DiskState, StepTrace), DrawError> {
    let curve = &state.curve;
    if ordered(u, v) == ordered(state.base_edge.0, state.base_edge.1) {
        return Err(DrawError::BaseEdgeForbidden);
    }
    let dart = state
        .boundary_dart_index(u, v)
        .or_else(|| state.boundary_dart_index(v, u));
    let dart = dart.ok_or_else(|| {
        DrawError::NotBoundaryEdge(state.ids[u].to_string(), state.ids[v].to_string())
    })?;
    let m = state.boundary.len();
    let (u, v) = (state.boundary[dart], state.boundary[(dart + 1) % m]);

    let interval = state.edge_arcs[&ordered(u, v)];
    let (t1, t2) = (interval.start, interval.end);
    let p1 = curve.point_at(t1)?;
    let p2 = curve.point_at(t2)?;

    // Tangent parallel to uv: the chord between the two crossing points is a
    // sub-segment of uv, so the mean-value tangent direction equals the
    // chord direction, lifted into the pocket's tangent-angle range.
    let phi1 = curve.tangent_angle(t1)?;
    let phi2 = curve.tangent_angle(t2)?;
    let beta = (p2 - p1).angle();
    let k = ((0.5 * (phi1 + phi2) - beta) / (2.0 * PI)).round();
    let theta = beta + 2.0 * PI * k;
    let theta = theta.clamp(phi1, phi2);
    let tx = param_for_angle_extended(curve, theta)?;
    let x = curve.point_at(tx)?;
    let normal = curve.outward_normal(tx)?;

    let mut eps = p1.dist(x).min(p2.dist(x)) / 4.0;
    for _ in 0..=options.max_halvings {
        if eps < options.eps_floor {
            break;
        }
        let w_pos = x + normal * eps;
        if let Some(next) = try_attach(state, &[u, v], w, w_pos) {
            let trace = StepTrace {
                index: step_index,
                vertex: state.ids[w].clone(),
                epsilon: eps,
                detail: StepDetail::Ear {
                    edge: (state.ids[u].clone(), state.ids[v].clone()),
                    tangent_param: tx,
                    tangent_point: x,
                },
            };
            return Ok((next, trace));
        }
        eps *= 0.5;
    }
    Err(DrawError::EpsilonExhausted {
        step: step_index,
        vertex: state.ids[w].clone(),
    })
}

/// Attach a new vertex `w` seeing a whole boundary path of two or more
/// edges, placed just beyond the crossing point of the rays through the
/// path's first and last edges.
pub fn attach_fan(
    state: &DiskState,
    path: &[Vertex],
    w: Vertex,
    options: &DrawOptions,
    step_index: usize,
) -> Result<(DiskState, StepTrace), DrawError> {
    let curve = &state.curve;
    if path.len() < 3 {
        return Err(DrawError::NotBoundaryPath);
    }
    // Contiguous run of boundary darts in walk order.
    let m = state.boundary.len();
    let start = state
        .boundary_dart_index(path[0], path[1])
        .ok_or(DrawError::NotBoundaryPath)?;
    for (j, win) in path.windows(2).enumerate() {
        let i = (start + j) % m;
        if state.boundary[i] != win[0] || state.boundary[(i + 1) % m] != win[1] {
            return Err(DrawError::NotBoundaryPath);
        }
        let base = ordered(state.base_edge.0, state.base_edge.1);
        if ordered(win[0], win[1]) == base {
            return Err(DrawError::PathTouchesBase);
        }
    }

    let k = path.len() - 1;
    let p0 = state.positions[&path[0]];
    let p1 = state.positions[&path[1]];
    let pk = state.positions[&path[k]];
    let pk1 = state.positions[&path[k - 1]];

    let (x, d_in, d_out) = if k == 2 {
        // Both rays pass through the middle vertex; they cross there.
        let mid = state.positions[&path[1]];
        if geom::orient2d(p0, mid, pk).abs()
            <= 1e-12 * p0.dist(mid) * pk.dist(mid)
        {
            return Err(DrawError::RaysDiverge);
        }
        (mid, (mid - p0).normalized(), (mid - pk).normalized())
    } else {
        match geom::line_intersection(p0, p1 - p0, pk, pk1 - pk) {
            None => return Err(DrawError::RaysDiverge),
            Some((s, t, x)) => {
                if s <= 1.0 || t <= 1.0 {
                    return Err(DrawError::RaysDiverge);
                }
                (x, (p1 - p0).normalized(), (pk1 - pk).normalized())
            }
        }
    };
    let bisector = d_in + d_out;
    if bisector.norm() < 1e-9 {
        return Err(DrawError::RaysDiverge);
    }
    let bisector = bisector.normalized();

    let mut eps = curve.nearest_distance(x) / 4.0;
    if !(eps > 0.0) {
        return Err(DrawError::InvariantViolated(
            "fan apex lies on the curve".into(),
        ));
    }
    for _ in 0..=options.max_halvings {
        if eps < options.eps_floor {
            break;
        }
        let w_pos = x + bisector * eps;
        if let Some(next) = try_attach(state, path, w, w_pos) {
            let trace = StepTrace {
                index: step_index,
                vertex: state.ids[w].clone(),
                epsilon: eps,
                detail: StepDetail::Fan {
                    path: path.iter().map(|&p| state.ids[p].clone()).collect(),
                    apex: x,
                },
            };
            return Ok((next, trace));
        }
        eps *= 0.5;
    }
    Err(DrawError::EpsilonExhausted {
        step: step_index,
        vertex: state.ids[w].clone(),
    })
}

/// Try to commit the placement of `w` at `w_pos` across the boundary path
/// `path` (length >= 2 vertices). Returns the new state when the step-local
/// adequacy, bookkeeping, and planarity checks all pass.
fn try_attach(
    state: &DiskState,
    path: &[Vertex],
    w: Vertex,
    w_pos: Point,
) -> Option<DiskState> {
    let curve = &state.curve;
    let tol = curve.geom_tol();

    if curve.hull_signed_distance(w_pos) <= tol {
        return None;
    }

    let old_polygon = state.boundary_polygon();
    // The new vertex must be strictly outside the current disk and clear of
    // every existing edge and vertex.
    if geom::point_in_polygon(w_pos, &old_polygon, tol) {
        return None;
    }
    for &p in state.positions.values() {
        if p.dist(w_pos) <= tol {
            return None;
        }
    }
    for &(a, b) in &state.edges {
        if geom::point_on_segment(w_pos, state.positions[&a], state.positions[&b], tol) {
            return None;
        }
    }

    // New fan triangles must be consistently oriented (w strictly left of
    // each walk dart) and must not swallow existing vertices.
    for win in path.windows(2) {
        let (a, b) = (state.positions[&win[0]], state.positions[&win[1]]);
        if geom::orient2d(a, b, w_pos) <= tol * a.dist(b) {
            return None;
        }
        for (&v, &p) in &state.positions {
            if v == win[0] || v == win[1] {
                continue;
            }
            let tri = [a, b, w_pos];
            if geom::point_in_polygon(p, &tri, 0.0) {
                return None;
            }
        }
    }

    // New spokes must not cross existing edges.
    for &p in path {
        let seg_a = state.positions[&p];
        for &(a, b) in &state.edges {
            if a == p || b == p {
                continue;
            }
            if geom::segments_cross_properly(
                seg_a,
                w_pos,
                state.positions[&a],
                state.positions[&b],
                tol,
            )
            .is_some()
            {
                return None;
            }
        }
    }

    // Crossing bookkeeping: the two new boundary edges need exactly two
    // proper crossings each; interior spokes contribute their crossings to
    // the spanned arc only.
    let first = path[0];
    let last = *path.last().unwrap();
    let mut new_params: Vec<f64> = Vec::new();
    let mut new_arcs: Vec<((Vertex, Vertex), ArcInterval)> = Vec::new();
    for (i, &p) in path.iter().enumerate() {
        let hits = curve.segment_crossings(state.positions[&p], w_pos).ok()?;
        let params: Vec<f64> = hits.crossings.iter().map(|h| h.t).collect();
        new_params.extend(params.iter().copied());
        if i == 0 || i == path.len() - 1 {
            if params.len() != 2 {
                return None;
            }
            new_arcs.push((ordered(p, w), curve.minor_arc(params[0], params[1])));
        }
    }

    let mut edge_arcs = state.edge_arcs.clone();
    for win in path.windows(2) {
        edge_arcs.remove(&ordered(win[0], win[1]));
    }
    for (key, arc) in &new_arcs {
        edge_arcs.insert(*key, *arc);
    }

    // Spanned arc: union of the previous span and all new crossings.
    let mut cover_params: Vec<f64> = Vec::new();
    if let Some(old) = state.spanned_arc {
        cover_params.push(old.start);
        cover_params.push(old.end);
    }
    cover_params.extend(normalize_params(curve, &new_params));
    let spanned = curve.covering_interval(&cover_params)?;
    if curve.arc_curvature(&spanned) >= PI {
        return None;
    }

    // Assemble the candidate.
    let mut boundary = Vec::with_capacity(state.boundary.len() + 2 - path.len() + 1);
    let m = state.boundary.len();
    let start = state.boundary_dart_index(first, path[1]).unwrap();
    boundary.push(first);
    boundary.push(w);
    let mut i = (start + path.len() - 1) % m;
    while state.boundary[i] != first {
        boundary.push(state.boundary[i]);
        i = (i + 1) % m;
    }

    let mut positions = state.positions.clone();
    positions.insert(w, w_pos);
    let mut edges = state.edges.clone();
    for &p in path {
        edges.push(ordered(p, w));
    }
    edges.sort_unstable();

    let candidate = DiskState {
        ids: state.ids.clone(),
        positions,
        boundary,
        base_edge: state.base_edge,
        edges,
        edge_arcs,
        spanned_arc: Some(spanned),
        curve: curve.clone(),
    };

    // Fresh pocket arcs must avoid the whole (new) disk; the old pockets
    // were disjoint from the old disk by induction, so only the newly added
    // triangles can threaten them.
    let fresh: Vec<(Vertex, Vertex)> = new_arcs.iter().map(|(k, _)| *k).collect();
    if !arcs_valid(&candidate, &fresh) {
        return None;
    }
    for win in path.windows(2) {
        let tri = [
            state.positions[&win[0]],
            state.positions[&win[1]],
            w_pos,
        ];
        for (key, interval) in &candidate.edge_arcs {
            if fresh.contains(key) {
                continue;
            }
            if verifier::arc_meets_polygon(curve, interval, &tri).is_some() {
                return None;
            }
        }
    }
    Some(candidate)
}

/// `param_for_angle` extended periodically for closed curves, so pocket
/// arcs that wrap past the domain seam still resolve.
fn param_for_angle_extended(
    curve: &ConvexCurveModel,
    theta: f64,
) -> Result<f64, CurveError> {
    match curve.param_for_angle(theta) {
        Ok(t) => Ok(t),
        Err(err) => {
            if curve.is_closed() {
                if let Ok(t) = curve.param_for_angle(theta - 2.0 * PI) {
                    return Ok(t + curve.period());
                }
                if let Ok(t) = curve.param_for_angle(theta + 2.0 * PI) {
                    return Ok(t - curve.period());
                }
            }
            Err(err)
        }
    }
}

/// Draw the whole graph: augment to maximal planar, compute a canonical
/// ordering, inscribe the base triangle, then apply ear/fan placements.
pub fn draw_all(
    g: &PlaneGraph,
    curve: &Arc<ConvexCurveModel>,
    options: &DrawOptions,
) -> Result<Drawing, DrawError> {
    if g.vertex_count() < 3 {
        return Err(GraphError::TooFewVertices(g.vertex_count(), 3).into());
    }
    let (augmented, record) = augment_to_maximal(g)?;
    let outer = augmented.outer_face().clone();
    let base_edge = (outer[0], outer[1]);
    let tie_break = match options.seed {
        None => TieBreak::SmallestId,
        Some(s) => TieBreak::Seeded(s),
    };
    let ordering = canonical_ordering(&augmented, base_edge, tie_break)?;

    let (v1, v2) = ordering.base_edge;
    let v3 = ordering.sequence[2];
    // Match the inscribed triangle's orientation to the embedding: the
    // default assignment yields boundary walk (v1, v3, v2).
    let mirror = {
        let want = [v1, v3, v2];
        let walk = ordering.base_walk;
        if cyclic_eq(&walk, &want) {
            false
        } else if cyclic_eq(&walk, &[v1, v2, v3]) {
            true
        } else {
            return Err(DrawError::InvariantViolated(format!(
                "base walk {walk:?} does not contain the base triangle"
            )));
        }
    };
    let ids = Arc::new(augmented.ids().to_vec());
    let mut opts = options.clone();
    opts.mirror_base = mirror;

    let (mut state, base_trace) = inscribe_base_triangle(curve, &ids, v1, v2, v3, &opts)?;
    let mut traces = vec![base_trace];
    for (idx, step) in ordering.steps.iter().enumerate() {
        let step_index = idx + 4;
        let (next, trace) = match step.kind {
            StepKind::Ear => attach_ear(
                &state,
                step.path[0],
                step.path[1],
                step.vertex,
                &opts,
                step_index,
            )?,
            StepKind::Fan => attach_fan(&state, &step.path, step.vertex, &opts, step_index)?,
        };
        state = next;
        traces.push(trace);
    }

    Ok(Drawing {
        positions: state.positions.clone(),
        traces,
        final_state: state,
        augmented,
        record,
        ordering,
    })
}

fn cyclic_eq(a: &[Vertex; 3], b: &[Vertex; 3]) -> bool {
    (0..3).any(|s| (0..3).all(|k| a[(s + k) % 3] == b[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CapAxis;
    use crate::gallery::builtin_graph;
    use crate::verifier::check_adequate;

    fn semicircle() -> Arc<ConvexCurveModel> {
        Arc::new(ConvexCurveModel::circular_arc(
            Point::new(0.0, 0.0),
            1.0,
            0.0,
            PI,
        ))
    }

    fn test_ids(n: usize) -> Arc<Vec<String>> {
        Arc::new((0..n).map(|i| format!("t{i}")).collect())
    }

    #[test]
    fn base_triangle_is_adequate() {
        let curve = semicircle();
        let ids = test_ids(3);
        let (state, trace) =
            inscribe_base_triangle(&curve, &ids, 0, 1, 2, &DrawOptions::default()).unwrap();
        assert!(trace.epsilon > 0.0);
        let report = check_adequate(&state);
        assert!(report.pass, "violations: {:?}", report.violations);
        let spanned = state.spanned_arc().unwrap();
        assert!(curve.arc_curvature(&spanned) < PI - 0.1);
    }

    #[test]
    fn base_triangle_on_stadium_cap() {
        let curve = Arc::new(ConvexCurveModel::stadium(
            Point::new(0.0, 0.0),
            2.0,
            1.0,
            CapAxis::X,
        ));
        let ids = test_ids(3);
        let (state, _) =
            inscribe_base_triangle(&curve, &ids, 0, 1, 2, &DrawOptions::default()).unwrap();
        let report = check_adequate(&state);
        assert!(report.pass, "violations: {:?}", report.violations);
        assert!(curve.arc_curvature(&state.spanned_arc().unwrap()) < PI);
    }

    #[test]
    fn flat_arc_gives_no_curved_arc() {
        let curve = Arc::new(
            ConvexCurveModel::stadium_sub_arc(
                Point::new(0.0, 0.0),
                2.0,
                1.0,
                CapAxis::X,
                0.2,
                1.8,
            )
            .unwrap(),
        );
        let ids = test_ids(3);
        assert!(matches!(
            inscribe_base_triangle(&curve, &ids, 0, 1, 2, &DrawOptions::default()),
            Err(DrawError::NoCurvedArc)
        ));
    }

    #[test]
    fn ear_on_base_edge_forbidden() {
        let curve = semicircle();
        let ids = test_ids(4);
        let (state, _) =
            inscribe_base_triangle(&curve, &ids, 0, 1, 2, &DrawOptions::default()).unwrap();
        assert!(matches!(
            attach_ear(&state, 0, 1, 3, &DrawOptions::default(), 4),
            Err(DrawError::BaseEdgeForbidden)
        ));
    }

    #[test]
    fn ear_extends_base_triangle() {
        let curve = semicircle();
        let ids = test_ids(4);
        let (state, _) =
            inscribe_base_triangle(&curve, &ids, 0, 1, 2, &DrawOptions::default()).unwrap();
        // Pick a non-base boundary dart.
        let m = state.boundary().len();
        let (u, v) = (0..m)
            .map(|i| (state.boundary()[i], state.boundary()[(i + 1) % m]))
            .find(|&(u, v)| ordered(u, v) != ordered(0, 1))
            .unwrap();
        let (next, _) = attach_ear(&state, u, v, 3, &DrawOptions::default(), 4).unwrap();
        assert_eq!(next.boundary().len(), 4);
        assert_eq!(next.edge_arcs().len(), 3);
        let report = check_adequate(&next);
        assert!(report.pass, "violations: {:?}", report.violations);
        // The retired edge's pocket is replaced by two sub-pockets.
        let old_arc = state.edge_arcs()[&ordered(u, v)];
        for key in [ordered(u, 3), ordered(3, v)] {
            let arc = next.edge_arcs()[&key];
            assert!(arc.start >= old_arc.start - 0.2 && arc.end <= old_arc.end + 0.2);
        }
    }

    #[test]
    fn eps_floor_forces_exhaustion() {
        let curve = semicircle();
        let ids = test_ids(4);
        let (state, _) =
            inscribe_base_triangle(&curve, &ids, 0, 1, 2, &DrawOptions::default()).unwrap();
        let m = state.boundary().len();
        let (u, v) = (0..m)
            .map(|i| (state.boundary()[i], state.boundary()[(i + 1) % m]))
            .find(|&(u, v)| ordered(u, v) != ordered(0, 1))
            .unwrap();
        let opts = DrawOptions {
            eps_floor: 1e6,
            ..DrawOptions::default()
        };
        assert!(matches!(
            attach_ear(&state, u, v, 3, &opts, 4),
            Err(DrawError::EpsilonExhausted { .. })
        ));
    }

    #[test]
    fn synthetic_collinear_fan_rays_diverge() {
        let curve = semicircle();
        let ids = test_ids(5);
        // Boundary square with three collinear path vertices; geometry is
        // synthetic and only exercises the ray test.
        let mut positions = BTreeMap::new();
        positions.insert(0, Point::new(-2.0, -1.0));
        positions.insert(1, Point::new(0.0, -1.0));
        positions.insert(2, Point::new(2.0, -1.0));
        positions.insert(3, Point::new(0.0, -3.0));
        let state = DiskState::from_parts(
            ids,
            positions,
            vec![0, 1, 2, 3],
            (3, 0),
            vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            BTreeMap::new(),
            None,
            curve,
        );
        assert!(matches!(
            attach_fan(&state, &[0, 1, 2], 4, &DrawOptions::default(), 4),
            Err(DrawError::RaysDiverge)
        ));
    }

    #[test]
    fn k4_draw_all_is_adequate_and_crossed() {
        let g = builtin_graph("k4").unwrap();
        let curve = semicircle();
        let drawing = draw_all(&g, &curve, &DrawOptions::default()).unwrap();
        assert_eq!(drawing.positions.len(), 4);
        let report = check_adequate(&drawing.final_state);
        assert!(report.pass, "violations: {:?}", report.violations);
        let faces = crate::verifier::check_all_faces_crossed(
            &g,
            &drawing.positions,
            &curve,
        )
        .unwrap();
        assert_eq!(faces.crossed_count, faces.total);
        assert_eq!(faces.total, 4);
    }

    #[test]
    fn octahedron_semicircle_all_faces() {
        let g = builtin_graph("octahedron").unwrap();
        let curve = semicircle();
        let drawing = draw_all(&g, &curve, &DrawOptions::default()).unwrap();
        let faces =
            crate::verifier::check_all_faces_crossed(&g, &drawing.positions, &curve).unwrap();
        assert_eq!(faces.total, 8);
        assert_eq!(faces.crossed_count, 8);
        let plane = crate::verifier::check_straightline_plane(&drawing.augmented, &drawing.positions)
            .unwrap();
        assert!(plane.pass, "findings: {:?}", plane.findings);
    }

    #[test]
    fn deterministic_traces() {
        let g = builtin_graph("octahedron").unwrap();
        let curve = semicircle();
        let d1 = draw_all(&g, &curve, &DrawOptions::default()).unwrap();
        let d2 = draw_all(&g, &curve, &DrawOptions::default()).unwrap();
        let s1 = serde_json::to_string(&d1.traces).unwrap();
        let s2 = serde_json::to_string(&d2.traces).unwrap();
        assert_eq!(s1, s2);
    }
}
