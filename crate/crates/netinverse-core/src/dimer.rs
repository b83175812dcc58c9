//! Bipartite graphs in the disk, dimer covers, and the boundary measurement.
//!
//! The central construction is the Temperley graph of a disk network: a
//! black vertex in the middle of every edge, a white vertex on every vertex
//! and every face, with conductances on the vertex-side half-edges and unit
//! weights on the face-side half-edges. Its boundary measurement is the
//! point of the Grassmannian the electrical pipeline inverts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::graph::{Dart, DiskGraph, EdgeId, Face, Faces, Ref, Site, VertexId};
use crate::grassmann::{MatrixPoint, PluckerVector};
use crate::numeric::{Mat, Rat, SubsetIndex};

/// Vertex color of a bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    White,
    Black,
}

/// What a Temperley vertex stands for in the underlying disk network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    GVertex(VertexId),
    GFace(usize),
    GEdge(EdgeId),
}

/// A bipartite graph embedded in the disk.
///
/// Structurally this is a [`DiskGraph`] plus a proper 2-coloring; the
/// boundary vertices are `d_1, …, d_m` clockwise. When built by
/// [`temperley_plus`], `tags` records the network element each vertex came
/// from.
#[derive(Debug, Clone)]
pub struct BipartiteDiskGraph {
    pub graph: DiskGraph,
    pub color: BTreeMap<VertexId, Color>,
    pub tags: BTreeMap<VertexId, Provenance>,
}

impl BipartiteDiskGraph {
    pub fn new(
        graph: DiskGraph,
        color: BTreeMap<VertexId, Color>,
        tags: BTreeMap<VertexId, Provenance>,
    ) -> Result<Self, Error> {
        for v in graph.vertices() {
            if !color.contains_key(&v) {
                return Err(Error::InconsistentEmbedding(format!(
                    "vertex {v} has no color"
                )));
            }
        }
        for (&e, &(a, b)) in graph.edges() {
            if color[&a] == color[&b] {
                return Err(Error::InconsistentEmbedding(format!(
                    "edge {e} joins two {:?} vertices",
                    color[&a]
                )));
            }
        }
        Ok(BipartiteDiskGraph { graph, color, tags })
    }

    /// Number of boundary vertices `m`.
    pub fn m(&self) -> usize {
        self.graph.n()
    }

    pub fn is_white(&self, v: VertexId) -> bool {
        self.color[&v] == Color::White
    }

    pub fn whites(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.is_white(v)).collect()
    }

    pub fn blacks(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| !self.is_white(v)).collect()
    }

    /// `k = #W − #internal B`: the size of every `∂M`.
    pub fn k(&self) -> usize {
        let internal_blacks = self
            .blacks()
            .iter()
            .filter(|&&b| !self.graph.is_boundary(b))
            .count();
        self.whites().len() - internal_blacks
    }

    /// The vertex with the given provenance tag, if built by
    /// [`temperley_plus`].
    pub fn vertex_for(&self, p: Provenance) -> Option<VertexId> {
        self.tags.iter().find(|(_, &t)| t == p).map(|(&v, _)| v)
    }

    /// The boundary face `f_i^-` between `d_{i−1}` and `d_i` (1-based `i`).
    pub fn boundary_face(&self, faces: &Faces, i: usize) -> Result<usize, Error> {
        let m = self.m();
        // Arc `a` (0-based) runs from boundary position a to a+1, i.e. from
        // d_{a+1} to d_{a+2}; f_i^- contains the arc from d_{i−1} to d_i.
        let a = (i + m - 2) % m;
        faces.face_of_arc(a).ok_or_else(|| {
            Error::InconsistentEmbedding(format!("arc {a} has no interior face"))
        })
    }
}

/// Strictly positive edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeights {
    pub wt: BTreeMap<EdgeId, Rat>,
}

impl EdgeWeights {
    pub fn new(wt: BTreeMap<EdgeId, Rat>) -> Result<Self, Error> {
        for (e, w) in &wt {
            if w <= &Rat::zero() {
                return Err(Error::NonPositive(format!("weight of edge {e}")));
            }
        }
        Ok(EdgeWeights { wt })
    }

    pub fn get(&self, e: EdgeId) -> &Rat {
        &self.wt[&e]
    }
}

/// A dimer cover: a matching using every internal vertex exactly once and
/// each boundary vertex at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimerCover {
    pub edges: Vec<EdgeId>,
}

/// Positive values attached to the faces of a bipartite graph, used both
/// for X variables (gauge invariants) and A variables (twist minors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceVars {
    pub vals: BTreeMap<usize, Rat>,
}

pub type XVars = FaceVars;
pub type AVars = FaceVars;

/// Target face labels `S(f)` plus the boundary-face table.
#[derive(Debug, Clone)]
pub struct FaceLabels {
    /// Γ-face index → `S(f) ⊆ [m]`.
    pub labels: BTreeMap<usize, SubsetIndex>,
    /// `boundary[i−1]` = face index of `f_i^-`.
    pub boundary: Vec<usize>,
}

/// An oriented boundary-to-boundary strand of a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipStrand {
    /// Starting boundary index (1-based).
    pub start: usize,
    /// Ending boundary index (1-based).
    pub end: usize,
    pub darts: Vec<Dart>,
}

// ---------------------------------------------------------------------------
// Temperley construction
// ---------------------------------------------------------------------------

/// Builds the Temperley graph `G₊` of a disk network: one black vertex per
/// edge, one white per vertex and per face, conductances on the vertex-side
/// edges and unit weights on the face-side edges.
pub fn temperley_plus(
    g: &DiskGraph,
    c: &EdgeWeights,
) -> Result<(BipartiteDiskGraph, EdgeWeights), Error> {
    let n = g.n();
    for &e in g.edges().keys() {
        if !c.wt.contains_key(&e) {
            return Err(Error::BadWeights(format!("no conductance for edge {e}")));
        }
    }
    if n == 1 {
        // Empty network: two white vertices, no blacks, no edges.
        let graph = DiskGraph::new(
            vec![1, 2],
            BTreeMap::from([(1, vec![]), (2, vec![])]),
            BTreeMap::new(),
        )?;
        let color = BTreeMap::from([(1, Color::White), (2, Color::White)]);
        let tags = BTreeMap::from([
            (1, Provenance::GVertex(g.boundary()[0])),
            (2, Provenance::GFace(0)),
        ]);
        return Ok((
            BipartiteDiskGraph::new(graph, color, tags)?,
            EdgeWeights { wt: BTreeMap::new() },
        ));
    }

    let faces = g.trace_faces()?;
    // Fresh vertex ids: whites for vertices, whites for faces, blacks for
    // edges, in deterministic order.
    let mut next_id = 0usize;
    let mut fresh = || {
        next_id += 1;
        next_id
    };
    let mut white_of_vertex: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut white_of_face: BTreeMap<usize, VertexId> = BTreeMap::new();
    let mut black_of_edge: BTreeMap<EdgeId, VertexId> = BTreeMap::new();
    let mut color = BTreeMap::new();
    let mut tags = BTreeMap::new();
    for v in g.vertices() {
        let id = fresh();
        white_of_vertex.insert(v, id);
        color.insert(id, Color::White);
        tags.insert(id, Provenance::GVertex(v));
    }
    for f in 0..faces.len() {
        let id = fresh();
        white_of_face.insert(f, id);
        color.insert(id, Color::White);
        tags.insert(id, Provenance::GFace(f));
    }
    for &e in g.edges().keys() {
        let id = fresh();
        black_of_edge.insert(e, id);
        color.insert(id, Color::Black);
        tags.insert(id, Provenance::GEdge(e));
    }

    // Γ-edges: per G-edge e = (u, v): to w_u, to the face left of u→v, to
    // w_v, to the face left of v→u. Face-side edges are keyed by the dart so
    // doubled incidences (bridges) stay distinct.
    let mut edges: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
    let mut weights: BTreeMap<EdgeId, Rat> = BTreeMap::new();
    // (G-edge, which of the four slots) → Γ-edge id.
    let mut slot: BTreeMap<(EdgeId, u8), EdgeId> = BTreeMap::new();
    let mut next_edge = 0usize;
    let face_left = |e: EdgeId, forward: bool| -> Result<usize, Error> {
        faces
            .face_of_dart((Ref::Edge(e), forward))
            .ok_or_else(|| Error::InconsistentEmbedding(String::from("edge on outer face")))
    };
    for (&e, &(u, v)) in g.edges() {
        let b = black_of_edge[&e];
        let f_uv = face_left(e, true)?; // left of u→v
        let f_vu = face_left(e, false)?; // left of v→u
        let targets = [
            white_of_vertex[&u],
            white_of_face[&f_uv],
            white_of_vertex[&v],
            white_of_face[&f_vu],
        ];
        let wts = [c.get(e).clone(), Rat::one(), c.get(e).clone(), Rat::one()];
        for (s, (&t, w)) in targets.iter().zip(wts.iter()).enumerate() {
            next_edge += 1;
            edges.insert(next_edge, (b, t));
            weights.insert(next_edge, w.clone());
            slot.insert((e, s as u8), next_edge);
        }
    }

    // Rotations.
    let mut rotations: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    // Black b_e, clockwise: [w_u, w_{left of u→v}, w_v, w_{left of v→u}].
    for &e in g.edges().keys() {
        rotations.insert(
            black_of_edge[&e],
            vec![slot[&(e, 0)], slot[&(e, 1)], slot[&(e, 2)], slot[&(e, 3)]],
        );
    }
    // White w_v: the blacks in the order of v's rotation in G.
    for v in g.vertices() {
        let rot = g
            .rotation(v)
            .iter()
            .map(|&e| {
                let (a, _) = g.edge_ends(e);
                // vertex-side slot: 0 if v is the stored tail, else 2.
                if a == v {
                    slot[&(e, 0)]
                } else {
                    slot[&(e, 2)]
                }
            })
            .collect();
        rotations.insert(white_of_vertex[&v], rot);
    }
    // White w_f: reverse of the face-trace dart order. For a boundary face
    // (contains an arc) the linear order starts after the arc dart.
    let mut arc_count: BTreeMap<usize, usize> = BTreeMap::new();
    for (fi, face) in faces.faces.iter().enumerate() {
        let mut darts: Vec<&Dart> = face.darts.iter().collect();
        let arcs = face.arc_ids();
        if arcs.len() > 1 {
            return Err(Error::InconsistentEmbedding(format!(
                "face {fi} touches {} boundary arcs",
                arcs.len()
            )));
        }
        if arcs.len() == 1 {
            *arc_count.entry(arcs[0]).or_insert(0) += 1;
            let pos = face.darts.iter().position(|d| d.via.is_arc()).unwrap();
            darts.rotate_left(pos + 1);
            darts.pop(); // drop the arc dart itself
        }
        let mut rot: Vec<EdgeId> = darts
            .iter()
            .map(|d| {
                let e = d.via.edge().unwrap();
                let (a, _) = g.edge_ends(e);
                let forward = d.tail == a;
                // face-side slot: 1 for the forward dart, 3 for the reverse.
                if forward {
                    slot[&(e, 1)]
                } else {
                    slot[&(e, 3)]
                }
            })
            .collect();
        rot.reverse();
        rotations.insert(white_of_face[&fi], rot);
    }

    // Boundary d_1..d_{2n}: w_{b_i}, then the white of the face on arc a_i.
    let mut boundary = Vec::with_capacity(2 * n);
    for (i, &b) in g.boundary().iter().enumerate() {
        boundary.push(white_of_vertex[&b]);
        let f = faces.face_of_arc(i).ok_or_else(|| {
            Error::InconsistentEmbedding(format!("arc {i} has no interior face"))
        })?;
        boundary.push(white_of_face[&f]);
    }

    let graph = DiskGraph::new(boundary, rotations, edges)?;
    let gamma = BipartiteDiskGraph::new(graph, color, tags)?;
    Ok((gamma, EdgeWeights::new(weights)?))
}

// ---------------------------------------------------------------------------
// Strands and face labels
// ---------------------------------------------------------------------------

impl BipartiteDiskGraph {
    /// Traces the strand entering at boundary vertex `d_i` (1-based):
    /// turn maximally left at white vertices, maximally right at black ones;
    /// the strand ends when the turn rule yields a boundary arc.
    fn strand_from(&self, i: usize) -> Result<BipStrand, Error> {
        let map = self.planar_map();
        let start = self.graph.boundary()[i - 1];
        // Entering at a white d_i is "arriving via the following arc" (the
        // strand departs at the first interior edge); at a black d_i it is
        // "arriving via the preceding arc" (departing at the last one).
        let rot = &map.rot[&start];
        let entry = if self.is_white(start) {
            Ref::Arc(i - 1)
        } else {
            Ref::Arc((i + self.m() - 2) % self.m())
        };
        let pos = rot.iter().position(|&r| r == entry).unwrap();
        let turn = |v: VertexId, p: usize, len: usize| -> usize {
            if self.is_white(v) {
                (p + 1) % len
            } else {
                (p + len - 1) % len
            }
        };
        let first = rot[turn(start, pos, rot.len())];
        if first.is_arc() {
            // Lazy strand at an isolated boundary vertex.
            return Ok(BipStrand { start: i, end: i, darts: Vec::new() });
        }
        let mut d = map_dart(&map, start, first);
        let mut darts = Vec::new();
        let limit = 4 * self.graph.edges().len() + 4;
        loop {
            darts.push(d);
            if darts.len() > limit {
                return Err(Error::NotReduced(format!(
                    "strand from d_{i} does not terminate"
                )));
            }
            let v = d.head;
            let rot = &map.rot[&v];
            let p = rot.iter().position(|&r| r == d.via).unwrap();
            let out = rot[turn(v, p, rot.len())];
            if let Ref::Arc(_) = out {
                let end = self
                    .graph
                    .boundary()
                    .iter()
                    .position(|&b| b == v)
                    .ok_or_else(|| {
                        Error::InconsistentEmbedding(String::from(
                            "strand ended at a non-boundary vertex",
                        ))
                    })?;
                return Ok(BipStrand { start: i, end: end + 1, darts });
            }
            d = map_dart(&map, v, out);
        }
    }

    /// All `m` boundary strands in starting order.
    pub fn strands(&self) -> Result<Vec<BipStrand>, Error> {
        (1..=self.m()).map(|i| self.strand_from(i)).collect()
    }

    pub(crate) fn planar_map(&self) -> crate::graph::PlanarMap {
        self.graph.planar_map()
    }
}

fn map_dart(map: &crate::graph::PlanarMap, tail: VertexId, r: Ref) -> Dart {
    let (a, b) = map.ends[&r];
    Dart { tail, head: if a == tail { b } else { a }, via: r }
}

/// Validates reducedness and computes the strand permutation and face labels.
///
/// `π_Γ(i)` is the endpoint of the strand starting at `d_i`; `S(f)` is the
/// set of `i` such that `f` lies to the left of the strand *ending* at `d_i`.
pub fn strands_and_labels(
    gamma: &BipartiteDiskGraph,
) -> Result<(Vec<usize>, FaceLabels), Error> {
    let m = gamma.m();
    let faces = gamma.graph.trace_faces()?;
    let mut boundary = Vec::with_capacity(m);
    if gamma.graph.edges().is_empty() {
        // Only the degenerate two-terminal Temperley graph of the empty
        // network reaches this: one face labeled by everything.
        let mut labels = BTreeMap::new();
        labels.insert(0usize, SubsetIndex::full(m));
        for i in 1..=m {
            boundary.push(gamma.boundary_face(&faces, i)?);
        }
        return Ok(((1..=m).collect(), FaceLabels { labels, boundary }));
    }
    let strands = gamma.strands()?;
    // Reducedness: every directed dart covered exactly once.
    let mut seen: BTreeSet<(Ref, VertexId)> = BTreeSet::new();
    let mut covered = 0usize;
    for s in &strands {
        for d in &s.darts {
            if !seen.insert((d.via, d.tail)) {
                return Err(Error::NotReduced(format!(
                    "strands d_{}→d_{} revisit edge {:?}",
                    s.start, s.end, d.via
                )));
            }
            covered += 1;
        }
    }
    if covered != 2 * gamma.graph.edges().len() {
        return Err(Error::NotReduced(String::from(
            "closed strand: some edges are not on any boundary strand",
        )));
    }
    // No self-intersections (repeated undirected edge within one strand).
    for s in &strands {
        let mut used = BTreeSet::new();
        for d in &s.darts {
            if !used.insert(d.via) {
                return Err(Error::NotReduced(format!(
                    "strand d_{}→d_{} crosses itself",
                    s.start, s.end
                )));
            }
        }
    }
    // No parallel bigons: two strands sharing two edges in the same order.
    for (a, s) in strands.iter().enumerate() {
        for t in strands.iter().skip(a + 1) {
            let pos_s: BTreeMap<Ref, usize> =
                s.darts.iter().enumerate().map(|(i, d)| (d.via, i)).collect();
            let shared: Vec<(usize, usize)> = t
                .darts
                .iter()
                .enumerate()
                .filter_map(|(j, d)| pos_s.get(&d.via).map(|&i| (i, j)))
                .collect();
            for w in shared.windows(2) {
                if w[1].0 > w[0].0 {
                    return Err(Error::NotReduced(format!(
                        "strands d_{}→d_{} and d_{}→d_{} form a parallel bigon",
                        s.start, s.end, t.start, t.end
                    )));
                }
            }
        }
    }
    let mut pi = vec![0usize; m];
    for s in &strands {
        pi[s.start - 1] = s.end;
    }
    {
        let mut sorted = pi.clone();
        sorted.sort_unstable();
        if sorted != (1..=m).collect::<Vec<_>>() {
            return Err(Error::NotReduced(String::from(
                "strand endpoints do not form a permutation",
            )));
        }
    }

    // Labels: flood-fill the faces of Γ with each strand's edges as walls;
    // the left side is seeded by the face left of the strand's first dart.
    let map = gamma.planar_map();
    let mut labels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in 0..faces.len() {
        labels.insert(f, Vec::new());
    }
    for s in &strands {
        let i = s.end; // this strand *ends* at d_{s.end}
        if s.darts.is_empty() {
            for l in labels.values_mut() {
                l.push(i);
            }
            continue;
        }
        let walls: BTreeSet<Ref> = s.darts.iter().map(|d| d.via).collect();
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &e in gamma.graph.edges().keys() {
            if walls.contains(&Ref::Edge(e)) {
                continue;
            }
            let (fa, fb) = faces.faces_of_edge(e);
            if let (Some(x), Some(y)) = (fa, fb) {
                adj.entry(x).or_default().push(y);
                adj.entry(y).or_default().push(x);
            }
        }
        let d0 = &s.darts[0];
        let (tail0, _) = map.ends[&d0.via];
        let seed = faces
            .face_of_dart((d0.via, d0.tail == tail0))
            .ok_or_else(|| {
                Error::InconsistentEmbedding(String::from("strand dart on outer face"))
            })?;
        let mut left = BTreeSet::new();
        let mut stack = vec![seed];
        while let Some(f) = stack.pop() {
            if !left.insert(f) {
                continue;
            }
            if let Some(next) = adj.get(&f) {
                stack.extend(next.iter().copied());
            }
        }
        for &f in &left {
            labels.get_mut(&f).unwrap().push(i);
        }
    }
    let k = gamma.k();
    let labels: BTreeMap<usize, SubsetIndex> = labels
        .into_iter()
        .map(|(f, v)| (f, SubsetIndex::new(m, v)))
        .collect();
    for (f, l) in &labels {
        if l.len() != k {
            return Err(Error::InconsistentEmbedding(format!(
                "face {f} label {l} has size {} ≠ k = {k}",
                l.len()
            )));
        }
    }
    for i in 1..=m {
        boundary.push(gamma.boundary_face(&faces, i)?);
    }
    Ok((pi, FaceLabels { labels, boundary }))
}

// ---------------------------------------------------------------------------
// Dimer covers and boundary measurement
// ---------------------------------------------------------------------------

/// Enumerates all dimer covers by backtracking over black vertices.
pub fn dimer_covers(gamma: &BipartiteDiskGraph) -> Vec<DimerCover> {
    let blacks = gamma.blacks();
    // Incident edges per black, and the internal whites to watch.
    let by_black: Vec<(VertexId, Vec<(EdgeId, VertexId)>)> = blacks
        .iter()
        .map(|&b| {
            let inc = gamma
                .graph
                .rotation(b)
                .iter()
                .map(|&e| {
                    let (x, y) = gamma.graph.edge_ends(e);
                    (e, if x == b { y } else { x })
                })
                .collect();
            (b, inc)
        })
        .collect();
    // For each white, the last black position that can still cover it.
    let mut last_chance: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (pos, (_, inc)) in by_black.iter().enumerate() {
        for &(_, w) in inc {
            last_chance.insert(w, pos);
        }
    }
    let internal_whites: BTreeSet<VertexId> = gamma
        .whites()
        .into_iter()
        .filter(|&w| !gamma.graph.is_boundary(w))
        .collect();
    let mut out = Vec::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    let mut chosen: Vec<EdgeId> = Vec::new();

    fn rec(
        pos: usize,
        by_black: &[(VertexId, Vec<(EdgeId, VertexId)>)],
        gamma: &BipartiteDiskGraph,
        last_chance: &BTreeMap<VertexId, usize>,
        internal_whites: &BTreeSet<VertexId>,
        used: &mut BTreeSet<VertexId>,
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<DimerCover>,
    ) {
        if pos == by_black.len() {
            out.push(DimerCover { edges: chosen.clone() });
            return;
        }
        let (b, inc) = &by_black[pos];
        let choices: Vec<Option<(EdgeId, VertexId)>> = {
            let mut c: Vec<Option<(EdgeId, VertexId)>> = inc
                .iter()
                .filter(|(_, w)| !used.contains(w))
                .map(|&(e, w)| Some((e, w)))
                .collect();
            if gamma.graph.is_boundary(*b) {
                c.push(None); // a boundary black may stay uncovered
            }
            c
        };
        'choice: for ch in choices {
            let covered_white = match ch {
                Some((e, w)) => {
                    used.insert(w);
                    chosen.push(e);
                    Some(w)
                }
                None => None,
            };
            // Forward check: any internal white whose last chance was this
            // black must be covered now.
            for (&w, &lc) in last_chance.iter() {
                if lc == pos && internal_whites.contains(&w) && !used.contains(&w) {
                    if let Some(w2) = covered_white {
                        used.remove(&w2);
                        chosen.pop();
                    }
                    continue 'choice;
                }
            }
            rec(pos + 1, by_black, gamma, last_chance, internal_whites, used, chosen, out);
            if let Some(w2) = covered_white {
                used.remove(&w2);
                chosen.pop();
            }
        }
    }
    rec(0, &by_black, gamma, &last_chance, &internal_whites, &mut used, &mut chosen, &mut out);
    // Covers that leave an internal white uncovered were pruned; those that
    // never had a chance (isolated internal whites) make the list empty.
    if internal_whites
        .iter()
        .any(|w| !last_chance.contains_key(w))
    {
        return Vec::new();
    }
    out
}

/// The boundary set `∂M`: boundary blacks used plus boundary whites unused.
pub fn boundary_set(gamma: &BipartiteDiskGraph, cover: &DimerCover) -> SubsetIndex {
    let m = gamma.m();
    let mut matched: BTreeSet<VertexId> = BTreeSet::new();
    for &e in &cover.edges {
        let (a, b) = gamma.graph.edge_ends(e);
        matched.insert(a);
        matched.insert(b);
    }
    let mut members = Vec::new();
    for (i, &d) in gamma.graph.boundary().iter().enumerate() {
        let used = matched.contains(&d);
        let in_set = if gamma.is_white(d) { !used } else { used };
        if in_set {
            members.push(i + 1);
        }
    }
    SubsetIndex::new(m, members)
}

/// The boundary measurement: `Z_I = Σ_{∂M = I} wt(M)` over all dimer covers.
pub fn boundary_measurement(
    gamma: &BipartiteDiskGraph,
    wt: &EdgeWeights,
) -> Result<PluckerVector, Error> {
    let m = gamma.m();
    let k = gamma.k();
    let covers = dimer_covers(gamma);
    let mut coords: BTreeMap<SubsetIndex, Rat> = SubsetIndex::all_k_subsets(m, k)
        .into_iter()
        .map(|i| (i, Rat::zero()))
        .collect();
    let mut any = false;
    if gamma.graph.edges().is_empty() {
        // Single empty cover: all boundary whites unused.
        let empty = DimerCover { edges: Vec::new() };
        let i = boundary_set(gamma, &empty);
        *coords.get_mut(&i).unwrap() += Rat::one();
        any = true;
    } else {
        for cover in &covers {
            let i = boundary_set(gamma, cover);
            let mut w = Rat::one();
            for &e in &cover.edges {
                w *= wt.get(e).clone();
            }
            *coords.get_mut(&i).ok_or_else(|| {
                Error::InconsistentEmbedding(format!("∂M = {i} has wrong size"))
            })? += w;
            any = true;
        }
    }
    if !any {
        return Err(Error::NoDimerCover);
    }
    Ok(PluckerVector { k, n: m, coords })
}

// ---------------------------------------------------------------------------
// X variables and gauge equivalence
// ---------------------------------------------------------------------------

/// The alternating face products of `wt1`, plus whether `wt1` and `wt2` are
/// gauge equivalent (gauge fixed to 1 at boundary vertices).
pub fn x_vars_and_gauge(
    gamma: &BipartiteDiskGraph,
    wt1: &EdgeWeights,
    wt2: &EdgeWeights,
) -> Result<(XVars, bool), Error> {
    let faces = gamma.graph.trace_faces()?;
    let x = x_vars(gamma, &faces, wt1)?;
    // Gauge: propagate the boundary-fixed gauge over a spanning forest and
    // compare every edge. g(v) = 1 at boundary vertices; along an edge e,
    // wt2(e) = wt1(e) · g(u) · g(v).
    let mut g: BTreeMap<VertexId, Rat> = BTreeMap::new();
    for &d in gamma.graph.boundary() {
        g.insert(d, Rat::one());
    }
    // adjacency
    let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for (&e, &(a, b)) in gamma.graph.edges() {
        adj.entry(a).or_default().push((e, b));
        adj.entry(b).or_default().push((e, a));
    }
    let mut stack: Vec<VertexId> = gamma.graph.boundary().to_vec();
    // also seed non-boundary components deterministically with gauge 1
    let pending: Vec<VertexId> = gamma.graph.vertices().collect();
    let mut equivalent = true;
    loop {
        while let Some(v) = stack.pop() {
            let gv = g[&v].clone();
            for &(e, u) in adj.get(&v).into_iter().flatten() {
                let ratio = wt2.get(e).clone() / wt1.get(e).clone();
                let gu = ratio / gv.clone();
                match g.get(&u) {
                    None => {
                        if gamma.graph.is_boundary(u) {
                            // boundary gauge is fixed at 1
                            if gu != Rat::one() {
                                equivalent = false;
                            }
                        }
                        g.insert(u, gu);
                        stack.push(u);
                    }
                    Some(existing) => {
                        if *existing != gu {
                            equivalent = false;
                        }
                    }
                }
            }
        }
        match pending.iter().find(|v| !g.contains_key(v)) {
            Some(&v) => {
                g.insert(v, Rat::one());
                stack.push(v);
            }
            None => break,
        }
    }
    Ok((x, equivalent))
}

/// The alternating product of edge weights around each face: weights of
/// black→white darts (in trace order) in the numerator.
fn x_vars(
    gamma: &BipartiteDiskGraph,
    faces: &Faces,
    wt: &EdgeWeights,
) -> Result<XVars, Error> {
    let mut vals = BTreeMap::new();
    for (fi, face) in faces.faces.iter().enumerate() {
        let mut x = Rat::one();
        for d in &face.darts {
            let Some(e) = d.via.edge() else { continue };
            let w = wt.get(e).clone();
            if gamma.is_white(d.head) {
                x *= w; // black → white
            } else {
                x /= w; // white → black
            }
        }
        vals.insert(fi, x);
    }
    Ok(FaceVars { vals })
}

// ---------------------------------------------------------------------------
// p_Γ and Φ_Γ
// ---------------------------------------------------------------------------

/// Weights from face variables: `wt(e) = 1/(A_f A_g)`, with an extra factor
/// `A_{f_i^-}` when `e` touches the boundary white vertex `d_i`.
pub fn p_gamma(gamma: &BipartiteDiskGraph, a: &AVars) -> Result<EdgeWeights, Error> {
    let faces = gamma.graph.trace_faces()?;
    for v in a.vals.values() {
        if v <= &Rat::zero() {
            return Err(Error::NonPositive(String::from("A variable")));
        }
    }
    let boundary = gamma.graph.boundary();
    let mut wt = BTreeMap::new();
    for (&e, &(u, v)) in gamma.graph.edges() {
        let (fa, fb) = faces.faces_of_edge(e);
        let (fa, fb) = (
            fa.ok_or_else(|| Error::InconsistentEmbedding(String::from("outer face")))?,
            fb.ok_or_else(|| Error::InconsistentEmbedding(String::from("outer face")))?,
        );
        let mut w = Rat::one() / (a.vals[&fa].clone() * a.vals[&fb].clone());
        for &x in &[u, v] {
            if gamma.is_white(x) {
                if let Some(pos) = boundary.iter().position(|&d| d == x) {
                    let f_minus = gamma.boundary_face(&faces, pos + 1)?;
                    w *= a.vals[&f_minus].clone();
                }
            }
        }
        wt.insert(e, w);
    }
    EdgeWeights::new(wt)
}

/// Face variables from a decorated point: `A_f = Δ_{S(f)}`.
pub fn scott_phi(
    _gamma: &BipartiteDiskGraph,
    labels: &FaceLabels,
    x: &MatrixPoint,
) -> Result<AVars, Error> {
    let p = crate::grassmann::plucker(x)?;
    let mut vals = BTreeMap::new();
    for (&f, s) in &labels.labels {
        let v = p.get(s).clone();
        if v <= Rat::zero() {
            return Err(Error::NonPositive(format!("Δ_{s} of the point")));
        }
        vals.insert(f, v);
    }
    Ok(FaceVars { vals })
}

/// Alternating weight product along a strand: black→white edge weights in
/// the numerator, white→black in the denominator.
pub fn strand_weight(
    gamma: &BipartiteDiskGraph,
    wt: &EdgeWeights,
    strand: &BipStrand,
) -> Rat {
    let mut acc = Rat::one();
    for d in &strand.darts {
        let e = d.via.edge().expect("strand darts are edges");
        if gamma.is_white(d.head) {
            acc *= wt.get(e).clone();
        } else {
            acc /= wt.get(e).clone();
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Local moves
// ---------------------------------------------------------------------------

/// Which bipartite local move to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BipMoveKind {
    /// Spider (square) move at an internal quadrilateral face: the four
    /// side edges are replaced by an inner square of opposite colors joined
    /// to the corners by unit legs, with mutated side weights.
    Spider { face: usize },
    /// Contraction of an internal degree-2 vertex: its two neighbors merge.
    Contraction { vertex: VertexId },
}

/// Result of a bipartite local move.
#[derive(Debug, Clone)]
pub struct BipMove {
    pub gamma: BipartiteDiskGraph,
    pub wt: EdgeWeights,
    /// X variables after the move, indexed by the *new* face list.
    pub face_map: BTreeMap<usize, usize>,
}

/// Applies a spider or contraction move, transporting the edge weights.
pub fn bipartite_move(
    gamma: &BipartiteDiskGraph,
    wt: &EdgeWeights,
    kind: BipMoveKind,
) -> Result<BipMove, Error> {
    match kind {
        BipMoveKind::Spider { face } => spider_move(gamma, wt, face),
        BipMoveKind::Contraction { vertex } => contraction_move(gamma, wt, vertex),
    }
}

fn spider_move(
    gamma: &BipartiteDiskGraph,
    wt: &EdgeWeights,
    face: usize,
) -> Result<BipMove, Error> {
    let old_faces = gamma.graph.trace_faces()?;
    let f = old_faces
        .faces
        .get(face)
        .ok_or_else(|| Error::InvalidSite(format!("no face {face}")))?
        .clone();
    if f.darts.len() != 4 || f.darts.iter().any(|d| d.via.is_arc()) {
        return Err(Error::InvalidSite(format!("face {face} is not a quadrilateral")));
    }
    // Corners v_1..v_4 in trace order; side e_i joins v_i to v_{i+1}.
    let vs: Vec<VertexId> = f.darts.iter().map(|d| d.tail).collect();
    let es: Vec<EdgeId> = f.darts.iter().map(|d| d.via.edge().unwrap()).collect();
    {
        let mut uv = vs.clone();
        uv.sort_unstable();
        uv.dedup();
        let mut ue = es.clone();
        ue.sort_unstable();
        ue.dedup();
        if uv.len() != 4 || ue.len() != 4 {
            return Err(Error::InvalidSite(format!(
                "face {face} revisits a vertex or edge"
            )));
        }
    }
    // Fresh ids for the inner square u_1..u_4 (u_i near v_i, opposite
    // color), its sides f_1..f_4 (f_i joins u_i to u_{i+1}) and the unit
    // legs l_i = (v_i, u_i).
    let max_v = gamma.graph.vertices().max().unwrap_or(0);
    let us: Vec<VertexId> = (1..=4).map(|i| max_v + i).collect();
    let max_e = gamma.graph.edges().keys().max().copied().unwrap_or(0);
    let legs: Vec<EdgeId> = (1..=4).map(|i| max_e + i).collect();
    let inner: Vec<EdgeId> = (5..=8).map(|i| max_e + i).collect();

    let mut edges = gamma.graph.edges().clone();
    let mut new_wt = wt.wt.clone();
    for &e in &es {
        edges.remove(&e);
        new_wt.remove(&e);
    }
    // Local matching count: the inner side parallel to old side e_i must
    // carry wt(e_{i+2}) / (w1·w3 + w2·w4), and all boundary measurements
    // pick up the same factor 1/(w1·w3 + w2·w4).
    let w: Vec<Rat> = es.iter().map(|&e| wt.get(e).clone()).collect();
    let denom = w[0].clone() * w[2].clone() + w[1].clone() * w[3].clone();
    for i in 0..4 {
        edges.insert(legs[i], (vs[i], us[i]));
        new_wt.insert(legs[i], Rat::one());
        edges.insert(inner[i], (us[i], us[(i + 1) % 4]));
        new_wt.insert(inner[i], w[(i + 2) % 4].clone() / denom.clone());
    }

    let mut rotations = gamma.graph.rotations().clone();
    // At corner v_i the sides e_{i−1}, e_i sit consecutively (in that
    // clockwise order); replace the pair with the leg l_i.
    for i in 0..4 {
        let prev = es[(i + 3) % 4];
        let cur = es[i];
        let rot = rotations.get_mut(&vs[i]).unwrap();
        let p = rot.iter().position(|&e| e == prev).unwrap();
        debug_assert_eq!(rot[(p + 1) % rot.len()], cur);
        let q = (p + 1) % rot.len();
        rot[p] = legs[i];
        rot.remove(q);
    }
    // Inner vertex u_i, clockwise: leg outward, then the side towards
    // u_{i−1}, then the side towards u_{i+1}.
    for i in 0..4 {
        rotations.insert(us[i], vec![legs[i], inner[(i + 3) % 4], inner[i]]);
    }

    let graph = DiskGraph::new(gamma.graph.boundary().to_vec(), rotations, edges)?;
    let mut color = gamma.color.clone();
    for i in 0..4 {
        let c = color[&vs[i]];
        color.insert(us[i], if c == Color::White { Color::Black } else { Color::White });
    }
    let new_gamma = BipartiteDiskGraph::new(graph, color, gamma.tags.clone())?;
    // Face correspondence over refs untouched by the move; the mutated face
    // itself maps to the new inner square (both have empty signatures).
    let new_faces = new_gamma.graph.trace_faces()?;
    let touched: BTreeSet<EdgeId> = es
        .iter()
        .chain(legs.iter())
        .chain(inner.iter())
        .copied()
        .collect();
    let sig = |fc: &Face| -> BTreeSet<Ref> {
        fc.darts
            .iter()
            .map(|d| d.via)
            .filter(|r| match r {
                Ref::Edge(e) => !touched.contains(e),
                Ref::Arc(_) => true,
            })
            .collect()
    };
    let new_by_sig: BTreeMap<BTreeSet<Ref>, usize> = new_faces
        .faces
        .iter()
        .enumerate()
        .map(|(i, fc)| (sig(fc), i))
        .collect();
    let mut face_map = BTreeMap::new();
    for (i, fc) in old_faces.faces.iter().enumerate() {
        if let Some(&ni) = new_by_sig.get(&sig(fc)) {
            face_map.insert(i, ni);
        }
    }
    Ok(BipMove { gamma: new_gamma, wt: EdgeWeights::new(new_wt)?, face_map })
}

fn contraction_move(
    gamma: &BipartiteDiskGraph,
    wt: &EdgeWeights,
    v: VertexId,
) -> Result<BipMove, Error> {
    if gamma.graph.is_boundary(v) || gamma.graph.degree(v) != 2 {
        return Err(Error::InvalidSite(format!("{v} is not an internal degree-2 vertex")));
    }
    let rot = gamma.graph.rotation(v).to_vec();
    let (e1, e2) = (rot[0], rot[1]);
    let other = |e: EdgeId| {
        let (a, b) = gamma.graph.edge_ends(e);
        if a == v {
            b
        } else {
            a
        }
    };
    let (u1, u2) = (other(e1), other(e2));
    if u1 == u2 {
        return Err(Error::InvalidSite(String::from("contraction would create a loop")));
    }
    if gamma.graph.is_boundary(u1) || gamma.graph.is_boundary(u2) {
        return Err(Error::InvalidSite(String::from(
            "contraction across a boundary vertex",
        )));
    }
    // Gauge u1 by 1/wt(e1) and u2 by 1/wt(e2) so both chain edges become 1,
    // then merge u1, v, u2 into u1.
    let mut new_wt = wt.wt.clone();
    for (&e, &(a, b)) in gamma.graph.edges() {
        let mut w = new_wt[&e].clone();
        for &x in &[a, b] {
            if x == u1 {
                w /= wt.get(e1).clone();
            }
            if x == u2 {
                w /= wt.get(e2).clone();
            }
        }
        new_wt.insert(e, w);
    }
    new_wt.remove(&e1);
    new_wt.remove(&e2);
    let mut edges = gamma.graph.edges().clone();
    edges.remove(&e1);
    edges.remove(&e2);
    for (_, ends) in edges.iter_mut() {
        if ends.0 == u2 {
            ends.0 = u1;
        }
        if ends.1 == u2 {
            ends.1 = u1;
        }
    }
    let mut rotations = gamma.graph.rotations().clone();
    rotations.remove(&v);
    let r1 = rotations.remove(&u1).unwrap();
    let r2 = rotations.remove(&u2).unwrap();
    let p1 = r1.iter().position(|&e| e == e1).unwrap();
    let p2 = r2.iter().position(|&e| e == e2).unwrap();
    // Merge: rotate r1 so the chain edge is last, r2 so it is first, drop
    // both chain edges and concatenate.
    let mut merged = Vec::with_capacity(r1.len() + r2.len() - 2);
    for i in 1..r1.len() {
        merged.push(r1[(p1 + i) % r1.len()]);
    }
    for i in 1..r2.len() {
        merged.push(r2[(p2 + i) % r2.len()]);
    }
    rotations.insert(u1, merged);
    let graph = DiskGraph::new(gamma.graph.boundary().to_vec(), rotations, edges)?;
    let mut color = gamma.color.clone();
    color.remove(&v);
    color.remove(&u2);
    let mut tags = gamma.tags.clone();
    tags.remove(&v);
    tags.remove(&u2);
    let new_gamma = BipartiteDiskGraph::new(graph, color, tags)?;
    // Face correspondence via unmoved darts.
    let old_faces = gamma.graph.trace_faces()?;
    let new_faces = new_gamma.graph.trace_faces()?;
    let removed = [e1, e2];
    let sig = |f: &Face| -> BTreeSet<Ref> {
        f.darts
            .iter()
            .map(|d| d.via)
            .filter(|r| match r {
                Ref::Edge(e) => !removed.contains(e),
                Ref::Arc(_) => true,
            })
            .collect()
    };
    let new_by_sig: BTreeMap<BTreeSet<Ref>, usize> = new_faces
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| (sig(f), i))
        .collect();
    let mut face_map = BTreeMap::new();
    for (i, f) in old_faces.faces.iter().enumerate() {
        if let Some(&ni) = new_by_sig.get(&sig(f)) {
            face_map.insert(i, ni);
        }
    }
    Ok(BipMove { gamma: new_gamma, wt: EdgeWeights::new(new_wt)?, face_map })
}

// ---------------------------------------------------------------------------
// Helpers used by the orthogonal/electrical layers
// ---------------------------------------------------------------------------

/// Conductances as positive weights keyed by the network's edge ids.
pub fn conductances(
    g: &DiskGraph,
    vals: &BTreeMap<EdgeId, Rat>,
) -> Result<EdgeWeights, Error> {
    for &e in g.edges().keys() {
        if !vals.contains_key(&e) {
            return Err(Error::BadWeights(format!("missing conductance for edge {e}")));
        }
    }
    for &e in vals.keys() {
        if !g.edges().contains_key(&e) {
            return Err(Error::BadWeights(format!("conductance for unknown edge {e}")));
        }
    }
    EdgeWeights::new(vals.clone())
}

/// The `Site` of the network tagged on a Temperley white vertex.
pub fn site_of_white(gamma: &BipartiteDiskGraph, w: VertexId) -> Option<Site> {
    match gamma.tags.get(&w) {
        Some(Provenance::GVertex(v)) => Some(Site::Vertex(*v)),
        Some(Provenance::GFace(f)) => Some(Site::Face(*f)),
        _ => None,
    }
}

/// Recovers a matrix point from a Plücker vector by exact reconstruction:
/// rows are an echelon basis at the lexicographically first nonzero index,
/// rescaled so the minor at that index equals the given coordinate.
pub fn point_from_plucker(p: &PluckerVector) -> Result<MatrixPoint, Error> {
    let k = p.k;
    let n = p.n;
    let base = p
        .coords
        .iter()
        .find(|(_, v)| !v.is_zero())
        .map(|(i, _)| i.clone())
        .ok_or(Error::RankDeficient)?;
    let zb = p.coords[&base].clone();
    let cols: Vec<usize> = base.members().to_vec();
    // Row-echelon representative at `base`: identity in the base columns,
    // and for j outside the base the (r, j) entry is the minor on
    // (base ∖ cols[r]) ∪ {j} divided by Z_base, up to the sign from sorting
    // j into place.
    let mut mat = Mat::zero(k, n);
    for r in 0..k {
        for j in 1..=n {
            mat[(r, j - 1)] = if cols.contains(&j) {
                if cols[r] == j {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            } else {
                let mut members: Vec<usize> =
                    cols.iter().copied().filter(|&c| c != cols[r]).collect();
                members.push(j);
                members.sort_unstable();
                let coord = p.coords[&SubsetIndex::new(n, members)].clone();
                let sign = Rat::from_integer(minor_sign(&cols, r, j).into());
                coord * sign / zb.clone()
            };
        }
    }
    // Scale row 0 by Z_base so the decorated minor at `base` is exactly Z_base.
    for j in 0..n {
        mat[(0, j)] = mat[(0, j)].clone() * zb.clone();
    }
    let point = MatrixPoint { mat, decorated: true };
    // Validate: the reconstruction must reproduce the input exactly.
    let q = crate::grassmann::plucker(&point)?;
    if q != *p {
        return Err(Error::NotOrthogonal(String::from(
            "Plücker vector does not satisfy the exchange relations",
        )));
    }
    Ok(point)
}

/// Sign of the minor obtained from the sorted base set by replacing the
/// element at position `r` with column `j` (j not in the base).
fn minor_sign(cols: &[usize], r: usize, j: usize) -> i64 {
    // Count how many base elements (other than cols[r]) lie strictly
    // between min/max of cols[r] and j: each transposition past one flips
    // the sign.
    let lo = cols[r].min(j);
    let hi = cols[r].max(j);
    let crossings = cols
        .iter()
        .enumerate()
        .filter(|&(i, &c)| i != r && c > lo && c < hi)
        .count();
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_graph;
    use crate::numeric::rat;

    fn idx(n: usize, m: &[usize]) -> SubsetIndex {
        SubsetIndex::new(n, m.to_vec())
    }

    fn star_temperley(a: i64, b: i64, c: i64) -> (BipartiteDiskGraph, EdgeWeights) {
        let g = builtin_graph(3).unwrap();
        let cond = conductances(
            &g,
            &BTreeMap::from([(1, rat(a, 1)), (2, rat(b, 1)), (3, rat(c, 1))]),
        )
        .unwrap();
        temperley_plus(&g, &cond).unwrap()
    }

    #[test]
    fn star_temperley_counts() {
        let (gamma, _) = star_temperley(1, 1, 1);
        assert_eq!(gamma.blacks().len(), 3);
        assert_eq!(gamma.whites().len(), 7);
        assert_eq!(gamma.k(), 4);
        assert_eq!(gamma.m(), 6);
        // faces of G₊ ↔ incident (vertex, face) pairs of G
        let faces = gamma.graph.trace_faces().unwrap();
        assert_eq!(faces.len(), 9);
    }

    #[test]
    fn single_edge_temperley_counts() {
        let g = builtin_graph(2).unwrap();
        let cond = conductances(&g, &BTreeMap::from([(1, rat(7, 3))])).unwrap();
        let (gamma, _) = temperley_plus(&g, &cond).unwrap();
        assert_eq!(gamma.blacks().len(), 1);
        assert_eq!(gamma.whites().len(), 4);
        assert_eq!(gamma.k(), 3);
    }

    #[test]
    fn star_strand_permutation_is_pi_4_6() {
        let (gamma, _) = star_temperley(2, 3, 5);
        let (pi, _) = strands_and_labels(&gamma).unwrap();
        for i in 1..=6 {
            assert_eq!(pi[i - 1], (i + 4 - 1) % 6 + 1, "strand from d_{i}");
        }
    }

    #[test]
    fn single_edge_boundary_labels_match_printed_values() {
        let g = builtin_graph(2).unwrap();
        let cond = conductances(&g, &BTreeMap::from([(1, rat(7, 3))])).unwrap();
        let (gamma, _) = temperley_plus(&g, &cond).unwrap();
        let (pi, labels) = strands_and_labels(&gamma).unwrap();
        assert_eq!(pi, vec![4, 1, 2, 3]);
        let s = |i: usize| labels.labels[&labels.boundary[i - 1]].clone();
        assert_eq!(s(1), idx(4, &[1, 2, 3]));
        assert_eq!(s(2), idx(4, &[2, 3, 4]));
        assert_eq!(s(3), idx(4, &[1, 3, 4]));
        assert_eq!(s(4), idx(4, &[1, 2, 4]));
    }

    #[test]
    fn single_edge_measurement_matches_printed_vector() {
        let g = builtin_graph(2).unwrap();
        let cond = conductances(&g, &BTreeMap::from([(1, rat(7, 3))])).unwrap();
        let (gamma, wt) = temperley_plus(&g, &cond).unwrap();
        let z = boundary_measurement(&gamma, &wt).unwrap();
        assert_eq!(*z.get(&idx(4, &[1, 2, 3])), rat(1, 1));
        assert_eq!(*z.get(&idx(4, &[1, 2, 4])), rat(7, 3));
        assert_eq!(*z.get(&idx(4, &[1, 3, 4])), rat(1, 1));
        assert_eq!(*z.get(&idx(4, &[2, 3, 4])), rat(7, 3));
    }

    /// The 4-boundary-vertex fixture: an interior 4-cycle with legs to the
    /// boundary and side weights (a, b, c, d) = (2, 3, 5, 7).
    fn four_vertex_fixture() -> (BipartiteDiskGraph, EdgeWeights) {
        // vertices: d1..d4 = 1..4 on the boundary; A=5 (black), B=6 (white),
        // C=7 (black), D=8 (white); d1, d3 white; d2, d4 black.
        // edges: legs 1..4 (d_i to the cycle), cycle 5=DA, 6=AB, 7=BC, 8=CD.
        let graph = DiskGraph::new(
            vec![1, 2, 3, 4],
            BTreeMap::from([
                (1, vec![1]),
                (2, vec![2]),
                (3, vec![3]),
                (4, vec![4]),
                (5, vec![1, 6, 5]),
                (6, vec![2, 7, 6]),
                (7, vec![3, 8, 7]),
                (8, vec![4, 5, 8]),
            ]),
            BTreeMap::from([
                (1, (1, 5)),
                (2, (2, 6)),
                (3, (3, 7)),
                (4, (4, 8)),
                (5, (8, 5)),
                (6, (5, 6)),
                (7, (6, 7)),
                (8, (7, 8)),
            ]),
        )
        .unwrap();
        let color = BTreeMap::from([
            (1, Color::White),
            (2, Color::Black),
            (3, Color::White),
            (4, Color::Black),
            (5, Color::Black),
            (6, Color::White),
            (7, Color::Black),
            (8, Color::White),
        ]);
        let gamma = BipartiteDiskGraph::new(graph, color, BTreeMap::new()).unwrap();
        let wt = EdgeWeights::new(BTreeMap::from([
            (1, rat(1, 1)),
            (2, rat(1, 1)),
            (3, rat(1, 1)),
            (4, rat(1, 1)),
            (5, rat(2, 1)), // a
            (6, rat(3, 1)), // b
            (7, rat(5, 1)), // c
            (8, rat(7, 1)), // d
        ]))
        .unwrap();
        (gamma, wt)
    }

    #[test]
    fn four_vertex_fixture_strand_permutation_is_pi_2_4() {
        let (gamma, _) = four_vertex_fixture();
        let (pi, _) = strands_and_labels(&gamma).unwrap();
        assert_eq!(pi, vec![3, 4, 1, 2]);
    }

    #[test]
    fn four_vertex_fixture_measurement() {
        let (gamma, wt) = four_vertex_fixture();
        let z = boundary_measurement(&gamma, &wt).unwrap();
        // (a, ac+bd, b, d, 1, c) at (2, 3, 5, 7)
        assert_eq!(*z.get(&idx(4, &[1, 2])), rat(2, 1));
        assert_eq!(*z.get(&idx(4, &[1, 3])), rat(31, 1));
        assert_eq!(*z.get(&idx(4, &[1, 4])), rat(3, 1));
        assert_eq!(*z.get(&idx(4, &[2, 3])), rat(7, 1));
        assert_eq!(*z.get(&idx(4, &[2, 4])), rat(1, 1));
        assert_eq!(*z.get(&idx(4, &[3, 4])), rat(5, 1));
    }

    #[test]
    fn x_product_is_one_and_gauge_detects_scaling() {
        let (gamma, wt) = star_temperley(2, 3, 5);
        let (x, same) = x_vars_and_gauge(&gamma, &wt, &wt).unwrap();
        assert!(same);
        let prod: Rat = x.vals.values().cloned().product();
        assert_eq!(prod, rat(1, 1));
        // Scale all edges at one internal black vertex.
        let b = gamma
            .blacks()
            .into_iter()
            .find(|&v| !gamma.graph.is_boundary(v))
            .unwrap();
        let mut wt2 = wt.wt.clone();
        for (&e, &(p, q)) in gamma.graph.edges() {
            if p == b || q == b {
                let w = wt2[&e].clone();
                wt2.insert(e, w * rat(5, 2));
            }
        }
        let wt2 = EdgeWeights::new(wt2).unwrap();
        let (_, same2) = x_vars_and_gauge(&gamma, &wt, &wt2).unwrap();
        assert!(same2);
        // A non-gauge change is detected.
        let mut wt3 = wt.wt.clone();
        let e0 = *wt3.keys().next().unwrap();
        let w = wt3[&e0].clone();
        wt3.insert(e0, w * rat(2, 1));
        let wt3 = EdgeWeights::new(wt3).unwrap();
        let (_, same3) = x_vars_and_gauge(&gamma, &wt, &wt3).unwrap();
        assert!(!same3);
    }

    #[test]
    fn measurement_well_defined_on_gauge_classes() {
        let (gamma, wt) = star_temperley(2, 3, 5);
        let b = gamma
            .blacks()
            .into_iter()
            .find(|&v| !gamma.graph.is_boundary(v))
            .unwrap();
        let mut wt2 = wt.wt.clone();
        for (&e, &(p, q)) in gamma.graph.edges() {
            if p == b || q == b {
                let w = wt2[&e].clone();
                wt2.insert(e, w * rat(5, 2));
            }
        }
        let wt2 = EdgeWeights::new(wt2).unwrap();
        let z1 = boundary_measurement(&gamma, &wt).unwrap();
        let z2 = boundary_measurement(&gamma, &wt2).unwrap();
        assert!(z1.projectively_equal(&z2));
    }

    #[test]
    fn spider_move_preserves_measurement_and_inverts_x() {
        let (gamma, wt) = four_vertex_fixture();
        let faces = gamma.graph.trace_faces().unwrap();
        // find the interior quadrilateral (all four vertices internal)
        let face = (0..faces.len())
            .find(|&f| {
                let fc = &faces.faces[f];
                fc.darts.len() == 4
                    && fc.darts.iter().all(|d| {
                        !d.via.is_arc() && !gamma.graph.is_boundary(d.tail)
                    })
            })
            .unwrap();
        let before = boundary_measurement(&gamma, &wt).unwrap();
        let (x_before, _) = x_vars_and_gauge(&gamma, &wt, &wt).unwrap();
        let mv = bipartite_move(&gamma, &wt, BipMoveKind::Spider { face }).unwrap();
        let after = boundary_measurement(&mv.gamma, &mv.wt).unwrap();
        assert!(before.projectively_equal(&after));
        let (x_after, _) = x_vars_and_gauge(&mv.gamma, &mv.wt, &mv.wt).unwrap();
        let f_new = mv.face_map[&face];
        assert_eq!(
            x_after.vals[&f_new].clone() * x_before.vals[&face].clone(),
            rat(1, 1)
        );
        // applying the spider twice restores the X variables of every face
        // that survives both moves
        let mv2 = bipartite_move(&mv.gamma, &mv.wt, BipMoveKind::Spider { face: f_new })
            .unwrap();
        let (x_twice, _) = x_vars_and_gauge(&mv2.gamma, &mv2.wt, &mv2.wt).unwrap();
        for (&old, &mid) in &mv.face_map {
            if let Some(&newest) = mv2.face_map.get(&mid) {
                assert_eq!(
                    x_twice.vals[&newest], x_before.vals[&old],
                    "face {old} after two spider moves"
                );
            }
        }
    }

    #[test]
    fn contraction_preserves_measurement_and_x() {
        // A path d1(w) — 3(b) — 4(w) — 5(b) — d2(w) whose middle vertex 4
        // is internal of degree 2, so it can be contracted away.
        let graph = DiskGraph::new(
            vec![1, 2],
            BTreeMap::from([
                (1, vec![1]),
                (2, vec![2]),
                (3, vec![1, 3]),
                (4, vec![3, 4]),
                (5, vec![4, 2]),
            ]),
            BTreeMap::from([(1, (1, 3)), (3, (3, 4)), (4, (4, 5)), (2, (5, 2))]),
        )
        .unwrap();
        let color = BTreeMap::from([
            (1, Color::White),
            (2, Color::White),
            (3, Color::Black),
            (4, Color::White),
            (5, Color::Black),
        ]);
        let gamma = BipartiteDiskGraph::new(graph, color, BTreeMap::new()).unwrap();
        let wt = EdgeWeights::new(BTreeMap::from([
            (1, rat(2, 1)),
            (2, rat(3, 1)),
            (3, rat(5, 1)),
            (4, rat(7, 1)),
        ]))
        .unwrap();
        let before = boundary_measurement(&gamma, &wt).unwrap();
        let mv =
            bipartite_move(&gamma, &wt, BipMoveKind::Contraction { vertex: 4 }).unwrap();
        let after = boundary_measurement(&mv.gamma, &mv.wt).unwrap();
        assert!(before.projectively_equal(&after));
    }

    #[test]
    fn point_reconstruction_round_trips() {
        let (gamma, wt) = four_vertex_fixture();
        let z = boundary_measurement(&gamma, &wt).unwrap();
        let point = point_from_plucker(&z).unwrap();
        let z2 = crate::grassmann::plucker(&point).unwrap();
        assert_eq!(z, z2);
    }

    #[test]
    fn star_boundary_labels_are_cyclic_intervals() {
        let (gamma, _) = star_temperley(2, 3, 5);
        let (_, labels) = strands_and_labels(&gamma).unwrap();
        // S(f_i^-) = {i, …, i+k−1} cyclically, k = 4, m = 6
        for i in 1..=6usize {
            let s = &labels.labels[&labels.boundary[i - 1]];
            let expect: Vec<usize> = (0..4).map(|d| (i + d - 1) % 6 + 1).collect();
            assert_eq!(s, &idx(6, &expect), "f_{i}^-");
        }
    }

    #[test]
    fn strand_product_equals_label_minor_ratio() {
        // On the star: the alternating product along α_i equals
        // Δ_{S(f_{n+i−1}^-)}/Δ_{S(f_{n+i}^-)} of the measured point.
        let (gamma, wt) = star_temperley(2, 3, 5);
        let n = 3;
        let m = 2 * n;
        let (_, labels) = strands_and_labels(&gamma).unwrap();
        let z = boundary_measurement(&gamma, &wt).unwrap();
        let strands = gamma.strands().unwrap();
        for i in 1..=n {
            let start = (n + i - 1 + m - 1) % m + 1; // d_{n+i−1}
            let alpha = strands.iter().find(|s| s.start == start).unwrap();
            assert_eq!(alpha.end, i);
            let prod = strand_weight(&gamma, &wt, alpha);
            // boundary[j−1] is f_j^-, 1-based cyclic in j
            let num_idx = (n + i - 2) % m; // f_{n+i−1}^-
            let den_idx = (n + i - 1) % m; // f_{n+i}^-
            let num = z.get(&labels.labels[&labels.boundary[num_idx]]).clone();
            let den = z.get(&labels.labels[&labels.boundary[den_idx]]).clone();
            assert_eq!(prod, num / den, "alpha_{i}");
        }
    }
}
