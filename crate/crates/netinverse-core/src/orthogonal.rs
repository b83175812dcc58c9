//! The symmetric form Q, Cartan coordinates, Pfaffian identities, B
//! variables, the cube recurrence, the torus action, and the electrical
//! right and left twists.
//!
//! Points of the space carved out by Q are handled entirely through their
//! Cartan coordinates `Σ_J` (J ⊆ [n]): they are read off recursively from
//! Plücker coordinates via the one-element-overlap relation
//! `Δ_I = Σ_J · Σ_{J∖{l}}`, which keeps everything in rational arithmetic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::dimer::{temperley_plus, strands_and_labels, AVars, BipartiteDiskGraph, EdgeWeights, FaceVars, Provenance};
use crate::error::Error;
use crate::graph::{j_labels, DiskGraph, MoveKind, Site, YDeltaMove};
use crate::grassmann::{
    column_scale, left_twist, omega_check, plucker, right_twist, ColumnScaling,
    MatrixPoint, PluckerVector,
};
use crate::numeric::{pfaffian, Mat, Rat, SubsetIndex};

/// Cartan coordinates `Σ_J` for all `J ⊆ [n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanVector {
    pub n: usize,
    pub sigma: BTreeMap<SubsetIndex, Rat>,
}

impl CartanVector {
    /// Validates completeness (all `2ⁿ` subsets) and strict positivity.
    pub fn new(n: usize, sigma: BTreeMap<SubsetIndex, Rat>) -> Result<Self, Error> {
        for j in SubsetIndex::all_subsets(n) {
            match sigma.get(&j) {
                None => {
                    return Err(Error::DimensionMismatch(format!(
                        "missing Cartan coordinate at J = {j}"
                    )))
                }
                Some(v) if v <= &Rat::zero() => {
                    return Err(Error::NonPositive(format!("Σ_{j}")))
                }
                _ => {}
            }
        }
        if sigma.len() != 1 << n {
            return Err(Error::DimensionMismatch(String::from(
                "extra Cartan coordinates",
            )));
        }
        Ok(CartanVector { n, sigma })
    }

    pub fn get(&self, j: &SubsetIndex) -> &Rat {
        &self.sigma[j]
    }

    /// Checks every bihomogeneous relation
    /// `Σ_{I∪jl}Σ_{I∪k} = Σ_I Σ_{I∪jkl} + Σ_{I∪jk}Σ_{I∪l} + Σ_{I∪kl}Σ_{I∪j}`
    /// over all `I` and `j < k < l` disjoint from `I`.
    pub fn relations_check(&self) -> Result<(), Error> {
        let n = self.n;
        for j in 1..=n {
            for k in (j + 1)..=n {
                for l in (k + 1)..=n {
                    for i in SubsetIndex::all_subsets(n) {
                        if i.contains(j) || i.contains(k) || i.contains(l) {
                            continue;
                        }
                        let s = |x: &SubsetIndex| self.sigma[x].clone();
                        let lhs = s(&i.with(j).with(l)) * s(&i.with(k));
                        let rhs = s(&i) * s(&i.with(j).with(k).with(l))
                            + s(&i.with(j).with(k)) * s(&i.with(l))
                            + s(&i.with(k).with(l)) * s(&i.with(j));
                        if lhs != rhs {
                            return Err(Error::NotOrthogonal(format!(
                                "relation failed at I = {i}, (j,k,l) = ({j},{k},{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Positive values on the vertices and faces of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BVariables {
    pub vals: BTreeMap<Site, Rat>,
}

impl BVariables {
    pub fn new(vals: BTreeMap<Site, Rat>) -> Result<Self, Error> {
        for (s, v) in &vals {
            if v <= &Rat::zero() {
                return Err(Error::NonPositive(format!("B value at {s:?}")));
            }
        }
        Ok(BVariables { vals })
    }
}

/// The two skew-symmetric normal forms extracted from Cartan coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewPair {
    pub m_plus: Mat,
    pub m_minus: Mat,
}

// ---------------------------------------------------------------------------
// The form Q
// ---------------------------------------------------------------------------

/// `Q(x,y) = ½ Σ_{i=1}^n (−1)^{i−1}(x_i y_{n+i} + x_{n+i} y_i)`.
pub fn q_form(x: &[Rat], y: &[Rat]) -> Rat {
    assert_eq!(x.len(), y.len());
    assert_eq!(x.len() % 2, 0);
    let n = x.len() / 2;
    let mut acc = Rat::zero();
    for i in 0..n {
        let term = x[i].clone() * y[n + i].clone() + x[n + i].clone() * y[i].clone();
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / Rat::from_integer(2.into())
}

/// Whether the row span `X` satisfies `X⊥ ⊆ X`.
pub fn is_coisotropic(m: &MatrixPoint) -> bool {
    let rows = m.mat.rows();
    let n2 = m.mat.cols();
    if n2 % 2 != 0 {
        return false;
    }
    let n = n2 / 2;
    // X⊥ = kernel of the matrix A with A[j][i] = coefficient of x_i in
    // Q(x, row_j); the ½ factor is irrelevant for the kernel.
    let a = Mat::construct(rows, n2, |j, i| {
        let r = m.mat.row(j);
        let (sign, partner) = if i < n { (i % 2 == 0, n + i) } else { ((i - n) % 2 == 0, i - n) };
        let v = r[partner].clone();
        if sign {
            v
        } else {
            -v
        }
    });
    let base_rank = m.mat.rank();
    for v in kernel_basis(&a) {
        let vm = Mat::from_rows(vec![v]);
        if m.mat.vstack(&vm).rank() != base_rank {
            return false;
        }
    }
    true
}

/// A basis of `{x : A x = 0}` read off the reduced row echelon form.
fn kernel_basis(a: &Mat) -> Vec<Vec<Rat>> {
    let cols = a.cols();
    let (r, pivots) = crate::numeric::rref_solve(a);
    let pivot_cols: Vec<usize> = pivots.members().iter().map(|&c| c - 1).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Multiplies column `n+i` by `(−1)^{i−1}`: the (self-inverse) change of
/// basis between standard coordinates and `W ⊕ W∨` coordinates.
pub fn change_basis(m: &MatrixPoint) -> MatrixPoint {
    let n = m.n() / 2;
    let mat = Mat::construct(m.k(), 2 * n, |r, c| {
        let v = m.mat[(r, c)].clone();
        if c >= n && (c - n) % 2 == 1 {
            -v
        } else {
            v
        }
    });
    MatrixPoint { mat, decorated: m.decorated }
}

// ---------------------------------------------------------------------------
// Cartan coordinates from Plücker coordinates and back
// ---------------------------------------------------------------------------

/// `I(K,l) = K ∪ {n+j : j ∉ K} ∪ {n+l}` for `l ∈ K`.
fn overlap_index(n: usize, k: &SubsetIndex, l: usize) -> SubsetIndex {
    let mut members: Vec<usize> = k.members().to_vec();
    for j in 1..=n {
        if !k.contains(j) {
            members.push(n + j);
        }
    }
    members.push(n + l);
    SubsetIndex::new(2 * n, members)
}

/// Extracts Cartan coordinates from the Plücker vector of a decorated
/// point: rescales so `Δ_{I₀} = 1` at `I₀ = {1, n+1, …, 2n}`, seeds
/// `Σ_∅ = Σ_{1} = 1`, and fills in `Σ_K = Δ_{I(K,l)}/Σ_{K∖{l}}`, checking
/// agreement over every `l ∈ K` and the bihomogeneous relations.
pub fn cartan_from_plucker(p: &PluckerVector) -> Result<CartanVector, Error> {
    if p.n % 2 != 0 || p.k != p.n / 2 + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected an (n+1) x 2n point, got k = {}, columns = {}",
            p.k, p.n
        )));
    }
    let n = p.n / 2;
    let mut i0: Vec<usize> = vec![1];
    i0.extend((n + 1)..=(2 * n));
    let i0 = SubsetIndex::new(2 * n, i0);
    let z0 = p.get(&i0).clone();
    if z0.is_zero() {
        return Err(Error::NonPositive(format!("Δ_{i0} vanishes")));
    }
    let delta = |i: &SubsetIndex| p.get(i).clone() / z0.clone();
    let mut sigma: BTreeMap<SubsetIndex, Rat> = BTreeMap::new();
    sigma.insert(SubsetIndex::empty(n), Rat::one());
    for size in 1..=n {
        for k in SubsetIndex::all_k_subsets(n, size) {
            let mut value: Option<Rat> = None;
            for &l in k.members() {
                let prev = sigma[&k.without(l)].clone();
                let cand = delta(&overlap_index(n, &k, l)) / prev;
                match &value {
                    None => value = Some(cand),
                    Some(v) if *v != cand => {
                        return Err(Error::NotOrthogonal(format!(
                            "Σ_{k} differs between overlap choices"
                        )))
                    }
                    _ => {}
                }
            }
            let v = value.expect("nonempty K");
            if v <= Rat::zero() {
                return Err(Error::NonPositive(format!("Σ_{k}")));
            }
            sigma.insert(k, v);
        }
    }
    let out = CartanVector { n, sigma };
    out.relations_check()?;
    Ok(out)
}

/// `M₊` and `M₋` read off the Cartan coordinates.
pub fn skew_pair_from_cartan(sigma: &CartanVector) -> SkewPair {
    let n = sigma.n;
    let s = |members: &[usize]| sigma.sigma[&SubsetIndex::new(n, members.to_vec())].clone();
    let s0 = s(&[]);
    let s1 = s(&[1]);
    let mut m_plus = Mat::zero(n, n);
    let mut m_minus = Mat::zero(n, n);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let v = s(&[i, j]) / s0.clone();
            m_plus[(i - 1, j - 1)] = v.clone();
            m_plus[(j - 1, i - 1)] = -v;
            let w = if i == 1 {
                s(&[j]) / s1.clone()
            } else {
                -s(&[1, i, j]) / s1.clone()
            };
            m_minus[(i - 1, j - 1)] = w.clone();
            m_minus[(j - 1, i - 1)] = -w;
        }
    }
    SkewPair { m_plus, m_minus }
}

/// Verifies `Σ_J = Σ_∅ · pf((M₊)^J_J)` for even `J` and
/// `Σ_J = (−1)^{(#J−1)/2} Σ_{1} · pf((M₋)^{JΔ{1}}_{JΔ{1}})` for odd `J`,
/// over all `J ⊆ [n]`.
pub fn pfaffian_check(sigma: &CartanVector, pair: &SkewPair) -> Result<(), Error> {
    let n = sigma.n;
    let s0 = sigma.sigma[&SubsetIndex::empty(n)].clone();
    let s1 = sigma.sigma[&SubsetIndex::new(n, vec![1])].clone();
    for j in SubsetIndex::all_subsets(n) {
        let expected = sigma.sigma[&j].clone();
        let got = if j.len() % 2 == 0 {
            s0.clone() * pfaffian(&pair.m_plus.principal(&j))?
        } else {
            let jd = j.toggled(1);
            let pf = pfaffian(&pair.m_minus.principal(&jd))?;
            let sign = if ((j.len() - 1) / 2) % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            sign * s1.clone() * pf
        };
        if got != expected {
            return Err(Error::PfaffianMismatch(format!("{j}")));
        }
    }
    Ok(())
}

/// Builds a decorated matrix whose row span realizes the Cartan
/// coordinates: `X₊ = [M₊ | Iₙ]` and `X₋` (identity in columns
/// `{1, n+2, …, 2n}`, the rotated `M₋` in columns `2..n+1`) are converted
/// to standard coordinates and stacked; the decoration is pinned so that
/// `Δ_{I₀} = Σ_{1}Σ_∅`.
pub fn matrix_from_cartan(sigma: &CartanVector) -> Result<MatrixPoint, Error> {
    let n = sigma.n;
    let pair = skew_pair_from_cartan(sigma);
    pfaffian_check(sigma, &pair)?;
    // X₊ in W⊕W∨ coordinates.
    let x_plus = Mat::construct(n, 2 * n, |r, c| {
        if c < n {
            pair.m_plus[(r, c)].clone()
        } else if c - n == r {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    // M̃₋: rotating its columns right by one recovers M₋.
    let mtilde = Mat::construct(n, n, |r, c| pair.m_minus[(r, (c + 1) % n)].clone());
    let id_cols: Vec<usize> = core::iter::once(0)
        .chain((n + 1)..(2 * n))
        .collect();
    let x_minus = Mat::construct(n, 2 * n, |r, c| {
        if c >= 1 && c <= n {
            mtilde[(r, c - 1)].clone()
        } else if id_cols[r] == c {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let to_std = |m: Mat| change_basis(&MatrixPoint { mat: m, decorated: false }).mat;
    let stacked = to_std(x_plus).vstack(&to_std(x_minus));
    let (rref, pivots) = crate::numeric::rref_solve(&stacked);
    let rank = pivots.len();
    if rank != n + 1 {
        return Err(Error::RankUnexpected { expected: n + 1, got: rank });
    }
    let mut mat = Mat::construct(n + 1, 2 * n, |r, c| rref[(r, c)].clone());
    // Pin the decoration: Δ_{I₀} = Σ_{1}Σ_∅ at I₀ = {1, n+1, …, 2n}.
    let mut i0: Vec<usize> = vec![1];
    i0.extend((n + 1)..=(2 * n));
    let i0 = SubsetIndex::new(2 * n, i0);
    let point = MatrixPoint { mat: mat.clone(), decorated: true };
    let p = plucker(&point)?;
    let cur = p.get(&i0).clone();
    if cur.is_zero() {
        return Err(Error::RankDeficient);
    }
    let target = sigma.sigma[&SubsetIndex::new(n, vec![1])].clone()
        * sigma.sigma[&SubsetIndex::empty(n)].clone();
    let factor = target / cur;
    for c in 0..2 * n {
        mat[(0, c)] = mat[(0, c)].clone() * factor.clone();
    }
    Ok(MatrixPoint { mat, decorated: true })
}

// ---------------------------------------------------------------------------
// B variables
// ---------------------------------------------------------------------------

/// `B_u := Σ_{J(u)}` for every vertex and face of a well-connected network.
pub fn psi_g(sigma: &CartanVector, g: &DiskGraph) -> Result<BVariables, Error> {
    let labels = j_labels(g)?;
    let mut vals = BTreeMap::new();
    for (site, j) in labels {
        vals.insert(site, sigma.sigma[&j].clone());
    }
    BVariables::new(vals)
}

/// Reads `Σ_J` back off the realized labels (partial; display helper).
pub fn b_to_cartan(
    b: &BVariables,
    g: &DiskGraph,
) -> Result<BTreeMap<SubsetIndex, Rat>, Error> {
    let labels = j_labels(g)?;
    let mut out = BTreeMap::new();
    for (site, j) in labels {
        let v = b.vals[&site].clone();
        if let Some(existing) = out.get(&j) {
            if *existing != v {
                return Err(Error::NotOrthogonal(format!(
                    "label {j} realized with two different values"
                )));
            }
        }
        out.insert(j, v);
    }
    Ok(out)
}

/// `c(e) = B_u B_v / (B_f B_g)` for `e = uv` with incident faces `f, g`.
pub fn q_g(b: &BVariables, g: &DiskGraph) -> Result<EdgeWeights, Error> {
    let faces = g.trace_faces()?;
    let mut wt = BTreeMap::new();
    for (&e, &(u, v)) in g.edges() {
        let (fa, fb) = faces.faces_of_edge(e);
        let (fa, fb) = (
            fa.ok_or_else(|| Error::InconsistentEmbedding(String::from("outer face")))?,
            fb.ok_or_else(|| Error::InconsistentEmbedding(String::from("outer face")))?,
        );
        let c = b.vals[&Site::Vertex(u)].clone() * b.vals[&Site::Vertex(v)].clone()
            / (b.vals[&Site::Face(fa)].clone() * b.vals[&Site::Face(fb)].clone());
        wt.insert(e, c);
    }
    EdgeWeights::new(wt)
}

/// `A_g := B_v B_f` for the two white vertices (one from a vertex, one from
/// a face of the network) on each face `g` of the Temperley graph.
pub fn i_g_plus(b: &BVariables, gamma: &BipartiteDiskGraph) -> Result<AVars, Error> {
    let faces = gamma.graph.trace_faces()?;
    let mut vals = BTreeMap::new();
    for (gi, face) in faces.faces.iter().enumerate() {
        let mut from_vertex: Option<Rat> = None;
        let mut from_face: Option<Rat> = None;
        for d in &face.darts {
            for &v in &[d.tail, d.head] {
                match gamma.tags.get(&v) {
                    Some(Provenance::GVertex(u)) => {
                        from_vertex = Some(b.vals[&Site::Vertex(*u)].clone())
                    }
                    Some(Provenance::GFace(f)) => {
                        from_face = Some(b.vals[&Site::Face(*f)].clone())
                    }
                    _ => {}
                }
            }
        }
        match (from_vertex, from_face) {
            (Some(x), Some(y)) => {
                vals.insert(gi, x * y);
            }
            _ => {
                return Err(Error::InconsistentEmbedding(format!(
                    "Temperley face {gi} misses a vertex- or face-white"
                )))
            }
        }
    }
    Ok(FaceVars { vals })
}

/// Transports B variables across a Y-Δ move by the cube recurrence: the new
/// inner face (or new center vertex) takes
/// `(B_{v₁}B_{f₁} + B_{v₂}B_{f₂} + B_{v₃}B_{f₃}) / B_{old site}`, where
/// `f_i` is the face opposite the outer vertex `v_i`.
pub fn cube_recurrence_move(b: &BVariables, mv: &YDeltaMove) -> Result<BVariables, Error> {
    let mut vals: BTreeMap<Site, Rat> = BTreeMap::new();
    // Vertices other than the center are untouched.
    for (site, v) in &b.vals {
        match site {
            Site::Vertex(u) if *u != mv.center => {
                vals.insert(Site::Vertex(*u), v.clone());
            }
            _ => {}
        }
    }
    // Faces are carried across by the recorded correspondence.
    for (site, v) in &b.vals {
        if let Site::Face(f) = site {
            if let Some(&nf) = mv.face_map.get(f) {
                vals.insert(Site::Face(nf), v.clone());
            }
        }
    }
    let mut numer = Rat::zero();
    for i in 0..3 {
        numer += b.vals[&Site::Vertex(mv.outer_vertices[i])].clone()
            * b.vals[&Site::Face(mv.outer_faces_old[i])].clone();
    }
    match mv.kind {
        MoveKind::YToDelta => {
            // New inner face; the old center vertex disappears.
            let denom = b.vals[&Site::Vertex(mv.center)].clone();
            vals.insert(Site::Face(mv.inner_face), numer / denom);
        }
        MoveKind::DeltaToY => {
            // New center vertex; the old inner face disappears.
            let denom = b.vals[&Site::Face(mv.inner_face)].clone();
            vals.insert(Site::Vertex(mv.center), numer / denom);
        }
    }
    BVariables::new(vals)
}

// ---------------------------------------------------------------------------
// Torus action
// ---------------------------------------------------------------------------

fn torus_factor(s: &Rat, t: &[Rat], j: &SubsetIndex) -> Rat {
    let mut f = s.clone();
    for i in 1..=t.len() {
        if j.contains(i) {
            f *= t[i - 1].clone();
        } else {
            f /= t[i - 1].clone();
        }
    }
    f
}

/// `Σ_J ↦ s · (∏_{i∈J} t_i / ∏_{i∉J} t_i) · Σ_J`.
pub fn torus_action_cartan(
    s: &Rat,
    t: &[Rat],
    sigma: &CartanVector,
) -> Result<CartanVector, Error> {
    if t.len() != sigma.n {
        return Err(Error::DimensionMismatch(String::from("torus rank ≠ n")));
    }
    if s <= &Rat::zero() || t.iter().any(|x| x <= &Rat::zero()) {
        return Err(Error::NonPositive(String::from("torus parameter")));
    }
    let sigma2 = sigma
        .sigma
        .iter()
        .map(|(j, v)| (j.clone(), torus_factor(s, t, j) * v.clone()))
        .collect();
    CartanVector::new(sigma.n, sigma2)
}

/// The same rescaling on B variables, with `J` read from the strand labels.
pub fn torus_action_b(
    s: &Rat,
    t: &[Rat],
    b: &BVariables,
    g: &DiskGraph,
) -> Result<BVariables, Error> {
    if s <= &Rat::zero() || t.iter().any(|x| x <= &Rat::zero()) {
        return Err(Error::NonPositive(String::from("torus parameter")));
    }
    let labels = j_labels(g)?;
    let mut vals = BTreeMap::new();
    for (site, v) in &b.vals {
        let j = labels.get(site).ok_or_else(|| {
            Error::InvalidSite(format!("{site:?} has no strand label"))
        })?;
        vals.insert(site.clone(), torus_factor(s, t, j) * v.clone());
    }
    BVariables::new(vals)
}

// ---------------------------------------------------------------------------
// Electrical twists
// ---------------------------------------------------------------------------

/// `Σ_{J(d_j)}` for the boundary sites `d_1, …, d_{2n}` of the Temperley
/// graph: odd `d_{2i−1}` carries `J(b_i)`, even `d_{2i}` the label of the
/// boundary face between `b_i` and `b_{i+1}`.
fn boundary_sigmas(sigma: &CartanVector, g: &DiskGraph) -> Result<Vec<Rat>, Error> {
    let n = g.n();
    let labels = j_labels(g)?;
    let faces = g.trace_faces()?;
    let mut out = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let jv = &labels[&Site::Vertex(g.boundary()[i - 1])];
        out.push(sigma.sigma[jv].clone());
        let f = faces.face_of_arc(i - 1).ok_or_else(|| {
            Error::InconsistentEmbedding(format!("arc {} has no interior face", i - 1))
        })?;
        let jf = &labels[&Site::Face(f)];
        out.push(sigma.sigma[jf].clone());
    }
    Ok(out)
}

/// The electrical right twist: `t · τ→(X)` with
/// `t_i = Σ_{J(d_{i−1})}/Σ_{J(d_i)}` (cyclic, `d_0 = d_{2n}`).
pub fn electrical_right_twist(
    sigma: &CartanVector,
    g: &DiskGraph,
) -> Result<MatrixPoint, Error> {
    if g.n() != sigma.n {
        return Err(Error::DimensionMismatch(String::from("graph size ≠ n")));
    }
    let x = matrix_from_cartan(sigma)?;
    let bs = boundary_sigmas(sigma, g)?;
    let m = 2 * sigma.n;
    let t: Vec<Rat> = (0..m)
        .map(|i| bs[(i + m - 1) % m].clone() / bs[i].clone())
        .collect();
    let y = column_scale(&ColumnScaling::new(t)?, &right_twist(&x)?)?;
    if !omega_check(&y) {
        return Err(Error::NotIsotropic);
    }
    if !plucker(&y)?.is_positive() {
        return Err(Error::NonPositive(String::from(
            "a Plücker coordinate of the twisted point",
        )));
    }
    Ok(y)
}

/// The electrical left twist: `t · τ←(X)` with
/// `t_i = Δ_{S(f_{n+i}^-)}/Δ_{S(f_{n+i−1}^-)}` and `t_{n+i} = 1`, followed
/// by Cartan extraction with the `Σ_∅ = Σ_{1} = 1` normalization.
pub fn electrical_left_twist(
    x: &MatrixPoint,
    g: &DiskGraph,
) -> Result<CartanVector, Error> {
    let n = g.n();
    if x.n() != 2 * n || x.k() != n + 1 {
        return Err(Error::DimensionMismatch(String::from(
            "point shape does not match the graph",
        )));
    }
    if !omega_check(x) {
        return Err(Error::NotIsotropic);
    }
    let ones = EdgeWeights::new(
        g.edges().keys().map(|&e| (e, Rat::one())).collect(),
    )?;
    let (gamma, _) = temperley_plus(g, &ones)?;
    let (_, labels) = strands_and_labels(&gamma)?;
    let p = plucker(x)?;
    let m = 2 * n;
    let d = |j: usize| -> Rat {
        // f_j^- (1-based cyclic) sits at labels.boundary[(j−1) mod m]
        let f = labels.boundary[(j - 1) % m];
        p.get(&labels.labels[&f]).clone()
    };
    let mut t = Vec::with_capacity(m);
    for i in 1..=n {
        t.push(d(n + i) / d(n + i - 1));
    }
    t.extend(core::iter::repeat(Rat::one()).take(n));
    let y = column_scale(&ColumnScaling::new(t)?, &left_twist(x)?)?;
    cartan_from_plucker(&plucker(&y)?)
}
