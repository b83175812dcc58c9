//! Laplacians, harmonic extension, response matrices, Y-Δ conductance
//! transforms, the forward map into the Lagrangian Grassmannian, and the
//! end-to-end inversion pipeline.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::dimer::{boundary_measurement, point_from_plucker, temperley_plus, EdgeWeights};
use crate::error::Error;
use crate::graph::{check_well_connected, DiskGraph, MoveKind, VertexId, YDeltaMove};
use crate::grassmann::{omega_check, plucker, MatrixPoint, PluckerVector};
use crate::numeric::{rint, schur_complement, Mat, Rat, SubsetIndex};
use crate::orthogonal::{electrical_left_twist, psi_g, q_g};

/// Positive conductances on the edges of a network.
pub type ConductanceAssignment = EdgeWeights;

/// A disk graph together with a conductance on each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub graph: DiskGraph,
    pub cond: ConductanceAssignment,
}

impl Network {
    /// Validates that the conductance keys are exactly the edge set.
    pub fn new(graph: DiskGraph, cond: ConductanceAssignment) -> Result<Self, Error> {
        let edge_keys: Vec<_> = graph.edges().keys().copied().collect();
        let cond_keys: Vec<_> = cond.wt.keys().copied().collect();
        if edge_keys != cond_keys {
            return Err(Error::BadWeights(String::from(
                "conductance keys differ from the edge set",
            )));
        }
        Ok(Network { graph, cond })
    }

    /// Vertices ordered boundary-first, then interior by id.
    pub fn vertex_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = self.graph.boundary().to_vec();
        order.extend(self.graph.interior_vertices());
        order
    }
}

/// The boundary response of a network: symmetric with zero row sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    pub mat: Mat,
}

impl ResponseMatrix {
    /// Validates symmetry, zero row sums, and positive semidefiniteness of
    /// the negated matrix via the leading principal minors taken inside the
    /// complement of the first index.
    pub fn new(mat: Mat) -> Result<Self, Error> {
        if !mat.is_square() || !mat.is_symmetric() {
            return Err(Error::DimensionMismatch(String::from(
                "response matrix must be square and symmetric",
            )));
        }
        let n = mat.rows();
        for i in 0..n {
            let mut s = Rat::zero();
            for j in 0..n {
                s += mat[(i, j)].clone();
            }
            if !s.is_zero() {
                return Err(Error::BadWeights(format!("row {i} does not sum to 0")));
            }
        }
        let neg = mat.scale(&-rint(1));
        for k in 1..n {
            let idx: Vec<usize> = (1..=k).collect();
            let d = neg.submatrix(&idx, &idx).det();
            if d < Rat::zero() {
                return Err(Error::NonPositive(format!(
                    "leading principal minor {k} of the negated response"
                )));
            }
        }
        Ok(ResponseMatrix { mat })
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    /// The off-diagonal entry `L_{ij}` (1-based), positive for
    /// well-connected networks.
    pub fn off(&self, i: usize, j: usize) -> &Rat {
        assert_ne!(i, j);
        &self.mat[(i - 1, j - 1)]
    }
}

/// `(Δf)(v) = Σ_{e=uv} c(e)(f(v) − f(u))` as a matrix over all vertices,
/// boundary first, interior by id.
pub fn laplacian(network: &Network) -> Mat {
    let order = network.vertex_order();
    let pos: BTreeMap<VertexId, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut m = Mat::zero(order.len(), order.len());
    for (&e, &(u, v)) in network.graph.edges() {
        let c = network.cond.get(e).clone();
        let (iu, iv) = (pos[&u], pos[&v]);
        m[(iu, iu)] = m[(iu, iu)].clone() + c.clone();
        m[(iv, iv)] = m[(iv, iv)].clone() + c.clone();
        m[(iu, iv)] = m[(iu, iv)].clone() - c.clone();
        m[(iv, iu)] = m[(iv, iu)].clone() - c;
    }
    m
}

/// The unique extension of boundary data (ordered as `boundary()`) that is
/// harmonic at every interior vertex; returns the interior values keyed by
/// vertex.
pub fn harmonic_extension(
    network: &Network,
    boundary_values: &[Rat],
) -> Result<BTreeMap<VertexId, Rat>, Error> {
    let n = network.graph.n();
    if boundary_values.len() != n {
        return Err(Error::DimensionMismatch(String::from(
            "boundary data length differs from n",
        )));
    }
    let interior = network.graph.interior_vertices();
    let lap = laplacian(network);
    if interior.is_empty() {
        return Ok(BTreeMap::new());
    }
    let k = interior.len();
    // Interior block and interior-boundary block of the Laplacian.
    let rows: Vec<usize> = (n..n + k).collect();
    let cols_b: Vec<usize> = (0..n).collect();
    let l_ii = lap.submatrix(&rows, &rows);
    let l_ib = lap.submatrix(&rows, &cols_b);
    let inv = l_ii.inverse().map_err(|_| Error::SingularInterior)?;
    let rhs = Mat::construct(k, 1, |r, _| {
        let mut s = Rat::zero();
        for j in 0..n {
            s -= l_ib[(r, j)].clone() * boundary_values[j].clone();
        }
        s
    });
    let sol = inv.mul(&rhs);
    Ok(interior
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, sol[(i, 0)].clone()))
        .collect())
}

/// The negated Schur complement of the Laplacian onto the boundary block:
/// `L(u) = −(Δf)|_boundary` for the harmonic extension `f` of `u`.
pub fn response_matrix(network: &Network) -> Result<ResponseMatrix, Error> {
    let lap = laplacian(network);
    let total = lap.rows();
    let n = network.graph.n();
    let keep = SubsetIndex::new(total, (1..=n).collect::<Vec<usize>>());
    let schur = schur_complement(&lap, &keep).map_err(|_| Error::SingularInterior)?;
    ResponseMatrix::new(schur.scale(&-rint(1)))
}

/// Transports conductances across a Y-Δ move. Edge ids are preserved, with
/// each Y leg paired with the opposite triangle edge. Writing `c₁, c₂, c₃`
/// for the three moved conductances:
/// star → triangle sends `c(eᵢ) ↦ cⱼ c_k / (c₁ + c₂ + c₃)`, and
/// triangle → star sends `c(eᵢ) ↦ (c₁c₂ + c₁c₃ + c₂c₃) / cᵢ`.
pub fn y_delta_conductances(
    cond: &ConductanceAssignment,
    mv: &YDeltaMove,
) -> Result<ConductanceAssignment, Error> {
    let c: Vec<Rat> = mv.edge_ids.iter().map(|&e| cond.get(e).clone()).collect();
    let mut wt = cond.wt.clone();
    match mv.kind {
        MoveKind::YToDelta => {
            let s = c[0].clone() + c[1].clone() + c[2].clone();
            for i in 0..3 {
                wt.insert(mv.edge_ids[i], c[(i + 1) % 3].clone() * c[(i + 2) % 3].clone() / s.clone());
            }
        }
        MoveKind::DeltaToY => {
            let p = c[0].clone() * c[1].clone()
                + c[0].clone() * c[2].clone()
                + c[1].clone() * c[2].clone();
            for i in 0..3 {
                wt.insert(mv.edge_ids[i], p.clone() / c[i].clone());
            }
        }
    }
    ConductanceAssignment::new(wt)
}

/// The forward map: the boundary measurement of the weighted Temperley
/// graph, returned as a decorated matrix. The result is Ω-isotropic with
/// all Plücker coordinates positive.
pub fn forward_point(network: &Network) -> Result<MatrixPoint, Error> {
    let g = &network.graph;
    if g.n() >= 2 {
        let verdict = check_well_connected(g)?;
        if !verdict.well_connected {
            return Err(Error::NotWellConnected(
                verdict.violations.first().cloned().unwrap_or_default(),
            ));
        }
    }
    let (gamma, wt) = temperley_plus(g, &network.cond)?;
    let z = boundary_measurement(&gamma, &wt)?;
    let x = point_from_plucker(&z)?;
    if !omega_check(&x) {
        return Err(Error::NotIsotropic);
    }
    if !plucker(&x)?.is_positive() {
        return Err(Error::NonPositive(String::from(
            "a Plücker coordinate of the forward point",
        )));
    }
    Ok(x)
}

/// An explicit decorated matrix realizing a response matrix, available for
/// `n ∈ {1, 2, 3}`; larger boundaries must supply a matrix directly.
pub fn lagrangian_from_response(l: &ResponseMatrix) -> Result<MatrixPoint, Error> {
    let n = l.n();
    match n {
        1 => point_from_plucker(&PluckerVector {
            k: 2,
            n: 2,
            coords: BTreeMap::from([(SubsetIndex::full(2), rint(1))]),
        }),
        2 => {
            let c = l.off(1, 2).clone();
            if c <= Rat::zero() {
                return Err(Error::NonPositive(String::from("L_{12}")));
            }
            let idx = |m: &[usize]| SubsetIndex::new(4, m.to_vec());
            point_from_plucker(&PluckerVector {
                k: 3,
                n: 4,
                coords: BTreeMap::from([
                    (idx(&[1, 2, 3]), rint(1)),
                    (idx(&[1, 2, 4]), c.clone()),
                    (idx(&[1, 3, 4]), rint(1)),
                    (idx(&[2, 3, 4]), c),
                ]),
            })
        }
        3 => {
            let (l12, l13, l23) = (l.off(1, 2).clone(), l.off(1, 3).clone(), l.off(2, 3).clone());
            for (v, name) in [(&l12, "L_{12}"), (&l13, "L_{13}"), (&l23, "L_{23}")] {
                if *v <= Rat::zero() {
                    return Err(Error::NonPositive(String::from(name)));
                }
            }
            let z = Rat::zero();
            let o = rint(1);
            let mat = Mat::from_rows(vec![
                vec![z.clone(), o.clone(), z.clone(), -o.clone(), z.clone(), o.clone()],
                vec![
                    o.clone(),
                    z.clone(),
                    z.clone(),
                    l12.clone(),
                    z.clone(),
                    -(l12.clone() + l13.clone()),
                ],
                vec![
                    z.clone(),
                    z.clone(),
                    -o.clone(),
                    -(l12.clone() + l23.clone()),
                    z.clone(),
                    l12.clone(),
                ],
                vec![z.clone(), z.clone(), z, l23, o.clone(), l13],
            ]);
            MatrixPoint::new(mat, true)
        }
        _ => Err(Error::UnsupportedN(n)),
    }
}

/// Recovers the conductances of `g` from a decorated Grassmannian point:
/// the electrical left twist, then reading off vertex/face values and
/// taking the edge cross-ratios.
pub fn invert_point(x: &MatrixPoint, g: &DiskGraph) -> Result<ConductanceAssignment, Error> {
    let sigma = electrical_left_twist(x, g)?;
    q_g(&psi_g(&sigma, g)?, g)
}

/// Recovers the conductances of `g` from a response matrix (boundary sizes
/// 1–3; larger boundaries go through [`invert_point`]).
pub fn invert_response(l: &ResponseMatrix, g: &DiskGraph) -> Result<ConductanceAssignment, Error> {
    if l.n() != g.n() {
        return Err(Error::DimensionMismatch(String::from(
            "response size differs from the boundary size",
        )));
    }
    invert_point(&lagrangian_from_response(l)?, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, y_delta_graph, MoveSite};
    use crate::numeric::rat;

    fn star(a: Rat, b: Rat, c: Rat) -> Network {
        let g = builtin_graph(3).unwrap();
        let cond = ConductanceAssignment::new(BTreeMap::from([(1, a), (2, b), (3, c)])).unwrap();
        Network::new(g, cond).unwrap()
    }

    fn single_edge(c: Rat) -> Network {
        let g = builtin_graph(2).unwrap();
        let cond = ConductanceAssignment::new(BTreeMap::from([(1, c)])).unwrap();
        Network::new(g, cond).unwrap()
    }

    #[test]
    fn star_laplacian_matches_display() {
        let n = star(rat(2, 1), rat(3, 1), rat(5, 1));
        let lap = laplacian(&n);
        let expect = Mat::from_i64(&[
            &[2, 0, 0, -2],
            &[0, 3, 0, -3],
            &[0, 0, 5, -5],
            &[-2, -3, -5, 10],
        ]);
        assert_eq!(lap, expect);
    }

    #[test]
    fn single_edge_laplacian() {
        let n = single_edge(rat(7, 3));
        let lap = laplacian(&n);
        assert_eq!(lap[(0, 0)], rat(7, 3));
        assert_eq!(lap[(0, 1)], rat(-7, 3));
        assert_eq!(lap[(1, 0)], rat(-7, 3));
        assert_eq!(lap[(1, 1)], rat(7, 3));
    }

    #[test]
    fn harmonic_extension_constants_and_star() {
        let n = star(rat(1, 1), rat(1, 1), rat(1, 1));
        let h = harmonic_extension(&n, &[rat(4, 1), rat(4, 1), rat(4, 1)]).unwrap();
        assert_eq!(h[&4], rat(4, 1));
        let h = harmonic_extension(&n, &[rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(h[&4], rat(1, 3));
    }

    #[test]
    fn response_applies_negated_schur_to_harmonic_data() {
        let n = star(rat(2, 1), rat(3, 1), rat(5, 1));
        let l = response_matrix(&n).unwrap();
        // L·u equals −Δf on the boundary, for the harmonic extension f of u
        let u = [rat(1, 1), rat(4, 1), rat(9, 1)];
        let h = harmonic_extension(&n, &u).unwrap();
        let full: Vec<Rat> = u.iter().cloned().chain([h[&4].clone()]).collect();
        let lap = laplacian(&n);
        for i in 0..3 {
            let mut lf = Rat::zero();
            for j in 0..4 {
                lf += lap[(i, j)].clone() * full[j].clone();
            }
            let mut lu = Rat::zero();
            for j in 0..3 {
                lu += l.mat[(i, j)].clone() * u[j].clone();
            }
            assert_eq!(lu, -lf);
        }
    }

    #[test]
    fn star_response_matches_display() {
        let (a, b, c) = (rat(2, 1), rat(3, 1), rat(5, 1));
        let n = star(a.clone(), b.clone(), c.clone());
        let l = response_matrix(&n).unwrap();
        let s = a.clone() + b.clone() + c.clone();
        assert_eq!(*l.off(1, 2), a.clone() * b.clone() / s.clone());
        assert_eq!(*l.off(1, 3), a.clone() * c.clone() / s.clone());
        assert_eq!(*l.off(2, 3), b.clone() * c.clone() / s.clone());
        assert_eq!(l.mat[(0, 0)], -(a.clone() * b.clone() + a.clone() * c.clone()) / s);
    }

    #[test]
    fn single_edge_response() {
        let n = single_edge(rat(7, 3));
        let l = response_matrix(&n).unwrap();
        assert_eq!(l.mat, Mat::from_rows(vec![
            vec![rat(-7, 3), rat(7, 3)],
            vec![rat(7, 3), rat(-7, 3)],
        ]));
    }

    #[test]
    fn y_delta_all_ones_and_round_trip() {
        let g = builtin_graph(3).unwrap();
        let mv = y_delta_graph(&g, MoveSite::Vertex(4)).unwrap();
        let ones =
            ConductanceAssignment::new(BTreeMap::from([(1, rat(1, 1)), (2, rat(1, 1)), (3, rat(1, 1))]))
                .unwrap();
        let tri = y_delta_conductances(&ones, &mv).unwrap();
        for e in 1..=3 {
            assert_eq!(*tri.get(e), rat(1, 3));
        }
        // Δ → Y back again
        let back_mv = y_delta_graph(&mv.graph, MoveSite::Face(mv.inner_face)).unwrap();
        let c = ConductanceAssignment::new(BTreeMap::from([
            (1, rat(2, 1)),
            (2, rat(3, 1)),
            (3, rat(5, 1)),
        ]))
        .unwrap();
        let there = y_delta_conductances(&c, &mv).unwrap();
        let back = y_delta_conductances(&there, &back_mv).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn response_is_invariant_under_y_delta() {
        let g = builtin_graph(3).unwrap();
        let mv = y_delta_graph(&g, MoveSite::Vertex(4)).unwrap();
        let c = ConductanceAssignment::new(BTreeMap::from([
            (1, rat(2, 1)),
            (2, rat(3, 1)),
            (3, rat(5, 1)),
        ]))
        .unwrap();
        let n1 = Network::new(g, c.clone()).unwrap();
        let moved = y_delta_conductances(&c, &mv).unwrap();
        let n2 = Network::new(mv.graph.clone(), moved).unwrap();
        assert_eq!(response_matrix(&n1).unwrap(), response_matrix(&n2).unwrap());
    }

    #[test]
    fn forward_single_edge_plucker() {
        let n = single_edge(rat(7, 3));
        let x = forward_point(&n).unwrap();
        let p = plucker(&x).unwrap();
        let idx = |m: &[usize]| SubsetIndex::new(4, m.to_vec());
        assert_eq!(*p.get(&idx(&[1, 2, 3])), rat(1, 1));
        assert_eq!(*p.get(&idx(&[1, 2, 4])), rat(7, 3));
        assert_eq!(*p.get(&idx(&[1, 3, 4])), rat(1, 1));
        assert_eq!(*p.get(&idx(&[2, 3, 4])), rat(7, 3));
    }

    #[test]
    fn forward_star_matches_response_point() {
        let n = star(rat(2, 1), rat(3, 1), rat(5, 1));
        let x = forward_point(&n).unwrap();
        let l = response_matrix(&n).unwrap();
        let y = lagrangian_from_response(&l).unwrap();
        assert!(plucker(&x)
            .unwrap()
            .projectively_equal(&plucker(&y).unwrap()));
        assert!(omega_check(&y));
    }

    #[test]
    fn invert_star_recovers_conductances() {
        let n = star(rat(2, 1), rat(3, 1), rat(5, 1));
        let l = response_matrix(&n).unwrap();
        let rec = invert_response(&l, &n.graph).unwrap();
        assert_eq!(rec, n.cond);
        // recovery through the explicit formulas: c(ub₁) = Λ/L₂₃ etc.
        let lam = l.off(1, 2).clone() * l.off(1, 3).clone()
            + l.off(1, 2).clone() * l.off(2, 3).clone()
            + l.off(1, 3).clone() * l.off(2, 3).clone();
        assert_eq!(*rec.get(1), lam.clone() / l.off(2, 3).clone());
        assert_eq!(*rec.get(2), lam.clone() / l.off(1, 3).clone());
        assert_eq!(*rec.get(3), lam / l.off(1, 2).clone());
    }

    #[test]
    fn invert_single_edge_recovers_conductance() {
        let n = single_edge(rat(7, 3));
        let l = response_matrix(&n).unwrap();
        let rec = invert_response(&l, &n.graph).unwrap();
        assert_eq!(*rec.get(1), rat(7, 3));
    }

    #[test]
    fn forward_then_invert_point_round_trips() {
        for (a, b, c) in [(2i64, 3, 5), (7, 11, 13), (1, 1, 1)] {
            let n = star(rat(a, 1), rat(b, 1), rat(c, 1));
            let x = forward_point(&n).unwrap();
            let rec = invert_point(&x, &n.graph).unwrap();
            assert_eq!(rec, n.cond);
        }
        // fractional values too
        let n = star(rat(2, 7), rat(9, 4), rat(5, 3));
        let rec = invert_point(&forward_point(&n).unwrap(), &n.graph).unwrap();
        assert_eq!(rec, n.cond);
    }

    #[test]
    fn recovery_commutes_with_y_delta() {
        let g = builtin_graph(3).unwrap();
        let mv = y_delta_graph(&g, MoveSite::Vertex(4)).unwrap();
        let c = ConductanceAssignment::new(BTreeMap::from([
            (1, rat(2, 7)),
            (2, rat(3, 1)),
            (3, rat(5, 2)),
        ]))
        .unwrap();
        let n1 = Network::new(g.clone(), c.clone()).unwrap();
        let l = response_matrix(&n1).unwrap();
        let rec_moved = invert_response(&l, &mv.graph).unwrap();
        assert_eq!(rec_moved, y_delta_conductances(&c, &mv).unwrap());
    }

    #[test]
    fn round_trip_on_larger_builtin_graphs() {
        for n in [4usize, 5] {
            let g = builtin_graph(n).unwrap();
            let cond = ConductanceAssignment::new(
                g.edges()
                    .keys()
                    .map(|&e| (e, rat(e as i64 + 1, 2)))
                    .collect(),
            )
            .unwrap();
            let net = Network::new(g.clone(), cond.clone()).unwrap();
            let x = forward_point(&net).unwrap();
            let rec = invert_point(&x, &g).unwrap();
            assert_eq!(rec, cond, "boundary size {n}");
        }
    }

    #[test]
    fn unsupported_boundary_size_is_reported() {
        let mat = Mat::zero(4, 4);
        let l = ResponseMatrix::new(mat).unwrap();
        assert!(matches!(
            lagrangian_from_response(&l),
            Err(Error::UnsupportedN(4))
        ));
    }
}
