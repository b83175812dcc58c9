//! Acceptance gate: ten end-to-end criteria, each checked with exact
//! rational equality (zero tolerance). Every test prints a single
//! `criterion N: pass` line on success; a failure panics with the detail.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netinverse::sampler::RatSampler;
use netinverse_core::dimer::{
    boundary_measurement, point_from_plucker, site_of_white, strand_weight, strands_and_labels,
    temperley_plus, BipartiteDiskGraph, Color, EdgeWeights,
};
use netinverse_core::electrical::{
    forward_point, invert_point, invert_response, response_matrix, y_delta_conductances,
    ConductanceAssignment, Network,
};
use netinverse_core::graph::{
    builtin_graph, check_well_connected, j_labels, y_delta_graph, DiskGraph, MoveSite,
};
use netinverse_core::grassmann::{left_twist, omega_check, plucker, right_twist, MatrixPoint};
use netinverse_core::numeric::{pfaffian, rat, rint, Mat, Rat, SubsetIndex};
use netinverse_core::orthogonal::{
    cube_recurrence_move, electrical_left_twist, pfaffian_check, q_g, skew_pair_from_cartan,
    BVariables,
};
use num_traits::{One, Zero};

fn star_network(a: Rat, b: Rat, c: Rat) -> Network {
    let g = builtin_graph(3).unwrap();
    let cond =
        ConductanceAssignment::new(BTreeMap::from([(1, a), (2, b), (3, c)])).unwrap();
    Network::new(g, cond).unwrap()
}

fn idx(n: usize, members: &[usize]) -> SubsetIndex {
    SubsetIndex::new(n, members.to_vec())
}

/// Criterion 1: the full n = 3 inversion, 50 seeded random stars plus the
/// closed-form recoveries, in under a second.
#[test]
fn criterion_01_star_inversion() {
    let clock = Instant::now();
    let mut sampler = RatSampler::new(601);
    let g = builtin_graph(3).unwrap();
    for trial in 0..50 {
        let (a, b, c) = (sampler.rational(), sampler.rational(), sampler.rational());
        let net = star_network(a.clone(), b.clone(), c.clone());
        let l = response_matrix(&net).unwrap();
        let rec = invert_response(&l, &g).unwrap();
        assert_eq!(rec, net.cond, "trial {trial}");
        if trial < 10 {
            // closed-form recoveries through the off-diagonal entries
            let (l12, l13, l23) =
                (l.off(1, 2).clone(), l.off(1, 3).clone(), l.off(2, 3).clone());
            let lam = l12.clone() * l13.clone()
                + l12.clone() * l23.clone()
                + l13.clone() * l23.clone();
            assert_eq!(*rec.get(1), lam.clone() / l23, "trial {trial} edge 1");
            assert_eq!(*rec.get(2), lam.clone() / l13, "trial {trial} edge 2");
            assert_eq!(*rec.get(3), lam / l12, "trial {trial} edge 3");
        }
    }
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!("criterion 1: pass (50 star inversions + 10 closed forms in {elapsed:?})");
}

/// Criterion 2: the n = 2 example with c = 7/3.
#[test]
fn criterion_02_single_edge_example() {
    let g = builtin_graph(2).unwrap();
    let cond = ConductanceAssignment::new(BTreeMap::from([(1, rat(7, 3))])).unwrap();
    let net = Network::new(g.clone(), cond).unwrap();
    let p = plucker(&forward_point(&net).unwrap()).unwrap();
    assert_eq!(*p.get(&idx(4, &[1, 2, 3])), rat(1, 1));
    assert_eq!(*p.get(&idx(4, &[1, 2, 4])), rat(7, 3));
    assert_eq!(*p.get(&idx(4, &[1, 3, 4])), rat(1, 1));
    assert_eq!(*p.get(&idx(4, &[2, 3, 4])), rat(7, 3));
    let l = response_matrix(&net).unwrap();
    let rec = invert_response(&l, &g).unwrap();
    assert_eq!(*rec.get(1), rat(7, 3));
    println!("criterion 2: pass (measured (1, 7/3, 1, 7/3); inversion returns 7/3)");
}

/// The bipartite 4-boundary fixture: an internal quadrilateral with side
/// weights (a, b, c, d) = (2, 3, 5, 7) and unit legs.
fn four_vertex_fixture() -> (BipartiteDiskGraph, EdgeWeights) {
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
        (5, rat(2, 1)),
        (6, rat(3, 1)),
        (7, rat(5, 1)),
        (8, rat(7, 1)),
    ]))
    .unwrap();
    (gamma, wt)
}

/// Criterion 3: the boundary-measurement fixture and its left twist.
#[test]
fn criterion_03_measurement_fixture_and_left_twist() {
    let (gamma, wt) = four_vertex_fixture();
    let z = boundary_measurement(&gamma, &wt).unwrap();
    let expected = [
        (vec![1, 2], rat(2, 1)),
        (vec![1, 3], rat(31, 1)),
        (vec![1, 4], rat(3, 1)),
        (vec![2, 3], rat(7, 1)),
        (vec![2, 4], rat(1, 1)),
        (vec![3, 4], rat(5, 1)),
    ];
    for (members, value) in expected {
        assert_eq!(*z.get(&idx(4, &members)), value, "Z at {members:?}");
    }
    // left twist vs the explicit 2×4 matrix at (a, b, c, d) = (2, 3, 5, 7):
    // rows (1/b, 1, 0, −d/c) and (0, b/a, 1/d, 1)
    let x = point_from_plucker(&z).unwrap();
    let lt = left_twist(&x).unwrap();
    let printed = MatrixPoint::new(
        Mat::from_rows(vec![
            vec![rat(1, 3), rat(1, 1), rat(0, 1), rat(-7, 5)],
            vec![rat(0, 1), rat(3, 2), rat(1, 7), rat(1, 1)],
        ]),
        false,
    )
    .unwrap();
    assert!(lt.same_subspace(&printed), "left twist span differs");
    println!("criterion 3: pass (Z = (2, 31, 3, 7, 1, 5); left twist matches)");
}

/// Criterion 4: seeded round trips on the built-in n = 4 and n = 5 graphs.
#[test]
fn criterion_04_round_trips_larger_n() {
    let clock = Instant::now();
    for n in [4usize, 5] {
        let g = builtin_graph(n).unwrap();
        assert!(check_well_connected(&g).unwrap().well_connected);
        let mut sampler = RatSampler::new(600 + n as u64);
        for trial in 0..25 {
            let cond = sampler.conductances(&g);
            let net = Network::new(g.clone(), cond.clone()).unwrap();
            let x = forward_point(&net).unwrap();
            let rec = invert_point(&x, &g).unwrap();
            assert_eq!(rec, cond, "n = {n}, trial {trial}");
        }
    }
    let elapsed = clock.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    println!("criterion 4: pass (25 round trips each at n = 4, 5 in {elapsed:?})");
}

/// Criterion 5: isotropy and full positivity of every measured point from
/// the runs of criteria 1–4.
#[test]
fn criterion_05_isotropy_positivity() {
    let mut count = 0usize;
    let mut check = |net: &Network| {
        let x = forward_point(net).unwrap();
        assert!(omega_check(&x), "pairing fails on {:?}", net.cond);
        assert!(plucker(&x).unwrap().is_positive(), "positivity fails");
        count += 1;
    };
    let mut sampler = RatSampler::new(601);
    for _ in 0..50 {
        let (a, b, c) = (sampler.rational(), sampler.rational(), sampler.rational());
        check(&star_network(a, b, c));
    }
    let g2 = builtin_graph(2).unwrap();
    check(
        &Network::new(
            g2,
            ConductanceAssignment::new(BTreeMap::from([(1, rat(7, 3))])).unwrap(),
        )
        .unwrap(),
    );
    for n in [4usize, 5] {
        let g = builtin_graph(n).unwrap();
        let mut sampler = RatSampler::new(600 + n as u64);
        for _ in 0..25 {
            let cond = sampler.conductances(&g);
            check(&Network::new(g.clone(), cond).unwrap());
        }
    }
    println!("criterion 5: pass ({count} points isotropic and positive)");
}

/// Criterion 6: every Cartan vector from the left twist satisfies all
/// bihomogeneous relations and the full Pfaffian identities, n ≤ 5.
#[test]
fn criterion_06_cartan_relations() {
    let mut count = 0usize;
    for n in 1..=5 {
        let g = builtin_graph(n).unwrap();
        let mut sampler = RatSampler::new(660 + n as u64);
        let trials = if n <= 3 { 5 } else { 3 };
        for _ in 0..trials {
            let cond = sampler.conductances(&g);
            let net = Network::new(g.clone(), cond).unwrap();
            let x = forward_point(&net).unwrap();
            let sigma = electrical_left_twist(&x, &g).unwrap();
            sigma.relations_check().unwrap();
            pfaffian_check(&sigma, &skew_pair_from_cartan(&sigma)).unwrap();
            count += 1;
        }
    }
    println!("criterion 6: pass ({count} Cartan vectors, relations + Pfaffians)");
}

/// A totally positive k×n point: a Vandermonde matrix on strictly
/// increasing positive nodes (all maximal minors are positive).
fn positive_point(sampler: &mut RatSampler, k: usize, n: usize) -> MatrixPoint {
    let mut nodes: Vec<Rat> = (0..n).map(|_| sampler.rational()).collect();
    nodes.sort();
    for (i, x) in nodes.iter_mut().enumerate() {
        *x += rint(i as i64 + 1);
    }
    let mat = Mat::construct(k, n, |r, c| {
        let mut p = Rat::one();
        for _ in 0..r {
            p *= nodes[c].clone();
        }
        p
    });
    MatrixPoint::new(mat, true).unwrap()
}

/// Criterion 7: twist round trips and the boundary-face reciprocal minors.
#[test]
fn criterion_07_twist_round_trips() {
    let mut sampler = RatSampler::new(77);
    for (k, n) in [(3usize, 6usize), (4, 8)] {
        for trial in 0..25 {
            let x = positive_point(&mut sampler, k, n);
            let px = plucker(&x).unwrap();
            assert!(px.is_positive());
            let rt = right_twist(&x).unwrap();
            let back = left_twist(&rt).unwrap();
            assert!(
                plucker(&back).unwrap().projectively_equal(&px),
                "({k},{n}) trial {trial}: round trip changed the subspace"
            );
            // Δ_{{i..i+k−1}}(τ→(X)) · Δ_{{i..i+k−1}}(X) = 1 for every i
            let prt = plucker(&rt).unwrap();
            for i in 1..=n {
                let members: Vec<usize> =
                    (0..k).map(|d| (i - 1 + d) % n + 1).collect();
                let s = idx(n, &members);
                assert_eq!(
                    prt.get(&s).clone() * px.get(&s).clone(),
                    rat(1, 1),
                    "({k},{n}) trial {trial}: window at {i}"
                );
            }
        }
    }
    println!("criterion 7: pass (25 points each at 3x6 and 4x8)");
}

/// Signed matching-sum Pfaffian: enumerate perfect matchings, sign by
/// crossing parity.
fn pfaffian_oracle(a: &Mat) -> Rat {
    fn go(a: &Mat, remaining: &[usize]) -> Rat {
        if remaining.is_empty() {
            return Rat::one();
        }
        let first = remaining[0];
        let mut total = Rat::zero();
        for (pos, &j) in remaining.iter().enumerate().skip(1) {
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&x| x != first && x != j)
                .collect();
            // pairing `first` with the (pos)-th remaining element skips
            // pos−1 smaller elements: each contributes one crossing sign
            let sign = if (pos - 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
            total += sign * a[(first, j)].clone() * go(a, &rest);
        }
        total
    }
    let all: Vec<usize> = (0..a.rows()).collect();
    go(a, &all)
}

/// Criterion 8: elimination Pfaffian against the matching-sum oracle.
#[test]
fn criterion_08_pfaffian_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut count = 0usize;
    while count < 100 {
        let m = 2 * rng.gen_range(1..=4usize);
        let mut a = Mat::zero(m, m);
        for i in 0..m {
            for j in (i + 1)..m {
                let p: i64 = rng.gen_range(-1000..=1000);
                let q: i64 = rng.gen_range(1..=1000);
                let v = rat(p, q);
                a[(i, j)] = v.clone();
                a[(j, i)] = -v;
            }
        }
        assert_eq!(pfaffian(&a).unwrap(), pfaffian_oracle(&a), "size {m}");
        count += 1;
    }
    println!("criterion 8: pass (100 skew matrices, sizes 2-8)");
}

/// Criterion 9: Y-Δ compatibility on the n = 3 star.
#[test]
fn criterion_09_move_compatibility() {
    let g = builtin_graph(3).unwrap();
    let mv = y_delta_graph(&g, MoveSite::Vertex(4)).unwrap();
    let mut sampler = RatSampler::new(99);
    for trial in 0..10 {
        let cond = sampler.conductances(&g);
        // response matrix invariant
        let moved = y_delta_conductances(&cond, &mv).unwrap();
        let l1 = response_matrix(&Network::new(g.clone(), cond.clone()).unwrap()).unwrap();
        let l2 =
            response_matrix(&Network::new(mv.graph.clone(), moved.clone()).unwrap()).unwrap();
        assert_eq!(l1, l2, "trial {trial}: response changed");
        // cube recurrence then cross-ratio = cross-ratio then move
        let labels = j_labels(&g).unwrap();
        let b = BVariables::new(
            labels.keys().map(|s| (s.clone(), sampler.rational())).collect(),
        )
        .unwrap();
        let c_from_b = q_g(&b, &g).unwrap();
        let b_moved = cube_recurrence_move(&b, &mv).unwrap();
        assert_eq!(
            q_g(&b_moved, &mv.graph).unwrap(),
            y_delta_conductances(&c_from_b, &mv).unwrap(),
            "trial {trial}: cube recurrence does not commute"
        );
    }
    // medial pairing invariant
    let before = check_well_connected(&g).unwrap();
    let after = check_well_connected(&mv.graph).unwrap();
    assert_eq!(before.pairing, after.pairing);
    assert!(after.well_connected);
    println!("criterion 9: pass (response, cube recurrence, medial pairing)");
}

/// Criterion 10: the strand alternating product against the boundary B
/// values, with random B on the built-in n = 3 graph.
#[test]
fn criterion_10_strand_products() {
    let g = builtin_graph(3).unwrap();
    let n = g.n();
    let m = 2 * n;
    let labels = j_labels(&g).unwrap();
    let mut sampler = RatSampler::new(110);
    for trial in 0..10 {
        let b = BVariables::new(
            labels.keys().map(|s| (s.clone(), sampler.rational())).collect(),
        )
        .unwrap();
        let cond = q_g(&b, &g).unwrap();
        let (gamma, wt) = temperley_plus(&g, &cond).unwrap();
        let (_, _) = strands_and_labels(&gamma).unwrap();
        let boundary = gamma.graph.boundary().to_vec();
        let b_at = |j: usize| -> Rat {
            // d_j for 1-based cyclic j
            let v = boundary[(j + m - 1) % m];
            b.vals[&site_of_white(&gamma, v).unwrap()].clone()
        };
        for strand in gamma.strands().unwrap() {
            let i = strand.end;
            assert_eq!(strand.start, (n + i - 1 + m - 1) % m + 1, "strand pairing");
            let got = strand_weight(&gamma, &wt, &strand);
            let expect = b_at(i) * b_at(n + i) / (b_at(i + m - 1) * b_at(n + i + m - 1));
            assert_eq!(got, expect, "trial {trial}, strand into d_{i}");
        }
    }
    println!("criterion 10: pass (strand products match B ratios, 10 random B)");
}
