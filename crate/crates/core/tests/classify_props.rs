use digitop::canon::is_isomorphic;
use digitop::classify::{Contractibility, NormalDimension, Topology};
use digitop::cliques::maximal_cliques;
use digitop::generate::{cycle, minimal_disk, minimal_sphere, projective_plane_subdivided, torus_grid};
use digitop::space::{cone, join_relabeled};
use digitop::transform::random_expansion;
use digitop::{DigitalSpace, Decision};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn expanded_sphere(n: usize, seed: u64) -> DigitalSpace {
    let topo = Topology::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = minimal_sphere(n as i32);
    random_expansion(&g, 0, n, 2, &mut rng, &topo).unwrap().0
}

/// Normal spaces with their dimensions.
fn normal_corpus() -> Vec<(DigitalSpace, i32)> {
    let mut out: Vec<(DigitalSpace, i32)> = (0..4).map(|n| (minimal_sphere(n), n)).collect();
    out.extend([(cycle(5), 1), (cycle(7), 1), (torus_grid(4, 4), 2), (projective_plane_subdivided(), 2)]);
    out.push((expanded_sphere(2, 1), 2));
    out
}

#[test]
fn normal_dimensions_of_corpus() {
    let topo = Topology::default();
    for (g, n) in normal_corpus() {
        assert_eq!(topo.normal_dimension(&g), NormalDimension::Dim(n));
    }
    assert_eq!(topo.normal_dimension(&DigitalSpace::point(0)), NormalDimension::NotNormal);
}

#[test]
fn join_dimension_is_additive() {
    let topo = Topology::default();
    let corpus: Vec<_> = normal_corpus().into_iter().filter(|(g, _)| g.len() <= 10).collect();
    for (g, a) in &corpus {
        for (h, b) in &corpus {
            if g.len() + h.len() > 16 {
                continue;
            }
            let (j, _) = join_relabeled(g, h);
            assert_eq!(topo.normal_dimension(&j), NormalDimension::Dim(a + b + 1));
        }
    }
}

/// In a normal n-space the joint rim of any p-point complete subgraph is a
/// normal (n - p)-space.
#[test]
fn joint_rims_of_cliques_drop_dimension() {
    let topo = Topology::default();
    for (g, n) in normal_corpus() {
        for clique in maximal_cliques(&g) {
            let members: Vec<u32> = clique.iter().copied().collect();
            for mask in 1u32..(1 << members.len()) {
                let sub: Vec<u32> = (0..members.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| members[i])
                    .collect();
                let jr = g.joint_rim(&sub).unwrap();
                assert_eq!(
                    topo.normal_dimension(&jr),
                    NormalDimension::Dim(n - sub.len() as i32),
                    "clique {sub:?}"
                );
            }
        }
    }
}

#[test]
fn suspension_of_a_sphere_is_a_sphere() {
    let topo = Topology::default();
    let spheres = [minimal_sphere(0), minimal_sphere(1), cycle(6), minimal_sphere(2), expanded_sphere(2, 4)];
    for s in spheres {
        let n = match topo.normal_dimension(&s) {
            NormalDimension::Dim(d) => d as usize,
            NormalDimension::NotNormal => unreachable!(),
        };
        let (j, _) = join_relabeled(&DigitalSpace::zero_sphere(0, 1).unwrap(), &s);
        assert!(topo.is_sphere(&j, n + 1).decision.is_true());
    }
}

/// Deleting any point of a sphere leaves a disk bounded by that point's rim.
#[test]
fn punctured_spheres_are_disks() {
    let topo = Topology::default();
    for s in [minimal_sphere(2), minimal_sphere(3), expanded_sphere(2, 9), expanded_sphere(3, 2)] {
        let n = (topo.normal_dimension(&s) == NormalDimension::Dim(3)) as usize + 2;
        for &v in s.vertices() {
            let punctured = s.remove_point(v).unwrap();
            assert!(topo.contractible_decision(&punctured).is_true());
            let d = topo.disk_decomposition(&punctured, n).unwrap();
            assert!(d.is_disk.is_true(), "point {v}");
            assert_eq!(d.boundary, s.neighbors(v).unwrap());
            // The two halves: ball(v) and S - v share exactly the rim.
            let ball = s.ball(v).unwrap();
            let b = topo.disk_decomposition(&ball, n).unwrap();
            assert!(b.is_disk.is_true());
            assert_eq!(b.boundary, d.boundary);
        }
    }
}

#[test]
fn non_spheres_are_rejected() {
    let topo = Topology::default();
    assert!(topo.is_sphere(&torus_grid(4, 4), 2).decision.is_false());
    assert!(topo.is_sphere(&projective_plane_subdivided(), 2).decision.is_false());
    assert!(topo.is_closed_manifold(&torus_grid(4, 4), 2).unwrap().is_true());
    assert!(topo.is_sphere(&minimal_disk(2), 2).decision.is_false());
}

#[test]
fn disks_and_cones() {
    let topo = Topology::default();
    for n in 1..4 {
        let d = minimal_disk(n);
        let dec = topo.disk_decomposition(&d, n).unwrap();
        assert!(dec.is_disk.is_true());
        assert_eq!(dec.interior.len(), 1);
        assert!(is_isomorphic(&d.induced(&dec.boundary).unwrap(), &minimal_sphere(n as i32 - 1)));
    }
}

fn graph(max_points: usize) -> impl Strategy<Value = DigitalSpace> {
    (1..=max_points).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            DigitalSpace::new(0..n as u32, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cones_are_contractible_with_valid_certificates(g in graph(7)) {
        let topo = Topology::default();
        let c = cone(100, &g).unwrap();
        match topo.is_contractible(&c).unwrap() {
            Contractibility::Contractible(cert) => prop_assert!(cert.verify(&c, &topo)),
            other => prop_assert!(false, "cone not contractible: {:?}", other),
        }
    }

    #[test]
    fn certificates_replay_to_a_point(g in graph(8)) {
        let topo = Topology::default();
        let outcome = topo.is_contractible(&g).unwrap();
        if let Contractibility::Contractible(cert) = &outcome {
            prop_assert!(cert.verify(&g, &topo));
            prop_assert_eq!(cert.replay(&g, &topo).unwrap().len(), 1);
        }
        if !g.is_connected() {
            prop_assert_eq!(outcome.decision(), Decision::False);
        }
    }
}
