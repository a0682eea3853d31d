//! Acceptance suite: one PASS/FAIL line per criterion. Criterion 12 is
//! reported but does not affect the exit status.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use digitop::canon::{canonical_key, is_isomorphic};
use digitop::classify::{NormalDimension, Topology};
use digitop::cliques::for_each_complete_subgraph;
use digitop::digitize::{refine_and_compare, BoundingBox, Surface};
use digitop::format::read_dspace;
use digitop::generate::{cycle, minimal_sphere, projective_plane_subdivided, torus_grid};
use digitop::invariants::{betti_numbers, euler_characteristic, Field};
use digitop::recognize::{check_criterion, check_sphere_criteria, find_bounding_disk, Conclusion, Criterion, Search};
use digitop::space::join_relabeled;
use digitop::transform::{
    collapse_disk, compress, compress_with_restarts, find_disks, random_contractible_step, random_expansion, replay,
    DEFAULT_SIZE_CAP,
};
use digitop::{DigitalSpace, Decision};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type CheckFn = fn(&Topology) -> Result<String, String>;

struct Check {
    id: u32,
    name: &'static str,
    limit: Duration,
    blocking: bool,
    run: CheckFn,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn invariants(g: &DigitalSpace) -> (i64, Vec<usize>) {
    (euler_characteristic(g), betti_numbers(g, Field::Rationals))
}

fn dim(n: i32) -> NormalDimension {
    NormalDimension::Dim(n)
}

fn expand_randomly(g: &DigitalSpace, n: usize, times: usize, rng: &mut ChaCha8Rng, topo: &Topology) -> DigitalSpace {
    let mut g = g.clone();
    for _ in 0..times {
        let v = *g.vertices().choose(rng).unwrap();
        let subdivisions = rng.gen_range(0..3);
        g = random_expansion(&g, v, n, subdivisions, rng, topo).unwrap().0;
    }
    g
}

fn minimal_spheres(topo: &Topology) -> Result<String, String> {
    for n in 0..=4 {
        let (r, _) = digitop_cli::run(["digitop", "gen", "sphere", "-n", &n.to_string()]);
        ensure(r.exit_code() == 0, || format!("gen sphere -n {n} failed: {}", r.text))?;
        let g = read_dspace(&r.text).map_err(|e| e.to_string())?;
        ensure(g.len() == 2 * n as usize + 2, || format!("n={n}: {} points", g.len()))?;
        ensure(topo.normal_dimension(&g) == dim(n), || format!("n={n}: wrong normal dimension"))?;
        let lower = minimal_sphere(n - 1);
        for &v in g.vertices() {
            ensure(is_isomorphic(&g.rim(v).unwrap(), &lower), || format!("n={n}: rim({v}) not minimal"))?;
        }
        ensure(topo.is_sphere(&g, n as usize).decision.is_true(), || format!("n={n}: not a sphere"))?;
    }
    Ok("n=0..4".into())
}

fn euler_of_spheres(_: &Topology) -> Result<String, String> {
    let mut seen = Vec::new();
    for n in 1..=4 {
        let g = minimal_sphere(n);
        // Every subset of the 2n+2 points is a clique iff it avoids both points of some antipodal pair.
        let mut brute = 0i64;
        for mask in 1u32..(1 << g.len()) {
            let complete = (0..=n as u32).all(|i| mask >> (2 * i) & 3 != 3);
            if complete {
                brute += if mask.count_ones() % 2 == 1 { 1 } else { -1 };
            }
        }
        let chi = euler_characteristic(&g);
        let expected = if n % 2 == 0 { 2 } else { 0 };
        ensure(chi == expected && brute == expected, || format!("n={n}: chi={chi} brute={brute}"))?;
        seen.push(chi);
    }
    Ok(format!("chi(n=1..4) = {seen:?}"))
}

fn digitized_sphere(topo: &Topology) -> (DigitalSpace, DigitalSpace) {
    let report = refine_and_compare(
        &Surface::Sphere { radius: 1.0 },
        BoundingBox::cube(1.5).unwrap(),
        0.5,
        2,
        2,
        topo,
    )
    .unwrap();
    let coarse = &report.levels[0];
    (coarse.model.graph.clone(), coarse.reduced.clone())
}

fn punctured_spheres(topo: &Topology) -> Result<String, String> {
    let (raw, reduced) = digitized_sphere(topo);
    let raw_manifold = topo.is_closed_manifold(&raw, 2).unwrap();
    ensure(reduced.len() <= 120, || format!("digitized sphere has {} points", reduced.len()))?;
    let cases = [(minimal_sphere(2), 2), (minimal_sphere(3), 3), (reduced.clone(), 2)];
    let mut checked = 0;
    for (s, n) in &cases {
        ensure(topo.is_sphere(s, *n).decision.is_true(), || format!("{}-point space is not a sphere", s.len()))?;
        for &v in s.vertices() {
            let punctured = s.remove_point(v).unwrap();
            ensure(topo.contractible_decision(&punctured).is_true(), || format!("S-{v} not contractible"))?;
            let d = topo.disk_decomposition(&punctured, *n).unwrap();
            ensure(d.is_disk.is_true(), || format!("S-{v} is not a disk"))?;
            let rim = s.rim(v).unwrap();
            let boundary = punctured.induced(&d.boundary).unwrap();
            ensure(is_isomorphic(&boundary, &rim), || format!("boundary of S-{v} differs from rim"))?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} punctures; digitized sphere {} raw -> {} reduced points (raw closed manifold: {raw_manifold})",
        raw.len(),
        reduced.len()
    ))
}

fn suspensions(topo: &Topology) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut spheres: Vec<(DigitalSpace, usize)> = vec![
        (minimal_sphere(0), 0),
        (minimal_sphere(1), 1),
        (cycle(5), 1),
        (cycle(8), 1),
        (minimal_sphere(2), 2),
    ];
    for k in 1..=3 {
        spheres.push((expand_randomly(&minimal_sphere(2), 2, k, &mut rng, topo), 2));
    }
    for (s, n) in &spheres {
        let (j, _) = join_relabeled(&DigitalSpace::zero_sphere(0, 1).unwrap(), s);
        ensure(topo.is_sphere(&j, n + 1).decision.is_true(), || {
            format!("S^0 join {}-point {n}-sphere is not a sphere", s.len())
        })?;
    }
    Ok(format!("{} spheres", spheres.len()))
}

fn two_sphere_fixpoint(topo: &Topology) -> Result<String, String> {
    let oct = minimal_sphere(2);
    let expected = invariants(&oct);
    let mut sizes = Vec::new();
    for k in 1..=5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let mut g = oct.clone();
        for _ in 0..k {
            let v = *g.vertices().choose(&mut rng).unwrap();
            g = random_expansion(&g, v, 2, rng.gen_range(0..3), &mut rng, topo).unwrap().0;
            ensure(invariants(&g) == expected, || format!("k={k}: expansion changed invariants"))?;
        }
        let grown = g.len();
        let (out, trace) = compress(&g, 2, DEFAULT_SIZE_CAP, topo).map_err(|e| e.to_string())?;
        let mut cur = g.clone();
        for step in trace.steps() {
            cur = step.apply(&cur, topo).map_err(|e| e.to_string())?.0;
            ensure(invariants(&cur) == expected, || format!("k={k}: collapse changed invariants"))?;
            ensure(topo.is_closed_manifold(&cur, 2).unwrap().is_true(), || format!("k={k}: left manifolds"))?;
        }
        ensure(out.len() == 6 && is_isomorphic(&out, &oct), || {
            format!("k={k}: compressed to {} points", out.len())
        })?;
        sizes.push(grown);
    }
    Ok(format!("expanded sizes {sizes:?} all compress to the octahedron"))
}

fn three_sphere_fixpoint(topo: &Topology) -> Result<String, String> {
    let mut sizes = Vec::new();
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = expand_randomly(&minimal_sphere(3), 3, 1 + seed as usize, &mut rng, topo);
        let (out, _) = compress(&g, 3, DEFAULT_SIZE_CAP, topo).map_err(|e| e.to_string())?;
        ensure(out.len() == 8, || format!("seed {seed}: {} -> {} points", g.len(), out.len()))?;
        sizes.push((g.len(), out.len()));
    }
    Ok(format!("(expanded, compressed) = {sizes:?}"))
}

fn two_sphere_criterion(topo: &Topology) -> Result<String, String> {
    let oct = minimal_sphere(2);
    let v = check_criterion(&oct, Criterion::BoundingDisks2, 2, oct.len(), topo).map_err(|e| e.to_string())?;
    ensure(v.holds.is_true() && v.conclusion == Conclusion::Sphere, || "octahedron criterion does not hold".into())?;
    let t = torus_grid(4, 4);
    ensure(t.len() == 16, || "torus size".into())?;
    ensure(topo.is_closed_manifold(&t, 2).unwrap().is_true(), || "torus is not a closed 2-manifold".into())?;
    ensure(euler_characteristic(&t) == 0, || "torus chi".into())?;
    let v = check_criterion(&t, Criterion::BoundingDisks2, 2, t.len(), topo).map_err(|e| e.to_string())?;
    ensure(v.holds.is_false(), || format!("torus verdict {}", v.holds))?;
    let w = v.witness.ok_or("no witness")?;
    let search = find_bounding_disk(&t, &w.vertices, 2, t.len(), topo).map_err(|e| e.to_string())?;
    ensure(search == Search::Absent, || format!("witness search at cap {}: {search:?}", t.len()))?;
    Ok(format!("torus witness one-sphere {:?}", w.vertices))
}

fn three_sphere_criterion(topo: &Topology) -> Result<String, String> {
    let s = minimal_sphere(3);
    let holds = |g: &DigitalSpace| -> Result<Decision, String> {
        let v = check_criterion(g, Criterion::Embedded3, 3, g.len(), topo).map_err(|e| e.to_string())?;
        Ok(v.holds)
    };
    ensure(holds(&s)?.is_true(), || "minimal three-sphere".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = random_expansion(&s, 0, 3, 2, &mut rng, topo).map_err(|e| e.to_string())?.0;
    ensure(g.len() > s.len(), || "expansion did not grow the sphere".into())?;
    let (c, _) = compress(&g, 3, DEFAULT_SIZE_CAP, topo).map_err(|e| e.to_string())?;
    let after = holds(&c)?;
    ensure(after.is_true(), || format!("after compression: {after}"))?;
    Ok(format!("expanded {} points, compressed to {}", g.len(), c.len()))
}

fn invariance_suite(topo: &Topology) -> Result<String, String> {
    let corpus: Vec<(DigitalSpace, usize)> = vec![
        (minimal_sphere(2), 2),
        (torus_grid(4, 4), 2),
        (minimal_sphere(3), 3),
        (projective_plane_subdivided(), 2),
        (cycle(6), 1),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts = [0usize; 3];
    for (start, n) in &corpus {
        let expected = invariants(start);
        // Manifold moves: expansions and collapses.
        let mut g = start.clone();
        for _ in 0..24 {
            let disks: Vec<_> = if g.len() > 2 * n + 4 && rng.gen_bool(0.5) {
                find_disks(&g, *n, 8, topo).into_iter().filter(|d| d.interior.len() > 1).collect()
            } else {
                Vec::new()
            };
            g = match disks.choose(&mut rng) {
                Some(d) => {
                    counts[1] += 1;
                    collapse_disk(&g, &d.vertices, *n, topo).map_err(|e| e.to_string())?.0
                }
                None => {
                    counts[2] += 1;
                    let v = *g.vertices().choose(&mut rng).unwrap();
                    random_expansion(&g, v, *n, rng.gen_range(0..2), &mut rng, topo).map_err(|e| e.to_string())?.0
                }
            };
            ensure(invariants(&g) == expected, || format!("manifold step broke invariants on {}-point start", start.len()))?;
        }
        // Contractible moves.
        let mut g = start.clone();
        let mut steps = Vec::new();
        for _ in 0..20 {
            let Some(step) = random_contractible_step(&g, &mut rng, topo) else { break };
            g = step.apply(&g, topo).map_err(|e| e.to_string())?.0;
            steps.push(step);
            counts[0] += 1;
            ensure(invariants(&g) == expected, || "contractible step broke invariants".to_string())?;
        }
        ensure(replay(start, &steps, topo).map_err(|e| e.to_string())? == g, || "replay mismatch".into())?;
    }
    let total: usize = counts.iter().sum();
    ensure(total >= 200, || format!("only {total} steps"))?;
    Ok(format!(
        "{total} steps: {} contractible, {} collapses, {} expansions",
        counts[0], counts[1], counts[2]
    ))
}

fn digitizer(topo: &Topology) -> Result<String, String> {
    let report = refine_and_compare(
        &Surface::Sphere { radius: 1.0 },
        BoundingBox::cube(1.5).unwrap(),
        0.5,
        2,
        2,
        topo,
    )
    .map_err(|e| e.to_string())?;
    let mut info = Vec::new();
    for level in &report.levels {
        let c = &level.reduced_classification;
        ensure(c.is_closed_manifold.is_true(), || format!("h={}: not a closed 2-manifold", level.side))?;
        ensure(level.reduced_invariants.euler == 2, || format!("h={}: chi", level.side))?;
        ensure(level.reduced_invariants.betti == [1, 0, 1], || format!("h={}: betti", level.side))?;
        info.push(format!(
            "h={} raw {} (closed manifold: {}) -> {}",
            level.side, level.points, level.classification.is_closed_manifold, level.reduced_points
        ));
    }
    let (c, _) = compress(&report.levels[0].reduced, 2, DEFAULT_SIZE_CAP, topo).map_err(|e| e.to_string())?;
    ensure(c.len() == 6 && is_isomorphic(&c, &minimal_sphere(2)), || format!("compressed to {}", c.len()))?;
    Ok(info.join("; "))
}

fn dimension_additivity(topo: &Topology) -> Result<String, String> {
    let mut rims: Vec<(DigitalSpace, i32)> = Vec::new();
    let mut keys = BTreeSet::new();
    let mut cliques = 0;
    for n in [2i32, 3] {
        let s = minimal_sphere(n);
        let mut failure = None;
        for_each_complete_subgraph(&s, |clique| {
            cliques += 1;
            let jr = s.joint_rim(clique).unwrap();
            let expected = n - clique.len() as i32;
            if topo.normal_dimension(&jr) != dim(expected) {
                failure.get_or_insert_with(|| format!("joint rim of {clique:?} in S^{n}"));
            }
            if keys.insert(canonical_key(&jr)) {
                rims.push((jr, expected));
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    let mut joins = 0;
    for (a, da) in &rims {
        for (b, db) in &rims {
            let (j, _) = join_relabeled(a, b);
            ensure(topo.normal_dimension(&j) == dim(da + db + 1), || {
                format!("join of dimensions {da} and {db}")
            })?;
            joins += 1;
        }
    }
    Ok(format!("{cliques} complete subgraphs, {joins} joins of distinct joint rims"))
}

fn projective_plane(topo: &Topology) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = projective_plane_subdivided();
    let found = compress_with_restarts(&p, 2, DEFAULT_SIZE_CAP, 11, 200, &mut rng, topo).map_err(|e| e.to_string())?;
    let (g, attempt) = found.ok_or("no 11-point closed 2-manifold found in 200 attempts")?;
    ensure(g.len() == 11, || format!("{} points", g.len()))?;
    ensure(topo.is_closed_manifold(&g, 2).unwrap().is_true(), || "not a closed 2-manifold".into())?;
    ensure(euler_characteristic(&g) == 1, || "chi != 1".into())?;
    let verdicts = check_sphere_criteria(&g, 2, g.len(), topo).map_err(|e| e.to_string())?;
    let v = verdicts
        .iter()
        .find(|v| v.criterion == Criterion::BoundingDisks2)
        .ok_or("criterion missing")?;
    ensure(v.holds.is_false(), || format!("criterion verdict {}", v.holds))?;
    let w = v.witness.as_ref().ok_or("no witness")?;
    Ok(format!("found at attempt {attempt}; witness one-sphere {:?}", w.vertices))
}

fn main() -> ExitCode {
    let criteria = [
        Check { id: 1, name: "minimal spheres", limit: Duration::from_secs(60), blocking: true, run: minimal_spheres },
        Check { id: 2, name: "euler characteristic of spheres", limit: Duration::from_secs(10), blocking: true, run: euler_of_spheres },
        Check { id: 3, name: "punctured spheres are disks", limit: Duration::from_secs(300), blocking: true, run: punctured_spheres },
        Check { id: 4, name: "suspension of spheres", limit: Duration::from_secs(60), blocking: true, run: suspensions },
        Check { id: 5, name: "two-sphere compression fixpoint", limit: Duration::from_secs(300), blocking: true, run: two_sphere_fixpoint },
        Check { id: 6, name: "three-sphere compression fixpoint", limit: Duration::from_secs(600), blocking: true, run: three_sphere_fixpoint },
        Check { id: 7, name: "bounding-disk criterion soundness", limit: Duration::from_secs(600), blocking: true, run: two_sphere_criterion },
        Check { id: 8, name: "three-sphere criterion", limit: Duration::from_secs(600), blocking: true, run: three_sphere_criterion },
        Check { id: 9, name: "invariance under transformations", limit: Duration::from_secs(900), blocking: true, run: invariance_suite },
        Check { id: 10, name: "digitized unit sphere", limit: Duration::from_secs(600), blocking: true, run: digitizer },
        Check { id: 11, name: "join and joint-rim dimensions", limit: Duration::from_secs(60), blocking: true, run: dimension_additivity },
        Check { id: 12, name: "eleven-point projective plane (stretch)", limit: Duration::from_secs(600), blocking: false, run: projective_plane },
    ];
    let topo = Topology::default();
    let mut blocking_failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)(&topo)))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.limit => Err(format!("exceeded {:?}", c.limit)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("{tag} {:>2} {} [{:.2}s] {}", c.id, c.name, elapsed.as_secs_f64(), detail);
        if outcome.is_err() && c.blocking {
            blocking_failures += 1;
        }
    }
    if blocking_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
