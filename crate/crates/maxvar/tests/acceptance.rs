//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them) and enforcing the stated tolerances
//! and runtime budgets.

use std::sync::Arc;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use maxvar::barycenter::{refine_candidates, RefinementConfig};
use maxvar::circum::{discrete_circumball, welzl_meb};
use maxvar::jung::{jung_bound, jung_check, jung_identity_check};
use maxvar::measures::{DiscreteMeasure, SUPPORT_EPS};
use maxvar::minimax::{
    certify_saddle, solve_fictitious, solve_lp, v_anti_variance, v_variance, PayoffKind,
    PayoffMatrix,
};
use maxvar::scenario::{run_demo, simplex_vertices};
use maxvar::spaces::{sample_grid, ModelSpace, Point, PointCloud, Region};

fn report(id: u32, name: &str, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance {id} ({name}): PASS in {elapsed:.2} s (budget {budget_s} s)");
    assert!(elapsed < budget_s, "FAIL: criterion {id} exceeded its {budget_s} s budget: {elapsed:.2} s");
}

fn random_cloud(rng: &mut ChaCha8Rng, dim: usize, n: usize, spread: f64) -> Arc<PointCloud> {
    let space = ModelSpace::euclidean(dim).unwrap();
    let pts: Vec<Point> = (0..n)
        .map(|_| Point::Coords((0..dim).map(|_| rng.random_range(-spread..spread)).collect()))
        .collect();
    Arc::new(PointCloud::new(space, pts).unwrap())
}

fn random_matrix_payoff(rng: &mut ChaCha8Rng, max_side: usize) -> PayoffMatrix {
    let m = rng.random_range(1..=max_side);
    let n = rng.random_range(1..=max_side);
    let line = |k: usize| -> Arc<PointCloud> {
        let space = ModelSpace::euclidean(1).unwrap();
        let pts = (0..k).map(|i| Point::Coords(vec![i as f64])).collect();
        Arc::new(PointCloud::new(space, pts).unwrap())
    };
    let matrix: Vec<Vec<f64>> =
        (0..m).map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
    PayoffMatrix::custom(line(m), line(n), matrix).unwrap()
}

#[test]
fn criterion_1_popoviciu() {
    let t0 = Instant::now();
    let artifacts = run_demo("popoviciu").unwrap();
    assert!(
        (artifacts.solution.value - 0.25).abs() <= 1e-9,
        "FAIL: popoviciu value {}",
        artifacts.solution.value
    );
    let mu = artifacts.solution.mu.weights();
    assert!((mu[0] - 0.5).abs() <= 1e-6 && (mu[1] - 0.5).abs() <= 1e-6, "FAIL: mu {mu:?}");
    let support = artifacts.solution.nu.support(SUPPORT_EPS);
    assert_eq!(support.len(), 1, "FAIL: nu is not a Dirac: {:?}", artifacts.solution.nu.weights());
    let y = artifacts.y_cloud.point(support[0]).as_coords().unwrap()[0];
    assert!((y - 0.5).abs() <= 1e-6, "FAIL: nu sits at {y}");
    report(1, "popoviciu", t0, 1.0);
}

#[test]
fn criterion_2_unit_simplex() {
    for n in [2usize, 3] {
        let t0 = Instant::now();
        let artifacts = run_demo(&format!("simplex({n})")).unwrap();
        let expected = n as f64 / (2.0 * (n as f64 + 1.0));
        assert!(
            (artifacts.solution.value - expected).abs() <= 1e-6,
            "FAIL: simplex({n}) value {} vs {expected}",
            artifacts.solution.value
        );
        // the uniform measure on the n+1 vertices is a certified maximizer
        let vertices = Arc::new(simplex_vertices(n).unwrap());
        let payoff =
            PayoffMatrix::squared_distance(vertices.clone(), artifacts.y_cloud.clone()).unwrap();
        let uniform = DiscreteMeasure::uniform(vertices);
        let cert = certify_saddle(&payoff, &uniform, &artifacts.solution.nu, 1e-7).unwrap();
        assert!(
            cert.pass(),
            "FAIL: uniform vertex measure rejected for simplex({n}): {cert:?}"
        );
        report(2, &format!("unit simplex n={n}"), t0, 5.0);
    }
}

#[test]
fn criterion_3_duality_and_fictitious_play() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0A11);
    for case in 0..200 {
        let payoff = random_matrix_payoff(&mut rng, 30);
        let sol = solve_lp(&payoff).unwrap();
        let (var, _) = v_variance(&payoff, &sol.mu).unwrap();
        let (avar, _) = v_anti_variance(&payoff, &sol.nu).unwrap();
        assert!(
            (var - avar).abs() <= 1e-8,
            "FAIL: case {case} duality gap {}",
            (var - avar).abs()
        );
        let fp = solve_fictitious(&payoff, 100_000, 1e-3).unwrap();
        assert!(fp.gap <= 1e-3, "FAIL: case {case} fictitious gap {}", fp.gap);
    }
    report(3, "duality + fictitious play, 200 matrices", t0, 60.0);
}

#[test]
fn criterion_4_sphere_gap() {
    let t0 = Instant::now();
    let artifacts = run_demo("circle(200)").unwrap();
    assert!(
        (artifacts.solution.value - 1.0 / 3.0).abs() <= 0.01,
        "FAIL: circle(200) value {}",
        artifacts.solution.value
    );
    let uniform_mu = DiscreteMeasure::uniform(artifacts.x_cloud.clone());
    let uniform_nu = DiscreteMeasure::uniform(artifacts.y_cloud.clone());
    let cert = certify_saddle(&artifacts.payoff, &uniform_mu, &uniform_nu, 1e-9).unwrap();
    assert!(cert.pass(), "FAIL: uniform pair rejected: {cert:?}");
    let c = &artifacts.result["circumradius"];
    let wasserstein = c["wasserstein_sq"].as_f64().unwrap();
    let metric = c["metric_sq"].as_f64().unwrap();
    assert!((metric - 1.0).abs() <= 1e-9, "FAIL: metric_sq {metric}");
    assert!(wasserstein < metric, "FAIL: no strict gap");
    assert!(metric - wasserstein > 0.6, "FAIL: gap {} too small", metric - wasserstein);
    report(4, "sphere gap on circle(200)", t0, 30.0);
}

#[test]
fn criterion_5_jung_identities() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x10E5);
    for case in 0..10_000 {
        let k: f64 = rng.random_range(-4.0..4.0);
        let rmax = if k > 0.0 {
            (std::f64::consts::FRAC_PI_2 / k.sqrt()).min(1.0)
        } else {
            1.0
        };
        let r = rng.random_range(f64::MIN_POSITIVE..rmax);
        let n = match rng.random_range(0..=10u64) {
            0 => None,
            n => Some(n),
        };
        let c = jung_identity_check(r, n, k).unwrap();
        assert!(
            c.relative_error <= 1e-12,
            "FAIL: case {case} k={k} r={r} n={n:?} rel err {}",
            c.relative_error
        );
        let far = jung_bound(r, Some(1_000_000), k).unwrap();
        let inf = jung_bound(r, None, k).unwrap();
        assert!(
            (far - inf).abs() <= 1e-5,
            "FAIL: case {case} limit gap {}",
            (far - inf).abs()
        );
    }
    report(5, "jung identities, 1e4 samples", t0, 5.0);
}

#[test]
fn criterion_6_jung_certification() {
    let t0 = Instant::now();
    let cfg = RefinementConfig::default();

    let h = 3.0_f64.sqrt() / 2.0;
    let s2 = ModelSpace::euclidean(2).unwrap();
    let triangle = Arc::new(
        PointCloud::new(
            s2,
            vec![
                Point::coords(vec![0.0, 0.0]),
                Point::coords(vec![1.0, 0.0]),
                Point::coords(vec![0.5, h]),
            ],
        )
        .unwrap(),
    );
    let s3 = ModelSpace::euclidean(3).unwrap();
    let tetrahedron = Arc::new(
        PointCloud::new(
            s3,
            vec![
                Point::coords(vec![0.0, 0.0, 0.0]),
                Point::coords(vec![1.0, 0.0, 0.0]),
                Point::coords(vec![0.5, h, 0.0]),
                Point::coords(vec![0.5, h / 3.0, 6.0_f64.sqrt() / 3.0]),
            ],
        )
        .unwrap(),
    );
    for (name, cloud, m_expected) in
        [("triangle", &triangle, 3usize), ("tetrahedron", &tetrahedron, 4usize)]
    {
        let rep = jung_check(cloud, &cfg).unwrap();
        assert_eq!(rep.support_size, m_expected, "FAIL: {name} support {}", rep.support_size);
        let bound = rep.bound_support.unwrap();
        assert!(
            (rep.diameter - bound).abs() <= 1e-6,
            "FAIL: {name} D {} vs S {}",
            rep.diameter,
            bound
        );
        assert_eq!(rep.pass_support, Some(true), "FAIL: {name} pass_support");
        let angles = rep.angles.unwrap();
        let c_expected = -1.0 / (m_expected as f64 - 1.0);
        assert!(
            (angles.min_cosine - c_expected).abs() <= 1e-6,
            "FAIL: {name} C {} vs {c_expected}",
            angles.min_cosine
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6a61);
    for case in 0..100 {
        let dim = rng.random_range(2..=4);
        let n = rng.random_range(2..=30);
        let cloud = random_cloud(&mut rng, dim, n, 1.0);
        let ball = welzl_meb(&cloud).unwrap();
        let d = cloud.diameter().unwrap();
        let s_inf = jung_bound(ball.radius, None, 0.0).unwrap();
        assert!(d >= s_inf - 1e-9, "FAIL: case {case} D {d} < S_inf {s_inf}");
    }
    report(6, "jung certification", t0, 60.0);
}

#[test]
fn criterion_7_first_variation() {
    let t0 = Instant::now();
    const C: f64 = 0.1;
    let spaces = [
        ModelSpace::euclidean(3).unwrap(),
        ModelSpace::sphere(1.2, 2).unwrap(),
        ModelSpace::hyperbolic(-0.7, 2).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1D);
    for space in &spaces {
        let sample = |rng: &mut ChaCha8Rng| -> Point {
            match space {
                ModelSpace::Euclidean { .. } => Point::coords(vec![
                    rng.random_range(-0.6..0.6),
                    rng.random_range(-0.6..0.6),
                    rng.random_range(-0.6..0.6),
                ]),
                ModelSpace::Sphere { curvature, .. } => {
                    // polar cap parametrization, exactly on the surface
                    let r = 1.0 / curvature.sqrt();
                    let theta: f64 = rng.random_range(0.0..1.0);
                    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    Point::coords(vec![
                        r * theta.sin() * phi.cos(),
                        r * theta.sin() * phi.sin(),
                        r * theta.cos(),
                    ])
                }
                ModelSpace::Hyperbolic { curvature, .. } => {
                    let r = 1.0 / (-curvature).sqrt();
                    let a = rng.random_range(-0.8..0.8);
                    let b = rng.random_range(-0.8..0.8);
                    Point::coords(vec![(r * r + a * a + b * b).sqrt(), a, b])
                }
                ModelSpace::Finite { .. } => unreachable!(),
            }
        };
        let mut done = 0;
        while done < 50 {
            let x0 = sample(&mut rng);
            let z = sample(&mut rng);
            let p = sample(&mut rng);
            let dz = space.distance(&x0, &z).unwrap();
            let dp = space.distance(&x0, &p).unwrap();
            if dz < 1e-3 || dp < 1e-3 {
                continue;
            }
            if let ModelSpace::Sphere { curvature, .. } = space {
                if dp >= 0.9 * std::f64::consts::FRAC_PI_2 / curvature.sqrt() {
                    continue;
                }
            }
            let exact = space.squared_distance_derivative(&x0, &z, &p).unwrap();
            for h in [1e-3, 1e-4, 1e-5] {
                let s = h / dz;
                let fwd = space.geodesic_point(&x0, &z, s).unwrap();
                let bwd = space.geodesic_point(&x0, &z, -s).unwrap();
                let fd = (space.distance(&fwd, &p).unwrap().powi(2)
                    - space.distance(&bwd, &p).unwrap().powi(2))
                    / (2.0 * h);
                assert!(
                    (fd - exact).abs() <= C * h,
                    "FAIL: {} h={h} fd={fd} exact={exact}",
                    space.kind_name()
                );
            }
            done += 1;
        }
    }
    report(7, "first variation, 50 instances per kind", t0, 30.0);
}

#[test]
fn criterion_8_sphere_support_condition() {
    let t0 = Instant::now();
    // every solved instance in this suite's styles: random matrices,
    // refined geometric instances, and the built-in demos
    let mut rng = ChaCha8Rng::seed_from_u64(0x5bb);
    for case in 0..60 {
        let payoff = random_matrix_payoff(&mut rng, 20);
        let sol = solve_lp(&payoff).unwrap();
        let rows = payoff.row_values(&sol.nu).unwrap();
        for i in sol.mu.support(SUPPORT_EPS) {
            assert!(
                (rows[i] - sol.value).abs() <= 1e-6,
                "FAIL: case {case} support row {i}: {} vs {}",
                rows[i],
                sol.value
            );
        }
    }
    for case in 0..20 {
        let dim = rng.random_range(2..=3);
        let n = rng.random_range(2..=10);
        let cloud = random_cloud(&mut rng, dim, n, 1.0);
        let r = refine_candidates(
            &cloud,
            &cloud,
            PayoffKind::SquaredDistance,
            &RefinementConfig::default(),
        )
        .unwrap();
        let payoff =
            PayoffMatrix::squared_distance(cloud.clone(), r.y_cloud.clone()).unwrap();
        let rows = payoff.row_values(&r.solution.nu).unwrap();
        for i in r.solution.mu.support(SUPPORT_EPS) {
            assert!(
                (rows[i] - r.solution.value).abs() <= 1e-6,
                "FAIL: refined case {case} support row {i}: {} vs {}",
                rows[i],
                r.solution.value
            );
        }
    }
    for name in ["popoviciu", "simplex(2)", "simplex(3)", "circle(200)"] {
        let artifacts = run_demo(name).unwrap();
        let rows = artifacts.payoff.row_values(&artifacts.solution.nu).unwrap();
        for i in artifacts.solution.mu.support(SUPPORT_EPS) {
            assert!(
                (rows[i] - artifacts.solution.value).abs() <= 1e-6,
                "FAIL: demo {name} support row {i}: {} vs {}",
                rows[i],
                artifacts.solution.value
            );
        }
    }
    report(8, "sphere-support condition", t0, 60.0);
}

#[test]
fn criterion_9_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x09ac1e);
    for case in 0..20 {
        let dim = if case % 2 == 0 { 2 } else { 3 };
        let n = rng.random_range(3..=12);
        let cloud = random_cloud(&mut rng, dim, n, 1.0);
        let ball = welzl_meb(&cloud).unwrap();

        // brute-force oracle: grid minimax over the bounding box
        let mut min = vec![f64::INFINITY; dim];
        let mut max = vec![f64::NEG_INFINITY; dim];
        for p in cloud.points() {
            for (i, &c) in p.as_coords().unwrap().iter().enumerate() {
                min[i] = min[i].min(c);
                max[i] = max[i].max(c);
            }
        }
        let res = if dim == 2 { 33 } else { 17 };
        let spacing = min
            .iter()
            .zip(max.iter())
            .map(|(a, b)| (b - a) / (res - 1) as f64)
            .fold(0.0_f64, f64::max)
            * (dim as f64).sqrt();
        let grid = Arc::new(
            sample_grid(
                cloud.space(),
                &Region::Box { min: min.clone(), max: max.clone() },
                res,
            )
            .unwrap(),
        );
        let brute = discrete_circumball(&cloud, &grid).unwrap();
        assert!(
            (brute.radius - ball.radius).abs() <= spacing,
            "FAIL: case {case} welzl {} vs grid {} (spacing {spacing})",
            ball.radius,
            brute.radius
        );

        // LP vs fictitious play on the same instance
        let payoff = PayoffMatrix::squared_distance(cloud.clone(), grid).unwrap();
        let lp = solve_lp(&payoff).unwrap();
        let fp = solve_fictitious(&payoff, 100_000, 1e-4).unwrap();
        assert!(
            (lp.value - fp.value).abs() <= 1e-3,
            "FAIL: case {case} lp {} vs fp {}",
            lp.value,
            fp.value
        );
    }
    report(9, "oracle equivalence", t0, 60.0);
}
