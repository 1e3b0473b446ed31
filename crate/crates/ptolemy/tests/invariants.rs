//! Cross-module invariants: solver vs substitution, the eta action, lift
//! independence, conjugation symmetry, holonomy of peripheral paths, and the
//! fiber property of the map to the gluing variety.

use ptolemy::bloch::{lambda_element, solution_volume, LiftPolicy};
use ptolemy::gluing::cross_ratios;
use ptolemy::reconstruct::{
    diamond_coordinates, path_product, reconstruct_and_verify, Cochain, PathStep,
};
use ptolemy::solver::{
    solve_newton_multistart, substitute_component, RationalPoly, SolverConfig,
};
use ptolemy::triangulation::{parse_triangulation, Triangulation};
use ptolemy::variety::{
    apply_eta, choose_gauge, diagonal_action_exponents, generate_relations, integral_points,
    rescale_to_gauge, PolynomialSystem, VariableLookup,
};
use ptolemy::{C64, Parity};

fn fixture(name: &str) -> Triangulation {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_triangulation(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn gauged(tri: &Triangulation, n: u8, sigma_index: usize) -> PolynomialSystem {
    let reps = tri.enumerate_h2(16).unwrap();
    let sys = generate_relations(tri, n, &reps[sigma_index]).unwrap();
    let action = diagonal_action_exponents(tri, n, &sys.variables);
    choose_gauge(&sys, &action)
}

/// Per-simplex cochain (all integral points, vertex points = 1) from a
/// solution of the glued system.
fn simplex_cochain(
    tri: &Triangulation,
    sys: &PolynomialSystem,
    values: &[C64],
    s: usize,
) -> Cochain<f64> {
    let lookup = VariableLookup::new(tri, sys.n, &sys.variables);
    let mut c = Cochain::new();
    for t in integral_points(sys.n) {
        let v = if t.iter().any(|&x| x == sys.n) {
            C64::new(1.0, 0.0)
        } else {
            values[lookup.id(s, &t)]
        };
        c.insert(t, v);
    }
    c
}

fn face_signs(tri: &Triangulation, sys: &PolynomialSystem, s: usize) -> [i8; 4] {
    let classes = tri.cell_classes();
    let mut out = [1i8; 4];
    for f in 0..4u8 {
        out[f as usize] = tri.sigma_on_face(&classes, &sys.sigma, s, f);
    }
    out
}

#[test]
fn five2_newton_matches_substitution() {
    let tri = fixture("five2.tri");
    let sys = gauged(&tri, 3, 0);
    let action = diagonal_action_exponents(&tri, 3, &sys.variables);
    let newton = solve_newton_multistart(&sys, &SolverConfig::<f64> { starts: 2000, ..Default::default() });
    assert_eq!(newton.solutions.len(), 13);

    // substituted solutions live in a different gauge; rescale them into the
    // solver's gauge along the diagonal action and compare pointwise
    let full = generate_relations(&tri, 3, &tri.enumerate_h2(16).unwrap()[0]).unwrap();
    // lambda of a 5_2 solution carries 3 x C(4,3) = 12 flattenings
    let el = ptolemy::bloch::lambda_element(
        &tri,
        &sys,
        &newton.solutions[0].values,
        &LiftPolicy::Principal,
    )
    .unwrap();
    assert_eq!(el.terms.len(), 12);
    let mut substituted: Vec<Vec<C64>> = Vec::new();
    for (minpoly, params) in five2_components() {
        for sol in substitute_component(&full, &params, &minpoly, 1e-8).unwrap() {
            let rescaled = rescale_to_gauge(&sys, &action, &sol.values).unwrap();
            for &g in &sys.gauge {
                assert!((rescaled[g] - C64::new(1.0, 0.0)).norm() < 1e-10);
            }
            assert!(sys.residual(&rescaled) < 1e-9);
            substituted.push(rescaled);
        }
    }
    assert_eq!(substituted.len(), 13);
    for sub in &substituted {
        let close = newton.solutions.iter().any(|n| {
            n.values
                .iter()
                .zip(sub)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                < 1e-8
        });
        assert!(close, "substituted point not found by newton");
    }
}

/// Same component data as the acceptance suite.
fn five2_components() -> Vec<(RationalPoly, Vec<RationalPoly>)> {
    let p = |c: &[(i64, i64)]| RationalPoly::new(c);
    let konst = |n: i64| RationalPoly::constant(n, 1);
    let geometric_min = p(&[(1, 1), (2, 1), (1, 1), (1, 1)]);
    let geometric = vec![
        p(&[(0, 1), (-1, 1)]),
        p(&[(0, 1), (-1, 1)]),
        konst(1),
        p(&[(-2, 1), (0, 1), (-1, 1)]),
        konst(1),
        konst(-1),
        p(&[(1, 1), (2, 1), (1, 1)]),
        p(&[(2, 1), (0, 1), (1, 1)]),
        konst(1),
        p(&[(1, 1), (2, 1), (1, 1)]),
        p(&[(-1, 1), (-1, 1), (-1, 1)]),
        p(&[(0, 1), (1, 1)]),
    ];
    let quartic_min = p(&[(-4, 1), (-4, 1), (1, 1), (1, 1), (1, 1)]);
    let quartic = vec![
        p(&[(-2, 4), (3, 4), (-1, 4), (1, 4)]),
        p(&[(0, 1), (-1, 1)]),
        konst(1),
        p(&[(-6, 4), (-7, 4), (-3, 4), (-1, 4)]),
        konst(1),
        konst(-1),
        p(&[(2, 4), (-1, 4), (-1, 4), (1, 4)]),
        p(&[(6, 4), (7, 4), (3, 4), (1, 4)]),
        konst(1),
        p(&[(2, 4), (-1, 4), (-1, 4), (1, 4)]),
        p(&[(-1, 1), (-1, 1), (-1, 1)]),
        p(&[(0, 1), (1, 1)]),
    ];
    let sextic_min = p(&[(1, 1), (-2, 1), (8, 1), (0, 1), (5, 1), (0, 1), (1, 1)]);
    let b_poly = p(&[(-3, 4), (-1, 4), (-3, 4), (0, 1), (-1, 4)]);
    let sextic = vec![
        b_poly.clone(),
        b_poly,
        konst(1),
        p(&[(13, 17), (75, 34), (31, 34), (37, 34), (4, 17), (9, 34)]),
        p(&[(-3, 4), (2, 1), (1, 2), (5, 4), (1, 4), (1, 4)]),
        p(&[(-9, 17), (139, 34), (3, 17), (79, 34), (1, 34), (8, 17)]),
        p(&[(-1, 4), (14, 4), (1, 4), (9, 4), (0, 1), (2, 4)]),
        p(&[(26, 17), (-105, 34), (-3, 17), (-79, 34), (-1, 34), (-8, 17)]),
        konst(1),
        p(&[(0, 1), (-3, 4), (-1, 4), (-3, 4), (0, 1), (-1, 4)]),
        p(&[(-16, 17), (14, 17), (-6, 17), (6, 17), (-1, 17), (1, 17)]),
        p(&[(-1, 17), (125, 34), (29, 34), (73, 34), (1, 17), (15, 34)]),
    ];
    vec![(geometric_min, geometric), (quartic_min, quartic), (sextic_min, sextic)]
}

#[test]
fn fig8_lambda_element_structure() {
    // the element is -(-x~, -2x~) + (x~, 2x~): per-simplex flattenings are
    // (x~, 2x~) on the positively oriented simplex and (-x~, -2x~) on the
    // other, with x the free variable
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let x = C64::new(0.5, 0.75f64.sqrt());
    let free = sys.free_variables()[0];
    let mut values = vec![C64::new(1.0, 0.0); 2];
    values[free] = x;
    assert!(sys.residual(&values) < 1e-14);
    let el = lambda_element(&tri, &sys, &values, &LiftPolicy::PslHalfSquare).unwrap();
    assert_eq!(el.parity, Parity::OddAllowed);
    assert_eq!(el.terms.len(), 2);
    // with the gauge variable at 1, the per-simplex flattenings are
    // -eps_s (x~, 2 x~): the two terms cancel only after the eps signs
    let xt = (x * x).ln() * C64::new(0.5, 0.0);
    let signs = tri.signs();
    for (term, &eps) in el.terms.iter().zip(signs) {
        assert_eq!(term.0, eps);
        let scale = C64::new(-eps as f64, 0.0);
        assert!((term.1.e - xt * scale).norm() < 1e-12);
        assert!((term.1.f - xt * scale * C64::new(2.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn s1s2_lambda_cancels_and_positive_dimensional_flag() {
    let tri = fixture("s1s2.tri");
    let sys = gauged(&tri, 2, 0);
    // closed manifold: the gauge fix count equals the action rank
    assert_eq!(sys.gauge.len(), 1);
    // lambda of any family member is the zero element: equal flattenings
    // with opposite signs
    let t = C64::new(2.5, 0.5);
    let values = vec![C64::new(1.0, 0.0), t, t * t - C64::new(1.0, 0.0)];
    let el = lambda_element(&tri, &sys, &values, &LiftPolicy::Principal).unwrap();
    assert_eq!(el.terms.len(), 2);
    assert_eq!(el.terms[0].0, -el.terms[1].0);
    assert!((el.terms[0].1.e - el.terms[1].1.e).norm() < 1e-14);
    assert!((el.terms[0].1.f - el.terms[1].1.f).norm() < 1e-14);

    // the trivial-sigma variety is a curve: newton converges everywhere and
    // dedup stays unstable, which the solver reports
    let out = solve_newton_multistart(&sys, &SolverConfig::<f64> { starts: 300, ..Default::default() });
    assert!(out.stats.suspected_positive_dimensional, "stats: {:?}", out.stats);
    for s in &out.solutions {
        let v = solution_volume(&tri, &sys, &s.values).unwrap();
        assert!(v.value.norm() < 1e-9);
    }
}

#[test]
fn s1s2_nontrivial_sigma_empty() {
    let tri = fixture("s1s2.tri");
    let sys = gauged(&tri, 2, 1);
    let out = solve_newton_multistart(&sys, &SolverConfig::<f64> { starts: 250, ..Default::default() });
    assert!(out.solutions.is_empty());
}

#[test]
fn conjugation_conjugates_the_regulator() {
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let out = solve_newton_multistart(&sys, &SolverConfig::<f64> { starts: 300, ..Default::default() });
    assert_eq!(out.solutions.len(), 2);
    for s in &out.solutions {
        let conj: Vec<C64> = s.values.iter().map(|z| z.conj()).collect();
        assert!(sys.residual(&conj) < 1e-12);
        let v = solution_volume(&tri, &sys, &s.values).unwrap();
        let vc = solution_volume(&tri, &sys, &conj).unwrap();
        // Vol_C(conj) = -conj(Vol_C): volume negates, CS is fixed mod window
        assert!((vc.volume() + v.volume()).abs() < 1e-10);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(ptolemy::bloch::reduce_mod(vc.chern_simons() - v.chern_simons(), pi2).abs() < 1e-10);
    }
}

#[test]
fn eta_action_preserves_diamonds_and_shapes() {
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let x = C64::new(0.5, 0.75f64.sqrt());
    let free = sys.free_variables()[0];
    let mut values = vec![C64::new(1.0, 0.0); 2];
    values[free] = x;

    let classes = tri.cell_classes();
    for mask in 1u8..4 {
        let eta: Vec<i8> = (0..2).map(|e| if mask >> e & 1 == 1 { -1 } else { 1 }).collect();
        let moved = apply_eta(&tri, &sys.variables, &values, &eta);
        // sigma-adjusted diamond coordinates are unchanged: eta c carries the
        // shifted cocycle delta(eta) sigma, whose face signs compensate the
        // raw sign flips
        let delta = tri.coboundary_one(&classes, &eta);
        for s in 0..tri.simplex_count() {
            let c0 = simplex_cochain(&tri, &sys, &values, s);
            let c1 = simplex_cochain(&tri, &sys, &moved, s);
            for face in [(0u8, 1u8, 2u8), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
                let opposite = (0..4u8)
                    .find(|&m| m != face.0 && m != face.1 && m != face.2)
                    .unwrap();
                let s0 = tri.sigma_on_face(&classes, &sys.sigma, s, opposite);
                let shifted = tri.sigma_on_face(&classes, &delta, s, opposite) * s0;
                for tau in [face.0, face.1, face.2] {
                    let d0 = diamond_coordinates(&c0, face, tau, 2, s0).unwrap();
                    let d1 = diamond_coordinates(&c1, face, tau, 2, shifted).unwrap();
                    for (a, b) in d0.iter().zip(&d1) {
                        assert!((a.value - b.value).norm() < 1e-13);
                    }
                }
            }
        }
        // cross-ratios are eta-invariant too when eta is a cocycle; here we
        // only check the ratio is insensitive per simplex for cocycle eta
        let classes = tri.cell_classes();
        let delta = tri.coboundary_one(&classes, &eta);
        if delta.is_trivial() {
            let s0 = cross_ratios(&tri, &sys, &values).unwrap();
            let s1 = cross_ratios(&tri, &sys, &moved).unwrap();
            for s in 0..2 {
                assert!((s0.z(s) - s1.z(s)).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn diagonal_action_maps_solutions_to_solutions() {
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let action = diagonal_action_exponents(&tri, 2, &sys.variables);
    let x = C64::new(0.5, 0.75f64.sqrt());
    let free = sys.free_variables()[0];
    let mut values = vec![C64::new(1.0, 0.0); 2];
    values[free] = x;
    // scale along the single action column by an arbitrary parameter
    let d = C64::new(1.3, -0.4);
    let scaled: Vec<C64> = values
        .iter()
        .enumerate()
        .map(|(v, &c)| c * d.powi(action[v][0] as i32))
        .collect();
    assert!(sys.residual(&scaled) < 1e-12);
    // fiber property: same cross-ratios
    let s0 = cross_ratios(&tri, &sys, &values).unwrap();
    let s1 = cross_ratios(&tri, &sys, &scaled).unwrap();
    for s in 0..2 {
        assert!((s0.z(s) - s1.z(s)).norm() < 1e-12);
    }
}

#[test]
fn fig8_face_products_match_sigma_and_meridian_is_parabolic() {
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let x = C64::new(0.5, 0.75f64.sqrt());
    let free = sys.free_variables()[0];
    let mut values = vec![C64::new(1.0, 0.0); 2];
    values[free] = x;

    // reconstruct each simplex cocycle; hexagon products equal sigma signs
    let mut cocycles = Vec::new();
    for s in 0..2 {
        let c = simplex_cochain(&tri, &sys, &values, s);
        let fs = face_signs(&tri, &sys, s);
        assert!(fs.iter().any(|&v| v == -1));
        let cocycle = reconstruct_and_verify(&c, 2, fs, 1e-9).unwrap();
        cocycles.push(cocycle);
    }

    // the meridian as a short-edge path: alpha^0_{32} of simplex 1 then
    // alpha^0_{32} of simplex 0 (derived from the cusp triangulation)
    let path = [
        PathStep::Short { simplex: 1, vertex: 0, from: 3, to: 2 },
        PathStep::Short { simplex: 0, vertex: 0, from: 3, to: 2 },
    ];
    let m = path_product(&tri, &cocycles, &path).unwrap();
    let trace = m.trace();
    assert!((trace.norm() - 2.0).abs() < 1e-9, "trace {trace}");
    // boundary-unipotent up to sign but not central
    let id = ptolemy::mat::Mat::<f64>::identity(2);
    let dev = m.sub(&id).max_norm().min({
        let mut neg = id.clone();
        neg[(0, 0)] = -neg[(0, 0)];
        neg[(1, 1)] = -neg[(1, 1)];
        m.sub(&neg).max_norm()
    });
    assert!(dev > 1e-3, "meridian holonomy is central");
}

#[test]
fn fig8_odd_level_scaling() {
    // composing with the 2nd symmetric power multiplies the volume by 4,
    // for odd target level as well
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let x = C64::new(0.5, 0.75f64.sqrt());
    let free = sys.free_variables()[0];
    let mut values = vec![C64::new(1.0, 0.0); 2];
    values[free] = x;
    let rep = ptolemy::irrep::scaling_check(&tri, &sys, &values, 3).unwrap();
    assert_eq!(rep.factor, 4);
    assert!(rep.defect < 1e-9, "defect {}", rep.defect);
    assert!((rep.lifted.re.abs() - 4.0 * 2.029883212819307).abs() < 1e-9);
}

#[test]
fn shared_system_solves_concurrently() {
    // everything is immutable after construction: solving the same system
    // from several threads gives identical results
    let tri = fixture("fig8.tri");
    let sys = gauged(&tri, 2, 1);
    let config = SolverConfig::<f64> { starts: 120, seed: 3, ..Default::default() };
    let results: Vec<Vec<Vec<C64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                scope.spawn(|| {
                    solve_newton_multistart(&sys, &config)
                        .solutions
                        .into_iter()
                        .map(|s| s.values)
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for r in &results[1..] {
        assert_eq!(r, &results[0]);
    }
    assert_eq!(results[0].len(), 2);
}

#[test]
fn fig8_pipeline_runs_at_f32() {
    use ptolemy::C32;
    let tri = fixture("fig8.tri");
    let reps = tri.enumerate_h2(16).unwrap();
    let sys = generate_relations(&tri, 2, &reps[1]).unwrap();
    let action = diagonal_action_exponents(&tri, 2, &sys.variables);
    let sys = choose_gauge(&sys, &action);
    let config = SolverConfig::<f32> {
        starts: 200,
        residual_tol: 1e-5,
        dedup_distance: 1e-2,
        nonvanishing_tol: 1e-4,
        ..Default::default()
    };
    let out = solve_newton_multistart(&sys, &config);
    assert_eq!(out.solutions.len(), 2);
    for s in &out.solutions {
        let el = lambda_element(&tri, &sys, &s.values, &LiftPolicy::PslHalfSquare).unwrap();
        let v = ptolemy::bloch::complex_volume(&el).unwrap();
        assert!((v.volume().abs() - 2.0298832f32).abs() < 1e-3);
        let _: C32 = v.value; // the pipeline really is generic
    }
}
