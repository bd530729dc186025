mod common;

use common::*;
use junctions_core::crystal::{bcc_slip_systems, habit_plate, habit_plates, variants, HabitPlate, PlateId, SlipSystem};
use junctions_core::junction::*;
use junctions_core::linalg::{cofactor, rank_le_one, Mat3, Tolerances, Vec3};
use junctions_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plate(lambda: f64, id: &str) -> HabitPlate {
    habit_plate(lambda, 1.0 / lambda, id.parse::<PlateId>().unwrap()).unwrap()
}

fn scan(lambda: f64) -> Vec<PlasticJunction> {
    let plates = habit_plates(lambda, 1.0 / lambda).unwrap();
    find_plastic_junctions(lambda, 1.0 / lambda, &plates[0], &plates[1..], &bcc_slip_systems(), &Tolerances::default())
        .unwrap()
}

fn case_junctions(lambda: f64) -> Vec<(CaseMatch, PlasticJunction)> {
    scan(lambda).into_iter().filter_map(|j| match_case(&j).map(|c| (c, j))).collect()
}

fn sys(phi: [i32; 3], psi: [i32; 3]) -> SlipSystem {
    *bcc_slip_systems().iter().find(|s| s.phi == phi && s.psi == psi).unwrap()
}

#[test]
fn shared_plane_normal_satisfies_the_fourth_condition() {
    let tol = Tolerances::default();
    let (p1, p3) = (plate(1.2, "1+"), plate(1.2, "3+"));
    let psi = Vec3::new(-1.0, 1.0, 0.0);
    // Direct evaluation of the triple product.
    assert!(psi.dot(&p1.n.cross(&p3.n)).abs() < 1e-14);
    let p = ShearProblem {
        a1: p1.a,
        a2: p3.a,
        phi1: p1.gradient() * Vec3::new(1.0, 1.0, 1.0),
        phi2: p3.gradient() * Vec3::new(1.0, 1.0, -1.0),
        n1: p1.n,
        n2: p3.n,
        psi1: psi,
        psi2: psi,
    };
    assert!(necessary_conditions(&p, &tol).unwrap().contains(&Disjunct::D4));
}

#[test]
fn constructed_orthogonality_gives_the_third_condition() {
    let tol = Tolerances::default();
    let (a1, a2) = (Vec3::new(0.1, 0.3, -0.2), Vec3::new(-0.2, 0.1, 0.4));
    let (n1, n2) = (Vec3::new(1.0, 0.2, 0.5), Vec3::new(0.3, -1.0, 0.2));
    let p = ShearProblem {
        a1,
        a2,
        phi1: Vec3::new(0.3, 0.9, -0.4),
        phi2: a1 * 0.7 - a2 * 1.3,
        n1,
        n2,
        psi1: Vec3::new(0.5, 0.5, 1.0),
        psi2: n1 * 2.0 + n2,
    };
    let c = necessary_conditions(&p, &tol).unwrap();
    assert!(c.contains(&Disjunct::D3));
    assert!(!c.contains(&Disjunct::D1) && !c.contains(&Disjunct::D4));
}

#[test]
fn random_octuples_satisfy_no_condition() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut v = || Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    for _ in 0..200 {
        let p = ShearProblem { a1: v(), a2: v(), phi1: v(), phi2: v(), n1: v(), n2: v(), psi1: v(), psi2: v() };
        assert!(necessary_conditions(&p, &tol).unwrap().is_empty());
    }
}

#[test]
fn swapped_problem_recovers_the_closed_form_shears() {
    let l = 1.2;
    let tol = Tolerances::default();
    let (p1, p3) = (plate(l, "1+"), plate(l, "3+"));
    let o = ThmCase::A.option(1, l).unwrap();
    let (phi1, phi2, psi) = (Vec3::from_ints(o.phi1), Vec3::from_ints(o.phi2), Vec3::from_ints(o.psi));
    // Post-multiplying by the inverse shears exchanges the slip directions.
    let p = ShearProblem {
        a1: p1.a,
        a2: p3.a,
        phi1: p1.gradient() * phi2,
        phi2: p3.gradient() * phi1,
        n1: p1.n,
        n2: p3.n,
        psi1: psi,
        psi2: psi,
    };
    let (e1, e2, _, _) = eta_xi(l).unwrap();
    match solve_shear_amounts(&p, &tol).unwrap() {
        ShearSolution::Unique { s1, s2, .. } => {
            assert!((-s2 - e1).abs() < 1e-10, "{s2} {e1}");
            assert!((-s1 - e2).abs() < 1e-10, "{s1} {e2}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn same_system_pair_gives_the_offset_line() {
    let l: f64 = 1.2;
    let tol = Tolerances::default();
    let s = sys([1, -1, -1], [2, 1, 1]);
    let p = shear_problem(&plate(l, "1+"), &plate(l, "1-"), &s, &s);
    let offset = l * (l * l - 1.0) / (2f64.sqrt() * (2.0 * l.powi(4) + 1.0));
    match solve_shear_amounts(&p, &tol).unwrap() {
        ShearSolution::Family(c) => {
            for s2 in [-0.1, 0.0, 0.3] {
                let s1 = c.s1_for(s2).unwrap();
                // The catalog stores φ = −(−1,1,1), which flips both shear signs.
                assert!(((-s1) - (-s2) - offset).abs() < 1e-10);
                assert!(p.residual(s1, s2) < 1e-12);
            }
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parameter_regime_is_enforced() {
    let plates = habit_plates(1.2, 1.0 / 1.2).unwrap();
    let tol = Tolerances::default();
    for (l, d) in [(1.0, 1.0), (1.5, 0.8), (1.2, 1.2)] {
        let r = find_plastic_junctions(l, d, &plates[0], &plates[1..], &bcc_slip_systems(), &tol);
        assert!(matches!(r, Err(Error::OutOfRange(_))));
    }
    let none = find_plastic_junctions(1.2, 1.0 / 1.2, &plates[0], &[], &bcc_slip_systems(), &tol).unwrap();
    assert!(none.is_empty());
}

#[test]
fn second_variant_plates_have_no_junction() {
    let l = 1.0331;
    let tol = Tolerances::default();
    let base = plate(l, "1+");
    let partners = [plate(l, "2+"), plate(l, "2-")];
    assert!(find_plastic_junctions(l, 1.0 / l, &base, &partners, &bcc_slip_systems(), &tol).unwrap().is_empty());
}

#[test]
fn emitted_junctions_are_rank_one() {
    let tol = Tolerances::default();
    for l in [1.07, 1.3] {
        for j in scan(l) {
            let (f1, f2) = j.gradients();
            assert!(rank_le_one(&(f1 - f2), &tol));
            assert!((f1 - f2 - j.b.outer(&j.m)).norm() <= 1e-10);
            assert!(j.t1.abs() > ZERO_SHEAR && j.t2.abs() > ZERO_SHEAR);
            assert!((j.m.norm() - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn solver_matches_closed_form_amounts_and_normals() {
    let l = 1.2;
    let (e1, e2, x1, x2) = eta_xi(l).unwrap();
    let found = case_junctions(l);
    assert_eq!(found.len(), 8);
    for (c, j) in found {
        let o = c.case.option(c.option, l).unwrap();
        assert!((c.t1 - o.t1).abs() < 1e-10 && (c.t2 - o.t2).abs() < 1e-10);
        let pair = if c.case.uses_eta() { (e1, e2) } else { (x1, x2) };
        let want = if c.option == 1 { pair } else { (-pair.1, -pair.0) };
        assert!((c.t1 - want.0).abs() < 1e-10 && (c.t2 - want.1).abs() < 1e-10);
        let m = junction_normal_closed_form(c.case, c.option, l).unwrap();
        assert!(m.cross(&j.m).norm() < 1e-9, "{:?} {}", c.case, c.option);
    }
}

#[test]
fn printed_second_normal_polynomials_are_not_the_normal() {
    let l = 1.2;
    let [q1, q2, q3] = m_minus_printed(l);
    let printed = Vec3::new(q1, q2, q3).normalized();
    let solver = case_junctions(l).into_iter().find(|(c, _)| c.case == ThmCase::B && c.option == 1).unwrap().1;
    assert!(printed.cross(&solver.m).norm() > 1e-3);
}

#[test]
fn case_a_is_rigid_and_the_shared_plane_pair_is_not() {
    let tol = Tolerances::default();
    let (_, a) = case_junctions(1.1).into_iter().find(|(c, _)| c.case == ThmCase::A).unwrap();
    let r = local_rigidity(&a, &tol).unwrap();
    assert!(r.rigid && r.f_normalized.abs() > 1e-6 && r.fd_rel_error < 1e-6);
    assert_eq!(r.method, RigidityMethod::Analytic);

    let l = 1.2;
    let plates = [plate(l, "1-")];
    let (s3, s4) = (sys([1, -1, 1], [0, 1, 1]), sys([1, 1, -1], [0, 1, 1]));
    let js = find_plastic_junctions(l, 1.0 / l, &plate(l, "1+"), &plates, &[s3, s4], &tol).unwrap();
    let j = js.iter().find(|j| j.slip1 == s3 && j.slip2 == s4).unwrap();
    let expected = l * (l * l - 1.0) / (2.0 * 2f64.sqrt());
    assert!((j.t2 - expected).abs() < 1e-10 && (j.t1 + expected).abs() < 1e-10);
    assert!((j.m - Vec3::unit(0)).norm() < 1e-10);
    let r = local_rigidity(j, &tol).unwrap();
    assert!(!r.rigid && r.family.is_some());
    assert!(r.f_normalized.abs() <= tol.rigidity_tol && r.det_normalized.abs() <= tol.rigidity_tol);
}

#[test]
fn families_of_the_same_variant_pair() {
    let tol = Tolerances::default();
    for case in FamilyCase::ALL {
        let r = nonrigid_family_check(1.2, case, &tol).unwrap();
        assert!(r.verified, "{}", case.label());
        assert!(r.max_residual <= 1e-10);
    }
    let r = nonrigid_family_check(1.2, FamilyCase::IIIIV, &tol).unwrap();
    let at_zero = r.samples.iter().find(|s| s.parameter == 0.0).unwrap();
    let l: f64 = 1.2;
    assert!((at_zero.t2 - l * l * (l * l - 1.0) / (2f64.sqrt() * 2.0 * l)).abs() < 1e-14);
    assert!(nonrigid_family_check(1.5, case_any(), &tol).is_err());
}

fn case_any() -> FamilyCase {
    FamilyCase::II
}

#[test]
fn separation_examples() {
    let tol = Tolerances::default();
    let l = 1.4;
    let (_, j) = case_junctions(l).into_iter().find(|(c, _)| c.case == ThmCase::A).unwrap();
    let (f1, _) = j.gradients();
    let r = separation_margin(&f1, 1, Some(&j.slip1), l, 1.0 / l, &tol).unwrap();
    assert!(r.margin > 0.0);
    assert_eq!(r.competitors, 6 * 48 - 1 + 5);

    // Including the own branch gives distance zero.
    let v = variants(l, 1.0 / l).unwrap();
    let wells: Vec<Mat3> = v.iter().map(|x| x.u * x.u).collect();
    let cat = bcc_slip_systems();
    let tensors: Vec<Mat3> = cat.iter().map(|s| s.tensor()).collect();
    let own = cat.iter().position(|s| *s == j.slip1).unwrap();
    let u = v[0].u;
    let f = u * j.slip1.shear(j.t1);
    let all = separation_margin_general(&f, &wells, &tensors, usize::MAX, None);
    assert!(all.margin < 1e-7);
    let excl = separation_margin_general(&f, &wells, &tensors, 0, Some(own));
    assert!(excl.margin > 1e-4);

    let none = separation_margin(&u, 1, None, l, 1.0 / l, &tol).unwrap();
    assert_eq!(none.competitors, 5 * 48 + 5);
    assert!(none.margin > 0.0);
}

#[test]
fn quartic_minimum_agrees_with_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v = variants(1.15, 1.0 / 1.15).unwrap();
    let cat = bcc_slip_systems();
    for _ in 0..50 {
        let f = Mat3(std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-0.2..0.2)))) + Mat3::IDENTITY;
        let c = f.transpose() * f;
        let u = v[rng.gen_range(0..6)].u;
        let p = cat[rng.gen_range(0..48)].tensor();
        let (best, t) = shear_well_distance(&c, &(u * u), &p);
        let g = |t: f64| {
            let s = Mat3::IDENTITY + p * t;
            let d = c - s.transpose() * u * u * s;
            d.ddot(&d)
        };
        assert!((g(t) - best).abs() < 1e-12);
        for k in -2000..=2000 {
            assert!(g(k as f64 * 1e-3) >= best - 1e-12);
        }
    }
}

#[test]
fn stability_of_the_four_cases() {
    let l = 1.0331;
    let tol = Tolerances::default();
    for (c, j) in case_junctions(l) {
        let n1 = j.plate1.unit_normal();
        let n2 = -j.plate2.unit_normal();
        let s = stability_check(&j, &n1, &n2, &tol).unwrap();
        assert!(s.stable, "{:?} {:?}", c, s.reasons);
        let w = s.wedge.unwrap();
        let angles = [w.theta_psi1, w.theta_m, w.theta_psi2, w.theta_n2];
        assert!(angles.windows(2).all(|p| p[0].abs() < p[1].abs()));
        assert!(angles.iter().all(|a| a.signum() == angles[0].signum()));
        // Regions differ by rank-one matrices across every interface.
        let [f1b, f2b, f1, f2, id] = w.regions;
        for (a, b) in [(f1, id), (f1b, f1), (f1b, f2b), (f2b, f2), (f2, id)] {
            assert!(rank_le_one(&(a - b), &tol));
        }
    }
}

#[test]
fn wedge_orientation_matters() {
    let l = 1.0331;
    let tol = Tolerances::default();
    let (_, j) = case_junctions(l).into_iter().find(|(c, _)| c.case == ThmCase::B).unwrap();
    let n1 = j.plate1.unit_normal();
    let n2 = j.plate2.unit_normal();
    assert!(build_vii_wedges(&j, &n1, &(-n2), &tol).is_ok());
    assert!(matches!(build_vii_wedges(&j, &n1, &n2, &tol), Err(Error::OrderingFailed)));
    let (f1b, f1) = (j.gradients().0, j.plate1.gradient());
    assert!(rank_le_one(&(f1b - f1), &tol));
    assert!(cofactor(&(f1b - f1)).norm() < 1e-15);
}

#[test]
fn unstable_for_the_same_variant_pair() {
    let l = 1.2;
    let tol = Tolerances::default();
    let plates = [plate(l, "1-")];
    let base = plate(l, "1+");
    let js = find_plastic_junctions(l, 1.0 / l, &base, &plates, &bcc_slip_systems(), &tol).unwrap();
    assert!(!js.is_empty());
    for j in &js {
        let s = stability_check(j, &base.unit_normal(), &(-plates[0].unit_normal()), &tol).unwrap();
        assert!(!s.stable);
    }
    assert!(vii_candidates(&js, &tol).unwrap().is_empty());
}

#[test]
fn stability_rejects_the_upper_lambda_limit() {
    let (_, mut j) = case_junctions(1.2).into_iter().next().unwrap();
    j.lambda = LAMBDA_MAX;
    let err = stability_check(&j, &j.plate1.unit_normal(), &j.plate2.unit_normal(), &Tolerances::default());
    assert!(matches!(err, Err(Error::OutOfRange(_))));
}

#[test]
fn dislocation_density_ordering_and_limit() {
    for l in [1.0331, 1.2, 1.4] {
        let js = case_junctions(l);
        let dens = |case: ThmCase| js.iter().find(|(c, _)| c.case == case).map(|(_, j)| dislocation_density_norm(j)).unwrap();
        assert!(dens(ThmCase::B) < dens(ThmCase::A) && dens(ThmCase::D) < dens(ThmCase::C));
    }
    let near_one: f64 = case_junctions(1.0001).iter().map(|(_, j)| dislocation_density_norm(j)).fold(0.0, f64::max);
    assert!(near_one < 1e-3);
}

#[test]
fn generic_solver_agrees_with_the_closed_form() {
    let tol = Tolerances::default();
    for l in [1.05, 1.25] {
        for (c, j) in case_junctions(l) {
            let p = shear_problem(&j.plate1, &j.plate2, &j.slip1, &j.slip2);
            let sols = solve_bilinear(&p, &tol);
            assert!(
                sols.unique.iter().any(|&(a, b)| (a - j.t1).abs() < 1e-9 && (b - j.t2).abs() < 1e-9),
                "{c:?}: {sols:?}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn junction_quantities_are_frame_indifferent(q in rotation(), pick in 0usize..8, li in 0usize..3) {
        let l = [1.05, 1.2, 1.35][li];
        let tol = Tolerances::default();
        let (_, j) = case_junctions_cached(l)[pick];
        let g = j.geometry();
        let h = g.rotated(&q);
        let a = local_rigidity_geometry(&g, &tol).unwrap();
        let b = local_rigidity_geometry(&h, &tol).unwrap();
        prop_assert_eq!(a.rigid, b.rigid);
        prop_assert!((a.f_normalized - b.f_normalized).abs() < 1e-10);
        prop_assert!((a.det_normalized - b.det_normalized).abs() < 1e-10);

        let (f1, f2) = h.gradients();
        prop_assert!((f1 - f2 - h.b.outer(&h.m)).norm() < 1e-10);
        prop_assert!((h.m - q * j.m).norm() < 1e-12);

        let (n1, n2) = (g.n1.normalized(), -g.n2.normalized());
        let wa = build_vii_wedges_geometry(&g, &n1, &n2, &tol).unwrap();
        let wb = build_vii_wedges_geometry(&h, &(q * n1), &(q * n2), &tol).unwrap();
        prop_assert!((wa.theta_m - wb.theta_m).abs() < 1e-9);
        prop_assert!((wa.theta_psi1 - wb.theta_psi1).abs() < 1e-9);
        prop_assert!((wa.theta_psi2 - wb.theta_psi2).abs() < 1e-9);

        // Separation with every well and slip tensor conjugated as well.
        let v = variants(l, 1.0 / l).unwrap();
        let cat = bcc_slip_systems();
        let own = cat.iter().position(|s| *s == j.slip1).unwrap();
        let wells: Vec<Mat3> = v.iter().map(|x| x.u * x.u).collect();
        let tensors: Vec<Mat3> = cat.iter().map(|s| s.tensor()).collect();
        let conj = |m: &Mat3| q * *m * q.transpose();
        let fa = j.gradients().0;
        let sa = separation_margin_general(&fa, &wells, &tensors, 0, Some(own));
        let wells_q: Vec<Mat3> = wells.iter().map(conj).collect();
        let tensors_q: Vec<Mat3> = tensors.iter().map(conj).collect();
        let sb = separation_margin_general(&conj(&fa), &wells_q, &tensors_q, 0, Some(own));
        prop_assert!((sa.margin - sb.margin).abs() < 1e-10);
    }

    #[test]
    fn analytic_jacobian_matches_differences(q in rotation(), pick in 0usize..8, dt in prop::array::uniform2(-0.02..0.02f64)) {
        let (_, j) = case_junctions_cached(1.2)[pick];
        let mut g = j.geometry().rotated(&q);
        g.t1 += dt[0];
        g.t2 += dt[1];
        let r = local_rigidity_geometry(&g, &Tolerances::default()).unwrap();
        prop_assert!(r.fd_rel_error < 1e-6);
    }
}

fn case_junctions_cached(l: f64) -> Vec<(CaseMatch, PlasticJunction)> {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<(f64, Vec<(CaseMatch, PlasticJunction)>)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| [1.05, 1.2, 1.35].iter().map(|&x| (x, case_junctions(x))).collect());
    all.iter().find(|(x, _)| *x == l).unwrap().1.clone()
}
