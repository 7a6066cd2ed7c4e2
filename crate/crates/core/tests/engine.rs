//! Worked examples and engine-level consequences of the compatibility results.

use num_complex::Complex;
use povmkit::compat::{
    check_commutation, coexistent_with, joint_from_kernel, jointly_measurable, rank1_coexistence_kernel, smear,
    smearing_feasible, Method, MethodChoice, Status,
};
use povmkit::fixtures;
use povmkit::matcore::{hermitian_family_rank, ComplexMatrix};
use povmkit::povm::{is_regular, DiscretePovm};
use povmkit::random::{random_kernel, random_pvm, random_rank1_povm};
use povmkit::structure::{is_extreme, rank1_extreme_via_independence};
use povmkit::{Kernel, Matrix, Povm, Povm32, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

#[test]
fn example4_effects_match_closed_form() {
    let m = fixtures::example4_m::<f64>();
    // M_k = U_k |d><d| U_k^dag, |d> = (|0> + |1>)/2, U_k = diag(1, i^k)
    let phases = [c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)];
    for (k, ph) in phases.iter().enumerate() {
        let expected = ComplexMatrix::from_rows(vec![
            vec![c(0.25, 0.0), ph.conj() * 0.25],
            vec![*ph * 0.25, c(0.25, 0.0)],
        ])
        .unwrap();
        assert!(m.effect(k).max_abs_diff(&expected) < 1e-15);
    }
    // (2 - e) M1 + e M2 + (2 - e) M3 + e M4 = I for every real e
    for e in [-3.0, 0.0, 0.7, 2.0, 5.5] {
        let s = &(&m.effect(0).scale(2.0 - e) + &m.effect(1).scale(e))
            + &(&m.effect(2).scale(2.0 - e) + &m.effect(3).scale(e));
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }
    assert_eq!(hermitian_family_rank(m.effects(), 1e-8).unwrap(), 3);
}

#[test]
fn example4_textbook_kernel_certifies() {
    let t = tol();
    let m = fixtures::example4_m::<f64>();
    let mp = fixtures::example4_mprime::<f64>();
    let k = Kernel::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]], &t).unwrap();
    let s = smear(&m, &k, &t).unwrap();
    for j in 0..2 {
        assert!(s.effect(j).max_abs_diff(mp.effect(j)) < 1e-15);
    }
    // summing M1 + M3 twice is not a Markov kernel
    assert!(Kernel::new(vec![vec![1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]], &t).is_err());
}

#[test]
fn example5_intermediate_identities() {
    let m = fixtures::example5_m::<f64>();
    for k in 3..6 {
        for j in 0..3 {
            assert!((m.effect(k)[(j, j)] - c(1.0 / 6.0, 0.0)).norm() < 1e-12);
        }
    }
    assert_eq!(hermitian_family_rank(&m.effects()[..3], 1e-8).unwrap(), 3);
    let mp = fixtures::example5_mprime::<f64>();
    for (j, (a, b)) in [(1, 2), (0, 2), (0, 1)].into_iter().enumerate() {
        assert!((m.effect(a) + m.effect(b)).max_abs_diff(mp.effect(j)) < 1e-14);
    }
    let first: Matrix = ComplexMatrix::sum(3, m.effects()[..3].iter());
    let second: Matrix = ComplexMatrix::sum(3, m.effects()[3..].iter());
    assert!(first.max_abs_diff(&second) < 1e-14);
}

#[test]
fn example5_coexistent_but_not_jointly_measurable() {
    let t = tol();
    let m = fixtures::example5_m::<f64>();
    let mp = fixtures::example5_mprime::<f64>();
    assert!(coexistent_with(&m, &mp, &m, &t).unwrap().coexistent);
    let r = jointly_measurable(&m, &mp, MethodChoice::Auto, &t).unwrap();
    assert_eq!((r.status, r.method), (Status::Infeasible, Method::Lp));
    assert!(!is_extreme(&m, &t).unwrap().extreme);
}

#[test]
fn relabelled_witness_kernel() {
    let t = tol();
    let mbar = fixtures::remark4_m::<f64>();
    let m = fixtures::remark4_relabel::<f64>();
    let out = rank1_coexistence_kernel(&m, &mbar, &t).unwrap();
    let expected = [[1.0, 0.0, 0.0], [0.0, 0.1, 0.9]];
    for (i, row) in expected.iter().enumerate() {
        for (l, &v) in row.iter().enumerate() {
            assert!((out.kernel.get(i, l) - v).abs() < 1e-12);
        }
    }
    let s = smear(&m, &out.kernel, &t).unwrap();
    for l in 0..3 {
        assert!(s.effect(l).max_abs_diff(mbar.effect(l)) <= 1e-9);
    }
    assert!(!is_regular(&mbar, &t).unwrap());
    assert!(is_extreme(&m, &t).unwrap().extreme);
}

/// Flattens a joint observable into a POVM over its nonzero cells.
fn flattened(j: &povmkit::Joint, t: &Tolerances) -> Povm {
    let cells: Vec<Matrix> =
        j.grid().iter().flatten().filter(|e| e.max_abs() > 1e-12).cloned().collect();
    DiscretePovm::new(cells, t).unwrap()
}

#[test]
fn coexistence_with_extreme_rank_one_implies_smearing() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..60 {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(d..=d * d);
        let m = random_rank1_povm::<f64, _>(&mut rng, d, n, &t).unwrap();
        assert!(rank1_extreme_via_independence(&m, &t).unwrap());
        let np = rng.gen_range(1..=3);
        let k = random_kernel::<f64, _>(&mut rng, m.len(), np, 0.4, &t).unwrap();
        let joint = joint_from_kernel(&m, &k, &t).unwrap();
        let mbar = flattened(&joint, &t);
        if mbar.len() > t.range_cap {
            continue;
        }
        let mp = joint.second().clone();
        assert!(coexistent_with(&m, &mp, &mbar, &t).unwrap().coexistent);
        assert_eq!(smearing_feasible(&m, &mp, &t).unwrap().status, Status::Feasible);
        checked += 1;
    }
    assert!(checked >= 30);
}

#[test]
fn feasible_joints_for_rank_one_are_smearings() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let d = rng.gen_range(1..=3);
        let n = d + rng.gen_range(0..3);
        let m = random_rank1_povm::<f64, _>(&mut rng, d, n, &t).unwrap();
        let k = random_kernel::<f64, _>(&mut rng, m.len(), 2, 0.2, &t).unwrap();
        let mp = smear(&m, &k, &t).unwrap();
        let dy = jointly_measurable(&m, &mp, MethodChoice::Dykstra, &t).unwrap();
        if dy.is_feasible() {
            assert!(smearing_feasible(&m, &mp, &t).unwrap().is_feasible());
        }
    }
}

#[test]
fn pvm_joints_are_products() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = fixtures::qubit_z::<f64>();
    for _ in 0..20 {
        let cols = rng.gen_range(1..=3);
        let k = random_kernel::<f64, _>(&mut rng, 2, cols, 0.3, &t).unwrap();
        let mp = smear(&z, &k, &t).unwrap();
        let j = jointly_measurable(&z, &mp, MethodChoice::Auto, &t).unwrap().joint.unwrap();
        for i in 0..2 {
            for jj in 0..mp.len() {
                assert!(j.get(i, jj).max_abs_diff(&(z.effect(i) * mp.effect(jj))) <= 1e-8);
            }
        }
        assert!(check_commutation(&z, &mp).unwrap() <= 1e-8);
    }
    // PVM pairs: coarse-grainings of a random PVM have projection cells
    for _ in 0..10 {
        let d = rng.gen_range(2..=4);
        let p = random_pvm::<f64, _>(&mut rng, d, d, &t).unwrap();
        let groups = rng.gen_range(1..=d);
        let rows = (0..d).map(|i| (0..groups).map(|g| if i % groups == g { 1.0 } else { 0.0 }).collect()).collect();
        let coarse = smear(&p, &Kernel::new(rows, &t).unwrap(), &t).unwrap();
        assert!(coarse.is_pvm(&t));
        let j = jointly_measurable(&p, &coarse, MethodChoice::Auto, &t).unwrap().joint.unwrap();
        for cell in j.grid().iter().flatten() {
            assert!((cell * cell).max_abs_diff(cell) <= 1e-8);
        }
    }
}

#[test]
fn non_commuting_projectors() {
    let t = tol();
    let x = fixtures::qubit_x::<f64>();
    let z = fixtures::qubit_z::<f64>();
    assert!((check_commutation(&x, &z).unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(jointly_measurable(&x, &z, MethodChoice::Auto, &t).unwrap().status, Status::Infeasible);
    assert!(!coexistent_with(&x, &z, &x, &t).unwrap().coexistent);
}

#[test]
fn single_precision_pipeline() {
    let t = Tolerances::single_precision();
    let m: Povm32 = fixtures::example4_m();
    let mp: Povm32 = fixtures::example4_mprime();
    assert!(jointly_measurable(&m, &mp, MethodChoice::Auto, &t).unwrap().is_feasible());
    assert!(!is_extreme(&m, &t).unwrap().extreme);
    let d = povmkit::naimark_dilate(&m, &t).unwrap().residuals(&t);
    assert!(d.isometry < 1e-5 && d.marginals < 1e-5);
    let x: Povm32 = fixtures::qubit_x();
    let z: Povm32 = fixtures::qubit_z();
    let r = jointly_measurable(&x, &z, MethodChoice::Dykstra, &t).unwrap();
    assert_eq!(r.status, Status::Infeasible);
}
