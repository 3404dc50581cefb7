//! Body-frame angular momentum and the half-turn test that separates even
//! from odd orbitals.
//!
//! A half-turn about an axis through the centre of mass and perpendicular to
//! the relative coordinate exchanges two identical particles, so it must map a
//! physical state to itself up to one overall phase. In the eigenbasis of the
//! body projection `K1` that half-turn multiplies `|l, mu>` by `(-1)^mu`, and
//! a position state only populates `l - mu` even.

mod frame;
mod operators;
mod state;

pub use frame::{body_frame, BodyFrame, PARALLEL_TOL};
pub use operators::{angular_momentum, body_operators, check_su2, exp_i, k_operator, Su2Report, AXIS_NORM_TOL};
pub use state::{
    delta_weight, lab_point_state, mu_parity_spectrum, phase_fit, point_state, random_mixed_state,
    random_single_parity_state, rotate_lab_pi_about, rotate_pi_about_k1, superselection_check, to_body_k1,
    verdict_sweep, AngularState, Basis, PhaseFitReport, SweepPoint, Verdict, SUPERSELECTION_TOL,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_space::Vec3;
    use crate::error::Error;
    use crate::special::{wigner_big_d, wigner_small_d, C64};
    use nalgebra::DMatrix;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Vec3, b: Vec3) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn frame_for_x_axis() {
        let f = body_frame(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(close(f.n3, Vec3::new(1.0, 0.0, 0.0)));
        assert!(close(f.n1, Vec3::new(0.0, 1.0, 0.0)));
        assert!(close(f.n2, Vec3::new(0.0, 0.0, 1.0)));
        assert!(f.is_right_handed());
        let lh = BodyFrame::left_handed(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!(close(lh.n2, Vec3::new(0.0, 0.0, -1.0)));
        assert!(!lh.is_right_handed());
    }

    #[test]
    fn frame_quarter_turn_about_n2_carries_n3_to_n1() {
        let f = body_frame(Vec3::new(0.3, -1.1, 0.8)).unwrap();
        let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(f.n2), FRAC_PI_2);
        assert!((r * f.n3 - f.n1).norm() < 1e-15);
    }

    #[test]
    fn degenerate_frames() {
        for r0 in [Vec3::new(0.0, 0.0, 5.0), Vec3::zeros(), Vec3::new(0.0, 0.0, -1.0)] {
            assert!(matches!(body_frame(r0), Err(Error::DegenerateFrame(_))));
        }
    }

    #[test]
    fn random_frames_are_orthonormal() {
        let mut rng = crate::random::rng(4);
        for _ in 0..1000 {
            let f = body_frame(crate::random::random_unit_vector(&mut rng)).unwrap();
            assert!(f.orthonormality_error() < 1e-14);
            assert!(close(f.n2, f.n3.cross(&f.n1)));
        }
    }

    #[test]
    fn k_along_z_is_diagonal() {
        let k = k_operator(1, Vec3::z()).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
        ]));
        assert_eq!(k.matrix(), &expected);
        assert!(k_operator(1, Vec3::new(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn k_spectrum_is_rotation_invariant() {
        let mut rng = crate::random::rng(9);
        for l in 0..=6u32 {
            let axis = crate::random::random_unit_vector(&mut rng);
            let k = k_operator(l, axis).unwrap();
            let mut ev: Vec<f64> = k.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            for (i, e) in ev.iter().enumerate() {
                assert!((e - (i as f64 - l as f64)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn k_along_x_by_conjugation() {
        // a quarter turn about y carries z into x
        let d = wigner_big_d(2, 0.0, FRAC_PI_2, 0.0).unwrap();
        let lz = k_operator(2, Vec3::z()).unwrap();
        let kx = d.matrix() * lz.matrix() * d.matrix().adjoint();
        let direct = k_operator(2, Vec3::x()).unwrap();
        assert!((kx - direct.matrix()).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn su2_identities() {
        let f = body_frame(Vec3::new(0.4, 0.2, 0.7)).unwrap();
        let r = check_su2(1, &f, 1e-13).unwrap();
        assert!(r.passed, "{r:?}");
        let r = check_su2(16, &f, 1e-10).unwrap();
        assert!(r.casimir_deviation < 1e-10 && r.passed, "{r:?}");
    }

    #[test]
    fn left_handed_frame_flips_the_structure_constants() {
        let lh = BodyFrame::left_handed(Vec3::new(0.4, 0.2, 0.7)).unwrap();
        let r = check_su2(3, &lh, 1e-10).unwrap();
        assert!(!r.passed);
        assert!(r.commutator_deviation > 1.0);
        assert!(r.flipped_commutator_deviation < 1e-10);
        assert!(r.casimir_deviation < 1e-10);
    }

    fn r0() -> Vec3 {
        Vec3::new(0.5, -0.8, 0.6)
    }

    #[test]
    fn point_state_weights() {
        let s = point_state(r0(), 0).unwrap();
        assert_eq!(s.entries().count(), 1);
        assert!((s.get(0, 0).re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16);
        let s = point_state(r0(), 12).unwrap();
        let partial: f64 = (0..=12).map(|l| (2 * l + 1) as f64 / (4.0 * PI)).sum();
        assert!((s.inner(&s).unwrap().re - partial).abs() < 1e-13);
        let k1 = to_body_k1(&s).unwrap();
        assert!((k1.norm() - s.norm()).abs() < 1e-13);
        for ((l, mu), v) in k1.entries() {
            if (l as i32 - mu) % 2 != 0 {
                assert!(v.norm() < 1e-12, "l={l} mu={mu}");
            }
        }
        assert!(matches!(point_state(Vec3::z(), 3), Err(Error::DegenerateFrame(_))));
    }

    #[test]
    fn lab_point_state_matches_body_expansion() {
        // |components| of the lab state in a numeric K1 eigenbasis equal |d_{mu 0}(pi/2)| beta_l
        let frame = body_frame(r0()).unwrap();
        let lab = lab_point_state(r0(), 6).unwrap();
        for l in 0..=6u32 {
            let k1 = k_operator(l, frame.n1).unwrap();
            let eig = k1.matrix().clone().symmetric_eigen();
            for (c, &ev) in eig.eigenvalues.iter().enumerate() {
                let mu = ev.round() as i32;
                let comp = (eig.eigenvectors.column(c).adjoint() * lab.block(l))[(0, 0)];
                let expected = (wigner_small_d(l, mu, 0, FRAC_PI_2).unwrap() * delta_weight(l)).abs();
                assert!((comp.norm() - expected).abs() < 1e-12, "l={l} mu={mu}");
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let mut s = AngularState::new(2, Basis::BodyK1);
        s.set(2, 0, C64::new(0.3, 0.1)).unwrap();
        s.set(1, 1, C64::new(1.0, -2.0)).unwrap();
        let r = rotate_pi_about_k1(&s).unwrap();
        assert_eq!(r.get(2, 0), s.get(2, 0));
        assert_eq!(r.get(1, 1), -s.get(1, 1));
        assert!((r.norm() - s.norm()).abs() < 1e-15);
        let k3 = point_state(r0(), 2).unwrap();
        assert!(matches!(rotate_pi_about_k1(&k3), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn rotation_matches_matrix_exponential() {
        let frame = body_frame(r0()).unwrap();
        let state = random_mixed_state(8, 0.3, 17);
        let rotated = rotate_pi_about_k1(&state).unwrap();
        for l in 0..=8u32 {
            let k1 = k_operator(l, frame.n1).unwrap();
            let e = exp_i(&k1, PI);
            let eig = k1.matrix().clone().symmetric_eigen();
            // reorder eigenvectors so column c has eigenvalue l - c
            let dim = 2 * l as usize + 1;
            let mut v = DMatrix::<C64>::zeros(dim, dim);
            for (c, &ev) in eig.eigenvalues.iter().enumerate() {
                let pos = (l as i32 - ev.round() as i32) as usize;
                v.set_column(pos, &eig.eigenvectors.column(c));
            }
            let in_k1 = v.adjoint() * e.matrix() * &v;
            let oracle = &in_k1 * state.block(l);
            let got = rotated.block(l);
            assert!((oracle - got).iter().all(|z| z.norm() < 1e-10), "l={l}");
        }
    }

    #[test]
    fn even_part_of_point_state_is_fixed_by_half_turn() {
        let frame = body_frame(r0()).unwrap();
        let lab = lab_point_state(r0(), 10).unwrap();
        for l in (0..=10u32).step_by(2) {
            let e = exp_i(&k_operator(l, frame.n1).unwrap(), PI);
            let b = lab.block(l);
            assert!((e.matrix() * &b - &b).iter().all(|z| z.norm() < 1e-12), "l={l}");
        }
        let k1 = to_body_k1(&point_state(r0(), 10).unwrap()).unwrap().orbital_part(0);
        assert!(rotate_pi_about_k1(&k1).unwrap().distance(&k1).unwrap() < 1e-12);
    }

    fn multiplet(l: u32) -> AngularState {
        let full = to_body_k1(&point_state(r0(), l).unwrap()).unwrap();
        let mut s = AngularState::new(l, Basis::BodyK1);
        for ((ll, mu), v) in full.entries() {
            if ll == l {
                s.set(ll, mu, v).unwrap();
            }
        }
        s
    }

    #[test]
    fn single_multiplets_have_a_global_phase() {
        let even = superselection_check(&multiplet(2), 1e-12).unwrap();
        assert!((even.best_phase - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(even.residual < 1e-12);
        assert_eq!(even.verdict, Verdict::GlobalPhase);
        let odd = superselection_check(&multiplet(1), 1e-12).unwrap();
        assert!((odd.best_phase + C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(odd.residual < 1e-12);
    }

    fn brute_force_residual(s: &AngularState) -> f64 {
        let rot = rotate_pi_about_k1(s).unwrap();
        let n = 200_000;
        (0..n)
            .map(|k| {
                let lam = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
                rot.distance(&s.scaled(lam)).unwrap()
            })
            .fold(f64::INFINITY, f64::min)
            / (2f64.sqrt() * s.norm())
    }

    #[test]
    fn equal_mix_has_unit_residual() {
        let a = multiplet(1);
        let b = multiplet(2);
        let mix = a.scaled(C64::new(1.0 / a.norm(), 0.0)).plus(&b.scaled(C64::new(1.0 / b.norm(), 0.0))).unwrap();
        let fit = superselection_check(&mix, SUPERSELECTION_TOL).unwrap();
        assert!((fit.residual - 1.0).abs() < 1e-10);
        assert_eq!(fit.verdict, Verdict::NoGlobalPhase);
        assert!((brute_force_residual(&mix) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unequal_mix_matches_brute_force_and_bound() {
        for seed in 0..5 {
            let s = random_mixed_state(4, 0.3, seed);
            let fit = superselection_check(&s, SUPERSELECTION_TOL).unwrap();
            assert!((fit.residual - brute_force_residual(&s)).abs() < 1e-8);
            let bound = 2f64.sqrt() * s.orbital_part(0).norm().min(s.orbital_part(1).norm()) / s.norm();
            assert!((fit.residual - bound).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_dichotomy() {
        for seed in 0..100u64 {
            let parity = (seed % 2) as u32;
            let s = random_single_parity_state(10, parity, seed);
            let fit = superselection_check(&s, SUPERSELECTION_TOL).unwrap();
            let lam = if parity == 0 { 1.0 } else { -1.0 };
            assert!(fit.residual < 1e-10);
            assert!((fit.best_phase - C64::new(lam, 0.0)).norm() < 1e-12);
            let m = random_mixed_state(10, 0.3, seed);
            assert!(m.orbital_part(0).norm() >= 0.3 - 1e-12 && m.orbital_part(1).norm() >= 0.3 - 1e-12);
            let fit = superselection_check(&m, SUPERSELECTION_TOL).unwrap();
            assert!(fit.residual > 0.3);
            assert_eq!(fit.verdict, Verdict::NoGlobalPhase);
        }
        let empty = AngularState::new(3, Basis::BodyK1);
        assert!(matches!(superselection_check(&empty, 1e-10), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn mu_parity() {
        let by_l = mu_parity_spectrum(r0(), 32, 1e-12).unwrap();
        assert_eq!(by_l[&0].iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(by_l[&3].iter().copied().collect::<Vec<_>>(), vec![-3, -1, 1, 3]);
        assert_eq!(by_l[&4].iter().copied().collect::<Vec<_>>(), vec![-4, -2, 0, 2, 4]);
        for (l, mus) in &by_l {
            assert!(mus.iter().all(|mu| (*l as i32 - mu) % 2 == 0), "l={l}");
            assert!(!mus.is_empty());
        }
    }

    #[test]
    fn verdict_is_constant_along_a_sweep() {
        let thetas: Vec<f64> = (0..=13).map(|k| 0.1 + 0.1 * k as f64).collect();
        for (parity, lam) in [(0u32, 1.0), (1, -1.0)] {
            for p in verdict_sweep(&thetas, 0.7, 8, Some(parity), SUPERSELECTION_TOL).unwrap() {
                assert!(p.residual < 1e-10, "{p:?}");
                assert!((C64::new(p.phase_re, p.phase_im) - C64::new(lam, 0.0)).norm() < 1e-10, "{p:?}");
            }
        }
        // even weight 45/(4 pi), odd weight 36/(4 pi): residual sqrt(2) 6/9
        let expected = 2f64.sqrt() * 6.0 / 9.0;
        for p in verdict_sweep(&thetas, 0.7, 8, None, SUPERSELECTION_TOL).unwrap() {
            assert!((p.residual - expected).abs() < 1e-10, "{p:?}");
        }
    }

    #[test]
    fn lab_half_turn_uses_a_consistent_block() {
        // D from Euler angles agrees with exp(-i pi n.L)
        let frame = body_frame(r0()).unwrap();
        let lab = lab_point_state(r0(), 5).unwrap();
        let turned = rotate_lab_pi_about(&lab, frame.n1).unwrap();
        for l in 0..=5u32 {
            let e = exp_i(&k_operator(l, frame.n1).unwrap(), -PI);
            assert!((e.matrix() * lab.block(l) - turned.block(l)).iter().all(|z| z.norm() < 1e-12), "l={l}");
        }
    }

    #[test]
    fn json_shapes() {
        let s = to_body_k1(&point_state(r0(), 2).unwrap()).unwrap();
        let back = AngularState::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["basis"], "body-K1");
        assert!(v["entries"][0]["mu"].is_i64());
        let fit = superselection_check(&s, 1e-10).unwrap().to_json_value();
        for key in ["phase_re", "phase_im", "residual", "verdict"] {
            assert!(fit.get(key).is_some());
        }
        assert!(AngularState::from_json(r#"{"l_max":1,"basis":"body-K1","entries":[{"l":1,"mu":2,"re":0,"im":0}]}"#).is_err());
        assert!(AngularState::from_json(r#"{"l_max":1,"basis":"lab-x","entries":[]}"#).is_err());
    }
}
