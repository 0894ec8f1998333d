use nalgebra::{Matrix3, Rotation3, Vector3, Vector6};
use proptest::prelude::*;
use titop::analysis::{bending_scale_z, frequency_ratio, DimensionlessSetup};
use titop::assembly::{assemble, cantilever};
use titop::beam::{build_matrix_set, compute_equilibrium, BeamProperties, Kinematics};
use titop::modal_frequencies;
use titop::rigid::{dcm_transport, tau};

fn boom() -> BeamProperties {
    BeamProperties::new(2700.0, 3.14e-4, 50.0, 7e10, 0.33, 7.85e-9, 7.85e-9, 1.57e-8)
}

prop_compose! {
    fn beam_props()(rho in 500.0..8000.0f64, s in 1e-5..1e-2f64, l in 0.5..60.0f64, e in 1e9..3e11f64,
                    nu in 0.1..0.45f64, slender in 1e-4..5e-3f64, jratio in 0.5..2.0f64) -> BeamProperties {
        // radius of gyration kept small against the length: a slender beam
        let jy = s * (slender * l).powi(2);
        BeamProperties::new(rho, s, l, e, nu, jy, jy * jratio, jy * (1.0 + jratio))
    }
}

fn rotation(axis: [f64; 3], angle: f64) -> Matrix3<f64> {
    let a = Vector3::from(axis);
    if a.norm() < 1e-9 {
        return Matrix3::identity();
    }
    Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(a), angle).into_inner()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_matrix_is_symmetric_positive_definite(p in beam_props(), eta in 0.0..8.0f64, alpha in 0.0..1.0f64) {
        let omega = eta * bending_scale_z(&p);
        let eq = compute_equilibrium(&p, &Kinematics::spinning(alpha * p.l, omega), &Vector6::zeros()).unwrap();
        let ms = build_matrix_set(&p, &eq).unwrap();
        let m = &ms.m_t;
        prop_assert!((m - m.transpose()).abs().max() <= 1e-12 * m.abs().max());
        prop_assert!(m.clone().cholesky().is_some());
    }

    #[test]
    fn gyroscopic_part_is_skew(p in beam_props(), eta in 0.0..8.0f64) {
        let omega = eta * bending_scale_z(&p);
        let eq = compute_equilibrium(&p, &Kinematics::spinning(0.0, omega), &Vector6::zeros()).unwrap();
        let ms = build_matrix_set(&p, &eq).unwrap();
        let g = (ms.g_t.transpose() - &ms.g_t) * 0.5;
        prop_assert!((&g + g.transpose()).abs().max() <= 1e-12 * g.abs().max().max(1.0));
    }

    #[test]
    fn tau_inverse(x in -10.0..10.0f64, y in -10.0..10.0f64, z in -10.0..10.0f64) {
        let v = Vector3::new(x, y, z);
        let prod = tau(&v) * tau(&-v);
        prop_assert!((prod - nalgebra::Matrix6::identity()).abs().max() <= 1e-12);
    }

    #[test]
    fn dcm_transport_is_a_homomorphism(a in prop::array::uniform3(-1.0..1.0f64), ta in -3.2..3.2f64,
                                       b in prop::array::uniform3(-1.0..1.0f64), tb in -3.2..3.2f64) {
        let (p, q) = (rotation(a, ta), rotation(b, tb));
        let (wp, mp) = dcm_transport(&p).unwrap();
        let (wq, mq) = dcm_transport(&q).unwrap();
        let (wpq, mpq) = dcm_transport(&(p * q)).unwrap();
        prop_assert!((wpq - wp * wq).abs().max() <= 1e-12);
        prop_assert!((mpq - mp * mq).abs().max() <= 1e-12);
        let (wt, _) = dcm_transport(&p.transpose()).unwrap();
        prop_assert!((wt * wp - nalgebra::Matrix6::identity()).abs().max() <= 1e-12);
    }

    #[test]
    fn undamped_spectrum_at_rest_is_imaginary(alpha in 0.0..1.0f64, mu in 0.0..2.0f64, elements in 1usize..3) {
        let p = boom();
        let g = cantilever(&p, elements, alpha * p.l, mu * p.mass(), None).unwrap();
        let m = assemble(&g, 0.0).unwrap();
        let r = modal_frequencies(&m.block.ss).unwrap();
        let scale = r.eigenvalues.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for v in &r.eigenvalues {
            prop_assert!(v.re.abs() <= 1e-8 * scale, "{v}");
        }
    }

    #[test]
    fn in_plane_below_out_of_plane(eta in 0.1..10.0f64, alpha in 0.0..1.0f64, mu in 0.0..1.0f64) {
        let p = boom();
        let omega = eta * bending_scale_z(&p);
        let g = cantilever(&p, 1, alpha * p.l, mu * p.mass(), None).unwrap();
        let m = assemble(&g, omega).unwrap();
        let r = modal_frequencies(&m.block.ss).unwrap();
        let t = frequency_ratio(&r, &DimensionlessSetup::new(&p, omega, mu * p.mass(), alpha * p.l), &p);
        for k in 0..4 {
            prop_assert!(t.in_plane[k] <= t.out_of_plane[k], "mode {k}: {} > {}", t.in_plane[k], t.out_of_plane[k]);
        }
    }

    #[test]
    fn ratios_do_not_depend_on_units(eta in 0.0..10.0f64, ls in 0.01..100.0f64, ms in 0.01..100.0f64, ts in 0.1..10.0f64) {
        // length unit scaled by ls, mass unit by ms, time unit by ts
        let p = boom();
        let q = BeamProperties::new(
            p.rho * ms / ls.powi(3),
            p.s * ls * ls,
            p.l * ls,
            p.e * ms / (ls * ts * ts),
            p.nu,
            p.jy * ls.powi(4),
            p.jz * ls.powi(4),
            p.jpx * ls.powi(4),
        );
        let row = |p: &BeamProperties| {
            let omega = eta * bending_scale_z(p);
            let g = cantilever(p, 1, 0.3 * p.l, 0.5 * p.mass(), None).unwrap();
            let r = modal_frequencies(&assemble(&g, omega).unwrap().block.ss).unwrap();
            frequency_ratio(&r, &DimensionlessSetup::new(p, omega, 0.5 * p.mass(), 0.3 * p.l), p)
        };
        let (a, b) = (row(&p), row(&q));
        for (x, y) in a.in_plane.iter().chain(&a.out_of_plane).zip(b.in_plane.iter().chain(&b.out_of_plane)) {
            prop_assert!((x / y - 1.0).abs() < 1e-7, "{x} vs {y}");
        }
        prop_assert!((a.traction[0] / b.traction[0] - 1.0).abs() < 1e-7);
    }
}
