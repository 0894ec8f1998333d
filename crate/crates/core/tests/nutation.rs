//! Spinning hub against a central-difference linearization of Euler's
//! equations `J ω̇ = −ω × Jω`.

use nalgebra::{Matrix3, Vector3};
use titop::linalg::eigenvalues;
use titop::rigid::{build_main_body, RigidBodyProperties};

fn euler_rhs(j: &Matrix3<f64>, w: &Vector3<f64>) -> Vector3<f64> {
    -j.try_inverse().unwrap() * w.cross(&(j * w))
}

fn oracle_nutation(j: &Matrix3<f64>, spin: f64) -> f64 {
    let w0 = Vector3::new(0.0, 0.0, spin);
    let h = 1e-6 * spin.max(1e-3);
    let mut jac = Matrix3::zeros();
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = h;
        jac.set_column(k, &((euler_rhs(j, &(w0 + e)) - euler_rhs(j, &(w0 - e))) / (2.0 * h)));
    }
    jac.complex_eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

#[test]
fn hub_nutation_matches_euler_equations() {
    let j = Matrix3::from_diagonal(&Vector3::new(570.42, 570.42, 1000.0));
    let props = RigidBodyProperties { m: 500.0, j_a: j, ap: Vector3::zeros(), pc: Vector3::zeros() };
    for spin in [0.1, 0.5, 2.0] {
        let expected = oracle_nutation(&j, spin);
        assert!((expected / (spin * (1000.0 - 570.42) / 570.42) - 1.0).abs() < 1e-8);
        let block = build_main_body("hub", &props, &[], &Vector3::new(0.0, 0.0, spin)).unwrap();
        let ev = eigenvalues(&block.ss.a).unwrap();
        let got = ev
            .iter()
            .map(|z| z.im.abs())
            .min_by(|a, b| (a - expected).abs().total_cmp(&(b - expected).abs()))
            .unwrap();
        assert!((got / expected - 1.0).abs() < 1e-8, "Ω = {spin}: {got} vs {expected}");
    }
}
