//! Rigid bodies as two-port blocks, the spinning main body, and frame/point
//! transport utilities.

use nalgebra::{DMatrix, Matrix3, Matrix6, Vector3, Vector6};

use crate::analysis::ModeFamily;
use crate::block::{motion_channels, wrench_channels, Port, PortRole, TitopBlock};
use crate::error::{Error, Result};
use crate::ss::{EnergyGroup, StateSpace};

/// Cross-product matrix: `skew(v) * w == v × w`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Kinematic model between two points, `[[I, skew(pb)], [0, I]]`, with `pb`
/// the vector from P to B. Maps a twist at B to the twist at P.
pub fn tau(pb: &Vector3<f64>) -> Matrix6<f64> {
    let mut t = Matrix6::identity();
    t.fixed_view_mut::<3, 3>(0, 3).copy_from(&skew(pb));
    t
}

/// Motion transport `diag(τ_CP, τ_CP, I₆)` with `cp` the vector from C to P.
pub fn upsilon(cp: &Vector3<f64>) -> DMatrix<f64> {
    let t = tau(cp);
    let mut u = DMatrix::identity(18, 18);
    u.view_mut((0, 0), (6, 6)).copy_from(&t);
    u.view_mut((6, 6), (6, 6)).copy_from(&t);
    u
}

/// Frame change maps `P^{×2}` (wrenches) and `P^{×6}` (motions) for a DCM
/// mapping vectors of frame a into frame b.
pub fn dcm_transport(dcm: &Matrix3<f64>) -> Result<(Matrix6<f64>, DMatrix<f64>)> {
    let err = (dcm.transpose() * dcm - Matrix3::identity()).abs().max();
    if !(err <= 1e-9) {
        return Err(Error::InvalidParameter(format!("DCM is not orthonormal (|PᵀP − I| = {err:e})")));
    }
    let mut w = Matrix6::zeros();
    w.fixed_view_mut::<3, 3>(0, 0).copy_from(dcm);
    w.fixed_view_mut::<3, 3>(3, 3).copy_from(dcm);
    let mut m = DMatrix::zeros(18, 18);
    for k in 0..6 {
        m.view_mut((3 * k, 3 * k), (3, 3)).copy_from(dcm);
    }
    Ok((w, m))
}

/// Mass, inertia and port geometry of a rigid body.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidBodyProperties {
    /// kg
    pub m: f64,
    /// Inertia at the center of mass A, kg·m².
    pub j_a: Matrix3<f64>,
    /// From the center of mass A to the port point P.
    pub ap: Vector3<f64>,
    /// From P to the child point C.
    pub pc: Vector3<f64>,
}

impl RigidBodyProperties {
    pub fn point_mass(m: f64) -> Self {
        Self { m, j_a: Matrix3::zeros(), ap: Vector3::zeros(), pc: Vector3::zeros() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m >= 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidParameter(format!("rigid mass must be non-negative, got {}", self.m)));
        }
        if (self.j_a - self.j_a.transpose()).abs().max() > 1e-12 * self.j_a.abs().max().max(1.0) {
            return Err(Error::InvalidParameter("inertia tensor is not symmetric".into()));
        }
        if self.j_a != Matrix3::zeros() {
            let eig = self.j_a.symmetric_eigenvalues();
            if eig.min() < 0.0 {
                return Err(Error::InvalidParameter("inertia tensor is not positive definite".into()));
            }
        }
        let finite = self.ap.iter().chain(self.pc.iter()).all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite port geometry".into()));
        }
        Ok(())
    }

    /// Inertia at P: `J_A − m skew(AP)²`.
    pub fn inertia_at_p(&self) -> Matrix3<f64> {
        let s = skew(&self.ap);
        self.j_a - s * s * self.m
    }

    /// 6×6 mass model at P.
    pub fn mass_matrix(&self) -> Matrix6<f64> {
        let s = skew(&self.ap);
        let mut d = Matrix6::zeros();
        d.fixed_view_mut::<3, 3>(0, 0).copy_from(&(Matrix3::identity() * self.m));
        d.fixed_view_mut::<3, 3>(0, 3).copy_from(&(s * self.m));
        d.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-s * self.m));
        d.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.inertia_at_p());
        d
    }
}

/// Linearized gyroscopic matrix `X_P(v̄_P, ω̄_P)` at P.
pub fn gyric_matrix(props: &RigidBodyProperties, v_bar: &Vector3<f64>, w_bar: &Vector3<f64>) -> Matrix6<f64> {
    let m = props.m;
    let sw = skew(w_bar);
    let sv = skew(v_bar);
    let sa = skew(&props.ap);
    let jp = props.inertia_at_p();
    let mut x = Matrix6::zeros();
    x.fixed_view_mut::<3, 3>(0, 0).copy_from(&(sw * m));
    x.fixed_view_mut::<3, 3>(0, 3).copy_from(&((sw * sa * 2.0 - sa * sw - sv) * m));
    x.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-(sa * sw) * m));
    x.fixed_view_mut::<3, 3>(3, 3).copy_from(&(sa * sv * m + sw * jp - skew(&(jp * w_bar))));
    x
}

/// `[[skew(ω̄), 0], [skew(v̄), skew(ω̄)]]`
pub fn rate_operator(v_bar: &Vector3<f64>, w_bar: &Vector3<f64>) -> Matrix6<f64> {
    let mut o = Matrix6::zeros();
    let sw = skew(w_bar);
    o.fixed_view_mut::<3, 3>(0, 0).copy_from(&sw);
    o.fixed_view_mut::<3, 3>(3, 3).copy_from(&sw);
    o.fixed_view_mut::<3, 3>(3, 0).copy_from(&skew(v_bar));
    o
}

/// Steady wrench applied at P on the parent: `τ_CPᵀ W̄_C − Ω̄ D_P [v̄; ω̄]`.
pub fn equilibrium_wrench(
    props: &RigidBodyProperties,
    v_bar: &Vector3<f64>,
    w_bar: &Vector3<f64>,
    w_c: &Vector6<f64>,
) -> Vector6<f64> {
    let mut twist = Vector6::zeros();
    twist.fixed_rows_mut::<3>(0).copy_from(v_bar);
    twist.fixed_rows_mut::<3>(3).copy_from(w_bar);
    tau(&(-props.pc)).transpose() * w_c - rate_operator(v_bar, w_bar) * props.mass_matrix() * twist
}

/// Static 24×24 two-port model of a rigid appendage.
///
/// Inputs `[C wrench (6); P motion (18)]`, outputs `[C motion (18); P wrench (6)]`.
pub fn build_rigid_titop(
    name: &str,
    props: &RigidBodyProperties,
    v_bar: &Vector3<f64>,
    w_bar: &Vector3<f64>,
) -> Result<TitopBlock> {
    props.validate()?;
    let cp = -props.pc;
    let mut d = DMatrix::zeros(24, 24);
    d.view_mut((0, 6), (18, 18)).copy_from(&upsilon(&cp));
    d.view_mut((18, 0), (6, 6)).copy_from(&tau(&cp).transpose());
    d.view_mut((18, 6), (6, 6)).copy_from(&(-props.mass_matrix()));
    d.view_mut((18, 12), (6, 6)).copy_from(&(-gyric_matrix(props, v_bar, w_bar)));
    let (p, c) = (format!("{name}.P"), format!("{name}.C"));
    let inputs = [wrench_channels(&c), motion_channels(&p)].concat();
    let outputs = [motion_channels(&c), wrench_channels(&p)].concat();
    Ok(TitopBlock {
        name: name.to_string(),
        ss: StateSpace::static_gain(d, inputs, outputs)?,
        ports: vec![Port::new(p, PortRole::Parent, name), Port::new(c, PortRole::Child, name)],
        components: 1,
    })
}

/// Keeps only the P port of a static rigid block (tip-mass use).
pub fn reduce_one_port(block: &TitopBlock) -> Result<TitopBlock> {
    let ss = &block.ss;
    if ss.nstates() != 0 || ss.ninputs() != 24 || ss.noutputs() != 24 || block.ports.len() != 2 {
        return Err(Error::Dimension(format!(
            "one-port reduction needs a static 24×24 two-port block, got {} states, {}×{} channels, {} ports",
            ss.nstates(),
            ss.noutputs(),
            ss.ninputs(),
            block.ports.len()
        )));
    }
    let rows: Vec<usize> = (18..24).collect();
    let cols: Vec<usize> = (6..24).collect();
    let d = ss.d.select_rows(&rows).select_columns(&cols);
    let port = block.ports.iter().find(|p| p.role == PortRole::Parent).cloned().ok_or_else(|| {
        Error::Dimension("block has no parent-side port".into())
    })?;
    let inputs = cols.iter().map(|&i| ss.inputs[i].clone()).collect();
    let outputs = rows.iter().map(|&i| ss.outputs[i].clone()).collect();
    Ok(TitopBlock {
        name: block.name.clone(),
        ss: StateSpace::static_gain(d, inputs, outputs)?,
        ports: vec![port],
        components: block.components,
    })
}

/// Appendage attachment point on the main body, given from B in the body frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MainBodyPort {
    pub name: String,
    pub point: Vector3<f64>,
}

/// Kinematic coupling `H = diag(skew(ω̄), skew(ω̄))` for a spin about z.
pub fn kinematic_coupling(w_bar: &Vector3<f64>) -> Matrix6<f64> {
    let mut h = Matrix6::zeros();
    h.fixed_view_mut::<3, 3>(0, 0).copy_from(&skew(w_bar));
    h.fixed_view_mut::<3, 3>(3, 3).copy_from(&skew(w_bar));
    h
}

fn check_spin_axis(w_bar: &Vector3<f64>) -> Result<()> {
    let tol = 1e-12 * w_bar.norm().max(1.0);
    if w_bar.x.abs() > tol || w_bar.y.abs() > tol {
        return Err(Error::UnsupportedEquilibrium(format!(
            "main-body spin must be about z, got [{}, {}, {}]",
            w_bar.x, w_bar.y, w_bar.z
        )));
    }
    Ok(())
}

/// Warns when z is the intermediate principal axis (unstable steady spin).
pub fn inertia_ordering_warning(j: &Matrix3<f64>) -> Option<String> {
    let (jx, jy, jz) = (j[(0, 0)], j[(1, 1)], j[(2, 2)]);
    let intermediate = (jz - jx) * (jz - jy) < 0.0;
    intermediate.then(|| format!("spin axis z is the intermediate axis of inertia ({jx}, {jy}, {jz})"))
}

/// Twelfth-order model of the main body at reference point B (`props.ap` runs
/// from its center of mass to B), spinning at `ω̄ = [0, 0, Ω]`.
///
/// States `[δv, δω, δx, δΘ]`. Inputs: external wrench at B (`name.ext`) and one
/// wrench per appendage port. Outputs: the motion at B (`name.B`) and at each
/// port, both in the body frame.
pub fn build_main_body(
    name: &str,
    props: &RigidBodyProperties,
    ports: &[MainBodyPort],
    omega_bar: &Vector3<f64>,
) -> Result<TitopBlock> {
    props.validate()?;
    if !(props.m > 0.0) {
        return Err(Error::InvalidParameter("main body mass must be positive".into()));
    }
    check_spin_axis(omega_bar)?;
    if props.j_a == Matrix3::zeros() {
        return Err(Error::InvalidParameter("main body needs a non-zero inertia".into()));
    }
    let d_b = props.mass_matrix();
    let d_inv = d_b
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular main-body mass matrix".into()))?;
    let x_b = gyric_matrix(props, &Vector3::zeros(), omega_bar);
    let h = kinematic_coupling(omega_bar);

    let np = ports.len();
    let nu = 6 + 6 * np;
    let mut a = DMatrix::zeros(12, 12);
    a.view_mut((0, 0), (6, 6)).copy_from(&(-d_inv * x_b));
    a.view_mut((6, 0), (6, 6)).copy_from(&Matrix6::identity());
    a.view_mut((6, 6), (6, 6)).copy_from(&(-h));
    let mut b = DMatrix::zeros(12, nu);
    b.view_mut((0, 0), (6, 6)).copy_from(&d_inv);
    for (i, p) in ports.iter().enumerate() {
        let t = tau(&(-p.point));
        b.view_mut((0, 6 + 6 * i), (6, 6)).copy_from(&(d_inv * t.transpose()));
    }

    // Motion at B: [accelerations; velocities; positions].
    let mut c_b = DMatrix::zeros(18, 12);
    let mut d_bm = DMatrix::zeros(18, nu);
    c_b.view_mut((0, 0), (6, 12)).copy_from(&a.view((0, 0), (6, 12)));
    d_bm.view_mut((0, 0), (6, nu)).copy_from(&b.view((0, 0), (6, nu)));
    c_b.view_mut((6, 0), (12, 12)).copy_from(&DMatrix::<f64>::identity(12, 12));

    let mut c = DMatrix::zeros(18 * (1 + np), 12);
    let mut d = DMatrix::zeros(18 * (1 + np), nu);
    c.view_mut((0, 0), (18, 12)).copy_from(&c_b);
    d.view_mut((0, 0), (18, nu)).copy_from(&d_bm);
    for (i, p) in ports.iter().enumerate() {
        let u = upsilon(&(-p.point));
        c.view_mut((18 * (i + 1), 0), (18, 12)).copy_from(&(&u * &c_b));
        d.view_mut((18 * (i + 1), 0), (18, nu)).copy_from(&(&u * &d_bm));
    }

    let states = ["v1", "v2", "v3", "w1", "w2", "w3", "x1", "x2", "x3", "th1", "th2", "th3"]
        .iter()
        .map(|s| format!("{name}.{s}"))
        .collect();
    let mut inputs = wrench_channels(&format!("{name}.ext"));
    let mut outputs = motion_channels(&format!("{name}.B"));
    let mut port_list = vec![];
    for p in ports {
        let qualified = format!("{name}.{}", p.name);
        inputs.extend(wrench_channels(&qualified));
        outputs.extend(motion_channels(&qualified));
        port_list.push(Port::new(qualified, PortRole::Child, name));
    }
    let mut ss = StateSpace::new(a, b, c, d, states, inputs, outputs)?;
    ss.energy.push(EnergyGroup {
        family: ModeFamily::Rigid,
        states: (0..6).collect(),
        weight: DMatrix::from_fn(6, 6, |i, j| d_b[(i, j)]),
    });
    Ok(TitopBlock { name: name.to_string(), ss, ports: port_list, components: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_examples() {
        let v = Vector3::new(0.0, 0.0, 1.0);
        assert_eq!(skew(&v) * Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0));
        assert_eq!(skew(&Vector3::zeros()), Matrix3::zeros());
        assert_eq!(skew(&v).transpose(), -skew(&v));
    }

    #[test]
    fn tau_inverse_pair() {
        let pb = Vector3::new(0.3, -1.2, 2.0);
        let prod = tau(&pb) * tau(&(-pb));
        assert!((prod - Matrix6::identity()).abs().max() < 1e-15);
        assert!((tau(&pb).determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dcm_transport_examples() {
        let (w, m) = dcm_transport(&Matrix3::identity()).unwrap();
        assert_eq!(w, Matrix6::identity());
        assert_eq!(m, DMatrix::identity(18, 18));
        let flip = Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0));
        let (w, _) = dcm_transport(&flip).unwrap();
        let out = w * Vector6::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(out, Vector6::new(-1.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert!(dcm_transport(&(Matrix3::identity() * 2.0)).is_err());
    }

    #[test]
    fn point_mass_newton() {
        let props = RigidBodyProperties::point_mass(3.0);
        let blk = build_rigid_titop("m", &props, &Vector3::zeros(), &Vector3::zeros()).unwrap();
        let one = reduce_one_port(&blk).unwrap();
        // δF = −m δv̇, torques zero
        assert_eq!(one.ss.d[(0, 0)], -3.0);
        assert_eq!(one.ss.d.rows(3, 3).abs().max(), 0.0);
        assert!(reduce_one_port(&one).is_err());
    }

    #[test]
    fn lever_arm_propagation() {
        let mut props = RigidBodyProperties::point_mass(1.0);
        props.pc = Vector3::new(2.0, 0.0, 0.0);
        let blk = build_rigid_titop("r", &props, &Vector3::zeros(), &Vector3::zeros()).unwrap();
        // unit δω̇_z at P → δv̇ at C = [0, L, 0]
        let col = blk.ss.input_index("r.P.wdot3").unwrap();
        let acc: Vec<f64> = (0..3).map(|i| blk.ss.d[(i, col)]).collect();
        assert_eq!(acc, vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn centripetal_equilibrium_wrench() {
        let (m, r, om) = (2.0, 3.0, 0.7);
        let props = RigidBodyProperties::point_mass(m);
        let w = equilibrium_wrench(
            &props,
            &Vector3::new(0.0, r * om, 0.0),
            &Vector3::new(0.0, 0.0, om),
            &Vector6::zeros(),
        );
        assert!((w[0] - m * r * om * om).abs() < 1e-12);
        assert!(w.rows(1, 5).abs().max() < 1e-12);
    }

    #[test]
    fn main_body_rejects_off_axis_spin() {
        let mut props = RigidBodyProperties::point_mass(10.0);
        props.j_a = Matrix3::identity();
        let r = build_main_body("hub", &props, &[], &Vector3::new(0.1, 0.0, 1.0));
        assert!(matches!(r, Err(Error::UnsupportedEquilibrium(_))));
    }

    #[test]
    fn intermediate_axis_warning() {
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, 3.0, 2.0));
        assert!(inertia_ordering_warning(&j).is_some());
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 2.0));
        assert!(inertia_ordering_warning(&j).is_none());
    }
}
