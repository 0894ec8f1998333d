//! Spinning Euler–Bernoulli beam element as a two-port block.
//!
//! Quasi-coordinates are ordered `[v_P (3); ω_P (3); q_f (10)]` and elastic
//! coordinates `q_f = [q_y (4); q_z (4); Δu; Δφ]`. Partitions split the 16
//! coordinates as rigid `0..6` and flexible `6..16`.

use nalgebra::{DMatrix, DVector, Matrix3, SVector, Vector3, Vector4, Vector6};

use crate::analysis::ModeFamily;
use crate::block::{motion_channels, wrench_channels, Port, PortRole, TitopBlock};
use crate::error::{Error, Result};
use crate::rigid::{rate_operator, skew, tau};
use crate::shapes::{geometric_integral_family, make_shape_basis, stiffness_integral_matrix, PolyMatrix, Polynomial, ShapeBasis};
use crate::ss::{EnergyGroup, StateSpace};

pub const Q_LABELS: [&str; 10] = ["qy1", "qy2", "qy3", "qy4", "qz1", "qz2", "qz3", "qz4", "du", "dphi"];

/// Uniform beam element data (SI units).
#[derive(Debug, Clone, PartialEq)]
pub struct BeamProperties {
    pub rho: f64,
    pub s: f64,
    pub l: f64,
    pub e: f64,
    pub nu: f64,
    pub g: f64,
    pub jy: f64,
    pub jz: f64,
    pub jpx: f64,
    /// When set, `g` is not tied to `E/(2(1+ν))`.
    pub shear_override: bool,
}

impl BeamProperties {
    /// Shear modulus derived from `E` and `ν`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(rho: f64, s: f64, l: f64, e: f64, nu: f64, jy: f64, jz: f64, jpx: f64) -> Self {
        Self { rho, s, l, e, nu, g: e / (2.0 * (1.0 + nu)), jy, jz, jpx, shear_override: false }
    }

    pub fn with_shear_modulus(mut self, g: f64) -> Self {
        self.g = g;
        self.shear_override = true;
        self
    }

    pub fn with_length(&self, l: f64) -> Self {
        Self { l, ..self.clone() }
    }

    pub fn mass(&self) -> f64 {
        self.rho * self.s * self.l
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("rho", self.rho),
            ("S", self.s),
            ("l", self.l),
            ("E", self.e),
            ("G", self.g),
            ("Jy", self.jy),
            ("Jz", self.jz),
            ("Jpx", self.jpx),
        ];
        for (n, v) in named {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("beam {n} must be positive, got {v}")));
            }
        }
        if !(0.0..0.5).contains(&self.nu) {
            return Err(Error::InvalidParameter(format!("Poisson ratio must be in [0, 0.5), got {}", self.nu)));
        }
        let g_iso = self.e / (2.0 * (1.0 + self.nu));
        if !self.shear_override && (self.g - g_iso).abs() > 1e-9 * self.g {
            return Err(Error::InvalidParameter(format!(
                "G = {} inconsistent with E/(2(1+ν)) = {g_iso}",
                self.g
            )));
        }
        Ok(())
    }
}

/// Steady kinematics of the root point P, expressed in the beam frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub x_p: Vector3<f64>,
    pub theta_p: Vector3<f64>,
    pub v_p: Vector3<f64>,
    pub omega_p: Vector3<f64>,
}

impl Kinematics {
    pub fn rest() -> Self {
        Self { x_p: Vector3::zeros(), theta_p: Vector3::zeros(), v_p: Vector3::zeros(), omega_p: Vector3::zeros() }
    }

    /// Root at `[r, 0, 0]` spinning about z at `omega`.
    pub fn spinning(r: f64, omega: f64) -> Self {
        Self {
            x_p: Vector3::new(r, 0.0, 0.0),
            theta_p: Vector3::zeros(),
            v_p: Vector3::new(0.0, r * omega, 0.0),
            omega_p: Vector3::new(0.0, 0.0, omega),
        }
    }
}

/// Quantities solved by [`compute_equilibrium`].
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedEquilibrium {
    /// Root wrench recomputed from the tip load and rigid inertia terms.
    pub w_p: Vector6<f64>,
    /// Root wrench from the coupled 16-equation solve.
    pub w_p_coupled: Vector6<f64>,
    pub q_f: SVector<f64, 10>,
    pub condition: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumState {
    pub kinematics: Kinematics,
    /// Wrench applied by the child at the tip C.
    pub w_c: Vector6<f64>,
    pub derived: Option<DerivedEquilibrium>,
}

impl EquilibriumState {
    pub fn new(kinematics: Kinematics, w_c: Vector6<f64>) -> Self {
        Self { kinematics, w_c, derived: None }
    }

    pub fn is_valid(&self) -> bool {
        self.derived.as_ref().is_some_and(|d| d.valid)
    }
}

/// Elastic coordinates in named form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedCoords {
    pub q_y: Vector4<f64>,
    pub q_z: Vector4<f64>,
    pub delta_u: f64,
    pub delta_phi: f64,
}

impl GeneralizedCoords {
    pub fn zeros() -> Self {
        Self { q_y: Vector4::zeros(), q_z: Vector4::zeros(), delta_u: 0.0, delta_phi: 0.0 }
    }

    pub fn from_vector(q: &SVector<f64, 10>) -> Self {
        Self {
            q_y: q.fixed_rows::<4>(0).into_owned(),
            q_z: q.fixed_rows::<4>(4).into_owned(),
            delta_u: q[8],
            delta_phi: q[9],
        }
    }

    pub fn to_vector(&self) -> SVector<f64, 10> {
        let mut q = SVector::<f64, 10>::zeros();
        q.fixed_rows_mut::<4>(0).copy_from(&self.q_y);
        q.fixed_rows_mut::<4>(4).copy_from(&self.q_z);
        q[8] = self.delta_u;
        q[9] = self.delta_phi;
        q
    }
}

/// Every constant matrix of the linearized beam model.
///
/// Naming: `m_load`, `j_load`, `c_load` are the rigid-row load terms (6×16,
/// 6×16, 6); `*_left` map the root motion to the tip motion (18×6) and
/// `*_right` map the elastic coordinates to it (18×10).
#[derive(Debug, Clone, PartialEq)]
pub struct BeamMatrixSet {
    pub m_p: DMatrix<f64>,
    pub m_m: DMatrix<f64>,
    pub m_mp: DMatrix<f64>,
    pub m_mpw: DMatrix<f64>,
    pub m_mm: DMatrix<f64>,
    pub j_p: DMatrix<f64>,
    pub k_soft: DMatrix<f64>,
    pub d_soft: DMatrix<f64>,
    pub e_i: DMatrix<f64>,
    pub e_ix: DMatrix<f64>,
    pub e_l: DMatrix<f64>,
    pub m_sigma: f64,
    pub m_sigsig: f64,

    pub m_t: DMatrix<f64>,
    pub k_t: DMatrix<f64>,
    pub g_t: DMatrix<f64>,
    pub k_v: DMatrix<f64>,
    pub c_q: DVector<f64>,
    pub c_qdot: DVector<f64>,
    pub m_load: DMatrix<f64>,
    pub j_load: DMatrix<f64>,
    pub c_load: Vector6<f64>,
    pub n_bar: DMatrix<f64>,
    pub f_c: DMatrix<f64>,
    pub w_c_mat: DMatrix<f64>,
    pub k_c: DMatrix<f64>,
    pub m_left: DMatrix<f64>,
    pub d_left: DMatrix<f64>,
    pub k_left: DMatrix<f64>,
    pub m_right: DMatrix<f64>,
    pub d_right: DMatrix<f64>,
    pub k_right: DMatrix<f64>,
    pub g_vv: DMatrix<f64>,
    pub g_vp: DMatrix<f64>,
    pub g_p: DMatrix<f64>,
    pub tau_bar: DMatrix<f64>,

    /// Assembled 16×16 mass, damping and stiffness.
    pub mass: DMatrix<f64>,
    pub damping: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
}

/// Rigid/flexible partition of a 16-row matrix.
pub struct Partition {
    pub rr: DMatrix<f64>,
    pub rf: DMatrix<f64>,
    pub fr: DMatrix<f64>,
    pub ff: DMatrix<f64>,
}

pub fn partition(m: &DMatrix<f64>) -> Partition {
    let nc = m.ncols();
    Partition {
        rr: m.view((0, 0), (6, 6)).into_owned(),
        rf: m.view((0, 6), (6, nc - 6)).into_owned(),
        fr: m.view((6, 0), (10, 6)).into_owned(),
        ff: m.view((6, 6), (10, nc - 6)).into_owned(),
    }
}

fn dm3(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
}

/// `M₁(x)`, 10×3: columns carry the x, y and z displacement fields.
fn m1_poly(b: &ShapeBasis) -> PolyMatrix {
    let mut m1 = PolyMatrix::zeros(10, 3);
    m1.set(8, 0, b.tau.clone());
    for i in 0..4 {
        m1.set(i, 1, b.phi_y[i].clone());
        m1.set(4 + i, 2, b.phi_z[i].clone());
    }
    m1
}

/// `skew(P₀(x))` with `P₀ = [x, 0, 0]`.
fn skew_p0_poly() -> PolyMatrix {
    let mut s = PolyMatrix::zeros(3, 3);
    s.set(1, 2, Polynomial::monomial(1, -1.0));
    s.set(2, 1, Polynomial::monomial(1, 1.0));
    s
}

/// Builds every matrix of the model at the given steady state.
pub fn build_matrix_set(props: &BeamProperties, eq: &EquilibriumState) -> Result<BeamMatrixSet> {
    props.validate()?;
    let basis = make_shape_basis(props.l)?;
    let l = props.l;
    let rs = props.rho * props.s;
    let mass = props.mass();
    let kin = &eq.kinematics;
    let (w, v, xp) = (kin.omega_p, kin.v_p, kin.x_p);
    let sw = dm3(&skew(&w));
    let sv = dm3(&skew(&v));

    let m1 = m1_poly(&basis);
    let m1t = m1.transpose();
    let sp0 = skew_p0_poly();
    let int = |p: &PolyMatrix| p.integrate(0, 0.0, l) * rs;

    let m_p = int(&sp0);
    let m_m = int(&m1);
    let k_soft = -int(&m1.mul_const(&(&sw * &sw)).mul(&m1t));
    let d_soft = int(&m1.mul_const(&sw).mul(&m1t));
    let m_mpw = int(&m1.mul_const(&sw).mul(&sp0));
    let geo = geometric_integral_family(&basis);
    let e_i = &geo.e_i * rs;
    let e_ix = &geo.e_ix * rs;
    let e_l = geo.e_l.clone();
    let m_sigma = rs * basis.sigma.integrate(0.0, l);
    let m_sigsig = rs * basis.sigma.mul(&basis.sigma).integrate(0.0, l);
    let jps = props.jpx / props.s;

    let mut j_p = -int(&sp0.mul(&sp0));
    j_p[(0, 0)] += mass * jps;
    let mut m_mp = int(&m1.mul(&sp0.transpose()));
    m_mp[(9, 0)] += jps * m_sigma;
    let mut m_mm = int(&m1.mul(&m1t));
    m_mm[(9, 9)] += jps * m_sigsig;

    let mut m_t = DMatrix::zeros(16, 16);
    m_t.view_mut((0, 0), (3, 3)).copy_from(&(DMatrix::identity(3, 3) * mass));
    m_t.view_mut((0, 3), (3, 3)).copy_from(&m_p.transpose());
    m_t.view_mut((0, 6), (3, 10)).copy_from(&m_m.transpose());
    m_t.view_mut((3, 0), (3, 3)).copy_from(&m_p);
    m_t.view_mut((3, 3), (3, 3)).copy_from(&j_p);
    m_t.view_mut((3, 6), (3, 10)).copy_from(&m_mp.transpose());
    m_t.view_mut((6, 0), (10, 3)).copy_from(&m_m);
    m_t.view_mut((6, 3), (10, 3)).copy_from(&m_mp);
    m_t.view_mut((6, 6), (10, 10)).copy_from(&m_mm);

    let mut k_t = DMatrix::zeros(16, 16);
    let kt_ff = &k_soft + &e_i * (w[1] * v[2] - w[2] * v[1]) - &e_ix * (w[2] * w[2] + w[1] * w[1]);
    k_t.view_mut((6, 6), (10, 10)).copy_from(&kt_ff);

    let mut g_t = DMatrix::zeros(16, 16);
    g_t.view_mut((6, 0), (10, 3)).copy_from(&(&m_m * &sw * -2.0));
    g_t.view_mut((6, 3), (10, 3)).copy_from(&(&m_m * &sv * 2.0 + &m_mp * &sw * 2.0 + &m_mpw * 4.0));
    g_t.view_mut((6, 6), (10, 10)).copy_from(&(&e_i * (-2.0 * v[0]) - &d_soft * 2.0));

    let mut k_v = DMatrix::zeros(16, 16);
    let kby = stiffness_integral_matrix(&basis, props.e * props.jz)?;
    let kbz = stiffness_integral_matrix(&basis, props.e * props.jy)?;
    k_v.view_mut((6, 6), (4, 4)).copy_from(&kby);
    k_v.view_mut((10, 10), (4, 4)).copy_from(&kbz);
    k_v[(14, 14)] = props.e * props.s / l;
    k_v[(15, 15)] = props.g * props.jpx / l;

    let vd = DVector::from_column_slice(v.as_slice());
    let wd = DVector::from_column_slice(w.as_slice());
    let mut c_q = DVector::zeros(16);
    c_q.rows_mut(6, 10).copy_from(&(&m_m * sw.transpose() * &vd + &m_mpw * &wd));
    let mut twist = DVector::zeros(6);
    twist.rows_mut(0, 3).copy_from(&vd);
    twist.rows_mut(3, 3).copy_from(&wd);
    let m_top = m_t.rows(0, 6).into_owned();
    let c_qdot = m_top.transpose() * &twist;

    let omega_op = DMatrix::from_fn(6, 6, |i, j| rate_operator(&v, &w)[(i, j)]);
    let mut corr = DMatrix::zeros(6, 16);
    let cross = &sv * mass + dm3(&skew(&Vector3::from_iterator((m_p.transpose() * &wd).iter().copied())));
    corr.view_mut((0, 3), (3, 3)).copy_from(&cross);
    corr.view_mut((3, 0), (3, 3)).copy_from(&cross);
    let mpv = Vector3::from_iterator((&m_p * &vd).iter().copied());
    let jpw = Vector3::from_iterator((&j_p * &wd).iter().copied());
    corr.view_mut((3, 3), (3, 3)).copy_from(&dm3(&(skew(&mpv) + skew(&jpw))));
    let m_load = &omega_op * &m_top - corr;
    let j_load = &omega_op * g_t.columns(0, 6).transpose() * 0.5;
    let c_load_d = &omega_op * c_qdot.rows(0, 6);
    let c_load = Vector6::from_iterator(c_load_d.iter().copied());

    let tb = tau(&Vector3::new(-l, 0.0, 0.0));
    let tau_bar = DMatrix::from_fn(6, 6, |i, j| tb[(i, j)]);
    let phil = basis.phi(l);
    let dphil = basis.dphi(l);
    let taul = basis.tau.eval(l);
    let sigl = basis.sigma.eval(l);
    let m1l_t = m1t.eval(l);
    let mut m2l_t = DMatrix::zeros(3, 10);
    m2l_t[(0, 9)] = sigl;
    for i in 0..4 {
        m2l_t[(1, 4 + i)] = -dphil[i];
        m2l_t[(2, i)] = dphil[i];
    }
    let mut g_vv = DMatrix::zeros(6, 10);
    g_vv.rows_mut(0, 3).copy_from(&m1l_t);
    g_vv.rows_mut(3, 3).copy_from(&m2l_t);

    let mut m3_t = DMatrix::zeros(3, 10);
    let mut gvp_low = DMatrix::zeros(3, 10);
    let mut gp_up = DMatrix::zeros(3, 10);
    for i in 0..4 {
        m3_t[(0, i)] = dphil[i] * (v[1] + l * w[2]);
        m3_t[(0, 4 + i)] = dphil[i] * (v[2] - l * w[1]);
        m3_t[(1, i)] = -dphil[i] * v[0];
        m3_t[(2, 4 + i)] = -dphil[i] * v[0];
        gvp_low[(0, i)] = dphil[i] * w[1];
        gvp_low[(0, 4 + i)] = dphil[i] * w[2];
        gvp_low[(1, i)] = -dphil[i] * w[0];
        gvp_low[(2, 4 + i)] = -dphil[i] * w[0];
        gp_up[(0, i)] = dphil[i] * xp[1];
        gp_up[(0, 4 + i)] = dphil[i] * xp[2];
        gp_up[(1, i)] = -dphil[i] * (xp[0] + l) + phil[i];
        gp_up[(2, 4 + i)] = -dphil[i] * (xp[0] + l) + phil[i];
    }
    m3_t[(1, 9)] = sigl * (v[2] - l * w[1]);
    m3_t[(2, 9)] = -sigl * (v[1] + l * w[2]);
    gvp_low[(1, 9)] = sigl * w[2];
    gvp_low[(2, 9)] = -sigl * w[1];
    gp_up[(0, 8)] = taul;
    gp_up[(1, 9)] = sigl * xp[2];
    gp_up[(2, 9)] = -sigl * xp[1];

    let mut g_vp = DMatrix::zeros(6, 10);
    g_vp.rows_mut(0, 3).copy_from(&(&sw * &m1l_t + &m3_t));
    g_vp.rows_mut(3, 3).copy_from(&gvp_low);
    let mut g_p = DMatrix::zeros(6, 10);
    g_p.rows_mut(0, 3).copy_from(&gp_up);
    g_p.rows_mut(3, 3).copy_from(&m2l_t);

    let mut m_left = DMatrix::zeros(18, 6);
    let mut d_left = DMatrix::zeros(18, 6);
    let mut k_left = DMatrix::zeros(18, 6);
    m_left.rows_mut(0, 6).copy_from(&tau_bar);
    d_left.rows_mut(6, 6).copy_from(&tau_bar);
    k_left.rows_mut(12, 6).copy_from(&DMatrix::<f64>::identity(6, 6));
    let mut m_right = DMatrix::zeros(18, 10);
    let mut d_right = DMatrix::zeros(18, 10);
    let mut k_right = DMatrix::zeros(18, 10);
    m_right.rows_mut(0, 6).copy_from(&g_vv);
    d_right.rows_mut(0, 6).copy_from(&g_vp);
    d_right.rows_mut(6, 6).copy_from(&g_vv);
    k_right.rows_mut(6, 6).copy_from(&g_vp);
    k_right.rows_mut(12, 6).copy_from(&g_p);

    let mut n_bar = DMatrix::zeros(16, 12);
    n_bar.view_mut((0, 0), (6, 6)).copy_from(&(-DMatrix::<f64>::identity(6, 6)));
    n_bar.view_mut((0, 6), (6, 6)).copy_from(&tau_bar.transpose());
    n_bar.view_mut((6, 6), (10, 6)).copy_from(&g_vv.transpose());

    let wc = &eq.w_c;
    let mut k_c = DMatrix::zeros(3, 10);
    for i in 0..4 {
        k_c[(0, i)] = -phil[i] * wc[2];
        k_c[(0, 4 + i)] = phil[i] * wc[1];
        k_c[(1, 4 + i)] = -phil[i] * wc[0];
        k_c[(2, i)] = phil[i] * wc[0];
    }
    k_c[(1, 8)] = taul * wc[2];
    k_c[(2, 8)] = -taul * wc[1];

    let mut w_c_mat = DMatrix::zeros(6, 10);
    for (row, f) in [(0usize, 0usize), (3, 3)] {
        let (a, b, c) = (wc[f], wc[f + 1], wc[f + 2]);
        for i in 0..4 {
            w_c_mat[(row, i)] = -dphil[i] * b;
            w_c_mat[(row, 4 + i)] = -dphil[i] * c;
            w_c_mat[(row + 1, i)] = dphil[i] * a;
            w_c_mat[(row + 2, 4 + i)] = dphil[i] * a;
        }
        w_c_mat[(row + 1, 9)] = -sigl * c;
        w_c_mat[(row + 2, 9)] = sigl * b;
    }

    let mut f_c = DMatrix::zeros(16, 16);
    f_c.view_mut((3, 6), (3, 10)).copy_from(&k_c);
    f_c.view_mut((6, 6), (10, 10)).copy_from(&(&e_l * wc[0]));
    // rotation of the nominal tip wrench into the undeformed frame is a load, moved to the left side
    let extra = n_bar.columns(6, 6) * &w_c_mat;
    let mut f_cols = f_c.columns_mut(6, 10);
    f_cols -= extra;

    let mut damping = (g_t.transpose() - &g_t) * 0.5;
    let mut top = damping.rows_mut(0, 6);
    top += &m_load;
    let mut stiffness = &k_v - &k_t + &f_c;
    let mut top = stiffness.rows_mut(0, 6);
    top += &j_load;

    Ok(BeamMatrixSet {
        m_p,
        m_m,
        m_mp,
        m_mpw,
        m_mm,
        j_p,
        k_soft,
        d_soft,
        e_i,
        e_ix,
        e_l,
        m_sigma,
        m_sigsig,
        mass: m_t.clone(),
        m_t,
        k_t,
        g_t,
        k_v,
        c_q,
        c_qdot,
        m_load,
        j_load,
        c_load,
        n_bar,
        f_c,
        w_c_mat,
        k_c,
        m_left,
        d_left,
        k_left,
        m_right,
        d_right,
        k_right,
        g_vv,
        g_vp,
        g_p,
        tau_bar,
        damping,
        stiffness,
    })
}

/// Equilibrium smallness test on the static elastic deflection.
pub fn equilibrium_is_small(q: &SVector<f64, 10>, l: f64) -> bool {
    q[1].abs() <= 0.01 * l && q[5].abs() <= 0.01 * l && q[8].abs() <= 0.001 * l && q[9].abs() <= 0.01
}

const UNKNOWN_LABELS: [&str; 16] = [
    "W_P.F1", "W_P.F2", "W_P.F3", "W_P.T1", "W_P.T2", "W_P.T3", "qy1", "qy2", "qy3", "qy4", "qz1", "qz2", "qz3",
    "qz4", "du", "dphi",
];

/// Solves the static problem for the root wrench and elastic deflection.
///
/// Returns [`Error::ModelInvalid`] when the deflection is too large for the
/// linearization.
pub fn compute_equilibrium(
    props: &BeamProperties,
    kinematics: &Kinematics,
    w_c: &Vector6<f64>,
) -> Result<EquilibriumState> {
    let mut eq = EquilibriumState::new(*kinematics, *w_c);
    let ms = build_matrix_set(props, &eq)?;
    let wcd = DVector::from_column_slice(w_c.as_slice());

    let mut a = DMatrix::zeros(16, 16);
    a.view_mut((0, 0), (6, 6)).fill_with_identity();
    a.view_mut((0, 6), (6, 10)).copy_from(&ms.j_load.columns(6, 10));
    let kff = (&ms.k_v - &ms.k_t).view((6, 6), (10, 10)).into_owned();
    a.view_mut((6, 6), (10, 10)).copy_from(&kff);
    let mut rhs = DVector::zeros(16);
    rhs.rows_mut(0, 6).copy_from(&(ms.tau_bar.transpose() * &wcd - DVector::from_column_slice(ms.c_load.as_slice())));
    rhs.rows_mut(6, 10).copy_from(&(ms.c_q.rows(6, 10) + ms.n_bar.view((6, 6), (10, 6)) * &wcd));

    // row/column equilibration so the rank test does not depend on units
    let mut scaled = a.clone();
    for mut r in scaled.row_iter_mut() {
        let m = r.amax();
        if m > 0.0 {
            r /= m;
        }
    }
    for mut c in scaled.column_iter_mut() {
        let m = c.amax();
        if m > 0.0 {
            c /= m;
        }
    }
    let svd = scaled.svd(false, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-14 * smax) {
        let vt = svd.v_t.expect("requested");
        let k = svd.singular_values.imin();
        let row = vt.row(k);
        let dir = row.transpose().iamax();
        return Err(Error::RankDeficient { direction: UNKNOWN_LABELS[dir].to_string() });
    }
    let condition = smax / smin;
    let z = a.lu().solve(&rhs).ok_or(Error::RankDeficient { direction: "unknown".into() })?;
    let q_f = SVector::<f64, 10>::from_iterator(z.rows(6, 10).iter().copied());
    let w_p_coupled = Vector6::from_iterator(z.rows(0, 6).iter().copied());
    let w_p = ms.tau_bar.transpose() * &wcd - DVector::from_column_slice(ms.c_load.as_slice());
    let w_p = Vector6::from_iterator(w_p.iter().copied());
    let valid = equilibrium_is_small(&q_f, props.l);
    if !valid {
        return Err(Error::ModelInvalid {
            reason: format!(
                "static deflection too large: |qy2| = {:.3e}, |qz2| = {:.3e}, |Δu| = {:.3e}, |Δφ| = {:.3e} for l = {}",
                q_f[1].abs(),
                q_f[5].abs(),
                q_f[8].abs(),
                q_f[9].abs(),
                props.l
            ),
            q_f: q_f.iter().copied().collect(),
        });
    }
    eq.derived = Some(DerivedEquilibrium { w_p, w_p_coupled, q_f, condition, valid });
    Ok(eq)
}

/// Proportional damping added to the flexible block: `αM_ff + βK_ff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rayleigh {
    pub alpha: f64,
    pub beta: f64,
}

/// 20-state, 24×24 two-port beam model.
///
/// Inputs `[C wrench (6, deformed tip frame); P motion (18)]`, outputs
/// `[C motion (18); P wrench (6)]`, states `[q_f; q̇_f]`.
pub fn build_titop_beam(
    name: &str,
    props: &BeamProperties,
    eq: &EquilibriumState,
    damping: Option<Rayleigh>,
) -> Result<TitopBlock> {
    if !eq.is_valid() {
        return Err(Error::ModelInvalid {
            reason: format!("beam {name}: equilibrium not computed or not valid"),
            q_f: eq.derived.as_ref().map(|d| d.q_f.iter().copied().collect()).unwrap_or_default(),
        });
    }
    let ms = build_matrix_set(props, eq)?;
    let m = partition(&ms.mass);
    let d = partition(&ms.damping);
    let k = partition(&ms.stiffness);
    let mut dff = d.ff.clone();
    if let Some(r) = damping {
        dff += &m.ff * r.alpha + &k.ff * r.beta;
    }
    let mi = m
        .ff
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular flexible mass block".into()))?;
    let n = partition(&ms.n_bar);
    let nff = n.ff.columns(0, 6).into_owned();
    let nrf = n.rf.columns(0, 6).into_owned();
    let nrr_inv = n
        .rr
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular wrench selection block".into()))?;

    let mut lhs_r = DMatrix::zeros(10, 18);
    lhs_r.columns_mut(0, 6).copy_from(&m.fr);
    lhs_r.columns_mut(6, 6).copy_from(&d.fr);
    lhs_r.columns_mut(12, 6).copy_from(&k.fr);
    let mut rhs_rr = DMatrix::zeros(6, 18);
    rhs_rr.columns_mut(0, 6).copy_from(&m.rr);
    rhs_rr.columns_mut(6, 6).copy_from(&d.rr);
    rhs_rr.columns_mut(12, 6).copy_from(&k.rr);
    let mut left = DMatrix::zeros(18, 18);
    left.columns_mut(0, 6).copy_from(&ms.m_left);
    left.columns_mut(6, 6).copy_from(&ms.d_left);
    left.columns_mut(12, 6).copy_from(&ms.k_left);

    let mi_k = &mi * &k.ff;
    let mi_d = &mi * &dff;
    let mi_n = &mi * &nff;
    let mi_l = &mi * &lhs_r;

    let mut a = DMatrix::zeros(20, 20);
    a.view_mut((0, 10), (10, 10)).fill_with_identity();
    a.view_mut((10, 0), (10, 10)).copy_from(&(-&mi_k));
    a.view_mut((10, 10), (10, 10)).copy_from(&(-&mi_d));

    let mut b = DMatrix::zeros(20, 24);
    b.view_mut((10, 0), (10, 6)).copy_from(&mi_n);
    b.view_mut((10, 6), (10, 18)).copy_from(&(-&mi_l));

    let mut c = DMatrix::zeros(24, 20);
    c.view_mut((0, 0), (18, 10)).copy_from(&(-&ms.m_right * &mi_k + &ms.k_right));
    c.view_mut((0, 10), (18, 10)).copy_from(&(-&ms.m_right * &mi_d + &ms.d_right));
    c.view_mut((18, 0), (6, 10)).copy_from(&(-&nrr_inv * (&m.rf * &mi_k - &k.rf)));
    c.view_mut((18, 10), (6, 10)).copy_from(&(-&nrr_inv * (&m.rf * &mi_d - &d.rf)));

    let mut dm = DMatrix::zeros(24, 24);
    dm.view_mut((0, 0), (18, 6)).copy_from(&(&ms.m_right * &mi_n));
    dm.view_mut((0, 6), (18, 18)).copy_from(&(-&ms.m_right * &mi_l + &left));
    dm.view_mut((18, 0), (6, 6)).copy_from(&(&nrr_inv * (&m.rf * &mi_n - &nrf)));
    dm.view_mut((18, 6), (6, 18)).copy_from(&(&nrr_inv * &rhs_rr - &nrr_inv * &m.rf * &mi_l));

    let states = Q_LABELS
        .iter()
        .map(|q| format!("{name}.{q}"))
        .chain(Q_LABELS.iter().map(|q| format!("{name}.{q}_dot")))
        .collect();
    let (p, cport) = (format!("{name}.P"), format!("{name}.C"));
    let inputs = [wrench_channels(&cport), motion_channels(&p)].concat();
    let outputs = [motion_channels(&cport), wrench_channels(&p)].concat();
    let mut ss = StateSpace::new(a, b, c, dm, states, inputs, outputs)?;
    let groups = [
        (ModeFamily::InPlane, 0usize, 4usize),
        (ModeFamily::OutOfPlane, 4, 4),
        (ModeFamily::Traction, 8, 1),
        (ModeFamily::Torsion, 9, 1),
    ];
    for (family, start, len) in groups {
        ss.energy.push(EnergyGroup {
            family,
            states: (10 + start..10 + start + len).collect(),
            weight: m.ff.view((start, start), (len, len)).into_owned(),
        });
    }
    Ok(TitopBlock {
        name: name.to_string(),
        ss,
        ports: vec![
            Port::new(p, PortRole::Parent, name),
            Port::new(cport, PortRole::Child, format!("{name}(C)")),
        ],
        components: 1,
    })
}

/// First-order rotation from the undeformed beam frame to the tip frame.
pub fn deformed_frame_dcm(basis: &ShapeBasis, q: &GeneralizedCoords) -> Matrix3<f64> {
    let dphi = basis.dphi(basis.l);
    let sig = basis.sigma.eval(basis.l);
    let ty = dphi.dot(&q.q_y);
    let tz = dphi.dot(&q.q_z);
    let tx = sig * q.delta_phi;
    Matrix3::new(1.0, -ty, -tz, ty, 1.0, -tx, tz, tx, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boom() -> BeamProperties {
        BeamProperties::new(2700.0, 3.14e-4, 50.0, 7e10, 0.33, 7.85e-9, 7.85e-9, 1.57e-8)
    }

    #[test]
    fn property_validation() {
        assert!(boom().validate().is_ok());
        let mut b = boom();
        b.g *= 1.1;
        assert!(b.validate().is_err());
        assert!(b.clone().with_shear_modulus(b.g).validate().is_ok());
        let mut b = boom();
        b.nu = 0.5;
        assert!(b.validate().is_err());
    }

    #[test]
    fn boom_mass_block() {
        let eq = EquilibriumState::new(Kinematics::rest(), Vector6::zeros());
        let ms = build_matrix_set(&boom(), &eq).unwrap();
        assert!((ms.m_t[(0, 0)] - 42.39).abs() < 1e-10);
        assert_eq!(ms.m_t[(0, 0)], ms.m_t[(2, 2)]);
    }

    #[test]
    fn vanishing_terms_at_rest() {
        let eq = EquilibriumState::new(Kinematics::rest(), Vector6::zeros());
        let ms = build_matrix_set(&boom(), &eq).unwrap();
        assert_eq!(ms.k_t.abs().max(), 0.0);
        assert_eq!(ms.g_t.abs().max(), 0.0);
        assert_eq!(ms.c_q.abs().max(), 0.0);
        assert_eq!(ms.m_load.abs().max(), 0.0);
        assert_eq!(ms.j_load.abs().max(), 0.0);
        assert_eq!(ms.c_load.abs().max(), 0.0);
        assert_eq!(ms.f_c.abs().max(), 0.0);
    }

    #[test]
    fn unloaded_equilibrium_is_zero() {
        let eq = compute_equilibrium(&boom(), &Kinematics::rest(), &Vector6::zeros()).unwrap();
        let d = eq.derived.unwrap();
        assert_eq!(d.w_p, Vector6::zeros());
        assert_eq!(d.q_f, SVector::<f64, 10>::zeros());
    }

    #[test]
    fn titop_dimensions() {
        let eq = compute_equilibrium(&boom(), &Kinematics::rest(), &Vector6::zeros()).unwrap();
        let blk = build_titop_beam("b", &boom(), &eq, None).unwrap();
        assert_eq!(blk.ss.a.shape(), (20, 20));
        assert_eq!(blk.ss.b.shape(), (20, 24));
        assert_eq!(blk.ss.c.shape(), (24, 20));
        assert_eq!(blk.ss.d.shape(), (24, 24));
        let raw = EquilibriumState::new(Kinematics::rest(), Vector6::zeros());
        assert!(build_titop_beam("b", &boom(), &raw, None).is_err());
    }

    #[test]
    fn dcm_examples() {
        let basis = make_shape_basis(3.0).unwrap();
        assert_eq!(deformed_frame_dcm(&basis, &GeneralizedCoords::zeros()), Matrix3::identity());
        let mut q = GeneralizedCoords::zeros();
        q.q_y = Vector4::new(0.0, 0.0, 0.01, 0.0);
        let p = deformed_frame_dcm(&basis, &q);
        assert!((p[(1, 0)] - 0.01).abs() < 1e-15);
    }
}
