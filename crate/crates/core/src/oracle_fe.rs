//! Classical Hermite-cubic finite elements for a rotating cantilever, used as
//! an independent reference for the bending frequencies of `beam` models.

use nalgebra::{DMatrix, Matrix4, Vector4};

use crate::beam::BeamProperties;
use crate::error::{Error, Result};

const GAUSS_X: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GAUSS_W: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

/// Uniform mesh of a clamped beam spinning about an axis at distance `r` from its root.
#[derive(Debug, Clone, PartialEq)]
pub struct FeBeamMesh {
    pub n_elements: usize,
    pub l: f64,
    pub h: f64,
    pub r: f64,
    pub tip_mass: f64,
    pub omega: f64,
    pub rho_s: f64,
    /// Flexural rigidity for the plane of interest, N·m².
    pub ej: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BendingPlane {
    /// Deflection along y, in the spin plane (uses `J_z`).
    InPlane,
    /// Deflection along z (uses `J_y`).
    OutOfPlane,
}

impl FeBeamMesh {
    pub fn new(props: &BeamProperties, plane: BendingPlane, omega: f64, tip_mass: f64, r: f64, n_elements: usize) -> Result<Self> {
        props.validate()?;
        if n_elements == 0 {
            return Err(Error::InvalidParameter("at least one element is required".into()));
        }
        if !(tip_mass >= 0.0) || !r.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParameter("tip mass, offset and spin must be finite, mass non-negative".into()));
        }
        let ej = props.e * if plane == BendingPlane::InPlane { props.jz } else { props.jy };
        Ok(Self {
            n_elements,
            l: props.l,
            h: props.l / n_elements as f64,
            r,
            tip_mass,
            omega,
            rho_s: props.rho * props.s,
            ej,
        })
    }

    /// Centrifugal axial force at abscissa `x` from the root.
    pub fn axial_force(&self, x: f64) -> f64 {
        let l = self.l;
        self.omega.powi(2) * (self.tip_mass * (l + self.r) + self.rho_s * (self.r * (l - x) + (l * l - x * x) / 2.0))
    }

    fn element_stiffness(&self) -> Matrix4<f64> {
        let h = self.h;
        let k = self.ej / h.powi(3);
        Matrix4::new(
            12.0, 6.0 * h, -12.0, 6.0 * h,
            6.0 * h, 4.0 * h * h, -6.0 * h, 2.0 * h * h,
            -12.0, -6.0 * h, 12.0, -6.0 * h,
            6.0 * h, 2.0 * h * h, -6.0 * h, 4.0 * h * h,
        ) * k
    }

    /// `∫ΦΦᵀ` over one element (without ρS).
    fn element_gram(&self) -> Matrix4<f64> {
        let h = self.h;
        Matrix4::new(
            156.0, 22.0 * h, 54.0, -13.0 * h,
            22.0 * h, 4.0 * h * h, 13.0 * h, -3.0 * h * h,
            54.0, 13.0 * h, 156.0, -22.0 * h,
            -13.0 * h, -3.0 * h * h, -22.0 * h, 4.0 * h * h,
        ) * (h / 420.0)
    }

    fn slopes(&self, xi: f64) -> Vector4<f64> {
        let h = self.h;
        Vector4::new(
            (-6.0 * xi + 6.0 * xi * xi) / h,
            1.0 - 4.0 * xi + 3.0 * xi * xi,
            (6.0 * xi - 6.0 * xi * xi) / h,
            -2.0 * xi + 3.0 * xi * xi,
        )
    }

    /// `∫N(x)Φ′Φ′ᵀ` over element `e`.
    fn element_geometric(&self, e: usize) -> Matrix4<f64> {
        let x0 = e as f64 * self.h;
        let mut k = Matrix4::zeros();
        for (g, w) in GAUSS_X.iter().zip(GAUSS_W) {
            let xi = 0.5 * (g + 1.0);
            let d = self.slopes(xi);
            k += d * d.transpose() * (self.axial_force(x0 + xi * self.h) * w * 0.5 * self.h);
        }
        k
    }

    fn scatter(&self, f: impl Fn(usize) -> Matrix4<f64>) -> DMatrix<f64> {
        let n = 2 * (self.n_elements + 1);
        let mut g = DMatrix::zeros(n, n);
        for e in 0..self.n_elements {
            let ke = f(e);
            for i in 0..4 {
                for j in 0..4 {
                    g[(2 * e + i, 2 * e + j)] += ke[(i, j)];
                }
            }
        }
        // clamped root: drop w₀, θ₀
        g.view((2, 2), (n - 2, n - 2)).into_owned()
    }

    pub fn stiffness(&self) -> DMatrix<f64> {
        let k = self.element_stiffness();
        self.scatter(|_| k)
    }

    pub fn geometric_stiffness(&self) -> DMatrix<f64> {
        self.scatter(|e| self.element_geometric(e))
    }

    pub fn mass(&self) -> DMatrix<f64> {
        let m = self.element_gram() * self.rho_s;
        let mut out = self.scatter(|_| m);
        let n = out.nrows();
        out[(n - 2, n - 2)] += self.tip_mass;
        out
    }

    /// In-plane softening `−Ω²(ρS∫ΦΦᵀ + m at the tip deflection)`.
    pub fn softening(&self) -> DMatrix<f64> {
        -self.mass() * self.omega.powi(2)
    }
}

fn generalized_frequencies(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = m.clone().cholesky().ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular mass factor".into()))?;
    let c = &linv * k * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut lam: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    lam.sort_by(f64::total_cmp);
    if let Some(bad) = lam.iter().find(|&&x| x < 0.0) {
        return Err(Error::Domain(format!("negative squared frequency {bad:e} (buckled or over-softened)")));
    }
    Ok(lam.into_iter().map(f64::sqrt).collect())
}

/// Out-of-plane bending frequencies (rad/s), ascending.
pub fn fe_out_of_plane_frequencies(props: &BeamProperties, omega: f64, m: f64, r: f64, n_elements: usize) -> Result<Vec<f64>> {
    let mesh = FeBeamMesh::new(props, BendingPlane::OutOfPlane, omega, m, r, n_elements)?;
    generalized_frequencies(&(mesh.stiffness() + mesh.geometric_stiffness()), &mesh.mass())
}

/// In-plane bending frequencies (rad/s), ascending, including centrifugal softening.
pub fn fe_in_plane_frequencies(props: &BeamProperties, omega: f64, m: f64, r: f64, n_elements: usize) -> Result<Vec<f64>> {
    let mesh = FeBeamMesh::new(props, BendingPlane::InPlane, omega, m, r, n_elements)?;
    generalized_frequencies(&(mesh.stiffness() + mesh.geometric_stiffness() + mesh.softening()), &mesh.mass())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_beam() -> BeamProperties {
        BeamProperties::new(1.0, 1.0, 1.0, 1.0, 0.3, 1.0, 1.0, 2.0)
    }

    #[test]
    fn axial_force_profile() {
        let mesh = FeBeamMesh::new(&unit_beam(), BendingPlane::OutOfPlane, 2.0, 0.5, 0.25, 4).unwrap();
        assert!((mesh.axial_force(1.0) - 4.0 * 0.5 * 1.25).abs() < 1e-14);
        assert!(mesh.axial_force(0.0) > mesh.axial_force(0.5));
    }

    #[test]
    fn geometric_stiffness_is_quadratic_in_spin() {
        let a = FeBeamMesh::new(&unit_beam(), BendingPlane::OutOfPlane, 1.0, 0.3, 0.2, 6).unwrap();
        let b = FeBeamMesh { omega: 3.0, ..a.clone() };
        let d = b.geometric_stiffness() - a.geometric_stiffness() * 9.0;
        assert!(d.abs().max() <= 1e-12 * b.geometric_stiffness().abs().max());
    }

    #[test]
    fn static_cantilever_converged() {
        let f = fe_out_of_plane_frequencies(&unit_beam(), 0.0, 0.0, 0.0, 20).unwrap();
        assert!((f[0] / 3.516_015_3 - 1.0).abs() < 1e-5);
        assert!((f[1] / 22.034_492 - 1.0).abs() < 1e-4);
        let g = fe_in_plane_frequencies(&unit_beam(), 0.0, 0.0, 0.0, 20).unwrap();
        assert_eq!(f, g);
    }
}
