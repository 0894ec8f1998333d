//! Quintic shape functions for clamped-root beam elements and exact
//! integration of the polynomial integrands built from them.
//!
//! Coefficients are stored in ascending powers of `x`, so `c[k]` multiplies `x^k`.

use nalgebra::{DMatrix, Matrix4, Vector4};

use crate::error::{Error, Result};

/// Real polynomial in monomial basis, ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        let mut p = Self { coefficients };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coefficients: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(k: usize, c: f64) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn trim(&mut self) {
        while matches!(self.coefficients.last(), Some(c) if *c == 0.0) {
            self.coefficients.pop();
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut v = Vec::with_capacity(self.coefficients.len() + 1);
        v.push(0.0);
        v.extend(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k as f64 + 1.0)),
        );
        Self::new(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        let v = (0..n)
            .map(|k| {
                self.coefficients.get(k).copied().unwrap_or(0.0)
                    + other.coefficients.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Self::new(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0.0; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * s).collect())
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let p = self.antiderivative();
        p.eval(b) - p.eval(a)
    }
}

/// Exact value of `∫_a^b x^w p(x) q(x) dx`.
pub fn integrate_product(p: &Polynomial, q: &Polynomial, weight_power: usize, a: f64, b: f64) -> f64 {
    p.mul(q)
        .mul(&Polynomial::monomial(weight_power, 1.0))
        .integrate(a, b)
}

/// Matrix whose entries are polynomials in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Polynomial::zero(); rows * cols] }
    }

    pub fn from_constant(m: &DMatrix<f64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, Polynomial::constant(m[(i, j)]));
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.data[i * self.cols + j] = p;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "polynomial matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_const(&self, m: &DMatrix<f64>) -> Self {
        self.mul(&Self::from_constant(m))
    }

    pub fn eval(&self, x: f64) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(x))
    }

    /// Entrywise `∫_a^b x^w P(x) dx`.
    pub fn integrate(&self, weight_power: usize, a: f64, b: f64) -> DMatrix<f64> {
        let w = Polynomial::monomial(weight_power, 1.0);
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(&w).integrate(a, b))
    }
}

/// Bending, traction and torsion bases of one element of length `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeBasis {
    pub l: f64,
    pub phi_y: [Polynomial; 4],
    pub phi_z: [Polynomial; 4],
    pub tau: Polynomial,
    pub sigma: Polynomial,
}

/// Builds the four quintic bending functions (root curvature, tip deflection,
/// tip slope, tip curvature) together with linear traction and torsion modes.
pub fn make_shape_basis(l: f64) -> Result<ShapeBasis> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidParameter(format!("element length must be positive, got {l}")));
    }
    let (l2, l3, l4, l5) = (l * l, l * l * l, l.powi(4), l.powi(5));
    let phi_y = [
        Polynomial::new(vec![0.0, 0.0, 0.5, -1.5 / l, 1.5 / l2, -0.5 / l3]),
        Polynomial::new(vec![0.0, 0.0, 0.0, 10.0 / l3, -15.0 / l4, 6.0 / l5]),
        Polynomial::new(vec![0.0, 0.0, 0.0, -4.0 / l2, 7.0 / l3, -3.0 / l4]),
        Polynomial::new(vec![0.0, 0.0, 0.0, 0.5 / l, -1.0 / l2, 0.5 / l3]),
    ];
    let linear = Polynomial::new(vec![0.0, 1.0 / l]);
    Ok(ShapeBasis {
        l,
        phi_z: phi_y.clone(),
        phi_y,
        tau: linear.clone(),
        sigma: linear,
    })
}

impl ShapeBasis {
    fn eval4(p: &[Polynomial; 4], x: f64) -> Vector4<f64> {
        Vector4::new(p[0].eval(x), p[1].eval(x), p[2].eval(x), p[3].eval(x))
    }

    fn derive4(p: &[Polynomial; 4], order: usize) -> [Polynomial; 4] {
        let mut out = p.clone();
        for _ in 0..order {
            out = [
                out[0].derivative(),
                out[1].derivative(),
                out[2].derivative(),
                out[3].derivative(),
            ];
        }
        out
    }

    /// `d^order Φ_y / dx^order`, as polynomials.
    pub fn phi_y_derivative(&self, order: usize) -> [Polynomial; 4] {
        Self::derive4(&self.phi_y, order)
    }

    pub fn phi_z_derivative(&self, order: usize) -> [Polynomial; 4] {
        Self::derive4(&self.phi_z, order)
    }

    pub fn phi(&self, x: f64) -> Vector4<f64> {
        Self::eval4(&self.phi_y, x)
    }

    pub fn dphi(&self, x: f64) -> Vector4<f64> {
        Self::eval4(&self.phi_y_derivative(1), x)
    }

    pub fn ddphi(&self, x: f64) -> Vector4<f64> {
        Self::eval4(&self.phi_y_derivative(2), x)
    }

    /// `∫_0^l x^w Φ^(d1) Φ^(d2)ᵀ dx`
    pub fn gram(&self, d1: usize, d2: usize, weight_power: usize) -> Matrix4<f64> {
        let a = self.phi_y_derivative(d1);
        let b = self.phi_y_derivative(d2);
        let mut g = Matrix4::from_fn(|i, j| integrate_product(&a[i], &b[j], weight_power, 0.0, self.l));
        if d1 == d2 {
            for i in 0..4 {
                for j in 0..i {
                    g[(i, j)] = g[(j, i)];
                }
            }
        }
        g
    }

    /// `E(x) = ∫_0^x Φ′Φ′ᵀ dr` as a 4×4 polynomial matrix.
    pub fn e_poly(&self) -> PolyMatrix {
        let d = self.phi_y_derivative(1);
        let mut out = PolyMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                out.set(i, j, d[i].mul(&d[j]).antiderivative());
            }
        }
        out
    }

    pub fn e_at(&self, x: f64) -> Matrix4<f64> {
        let m = self.e_poly().eval(x);
        Matrix4::from_fn(|i, j| m[(i, j)])
    }

    /// `E^{yz}(x)` padded to the 10 elastic coordinates `[q_y, q_z, Δu, Δφ]`.
    pub fn e_yz_poly(&self) -> PolyMatrix {
        let e = self.e_poly();
        let mut out = PolyMatrix::zeros(10, 10);
        for off in [0, 4] {
            for i in 0..4 {
                for j in 0..4 {
                    out.set(off + i, off + j, e.get(i, j).clone());
                }
            }
        }
        out
    }
}

/// `K_b = EJ ∫_0^l Φ″Φ″ᵀ dx`.
pub fn stiffness_integral_matrix(basis: &ShapeBasis, ej: f64) -> Result<Matrix4<f64>> {
    if !(ej > 0.0) || !ej.is_finite() {
        return Err(Error::InvalidParameter(format!("flexural rigidity must be positive, got {ej}")));
    }
    Ok(basis.gram(2, 2, 0) * ej)
}

/// Geometric-stiffness integrals of `E^{yz}`, without the `ρS` factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricIntegrals {
    /// `∫_0^l E^{yz}(x) dx`
    pub e_i: DMatrix<f64>,
    /// `∫_0^l x E^{yz}(x) dx`
    pub e_ix: DMatrix<f64>,
    /// `E^{yz}(l)`
    pub e_l: DMatrix<f64>,
    poly: PolyMatrix,
}

impl GeometricIntegrals {
    pub fn e_yz(&self, x: f64) -> DMatrix<f64> {
        self.poly.eval(x)
    }
}

pub fn geometric_integral_family(basis: &ShapeBasis) -> GeometricIntegrals {
    let poly = basis.e_yz_poly();
    GeometricIntegrals {
        e_i: poly.integrate(0, 0.0, basis.l),
        e_ix: poly.integrate(1, 0.0, basis.l),
        e_l: poly.eval(basis.l),
        poly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_arithmetic() {
        let p = Polynomial::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative().coefficients(), &[2.0, 6.0]);
        assert!((p.integrate(0.0, 1.0) - 3.0).abs() < 1e-15);
        assert_eq!(Polynomial::new(vec![1.0, 0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn product_integrals() {
        let one = Polynomial::constant(1.0);
        let x = Polynomial::monomial(1, 1.0);
        assert!((integrate_product(&one, &one, 0, 0.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((integrate_product(&x, &x, 1, 0.0, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_length() {
        assert!(make_shape_basis(0.0).is_err());
        assert!(make_shape_basis(-1.0).is_err());
        assert!(make_shape_basis(f64::NAN).is_err());
    }

    #[test]
    fn first_function_vanishes_at_unit_tip() {
        let b = make_shape_basis(1.0).unwrap();
        assert_eq!(b.phi_y[0].coefficients(), &[0.0, 0.0, 0.5, -1.5, 1.5, -0.5]);
        assert!(b.phi_y[0].eval(1.0).abs() < 1e-15);
        let b2 = make_shape_basis(2.0).unwrap();
        assert!((b2.phi_y[1].eval(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stiffness_is_linear_in_rigidity() {
        let b = make_shape_basis(3.0).unwrap();
        let k1 = stiffness_integral_matrix(&b, 1.5).unwrap();
        let k2 = stiffness_integral_matrix(&b, 3.0).unwrap();
        assert_eq!(k1, k1.transpose());
        assert!((k2 - k1 * 2.0).abs().max() < 1e-12 * k2.abs().max());
        assert!(stiffness_integral_matrix(&b, 0.0).is_err());
    }
}
