//! Labeled linear state-space models and static interconnection.

use nalgebra::{DMatrix, DVector};

use crate::analysis::ModeFamily;
use crate::error::{Error, Result};
use crate::linalg::condition_number;

/// Kinetic-energy weight over a subset of states, used to tag mode families.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGroup {
    pub family: ModeFamily,
    pub states: Vec<usize>,
    pub weight: DMatrix<f64>,
}

/// `ẋ = Ax + Bu`, `y = Cx + Du` with named states and channels.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub energy: Vec<EnergyGroup>,
}

impl StateSpace {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        d: DMatrix<f64>,
        states: Vec<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
    ) -> Result<Self> {
        let (n, m, p) = (states.len(), inputs.len(), outputs.len());
        let ok = a.shape() == (n, n) && b.shape() == (n, m) && c.shape() == (p, n) && d.shape() == (p, m);
        if !ok {
            return Err(Error::Dimension(format!(
                "A{:?} B{:?} C{:?} D{:?} for {n} states, {m} inputs, {p} outputs",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Self { a, b, c, d, states, inputs, outputs, energy: vec![] })
    }

    /// Memoryless map `y = D u`.
    pub fn static_gain(d: DMatrix<f64>, inputs: Vec<String>, outputs: Vec<String>) -> Result<Self> {
        let (p, m) = d.shape();
        Self::new(DMatrix::zeros(0, 0), DMatrix::zeros(0, m), DMatrix::zeros(p, 0), d, vec![], inputs, outputs)
    }

    pub fn nstates(&self) -> usize {
        self.states.len()
    }

    pub fn ninputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn noutputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn input_index(&self, name: &str) -> Result<usize> {
        self.inputs
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::ChannelMismatch(format!("no input named {name}")))
    }

    pub fn output_index(&self, name: &str) -> Result<usize> {
        self.outputs
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::ChannelMismatch(format!("no output named {name}")))
    }

    /// Prefixes every state and channel label with `prefix.`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for s in self.states.iter_mut().chain(self.inputs.iter_mut()).chain(self.outputs.iter_mut()) {
            *s = format!("{prefix}.{s}");
        }
        self
    }

    /// Block-diagonal juxtaposition; channels and states are concatenated.
    pub fn append(&self, other: &Self) -> Self {
        let (n1, n2) = (self.nstates(), other.nstates());
        let (m1, m2) = (self.ninputs(), other.ninputs());
        let (p1, p2) = (self.noutputs(), other.noutputs());
        let mut a = DMatrix::zeros(n1 + n2, n1 + n2);
        let mut b = DMatrix::zeros(n1 + n2, m1 + m2);
        let mut c = DMatrix::zeros(p1 + p2, n1 + n2);
        let mut d = DMatrix::zeros(p1 + p2, m1 + m2);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, n1), (n2, n2)).copy_from(&other.a);
        b.view_mut((0, 0), (n1, m1)).copy_from(&self.b);
        b.view_mut((n1, m1), (n2, m2)).copy_from(&other.b);
        c.view_mut((0, 0), (p1, n1)).copy_from(&self.c);
        c.view_mut((p1, n1), (p2, n2)).copy_from(&other.c);
        d.view_mut((0, 0), (p1, m1)).copy_from(&self.d);
        d.view_mut((p1, m1), (p2, m2)).copy_from(&other.d);
        let mut energy = self.energy.clone();
        energy.extend(other.energy.iter().map(|g| EnergyGroup {
            family: g.family,
            states: g.states.iter().map(|s| s + n1).collect(),
            weight: g.weight.clone(),
        }));
        Self {
            a,
            b,
            c,
            d,
            states: self.states.iter().chain(&other.states).cloned().collect(),
            inputs: self.inputs.iter().chain(&other.inputs).cloned().collect(),
            outputs: self.outputs.iter().chain(&other.outputs).cloned().collect(),
            energy,
        }
    }

    /// Drops inputs (equivalent to holding them at zero).
    pub fn remove_inputs(&self, idx: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.ninputs()).filter(|i| !idx.contains(i)).collect();
        Self {
            a: self.a.clone(),
            b: self.b.select_columns(&keep),
            c: self.c.clone(),
            d: self.d.select_columns(&keep),
            states: self.states.clone(),
            inputs: keep.iter().map(|&i| self.inputs[i].clone()).collect(),
            outputs: self.outputs.clone(),
            energy: self.energy.clone(),
        }
    }

    pub fn select_outputs(&self, idx: &[usize]) -> Self {
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.select_rows(idx),
            d: self.d.select_rows(idx),
            states: self.states.clone(),
            inputs: self.inputs.clone(),
            outputs: idx.iter().map(|&i| self.outputs[i].clone()).collect(),
            energy: self.energy.clone(),
        }
    }

    /// Closes the inputs listed in `closed` with `u_closed = W y` and removes them.
    ///
    /// The algebraic loop is eliminated with a dense solve of `(I − W D_c)`.
    /// Returns the closed model and the condition number of that matrix.
    pub fn close_inputs(&self, closed: &[usize], w: &DMatrix<f64>) -> Result<(Self, f64)> {
        let nc = closed.len();
        if w.shape() != (nc, self.noutputs()) {
            return Err(Error::Dimension(format!(
                "interconnection matrix {:?}, expected ({nc}, {})",
                w.shape(),
                self.noutputs()
            )));
        }
        let open: Vec<usize> = (0..self.ninputs()).filter(|i| !closed.contains(i)).collect();
        let b_c = self.b.select_columns(closed);
        let b_o = self.b.select_columns(&open);
        let d_c = self.d.select_columns(closed);
        let d_o = self.d.select_columns(&open);

        let loop_matrix = DMatrix::identity(nc, nc) - w * &d_c;
        let cond = condition_number(&loop_matrix);
        if !cond.is_finite() || cond > 1e14 {
            return Err(Error::AlgebraicLoop { condition: cond });
        }
        let k = loop_matrix
            .lu()
            .solve(w)
            .ok_or(Error::AlgebraicLoop { condition: f64::INFINITY })?;
        let kc = &k * &self.c;
        let kd = &k * &d_o;
        let out = Self {
            a: &self.a + &b_c * &kc,
            b: &b_o + &b_c * &kd,
            c: &self.c + &d_c * &kc,
            d: &d_o + &d_c * &kd,
            states: self.states.clone(),
            inputs: open.iter().map(|&i| self.inputs[i].clone()).collect(),
            outputs: self.outputs.clone(),
            energy: self.energy.clone(),
        };
        Ok((out, cond))
    }

    /// Output for a given state and input.
    pub fn output(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        &self.c * x + &self.d * u
    }

    /// `[A B; C D]` stacked into one matrix.
    pub fn system_matrix(&self) -> DMatrix<f64> {
        let (n, m, p) = (self.nstates(), self.ninputs(), self.noutputs());
        let mut s = DMatrix::zeros(n + p, n + m);
        s.view_mut((0, 0), (n, n)).copy_from(&self.a);
        s.view_mut((0, n), (n, m)).copy_from(&self.b);
        s.view_mut((n, 0), (p, n)).copy_from(&self.c);
        s.view_mut((n, n), (p, m)).copy_from(&self.d);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrator(name: &str) -> StateSpace {
        StateSpace::new(
            DMatrix::zeros(1, 1),
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::zeros(1, 1),
            vec![format!("{name}.x")],
            vec![format!("{name}.u")],
            vec![format!("{name}.y")],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        let r = StateSpace::new(
            DMatrix::zeros(2, 2),
            DMatrix::zeros(1, 1),
            DMatrix::zeros(1, 2),
            DMatrix::zeros(1, 1),
            vec!["a".into(), "b".into()],
            vec!["u".into()],
            vec!["y".into()],
        );
        assert!(r.is_err());
    }

    #[test]
    fn negative_feedback_on_integrator() {
        let s = integrator("g");
        let (cl, cond) = s.close_inputs(&[0], &DMatrix::from_element(1, 1, -2.0)).unwrap();
        assert_eq!(cl.a[(0, 0)], -2.0);
        assert_eq!(cl.ninputs(), 0);
        assert!((cond - 1.0).abs() < 1e-12);
    }

    #[test]
    fn algebraic_loop_resolution() {
        // y = u + r with u = 0.5 y  →  y = 2 r
        let s = StateSpace::static_gain(
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            vec!["u".into(), "r".into()],
            vec!["y".into()],
        )
        .unwrap();
        let (cl, _) = s.close_inputs(&[0], &DMatrix::from_element(1, 1, 0.5)).unwrap();
        assert!((cl.d[(0, 0)] - 2.0).abs() < 1e-15);
        let singular = s.close_inputs(&[0], &DMatrix::from_element(1, 1, 1.0));
        assert!(matches!(singular, Err(Error::AlgebraicLoop { .. })));
    }

    #[test]
    fn append_is_block_diagonal() {
        let s = integrator("a").append(&integrator("b"));
        assert_eq!(s.nstates(), 2);
        assert_eq!(s.b[(1, 1)], 1.0);
        assert_eq!(s.b[(0, 1)], 0.0);
        assert_eq!(s.input_index("b.u").unwrap(), 1);
    }
}
