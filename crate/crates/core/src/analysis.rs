//! Modal analysis, dimensionless frequency ratios, Campbell sweeps and
//! frequency responses.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::beam::BeamProperties;
use crate::error::{Error, Result};
use crate::linalg::{eigen_clusters, eigenvalues, normalize_phase, to_complex, C64};
use crate::ss::StateSpace;

/// Dominant coordinate family of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeFamily {
    InPlane,
    OutOfPlane,
    Traction,
    Torsion,
    Rigid,
    Coupled,
}

impl ModeFamily {
    pub const TAGGED: [ModeFamily; 5] =
        [ModeFamily::InPlane, ModeFamily::OutOfPlane, ModeFamily::Traction, ModeFamily::Torsion, ModeFamily::Rigid];

    pub fn label(&self) -> &'static str {
        match self {
            ModeFamily::InPlane => "In-plane bending",
            ModeFamily::OutOfPlane => "Out-of-plane bending",
            ModeFamily::Traction => "Traction",
            ModeFamily::Torsion => "Torsion",
            ModeFamily::Rigid => "Rigid",
            ModeFamily::Coupled => "Coupled",
        }
    }

    fn slot(&self) -> usize {
        match self {
            ModeFamily::InPlane => 0,
            ModeFamily::OutOfPlane => 1,
            ModeFamily::Traction => 2,
            ModeFamily::Torsion => 3,
            ModeFamily::Rigid => 4,
            ModeFamily::Coupled => 5,
        }
    }
}

/// Share of modal energy a family needs to claim a mode.
pub const CLASSIFICATION_THRESHOLD: f64 = 0.6;

/// Eigenvalue clustering tolerance, relative to the modulus.
const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Mode {
    /// Member with non-negative imaginary part.
    pub eigenvalue: C64,
    /// rad/s
    pub frequency: f64,
    pub damping_ratio: f64,
    pub family: ModeFamily,
    /// Energy fractions ordered as [`ModeFamily::TAGGED`].
    pub energy: [f64; 5],
    pub vector: DVector<C64>,
}

#[derive(Debug, Clone)]
pub struct ModalResult {
    /// All eigenvalues, conjugates included.
    pub eigenvalues: Vec<C64>,
    /// One entry per eigenvalue with non-negative imaginary part, by frequency.
    pub modes: Vec<Mode>,
}

impl ModalResult {
    pub fn family(&self, f: ModeFamily) -> Vec<&Mode> {
        self.modes.iter().filter(|m| m.family == f).collect()
    }

    /// Ascending frequencies of one family, rad/s.
    pub fn frequencies(&self, f: ModeFamily) -> Vec<f64> {
        self.family(f).iter().map(|m| m.frequency).collect()
    }
}

/// Block-diagonal kinetic weight per family, embedded in the full state space.
fn family_weights(ss: &StateSpace) -> Vec<DMatrix<f64>> {
    let n = ss.nstates();
    let mut w = vec![DMatrix::zeros(n, n); 5];
    for g in &ss.energy {
        let slot = g.family.slot();
        if slot >= 5 {
            continue;
        }
        for (a, &i) in g.states.iter().enumerate() {
            for (b, &j) in g.states.iter().enumerate() {
                w[slot][(i, j)] += g.weight[(a, b)];
            }
        }
    }
    w
}

fn quad(v: &DVector<C64>, w: &DMatrix<C64>) -> f64 {
    (v.adjoint() * w * v)[(0, 0)].re
}

/// Splits a degenerate invariant subspace into family-pure vectors.
fn separate_cluster(q: &DMatrix<C64>, weights: &[DMatrix<C64>]) -> Option<DMatrix<C64>> {
    let k = q.ncols();
    let parts: Vec<DMatrix<C64>> = weights.iter().map(|w| q.adjoint() * w * q).collect();
    let total = parts.iter().fold(DMatrix::<C64>::zeros(k, k), |acc, p| acc + p);
    let trace: f64 = (0..k).map(|i| total[(i, i)].re).sum();
    if !(trace > 0.0) {
        return None;
    }
    let reg = total.clone() + DMatrix::<C64>::identity(k, k) * C64::new(1e-12 * trace, 0.0);
    let chol = Cholesky::new(reg)?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse()?;
    let mut f = DMatrix::<C64>::zeros(k, k);
    for (i, p) in parts.iter().enumerate() {
        f += p * C64::new((i + 1) as f64, 0.0);
    }
    let s = &l_inv * f * l_inv.adjoint();
    let s = (&s + s.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(s);
    let y = l_inv.adjoint() * eig.eigenvectors;
    Some(q * y)
}

/// Dense eigen-decomposition of `A`, with modes tagged by dominant kinetic
/// energy over the model's energy groups.
pub fn modal_frequencies(ss: &StateSpace) -> Result<ModalResult> {
    let all = eigenvalues(&ss.a)?;
    let clusters = eigen_clusters(&ss.a, CLUSTER_TOL)?;
    let scale = all.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let rigid_tol = 1e-6 * scale;
    let weights: Vec<DMatrix<C64>> = family_weights(ss).iter().map(to_complex).collect();

    let mut modes = vec![];
    for cl in clusters {
        let k = cl.values.len();
        let vecs = if k > 1 { separate_cluster(&cl.basis, &weights).unwrap_or(cl.basis) } else { cl.basis };
        let mut values = cl.values.clone();
        values.sort_by(|a, b| a.im.total_cmp(&b.im));
        for (j, lam) in values.into_iter().enumerate() {
            let v = normalize_phase(&vecs.column(j).into_owned());
            let mut energy = [0.0; 5];
            for (s, w) in weights.iter().enumerate() {
                energy[s] = quad(&v, w).max(0.0);
            }
            let total: f64 = energy.iter().sum();
            let is_zero = lam.norm() <= rigid_tol;
            if total > 0.0 {
                energy.iter_mut().for_each(|e| *e /= total);
            }
            let family = if is_zero {
                ModeFamily::Rigid
            } else if total > 0.0 {
                let (imax, emax) = energy
                    .iter()
                    .enumerate()
                    .fold((0, -1.0), |acc, (i, &e)| if e > acc.1 { (i, e) } else { acc });
                if emax >= CLASSIFICATION_THRESHOLD {
                    ModeFamily::TAGGED[imax]
                } else {
                    ModeFamily::Coupled
                }
            } else {
                ModeFamily::Coupled
            };
            let norm = lam.norm();
            let frequency = if lam.re.abs() <= 1e-8 * norm { lam.im.abs() } else { norm };
            let damping_ratio = if norm > 0.0 { -lam.re / norm } else { 0.0 };
            modes.push(Mode { eigenvalue: lam, frequency, damping_ratio, family, energy, vector: v });
        }
    }
    modes.sort_by(|a, b| a.frequency.total_cmp(&b.frequency).then(a.family.cmp(&b.family)));
    Ok(ModalResult { eigenvalues: all, modes })
}

/// Spin rate and geometry expressed as dimensionless ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessSetup {
    pub eta_by: f64,
    pub eta_bz: f64,
    pub eta_tx: f64,
    pub eta_rx: f64,
    pub mu: f64,
    pub alpha: f64,
}

/// `√(E J_z / (ρ S l⁴))`: in-plane bending time scale, 1/s.
pub fn bending_scale_y(p: &BeamProperties) -> f64 {
    (p.e * p.jz / (p.rho * p.s * p.l.powi(4))).sqrt()
}

/// `√(E J_y / (ρ S l⁴))`: out-of-plane bending time scale, 1/s.
pub fn bending_scale_z(p: &BeamProperties) -> f64 {
    (p.e * p.jy / (p.rho * p.s * p.l.powi(4))).sqrt()
}

impl DimensionlessSetup {
    pub fn new(props: &BeamProperties, omega: f64, tip_mass: f64, r: f64) -> Self {
        Self {
            eta_by: omega / bending_scale_y(props),
            eta_bz: omega / bending_scale_z(props),
            eta_tx: omega * (props.rho * props.l * props.l / props.e).sqrt(),
            eta_rx: omega * (props.rho * props.l * props.l / props.g).sqrt(),
            mu: tip_mass / props.mass(),
            alpha: r / props.l,
        }
    }
}

/// Frequency ratios per family, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    pub setup: DimensionlessSetup,
    pub in_plane: Vec<f64>,
    pub out_of_plane: Vec<f64>,
    pub traction: Vec<f64>,
    pub torsion: Vec<f64>,
}

/// Nondimensionalizes modal frequencies with the bending, axial and torsional
/// time scales of `props` (the whole beam).
pub fn frequency_ratio(result: &ModalResult, setup: &DimensionlessSetup, props: &BeamProperties) -> RatioTable {
    let by = bending_scale_y(props);
    let bz = bending_scale_z(props);
    let t = (props.rho * props.l * props.l / props.e).sqrt();
    let r = (props.rho * props.l * props.l / props.g).sqrt();
    let scaled = |f: ModeFamily, s: f64| result.frequencies(f).into_iter().map(|w| w * s).collect();
    RatioTable {
        setup: *setup,
        in_plane: scaled(ModeFamily::InPlane, 1.0 / by),
        out_of_plane: scaled(ModeFamily::OutOfPlane, 1.0 / bz),
        traction: scaled(ModeFamily::Traction, t),
        torsion: scaled(ModeFamily::Torsion, r),
    }
}

/// Tracked natural frequency branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub family: ModeFamily,
    /// Rank within the family at the first grid point (0-based).
    pub index: usize,
    /// rad/s, one per retained grid point.
    pub frequencies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampbellCurve {
    pub omega: Vec<f64>,
    pub branches: Vec<Branch>,
    /// Reason the sweep stopped early, if it did.
    pub truncated: Option<String>,
}

fn total_weight(ss: &StateSpace) -> DMatrix<C64> {
    let w = family_weights(ss);
    let sum = w.iter().fold(DMatrix::zeros(ss.nstates(), ss.nstates()), |acc, m| acc + m);
    to_complex(&sum)
}

fn mac(a: &DVector<C64>, b: &DVector<C64>, w: &DMatrix<C64>) -> f64 {
    let ab = (a.adjoint() * w * b)[(0, 0)].norm_sqr();
    let aa = quad(a, w);
    let bb = quad(b, w);
    if aa > 0.0 && bb > 0.0 {
        ab / (aa * bb)
    } else {
        let ab = a.dotc(b).norm_sqr();
        ab / (a.norm_squared() * b.norm_squared())
    }
}

/// Campbell sweep over a model family indexed by spin rate.
///
/// `selection` lists how many of the lowest modes of each family to follow,
/// picked at the first grid point. Branches are continued by maximal weighted
/// eigenvector correlation, ties broken by frequency proximity.
pub fn campbell_sweep_with<F>(build: F, grid: &[f64], selection: &[(ModeFamily, usize)]) -> Result<CampbellCurve>
where
    F: Fn(f64) -> Result<StateSpace> + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty spin grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("spin grid must be strictly increasing".into()));
    }
    let solved: Vec<Result<(StateSpace, ModalResult)>> = grid
        .par_iter()
        .map(|&om| {
            let ss = build(om)?;
            let modal = modal_frequencies(&ss)?;
            Ok((ss, modal))
        })
        .collect();

    let mut omega = vec![];
    let mut truncated = None;
    let mut results = vec![];
    for (om, r) in grid.iter().zip(solved) {
        match r {
            Ok(x) => {
                omega.push(*om);
                results.push(x);
            }
            Err(e) => {
                if results.is_empty() {
                    return Err(e);
                }
                truncated = Some(format!("stopped at Ω = {om}: {e}"));
                break;
            }
        }
    }

    let m0 = &results[0].1;
    let mut branches = vec![];
    let mut vectors = vec![];
    for &(fam, count) in selection {
        for (i, m) in m0.family(fam).into_iter().take(count).enumerate() {
            branches.push(Branch { family: fam, index: i, frequencies: vec![m.frequency] });
            vectors.push(m.vector.clone());
        }
    }

    for (ss, modal) in results.iter().skip(1) {
        let w = total_weight(ss);
        let mut pairs = vec![];
        for (b, v) in vectors.iter().enumerate() {
            let prev = *branches[b].frequencies.last().expect("non-empty");
            for (j, m) in modal.modes.iter().enumerate() {
                // Correlations equal to 1e-6 are settled by frequency proximity.
                let score = (mac(v, &m.vector, &w) * 1e6).round();
                let gap = (m.frequency - prev).abs() / prev.max(f64::MIN_POSITIVE);
                pairs.push((score, gap, b, j));
            }
        }
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
        let mut taken_b = vec![false; vectors.len()];
        let mut taken_m = vec![false; modal.modes.len()];
        let mut assign = vec![usize::MAX; vectors.len()];
        for (_, _, b, j) in pairs {
            if !taken_b[b] && !taken_m[j] {
                taken_b[b] = true;
                taken_m[j] = true;
                assign[b] = j;
            }
        }
        for (b, &j) in assign.iter().enumerate() {
            if j == usize::MAX {
                return Err(Error::Numerical("mode tracking ran out of candidate modes".into()));
            }
            branches[b].frequencies.push(modal.modes[j].frequency);
            vectors[b] = modal.modes[j].vector.clone();
        }
    }
    Ok(CampbellCurve { omega, branches, truncated })
}

/// Complex gain at one frequency, or a marker when `jω` is a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    Finite(C64),
    PoleOnGrid,
}

impl Gain {
    pub fn magnitude(&self) -> f64 {
        match self {
            Gain::Finite(g) => g.norm(),
            Gain::PoleOnGrid => f64::INFINITY,
        }
    }
}

/// `G(jω) = C (jωI − A)⁻¹ B + D` for one input/output pair.
pub fn frequency_response(ss: &StateSpace, input: usize, output: usize, omegas: &[f64]) -> Result<Vec<Gain>> {
    if input >= ss.ninputs() || output >= ss.noutputs() {
        return Err(Error::ChannelMismatch(format!(
            "channel ({output}, {input}) outside {}×{}",
            ss.noutputs(),
            ss.ninputs()
        )));
    }
    let poles = eigenvalues(&ss.a)?;
    let n = ss.nstates();
    let ac = to_complex(&ss.a);
    let b = ss.b.column(input).map(|x| C64::new(x, 0.0));
    let c = ss.c.row(output).map(|x| C64::new(x, 0.0));
    let d = ss.d[(output, input)];
    omegas
        .par_iter()
        .map(|&om| {
            let s = C64::new(0.0, om);
            let near = poles.iter().map(|p| (p - s).norm()).fold(f64::INFINITY, f64::min);
            if near <= 1e-9 * om.abs().max(1e-12) {
                return Ok(Gain::PoleOnGrid);
            }
            if n == 0 {
                return Ok(Gain::Finite(C64::new(d, 0.0)));
            }
            let mut m = -ac.clone();
            for i in 0..n {
                m[(i, i)] += s;
            }
            match m.lu().solve(&b) {
                Some(x) => {
                    let g = (&c * x)[(0, 0)] + d;
                    if g.re.is_finite() && g.im.is_finite() {
                        Ok(Gain::Finite(g))
                    } else {
                        Ok(Gain::PoleOnGrid)
                    }
                }
                None => Ok(Gain::PoleOnGrid),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(k: f64) -> StateSpace {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -k, 0.0]);
        StateSpace::new(
            a,
            DMatrix::from_row_slice(2, 1, &[0.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
            DMatrix::zeros(1, 1),
            vec!["x".into(), "xd".into()],
            vec!["u".into()],
            vec!["y".into()],
        )
        .unwrap()
    }

    #[test]
    fn untagged_models_are_coupled() {
        let r = modal_frequencies(&oscillator(9.0)).unwrap();
        assert_eq!(r.modes.len(), 1);
        assert!((r.modes[0].frequency - 3.0).abs() < 1e-12);
        assert_eq!(r.modes[0].family, ModeFamily::Coupled);
    }

    #[test]
    fn pole_on_grid_marker() {
        let g = frequency_response(&oscillator(4.0), 0, 0, &[1.0, 2.0]).unwrap();
        assert!(matches!(g[0], Gain::Finite(_)));
        assert_eq!(g[1], Gain::PoleOnGrid);
    }

    #[test]
    fn integrator_slope() {
        let ss = StateSpace::new(
            DMatrix::zeros(1, 1),
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::zeros(1, 1),
            vec!["x".into()],
            vec!["u".into()],
            vec!["y".into()],
        )
        .unwrap();
        let g = frequency_response(&ss, 0, 0, &[0.1, 10.0]).unwrap();
        let db = |x: &Gain| 20.0 * x.magnitude().log10();
        assert!(((db(&g[0]) - db(&g[1])) - 40.0).abs() < 0.1);
    }

    #[test]
    fn campbell_rejects_bad_grid() {
        let build = |_: f64| Ok(oscillator(1.0));
        assert!(campbell_sweep_with(build, &[], &[]).is_err());
        assert!(campbell_sweep_with(build, &[1.0, 1.0], &[]).is_err());
    }
}
