//! Tree assemblies of two-port blocks: equilibrium propagation, port
//! interconnection through frame changes, boundary closures and parametric
//! model families.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, Matrix3, Vector3, Vector6};

use crate::beam::{build_titop_beam, compute_equilibrium, BeamProperties, EquilibriumState, Kinematics, Rayleigh};
use crate::block::{PortRole, PortStatus, TitopBlock};
use crate::error::{Error, Result};
use crate::rigid::{
    build_main_body, build_rigid_titop, dcm_transport, equilibrium_wrench, reduce_one_port, MainBodyPort,
    RigidBodyProperties,
};

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Spinning hub; its reference point B sits on the spin axis at the origin.
    MainBody { props: RigidBodyProperties, ports: Vec<MainBodyPort> },
    Beam { props: BeamProperties, damping: Option<Rayleigh> },
    /// Two-port rigid appendage.
    Rigid(RigidBodyProperties),
    /// One-port rigid body closing a chain.
    TipMass(RigidBodyProperties),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub name: String,
    pub kind: NodeKind,
}

/// Parent port `port` (local name) feeds the P port of `child`. `dcm` maps
/// child-frame vectors into the parent frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub parent: usize,
    pub port: String,
    pub child: usize,
    pub dcm: Matrix3<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Closure {
    /// Zero motion at the P port of a node.
    Clamp { node: usize },
    /// Zero wrench at a child-side port of a node.
    Free { node: usize, port: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub closures: Vec<Closure>,
    pub root: usize,
    /// Position of the root P point (or B for a main body), root frame.
    pub root_offset: Vector3<f64>,
}

/// Steady state of one node, in its own frame.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEquilibrium {
    pub x_p: Vector3<f64>,
    pub v_p: Vector3<f64>,
    pub omega: Vector3<f64>,
    /// Wrench applied by children on each child-side port.
    pub port_wrenches: Vec<(String, Vector6<f64>)>,
    /// Wrench applied on the parent at P.
    pub w_p: Vector6<f64>,
    pub beam: Option<EquilibriumState>,
}

impl NodeEquilibrium {
    pub fn port_wrench(&self, port: &str) -> Vector6<f64> {
        self.port_wrenches.iter().find(|(p, _)| p == port).map(|(_, w)| *w).unwrap_or_else(Vector6::zeros)
    }
}

impl Default for AssemblyGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl AssemblyGraph {
    pub fn new() -> Self {
        Self { nodes: vec![], edges: vec![], closures: vec![], root: 0, root_offset: Vector3::zeros() }
    }

    pub fn add_node(&mut self, name: impl Into<String>, kind: NodeKind) -> usize {
        self.nodes.push(Node { name: name.into(), kind });
        self.nodes.len() - 1
    }

    pub fn connect(&mut self, parent: usize, port: impl Into<String>, child: usize, dcm: Matrix3<f64>) {
        self.edges.push(Edge { parent, port: port.into(), child, dcm });
    }

    pub fn clamp(&mut self, node: usize) {
        self.closures.push(Closure::Clamp { node });
    }

    pub fn free(&mut self, node: usize, port: impl Into<String>) {
        self.closures.push(Closure::Free { node, port: port.into() });
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    /// Child-side port names of a node.
    fn child_ports(&self, node: usize) -> Vec<String> {
        match &self.nodes[node].kind {
            NodeKind::MainBody { ports, .. } => ports.iter().map(|p| p.name.clone()).collect(),
            NodeKind::Beam { .. } | NodeKind::Rigid(_) => vec!["C".into()],
            NodeKind::TipMass(_) => vec![],
        }
    }

    /// Checks the tree structure and port usage; returns nodes in parent-first order.
    pub fn validate(&self) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        if n == 0 || self.root >= n {
            return Err(Error::Topology("graph has no root node".into()));
        }
        let mut names = self.nodes.iter().map(|x| x.name.as_str()).collect::<Vec<_>>();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Topology("duplicate node names".into()));
        }
        let mut incoming = vec![0usize; n];
        let mut used = vec![];
        for e in &self.edges {
            if e.parent >= n || e.child >= n {
                return Err(Error::Topology("edge refers to a missing node".into()));
            }
            incoming[e.child] += 1;
            if !self.child_ports(e.parent).contains(&e.port) {
                return Err(Error::Topology(format!("node {} has no child port {}", self.nodes[e.parent].name, e.port)));
            }
            if matches!(self.nodes[e.child].kind, NodeKind::MainBody { .. }) {
                return Err(Error::Topology("a main body can only be the root".into()));
            }
            if used.contains(&(e.parent, e.port.clone())) {
                return Err(Error::Topology(format!("port {}.{} used twice", self.nodes[e.parent].name, e.port)));
            }
            used.push((e.parent, e.port.clone()));
        }
        if incoming[self.root] != 0 {
            return Err(Error::Topology("root node has a parent (loop)".into()));
        }
        if let Some(i) = (0..n).find(|&i| i != self.root && incoming[i] != 1) {
            return Err(Error::Topology(format!(
                "node {} has {} parents; only trees are supported",
                self.nodes[i].name, incoming[i]
            )));
        }
        let mut order = vec![];
        let mut queue = VecDeque::from([self.root]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for e in self.edges.iter().filter(|e| e.parent == i) {
                queue.push_back(e.child);
            }
        }
        if order.len() != n {
            return Err(Error::Topology("graph is not connected to the root (loop or orphan)".into()));
        }
        Ok(order)
    }

    fn port_point(&self, node: usize, eq: &NodeEquilibrium, port: &str) -> Vector3<f64> {
        match &self.nodes[node].kind {
            NodeKind::MainBody { ports, .. } => {
                eq.x_p + ports.iter().find(|p| p.name == port).map(|p| p.point).unwrap_or_default()
            }
            NodeKind::Beam { props, .. } => eq.x_p + Vector3::new(props.l, 0.0, 0.0),
            NodeKind::Rigid(props) => eq.x_p + props.pc,
            NodeKind::TipMass(_) => eq.x_p,
        }
    }

    /// Sets the mass of a rigid or tip-mass node.
    pub fn set_mass(&mut self, node: usize, m: f64) -> Result<()> {
        match &mut self.nodes[node].kind {
            NodeKind::Rigid(p) | NodeKind::TipMass(p) => {
                p.m = m;
                Ok(())
            }
            NodeKind::MainBody { props, .. } => {
                props.m = m;
                Ok(())
            }
            NodeKind::Beam { .. } => Err(Error::InvalidParameter("beam mass follows from its properties".into())),
        }
    }

    pub fn mass_of(&self, node: usize) -> Option<f64> {
        match &self.nodes[node].kind {
            NodeKind::Rigid(p) | NodeKind::TipMass(p) => Some(p.m),
            NodeKind::MainBody { props, .. } => Some(props.m),
            NodeKind::Beam { .. } => None,
        }
    }
}

/// Forward pass for velocities, backward pass for steady wrenches.
pub fn propagate_equilibrium(graph: &AssemblyGraph, spin: f64) -> Result<Vec<NodeEquilibrium>> {
    let order = graph.validate()?;
    let n = graph.nodes.len();
    let blank = NodeEquilibrium {
        x_p: Vector3::zeros(),
        v_p: Vector3::zeros(),
        omega: Vector3::zeros(),
        port_wrenches: vec![],
        w_p: Vector6::zeros(),
        beam: None,
    };
    let mut eqs = vec![blank; n];
    let w_root = Vector3::new(0.0, 0.0, spin);
    eqs[graph.root].x_p = graph.root_offset;
    eqs[graph.root].omega = w_root;
    eqs[graph.root].v_p = w_root.cross(&graph.root_offset);

    for &i in &order {
        for e in graph.edges.iter().filter(|e| e.parent == i) {
            let pt = graph.port_point(i, &eqs[i], &e.port);
            let pt_child = e.dcm.transpose() * pt;
            let w_child = e.dcm.transpose() * eqs[i].omega;
            let c = &mut eqs[e.child];
            c.x_p = pt_child;
            c.omega = w_child;
            c.v_p = w_child.cross(&pt_child);
        }
    }

    for &i in order.iter().rev() {
        let mut port_wrenches = vec![];
        for port in graph.child_ports(i) {
            let mut w = Vector6::zeros();
            for e in graph.edges.iter().filter(|e| e.parent == i && e.port == port) {
                let (wmap, _) = dcm_transport(&e.dcm)?;
                w += wmap * eqs[e.child].w_p;
            }
            port_wrenches.push((port, w));
        }
        let e = &mut eqs[i];
        e.port_wrenches = port_wrenches;
        match &graph.nodes[i].kind {
            NodeKind::MainBody { .. } => {}
            NodeKind::Beam { props, .. } => {
                let kin = Kinematics { x_p: e.x_p, theta_p: Vector3::zeros(), v_p: e.v_p, omega_p: e.omega };
                let wc = e.port_wrench("C");
                let st = compute_equilibrium(props, &kin, &wc).map_err(|err| match err {
                    Error::ModelInvalid { reason, q_f } => {
                        Error::ModelInvalid { reason: format!("{}: {reason}", graph.nodes[i].name), q_f }
                    }
                    other => other,
                })?;
                e.w_p = st.derived.as_ref().expect("computed").w_p;
                e.beam = Some(st);
            }
            NodeKind::Rigid(props) => {
                e.w_p = equilibrium_wrench(props, &e.v_p, &e.omega, &e.port_wrench("C"));
            }
            NodeKind::TipMass(props) => {
                e.w_p = equilibrium_wrench(props, &e.v_p, &e.omega, &Vector6::zeros());
            }
        }
    }
    Ok(eqs)
}

/// Closes `parent_port` (child-side) against `child_port` (parent-side):
/// the child receives the parent's motion in its own frame and returns its
/// wrench, transported into the parent frame.
///
/// Returns the composite block and the condition number of the loop matrix.
pub fn connect(
    parent: &TitopBlock,
    parent_port: &str,
    child: &TitopBlock,
    child_port: &str,
    dcm: &Matrix3<f64>,
) -> Result<(TitopBlock, f64)> {
    let pp = parent.port(parent_port)?.clone();
    let cp = child.port(child_port)?.clone();
    if pp.role != PortRole::Child || cp.role != PortRole::Parent {
        return Err(Error::ChannelMismatch(format!(
            "{parent_port} must be a child-side port and {child_port} a parent-side port"
        )));
    }
    if pp.status != PortStatus::Open {
        return Err(Error::DoubleClosure(parent_port.into()));
    }
    if cp.status != PortStatus::Open {
        return Err(Error::DoubleClosure(child_port.into()));
    }
    let (wmap, mmap) = dcm_transport(dcm)?;
    let mmap_t = mmap.transpose();

    let mut merged = TitopBlock {
        name: format!("{}+{}", parent.name, child.name),
        ss: parent.ss.append(&child.ss),
        ports: parent.ports.iter().chain(&child.ports).cloned().collect(),
        components: parent.components + child.components,
    };
    let child_in = merged.input_indices(&cp.inputs())?;
    let parent_in = merged.input_indices(&pp.inputs())?;
    let parent_out = merged.output_indices(&pp.outputs())?;
    let child_out = merged.output_indices(&cp.outputs())?;

    let ny = merged.ss.noutputs();
    let mut w = DMatrix::zeros(24, ny);
    for i in 0..18 {
        for (j, &o) in parent_out.iter().enumerate() {
            w[(i, o)] = mmap_t[(i, j)];
        }
    }
    for i in 0..6 {
        for (j, &o) in child_out.iter().enumerate() {
            w[(18 + i, o)] = wmap[(i, j)];
        }
    }
    let closed: Vec<usize> = child_in.iter().chain(&parent_in).copied().collect();
    let (ss, cond) = merged.ss.close_inputs(&closed, &w)?;
    merged.ss = ss;
    merged.set_status(parent_port, PortStatus::Connected)?;
    merged.set_status(child_port, PortStatus::Connected)?;
    Ok((merged, cond))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Clamp,
    Free,
}

/// Clamp removes the 18 motion inputs of a parent-side port; free removes the
/// 6 wrench inputs of a child-side port.
pub fn apply_boundary(block: &TitopBlock, kind: BoundaryKind, port: &str) -> Result<TitopBlock> {
    let p = block.port(port)?.clone();
    if p.status != PortStatus::Open {
        return Err(Error::DoubleClosure(port.into()));
    }
    let status = match (kind, p.role) {
        (BoundaryKind::Clamp, PortRole::Parent) => PortStatus::Clamped,
        (BoundaryKind::Free, PortRole::Child) => PortStatus::Free,
        _ => {
            return Err(Error::ChannelMismatch(format!(
                "{kind:?} does not apply to {:?}-side port {port}",
                p.role
            )))
        }
    };
    let idx = block.input_indices(&p.inputs())?;
    let mut out = block.clone();
    out.ss = block.ss.remove_inputs(&idx);
    out.set_status(port, status)?;
    Ok(out)
}

/// Assembled model with the equilibrium it was linearized about.
#[derive(Debug, Clone)]
pub struct AssembledModel {
    pub block: TitopBlock,
    pub equilibrium: Vec<NodeEquilibrium>,
    /// Condition numbers of the algebraic loops closed at each edge.
    pub loop_conditions: Vec<f64>,
}

fn build_node_block(node: &Node, eq: &NodeEquilibrium) -> Result<TitopBlock> {
    match &node.kind {
        NodeKind::MainBody { props, ports } => {
            if !(props.m > 0.0) {
                return Err(Error::InvalidParameter("main body mass must be positive".into()));
            }
            build_main_body(&node.name, props, ports, &eq.omega)
        }
        NodeKind::Beam { props, damping } => {
            build_titop_beam(&node.name, props, eq.beam.as_ref().expect("propagated"), *damping)
        }
        NodeKind::Rigid(props) => build_rigid_titop(&node.name, props, &eq.v_p, &eq.omega),
        NodeKind::TipMass(props) => reduce_one_port(&build_rigid_titop(&node.name, props, &eq.v_p, &eq.omega)?),
    }
}

/// Propagates the equilibrium at `spin`, builds every block, closes all edges
/// and applies the boundary closures.
pub fn assemble(graph: &AssemblyGraph, spin: f64) -> Result<AssembledModel> {
    let order = graph.validate()?;
    let eqs = propagate_equilibrium(graph, spin)?;
    let mut composite = build_node_block(&graph.nodes[graph.root], &eqs[graph.root])?;
    let mut conds = vec![];
    for &i in order.iter().skip(1) {
        let e = graph.edges.iter().find(|e| e.child == i).expect("validated tree");
        let child = build_node_block(&graph.nodes[i], &eqs[i])?;
        let parent_port = format!("{}.{}", graph.nodes[e.parent].name, e.port);
        let child_port = format!("{}.P", graph.nodes[i].name);
        let (c, k) = connect(&composite, &parent_port, &child, &child_port, &e.dcm)?;
        composite = c;
        conds.push(k);
    }
    for cl in &graph.closures {
        composite = match cl {
            Closure::Clamp { node } => {
                apply_boundary(&composite, BoundaryKind::Clamp, &format!("{}.P", graph.nodes[*node].name))?
            }
            Closure::Free { node, port } => {
                apply_boundary(&composite, BoundaryKind::Free, &format!("{}.{port}", graph.nodes[*node].name))?
            }
        };
    }
    Ok(AssembledModel { block: composite, equilibrium: eqs, loop_conditions: conds })
}

/// Chain of `elements` equal beam elements, clamped at `[r, 0, 0]`, closed by
/// a point mass (if `tip_mass > 0`) or a free tip.
pub fn cantilever(
    props: &BeamProperties,
    elements: usize,
    r: f64,
    tip_mass: f64,
    damping: Option<Rayleigh>,
) -> Result<AssemblyGraph> {
    if elements == 0 {
        return Err(Error::InvalidParameter("at least one element is required".into()));
    }
    let el = props.with_length(props.l / elements as f64);
    let mut g = AssemblyGraph::new();
    g.root_offset = Vector3::new(r, 0.0, 0.0);
    let mut prev = None;
    for k in 0..elements {
        let i = g.add_node(format!("e{}", k + 1), NodeKind::Beam { props: el.clone(), damping });
        if let Some(p) = prev {
            g.connect(p, "C", i, Matrix3::identity());
        }
        prev = Some(i);
    }
    let last = prev.expect("non-empty");
    g.clamp(0);
    if tip_mass > 0.0 {
        let t = g.add_node("tip", NodeKind::TipMass(RigidBodyProperties::point_mass(tip_mass)));
        g.connect(last, "C", t, Matrix3::identity());
    } else {
        g.free(last, "C");
    }
    Ok(g)
}

/// Flexible appendage mounted on a main-body port.
#[derive(Debug, Clone, PartialEq)]
pub struct Appendage {
    pub name: String,
    pub port: MainBodyPort,
    /// Maps appendage-frame vectors into the main-body frame.
    pub dcm: Matrix3<f64>,
    pub beam: BeamProperties,
    pub elements: usize,
    pub tip: Option<RigidBodyProperties>,
    pub damping: Option<Rayleigh>,
}

/// Main body with beam appendages, each optionally closed by a tip body.
pub fn spacecraft(hub_name: &str, hub: &RigidBodyProperties, appendages: &[Appendage]) -> Result<AssemblyGraph> {
    let mut g = AssemblyGraph::new();
    let ports = appendages.iter().map(|a| a.port.clone()).collect();
    let root = g.add_node(hub_name, NodeKind::MainBody { props: hub.clone(), ports });
    for a in appendages {
        if a.elements == 0 {
            return Err(Error::InvalidParameter(format!("appendage {} has no elements", a.name)));
        }
        let el = a.beam.with_length(a.beam.l / a.elements as f64);
        let mut parent = (root, a.port.name.clone(), a.dcm);
        for k in 0..a.elements {
            let name = if a.elements == 1 { a.name.clone() } else { format!("{}_e{}", a.name, k + 1) };
            let i = g.add_node(name, NodeKind::Beam { props: el.clone(), damping: a.damping });
            g.connect(parent.0, parent.1.clone(), i, parent.2);
            parent = (i, "C".into(), Matrix3::identity());
        }
        match &a.tip {
            Some(t) => {
                let i = g.add_node(format!("{}_tip", a.name), NodeKind::TipMass(t.clone()));
                g.connect(parent.0, parent.1, i, parent.2);
            }
            None => g.free(parent.0, parent.1),
        }
    }
    Ok(g)
}

/// Scalar `nominal·(1 + r·δ)` with normalized `δ ∈ [−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertainScalar {
    pub nominal: f64,
    pub r: f64,
    pub delta: f64,
}

impl UncertainScalar {
    pub fn new(nominal: f64, r: f64) -> Self {
        Self { nominal, r, delta: 0.0 }
    }

    pub fn realize(&self, delta: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&delta) {
            return Err(Error::Domain(format!("|δ| = {} exceeds 1", delta.abs())));
        }
        Ok(self.nominal * (1.0 + self.r * delta))
    }

    pub fn value(&self) -> Result<f64> {
        self.realize(self.delta)
    }
}

/// Block structure of the normalized uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaStructure {
    /// `(parameter, repetitions)`; repetitions are the numerical rank of the
    /// sampled variation of `[A B; C D]`, a lower bound for any realization.
    pub entries: Vec<(String, usize)>,
    /// Published repetition counts for comparison only.
    pub reference: Vec<(String, usize)>,
}

pub fn reference_delta_counts() -> Vec<(String, usize)> {
    vec![
        ("beam+tip A: delta_Omega".into(), 169),
        ("beam+tip A: delta_m".into(), 64),
        ("spacecraft S: delta_Omega".into(), 4),
        ("spacecraft S: delta_m".into(), 5),
        ("spacecraft B: delta_Omega".into(), 8),
    ]
}

type CacheKey = Vec<u64>;

/// Deterministic factory `δ ↦ assembled model` over spin and selected masses.
pub struct ParametricFamily {
    graph: AssemblyGraph,
    spin: UncertainScalar,
    masses: Vec<(usize, UncertainScalar)>,
    cache: Mutex<HashMap<CacheKey, Arc<AssembledModel>>>,
}

impl ParametricFamily {
    pub fn new(graph: AssemblyGraph, spin: UncertainScalar, masses: Vec<(usize, UncertainScalar)>) -> Result<Self> {
        graph.validate()?;
        for (i, _) in &masses {
            if *i >= graph.nodes.len() || graph.mass_of(*i).is_none() {
                return Err(Error::InvalidParameter(format!("node {i} carries no adjustable mass")));
            }
        }
        Ok(Self { graph, spin, masses, cache: Mutex::new(HashMap::new()) })
    }

    pub fn graph(&self) -> &AssemblyGraph {
        &self.graph
    }

    /// Names of the entries of the δ vector.
    pub fn parameter_names(&self) -> Vec<String> {
        std::iter::once("delta_Omega".to_string())
            .chain(self.masses.iter().map(|(i, _)| format!("delta_m_{}", self.graph.nodes[*i].name)))
            .collect()
    }

    pub fn dimension(&self) -> usize {
        1 + self.masses.len()
    }

    /// Realized spin and masses for a normalized δ vector.
    pub fn realize(&self, delta: &[f64]) -> Result<(f64, Vec<f64>)> {
        if delta.len() != self.dimension() {
            return Err(Error::Dimension(format!("δ has {} entries, expected {}", delta.len(), self.dimension())));
        }
        let spin = self.spin.realize(delta[0])?;
        let masses = self
            .masses
            .iter()
            .zip(&delta[1..])
            .map(|((_, u), d)| u.realize(*d))
            .collect::<Result<Vec<_>>>()?;
        Ok((spin, masses))
    }

    /// Model at `δ`; the equilibrium is re-propagated for each new (Ω, m) pair.
    pub fn model(&self, delta: &[f64]) -> Result<Arc<AssembledModel>> {
        let (spin, masses) = self.realize(delta)?;
        let key: CacheKey = std::iter::once(spin.to_bits()).chain(masses.iter().map(|m| m.to_bits())).collect();
        if let Some(m) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(m.clone());
        }
        let mut g = self.graph.clone();
        for ((i, _), m) in self.masses.iter().zip(&masses) {
            g.set_mass(*i, *m)?;
        }
        let model = Arc::new(assemble(&g, spin)?);
        self.cache.lock().expect("cache lock").insert(key, model.clone());
        Ok(model)
    }

    /// Repetition counts from the numerical rank of sampled variations.
    pub fn delta_structure(&self) -> Result<DeltaStructure> {
        let nominal = self.model(&vec![0.0; self.dimension()])?.block.ss.system_matrix();
        let mut entries = vec![];
        for (p, name) in self.parameter_names().into_iter().enumerate() {
            let mut cols = vec![];
            for s in [-1.0, -0.5, 0.5, 1.0] {
                let mut d = vec![0.0; self.dimension()];
                d[p] = s;
                cols.push(self.model(&d)?.block.ss.system_matrix() - &nominal);
            }
            let (r, c) = nominal.shape();
            let mut stacked = DMatrix::zeros(r, c * cols.len());
            for (k, m) in cols.iter().enumerate() {
                stacked.view_mut((0, k * c), (r, c)).copy_from(m);
            }
            let sv = stacked.singular_values();
            let tol = 1e-9 * sv.max();
            let rank = sv.iter().filter(|&&x| x > tol && x > 0.0).count();
            entries.push((name, rank.max(1)));
        }
        Ok(DeltaStructure { entries, reference: reference_delta_counts() })
    }
}

/// Factory plus Δ metadata for a graph with uncertain spin and masses.
pub fn build_parametric_family(
    graph: AssemblyGraph,
    spin: UncertainScalar,
    masses: Vec<(usize, UncertainScalar)>,
) -> Result<(ParametricFamily, DeltaStructure)> {
    let f = ParametricFamily::new(graph, spin, masses)?;
    let d = f.delta_structure()?;
    Ok((f, d))
}

/// Campbell sweep of an assembly over spin rates.
pub fn campbell_sweep(
    graph: &AssemblyGraph,
    grid: &[f64],
    selection: &[(crate::analysis::ModeFamily, usize)],
) -> Result<crate::analysis::CampbellCurve> {
    crate::analysis::campbell_sweep_with(|om| assemble(graph, om).map(|m| m.block.ss), grid, selection)
}
