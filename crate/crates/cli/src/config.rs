//! Scenario files: a JSON document describing bodies, topology, spin and the
//! analyses to run. Unknown keys are rejected.

use std::collections::HashMap;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use titop::assembly::{AssemblyGraph, NodeKind, UncertainScalar};
use titop::beam::{BeamProperties, Rayleigh};
use titop::rigid::{MainBodyPort, RigidBodyProperties};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub spin: Spin,
    #[serde(default)]
    pub beams: Vec<BeamConfig>,
    #[serde(default)]
    pub bodies: Vec<BodyConfig>,
    pub topology: Topology,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Spin {
    /// rad/s
    pub nominal: f64,
    /// Relative uncertainty `r_Ω`.
    #[serde(default)]
    pub r: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub name: String,
    pub rho: f64,
    pub s: f64,
    pub l: f64,
    pub e: f64,
    pub nu: f64,
    pub jy: f64,
    pub jz: f64,
    pub jpx: f64,
    #[serde(default)]
    pub g: Option<f64>,
    #[serde(default = "one")]
    pub elements: usize,
    #[serde(default)]
    pub damping: Option<Damping>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Damping {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    Main,
    Rigid,
    Tip,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BodyConfig {
    pub name: String,
    pub kind: BodyKind,
    pub mass: f64,
    #[serde(default)]
    pub inertia: Option<[[f64; 3]; 3]>,
    /// From the center of mass to the port P.
    #[serde(default)]
    pub ap: Option<[f64; 3]>,
    /// From P to the child point C (rigid appendages).
    #[serde(default)]
    pub pc: Option<[f64; 3]>,
    /// Child-side ports of a main body.
    #[serde(default)]
    pub ports: Vec<PortConfig>,
    /// Relative mass uncertainty; the mass enters the δ vector when set.
    #[serde(default)]
    pub mass_uncertainty: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PortConfig {
    pub name: String,
    pub point: [f64; 3],
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    pub root: String,
    #[serde(default)]
    pub root_offset: [f64; 3],
    #[serde(default)]
    pub edges: Vec<EdgeConfig>,
    #[serde(default)]
    pub clamp: Vec<String>,
    #[serde(default)]
    pub free: Vec<FreeConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeConfig {
    pub parent: String,
    pub port: String,
    pub child: String,
    /// Maps child-frame vectors into the parent frame; identity when absent.
    #[serde(default)]
    pub dcm: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FreeConfig {
    pub node: String,
    pub port: String,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    Modal,
    Equilibrium,
    Delta,
    Campbell {
        omega_max: f64,
        steps: usize,
        #[serde(default)]
        branches: Vec<BranchConfig>,
    },
    Freqresp {
        channel: String,
        grid: String,
    },
    Table {
        table: String,
        #[serde(default)]
        elements: Option<usize>,
        #[serde(default)]
        oracle: bool,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    pub family: String,
    pub count: usize,
}

/// Configuration problems detected before any computation.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema violation: {0}")]
    Schema(String),
}

pub fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| ConfigError::Schema(e.to_string()))?;
    cfg.check()?;
    Ok(cfg)
}

fn matrix(m: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[i][j])
}

fn vector(v: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

impl BeamConfig {
    pub fn properties(&self) -> BeamProperties {
        let p = BeamProperties::new(self.rho, self.s, self.l, self.e, self.nu, self.jy, self.jz, self.jpx);
        match self.g {
            Some(g) => p.with_shear_modulus(g),
            None => p,
        }
    }
}

impl BodyConfig {
    pub fn properties(&self) -> RigidBodyProperties {
        RigidBodyProperties {
            m: self.mass,
            j_a: self.inertia.as_ref().map(matrix).unwrap_or_else(Matrix3::zeros),
            ap: self.ap.as_ref().map(vector).unwrap_or_default(),
            pc: self.pc.as_ref().map(vector).unwrap_or_default(),
        }
    }
}

/// Graph plus the indices needed to map configuration names onto nodes.
pub struct BuiltGraph {
    pub graph: AssemblyGraph,
    /// Uncertain masses, as `(node, uncertainty)`.
    pub masses: Vec<(usize, UncertainScalar)>,
}

impl ScenarioConfig {
    fn check(&self) -> Result<(), ConfigError> {
        let mut names: Vec<&str> = self.beams.iter().map(|b| b.name.as_str()).collect();
        names.extend(self.bodies.iter().map(|b| b.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ConfigError::Schema(format!("duplicate component name {}", w[0])));
        }
        let known = |n: &str| names.contains(&n);
        if !known(&self.topology.root) {
            return Err(ConfigError::Schema(format!("unknown root {}", self.topology.root)));
        }
        for e in &self.topology.edges {
            for n in [&e.parent, &e.child] {
                if !known(n) {
                    return Err(ConfigError::Schema(format!("edge refers to unknown component {n}")));
                }
            }
        }
        for n in self.topology.clamp.iter().chain(self.topology.free.iter().map(|f| &f.node)) {
            if !known(n) {
                return Err(ConfigError::Schema(format!("boundary refers to unknown component {n}")));
            }
        }
        if let Some(b) = self.beams.iter().find(|b| b.elements == 0) {
            return Err(ConfigError::Schema(format!("beam {} needs at least one element", b.name)));
        }
        if !self.spin.nominal.is_finite() || !self.spin.r.is_finite() {
            return Err(ConfigError::Schema("spin must be finite".into()));
        }
        Ok(())
    }

    /// Expands multi-element beams into chains and builds the assembly graph.
    pub fn graph(&self) -> titop::Result<BuiltGraph> {
        let mut g = AssemblyGraph::new();
        // first and last node of each component
        let mut ends: HashMap<&str, (usize, usize)> = HashMap::new();
        for b in &self.beams {
            let props = b.properties();
            let el = props.with_length(props.l / b.elements as f64);
            let damping = b.damping.map(|d| Rayleigh { alpha: d.alpha, beta: d.beta });
            let mut first = None;
            let mut prev = None;
            for k in 0..b.elements {
                let name = if b.elements == 1 { b.name.clone() } else { format!("{}_e{}", b.name, k + 1) };
                let i = g.add_node(name, NodeKind::Beam { props: el.clone(), damping });
                if let Some(p) = prev {
                    g.connect(p, "C", i, Matrix3::identity());
                }
                first.get_or_insert(i);
                prev = Some(i);
            }
            ends.insert(&b.name, (first.expect("elements > 0"), prev.expect("elements > 0")));
        }
        let mut masses = vec![];
        for b in &self.bodies {
            let props = b.properties();
            let kind = match b.kind {
                BodyKind::Main => NodeKind::MainBody {
                    props,
                    ports: b.ports.iter().map(|p| MainBodyPort { name: p.name.clone(), point: vector(&p.point) }).collect(),
                },
                BodyKind::Rigid => NodeKind::Rigid(props),
                BodyKind::Tip => NodeKind::TipMass(props),
            };
            let i = g.add_node(b.name.clone(), kind);
            ends.insert(&b.name, (i, i));
            if let Some(r) = b.mass_uncertainty {
                masses.push((i, UncertainScalar::new(b.mass, r)));
            }
        }
        g.root = ends[self.topology.root.as_str()].0;
        g.root_offset = vector(&self.topology.root_offset);
        for e in &self.topology.edges {
            let dcm = e.dcm.as_ref().map(matrix).unwrap_or_else(Matrix3::identity);
            g.connect(ends[e.parent.as_str()].1, e.port.clone(), ends[e.child.as_str()].0, dcm);
        }
        for c in &self.topology.clamp {
            g.clamp(ends[c.as_str()].0);
        }
        for f in &self.topology.free {
            g.free(ends[f.node.as_str()].1, f.port.clone());
        }
        g.validate()?;
        Ok(BuiltGraph { graph: g, masses })
    }

    pub fn spin_uncertainty(&self) -> UncertainScalar {
        UncertainScalar::new(self.spin.nominal, self.spin.r)
    }

    pub fn set_mass(&mut self, name: &str, mass: f64) -> Result<(), ConfigError> {
        let b = self
            .bodies
            .iter_mut()
            .find(|b| b.name == name)
            .ok_or_else(|| ConfigError::Schema(format!("no body named {name}")))?;
        b.mass = mass;
        Ok(())
    }
}
