//! Serialized artifacts. JSON numbers use the shortest representation that
//! parses back to the same `f64`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use titop::analysis::{CampbellCurve, Gain};
use titop::assembly::{AssembledModel, AssemblyGraph, DeltaStructure};
use titop::ModalResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub re: f64,
    pub im: f64,
    /// rad/s
    pub frequency: f64,
    pub damping_ratio: f64,
    pub family: String,
    /// In-plane, out-of-plane, traction, torsion, rigid.
    pub energy: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalReport {
    pub scenario: String,
    pub spin: f64,
    pub states: usize,
    pub modes: Vec<ModeRecord>,
}

impl ModalReport {
    pub fn new(scenario: &str, spin: f64, states: usize, r: &ModalResult) -> Self {
        Self {
            scenario: scenario.into(),
            spin,
            states,
            modes: r
                .modes
                .iter()
                .map(|m| ModeRecord {
                    re: m.eigenvalue.re,
                    im: m.eigenvalue.im,
                    frequency: m.frequency,
                    damping_ratio: m.damping_ratio,
                    family: m.family.label().into(),
                    energy: m.energy,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortWrench {
    pub port: String,
    pub wrench: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub name: String,
    pub x_p: [f64; 3],
    pub v_p: [f64; 3],
    pub omega: [f64; 3],
    /// Wrench applied on the parent at P.
    pub w_p: [f64; 6],
    pub ports: Vec<PortWrench>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_f: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub scenario: String,
    pub spin: f64,
    pub nodes: Vec<NodeReport>,
    pub loop_conditions: Vec<f64>,
}

fn arr<const N: usize>(s: &[f64]) -> [f64; N] {
    std::array::from_fn(|i| s[i])
}

impl EquilibriumReport {
    pub fn new(scenario: &str, spin: f64, graph: &AssemblyGraph, model: &AssembledModel) -> Self {
        let nodes = graph
            .nodes
            .iter()
            .zip(&model.equilibrium)
            .map(|(n, e)| {
                let derived = e.beam.as_ref().and_then(|b| b.derived.as_ref());
                NodeReport {
                    name: n.name.clone(),
                    x_p: arr(e.x_p.as_slice()),
                    v_p: arr(e.v_p.as_slice()),
                    omega: arr(e.omega.as_slice()),
                    w_p: arr(e.w_p.as_slice()),
                    ports: e.port_wrenches.iter().map(|(p, w)| PortWrench { port: p.clone(), wrench: arr(w.as_slice()) }).collect(),
                    q_f: derived.map(|d| d.q_f.iter().copied().collect()),
                    valid: derived.map(|d| d.valid),
                }
            })
            .collect();
        Self { scenario: scenario.into(), spin, nodes, loop_conditions: model.loop_conditions.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub parameter: String,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub scenario: String,
    pub entries: Vec<DeltaEntry>,
    /// Published counts, for comparison only.
    pub reference: Vec<DeltaEntry>,
}

impl DeltaReport {
    pub fn new(scenario: &str, d: &DeltaStructure) -> Self {
        let conv = |v: &[(String, usize)]| {
            v.iter().map(|(p, n)| DeltaEntry { parameter: p.clone(), repetitions: *n }).collect()
        };
        Self { scenario: scenario.into(), entries: conv(&d.entries), reference: conv(&d.reference) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_f: Option<Vec<f64>>,
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

const ORDINALS: [&str; 4] = ["1st", "2nd", "3rd", "4th"];

fn ordinal(i: usize) -> String {
    ORDINALS.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("{}th", i + 1))
}

/// Spin rate column followed by one column per branch, in rad/s.
pub fn campbell_csv(c: &CampbellCurve) -> String {
    let mut s = String::from("Omega");
    for b in &c.branches {
        write!(s, ",{} {}", b.family.label(), ordinal(b.index)).unwrap();
    }
    s.push('\n');
    for (k, om) in c.omega.iter().enumerate() {
        write!(s, "{om:.4}").unwrap();
        for b in &c.branches {
            write!(s, ",{:.6}", b.frequencies[k]).unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn freqresp_csv(omegas: &[f64], gains: &[Gain]) -> String {
    let mut s = String::from("omega,re,im,magnitude\n");
    for (w, g) in omegas.iter().zip(gains) {
        match g {
            Gain::Finite(z) => writeln!(s, "{w:.6e},{:.9e},{:.9e},{:.9e}", z.re, z.im, z.norm()).unwrap(),
            Gain::PoleOnGrid => writeln!(s, "{w:.6e},,,inf").unwrap(),
        }
    }
    s
}
