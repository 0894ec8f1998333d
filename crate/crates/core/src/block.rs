//! Two-port blocks: a state-space model whose channels are grouped into ports.
//!
//! A parent-side port `P` takes an 18-component motion from the parent and
//! returns the 6-component wrench the block applies on it. A child-side port
//! `C` takes the wrench applied by a child and returns the motion of that point.

use crate::error::{Error, Result};
use crate::ss::StateSpace;

/// Motion vector components: accelerations, velocities, positions/attitudes.
pub const MOTION_LABELS: [&str; 18] = [
    "vdot1", "vdot2", "vdot3", "wdot1", "wdot2", "wdot3", "v1", "v2", "v3", "w1", "w2", "w3", "x1", "x2", "x3",
    "th1", "th2", "th3",
];

/// Wrench components: forces then torques.
pub const WRENCH_LABELS: [&str; 6] = ["F1", "F2", "F3", "T1", "T2", "T3"];

pub fn motion_channels(port: &str) -> Vec<String> {
    MOTION_LABELS.iter().map(|s| format!("{port}.{s}")).collect()
}

pub fn wrench_channels(port: &str) -> Vec<String> {
    WRENCH_LABELS.iter().map(|s| format!("{port}.{s}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortRole {
    /// Motion in, wrench out.
    Parent,
    /// Wrench in, motion out.
    Child,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortStatus {
    Open,
    Connected,
    Clamped,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Port {
    /// Qualified name, e.g. `boom1.C`.
    pub name: String,
    pub role: PortRole,
    /// Frame in which the port channels are expressed.
    pub frame: String,
    pub status: PortStatus,
}

impl Port {
    pub fn new(name: impl Into<String>, role: PortRole, frame: impl Into<String>) -> Self {
        Self { name: name.into(), role, frame: frame.into(), status: PortStatus::Open }
    }

    pub fn motion(&self) -> Vec<String> {
        motion_channels(&self.name)
    }

    pub fn wrench(&self) -> Vec<String> {
        wrench_channels(&self.name)
    }

    /// Input channel names of this port.
    pub fn inputs(&self) -> Vec<String> {
        match self.role {
            PortRole::Parent => self.motion(),
            PortRole::Child => self.wrench(),
        }
    }

    pub fn outputs(&self) -> Vec<String> {
        match self.role {
            PortRole::Parent => self.wrench(),
            PortRole::Child => self.motion(),
        }
    }
}

/// Labeled state-space model with its port table.
#[derive(Debug, Clone, PartialEq)]
pub struct TitopBlock {
    pub name: String,
    pub ss: StateSpace,
    pub ports: Vec<Port>,
    /// Number of elementary blocks merged into this one.
    pub components: usize,
}

impl TitopBlock {
    pub fn port(&self, name: &str) -> Result<&Port> {
        self.ports
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::ChannelMismatch(format!("block {} has no port {name}", self.name)))
    }

    fn port_mut(&mut self, name: &str) -> Result<&mut Port> {
        let block = self.name.clone();
        self.ports
            .iter_mut()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::ChannelMismatch(format!("block {block} has no port {name}")))
    }

    pub fn open_ports(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.status == PortStatus::Open)
    }

    /// Inputs still present in the model; closed channels are removed.
    pub fn open_inputs(&self) -> usize {
        self.ss.ninputs()
    }

    /// Outputs of ports still open.
    pub fn open_outputs(&self) -> usize {
        self.open_ports().map(|p| p.outputs().len()).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.open_ports().next().is_none()
    }

    pub(crate) fn set_status(&mut self, port: &str, status: PortStatus) -> Result<()> {
        let p = self.port_mut(port)?;
        if p.status != PortStatus::Open {
            return Err(Error::DoubleClosure(port.to_string()));
        }
        p.status = status;
        Ok(())
    }

    pub fn input_indices(&self, names: &[String]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.ss.input_index(n)).collect()
    }

    pub fn output_indices(&self, names: &[String]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.ss.output_index(n)).collect()
    }
}
