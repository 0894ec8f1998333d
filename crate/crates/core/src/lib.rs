//! Linearized two-input two-output port models of spinning flexible
//! multibody structures: beam and rigid-body blocks, tree assembly by
//! feedback, modal analysis and a finite-element cross-check.

pub mod analysis;
pub mod assembly;
pub mod beam;
pub mod block;
pub mod error;
pub mod linalg;
pub mod oracle_fe;
pub mod rigid;
pub mod shapes;
pub mod ss;

pub use analysis::{modal_frequencies, ModalResult, Mode, ModeFamily};
pub use assembly::{assemble, AssembledModel, AssemblyGraph, NodeKind};
pub use beam::{build_titop_beam, compute_equilibrium, BeamProperties, EquilibriumState, Kinematics, Rayleigh};
pub use block::TitopBlock;
pub use error::{Error, Result};
pub use rigid::{build_main_body, build_rigid_titop, MainBodyPort, RigidBodyProperties};
pub use ss::StateSpace;
