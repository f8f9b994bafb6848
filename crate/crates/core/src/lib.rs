//! Holographic stabilizer subsystem codes built from perfect-tensor networks
//! on hyperbolic tilings.
//!
//! The crate is organised bottom-up:
//!
//! * [`symplectic`]: Pauli operators and GF(2) echelon forms, including the
//!   support-restricted cleaning primitive everything else relies on.
//! * [`tiling`]: layered `{n,k}` tilings generated by vertex replacement rules.
//! * [`network`]: stabilizer tensors, dense perfectness checks and contraction
//!   of a tiling into a [`code::SubsystemCode`].
//! * [`regions`]: correctability properties, entanglement wedges and
//!   complementary recovery.
//! * [`metrics`]: distance, price and tripartition searches.
//! * [`hierarchy`]: logical actions of Clifford layouts, spread,
//!   Clifford-hierarchy certificates and replacement pushing.
//!
//! Scans over regions and layouts run on rayon when the `parallel` feature is
//! enabled (the default) and sequentially otherwise.

pub mod code;
pub mod dense;
pub mod error;
pub mod hierarchy;
pub mod metrics;
pub mod network;
pub mod par;
pub mod region;
pub mod regions;
pub mod sites;
pub mod symplectic;
pub mod tiling;

pub use code::SubsystemCode;
pub use error::{Error, Result};
pub use region::Region;
pub use sites::SiteSet;
pub use symplectic::{Pauli, PauliBasis};
pub use tiling::{Schlafli, Tiling};
