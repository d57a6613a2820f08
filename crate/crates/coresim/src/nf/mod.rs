//! Simulated AMF and SMF: UE registration/connection and PDU-session state
//! machines plus the shared event-exposure engine.
//!
//! The two NFs are separate service instances. Cross-NF effects (deregister
//! triggering session release, handover triggering UP path changes) flow
//! through ordinary transport requests to the SMF's internal endpoints, so
//! the call graph stays acyclic: AMF -> SMF -> subscribers.

mod amf;
mod exposure;
mod smf;

use thiserror::Error;

use crate::domain::{CellId, Supi};

pub use amf::{Amf, UeContext};
pub use exposure::{
    ExposureEngine, Subscription, SubscribeError, UnsubscribeError, RETRY_BACKOFF_S,
};
pub use smf::{PduSession, Smf};

/// Errors from the NF state machines.
#[derive(Debug, Error, PartialEq)]
pub enum NfError {
    #[error("ue {0} is already registered")]
    AlreadyRegistered(Supi),
    #[error("ue {0} is not registered")]
    NotRegistered(Supi),
    #[error("handover target equals serving cell {0}")]
    HandoverToServingCell(CellId),
    #[error("ue {0} is already in connectivity state {1}")]
    ConnectivityUnchanged(Supi, &'static str),
    #[error("unknown session '{0}'")]
    UnknownSession(String),
    #[error("session '{0}' is already released")]
    SessionReleased(String),
}
