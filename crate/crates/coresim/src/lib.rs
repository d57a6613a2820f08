//! Desk-scale simulation of an NWDAF-enhanced 5G core.
//!
//! The crate wires together:
//! - simulated AMF and SMF network functions with a standards-style event
//!   exposure service (subscribe / notify / unsubscribe),
//! - an NRF-style service registry and a request/response transport with an
//!   in-process binding (deterministic) and a TCP binding (HTTP/1.1),
//! - a multi-cell RAN with a linear signal model and hysteresis handovers,
//! - an activity-based mobility model driving UE attach/detach and movement,
//! - an NWDAF that subscribes to core events, persists them as NDJSON and
//!   computes mobility/session analytics,
//! - a scenario engine that runs the whole testbed on a simulated clock.
//!
//! Everything on the simulation path is deterministic: a fixed scenario and
//! seed produce byte-identical event logs on the in-process transport.

pub mod domain;
pub mod engine;
pub mod mobility;
pub mod nf;
pub mod nwdaf;
pub mod ran;
pub mod scenario;
pub mod transport;
