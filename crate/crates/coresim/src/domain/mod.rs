//! Shared vocabulary for the whole testbed: identities, simulated time,
//! the event taxonomy and cell/location geometry.

mod event;
mod time;

pub use event::{
    AmfEventKind, CellId, EventKind, EventPayload, NetworkEvent, Position, RmState, SessionState,
    SmfEventKind, Supi, Violation, CmState,
};
pub use time::{time_category_of, SimClock, SimInstant, TimeCategory};
