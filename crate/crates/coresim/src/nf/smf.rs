//! Session management: PDU session lifecycle, traffic volume reporting,
//! QoS changes and UP path changes.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use indexmap::IndexMap;
use serde::Deserialize;

use super::exposure::ExposureEngine;
use super::NfError;
use crate::domain::{CellId, EventPayload, NetworkEvent, SessionState, SimInstant, Supi};
use crate::transport::{Handler, HttpishRequest, HttpishResponse, Method, NfType, Transport};

/// Default 5QI assigned to new sessions.
const DEFAULT_FIVE_QI: u8 = 9;

/// SMF-side session state.
#[derive(Debug, Clone, PartialEq)]
pub struct PduSession {
    pub session_id: String,
    pub supi: Supi,
    pub dnn: String,
    pub state: SessionState,
    pub anchor_cell: CellId,
    pub cumulative_bytes_up: u64,
    pub cumulative_bytes_down: u64,
    pub five_qi: u8,
}

/// The simulated SMF.
///
/// Registration state is pushed by the AMF over the internal
/// `/nsmf-internal/v1/ue-state` endpoint, so session establishment can be
/// checked locally without calling back into the AMF.
pub struct Smf {
    exposure: ExposureEngine,
    sessions: IndexMap<String, PduSession>,
    registered: BTreeSet<Supi>,
    counter: u64,
}

impl Smf {
    pub fn new(transport: Arc<dyn Transport>) -> Self {
        Smf {
            exposure: ExposureEngine::new(NfType::Smf, transport),
            sessions: IndexMap::new(),
            registered: BTreeSet::new(),
            counter: 0,
        }
    }

    pub fn exposure(&self) -> &ExposureEngine {
        &self.exposure
    }

    pub fn exposure_mut(&mut self) -> &mut ExposureEngine {
        &mut self.exposure
    }

    pub fn session(&self, session_id: &str) -> Option<&PduSession> {
        self.sessions.get(session_id)
    }

    /// Ids of the ACTIVE sessions of `supi`, in establishment order.
    pub fn active_session_ids(&self, supi: &Supi) -> Vec<String> {
        self.sessions
            .values()
            .filter(|s| s.state == SessionState::Active && &s.supi == supi)
            .map(|s| s.session_id.clone())
            .collect()
    }

    /// Ids of every ACTIVE session, in establishment order.
    pub fn all_active_session_ids(&self) -> Vec<String> {
        self.sessions
            .values()
            .filter(|s| s.state == SessionState::Active)
            .map(|s| s.session_id.clone())
            .collect()
    }

    fn emit(&mut self, now: SimInstant, supi: &Supi, payload: EventPayload) -> NetworkEvent {
        let event = NetworkEvent::new(now, supi.clone(), payload);
        self.exposure.send_event_notification(&event);
        event
    }

    /// Establishes a session for a registered UE and emits
    /// PDU_SESSION_ESTABLISHMENT.
    pub fn establish(
        &mut self,
        supi: &Supi,
        dnn: impl Into<String>,
        anchor_cell: CellId,
        now: SimInstant,
    ) -> Result<(String, NetworkEvent), NfError> {
        if !self.registered.contains(supi) {
            return Err(NfError::NotRegistered(supi.clone()));
        }
        self.counter += 1;
        let session_id = format!("SMF-PDU-{:06}", self.counter);
        let dnn = dnn.into();
        self.sessions.insert(
            session_id.clone(),
            PduSession {
                session_id: session_id.clone(),
                supi: supi.clone(),
                dnn: dnn.clone(),
                state: SessionState::Active,
                anchor_cell,
                cumulative_bytes_up: 0,
                cumulative_bytes_down: 0,
                five_qi: DEFAULT_FIVE_QI,
            },
        );
        let event = self.emit(
            now,
            supi,
            EventPayload::PduSessionEstablishment {
                session_id: session_id.clone(),
                dnn,
            },
        );
        Ok((session_id, event))
    }

    /// Releases an ACTIVE session; the release payload carries the final
    /// cumulative volumes.
    pub fn release(&mut self, session_id: &str, now: SimInstant) -> Result<NetworkEvent, NfError> {
        let session = self
            .sessions
            .get_mut(session_id)
            .ok_or_else(|| NfError::UnknownSession(session_id.to_string()))?;
        if session.state == SessionState::Released {
            return Err(NfError::SessionReleased(session_id.to_string()));
        }
        session.state = SessionState::Released;
        let (supi, payload) = (
            session.supi.clone(),
            EventPayload::PduSessionRelease {
                session_id: session.session_id.clone(),
                dnn: session.dnn.clone(),
                total_bytes_up: session.cumulative_bytes_up,
                total_bytes_down: session.cumulative_bytes_down,
            },
        );
        Ok(self.emit(now, &supi, payload))
    }

    /// Adds a traffic delta to an ACTIVE session and emits
    /// TRAFFIC_VOLUME_REPORT with the delta.
    pub fn traffic_tick(
        &mut self,
        session_id: &str,
        bytes_up: u64,
        bytes_down: u64,
        now: SimInstant,
    ) -> Result<NetworkEvent, NfError> {
        let session = self
            .sessions
            .get_mut(session_id)
            .ok_or_else(|| NfError::UnknownSession(session_id.to_string()))?;
        if session.state == SessionState::Released {
            return Err(NfError::SessionReleased(session_id.to_string()));
        }
        session.cumulative_bytes_up += bytes_up;
        session.cumulative_bytes_down += bytes_down;
        let supi = session.supi.clone();
        let payload = EventPayload::TrafficVolumeReport {
            session_id: session_id.to_string(),
            bytes_up,
            bytes_down,
        };
        Ok(self.emit(now, &supi, payload))
    }

    /// Applies a QoS change to an ACTIVE session and emits QOS_CHANGE.
    pub fn qos_change(
        &mut self,
        session_id: &str,
        five_qi_after: u8,
        now: SimInstant,
    ) -> Result<NetworkEvent, NfError> {
        let session = self
            .sessions
            .get_mut(session_id)
            .ok_or_else(|| NfError::UnknownSession(session_id.to_string()))?;
        if session.state == SessionState::Released {
            return Err(NfError::SessionReleased(session_id.to_string()));
        }
        let before = session.five_qi;
        session.five_qi = five_qi_after;
        let supi = session.supi.clone();
        let payload = EventPayload::QosChange {
            session_id: session_id.to_string(),
            five_qi_before: before,
            five_qi_after,
        };
        Ok(self.emit(now, &supi, payload))
    }

    /// AMF push: UE registration state changed. Deregistration releases all
    /// of the UE's ACTIVE sessions.
    pub fn handle_ue_state(
        &mut self,
        supi: &Supi,
        registered: bool,
        now: SimInstant,
    ) -> Vec<NetworkEvent> {
        let mut events = Vec::new();
        if registered {
            self.registered.insert(supi.clone());
        } else {
            self.registered.remove(supi);
            for session_id in self.active_session_ids(supi) {
                events.push(self.release(&session_id, now).expect("session is active"));
            }
        }
        events
    }

    /// AMF push: serving cell changed. Emits UP_PATH_CHANGE for each ACTIVE
    /// session of the UE and re-anchors it.
    pub fn handle_up_path_change(
        &mut self,
        supi: &Supi,
        new_cell: CellId,
        now: SimInstant,
    ) -> Vec<NetworkEvent> {
        let mut events = Vec::new();
        for session_id in self.active_session_ids(supi) {
            let session = self.sessions.get_mut(&session_id).expect("id just listed");
            let old_cell = std::mem::replace(&mut session.anchor_cell, new_cell.clone());
            let payload = EventPayload::UpPathChange {
                session_id,
                old_cell,
                new_cell: new_cell.clone(),
            };
            events.push(self.emit(now, supi, payload));
        }
        events
    }

    /// Request handler covering the SMF event-exposure service and the
    /// internal endpoints driven by the AMF. Internal requests carry the
    /// event timestamp context via the shared simulated clock of the caller,
    /// so bodies include the instant explicitly.
    pub fn handler(smf: &Arc<Mutex<Smf>>) -> Handler {
        let smf = Arc::clone(smf);
        Arc::new(move |req: &HttpishRequest| {
            let mut smf = smf.lock().unwrap();
            if let Some(resp) = smf.exposure.handle_request(req) {
                return resp;
            }
            match (req.method, req.path.as_str()) {
                (Method::Post, "/nsmf-internal/v1/ue-state") => {
                    #[derive(Deserialize)]
                    struct Body {
                        supi: Supi,
                        registered: bool,
                        now: SimInstant,
                    }
                    match parse_body::<Body>(req) {
                        Ok(body) => {
                            smf.handle_ue_state(&body.supi, body.registered, body.now);
                            HttpishResponse::no_content()
                        }
                        Err(e) => HttpishResponse::bad_request(e),
                    }
                }
                (Method::Post, "/nsmf-internal/v1/up-path-change") => {
                    #[derive(Deserialize)]
                    struct Body {
                        supi: Supi,
                        #[serde(rename = "newCell")]
                        new_cell: CellId,
                        now: SimInstant,
                    }
                    match parse_body::<Body>(req) {
                        Ok(body) => {
                            smf.handle_up_path_change(&body.supi, body.new_cell, body.now);
                            HttpishResponse::no_content()
                        }
                        Err(e) => HttpishResponse::bad_request(e),
                    }
                }
                _ => HttpishResponse::not_found(format!("no route for {}", req.path)),
            }
        })
    }
}

fn parse_body<T: serde::de::DeserializeOwned>(req: &HttpishRequest) -> Result<T, String> {
    req.body
        .clone()
        .ok_or_else(|| "missing body".to_string())
        .and_then(|b| serde_json::from_value(b).map_err(|e| e.to_string()))
}
