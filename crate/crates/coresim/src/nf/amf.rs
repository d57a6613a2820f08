//! Access and mobility management: UE registration, connectivity state,
//! handovers, area presence and reachability.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde_json::json;
use tracing::warn;

use super::exposure::ExposureEngine;
use super::NfError;
use crate::domain::{
    CellId, CmState, EventPayload, NetworkEvent, RmState, SimInstant, Supi,
};
use crate::transport::{Handler, HttpishRequest, HttpishResponse, NfType, Transport};

/// AMF-side per-UE state.
#[derive(Debug, Clone, PartialEq)]
pub struct UeContext {
    pub supi: Supi,
    pub rm_state: RmState,
    pub cm_state: CmState,
    pub serving_cell: Option<CellId>,
    /// Previously served cells, most recent first, at most two.
    pub last_two_cells: Vec<CellId>,
}

impl UeContext {
    fn new(supi: Supi) -> Self {
        UeContext {
            supi,
            rm_state: RmState::Deregistered,
            cm_state: CmState::Idle,
            serving_cell: None,
            last_two_cells: Vec::new(),
        }
    }

    /// State-machine invariants: serving cell present iff registered,
    /// deregistered implies idle.
    pub fn invariants_hold(&self) -> bool {
        let serving_iff_registered =
            self.serving_cell.is_some() == (self.rm_state == RmState::Registered);
        let deregistered_is_idle =
            self.rm_state != RmState::Deregistered || self.cm_state == CmState::Idle;
        serving_iff_registered && deregistered_is_idle && self.last_two_cells.len() <= 2
    }
}

/// The simulated AMF.
pub struct Amf {
    exposure: ExposureEngine,
    ues: BTreeMap<Supi, UeContext>,
    transport: Arc<dyn Transport>,
    smf_internal_uri: Option<String>,
}

impl Amf {
    pub fn new(transport: Arc<dyn Transport>) -> Self {
        Amf {
            exposure: ExposureEngine::new(NfType::Amf, Arc::clone(&transport)),
            ues: BTreeMap::new(),
            transport,
            smf_internal_uri: None,
        }
    }

    /// Base URI of the SMF's internal service, discovered at startup.
    pub fn set_smf_internal_uri(&mut self, uri: impl Into<String>) {
        self.smf_internal_uri = Some(uri.into());
    }

    pub fn exposure(&self) -> &ExposureEngine {
        &self.exposure
    }

    pub fn exposure_mut(&mut self) -> &mut ExposureEngine {
        &mut self.exposure
    }

    pub fn context(&self, supi: &Supi) -> Option<&UeContext> {
        self.ues.get(supi)
    }

    pub fn is_registered(&self, supi: &Supi) -> bool {
        self.ues
            .get(supi)
            .is_some_and(|ue| ue.rm_state == RmState::Registered)
    }

    fn emit(&mut self, now: SimInstant, supi: &Supi, payload: EventPayload) -> NetworkEvent {
        let event = NetworkEvent::new(now, supi.clone(), payload);
        self.exposure.send_event_notification(&event);
        event
    }

    fn notify_smf_ue_state(&self, supi: &Supi, registered: bool) {
        let Some(base) = &self.smf_internal_uri else {
            return;
        };
        let req = HttpishRequest::post(
            "/nsmf-internal/v1/ue-state",
            json!({ "supi": supi, "registered": registered }),
        );
        match self.transport.send(req, base) {
            Ok(resp) if resp.is_success() => {}
            Ok(resp) => warn!(status = resp.status, "smf rejected ue-state update"),
            Err(e) => warn!(error = %e, "failed to push ue-state to smf"),
        }
    }

    fn notify_smf_up_path_change(&self, supi: &Supi, old: &CellId, new: &CellId) {
        let Some(base) = &self.smf_internal_uri else {
            return;
        };
        let req = HttpishRequest::post(
            "/nsmf-internal/v1/up-path-change",
            json!({ "supi": supi, "oldCell": old, "newCell": new }),
        );
        match self.transport.send(req, base) {
            Ok(resp) if resp.is_success() => {}
            Ok(resp) => warn!(status = resp.status, "smf rejected up-path change"),
            Err(e) => warn!(error = %e, "failed to push up-path change to smf"),
        }
    }

    /// Registers a currently deregistered UE at `cell`. Emits, in order,
    /// REGISTRATION_STATE{REGISTERED}, CONNECTIVITY_STATE{CONNECTED} and
    /// LOCATION_REPORT{cell}.
    pub fn register(
        &mut self,
        supi: &Supi,
        cell: CellId,
        now: SimInstant,
    ) -> Result<Vec<NetworkEvent>, NfError> {
        let ue = self
            .ues
            .entry(supi.clone())
            .or_insert_with(|| UeContext::new(supi.clone()));
        if ue.rm_state == RmState::Registered {
            return Err(NfError::AlreadyRegistered(supi.clone()));
        }
        ue.rm_state = RmState::Registered;
        ue.cm_state = CmState::Connected;
        ue.serving_cell = Some(cell.clone());
        debug_assert!(ue.invariants_hold());

        let events = vec![
            self.emit(
                now,
                supi,
                EventPayload::RegistrationState {
                    state: RmState::Registered,
                },
            ),
            self.emit(
                now,
                supi,
                EventPayload::ConnectivityState {
                    state: CmState::Connected,
                },
            ),
            self.emit(now, supi, EventPayload::LocationReport { cell }),
        ];
        self.notify_smf_ue_state(supi, true);
        Ok(events)
    }

    /// Deregisters a registered UE. Emits CONNECTIVITY_STATE{IDLE} then
    /// REGISTRATION_STATE{DEREGISTERED}, and triggers release of the UE's
    /// active sessions at the SMF.
    pub fn deregister(&mut self, supi: &Supi, now: SimInstant) -> Result<Vec<NetworkEvent>, NfError> {
        let ue = self
            .ues
            .get_mut(supi)
            .filter(|ue| ue.rm_state == RmState::Registered)
            .ok_or_else(|| NfError::NotRegistered(supi.clone()))?;
        ue.rm_state = RmState::Deregistered;
        ue.cm_state = CmState::Idle;
        ue.serving_cell = None;
        debug_assert!(ue.invariants_hold());

        let events = vec![
            self.emit(
                now,
                supi,
                EventPayload::ConnectivityState {
                    state: CmState::Idle,
                },
            ),
            self.emit(
                now,
                supi,
                EventPayload::RegistrationState {
                    state: RmState::Deregistered,
                },
            ),
        ];
        self.notify_smf_ue_state(supi, false);
        Ok(events)
    }

    /// Hands a registered UE over to `target`. Emits HANDOVER then
    /// LOCATION_REPORT{target}, and pushes the UP path change to the SMF.
    pub fn handover(
        &mut self,
        supi: &Supi,
        target: CellId,
        now: SimInstant,
    ) -> Result<Vec<NetworkEvent>, NfError> {
        let ue = self
            .ues
            .get_mut(supi)
            .filter(|ue| ue.rm_state == RmState::Registered)
            .ok_or_else(|| NfError::NotRegistered(supi.clone()))?;
        let source = ue.serving_cell.clone().expect("registered UE has a serving cell");
        if source == target {
            return Err(NfError::HandoverToServingCell(target));
        }

        ue.last_two_cells.insert(0, source.clone());
        ue.last_two_cells.truncate(2);
        ue.serving_cell = Some(target.clone());
        debug_assert!(ue.invariants_hold());

        let events = vec![
            self.emit(
                now,
                supi,
                EventPayload::Handover {
                    source: source.clone(),
                    target: target.clone(),
                },
            ),
            self.emit(
                now,
                supi,
                EventPayload::LocationReport {
                    cell: target.clone(),
                },
            ),
        ];
        self.notify_smf_up_path_change(supi, &source, &target);
        Ok(events)
    }

    /// Out-of-coverage transition: the UE stays registered but goes idle
    /// and unreachable.
    pub fn radio_loss(&mut self, supi: &Supi, now: SimInstant) -> Result<Vec<NetworkEvent>, NfError> {
        let ue = self
            .ues
            .get_mut(supi)
            .filter(|ue| ue.rm_state == RmState::Registered)
            .ok_or_else(|| NfError::NotRegistered(supi.clone()))?;
        if ue.cm_state == CmState::Idle {
            return Err(NfError::ConnectivityUnchanged(supi.clone(), "IDLE"));
        }
        ue.cm_state = CmState::Idle;
        debug_assert!(ue.invariants_hold());
        Ok(vec![
            self.emit(
                now,
                supi,
                EventPayload::ConnectivityState {
                    state: CmState::Idle,
                },
            ),
            self.emit(now, supi, EventPayload::Reachability { reachable: false }),
        ])
    }

    /// Re-entry into coverage restores CONNECTED and reachable.
    pub fn radio_recover(
        &mut self,
        supi: &Supi,
        now: SimInstant,
    ) -> Result<Vec<NetworkEvent>, NfError> {
        let ue = self
            .ues
            .get_mut(supi)
            .filter(|ue| ue.rm_state == RmState::Registered)
            .ok_or_else(|| NfError::NotRegistered(supi.clone()))?;
        if ue.cm_state == CmState::Connected {
            return Err(NfError::ConnectivityUnchanged(supi.clone(), "CONNECTED"));
        }
        ue.cm_state = CmState::Connected;
        debug_assert!(ue.invariants_hold());
        Ok(vec![
            self.emit(
                now,
                supi,
                EventPayload::ConnectivityState {
                    state: CmState::Connected,
                },
            ),
            self.emit(now, supi, EventPayload::Reachability { reachable: true }),
        ])
    }

    /// Area-of-interest presence transition for a registered UE.
    pub fn presence(
        &mut self,
        supi: &Supi,
        aoi_id: impl Into<String>,
        inside: bool,
        now: SimInstant,
    ) -> Result<NetworkEvent, NfError> {
        if !self.is_registered(supi) {
            return Err(NfError::NotRegistered(supi.clone()));
        }
        Ok(self.emit(
            now,
            supi,
            EventPayload::PresenceInAoi {
                aoi_id: aoi_id.into(),
                inside,
            },
        ))
    }

    /// Request handler covering the AMF event-exposure service.
    pub fn handler(amf: &Arc<Mutex<Amf>>) -> Handler {
        let amf = Arc::clone(amf);
        Arc::new(move |req: &HttpishRequest| {
            let mut amf = amf.lock().unwrap();
            amf.exposure
                .handle_request(req)
                .unwrap_or_else(|| HttpishResponse::not_found(format!("no route for {}", req.path)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{AmfEventKind, EventKind, SimClock};
    use crate::transport::InprocTransport;

    fn clock() -> SimClock {
        SimClock::new("2025-01-06T00:00:00Z".parse().unwrap())
    }

    fn cell(n: u32) -> CellId {
        CellId::new(format!("gnb-{n}"), n)
    }

    fn amf() -> Amf {
        Amf::new(Arc::new(InprocTransport::new()))
    }

    fn supi() -> Supi {
        Supi::from("imsi-208930000000001")
    }

    #[test]
    fn test_register_emits_three_events_in_order() {
        let mut amf = amf();
        let events = amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        let kinds: Vec<EventKind> = events.iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                AmfEventKind::RegistrationState.into(),
                AmfEventKind::ConnectivityState.into(),
                AmfEventKind::LocationReport.into(),
            ]
        );
        let ctx = amf.context(&supi()).unwrap();
        assert_eq!(ctx.serving_cell, Some(cell(1)));
        assert_eq!(ctx.rm_state, RmState::Registered);
        assert_eq!(ctx.cm_state, CmState::Connected);
    }

    #[test]
    fn test_double_register_rejected_no_events() {
        let mut amf = amf();
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        let before = amf.exposure().emitted_total();
        let err = amf.register(&supi(), cell(2), clock().at(1.0)).unwrap_err();
        assert_eq!(err, NfError::AlreadyRegistered(supi()));
        assert_eq!(amf.exposure().emitted_total(), before);
    }

    #[test]
    fn test_deregister_clears_serving_cell() {
        let mut amf = amf();
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        let events = amf.deregister(&supi(), clock().at(10.0)).unwrap();
        assert_eq!(events.len(), 2);
        assert!(matches!(
            events[0].payload,
            EventPayload::ConnectivityState {
                state: CmState::Idle
            }
        ));
        assert!(matches!(
            events[1].payload,
            EventPayload::RegistrationState {
                state: RmState::Deregistered
            }
        ));
        let ctx = amf.context(&supi()).unwrap();
        assert_eq!(ctx.serving_cell, None);
        assert!(ctx.invariants_hold());
    }

    #[test]
    fn test_deregister_unknown_supi_rejected() {
        let mut amf = amf();
        assert_eq!(
            amf.deregister(&supi(), clock().at(0.0)).unwrap_err(),
            NfError::NotRegistered(supi())
        );
    }

    #[test]
    fn test_handover_updates_last_two_cells() {
        let mut amf = amf();
        let now = clock().at(0.0);
        amf.register(&supi(), cell(1), now).unwrap();
        amf.handover(&supi(), cell(2), clock().at(10.0)).unwrap();
        amf.handover(&supi(), cell(3), clock().at(20.0)).unwrap();
        let ctx = amf.context(&supi()).unwrap();
        // After C1 -> C2 -> C3 the last two previously served cells are
        // [C2, C1].
        assert_eq!(ctx.last_two_cells, vec![cell(2), cell(1)]);
        assert_eq!(ctx.serving_cell, Some(cell(3)));
    }

    #[test]
    fn test_handover_event_sequence() {
        let mut amf = amf();
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        let events = amf.handover(&supi(), cell(2), clock().at(5.0)).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(
            events[0].payload,
            EventPayload::Handover {
                source: cell(1),
                target: cell(2)
            }
        );
        assert_eq!(events[1].payload, EventPayload::LocationReport { cell: cell(2) });
    }

    #[test]
    fn test_handover_to_serving_cell_rejected() {
        let mut amf = amf();
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        assert_eq!(
            amf.handover(&supi(), cell(1), clock().at(5.0)).unwrap_err(),
            NfError::HandoverToServingCell(cell(1))
        );
    }

    #[test]
    fn test_handover_after_deregister_rejected() {
        let mut amf = amf();
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        amf.deregister(&supi(), clock().at(1.0)).unwrap();
        assert_eq!(
            amf.handover(&supi(), cell(2), clock().at(2.0)).unwrap_err(),
            NfError::NotRegistered(supi())
        );
    }

    #[test]
    fn test_radio_loss_and_recovery() {
        let mut amf = amf();
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();

        let events = amf.radio_loss(&supi(), clock().at(5.0)).unwrap();
        assert!(matches!(
            events[1].payload,
            EventPayload::Reachability { reachable: false }
        ));
        let ctx = amf.context(&supi()).unwrap();
        assert_eq!(ctx.cm_state, CmState::Idle);
        assert_eq!(ctx.rm_state, RmState::Registered);

        // Loss is not idempotent.
        assert!(amf.radio_loss(&supi(), clock().at(6.0)).is_err());

        let events = amf.radio_recover(&supi(), clock().at(7.0)).unwrap();
        assert!(matches!(
            events[1].payload,
            EventPayload::Reachability { reachable: true }
        ));
        assert_eq!(amf.context(&supi()).unwrap().cm_state, CmState::Connected);
    }

    #[test]
    fn test_presence_requires_registration() {
        let mut amf = amf();
        assert!(amf.presence(&supi(), "downtown", true, clock().at(0.0)).is_err());
        amf.register(&supi(), cell(1), clock().at(0.0)).unwrap();
        let event = amf
            .presence(&supi(), "downtown", true, clock().at(1.0))
            .unwrap();
        assert_eq!(
            event.payload,
            EventPayload::PresenceInAoi {
                aoi_id: "downtown".into(),
                inside: true
            }
        );
    }

    /// Model-check over a scripted replay: invariants hold after every
    /// operation, and the per-cycle event order
    /// REGISTERED < HANDOVER < DEREGISTERED is respected.
    #[test]
    fn test_invariants_hold_across_replay() {
        let mut amf = amf();
        let c = clock();
        let s = supi();
        let script: Vec<(f64, &str)> = vec![
            (0.0, "register"),
            (1.0, "handover2"),
            (2.0, "loss"),
            (3.0, "recover"),
            (4.0, "handover1"),
            (5.0, "deregister"),
            (6.0, "register"),
            (7.0, "deregister"),
        ];
        for (t, op) in script {
            let now = c.at(t);
            match op {
                "register" => {
                    amf.register(&s, cell(1), now).unwrap();
                }
                "handover1" => {
                    amf.handover(&s, cell(1), now).unwrap();
                }
                "handover2" => {
                    amf.handover(&s, cell(2), now).unwrap();
                }
                "loss" => {
                    amf.radio_loss(&s, now).unwrap();
                }
                "recover" => {
                    amf.radio_recover(&s, now).unwrap();
                }
                "deregister" => {
                    amf.deregister(&s, now).unwrap();
                }
                _ => unreachable!(),
            }
            assert!(amf.context(&s).unwrap().invariants_hold(), "after {op}");
        }

        // Event-order invariant per attach cycle.
        let log = amf.exposure().local_log();
        let mut registered_at: Option<usize> = None;
        for (idx, event) in log.iter().enumerate() {
            match &event.payload {
                EventPayload::RegistrationState {
                    state: RmState::Registered,
                } => registered_at = Some(idx),
                EventPayload::Handover { .. } => {
                    assert!(registered_at.is_some_and(|r| r < idx));
                }
                EventPayload::RegistrationState {
                    state: RmState::Deregistered,
                } => {
                    assert!(registered_at.take().is_some_and(|r| r < idx));
                }
                _ => {}
            }
        }
    }
}
