//! Identities, geometry and the network event taxonomy.
//!
//! [`NetworkEvent`] is the unit of collection and analytics. Its canonical
//! JSON encoding (field names `kind`, `timestamp`, `supi`, `payload`, in that
//! order) is both the notification wire payload and the NDJSON log-line
//! format used everywhere else in the workspace.

use serde::de::Error as DeError;
use serde::{Deserialize, Serialize};

use super::time::SimInstant;

/// Subscription permanent identifier of a UE (IMSI-style string).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Supi(pub String);

impl Supi {
    pub fn new(value: impl Into<String>) -> Self {
        Supi(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Supi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Supi {
    fn from(s: &str) -> Self {
        Supi(s.to_string())
    }
}

/// Cell identity: id string plus the tracking area code of its gNB.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub id: String,
    pub tac: u32,
}

impl CellId {
    pub fn new(id: impl Into<String>, tac: u32) -> Self {
        CellId { id: id.into(), tac }
    }
}

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(tac={})", self.id, self.tac)
    }
}

/// Planar position in scenario distance units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance_to(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Registration management state of a UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RmState {
    Registered,
    Deregistered,
}

/// Connection management state of a UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CmState {
    Connected,
    Idle,
}

/// Lifecycle state of a PDU session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SessionState {
    Active,
    Released,
}

/// Event kinds exposed by the AMF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AmfEventKind {
    RegistrationState,
    LocationReport,
    PresenceInAoi,
    ConnectivityState,
    Reachability,
    Handover,
}

impl AmfEventKind {
    pub const ALL: [AmfEventKind; 6] = [
        AmfEventKind::RegistrationState,
        AmfEventKind::LocationReport,
        AmfEventKind::PresenceInAoi,
        AmfEventKind::ConnectivityState,
        AmfEventKind::Reachability,
        AmfEventKind::Handover,
    ];
}

/// Event kinds exposed by the SMF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SmfEventKind {
    PduSessionEstablishment,
    PduSessionRelease,
    TrafficVolumeReport,
    QosChange,
    UpPathChange,
}

impl SmfEventKind {
    pub const ALL: [SmfEventKind; 5] = [
        SmfEventKind::PduSessionEstablishment,
        SmfEventKind::PduSessionRelease,
        SmfEventKind::TrafficVolumeReport,
        SmfEventKind::QosChange,
        SmfEventKind::UpPathChange,
    ];
}

/// Any event kind, AMF or SMF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    Amf(AmfEventKind),
    Smf(SmfEventKind),
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Amf(AmfEventKind::RegistrationState) => "REGISTRATION_STATE",
            EventKind::Amf(AmfEventKind::LocationReport) => "LOCATION_REPORT",
            EventKind::Amf(AmfEventKind::PresenceInAoi) => "PRESENCE_IN_AOI",
            EventKind::Amf(AmfEventKind::ConnectivityState) => "CONNECTIVITY_STATE",
            EventKind::Amf(AmfEventKind::Reachability) => "REACHABILITY",
            EventKind::Amf(AmfEventKind::Handover) => "HANDOVER",
            EventKind::Smf(SmfEventKind::PduSessionEstablishment) => "PDU_SESSION_ESTABLISHMENT",
            EventKind::Smf(SmfEventKind::PduSessionRelease) => "PDU_SESSION_RELEASE",
            EventKind::Smf(SmfEventKind::TrafficVolumeReport) => "TRAFFIC_VOLUME_REPORT",
            EventKind::Smf(SmfEventKind::QosChange) => "QOS_CHANGE",
            EventKind::Smf(SmfEventKind::UpPathChange) => "UP_PATH_CHANGE",
        }
    }

    pub fn from_name(name: &str) -> Option<EventKind> {
        let kind = match name {
            "REGISTRATION_STATE" => EventKind::Amf(AmfEventKind::RegistrationState),
            "LOCATION_REPORT" => EventKind::Amf(AmfEventKind::LocationReport),
            "PRESENCE_IN_AOI" => EventKind::Amf(AmfEventKind::PresenceInAoi),
            "CONNECTIVITY_STATE" => EventKind::Amf(AmfEventKind::ConnectivityState),
            "REACHABILITY" => EventKind::Amf(AmfEventKind::Reachability),
            "HANDOVER" => EventKind::Amf(AmfEventKind::Handover),
            "PDU_SESSION_ESTABLISHMENT" => EventKind::Smf(SmfEventKind::PduSessionEstablishment),
            "PDU_SESSION_RELEASE" => EventKind::Smf(SmfEventKind::PduSessionRelease),
            "TRAFFIC_VOLUME_REPORT" => EventKind::Smf(SmfEventKind::TrafficVolumeReport),
            "QOS_CHANGE" => EventKind::Smf(SmfEventKind::QosChange),
            "UP_PATH_CHANGE" => EventKind::Smf(SmfEventKind::UpPathChange),
            _ => return None,
        };
        Some(kind)
    }

    pub fn is_amf(&self) -> bool {
        matches!(self, EventKind::Amf(_))
    }

    pub fn is_smf(&self) -> bool {
        matches!(self, EventKind::Smf(_))
    }
}

impl From<AmfEventKind> for EventKind {
    fn from(k: AmfEventKind) -> Self {
        EventKind::Amf(k)
    }
}

impl From<SmfEventKind> for EventKind {
    fn from(k: SmfEventKind) -> Self {
        EventKind::Smf(k)
    }
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for EventKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for EventKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        EventKind::from_name(&name)
            .ok_or_else(|| D::Error::custom(format!("unknown event kind '{name}'")))
    }
}

/// Kind-specific payload of a [`NetworkEvent`].
///
/// Serialized as a bare object (the kind lives in the event's `kind` field).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EventPayload {
    RegistrationState {
        state: RmState,
    },
    ConnectivityState {
        state: CmState,
    },
    LocationReport {
        cell: CellId,
    },
    Handover {
        source: CellId,
        target: CellId,
    },
    PresenceInAoi {
        aoi_id: String,
        inside: bool,
    },
    Reachability {
        reachable: bool,
    },
    PduSessionEstablishment {
        session_id: String,
        dnn: String,
    },
    /// Release carries the final cumulative volumes of the session.
    PduSessionRelease {
        session_id: String,
        dnn: String,
        total_bytes_up: u64,
        total_bytes_down: u64,
    },
    TrafficVolumeReport {
        session_id: String,
        bytes_up: u64,
        bytes_down: u64,
    },
    QosChange {
        session_id: String,
        five_qi_before: u8,
        five_qi_after: u8,
    },
    UpPathChange {
        session_id: String,
        old_cell: CellId,
        new_cell: CellId,
    },
}

impl EventPayload {
    /// The event kind this payload belongs to.
    pub fn kind(&self) -> EventKind {
        match self {
            EventPayload::RegistrationState { .. } => AmfEventKind::RegistrationState.into(),
            EventPayload::ConnectivityState { .. } => AmfEventKind::ConnectivityState.into(),
            EventPayload::LocationReport { .. } => AmfEventKind::LocationReport.into(),
            EventPayload::Handover { .. } => AmfEventKind::Handover.into(),
            EventPayload::PresenceInAoi { .. } => AmfEventKind::PresenceInAoi.into(),
            EventPayload::Reachability { .. } => AmfEventKind::Reachability.into(),
            EventPayload::PduSessionEstablishment { .. } => {
                SmfEventKind::PduSessionEstablishment.into()
            }
            EventPayload::PduSessionRelease { .. } => SmfEventKind::PduSessionRelease.into(),
            EventPayload::TrafficVolumeReport { .. } => SmfEventKind::TrafficVolumeReport.into(),
            EventPayload::QosChange { .. } => SmfEventKind::QosChange.into(),
            EventPayload::UpPathChange { .. } => SmfEventKind::UpPathChange.into(),
        }
    }

    /// Parses a payload object for a known kind. Rejects shapes that do not
    /// match the kind.
    pub fn from_kind_value(
        kind: EventKind,
        value: serde_json::Value,
    ) -> Result<EventPayload, serde_json::Error> {
        use serde_json::from_value;

        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Reg {
            state: RmState,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Conn {
            state: CmState,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Loc {
            cell: CellId,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Ho {
            source: CellId,
            target: CellId,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Aoi {
            aoi_id: String,
            inside: bool,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Reach {
            reachable: bool,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Est {
            session_id: String,
            dnn: String,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Rel {
            session_id: String,
            dnn: String,
            total_bytes_up: u64,
            total_bytes_down: u64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Tvr {
            session_id: String,
            bytes_up: u64,
            bytes_down: u64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Qos {
            session_id: String,
            five_qi_before: u8,
            five_qi_after: u8,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Upc {
            session_id: String,
            old_cell: CellId,
            new_cell: CellId,
        }

        Ok(match kind {
            EventKind::Amf(AmfEventKind::RegistrationState) => {
                let p: Reg = from_value(value)?;
                EventPayload::RegistrationState { state: p.state }
            }
            EventKind::Amf(AmfEventKind::ConnectivityState) => {
                let p: Conn = from_value(value)?;
                EventPayload::ConnectivityState { state: p.state }
            }
            EventKind::Amf(AmfEventKind::LocationReport) => {
                let p: Loc = from_value(value)?;
                EventPayload::LocationReport { cell: p.cell }
            }
            EventKind::Amf(AmfEventKind::Handover) => {
                let p: Ho = from_value(value)?;
                EventPayload::Handover {
                    source: p.source,
                    target: p.target,
                }
            }
            EventKind::Amf(AmfEventKind::PresenceInAoi) => {
                let p: Aoi = from_value(value)?;
                EventPayload::PresenceInAoi {
                    aoi_id: p.aoi_id,
                    inside: p.inside,
                }
            }
            EventKind::Amf(AmfEventKind::Reachability) => {
                let p: Reach = from_value(value)?;
                EventPayload::Reachability {
                    reachable: p.reachable,
                }
            }
            EventKind::Smf(SmfEventKind::PduSessionEstablishment) => {
                let p: Est = from_value(value)?;
                EventPayload::PduSessionEstablishment {
                    session_id: p.session_id,
                    dnn: p.dnn,
                }
            }
            EventKind::Smf(SmfEventKind::PduSessionRelease) => {
                let p: Rel = from_value(value)?;
                EventPayload::PduSessionRelease {
                    session_id: p.session_id,
                    dnn: p.dnn,
                    total_bytes_up: p.total_bytes_up,
                    total_bytes_down: p.total_bytes_down,
                }
            }
            EventKind::Smf(SmfEventKind::TrafficVolumeReport) => {
                let p: Tvr = from_value(value)?;
                EventPayload::TrafficVolumeReport {
                    session_id: p.session_id,
                    bytes_up: p.bytes_up,
                    bytes_down: p.bytes_down,
                }
            }
            EventKind::Smf(SmfEventKind::QosChange) => {
                let p: Qos = from_value(value)?;
                EventPayload::QosChange {
                    session_id: p.session_id,
                    five_qi_before: p.five_qi_before,
                    five_qi_after: p.five_qi_after,
                }
            }
            EventKind::Smf(SmfEventKind::UpPathChange) => {
                let p: Upc = from_value(value)?;
                EventPayload::UpPathChange {
                    session_id: p.session_id,
                    old_cell: p.old_cell,
                    new_cell: p.new_cell,
                }
            }
        })
    }
}

/// A single AMF or SMF event.
///
/// `kind` and `payload` are stored independently so that invariant checks
/// can report kind/payload mismatches as values instead of panicking;
/// well-formed events are built through [`NetworkEvent::new`], which derives
/// the kind from the payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkEvent {
    pub kind: EventKind,
    pub timestamp: SimInstant,
    pub supi: Supi,
    pub payload: EventPayload,
}

impl NetworkEvent {
    /// Builds an event whose kind matches its payload.
    pub fn new(timestamp: SimInstant, supi: Supi, payload: EventPayload) -> Self {
        NetworkEvent {
            kind: payload.kind(),
            timestamp,
            supi,
            payload,
        }
    }

    /// Canonical JSON encoding: one line, field order
    /// `kind`, `timestamp`, `supi`, `payload`.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("event serialization cannot fail")
    }

    pub fn from_canonical_json(s: &str) -> Result<NetworkEvent, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl<'de> Deserialize<'de> for NetworkEvent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: EventKind,
            timestamp: SimInstant,
            supi: Supi,
            payload: serde_json::Value,
        }

        let raw = Raw::deserialize(deserializer)?;
        let payload = EventPayload::from_kind_value(raw.kind, raw.payload).map_err(|e| {
            D::Error::custom(format!("payload does not match kind {}: {e}", raw.kind))
        })?;
        Ok(NetworkEvent {
            kind: raw.kind,
            timestamp: raw.timestamp,
            supi: raw.supi,
            payload,
        })
    }
}

/// A single invariant violation found by [`validate_event`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The `kind` field does not match the payload variant.
    PayloadKindMismatch { kind: EventKind, payload_kind: EventKind },
    /// A handover whose source equals its target.
    HandoverSourceEqualsTarget { cell: CellId },
    /// The event carries an empty SUPI.
    EmptySupi,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::PayloadKindMismatch { kind, payload_kind } => {
                write!(f, "payload/kind mismatch: kind {kind}, payload {payload_kind}")
            }
            Violation::HandoverSourceEqualsTarget { cell } => {
                write!(f, "source equals target: {cell}")
            }
            Violation::EmptySupi => f.write_str("empty supi"),
        }
    }
}

/// Checks all [`NetworkEvent`] invariants and returns every violation found.
pub fn validate_event(event: &NetworkEvent) -> Vec<Violation> {
    let mut violations = Vec::new();
    let payload_kind = event.payload.kind();
    if event.kind != payload_kind {
        violations.push(Violation::PayloadKindMismatch {
            kind: event.kind,
            payload_kind,
        });
    }
    if let EventPayload::Handover { source, target } = &event.payload {
        if source == target {
            violations.push(Violation::HandoverSourceEqualsTarget {
                cell: source.clone(),
            });
        }
    }
    if event.supi.is_empty() {
        violations.push(Violation::EmptySupi);
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::SimClock;
    use proptest::prelude::*;

    fn clock() -> SimClock {
        SimClock::new("2025-01-06T00:00:00Z".parse().unwrap())
    }

    fn c1() -> CellId {
        CellId::new("gnb-1", 1)
    }

    fn c2() -> CellId {
        CellId::new("gnb-2", 2)
    }

    #[test]
    fn test_validate_ok_handover() {
        let e = NetworkEvent::new(
            clock().at(1.0),
            Supi::from("imsi-1"),
            EventPayload::Handover {
                source: c1(),
                target: c2(),
            },
        );
        assert!(validate_event(&e).is_empty());
    }

    #[test]
    fn test_validate_handover_self_target() {
        let e = NetworkEvent::new(
            clock().at(1.0),
            Supi::from("imsi-1"),
            EventPayload::Handover {
                source: c1(),
                target: c1(),
            },
        );
        let violations = validate_event(&e);
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            Violation::HandoverSourceEqualsTarget { .. }
        ));
        assert!(violations[0].to_string().contains("source equals target"));
    }

    #[test]
    fn test_validate_payload_kind_mismatch() {
        let mut e = NetworkEvent::new(
            clock().at(1.0),
            Supi::from("imsi-1"),
            EventPayload::PduSessionEstablishment {
                session_id: "SMF-PDU-000001".into(),
                dnn: "internet".into(),
            },
        );
        e.kind = AmfEventKind::RegistrationState.into();
        let violations = validate_event(&e);
        assert_eq!(violations.len(), 1);
        assert!(matches!(violations[0], Violation::PayloadKindMismatch { .. }));
    }

    #[test]
    fn test_validate_empty_supi() {
        let e = NetworkEvent::new(
            clock().at(1.0),
            Supi::from(""),
            EventPayload::Reachability { reachable: true },
        );
        assert_eq!(validate_event(&e), vec![Violation::EmptySupi]);
    }

    #[test]
    fn test_canonical_json_shape() {
        let e = NetworkEvent::new(
            clock().at(3600.0),
            Supi::from("imsi-208930000000001"),
            EventPayload::LocationReport { cell: c1() },
        );
        let line = e.to_canonical_json();
        assert_eq!(
            line,
            r#"{"kind":"LOCATION_REPORT","timestamp":{"offset_s":3600.0,"wall":"2025-01-06T01:00:00Z"},"supi":"imsi-208930000000001","payload":{"cell":{"id":"gnb-1","tac":1}}}"#
        );
    }

    #[test]
    fn test_parse_rejects_payload_mismatch() {
        let line = r#"{"kind":"REGISTRATION_STATE","timestamp":{"offset_s":1.0,"wall":"2025-01-06T00:00:01Z"},"supi":"imsi-1","payload":{"session_id":"s1","dnn":"internet"}}"#;
        let err = NetworkEvent::from_canonical_json(line).unwrap_err();
        assert!(err.to_string().contains("payload does not match kind"));
    }

    #[test]
    fn test_parse_rejects_unknown_kind() {
        let line = r#"{"kind":"NOT_A_KIND","timestamp":{"offset_s":1.0,"wall":"2025-01-06T00:00:01Z"},"supi":"imsi-1","payload":{}}"#;
        assert!(NetworkEvent::from_canonical_json(line).is_err());
    }

    fn arb_cell() -> impl Strategy<Value = CellId> {
        ("[a-z]{1,4}-[0-9]{1,2}", 0u32..64).prop_map(|(id, tac)| CellId::new(id, tac))
    }

    fn arb_payload() -> impl Strategy<Value = EventPayload> {
        prop_oneof![
            prop_oneof![Just(RmState::Registered), Just(RmState::Deregistered)]
                .prop_map(|state| EventPayload::RegistrationState { state }),
            prop_oneof![Just(CmState::Connected), Just(CmState::Idle)]
                .prop_map(|state| EventPayload::ConnectivityState { state }),
            arb_cell().prop_map(|cell| EventPayload::LocationReport { cell }),
            (arb_cell(), arb_cell())
                .prop_map(|(source, target)| EventPayload::Handover { source, target }),
            ("[a-z]{1,8}", any::<bool>())
                .prop_map(|(aoi_id, inside)| EventPayload::PresenceInAoi { aoi_id, inside }),
            any::<bool>().prop_map(|reachable| EventPayload::Reachability { reachable }),
            ("[A-Z-]{1,10}", "[a-z]{1,8}").prop_map(|(session_id, dnn)| {
                EventPayload::PduSessionEstablishment { session_id, dnn }
            }),
            ("[A-Z-]{1,10}", "[a-z]{1,8}", any::<u64>(), any::<u64>()).prop_map(
                |(session_id, dnn, up, down)| EventPayload::PduSessionRelease {
                    session_id,
                    dnn,
                    total_bytes_up: up,
                    total_bytes_down: down,
                }
            ),
            ("[A-Z-]{1,10}", any::<u64>(), any::<u64>()).prop_map(
                |(session_id, up, down)| EventPayload::TrafficVolumeReport {
                    session_id,
                    bytes_up: up,
                    bytes_down: down,
                }
            ),
            ("[A-Z-]{1,10}", any::<u8>(), any::<u8>()).prop_map(
                |(session_id, before, after)| EventPayload::QosChange {
                    session_id,
                    five_qi_before: before,
                    five_qi_after: after,
                }
            ),
            ("[A-Z-]{1,10}", arb_cell(), arb_cell()).prop_map(
                |(session_id, old_cell, new_cell)| EventPayload::UpPathChange {
                    session_id,
                    old_cell,
                    new_cell,
                }
            ),
        ]
    }

    proptest! {
        /// Serialize-then-parse is the identity on any well-formed event.
        #[test]
        fn prop_event_json_round_trip(
            payload in arb_payload(),
            offset in 0.0f64..2_000_000.0,
            supi in "imsi-[0-9]{5,15}",
        ) {
            let event = NetworkEvent::new(clock().at(offset), Supi::new(supi), payload);
            let line = event.to_canonical_json();
            let back = NetworkEvent::from_canonical_json(&line).unwrap();
            prop_assert_eq!(back.clone(), event);
            // And the encoding itself is stable.
            prop_assert_eq!(back.to_canonical_json(), line);
        }
    }
}
