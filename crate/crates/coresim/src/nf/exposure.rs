//! Event-exposure engine shared by the AMF and the SMF: subscription store,
//! event matching and notification dispatch with a retry queue.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Deserialize;
use serde_json::json;
use thiserror::Error;
use tracing::{debug, warn};

use crate::domain::{validate_event, EventKind, NetworkEvent, Supi};
use crate::transport::{HttpishRequest, HttpishResponse, Method, NfType, Transport};

/// Retry backoffs in simulated seconds after each failed delivery attempt.
/// After the last retry fails the notification is dropped and counted.
pub const RETRY_BACKOFF_S: [f64; 3] = [0.1, 1.0, 10.0];

/// One stored event subscription.
#[derive(Debug, Clone, PartialEq)]
pub struct Subscription {
    pub subscription_id: String,
    pub subscriber: String,
    pub notify_uri: String,
    pub event_kinds: BTreeSet<EventKind>,
    pub supi_filter: Option<BTreeSet<Supi>>,
}

impl Subscription {
    /// Whether this subscription matches an event's kind and SUPI.
    pub fn matches(&self, event: &NetworkEvent) -> bool {
        self.event_kinds.contains(&event.kind)
            && self
                .supi_filter
                .as_ref()
                .is_none_or(|filter| filter.contains(&event.supi))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SubscribeError {
    #[error("eventKinds must be non-empty")]
    EmptyKinds,
    #[error("event kind {kind} is not exposed by {nf}")]
    KindNotSupported { nf: NfType, kind: EventKind },
}

#[derive(Debug, Error, PartialEq)]
pub enum UnsubscribeError {
    #[error("unknown subscription id '{0}'")]
    UnknownId(String),
}

#[derive(Debug, Clone)]
struct PendingDelivery {
    due_us: u64,
    seq: u64,
    notify_uri: String,
    body: serde_json::Value,
    /// Retries already performed (0 after the first failed attempt).
    retries_done: usize,
}

impl PartialEq for PendingDelivery {
    fn eq(&self, other: &Self) -> bool {
        (self.due_us, self.seq) == (other.due_us, other.seq)
    }
}

impl Eq for PendingDelivery {}

impl PartialOrd for PendingDelivery {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PendingDelivery {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.due_us, self.seq).cmp(&(other.due_us, other.seq))
    }
}

/// Subscription store, matcher and notifier for one NF.
///
/// Subscription ids are per-NF monotonic counters (`AMF-SUB-000001`, ...)
/// so that logs stay deterministic. Dispatch order follows subscription
/// creation order.
pub struct ExposureEngine {
    nf: NfType,
    transport: Arc<dyn Transport>,
    subscriptions: IndexMap<String, Subscription>,
    counter: u64,
    local_log: Vec<NetworkEvent>,
    emitted_by_kind: BTreeMap<&'static str, u64>,
    dispatched_total: u64,
    retry_queue: BinaryHeap<Reverse<PendingDelivery>>,
    retry_seq: u64,
    dropped_notifications: u64,
}

impl ExposureEngine {
    /// `nf` must be AMF or SMF; the NWDAF exposes no events in this testbed.
    pub fn new(nf: NfType, transport: Arc<dyn Transport>) -> Self {
        assert!(
            matches!(nf, NfType::Amf | NfType::Smf),
            "exposure engine is only for AMF/SMF"
        );
        ExposureEngine {
            nf,
            transport,
            subscriptions: IndexMap::new(),
            counter: 0,
            local_log: Vec::new(),
            emitted_by_kind: BTreeMap::new(),
            dispatched_total: 0,
            retry_queue: BinaryHeap::new(),
            retry_seq: 0,
            dropped_notifications: 0,
        }
    }

    pub fn nf_type(&self) -> NfType {
        self.nf
    }

    fn kind_supported(&self, kind: EventKind) -> bool {
        match self.nf {
            NfType::Amf => kind.is_amf(),
            NfType::Smf => kind.is_smf(),
            NfType::Nwdaf => false,
        }
    }

    /// Stores a subscription and returns its id (`<NF>-SUB-<counter>`).
    pub fn subscribe(
        &mut self,
        subscriber: impl Into<String>,
        notify_uri: impl Into<String>,
        event_kinds: &[EventKind],
        supi_filter: Option<BTreeSet<Supi>>,
    ) -> Result<String, SubscribeError> {
        if event_kinds.is_empty() {
            return Err(SubscribeError::EmptyKinds);
        }
        if let Some(kind) = event_kinds.iter().find(|k| !self.kind_supported(**k)) {
            return Err(SubscribeError::KindNotSupported {
                nf: self.nf,
                kind: *kind,
            });
        }
        self.counter += 1;
        let id = format!("{}-SUB-{:06}", self.nf, self.counter);
        self.subscriptions.insert(
            id.clone(),
            Subscription {
                subscription_id: id.clone(),
                subscriber: subscriber.into(),
                notify_uri: notify_uri.into(),
                event_kinds: event_kinds.iter().copied().collect(),
                supi_filter,
            },
        );
        Ok(id)
    }

    /// Removes a subscription; later events are no longer delivered to it.
    pub fn unsubscribe(&mut self, subscription_id: &str) -> Result<(), UnsubscribeError> {
        self.subscriptions
            .shift_remove(subscription_id)
            .map(|_| ())
            .ok_or_else(|| UnsubscribeError::UnknownId(subscription_id.to_string()))
    }

    pub fn subscription_count(&self) -> usize {
        self.subscriptions.len()
    }

    pub fn subscriptions(&self) -> impl Iterator<Item = &Subscription> {
        self.subscriptions.values()
    }

    /// Matches `event` against the stored subscriptions and POSTs one
    /// notification per match to its notify URI. The event is appended to
    /// the NF's local log regardless of subscriber count. Returns the number
    /// of notifications dispatched.
    pub fn send_event_notification(&mut self, event: &NetworkEvent) -> usize {
        debug_assert!(validate_event(event).is_empty(), "invalid event emitted");
        self.local_log.push(event.clone());
        *self.emitted_by_kind.entry(event.kind.name()).or_insert(0) += 1;

        let matched: Vec<(String, String)> = self
            .subscriptions
            .values()
            .filter(|sub| sub.matches(event))
            .map(|sub| (sub.subscription_id.clone(), sub.notify_uri.clone()))
            .collect();

        let now_s = event.timestamp.offset_s;
        for (subscription_id, notify_uri) in &matched {
            let body = json!({
                "subscriptionId": subscription_id,
                "event": event,
            });
            self.deliver(notify_uri, body, 0, now_s);
        }
        self.dispatched_total += matched.len() as u64;
        matched.len()
    }

    /// One delivery attempt; on failure schedules the next retry or drops.
    fn deliver(&mut self, notify_uri: &str, body: serde_json::Value, retries_done: usize, now_s: f64) {
        let outcome = self
            .transport
            .send_to_uri(notify_uri, Method::Post, Some(body.clone()));
        let failed = match outcome {
            Ok(resp) if resp.status == 204 => false,
            Ok(resp) => {
                debug!(uri = notify_uri, status = resp.status, "notification rejected");
                true
            }
            Err(e) => {
                debug!(uri = notify_uri, error = %e, "notification delivery failed");
                true
            }
        };
        if !failed {
            return;
        }
        if retries_done >= RETRY_BACKOFF_S.len() {
            warn!(uri = notify_uri, "notification dropped after retries");
            self.dropped_notifications += 1;
            return;
        }
        let due_s = now_s + RETRY_BACKOFF_S[retries_done];
        self.retry_seq += 1;
        self.retry_queue.push(Reverse(PendingDelivery {
            due_us: (due_s * 1e6).round() as u64,
            seq: self.retry_seq,
            notify_uri: notify_uri.to_string(),
            body,
            retries_done: retries_done + 1,
        }));
    }

    /// Re-attempts every retry that is due at simulated time `now_s`.
    pub fn pump_retries(&mut self, now_s: f64) {
        let now_us = (now_s * 1e6).round() as u64;
        while let Some(Reverse(head)) = self.retry_queue.peek() {
            if head.due_us > now_us {
                break;
            }
            let Reverse(pending) = self.retry_queue.pop().expect("peeked entry");
            self.deliver(
                &pending.notify_uri,
                pending.body,
                pending.retries_done,
                now_s,
            );
        }
    }

    pub fn pending_retries(&self) -> usize {
        self.retry_queue.len()
    }

    pub fn local_log(&self) -> &[NetworkEvent] {
        &self.local_log
    }

    pub fn emitted_by_kind(&self) -> &BTreeMap<&'static str, u64> {
        &self.emitted_by_kind
    }

    pub fn emitted_total(&self) -> u64 {
        self.emitted_by_kind.values().sum()
    }

    pub fn dispatched_total(&self) -> u64 {
        self.dispatched_total
    }

    pub fn dropped_notifications(&self) -> u64 {
        self.dropped_notifications
    }

    /// Serves the exposure endpoints under `/<prefix>/v1/subscriptions`:
    /// POST creates (201 with the id), DELETE by id removes (204 / 404).
    /// Returns `None` for paths outside the exposure service.
    pub fn handle_request(&mut self, req: &HttpishRequest) -> Option<HttpishResponse> {
        let prefix = match self.nf {
            NfType::Amf => "/namf-evts/v1/subscriptions",
            NfType::Smf => "/nsmf-evts/v1/subscriptions",
            NfType::Nwdaf => return None,
        };

        if req.method == Method::Post && req.path == prefix {
            #[derive(Deserialize)]
            #[serde(rename_all = "camelCase", deny_unknown_fields)]
            struct SubscribeBody {
                subscriber: String,
                notify_uri: String,
                event_kinds: Vec<String>,
                #[serde(default)]
                supi_filter: Option<Vec<String>>,
            }

            let body: SubscribeBody = match req
                .body
                .clone()
                .ok_or_else(|| "missing body".to_string())
                .and_then(|b| serde_json::from_value(b).map_err(|e| e.to_string()))
            {
                Ok(b) => b,
                Err(e) => return Some(HttpishResponse::bad_request(e)),
            };

            let mut kinds = Vec::with_capacity(body.event_kinds.len());
            for name in &body.event_kinds {
                match EventKind::from_name(name) {
                    Some(kind) => kinds.push(kind),
                    None => {
                        return Some(HttpishResponse::bad_request(format!(
                            "unknown event kind '{name}'"
                        )))
                    }
                }
            }
            let filter = body
                .supi_filter
                .map(|supis| supis.into_iter().map(Supi::new).collect::<BTreeSet<_>>());

            return Some(
                match self.subscribe(body.subscriber, body.notify_uri, &kinds, filter) {
                    Ok(id) => HttpishResponse::created(json!({ "subscriptionId": id })),
                    Err(e) => HttpishResponse::bad_request(e.to_string()),
                },
            );
        }

        if req.method == Method::Delete {
            if let Some(id) = req.path.strip_prefix(prefix).and_then(|r| r.strip_prefix('/')) {
                return Some(match self.unsubscribe(id) {
                    Ok(()) => HttpishResponse::no_content(),
                    Err(e) => HttpishResponse::not_found(e.to_string()),
                });
            }
        }

        None
    }
}
