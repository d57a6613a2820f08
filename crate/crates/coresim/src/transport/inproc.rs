//! In-process transport: synchronous, deterministic handler dispatch.

use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use serde_json::Value;

use super::{Handler, HttpishRequest, HttpishResponse, Method, Transport, TransportError};

/// Deterministic in-process binding.
///
/// Requests are delivered as direct function calls on the sender's thread,
/// so for a single logical driver the total delivery order is exactly the
/// call order. A delivery log records that order for the determinism checks.
#[derive(Default)]
pub struct InprocTransport {
    routes: RwLock<HashMap<String, Handler>>,
    delivery_log: Mutex<Vec<String>>,
}

impl InprocTransport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Snapshot of every delivery so far, in order: `"METHOD base path"`.
    pub fn delivery_log(&self) -> Vec<String> {
        self.delivery_log.lock().unwrap().clone()
    }

    fn record(&self, method: Method, base: &str, path: &str) {
        self.delivery_log
            .lock()
            .unwrap()
            .push(format!("{method} {base} {path}"));
    }

    fn dispatch(
        &self,
        base: &str,
        request: HttpishRequest,
    ) -> Result<HttpishResponse, TransportError> {
        let handler = {
            let routes = self.routes.read().unwrap();
            routes.get(base).cloned()
        };
        match handler {
            Some(handler) => {
                self.record(request.method, base, &request.path);
                Ok(handler(&request))
            }
            None => Err(TransportError::Unreachable(base.to_string())),
        }
    }
}

impl Transport for InprocTransport {
    fn mount(&self, name: &str, handler: Handler) -> String {
        let base = format!("inproc://{name}");
        self.routes.write().unwrap().insert(base.clone(), handler);
        base
    }

    fn send(&self, request: HttpishRequest, to: &str) -> Result<HttpishResponse, TransportError> {
        self.dispatch(to, request)
    }

    fn send_to_uri(
        &self,
        uri: &str,
        method: Method,
        body: Option<Value>,
    ) -> Result<HttpishResponse, TransportError> {
        // Split a full URI into the mounted base and the remaining path:
        // the base is everything up to the first '/' after the authority.
        let (base, path) = match uri.strip_prefix("inproc://") {
            Some(rest) => match rest.find('/') {
                Some(idx) => (
                    format!("inproc://{}", &rest[..idx]),
                    rest[idx..].to_string(),
                ),
                None => (uri.to_string(), String::new()),
            },
            None => return Err(TransportError::Unreachable(uri.to_string())),
        };
        self.dispatch(
            &base,
            HttpishRequest {
                method,
                path,
                body,
            },
        )
    }
}
