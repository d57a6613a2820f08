//! Service-based plumbing: a request/response transport carrying JSON
//! messages plus the NRF-style registry.
//!
//! Two bindings exist. The in-process binding delivers requests as direct,
//! synchronous handler calls and is fully deterministic; the TCP binding
//! speaks plain HTTP/1.1 with JSON bodies (no TLS, no auth — the testbed is
//! a closed environment). Both are observationally equivalent for a
//! single-client serial workload.

mod inproc;
mod nrf;
mod tcp;

use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

pub use inproc::InprocTransport;
pub use nrf::{Nrf, NfProfile, NfService, NfType, RegistrationOutcome};
pub use tcp::TcpTransport;

/// Request methods supported by the testbed services.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Get,
    Post,
    Put,
    Delete,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Get => "GET",
            Method::Post => "POST",
            Method::Put => "PUT",
            Method::Delete => "DELETE",
        })
    }
}

/// statuses any handler is allowed to return.
pub const ALLOWED_STATUSES: [u16; 6] = [200, 201, 204, 400, 404, 500];

/// A JSON-over-anything request: method, absolute path (with optional query
/// string) and an optional JSON body.
#[derive(Debug, Clone, PartialEq)]
pub struct HttpishRequest {
    pub method: Method,
    pub path: String,
    pub body: Option<Value>,
}

impl HttpishRequest {
    pub fn get(path: impl Into<String>) -> Self {
        HttpishRequest {
            method: Method::Get,
            path: path.into(),
            body: None,
        }
    }

    pub fn post(path: impl Into<String>, body: Value) -> Self {
        HttpishRequest {
            method: Method::Post,
            path: path.into(),
            body: Some(body),
        }
    }

    pub fn put(path: impl Into<String>, body: Value) -> Self {
        HttpishRequest {
            method: Method::Put,
            path: path.into(),
            body: Some(body),
        }
    }

    pub fn delete(path: impl Into<String>) -> Self {
        HttpishRequest {
            method: Method::Delete,
            path: path.into(),
            body: None,
        }
    }
}

/// Response with one of the [`ALLOWED_STATUSES`] and an optional JSON body.
#[derive(Debug, Clone, PartialEq)]
pub struct HttpishResponse {
    pub status: u16,
    pub body: Option<Value>,
}

impl HttpishResponse {
    pub fn new(status: u16, body: Option<Value>) -> Self {
        debug_assert!(ALLOWED_STATUSES.contains(&status), "status {status}");
        HttpishResponse { status, body }
    }

    pub fn ok(body: Value) -> Self {
        Self::new(200, Some(body))
    }

    pub fn created(body: Value) -> Self {
        Self::new(201, Some(body))
    }

    pub fn no_content() -> Self {
        Self::new(204, None)
    }

    pub fn bad_request(msg: impl Into<String>) -> Self {
        Self::new(400, Some(serde_json::json!({ "error": msg.into() })))
    }

    pub fn not_found(msg: impl Into<String>) -> Self {
        Self::new(404, Some(serde_json::json!({ "error": msg.into() })))
    }

    pub fn server_error(msg: impl Into<String>) -> Self {
        Self::new(500, Some(serde_json::json!({ "error": msg.into() })))
    }

    pub fn is_success(&self) -> bool {
        matches!(self.status, 200 | 201 | 204)
    }
}

/// Errors raised by the transport itself, distinct from any HTTP-ish status
/// a handler may return.
#[derive(Debug, Error)]
pub enum TransportError {
    #[error("destination unreachable: {0}")]
    Unreachable(String),
    #[error("transport i/o failure talking to {uri}: {detail}")]
    Io { uri: String, detail: String },
    #[error("protocol violation from {uri}: {detail}")]
    Protocol { uri: String, detail: String },
}

/// Request handler of one mounted service.
pub type Handler = Arc<dyn Fn(&HttpishRequest) -> HttpishResponse + Send + Sync>;

/// A request/response binding. Destination handlers process requests
/// serially in arrival order on both bindings.
pub trait Transport: Send + Sync {
    /// Mounts a service and returns its base URI.
    fn mount(&self, name: &str, handler: Handler) -> String;

    /// Delivers `request` to the service at base URI `to` and returns its
    /// response.
    fn send(&self, request: HttpishRequest, to: &str) -> Result<HttpishResponse, TransportError>;

    /// Delivers to a full URI (base + path), e.g. a subscription's notify
    /// URI.
    fn send_to_uri(
        &self,
        uri: &str,
        method: Method,
        body: Option<Value>,
    ) -> Result<HttpishResponse, TransportError>;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_request_constructors() {
        let r = HttpishRequest::post("/x", serde_json::json!({"a": 1}));
        assert_eq!(r.method, Method::Post);
        assert_eq!(r.path, "/x");
        assert!(r.body.is_some());
        assert_eq!(HttpishRequest::delete("/y").body, None);
    }

    #[test]
    fn test_response_helpers() {
        assert_eq!(HttpishResponse::no_content().status, 204);
        assert!(HttpishResponse::ok(serde_json::json!({})).is_success());
        assert!(!HttpishResponse::not_found("x").is_success());
        let bad = HttpishResponse::bad_request("broken");
        assert_eq!(bad.body.unwrap()["error"], "broken");
    }
}
