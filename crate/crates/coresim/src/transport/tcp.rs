//! TCP binding: HTTP/1.1 with JSON bodies over loopback.
//!
//! Each mounted service gets its own listener on an ephemeral port and a
//! single accept/dispatch thread, so a destination processes requests
//! serially in arrival order just like the in-process binding.

use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use serde_json::Value;

use super::{Handler, HttpishRequest, HttpishResponse, Method, Transport, TransportError};

struct ServerHandle {
    server: Arc<tiny_http::Server>,
    thread: Option<JoinHandle<()>>,
}

/// HTTP/1.1 binding. One in-flight request per connection.
pub struct TcpTransport {
    agent: ureq::Agent,
    servers: Mutex<Vec<ServerHandle>>,
}

impl Default for TcpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl TcpTransport {
    pub fn new() -> Self {
        let config = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .build();
        TcpTransport {
            agent: config.new_agent(),
            servers: Mutex::new(Vec::new()),
        }
    }

    /// Stops every server thread. Called on drop as well.
    pub fn shutdown(&self) {
        let mut servers = self.servers.lock().unwrap();
        for handle in servers.iter() {
            handle.server.unblock();
        }
        for handle in servers.iter_mut() {
            if let Some(thread) = handle.thread.take() {
                let _ = thread.join();
            }
        }
        servers.clear();
    }

    fn serve(server: Arc<tiny_http::Server>, handler: Handler) {
        for mut request in server.incoming_requests() {
            let method = match *request.method() {
                tiny_http::Method::Get => Method::Get,
                tiny_http::Method::Post => Method::Post,
                tiny_http::Method::Put => Method::Put,
                tiny_http::Method::Delete => Method::Delete,
                _ => {
                    let _ = request.respond(
                        tiny_http::Response::from_string("{\"error\":\"unsupported method\"}")
                            .with_status_code(400),
                    );
                    continue;
                }
            };

            let mut body_text = String::new();
            if request.as_reader().read_to_string(&mut body_text).is_err() {
                let _ = request.respond(
                    tiny_http::Response::from_string("{\"error\":\"unreadable body\"}")
                        .with_status_code(400),
                );
                continue;
            }
            let body = if body_text.trim().is_empty() {
                None
            } else {
                match serde_json::from_str::<Value>(&body_text) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        let _ = request.respond(
                            tiny_http::Response::from_string(format!(
                                "{{\"error\":\"invalid json: {e}\"}}"
                            ))
                            .with_status_code(400),
                        );
                        continue;
                    }
                }
            };

            let response = handler(&HttpishRequest {
                method,
                path: request.url().to_string(),
                body,
            });

            let json_header = tiny_http::Header::from_bytes(
                &b"Content-Type"[..],
                &b"application/json"[..],
            )
            .expect("static header");
            let raw = match &response.body {
                Some(value) => tiny_http::Response::from_string(value.to_string())
                    .with_status_code(response.status)
                    .with_header(json_header),
                None => tiny_http::Response::from_string(String::new())
                    .with_status_code(response.status),
            };
            let _ = request.respond(raw);
        }
    }

    fn request(
        &self,
        uri: &str,
        method: Method,
        body: Option<Value>,
    ) -> Result<HttpishResponse, TransportError> {
        let io_err = |e: ureq::Error| match e {
            ureq::Error::ConnectionFailed | ureq::Error::Io(_) => {
                TransportError::Unreachable(uri.to_string())
            }
            other => TransportError::Io {
                uri: uri.to_string(),
                detail: other.to_string(),
            },
        };

        let result = match (method, body) {
            (Method::Get, _) => self.agent.get(uri).call(),
            (Method::Delete, _) => self.agent.delete(uri).call(),
            (Method::Post, Some(body)) => self.agent.post(uri).send_json(body),
            (Method::Post, None) => self.agent.post(uri).send_empty(),
            (Method::Put, Some(body)) => self.agent.put(uri).send_json(body),
            (Method::Put, None) => self.agent.put(uri).send_empty(),
        };
        let mut response = result.map_err(io_err)?;

        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError::Protocol {
                uri: uri.to_string(),
                detail: e.to_string(),
            })?;
        let body = if text.trim().is_empty() {
            None
        } else {
            Some(
                serde_json::from_str(&text).map_err(|e| TransportError::Protocol {
                    uri: uri.to_string(),
                    detail: format!("non-JSON response body: {e}"),
                })?,
            )
        };
        Ok(HttpishResponse { status, body })
    }
}

impl Transport for TcpTransport {
    fn mount(&self, _name: &str, handler: Handler) -> String {
        let server = Arc::new(
            tiny_http::Server::http("127.0.0.1:0").expect("bind loopback listener"),
        );
        let port = match server.server_addr() {
            tiny_http::ListenAddr::IP(addr) => addr.port(),
            #[allow(unreachable_patterns)]
            _ => panic!("loopback listener must have an IP address"),
        };
        let base = format!("http://127.0.0.1:{port}");
        let thread = std::thread::spawn({
            let server = Arc::clone(&server);
            move || Self::serve(server, handler)
        });
        self.servers.lock().unwrap().push(ServerHandle {
            server,
            thread: Some(thread),
        });
        base
    }

    fn send(&self, request: HttpishRequest, to: &str) -> Result<HttpishResponse, TransportError> {
        let uri = format!("{to}{}", request.path);
        self.request(&uri, request.method, request.body)
    }

    fn send_to_uri(
        &self,
        uri: &str,
        method: Method,
        body: Option<Value>,
    ) -> Result<HttpishResponse, TransportError> {
        self.request(uri, method, body)
    }
}

impl Drop for TcpTransport {
    fn drop(&mut self) {
        self.shutdown();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_tcp_round_trip() {
        let t = TcpTransport::new();
        let base = t.mount(
            "svc",
            Arc::new(|req: &HttpishRequest| {
                HttpishResponse::created(serde_json::json!({
                    "path": req.path,
                    "body": req.body,
                }))
            }),
        );
        let resp = t
            .send(
                HttpishRequest::post("/x/y?q=1", serde_json::json!({"n": 42})),
                &base,
            )
            .unwrap();
        assert_eq!(resp.status, 201);
        let body = resp.body.unwrap();
        assert_eq!(body["path"], "/x/y?q=1");
        assert_eq!(body["body"]["n"], 42);
        t.shutdown();
    }

    #[test]
    fn test_tcp_unreachable() {
        let t = TcpTransport::new();
        // Nothing listens on this port.
        let err = t
            .send(HttpishRequest::get("/x"), "http://127.0.0.1:9")
            .unwrap_err();
        assert!(matches!(
            err,
            TransportError::Unreachable(_) | TransportError::Io { .. }
        ));
    }

    #[test]
    fn test_tcp_no_content_response() {
        let t = TcpTransport::new();
        let base = t.mount(
            "svc",
            Arc::new(|_req: &HttpishRequest| HttpishResponse::no_content()),
        );
        let resp = t.send(HttpishRequest::delete("/sub/1"), &base).unwrap();
        assert_eq!(resp.status, 204);
        assert!(resp.body.is_none());
        t.shutdown();
    }
}
