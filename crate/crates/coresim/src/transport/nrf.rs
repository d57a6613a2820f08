//! NRF-style service registry: NF profiles, registration and discovery.

use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::{Handler, HttpishResponse, Method};

/// The network function types known to the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NfType {
    Amf,
    Smf,
    Nwdaf,
}

impl std::fmt::Display for NfType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NfType::Amf => "AMF",
            NfType::Smf => "SMF",
            NfType::Nwdaf => "NWDAF",
        })
    }
}

impl FromStr for NfType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "AMF" => Ok(NfType::Amf),
            "SMF" => Ok(NfType::Smf),
            "NWDAF" => Ok(NfType::Nwdaf),
            other => Err(format!("unknown nf type '{other}'")),
        }
    }
}

/// One advertised service of an NF instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NfService {
    pub service_name: String,
    pub base_uri: String,
}

/// Profile an NF registers with the NRF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NfProfile {
    pub nf_instance_id: String,
    pub nf_type: NfType,
    pub services: Vec<NfService>,
}

impl NfProfile {
    fn validate(&self) -> Result<(), String> {
        if self.nf_instance_id.is_empty() {
            return Err("nfInstanceId must be non-empty".into());
        }
        for service in &self.services {
            if service.service_name.is_empty() {
                return Err("serviceName must be non-empty".into());
            }
        }
        Ok(())
    }
}

/// Outcome of a registration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegistrationOutcome {
    Created,
    Replaced,
}

/// The registry. Safe for concurrent reads and writes; profiles keep their
/// registration order, and re-registration with the same instance id
/// replaces the prior profile in place.
#[derive(Default)]
pub struct Nrf {
    profiles: RwLock<Vec<NfProfile>>,
}

impl Nrf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&self, profile: NfProfile) -> Result<RegistrationOutcome, String> {
        profile.validate()?;
        let mut profiles = self.profiles.write().unwrap();
        if let Some(existing) = profiles
            .iter_mut()
            .find(|p| p.nf_instance_id == profile.nf_instance_id)
        {
            *existing = profile;
            Ok(RegistrationOutcome::Replaced)
        } else {
            profiles.push(profile);
            Ok(RegistrationOutcome::Created)
        }
    }

    /// Base URIs of every matching service, in registration order.
    pub fn discover(&self, nf_type: NfType, service_name: &str) -> Vec<String> {
        self.profiles
            .read()
            .unwrap()
            .iter()
            .filter(|p| p.nf_type == nf_type)
            .flat_map(|p| {
                p.services
                    .iter()
                    .filter(|s| s.service_name == service_name)
                    .map(|s| s.base_uri.clone())
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.profiles.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Matching profiles (with only the matching services) for the discovery
    /// endpoint body.
    fn discover_instances(&self, nf_type: NfType, service_name: &str) -> Vec<serde_json::Value> {
        self.profiles
            .read()
            .unwrap()
            .iter()
            .filter(|p| p.nf_type == nf_type)
            .flat_map(|p| {
                p.services
                    .iter()
                    .filter(|s| s.service_name == service_name)
                    .map(|s| {
                        serde_json::json!({
                            "nfInstanceId": p.nf_instance_id,
                            "nfType": p.nf_type,
                            "serviceName": s.service_name,
                            "baseUri": s.base_uri,
                        })
                    })
            })
            .collect()
    }

    /// Request handler serving the registry endpoints:
    ///
    /// - `PUT /nnrf-nfm/v1/nf-instances/{nfInstanceId}` (body: profile)
    /// - `GET /nnrf-disc/v1/nf-instances?target-nf-type=X&service-name=Y`
    pub fn handler(self: &Arc<Self>) -> Handler {
        let nrf = Arc::clone(self);
        Arc::new(move |req| {
            let (path, query) = match req.path.split_once('?') {
                Some((p, q)) => (p, q),
                None => (req.path.as_str(), ""),
            };
            match (req.method, path) {
                (Method::Put, p) if p.starts_with("/nnrf-nfm/v1/nf-instances/") => {
                    let id = &p["/nnrf-nfm/v1/nf-instances/".len()..];
                    let profile: NfProfile = match req
                        .body
                        .clone()
                        .ok_or_else(|| "missing body".to_string())
                        .and_then(|b| serde_json::from_value(b).map_err(|e| e.to_string()))
                    {
                        Ok(p) => p,
                        Err(e) => return HttpishResponse::bad_request(e),
                    };
                    if profile.nf_instance_id != id {
                        return HttpishResponse::bad_request(format!(
                            "profile id '{}' does not match path id '{id}'",
                            profile.nf_instance_id
                        ));
                    }
                    match nrf.register(profile.clone()) {
                        Ok(RegistrationOutcome::Created) => HttpishResponse::created(
                            serde_json::to_value(&profile).expect("profile serializes"),
                        ),
                        Ok(RegistrationOutcome::Replaced) => HttpishResponse::ok(
                            serde_json::to_value(&profile).expect("profile serializes"),
                        ),
                        Err(e) => HttpishResponse::bad_request(e),
                    }
                }
                (Method::Get, "/nnrf-disc/v1/nf-instances") => {
                    let mut target = None;
                    let mut service = None;
                    for (k, v) in url::form_urlencoded::parse(query.as_bytes()) {
                        match k.as_ref() {
                            "target-nf-type" => target = Some(v.into_owned()),
                            "service-name" => service = Some(v.into_owned()),
                            _ => {}
                        }
                    }
                    let (target, service) = match (target, service) {
                        (Some(t), Some(s)) => (t, s),
                        _ => {
                            return HttpishResponse::bad_request(
                                "target-nf-type and service-name are required",
                            )
                        }
                    };
                    let nf_type = match target.parse::<NfType>() {
                        Ok(t) => t,
                        Err(e) => return HttpishResponse::bad_request(e),
                    };
                    HttpishResponse::ok(serde_json::json!({
                        "instances": nrf.discover_instances(nf_type, &service),
                    }))
                }
                _ => HttpishResponse::not_found(format!("no route for {} {}", req.method, path)),
            }
        })
    }
}
