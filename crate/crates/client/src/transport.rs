use crate::error::TransportFailure;
use crate::request::Endpoint;

/// A raw HTTP exchange result: status code plus body text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

/// One-shot request sender. The retry loop sits above this.
pub trait Transport: Send + Sync {
    fn send(&self, endpoint: &Endpoint, body: &str) -> Result<HttpResponse, TransportFailure>;
}

/// Live transport over HTTPS. The API key is read from the endpoint's
/// `api_key_env` variable at send time and never stored.
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Self {
        HttpTransport {
            client: reqwest::blocking::Client::new(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for HttpTransport {
    fn send(&self, endpoint: &Endpoint, body: &str) -> Result<HttpResponse, TransportFailure> {
        let mut req = self
            .client
            .post(&endpoint.base_url)
            .header("Content-Type", "application/json")
            .body(body.to_owned());
        if let Some(env_name) = &endpoint.api_key_env {
            if let Ok(key) = std::env::var(env_name) {
                req = req.header("Authorization", format!("Bearer {key}"));
            }
        }
        let resp = req
            .send()
            .map_err(|e| TransportFailure::Connect(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp
            .text()
            .map_err(|e| TransportFailure::Connect(format!("reading body: {e}")))?;
        Ok(HttpResponse { status, body })
    }
}
