//! JSON-over-HTTP machine translation adapter.
//!
//! Request (POST to `endpoint`):
//!
//! ```json
//! {"text": "send", "from": "eng", "to": "vie"}
//! ```
//!
//! with the API key, if any, in an `X-Api-Key` header. Expected response:
//!
//! ```json
//! {"translations": ["gửi", "gửi đi"]}
//! ```
//!
//! Any transport failure or non-2xx status is reported as a retryable
//! [`ProviderError::Transport`].

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use parking_lot::{Condvar, Mutex};
use serde::{Deserialize, Serialize};

use super::{
    ensure_supported, split_alternatives, Capabilities, LangPair, ProviderError,
    TranslationProvider,
};
use crate::wn_data::Lang;

#[derive(Debug, Clone)]
pub struct HttpProviderConfig {
    pub name: String,
    pub endpoint: String,
    pub api_key: Option<String>,
    pub pairs: BTreeSet<LangPair>,
    /// Maximum requests per second; `None` for unlimited.
    pub qps: Option<f64>,
    pub max_in_flight: usize,
    pub timeout: Duration,
}

#[derive(Serialize)]
struct Request<'a> {
    text: &'a str,
    from: &'a str,
    to: &'a str,
}

#[derive(Deserialize)]
struct Response {
    translations: Vec<String>,
}

pub struct HttpProvider {
    config: HttpProviderConfig,
    client: reqwest::blocking::Client,
    in_flight: Mutex<usize>,
    slot_freed: Condvar,
    next_slot: Mutex<Instant>,
}

impl HttpProvider {
    pub fn new(config: HttpProviderConfig) -> Result<Self, ProviderError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| ProviderError::Transport {
                provider: config.name.clone(),
                message: e.to_string(),
            })?;
        Ok(HttpProvider {
            config,
            client,
            in_flight: Mutex::new(0),
            slot_freed: Condvar::new(),
            next_slot: Mutex::new(Instant::now()),
        })
    }

    fn acquire(&self) {
        let mut n = self.in_flight.lock();
        while *n >= self.config.max_in_flight.max(1) {
            self.slot_freed.wait(&mut n);
        }
        *n += 1;
    }

    fn release(&self) {
        *self.in_flight.lock() -= 1;
        self.slot_freed.notify_one();
    }

    fn throttle(&self) {
        let Some(qps) = self.config.qps.filter(|q| *q > 0.0) else {
            return;
        };
        let interval = Duration::from_secs_f64(1.0 / qps);
        let wait = {
            let mut next = self.next_slot.lock();
            let now = Instant::now();
            let start = (*next).max(now);
            *next = start + interval;
            start - now
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }

    fn request(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError> {
        let transport = |message: String| ProviderError::Transport {
            provider: self.config.name.clone(),
            message,
        };
        let mut req = self.client.post(&self.config.endpoint).json(&Request {
            text: word,
            from: src.as_str(),
            to: dst.as_str(),
        });
        if let Some(key) = &self.config.api_key {
            req = req.header("X-Api-Key", key);
        }
        let resp = req.send().map_err(|e| transport(e.to_string()))?;
        let status = resp.status();
        if !status.is_success() {
            return Err(transport(format!("HTTP {status}")));
        }
        let body: Response = resp.json().map_err(|e| transport(e.to_string()))?;
        Ok(split_alternatives(
            body.translations.iter().map(String::as_str),
        ))
    }
}

impl TranslationProvider for HttpProvider {
    fn name(&self) -> &str {
        &self.config.name
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::Pairs(self.config.pairs.clone())
    }

    fn translate(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError> {
        ensure_supported(self, src, dst)?;
        self.throttle();
        self.acquire();
        let result = self.request(word, src, dst);
        self.release();
        result
    }
}
