use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use super::{
    build_prompt, grammar_check, parse_reasoning, BlacklistEntry, Demo, Provider, ProviderError, ReasoningResult,
    Request, Violation,
};

pub const DEFAULT_RETRY_LIMIT: u32 = 3;

pub const ENV_ENDPOINT: &str = "HBTP_LLM_ENDPOINT";
pub const ENV_MODEL: &str = "HBTP_LLM_MODEL";
pub const ENV_KEY: &str = "HBTP_LLM_KEY";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheMode {
    #[default]
    Off,
    /// Serve hits from the file and record new completions into it.
    ReadWrite(PathBuf),
    /// Serve only recorded completions; a miss is an error.
    Replay(PathBuf),
}

/// Settings for a chat-completion endpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlmConfig {
    /// Base URL; `/chat/completions` is appended unless already present.
    pub endpoint: String,
    pub model: String,
    #[serde(skip_serializing, default)]
    pub key: Option<String>,
    pub temperature: f64,
    /// Total attempts per query, the first one included.
    pub retry_limit: u32,
    pub timeout_ms: u64,
    pub cache: CacheMode,
    pub demos: Vec<Demo>,
}

impl LlmConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            key: None,
            temperature: 0.0,
            retry_limit: DEFAULT_RETRY_LIMIT,
            timeout_ms: 60_000,
            cache: CacheMode::Off,
            demos: Demo::defaults(),
        }
    }

    /// Reads endpoint, model and key from `HBTP_LLM_ENDPOINT`,
    /// `HBTP_LLM_MODEL` and `HBTP_LLM_KEY`.
    pub fn from_env() -> Result<Self, ProviderError> {
        let var = |name: &str| std::env::var(name).ok().filter(|v| !v.is_empty());
        let endpoint = var(ENV_ENDPOINT).ok_or_else(|| ProviderError::Config(format!("{ENV_ENDPOINT} is not set")))?;
        let model = var(ENV_MODEL).ok_or_else(|| ProviderError::Config(format!("{ENV_MODEL} is not set")))?;
        let mut c = Self::new(endpoint, model);
        c.key = var(ENV_KEY);
        Ok(c)
    }

    pub fn url(&self) -> String {
        let base = self.endpoint.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }
}

/// Hex SHA-256 of the prompt, used as the cache key.
pub fn prompt_hash(prompt: &str) -> String {
    Sha256::digest(prompt.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Client for an OpenAI-compatible chat-completion endpoint.
pub struct LlmProvider {
    config: LlmConfig,
    agent: ureq::Agent,
    cache: Mutex<BTreeMap<String, String>>,
}

fn load_cache(path: &Path, must_exist: bool) -> Result<BTreeMap<String, String>, ProviderError> {
    match std::fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text).map_err(|e| ProviderError::Cache(format!("{}: {e}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound && !must_exist => Ok(BTreeMap::new()),
        Err(e) => Err(ProviderError::Cache(format!("{}: {e}", path.display()))),
    }
}

impl LlmProvider {
    pub fn new(config: LlmConfig) -> Result<Self, ProviderError> {
        if config.retry_limit == 0 {
            return Err(ProviderError::Config("retry limit must be at least 1".into()));
        }
        let cache = match &config.cache {
            CacheMode::Off => BTreeMap::new(),
            CacheMode::ReadWrite(p) => load_cache(p, false)?,
            CacheMode::Replay(p) => load_cache(p, true)?,
        };
        let agent = ureq::Agent::new_with_config(
            ureq::Agent::config_builder()
                .timeout_global(Some(Duration::from_millis(config.timeout_ms)))
                .http_status_as_error(false)
                .build(),
        );
        Ok(Self {
            config,
            agent,
            cache: Mutex::new(cache),
        })
    }

    pub fn config(&self) -> &LlmConfig {
        &self.config
    }

    /// Completion text for `prompt`, from the cache when possible.
    pub fn complete(&self, prompt: &str) -> Result<String, ProviderError> {
        let key = prompt_hash(prompt);
        if self.config.cache != CacheMode::Off {
            if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
                return Ok(hit.clone());
            }
        }
        if matches!(self.config.cache, CacheMode::Replay(_)) {
            return Err(ProviderError::CacheMiss(key));
        }
        let text = self.post(prompt)?;
        if let CacheMode::ReadWrite(path) = &self.config.cache {
            let mut cache = self.cache.lock().expect("cache lock");
            cache.insert(key, text.clone());
            let body = serde_json::to_string_pretty(&*cache).expect("string maps serialize");
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, body)
                .and_then(|_| std::fs::rename(&tmp, path))
                .map_err(|e| ProviderError::Cache(format!("{}: {e}", path.display())))?;
        }
        Ok(text)
    }

    fn post(&self, prompt: &str) -> Result<String, ProviderError> {
        let body = json!({
            "model": self.config.model,
            "temperature": self.config.temperature,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut req = self.agent.post(self.config.url());
        if let Some(k) = &self.config.key {
            req = req.header("Authorization", format!("Bearer {k}"));
        }
        let mut resp = req.send_json(&body).map_err(|e| ProviderError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ProviderError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(ProviderError::Status { status, body: text });
        }
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| ProviderError::Response(e.to_string()))?;
        v["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| ProviderError::Response("no choices[0].message.content".into()))
    }
}

impl Provider for LlmProvider {
    fn query(&self, req: &Request) -> Result<ReasoningResult, ProviderError> {
        let mut blacklist = Vec::new();
        let mut last = Vec::new();
        for attempt in 1..=self.config.retry_limit {
            let prompt = build_prompt(req.domain, req.init, req.goal, &self.config.demos, &blacklist, req.feedback);
            let text = self.complete(&prompt)?;
            last = match parse_reasoning(&text, req.domain) {
                Ok(mut r) => {
                    let v = grammar_check(&r, req.domain, req.space);
                    if v.is_empty() {
                        r.attempts = attempt;
                        return Ok(r);
                    }
                    v
                }
                Err(e) => vec![Violation::Malformed(e.to_string())],
            };
            blacklist.push(BlacklistEntry {
                attempt,
                violations: last.iter().map(|v| v.to_string()).collect(),
            });
        }
        Err(ProviderError::RetriesExhausted {
            attempts: self.config.retry_limit,
            violations: last,
        })
    }

    fn kind(&self) -> &'static str {
        "llm"
    }
}
