use serde::Deserialize;

use ilm_core::harness::{Caps, CorpusSpec};
use ilm_core::ilm::MAX_VERTICES_ENV;
use ilm_core::Result;

/// Overrides read from `--config`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub caps: Option<Caps>,
    pub seed: Option<u64>,
    pub max_steps: Option<usize>,
    pub record_runtime: Option<bool>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        Ok(serde_json::from_str(text)?)
    }

    /// Configured caps, with `ILM_MAX_VERTICES` taking precedence.
    pub fn caps(&self) -> Caps {
        let mut caps = self.caps.clone().unwrap_or_default();
        if let Some(v) = env_max_vertices() {
            caps.max_vertices = v;
        }
        caps
    }

    pub fn apply(&self, mut corpus: CorpusSpec) -> CorpusSpec {
        if let Some(c) = &self.caps {
            corpus.caps = c.clone();
        }
        if let Some(v) = env_max_vertices() {
            corpus.caps.max_vertices = v;
        }
        if let Some(s) = self.seed {
            corpus.seed = s;
        }
        if let Some(t) = self.max_steps {
            corpus.max_steps = t;
        }
        if let Some(r) = self.record_runtime {
            corpus.record_runtime = r;
        }
        corpus
    }
}

fn env_max_vertices() -> Option<usize> {
    std::env::var(MAX_VERTICES_ENV).ok()?.trim().parse().ok()
}
