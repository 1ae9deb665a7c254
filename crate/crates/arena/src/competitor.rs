use std::fmt;
use std::sync::Arc;

use ludeme::agents::{Agent, AgentConfig, AgentError};
use ludeme::rng::derive_seed;
use sha2::{Digest, Sha256};

/// Builds a fresh agent instance from a per-match seed.
pub type AgentFactory = Arc<dyn Fn(u64) -> Box<dyn Agent> + Send + Sync>;

/// An entrant: a stable id, a version hash identifying the uploaded
/// agent, and a factory for instances.
#[derive(Clone)]
pub struct Competitor {
    pub id: String,
    pub version: String,
    factory: AgentFactory,
}

impl Competitor {
    /// A built-in agent; its version is a hash of its configuration.
    pub fn builtin(id: &str, config: AgentConfig) -> Result<Self, AgentError> {
        config.build()?;
        let version = version_hash(&config.to_string());
        let base = config.seed;
        Ok(Competitor {
            id: id.into(),
            version,
            factory: Arc::new(move |seed| {
                let mut c = config.clone();
                c.seed = derive_seed(base, seed);
                c.build().expect("configuration checked at registration")
            }),
        })
    }

    /// Any agent, with a caller-chosen version label hashed into the version.
    pub fn custom(
        id: &str,
        version: &str,
        factory: impl Fn(u64) -> Box<dyn Agent> + Send + Sync + 'static,
    ) -> Self {
        Competitor {
            id: id.into(),
            version: version_hash(version),
            factory: Arc::new(factory),
        }
    }

    pub fn instantiate(&self, seed: u64) -> Box<dyn Agent> {
        (self.factory)(seed)
    }
}

impl fmt::Debug for Competitor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Competitor")
            .field("id", &self.id)
            .field("version", &self.version)
            .finish()
    }
}

pub(crate) fn version_hash(text: &str) -> String {
    hex::encode(&Sha256::digest(text.as_bytes())[..6])
}
