use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use ludeme::engine::{library, GameSpec, LoadError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown game `{0}`")]
    Unknown(String),
    #[error("{path}: {source}")]
    Load { path: String, source: LoadError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Compiled games by id. Ids of `.lud` files are their file stems.
#[derive(Clone, Debug, Default)]
pub struct GameCatalog {
    games: BTreeMap<String, Arc<GameSpec>>,
}

impl GameCatalog {
    pub fn new() -> Self {
        GameCatalog::default()
    }

    /// The shipped game library.
    pub fn library() -> Self {
        let mut c = GameCatalog::new();
        for (id, _) in library::GAMES {
            c.insert(id, library::game(id).expect("library games compile"));
        }
        c
    }

    /// Every `.lud` file in a directory.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, CatalogError> {
        let dir = dir.as_ref();
        let io = |source| CatalogError::Io {
            path: dir.display().to_string(),
            source,
        };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "lud"))
            .collect();
        paths.sort();
        let mut c = GameCatalog::new();
        for path in paths {
            c.load_file(&path)?;
        }
        Ok(c)
    }

    /// Loads one file under its stem; returns the id.
    pub fn load_file(&mut self, path: &Path) -> Result<String, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let spec = GameSpec::from_text(&text).map_err(|source| CatalogError::Load {
            path: path.display().to_string(),
            source,
        })?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.insert(&id, spec);
        Ok(id)
    }

    pub fn insert(&mut self, id: &str, spec: GameSpec) {
        self.insert_shared(id, Arc::new(spec));
    }

    pub fn insert_shared(&mut self, id: &str, spec: Arc<GameSpec>) {
        self.games.insert(id.to_string(), spec);
    }

    pub fn get(&self, id: &str) -> Result<&Arc<GameSpec>, CatalogError> {
        self.games
            .get(id)
            .ok_or_else(|| CatalogError::Unknown(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.games.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Arc<GameSpec>)> {
        self.games.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.games.len()
    }

    pub fn is_empty(&self) -> bool {
        self.games.is_empty()
    }
}
