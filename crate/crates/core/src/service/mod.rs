//! REST advisor for a live game: sessions track the public pool sizes from
//! the advised player's side and every response carries fresh advice.

mod api;
mod session;

pub use api::{router, CreateRequest, MoveRequest, SessionView, WhatIfResponse};
pub use session::{
    advise, apply_action, what_if, Action, Advice, Answer, HistoryEntry, MoveError, Outcome, Pools,
    Session, Side, WhatIfPoint, MAX_POOL,
};

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// In-memory session store shared by all request handlers.
#[derive(Clone, Default)]
pub struct Store {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    sessions: Vec<Session>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, pools: Pools) -> Session {
        let session = Session::new(uuid::Uuid::new_v4().to_string(), pools);
        self.sessions
            .write()
            .expect("store lock")
            .insert(session.id.clone(), Arc::new(Mutex::new(session.clone())));
        session
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions.read().expect("store lock").get(id).cloned()
    }

    /// All sessions, sorted by id.
    pub fn sessions(&self) -> Vec<Session> {
        let map = self.sessions.read().expect("store lock");
        let mut out: Vec<Session> = map
            .values()
            .map(|s| s.lock().expect("session lock").clone())
            .collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    pub fn snapshot_json(&self) -> String {
        serde_json::to_string(&SnapshotDoc {
            sessions: self.sessions(),
        })
        .expect("sessions serialize")
    }

    /// Replaces the store with the sessions in `json`. Nothing changes unless
    /// every session parses and replays cleanly.
    pub fn restore_json(&self, json: &str) -> Result<usize> {
        let doc: SnapshotDoc =
            serde_json::from_str(json).map_err(|e| Error::Domain(format!("bad snapshot: {e}")))?;
        let mut map = HashMap::with_capacity(doc.sessions.len());
        for s in doc.sessions {
            s.replay()?;
            if map.contains_key(&s.id) {
                return Err(Error::Domain(format!(
                    "bad snapshot: duplicate session {}",
                    s.id
                )));
            }
            map.insert(s.id.clone(), Arc::new(Mutex::new(s)));
        }
        let count = map.len();
        *self.sessions.write().expect("store lock") = map;
        Ok(count)
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.snapshot_json())?;
        std::fs::rename(tmp, path)
    }

    pub fn load(&self, path: &Path) -> Result<usize> {
        let json = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        self.restore_json(&json)
    }
}

/// Serves the API on `addr` until Ctrl-C. With a snapshot path, sessions are
/// loaded at start (when the file exists) and written back on shutdown.
pub async fn serve(addr: SocketAddr, snapshot: Option<PathBuf>) -> Result<()> {
    let store = Store::new();
    if let Some(path) = snapshot.as_deref().filter(|p| p.exists()) {
        let n = store.load(path)?;
        info!("restored {n} sessions from {}", path.display());
    }
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::Domain(format!("cannot bind {addr}: {e}")))?;
    info!(
        "listening on {}",
        listener
            .local_addr()
            .map(|a| a.to_string())
            .unwrap_or_default()
    );
    axum::serve(listener, router(store.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::Domain(format!("server error: {e}")))?;
    if let Some(path) = snapshot {
        store.save(&path).map_err(|e| {
            Error::Domain(format!("cannot save snapshot to {}: {e}", path.display()))
        })?;
        info!("saved {} sessions to {}", store.len(), path.display());
    }
    Ok(())
}
