//! Local network service: game catalog, human-vs-agent sessions, the
//! leaderboard and live match feeds over websockets.
//!
//! | route | |
//! |---|---|
//! | `GET /games` | catalog |
//! | `POST /sessions` | new session `{game, handle, human_seat?, agent?, seed?}` |
//! | `GET /sessions/{id}` | session view |
//! | `POST /sessions/{id}/moves` | `{move, ply?}` |
//! | `POST /sessions/{id}/resign` | |
//! | `POST /matches` | agent-vs-agent exhibition `{game, agents, per_move_ms?}` |
//! | `GET /leaderboard` | rating table |
//! | `GET /live/{match}` | websocket: snapshot, then events |

mod api;
mod feed;
mod hub;

use std::net::SocketAddr;
use std::sync::Arc;

pub use api::router;
pub use feed::{Feed, Feeds};
pub use hub::{
    BoardView, CellView, ClockView, GameInfo, Hub, HumanClock, NewMatch, NewSession, RegionView,
    ServiceConfig, ServiceError, SessionView, SubmitMove,
};

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, hub: Arc<Hub>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(hub)).await
}
