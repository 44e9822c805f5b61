use crate::model::Pair;
use crate::TerminalId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("a network needs at least 2 terminals, got {0}")]
    TooFewTerminals(usize),
    #[error("terminal {terminal} out of range for a network of {m} terminals")]
    TerminalOutOfRange { terminal: TerminalId, m: usize },
    #[error("terminal {0} cannot be paired with itself")]
    SelfPair(TerminalId),
    #[error("pair {pair} has {remaining} unused key bits, {requested} requested")]
    InsufficientKeyMaterial {
        pair: Pair,
        requested: usize,
        remaining: usize,
    },
    #[error("{what}: instance size {actual} exceeds the limit of {limit}")]
    InstanceTooLarge {
        what: &'static str,
        limit: u64,
        actual: u64,
    },
    #[error("graph is disconnected")]
    GraphDisconnected,
    #[error("network is not a star centered at terminal 0: pair {0} has a positive budget")]
    NotAStar(Pair),
    #[error("unknown basis bit {0}")]
    UnknownBasisLabel(usize),
    #[error("source and destination must differ (both are {0})")]
    SameEndpoints(TerminalId),
    #[error("no partition splits the chosen terminal set ({0} terminals given, at least 2 needed)")]
    NoAdmissiblePartition(usize),
    #[error("invalid spanning tree: {0}")]
    InvalidTree(&'static str),
}
