use thiserror::Error;

use crate::model::NodeId;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("world needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("node {0} has a non-finite position")]
    NonFinitePosition(NodeId),
    #[error("{0} must be > 0, got {1}")]
    BadSpeed(&'static str, f64),
    #[error("link ({0},{1}) has overlapping or unsorted up-intervals")]
    OverlappingIntervals(NodeId, NodeId),
    #[error("link ({0},{1}) has an empty up-interval")]
    EmptyInterval(NodeId, NodeId),
    #[error("nlos delay for ({0},{1}) is negative")]
    NegativeNlos(NodeId, NodeId),
    #[error("propagation delay is undefined for a node to itself ({0})")]
    SelfDelay(NodeId),
    #[error("degenerate (zero-length) obstacle segment")]
    DegenerateObstacle,
    #[error("delaying obstacle has a negative nlos delay")]
    NegativeObstacleDelay,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("transmission at t={t} scheduled before current time {now}")]
    TimeTravel { t: i64, now: i64 },
    #[error("event cap of {0} exceeded; likely a runaway relay loop")]
    EventCapExceeded(u64),
    #[error("delivery {0} not found in trace")]
    UnknownDelivery(u64),
    #[error("transmission {0} not found in trace")]
    UnknownTransmission(u64),
    #[error("delivery {0} has a dangling parent link")]
    DanglingParent(u64),
    #[error("adversary tunnel endpoints must differ")]
    TunnelSelfLoop,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Semantic(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl ScenarioError {
    pub fn semantic(msg: impl Into<String>) -> Self {
        ScenarioError::Semantic(msg.into())
    }
}
