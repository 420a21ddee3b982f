use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("loop edge {{{0},{0}}} is not allowed")]
    LoopEdge(usize),
    #[error("node {node} out of range for graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("{n} nodes exceeds the supported maximum of {max}")]
    TooManyNodes { n: usize, max: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid graph6: {0}")]
    Graph6(String),
    #[error("invalid edge list: {0}")]
    EdgeList(String),
    #[error("{what} requires n <= {cap}, got n = {n}; use the sampling mode or raise the cap")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid pins: {0}")]
    InvalidPins(String),
    #[error("invalid constants: {0}")]
    InvalidConstants(String),
    #[error("invalid certificate: {0}")]
    CertificateParse(String),
    #[error("block uniformity violated: {0}")]
    BlockUniformity(String),
    #[error("invalid sweep config: {0}")]
    SweepConfig(String),
    #[error("{0}")]
    InvalidInput(String),
}
