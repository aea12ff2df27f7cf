use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("text must be non-empty")]
    EmptyText,
    #[error("position {pos} out of range 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("invalid range ({i},{j}) for text of length {n}")]
    InvalidRange { i: usize, j: usize, n: usize },
    #[error("empty fragment ({start},{end})")]
    EmptyFragment { start: usize, end: usize },
    #[error("pattern ({start},{end}) is not in the dictionary")]
    PatternNotFound { start: usize, end: usize },
    #[error("pattern ({start},{end}) is already in the dictionary")]
    PatternAlreadyPresent { start: usize, end: usize },
}
