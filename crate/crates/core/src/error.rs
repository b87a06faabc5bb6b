use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {0} appears more than once")]
    DuplicateValue(usize),
    #[error("value {value} is outside 1..={n}")]
    OutOfRange { value: usize, n: usize },
    #[error("cannot parse permutation entry {0:?}")]
    Parse(String),
    #[error("position {position} is outside 1..={n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("value {value} is outside 1..={n}")]
    ValueOutOfRange { value: usize, n: usize },
    #[error("window starting at {start} with width {width} does not fit in size {n}")]
    WindowOutOfRange { start: usize, width: usize, n: usize },
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("step of width {width} exceeds the width limit {limit}")]
    WidthExceeded { width: usize, limit: usize },
    #[error("window content is not increasing")]
    NotSortedWindow,
    #[error("target is not a rearrangement of the window content")]
    NotARearrangement,
    #[error("width limit must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("operation requires a finite width limit")]
    InfiniteK,
    #[error("{members} members exceed the block capacity {max}")]
    TooManyMembers { members: usize, max: usize },
    #[error("{members} members cannot exactly fill a block of {capacity} positions")]
    BlockMismatch { members: usize, capacity: usize },
    #[error("member {0} lies to the right of its target block")]
    MemberBeyondTarget(usize),
    #[error("size {n} exceeds the enumeration cap {cap}")]
    BudgetExceeded { n: usize, cap: usize },
    #[error("no removal keeps the fixpoint count within one of the original")]
    NoWitness,
    #[error("replay produced {got} instead of {expected}")]
    ReplayMismatch { expected: String, got: String },
    #[error("invalid width policy {0:?}")]
    InvalidPolicy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
