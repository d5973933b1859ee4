use thiserror::Error;

/// Errors raised by the group, search and verification layers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("subgroup is not normal: conjugate of element {element} by {by} leaves it")]
    NotNormal { element: usize, by: usize },
    #[error("group is not abelian: elements {0} and {1} do not commute")]
    NotAbelian(usize, usize),
    #[error("search budget exceeded after {nodes} nodes (budget {budget})")]
    SearchBudgetExceeded { nodes: u64, budget: u64 },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("automorphism does not fix the complement: element {element} maps outside it")]
    KNotFixed { element: usize },
    #[error("product set is not closed: {left} * {right} falls outside")]
    ClosureFailure { left: usize, right: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("witness check failed: {0}")]
    Witness(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
