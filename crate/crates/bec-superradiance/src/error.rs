use thiserror::Error;

/// Errors produced by the model library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Parameter validation failed at construction.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series diverges at the requested point (e.g. Li_s(1) with s <= 1).
    #[error("divergent series: {0}")]
    DivergentSeries(String),

    /// Chemical potential at or above the stability threshold: the
    /// grand-canonical state does not exist.
    #[error("instability: mu = {mu} is not below mu_c = {mu_c}")]
    Instability { mu: f64, mu_c: f64 },

    /// The Bogoliubov transformation does not exist: squeezing diverges
    /// when (eps - mu + Omega)^2 <= g^2.
    #[error("squeezing divergence: (eps - mu + Omega)^2 = {lhs} <= g^2 = {rhs}")]
    SqueezingDivergence { lhs: f64, rhs: f64 },

    /// A finite-volume occupation sum diverges (mu at or above the lowest
    /// retained mode energy).
    #[error("divergent occupation sum: {0}")]
    DivergentSum(String),

    /// An iterative procedure failed to converge.
    #[error("no convergence in {what}: {details}")]
    NonConvergence { what: String, details: String },

    /// CLI / sweep configuration problem.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) => 2,
            _ => 3,
        }
    }
}
