use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot isolate real roots at working precision: {0}")]
    RootIsolation(String),

    #[error("singular linear system at working precision (pivot {pivot} of {size})")]
    Singular { pivot: usize, size: usize },

    #[error("no admissible real root for the zeroth-order closure; real roots in range: [{}]", .candidates.join(", "))]
    NoAdmissibleRoot { candidates: Vec<String> },

    #[error("degenerate ansatz: {0}")]
    DegenerateAnsatz(String),

    #[error("singular order-{order} system (pivot {pivot} of {size})")]
    SingularOrder { order: usize, pivot: usize, size: usize },

    #[error("only ground-state s=0 supported (got s={0})")]
    UnsupportedAngularFactor(u32),

    #[error("order {order} residual check failed: |residual| {residual} exceeds bound {bound}")]
    PrecisionExhausted {
        order: usize,
        residual: String,
        bound: String,
    },

    #[error("order {order}: {source}")]
    AtOrder {
        order: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate Pade system for [{n},{n}]")]
    DegeneratePade { n: usize },

    #[error("insufficient terms: [{requested},{requested}] needs {needed} coefficients, have {available}; largest feasible N is {feasible}")]
    InsufficientTerms {
        requested: usize,
        needed: usize,
        available: usize,
        feasible: usize,
    },

    #[error("oracle not converged for K={k}: basis {basis} gives {a}, basis {wider} gives {b}")]
    NotConverged {
        k: u32,
        basis: usize,
        wider: usize,
        a: String,
        b: String,
    },

    #[error("manifest hash mismatch for {path}: stored {stored}, computed {computed}")]
    HashMismatch {
        path: String,
        stored: String,
        computed: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_order(self, order: usize) -> Error {
        match self {
            e @ (Error::AtOrder { .. } | Error::SingularOrder { .. } | Error::PrecisionExhausted { .. }) => e,
            e => Error::AtOrder {
                order,
                source: Box::new(e),
            },
        }
    }
}
