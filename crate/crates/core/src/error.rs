use num_bigint::BigUint;

/// Crate-wide error type. Variants mirror the failure modes of the
/// individual modules so callers can match on what actually went wrong.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("denominator {denom} shares factor {gcd} with modulus {modulus}")]
    NonInvertibleDenominator {
        denom: BigUint,
        modulus: BigUint,
        gcd: BigUint,
    },

    #[error("value {value} is not invertible modulo {modulus} (gcd {gcd})")]
    NonInvertible {
        value: BigUint,
        modulus: BigUint,
        gcd: BigUint,
    },

    #[error("batch inversion failed at index {index}: {source}")]
    BatchNonInvertible {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("moduli {a} and {b} are not coprime (gcd {gcd})")]
    NonCoprimeModuli { a: BigUint, b: BigUint, gcd: BigUint },

    #[error("p-adic valuation {valuation} at p={prime} is below the supported floor -1")]
    ValuationTooNegative { prime: u64, valuation: i64 },

    #[error("mismatched moduli in residue arithmetic: {left} vs {right}")]
    ModulusMismatch { left: BigUint, right: BigUint },

    #[error("Bernoulli index {0} is odd; only even indices are supported")]
    OddIndex(u64),

    #[error("Bernoulli index {index} exceeds the exact cache cap {cap}")]
    CapExceeded { index: u64, cap: u64 },

    #[error("requested precision p^{exponent} at p={prime} exceeds the supported width")]
    PrecisionUnreachable { prime: u64, exponent: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("claimed factorization of {modulus} is wrong: product is {product}")]
    BadFactorization { modulus: BigUint, product: BigUint },

    #[error("invalid range [{lo}, {hi}]: {reason}")]
    InvalidRange { lo: u64, hi: u64, reason: String },

    #[error("the fast (Bernoulli-sum) method has not passed its validation gate")]
    FastMethodNotValidated,

    #[error("unknown check id `{0}`")]
    UnknownCheckId(String),

    #[error("parameters out of domain for check `{id}`: {reason}")]
    ParamsOutOfDomain { id: String, reason: String },

    #[error("element is not a unit: representative divisible by the cyclotomic modulus")]
    NonUnit,

    #[error("checkpoint mismatch: {0}")]
    ResumeMismatch(String),

    #[error("checkpoint parse error: {0}")]
    CheckpointFormat(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
