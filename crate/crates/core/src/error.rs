use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("carrier kinds do not match: {0}")]
    KindMismatch(String),
    #[error("bad region: {0}")]
    BadRegion(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported space pair `{0}`")]
    UnsupportedPair(String),
    #[error("ideal is not order dense (order_dense_in_ambient = {order_dense}): {reason}")]
    NotDense { order_dense: bool, reason: String },
    #[error("test vector is not in the ideal: {0}")]
    NotInIdeal(String),
    #[error("not a unit witness of the pair: {0}")]
    BadUnit(String),
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("certificate violated at step {step}, index {index}: {detail}")]
    CertificateViolated { step: u32, index: u64, detail: String },
    #[error("search horizon {0} exhausted")]
    HorizonExhausted(u64),
    #[error("bad family: {0}")]
    BadFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
