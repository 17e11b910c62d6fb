use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not integral (valuation {0})")]
    NotIntegral(i64),
    #[error("Hensel condition failed: v(f(a)) = {f_val}, v(f'(a)) = {df_val}")]
    HenselConditionFailed { f_val: String, df_val: String },
    #[error("element must be strictly positive")]
    NonPositiveElement,
    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    SizeLimit { requested: u128, cap: u128 },
    #[error("zeta_p is not known to lie in {0}")]
    ZetaPMissing(String),
    #[error("q must differ from the residue characteristic p = {0}")]
    QEqualsP(u64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("parameter is not in the maximal ideal: {0}")]
    NotInMaximalIdeal(String),
    #[error("truncation window exhausted: {0}")]
    WindowExhausted(String),
    #[error("no compatible p-th root chain: {0}")]
    NoCompatibleRoot(String),
    #[error("depth exhausted: requested precision {requested}, achievable {achievable}")]
    DepthExhausted { requested: u32, achievable: u32 },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid field construction: {0}")]
    InvalidField(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
