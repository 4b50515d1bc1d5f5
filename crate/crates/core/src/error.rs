use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("undeclared sort `{0}`")]
    UndeclaredSort(String),

    #[error("position {0} is not a position of the term")]
    PositionOutOfRange(String),

    #[error("sort error: {0}")]
    Sort(String),

    #[error("cannot combine substitutions with overlapping domains (variable {0})")]
    OverlappingDomains(String),

    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("load error: {0}")]
    Load(String),

    #[error("linear Diophantine system too large ({0} candidates exceed the configured cap)")]
    DiophantineExplosion(usize),

    #[error("normalization exceeded {0} rewrite steps")]
    StepBudgetExceeded(usize),

    #[error("variant generation exceeded {0} retained variants")]
    VariantBoundExceeded(usize),

    #[error("query timed out")]
    Timeout,

    #[error("ground oracle enumeration exceeded {0} candidates")]
    OracleOverflow(usize),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}
