use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}: undeclared variable `{name}`")]
    UndeclaredVariable { line: usize, name: String },
    #[error("{line}: malformed literal `{text}`")]
    MalformedLiteral { line: usize, text: String },
    #[error("scripted decision `{0}` is already assigned")]
    ScriptedAssigned(String),
    #[error("unknown variable `{0}` in script")]
    UnknownScriptVariable(String),
    #[error("oracle bound exceeded: {size} atoms > {bound}")]
    OracleBound { size: usize, bound: usize },
    #[error("unknown heuristic `{0}`")]
    UnknownHeuristic(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
