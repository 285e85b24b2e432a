use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("map is not a join-semilattice morphism: {0}")]
    NotJoinMorphism(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("objects do not match: {0}")]
    ObjectMismatch(String),
    #[error("relation is not a Dep-morphism")]
    InvalidMorphism,
    #[error("the second automaton does not accept the reverse language of the first")]
    NotReversePair,
    #[error("automaton accepts a different language")]
    LanguageMismatch,
    #[error("NFA is not atomic")]
    NotAtomic,
    #[error("NFA is not subatomic")]
    NotSubatomic,
    #[error("language is not nuclear")]
    NotNuclear,
    #[error("language is not a group language")]
    NotGroupLanguage,
    #[error("lattice has no join- or meet-irreducibles")]
    EmptyIrreducibles,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded (lower bound {lower}{})", upper.map(|u| format!(", upper bound {u}")).unwrap_or_default())]
    BudgetExceeded { lower: usize, upper: Option<usize> },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
