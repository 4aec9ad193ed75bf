use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("the alphabet is empty")]
    EmptyAlphabet,
    #[error("invalid letter name `{0}`")]
    InvalidLetterName(String),
    #[error("letter `{0}` is declared twice")]
    DuplicateLetter(String),
    #[error("letter `{0}` cannot be independent of itself")]
    SelfIndependence(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter index {0} is out of range")]
    LetterOutOfRange(usize),
    #[error("cannot split `{0}` into declared letters")]
    UnparsableWord(String),
    #[error("clique {0} contains two dependent letters")]
    NotAClique(String),
    #[error("{count} cliques exceed the configured cap of {cap}")]
    CombinatorialBlowup { count: usize, cap: usize },
    #[error("length {requested} exceeds the configured cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("the dependence graph is not connected")]
    Reducible,
    #[error("the first trace is not a prefix of the second")]
    NotAPrefix,
    #[error("operation needs a non-empty trace")]
    EmptyTrace,
    #[error("the Möbius polynomial has no root in (0, 1]")]
    NoRootInUnitInterval,
    #[error("valuation has {got} characteristic numbers, expected {expected}")]
    ValuationArity { expected: usize, got: usize },
    #[error("characteristic number of `{letter}` must be positive and finite, got {value}")]
    NonPositiveCharacteristic { letter: String, value: f64 },
    #[error("valuation is not Möbius (h(∅) = {h0})")]
    NotMobius { h0: f64 },
    #[error("affine coefficient of the free letter vanishes ({0:e})")]
    DegenerateCoefficient(f64),
    #[error("completed characteristic number {0} is not positive")]
    NonPositiveSolution(f64),
    #[error("letter `{0}` is both fixed and free")]
    FreeLetterFixed(String),
    #[error("letter `{0}` has no fixed value")]
    MissingCharacteristic(String),
    #[error("cliques at positions {index} and {next} are not Cartier-Foata admissible")]
    NotAdmissible { index: usize, next: usize },
    #[error("clique at position {0} is empty")]
    EmptyClique(usize),
    #[error("normalization g({state}) = {value} is not positive")]
    ZeroNormalization { state: usize, value: f64 },
    #[error("stationary distribution solve failed (residual {residual:e})")]
    SolveFailure { residual: f64 },
}
