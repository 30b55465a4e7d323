use thiserror::Error;

/// Errors raised by the algebra, parsing and geometry layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("index out of range in `{name}` for n = {n}")]
    IndexOutOfRange { name: String, n: usize },

    #[error("non-integer exponent at offset {offset}")]
    NonIntegerExponent { offset: usize },

    #[error("negative exponent {0}: use RationalFunction")]
    NegativeExponent(i64),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("pole: denominator vanishes identically")]
    Pole,

    #[error("degenerate equation: {0}")]
    DegenerateEquation(String),

    #[error("parabolic/degenerate point: the characteristic roots coincide")]
    ParabolicPoint,

    #[error("elliptic, no real roots")]
    EllipticPoint,

    #[error("outside the big cell: the empty-minor coordinate vanishes")]
    OutsideBigCell,

    #[error("degenerate first fundamental form")]
    DegenerateFirstForm,

    #[error("equation not solvable for {0}")]
    NoGraphForm(String),

    #[error("hyperplane coefficients vanish modulo the Pluecker relations")]
    ZeroModRelations,

    #[error("monomial space of size {required} exceeds the cap {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("point does not determine a value: {0}")]
    Underdetermined(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
