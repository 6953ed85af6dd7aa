use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("circle of radius {radius} is tangent to the boundary near angle {angle}")]
    DegenerateTangency { radius: f64, angle: f64 },
    #[error("no boundary sample inside the ball")]
    EmptyIntersection,
    #[error("profile is not even (max asymmetry {0:e})")]
    NonEven(f64),
    #[error("slope {slope} exceeds the admissible bound {bound}")]
    SlopeTooLarge { slope: f64, bound: f64 },
    #[error("ball carries no mass")]
    EmptyBall,
    #[error("no very good ball at point ({x}, {y}), even at the top of the ladder")]
    NoVeryGoodBall { x: f64, y: f64 },
    #[error("no candidate very good ball for Whitney interval [{lo}, {hi})")]
    NoCandidateBall { lo: f64, hi: f64 },
    #[error("dyadic descent hit the resolution floor everywhere; cover is empty")]
    ResolutionFloorHit,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
