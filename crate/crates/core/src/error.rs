use thiserror::Error;

use crate::bsroots::BsRootsError;
use crate::chainrule::ChainRuleError;
use crate::criterion::CriterionError;
use crate::poly::{ParseError, PolyError};
use crate::quadrature::QuadratureError;
use crate::zeta::ZetaError;

/// Any failure surfaced by the public pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    BsRoots(#[from] BsRootsError),
    #[error(transparent)]
    ChainRule(#[from] ChainRuleError),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Poly(PolyError::Parse(e))
    }
}

impl Error {
    /// Rejections of the input itself, as opposed to numerical or internal failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Poly(_) | Error::InvalidArgument(_) | Error::Zeta(ZetaError::NotInWindow { .. })
        )
    }
}
