//! Either kind of advice, as stored in an advice file.

use crate::basis::{decide_basis, BasisAdvice};
use crate::error::Result;
use crate::instances::{DomainSpec, UussrInstance};
use crate::ltf::{decide_ltf, LtfAdvice};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Advice {
    Ltf(LtfAdvice),
    Basis(BasisAdvice),
}

impl Advice {
    pub fn domain(&self) -> &DomainSpec {
        match self {
            Advice::Ltf(a) => a.domain(),
            Advice::Basis(a) => a.domain(),
        }
    }

    pub fn decide(&self, inst: &UussrInstance) -> Result<Sign> {
        match self {
            Advice::Ltf(a) => decide_ltf(inst, a),
            Advice::Basis(a) => decide_basis(inst, a),
        }
    }

    /// `ltf` or `basis`.
    pub fn kind(&self) -> &'static str {
        match self {
            Advice::Ltf(_) => "ltf",
            Advice::Basis(_) => "basis",
        }
    }

    /// `round`, `lp`, or `lightest` for basis advice.
    pub fn method(&self) -> String {
        match self {
            Advice::Ltf(a) => a.method().to_string(),
            Advice::Basis(_) => "lightest".to_string(),
        }
    }
}

impl From<LtfAdvice> for Advice {
    fn from(a: LtfAdvice) -> Advice {
        Advice::Ltf(a)
    }
}

impl From<BasisAdvice> for Advice {
    fn from(a: BasisAdvice) -> Advice {
        Advice::Basis(a)
    }
}
