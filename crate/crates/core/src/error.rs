// Copyright 2026 The latsum Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every module.
///
/// The CLI maps [`Error::is_usage`] failures to exit status 1 and the rest to
/// exit status 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (valid range {lo}..={hi})")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shell table too short: need max_n >= {needed}, table has {available}")]
    TableTooShort { needed: usize, available: usize },

    #[error("resource limit: {what} needs {requested}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("shell count overflowed 64 bits at n = {0}")]
    CountOverflow(usize),

    #[error(
        "budget exceeded at radius {radius}: best value {value} with tail bound {tail_bound}, requested {requested}"
    )]
    BudgetExceeded {
        value: f64,
        tail_bound: f64,
        radius: usize,
        requested: f64,
    },

    #[error("evaluation point lies on the singular lattice 2πZ³")]
    SingularPoint,

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid input rather than numeric or
    /// resource failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidDimension(_)
                | Error::Domain(_)
                | Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::TableTooShort { .. }
                | Error::SingularPoint
        )
    }
}
