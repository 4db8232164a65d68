//! Crate-wide error type.
//!
//! Every module has its own error enum carrying a stable kebab-case code.
//! [`Error`] wraps them and renders as `<module>.<code>: <detail>`, which is
//! the machine-parsable form the command-line runner prints.

use std::fmt;

use crate::experiment::ConfigError;
use crate::fields::FieldError;
use crate::gradient::GradientError;
use crate::gridgen::GridError;
use crate::mesh::MeshError;
use crate::report::ReportError;
use crate::wallnormal::WallError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl Error {
    pub fn module(&self) -> &'static str {
        match self {
            Error::Mesh(_) => "mesh",
            Error::Grid(_) => "gridgen",
            Error::Field(_) => "fields",
            Error::Gradient(_) => "gradient",
            Error::Wall(_) => "wallnormal",
            Error::Report(_) => "report",
            Error::Config(_) => "cli",
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::Mesh(e) => e.code(),
            Error::Grid(e) => e.code(),
            Error::Field(e) => e.code(),
            Error::Gradient(e) => e.code(),
            Error::Wall(e) => e.code(),
            Error::Report(e) => e.code(),
            Error::Config(e) => e.code(),
        }
    }

    /// Single-line `module.code: detail` rendering.
    pub fn machine(&self) -> MachineError<'_> {
        MachineError(self)
    }
}

pub struct MachineError<'a>(&'a Error);

impl fmt::Display for MachineError<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let detail = self.0.to_string().replace('\n', " ");
        write!(f, "{}.{}: {}", self.0.module(), self.0.code(), detail)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
