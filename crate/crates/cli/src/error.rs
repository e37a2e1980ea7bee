use std::path::Path;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fgcount::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        use fgcount::Error as E;
        match self {
            CliError::Core(E::GuardExceeded { .. }) => "guard",
            CliError::Core(E::PointBudget { .. }) => "budget",
            CliError::Core(E::Overflow { .. }) => "overflow",
            CliError::Core(E::NumericalBreakdown { .. }) => "numerical-breakdown",
            CliError::Core(_) | CliError::Usage(_) => "invalid-input",
            CliError::Io { .. } => "io",
        }
    }

    /// 3 guard or budget refusal, 4 overflow or numerical breakdown, 5 I/O,
    /// 6 invalid input. Usage errors caught by the argument parser exit 2.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "guard" | "budget" => 3,
            "overflow" | "numerical-breakdown" => 4,
            "io" => 5,
            _ => 6,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            exit_code: i32,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            error: Body<'a>,
        }
        let mut s = serde_json::to_string(&Doc {
            error: Body {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        })
        .expect("error serializes");
        s.push('\n');
        s
    }
}

pub const EXIT_VERDICT_FAILED: i32 = 1;
pub const EXIT_REFUSED: i32 = 3;
