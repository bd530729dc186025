use junctions_core::Error;
use serde::Serialize;

/// Failure with its process exit code: 2 for configuration and input errors,
/// 3 when a numerical hypothesis of the library fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub exit_code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { exit_code: 2, kind: "config".into(), message: message.into() }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{{\"exit_code\":{}}}", self.exit_code))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit_code = if e.is_numerical() { 3 } else { 2 };
        CliError { exit_code, kind: e.kind().into(), message: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}
