// SPDX-License-Identifier: MIT OR Apache-2.0
//! The plain `key = value` constants file.
//!
//! The verifier constants are existence constants: the mathematics only says
//! that some `B_0` and `G_0` work.  Runs therefore take them from a tiny
//! configuration file rather than hard-coding them, and every report and
//! manifest states the values used.  The format is deliberately minimal —
//! one `key = value` pair per line, `#` starts a comment, keys are
//! case-insensitive — so it needs no parser dependency and cannot be
//! misread: unknown keys, duplicate keys and malformed values are errors.

use crate::CliError;
use endlam::subproj::{VerifierConstants, DEFAULT_DELTA};
use serde::Serialize;

/// Constants in effect for one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunConstants {
    /// Verifier constants (`B_0`, `G_0` and the derived `B`, `E_0`).
    pub verifier: VerifierConstants,
    /// Half-width `Δ` of the annular estimator.
    pub delta: u64,
}

impl Default for RunConstants {
    fn default() -> Self {
        RunConstants { verifier: VerifierConstants::default(), delta: DEFAULT_DELTA }
    }
}

/// Parse the text of a constants file; missing keys keep their defaults.
pub fn parse_constants(text: &str) -> Result<RunConstants, CliError> {
    let defaults = RunConstants::default();
    let (mut b0, mut g0, mut delta) = (None, None, None);
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::Usage(format!("constants line {}: {what}: {raw:?}", n + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let value: u64 = value.trim().parse().map_err(|_| bad("value must be a non-negative integer"))?;
        let slot = match key.trim().to_ascii_lowercase().as_str() {
            "b0" => &mut b0,
            "g0" => &mut g0,
            "delta" => &mut delta,
            _ => return Err(bad("unknown key (expected B0, G0 or delta)")),
        };
        if slot.replace(value).is_some() {
            return Err(bad("duplicate key"));
        }
    }
    let verifier = VerifierConstants::new(b0.unwrap_or(defaults.verifier.b0), g0.unwrap_or(defaults.verifier.g0))
        .map_err(|e| CliError::Usage(format!("constants: {e}")))?;
    Ok(RunConstants { verifier, delta: delta.unwrap_or(defaults.delta) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_constants("# nothing\n\n").unwrap(), RunConstants::default());
    }

    #[test]
    fn keys_are_case_insensitive_and_derive_b() {
        let c = parse_constants("b0 = 20  # Behrstock\nG0=30\ndelta = 5\n").unwrap();
        assert_eq!((c.verifier.b0, c.verifier.g0, c.verifier.b, c.verifier.e0, c.delta), (20, 30, 30, 94, 5));
    }

    #[test]
    fn malformed_files_are_rejected() {
        for text in ["B1 = 3", "B0 = x", "B0 3", "B0 = 1\nB0 = 2", "G0 = 0"] {
            assert!(parse_constants(text).is_err(), "{text:?}");
        }
    }
}
