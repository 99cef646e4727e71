//! Oracles, trial harness and property suites behind the `leecode` binary.

pub mod oracle;
pub mod selftest;
pub mod text;
pub mod trials;
