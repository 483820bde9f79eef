//! JSON documents and command implementations behind the `sgen` binary.

pub mod commands;
pub mod doc;
