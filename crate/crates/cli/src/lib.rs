//! CLI layer: the JSON model schema and command implementations behind the
//! `ontoscope` binary.

pub mod commands;
pub mod schema;
