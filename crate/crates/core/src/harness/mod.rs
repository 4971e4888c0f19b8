//! File formats, named inputs, reference oracles, reports and the suite
//! runner used by the command-line tool.

pub mod builtins;
pub mod io;
pub mod oracle;
pub mod report;
pub mod suite;
