//! Text format, command implementations and fixture corpus for the exactgt
//! command-line tool.

pub mod dot;
pub mod parser;
pub mod runner;
