//! The `mrt` command line: table rendering, fake charts, exponent
//! estimation, backtesting, optimization, and the pont game service.

pub mod cli;
pub mod play;
pub mod server;
