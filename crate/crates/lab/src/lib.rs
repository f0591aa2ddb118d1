//! Experiment driver for the greedy selection library: reproduces the
//! reference tables, runs Monte Carlo studies against analytic values and
//! exact small-graph expectations, and hosts the verification suites used
//! by `lab verify`.

pub mod commands;
pub mod config;
pub mod oracle;
pub mod output;
pub mod verify;
