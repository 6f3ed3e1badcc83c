//! Plain-text inputs and outputs: `key = value` run configurations and the CSV
//! files exchanged with plotting scripts.

pub mod config;
pub mod csv;
