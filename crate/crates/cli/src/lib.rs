//! Document parsing, commands and the property battery behind the `vbalg`
//! binary.

pub mod battery;
pub mod commands;
pub mod doc;
pub mod report;
