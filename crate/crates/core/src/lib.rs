// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

pub mod cco;
pub mod designs;
pub mod error;
pub mod exec;
pub mod qcore;
pub mod sim;
pub mod states;
pub mod tomo;

pub use error::{Error, Result};
pub use exec::Execution;
