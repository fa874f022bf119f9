//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod calculus;
pub mod combinatorics;
pub mod misere;
pub mod printed;
pub mod selfplay;
pub mod walks;
