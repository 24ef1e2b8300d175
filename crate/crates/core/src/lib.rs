//! Exact tropical limits of lines in the plane relative to the coordinate axes.

#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod amoeba;
pub mod building;
pub mod cli;
pub mod fan;
pub mod geometry;
pub mod matching;
pub mod moduli;
pub mod rational;
pub mod render;
pub mod tropical;
