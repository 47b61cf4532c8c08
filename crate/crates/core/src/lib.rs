//! Workbench for computable continuous first-order logic over metric
//! structures.

pub mod numeric;
pub mod formula;
pub mod coding;
pub mod parser;
pub mod group;
pub mod matrix;
pub mod lp;
pub mod presentation;
pub mod eval;
pub mod forcing;
pub mod selftest;
pub mod cli;
