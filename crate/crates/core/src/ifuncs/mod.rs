//! Internal functions: expression bodies over per-eps domains, nearest-point
//! induced maps, image membership, uniform-continuity moduli, piecewise
//! linear interpolants and the zero-set counterexample.

mod demo;
mod expr;
mod graph;

pub use demo::{zero_set_demo, zero_set_fixture, ZeroSetCase, ZeroSetDemo};
pub use expr::{parse_expr, Expr};
pub use graph::{
    decays_super_power, make_graph, Body, Evaluation, ExprFn, GraphFamily, ImageMembership,
};
