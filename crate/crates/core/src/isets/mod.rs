//! Internal subsets of R~^d as eps-parameterized set families.

mod basic;
mod demo;
mod extrema;
mod parse;
mod select;
mod shape;

pub use basic::{
    contains, fatten, interleave, internal_union, is_sharply_bounded, product, project,
    project_unverified, trim_bounded, BoundReport, Projection,
};
pub use demo::{sharp_ball_demo, BallDemo, BallDemoCase};
pub use extrema::{
    equality_report, max_norm, min_distance, subset_report, EqualityReport, MaxNorm,
    MinDistance, SubsetReport,
};
pub use parse::parse_set;
pub use select::{select_extreme, Candidate};
pub use shape::{
    interval_dist, net_clamp, seg_dist, InternalSet, NumShape, SetFamily, Shape,
};
