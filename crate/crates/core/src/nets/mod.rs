//! Nets (x_eps)_eps and their calculus: moderateness, negligibility,
//! valuation, sharp ultrapseudonorm, arithmetic and interleaving idempotents.

mod comb;
mod net;
mod parse;
mod piecewise;
mod power_sum;
mod sampled;

pub use comb::{lcm, validate_disjoint, Comb, CombPattern};
pub use net::{eventual_sign, Estimate, GenNumber, Net, VecNet, Verdict};
pub use parse::parse_net;
pub use piecewise::{from_pieces, refine_many, PiecewiseNet};
pub use power_sum::{PowerSum, Sign, Term};
pub use sampled::{Sample, SampledNet};
