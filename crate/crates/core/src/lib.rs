//! Symbolic-numeric calculus of Colombeau generalized numbers.
//!
//! The crate models nets (x_eps)_{eps in (0,1)} of reals either exactly, as
//! power sums over a comb partition (module [`nets`]), or numerically as
//! log-magnitude samples on a geometric grid. On top of the net calculus it
//! provides internal subsets of R~^d as eps-parameterized set families
//! ([`isets`]), internal functions as graph families ([`ifuncs`]), the
//! saturation principle with its completeness applications ([`saturation`]),
//! and the constructive vanishing-moment mollifier ([`mollifier`]).

pub mod config;
pub mod error;
pub mod ifuncs;
pub mod isets;
pub mod mollifier;
pub mod nets;
pub mod quad;
pub mod saturation;

pub use config::Config;
pub use error::{Error, Result};
pub use nets::{GenNumber, Net, VecNet, Verdict};
