//! The sharp unit ball {x : [[x]] < 1} is not an internal set: every member
//! with positive valuation is dominated by another member of strictly larger
//! norm, so no maximum is attained. This module ships the certificate as a
//! randomized fixture; the ball itself is deliberately not expressible as a
//! Shape.

use crate::nets::{Net, Sign};
use crate::{Config, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct BallDemoCase {
    /// Valuation of the random member u.
    pub c: f64,
    /// sharp norm of u and of the dominating member v = eps^{c/2}.
    pub member_norm: f64,
    pub larger_norm: f64,
    /// v in the ball, and |v| > |u| eventually (exact sign check).
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct BallDemo {
    pub cases: Vec<BallDemoCase>,
    pub all_pass: bool,
}

/// For random members u with nu(u) = c > 0, certify that v = eps^{c/2} is a
/// ball member of strictly larger modulus, so the ball has no maximal
/// element.
pub fn sharp_ball_demo(count: usize, seed: u64, cfg: &Config) -> Result<BallDemo> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let c: f64 = rng.gen_range(0.2..3.0);
        let coeff = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut u = Net::monomial(coeff, c);
        if rng.gen_bool(0.5) {
            let gap: f64 = rng.gen_range(0.5..2.0);
            u = u.add(&Net::monomial(rng.gen_range(-2.0..2.0), c + gap))?;
        }
        let v = Net::monomial(1.0, c / 2.0);
        let member_norm = u.sharp_norm(cfg).value;
        let larger_norm = v.sharp_norm(cfg).value;
        let gap = v.abs().sub(&u.abs())?;
        let strictly_larger = gap
            .as_symbolic()
            .map(|p| p.uniform_sign() == Some(Sign::Pos))
            .unwrap_or(false);
        let pass = member_norm < 1.0 && larger_norm < 1.0 && larger_norm > member_norm
            && strictly_larger;
        cases.push(BallDemoCase { c, member_norm, larger_norm, pass });
    }
    let all_pass = cases.iter().all(|c| c.pass);
    Ok(BallDemo { cases, all_pass })
}
