//! Zero-set counterexample walkthrough for the eps^{1/x} step fixture.
//!
//! The zero set of f(x) = eps^{1/x} (x > 0; 0 otherwise) on a [0, 1]-family
//! contains every member decaying to 0, yet for each such x the strictly
//! larger point y = x + 1/|log eps| is still a zero. No maximal zero exists,
//! so the zero set is not internal, and neither is the intersection of two
//! internal sets in general.

use super::graph::{decays_super_power, Body, ExprFn, GraphFamily};
use crate::isets::{SetFamily, Shape};
use crate::nets::{eventual_sign, Sample, SampledNet, Sign};
use crate::{Config, Net, Result, Verdict};

#[derive(Debug, Clone)]
pub struct ZeroSetCase {
    pub label: String,
    /// f(x) is (super-power) negligible: x lies in the zero set.
    pub x_is_zero: Verdict,
    /// f(y) is negligible for y = x + 1/|log eps|.
    pub y_is_zero: Verdict,
    /// y exceeds x by a non-negligible margin.
    pub y_gt_x: Verdict,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ZeroSetDemo {
    pub cases: Vec<ZeroSetCase>,
    pub all_pass: bool,
}

/// The fixture graph: eps^{1/x} step function on [0, 1].
pub fn zero_set_fixture() -> Result<GraphFamily> {
    let dom = SetFamily::new(
        vec![Shape::Interval { lo: Net::zero(), hi: Net::constant(1.0) }],
        1,
    )?;
    Ok(GraphFamily { f: ExprFn::new(Body::EpsPowRecip, dom)? })
}

fn is_zero_value(net: &Net, cfg: &Config) -> Verdict {
    let negl = net.is_negligible(cfg);
    if negl.holds {
        return negl;
    }
    match net {
        Net::Sampled(s) => Verdict::heuristic(decays_super_power(s)),
        Net::Symbolic(_) => negl,
    }
}

pub fn zero_set_demo(cfg: &Config) -> Result<ZeroSetDemo> {
    let g = zero_set_fixture()?;
    // A zero-set member that goes to 0 only at log log speed; capped at 1/2
    // so it stays inside the domain at coarse eps.
    let slow = Net::Sampled(SampledNet::tabulate(cfg.k_min, cfg.k_max, |_, eps| {
        Sample::from_value((1.0 / (-eps.ln()).ln()).min(0.5))
    })?);
    let candidates: Vec<(String, Net)> = vec![
        ("x = 0".into(), Net::zero()),
        ("x = alpha".into(), Net::alpha()),
        ("x = 1/log|log eps| (sampled)".into(), slow),
    ];

    let mut cases = Vec::new();
    for (label, x) in candidates {
        // y = x + 1/|log eps|: strictly above x, still a zero of f.
        let bump = Net::Sampled(SampledNet::tabulate(cfg.k_min, cfg.k_max, |_, eps| {
            Sample::from_value(-1.0 / eps.ln())
        })?);
        let y = x.add(&bump)?;

        let fx = g.eval_at(&x, cfg)?.value.rep;
        let fy = g.eval_at(&y, cfg)?.value.rep;
        let x_is_zero = is_zero_value(&fx, cfg);
        let y_is_zero = is_zero_value(&fy, cfg);
        let margin = y.sub(&x)?;
        let y_gt_x = Verdict::heuristic(
            eventual_sign(&margin) == Some(Sign::Pos) && !margin.is_negligible(cfg).holds,
        );
        let pass = x_is_zero.holds && y_is_zero.holds && y_gt_x.holds;
        cases.push(ZeroSetCase { label, x_is_zero, y_is_zero, y_gt_x, pass });
    }
    let all_pass = cases.iter().all(|c| c.pass);
    Ok(ZeroSetDemo { cases, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_candidates_have_strictly_larger_zeros() {
        let cfg = Config::default();
        let demo = zero_set_demo(&cfg).unwrap();
        assert_eq!(demo.cases.len(), 3);
        for c in &demo.cases {
            assert!(c.pass, "case failed: {}", c.label);
        }
        assert!(demo.all_pass);
    }
}
