//! Property suites for completeness constructions: the ball sandwich around
//! a Cauchy limit and ultrametric ball recentering.

use colombeau_core::isets::{contains, InternalSet};
use colombeau_core::saturation::cauchy_limit;
use colombeau_core::{Config, GenNumber, Net, VecNet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x73617475;

/// Geometric partial sums u_j = sum_{k<=j} alpha^k.
fn geometric_prefixes(len: usize) -> Vec<GenNumber> {
    let mut acc = Net::zero();
    (0..len)
        .map(|k| {
            acc = acc.add(&Net::monomial(1.0, k as f64)).unwrap();
            GenNumber::new(acc.clone())
        })
        .collect()
}

#[test]
fn cauchy_chain_entries_sandwich_the_limit() {
    let cfg = Config::default();
    let seq = geometric_prefixes(30);
    let result = cauchy_limit(&seq, &cfg).unwrap();
    // For a selection of certified depths n, the ball V_n = [u_{j_n} +/-
    // eps^{n ln 2}] around the witness index satisfies the sandwich: any net
    // strictly within radius 2^-n is a member, and any member is within
    // radius 2^-n of the center.
    for n in [1usize, 4, 8, 12] {
        assert!(n as u32 <= result.depth);
        // Center from the table: u_j with [[u_j - L]] = e^{-(j+1)}; here we
        // rebuild the ball around the partial sum whose tail valuation
        // exceeds n ln 2, i.e. j = ceil(n ln 2).
        let r_exp = n as f64 * std::f64::consts::LN_2;
        let j = r_exp.ceil() as usize;
        let center = seq[j].rep.clone();
        let ball = InternalSet::interval(
            center.sub(&Net::monomial(1.0, r_exp)).unwrap(),
            center.add(&Net::monomial(1.0, r_exp)).unwrap(),
        )
        .unwrap();
        // Strict interior point: valuation gap 0.5 above the radius exponent.
        let inner = center.add(&Net::monomial(1.0, r_exp + 0.5)).unwrap();
        let (v, _) = contains(&ball, &VecNet::scalar(inner), &cfg).unwrap();
        assert!(v.holds, "n = {n}: strictly closer net rejected");
        // Any member is within the sharp radius: endpoints are the extreme
        // members, and their distance to the center has valuation >= r_exp.
        for sgn in [-1.0, 1.0] {
            let member = center.add(&Net::monomial(sgn, r_exp)).unwrap();
            let d = member.sub(&center).unwrap();
            let nu = d.valuation(&cfg);
            assert!(nu.value >= r_exp - 1e-9, "n = {n}");
        }
        // The constructed limit itself lies in every certified ball.
        let (v, _) = contains(
            &ball,
            &VecNet::scalar(result.limit.rep.clone()),
            &cfg,
        )
        .unwrap();
        assert!(v.holds, "n = {n}: limit outside its own ball");
    }
}

#[test]
fn ball_membership_is_recentering_invariant() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for case in 0..100 {
        // Ball B(u; e^-c) = {x : nu(x - u) >= c}.
        let c = (rng.gen_range(1.0..6.0f64) * 4.0).round() / 4.0;
        let u = Net::monomial(rng.gen_range(0.5..2.0), 0.25);
        // w is a member: nu(w - u) = c + 2 > c.
        let w = u.add(&Net::monomial(1.0, c + 2.0)).unwrap();
        // Probe nets at assorted valuation offsets from u, avoiding exact
        // cancellation with w's offset.
        for de in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0] {
            let e = c + de;
            if e <= 0.0 || (e - (c + 2.0)).abs() < 1e-9 {
                continue;
            }
            let x = u.add(&Net::monomial(1.5, e)).unwrap();
            let member_u = x.sub(&u).unwrap().valuation(&cfg).value >= c - 1e-12;
            let member_w = x.sub(&w).unwrap().valuation(&cfg).value >= c - 1e-12;
            assert_eq!(
                member_u, member_w,
                "case {case}: recentering changed membership at offset {de}"
            );
        }
    }
}
