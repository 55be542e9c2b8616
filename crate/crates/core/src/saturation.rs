//! The saturation principle and its completeness applications.
//!
//! A validated decreasing chain of sharply bounded, eventually nonempty set
//! families admits a common member, built as a diagonal splice: pick a
//! member of each entry, find grid thresholds below which the member is
//! close to every earlier entry, and switch branches at the thresholds.
//! Nested sharp balls and sharp-Cauchy sequences reduce to chains of
//! interval families around their centers.

use crate::isets::{max_norm, min_distance, subset_report, InternalSet, SetFamily, Shape};
use crate::nets::{Sample, SampledNet};
use crate::{Config, Error, GenNumber, Net, Result, VecNet, Verdict};

/// One chain entry: a strictly increasing label n, an optional bound
/// exponent t with sup |A_n| <= eps^{-t}, and the set family.
#[derive(Debug, Clone)]
pub struct ChainEntry {
    pub n: u32,
    pub t: Option<f64>,
    pub family: SetFamily,
}

#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub entries: Vec<ChainEntry>,
}

impl ChainSpec {
    pub fn new(entries: Vec<ChainEntry>) -> Result<ChainSpec> {
        if entries.is_empty() {
            return Err(Error::Syntax("chain needs at least one entry".into()));
        }
        let dim = entries[0].family.dim;
        for w in entries.windows(2) {
            if w[1].n <= w[0].n {
                return Err(Error::Syntax("chain labels must be strictly increasing".into()));
            }
        }
        if entries.iter().any(|e| e.family.dim != dim) {
            return Err(Error::DimMismatch { expected: dim, got: 0 });
        }
        Ok(ChainSpec { entries })
    }

    /// Build entries n = 1..=n_max from a generator rule.
    pub fn from_generator(
        n_max: u32,
        t: impl Fn(u32) -> Option<f64>,
        family: impl Fn(u32) -> Result<SetFamily>,
    ) -> Result<ChainSpec> {
        ChainSpec::new(
            (1..=n_max)
                .map(|n| Ok(ChainEntry { n, t: t(n), family: family(n)? }))
                .collect::<Result<_>>()?,
        )
    }

    /// Validate nonemptiness, boundedness and monotonicity; resolve the
    /// bound exponents. An unbounded entry (or one violating its supplied
    /// bound) is refused with MissingBound: the bound sequence cannot be
    /// dropped from the hypotheses.
    pub fn validate(&self, cfg: &Config) -> Result<Vec<f64>> {
        let mut ts = Vec::with_capacity(self.entries.len());
        for (idx, e) in self.entries.iter().enumerate() {
            if !e.family.eventually_nonempty() {
                return Err(Error::EmptyEntry(idx));
            }
            let set = InternalSet::new(e.family.clone());
            let mn = match max_norm(&set, cfg) {
                Ok(m) => m,
                Err(Error::NotSharplyBounded) => return Err(Error::MissingBound(idx)),
                Err(e) => return Err(e),
            };
            let nu = mn.value.rep.valuation(cfg);
            let slack = if nu.exact { 0.0 } else { 0.05 };
            match e.t {
                Some(t) => {
                    if nu.value < -t - slack {
                        return Err(Error::MissingBound(idx));
                    }
                    ts.push(t);
                }
                None => ts.push((-nu.value + slack).max(0.0)),
            }
        }
        for idx in 0..self.entries.len() - 1 {
            let inner = InternalSet::new(self.entries[idx + 1].family.clone());
            let outer = InternalSet::new(self.entries[idx].family.clone());
            if !subset_report(&inner, &outer, cfg)?.verdict.holds {
                return Err(Error::ChainNotDecreasing(idx + 1));
            }
        }
        Ok(ts)
    }
}

/// One branch of a diagonal splice: from grid index start_k on (until the
/// next branch takes over) the splice equals this member net.
#[derive(Debug, Clone)]
pub struct SpliceBranch {
    pub n: u32,
    pub start_k: u32,
    pub member: VecNet,
}

/// A diagonal splice: threshold table plus the realized sampled net.
#[derive(Debug, Clone)]
pub struct SpliceNet {
    pub branches: Vec<SpliceBranch>,
    pub realized: VecNet,
}

impl SpliceNet {
    /// The net (splice - other) in one coordinate, assembled branchwise:
    /// each branch member is subtracted from `other` in its own backend
    /// (exactly, when both are symbolic) before sampling, so tiny tails
    /// survive that linear-domain subtraction of the realized samples would
    /// cancel away.
    pub fn diff(&self, coord: usize, other: &Net, cfg: &Config) -> Result<SampledNet> {
        let diff_samples: Vec<SampledNet> = self
            .branches
            .iter()
            .map(|b| {
                b.member.components[coord]
                    .sub(other)?
                    .sample(cfg.k_min, cfg.k_max)
            })
            .collect::<Result<_>>()?;
        let samples: Vec<Sample> = (cfg.k_min..=cfg.k_max)
            .map(|k| {
                let active = self
                    .branches
                    .iter()
                    .rposition(|b| b.start_k <= k)
                    .unwrap_or(0);
                diff_samples[active].sample_at(k)
            })
            .collect();
        SampledNet::new(cfg.k_min, cfg.k_max, samples)
    }
}

#[derive(Debug, Clone)]
pub struct MembershipEntry {
    pub n: u32,
    pub dist_valuation: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct SaturationResult {
    pub witness: SpliceNet,
    pub membership: Vec<MembershipEntry>,
    pub all_hold: bool,
}

/// Diagonal witness for a validated decreasing chain.
pub fn saturation_witness(chain: &ChainSpec, cfg: &Config) -> Result<SaturationResult> {
    let ts = chain.validate(cfg)?;
    let t1 = ts[0];
    let dim = chain.entries[0].family.dim;
    let origin = InternalSet::point(VecNet::new(vec![Net::zero(); dim])?)?;

    // Deterministic member per entry: the minimum-norm element.
    let mut members: Vec<VecNet> = Vec::new();
    for e in &chain.entries {
        let md = min_distance(&InternalSet::new(e.family.clone()), &origin, cfg)?;
        members.push(md.u);
    }

    // Log-domain samples of every member coordinate, once.
    let mem_samples: Vec<Vec<SampledNet>> = members
        .iter()
        .map(|m| {
            m.components
                .iter()
                .map(|c| c.sample(cfg.k_min, cfg.k_max))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // ok[i][k - k_min]: member i satisfies the proof's threshold conditions
    // at grid point k: close to every earlier entry at order eps^{n_i}, and
    // bounded by eps^{-(t_1 + 1)}.
    let ks: Vec<u32> = (cfg.k_min..=cfg.k_max).collect();
    let mut ok: Vec<Vec<bool>> = Vec::with_capacity(chain.entries.len());
    for (i, e) in chain.entries.iter().enumerate() {
        let mut row = Vec::with_capacity(ks.len());
        for (kk, &k) in ks.iter().enumerate() {
            let eps = 2f64.powi(-(k as i32));
            let u_vals: Vec<f64> =
                mem_samples[i].iter().map(|s| s.sample_at(k).value()).collect();
            let scale = u_vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            let tol = eps.powi(e.n as i32) * (1.0 + 1e-9) + 1e-12 * scale;
            let close = chain.entries[..=i]
                .iter()
                .all(|prev| prev.family.dist_at(&u_vals, eps) <= tol);
            let cap = Sample { sign: 1, logmag: -(t1 + 1.0) * eps.ln() };
            let small = !mem_samples[i].iter().any(|s| cap.lt(&s.sample_at(k).abs()));
            row.push(close && small);
            let _ = kk;
        }
        ok.push(row);
    }

    // Threshold of branch i: the first grid point from which the conditions
    // hold all the way down; branches must start at strictly later points
    // than their predecessors.
    let mut branches: Vec<SpliceBranch> = Vec::new();
    let mut prev_start: Option<u32> = None;
    for (i, e) in chain.entries.iter().enumerate() {
        let mut from = ks.len();
        for kk in (0..ks.len()).rev() {
            if ok[i][kk] {
                from = kk;
            } else {
                break;
            }
        }
        if from == ks.len() {
            break;
        }
        let mut start = ks[from];
        if let Some(p) = prev_start {
            start = start.max(p + 1);
        } else {
            start = start.max(cfg.k_min);
        }
        if start > cfg.k_max {
            break;
        }
        prev_start = Some(start);
        branches.push(SpliceBranch { n: e.n, start_k: start, member: members[i].clone() });
    }
    if branches.is_empty() {
        return Err(Error::EmptyEntry(0));
    }

    // Realize the splice per coordinate.
    let mut comps = Vec::with_capacity(dim);
    for c in 0..dim {
        let samples: Vec<Sample> = ks
            .iter()
            .map(|&k| {
                let active = branches
                    .iter()
                    .rposition(|b| b.start_k <= k)
                    .unwrap_or(0);
                let i = branches[active].n;
                let idx = chain.entries.iter().position(|e| e.n == i).unwrap();
                mem_samples[idx][c].sample_at(k)
            })
            .collect();
        comps.push(Net::Sampled(SampledNet::new(cfg.k_min, cfg.k_max, samples)?));
    }
    let realized = VecNet::new(comps)?;

    // Membership report: the splice must land in every entry.
    let mut membership = Vec::new();
    for e in &chain.entries {
        let d = e.family.dist(&realized)?;
        membership.push(MembershipEntry {
            n: e.n,
            dist_valuation: d.valuation(cfg).value,
            verdict: d.is_negligible(cfg),
        });
    }
    let all_hold = membership.iter().all(|m| m.verdict.holds);
    Ok(SaturationResult { witness: SpliceNet { branches, realized }, membership, all_hold })
}

/// A decreasing chain of sharp balls B_n = {x : [[x - a_n]] <= r_n}.
#[derive(Debug, Clone)]
pub struct BallChain {
    pub centers: Vec<Net>,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BallCheck {
    pub n: usize,
    pub radius: f64,
    /// Exact valuation check on the symbolic branch member, when available.
    pub branch_exact: Option<Verdict>,
    pub grid_valuation: f64,
    pub grid: Verdict,
}

#[derive(Debug, Clone)]
pub struct BallsResult {
    pub witness: GenNumber,
    pub checks: Vec<BallCheck>,
    pub all_hold: bool,
}

/// A common point of a nested sequence of sharp balls: build interval
/// families V_n of radius eps^{-log r_n} around a_{n+1} and apply the
/// saturation witness. (B_{n+1} is contained in V_n and V_n in B_n by the
/// ultrametric inequality, given the validated nesting.)
pub fn nested_balls_witness(chain: &BallChain, cfg: &Config) -> Result<BallsResult> {
    let len = chain.centers.len();
    if len < 2 || chain.radii.len() != len {
        return Err(Error::Syntax("ball chain needs matching centers and radii, length >= 2".into()));
    }
    if chain.radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Syntax("ball radii must be positive".into()));
    }
    for n in 0..len - 1 {
        let diff = chain.centers[n + 1].sub(&chain.centers[n])?;
        let nu = diff.valuation(cfg);
        let slack = if nu.exact { 0.0 } else { 0.05 };
        if nu.value < -chain.radii[n].ln() - slack {
            return Err(Error::NotNested(n));
        }
        if chain.radii[n + 1] >= chain.radii[n] && !diff.is_negligible(cfg).holds {
            return Err(Error::NotNested(n));
        }
    }

    // Entry n (label n+1) is the interval of radius eps^{-log r_n} around
    // a_{n+1}; the last ball, which has no successor center, contributes a
    // final entry around its own center.
    let entry = |label: u32, center: &Net, r: f64| -> Result<ChainEntry> {
        let rho = Net::monomial(1.0, -r.ln());
        Ok(ChainEntry {
            n: label,
            t: None,
            family: SetFamily::new(
                vec![Shape::Interval { lo: center.sub(&rho)?, hi: center.add(&rho)? }],
                1,
            )?,
        })
    };
    let mut entries: Vec<ChainEntry> = (0..len - 1)
        .map(|n| entry(n as u32 + 1, &chain.centers[n + 1], chain.radii[n]))
        .collect::<Result<_>>()?;
    entries.push(entry(len as u32, &chain.centers[len - 1], chain.radii[len - 1])?);
    let spec = ChainSpec::new(entries)?;
    let sat = saturation_witness(&spec, cfg)?;
    let x = sat.witness.realized.components[0].clone();

    let mut checks = Vec::new();
    for n in 0..len {
        let r = chain.radii[n];
        let bound = -r.ln();
        // Exact per-branch check: the symbolic member of V_n (when n has a
        // branch) must sit within r_n of a_n.
        let branch_exact = sat
            .witness
            .branches
            .iter()
            .find(|b| b.n as usize == n + 1)
            .and_then(|b| {
                let d = b.member.components[0].sub(&chain.centers[n]).ok()?;
                let nu = d.valuation(cfg);
                nu.exact.then(|| Verdict::exact(nu.value >= bound - 1e-9))
            });
        let d = sat.witness.diff(0, &chain.centers[n], cfg)?;
        let nu = d.valuation_estimate(cfg.slope_window);
        let grid = Verdict::heuristic(nu >= bound - 0.05);
        checks.push(BallCheck {
            n,
            radius: r,
            branch_exact,
            grid_valuation: nu,
            grid,
        });
    }
    let all_hold = checks
        .iter()
        .all(|c| c.grid.holds && c.branch_exact.map_or(true, |v| v.holds));
    Ok(BallsResult { witness: GenNumber::new(x), checks, all_hold })
}

#[derive(Debug, Clone)]
pub struct CauchyEntry {
    pub j: usize,
    pub valuation: f64,
    pub sharp_dist: f64,
}

#[derive(Debug, Clone)]
pub struct CauchyResult {
    pub limit: GenNumber,
    pub depth: u32,
    pub table: Vec<CauchyEntry>,
}

/// Sharp limit of a Cauchy sequence, at the deepest depth certifiable from
/// the supplied length.
pub fn cauchy_limit(seq: &[GenNumber], cfg: &Config) -> Result<CauchyResult> {
    cauchy_build(seq, None, cfg)
}

/// Sharp limit certified to an explicit depth: for each n <= depth an index
/// j_n with all pairwise sharp distances below 2^{-n} from j_n on.
pub fn cauchy_limit_depth(seq: &[GenNumber], depth: u32, cfg: &Config) -> Result<CauchyResult> {
    cauchy_build(seq, Some(depth), cfg)
}

fn cauchy_build(seq: &[GenNumber], depth: Option<u32>, cfg: &Config) -> Result<CauchyResult> {
    let len = seq.len();
    if len < 2 {
        return Err(Error::SequenceTooShort(depth.unwrap_or(1) as usize));
    }
    // suffix_min[j] = min valuation of u_k - u_l over pairs k, l >= j.
    let mut suffix_min = vec![f64::INFINITY; len];
    for k in (0..len - 1).rev() {
        let mut m = suffix_min[k + 1];
        for l in k + 1..len {
            let nu = seq[k].rep.sub(&seq[l].rep)?.valuation(cfg).value;
            m = m.min(nu);
        }
        suffix_min[k] = m;
    }
    let ln2 = std::f64::consts::LN_2;
    // j_n = first index from which every pair is sharper than 2^{-n}; only
    // indices with at least one later element certify anything.
    let j_of = |n: u32| -> Option<usize> {
        (0..len - 1).find(|&j| suffix_min[j] > n as f64 * ln2)
    };
    if j_of(1).is_none() {
        return Err(Error::NotCauchy);
    }
    let cap = cfg.k_max - cfg.k_min;
    let depth = match depth {
        Some(d) => {
            if j_of(d).is_none() {
                return Err(Error::SequenceTooShort(d as usize));
            }
            d
        }
        None => (1..=cap).take_while(|&n| j_of(n).is_some()).last().unwrap(),
    };

    let spec = ChainSpec::new(
        (1..=depth)
            .map(|n| {
                let j = j_of(n).expect("certified above");
                let rho = Net::monomial(1.0, n as f64 * ln2);
                let c = &seq[j].rep;
                Ok(ChainEntry {
                    n,
                    t: None,
                    family: SetFamily::new(
                        vec![Shape::Interval { lo: c.sub(&rho)?, hi: c.add(&rho)? }],
                        1,
                    )?,
                })
            })
            .collect::<Result<_>>()?,
    )?;
    let sat = saturation_witness(&spec, cfg)?;
    let limit = sat.witness.realized.components[0].clone();

    let table = seq
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let d = sat.witness.diff(0, &u.rep, cfg)?;
            let nu = d.valuation_estimate(cfg.slope_window);
            Ok(CauchyEntry { j, valuation: nu, sharp_dist: (-nu).exp() })
        })
        .collect::<Result<_>>()?;
    Ok(CauchyResult { limit: GenNumber::new(limit), depth, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isets::contains;

    fn shrinking_interval_chain(n_max: u32) -> ChainSpec {
        ChainSpec::from_generator(n_max, |_| Some(0.0), |n| {
            SetFamily::new(
                vec![Shape::Interval {
                    lo: Net::monomial(-1.0, n as f64),
                    hi: Net::monomial(1.0, n as f64),
                }],
                1,
            )
        })
        .unwrap()
    }

    #[test]
    fn shrinking_intervals_witness_is_negligible() {
        let cfg = Config::default();
        let sat = saturation_witness(&shrinking_interval_chain(20), &cfg).unwrap();
        assert!(sat.all_hold);
        let w = &sat.witness.realized.components[0];
        assert!(w.valuation(&cfg).value >= 19.0);
        for e in &sat.membership {
            assert!(e.dist_valuation >= e.n as f64);
        }
        // Witness is a member of every entry under the containment check.
        let a5 = InternalSet::new(
            SetFamily::new(
                vec![Shape::Interval {
                    lo: Net::monomial(-1.0, 5.0),
                    hi: Net::monomial(1.0, 5.0),
                }],
                1,
            )
            .unwrap(),
        );
        let (v, _) = contains(&a5, &sat.witness.realized, &cfg).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn exterior_chain_refused_missing_bound() {
        let cfg = Config::default();
        let chain = ChainSpec::from_generator(5, |_| None, |n| {
            SetFamily::new(
                vec![Shape::Exterior { r: Net::monomial(1.0, -(n as f64)) }],
                1,
            )
        })
        .unwrap();
        assert!(matches!(
            saturation_witness(&chain, &cfg),
            Err(Error::MissingBound(0))
        ));
    }

    #[test]
    fn non_decreasing_chain_rejected() {
        let cfg = Config::default();
        let grow = ChainSpec::from_generator(3, |_| Some(0.0), |n| {
            SetFamily::new(
                vec![Shape::Interval {
                    lo: Net::zero(),
                    hi: Net::constant(n as f64),
                }],
                1,
            )
        })
        .unwrap();
        assert!(matches!(
            saturation_witness(&grow, &cfg),
            Err(Error::ChainNotDecreasing(1))
        ));
    }

    #[test]
    fn constant_chain_returns_member() {
        let cfg = Config::default();
        let chain = ChainSpec::from_generator(5, |_| Some(0.0), |_| {
            SetFamily::new(
                vec![Shape::Interval { lo: Net::constant(0.25), hi: Net::constant(1.0) }],
                1,
            )
        })
        .unwrap();
        let sat = saturation_witness(&chain, &cfg).unwrap();
        assert!(sat.all_hold);
        // The min-norm member of [1/4, 1] is the left endpoint.
        let w = &sat.witness.realized.components[0];
        assert!((w.eval_f64(2f64.powi(-20)) - 0.25).abs() < 1e-12);
    }

    fn partial_sum_centers(n_top: usize) -> Vec<Net> {
        // a_n = sum_{k<=n} eps^k, n = 1..=n_top.
        let mut acc = Net::monomial(1.0, 1.0);
        let mut out = Vec::new();
        for k in 2..=n_top + 1 {
            out.push(acc.clone());
            acc = acc.add(&Net::monomial(1.0, k as f64)).unwrap();
        }
        out.truncate(n_top);
        out
    }

    #[test]
    fn nested_balls_partial_sums() {
        let cfg = Config::default();
        let centers = partial_sum_centers(20);
        let radii: Vec<f64> = (1..=20).map(|n| (-(n as f64 + 1.0)).exp()).collect();
        let res = nested_balls_witness(&BallChain { centers, radii }, &cfg).unwrap();
        assert!(res.all_hold);
        for c in &res.checks {
            assert!(c.grid.holds, "ball {} failed: valuation {}", c.n, c.grid_valuation);
            if let Some(v) = c.branch_exact {
                assert!(v.holds && v.exact);
            }
        }
    }

    #[test]
    fn balls_not_nested_rejected() {
        let cfg = Config::default();
        // Centers jump by a constant while radii claim e^{-n} tightness.
        let centers = vec![Net::zero(), Net::constant(1.0), Net::constant(2.0)];
        let radii = vec![0.3, 0.1, 0.05];
        assert!(matches!(
            nested_balls_witness(&BallChain { centers, radii }, &cfg),
            Err(Error::NotNested(0))
        ));
        // Radii not decreasing while centers move.
        let centers = vec![Net::zero(), Net::monomial(1.0, 3.0)];
        let radii = vec![0.04, 0.04];
        assert!(matches!(
            nested_balls_witness(&BallChain { centers, radii }, &cfg),
            Err(Error::NotNested(0))
        ));
    }

    fn geometric_partial_sums(len: usize) -> Vec<GenNumber> {
        let mut acc = Net::constant(1.0);
        let mut out = vec![GenNumber::new(acc.clone())];
        for k in 1..len {
            acc = acc.add(&Net::monomial(1.0, k as f64)).unwrap();
            out.push(GenNumber::new(acc.clone()));
        }
        out
    }

    #[test]
    fn cauchy_limit_of_geometric_sums() {
        let cfg = Config::default();
        let seq = geometric_partial_sums(30);
        let res = cauchy_limit(&seq, &cfg).unwrap();
        assert!(res.depth >= 24, "depth {}", res.depth);
        for e in res.table.iter().take(16) {
            let expected = e.j as f64 + 1.0;
            assert!(
                (e.valuation - expected).abs() <= 0.05,
                "j = {}: valuation {} vs {}",
                e.j,
                e.valuation,
                expected
            );
        }
    }

    #[test]
    fn cauchy_constant_sequence() {
        let cfg = Config::default();
        let seq: Vec<GenNumber> = (0..12).map(|_| GenNumber::new(Net::constant(0.5))).collect();
        let res = cauchy_limit(&seq, &cfg).unwrap();
        let half = GenNumber::new(Net::constant(0.5));
        assert!(res.limit.gen_eq(&half, &cfg).unwrap().holds);
    }

    #[test]
    fn cauchy_alternating_rejected() {
        let cfg = Config::default();
        let seq: Vec<GenNumber> = (0..10)
            .map(|i| GenNumber::new(Net::constant(if i % 2 == 0 { 0.0 } else { 1.0 })))
            .collect();
        assert!(matches!(cauchy_limit(&seq, &cfg), Err(Error::NotCauchy)));
    }

    #[test]
    fn cauchy_depth_certification() {
        let cfg = Config::default();
        let seq = geometric_partial_sums(8);
        // Depth 40 needs j_40 ~ 28: an 8-term sequence cannot certify it.
        assert!(matches!(
            cauchy_limit_depth(&seq, 40, &cfg),
            Err(Error::SequenceTooShort(40))
        ));
        assert!(cauchy_limit_depth(&seq, 5, &cfg).is_ok());
    }
}
