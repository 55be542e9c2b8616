//! Symbolic nets: power sums over a comb partition of (0,1).
//!
//! A `PiecewiseNet` carries finitely many comb pieces plus one tail piece.
//! Binary operations refine the two partitions to a common one: combs over a
//! shared base (c, q) combine by residue arithmetic mod the lcm of their
//! periods; combs over different bases are accepted when they are disjoint
//! near 0 (each then sees the other net's tail value).

use super::comb::{lcm, validate_disjoint, Comb, CombPattern};
use super::power_sum::{PowerSum, Sign};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseNet {
    combs: Vec<(Comb, PowerSum)>,
    tail: PowerSum,
}

impl PiecewiseNet {
    pub fn new(combs: Vec<(Comb, PowerSum)>, tail: PowerSum) -> Result<PiecewiseNet> {
        validate_disjoint(&combs.iter().map(|p| p.0).collect::<Vec<_>>())?;
        Ok(PiecewiseNet { combs, tail }.canonical())
    }

    pub fn from_sum(tail: PowerSum) -> PiecewiseNet {
        PiecewiseNet { combs: Vec::new(), tail }
    }

    pub fn zero() -> PiecewiseNet {
        PiecewiseNet::from_sum(PowerSum::zero())
    }

    pub fn constant(c: f64) -> PiecewiseNet {
        PiecewiseNet::from_sum(PowerSum::constant(c))
    }

    /// c * eps^e as a tail-only net.
    pub fn monomial(coeff: f64, expo: f64) -> PiecewiseNet {
        PiecewiseNet::from_sum(PowerSum::monomial(coeff, expo))
    }

    /// The canonical infinitesimal scale alpha = [(eps)_eps].
    pub fn alpha() -> PiecewiseNet {
        PiecewiseNet::monomial(1.0, 1.0)
    }

    pub fn combs(&self) -> &[(Comb, PowerSum)] {
        &self.combs
    }

    pub fn tail(&self) -> &PowerSum {
        &self.tail
    }

    /// Drop comb pieces whose value coincides with the tail.
    fn canonical(mut self) -> PiecewiseNet {
        self.combs.retain(|(_, v)| *v != self.tail);
        self
    }

    pub fn value_at(&self, eps: f64) -> &PowerSum {
        for (comb, v) in &self.combs {
            if comb.contains(eps) {
                return v;
            }
        }
        &self.tail
    }

    /// Whether the tail piece accumulates at 0 (it does not when the comb
    /// pieces tile a whole interval (0, c]).
    pub fn tail_accumulates(&self) -> bool {
        if self.combs.is_empty() {
            return true;
        }
        // Exact check per base group: full residue coverage mod the lcm.
        let mut groups: Vec<Vec<&Comb>> = Vec::new();
        for (c, _) in &self.combs {
            match groups.iter_mut().find(|g| g[0].same_base(c)) {
                Some(g) => g.push(c),
                None => groups.push(vec![c]),
            }
        }
        for g in &groups {
            let l = g.iter().fold(1u32, |acc, c| lcm(acc, c.m));
            let mut covered = vec![false; l as usize];
            for c in g {
                for r in c.residues_mod(l) {
                    covered[r as usize] = true;
                }
            }
            if covered.iter().all(|&b| b) {
                return false;
            }
        }
        // Fallback probe for cross-base tilings.
        for k in 8..72 {
            for &f in &[1.0, 0.7] {
                let eps = f * 2f64.powi(-k);
                if !self.combs.iter().any(|(c, _)| c.contains(eps)) {
                    return true;
                }
            }
        }
        false
    }

    /// Pieces that recur as eps -> 0, i.e. all combs plus the tail when it
    /// accumulates.
    pub fn recurring_values(&self) -> Vec<&PowerSum> {
        let mut v: Vec<&PowerSum> = self.combs.iter().map(|(_, s)| s).collect();
        if self.tail_accumulates() {
            v.push(&self.tail);
        }
        v
    }

    /// nu(x) = min over recurring pieces of the piece valuation.
    pub fn valuation(&self) -> f64 {
        self.recurring_values()
            .iter()
            .map(|s| s.valuation())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sharp_norm(&self) -> f64 {
        (-self.valuation()).exp()
    }

    /// Exact: negligible iff every recurring piece has an empty term list.
    pub fn is_negligible(&self) -> bool {
        self.recurring_values().iter().all(|s| s.is_negligible())
    }

    pub fn is_zero(&self) -> bool {
        self.recurring_values().iter().all(|s| s.is_zero())
    }

    /// Eventual sign when it is uniform across recurring pieces.
    pub fn uniform_sign(&self) -> Option<Sign> {
        let vals = self.recurring_values();
        let first = vals.first()?.eventual_sign();
        vals.iter().all(|s| s.eventual_sign() == first).then_some(first)
    }

    /// self >= other eventually (piecewise on every recurring piece).
    pub fn ge_eventually(&self, other: &PiecewiseNet) -> Result<bool> {
        let d = self.sub(other)?;
        Ok(d.recurring_values()
            .iter()
            .all(|s| s.eventual_sign() != Sign::Neg))
    }

    pub fn map<F: Fn(&PowerSum) -> PowerSum>(&self, f: F) -> PiecewiseNet {
        PiecewiseNet {
            combs: self.combs.iter().map(|(c, v)| (*c, f(v))).collect(),
            tail: f(&self.tail),
        }
        .canonical()
    }

    pub fn neg(&self) -> PiecewiseNet {
        self.map(|s| s.neg())
    }

    pub fn scale(&self, c: f64) -> PiecewiseNet {
        self.map(|s| s.scale(c))
    }

    /// |x| piecewise, resolved by the eventual sign of each piece.
    pub fn abs(&self) -> PiecewiseNet {
        self.map(|s| s.abs())
    }

    pub fn add(&self, other: &PiecewiseNet) -> Result<PiecewiseNet> {
        zip(self, other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &PiecewiseNet) -> Result<PiecewiseNet> {
        zip(self, other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &PiecewiseNet) -> Result<PiecewiseNet> {
        zip(self, other, |a, b| a.mul(b))
    }

    /// max(x, y) piecewise; ties (gen-equal pieces) resolve to the left
    /// operand, which is the same generalized number.
    pub fn max(&self, other: &PiecewiseNet) -> Result<PiecewiseNet> {
        zip(self, other, |a, b| {
            if a.sub(b).eventual_sign() == Sign::Neg { b.clone() } else { a.clone() }
        })
    }

    pub fn min(&self, other: &PiecewiseNet) -> Result<PiecewiseNet> {
        zip(self, other, |a, b| {
            if a.sub(b).eventual_sign() == Sign::Pos { b.clone() } else { a.clone() }
        })
    }

    /// Indicator net of a union of patterns: 1 on the patterns, 0 elsewhere.
    pub fn indicator(patterns: &[CombPattern]) -> Result<PiecewiseNet> {
        let one = PowerSum::constant(1.0);
        let combs: Vec<Comb> = patterns
            .iter()
            .filter_map(|p| match p {
                CombPattern::Comb(c) => Some(*c),
                CombPattern::Tail => None,
            })
            .collect();
        validate_disjoint(&combs)?;
        if patterns.iter().any(|p| matches!(p, CombPattern::Tail)) {
            // The tail is the complement of *all* combs of the net; listing
            // it together with combs covers everything.
            return Ok(PiecewiseNet::from_sum(one));
        }
        PiecewiseNet::new(
            combs.into_iter().map(|c| (c, one.clone())).collect(),
            PowerSum::zero(),
        )
    }
}

/// Refine several nets to one common piece list. Returns (pattern, values per
/// net) with exactly one tail entry, pattern = None for the tail.
pub fn refine_many(nets: &[&PiecewiseNet]) -> Result<Vec<(Option<Comb>, Vec<PowerSum>)>> {
    // Group all combs by base.
    struct Group {
        base: Comb,
        // (net index, comb index within that net)
        members: Vec<(usize, usize)>,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (ni, net) in nets.iter().enumerate() {
        for (ci, (comb, _)) in net.combs.iter().enumerate() {
            match groups.iter_mut().find(|g| g.base.same_base(comb)) {
                Some(g) => g.members.push((ni, ci)),
                None => groups.push(Group { base: *comb, members: vec![(ni, ci)] }),
            }
        }
    }
    // Combs in different base groups must be disjoint near 0: each piece of
    // one group then sees the tail of every net without a comb there.
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            for &(ni, ci) in &groups[i].members {
                for &(nj, cj) in &groups[j].members {
                    let a = nets[ni].combs[ci].0;
                    let b = nets[nj].combs[cj].0;
                    if !a.disjoint_near_zero(&b) {
                        return Err(Error::IncompatiblePatterns(format!(
                            "combs with bases (c={}, q={}) and (c={}, q={}) overlap",
                            a.c, a.q, b.c, b.q
                        )));
                    }
                }
            }
        }
    }
    let mut pieces: Vec<(Option<Comb>, Vec<PowerSum>)> = Vec::new();
    for g in &groups {
        let l = g
            .members
            .iter()
            .fold(1u32, |acc, &(ni, ci)| lcm(acc, nets[ni].combs[ci].0.m));
        if l > 1 << 12 {
            return Err(Error::IncompatiblePatterns(format!(
                "common refinement period {l} too large"
            )));
        }
        for rho in 0..l {
            let mut values = Vec::with_capacity(nets.len());
            let mut any_comb = false;
            for (ni, net) in nets.iter().enumerate() {
                let mut val = net.tail.clone();
                for &(mi, ci) in &g.members {
                    if mi == ni {
                        let (comb, v) = &net.combs[ci];
                        if rho % comb.m == comb.r {
                            val = v.clone();
                            any_comb = true;
                        }
                    }
                }
                values.push(val);
            }
            if any_comb {
                let comb = Comb { c: g.base.c, q: g.base.q, m: l, r: rho };
                pieces.push((Some(comb), values));
            }
        }
    }
    pieces.push((None, nets.iter().map(|n| n.tail.clone()).collect()));
    Ok(pieces)
}

fn zip<F: Fn(&PowerSum, &PowerSum) -> PowerSum>(
    a: &PiecewiseNet,
    b: &PiecewiseNet,
    f: F,
) -> Result<PiecewiseNet> {
    let pieces = refine_many(&[a, b])?;
    let mut combs = Vec::new();
    let mut tail = PowerSum::zero();
    for (pat, vals) in pieces {
        let v = f(&vals[0], &vals[1]);
        match pat {
            Some(c) => combs.push((c, v)),
            None => tail = v,
        }
    }
    Ok(PiecewiseNet { combs, tail }.canonical())
}

/// Rebuild a net from refined pieces: exactly one entry must carry pattern
/// None (the tail).
pub fn from_pieces(pieces: Vec<(Option<Comb>, PowerSum)>) -> Result<PiecewiseNet> {
    let mut combs = Vec::new();
    let mut tail: Option<PowerSum> = None;
    for (pat, v) in pieces {
        match pat {
            Some(c) => combs.push((c, v)),
            None => {
                if tail.replace(v).is_some() {
                    return Err(Error::Syntax("more than one tail piece".into()));
                }
            }
        }
    }
    let tail = tail.ok_or_else(|| Error::Syntax("missing tail piece".into()))?;
    Ok(PiecewiseNet { combs, tail }.canonical())
}
