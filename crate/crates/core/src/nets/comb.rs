//! Geometric comb index sets.
//!
//! A comb with base (c, q) and residue r mod m denotes the union of the
//! intervals (c q^{k+1}, c q^k] over k >= 0 with k = r (mod m). Every comb
//! accumulates at 0, which is what makes it usable as an interleaving index
//! set; the tail pattern stands for "all remaining eps near 0".

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comb {
    pub c: f64,
    pub q: f64,
    pub m: u32,
    pub r: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CombPattern {
    Tail,
    Comb(Comb),
}

impl Comb {
    pub fn new(c: f64, q: f64, m: u32, r: u32) -> Result<Comb> {
        if !(0.0 < c && c < 1.0) || !(0.0 < q && q < 1.0) || m == 0 || r >= m {
            return Err(Error::Syntax(format!(
                "comb requires c,q in (0,1), m >= 1, 0 <= r < m; got c={c} q={q} m={m} r={r}"
            )));
        }
        Ok(Comb { c, q, m, r })
    }

    pub fn same_base(&self, other: &Comb) -> bool {
        self.c == other.c && self.q == other.q
    }

    /// Ladder index of eps: the k with eps in (c q^{k+1}, c q^k], or None if
    /// eps > c.
    fn ladder_index(&self, eps: f64) -> Option<i64> {
        if eps > self.c || eps <= 0.0 {
            return None;
        }
        let mut k = ((eps / self.c).ln() / self.q.ln()).floor() as i64;
        // Guard the floating floor against boundary round-off.
        while k > 0 && eps > self.c * self.q.powi(k as i32) {
            k -= 1;
        }
        while eps <= self.c * self.q.powi(k as i32 + 1) {
            k += 1;
        }
        Some(k)
    }

    pub fn contains(&self, eps: f64) -> bool {
        match self.ladder_index(eps) {
            Some(k) => k >= 0 && (k as u64) % (self.m as u64) == self.r as u64,
            None => false,
        }
    }

    /// Enumerate the intervals (lo, hi] of this comb down to eps_floor.
    pub fn intervals_down_to(&self, eps_floor: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut k = self.r as i64;
        loop {
            let hi = self.c * self.q.powi(k as i32);
            let lo = hi * self.q;
            if hi < eps_floor {
                break;
            }
            out.push((lo, hi));
            k += self.m as i64;
            if k > 4096 {
                break;
            }
        }
        out
    }

    /// Disjointness near 0, checked by direct enumeration of the comb
    /// intervals down to a fixed floor.
    pub fn disjoint_near_zero(&self, other: &Comb) -> bool {
        if self.same_base(other) {
            let l = lcm(self.m, other.m);
            let theirs = other.residues_mod(l);
            return self.residues_mod(l).iter().all(|r| !theirs.contains(r));
        }
        let floor = 2f64.powi(-64);
        let a = self.intervals_down_to(floor);
        let b = other.intervals_down_to(floor);
        for &(alo, ahi) in &a {
            for &(blo, bhi) in &b {
                // Half-open (lo, hi] intervals overlap iff each starts below
                // the other's end.
                if alo < bhi && blo < ahi {
                    return false;
                }
            }
        }
        true
    }

    /// Residue classes of this comb modulo a common multiple of m.
    pub fn residues_mod(&self, modulus: u32) -> Vec<u32> {
        debug_assert_eq!(modulus % self.m, 0);
        (0..modulus / self.m).map(|j| self.r + j * self.m).collect()
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

/// Validate that a list of combs is pairwise disjoint near 0.
pub fn validate_disjoint(combs: &[Comb]) -> Result<()> {
    for i in 0..combs.len() {
        for j in i + 1..combs.len() {
            if !combs[i].disjoint_near_zero(&combs[j]) {
                return Err(Error::Overlap(format!(
                    "pieces {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(())
}
