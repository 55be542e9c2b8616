//! Numeric backend: sign + log-magnitude samples on the geometric grid
//! eps_k = 2^-k. Log-domain storage keeps eps^{-M} values finite at desk
//! grid depths.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// -1, 0 or +1.
    pub sign: i8,
    /// ln |x_eps|; NEG_INFINITY when sign = 0.
    pub logmag: f64,
}

impl Sample {
    pub fn zero() -> Sample {
        Sample { sign: 0, logmag: f64::NEG_INFINITY }
    }

    pub fn from_value(x: f64) -> Sample {
        if x == 0.0 {
            Sample::zero()
        } else {
            Sample { sign: if x > 0.0 { 1 } else { -1 }, logmag: x.abs().ln() }
        }
    }

    /// Numeric value; saturates instead of overflowing.
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.logmag.exp().min(f64::MAX)
        }
    }

    pub fn add(&self, other: &Sample) -> Sample {
        let (a, b) = (self, other);
        if a.sign == 0 {
            return *b;
        }
        if b.sign == 0 {
            return *a;
        }
        let m = a.logmag.max(b.logmag);
        let s = a.sign as f64 * (a.logmag - m).exp() + b.sign as f64 * (b.logmag - m).exp();
        if s == 0.0 {
            Sample::zero()
        } else {
            Sample { sign: if s > 0.0 { 1 } else { -1 }, logmag: m + s.abs().ln() }
        }
    }

    pub fn neg(&self) -> Sample {
        Sample { sign: -self.sign, logmag: self.logmag }
    }

    pub fn mul(&self, other: &Sample) -> Sample {
        if self.sign == 0 || other.sign == 0 {
            Sample::zero()
        } else {
            Sample { sign: self.sign * other.sign, logmag: self.logmag + other.logmag }
        }
    }

    pub fn abs(&self) -> Sample {
        Sample { sign: self.sign.abs(), logmag: self.logmag }
    }

    /// Signed comparison.
    pub fn lt(&self, other: &Sample) -> bool {
        let key = |s: &Sample| match s.sign {
            0 => 0.0,
            sg => sg as f64 * s.logmag.max(-1e300).exp().min(f64::MAX),
        };
        // Compare in the log domain when signs agree, to survive huge
        // magnitudes.
        match (self.sign, other.sign) {
            (0, 0) => false,
            (a, b) if a < b => true,
            (a, b) if a > b => false,
            (1, 1) => self.logmag < other.logmag,
            (-1, -1) => self.logmag > other.logmag,
            _ => key(self) < key(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledNet {
    pub k_min: u32,
    pub k_max: u32,
    samples: Vec<Sample>,
}

impl SampledNet {
    pub fn new(k_min: u32, k_max: u32, samples: Vec<Sample>) -> Result<SampledNet> {
        if k_min < 1 || k_max < k_min + 8 {
            return Err(Error::Syntax(
                "sampled grid requires k_min >= 1 and k_max >= k_min + 8".into(),
            ));
        }
        if samples.len() != (k_max - k_min + 1) as usize {
            return Err(Error::Syntax("sample count does not match grid".into()));
        }
        Ok(SampledNet { k_min, k_max, samples })
    }

    /// Build from a pointwise evaluator k -> sample.
    pub fn tabulate<F: FnMut(u32, f64) -> Sample>(
        k_min: u32,
        k_max: u32,
        mut f: F,
    ) -> Result<SampledNet> {
        let samples = (k_min..=k_max).map(|k| f(k, 2f64.powi(-(k as i32)))).collect();
        SampledNet::new(k_min, k_max, samples)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn eps(&self, k: u32) -> f64 {
        2f64.powi(-(k as i32))
    }

    pub fn sample_at(&self, k: u32) -> Sample {
        self.samples[(k - self.k_min) as usize]
    }

    pub fn same_grid(&self, other: &SampledNet) -> bool {
        self.k_min == other.k_min && self.k_max == other.k_max
    }

    pub fn zip<F: Fn(&Sample, &Sample) -> Sample>(
        &self,
        other: &SampledNet,
        f: F,
    ) -> Result<SampledNet> {
        if !self.same_grid(other) {
            return Err(Error::BackendMismatch);
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| f(a, b))
            .collect();
        SampledNet::new(self.k_min, self.k_max, samples)
    }

    pub fn map<F: Fn(&Sample) -> Sample>(&self, f: F) -> SampledNet {
        SampledNet {
            k_min: self.k_min,
            k_max: self.k_max,
            samples: self.samples.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &SampledNet) -> Result<SampledNet> {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &SampledNet) -> Result<SampledNet> {
        self.zip(other, |a, b| a.add(&b.neg()))
    }

    pub fn mul(&self, other: &SampledNet) -> Result<SampledNet> {
        self.zip(other, |a, b| a.mul(b))
    }

    pub fn max(&self, other: &SampledNet) -> Result<SampledNet> {
        self.zip(other, |a, b| if a.lt(b) { *b } else { *a })
    }

    pub fn min(&self, other: &SampledNet) -> Result<SampledNet> {
        self.zip(other, |a, b| if b.lt(a) { *b } else { *a })
    }

    pub fn neg(&self) -> SampledNet {
        self.map(|s| s.neg())
    }

    pub fn abs(&self) -> SampledNet {
        self.map(|s| s.abs())
    }

    pub fn scale(&self, c: f64) -> SampledNet {
        let cs = Sample::from_value(c);
        self.map(|s| s.mul(&cs))
    }

    /// Least-squares slope of logmag against ln eps over the last `window`
    /// nonzero samples. Comb nets alternate between branches with distinct
    /// slopes, so the fit is run per residue class for small strides and the
    /// reported valuation is the minimum branch slope of the stride with the
    /// best within-branch fit, matching nu = min over recurring branches.
    pub fn valuation_estimate(&self, window: usize) -> f64 {
        // Exactly zero over the whole tail window: eventual zero on the
        // grid, so the decay order is unbounded. (Interleaved comb nets keep
        // nonzero samples in every window and are unaffected.)
        if self
            .samples
            .iter()
            .rev()
            .take(window.max(4))
            .all(|s| s.sign == 0)
        {
            return f64::INFINITY;
        }
        self.nonzero_slope_estimate(window)
    }

    /// Slope fit over the last `window` nonzero samples only, with no
    /// eventual-zero shortcut. Membership checks that snap sub-resolution
    /// distances to zero use this to keep early above-floor samples decisive.
    pub fn nonzero_slope_estimate(&self, window: usize) -> f64 {
        let pts: Vec<(f64, f64)> = (self.k_min..=self.k_max)
            .filter_map(|k| {
                let s = self.sample_at(k);
                (s.sign != 0).then(|| ((k as f64) * -std::f64::consts::LN_2, s.logmag))
            })
            .collect();
        if pts.is_empty() {
            return f64::INFINITY;
        }
        let tail: Vec<(f64, f64)> = pts.iter().rev().take(window.max(4)).copied().collect();
        let mut best: Option<(f64, f64)> = None; // (residual per point, min slope)
        for stride in 1..=4usize {
            if tail.len() < stride * 3 {
                continue;
            }
            let mut worst_resid = 0.0f64;
            let mut min_slope = f64::INFINITY;
            for phase in 0..stride {
                let class: Vec<(f64, f64)> =
                    tail.iter().skip(phase).step_by(stride).copied().collect();
                if class.len() < 2 {
                    continue;
                }
                let (slope, resid) = least_squares(&class);
                worst_resid = worst_resid.max(resid);
                min_slope = min_slope.min(slope);
            }
            if best.map_or(true, |(r, _)| worst_resid < r - 1e-12) {
                best = Some((worst_resid, min_slope));
            }
        }
        best.map_or(f64::INFINITY, |(_, s)| s)
    }

    pub fn sharp_norm_estimate(&self, window: usize) -> f64 {
        (-self.valuation_estimate(window)).exp()
    }

    /// Heuristic: negligible iff the samples vanish exactly over the tail
    /// window (eventual zero on the grid) or the estimated valuation clears
    /// the threshold.
    pub fn is_negligible_heuristic(&self, window: usize, m_max: f64) -> bool {
        let tail_zero = self
            .samples
            .iter()
            .rev()
            .take(window.max(4))
            .all(|s| s.sign == 0);
        tail_zero || self.valuation_estimate(window) >= m_max
    }

    pub fn is_moderate_heuristic(&self, window: usize, big_m_max: f64) -> bool {
        self.valuation_estimate(window) > -big_m_max
    }
}

/// Slope and mean absolute residual of a least-squares line fit.
fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return (0.0, 0.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let resid = pts
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).abs())
        .sum::<f64>()
        / n;
    (slope, resid)
}
