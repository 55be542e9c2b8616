//! Backend-tagged nets and generalized numbers.

use super::piecewise::PiecewiseNet;
use super::power_sum::Sign;
use super::sampled::{Sample, SampledNet};
use crate::{Config, Error, Result};

/// A net (x_eps)_eps in one of the two backends.
#[derive(Debug, Clone, PartialEq)]
pub enum Net {
    Symbolic(PiecewiseNet),
    Sampled(SampledNet),
}

/// A scalar result together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Exact (symbolic backend) or a grid estimate.
    pub exact: bool,
}

/// A boolean verdict together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub exact: bool,
}

impl Verdict {
    pub fn exact(holds: bool) -> Verdict {
        Verdict { holds, exact: true }
    }
    pub fn heuristic(holds: bool) -> Verdict {
        Verdict { holds, exact: false }
    }
    pub fn and(self, other: Verdict) -> Verdict {
        Verdict { holds: self.holds && other.holds, exact: self.exact && other.exact }
    }
}

impl Net {
    pub fn zero() -> Net {
        Net::Symbolic(PiecewiseNet::zero())
    }

    pub fn constant(c: f64) -> Net {
        Net::Symbolic(PiecewiseNet::constant(c))
    }

    pub fn alpha() -> Net {
        Net::Symbolic(PiecewiseNet::alpha())
    }

    pub fn monomial(coeff: f64, expo: f64) -> Net {
        Net::Symbolic(PiecewiseNet::monomial(coeff, expo))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Net::Symbolic(_))
    }

    pub fn as_symbolic(&self) -> Option<&PiecewiseNet> {
        match self {
            Net::Symbolic(p) => Some(p),
            Net::Sampled(_) => None,
        }
    }

    /// Pointwise evaluation on the geometric grid; the NEGL atom is
    /// evaluated as eps^{1/eps}.
    pub fn sample(&self, k_min: u32, k_max: u32) -> Result<SampledNet> {
        match self {
            Net::Symbolic(p) => SampledNet::tabulate(k_min, k_max, |_, eps| {
                let (sign, logmag) = p.value_at(eps).eval_log(eps);
                Sample { sign, logmag }
            }),
            Net::Sampled(s) => {
                if s.k_min == k_min && s.k_max == k_max {
                    Ok(s.clone())
                } else if s.k_min <= k_min && s.k_max >= k_max {
                    SampledNet::new(
                        k_min,
                        k_max,
                        (k_min..=k_max).map(|k| s.sample_at(k)).collect(),
                    )
                } else {
                    Err(Error::BackendMismatch)
                }
            }
        }
    }

    /// Numeric value at one eps; saturating, for report output only.
    pub fn eval_f64(&self, eps: f64) -> f64 {
        match self {
            Net::Symbolic(p) => {
                let (sign, logmag) = p.value_at(eps).eval_log(eps);
                Sample { sign, logmag }.value()
            }
            Net::Sampled(s) => {
                let k = (-eps.log2()).round() as u32;
                let k = k.clamp(s.k_min, s.k_max);
                s.sample_at(k).value()
            }
        }
    }

    fn binop(
        &self,
        other: &Net,
        sym: impl Fn(&PiecewiseNet, &PiecewiseNet) -> Result<PiecewiseNet>,
        smp: impl Fn(&SampledNet, &SampledNet) -> Result<SampledNet>,
    ) -> Result<Net> {
        match (self, other) {
            (Net::Symbolic(a), Net::Symbolic(b)) => Ok(Net::Symbolic(sym(a, b)?)),
            (Net::Sampled(a), Net::Sampled(b)) => Ok(Net::Sampled(smp(a, b)?)),
            // Mixed backends coerce the symbolic side onto the sample grid.
            (Net::Symbolic(_), Net::Sampled(b)) => {
                let a = self.sample(b.k_min, b.k_max)?;
                Ok(Net::Sampled(smp(&a, b)?))
            }
            (Net::Sampled(a), Net::Symbolic(_)) => {
                let b = other.sample(a.k_min, a.k_max)?;
                Ok(Net::Sampled(smp(a, &b)?))
            }
        }
    }

    pub fn add(&self, other: &Net) -> Result<Net> {
        self.binop(other, |a, b| a.add(b), |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Net) -> Result<Net> {
        self.binop(other, |a, b| a.sub(b), |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Net) -> Result<Net> {
        self.binop(other, |a, b| a.mul(b), |a, b| a.mul(b))
    }

    pub fn max(&self, other: &Net) -> Result<Net> {
        self.binop(other, |a, b| a.max(b), |a, b| a.max(b))
    }

    pub fn min(&self, other: &Net) -> Result<Net> {
        self.binop(other, |a, b| a.min(b), |a, b| a.min(b))
    }

    pub fn neg(&self) -> Net {
        match self {
            Net::Symbolic(p) => Net::Symbolic(p.neg()),
            Net::Sampled(s) => Net::Sampled(s.neg()),
        }
    }

    pub fn abs(&self) -> Net {
        match self {
            Net::Symbolic(p) => Net::Symbolic(p.abs()),
            Net::Sampled(s) => Net::Sampled(s.abs()),
        }
    }

    pub fn scale(&self, c: f64) -> Net {
        match self {
            Net::Symbolic(p) => Net::Symbolic(p.scale(c)),
            Net::Sampled(s) => Net::Sampled(s.scale(c)),
        }
    }

    /// nu(x); exact on the symbolic backend, slope fit on samples.
    pub fn valuation(&self, cfg: &Config) -> Estimate {
        match self {
            Net::Symbolic(p) => Estimate { value: p.valuation(), exact: true },
            Net::Sampled(s) => Estimate {
                value: s.valuation_estimate(cfg.slope_window),
                exact: false,
            },
        }
    }

    pub fn sharp_norm(&self, cfg: &Config) -> Estimate {
        let v = self.valuation(cfg);
        Estimate { value: (-v.value).exp(), exact: v.exact }
    }

    pub fn is_negligible(&self, cfg: &Config) -> Verdict {
        match self {
            Net::Symbolic(p) => Verdict::exact(p.is_negligible()),
            Net::Sampled(s) => {
                Verdict::heuristic(s.is_negligible_heuristic(cfg.slope_window, cfg.m_max))
            }
        }
    }

    /// Symbolic nets are structurally moderate; samples are checked against
    /// the slope threshold.
    pub fn is_moderate(&self, cfg: &Config) -> Verdict {
        match self {
            Net::Symbolic(_) => Verdict::exact(true),
            Net::Sampled(s) => {
                Verdict::heuristic(s.is_moderate_heuristic(cfg.slope_window, cfg.big_m_max))
            }
        }
    }

    /// self >= other eventually. Exact piecewise check for symbolic nets;
    /// on samples the tail of the grid decides.
    pub fn ge_eventually(&self, other: &Net) -> Result<Verdict> {
        match (self, other) {
            (Net::Symbolic(a), Net::Symbolic(b)) => Ok(Verdict::exact(a.ge_eventually(b)?)),
            _ => {
                let d = self.sub(other)?;
                let Net::Sampled(s) = d else { unreachable!() };
                let tail_ok = s
                    .samples()
                    .iter()
                    .rev()
                    .take(8)
                    .all(|smp| smp.sign >= 0);
                Ok(Verdict::heuristic(tail_ok))
            }
        }
    }
}

/// A generalized number: a net modulo negligibility.
#[derive(Debug, Clone, PartialEq)]
pub struct GenNumber {
    pub rep: Net,
}

impl GenNumber {
    pub fn new(rep: Net) -> GenNumber {
        GenNumber { rep }
    }

    pub fn alpha() -> GenNumber {
        GenNumber::new(Net::alpha())
    }

    /// Equality in the quotient: negligibility of the difference.
    pub fn gen_eq(&self, other: &GenNumber, cfg: &Config) -> Result<Verdict> {
        Ok(self.rep.sub(&other.rep)?.is_negligible(cfg))
    }
}

/// A point of R~^d: d nets over a shared backend.
#[derive(Debug, Clone, PartialEq)]
pub struct VecNet {
    pub components: Vec<Net>,
}

impl VecNet {
    pub fn new(components: Vec<Net>) -> Result<VecNet> {
        if components.is_empty() {
            return Err(Error::Syntax("VecNet needs at least one component".into()));
        }
        let sym = components[0].is_symbolic();
        if !components.iter().all(|c| c.is_symbolic() == sym) {
            return Err(Error::BackendMismatch);
        }
        Ok(VecNet { components })
    }

    pub fn scalar(net: Net) -> VecNet {
        VecNet { components: vec![net] }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Sup-norm |x|_inf as a net.
    pub fn sup_norm(&self) -> Result<Net> {
        let mut acc = self.components[0].abs();
        for c in &self.components[1..] {
            acc = acc.max(&c.abs())?;
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &VecNet) -> Result<VecNet> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(VecNet {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?,
        })
    }

    /// Sup-norm distance |x - y|_inf.
    pub fn dist(&self, other: &VecNet) -> Result<Net> {
        self.sub(other)?.sup_norm()
    }
}

/// Uniform eventual sign helper re-exported for set code.
pub fn eventual_sign(net: &Net) -> Option<Sign> {
    match net {
        Net::Symbolic(p) => p.uniform_sign(),
        Net::Sampled(s) => {
            let tail: Vec<i8> = s.samples().iter().rev().take(8).map(|x| x.sign).collect();
            let first = *tail.first()?;
            tail.iter().all(|&x| x == first).then(|| match first {
                0 => Sign::Zero,
                1 => Sign::Pos,
                _ => Sign::Neg,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_valuation_and_norm() {
        let cfg = Config::default();
        let a = Net::alpha();
        assert_eq!(a.valuation(&cfg).value, 1.0);
        assert!((a.sharp_norm(&cfg).value - (-1f64).exp()).abs() < 1e-12);
        assert_eq!(Net::zero().sharp_norm(&cfg).value, 0.0);
    }

    #[test]
    fn gen_eq_mod_negligible() {
        let cfg = Config::default();
        let a = GenNumber::alpha();
        let negl = Net::Symbolic(super::super::piecewise::PiecewiseNet::from_sum(
            super::super::power_sum::PowerSum::negl_atom(),
        ));
        let b = GenNumber::new(a.rep.add(&negl).unwrap());
        assert!(a.gen_eq(&b, &cfg).unwrap().holds);
        let c = GenNumber::new(a.rep.add(&Net::monomial(1.0, 9.0)).unwrap());
        assert!(!a.gen_eq(&c, &cfg).unwrap().holds);
    }

    #[test]
    fn zero_vs_negl_atom_equal() {
        let cfg = Config::default();
        let zero = GenNumber::new(Net::zero());
        let negl = GenNumber::new(Net::Symbolic(
            super::super::piecewise::PiecewiseNet::from_sum(
                super::super::power_sum::PowerSum::negl_atom(),
            ),
        ));
        let v = zero.gen_eq(&negl, &cfg).unwrap();
        assert!(v.holds && v.exact);
    }

    #[test]
    fn sample_round_trip_valuation() {
        let cfg = Config::default();
        let x = Net::monomial(1.0, 3.0);
        let s = x.sample(cfg.k_min, cfg.k_max).unwrap();
        let v = s.valuation_estimate(cfg.slope_window);
        assert!((2.999..=3.001).contains(&v));
    }

    #[test]
    fn sup_norm_of_vector() {
        let cfg = Config::default();
        let v = VecNet::new(vec![Net::monomial(1.0, 2.0), Net::monomial(-5.0, 1.0)]).unwrap();
        assert_eq!(v.sup_norm().unwrap().valuation(&cfg).value, 1.0);
    }
}
