//! Finite real-exponent power sums, the exact scale of the symbolic backend.
//!
//! A `PowerSum` is sum_i c_i * eps^{e_i} plus an optional formal negligible
//! atom (realized as eps^{1/eps} when sampling). Power sums are always
//! moderate and are negligible exactly when the term list is empty.

/// One monomial c * eps^e.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub expo: f64,
}

/// Eventual sign of a net as eps -> 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSum {
    /// Sorted strictly increasing by exponent; no zero coefficients.
    terms: Vec<Term>,
    /// One formal term of infinite valuation (the eps^{1/eps} atom).
    negl: bool,
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum::default()
    }

    pub fn constant(c: f64) -> Self {
        PowerSum::from_terms(vec![Term { coeff: c, expo: 0.0 }], false)
    }

    /// c * eps^e.
    pub fn monomial(coeff: f64, expo: f64) -> Self {
        PowerSum::from_terms(vec![Term { coeff, expo }], false)
    }

    /// The pure negligible atom.
    pub fn negl_atom() -> Self {
        PowerSum::from_terms(vec![], true)
    }

    /// Canonicalize: merge equal exponents, drop zero coefficients, sort.
    pub fn from_terms(mut terms: Vec<Term>, negl: bool) -> Self {
        terms.retain(|t| t.coeff != 0.0);
        terms.sort_by(|a, b| a.expo.total_cmp(&b.expo));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.expo == t.expo => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        PowerSum { terms: merged, negl }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn has_negl(&self) -> bool {
        self.negl
    }

    /// True zero sum (not merely negligible).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && !self.negl
    }

    /// Negligible iff the term list is empty (the atom is allowed).
    pub fn is_negligible(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (smallest-exponent) term, if any.
    pub fn leading(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    /// nu = smallest exponent; +inf for a negligible sum, matching
    /// sup{b : |x_eps| = O(eps^b)} literally (a pure atom also reports +inf).
    pub fn valuation(&self) -> f64 {
        self.leading().map_or(f64::INFINITY, |t| t.expo)
    }

    /// Eventual sign as eps -> 0. A negligible sum counts as a tie (Zero):
    /// the atom carries no sign of its own.
    pub fn eventual_sign(&self) -> Sign {
        match self.leading() {
            None => Sign::Zero,
            Some(t) if t.coeff > 0.0 => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn add(&self, other: &PowerSum) -> PowerSum {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        PowerSum::from_terms(terms, self.negl || other.negl)
    }

    pub fn neg(&self) -> PowerSum {
        PowerSum {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: -t.coeff, expo: t.expo })
                .collect(),
            negl: self.negl,
        }
    }

    pub fn sub(&self, other: &PowerSum) -> PowerSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PowerSum) -> PowerSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term { coeff: a.coeff * b.coeff, expo: a.expo + b.expo });
            }
        }
        // NEGL times any nonzero net is still negligible; NEGL times exact
        // zero vanishes.
        let negl = (self.negl && !(other.terms.is_empty() && !other.negl))
            || (other.negl && !(self.terms.is_empty() && !self.negl));
        PowerSum::from_terms(terms, negl)
    }

    pub fn scale(&self, c: f64) -> PowerSum {
        if c == 0.0 {
            return PowerSum::zero();
        }
        PowerSum {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coeff: c * t.coeff, expo: t.expo })
                .collect(),
            negl: self.negl,
        }
    }

    /// |x| resolved by eventual sign; a negligible sum is returned unchanged
    /// (the atom is unsigned, so |NEGL| = NEGL).
    pub fn abs(&self) -> PowerSum {
        match self.eventual_sign() {
            Sign::Neg => self.neg(),
            _ => self.clone(),
        }
    }

    /// Numeric value at a fixed eps, in the signed log domain:
    /// returns (sign, ln|value|). Computed by signed log-sum-exp so that
    /// eps^{-M} at deep grid points cannot overflow.
    pub fn eval_log(&self, eps: f64) -> (i8, f64) {
        let ln_eps = eps.ln();
        let mut logs: Vec<(f64, f64)> = self
            .terms
            .iter()
            .map(|t| (t.coeff.abs().ln() + t.expo * ln_eps, t.coeff.signum()))
            .collect();
        if self.negl {
            logs.push((ln_eps / eps, 1.0));
        }
        if logs.is_empty() {
            return (0, f64::NEG_INFINITY);
        }
        let m = logs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return (0, f64::NEG_INFINITY);
        }
        let s: f64 = logs.iter().map(|&(l, sg)| sg * (l - m).exp()).sum();
        if s == 0.0 {
            (0, f64::NEG_INFINITY)
        } else {
            (if s > 0.0 { 1 } else { -1 }, m + s.abs().ln())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_zero() {
        let z = PowerSum::from_terms(vec![Term { coeff: 0.0, expo: 3.0 }], false);
        assert!(z.is_zero());
        assert_eq!(z.valuation(), f64::INFINITY);
    }

    #[test]
    fn merge_and_cancel() {
        let a = PowerSum::monomial(2.0, 1.0);
        let b = PowerSum::monomial(-2.0, 1.0);
        assert!(a.add(&b).is_zero());
        let c = a.add(&PowerSum::monomial(1.0, 2.0));
        assert_eq!(c.terms().len(), 2);
        assert_eq!(c.valuation(), 1.0);
    }

    #[test]
    fn valuation_additive_under_mul() {
        let a = PowerSum::monomial(3.0, 1.5).add(&PowerSum::monomial(1.0, 2.0));
        let b = PowerSum::monomial(-2.0, 0.5);
        assert_eq!(a.mul(&b).valuation(), 2.0);
    }

    #[test]
    fn abs_by_eventual_sign() {
        // -3 eps + eps^2 is eventually negative.
        let x = PowerSum::from_terms(
            vec![Term { coeff: -3.0, expo: 1.0 }, Term { coeff: 1.0, expo: 2.0 }],
            false,
        );
        let ax = x.abs();
        assert_eq!(ax.leading().unwrap().coeff, 3.0);
        assert_eq!(ax.terms()[1].coeff, -1.0);
    }

    #[test]
    fn negl_atom_is_negligible_not_zero() {
        let n = PowerSum::negl_atom();
        assert!(n.is_negligible());
        assert!(!n.is_zero());
        assert_eq!(n.valuation(), f64::INFINITY);
        // NEGL * 0 = 0 exactly.
        assert!(n.mul(&PowerSum::zero()).is_zero());
        // NEGL * eps stays negligible.
        assert!(n.mul(&PowerSum::monomial(1.0, 1.0)).is_negligible());
    }

    #[test]
    fn log_eval_no_overflow() {
        let x = PowerSum::monomial(5.0, -50.0);
        let (s, l) = x.eval_log(2f64.powi(-40));
        assert_eq!(s, 1);
        // ln 5 + 50 * 40 * ln 2
        assert!((l - (5f64.ln() + 2000.0 * 2f64.ln())).abs() < 1e-9);
    }
}
