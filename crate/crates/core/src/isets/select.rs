//! Piecewise selection of extremal candidates with witness splicing.
//!
//! Candidates are (score net, witness nets) tuples over the symbolic
//! backend. All nets are refined to one common piece list; on each piece the
//! extremal score is chosen and the witness nets of the winning candidate
//! are spliced in, so score and witnesses stay consistent pointwise.

use crate::nets::{from_pieces, refine_many, PiecewiseNet, PowerSum, Sign};
use crate::Result;

pub struct Candidate {
    pub score: PiecewiseNet,
    pub witness: Vec<PiecewiseNet>,
}

/// Piecewise argmin (or argmax) over candidates; ties keep the earliest
/// candidate. All witness vectors must have the same arity.
pub fn select_extreme(
    cands: &[Candidate],
    minimize: bool,
) -> Result<(PiecewiseNet, Vec<PiecewiseNet>)> {
    assert!(!cands.is_empty());
    let arity = cands[0].witness.len();
    debug_assert!(cands.iter().all(|c| c.witness.len() == arity));
    let stride = arity + 1;
    let mut refs: Vec<&PiecewiseNet> = Vec::with_capacity(cands.len() * stride);
    for c in cands {
        refs.push(&c.score);
        refs.extend(c.witness.iter());
    }
    let pieces = refine_many(&refs)?;
    let mut score_pieces = Vec::with_capacity(pieces.len());
    let mut witness_pieces: Vec<Vec<(Option<crate::nets::Comb>, PowerSum)>> =
        vec![Vec::with_capacity(pieces.len()); arity];
    for (pat, vals) in &pieces {
        let mut best = 0usize;
        for i in 1..cands.len() {
            let d = vals[i * stride].sub(&vals[best * stride]);
            let wins = match d.eventual_sign() {
                Sign::Neg => minimize,
                Sign::Pos => !minimize,
                Sign::Zero => false,
            };
            if wins {
                best = i;
            }
        }
        score_pieces.push((*pat, vals[best * stride].clone()));
        for (w, out) in witness_pieces.iter_mut().enumerate() {
            out.push((*pat, vals[best * stride + 1 + w].clone()));
        }
    }
    let score = from_pieces(score_pieces)?;
    let witness = witness_pieces
        .into_iter()
        .map(from_pieces)
        .collect::<Result<Vec<_>>>()?;
    Ok((score, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::PiecewiseNet as P;

    #[test]
    fn min_of_monomials_with_witness() {
        let cands = vec![
            Candidate { score: P::monomial(1.0, 1.0), witness: vec![P::constant(10.0)] },
            Candidate { score: P::monomial(1.0, 3.0), witness: vec![P::constant(30.0)] },
        ];
        let (score, w) = select_extreme(&cands, true).unwrap();
        assert_eq!(score, P::monomial(1.0, 3.0));
        assert_eq!(w[0], P::constant(30.0));
        let (score, w) = select_extreme(&cands, false).unwrap();
        assert_eq!(score, P::monomial(1.0, 1.0));
        assert_eq!(w[0], P::constant(10.0));
    }

    #[test]
    fn piecewise_winner_splices_witness() {
        use crate::nets::{Comb, PowerSum};
        // Candidate 0 is small on the comb, candidate 1 small on the rest.
        let comb = Comb::new(0.5, 0.5, 2, 0).unwrap();
        let a = P::new(
            vec![(comb, PowerSum::monomial(1.0, 5.0))],
            PowerSum::monomial(1.0, 1.0),
        )
        .unwrap();
        let b = P::monomial(1.0, 3.0);
        let cands = vec![
            Candidate { score: a, witness: vec![P::constant(1.0)] },
            Candidate { score: b, witness: vec![P::constant(2.0)] },
        ];
        let (score, w) = select_extreme(&cands, true).unwrap();
        // On the comb: a = eps^5 wins; off it: b = eps^3 wins.
        let eps_on = 2f64.powi(-2) * 0.9; // inside (2^-3, 2^-2], ladder index 2? check via contains
        assert_eq!(score.value_at(0.4).leading().unwrap().expo, 5.0);
        let _ = eps_on;
        assert_eq!(score.tail().leading().unwrap().expo, 3.0);
        assert_eq!(w[0].value_at(0.4).leading().unwrap().coeff, 1.0);
        assert_eq!(w[0].tail().leading().unwrap().coeff, 2.0);
    }
}
