//! Membership, boundedness, trimming, unions, interleaving, fattening,
//! products and projections.

use super::shape::{InternalSet, SetFamily, Shape};
use crate::nets::{CombPattern, Estimate, Net, PiecewiseNet, VecNet, Verdict};
use crate::{Config, Error, Result};

/// Membership of u in the internal set: negligibility of the distance net.
pub fn contains(a: &InternalSet, u: &VecNet, cfg: &Config) -> Result<(Verdict, Net)> {
    let d = a.family.dist(u)?;
    Ok((d.is_negligible(cfg), d))
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub bounded: Verdict,
    /// Minimal integer M with sup |x|_inf = O(eps^{-M}), when bounded.
    pub m: Option<i64>,
    pub sup: Option<Net>,
}

/// Whether sup over the family of |x|_inf is O(eps^{-M}) for some M, with
/// the minimal witness M.
pub fn is_sharply_bounded(a: &SetFamily, cfg: &Config) -> Result<BoundReport> {
    if a.shapes.is_empty() {
        return Ok(BoundReport { bounded: Verdict::exact(true), m: Some(0), sup: None });
    }
    let mut sup = Net::zero();
    for s in &a.shapes {
        match s.sup_abs()? {
            Some(n) => sup = sup.max(&n)?,
            None => {
                return Ok(BoundReport {
                    bounded: Verdict::exact(false),
                    m: None,
                    sup: None,
                })
            }
        }
    }
    let moderate = sup.is_moderate(cfg);
    if !moderate.holds {
        return Ok(BoundReport { bounded: moderate, m: None, sup: Some(sup) });
    }
    let Estimate { value: nu, exact } = sup.valuation(cfg);
    let m = (-nu).ceil().max(0.0) as i64;
    Ok(BoundReport {
        bounded: Verdict { holds: true, exact },
        m: Some(m),
        sup: Some(sup),
    })
}

/// Clip the family to {|x|_inf <= eps^{-m} + 1}, yielding a sharply bounded
/// representative of the same internal set when every member obeys the bound.
pub fn trim_bounded(a: &InternalSet, m: i64, _cfg: &Config) -> Result<SetFamily> {
    let b = Net::monomial(1.0, -(m as f64)).add(&Net::constant(1.0))?;
    let nb = b.neg();
    let mut kept: Vec<Shape> = Vec::new();
    for s in &a.family.shapes {
        match s {
            Shape::Interval { lo, hi } => {
                let lo2 = lo.max(&nb)?;
                let hi2 = hi.min(&b)?;
                if hi2.ge_eventually(&lo2)?.holds {
                    kept.push(Shape::Interval { lo: lo2, hi: hi2 });
                }
            }
            Shape::Box { intervals } => {
                let mut ivs = Vec::with_capacity(intervals.len());
                let mut ok = true;
                for (lo, hi) in intervals {
                    let lo2 = lo.max(&nb)?;
                    let hi2 = hi.min(&b)?;
                    if !hi2.ge_eventually(&lo2)?.holds {
                        ok = false;
                        break;
                    }
                    ivs.push((lo2, hi2));
                }
                if ok {
                    kept.push(Shape::Box { intervals: ivs });
                }
            }
            Shape::Points { pts } => {
                let mut keep = Vec::new();
                for p in pts {
                    if b.ge_eventually(&p.sup_norm()?)?.holds {
                        keep.push(p.clone());
                    }
                }
                if !keep.is_empty() {
                    kept.push(Shape::Points { pts: keep });
                }
            }
            Shape::Exterior { r } => {
                if a.family.dim != 1 {
                    return Err(Error::UnsupportedShapeCombo(
                        "clipping an exterior shape needs dimension 1".into(),
                    ));
                }
                if b.ge_eventually(r)?.holds {
                    kept.push(Shape::Interval { lo: r.clone(), hi: b.clone() });
                    kept.push(Shape::Interval { lo: nb.clone(), hi: r.neg() });
                }
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyClip);
    }
    SetFamily::new(kept, a.family.dim)
}

/// Smallest internal set containing A union B: shape-list concatenation.
pub fn internal_union(a: &InternalSet, b: &InternalSet) -> Result<InternalSet> {
    if a.family.dim != b.family.dim {
        return Err(Error::DimMismatch { expected: a.family.dim, got: b.family.dim });
    }
    let mut shapes = a.family.shapes.clone();
    shapes.extend(b.family.shapes.iter().cloned());
    Ok(InternalSet::new(SetFamily::new(shapes, a.family.dim)?))
}

/// Splice finitely many points along a partition of the index interval:
/// the result equals a_j on pattern j. At most one tail pattern is allowed
/// and stands for the complement of the comb patterns.
pub fn interleave(points: &[(VecNet, CombPattern)]) -> Result<VecNet> {
    if points.is_empty() {
        return Err(Error::NotAPartition("no pieces given".into()));
    }
    let dim = points[0].0.dim();
    if points.iter().any(|(p, _)| p.dim() != dim) {
        return Err(Error::DimMismatch { expected: dim, got: 0 });
    }
    if points
        .iter()
        .filter(|(_, pat)| matches!(pat, CombPattern::Tail))
        .count()
        > 1
    {
        return Err(Error::NotAPartition("more than one tail piece".into()));
    }
    let mut indicators: Vec<Option<PiecewiseNet>> = Vec::with_capacity(points.len());
    let mut comb_sum = PiecewiseNet::zero();
    for (_, pat) in points {
        match pat {
            CombPattern::Tail => indicators.push(None),
            CombPattern::Comb(_) => {
                let e = PiecewiseNet::indicator(std::slice::from_ref(pat))
                    .map_err(|e| Error::NotAPartition(e.to_string()))?;
                comb_sum = comb_sum
                    .add(&e)
                    .map_err(|e| Error::NotAPartition(e.to_string()))?;
                indicators.push(Some(e));
            }
        }
    }
    // Disjointness: the sum of comb indicators must stay <= 1 piecewise;
    // coverage: with a tail piece the complement is covered by definition,
    // otherwise the comb sum must be identically 1 on recurring pieces.
    let one = PiecewiseNet::constant(1.0);
    let excess = comb_sum.sub(&one).map_err(|e| Error::NotAPartition(e.to_string()))?;
    let has_tail = indicators.iter().any(|i| i.is_none());
    if has_tail {
        if !one.ge_eventually(&comb_sum).unwrap_or(false) {
            return Err(Error::NotAPartition("comb pieces overlap".into()));
        }
    } else if !excess.is_zero() {
        return Err(Error::NotAPartition(
            "comb pieces do not cover the index interval".into(),
        ));
    }
    let tail_indicator = one.sub(&comb_sum).map_err(|e| Error::NotAPartition(e.to_string()))?;
    let mut components = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut acc = Net::zero();
        for ((p, _), ind) in points.iter().zip(&indicators) {
            let e = Net::Symbolic(ind.clone().unwrap_or_else(|| tail_indicator.clone()));
            acc = acc.add(&e.mul(&p.components[c])?)?;
        }
        components.push(acc);
    }
    VecNet::new(components)
}

/// Family of eps^m-neighborhoods of the shapes.
pub fn fatten(a: &SetFamily, m: i64) -> Result<SetFamily> {
    let e = Net::monomial(1.0, m as f64);
    let mut shapes = Vec::with_capacity(a.shapes.len());
    for s in &a.shapes {
        shapes.push(match s {
            Shape::Interval { lo, hi } => {
                Shape::Interval { lo: lo.sub(&e)?, hi: hi.add(&e)? }
            }
            Shape::Box { intervals } => Shape::Box {
                intervals: intervals
                    .iter()
                    .map(|(lo, hi)| Ok((lo.sub(&e)?, hi.add(&e)?)))
                    .collect::<Result<_>>()?,
            },
            Shape::Points { pts } => {
                if a.dim == 1 {
                    // A union of intervals; emit one shape per point.
                    for p in pts {
                        let x = &p.components[0];
                        shapes.push(Shape::Interval { lo: x.sub(&e)?, hi: x.add(&e)? });
                    }
                    continue;
                }
                for p in pts {
                    shapes.push(Shape::Box {
                        intervals: p
                            .components
                            .iter()
                            .map(|x| Ok((x.sub(&e)?, x.add(&e)?)))
                            .collect::<Result<_>>()?,
                    });
                }
                continue;
            }
            Shape::Exterior { r } => {
                Shape::Exterior { r: r.sub(&e)?.max(&Net::zero())? }
            }
        });
    }
    SetFamily::new(shapes, a.dim)
}

pub(super) fn boxes_of(a: &SetFamily) -> Result<Vec<Vec<(Net, Net)>>> {
    let mut out = Vec::new();
    for s in &a.shapes {
        match s {
            Shape::Interval { lo, hi } => out.push(vec![(lo.clone(), hi.clone())]),
            Shape::Box { intervals } => out.push(intervals.clone()),
            Shape::Points { pts } => {
                for p in pts {
                    out.push(
                        p.components
                            .iter()
                            .map(|x| (x.clone(), x.clone()))
                            .collect(),
                    );
                }
            }
            Shape::Exterior { .. } => {
                return Err(Error::UnsupportedShapeCombo(
                    "exterior shapes have no box decomposition".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Cartesian product family under the sup-norm.
pub fn product(a: &InternalSet, b: &InternalSet) -> Result<InternalSet> {
    let dim = a.family.dim + b.family.dim;
    if a.family.shapes.is_empty() || b.family.shapes.is_empty() {
        return Ok(InternalSet::new(SetFamily::empty(dim)));
    }
    let ba = boxes_of(&a.family)?;
    let bb = boxes_of(&b.family)?;
    let mut shapes = Vec::with_capacity(ba.len() * bb.len());
    for x in &ba {
        for y in &bb {
            let mut ivs = x.clone();
            ivs.extend(y.iter().cloned());
            shapes.push(Shape::Box { intervals: ivs });
        }
    }
    Ok(InternalSet::new(SetFamily::new(shapes, dim)?))
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub set: InternalSet,
    /// True when the input was sharply bounded, so the family represents the
    /// projection exactly rather than an upper bound.
    pub verified: bool,
}

/// Coordinatewise projection; exact only under sharp boundedness.
pub fn project(a: &InternalSet, coords: &[usize], cfg: &Config) -> Result<Projection> {
    if !is_sharply_bounded(&a.family, cfg)?.bounded.holds {
        return Err(Error::NotSharplyBounded);
    }
    let set = project_unverified(a, coords)?;
    Ok(Projection { set, verified: true })
}

/// The upper-bound family [(proj(A_eps))_eps], which may strictly contain the
/// projection when A is not sharply bounded.
pub fn project_unverified(a: &InternalSet, coords: &[usize]) -> Result<InternalSet> {
    if coords.is_empty() || coords.iter().any(|&c| c >= a.family.dim) {
        return Err(Error::Syntax("projection coordinates out of range".into()));
    }
    let mut shapes = Vec::with_capacity(a.family.shapes.len());
    for s in &a.family.shapes {
        shapes.push(match s {
            Shape::Interval { .. } => s.clone(),
            Shape::Box { intervals } => {
                let ivs: Vec<(Net, Net)> =
                    coords.iter().map(|&c| intervals[c].clone()).collect();
                if ivs.len() == 1 {
                    Shape::Interval { lo: ivs[0].0.clone(), hi: ivs[0].1.clone() }
                } else {
                    Shape::Box { intervals: ivs }
                }
            }
            Shape::Points { pts } => Shape::Points {
                pts: pts
                    .iter()
                    .map(|p| {
                        VecNet::new(
                            coords.iter().map(|&c| p.components[c].clone()).collect(),
                        )
                    })
                    .collect::<Result<_>>()?,
            },
            Shape::Exterior { .. } => {
                return Err(Error::UnsupportedShapeCombo(
                    "exterior shapes do not project coordinatewise".into(),
                ))
            }
        });
    }
    Ok(InternalSet::new(SetFamily::new(shapes, coords.len())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::Comb;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn membership_basics() {
        // [0, eps^{-1}] contains alpha^{-1} (endpoint).
        let a = InternalSet::interval(Net::zero(), Net::monomial(1.0, -1.0)).unwrap();
        let u = VecNet::scalar(Net::monomial(1.0, -1.0));
        let (v, d) = contains(&a, &u, &cfg()).unwrap();
        assert!(v.holds && v.exact);
        assert!(d.as_symbolic().unwrap().is_zero());
        // [0,1] does not contain 1 + eps^3.
        let b = InternalSet::interval(Net::zero(), Net::constant(1.0)).unwrap();
        let u = VecNet::scalar(Net::constant(1.0).add(&Net::monomial(1.0, 3.0)).unwrap());
        let (v, d) = contains(&b, &u, &cfg()).unwrap();
        assert!(!v.holds);
        assert_eq!(d.valuation(&cfg()).value, 3.0);
    }

    #[test]
    fn negligible_point_is_member_of_zero() {
        let zero = InternalSet::scalar_point(Net::zero()).unwrap();
        let negl = VecNet::scalar(Net::Symbolic(PiecewiseNet::from_sum(
            crate::nets::PowerSum::negl_atom(),
        )));
        let (v, _) = contains(&zero, &negl, &cfg()).unwrap();
        assert!(v.holds && v.exact);
    }

    #[test]
    fn bounded_witness_m() {
        let a = InternalSet::interval(Net::monomial(-1.0, -2.0), Net::monomial(1.0, -2.0))
            .unwrap();
        let r = is_sharply_bounded(&a.family, &cfg()).unwrap();
        assert!(r.bounded.holds && r.bounded.exact);
        assert_eq!(r.m, Some(2));
        let e = SetFamily::new(vec![Shape::Exterior { r: Net::monomial(1.0, -1.0) }], 1)
            .unwrap();
        assert!(!is_sharply_bounded(&e, &cfg()).unwrap().bounded.holds);
        // [0, 1 + NEGL]: still M = 0.
        let negl = Net::Symbolic(PiecewiseNet::from_sum(crate::nets::PowerSum::negl_atom()));
        let b =
            InternalSet::interval(Net::zero(), Net::constant(1.0).add(&negl).unwrap()).unwrap();
        let r = is_sharply_bounded(&b.family, &cfg()).unwrap();
        assert!(r.bounded.holds);
        assert_eq!(r.m, Some(0));
    }

    #[test]
    fn trim_drops_far_component() {
        // [0, eps^{-1}] together with the far point eps^{-5}: clipping at
        // M = 1 removes the far piece.
        let fam = SetFamily::new(
            vec![
                Shape::Interval { lo: Net::zero(), hi: Net::monomial(1.0, -1.0) },
                Shape::Points { pts: vec![VecNet::scalar(Net::monomial(1.0, -5.0))] },
            ],
            1,
        )
        .unwrap();
        let t = trim_bounded(&InternalSet::new(fam), 1, &cfg()).unwrap();
        assert_eq!(t.shapes.len(), 1);
        assert!(matches!(t.shapes[0], Shape::Interval { .. }));
        // {eps^{-2}} with M = 1: everything clipped away.
        let p = InternalSet::scalar_point(Net::monomial(1.0, -2.0)).unwrap();
        assert!(matches!(trim_bounded(&p, 1, &cfg()), Err(Error::EmptyClip)));
        // [0,1] with M = 0: unchanged set.
        let a = InternalSet::interval(Net::zero(), Net::constant(1.0)).unwrap();
        let t = trim_bounded(&a, 0, &cfg()).unwrap();
        let (v, _) = contains(
            &InternalSet::new(t),
            &VecNet::scalar(Net::constant(1.0)),
            &cfg(),
        )
        .unwrap();
        assert!(v.holds);
    }

    #[test]
    fn interleave_stays_in_set() {
        let a = InternalSet::interval(Net::zero(), Net::constant(1.0)).unwrap();
        let s = CombPattern::Comb(Comb::new(0.5, 0.5, 2, 0).unwrap());
        let u = VecNet::scalar(Net::zero());
        let v = VecNet::scalar(Net::constant(1.0));
        let w = interleave(&[(u, s), (v, CombPattern::Tail)]).unwrap();
        let (verdict, _) = contains(&a, &w, &cfg()).unwrap();
        assert!(verdict.holds && verdict.exact);
    }

    #[test]
    fn interleaved_01_differs_from_both_constants() {
        use crate::nets::GenNumber;
        let s = CombPattern::Comb(Comb::new(0.5, 0.5, 2, 0).unwrap());
        let w = interleave(&[
            (VecNet::scalar(Net::zero()), s),
            (VecNet::scalar(Net::constant(1.0)), CombPattern::Tail),
        ])
        .unwrap();
        let x = GenNumber::new(w.components[0].clone());
        let zero = GenNumber::new(Net::zero());
        let one = GenNumber::new(Net::constant(1.0));
        assert!(!x.gen_eq(&zero, &cfg()).unwrap().holds);
        assert!(!x.gen_eq(&one, &cfg()).unwrap().holds);
        // Yet it belongs to the internal set over {0, 1}.
        let fam = SetFamily::new(
            vec![Shape::Points {
                pts: vec![
                    VecNet::scalar(Net::zero()),
                    VecNet::scalar(Net::constant(1.0)),
                ],
            }],
            1,
        )
        .unwrap();
        let (v, _) = contains(&InternalSet::new(fam), &w, &cfg()).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn non_partition_rejected() {
        let s = CombPattern::Comb(Comb::new(0.5, 0.5, 2, 0).unwrap());
        // Same pattern twice overlaps.
        let r = interleave(&[
            (VecNet::scalar(Net::zero()), s),
            (VecNet::scalar(Net::constant(1.0)), s),
        ]);
        assert!(matches!(r, Err(Error::NotAPartition(_))));
        // A single comb without tail does not cover.
        let r = interleave(&[(VecNet::scalar(Net::zero()), s)]);
        assert!(matches!(r, Err(Error::NotAPartition(_))));
    }

    #[test]
    fn fatten_interval() {
        let a = SetFamily::new(
            vec![Shape::Interval { lo: Net::zero(), hi: Net::constant(1.0) }],
            1,
        )
        .unwrap();
        let f = fatten(&a, 3).unwrap();
        let Shape::Interval { lo, hi } = &f.shapes[0] else { panic!() };
        assert_eq!(lo, &Net::monomial(-1.0, 3.0));
        assert_eq!(hi, &Net::constant(1.0).add(&Net::monomial(1.0, 3.0)).unwrap());
    }

    #[test]
    fn product_and_project_round_trip() {
        let a = InternalSet::interval(Net::zero(), Net::constant(1.0)).unwrap();
        let b = InternalSet::interval(Net::constant(2.0), Net::constant(3.0)).unwrap();
        let p = product(&a, &b).unwrap();
        assert_eq!(p.family.dim, 2);
        let m = VecNet::new(vec![
            Net::constant(0.5),
            Net::constant(2.0).add(&Net::alpha()).unwrap(),
        ])
        .unwrap();
        assert!(contains(&p, &m, &cfg()).unwrap().0.holds);
        let back = project(&p, &[0], &cfg()).unwrap();
        assert!(back.verified);
        let (v, _) = contains(&back.set, &VecNet::scalar(Net::constant(1.0)), &cfg()).unwrap();
        assert!(v.holds);
        let (v, _) = contains(&back.set, &VecNet::scalar(Net::constant(2.0)), &cfg()).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn project_points() {
        let p = InternalSet::new(
            SetFamily::new(
                vec![Shape::Points {
                    pts: vec![VecNet::new(vec![Net::alpha(), Net::monomial(1.0, 2.0)]).unwrap()],
                }],
                2,
            )
            .unwrap(),
        );
        let pr = project(&p, &[0], &cfg()).unwrap().set;
        let (v, _) = contains(&pr, &VecNet::scalar(Net::alpha()), &cfg()).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn unbounded_projection_refused() {
        // eps^{-1/eps} endpoint is not moderate: boundedness fails.
        let a = InternalSet::interval(
            Net::zero(),
            Net::Sampled(
                crate::nets::SampledNet::tabulate(2, 48, |_, eps| crate::nets::Sample {
                    sign: 1,
                    logmag: -(1.0 / eps) * eps.ln(),
                })
                .unwrap(),
            ),
        )
        .unwrap();
        assert!(matches!(
            project(&a, &[0], &cfg()),
            Err(Error::NotSharplyBounded)
        ));
    }
}
