//! Attained extrema and set comparisons: minimal distance with witnesses,
//! maximal norm, directed sup-distance and Hausdorff equality.

use super::basic::{boxes_of, is_sharply_bounded};
use super::select::{select_extreme, Candidate};
use super::shape::{net_clamp, InternalSet, SetFamily, Shape};
use crate::nets::{GenNumber, Net, PiecewiseNet, VecNet, Verdict};
use crate::{Config, Error, Result};

/// One connected component of a d=1 shape.
#[derive(Debug, Clone)]
enum Comp1 {
    Seg(Net, Net),
    /// [r, +inf)
    RayUp(Net),
    /// (-inf, -r]
    RayDown(Net),
}

fn comps1(a: &SetFamily) -> Vec<Comp1> {
    let mut out = Vec::new();
    for s in &a.shapes {
        match s {
            Shape::Interval { lo, hi } => out.push(Comp1::Seg(lo.clone(), hi.clone())),
            Shape::Box { intervals } => {
                out.push(Comp1::Seg(intervals[0].0.clone(), intervals[0].1.clone()))
            }
            Shape::Points { pts } => {
                for p in pts {
                    let x = p.components[0].clone();
                    out.push(Comp1::Seg(x.clone(), x));
                }
            }
            Shape::Exterior { r } => {
                out.push(Comp1::RayDown(r.clone()));
                out.push(Comp1::RayUp(r.clone()));
            }
        }
    }
    out
}

/// Nearest pair (u in a, v in b); the distance is |u - v|.
fn pair_nearest(a: &Comp1, b: &Comp1) -> Result<(Net, Net)> {
    Ok(match (a, b) {
        (Comp1::Seg(a1, b1), Comp1::Seg(a2, b2)) => {
            let u = net_clamp(a2, a1, b1)?;
            let v = net_clamp(&u, a2, b2)?;
            (u, v)
        }
        (Comp1::Seg(a1, b1), Comp1::RayUp(r)) => {
            let u = net_clamp(r, a1, b1)?;
            let v = u.max(r)?;
            (u, v)
        }
        (Comp1::Seg(a1, b1), Comp1::RayDown(r)) => {
            let nr = r.neg();
            let u = net_clamp(&nr, a1, b1)?;
            let v = u.min(&nr)?;
            (u, v)
        }
        (Comp1::RayUp(_), Comp1::Seg(..)) | (Comp1::RayDown(_), Comp1::Seg(..)) => {
            let (v, u) = pair_nearest(b, a)?;
            (u, v)
        }
        (Comp1::RayUp(r1), Comp1::RayUp(r2)) => {
            let x = r1.max(r2)?;
            (x.clone(), x)
        }
        (Comp1::RayDown(r1), Comp1::RayDown(r2)) => {
            let x = r1.neg().min(&r2.neg())?;
            (x.clone(), x)
        }
        (Comp1::RayUp(r1), Comp1::RayDown(r2)) => (r1.clone(), r2.neg()),
        (Comp1::RayDown(r1), Comp1::RayUp(r2)) => (r1.neg(), r2.clone()),
    })
}

struct RawCandidate {
    dist: Net,
    u: Vec<Net>,
    v: Vec<Net>,
}

fn all_symbolic(nets: impl Iterator<Item = Net>) -> Option<Vec<PiecewiseNet>> {
    let mut out = Vec::new();
    for n in nets {
        out.push(n.as_symbolic()?.clone());
    }
    Some(out)
}

#[derive(Debug, Clone)]
pub struct MinDistance {
    pub dist: GenNumber,
    pub u: VecNet,
    pub v: VecNet,
    pub exact: bool,
}

/// Minimal sup-norm distance between A and B, with an attaining pair.
pub fn min_distance(a: &InternalSet, b: &InternalSet, cfg: &Config) -> Result<MinDistance> {
    if !is_sharply_bounded(&a.family, cfg)?.bounded.holds {
        return Err(Error::NotSharplyBounded);
    }
    if !a.family.eventually_nonempty() || !b.family.eventually_nonempty() {
        return Err(Error::EmptyFamily);
    }
    if a.family.dim != b.family.dim {
        return Err(Error::DimMismatch { expected: a.family.dim, got: b.family.dim });
    }
    let mut cands: Vec<RawCandidate> = Vec::new();
    if a.family.dim == 1 {
        for ca in &comps1(&a.family) {
            for cb in &comps1(&b.family) {
                let (u, v) = pair_nearest(ca, cb)?;
                cands.push(RawCandidate {
                    dist: u.sub(&v)?.abs(),
                    u: vec![u],
                    v: vec![v],
                });
            }
        }
    } else {
        for ba in &boxes_of(&a.family)? {
            for bb in &boxes_of(&b.family)? {
                let mut us = Vec::with_capacity(ba.len());
                let mut vs = Vec::with_capacity(ba.len());
                let mut d = Net::zero();
                for ((alo, ahi), (blo, bhi)) in ba.iter().zip(bb) {
                    let (u, v) = pair_nearest(
                        &Comp1::Seg(alo.clone(), ahi.clone()),
                        &Comp1::Seg(blo.clone(), bhi.clone()),
                    )?;
                    d = d.max(&u.sub(&v)?.abs())?;
                    us.push(u);
                    vs.push(v);
                }
                cands.push(RawCandidate { dist: d, u: us, v: vs });
            }
        }
    }
    pick_min(cands, a.family.dim, cfg)
}

fn pick_min(cands: Vec<RawCandidate>, dim: usize, cfg: &Config) -> Result<MinDistance> {
    let symbolic = all_symbolic(
        cands
            .iter()
            .flat_map(|c| std::iter::once(c.dist.clone()).chain(c.u.iter().cloned()).chain(c.v.iter().cloned())),
    );
    if let Some(flat) = symbolic {
        let stride = 1 + 2 * dim;
        let sel: Vec<Candidate> = flat
            .chunks(stride)
            .map(|ch| Candidate { score: ch[0].clone(), witness: ch[1..].to_vec() })
            .collect();
        let (score, w) = select_extreme(&sel, true)?;
        let u = VecNet::new(w[..dim].iter().cloned().map(Net::Symbolic).collect())?;
        let v = VecNet::new(w[dim..].iter().cloned().map(Net::Symbolic).collect())?;
        return Ok(MinDistance {
            dist: GenNumber::new(Net::Symbolic(score)),
            u,
            v,
            exact: true,
        });
    }
    // Mixed or sampled backends: exact splicing is unavailable; take the
    // pointwise min for the distance and the asymptotically best single
    // candidate for the witnesses.
    let mut dist = cands[0].dist.clone();
    for c in &cands[1..] {
        dist = dist.min(&c.dist)?;
    }
    let mut best = 0;
    let mut best_v = cands[0].dist.valuation(cfg).value;
    for (i, c) in cands.iter().enumerate().skip(1) {
        let v = c.dist.valuation(cfg).value;
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    Ok(MinDistance {
        dist: GenNumber::new(dist),
        u: VecNet::new(cands[best].u.clone())?,
        v: VecNet::new(cands[best].v.clone())?,
        exact: false,
    })
}

#[derive(Debug, Clone)]
pub struct MaxNorm {
    pub value: GenNumber,
    pub witness: VecNet,
    pub exact: bool,
}

/// Maximal sup-norm over a sharply bounded set, with an attaining member.
pub fn max_norm(a: &InternalSet, cfg: &Config) -> Result<MaxNorm> {
    if !is_sharply_bounded(&a.family, cfg)?.bounded.holds {
        return Err(Error::NotSharplyBounded);
    }
    if !a.family.eventually_nonempty() {
        return Err(Error::EmptyFamily);
    }
    let mut cands: Vec<(Net, Vec<Net>)> = Vec::new();
    for s in &a.family.shapes {
        match s {
            Shape::Interval { lo, hi } => {
                cands.push((lo.abs(), vec![lo.clone()]));
                cands.push((hi.abs(), vec![hi.clone()]));
            }
            Shape::Box { intervals } => {
                // For each coordinate and endpoint, a feasible witness point
                // with the other coordinates at their lower ends; the sup-norm
                // max is attained at one of these.
                for i in 0..intervals.len() {
                    for e in [&intervals[i].0, &intervals[i].1] {
                        let pt: Vec<Net> = intervals
                            .iter()
                            .enumerate()
                            .map(|(j, (lo, _))| if j == i { e.clone() } else { lo.clone() })
                            .collect();
                        let norm = VecNet::new(pt.clone())?.sup_norm()?;
                        cands.push((norm, pt));
                    }
                }
            }
            Shape::Points { pts } => {
                for p in pts {
                    cands.push((p.sup_norm()?, p.components.clone()));
                }
            }
            Shape::Exterior { .. } => unreachable!("bounded check rejects exteriors"),
        }
    }
    let dim = a.family.dim;
    let symbolic = all_symbolic(
        cands
            .iter()
            .flat_map(|(s, w)| std::iter::once(s.clone()).chain(w.iter().cloned())),
    );
    if let Some(flat) = symbolic {
        let sel: Vec<Candidate> = flat
            .chunks(dim + 1)
            .map(|ch| Candidate { score: ch[0].clone(), witness: ch[1..].to_vec() })
            .collect();
        let (score, w) = select_extreme(&sel, false)?;
        return Ok(MaxNorm {
            value: GenNumber::new(Net::Symbolic(score)),
            witness: VecNet::new(w.into_iter().map(Net::Symbolic).collect())?,
            exact: true,
        });
    }
    let mut value = cands[0].0.clone();
    for (s, _) in &cands[1..] {
        value = value.max(s)?;
    }
    let mut best = 0;
    let mut best_v = cands[0].0.valuation(cfg).value;
    for (i, (s, _)) in cands.iter().enumerate().skip(1) {
        let v = s.valuation(cfg).value;
        if v < best_v {
            best = i;
            best_v = v;
        }
    }
    Ok(MaxNorm {
        value: GenNumber::new(value),
        witness: VecNet::new(cands[best].1.clone())?,
        exact: false,
    })
}

#[derive(Debug, Clone)]
pub struct SubsetReport {
    pub verdict: Verdict,
    /// The directed sup-distance net sup_{u in A} dist(u, B).
    pub delta: Net,
}

/// A subset of B iff the directed sup-distance net is negligible.
pub fn subset_report(a: &InternalSet, b: &InternalSet, cfg: &Config) -> Result<SubsetReport> {
    if !is_sharply_bounded(&a.family, cfg)?.bounded.holds {
        return Err(Error::NotSharplyBounded);
    }
    if !a.family.eventually_nonempty() || !b.family.eventually_nonempty() {
        return Err(Error::EmptyFamily);
    }
    if a.family.dim != b.family.dim {
        return Err(Error::DimMismatch { expected: a.family.dim, got: b.family.dim });
    }
    let (candidates, enumeration_exact) = sup_candidates(&a.family, &b.family)?;
    let mut delta = Net::zero();
    for c in &candidates {
        delta = delta.max(&b.family.dist(c)?)?;
    }
    let neg = delta.is_negligible(cfg);
    Ok(SubsetReport {
        verdict: Verdict { holds: neg.holds, exact: neg.exact && enumeration_exact },
        delta,
    })
}

/// Candidate maximizers of dist(., B) inside A. Exact for d = 1 interval
/// unions; for d >= 2 box corners are exact against a single convex B shape
/// and a heuristic sample otherwise.
fn sup_candidates(a: &SetFamily, b: &SetFamily) -> Result<(Vec<VecNet>, bool)> {
    if a.dim == 1 {
        let a_segs: Vec<(Net, Net)> = comps1(a)
            .into_iter()
            .map(|c| match c {
                Comp1::Seg(lo, hi) => Ok((lo, hi)),
                _ => Err(Error::NotSharplyBounded),
            })
            .collect::<Result<_>>()?;
        let mut xs: Vec<Net> = Vec::new();
        for (lo, hi) in &a_segs {
            xs.push(lo.clone());
            xs.push(hi.clone());
        }
        // Midpoints of the gaps of B, where dist(., B) peaks locally.
        let mut bc = comps1(b);
        sort_comps(&mut bc)?;
        let mut runmax: Option<Net> = None; // None before the first component
        let mut unbounded_above = false;
        for c in &bc {
            let (lo, hi) = match c {
                Comp1::Seg(lo, hi) => (Some(lo.clone()), Some(hi.clone())),
                Comp1::RayDown(r) => (None, Some(r.neg())),
                Comp1::RayUp(r) => (Some(r.clone()), None),
            };
            if let (Some(h), Some(l)) = (&runmax, &lo) {
                let mid = h.add(l)?.scale(0.5);
                for (alo, ahi) in &a_segs {
                    xs.push(net_clamp(&mid, alo, ahi)?);
                }
            }
            match hi {
                Some(h) if !unbounded_above => {
                    runmax = Some(match runmax {
                        Some(r) => r.max(&h)?,
                        None => h,
                    });
                }
                Some(_) => {}
                None => unbounded_above = true,
            }
        }
        let out = xs.into_iter().map(VecNet::scalar).collect();
        return Ok((out, true));
    }
    // Corners of the boxes of A (point shapes become degenerate boxes).
    let mut out = Vec::new();
    for bx in &boxes_of(a)? {
        let d = bx.len();
        for mask in 0..(1u32 << d) {
            let pt: Vec<Net> = bx
                .iter()
                .enumerate()
                .map(|(i, (lo, hi))| {
                    if mask >> i & 1 == 1 { hi.clone() } else { lo.clone() }
                })
                .collect();
            out.push(VecNet::new(pt)?);
        }
    }
    // Against a single convex shape, dist(., B) is convex, so box corners
    // attain the sup; with several B shapes interior points can win and the
    // enumeration is only a lower-bound heuristic.
    let exact = b.shapes.len() == 1
        && matches!(b.shapes[0], Shape::Box { .. } | Shape::Interval { .. })
        || matches!(&b.shapes[..], [Shape::Points { pts }] if pts.len() == 1);
    Ok((out, exact))
}

/// Sort components by left endpoint, eventual comparison.
fn sort_comps(cs: &mut [Comp1]) -> Result<()> {
    // Insertion sort so the eventual-order comparison can fail cleanly.
    for i in 1..cs.len() {
        let mut j = i;
        while j > 0 && comp_lt(&cs[j], &cs[j - 1])? {
            cs.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

fn comp_lt(a: &Comp1, b: &Comp1) -> Result<bool> {
    let lo = |c: &Comp1| match c {
        Comp1::Seg(lo, _) => Some(lo.clone()),
        Comp1::RayUp(r) => Some(r.clone()),
        Comp1::RayDown(_) => None,
    };
    Ok(match (lo(a), lo(b)) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => !x.ge_eventually(&y)?.holds,
    })
}

#[derive(Debug, Clone)]
pub struct EqualityReport {
    pub verdict: Verdict,
    /// Hausdorff distance net: max of the two directed sup-distances.
    pub hausdorff: Net,
}

/// Equality of internal sets iff the Hausdorff net is negligible.
pub fn equality_report(a: &InternalSet, b: &InternalSet, cfg: &Config) -> Result<EqualityReport> {
    let ab = subset_report(a, b, cfg)?;
    let ba = subset_report(b, a, cfg)?;
    let h = ab.delta.max(&ba.delta)?;
    Ok(EqualityReport {
        verdict: ab.verdict.and(ba.verdict),
        hausdorff: h,
    })
}
