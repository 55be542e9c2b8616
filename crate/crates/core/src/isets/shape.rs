//! Per-eps set families: shapes, dimensions, sup-norm distances.

use crate::nets::{Net, VecNet};
use crate::{Error, Result};

/// One component of a per-eps set, under the sup-norm on R^d.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// [lo_eps, hi_eps], d = 1.
    Interval { lo: Net, hi: Net },
    /// Product of d intervals.
    Box { intervals: Vec<(Net, Net)> },
    /// A finite point list.
    Points { pts: Vec<VecNet> },
    /// {x : |x|_inf >= r_eps}, any dimension.
    Exterior { r: Net },
}

impl Shape {
    /// Dimension forced by the shape, None when it adapts (Exterior).
    pub fn own_dim(&self) -> Option<usize> {
        match self {
            Shape::Interval { .. } => Some(1),
            Shape::Box { intervals } => Some(intervals.len()),
            Shape::Points { pts } => pts.first().map(|p| p.dim()),
            Shape::Exterior { .. } => None,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if let Some(d) = self.own_dim() {
            if d != dim {
                return Err(Error::DimMismatch { expected: dim, got: d });
            }
        }
        match self {
            Shape::Interval { lo, hi } => {
                if !hi.ge_eventually(lo)?.holds {
                    return Err(Error::Syntax("interval needs lo <= hi eventually".into()));
                }
            }
            Shape::Box { intervals } => {
                if intervals.is_empty() {
                    return Err(Error::Syntax("box needs at least one interval".into()));
                }
                for (lo, hi) in intervals {
                    if !hi.ge_eventually(lo)?.holds {
                        return Err(Error::Syntax("box interval needs lo <= hi eventually".into()));
                    }
                }
            }
            Shape::Points { pts } => {
                if pts.is_empty() {
                    return Err(Error::Syntax("point shape needs at least one point".into()));
                }
                if pts.iter().any(|p| p.dim() != dim) {
                    return Err(Error::DimMismatch { expected: dim, got: pts[0].dim() });
                }
            }
            Shape::Exterior { r } => {
                if !r.ge_eventually(&Net::zero())?.holds {
                    return Err(Error::Syntax("exterior radius must be >= 0 eventually".into()));
                }
            }
        }
        Ok(())
    }

    /// dist_inf(u_eps, shape_eps) as a net.
    pub fn dist(&self, u: &VecNet) -> Result<Net> {
        match self {
            Shape::Interval { lo, hi } => {
                interval_dist(lo, hi, &u.components[0])
            }
            Shape::Box { intervals } => {
                let mut acc = Net::zero();
                for ((lo, hi), c) in intervals.iter().zip(&u.components) {
                    acc = acc.max(&interval_dist(lo, hi, c)?)?;
                }
                Ok(acc)
            }
            Shape::Points { pts } => {
                let mut acc: Option<Net> = None;
                for p in pts {
                    let d = u.dist(p)?;
                    acc = Some(match acc {
                        Some(a) => a.min(&d)?,
                        None => d,
                    });
                }
                Ok(acc.expect("validated nonempty"))
            }
            Shape::Exterior { r } => {
                let n = u.sup_norm()?;
                r.sub(&n)?.max(&Net::zero())
            }
        }
    }

    /// Sup of |x|_inf over the shape; None means unbounded.
    pub fn sup_abs(&self) -> Result<Option<Net>> {
        Ok(match self {
            Shape::Interval { lo, hi } => Some(lo.abs().max(&hi.abs())?),
            Shape::Box { intervals } => {
                let mut acc = Net::zero();
                for (lo, hi) in intervals {
                    acc = acc.max(&lo.abs().max(&hi.abs())?)?;
                }
                Some(acc)
            }
            Shape::Points { pts } => {
                let mut acc = Net::zero();
                for p in pts {
                    acc = acc.max(&p.sup_norm()?)?;
                }
                Some(acc)
            }
            Shape::Exterior { .. } => None,
        })
    }

    /// Numeric slice at one eps (for grid fallbacks and searches).
    pub fn at_eps(&self, eps: f64) -> NumShape {
        match self {
            Shape::Interval { lo, hi } => NumShape::Seg(lo.eval_f64(eps), hi.eval_f64(eps)),
            Shape::Box { intervals } => NumShape::BoxN(
                intervals
                    .iter()
                    .map(|(lo, hi)| (lo.eval_f64(eps), hi.eval_f64(eps)))
                    .collect(),
            ),
            Shape::Points { pts } => NumShape::Pts(
                pts.iter()
                    .map(|p| p.components.iter().map(|c| c.eval_f64(eps)).collect())
                    .collect(),
            ),
            Shape::Exterior { r } => NumShape::Ext(r.eval_f64(eps)),
        }
    }
}

/// max(lo - x, x - hi, 0) as a net.
pub fn interval_dist(lo: &Net, hi: &Net, x: &Net) -> Result<Net> {
    lo.sub(x)?.max(&x.sub(hi)?)?.max(&Net::zero())
}

/// clamp(x, lo, hi) = max(lo, min(hi, x)).
pub fn net_clamp(x: &Net, lo: &Net, hi: &Net) -> Result<Net> {
    lo.max(&hi.min(x)?)
}

/// Numeric snapshot of a shape at a fixed eps.
#[derive(Debug, Clone, PartialEq)]
pub enum NumShape {
    Seg(f64, f64),
    BoxN(Vec<(f64, f64)>),
    Pts(Vec<Vec<f64>>),
    Ext(f64),
}

impl NumShape {
    pub fn dist(&self, u: &[f64]) -> f64 {
        match self {
            NumShape::Seg(lo, hi) => seg_dist(*lo, *hi, u[0]),
            NumShape::BoxN(iv) => iv
                .iter()
                .zip(u)
                .map(|(&(lo, hi), &x)| seg_dist(lo, hi, x))
                .fold(0.0, f64::max),
            NumShape::Pts(pts) => pts
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(u)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min),
            NumShape::Ext(r) => {
                let n = u.iter().map(|x| x.abs()).fold(0.0, f64::max);
                (r - n).max(0.0)
            }
        }
    }
}

pub fn seg_dist(lo: f64, hi: f64, x: f64) -> f64 {
    (lo - x).max(x - hi).max(0.0)
}

/// An eps-parameterized union of shapes in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFamily {
    pub shapes: Vec<Shape>,
    pub dim: usize,
    pub name: Option<String>,
}

impl SetFamily {
    pub fn new(shapes: Vec<Shape>, dim: usize) -> Result<SetFamily> {
        for s in &shapes {
            s.validate(dim)?;
        }
        Ok(SetFamily { shapes, dim, name: None })
    }

    pub fn named(mut self, name: &str) -> SetFamily {
        self.name = Some(name.to_string());
        self
    }

    pub fn empty(dim: usize) -> SetFamily {
        SetFamily { shapes: Vec::new(), dim, name: None }
    }

    /// Nonempty for all small eps. Exterior and point shapes are always
    /// nonempty; intervals need lo <= hi eventually, which construction
    /// already enforced.
    pub fn eventually_nonempty(&self) -> bool {
        !self.shapes.is_empty()
    }

    /// dist_inf(u_eps, union of shapes) as a net.
    pub fn dist(&self, u: &VecNet) -> Result<Net> {
        if u.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: u.dim() });
        }
        let mut acc: Option<Net> = None;
        for s in &self.shapes {
            let d = s.dist(u)?;
            acc = Some(match acc {
                Some(a) => a.min(&d)?,
                None => d,
            });
        }
        acc.ok_or(Error::EmptyFamily)
    }

    pub fn dist_at(&self, u: &[f64], eps: f64) -> f64 {
        self.shapes
            .iter()
            .map(|s| s.at_eps(eps).dist(u))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A subset of R~^d given by a chosen representative family.
#[derive(Debug, Clone, PartialEq)]
pub struct InternalSet {
    pub family: SetFamily,
}

impl InternalSet {
    pub fn new(family: SetFamily) -> InternalSet {
        InternalSet { family }
    }

    pub fn interval(lo: Net, hi: Net) -> Result<InternalSet> {
        Ok(InternalSet::new(SetFamily::new(
            vec![Shape::Interval { lo, hi }],
            1,
        )?))
    }

    pub fn point(p: VecNet) -> Result<InternalSet> {
        let d = p.dim();
        Ok(InternalSet::new(SetFamily::new(
            vec![Shape::Points { pts: vec![p] }],
            d,
        )?))
    }

    pub fn scalar_point(x: Net) -> Result<InternalSet> {
        InternalSet::point(VecNet::scalar(x))
    }
}
