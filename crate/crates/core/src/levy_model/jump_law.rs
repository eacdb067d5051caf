use crate::{Error, Real, Result};

/// Jump-size law of a compound Poisson process.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpLaw<T> {
    PointMass { at: T },
    Uniform { lo: T, hi: T },
    /// Piecewise-constant density: cell `i` is `[edges[i], edges[i+1])`
    /// and carries probability `probs[i]`.
    Piecewise { edges: Vec<T>, probs: Vec<T> },
}

impl<T: Real> JumpLaw<T> {
    pub fn point_mass(at: T) -> Result<Self> {
        if at == T::zero() || !at.is_finite() {
            return Err(Error::UnsupportedJumpLaw("point mass must sit at a finite nonzero size".into()));
        }
        Ok(JumpLaw::PointMass { at })
    }

    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::UnsupportedJumpLaw("uniform law needs finite lo < hi".into()));
        }
        Ok(JumpLaw::Uniform { lo, hi })
    }

    pub fn piecewise(edges: Vec<T>, probs: Vec<T>) -> Result<Self> {
        if edges.len() != probs.len() + 1 || probs.is_empty() {
            return Err(Error::UnsupportedJumpLaw(
                "piecewise law needs one more edge than cell probabilities".into(),
            ));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::UnsupportedJumpLaw("piecewise edges must be finite and increasing".into()));
        }
        if probs.iter().any(|p| *p < T::zero()) {
            return Err(Error::UnsupportedJumpLaw("cell probabilities must be >= 0".into()));
        }
        let total = probs.iter().fold(T::zero(), |s, &p| s + p);
        if (total - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::UnsupportedJumpLaw(format!(
                "cell probabilities must sum to 1, got {total}"
            )));
        }
        Ok(JumpLaw::Piecewise { edges, probs })
    }

    /// `(lo, hi, probability)` for every cell of an absolutely continuous law.
    pub fn cells(&self) -> Vec<(T, T, T)> {
        match self {
            JumpLaw::PointMass { .. } => Vec::new(),
            JumpLaw::Uniform { lo, hi } => vec![(*lo, *hi, T::one())],
            JumpLaw::Piecewise { edges, probs } => edges
                .windows(2)
                .zip(probs.iter())
                .filter(|(_, p)| **p > T::zero())
                .map(|(w, &p)| (w[0], w[1], p))
                .collect(),
        }
    }

    /// Probability density; a point mass has none and reports 0.
    pub fn density(&self, x: T) -> T {
        self.cells()
            .into_iter()
            .find(|&(l, r, _)| x >= l && x < r)
            .map_or(T::zero(), |(l, r, p)| p / (r - l))
    }

    pub fn density_sup(&self) -> T {
        self.cells()
            .into_iter()
            .fold(T::zero(), |m, (l, r, p)| m.max(p / (r - l)))
    }

    /// `P(|Y| > a)`.
    pub fn tail_abs(&self, a: T) -> T {
        match self {
            JumpLaw::PointMass { at } => {
                if at.abs() > a {
                    T::one()
                } else {
                    T::zero()
                }
            }
            _ => {
                let inside = self.clipped_moment(0, a);
                (T::one() - inside).max(T::zero())
            }
        }
    }

    /// `E[Y^k ; |Y| < a]` (for a point mass the boundary counts as inside
    /// only when `inclusive`).
    pub fn partial_moment(&self, k: i32, a: T, inclusive: bool) -> T {
        match self {
            JumpLaw::PointMass { at } => {
                let inside = if inclusive { at.abs() <= a } else { at.abs() < a };
                if inside {
                    at.powi(k)
                } else {
                    T::zero()
                }
            }
            _ => self.clipped_moment(k, a),
        }
    }

    fn clipped_moment(&self, k: i32, a: T) -> T {
        let kp = k + 1;
        self.cells().into_iter().fold(T::zero(), |acc, (l, r, p)| {
            let lo = l.max(-a);
            let hi = r.min(a);
            if hi <= lo {
                return acc;
            }
            let d = p / (r - l);
            acc + d * (hi.powi(kp) - lo.powi(kp)) / T::lit(kp as f64)
        })
    }

    pub fn mean(&self) -> T {
        match self {
            JumpLaw::PointMass { at } => *at,
            _ => self.clipped_moment(1, T::infinity()),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let cells = self.cells();
        if cells.is_empty() {
            return false;
        }
        let tol = T::lit(1e-12);
        cells.iter().all(|&(l, r, p)| {
            cells.iter().any(|&(l2, r2, p2)| {
                (l2 + r).abs() <= tol && (r2 + l).abs() <= tol && (p2 - p).abs() <= tol
            })
        })
    }

    /// `(negative extent, positive extent)` of the support as distances from 0.
    pub fn extents(&self) -> (T, T) {
        let (lo, hi) = match self {
            JumpLaw::PointMass { at } => (*at, *at),
            JumpLaw::Uniform { lo, hi } => (*lo, *hi),
            JumpLaw::Piecewise { .. } => {
                let cells = self.cells();
                let lo = cells.iter().fold(T::infinity(), |m, c| m.min(c.0));
                let hi = cells.iter().fold(T::neg_infinity(), |m, c| m.max(c.1));
                (lo, hi)
            }
        };
        ((-lo).max(T::zero()), hi.max(T::zero()))
    }

    /// Smallest `|y|` in the support.
    pub fn min_abs(&self) -> T {
        match self {
            JumpLaw::PointMass { at } => at.abs(),
            _ => self.cells().into_iter().fold(T::infinity(), |m, (l, r, _)| {
                if l <= T::zero() && r >= T::zero() {
                    T::zero()
                } else {
                    m.min(l.abs().min(r.abs()))
                }
            }),
        }
    }

    /// Discontinuities of the density, as absolute values.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut pts: Vec<T> = self
            .cells()
            .into_iter()
            .flat_map(|(l, r, _)| [l.abs(), r.abs()])
            .filter(|x| *x > T::zero())
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts.dedup();
        pts
    }
}
