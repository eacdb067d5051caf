//! Explicit constants of the tail bounds as functions of α (and, where
//! the bound needs it, of M or of the ε-branch).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::{Error, Real, Result};

/// Name of a bound constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Constant {
    C1Alpha,
    C2Alpha,
    C1,
    C2,
    D1,
    D2,
    D3,
    TildeD1,
    E1,
    L1,
    G1,
    G2,
    K1,
    K2,
    K3,
    K4,
    K5,
    K6,
    F1,
    F2,
    F3,
    F4,
    F5,
}

impl Constant {
    pub const ALL: [Constant; 23] = [
        Constant::C1Alpha,
        Constant::C2Alpha,
        Constant::C1,
        Constant::C2,
        Constant::D1,
        Constant::D2,
        Constant::D3,
        Constant::TildeD1,
        Constant::E1,
        Constant::L1,
        Constant::G1,
        Constant::G2,
        Constant::K1,
        Constant::K2,
        Constant::K3,
        Constant::K4,
        Constant::K5,
        Constant::K6,
        Constant::F1,
        Constant::F2,
        Constant::F3,
        Constant::F4,
        Constant::F5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::C1Alpha => "C1Alpha",
            Constant::C2Alpha => "C2Alpha",
            Constant::C1 => "C1",
            Constant::C2 => "C2",
            Constant::D1 => "D1",
            Constant::D2 => "D2",
            Constant::D3 => "D3",
            Constant::TildeD1 => "TildeD1",
            Constant::E1 => "E1",
            Constant::L1 => "L1",
            Constant::G1 => "G1",
            Constant::G2 => "G2",
            Constant::K1 => "K1",
            Constant::K2 => "K2",
            Constant::K3 => "K3",
            Constant::K4 => "K4",
            Constant::K5 => "K5",
            Constant::K6 => "K6",
            Constant::F1 => "F1",
            Constant::F2 => "F2",
            Constant::F3 => "F3",
            Constant::F4 => "F4",
            Constant::F5 => "F5",
        }
    }

    pub fn from_name(name: &str) -> Option<Constant> {
        Constant::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(name))
    }

    /// Whether the constant needs the class constant M.
    pub fn needs_m(self) -> bool {
        matches!(self, Constant::L1 | Constant::G1 | Constant::G2)
    }

    /// Whether the constant depends on the ε-branch.
    pub fn needs_eps(self) -> bool {
        matches!(self, Constant::K5 | Constant::K6 | Constant::F2 | Constant::F3)
    }

    fn domain(self) -> Domain {
        use Constant::*;
        match self {
            C1Alpha | C2Alpha | C1 | C2 | D1 | D2 | D3 | TildeD1 => Domain::FiniteVariation,
            E1 | K2 => Domain::OpenInfinite,
            _ => Domain::Infinite,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy)]
enum Domain {
    /// α ∈ (0, 1)
    FiniteVariation,
    /// α ∈ (1, 2)
    OpenInfinite,
    /// α ∈ [1, 2)
    Infinite,
}

impl Domain {
    fn contains<T: Real>(self, alpha: T) -> bool {
        let (one, two) = (T::one(), T::lit(2.0));
        match self {
            Domain::FiniteVariation => alpha > T::zero() && alpha < one,
            Domain::OpenInfinite => alpha > one && alpha < two,
            Domain::Infinite => alpha >= one && alpha < two,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Domain::FiniteVariation => "alpha must lie in (0, 1)",
            Domain::OpenInfinite => "alpha must lie in (1, 2)",
            Domain::Infinite => "alpha must lie in [1, 2)",
        }
    }
}

/// e^{2+1/e}
pub(crate) fn e_two<T: Real>() -> T {
    (T::lit(2.0) + T::E().recip()).exp()
}

/// e^{3+1/e}
fn e_three<T: Real>() -> T {
    (T::lit(3.0) + T::E().recip()).exp()
}

fn pow2<T: Real>(x: T) -> T {
    x.exp2()
}

/// C = (1 ∧ ((2−α)/(2M)))^{1/α}
pub fn scale_c<T: Real>(alpha: T, m: T) -> T {
    let two = T::lit(2.0);
    T::one().min((two - alpha) / (two * m)).powf(alpha.recip())
}

/// Evaluates one constant. `m` is required for L1, G1, G2 and `eps` for
/// the ε-branched K5, K6, F2, F3.
pub fn constant<T: Real>(c: Constant, alpha: T, m: Option<T>, eps: Option<T>) -> Result<T> {
    let dom = c.domain();
    if !dom.contains(alpha) {
        return Err(Error::alpha(alpha.as_f64(), &format!("{c}: {}", dom.describe())));
    }
    let need_m = || {
        m.filter(|v| *v > T::zero())
            .ok_or_else(|| Error::InvalidParameter(format!("{c} needs the class constant M > 0")))
    };
    let need_eps = || {
        eps.filter(|v| *v > T::zero())
            .ok_or_else(|| Error::InvalidParameter(format!("{c} needs eps > 0")))
    };
    let a = alpha;
    let (one, two, three, four) = (T::one(), T::lit(2.0), T::lit(3.0), T::lit(4.0));
    let interior = a > one;
    let value = match c {
        Constant::C1Alpha => pow2(one + four * a) / (a * (two - a)),
        Constant::C2Alpha => {
            pow2(two + a) / (one - a)
                + pow2(four * a + three) * (pow2(one - a) * a * (two - a) + two + a)
                    / (a * (two - a) * (one - a) * three.powf(one + a))
                + T::lit(28.0) * four.powf(two * a) / (a * a * (two - a))
                + pow2(one + four * a) / (a * (two - a))
        }
        Constant::C1 => {
            T::lit(16.0)
                + T::lit(64.0) / (a * a)
                + constant(Constant::C1Alpha, a, m, eps)?
                + constant(Constant::C2Alpha, a, m, eps)?
        }
        Constant::C2 => {
            three * pow2(two * a - one) * e_two::<T>() / ((two - a) * (two - a))
                + four.powf(one + a) / (a * (one - a) * (two - a))
                + four.powf(a) / (a * a)
        }
        Constant::D1 => four / (one - a) * (three + (two + a) / (a * (two - a))),
        Constant::D2 => four * ((two - a).recip() + one + pow2(a) * (two + (two + a) / (a * (two - a)))),
        Constant::D3 => two * (two + a) / ((two - a) * a * (one - a)),
        Constant::TildeD1 => T::lit(5.0) / (one - a) + T::lit(10.0) / (a * (two - a) * (one - a)),
        Constant::E1 => {
            four * e_two::<T>() / ((two - a) * (two - a))
                + four.powf(one + a) / (a * a)
                + pow2(a + one) / (T::lit(9.0) * a * (two - a))
        }
        Constant::L1 => {
            let m = need_m()?;
            let cc = scale_c(a, m);
            let tail = if interior {
                T::lit(24.0) * m * m * cc.powf(a - one) / (a * (two - a) * (a - one))
            } else {
                T::zero()
            };
            two * m / cc + four * m / cc + tail
        }
        Constant::G1 => {
            let m = need_m()?;
            let l1 = constant(Constant::L1, a, Some(m), eps)?;
            if interior {
                l1 + pow2(two + a) * m * (one + m / (a * (two - a) * (a - one)))
            } else {
                l1 + four * m * m * (e_two::<T>() + T::lit(37.0) / T::lit(9.0)) + four * m
            }
        }
        Constant::G2 => {
            let m = need_m()?;
            let e1 = if interior {
                constant(Constant::E1, a, None, None)?
            } else {
                T::zero()
            };
            T::lit(8.0) * m * m / (a * (two - a)) + m * m * e1
        }
        Constant::K1 => four.powf(one + a) * (e_two::<T>() / ((two - a) * (two - a)) + one / (a * a)),
        Constant::K2 => pow2(one + three * a) / (a * (two - a) * (a - one)),
        Constant::K3 => pow2(three * (one + a)) * e_three::<T>() / (a * (two - a).powi(3)),
        Constant::K4 => {
            let pole = if interior {
                pow2(three * a) / (a * (a - one) * (two - a))
            } else {
                T::zero()
            };
            pow2(two * a - one) / (a * (two - a) * (two - a))
                + pole
                + pow2(four * a + one) / (T::lit(21.0).powf(a) * a * (two - a))
                + pow2(two * a + two) / (a * (two - a))
        }
        Constant::K5 | Constant::F3 => {
            let e = need_eps()?;
            if e <= one {
                return Err(Error::InvalidParameter(format!("{c} is defined for eps > 1 only")));
            }
            if e < T::lit(1.5) {
                let pole = if interior {
                    pow2(three * a) / (a * (a - one) * (two - a))
                } else {
                    T::zero()
                };
                T::lit(8.0) * T::lit(0.75).powf(two - a) / (a * (two - a) * (two - a)) + pole
            } else {
                four.powf(one + a) / (three.powf(a) * (two - a))
            }
        }
        Constant::K6 | Constant::F2 => {
            let e = need_eps()?;
            if e < T::lit(1.5) {
                pow2(two * a + one) / (three.powf(a) * (two - a))
            } else {
                two * (four / three).powf(a) / (two - a)
            }
        }
        Constant::F1 | Constant::F4 => {
            let k1 = constant(Constant::K1, a, None, None)?;
            let k2 = if interior {
                constant(Constant::K2, a, None, None)?
            } else {
                T::zero()
            };
            let log_term = if interior {
                T::zero()
            } else {
                T::lit(64.0) * T::LN_2()
            };
            let k4 = if c == Constant::F1 {
                constant(Constant::K4, a, None, None)?
            } else {
                T::zero()
            };
            two * k1 + two * k2 + k4 + log_term + T::lit(6.0) / (a * a)
        }
        Constant::F5 => two * constant(Constant::K3, a, None, None)?,
    };
    Ok(value)
}

/// All constants defined at `alpha` (and at `m`, `eps` when supplied).
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsTable<T> {
    pub alpha: T,
    pub m: Option<T>,
    pub eps: Option<T>,
    pub entries: BTreeMap<Constant, T>,
}

impl<T: Real> ConstantsTable<T> {
    pub fn get(&self, c: Constant) -> Option<T> {
        self.entries.get(&c).copied()
    }
}

/// Table of every constant whose domain contains `alpha`. Constants needing
/// M or an ε-branch are included only when those arguments are supplied.
pub fn constants<T: Real>(alpha: T, m: Option<T>, eps: Option<T>) -> Result<ConstantsTable<T>> {
    if !(alpha > T::zero() && alpha < T::lit(2.0)) {
        return Err(Error::alpha(alpha.as_f64(), "alpha must lie in (0, 2)"));
    }
    let mut entries = BTreeMap::new();
    for c in Constant::ALL {
        if !c.domain().contains(alpha) || (c.needs_m() && m.is_none()) || (c.needs_eps() && eps.is_none()) {
            continue;
        }
        if matches!(c, Constant::K5 | Constant::F3) && eps.is_some_and(|e| e <= T::one()) {
            continue;
        }
        entries.insert(c, constant(c, alpha, m, eps)?);
    }
    Ok(ConstantsTable { alpha, m, eps, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_values_at_one_half() {
        let c = |k| constant(k, 0.5_f64, None, None).unwrap();
        assert_relative_eq!(c(Constant::C1Alpha), 8.0 / 0.75, max_relative = 1e-14);
        assert_relative_eq!(c(Constant::D1), 50.666_666_666_666_67, max_relative = 1e-14);
        assert_relative_eq!(c(Constant::D3), 13.333_333_333_333_33, max_relative = 1e-14);
        assert_relative_eq!(c(Constant::C2), 43.566_309_159_097_75, max_relative = 1e-13);
    }

    #[test]
    fn domains_are_enforced() {
        assert!(matches!(
            constant(Constant::K2, 1.0_f64, None, None),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            constant(Constant::C1, 1.0_f64, None, None),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(constant(Constant::G1, 1.5_f64, None, None).is_err());
        assert!(constant(Constant::K5, 1.5_f64, None, Some(1.0)).is_err());
    }

    #[test]
    fn assignments_hold() {
        let t = constants(1.5_f64, Some(1.0), Some(2.0)).unwrap();
        assert_eq!(t.get(Constant::F2), t.get(Constant::K6));
        assert_eq!(t.get(Constant::F3), t.get(Constant::K5));
        assert_eq!(t.get(Constant::F5).unwrap(), 2.0 * t.get(Constant::K3).unwrap());
        assert!(t.entries.values().all(|v| *v > 0.0));
    }
}
