//! Gamma-family special functions, generic over the scalar type.
//!
//! Only what the closed-form tails and the small-jump machinery need:
//! log-gamma, the regularized incomplete gamma pair, erfc and E1.

use crate::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_ITER: usize = 1_000;

/// Natural log of |Γ(x)|, Lanczos approximation with reflection below 1/2.
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let s = (T::PI() * x).sin().abs();
        return T::PI().ln() - s.ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(i as f64));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::TAU()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// Γ(x) for real x away from the non-positive integers.
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    ln_gamma(x).exp()
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a), for a > 0.
///
/// Small shapes (a < 1) with x < 1 use a cancellation-free series for
/// Q directly; otherwise the continued fraction is used for x ≥ 1 or
/// x ≥ a + 1 and the lower series for the rest.
pub fn gamma_q<T: Real>(a: T, x: T) -> T {
    if x <= T::zero() {
        return T::one();
    }
    if a < T::one() && x < T::one() {
        return small_shape_q(a, x);
    }
    if x >= T::one().max(a + T::one()) || (a < T::one() && x >= T::one()) {
        upper_continued_fraction(a, x)
    } else {
        T::one() - lower_series(a, x)
    }
}

/// Regularized lower incomplete gamma P(a, x) = 1 − Q(a, x).
pub fn gamma_p<T: Real>(a: T, x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    if x < a + T::one() && !(a < T::one() && x < T::one()) {
        lower_series(a, x)
    } else {
        T::one() - gamma_q(a, x)
    }
}

fn lower_series<T: Real>(a: T, x: T) -> T {
    let mut term = T::one() / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap = ap + T::one();
        term = term * x / ap;
        sum = sum + term;
        if term.abs() < sum.abs() * T::epsilon() {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma(a)).exp() * sum
}

fn upper_continued_fraction<T: Real>(a: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let two = T::lit(2.0);
    let mut b = x + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let i = T::lit(i as f64);
        let an = -i * (i - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = d * c;
        h = h * delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma(a)).exp() * h
}

// Q(a,x) = 1 − x^a/Γ(1+a) − (x^a/Γ(a)) Σ_{n≥1} (−x)^n / (n!(a+n))
fn small_shape_q<T: Real>(a: T, x: T) -> T {
    let lead = -(a * x.ln() - ln_gamma(T::one() + a)).exp_m1();
    let mut term = T::one();
    let mut sum = T::zero();
    for n in 1..MAX_ITER {
        let nf = T::lit(n as f64);
        term = -term * x / nf;
        let add = term / (a + nf);
        sum = sum + add;
        if add.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    let scale = (a * x.ln() - ln_gamma(a)).exp();
    lead - scale * sum
}

/// Complementary error function via erfc(x) = Q(1/2, x²).
pub fn erfc<T: Real>(x: T) -> T {
    let q = gamma_q(T::lit(0.5), x * x);
    if x >= T::zero() {
        q
    } else {
        T::lit(2.0) - q
    }
}

/// Exponential integral E1(x) = ∫_x^∞ e^{−u}/u du for x > 0.
pub fn expint_e1<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return T::infinity();
    }
    if x < T::one() {
        let euler = T::lit(0.577_215_664_901_532_9);
        let mut term = T::one();
        let mut sum = T::zero();
        for n in 1..MAX_ITER {
            let nf = T::lit(n as f64);
            term = -term * x / nf;
            let add = term / nf;
            sum = sum + add;
            if add.abs() <= sum.abs() * T::epsilon() {
                break;
            }
        }
        return -euler - x.ln() - sum;
    }
    // Lentz continued fraction for e^{x} E1(x).
    let tiny = T::min_positive_value() / T::epsilon();
    let two = T::lit(2.0);
    let mut b = x + T::one();
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let i = T::lit(i as f64);
        let an = -i * i;
        b = b + two;
        d = (an * d + b).recip();
        c = b + an / c;
        let delta = c * d;
        h = h * delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    h * (-x).exp()
}

/// Natural log of the binomial-style Poisson weight P(N = n), N ~ Poisson(mean).
pub fn ln_poisson_pmf<T: Real>(n: usize, mean: T) -> T {
    let nf = T::lit(n as f64);
    if n == 0 {
        return -mean;
    }
    nf * mean.ln() - mean - ln_gamma(nf + T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_at_integers_and_half() {
        assert_relative_eq!(gamma(5.0_f64), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5_f64), std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5_f64), -2.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn incomplete_gamma_reference_values() {
        // mpmath: gammainc(0.1, 1, regularized=True, upper)
        assert_relative_eq!(gamma_q(0.1_f64, 1.0), 0.024_127_343_726_327_78, max_relative = 1e-12);
        assert_relative_eq!(gamma_q(0.1_f64, 0.5), 0.058_597_554_109_866_48, max_relative = 1e-12);
        assert_relative_eq!(gamma_q(2.5_f64, 1.5), 0.699_985_835_878_627_5, max_relative = 1e-12);
        assert_relative_eq!(gamma_p(1.5_f64, 0.3), 0.103_567_626_658_088_57, max_relative = 1e-12);
    }

    #[test]
    fn e1_and_erfc() {
        assert_relative_eq!(expint_e1(1.0_f64), 0.219_383_934_395_520_3, max_relative = 1e-13);
        assert_relative_eq!(expint_e1(0.01_f64), 4.037_929_576_538_114, max_relative = 1e-13);
        assert_relative_eq!(expint_e1(5.0_f64), 0.001_148_295_591_275_325_6, max_relative = 1e-13);
        assert_relative_eq!(erfc(0.5_f64), 0.479_500_122_186_953_5, max_relative = 1e-13);
        assert_relative_eq!(erfc(-1.0_f64), 1.842_700_792_949_714_9, max_relative = 1e-13);
    }
}
