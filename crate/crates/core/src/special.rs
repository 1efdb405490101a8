//! Log-gamma, the regularized incomplete gamma function and erf.
//!
//! `ln_gamma` uses the Lanczos-type approximation with the g = 10.900511
//! coefficient set (relative error below 1e-13 across the shapes used
//! here); the incomplete gamma switches between the power series and the
//! Lentz continued fraction at the usual x = a + 1 boundary.

use std::f64::consts::PI;

const GAMMA_R: f64 = 10.900511;

const GAMMA_DK: &[f64] = &[
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// ln(2 sqrt(e / pi))
const LN_2_SQRT_E_OVER_PI: f64 = 0.62078223763524522234551844578164721225;

/// Natural logarithm of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, d)| s + d / (i as f64 - x));
        PI.ln()
            - (PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + GAMMA_R) / std::f64::consts::E).ln()
    } else {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, d)| s + d / (x + i as f64 - 1.0));
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).ln()
    }
}

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_p needs a > 0, x >= 0");
    if x == 0.0 {
        return 0.0;
    }
    let ln_prefix = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        // series: P = x^a e^-x / Gamma(a) * sum x^k / (a+1)...(a+k)
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..500 {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term < sum * 1e-16 {
                break;
            }
        }
        (ln_prefix.exp() * sum).min(1.0)
    } else {
        // Lentz continued fraction for Q, then P = 1 - Q
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (ln_prefix.exp() * h).min(1.0)
    }
}

/// Error function via the incomplete gamma identity erf(x) = P(1/2, x^2).
pub fn erf(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.signum() * gamma_p(0.5, x * x)
}

/// Standard normal CDF.
pub fn normal_cdf(t: f64) -> f64 {
    0.5 * (1.0 + erf(t / std::f64::consts::SQRT_2))
}

/// P(|Z| <= t) for standard normal Z.
pub fn normal_box_1d(t: f64) -> f64 {
    erf(t / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs()
    }

    #[test]
    fn ln_gamma_reference_values() {
        // frozen from 30-digit arbitrary-precision evaluation
        assert!(rel_err(ln_gamma(0.5), 0.572364942924700087071713675677) < 1e-13);
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!(rel_err(ln_gamma(4.5), 2.45373657084244222050414250344) < 1e-13);
        assert!(rel_err(ln_gamma(10.0), 12.8018274800814696112077178746) < 1e-13);
        assert!(rel_err(ln_gamma(0.1), 2.25271265173420595986970164637) < 1e-13);
        assert!(rel_err(ln_gamma(49.7), 143.396057946256143945348538615) < 1e-13);
    }

    #[test]
    fn ln_gamma_recurrence_property() {
        // ln Gamma(x+1) = ln Gamma(x) + ln x across the working range
        let mut x = 0.3;
        while x < 49.0 {
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + x.ln();
            assert!(
                (lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0),
                "recurrence off at x={x}: {lhs} vs {rhs}"
            );
            x += 0.7;
        }
    }

    #[test]
    fn gamma_p_reference_values() {
        assert!(rel_err(gamma_p(0.5, 1.0), 0.842700792949714869341220635083) < 1e-13);
        assert!(rel_err(gamma_p(1.5, 2.0), 0.738535870050889377797177924024) < 1e-13);
        assert!(rel_err(gamma_p(5.0, 4.0), 0.371163064820126476582347936285) < 1e-13);
        assert_eq!(gamma_p(2.0, 0.0), 0.0);
        // exponential distribution: P(1, x) = 1 - e^-x
        assert!(rel_err(gamma_p(1.0, 0.7), 1.0 - (-0.7f64).exp()) < 1e-14);
    }

    #[test]
    fn erf_reference_values() {
        assert!(rel_err(erf(1.0), 0.842700792949714869341220635083) < 1e-13);
        assert!(rel_err(erf(0.5), 0.520499877813046537682746653892) < 1e-13);
        assert!(rel_err(erf(2.0), 0.995322265018952734162069256367) < 1e-13);
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(-1.0) + erf(1.0)).abs() < 1e-16);
    }

    #[test]
    fn normal_box_hits_95_percent() {
        assert!(rel_err(normal_box_1d(1.959964), 0.950000001807115191395009789495) < 1e-12);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
    }
}
