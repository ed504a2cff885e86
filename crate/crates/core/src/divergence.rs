//! Bernoulli divergences and the Gaussian transportation statistics used by
//! sampling and stopping rules. All logarithms are natural.

use crate::{Error, Result};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {p} is not a probability")))
    }
}

/// `x log(x / y)` with the convention `0 log 0 = 0`.
#[inline]
fn xlogxy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).ln()
    }
}

/// Binary relative entropy `kl(p, q)` in nats.
///
/// Returns `+inf` when `q` is 0 or 1 and differs from `p`.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    Ok(kl_unchecked(p, q))
}

#[inline]
pub(crate) fn kl_unchecked(p: f64, q: f64) -> f64 {
    if p == q {
        return 0.0;
    }
    (xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q)).max(0.0)
}

/// Total variation between `Bernoulli(p)` and `Bernoulli(q)`, i.e. `|p - q|`.
pub fn tv_bernoulli(p: f64, q: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    Ok((p - q).abs())
}

/// `(mean_a - mean_b)^2 / (1/n_a + 1/n_b)`.
pub fn glr_statistic(mean_a: f64, mean_b: f64, n_a: u64, n_b: u64) -> Result<f64> {
    if n_a == 0 || n_b == 0 {
        return Err(Error::ZeroCount);
    }
    Ok(glr_unchecked(mean_a, mean_b, n_a as f64, n_b as f64))
}

#[inline]
pub(crate) fn glr_unchecked(mean_a: f64, mean_b: f64, n_a: f64, n_b: f64) -> f64 {
    let d = mean_a - mean_b;
    d * d / (1.0 / n_a + 1.0 / n_b)
}

/// Signed transportation cost `(mean_leader - mean_a) / sqrt(1/n_leader + 1/n_a)`.
pub fn transport_cost_tc(mean_leader: f64, mean_a: f64, n_leader: u64, n_a: u64) -> Result<f64> {
    if n_leader == 0 || n_a == 0 {
        return Err(Error::ZeroCount);
    }
    Ok(tc_unchecked(mean_leader, mean_a, n_leader as f64, n_a as f64))
}

#[inline]
pub(crate) fn tc_unchecked(mean_leader: f64, mean_a: f64, n_leader: f64, n_a: f64) -> f64 {
    (mean_leader - mean_a) / (1.0 / n_leader + 1.0 / n_a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn kl_examples() {
        assert_eq!(kl_bernoulli(0.3, 0.3).unwrap(), 0.0);
        // 0.5 ln 2 + 0.5 ln(2/3), evaluated by hand in closed form
        let want = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert_abs_diff_eq!(want, 0.143841, epsilon = 1e-6);
        assert_abs_diff_eq!(kl_bernoulli(0.5, 0.25).unwrap(), want, epsilon = 1e-14);
        let d = 0.01;
        assert!(kl_bernoulli(1.0 - d, d).unwrap() >= (1.0 / (3.0 * d)).ln());
    }

    #[test]
    fn kl_boundaries() {
        assert_eq!(kl_bernoulli(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(kl_bernoulli(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(kl_bernoulli(0.5, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_bernoulli(0.5, 1.0).unwrap(), f64::INFINITY);
        assert_abs_diff_eq!(kl_bernoulli(0.0, 0.5).unwrap(), 2f64.ln(), epsilon = 1e-15);
        assert!(kl_bernoulli(1.5, 0.5).is_err());
        assert!(kl_bernoulli(0.5, -0.1).is_err());
        assert!(f64::INFINITY > kl_bernoulli(0.9, 0.1).unwrap());
    }

    #[test]
    fn tv_examples() {
        assert_abs_diff_eq!(tv_bernoulli(0.95, 0.9).unwrap(), 0.05, epsilon = 1e-12);
        assert_eq!(tv_bernoulli(0.4, 0.4).unwrap(), 0.0);
        assert_eq!(tv_bernoulli(0.0, 1.0).unwrap(), 1.0);
        assert!(tv_bernoulli(0.0, 1.1).is_err());
    }

    #[test]
    fn glr_examples() {
        assert_eq!(glr_statistic(0.4, 0.4, 3, 9).unwrap(), 0.0);
        assert_abs_diff_eq!(glr_statistic(0.9, 0.5, 8, 8).unwrap(), 0.64, epsilon = 1e-12);
        assert!(matches!(glr_statistic(0.9, 0.5, 0, 8), Err(Error::ZeroCount)));
    }

    #[test]
    fn tc_examples() {
        assert_eq!(transport_cost_tc(0.3, 0.3, 2, 5).unwrap(), 0.0);
        assert_abs_diff_eq!(
            transport_cost_tc(0.9, 0.5, 4, 4).unwrap(),
            0.565685,
            epsilon = 1e-6
        );
        let lo = transport_cost_tc(0.9, 0.5, 4, 4).unwrap();
        let hi = transport_cost_tc(0.9, 0.5, 4, 40).unwrap();
        assert!(hi > lo);
        assert!(transport_cost_tc(0.2, 0.5, 4, 4).unwrap() < 0.0);
        assert!(matches!(transport_cost_tc(0.9, 0.5, 4, 0), Err(Error::ZeroCount)));
    }

    #[test]
    fn pinsker_on_grid() {
        for i in 0..=18 {
            for j in 0..=18 {
                let p = 0.05 + 0.05 * i as f64;
                let q = 0.05 + 0.05 * j as f64;
                let tv = tv_bernoulli(p, q).unwrap();
                let kl = kl_bernoulli(p, q).unwrap();
                assert!(tv * tv <= kl / 2.0 + 1e-15, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn kl_strictly_convex_in_q() {
        let h = 1e-4;
        for i in 1..=19 {
            let p = 0.05 * i as f64;
            for j in 1..=19 {
                let q = 0.05 * j as f64;
                let f = |q: f64| kl_bernoulli(p, q).unwrap();
                let second = (f(q + h) - 2.0 * f(q) + f(q - h)) / (h * h);
                assert!(second > 0.0, "p={p} q={q} second={second}");
            }
        }
    }

    proptest! {
        #[test]
        fn glr_is_symmetric(a in 0.0..1.0f64, b in 0.0..1.0f64, n in 1u64..10_000, m in 1u64..10_000) {
            let x = glr_statistic(a, b, n, m).unwrap();
            let y = glr_statistic(b, a, m, n).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
        }

        #[test]
        fn glr_is_squared_tc(a in 0.0..1.0f64, b in 0.0..1.0f64, n in 1u64..10_000, m in 1u64..10_000) {
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            let glr = glr_statistic(hi, lo, n, m).unwrap();
            let tc = transport_cost_tc(hi, lo, n, m).unwrap();
            prop_assert!((glr - tc * tc).abs() <= 1e-12 * glr.max(1.0));
        }

        #[test]
        fn kl_nonnegative_and_zero_iff_equal(p in 0.0..=1.0f64, q in 0.001..0.999f64) {
            let kl = kl_bernoulli(p, q).unwrap();
            prop_assert!(kl >= 0.0);
            if (p - q).abs() > 1e-6 {
                prop_assert!(kl > 0.0);
            }
        }
    }
}
