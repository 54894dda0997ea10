/// Relative size of the giant component of `G(n, c/n)`: the largest root of
/// `g = 1 - exp(-c g)`. Zero for `c <= 1`; otherwise found by bisection on
/// `(0, 1]` to an absolute width of `1e-13`.
pub fn gamma_fixed_point(c: f64) -> f64 {
    assert!(!c.is_nan(), "c must be a number");
    if c <= 1.0 {
        return 0.0;
    }
    // Negative on (0, root), positive on (root, 1].
    let f = |g: f64| g + (-c * g).exp_m1();
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_points() {
        assert_eq!(gamma_fixed_point(1.0), 0.0);
        assert_eq!(gamma_fixed_point(0.3), 0.0);
        assert!((gamma_fixed_point(2.0) - 0.79681).abs() < 1e-3);
        assert!((gamma_fixed_point(50.0) - (1.0 - (-50.0f64).exp())).abs() < 1e-6);
    }

    #[test]
    fn residual_and_monotonicity() {
        let mut last = 0.0;
        for i in 0..100 {
            let c = 1.0 + 0.05 * i as f64;
            let g = gamma_fixed_point(c);
            assert!((g - 1.0 + (-c * g).exp()).abs() < 1e-12, "c={c}");
            assert!(g >= last);
            last = g;
        }
    }
}
