//! Hoeffding sample sizes for losses bounded in `[0, B]`.

fn check(epsilon: f64, delta: f64, bound: f64) {
    assert!(epsilon > 0.0, "epsilon must be positive");
    assert!(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
    assert!(bound > 0.0, "loss bound must be positive");
}

/// Replicates needed so a mean of `[0, B]` losses undershoots its
/// expectation by more than `epsilon` with probability at most `delta`:
/// `⌈B²·ln(1/δ)/(2ε²)⌉`.
pub fn hoeffding_min_k(epsilon: f64, delta: f64, bound: f64) -> usize {
    check(epsilon, delta, bound);
    (bound * bound * (1.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as usize
}

/// Deviation bound on the surplus description length estimated from
/// `replicates` losses at each of `max_size` sizes:
/// `B·M·√(ln(2M/δ)/(2K))`.
pub fn sdl_error_bound(max_size: usize, replicates: usize, delta: f64, bound: f64) -> f64 {
    let m = max_size as f64;
    bound * m * ((2.0 * m / delta).ln() / (2.0 * replicates as f64)).sqrt()
}

/// Replicates per evaluated size in the recursive grid search over
/// `rounds` rounds: `⌈2·B²·ln(20k/δ)/ε²⌉`.
pub fn esc_replicates(epsilon: f64, delta: f64, rounds: usize, bound: f64) -> usize {
    check(epsilon, delta, bound);
    (2.0 * bound * bound * (20.0 * rounds as f64 / delta).ln() / (epsilon * epsilon)).ceil()
        as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_k_values() {
        // ln(20)/0.02 = 149.79
        assert_eq!(hoeffding_min_k(0.1, 0.05, 1.0), 150);
        assert_eq!(hoeffding_min_k(0.1, 0.05, 2.0), 600);
        assert_eq!(hoeffding_min_k(0.1, 1.0, 1.0), 0);
    }

    #[test]
    fn sdl_bound_value() {
        // 100·√(ln(4000)/2000) = 6.4397...
        let b = sdl_error_bound(100, 1000, 0.05, 1.0);
        assert!((b - 6.439_739_761_862_287).abs() < 1e-9, "{b}");
    }

    #[test]
    fn esc_replicate_count() {
        // 2·ln(800)/0.01 = 1336.92
        assert_eq!(esc_replicates(0.1, 0.05, 2, 1.0), 1337);
        // 2·ln(800)/0.04 = 334.23
        assert_eq!(esc_replicates(0.2, 0.05, 2, 1.0), 335);
    }
}
