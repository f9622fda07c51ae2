use super::CurveError;

/// `count` log-uniformly spaced integer sizes from `n_min` to `n_max`
/// inclusive, deduplicated after rounding.
pub fn make_grid(n_min: usize, n_max: usize, count: usize) -> Result<Vec<usize>, CurveError> {
    if n_min < 1 || n_min >= n_max || count < 2 {
        return Err(CurveError::InvalidGrid(format!(
            "need 1 <= n_min < n_max and count >= 2 (got {n_min}, {n_max}, {count})"
        )));
    }
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut grid: Vec<usize> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            ((lo + t * (hi - lo)).exp().round() as usize).clamp(n_min, n_max)
        })
        .collect();
    grid[0] = n_min;
    grid[count - 1] = n_max;
    grid.dedup();
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_sizes_from_10_to_50000() {
        let g = make_grid(10, 50000, 20).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!((g[0], g[19]), (10, 50000));
        let ratio = 5000f64.powf(1.0 / 19.0);
        assert!((ratio - 1.565).abs() < 1e-3);
        for w in g.windows(2) {
            let r = w[1] as f64 / w[0] as f64;
            // rounding to integers perturbs small sizes the most
            assert!((r - ratio).abs() / ratio < 0.06, "{w:?}");
        }
    }

    #[test]
    fn endpoints_only() {
        assert_eq!(make_grid(1, 10, 2).unwrap(), vec![1, 10]);
    }

    #[test]
    fn rounding_collisions_dedup() {
        let g = make_grid(10, 12, 10).unwrap();
        assert_eq!(g, vec![10, 11, 12]);
    }

    #[test]
    fn invalid_bounds() {
        assert!(make_grid(0, 10, 3).is_err());
        assert!(make_grid(10, 10, 3).is_err());
        assert!(make_grid(1, 10, 1).is_err());
    }
}
