//! Uniform sweep grids.

/// `n` evenly spaced samples covering `[start, stop]` inclusive.
///
/// The endpoints are reproduced exactly; interior points are generated by
/// index arithmetic so two grids with identical parameters are bit-identical.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

/// Grid step of a uniform ascending grid (0 for degenerate grids).
pub fn step_of(grid: &[f64]) -> f64 {
    if grid.len() < 2 {
        0.0
    } else {
        (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints_exact() {
        let g = linspace(1.0, 2.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[10], 2.0);
    }

    #[test]
    fn linspace_degenerate() {
        assert!(linspace(0.0, 1.0, 0).is_empty());
        assert_eq!(linspace(3.0, 9.0, 1), vec![3.0]);
    }
}
