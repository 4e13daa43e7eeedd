//! Windowed lower/upper density estimates of hitting sets.

use serde::{Deserialize, Serialize};

use super::scan::HittingSet;
use crate::error::{LabError, Result};

/// Estimates of `liminf` and `limsup` of `c(N)/N` taken as the exact minimum
/// and maximum over every `N` in `[n0, n_max]`. These are windowed estimates:
/// they can refute positive lower density but never certify it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityStats {
    pub n0: u64,
    pub n_max: u64,
    pub lower_est: f64,
    pub upper_est: f64,
    pub count: u64,
    /// `(N, c(N))` on a geometric grid plus the endpoints of the window.
    pub grid: Vec<(u64, u64)>,
}

impl DensityStats {
    /// `N,count,density` rows for the sampled grid.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,count,density\n");
        for &(n, c) in &self.grid {
            s.push_str(&format!("{n},{c},{}\n", c as f64 / n as f64));
        }
        s
    }
}

/// `ceil(sqrt(n_max))`, kept inside the admissible window.
pub fn default_window_start(n_max: u64) -> u64 {
    let r = (n_max as f64).sqrt().ceil() as u64;
    r.max(10).min(n_max / 10)
}

pub fn density_stats(h: &HittingSet, n0: u64) -> Result<DensityStats> {
    let n_max = h.n_max();
    if n0 < 10 || n0 > n_max / 10 {
        return Err(LabError::pre(format!(
            "window start {n0} must lie in [10, {}]",
            n_max / 10
        )));
    }
    let mut grid_points = Vec::new();
    let mut g = n0 as f64;
    while (g as u64) < n_max {
        grid_points.push(g as u64);
        g *= 1.25;
    }
    grid_points.push(n_max);
    grid_points.dedup();

    let mut lower = f64::INFINITY;
    let mut upper: f64 = 0.0;
    let mut count = 0u64;
    let mut grid = Vec::with_capacity(grid_points.len());
    let mut next = 0;
    let mut members = h.iter().peekable();
    for n in 1..=n_max {
        if members.peek() == Some(&n) {
            members.next();
            count += 1;
        }
        if n >= n0 {
            let d = count as f64 / n as f64;
            lower = lower.min(d);
            upper = upper.max(d);
        }
        if next < grid_points.len() && grid_points[next] == n {
            grid.push((n, count));
            next += 1;
        }
    }
    Ok(DensityStats {
        n0,
        n_max,
        lower_est: lower,
        upper_est: upper,
        count,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evens_have_density_half() {
        let h = HittingSet::from_indices(100_000, (1..=50_000).map(|k| 2 * k)).unwrap();
        let d = density_stats(&h, 100).unwrap();
        assert!(d.lower_est >= 0.49 && d.upper_est <= 0.51, "{d:?}");
    }

    #[test]
    fn dyadic_blocks_have_density_one() {
        let n_max = 1u64 << 20;
        let members = (1..=20u32).flat_map(|k| (1u64 << (k - 1))..=((1u64 << k) - 2));
        let h = HittingSet::from_indices(n_max, members.filter(|&n| n >= 1)).unwrap();
        let d = density_stats(&h, default_window_start(n_max)).unwrap();
        assert!(d.lower_est >= 0.99, "{d:?}");
        // count at N = 2^k - 1 is 2^k - 1 - k
        for &(n, c) in &d.grid {
            let k = 64 - n.leading_zeros() as u64;
            if n == (1 << k) - 1 {
                assert_eq!(c, n - k);
            }
        }
    }

    #[test]
    fn powers_of_two_are_sparse() {
        let h = HittingSet::from_indices(1_000_000, (0..20).map(|k| 1u64 << k)).unwrap();
        // c(N)/N only drops below 1e-3 past N ~ 1.5e4, so start the window late
        let d = density_stats(&h, 100_000).unwrap();
        assert!(d.upper_est <= 0.001, "{d:?}");
        let early = density_stats(&h, default_window_start(1_000_000)).unwrap();
        assert!(early.upper_est > 0.01);
    }

    #[test]
    fn window_precondition() {
        let h = HittingSet::from_indices(1000, [1, 2]).unwrap();
        assert!(density_stats(&h, 5).is_err());
        assert!(density_stats(&h, 101).is_err());
        assert!(density_stats(&h, 100).is_ok());
    }
}
