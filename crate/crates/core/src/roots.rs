//! Sign-change scanning and bisection.

use crate::error::{Error, Result};

/// `count` points spaced logarithmically over `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.ln(), hi.ln());
            let step = (l1 - l0) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        (l0 + step * i as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `count` points spaced linearly over `[lo, hi]`, endpoints included.
pub fn lin_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        lo + step * i as f64
                    }
                })
                .collect()
        }
    }
}

/// Bisect `f` on `[a, b]` where `f(a)` and `f(b)` differ in sign.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::domain(
            "bisection needs a sign change on the bracket",
        ));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= x_tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Evaluate `f` on `grid`, bisect every sign change, and return the roots in
/// grid order. Exact zeros on grid points are reported as roots.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, grid: &[f64], x_tol: f64) -> Result<Vec<f64>> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len()
            && values[i + 1] != 0.0
            && values[i].signum() != values[i + 1].signum()
        {
            roots.push(bisect(&f, grid[i], grid[i + 1], x_tol)?);
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn scan_finds_all_sine_roots() {
        let grid = lin_space(0.5, 10.0, 200);
        let roots = scan_roots(f64::sin, &grid, 1e-13).unwrap();
        assert_eq!(roots.len(), 3);
        for (i, r) in roots.iter().enumerate() {
            assert!((r - (i + 1) as f64 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_without_sign_change_is_empty() {
        let grid = log_space(1e-3, 50.0, 1000);
        assert!(scan_roots(|x| 1.0 + x * x, &grid, 1e-12)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn spacing_endpoints() {
        let g = log_space(1e-3, 50.0, 1000);
        assert_eq!(g.len(), 1000);
        assert_eq!(g[999], 50.0);
        assert!((g[0] - 1e-3).abs() < 1e-18);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(lin_space(0.0, 10.0, 100)[99], 10.0);
        assert!(lin_space(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
    }
}
