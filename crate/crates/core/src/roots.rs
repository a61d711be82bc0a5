//! Bracket scanning and bisection for scalar functions on a closed interval.

use crate::error::{Error, Result};

/// An interval on which a function changes strict sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// Uniform grid of `n + 1` points covering `[lower, upper]`, endpoints included.
pub fn uniform_grid(lower: f64, upper: f64, n: usize) -> Vec<f64> {
    let step = (upper - lower) / n as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lower + step * i as f64).collect();
    grid.push(upper);
    grid
}

/// Samples `f` on `grid` and returns one bracket per strict sign change.
///
/// Samples that evaluate to exactly zero are skipped, so a function that only
/// touches zero at a sample produces no bracket.
pub fn scan_sign_changes<F>(mut f: F, grid: &[f64]) -> Result<Vec<Bracket>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut brackets = Vec::new();
    let mut last: Option<(f64, bool)> = None;
    for &x in grid {
        let v = f(x)?;
        if v.is_nan() {
            return Err(Error::RootFinding(format!("function is NaN at {x}")));
        }
        if v == 0.0 {
            continue;
        }
        let positive = v > 0.0;
        if let Some((x_prev, prev_positive)) = last {
            if prev_positive != positive {
                brackets.push(Bracket {
                    lower: x_prev,
                    upper: x,
                });
            }
        }
        last = Some((x, positive));
    }
    Ok(brackets)
}

/// Bisects `f` on a sign-changing bracket until its width is below `tol`.
pub fn bisect<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Bracket {
        mut lower,
        mut upper,
    } = bracket;
    let f_lower = f(lower)?;
    let f_upper = f(upper)?;
    if f_lower == 0.0 {
        return Ok(lower);
    }
    if f_upper == 0.0 {
        return Ok(upper);
    }
    if (f_lower > 0.0) == (f_upper > 0.0) {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lower}, {upper}]"
        )));
    }
    let lower_positive = f_lower > 0.0;

    // 200 halvings exhaust f64 resolution on any finite interval.
    for _ in 0..200 {
        if upper - lower <= tol {
            break;
        }
        let mid = 0.5 * (lower + upper);
        if mid <= lower || mid >= upper {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == lower_positive {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    Ok(0.5 * (lower + upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let grid = uniform_grid(0.0, 2.0, 100);
        let b = scan_sign_changes(|x| Ok(x * x - 2.0), &grid).unwrap();
        assert_eq!(b.len(), 1);
        let root = bisect(|x| Ok(x * x - 2.0), b[0], 1e-14).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn touching_zero_is_not_a_sign_change() {
        let grid = uniform_grid(-1.0, 1.0, 10);
        let b = scan_sign_changes(|x| Ok(x * x), &grid).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn zero_sample_between_opposite_signs_brackets_once() {
        let grid = uniform_grid(-1.0, 1.0, 10);
        let b = scan_sign_changes(Ok, &grid).unwrap();
        assert_eq!(b.len(), 1);
        let root = bisect(Ok, b[0], 1e-15).unwrap();
        assert!(root.abs() < 1e-15);
    }

    #[test]
    fn counts_multiple_changes() {
        let grid = uniform_grid(0.0, 10.0, 1000);
        let b = scan_sign_changes(|x| Ok(x.sin()), &grid).unwrap();
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn bisect_rejects_same_sign() {
        let r = bisect(
            |x| Ok(x * x + 1.0),
            Bracket {
                lower: -1.0,
                upper: 1.0,
            },
            1e-12,
        );
        assert!(r.is_err());
    }

    #[test]
    fn nan_is_reported() {
        let grid = uniform_grid(0.0, 1.0, 4);
        assert!(scan_sign_changes(|_| Ok(f64::NAN), &grid).is_err());
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = uniform_grid(0.0, 1.0, 1000);
        assert_eq!(g.len(), 1001);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1000], 1.0);
    }
}
