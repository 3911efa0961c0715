//! Dense Gaussian elimination used by the Wiener oracle.

use alloc::vec;
use alloc::vec::Vec;

/// Solves the row-major `n × n` system `a · x = b` with partial pivoting.
///
/// Columns whose best pivot falls below `tol` relative to the largest entry
/// are treated as free and set to zero; the system is accepted only if the
/// remaining equations are consistent. Returns `None` for inconsistent or
/// non-finite systems.
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().chain(&b).fold(0.0f64, |m, v| m.max(v.abs()));
    if !scale.is_finite() {
        return None;
    }
    let tol = scale * 1e-13;

    let mut pivot_cols = Vec::with_capacity(n);
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let (best, best_abs) = (row..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((row, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_abs <= tol {
            continue;
        }
        if best != row {
            for c in 0..n {
                a.swap(best * n + c, row * n + c);
            }
            b.swap(best, row);
        }
        let pivot = a[row * n + col];
        for r in row + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[row * n + c];
            }
            b[r] -= factor * b[row];
        }
        pivot_cols.push(col);
        row += 1;
    }

    if b[row..].iter().any(|v| v.abs() > scale * 1e-10) {
        return None;
    }

    let mut x = vec![0.0; n];
    for (r, &col) in pivot_cols.iter().enumerate().rev() {
        let tail: f64 = (col + 1..n).map(|c| a[r * n + c] * x[c]).sum();
        x[col] = (b[r] - tail) / a[r * n + col];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
