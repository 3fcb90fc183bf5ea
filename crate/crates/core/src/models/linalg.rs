//! Tiny dense solvers for the linear baselines. Problems here are at most a
//! handful of unknowns, so Gaussian elimination on the normal equations is
//! adequate.

#![allow(clippy::needless_range_loop)]

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is (numerically) zero.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for col in (row + 1)..n {
            sum -= a[row][col] * x[col];
        }
        x[row] = sum / a[row][row];
    }
    Some(x)
}

/// Least squares via the normal equations: minimizes `||A x - b||` for a
/// tall matrix given as rows. Returns `None` when `A^T A` is singular.
pub(crate) fn lstsq(rows: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = rows.first()?.len();
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for (row, &bv) in rows.iter().zip(b) {
        for i in 0..m {
            atb[i] += row[i] * bv;
            for j in i..m {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
    }
    solve(ata, atb)
}
