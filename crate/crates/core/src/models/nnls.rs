//! Non-negative least squares by Lawson–Hanson active-set iteration.

use crate::error::{Error, Result};

use super::linalg;

/// Minimizes `||A x - b||^2` subject to `x >= 0`.
///
/// `rows` holds A row-major (n rows of m columns). At the solution the
/// KKT conditions hold: `x >= 0`, the gradient `g = A^T (A x - b)` satisfies
/// `g_i >= 0` for passive coordinates (`x_i = 0`) and `g_i = 0` for active
/// ones (`x_i > 0`), up to solver tolerance.
pub fn nnls(rows: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    if n == 0 || b.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: b.len(),
        });
    }
    let m = rows[0].len();
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: rows.iter().map(|r| r.len()).find(|&l| l != m).unwrap_or(0),
        });
    }

    let mut x = vec![0.0; m];
    let mut passive = vec![false; m];
    // Dual feasibility threshold scaled to the problem.
    let scale = rows
        .iter()
        .flatten()
        .chain(b.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let tol = 1e-12 * scale * scale * (n as f64).sqrt();

    let dual = |x: &[f64]| -> Vec<f64> {
        // w = A^T (b - A x), the negative gradient.
        let mut w = vec![0.0; m];
        for (row, &bv) in rows.iter().zip(b) {
            let residual = bv - row.iter().zip(x.iter()).map(|(a, v)| a * v).sum::<f64>();
            for (wi, a) in w.iter_mut().zip(row) {
                *wi += a * residual;
            }
        }
        w
    };

    let max_outer = 3 * m.max(1);
    for _ in 0..max_outer {
        let w = dual(&x);
        let candidate = (0..m)
            .filter(|&i| !passive[i])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let j_star = match candidate {
            Some(j) if w[j] > tol => j,
            _ => return Ok(x), // dual feasible: done
        };
        passive[j_star] = true;

        // Inner loop: re-solve on the passive set, backing off along the
        // segment to the previous iterate while any passive coordinate
        // would turn negative.
        let mut inner_iterations = 0;
        loop {
            inner_iterations += 1;
            if inner_iterations > max_outer {
                return Err(Error::IterationLimit);
            }
            let passive_idx: Vec<usize> = (0..m).filter(|&i| passive[i]).collect();
            let sub_rows: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| passive_idx.iter().map(|&i| r[i]).collect())
                .collect();
            let z_passive = match linalg::lstsq(&sub_rows, b) {
                Some(z) => z,
                None => {
                    // Degenerate column: drop the newest candidate and move on.
                    passive[j_star] = false;
                    break;
                }
            };
            if z_passive.iter().all(|&z| z > tol) {
                x.iter_mut().for_each(|v| *v = 0.0);
                for (&i, &z) in passive_idx.iter().zip(&z_passive) {
                    x[i] = z;
                }
                break;
            }
            // Largest feasible step toward z.
            let mut alpha = f64::INFINITY;
            for (&i, &z) in passive_idx.iter().zip(&z_passive) {
                if z <= tol {
                    let step = x[i] / (x[i] - z);
                    alpha = alpha.min(step);
                }
            }
            let alpha = alpha.clamp(0.0, 1.0);
            for (&i, &z) in passive_idx.iter().zip(&z_passive) {
                x[i] += alpha * (z - x[i]);
            }
            for &i in &passive_idx {
                if x[i] <= tol {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    Err(Error::IterationLimit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    }

    #[test]
    fn clamps_negative_component() {
        let x = nnls(&identity(2), &[1.0, -1.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn feasible_unconstrained_solution_is_returned() {
        let x = nnls(&identity(2), &[2.0, 3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(nnls(&identity(2), &[1.0]).is_err());
    }
}
