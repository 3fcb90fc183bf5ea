//! Optimality checks for the active-set non-negative least squares solver
//! and the constrained center/range fit built on it.

#![allow(clippy::needless_range_loop)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use interbench_core::dataset::IntervalDataset;
use interbench_core::interval::Interval;
use interbench_core::models::{nnls, train_ccrm, FittedModel};

fn gradient(rows: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    // g = A^T (A x - b)
    let m = x.len();
    let mut g = vec![0.0; m];
    for (row, &bv) in rows.iter().zip(b) {
        let r = row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - bv;
        for (gi, a) in g.iter_mut().zip(row) {
            *gi += a * r;
        }
    }
    g
}

fn objective(rows: &[Vec<f64>], b: &[f64], x: &[f64]) -> f64 {
    rows.iter()
        .zip(b)
        .map(|(row, &bv)| {
            let r = row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - bv;
            r * r
        })
        .sum()
}

/// Unconstrained least squares by brute force over the normal equations,
/// then projected onto the nonnegative orthant; a feasible (generally
/// suboptimal) baseline.
fn projected_ols(rows: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = rows[0].len();
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for (row, &bv) in rows.iter().zip(b) {
        for i in 0..m {
            atb[i] += row[i] * bv;
            for j in 0..m {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    // Gauss-Jordan, adequate for these small well-conditioned test matrices.
    let n = m;
    let mut aug: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = ata[i].clone();
            r.push(atb[i]);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs())).unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        for k in col..=n {
            aug[col][k] /= p;
        }
        for row in 0..n {
            if row != col {
                let f = aug[row][col];
                for k in col..=n {
                    aug[row][k] -= f * aug[col][k];
                }
            }
        }
    }
    (0..n).map(|i| aug[i][n].max(0.0)).collect()
}

#[test]
fn kkt_conditions_hold_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for trial in 0..100 {
        let n = rng.random_range(6..30);
        let m = rng.random_range(2..6);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let x = nnls(&rows, &b).unwrap();

        assert!(x.iter().all(|&v| v >= 0.0), "trial {trial}: negative entry");
        let g = gradient(&rows, &b, &x);
        for (i, (&xi, &gi)) in x.iter().zip(&g).enumerate() {
            if xi > 0.0 {
                assert!(
                    gi.abs() <= 1e-8,
                    "trial {trial}: active coordinate {i} gradient {gi}"
                );
            } else {
                assert!(
                    gi >= -1e-8,
                    "trial {trial}: inactive coordinate {i} gradient {gi}"
                );
            }
        }
    }
}

#[test]
fn objective_never_exceeds_projected_ols_baseline() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..50 {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..4).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let b: Vec<f64> = (0..20).map(|_| rng.random_range(-3.0..3.0)).collect();
        let x = nnls(&rows, &b).unwrap();
        let baseline = projected_ols(&rows, &b);
        assert!(
            objective(&rows, &b, &x) <= objective(&rows, &b, &baseline) + 1e-9,
            "trial {trial}: solver worse than projected baseline"
        );
    }
}

#[test]
fn ccrm_recovery_is_exact_on_nonnegative_ground_truth() {
    // Noise-free data from y_center = 4 + x_center, y_half_range = 1 + 0.5 x_half_range.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..60 {
        let c: f64 = rng.random_range(-5.0..5.0);
        let r: f64 = rng.random_range(0.1..2.0);
        x.push(vec![Interval::from_center_range(c, r).unwrap()]);
        y.push(Interval::from_center_range(4.0 + c, 1.0 + 0.5 * r).unwrap());
    }
    let d = IntervalDataset::new(x, y, vec!["x1".into()], "y".into()).unwrap();
    let model = match train_ccrm(&d).unwrap() {
        FittedModel::Ccrm(m) => m,
        _ => unreachable!(),
    };
    for (got, want) in model.center_coefs.iter().zip(&[4.0, 1.0]) {
        assert!((got - want).abs() < 1e-8, "center coefs {:?}", model.center_coefs);
    }
    for (got, want) in model.range_coefs.iter().zip(&[1.0, 0.5]) {
        assert!((got - want).abs() < 1e-8, "range coefs {:?}", model.range_coefs);
    }
}

#[test]
fn ccrm_center_fit_matches_independent_closed_form() {
    // Single-predictor noisy data: the least squares solution has the
    // textbook closed form slope = cov(x, y) / var(x), which this computes
    // without touching the solver under test.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..80 {
        let c: f64 = rng.random_range(-4.0..4.0);
        let noise: f64 = rng.random_range(-1.0..1.0);
        x.push(vec![Interval::from_center_range(c, 0.5).unwrap()]);
        y.push(Interval::from_center_range(2.0 + 0.7 * c + noise, 1.0).unwrap());
    }
    let d = IntervalDataset::new(x, y, vec!["x1".into()], "y".into()).unwrap();

    let xs: Vec<f64> = (0..d.n_samples()).map(|i| d.row(i)[0].center()).collect();
    let ys: Vec<f64> = (0..d.n_samples()).map(|i| d.target(i).center()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = xs.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = cov / var;
    let intercept = my - slope * mx;

    let model = match train_ccrm(&d).unwrap() {
        FittedModel::Ccrm(m) => m,
        _ => unreachable!(),
    };
    assert!((model.center_coefs[0] - intercept).abs() < 1e-10);
    assert!((model.center_coefs[1] - slope).abs() < 1e-10);
}

#[test]
fn negative_range_trend_is_clamped_feasibly() {
    // Half-ranges shrink as x grows: the unconstrained slope is negative.
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..40 {
        let c = i as f64 * 0.25;
        let r = 0.1 + 0.01 * (i % 3) as f64;
        x.push(vec![Interval::from_center_range(c, 2.0 - 0.04 * i as f64 + r).unwrap()]);
        y.push(Interval::from_center_range(c, (2.0 - 0.045 * i as f64).max(0.05)).unwrap());
    }
    let d = IntervalDataset::new(x, y, vec!["x1".into()], "y".into()).unwrap();
    let model = match train_ccrm(&d).unwrap() {
        FittedModel::Ccrm(m) => m,
        _ => unreachable!(),
    };
    assert!(model.range_coefs.iter().all(|&b| b >= 0.0));

    // Constrained residual must be at least the unconstrained one.
    let rows: Vec<Vec<f64>> = (0..d.n_samples())
        .map(|i| vec![1.0, d.row(i)[0].half_range()])
        .collect();
    let targets: Vec<f64> = (0..d.n_samples())
        .map(|i| d.target(i).half_range())
        .collect();
    let constrained = objective(&rows, &targets, &model.range_coefs);
    let unconstrained_coefs = {
        let mut aug = projected_ols(&rows, &targets);
        // projected_ols clamps; recompute honestly via tiny normal equations.
        let sx: f64 = rows.iter().map(|r| r[1]).sum();
        let sxx: f64 = rows.iter().map(|r| r[1] * r[1]).sum();
        let sy: f64 = targets.iter().sum();
        let sxy: f64 = rows.iter().zip(&targets).map(|(r, t)| r[1] * t).sum();
        let n = rows.len() as f64;
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        aug[0] = intercept;
        aug[1] = slope;
        aug
    };
    let unconstrained = objective(&rows, &targets, &unconstrained_coefs);
    assert!(constrained >= unconstrained - 1e-9);
}
