use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("Jacobi iteration did not converge after {sweeps} sweeps (largest off-diagonal {off_diagonal:e})")]
pub struct NoConvergence {
    pub sweeps: usize,
    pub off_diagonal: f64,
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted ascending.
///
/// Iteration stops once every off-diagonal magnitude is below `tol` times the
/// Frobenius norm of the input. Only the upper triangle is trusted to be
/// symmetric with the lower one; the caller checks symmetry.
pub fn symmetric_eigenvalues(
    matrix: &[Vec<f64>],
    tol: f64,
    max_sweeps: usize,
) -> Result<Vec<f64>, NoConvergence> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let norm = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let threshold = tol * norm;

    let off_diagonal = |a: &[Vec<f64>]| {
        a.iter()
            .enumerate()
            .flat_map(|(p, row)| &row[p + 1..])
            .fold(0.0f64, |max, v| max.max(v.abs()))
    };

    for _ in 0..max_sweeps {
        if off_diagonal(&a) <= threshold {
            return Ok(sorted_diagonal(&a));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (upper, lower) = a.split_at_mut(q);
                for (xp, xq) in upper[p].iter_mut().zip(lower[0].iter_mut()) {
                    let (apk, aqk) = (*xp, *xq);
                    *xp = c * apk - s * aqk;
                    *xq = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    let off = off_diagonal(&a);
    if off <= threshold {
        Ok(sorted_diagonal(&a))
    } else {
        Err(NoConvergence {
            sweeps: max_sweeps,
            off_diagonal: off,
        })
    }
}

fn sorted_diagonal(a: &[Vec<f64>]) -> Vec<f64> {
    let mut d: Vec<f64> = (0..a.len()).map(|i| a[i][i]).collect();
    d.sort_by(f64::total_cmp);
    d
}
