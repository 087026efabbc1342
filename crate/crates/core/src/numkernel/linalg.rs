//! Dense linear solves at working precision.

use super::Scalar;
use crate::error::{Error, Result};

/// Solves `a x = b` by LU factorization with partial pivoting.
///
/// A pivot smaller than `10^-digits` times the largest matrix entry counts as
/// zero and the system is reported singular.
pub fn lu_solve(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput(format!(
            "lu_solve needs a square {n}x{n} system"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let digits = a[0][0].digits();
    let norm = a
        .iter()
        .flatten()
        .map(Scalar::abs)
        .fold(Scalar::zero(digits), |m, v| if v > m { v } else { m });
    let tiny = &norm * &Scalar::pow10(-(digits as i32), digits);

    for k in 0..n {
        let (piv, pmax) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .fold((k, Scalar::zero(digits)), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if pmax.is_zero() || pmax <= tiny {
            return Err(Error::Singular { pivot: k, size: n });
        }
        a.swap(k, piv);
        b.swap(k, piv);
        let (upper, lower) = a.split_at_mut(k + 1);
        let prow = &upper[k];
        for (off, row) in lower.iter_mut().enumerate() {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &prow[k];
            for j in k + 1..n {
                if !prow[j].is_zero() {
                    row[j] -= &f * &prow[j];
                }
            }
            row[k] = Scalar::zero(digits);
            let i = k + 1 + off;
            let t = &f * &b[k];
            b[i] -= t;
        }
    }
    let mut x = vec![Scalar::zero(digits); n];
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            s -= &a[i][j] * &x[j];
        }
        x[i] = s / &a[i][i];
    }
    Ok(x)
}
