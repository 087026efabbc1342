//! Reference ground-state energies by Rayleigh-Ritz diagonalization.
//!
//! The Hamiltonian `-d^2/dx^2 + V(x)` is projected onto the even
//! harmonic-oscillator states `|0>, |2>, |4>, ...` of length scale `L`
//! (frequency `omega = 1/L^2`). In ladder form
//!
//! ```text
//! x   = L (a + a^+) / sqrt(2)
//! p^2 = -(1 / (2 L^2)) (a - a^+)^2
//! ```
//!
//! Matrix elements are assembled exactly. On the unnormalized states
//! `|n) = (a^+)^n |0>` both ladder operators act with integer coefficients,
//! so `O |n) = sum_m M[m][n] |m)` with integer `M`, and the orthonormal
//! element is `<m|O|n> = M[m][n] sqrt(m!/n!)` for `m >= n`. The matrix is
//! banded, and its lowest eigenvalue is found by bisection on the inertia of
//! `H - sigma I`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::Scalar;
use crate::series::PotentialSpec;

/// Rayleigh-Ritz settings.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Number of even basis functions.
    pub basis_size: usize,
    /// Oscillator length scale `L`.
    pub scale: Scalar,
    /// Working precision in decimal digits.
    pub precision: u32,
    /// Extra basis functions used for the convergence check.
    pub convergence_window: usize,
    /// Significant digits that must agree between the two basis sizes.
    pub digits: u32,
}

impl OracleConfig {
    /// Settings that reach 20 stable digits for `V = x^{2K}`, `K <= 4`.
    pub fn for_power(k: u32, precision: u32) -> Self {
        let basis_size = match k {
            0 | 1 => 8,
            2 => 120,
            3 => 200,
            _ => 300,
        };
        OracleConfig {
            basis_size,
            scale: default_scale(k, basis_size, precision),
            precision,
            convergence_window: basis_size / 2,
            digits: 20,
        }
    }
}

/// A suitable basis length scale for `x^{2K}` with `n` even states.
///
/// The outermost state reaches roughly `L sqrt(4n)`. The scale puts that edge
/// slightly past the point where the potential matches the largest kinetic
/// energy the basis resolves.
pub fn default_scale(k: u32, n: usize, precision: u32) -> Scalar {
    if k <= 1 {
        // the oscillator basis is exact at unit scale
        return Scalar::one(precision);
    }
    let n = n.max(1) as f64;
    let k = f64::from(k.max(1));
    let l = 1.4 * (4.0 * n).powf(-(k - 1.0) / (2.0 * (k + 1.0)));
    Scalar::from_f64(l, precision)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEstimate {
    #[serde(rename = "K")]
    pub k: u32,
    pub eigenvalue: Scalar,
    pub basis_size: usize,
    pub converged: bool,
}

/// Ground-state energy of `-psi'' + x^{2K} psi = E psi`.
///
/// Fails with [`Error::NotConverged`] when the estimates at `basis_size` and
/// `basis_size + convergence_window` differ in the first `digits`
/// significant digits.
pub fn reference_eigenvalue(k: u32, config: &OracleConfig) -> Result<OracleEstimate> {
    if k == 0 {
        return Err(Error::InvalidInput("K must be at least 1".into()));
    }
    let potential = PotentialSpec::pure_power(k, config.precision)?;
    let eigenvalue = converged_ground_state(&potential, config)?;
    Ok(OracleEstimate {
        k,
        eigenvalue,
        basis_size: config.basis_size,
        converged: true,
    })
}

/// Ground-state energy of `-psi'' + lambda x^{2K} psi`, from the exact
/// scaling `E(lambda) = lambda^{1/(K+1)} E(1)`.
pub fn scaled_eigenvalue(k: u32, lambda: &Scalar, config: &OracleConfig) -> Result<Scalar> {
    if !lambda.is_positive() {
        return Err(Error::Domain("coupling must be positive".into()));
    }
    let e = reference_eigenvalue(k, config)?.eigenvalue;
    if *lambda == Scalar::one(lambda.digits()) {
        return Ok(e);
    }
    let expo = Scalar::from_ratio(1, i64::from(k) + 1, config.precision);
    Ok(lambda.with_digits(config.precision).powf(&expo)? * e)
}

/// Converged ground state of an arbitrary even potential.
pub fn converged_ground_state(potential: &PotentialSpec, config: &OracleConfig) -> Result<Scalar> {
    if config.basis_size < 4 {
        return Err(Error::InvalidInput("basis_size must be at least 4".into()));
    }
    if potential.s() != 0 {
        return Err(Error::UnsupportedAngularFactor(potential.s()));
    }
    let a = ritz_ground_state(potential, config.basis_size, &config.scale, config.precision)?;
    let wider = config.basis_size + config.convergence_window;
    let b = ritz_ground_state(potential, wider, &config.scale, config.precision)?;
    let tol = Scalar::pow10(-(config.digits as i32), config.precision);
    if Scalar::rel_diff(&a, &b) > tol {
        return Err(Error::NotConverged {
            k: potential.k(),
            basis: config.basis_size,
            wider,
            a: a.to_sig_string(config.digits as usize + 2),
            b: b.to_sig_string(config.digits as usize + 2),
        });
    }
    Ok(b)
}

/// Lowest Ritz value in the first `n` even oscillator states of scale `l`.
pub fn ritz_ground_state(potential: &PotentialSpec, n: usize, l: &Scalar, precision: u32) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    if !l.is_positive() {
        return Err(Error::Domain("basis scale must be positive".into()));
    }
    let band = assemble(potential, n, &l.with_digits(precision), precision)?;
    Ok(lowest_eigenvalue(&band, precision))
}

/// Lower band of the symmetric Hamiltonian: `band[i][d] = H[i+d][i]`.
type Band = Vec<Vec<Scalar>>;

fn assemble(potential: &PotentialSpec, n: usize, l: &Scalar, precision: u32) -> Result<Band> {
    let k = potential.k() as usize;
    let mut band = vec![vec![Scalar::zero(precision); k.max(1) + 1]; n];
    let l2 = l * l;
    let half = Scalar::from_ratio(1, 2, precision);

    // kinetic: -(1/(2 L^2)) (a - a^+)^2
    let kin = -(&half / &l2);
    add_operator(&mut band, &ladder_power(2, -1, n), &kin, precision);

    // potential: v_{2q} L^{2q} 2^{-q} (a + a^+)^{2q}
    for t in potential.terms() {
        let q = (t.power / 2) as usize;
        let c = &t.value * l2.powi(q) * half.powi(q);
        add_operator(&mut band, &ladder_power(2 * q, 1, n), &c, precision);
    }
    Ok(band)
}

/// Integer matrix of `(a + s a^+)^q` between even unnormalized states,
/// `out[j][d] = M[2(j+d)][2j]`.
fn ladder_power(q: usize, s: i128, n: usize) -> Vec<Vec<i128>> {
    let reach = q / 2;
    (0..n)
        .map(|j| {
            let n0 = 2 * j;
            // coefficients over |n0 - q) .. |n0 + q), offset by q
            let mut v = vec![0i128; 2 * q + 1];
            v[q] = 1;
            for _ in 0..q {
                let mut next = vec![0i128; 2 * q + 1];
                for (idx, &c) in v.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let m = n0 as i64 + idx as i64 - q as i64;
                    // a |m) = m |m-1)
                    if m > 0 {
                        next[idx - 1] += c * m as i128;
                    }
                    // a^+ |m) = |m+1)
                    next[idx + 1] += s * c;
                }
                v = next;
            }
            (0..=reach).map(|d| v[q + 2 * d]).collect()
        })
        .collect()
}

fn add_operator(band: &mut Band, m: &[Vec<i128>], c: &Scalar, precision: u32) {
    let n = band.len();
    for (j, col) in m.iter().enumerate() {
        for (d, &mij) in col.iter().enumerate() {
            if mij == 0 || j + d >= n {
                continue;
            }
            // sqrt(m!/n!) with m = 2(j+d), n = 2j
            let ratio: u128 = (2 * j + 1..=2 * (j + d)).map(|i| i as u128).product();
            let root = Scalar::from_u128(ratio, precision)
                .sqrt()
                .expect("factorial ratio is positive");
            let entry = Scalar::from_u128(mij.unsigned_abs(), precision) * root * c;
            if mij < 0 {
                band[j][d] -= entry;
            } else {
                band[j][d] += entry;
            }
        }
    }
}

/// Number of eigenvalues below `sigma`, from the signs of the `LDL^T`
/// pivots of `H - sigma I`.
fn count_below(band: &Band, sigma: &Scalar, precision: u32) -> usize {
    let n = band.len();
    let w = band[0].len() - 1;
    let tiny = Scalar::pow10(-(precision as i32) - 20, precision);
    // l[i][d] = L[i][i-d-1] for the rows still in reach
    let mut d: Vec<Scalar> = Vec::with_capacity(n);
    let mut l: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut negatives = 0;
    for i in 0..n {
        let lo = i.saturating_sub(w);
        let mut row = vec![Scalar::zero(precision); i - lo];
        for jj in lo..i {
            // L[i][jj] d[jj] = H[i][jj] - sum_{kk<jj} L[i][kk] L[jj][kk] d[kk]
            let mut acc = band[jj][i - jj].clone();
            for kk in lo.max(jj.saturating_sub(w))..jj {
                let lik = &row[kk - lo];
                let ljk = &l[jj][jj - kk - 1];
                acc -= lik * ljk * &d[kk];
            }
            row[jj - lo] = acc / &d[jj];
        }
        let mut piv = &band[i][0] - sigma;
        for jj in lo..i {
            let lij = &row[jj - lo];
            piv -= lij * lij * &d[jj];
        }
        if piv.is_zero() {
            piv = -tiny.clone();
        }
        if piv.is_negative() {
            negatives += 1;
        }
        d.push(piv);
        // store as offsets back from i
        l.push(row.into_iter().rev().collect());
    }
    negatives
}

fn lowest_eigenvalue(band: &Band, precision: u32) -> Scalar {
    let n = band.len();
    let w = band[0].len() - 1;
    // Gershgorin lower bound; H[0][0] is a Ritz upper bound.
    let mut lo: Option<Scalar> = None;
    for i in 0..n {
        let mut radius = Scalar::zero(precision);
        for d in 1..=w {
            if i + d < n {
                radius += band[i][d].abs();
            }
            if d <= i {
                radius += band[i - d][d].abs();
            }
        }
        let g = &band[i][0] - radius;
        if lo.as_ref().is_none_or(|v| &g < v) {
            lo = Some(g);
        }
    }
    let mut lo = lo.expect("non-empty basis");
    // invariant: the lowest eigenvalue lies in (lo, hi]
    let mut hi = band[0][0].clone();
    let half = Scalar::from_ratio(1, 2, precision);
    loop {
        let mid = (&lo + &hi) * &half;
        if mid == lo || mid == hi {
            return hi;
        }
        if count_below(band, &mid, precision) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}
