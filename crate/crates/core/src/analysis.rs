//! Quantities derived from a solved series: partial sums, optimal
//! truncation, diagonal Pade values at `beta = 1`, the `log10 |E_j/E_0|`
//! profile, the unperturbed wavefunction and a global residual diagnostic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{lu_solve, Parity, ParityPolynomial, Scalar};
use crate::series::BBSeries;

/// Cumulative sums `E^[M] = sum_{j<=M} E_j` for `M = 0..=J`.
pub fn partial_sums(series: &BBSeries) -> Vec<Scalar> {
    let mut acc = Scalar::zero(series.precision);
    series
        .terms
        .iter()
        .map(|t| {
            acc += &t.energy;
            acc.clone()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    pub partial_sums: Vec<Scalar>,
    /// `j*` minimizing `|E_j|` over `1..=search_bound`.
    pub argmin_index: usize,
    /// `E_{j*}` itself.
    pub min_term: Scalar,
    /// `E^[j*-1]`.
    pub best_estimate: Scalar,
    pub search_bound: usize,
}

/// Default search bound: the computed range minus one, so the last computed
/// term is never picked just because nothing after it is known.
pub fn default_search_bound(series: &BBSeries) -> usize {
    let j = series.max_order().unwrap_or(0);
    if j >= 2 {
        j - 1
    } else {
        j
    }
}

/// Truncates just before the smallest `|E_j|`, `1 <= j <= search_bound`.
/// Ties go to the smaller `j`.
pub fn optimal_truncation(series: &BBSeries, search_bound: Option<usize>) -> Result<TruncationReport> {
    let bound = search_bound.unwrap_or_else(|| default_search_bound(series));
    let available = series.max_order().unwrap_or(0);
    if bound == 0 || bound > available {
        return Err(Error::InvalidInput(format!(
            "truncation search bound {bound} must lie in 1..={available}"
        )));
    }
    let mut best = 1;
    let mut best_abs = series.terms[1].energy.abs();
    for j in 2..=bound {
        let a = series.terms[j].energy.abs();
        if a < best_abs {
            best = j;
            best_abs = a;
        }
    }
    let partial_sums = partial_sums(series);
    Ok(TruncationReport {
        best_estimate: partial_sums[best - 1].clone(),
        min_term: series.terms[best].energy.clone(),
        partial_sums,
        argmin_index: best,
        search_bound: bound,
    })
}

/// Rational function `P(beta)/Q(beta)` with `Q(0) = 1`.
#[derive(Clone, Debug)]
pub struct PadeApproximant {
    pub numerator: Vec<Scalar>,
    pub denominator: Vec<Scalar>,
}

fn horner(c: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero(x.digits());
    for a in c.iter().rev() {
        acc = &acc * x + a;
    }
    acc
}

impl PadeApproximant {
    /// Diagonal `[N,N]` approximant of `sum c_j beta^j` from `c_0..c_{2N}`.
    pub fn diagonal(coeffs: &[Scalar], n: usize) -> Result<Self> {
        let needed = 2 * n + 1;
        if coeffs.len() < needed {
            return Err(Error::InsufficientTerms {
                requested: n,
                needed,
                available: coeffs.len(),
                feasible: coeffs.len().saturating_sub(1) / 2,
            });
        }
        let digits = coeffs[0].digits();
        let zero = Scalar::zero(digits);
        let c = |i: isize| -> Scalar {
            if i < 0 {
                zero.clone()
            } else {
                coeffs[i as usize].clone()
            }
        };
        // sum_{k=0}^{N} q_k c_{N+i-k} = 0, i = 1..N, q_0 = 1
        let mut denominator = vec![Scalar::one(digits)];
        if n > 0 {
            let a: Vec<Vec<Scalar>> = (1..=n)
                .map(|i| (1..=n).map(|k| c((n + i) as isize - k as isize)).collect())
                .collect();
            let b: Vec<Scalar> = (1..=n).map(|i| -c((n + i) as isize)).collect();
            let q = lu_solve(a, b).map_err(|e| match e {
                Error::Singular { .. } => Error::DegeneratePade { n },
                e => e,
            })?;
            denominator.extend(q);
        }
        let numerator = (0..=n)
            .map(|i| {
                (0..=i)
                    .map(|k| &denominator[k] * &coeffs[i - k])
                    .fold(zero.clone(), |a, b| a + b)
            })
            .collect();
        Ok(PadeApproximant {
            numerator,
            denominator,
        })
    }

    pub fn eval(&self, beta: &Scalar) -> Result<Scalar> {
        let q = horner(&self.denominator, beta);
        if q.is_zero() {
            return Err(Error::Domain("Pade denominator vanishes".into()));
        }
        Ok(horner(&self.numerator, beta) / q)
    }

    /// First `len` Taylor coefficients of `P/Q` about `beta = 0`.
    pub fn taylor(&self, len: usize) -> Vec<Scalar> {
        let digits = self.denominator[0].digits();
        let zero = Scalar::zero(digits);
        let mut out: Vec<Scalar> = Vec::with_capacity(len);
        for i in 0..len {
            let mut t = self.numerator.get(i).cloned().unwrap_or_else(|| zero.clone());
            for k in 1..=i.min(self.denominator.len() - 1) {
                t -= &self.denominator[k] * &out[i - k];
            }
            out.push(t);
        }
        out
    }
}

/// `[N,N]` of `sum E_j beta^j` evaluated at `beta = 1`.
pub fn pade_diagonal(series: &BBSeries, n: usize) -> Result<Scalar> {
    let pade = PadeApproximant::diagonal(&series.energies(), n)?;
    pade.eval(&Scalar::one(series.precision)).map_err(|_| Error::DegeneratePade { n })
}

#[derive(Clone, Debug, Serialize)]
pub struct PadeTable {
    /// `(N, [N,N](1))` for `N = 0..=n_max`.
    pub values: Vec<(usize, Scalar)>,
    pub n_max: usize,
}

impl PadeTable {
    pub fn get(&self, n: usize) -> Option<&Scalar> {
        self.values.iter().find(|(k, _)| *k == n).map(|(_, v)| v)
    }
}

pub fn pade_table(series: &BBSeries, n_max: usize) -> Result<PadeTable> {
    let values = (0..=n_max)
        .map(|n| pade_diagonal(series, n).map(|v| (n, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PadeTable { values, n_max })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub j: usize,
    /// `log10 |E_j / E_0|`; `None` marks a term that vanished exactly.
    pub log10_ratio: Option<Scalar>,
}

impl ProfilePoint {
    pub fn is_terminated(&self) -> bool {
        self.log10_ratio.is_none()
    }
}

/// `(j, log10 |E_j/E_0|)` for every computed order.
pub fn convergence_profile(series: &BBSeries) -> Result<Vec<ProfilePoint>> {
    let e0 = series
        .terms
        .first()
        .map(|t| t.energy.clone())
        .ok_or_else(|| Error::InvalidInput("empty series".into()))?;
    if e0.is_zero() {
        return Err(Error::Domain("E_0 vanishes".into()));
    }
    series
        .terms
        .iter()
        .map(|t| {
            let log10_ratio = if t.energy.is_zero() {
                None
            } else {
                Some((&t.energy / &e0).abs().log10()?)
            };
            Ok(ProfilePoint { j: t.j, log10_ratio })
        })
        .collect()
}

/// `F' - F^2 + V - E^[M]` at each `x`, with `F = sum_{j<=M} f_j`.
pub fn global_riccati_residual(series: &BBSeries, m: usize, xs: &[Scalar]) -> Result<Vec<Scalar>> {
    if m >= series.terms.len() {
        return Err(Error::InvalidInput(format!(
            "truncation M={m} exceeds computed order {}",
            series.max_order().map_or(-1, |j| j as i64)
        )));
    }
    let digits = series.precision;
    let mut f = ParityPolynomial::zero(Parity::Odd, digits);
    let mut e = Scalar::zero(digits);
    for t in &series.terms[..=m] {
        f = &f + &t.f;
        e += &t.energy;
    }
    let mut r = &(&f.diff() - &f.mul(&f)) + series.potential.polynomial();
    r.set(0, r.coeff(0) - &e)?;
    Ok(xs.iter().map(|x| r.eval(x)).collect())
}

/// Exponent polynomial of the unperturbed wavefunction, `-int_0^x f_0`.
pub fn psi0_exponent(series: &BBSeries) -> Result<ParityPolynomial> {
    let t = series
        .terms
        .first()
        .ok_or_else(|| Error::InvalidInput("order-0 term missing".into()))?;
    Ok(-&t.f.antiderivative())
}

/// Unnormalized `Psi_0(x) = exp(-int_0^x f_0)`.
pub fn wavefunction_profile(series: &BBSeries, xs: &[Scalar]) -> Result<Vec<Scalar>> {
    let g = psi0_exponent(series)?;
    Ok(xs.iter().map(|x| g.eval(x).exp()).collect())
}
