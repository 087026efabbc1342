//! The perturbation hierarchy for the Riccati form of the ground state.
//!
//! With `f = -psi'/psi` the Schrodinger equation `-psi'' + V psi = E psi`
//! becomes `f' - f^2 + V - E = 0`. Embedding the problem in the family
//! `f' - f^2 + V - E + (beta - 1) W = 0` and expanding `f`, `E` and `W` in
//! powers of `beta` gives, order by order,
//!
//! ```text
//! f_j' - sum_{k=0..j} f_k f_{j-k} + V delta_{j0} - E_j + W_{j-1} - W_j = 0
//! ```
//!
//! with `W_{-1} = 0`. Each `f_j` is an odd polynomial with powers
//! `x^(2m+1)`, `m = 0..=j+p`, where `p` is the ansatz offset. The low powers
//! of the residual are matched to zero, the powers above that band are
//! absorbed into `W_j`, and the constant term gives `E_j = c_{j,1}`. At
//! `beta = 1` the `W` term drops out and `E = sum E_j` is the physical
//! eigenvalue.

use log::warn;

use crate::error::{Error, Result};
use crate::numkernel::{lu_solve, real_roots, Parity, ParityPolynomial, Polynomial, Scalar, Term};

/// Even confining potential `V(x) = sum v_{2k} x^{2k}` with `k >= 1`.
///
/// A coupling constant in front of `x^{2K}` is just the leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    coeffs: ParityPolynomial,
    s: u32,
}

impl PotentialSpec {
    /// Builds a potential from `(exponent, coefficient)` pairs.
    pub fn new(terms: &[Term], s: u32) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("potential has no terms".into()));
        }
        let digits = terms.iter().map(|t| t.value.digits()).max().unwrap_or(crate::DEFAULT_PRECISION);
        for t in terms {
            if t.power % 2 != 0 || t.power < 2 {
                return Err(Error::InvalidInput(format!(
                    "potential exponents must be even and >= 2 (got {})",
                    t.power
                )));
            }
        }
        let mut coeffs = ParityPolynomial::zero(Parity::Even, digits);
        for t in terms {
            let prev = coeffs.coeff(t.power);
            coeffs.set(t.power, prev + &t.value)?;
        }
        let Some(deg) = coeffs.degree() else {
            return Err(Error::InvalidInput("potential is identically zero".into()));
        };
        if !coeffs.coeff(deg).is_positive() {
            return Err(Error::InvalidInput(
                "leading potential coefficient must be positive (confining)".into(),
            ));
        }
        Ok(PotentialSpec { coeffs, s })
    }

    /// `V(x) = x^{2K}`.
    pub fn pure_power(k: u32, digits: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("K must be at least 1".into()));
        }
        Self::new(
            &[Term {
                power: 2 * k,
                value: Scalar::one(digits),
            }],
            0,
        )
    }

    /// `V(x) = x^2 + lambda x^{2K}`.
    pub fn anharmonic(k: u32, lambda: Scalar) -> Result<Self> {
        let digits = lambda.digits();
        Self::new(
            &[
                Term {
                    power: 2,
                    value: Scalar::one(digits),
                },
                Term {
                    power: 2 * k,
                    value: lambda,
                },
            ],
            0,
        )
    }

    /// Half of the leading exponent.
    pub fn k(&self) -> u32 {
        self.coeffs.degree().expect("validated nonzero") / 2
    }

    /// Angular factor `s = l + 1`; only `0` is solvable here.
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Same potential with a nonzero angular factor, for callers that want to
    /// exercise the `s != 0` rejection path.
    pub fn with_angular_factor(mut self, s: u32) -> Self {
        self.s = s;
        self
    }

    pub fn polynomial(&self) -> &ParityPolynomial {
        &self.coeffs
    }

    /// Coefficient of `x^{2k}`.
    pub fn coeff(&self, k: u32) -> Scalar {
        self.coeffs.coeff(2 * k)
    }

    pub fn terms(&self) -> Vec<Term> {
        self.coeffs.nonzero_terms()
    }

    pub fn is_pure_power(&self) -> bool {
        self.terms().len() == 1
    }

    fn at_precision(&self, digits: u32) -> PotentialSpec {
        let coeffs = ParityPolynomial::from_coeffs(
            Parity::Even,
            self.coeffs.coeffs().iter().map(|c| c.with_digits(digits)).collect(),
            digits,
        );
        PotentialSpec { coeffs, s: self.s }
    }
}

/// Ansatz offset `p`: `f_j` carries powers up to `x^{2(j+p)+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AnsatzSpec {
    pub p: u32,
}

impl AnsatzSpec {
    pub fn new(p: u32) -> Self {
        AnsatzSpec { p }
    }

    /// `p = K - 1`, the smallest offset that can match `x^{2K}` at order zero.
    pub fn canonical(potential: &PotentialSpec) -> Self {
        AnsatzSpec {
            p: potential.k() - 1,
        }
    }

    /// Exponent band `[lo, hi]` absorbed into `W_j`. Empty when `lo > hi`.
    pub fn w_band(&self, j: usize) -> (u32, u32) {
        let (j, p) = (j as u32, self.p);
        (2 * (j + p + 2), 2 * (j + 2 * p + 1))
    }

    fn validate(&self, potential: &PotentialSpec) -> Result<()> {
        if self.p + 1 < potential.k() {
            return Err(Error::InvalidInput(format!(
                "ansatz offset p={} is below K-1={}",
                self.p,
                potential.k() - 1
            )));
        }
        Ok(())
    }
}

/// One order of the hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderTerm {
    pub j: usize,
    pub energy: Scalar,
    /// Odd polynomial, degree `2(j+p)+1` at most.
    pub f: ParityPolynomial,
    /// Even polynomial supported on the absorbed band only.
    pub w: ParityPolynomial,
}

/// The solved hierarchy for orders `0..=J`.
#[derive(Clone, Debug, PartialEq)]
pub struct BBSeries {
    pub potential: PotentialSpec,
    pub ansatz: AnsatzSpec,
    pub precision: u32,
    pub terms: Vec<OrderTerm>,
}

impl BBSeries {
    pub fn energies(&self) -> Vec<Scalar> {
        self.terms.iter().map(|t| t.energy.clone()).collect()
    }

    pub fn max_order(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Roots of the order-zero closure polynomial.
#[derive(Clone, Debug)]
pub struct ClosureRoots {
    /// The closure polynomial in `c_{0,1}` after forward substitution.
    pub closure: Polynomial,
    /// Every real root with `c_{0,1} > 0`.
    pub real: Vec<Scalar>,
    /// The subset whose top coefficient `c_{0,2p+1}` is also positive.
    pub admissible: Vec<Scalar>,
}

/// Forward substitution of the order-zero equations for a given `c_{0,1}`:
/// `c_m = (sum_{u+v=m-1} c_u c_v - v_{2m}) / (2m+1)`.
fn forward_substitute<T>(
    c0: T,
    p: usize,
    v: impl Fn(usize) -> T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
    div: impl Fn(&T, i64) -> T,
) -> (Vec<T>, T) {
    let conv = |c: &[T], m: usize| -> T {
        let mut acc = mul(&c[0], &c[m]);
        for u in 1..=m {
            acc = add(&acc, &mul(&c[u], &c[m - u]));
        }
        acc
    };
    let mut c = vec![c0];
    for m in 1..=p {
        let s = conv(&c, m - 1);
        c.push(div(&sub(&s, &v(m)), 2 * m as i64 + 1));
    }
    let closure = sub(&conv(&c, p), &v(p + 1));
    (c, closure)
}

/// Reduces the order-zero system to one polynomial in `c_{0,1}` and finds
/// its positive real roots.
pub fn closure_roots(potential: &PotentialSpec, ansatz: AnsatzSpec, digits: u32) -> Result<ClosureRoots> {
    ansatz.validate(potential)?;
    let pot = potential.at_precision(digits);
    let p = ansatz.p as usize;
    let (cs, closure) = forward_substitute(
        Polynomial::variable(digits),
        p,
        |m| Polynomial::constant(pot.coeff(m as u32)),
        |a, b| a * b,
        |a, b| a + b,
        |a, b| a - b,
        |a, k| a.scale(&Scalar::from_ratio(1, k, digits)),
    );
    if closure.is_zero() {
        return Err(Error::DegenerateAnsatz(
            "order-zero closure polynomial vanishes identically".into(),
        ));
    }
    if closure.degree() == Some(0) {
        return Err(Error::DegenerateAnsatz(
            "order-zero closure polynomial is a nonzero constant".into(),
        ));
    }
    let bound = closure.root_bound().expect("nonzero polynomial");
    let real = real_roots(closure.coeffs(), &Scalar::zero(digits), &bound)?;
    let top = &cs[p];
    let admissible = real.iter().filter(|r| top.eval(r).is_positive()).cloned().collect();
    Ok(ClosureRoots {
        closure,
        real,
        admissible,
    })
}

/// Solves order zero: `f_0' - f_0^2 + V - E_0 - W_0 = 0`.
///
/// Among admissible closure roots the smallest `c_{0,1}` is taken; when more
/// than one qualifies the candidates are logged.
pub fn solve_zeroth_order(potential: &PotentialSpec, ansatz: AnsatzSpec, digits: u32) -> Result<OrderTerm> {
    let roots = closure_roots(potential, ansatz, digits)?;
    let Some(c0) = roots.admissible.first().cloned() else {
        return Err(Error::NoAdmissibleRoot {
            candidates: roots.real.iter().map(|r| r.to_sig_string(20)).collect(),
        });
    };
    if roots.admissible.len() > 1 {
        warn!(
            "{} admissible order-zero roots, taking the smallest: [{}]",
            roots.admissible.len(),
            roots
                .admissible
                .iter()
                .map(|r| r.to_sig_string(20))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    let pot = potential.at_precision(digits);
    let p = ansatz.p as usize;
    let (c, _) = forward_substitute(
        c0.clone(),
        p,
        |m| pot.coeff(m as u32),
        |a, b| a * b,
        |a, b| a + b,
        |a, b| a - b,
        |a, k| a.div_int(k),
    );
    let f = ParityPolynomial::from_coeffs(Parity::Odd, c, digits);
    let energy = c0;
    let mut full = &(&f.diff() - &f.mul(&f)) + pot.polynomial();
    full.set(0, full.coeff(0) - &energy)?;
    let (lo, hi) = ansatz.w_band(0);
    let w = full.band(lo, hi);
    Ok(OrderTerm { j: 0, energy, f, w })
}

/// `sum_{k=1}^{j-1} f_k f_{j-k}`, using the symmetry of the sum.
fn inner_convolution(terms: &[OrderTerm], j: usize, digits: u32) -> ParityPolynomial {
    let mut acc = ParityPolynomial::zero(Parity::Even, digits);
    for k in 1..j {
        let l = j - k;
        if k > l {
            break;
        }
        let prod = terms[k].f.mul(&terms[l].f);
        acc = if k == l {
            &acc + &prod
        } else {
            &acc + &prod.scale(&Scalar::from_int(2, digits))
        };
    }
    acc
}

/// Solves order `j >= 1` given orders `0..j`.
///
/// The unknowns `c_{j,2m+1}`, `m = 0..=j+p`, enter the coefficient of
/// `x^{2m}` in `f_j' - 2 f_0 f_j + R_j` through a banded linear system,
/// where `R_j = -sum_{k=1}^{j-1} f_k f_{j-k} + W_{j-1}`.
pub fn solve_order_j(series: &BBSeries, j: usize) -> Result<OrderTerm> {
    if j == 0 {
        return Err(Error::InvalidInput("solve_order_j needs j >= 1".into()));
    }
    if series.terms.len() < j {
        return Err(Error::InvalidInput(format!(
            "order {j} needs orders 0..{} (have {})",
            j - 1,
            series.terms.len()
        )));
    }
    let digits = series.precision;
    let p = series.ansatz.p as usize;
    let f0 = &series.terms[0].f;
    let r = &series.terms[j - 1].w - &inner_convolution(&series.terms, j, digits);

    let n = j + p + 1;
    let zero = Scalar::zero(digits);
    let mut a = vec![vec![zero.clone(); n]; n];
    let mut b = vec![zero.clone(); n];
    let two_f0: Vec<Scalar> = f0.coeffs().iter().map(|c| c.mul_int(2)).collect();
    for m in 1..=n {
        let row = &mut a[m - 1];
        if m < n {
            row[m] = Scalar::from_int(2 * m as i64 + 1, digits);
        }
        for (u, c) in two_f0.iter().enumerate().take(p + 1) {
            if let Some(col) = (m - 1).checked_sub(u) {
                row[col] -= c;
            }
        }
        b[m - 1] = -r.coeff(2 * m as u32);
    }
    let c = lu_solve(a, b).map_err(|e| match e {
        Error::Singular { pivot, size } => Error::SingularOrder {
            order: j,
            pivot,
            size,
        },
        e => e,
    })?;
    let f = ParityPolynomial::from_coeffs(Parity::Odd, c, digits);
    let energy = f.coeff(1);
    let rest = &(&f.diff() - &f0.mul(&f).scale(&Scalar::from_int(2, digits))) + &r;
    let (lo, hi) = series.ansatz.w_band(j);
    let w = rest.band(lo, hi);
    Ok(OrderTerm { j, energy, f, w })
}

/// Residual polynomial of order `j` with the stored `f_j`, `W_j`, `E_j`
/// substituted, together with the largest coefficient magnitude among the
/// pieces that were summed.
pub fn order_residual_with_scale(series: &BBSeries, j: usize) -> Result<(ParityPolynomial, Scalar)> {
    let term = series
        .terms
        .get(j)
        .ok_or_else(|| Error::InvalidInput(format!("order {j} not computed")))?;
    let digits = series.precision;
    let mut pieces: Vec<ParityPolynomial> = Vec::new();
    pieces.push(term.f.diff());
    for k in 0..=j {
        pieces.push(-&series.terms[k].f.mul(&series.terms[j - k].f));
    }
    if j == 0 {
        pieces.push(series.potential.at_precision(digits).polynomial().clone());
    } else {
        pieces.push(series.terms[j - 1].w.clone());
    }
    pieces.push(-&term.w);
    pieces.push(ParityPolynomial::monomial(0, -&term.energy));

    let mut scale = Scalar::zero(digits);
    let mut residual = ParityPolynomial::zero(Parity::Even, digits);
    for piece in &pieces {
        let m = piece.max_abs_coeff();
        if m > scale {
            scale = m;
        }
        residual = &residual + piece;
    }
    Ok((residual, scale))
}

/// Full residual polynomial of order `j`: zero to working precision for a
/// correctly solved term.
pub fn riccati_order_residual(series: &BBSeries, j: usize) -> Result<ParityPolynomial> {
    order_residual_with_scale(series, j).map(|(r, _)| r)
}

/// Checks `|residual coefficient| < 10^(10 - precision) * scale` for order `j`.
pub fn validate_order(series: &BBSeries, j: usize) -> Result<()> {
    let (residual, scale) = order_residual_with_scale(series, j)?;
    let digits = series.precision;
    let bound = &scale * &Scalar::pow10(10 - digits as i32, digits);
    let worst = residual.max_abs_coeff();
    if worst >= bound && !worst.is_zero() {
        return Err(Error::PrecisionExhausted {
            order: j,
            residual: worst.to_sig_string(6),
            bound: bound.to_sig_string(6),
        });
    }
    Ok(())
}

/// Builds and validates orders `0..=max_order`.
pub fn run_series(
    potential: &PotentialSpec,
    ansatz: AnsatzSpec,
    max_order: usize,
    digits: u32,
) -> Result<BBSeries> {
    if potential.s() != 0 {
        return Err(Error::UnsupportedAngularFactor(potential.s()));
    }
    let potential = potential.at_precision(digits);
    let zeroth = solve_zeroth_order(&potential, ansatz, digits).map_err(|e| e.at_order(0))?;
    let mut series = BBSeries {
        potential,
        ansatz,
        precision: digits,
        terms: vec![zeroth],
    };
    validate_order(&series, 0)?;
    for j in 1..=max_order {
        let term = solve_order_j(&series, j).map_err(|e| e.at_order(j))?;
        series.terms.push(term);
        validate_order(&series, j)?;
    }
    Ok(series)
}
