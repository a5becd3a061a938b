//! Quadrature-mirror-filter representation of the Cuntz isometries on
//! Laurent polynomials over the unit circle, with the `n`-fold covering
//! `r(z) = z^n` and Haar measure.
//!
//! Branch sums `Σ_{r(ω)=z}` reduce to exponent arithmetic: a monomial
//! `z^k` survives the sum over the `n` branches exactly when `n | k`, so
//! every filter identity, isometry, and the induced coefficient operator
//! are verified with exact scalars. Floating point appears only in the
//! pointwise sampling oracle.

use crate::cuntz::{AlgebraModel, CuntzElement, CuntzWord};
use crate::linalg::GMatrix;
use crate::par;
use crate::report::CheckResult;
use crate::scalar::{GScalar, Rational};
use crate::weyl::{ParseError, Scanner};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Minimum term-pair count before a product switches to the parallel path.
const PAR_PAIR_THRESHOLD: usize = 2048;

/// A Laurent polynomial `Σ c_k z^k` with finite support and exact
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, GScalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0)
    }

    /// The monomial `z^k`.
    pub fn monomial(k: i64) -> Self {
        LaurentPoly::term(GScalar::one(), k)
    }

    /// The single term `c·z^k`.
    pub fn term(c: GScalar, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_pairs(items: impl IntoIterator<Item = (i64, GScalar)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (k, c) in items {
            out.add_term(k, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, k: i64) -> GScalar {
        self.coeffs.get(&k).cloned().unwrap_or_else(GScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GScalar)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, k: i64, c: GScalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &GScalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    pub fn multiply(&self, other: &LaurentPoly) -> LaurentPoly {
        let pairs = self.coeffs.len().saturating_mul(other.coeffs.len());
        if pairs >= PAR_PAIR_THRESHOLD {
            let lhs: Vec<(i64, &GScalar)> = self.terms().collect();
            par::map_reduce(
                lhs,
                LaurentPoly::zero,
                |mut acc, (k1, c1)| {
                    for (k2, c2) in &other.coeffs {
                        acc.add_term(k1 + k2, c1 * c2);
                    }
                    acc
                },
                |mut acc, part| {
                    for (k, c) in part.coeffs {
                        acc.add_term(k, c);
                    }
                    acc
                },
            )
        } else {
            let mut out = LaurentPoly::zero();
            for (k1, c1) in &self.coeffs {
                for (k2, c2) in &other.coeffs {
                    out.add_term(k1 + k2, c1 * c2);
                }
            }
            out
        }
    }

    /// Conjugation on the circle: `conj(Σ c_k z^k) = Σ c̄_k z^{-k}`,
    /// since `|z| = 1` makes `z̄ = z^{-1}`.
    pub fn conj(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.conj())).collect() }
    }

    /// Substitution `z ↦ z^n`, i.e. composition with the covering map.
    pub fn compose_power(&self, n: usize) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * n as i64, c.clone())).collect(),
        }
    }

    /// Exact evaluation at the fourth root of unity `z = i^t`; these are
    /// the only circle points representable in the scalar field.
    pub fn eval_gaussian_unit(&self, t: i64) -> GScalar {
        let mut total = GScalar::zero();
        for (&k, c) in &self.coeffs {
            total = &total + &(c * &i_power(t * k));
        }
        total
    }

    /// Floating-point evaluation at `z = e^{iθ}`, as `(re, im)`.
    pub fn eval_at_angle(&self, theta: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&k, c) in &self.coeffs {
            let (cr, ci) = (c.re.to_f64(), c.im.to_f64());
            let (s, co) = (theta * k as f64).sin_cos();
            re += cr * co - ci * s;
            im += cr * s + ci * co;
        }
        (re, im)
    }

    /// Squared coefficient-ℓ² norm `Σ |c_k|²`, exact.
    pub fn ell2_norm_sqr(&self) -> Rational {
        let mut total = Rational::zero();
        for c in self.coeffs.values() {
            total = &total + &(&(&c.re * &c.re) + &(&c.im * &c.im));
        }
        total
    }

    /// `∫ f dμ` for Haar measure on the circle: the constant coefficient,
    /// since `∫ z^k dμ = δ_{k,0}`.
    pub fn haar_integral(&self) -> GScalar {
        self.coefficient(0)
    }
}

/// `i^t` as an exact scalar.
fn i_power(t: i64) -> GScalar {
    match t.rem_euclid(4) {
        0 => GScalar::from_int(1),
        1 => GScalar::new(Rational::zero(), Rational::from_int(1)),
        2 => GScalar::from_int(-1),
        _ => GScalar::new(Rational::zero(), Rational::from_int(-1)),
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &rhs.scale(&GScalar::from_int(-1))
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.multiply(rhs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z^{{{k}}}")?;
            } else {
                write!(f, "({c}) z^{{{k}}}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = ParseError;

    /// Parses the canonical form, e.g. `z^{-2} + (1/2) z^{3}`. Exponents
    /// may be braced or bare; a lone `z` means `z^{1}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut sc = Scanner::new(s.trim());
        let mut out = LaurentPoly::zero();
        if sc.src.is_empty() || sc.src == "0" {
            return Ok(out);
        }
        let mut sign = GScalar::one();
        loop {
            sc.skip_ws();
            let mut coeff = sign.clone();
            let mut saw_coeff = false;
            match sc.peek() {
                Some('(') => {
                    coeff = &coeff * &sc.paren_scalar()?;
                    saw_coeff = true;
                }
                Some(c) if c.is_ascii_digit() || c == '-' || c == '+' || c == 'i' => {
                    coeff = &coeff * &sc.bare_scalar()?;
                    saw_coeff = true;
                }
                _ => {}
            }
            sc.skip_ws();
            let mut exponent = 0i64;
            let mut saw_factor = false;
            if sc.peek() == Some('z') {
                sc.bump();
                saw_factor = true;
                exponent = 1;
                if sc.peek() == Some('^') {
                    sc.bump();
                    exponent = scan_exponent(&mut sc)?;
                }
            }
            if !saw_coeff && !saw_factor {
                return Err(sc.err("expected a term"));
            }
            out.add_term(exponent, coeff);
            sc.skip_ws();
            match sc.peek() {
                None => break,
                Some('+') => {
                    sc.bump();
                    sign = GScalar::one();
                }
                Some('-') => {
                    sc.bump();
                    sign = -GScalar::one();
                }
                Some(_) => return Err(sc.err("expected '+' or '-' between terms")),
            }
        }
        Ok(out)
    }
}

fn scan_exponent(sc: &mut Scanner<'_>) -> Result<i64, ParseError> {
    let braced = sc.peek() == Some('{');
    if braced {
        sc.bump();
    }
    let start = sc.pos;
    if matches!(sc.peek(), Some('+') | Some('-')) {
        sc.bump();
    }
    while sc.peek().is_some_and(|c| c.is_ascii_digit()) {
        sc.bump();
    }
    let text = &sc.src[start..sc.pos];
    let value: i64 = text
        .parse()
        .map_err(|_| ParseError { at: start, reason: "expected an integer exponent".into() })?;
    if braced {
        sc.expect('}')?;
    }
    Ok(value)
}

/// Errors from filter-system construction and the induced operator.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WaveletError {
    #[error("branching factor must be at least 2, got {n}")]
    BranchFactorTooSmall { n: usize },
    #[error("expected {expected} filters, got {got}")]
    FilterCountMismatch { expected: usize, got: usize },
    #[error("pairing must be {n}×{n}, got {rows}×{cols}")]
    PairingShape { n: usize, rows: usize, cols: usize },
    #[error("model dimension {dim} does not match branching factor {n}")]
    ModelDimension { dim: usize, n: usize },
}

/// The transfer sum `T(f)(z) = (1/n) Σ_{ω^n = z} f(ω)`: a monomial `ω^k`
/// averages to `z^{k/n}` when `n | k` and to zero otherwise.
pub fn transfer(n: usize, f: &LaurentPoly) -> LaurentPoly {
    let n = n as i64;
    LaurentPoly::from_pairs(
        f.terms().filter(|(k, _)| k.rem_euclid(n) == 0).map(|(k, c)| (k / n, c.clone())),
    )
}

/// The branch mean `(1/n) Σ_{r(ω) = r(z)} f(ω)`: keeps exactly the terms
/// whose exponent the branching factor divides, without resampling.
pub fn branch_mean(n: usize, f: &LaurentPoly) -> LaurentPoly {
    let n = n as i64;
    LaurentPoly::from_pairs(
        f.terms().filter(|(k, _)| k.rem_euclid(n) == 0).map(|(k, c)| (k, c.clone())),
    )
}

/// A filter system for the covering `r(z) = z^n`: filters `m_0..m_{n-1}`
/// subject to the exact transfer-orthogonality conditions
/// `T(m_i · conj(m_j)) = δ_ij`. Construction checks only shape, so broken
/// systems can be built and then failed by [`QMFSystem::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMFSystem {
    n: usize,
    filters: Vec<LaurentPoly>,
}

impl QMFSystem {
    pub fn new(n: usize, filters: Vec<LaurentPoly>) -> Result<Self, WaveletError> {
        if n < 2 {
            return Err(WaveletError::BranchFactorTooSmall { n });
        }
        if filters.len() != n {
            return Err(WaveletError::FilterCountMismatch { expected: n, got: filters.len() });
        }
        Ok(QMFSystem { n, filters })
    }

    /// The monomial system `m_j = z^j`, the canonical exact instance.
    pub fn standard(n: usize) -> Result<Self, WaveletError> {
        QMFSystem::new(n, (0..n).map(|j| LaurentPoly::monomial(j as i64)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn filters(&self) -> &[LaurentPoly] {
        &self.filters
    }

    pub fn filter(&self, i: usize) -> &LaurentPoly {
        &self.filters[i]
    }

    /// Checks the single-filter normalization `T(m_i · conj(m_i)) = 1`
    /// and pairwise orthogonality `T(m_i · conj(m_j)) = 0`, all exact.
    pub fn verify(&self) -> Vec<CheckResult> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let diag = transfer(self.n, &self.filters[i].multiply(&self.filters[i].conj()));
            out.push(CheckResult::assert("qmf-filter", diag == LaurentPoly::one(), || {
                format!("filter {i}: transfer gives {diag}")
            }));
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let cross = transfer(self.n, &self.filters[i].multiply(&self.filters[j].conj()));
                out.push(CheckResult::assert("qmf-ortho", cross.is_zero(), || {
                    format!("filters ({i}, {j}): transfer gives {cross}")
                }));
            }
        }
        out
    }

    /// The isometry `S_i(f) = m_i · (f ∘ r)`.
    pub fn s(&self, i: usize, f: &LaurentPoly) -> LaurentPoly {
        assert!(i < self.n, "filter index {i} out of range");
        self.filters[i].multiply(&f.compose_power(self.n))
    }

    /// The adjoint `S_i*(f)(z) = (1/n) Σ_{ω^n = z} conj(m_i)(ω) f(ω)`.
    pub fn s_star(&self, i: usize, f: &LaurentPoly) -> LaurentPoly {
        assert!(i < self.n, "filter index {i} out of range");
        transfer(self.n, &self.filters[i].conj().multiply(f))
    }

    /// Applies a normal-form word, rightmost factor first. Generator
    /// indices must lie in `0..n`.
    pub fn apply_word(&self, w: &CuntzWord, f: &LaurentPoly) -> LaurentPoly {
        let mut out = f.clone();
        for idx in &w.right {
            out = self.s_star(index_as_filter(*idx), &out);
        }
        for idx in w.left.iter().rev() {
            out = self.s(index_as_filter(*idx), &out);
        }
        out
    }

    /// Applies a linear combination of normal-form words.
    pub fn apply_element(&self, e: &CuntzElement, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (w, c) in e.terms() {
            out = &out + &self.apply_word(w, f).scale(c);
        }
        out
    }
}

fn index_as_filter(idx: crate::index::HalfIndex) -> usize {
    let v = idx.as_int().expect("filter indices are integers");
    usize::try_from(v).expect("filter indices are non-negative")
}

fn check_pairing_shape(p: &GMatrix, n: usize) -> Result<(), WaveletError> {
    if p.rows() != n || p.cols() != n {
        return Err(WaveletError::PairingShape { n, rows: p.rows(), cols: p.cols() });
    }
    Ok(())
}

/// The induced coefficient operator via the branch-sum formula
/// `D f(z) = (1/n) Σ_{r(ω)=r(z)} (Σ_{ij} P_ij m_i(z) conj(m_j)(ω)) f(ω)`,
/// computed symbolically: the inner mean is exponent filtering.
pub fn wavelet_d_branch(
    p: &GMatrix,
    sys: &QMFSystem,
    f: &LaurentPoly,
) -> Result<LaurentPoly, WaveletError> {
    check_pairing_shape(p, sys.n())?;
    let mut out = LaurentPoly::zero();
    for i in 0..sys.n() {
        for j in 0..sys.n() {
            let c = &p[(i, j)];
            if c.is_zero() {
                continue;
            }
            let averaged = branch_mean(sys.n(), &sys.filter(j).conj().multiply(f));
            out = &out + &sys.filter(i).multiply(&averaged).scale(c);
        }
    }
    Ok(out)
}

/// The same operator assembled as `Σ_{ij} P_ij · S_i(S_j*(f))`; an
/// independent route that must agree exactly with the branch formula.
pub fn wavelet_d_composed(
    p: &GMatrix,
    sys: &QMFSystem,
    f: &LaurentPoly,
) -> Result<LaurentPoly, WaveletError> {
    check_pairing_shape(p, sys.n())?;
    let mut out = LaurentPoly::zero();
    for i in 0..sys.n() {
        for j in 0..sys.n() {
            let c = &p[(i, j)];
            if c.is_zero() {
                continue;
            }
            out = &out + &sys.s(i, &sys.s_star(j, f)).scale(c);
        }
    }
    Ok(out)
}

/// The pairing matrix `P_ij = ⟨a e_i, f_j⟩` of left multiplication in a
/// model with a biorthogonal dual pair: the `j`-coordinate of `a·b_i`.
pub fn model_pairing(model: &AlgebraModel, a: &[GScalar]) -> GMatrix {
    let lm = model.left_mult_matrix(a);
    let hi = |k: usize| crate::index::HalfIndex::from_int(k as i64);
    GMatrix::from_fn(model.dim(), model.dim(), |i, j| lm.entry(hi(i), hi(j)))
}

/// The operator `D(l_a)` of a model element in the filter representation;
/// the model dimension must equal the branching factor.
pub fn wavelet_d_model(
    model: &AlgebraModel,
    a: &[GScalar],
    sys: &QMFSystem,
    f: &LaurentPoly,
) -> Result<LaurentPoly, WaveletError> {
    if model.dim() != sys.n() {
        return Err(WaveletError::ModelDimension { dim: model.dim(), n: sys.n() });
    }
    wavelet_d_branch(&model_pairing(model, a), sys, f)
}

/// Compares the two routes to the induced operator on a given input.
pub fn verify_wavelet_d(
    p: &GMatrix,
    sys: &QMFSystem,
    f: &LaurentPoly,
) -> Result<CheckResult, WaveletError> {
    let branch = wavelet_d_branch(p, sys, f)?;
    let composed = wavelet_d_composed(p, sys, f)?;
    Ok(CheckResult::assert("wavelet-d-two-routes", branch == composed, || {
        format!("branch-sum route gives {branch}, composed route gives {composed}")
    }))
}
