//! The realization maps from coefficient matrices into the Weyl algebra:
//! `D(A) = Σ ⟨Ae_α,f_β⟩ x_α ∂_β`, the first-order maps `∂(h)` and `∂̄(r)`,
//! the adjoint composite `D̃ = D∘ad`, the symmetric form `ε`, the weight
//! `τ`, the induced bilinear form `B = τ∘ε̃`, and the 2-cocycles `φ_u`,
//! together with the identity verifiers the suites are built on.
//!
//! All bracket identities are asserted with exact scalar equality after
//! restriction to a safe sub-window that the declared bandwidths prove
//! unaffected by truncation. Float arithmetic appears only in the
//! matrix-exponential and quadrature flow checks, always against stated
//! tolerances.

use crate::index::{HalfIndex, IndexWindow};
use crate::liealg::{LieError, LinComb, StructureConstants};
use crate::linalg::GMatrix;
use crate::numeric::{self, FMatrix};
use crate::pairings::{
    quadrature_pairing, x2dx_matrix, Bandwidth, Extent, PairingError, PairingMatrix, VectorCoeffs,
};
use crate::report::CheckResult;
use crate::scalar::GScalar;
use crate::weyl::{Monomial, Multi, Polynomial, WeylElement, WeylError};
use std::collections::BTreeMap;

/// Step used for central differences on black-box smooth functions.
pub const CENTRAL_DIFF_STEP: f64 = 1e-6;

/// Scalar backend for a verification context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    Exact,
    Float,
}

/// Finite stand-in for a biorthogonal system: the truncation window, the
/// safe-window margin, and the scalar backend.
#[derive(Debug, Clone)]
pub struct JSContext {
    pub window: IndexWindow,
    pub margin: u64,
    pub mode: ScalarMode,
}

impl JSContext {
    pub fn exact(window: IndexWindow, margin: u64) -> Self {
        JSContext { window, margin, mode: ScalarMode::Exact }
    }

    pub fn float(window: IndexWindow, margin: u64) -> Self {
        JSContext { window, margin, mode: ScalarMode::Float }
    }

    /// The sub-window on which identities are unaffected by truncation.
    pub fn safe_window(&self) -> Result<IndexWindow, JsError> {
        self.window.shrink(self.margin).ok_or_else(|| JsError::EmptySafeWindow {
            window: self.window.to_string(),
            margin: self.margin,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JsError {
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("identity needs margin {required} but the context allows {given}")]
    MarginTooSmall { required: u64, given: u64 },
    #[error("window {window} shrunk by margin {margin} is empty")]
    EmptySafeWindow { window: String, margin: u64 },
    #[error("element does not preserve polynomial degree: term {term}")]
    NotDegreePreserving { term: String },
    #[error("element references index {index} outside the representation variables {vars}")]
    IndexOutsideSpace { index: HalfIndex, vars: String },
    #[error("matrix entry ({row}, {col}) is not real; the float route requires real entries")]
    NonRealEntry { row: HalfIndex, col: HalfIndex },
    #[error("flow time {t} is outside the validity range t < {limit}")]
    FlowTimeOutOfRange { t: f64, limit: f64 },
    #[error("operation requires float mode")]
    FloatModeRequired,
}

/// `D(A) = Σ ⟨Ae_α, f_β⟩ x_α ∂_β`.
pub fn d_map(a: &PairingMatrix) -> WeylElement {
    WeylElement::from_terms(
        a.entries().map(|(r, c, v)| {
            (Monomial::new(Multi::single(r, 1), Multi::single(c, 1)), v.clone())
        }),
    )
}

/// `∂(h) = Σ ⟨h, f_α⟩ ∂_α`.
pub fn del(h: &VectorCoeffs) -> WeylElement {
    WeylElement::from_terms(
        h.entries().map(|(i, v)| (Monomial::new(Multi::empty(), Multi::single(i, 1)), v.clone())),
    )
}

/// `∂̄(r) = Σ ⟨e_α, r⟩ x_α`.
pub fn delbar(r: &VectorCoeffs) -> WeylElement {
    WeylElement::from_terms(
        r.entries().map(|(i, v)| (Monomial::new(Multi::single(i, 1), Multi::empty()), v.clone())),
    )
}

/// Reads back the coefficients of a pure first-order `∂` element.
pub fn del_coefficients(w: &WeylElement, window: &IndexWindow) -> Option<VectorCoeffs> {
    let mut pairs = Vec::new();
    for (m, c) in w.terms() {
        if !m.x.is_empty() || m.d.degree() != 1 {
            return None;
        }
        let idx = m.d.indices().next().expect("degree-one part");
        pairs.push((idx, c.clone()));
    }
    VectorCoeffs::from_pairs(window.clone(), pairs).ok()
}

/// Matrix of the operator composition `A∘B` under the row convention.
pub fn op_compose(a: &PairingMatrix, b: &PairingMatrix) -> Result<PairingMatrix, JsError> {
    Ok(b.mat_mul(a)?)
}

/// Matrix of the operator bracket `A∘B − B∘A`.
pub fn op_bracket(a: &PairingMatrix, b: &PairingMatrix) -> Result<PairingMatrix, JsError> {
    Ok(op_compose(a, b)?.sub(&op_compose(b, a)?)?)
}

/// Total safe-window margin required by a set of participating matrices.
pub fn required_margin(parts: &[&PairingMatrix]) -> Result<u64, JsError> {
    let mut total = 0u64;
    for p in parts {
        total += p.margin()?;
    }
    Ok(total)
}

fn check_margin(ctx: &JSContext, parts: &[&PairingMatrix]) -> Result<IndexWindow, JsError> {
    let required = required_margin(parts)?;
    if ctx.margin < required {
        return Err(JsError::MarginTooSmall { required, given: ctx.margin });
    }
    ctx.safe_window()
}

fn exact_identity_check(
    name: &str,
    lhs: &WeylElement,
    rhs: &WeylElement,
    ctx: &JSContext,
    safe: &IndexWindow,
) -> CheckResult {
    let l = lhs.restrict_to_window(safe);
    let r = rhs.restrict_to_window(safe);
    let base = if l == r {
        CheckResult::pass(name)
    } else {
        CheckResult::fail(name, format!("difference = {}", &(&l - &r)))
    };
    base.with_window(ctx.window.to_string()).with_safe_window(safe.to_string())
}

/// Verifies the four first-order commutation identities on the safe
/// window: `[D(A),D(B)] = D(AB−BA)`, `[∂(h),D(A)] = ∂(hA)`,
/// `[∂(h),∂(r)] = 0`, and `[D(A),∂̄(r)] = ∂̄(Ar)` (entry-wise, `hA` the
/// row-vector product and `Ar` the column action).
pub fn verify_comm_relations(
    a: &PairingMatrix,
    b: &PairingMatrix,
    h: &VectorCoeffs,
    r: &VectorCoeffs,
    ctx: &JSContext,
) -> Result<Vec<CheckResult>, JsError> {
    let safe = check_margin(ctx, &[a, b])?;
    let mut out = Vec::new();

    let da = d_map(a);
    let db = d_map(b);
    let lhs = da.commutator(&db)?;
    let c = a.mat_mul(b)?.sub(&b.mat_mul(a)?)?;
    out.push(exact_identity_check("comm-dd", &lhs, &d_map(&c), ctx, &safe));

    let dh = del(h);
    let lhs = dh.commutator(&da)?;
    out.push(exact_identity_check("comm-del-d", &lhs, &del(&a.vec_mul(h)), ctx, &safe));

    let lhs = dh.commutator(&del(r))?;
    out.push(exact_identity_check("comm-del-del", &lhs, &WeylElement::zero(), ctx, &safe));

    let lhs = da.commutator(&delbar(r))?;
    out.push(exact_identity_check("comm-d-delbar", &lhs, &delbar(&a.mat_vec(r)), ctx, &safe));

    Ok(out)
}

/// Coefficient matrix of `ad(v)` on a single-sorted ordered basis: entry
/// `(α, β)` is the coefficient of `b_β` in `[v, b_α]`.
///
/// For the positional (`E`-sort) labels of a finite algebra the window is
/// the whole model space; for integer (`L`-sort) label windows the matrix
/// is a banded truncation with the tight band computed from the entries.
pub fn ad_matrix(v: &LinComb, sc: &StructureConstants) -> Result<PairingMatrix, JsError> {
    let (window, extent) = sc.label_window()?;
    let mut entries = BTreeMap::new();
    let mut band = 0u64;
    for a in sc.labels() {
        let row = sc.label_index(a).expect("basis label");
        let Some(res) = sc.bracket_lin(v, &LinComb::singleton(a.clone(), GScalar::one()))
        else {
            // Bracket escapes the label window: the row is unavailable, so
            // the matrix is an honest truncation missing that row.
            continue;
        };
        for (target, coeff) in res.terms() {
            let col = sc.label_index(target).expect("bracket stays in basis");
            band = band.max(row.offset_to(col).unsigned_abs());
            entries.insert((row, col), coeff.clone());
        }
    }
    Ok(PairingMatrix::new(window, extent, Bandwidth::Banded(band), entries)?)
}

/// `D̃(v) = D(ad(v))`.
pub fn tilde_d(v: &LinComb, sc: &StructureConstants) -> Result<WeylElement, JsError> {
    Ok(d_map(&ad_matrix(v, sc)?))
}

/// Kernel check for `v ↦ D̃(v)` on a finite algebra: the kernel must equal
/// the center, and in particular `D̃` is injective iff the center is zero.
pub fn tilde_d_kernel_matches_center(sc: &StructureConstants) -> Result<CheckResult, JsError> {
    let dim = sc.labels().len();
    // Coefficient matrix of v ↦ D̃(v) over the monomial support union.
    let images: Vec<WeylElement> = sc
        .labels()
        .iter()
        .map(|l| tilde_d(&LinComb::singleton(l.clone(), GScalar::one()), sc))
        .collect::<Result<_, _>>()?;
    let mut monomials: Vec<Monomial> = Vec::new();
    for w in &images {
        for (m, _) in w.terms() {
            if !monomials.contains(m) {
                monomials.push(m.clone());
            }
        }
    }
    let coeff = GMatrix::from_fn(dim, monomials.len().max(1), |i, j| {
        monomials.get(j).map(|m| images[i].coefficient(m)).unwrap_or_else(GScalar::zero)
    });
    let kernel = coeff.transpose().nullspace();
    let center = sc.center();
    let ok = kernel.len() == center.len() && {
        let center_rows = GMatrix::from_fn(center.len().max(1), dim, |i, j| {
            center
                .get(i)
                .map(|v| v.coefficient(&sc.labels()[j]))
                .unwrap_or_else(GScalar::zero)
        });
        kernel.iter().all(|k| center_rows.row_span_contains(k))
    };
    let name = "tilde-d-kernel-is-center";
    Ok(if ok {
        CheckResult::pass(name)
    } else {
        CheckResult::fail(name, format!(
            "kernel dimension {} vs center dimension {}",
            kernel.len(),
            center.len()
        ))
    })
}

/// `ε(A,B) = D(A)D(B) + D(A∘B)`.
pub fn epsilon(a: &PairingMatrix, b: &PairingMatrix) -> Result<WeylElement, JsError> {
    let prod = d_map(a).multiply(&d_map(b))?;
    Ok(&prod + &d_map(&op_compose(a, b)?))
}

/// Finite Fock truncation: homogeneous polynomials of a fixed degree in
/// the window variables.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    pub degree: u32,
    pub variables: IndexWindow,
}

impl WeightSpec {
    pub fn new(degree: u32, variables: IndexWindow) -> Self {
        WeightSpec { degree, variables }
    }

    /// All exponent vectors of total degree `degree`, in lexicographic
    /// order of the window variables.
    pub fn basis(&self) -> Vec<Multi> {
        let vars: Vec<HalfIndex> = self.variables.iter().collect();
        let mut out = Vec::new();
        let mut current: Vec<(HalfIndex, u32)> = Vec::new();
        fn rec(
            vars: &[HalfIndex],
            pos: usize,
            left: u32,
            current: &mut Vec<(HalfIndex, u32)>,
            out: &mut Vec<Multi>,
        ) {
            if pos + 1 == vars.len() {
                let mut c = current.clone();
                c.push((vars[pos], left));
                out.push(Multi::from_pairs(&c));
                return;
            }
            for take in 0..=left {
                current.push((vars[pos], take));
                rec(vars, pos + 1, left - take, current, out);
                current.pop();
            }
        }
        if vars.is_empty() {
            return out;
        }
        rec(&vars, 0, self.degree, &mut current, &mut out);
        out
    }

    pub fn dimension(&self) -> usize {
        self.basis().len()
    }
}

fn validate_degree_preserving(w: &WeylElement, spec: &WeightSpec) -> Result<(), JsError> {
    for (m, _) in w.terms() {
        if !m.is_balanced() {
            return Err(JsError::NotDegreePreserving { term: m.to_string() });
        }
        for idx in m.indices() {
            if !spec.variables.contains(idx) {
                return Err(JsError::IndexOutsideSpace {
                    index: idx,
                    vars: spec.variables.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// The weight `τ(w)`: the normalized trace of `w` acting on homogeneous
/// polynomials of the declared degree. Rejects inputs that do not preserve
/// polynomial degree or that touch variables outside the space.
pub fn weight_trace(w: &WeylElement, spec: &WeightSpec) -> Result<GScalar, JsError> {
    validate_degree_preserving(w, spec)?;
    let basis = spec.basis();
    let dim = basis.len();
    let mut trace = GScalar::zero();
    for mono in &basis {
        let p = Polynomial::monomial(GScalar::one(), &mono.iter().collect::<Vec<_>>());
        let image = w.apply(&p);
        trace = &trace + &image.coefficient(mono);
    }
    let dim_scalar = GScalar::from_int(dim as i64);
    trace.checked_div(&dim_scalar).map_err(|_| JsError::NotDegreePreserving {
        term: "empty representation space".to_string(),
    })
}

/// Dense matrix of a degree-preserving element on the declared monomial
/// basis (column `j` holds the image of the `j`-th basis monomial). Used
/// as an independent oracle for `weight_trace` symmetry.
pub fn rep_matrix(w: &WeylElement, spec: &WeightSpec) -> Result<GMatrix, JsError> {
    validate_degree_preserving(w, spec)?;
    let basis = spec.basis();
    let dim = basis.len();
    let mut g = GMatrix::zeros(dim, dim);
    for (j, mono) in basis.iter().enumerate() {
        let p = Polynomial::monomial(GScalar::one(), &mono.iter().collect::<Vec<_>>());
        let image = w.apply(&p);
        for (i, row) in basis.iter().enumerate() {
            g[(i, j)] = image.coefficient(row);
        }
    }
    Ok(g)
}

/// `ε̃(u,v) = ε(ad(u), ad(v))`.
pub fn epsilon_tilde(
    u: &LinComb,
    v: &LinComb,
    sc: &StructureConstants,
) -> Result<WeylElement, JsError> {
    epsilon(&ad_matrix(u, sc)?, &ad_matrix(v, sc)?)
}

/// The induced bilinear form `B(u,v) = τ(ε̃(u,v))`.
pub fn killing_form(
    u: &LinComb,
    v: &LinComb,
    sc: &StructureConstants,
    spec: &WeightSpec,
) -> Result<GScalar, JsError> {
    weight_trace(&epsilon_tilde(u, v, sc)?, spec)
}

/// The 2-cocycle `φ_u(w,z) = B([u,w], z)`; `None` when the bracket `[u,w]`
/// escapes the label window.
pub fn cocycle(
    u: &LinComb,
    w: &LinComb,
    z: &LinComb,
    sc: &StructureConstants,
    spec: &WeightSpec,
) -> Result<Option<GScalar>, JsError> {
    match sc.bracket_lin(u, w) {
        Some(uw) => killing_form(&uw, z, sc, spec).map(Some),
        None => Ok(None),
    }
}

fn dot(v: &VectorCoeffs, x: &VectorCoeffs) -> f64 {
    v.entries().map(|(i, c)| c.to_f64_pair().0 * x.entry(i).to_f64_pair().0).sum()
}

/// Evaluates a cylindrical function `φ(l_1(x), …, l_k(x))` at the point
/// with coefficient vector `x`.
pub fn eval_cylindrical(
    phi: &dyn Fn(&[f64]) -> f64,
    ls: &[VectorCoeffs],
    x: &VectorCoeffs,
) -> f64 {
    let args: Vec<f64> = ls.iter().map(|l| dot(l, x)).collect();
    phi(&args)
}

/// The derivative `D(A)[φ(l_1,…,l_k)](x) = Σ_m ∂φ/∂a_m · (A*l_m)(x)`,
/// with the partials taken by central differences on the black box and
/// `A*l` the pullback of the covector along the operator.
pub fn cylindrical_derivative(
    a: &PairingMatrix,
    ls: &[VectorCoeffs],
    phi: &dyn Fn(&[f64]) -> f64,
    x: &VectorCoeffs,
) -> f64 {
    assert!(!ls.is_empty(), "at least one covector argument");
    let args: Vec<f64> = ls.iter().map(|l| dot(l, x)).collect();
    let mut total = 0.0;
    for (m, l) in ls.iter().enumerate() {
        let mut plus = args.clone();
        let mut minus = args.clone();
        plus[m] += CENTRAL_DIFF_STEP;
        minus[m] -= CENTRAL_DIFF_STEP;
        let partial = (phi(&plus) - phi(&minus)) / (2.0 * CENTRAL_DIFF_STEP);
        total += partial * dot(&a.mat_vec(l), x);
    }
    total
}

/// Finite-difference flow derivative `(f(x + tAx) − f(x))/t` of the same
/// cylindrical function: the independent oracle for
/// [`cylindrical_derivative`].
pub fn flow_derivative(
    a: &PairingMatrix,
    ls: &[VectorCoeffs],
    phi: &dyn Fn(&[f64]) -> f64,
    x: &VectorCoeffs,
    t: f64,
) -> f64 {
    let ax = a.vec_mul(x);
    let base: Vec<f64> = ls.iter().map(|l| dot(l, x)).collect();
    let moved: Vec<f64> = ls.iter().zip(&base).map(|(l, b)| b + t * dot(l, &ax)).collect();
    (phi(&moved) - phi(&base)) / t
}

fn real_fmatrix(a: &PairingMatrix) -> Result<FMatrix, JsError> {
    let n = a.window().len();
    let mut m = FMatrix::zeros(n);
    for (r, c, v) in a.entries() {
        let (re, im) = v.to_f64_pair();
        if im != 0.0 {
            return Err(JsError::NonRealEntry { row: r, col: c });
        }
        let i = a.window().position(r).expect("entry in window");
        let j = a.window().position(c).expect("entry in window");
        m.set(i, j, re);
    }
    Ok(m)
}

/// Verifies the matrix-coefficient consequence of the semigroup identity
/// `∂(e^{tA}h) = e^{−tD(A)} ∂(h) e^{tD(A)}` on an entire window:
///
/// * route 1 conjugates `∂(h)` through the exact iterated commutator
///   series (each `ad` step is an exact Weyl-algebra bracket),
/// * route 2 applies the scaling-and-squaring matrix exponential,
/// * route 3 applies an independent row-vector Taylor series.
pub fn semigroup_check(
    a: &PairingMatrix,
    t: f64,
    h: &VectorCoeffs,
    ctx: &JSContext,
    tol: f64,
) -> Result<Vec<CheckResult>, JsError> {
    if ctx.mode != ScalarMode::Float {
        return Err(JsError::FloatModeRequired);
    }
    // Conjugation mixes all offsets, so an honest check needs the window
    // to be the whole model space.
    if a.margin()? != 0 || a.extent() != Extent::Entire {
        return Err(JsError::MarginTooSmall { required: u64::MAX, given: ctx.margin });
    }
    let window = a.window().clone();
    let n = window.len();
    let positions: Vec<HalfIndex> = window.iter().collect();

    // Route 1: iterated exact brackets ad(-D(A))^k ∂(h) = ∂(h A^k),
    // summed as Σ t^k/k! · coefficients.
    let da = d_map(a);
    let mut term = del(h);
    let mut series = vec![0.0f64; n];
    let mut factorial = 1.0f64;
    let mut t_pow = 1.0f64;
    for k in 0..60 {
        if k > 0 {
            factorial *= k as f64;
            t_pow *= t;
        }
        let coeffs = del_coefficients(&term, &window).expect("conjugation stays first order");
        let scale = t_pow / factorial;
        let mut largest = 0.0f64;
        for (i, idx) in positions.iter().enumerate() {
            let v = coeffs.entry(*idx).to_f64_pair().0 * scale;
            series[i] += v;
            largest = largest.max(v.abs());
        }
        if k > 0 && largest < 1e-300 {
            break;
        }
        term = term.commutator(&da)?;
    }

    // Route 2: dense matrix exponential.
    let m = real_fmatrix(a)?;
    let tm = m.scale(t);
    let exp_tm = numeric::expm(&tm);
    let h_vec: Vec<f64> = positions.iter().map(|i| h.entry(*i).to_f64_pair().0).collect();
    let transformed = exp_tm.vec_mat(&h_vec);

    // Route 3: independent row-vector exponential series.
    let series_route = numeric::exp_vec_series(&h_vec, &tm);

    let mut out = Vec::new();
    let err12 = series
        .iter()
        .zip(&transformed)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    out.push(
        CheckResult::assert("semigroup-conjugation-vs-expm", err12 <= tol, || {
            format!("max coefficient error {err12:.3e} exceeds {tol:.1e}")
        })
        .with_error(err12),
    );
    let err23 = transformed
        .iter()
        .zip(&series_route)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    out.push(
        CheckResult::assert("semigroup-expm-vs-series", err23 <= tol, || {
            format!("max coefficient error {err23:.3e} exceeds {tol:.1e}")
        })
        .with_error(err23),
    );
    if t == 0.0 {
        let exact = positions
            .iter()
            .enumerate()
            .all(|(i, idx)| transformed[i] == h.entry(*idx).to_f64_pair().0);
        out.push(CheckResult::assert("semigroup-t0-identity", exact, || {
            "t = 0 must reproduce the coefficients exactly".to_string()
        }));
    }
    Ok(out)
}

/// Largest admissible flow time for the quadratic field on the full
/// period: `X_t(x) = x/(1−tx)` needs `t < 1/(2π)`.
pub fn flow_time_limit() -> f64 {
    1.0 / (2.0 * std::f64::consts::PI)
}

/// Result of one flow-integral comparison window.
#[derive(Debug, Clone)]
pub struct FlowWindowError {
    pub window_size: i64,
    pub max_abs_error: f64,
}

/// Compares the flow pairings `(1/π)∫ sin(n·X_t(x)) sin(mx) dx` against
/// the matrix exponential `(e^{tĀ})_{nm}` of the quadratic-field matrix on
/// `{1..window_size}`, returning the maximal absolute entry error.
pub fn flow_integral_error(
    window_size: i64,
    t: f64,
    nodes: usize,
) -> Result<FlowWindowError, JsError> {
    let limit = flow_time_limit();
    if t >= limit {
        return Err(JsError::FlowTimeOutOfRange { t, limit });
    }
    let window = IndexWindow::integers(1, window_size);
    let abar = x2dx_matrix(&window)?.to_fmatrix();
    let exp_t = numeric::expm(&abar.scale(t));
    let mut max_err = 0.0f64;
    for (i, r) in window.iter().enumerate() {
        let nf = r.as_int().expect("integer window") as f64;
        for (j, c) in window.iter().enumerate() {
            let mf = c.as_int().expect("integer window") as f64;
            let q = quadrature_pairing(
                move |x| (nf * (x / (1.0 - t * x))).sin(),
                move |x| (mf * x).sin(),
                nodes,
            );
            max_err = max_err.max((q - exp_t.get(i, j)).abs());
        }
    }
    Ok(FlowWindowError { window_size, max_abs_error: max_err })
}

/// A sub-window is invariant under `A` when rows inside it only reach
/// columns inside it; then the polynomials free of the sub-window
/// variables are preserved by `D(A)`. Checks both statements at finite
/// scale.
pub fn invariant_subspace_check(
    a: &PairingMatrix,
    sub: &IndexWindow,
    max_degree: u32,
) -> Result<CheckResult, JsError> {
    let name = "invariant-subspace-preserved";
    for (r, c, _) in a.entries() {
        if sub.contains(r) && !sub.contains(c) {
            return Ok(CheckResult::fail(
                name,
                format!("sub-window is not invariant: entry ({r},{c}) escapes"),
            ));
        }
    }
    let complement: Vec<HalfIndex> =
        a.window().iter().filter(|i| !sub.contains(*i)).collect();
    let da = d_map(a);
    // Basis of polynomials of degree ≤ max_degree in the complementary
    // variables (single- and two-factor monomials suffice at low degree).
    let mut polys = vec![Polynomial::one()];
    for (i, &v) in complement.iter().enumerate() {
        for d in 1..=max_degree {
            polys.push(Polynomial::monomial(GScalar::one(), &[(v, d)]));
        }
        for &w in complement.iter().skip(i + 1) {
            polys.push(Polynomial::monomial(GScalar::one(), &[(v, 1), (w, 1)]));
        }
    }
    for p in &polys {
        let image = da.apply(p);
        for idx in image.indices() {
            if sub.contains(idx) {
                return Ok(CheckResult::fail(name, format!(
                    "D(A) applied to {p} leaves the annihilated subspace (variable {idx})"
                )));
            }
        }
    }
    Ok(CheckResult::pass(name))
}

/// The product-rule consequence on `n`-fold `∂` products:
/// `[∂(f_1)…∂(f_n), D(A)] = Σ_k ∂(f_1)…∂(f_k A)…∂(f_n)`.
pub fn n_point_motion_check(
    a: &PairingMatrix,
    fs: &[VectorCoeffs],
    ctx: &JSContext,
) -> Result<CheckResult, JsError> {
    assert!(!fs.is_empty() && fs.len() <= 4, "between one and four ∂-factors");
    let safe = check_margin(ctx, &[a])?;
    let da = d_map(a);
    let mut product = WeylElement::one();
    for f in fs {
        product = product.multiply(&del(f))?;
    }
    let lhs = product.commutator(&da)?;
    let mut rhs = WeylElement::zero();
    for k in 0..fs.len() {
        let mut term = WeylElement::one();
        for (j, f) in fs.iter().enumerate() {
            let factor = if j == k { del(&a.vec_mul(f)) } else { del(f) };
            term = term.multiply(&factor)?;
        }
        rhs = &rhs + &term;
    }
    Ok(exact_identity_check("n-point-motion", &lhs, &rhs, ctx, &safe))
}
