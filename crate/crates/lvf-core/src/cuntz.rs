//! Exact normal-form calculus in the Cuntz algebra on a finite generator
//! window: words `s_μ s_ν*` under the relations `s_j* s_j = 1` and
//! `s_j* s_k = 0` for `j ≠ k`, the coefficient maps `D`, `∂`, `∂̄`
//! twisted by a general operator `L`, homotope products of finite algebra
//! models, and the kernel analysis of `a ↦ D(l_a)`.
//!
//! No completeness relation (`Σ s_i s_i* = 1`) is ever invoked: every
//! identity here is an algebraic consequence of the two stated relations,
//! so all checks are exact with no truncation margins.

use crate::index::{HalfIndex, IndexWindow};
use crate::linalg::GMatrix;
use crate::pairings::{Bandwidth, Extent, PairingError, PairingMatrix, VectorCoeffs};
use crate::par;
use crate::report::CheckResult;
use crate::scalar::GScalar;
use crate::weyl::{ParseError, Scanner};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Minimum term-pair count before a product switches to the parallel path.
const PAR_PAIR_THRESHOLD: usize = 2048;

/// A reduced word `s_μ s_ν*`: `left` holds `μ` in operator order, `right`
/// holds `ν` so that the trailing block reads `s_{ν_q}* … s_{ν_1}*`.
/// Concatenation cancels at the boundary only, so stored words are always
/// irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuntzWord {
    pub left: Vec<HalfIndex>,
    pub right: Vec<HalfIndex>,
}

/// Canonical term order: by adjoint block, then by generator block, so
/// scalars sort first and pure-adjoint words last among equal adjoints.
impl Ord for CuntzWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.right, &self.left).cmp(&(&other.right, &other.left))
    }
}

impl PartialOrd for CuntzWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl CuntzWord {
    pub fn new(left: Vec<HalfIndex>, right: Vec<HalfIndex>) -> Self {
        CuntzWord { left, right }
    }

    pub fn empty() -> Self {
        CuntzWord { left: Vec::new(), right: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// The generator `s_i`.
    pub fn gen(i: HalfIndex) -> Self {
        CuntzWord { left: vec![i], right: Vec::new() }
    }

    /// The adjoint generator `s_i*`.
    pub fn gen_star(i: HalfIndex) -> Self {
        CuntzWord { left: Vec::new(), right: vec![i] }
    }

    /// `(s_μ s_ν*)* = s_ν s_μ*`.
    pub fn star(&self) -> Self {
        CuntzWord { left: self.right.clone(), right: self.left.clone() }
    }

    /// Concatenation with boundary reduction: the meeting block
    /// `s_{ν_1}* s_{σ_1}` cancels index by index; a mismatch annihilates
    /// the product.
    pub fn concat(&self, other: &CuntzWord) -> Option<CuntzWord> {
        let matched = self.right.len().min(other.left.len());
        for i in 0..matched {
            if self.right[i] != other.left[i] {
                return None;
            }
        }
        Some(if self.right.len() <= other.left.len() {
            CuntzWord {
                left: self.left.iter().chain(&other.left[matched..]).copied().collect(),
                right: other.right.clone(),
            }
        } else {
            CuntzWord {
                left: self.left.clone(),
                right: other.right.iter().chain(&self.right[matched..]).copied().collect(),
            }
        })
    }
}

impl fmt::Display for CuntzWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for i in &self.left {
            write!(f, "s[{i}]")?;
        }
        if !self.left.is_empty() && !self.right.is_empty() {
            write!(f, " ")?;
        }
        // The trailing block in operator order: s_{ν_q}* … s_{ν_1}*.
        for i in self.right.iter().rev() {
            write!(f, "s*[{i}]")?;
        }
        Ok(())
    }
}

/// A finite linear combination of reduced words with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CuntzElement {
    terms: BTreeMap<CuntzWord, GScalar>,
}

/// A free factor before reduction: a generator or its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeGen {
    Gen(HalfIndex),
    Star(HalfIndex),
}

impl CuntzElement {
    pub fn zero() -> Self {
        CuntzElement::default()
    }

    pub fn one() -> Self {
        CuntzElement::word(CuntzWord::empty(), GScalar::one())
    }

    pub fn scalar(c: GScalar) -> Self {
        CuntzElement::word(CuntzWord::empty(), c)
    }

    pub fn word(w: CuntzWord, c: GScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        CuntzElement { terms }
    }

    pub fn from_terms(items: impl IntoIterator<Item = (CuntzWord, GScalar)>) -> Self {
        let mut out = CuntzElement::zero();
        for (w, c) in items {
            out.add_term(w, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &CuntzWord) -> GScalar {
        self.terms.get(w).cloned().unwrap_or_else(GScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CuntzWord, &GScalar)> {
        self.terms.iter()
    }

    fn add_term(&mut self, w: CuntzWord, c: GScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn scale(&self, c: &GScalar) -> CuntzElement {
        if c.is_zero() {
            return CuntzElement::zero();
        }
        CuntzElement {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// `(Σ c_w w)* = Σ c̄_w w*` — coefficients here are exact complex
    /// rationals, so conjugation flips the imaginary part.
    pub fn star(&self) -> CuntzElement {
        CuntzElement::from_terms(self.terms.iter().map(|(w, c)| (w.star(), c.conj())))
    }

    /// Normal-ordered product; reduction happens word by word at the
    /// concatenation boundary. Large products parallelize over term pairs
    /// with a deterministic merge.
    pub fn multiply(&self, other: &CuntzElement) -> CuntzElement {
        let pairs = self.terms.len().saturating_mul(other.terms.len());
        if pairs >= PAR_PAIR_THRESHOLD {
            self.multiply_par(other)
        } else {
            self.multiply_seq(other)
        }
    }

    pub fn multiply_seq(&self, other: &CuntzElement) -> CuntzElement {
        let mut out = CuntzElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if let Some(w) = w1.concat(w2) {
                    out.add_term(w, c1 * c2);
                }
            }
        }
        out
    }

    pub fn multiply_par(&self, other: &CuntzElement) -> CuntzElement {
        let lhs: Vec<(&CuntzWord, &GScalar)> = self.terms.iter().collect();
        par::map_reduce(
            lhs,
            CuntzElement::zero,
            |mut acc, (w1, c1)| {
                for (w2, c2) in &other.terms {
                    if let Some(w) = w1.concat(w2) {
                        acc.add_term(w, c1 * c2);
                    }
                }
                acc
            },
            |mut acc, part| {
                for (w, c) in part.terms {
                    acc.add_term(w, c);
                }
                acc
            },
        )
    }
}

/// Reduces a free product of generators and adjoints to normal form. The
/// result is independent of the association order (confluence).
pub fn reduce(factors: &[FreeGen]) -> CuntzElement {
    let mut out = CuntzElement::one();
    for f in factors {
        let w = match f {
            FreeGen::Gen(i) => CuntzWord::gen(*i),
            FreeGen::Star(i) => CuntzWord::gen_star(*i),
        };
        out = out.multiply(&CuntzElement::word(w, GScalar::one()));
    }
    out
}

impl std::ops::Add for &CuntzElement {
    type Output = CuntzElement;
    fn add(self, rhs: &CuntzElement) -> CuntzElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &CuntzElement {
    type Output = CuntzElement;
    fn sub(self, rhs: &CuntzElement) -> CuntzElement {
        self + &rhs.scale(&GScalar::from_int(-1))
    }
}

impl std::ops::Mul for &CuntzElement {
    type Output = CuntzElement;
    fn mul(self, rhs: &CuntzElement) -> CuntzElement {
        self.multiply(rhs)
    }
}

impl fmt::Display for CuntzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({c}) {w}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CuntzElement {
    type Err = ParseError;

    /// Parses the canonical form, e.g. `(1/2) s[1]s[3] s*[2] + s*[4]`.
    /// Adjoint blocks are read in operator order, matching `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut sc = Scanner::new(s.trim());
        let mut out = CuntzElement::zero();
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
            let mut left = Vec::new();
            let mut right_ops = Vec::new();
            let mut saw_factor = false;
            while sc.peek() == Some('s') {
                sc.bump();
                let star = sc.peek() == Some('*');
                if star {
                    sc.bump();
                }
                let idx = sc.index()?;
                if star {
                    right_ops.push(idx);
                } else {
                    if !right_ops.is_empty() {
                        return Err(sc.err("plain generator after an adjoint block"));
                    }
                    left.push(idx);
                }
                saw_factor = true;
                sc.skip_ws();
            }
            if !saw_coeff && !saw_factor {
                return Err(sc.err("expected a term"));
            }
            // Operator order s_{ν_q}* … s_{ν_1}* is stored as (ν_1 … ν_q).
            right_ops.reverse();
            out.add_term(CuntzWord::new(left, right_ops), coeff);
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

/// `D(A) = Σ L^β(Ae_α) s_α s_β*`, with coefficient matrix `A·Λ` for `Λ`
/// the matrix of `L` (so `L^β(v)` is the `β`-coordinate of `Lv`).
pub fn cuntz_d(a: &PairingMatrix, l: &PairingMatrix) -> Result<CuntzElement, PairingError> {
    let c = a.mat_mul(l)?;
    Ok(CuntzElement::from_terms(c.entries().map(|(r, col, v)| {
        (CuntzWord::new(vec![r], vec![col]), v.clone())
    })))
}

/// `∂(h) = Σ L^α(h) s_α*`.
pub fn cuntz_del(h: &VectorCoeffs, l: &PairingMatrix) -> CuntzElement {
    CuntzElement::from_terms(
        l.vec_mul(h).entries().map(|(i, v)| (CuntzWord::gen_star(i), v.clone())),
    )
}

/// `∂̄(f) = Σ ⟨e_α, f⟩ s_α`.
pub fn cuntz_delbar(f: &VectorCoeffs) -> CuntzElement {
    CuntzElement::from_terms(f.entries().map(|(i, v)| (CuntzWord::gen(i), v.clone())))
}

fn pair_dot(v: &VectorCoeffs, w: &VectorCoeffs) -> GScalar {
    let mut total = GScalar::zero();
    for (i, c) in v.entries() {
        total = &total + &(c * &w.entry(i));
    }
    total
}

/// Verifies the four multiplication identities of the twisted maps on a
/// common window, all exact:
/// `D(A)D(B) = D(B∘L∘A)`, `∂(h)D(A) = ∂((A∘L)h)`,
/// `D(A)∂̄(f) = ∂̄((A∘L)*f)`, and `∂(h)∂̄(g) = ⟨Lh, g⟩·1`.
pub fn verify_cuntz_relations(
    a: &PairingMatrix,
    b: &PairingMatrix,
    l: &PairingMatrix,
    h: &VectorCoeffs,
    g: &VectorCoeffs,
    f: &VectorCoeffs,
) -> Result<Vec<CheckResult>, PairingError> {
    let da = cuntz_d(a, l)?;
    let db = cuntz_d(b, l)?;
    let mut out = Vec::new();

    // Row convention: the matrix of B∘L∘A is A·Λ·B.
    let bla = a.mat_mul(l)?.mat_mul(b)?;
    let lhs = da.multiply(&db);
    let rhs = cuntz_d(&bla, l)?;
    out.push(exact_check("cuntz-dd", &lhs, &rhs));

    let dh = cuntz_del(h, l);
    let lhs = dh.multiply(&da);
    let alh = l.mat_mul(a)?.vec_mul(h);
    out.push(exact_check("cuntz-del-d", &lhs, &cuntz_del(&alh, l)));

    let lhs = da.multiply(&cuntz_delbar(f));
    let rhs = cuntz_delbar(&a.mat_mul(l)?.mat_vec(f));
    out.push(exact_check("cuntz-d-delbar", &lhs, &rhs));

    let lhs = dh.multiply(&cuntz_delbar(g));
    let rhs = CuntzElement::scalar(pair_dot(&l.vec_mul(h), g));
    out.push(exact_check("cuntz-del-delbar", &lhs, &rhs));

    Ok(out)
}

fn exact_check(name: &str, lhs: &CuntzElement, rhs: &CuntzElement) -> CheckResult {
    if lhs == rhs {
        CheckResult::pass(name)
    } else {
        CheckResult::fail(name, format!("difference = {}", &(lhs - rhs)))
    }
}

/// Reads back the coefficient matrix of an element whose words all have
/// the shape `s_α s_β*`; `None` for any other shape.
pub fn coefficient_matrix(
    e: &CuntzElement,
    window: &IndexWindow,
) -> Option<PairingMatrix> {
    let mut entries = BTreeMap::new();
    for (w, c) in e.terms() {
        if w.left.len() != 1 || w.right.len() != 1 {
            return None;
        }
        entries.insert((w.left[0], w.right[0]), c.clone());
    }
    PairingMatrix::new(window.clone(), Extent::Entire, Bandwidth::Full, entries).ok()
}

/// Construction errors for finite algebra models.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CuntzError {
    #[error("multiplication tensor or weight has shape inconsistent with dimension {dim}")]
    ShapeMismatch { dim: usize },
    #[error("claimed identity fails e·ρ·b = b on basis element {index}")]
    NotHomotopeIdentity { index: usize },
}

/// A finite-dimensional algebra model: a basis, an exact multiplication
/// tensor, the homotope weight `ρ`, and the homotope identity when one
/// exists. The homotope product is `a ∘ρ b = a·ρ·b`.
#[derive(Debug, Clone)]
pub struct AlgebraModel {
    dim: usize,
    /// `product[i][j]` are the coordinates of `b_i · b_j`.
    product: Vec<Vec<Vec<GScalar>>>,
    rho: Vec<GScalar>,
    identity: Option<Vec<GScalar>>,
}

impl AlgebraModel {
    /// Builds a model from a multiplication tensor and homotope weight.
    /// The homotope identity must satisfy `e·ρ·a = a·ρ·e = a`; it is
    /// verified on the basis and rejected if wrong.
    pub fn new(
        product: Vec<Vec<Vec<GScalar>>>,
        rho: Vec<GScalar>,
        identity: Option<Vec<GScalar>>,
    ) -> Result<Self, CuntzError> {
        let dim = product.len();
        let shape_ok = rho.len() == dim
            && product.iter().all(|row| {
                row.len() == dim && row.iter().all(|cell| cell.len() == dim)
            })
            && identity.as_ref().map_or(true, |e| e.len() == dim);
        if !shape_ok {
            return Err(CuntzError::ShapeMismatch { dim });
        }
        let model = AlgebraModel { dim, product, rho, identity: None };
        if let Some(e) = identity {
            for i in 0..dim {
                let mut basis = vec![GScalar::zero(); dim];
                basis[i] = GScalar::one();
                if model.homotope_product(&e, &basis) != basis
                    || model.homotope_product(&basis, &e) != basis
                {
                    return Err(CuntzError::NotHomotopeIdentity { index: i });
                }
            }
            return Ok(AlgebraModel { identity: Some(e), ..model });
        }
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> &[GScalar] {
        &self.rho
    }

    pub fn identity(&self) -> Option<&[GScalar]> {
        self.identity.as_deref()
    }

    /// The window indexing the model's basis.
    pub fn window(&self) -> IndexWindow {
        IndexWindow::integers(0, self.dim as i64 - 1)
    }

    /// Bilinear product in coordinates.
    pub fn multiply(&self, x: &[GScalar], y: &[GScalar]) -> Vec<GScalar> {
        let mut out = vec![GScalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, out_k) in out.iter_mut().enumerate() {
                    let t = &c * &self.product[i][j][k];
                    *out_k = &*out_k + &t;
                }
            }
        }
        out
    }

    /// The homotope product `a ∘ρ b = a·ρ·b`.
    pub fn homotope_product(&self, a: &[GScalar], b: &[GScalar]) -> Vec<GScalar> {
        self.multiply(&self.multiply(a, &self.rho), b)
    }

    /// Row-convention matrix of left multiplication `l_a(x) = a·x`:
    /// entry `(α, β)` is the `β`-coordinate of `a·b_α`.
    pub fn left_mult_matrix(&self, a: &[GScalar]) -> PairingMatrix {
        let window = self.window();
        let mut entries = BTreeMap::new();
        for alpha in 0..self.dim {
            let mut basis = vec![GScalar::zero(); self.dim];
            basis[alpha] = GScalar::one();
            let image = self.multiply(a, &basis);
            for (beta, v) in image.into_iter().enumerate() {
                if !v.is_zero() {
                    entries.insert(
                        (HalfIndex::from_int(alpha as i64), HalfIndex::from_int(beta as i64)),
                        v,
                    );
                }
            }
        }
        PairingMatrix::new(window, Extent::Entire, Bandwidth::Full, entries)
            .expect("entries indexed by the model window")
    }

    /// The twist operator of the homotope: `L = l_ρ`.
    pub fn l_matrix(&self) -> PairingMatrix {
        self.left_mult_matrix(&self.rho)
    }
}

/// The full matrix algebra on `n×n` rational matrices, with basis
/// `E_{ij}` flattened as `i·n + j` and homotope weight `ρ`. The homotope
/// identity is `ρ⁻¹` when `ρ` is invertible.
pub fn matrix_algebra(n: usize, rho: &GMatrix) -> AlgebraModel {
    let dim = n * n;
    let flat = |i: usize, j: usize| i * n + j;
    let mut product = vec![vec![vec![GScalar::zero(); dim]; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if j == k {
                        product[flat(i, j)][flat(k, l)][flat(i, l)] = GScalar::one();
                    }
                }
            }
        }
    }
    let rho_coords: Vec<GScalar> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| rho[(i, j)].clone()).collect();
    let identity = rho.inverse().map(|inv| {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| inv[(i, j)].clone())
            .collect()
    });
    AlgebraModel::new(product, rho_coords, identity).expect("inverse is the homotope identity")
}

/// The embedding `a ↦ D(l_a)` of the homotope into normal-form elements,
/// with `L = l_ρ`.
pub fn homotope_embed(model: &AlgebraModel, a: &[GScalar]) -> CuntzElement {
    cuntz_d(&model.left_mult_matrix(a), &model.l_matrix())
        .expect("model matrices share the window")
}

/// Verifies the anti-homomorphism law `D(l_a)D(l_b) = D(l_{a∘ρb ... }`,
/// precisely: the product equals the embedding of the *reversed* homotope
/// product `b·ρ·a`, against an independent coordinate-product oracle.
pub fn homotope_check(model: &AlgebraModel, a: &[GScalar], b: &[GScalar]) -> CheckResult {
    let lhs = homotope_embed(model, a).multiply(&homotope_embed(model, b));
    let rhs = homotope_embed(model, &model.homotope_product(b, a));
    exact_check("homotope-antihomomorphism", &lhs, &rhs)
}

/// The `q`-commutator conservation law:
/// `D(l_a)D(l_b) − q·D(l_b)D(l_a) = D(l_{b·ρ·a − q·a·ρ·b})`.
pub fn q_commutator_check(
    model: &AlgebraModel,
    a: &[GScalar],
    b: &[GScalar],
    q: &GScalar,
) -> CheckResult {
    let da = homotope_embed(model, a);
    let db = homotope_embed(model, b);
    let lhs = &da.multiply(&db) - &db.multiply(&da).scale(q);
    let bra = model.homotope_product(b, a);
    let arb = model.homotope_product(a, b);
    let combo: Vec<GScalar> =
        bra.iter().zip(&arb).map(|(x, y)| x - &(q * y)).collect();
    let rhs = homotope_embed(model, &combo);
    exact_check("homotope-q-commutator", &lhs, &rhs)
}

/// Basis of the kernel of `a ↦ D(l_a)` in model coordinates, computed by
/// flattening the normal-form coefficients of each basis image into a
/// linear system.
pub fn embed_kernel(model: &AlgebraModel) -> Vec<Vec<GScalar>> {
    let dim = model.dim();
    let images: Vec<CuntzElement> = (0..dim)
        .map(|i| {
            let mut basis = vec![GScalar::zero(); dim];
            basis[i] = GScalar::one();
            homotope_embed(model, &basis)
        })
        .collect();
    let mut words: Vec<CuntzWord> = Vec::new();
    for e in &images {
        for (w, _) in e.terms() {
            if !words.contains(w) {
                words.push(w.clone());
            }
        }
    }
    // Coefficient matrix of the linear map over the observed word support;
    // solve vᵀ·coeff = 0.
    let coeff = GMatrix::from_fn(dim, words.len().max(1), |i, j| {
        words.get(j).map(|w| images[i].coefficient(w)).unwrap_or_else(GScalar::zero)
    });
    coeff.transpose().nullspace()
}

/// Pass iff `D(l_a) = 0` forces `a = 0`; on failure the witness reports
/// the kernel dimension and a sample kernel element.
pub fn injectivity_check(model: &AlgebraModel) -> CheckResult {
    let kernel = embed_kernel(model);
    let name = "homotope-embedding-injective";
    if kernel.is_empty() {
        CheckResult::pass(name)
    } else {
        let sample = kernel[0]
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        CheckResult::fail(
            name,
            format!("kernel has dimension {}; sample coordinates ({sample})", kernel.len()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jsmap::d_map;
    use proptest::prelude::*;

    fn hi(n: i64) -> HalfIndex {
        HalfIndex::from_int(n)
    }

    fn g(n: i64) -> GScalar {
        GScalar::from_int(n)
    }

    fn word(left: &[i64], right: &[i64]) -> CuntzWord {
        CuntzWord::new(
            left.iter().map(|&i| hi(i)).collect(),
            right.iter().map(|&i| hi(i)).collect(),
        )
    }

    fn elem(left: &[i64], right: &[i64]) -> CuntzElement {
        CuntzElement::word(word(left, right), GScalar::one())
    }

    #[test]
    fn generator_relations() {
        // s_1* s_1 = 1, s_1* s_2 = 0.
        assert_eq!(
            reduce(&[FreeGen::Star(hi(1)), FreeGen::Gen(hi(1))]),
            CuntzElement::one()
        );
        assert_eq!(
            reduce(&[FreeGen::Star(hi(1)), FreeGen::Gen(hi(2))]),
            CuntzElement::zero()
        );
        // (s_1 s_2*)(s_2 s_3*) = s_1 s_3*.
        assert_eq!(elem(&[1], &[2]).multiply(&elem(&[2], &[3])), elem(&[1], &[3]));
        // Deeper boundary: (s_1 s_3* s_2*)(s_2 s_3 s_4 s_5*) = s_1 s_4 s_5*.
        let a = elem(&[1], &[2, 3]);
        let b = elem(&[2, 3, 4], &[5]);
        assert_eq!(a.multiply(&b), elem(&[1, 4], &[5]));
        // Mismatch annihilates.
        assert_eq!(elem(&[], &[1, 2]).multiply(&elem(&[1, 3], &[])), CuntzElement::zero());
        // Isometry: s_i* s_i = 1 but s_i s_i* stays irreducible.
        let proj = elem(&[1], &[]).multiply(&elem(&[], &[1]));
        assert_eq!(proj, elem(&[1], &[1]));
    }

    #[test]
    fn star_operation() {
        let w = word(&[1, 3], &[2]);
        assert_eq!(w.star(), word(&[2], &[1, 3]));
        assert_eq!(w.star().star(), w);
        let a = &elem(&[1], &[2]) + &elem(&[3], &[]).scale(&GScalar::ratio(1, 2).unwrap());
        let b = elem(&[2], &[4]);
        // (ab)* = b* a*.
        assert_eq!(a.multiply(&b).star(), b.star().multiply(&a.star()));
        // Complex coefficients conjugate.
        let i_coeff = GScalar::new(crate::scalar::Rational::zero(), crate::scalar::Rational::from_int(1));
        let c = CuntzElement::word(word(&[1], &[]), i_coeff.clone());
        assert_eq!(c.star().coefficient(&word(&[], &[1])), -i_coeff);
    }

    #[test]
    fn canonical_text_round_trip() {
        let e = &(&elem(&[1, 3], &[2]).scale(&GScalar::ratio(1, 2).unwrap())
            + &elem(&[], &[4]))
            + &CuntzElement::scalar(g(-3));
        let text = e.to_string();
        assert_eq!(text, "-3 + (1/2) s[1]s[3] s*[2] + s*[4]");
        let back: CuntzElement = text.parse().unwrap();
        assert_eq!(back, e);
        // Multi-star blocks print in operator order and round-trip.
        let deep = elem(&[2], &[1, 5]);
        assert_eq!(deep.to_string(), "s[2] s*[5]s*[1]");
        assert_eq!(deep.to_string().parse::<CuntzElement>().unwrap(), deep);
        assert_eq!("0".parse::<CuntzElement>().unwrap(), CuntzElement::zero());
    }

    #[test]
    fn d_map_examples() {
        let w = IndexWindow::integers(1, 3);
        let id = PairingMatrix::identity(w.clone(), Extent::Entire);
        let e12 =
            PairingMatrix::single(w.clone(), Extent::Entire, hi(1), hi(2), GScalar::one())
                .unwrap();
        // L = identity: D(E_{12}) = s_1 s_2*.
        assert_eq!(cuntz_d(&e12, &id).unwrap(), elem(&[1], &[2]));
        assert_eq!(
            cuntz_d(&PairingMatrix::zero(w.clone(), Extent::Entire), &id).unwrap(),
            CuntzElement::zero()
        );
        // Nontrivial L twists the coefficients: D(E_{12}) with L = 2I.
        let twice = id.scale(&g(2));
        assert_eq!(cuntz_d(&e12, &twice).unwrap(), elem(&[1], &[2]).scale(&g(2)));
    }

    #[test]
    fn four_relations_on_explicit_matrices() {
        let w = IndexWindow::integers(1, 4);
        let mut ea = BTreeMap::new();
        ea.insert((hi(1), hi(2)), g(3));
        ea.insert((hi(2), hi(4)), GScalar::ratio(-1, 2).unwrap());
        ea.insert((hi(3), hi(1)), g(2));
        let a = PairingMatrix::new(w.clone(), Extent::Entire, Bandwidth::Full, ea).unwrap();
        let mut eb = BTreeMap::new();
        eb.insert((hi(2), hi(1)), g(1));
        eb.insert((hi(4), hi(4)), g(5));
        let b = PairingMatrix::new(w.clone(), Extent::Entire, Bandwidth::Full, eb).unwrap();
        let mut el = BTreeMap::new();
        el.insert((hi(1), hi(1)), g(1));
        el.insert((hi(2), hi(3)), g(2));
        el.insert((hi(3), hi(2)), g(-1));
        el.insert((hi(4), hi(4)), g(1));
        let l = PairingMatrix::new(w.clone(), Extent::Entire, Bandwidth::Full, el).unwrap();
        let h = VectorCoeffs::from_pairs(w.clone(), [(hi(1), g(2)), (hi(4), g(-3))]).unwrap();
        let gvec = VectorCoeffs::from_pairs(w.clone(), [(hi(2), g(7))]).unwrap();
        let f = VectorCoeffs::from_pairs(w.clone(), [(hi(3), g(1)), (hi(1), g(4))]).unwrap();
        let checks = verify_cuntz_relations(&a, &b, &l, &h, &gvec, &f).unwrap();
        assert_eq!(checks.len(), 4);
        for c in &checks {
            assert!(c.status.is_pass(), "{c:?}");
        }
    }

    #[test]
    fn biorthogonal_case_matches_first_order_maps() {
        // With L = identity the coefficient matrix of the normal-form
        // commutator equals the matrix whose first-order realization is
        // the Weyl-algebra commutator.
        let w = IndexWindow::integers(1, 3);
        let id = PairingMatrix::identity(w.clone(), Extent::Entire);
        let mut ea = BTreeMap::new();
        ea.insert((hi(1), hi(2)), g(2));
        ea.insert((hi(3), hi(3)), g(1));
        let a = PairingMatrix::new(w.clone(), Extent::Entire, Bandwidth::Full, ea).unwrap();
        let mut eb = BTreeMap::new();
        eb.insert((hi(2), hi(1)), g(5));
        eb.insert((hi(2), hi(3)), g(-1));
        let b = PairingMatrix::new(w.clone(), Extent::Entire, Bandwidth::Full, eb).unwrap();
        let da = cuntz_d(&a, &id).unwrap();
        let db = cuntz_d(&b, &id).unwrap();
        let comm = &da.multiply(&db) - &db.multiply(&da);
        let c = coefficient_matrix(&comm, &w).unwrap();
        assert_eq!(d_map(&c), d_map(&a).commutator(&d_map(&b)).unwrap());
    }

    #[test]
    fn homotope_matrix_algebra_examples() {
        // ρ = identity: plain anti-homomorphism D(l_a)D(l_b) = D(l_{ba}),
        // against the dense matrix-product oracle.
        let n = 2;
        let id = GMatrix::identity(n);
        let model = matrix_algebra(n, &id);
        assert_eq!(model.dim(), 4);
        assert!(model.identity().is_some());
        let a = vec![g(1), g(2), g(-1), g(3)]; // [[1,2],[-1,3]]
        let b = vec![g(0), g(1), g(5), g(-2)]; // [[0,1],[5,-2]]
        assert!(homotope_check(&model, &a, &b).status.is_pass());
        // Independent oracle: coordinates of b·a from GMatrix.
        let ga = GMatrix::from_int_rows(&[&[1, 2], &[-1, 3]]);
        let gb = GMatrix::from_int_rows(&[&[0, 1], &[5, -2]]);
        let ba = &gb * &ga;
        let ba_coords: Vec<GScalar> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| ba[(i, j)].clone()).collect();
        assert_eq!(model.homotope_product(&b, &a), ba_coords);
        // a = 0 embeds to 0.
        assert!(homotope_embed(&model, &vec![GScalar::zero(); 4]).is_zero());
        // q-commutators for the four stated weights.
        for q in [g(-1), g(0), g(1), GScalar::ratio(1, 2).unwrap()] {
            assert!(q_commutator_check(&model, &a, &b, &q).status.is_pass(), "q = {q}");
        }
    }

    #[test]
    fn homotope_with_nontrivial_weight() {
        let rho = GMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        let model = matrix_algebra(2, &rho);
        // The homotope identity is ρ⁻¹ and is validated on construction.
        let e = model.identity().expect("invertible weight").to_vec();
        let a = vec![g(2), g(-1), g(4), g(1)];
        assert_eq!(model.homotope_product(&e, &a), a);
        assert_eq!(model.homotope_product(&a, &e), a);
        assert!(homotope_check(&model, &a, &vec![g(1), g(0), g(7), g(-2)]).status.is_pass());
        assert!(injectivity_check(&model).status.is_pass());
        assert!(embed_kernel(&model).is_empty());
    }

    #[test]
    fn degenerate_weights_have_kernels() {
        // ρ = 0: everything embeds to zero; the kernel is the whole model.
        let zero = GMatrix::zeros(2, 2);
        let model = matrix_algebra(2, &zero);
        assert!(model.identity().is_none());
        let kernel = embed_kernel(&model);
        assert_eq!(kernel.len(), 4);
        assert!(injectivity_check(&model).status.is_fail());
        // Rank-one ρ = E_{11}: kernel is {a : ρ·a = 0} = span{E_{21}, E_{22}}.
        let e11 = GMatrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        let model = matrix_algebra(2, &e11);
        let kernel = embed_kernel(&model);
        assert_eq!(kernel.len(), 2);
        let kernel_rows = GMatrix::from_fn(2, 4, |i, j| kernel[i][j].clone());
        // E_{21} has flat coordinates (0,0,1,0); E_{22} is (0,0,0,1).
        assert!(kernel_rows.row_span_contains(&[g(0), g(0), g(1), g(0)]));
        assert!(kernel_rows.row_span_contains(&[g(0), g(0), g(0), g(1)]));
        // Basis elements outside the kernel stay nonzero.
        assert!(!homotope_embed(&model, &[g(1), g(0), g(0), g(0)]).is_zero());
    }

    fn arb_element() -> impl Strategy<Value = CuntzElement> {
        proptest::collection::vec(
            (
                proptest::collection::vec(1i64..=4, 0..3),
                proptest::collection::vec(1i64..=4, 0..3),
                -3i64..=3,
            ),
            0..5,
        )
        .prop_map(|terms| {
            CuntzElement::from_terms(
                terms.into_iter().map(|(l, r, c)| (word(&l, &r), g(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        }

        #[test]
        fn reduction_is_confluent(
            gens in proptest::collection::vec(
                (proptest::bool::ANY, 1i64..=3),
                0..8,
            ),
            split in 0usize..8,
        ) {
            let factors: Vec<FreeGen> = gens
                .iter()
                .map(|(star, i)| if *star { FreeGen::Star(hi(*i)) } else { FreeGen::Gen(hi(*i)) })
                .collect();
            let whole = reduce(&factors);
            let cut = split.min(factors.len());
            let pieces = reduce(&factors[..cut]).multiply(&reduce(&factors[cut..]));
            prop_assert_eq!(whole, pieces);
        }

        #[test]
        fn star_is_an_antihomomorphism(a in arb_element(), b in arb_element()) {
            prop_assert_eq!(a.multiply(&b).star(), b.star().multiply(&a.star()));
            prop_assert_eq!(a.star().star(), a);
        }

        #[test]
        fn text_form_round_trips(a in arb_element()) {
            let text = a.to_string();
            let back: CuntzElement = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
