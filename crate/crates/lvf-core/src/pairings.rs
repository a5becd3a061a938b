//! Coefficient matrices `⟨Ae_α, f_β⟩` of operators against a biorthogonal
//! system, truncated to an index window.
//!
//! The convention throughout is row-indexed by the source basis vector:
//! entry `(α, β)` is the coefficient of `e_β` in `Ae_α`. Under this
//! convention the matrix of a composition `S∘T` is `mat_mul(M_T, M_S)`.
//!
//! Providers build the matrices of the concrete operators exercised by the
//! verification suites (sine-basis differential operators, Laurent monomial
//! fields, Fourier circle fields, the intermediate-series action, and
//! finite map-induced substitutions), each with exact entries and a
//! declared bandwidth that is validated on construction. A composite
//! Simpson quadrature oracle provides the independent numeric route for
//! the analytic families.

use crate::index::{HalfIndex, IndexWindow};
use crate::linalg::GMatrix;
use crate::numeric::{self, FMatrix};
use crate::scalar::{GScalar, PiScalar, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// Default node count for the quadrature oracle.
pub const DEFAULT_QUADRATURE_NODES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairingError {
    #[error("entry ({row}, {col}) lies outside the window {window}")]
    IndexOutsideWindow { row: HalfIndex, col: HalfIndex, window: String },
    #[error("nonzero entry ({row}, {col}) violates declared bandwidth {bandwidth}")]
    BandwidthViolated { row: HalfIndex, col: HalfIndex, bandwidth: u64 },
    #[error("windows differ: {left} vs {right}")]
    WindowMismatch { left: String, right: String },
    #[error("window {window} does not carry the index shift {shift}")]
    ShiftMismatch { window: String, shift: Rational },
    #[error("index shift must be 0 or 1/2, got {shift}")]
    InvalidShift { shift: Rational },
    #[error("window {window} must consist of positive integers")]
    NotPositiveIntegers { window: String },
    #[error("a full-bandwidth truncation admits no safe sub-window")]
    FullTruncation,
}

/// Declared band structure: entries vanish at offsets beyond the band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bandwidth {
    Banded(u64),
    Full,
}

impl Bandwidth {
    fn admits(&self, offset: i64) -> bool {
        match self {
            Bandwidth::Banded(b) => offset.unsigned_abs() <= *b,
            Bandwidth::Full => true,
        }
    }

    /// Band of a sum: the wider of the two.
    pub fn join(&self, other: &Bandwidth) -> Bandwidth {
        match (self, other) {
            (Bandwidth::Banded(a), Bandwidth::Banded(b)) => Bandwidth::Banded(*a.max(b)),
            _ => Bandwidth::Full,
        }
    }

    /// Band of a product: offsets add.
    pub fn compose(&self, other: &Bandwidth) -> Bandwidth {
        match (self, other) {
            (Bandwidth::Banded(a), Bandwidth::Banded(b)) => Bandwidth::Banded(a + b),
            _ => Bandwidth::Full,
        }
    }
}

impl fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bandwidth::Banded(b) => write!(f, "banded({b})"),
            Bandwidth::Full => write!(f, "full"),
        }
    }
}

/// Whether the window is the whole model space or a truncation of a larger
/// (possibly infinite) one. Identities involving truncated matrices are
/// only asserted on a safe sub-window; entire matrices need no margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    Entire,
    Truncated,
}

impl Extent {
    fn both_entire(a: Extent, b: Extent) -> Extent {
        if a == Extent::Entire && b == Extent::Entire {
            Extent::Entire
        } else {
            Extent::Truncated
        }
    }
}

/// Sparse window-truncated coefficient matrix with exact entries.
#[derive(Debug, Clone)]
pub struct PairingMatrix {
    window: IndexWindow,
    extent: Extent,
    bandwidth: Bandwidth,
    entries: BTreeMap<(HalfIndex, HalfIndex), GScalar>,
}

/// Equality is algebraic: same window, same entries. The declared
/// bandwidth and extent are bookkeeping bounds, not part of the value.
impl PartialEq for PairingMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.entries == other.entries
    }
}

impl Eq for PairingMatrix {}

impl PairingMatrix {
    pub fn new(
        window: IndexWindow,
        extent: Extent,
        bandwidth: Bandwidth,
        entries: BTreeMap<(HalfIndex, HalfIndex), GScalar>,
    ) -> Result<Self, PairingError> {
        let mut clean = BTreeMap::new();
        for ((r, c), v) in entries {
            if v.is_zero() {
                continue;
            }
            if !window.contains(r) || !window.contains(c) {
                return Err(PairingError::IndexOutsideWindow {
                    row: r,
                    col: c,
                    window: window.to_string(),
                });
            }
            if !bandwidth.admits(r.offset_to(c)) {
                let b = match bandwidth {
                    Bandwidth::Banded(b) => b,
                    Bandwidth::Full => unreachable!("full band admits everything"),
                };
                return Err(PairingError::BandwidthViolated { row: r, col: c, bandwidth: b });
            }
            clean.insert((r, c), v);
        }
        Ok(PairingMatrix { window, extent, bandwidth, entries: clean })
    }

    pub fn from_fn(
        window: IndexWindow,
        extent: Extent,
        bandwidth: Bandwidth,
        f: impl Fn(HalfIndex, HalfIndex) -> GScalar,
    ) -> Result<Self, PairingError> {
        let mut entries = BTreeMap::new();
        for r in window.iter() {
            for c in window.iter() {
                let v = f(r, c);
                if !v.is_zero() {
                    entries.insert((r, c), v);
                }
            }
        }
        PairingMatrix::new(window, extent, bandwidth, entries)
    }

    pub fn zero(window: IndexWindow, extent: Extent) -> Self {
        PairingMatrix { window, extent, bandwidth: Bandwidth::Banded(0), entries: BTreeMap::new() }
    }

    pub fn identity(window: IndexWindow, extent: Extent) -> Self {
        let entries = window.iter().map(|i| ((i, i), GScalar::one())).collect();
        PairingMatrix { window, extent, bandwidth: Bandwidth::Banded(0), entries }
    }

    /// Single-entry matrix `⟨Ae_row, f_col⟩ = value`.
    pub fn single(
        window: IndexWindow,
        extent: Extent,
        row: HalfIndex,
        col: HalfIndex,
        value: GScalar,
    ) -> Result<Self, PairingError> {
        let band = Bandwidth::Banded(row.offset_to(col).unsigned_abs());
        let mut entries = BTreeMap::new();
        entries.insert((row, col), value);
        PairingMatrix::new(window, extent, band, entries)
    }

    pub fn window(&self) -> &IndexWindow {
        &self.window
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.bandwidth
    }

    pub fn entry(&self, row: HalfIndex, col: HalfIndex) -> GScalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(GScalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (HalfIndex, HalfIndex, &GScalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Safe-window margin this matrix contributes to an identity check:
    /// zero if the window is the whole model space, the band size for a
    /// banded truncation, and an error for a full truncation.
    pub fn margin(&self) -> Result<u64, PairingError> {
        match (self.extent, self.bandwidth) {
            (Extent::Entire, _) => Ok(0),
            (Extent::Truncated, Bandwidth::Banded(b)) => Ok(b),
            (Extent::Truncated, Bandwidth::Full) => Err(PairingError::FullTruncation),
        }
    }

    fn check_same_window(&self, other: &PairingMatrix) -> Result<(), PairingError> {
        if self.window != other.window {
            return Err(PairingError::WindowMismatch {
                left: self.window.to_string(),
                right: other.window.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PairingMatrix) -> Result<PairingMatrix, PairingError> {
        self.check_same_window(other)?;
        let mut entries = self.entries.clone();
        for (&k, v) in &other.entries {
            let sum = &entries.get(&k).cloned().unwrap_or_else(GScalar::zero) + v;
            if sum.is_zero() {
                entries.remove(&k);
            } else {
                entries.insert(k, sum);
            }
        }
        Ok(PairingMatrix {
            window: self.window.clone(),
            extent: Extent::both_entire(self.extent, other.extent),
            bandwidth: self.bandwidth.join(&other.bandwidth),
            entries,
        })
    }

    pub fn sub(&self, other: &PairingMatrix) -> Result<PairingMatrix, PairingError> {
        self.add(&other.scale(&-GScalar::one()))
    }

    pub fn scale(&self, s: &GScalar) -> PairingMatrix {
        if s.is_zero() {
            return PairingMatrix::zero(self.window.clone(), self.extent);
        }
        PairingMatrix {
            window: self.window.clone(),
            extent: self.extent,
            bandwidth: self.bandwidth,
            entries: self.entries.iter().map(|(&k, v)| (k, v * s)).collect(),
        }
    }

    pub fn transpose(&self) -> PairingMatrix {
        PairingMatrix {
            window: self.window.clone(),
            extent: self.extent,
            bandwidth: self.bandwidth,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    /// Entry-wise matrix product `(PQ)[α][γ] = Σ_β P[α][β] Q[β][γ]`.
    ///
    /// Under the row convention this is the matrix of the composition
    /// `T∘S` when `P = M_S` and `Q = M_T`.
    pub fn mat_mul(&self, other: &PairingMatrix) -> Result<PairingMatrix, PairingError> {
        self.check_same_window(other)?;
        let mut entries: BTreeMap<(HalfIndex, HalfIndex), GScalar> = BTreeMap::new();
        let lo = other.window.lo();
        let hi = other.window.hi();
        for (&(r, mid), a) in &self.entries {
            for (&(_, c), b) in other.entries.range((mid, lo)..=(mid, hi)) {
                let prod = a * b;
                if prod.is_zero() {
                    continue;
                }
                let slot = entries.entry((r, c)).or_insert_with(GScalar::zero);
                *slot = &*slot + &prod;
            }
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(PairingMatrix {
            window: self.window.clone(),
            extent: Extent::both_entire(self.extent, other.extent),
            bandwidth: self.bandwidth.compose(&other.bandwidth),
            entries,
        })
    }

    /// `(Mv)[α] = Σ_β M[α][β] v[β]`.
    pub fn mat_vec(&self, v: &VectorCoeffs) -> VectorCoeffs {
        let mut out = VectorCoeffs::zero(self.window.clone());
        for (&(r, c), a) in &self.entries {
            let x = v.entry(c);
            if !x.is_zero() {
                out.add_to(r, &(a * &x));
            }
        }
        out
    }

    /// `(vM)[β] = Σ_α v[α] M[α][β]`.
    pub fn vec_mul(&self, v: &VectorCoeffs) -> VectorCoeffs {
        let mut out = VectorCoeffs::zero(self.window.clone());
        for (&(r, c), a) in &self.entries {
            let x = v.entry(r);
            if !x.is_zero() {
                out.add_to(c, &(&x * a));
            }
        }
        out
    }

    /// Keeps entries with both indices in `w` (which must be a sub-window).
    pub fn restrict(&self, w: &IndexWindow) -> PairingMatrix {
        let extent = if *w == self.window { self.extent } else { Extent::Truncated };
        PairingMatrix {
            window: w.clone(),
            extent,
            bandwidth: self.bandwidth,
            entries: self
                .entries
                .iter()
                .filter(|(&(r, c), _)| w.contains(r) && w.contains(c))
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
        }
    }

    /// Dense copy in window order.
    pub fn to_gmatrix(&self) -> GMatrix {
        let n = self.window.len();
        let mut g = GMatrix::zeros(n, n);
        for (&(r, c), v) in &self.entries {
            let i = self.window.position(r).expect("entry in window");
            let j = self.window.position(c).expect("entry in window");
            g[(i, j)] = v.clone();
        }
        g
    }

    /// Reads a dense matrix back into sparse form; the bandwidth is the
    /// tightest band containing every nonzero entry.
    pub fn from_gmatrix(
        window: IndexWindow,
        extent: Extent,
        g: &GMatrix,
    ) -> Result<Self, PairingError> {
        assert_eq!(g.rows(), window.len(), "matrix size must match window");
        assert_eq!(g.cols(), window.len(), "matrix size must match window");
        let mut entries = BTreeMap::new();
        let mut band = 0u64;
        for (i, r) in window.iter().enumerate() {
            for (j, c) in window.iter().enumerate() {
                let v = g[(i, j)].clone();
                if !v.is_zero() {
                    band = band.max(r.offset_to(c).unsigned_abs());
                    entries.insert((r, c), v);
                }
            }
        }
        PairingMatrix::new(window, extent, Bandwidth::Banded(band), entries)
    }
}

impl fmt::Display for PairingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix on {} [{}]:", self.window, self.bandwidth)?;
        for (&(r, c), v) in &self.entries {
            write!(f, " ({r},{c})={v}")?;
        }
        Ok(())
    }
}

/// Sparse coefficient vector `α → ⟨h, f_α⟩` on a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorCoeffs {
    window: IndexWindow,
    entries: BTreeMap<HalfIndex, GScalar>,
}

impl VectorCoeffs {
    pub fn zero(window: IndexWindow) -> Self {
        VectorCoeffs { window, entries: BTreeMap::new() }
    }

    /// The basis coefficient vector `e_idx`.
    pub fn unit(window: IndexWindow, idx: HalfIndex) -> Self {
        assert!(window.contains(idx), "unit index {idx} outside window {window}");
        let mut entries = BTreeMap::new();
        entries.insert(idx, GScalar::one());
        VectorCoeffs { window, entries }
    }

    pub fn from_pairs(
        window: IndexWindow,
        pairs: impl IntoIterator<Item = (HalfIndex, GScalar)>,
    ) -> Result<Self, PairingError> {
        let mut entries = BTreeMap::new();
        for (i, v) in pairs {
            if v.is_zero() {
                continue;
            }
            if !window.contains(i) {
                return Err(PairingError::IndexOutsideWindow {
                    row: i,
                    col: i,
                    window: window.to_string(),
                });
            }
            let slot = entries.entry(i).or_insert_with(GScalar::zero);
            *slot = &*slot + &v;
        }
        entries.retain(|_, v: &mut GScalar| !v.is_zero());
        Ok(VectorCoeffs { window, entries })
    }

    pub fn window(&self) -> &IndexWindow {
        &self.window
    }

    pub fn entry(&self, idx: HalfIndex) -> GScalar {
        self.entries.get(&idx).cloned().unwrap_or_else(GScalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (HalfIndex, &GScalar)> {
        self.entries.iter().map(|(&i, v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<HalfIndex> {
        self.entries.keys().copied().collect()
    }

    pub fn scale(&self, s: &GScalar) -> VectorCoeffs {
        if s.is_zero() {
            return VectorCoeffs::zero(self.window.clone());
        }
        VectorCoeffs {
            window: self.window.clone(),
            entries: self.entries.iter().map(|(&i, v)| (i, v * s)).collect(),
        }
    }

    pub fn add(&self, other: &VectorCoeffs) -> VectorCoeffs {
        let mut out = self.clone();
        for (&i, v) in &other.entries {
            out.add_to(i, v);
        }
        out
    }

    pub fn sub(&self, other: &VectorCoeffs) -> VectorCoeffs {
        self.add(&other.scale(&-GScalar::one()))
    }

    fn add_to(&mut self, idx: HalfIndex, v: &GScalar) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry(idx).or_insert_with(GScalar::zero);
        *slot = &*slot + v;
        if slot.is_zero() {
            self.entries.remove(&idx);
        }
    }
}

/// Window-truncated matrix with exact `q·π^k` entries (k ∈ {0,1}), used
/// for the quadratic-field example whose pairings carry a π factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiMatrix {
    window: IndexWindow,
    entries: BTreeMap<(HalfIndex, HalfIndex), PiScalar>,
}

impl PiMatrix {
    pub fn window(&self) -> &IndexWindow {
        &self.window
    }

    pub fn entry(&self, row: HalfIndex, col: HalfIndex) -> PiScalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(PiScalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (HalfIndex, HalfIndex, &PiScalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Adds `q·π` to every diagonal entry.
    pub fn add_pi_diagonal(&self, q: &Rational) -> PiMatrix {
        let mut out = self.clone();
        let add = PiScalar::pi_multiple(q.clone());
        for i in out.window.clone().iter() {
            let cur = out.entry(i, i);
            let sum = cur.checked_add(&add).expect("matching π grade on the diagonal");
            if sum.is_zero() {
                out.entries.remove(&(i, i));
            } else {
                out.entries.insert((i, i), sum);
            }
        }
        out
    }

    /// Exact antisymmetry: `M[α][β] = −M[β][α]` for all window pairs.
    pub fn is_antisymmetric(&self) -> bool {
        for (&(r, c), v) in &self.entries {
            if self.entry(c, r) != v.neg() {
                return false;
            }
        }
        true
    }

    /// Float copy in window order.
    pub fn to_fmatrix(&self) -> FMatrix {
        let n = self.window.len();
        let mut m = FMatrix::zeros(n);
        for (&(r, c), v) in &self.entries {
            let i = self.window.position(r).expect("entry in window");
            let j = self.window.position(c).expect("entry in window");
            m.set(i, j, v.to_f64());
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Providers.

fn positive_int_window(window: &IndexWindow) -> Result<(), PairingError> {
    let ok = window.parity() == 0 && window.lo().as_int().map(|v| v >= 1).unwrap_or(false);
    if ok {
        Ok(())
    } else {
        Err(PairingError::NotPositiveIntegers { window: window.to_string() })
    }
}

fn delta(a: i64, b: i64) -> i64 {
    i64::from(a == b)
}

/// Exact pairing `(e_n·(e_m)', e_k)` in the sine basis on the circle:
/// `(m/2)(δ_{n,k−m} + δ_{n,k+m} − δ_{n,m−k})` for `n, m, k ≥ 1`.
pub fn sine_derivative_triple(n: u64, m: u64, k: u64) -> Rational {
    assert!(n >= 1 && m >= 1 && k >= 1, "sine indices start at 1");
    let (n, m, k) = (n as i64, m as i64, k as i64);
    let deltas = delta(n, k - m) + delta(n, k + m) - delta(n, m - k);
    Rational::new(m * deltas, 2).expect("nonzero denominator")
}

/// Matrix of `A = λ·d²/dx² + (1−λ)·u(x)·d/dx` on the sine basis, where
/// `u = Σ_j c_j sin(jx)`: entry `(m,k) = −λm²δ_{mk} + (m(1−λ)/2)(c_{m+k} +
/// c_{k−m} − c_{m−k})` with the convention `c_j = 0` for `j ≤ 0`.
pub fn sine_operator_matrix(
    lambda: &Rational,
    c: &VectorCoeffs,
    window: &IndexWindow,
) -> Result<PairingMatrix, PairingError> {
    positive_int_window(window)?;
    let c_at = |j: i64| -> GScalar {
        if j >= 1 {
            let idx = HalfIndex::from_int(j);
            if c.window().contains(idx) {
                return c.entry(idx);
            }
        }
        GScalar::zero()
    };
    let band = c
        .entries()
        .map(|(i, _)| i.as_int().expect("integer support").unsigned_abs())
        .max()
        .unwrap_or(0);
    let lam = GScalar::from_rational(lambda.clone());
    let one_minus = &GScalar::one() - &lam;
    PairingMatrix::from_fn(window.clone(), Extent::Truncated, Bandwidth::Banded(band), |mi, ki| {
        let m = mi.as_int().expect("integer window");
        let k = ki.as_int().expect("integer window");
        let mut v = GScalar::zero();
        if m == k {
            v = &v - &(&lam * &GScalar::from_int(m * m));
        }
        let combo = &(&c_at(m + k) + &c_at(k - m)) - &c_at(m - k);
        if !combo.is_zero() {
            let half_m =
                GScalar::from_rational(Rational::new(m, 2).expect("nonzero denominator"));
            v = &v + &(&(&half_m * &one_minus) * &combo);
        }
        v
    })
}

/// Matrix of `x²·d/dx` on the sine basis over the full period, with exact
/// `π`-graded entries: `4πnm/(n²−m²)` off the diagonal and `−π` on it.
pub fn x2dx_matrix(window: &IndexWindow) -> Result<PiMatrix, PairingError> {
    positive_int_window(window)?;
    let mut entries = BTreeMap::new();
    for r in window.iter() {
        let n = r.as_int().expect("integer window");
        for c in window.iter() {
            let m = c.as_int().expect("integer window");
            let v = if n == m {
                PiScalar::pi_multiple(Rational::from_int(-1))
            } else {
                PiScalar::pi_multiple(
                    Rational::new(4 * n * m, n * n - m * m).expect("n ≠ m"),
                )
            };
            entries.insert((r, c), v);
        }
    }
    Ok(PiMatrix { window: window.clone(), entries })
}

/// Matrix of the monomial field `x^n·d/dx` on Laurent monomials `x^k` with
/// the formal pairing `⟨x^i, f_j⟩ = δ_ij`: entry `(k, k+n−1) = k`.
pub fn monomial_field_matrix(n: i64, window: &IndexWindow) -> PairingMatrix {
    assert_eq!(window.parity(), 0, "Laurent exponents are integers");
    let mut entries = BTreeMap::new();
    for r in window.iter() {
        let k = r.as_int().expect("integer window");
        if k == 0 {
            continue;
        }
        let c = r.shift(n - 1);
        if window.contains(c) {
            entries.insert((r, c), GScalar::from_int(k));
        }
    }
    PairingMatrix {
        window: window.clone(),
        extent: Extent::Truncated,
        bandwidth: Bandwidth::Banded((n - 1).unsigned_abs()),
        entries,
    }
}

/// Matrix of the circle field `e^{inθ}·d/dθ` on the Fourier basis
/// `e_k = e^{ikθ}`: entry `(k, k+n) = i·k`.
pub fn circle_field_matrix(n: i64, window: &IndexWindow) -> PairingMatrix {
    assert_eq!(window.parity(), 0, "Fourier modes are integers");
    let mut entries = BTreeMap::new();
    for r in window.iter() {
        let k = r.as_int().expect("integer window");
        if k == 0 {
            continue;
        }
        let c = r.shift(n);
        if window.contains(c) {
            entries.insert((r, c), GScalar::new(Rational::zero(), Rational::from_int(k)));
        }
    }
    PairingMatrix {
        window: window.clone(),
        extent: Extent::Truncated,
        bandwidth: Bandwidth::Banded(n.unsigned_abs()),
        entries,
    }
}

/// Matrix of the intermediate-series action `A_m e_p = (p − mρ) e_{p+m}`
/// on basis labels `p ∈ ℤ + s` with `s ∈ {0, 1/2}`.
pub fn sv_action_matrix(
    m: i64,
    rho: &Rational,
    s: &Rational,
    window: &IndexWindow,
) -> Result<PairingMatrix, PairingError> {
    let parity = shift_parity(s)?;
    if window.parity() != parity {
        return Err(PairingError::ShiftMismatch {
            window: window.to_string(),
            shift: s.clone(),
        });
    }
    let m_rho = &Rational::from_int(m) * rho;
    let mut entries = BTreeMap::new();
    for r in window.iter() {
        let c = r.shift(m);
        if !window.contains(c) {
            continue;
        }
        let v = &r.to_rational() - &m_rho;
        if !v.is_zero() {
            entries.insert((r, c), GScalar::from_rational(v));
        }
    }
    Ok(PairingMatrix {
        window: window.clone(),
        extent: Extent::Truncated,
        bandwidth: Bandwidth::Banded(m.unsigned_abs()),
        entries,
    })
}

/// Maps the index shift `s ∈ {0, 1/2}` to a window parity.
pub fn shift_parity(s: &Rational) -> Result<u8, PairingError> {
    if s.is_zero() {
        Ok(0)
    } else if *s == Rational::new(1, 2).expect("nonzero denominator") {
        Ok(1)
    } else {
        Err(PairingError::InvalidShift { shift: s.clone() })
    }
}

/// Matrix of the substitution operator `(Aφ)(x) = φ(h(x))` on the standard
/// basis of functions on `{0..N−1}`: `⟨Ae_k, f_l⟩ = 1` iff `h(l) = k`,
/// i.e. column `l` carries a single 1 in row `h(l)`.
pub fn map_induced_matrix(h: &[usize]) -> PairingMatrix {
    let n = h.len();
    assert!(n >= 1, "map must have a nonempty domain");
    assert!(h.iter().all(|&v| v < n), "map must send the window into itself");
    let window = IndexWindow::integers(0, n as i64 - 1);
    let mut entries = BTreeMap::new();
    for (l, &hl) in h.iter().enumerate() {
        let key = (HalfIndex::from_int(hl as i64), HalfIndex::from_int(l as i64));
        entries.insert(key, GScalar::one());
    }
    PairingMatrix { window, extent: Extent::Entire, bandwidth: Bandwidth::Full, entries }
}

/// Quadrature oracle for the inner product `(f,g) = (1/π)∫₀^{2π} f·g dx`
/// by composite Simpson with `nodes` subintervals.
pub fn quadrature_pairing(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    nodes: usize,
) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    numeric::simpson(|x| f(x) * g(x), 0.0, two_pi, nodes) / std::f64::consts::PI
}
