//! Sparse Weyl algebra: finite sums `Σ c · x^a ∂^b` over half-integer
//! indexed variables, with products brought to normal order (all `x`
//! factors left of all `∂` factors) through the finite contraction
//!
//! `∂^b x^a = Σ_k C(b,k)·C(a,k)·k! · x^{a−k} ∂^{b−k}`.
//!
//! Coefficients are Gaussian rationals, so every identity check in the
//! crate that lands here is exact.

use crate::index::{HalfIndex, IndexWindow};
use crate::par;
use crate::scalar::{GScalar, Rational};
use num_bigint::BigInt;
use num_traits::One;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Largest total degree a product term may reach before the multiplication
/// reports an error instead of silently growing.
pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// Term-pair count above which a product fans out on the rayon pool.
const PAR_PAIR_THRESHOLD: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("product term degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
}

/// Parse failure for the canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {at}: {reason}")]
pub struct ParseError {
    pub at: usize,
    pub reason: String,
}

/// Sparse multi-index: variable index → positive power.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multi(BTreeMap<HalfIndex, u32>);

impl Multi {
    pub fn empty() -> Self {
        Multi(BTreeMap::new())
    }

    pub fn single(idx: HalfIndex, power: u32) -> Self {
        let mut m = BTreeMap::new();
        if power > 0 {
            m.insert(idx, power);
        }
        Multi(m)
    }

    pub fn from_pairs(pairs: &[(HalfIndex, u32)]) -> Self {
        let mut m = Multi::empty();
        for &(i, p) in pairs {
            m.bump(i, p);
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn power(&self, idx: HalfIndex) -> u32 {
        self.0.get(&idx).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (HalfIndex, u32)> + '_ {
        self.0.iter().map(|(&i, &p)| (i, p))
    }

    pub fn indices(&self) -> impl Iterator<Item = HalfIndex> + '_ {
        self.0.keys().copied()
    }

    /// Number of distinct indices carrying a positive power.
    pub fn support_size(&self) -> usize {
        self.0.len()
    }

    fn bump(&mut self, idx: HalfIndex, by: u32) {
        if by == 0 {
            return;
        }
        *self.0.entry(idx).or_insert(0) += by;
    }

    fn merged(&self, other: &Multi) -> Multi {
        let mut out = self.clone();
        for (i, p) in other.iter() {
            out.bump(i, p);
        }
        out
    }

    /// Subtracts `by` from the power at `idx`; the caller guarantees the
    /// power is large enough.
    fn drop_power(&mut self, idx: HalfIndex, by: u32) {
        if by == 0 {
            return;
        }
        let p = self.0.get_mut(&idx).expect("index present");
        debug_assert!(*p >= by);
        *p -= by;
        if *p == 0 {
            self.0.remove(&idx);
        }
    }
}

/// Normal-ordered monomial `x^a ∂^b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub x: Multi,
    pub d: Multi,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn new(x: Multi, d: Multi) -> Self {
        Monomial { x, d }
    }

    pub fn total_degree(&self) -> u32 {
        self.x.degree() + self.d.degree()
    }

    pub fn is_scalar(&self) -> bool {
        self.x.is_empty() && self.d.is_empty()
    }

    /// Equal total `x` and `∂` degree: preserves polynomial degree.
    pub fn is_balanced(&self) -> bool {
        self.x.degree() == self.d.degree()
    }

    pub fn indices(&self) -> BTreeSet<HalfIndex> {
        self.x.indices().chain(self.d.indices()).collect()
    }

    fn inside(&self, w: &IndexWindow) -> bool {
        self.x.indices().all(|i| w.contains(i)) && self.d.indices().all(|i| w.contains(i))
    }
}

/// Order: total degree, then the sorted `(index, power)` lists with the
/// `x` part compared before the `∂` part.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.d.cmp(&other.d))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the Weyl algebra in normal form. Zero coefficients are never
/// stored, so structural equality is algebraic equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeylElement {
    terms: BTreeMap<Monomial, GScalar>,
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement::default()
    }

    pub fn one() -> Self {
        WeylElement::scalar(GScalar::one())
    }

    pub fn scalar(c: GScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        WeylElement { terms }
    }

    /// The variable `x[idx]`.
    pub fn x(idx: HalfIndex) -> Self {
        WeylElement::monomial(GScalar::one(), Monomial::new(Multi::single(idx, 1), Multi::empty()))
    }

    /// The derivation `d[idx]`.
    pub fn d(idx: HalfIndex) -> Self {
        WeylElement::monomial(GScalar::one(), Monomial::new(Multi::empty(), Multi::single(idx, 1)))
    }

    /// `c · x[i] d[j]`, the building block of pairing-matrix images.
    pub fn x_d(c: GScalar, i: HalfIndex, j: HalfIndex) -> Self {
        WeylElement::monomial(c, Monomial::new(Multi::single(i, 1), Multi::single(j, 1)))
    }

    pub fn monomial(c: GScalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        WeylElement { terms }
    }

    /// Test helper: one term with integer indices, `xs`/`ds` as
    /// `(index, power)` lists.
    pub fn term(c: GScalar, xs: &[(i64, u32)], ds: &[(i64, u32)]) -> Self {
        let xm = Multi::from_pairs(
            &xs.iter().map(|&(i, p)| (HalfIndex::from_int(i), p)).collect::<Vec<_>>(),
        );
        let dm = Multi::from_pairs(
            &ds.iter().map(|&(i, p)| (HalfIndex::from_int(i), p)).collect::<Vec<_>>(),
        );
        WeylElement::monomial(c, Monomial::new(xm, dm))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, GScalar)>) -> Self {
        let mut e = WeylElement::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> GScalar {
        self.terms.get(m).cloned().unwrap_or_else(GScalar::zero)
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// All variable indices appearing in any term.
    pub fn indices(&self) -> BTreeSet<HalfIndex> {
        self.terms.keys().flat_map(|m| m.indices()).collect()
    }

    pub fn scale(&self, s: &GScalar) -> WeylElement {
        if s.is_zero() {
            return WeylElement::zero();
        }
        WeylElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Keeps only terms whose every index lies inside `w`.
    pub fn restrict_to_window(&self, w: &IndexWindow) -> WeylElement {
        WeylElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.inside(w))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: GScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Normal-ordered product under the default degree cap.
    pub fn multiply(&self, rhs: &WeylElement) -> Result<WeylElement, WeylError> {
        self.multiply_capped(rhs, DEFAULT_DEGREE_CAP)
    }

    /// Normal-ordered product; any term whose total degree exceeds `cap`
    /// aborts the product.
    pub fn multiply_capped(&self, rhs: &WeylElement, cap: u32) -> Result<WeylElement, WeylError> {
        if self.terms.len() * rhs.terms.len() >= PAR_PAIR_THRESHOLD {
            self.multiply_par(rhs, cap)
        } else {
            self.multiply_seq(rhs, cap)
        }
    }

    /// Sequential product path (also the fallback when `parallel` is off).
    pub fn multiply_seq(&self, rhs: &WeylElement, cap: u32) -> Result<WeylElement, WeylError> {
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            mul_term_into(&mut acc, m1, c1, rhs, cap)?;
        }
        Ok(WeylElement { terms: acc })
    }

    /// Parallel product path: partial maps per left-hand term, merged with
    /// exact addition (schedule-independent).
    pub fn multiply_par(&self, rhs: &WeylElement, cap: u32) -> Result<WeylElement, WeylError> {
        let lhs: Vec<(&Monomial, &GScalar)> = self.terms.iter().collect();
        let merged = par::map_reduce(
            lhs,
            || Ok(BTreeMap::new()),
            |acc: Result<BTreeMap<Monomial, GScalar>, WeylError>, (m1, c1)| {
                let mut acc = acc?;
                mul_term_into(&mut acc, m1, c1, rhs, cap)?;
                Ok(acc)
            },
            |a, b| {
                let mut a = a?;
                for (m, c) in b? {
                    merge_term(&mut a, m, c);
                }
                Ok(a)
            },
        )?;
        Ok(WeylElement { terms: merged })
    }

    /// `[self, rhs] = self·rhs − rhs·self` under the default cap.
    pub fn commutator(&self, rhs: &WeylElement) -> Result<WeylElement, WeylError> {
        self.commutator_capped(rhs, DEFAULT_DEGREE_CAP)
    }

    pub fn commutator_capped(&self, rhs: &WeylElement, cap: u32) -> Result<WeylElement, WeylError> {
        Ok(&self.multiply_capped(rhs, cap)? - &rhs.multiply_capped(self, cap)?)
    }

    /// Applies the operator to a polynomial in the `x` variables. This is a
    /// direct falling-factorial evaluation, independent of `multiply`, so
    /// the two routes cross-check each other.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            'mono: for (e, q) in &p.terms {
                let mut factor = BigInt::one();
                for (idx, b) in m.d.iter() {
                    let have = e.power(idx);
                    if have < b {
                        continue 'mono;
                    }
                    for j in 0..b {
                        factor *= BigInt::from(have - j);
                    }
                }
                let mut new_e = e.clone();
                for (idx, b) in m.d.iter() {
                    new_e.drop_power(idx, b);
                }
                let new_e = new_e.merged(&m.x);
                let coeff_rat = Rational::from_big(factor, BigInt::one()).expect("denominator 1");
                let coeff = &(c * q) * &GScalar::from_rational(coeff_rat);
                out.add_term(new_e, coeff);
            }
        }
        out
    }

    /// Classifies the element against both readings of "first order":
    /// membership in span{1, x_i, ∂_j, x_i ∂_j} (strict) and the literal
    /// shape `x_i^t ∂_j^r` with `1 ≤ t + r ≤ 2` (single index on each side).
    pub fn check_linear(&self) -> LinearityCertificate {
        let mut cert = LinearityCertificate {
            strict: true,
            literal: true,
            offending_strict: Vec::new(),
            offending_literal: Vec::new(),
        };
        for m in self.terms.keys() {
            let strict_ok = m.x.degree() <= 1 && m.d.degree() <= 1;
            let total = m.total_degree();
            let literal_ok = m.x.support_size() <= 1
                && m.d.support_size() <= 1
                && (1..=2).contains(&total);
            if !strict_ok {
                cert.strict = false;
                cert.offending_strict.push(m.clone());
            }
            if !literal_ok {
                cert.literal = false;
                cert.offending_literal.push(m.clone());
            }
        }
        cert
    }

    /// The strict-span reading, used wherever "first order" gates a check.
    pub fn is_linear(&self) -> bool {
        self.check_linear().strict
    }
}

/// Both readings of first-order membership, with the terms that break each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityCertificate {
    pub strict: bool,
    pub literal: bool,
    pub offending_strict: Vec<Monomial>,
    pub offending_literal: Vec<Monomial>,
}

fn merge_term(acc: &mut BTreeMap<Monomial, GScalar>, m: Monomial, c: GScalar) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = &*e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// `C(b,k)·C(a,k)·k!` as an exact integer.
fn contraction_coeff(b: u32, a: u32, k: u32) -> BigInt {
    let mut v = num_integer::binomial(BigInt::from(b), BigInt::from(k))
        * num_integer::binomial(BigInt::from(a), BigInt::from(k));
    for j in 2..=k {
        v *= BigInt::from(j);
    }
    v
}

/// Accumulates `c1·m1 · rhs` into `acc` in normal order.
fn mul_term_into(
    acc: &mut BTreeMap<Monomial, GScalar>,
    m1: &Monomial,
    c1: &GScalar,
    rhs: &WeylElement,
    cap: u32,
) -> Result<(), WeylError> {
    for (m2, c2) in &rhs.terms {
        // Indices contracted between ∂-part of m1 and x-part of m2.
        let shared: Vec<(HalfIndex, u32)> = m1
            .d
            .iter()
            .filter_map(|(i, b)| {
                let a = m2.x.power(i);
                if a > 0 {
                    Some((i, b.min(a)))
                } else {
                    None
                }
            })
            .collect();
        let c12 = c1 * c2;
        // Odometer over contraction orders 0..=max per shared index.
        let mut k = vec![0u32; shared.len()];
        'odometer: loop {
            let mut coeff = BigInt::one();
            for (pos, &(i, _)) in shared.iter().enumerate() {
                if k[pos] > 0 {
                    coeff *= contraction_coeff(m1.d.power(i), m2.x.power(i), k[pos]);
                }
            }
            let mut x = m1.x.merged(&m2.x);
            let mut d = m1.d.merged(&m2.d);
            for (pos, &(i, _)) in shared.iter().enumerate() {
                x.drop_power(i, k[pos]);
                d.drop_power(i, k[pos]);
            }
            let mono = Monomial::new(x, d);
            let degree = mono.total_degree();
            if degree > cap {
                return Err(WeylError::DegreeCapExceeded { degree, cap });
            }
            let scalar = GScalar::from_rational(
                Rational::from_big(coeff, BigInt::one()).expect("denominator 1"),
            );
            merge_term(acc, mono, &c12 * &scalar);

            // Advance the odometer.
            let mut pos = 0;
            loop {
                if pos == shared.len() {
                    break 'odometer;
                }
                if k[pos] < shared[pos].1 {
                    k[pos] += 1;
                    break;
                }
                k[pos] = 0;
                pos += 1;
            }
        }
    }
    Ok(())
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// Operator sugar for tests and small expressions. Panics when the default
/// degree cap is exceeded; use [`WeylElement::multiply_capped`] otherwise.
impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.multiply(rhs).expect("degree cap exceeded; use multiply_capped")
    }
}

/// Polynomial in the `x` variables with Gaussian-rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Multi, GScalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(GScalar::one())
    }

    pub fn constant(c: GScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Multi::empty(), c);
        }
        Polynomial { terms }
    }

    /// `c · Π x[i]^p` from `(index, power)` pairs.
    pub fn monomial(c: GScalar, pairs: &[(HalfIndex, u32)]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Multi::from_pairs(pairs), c);
        }
        Polynomial { terms }
    }

    pub fn var(idx: HalfIndex) -> Self {
        Polynomial::monomial(GScalar::one(), &[(idx, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multi, &GScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Multi) -> GScalar {
        self.terms.get(m).cloned().unwrap_or_else(GScalar::zero)
    }

    pub fn indices(&self) -> BTreeSet<HalfIndex> {
        self.terms.keys().flat_map(|m| m.indices().collect::<Vec<_>>()).collect()
    }

    pub fn scale(&self, s: &GScalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    fn add_term(&mut self, m: Multi, c: GScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.merged(m2), c1 * c2);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Canonical text form.

fn write_factor(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    multi: &Multi,
    first: &mut bool,
) -> fmt::Result {
    for (idx, p) in multi.iter() {
        if !*first {
            write!(f, " ")?;
        }
        *first = false;
        write!(f, "{name}[{idx}]")?;
        if p > 1 {
            write!(f, "^{p}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_scalar() {
            return write!(f, "1");
        }
        let mut first = true;
        write_factor(f, "x", &self.x, &mut first)?;
        write_factor(f, "d", &self.d, &mut first)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            if m.is_scalar() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            let mono = Monomial::new(m.clone(), Multi::empty());
            if mono.is_scalar() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c}) {mono}")?;
            }
        }
        Ok(())
    }
}

pub(crate) struct Scanner<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    pub(crate) fn err(&self, reason: &str) -> ParseError {
        ParseError { at: self.pos, reason: reason.to_string() }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == ' ') {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    /// Scalar literal without internal sign separators (sign allowed only
    /// leading): `3`, `-3/2`, `2i`, `-i`, `1/2i`.
    pub(crate) fn bare_scalar(&mut self) -> Result<GScalar, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
            self.bump();
        }
        if self.peek() == Some('i') {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        if text.is_empty() {
            return Err(self.err("expected a scalar literal"));
        }
        text.parse().map_err(|e| ParseError { at: start, reason: format!("{e}") })
    }

    /// Parenthesized scalar: any `GScalar` literal between `(` and `)`.
    pub(crate) fn paren_scalar(&mut self) -> Result<GScalar, ParseError> {
        self.expect('(')?;
        let start = self.pos;
        while self.peek().is_some_and(|c| c != ')') {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        self.expect(')')?;
        text.trim().parse().map_err(|e| ParseError { at: start, reason: format!("{e}") })
    }

    pub(crate) fn index(&mut self) -> Result<HalfIndex, ParseError> {
        self.expect('[')?;
        let start = self.pos;
        while self.peek().is_some_and(|c| c != ']') {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        self.expect(']')?;
        text.trim().parse().map_err(|e| ParseError { at: start, reason: format!("{e}") })
    }

    pub(crate) fn power(&mut self) -> Result<u32, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError { at: start, reason: "expected a power".to_string() })
    }
}

impl FromStr for WeylElement {
    type Err = ParseError;

    /// Parses the canonical form, e.g.
    /// `(3/2) x[1] d[2] + (-1+2i) x[4]^1 d[4]^1`. Powers `^1` and bare
    /// scalar coefficients are accepted; output of `Display` round-trips.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut sc = Scanner::new(s.trim());
        let mut out = WeylElement::zero();
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
            let mut x = Multi::empty();
            let mut d = Multi::empty();
            let mut saw_factor = false;
            while let Some(c) = sc.peek() {
                if c == 'x' || c == 'd' {
                    sc.bump();
                    let idx = sc.index()?;
                    let p = sc.power()?;
                    if c == 'x' {
                        x.bump(idx, p);
                    } else {
                        d.bump(idx, p);
                    }
                    saw_factor = true;
                    sc.skip_ws();
                } else {
                    break;
                }
            }
            if !saw_coeff && !saw_factor {
                return Err(sc.err("expected a term"));
            }
            out.add_term(Monomial::new(x, d), coeff);
            sc.skip_ws();
            match sc.bump() {
                None => break,
                Some('+') => sign = GScalar::one(),
                Some('-') => sign = -GScalar::one(),
                Some(_) => {
                    sc.pos -= 1;
                    return Err(sc.err("expected '+' or '-' between terms"));
                }
            }
        }
        Ok(out)
    }
}
