//! The operator-expression language behind `compute`, plus the canonical
//! text renderings: sums of `D(Eij)`, `del(ek)`, `delbar(ek)` terms
//! realized as normally ordered differential operators or as
//! isometry-algebra elements, matrix tables, and cocycle tables.

use anyhow::{anyhow, bail, Context, Result};
use lvf_core::cuntz::{cuntz_d, cuntz_del, cuntz_delbar, CuntzElement};
use lvf_core::index::{HalfIndex, IndexWindow};
use lvf_core::jsmap::{cocycle, d_map, del, delbar, WeightSpec};
use lvf_core::liealg::{sl2, solvable4, Label, LinComb};
use lvf_core::pairings::{
    circle_field_matrix, monomial_field_matrix, x2dx_matrix, Extent, PairingMatrix, VectorCoeffs,
};
use lvf_core::scalar::{GScalar, Rational};
use lvf_core::weyl::WeylElement;

/// One summand of an operator expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OpTerm {
    /// `D(Eij)`: image of the matrix unit with entry (i, j).
    MatrixUnit(i64, i64),
    /// `del(ek)`.
    Del(i64),
    /// `delbar(ek)`.
    Delbar(i64),
}

/// Splits at top-level `+`/`-`, keeping signs; parentheses protect
/// negative indices inside terms.
fn split_terms(src: &str) -> Result<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    for ch in src.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    bail!("unbalanced `)` in operator expression `{src}`");
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                } else {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        bail!("unbalanced `(` in operator expression `{src}`");
    }
    if cur.trim().is_empty() {
        bail!("operator expression ends without a term");
    }
    terms.push((neg, cur));
    Ok(terms)
}

/// `E12` (two digits) or `E(1,2)` (general indices).
fn parse_unit_indices(body: &str) -> Result<(i64, i64)> {
    let body = body.trim();
    let inner = body.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(body);
    if let Some((a, b)) = inner.split_once(',') {
        let i = a.trim().parse().with_context(|| format!("row index in `E{inner}`"))?;
        let j = b.trim().parse().with_context(|| format!("column index in `E{inner}`"))?;
        return Ok((i, j));
    }
    let digits: Vec<char> = inner.chars().collect();
    if digits.len() == 2 && digits.iter().all(|c| c.is_ascii_digit()) {
        return Ok((digits[0] as i64 - '0' as i64, digits[1] as i64 - '0' as i64));
    }
    bail!("matrix unit must be two digits (E12) or comma-separated (E(1,2)), got `E{inner}`")
}

/// `del(ek)` / `delbar(ek)` with the given head, if the term uses it.
fn parse_vector_term(term: &str, head: &str) -> Result<Option<i64>> {
    let Some(rest) = term.strip_prefix(head) else {
        return Ok(None);
    };
    let Some(inner) = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
        bail!("expected `{head}(ek)`, got `{term}`");
    };
    let idx = inner
        .trim()
        .strip_prefix('e')
        .ok_or_else(|| anyhow!("expected a basis vector like e3 inside `{head}(...)`"))?;
    let k = idx.trim().parse().with_context(|| format!("basis vector index in `{term}`"))?;
    Ok(Some(k))
}

fn parse_term(term: &str) -> Result<OpTerm> {
    let term = term.trim();
    if let Some(rest) = term.strip_prefix("D(").and_then(|r| r.strip_suffix(')')) {
        let inner = rest.trim();
        let body = inner.strip_prefix('E').ok_or_else(|| {
            anyhow!("expected a matrix unit like E12 inside `D(...)`, got `{inner}`")
        })?;
        let (i, j) = parse_unit_indices(body)?;
        return Ok(OpTerm::MatrixUnit(i, j));
    }
    // `delbar` first: `del` is its prefix.
    if let Some(k) = parse_vector_term(term, "delbar")? {
        return Ok(OpTerm::Delbar(k));
    }
    if let Some(k) = parse_vector_term(term, "del")? {
        return Ok(OpTerm::Del(k));
    }
    bail!("unrecognized term `{term}`; expected D(Eij), del(ek), or delbar(ek)")
}

fn parse_op_expr(src: &str) -> Result<Vec<(bool, OpTerm)>> {
    split_terms(src)?
        .into_iter()
        .map(|(neg, t)| Ok((neg, parse_term(&t)?)))
        .collect()
}

fn term_indices(term: &OpTerm) -> Vec<i64> {
    match term {
        OpTerm::MatrixUnit(i, j) => vec![*i, *j],
        OpTerm::Del(k) | OpTerm::Delbar(k) => vec![*k],
    }
}

/// The smallest integer window containing every index the expression
/// mentions; for isometry elements the window starts at 1.
fn op_window(terms: &[(bool, OpTerm)], positive: bool) -> Result<IndexWindow> {
    let all: Vec<i64> = terms.iter().flat_map(|(_, t)| term_indices(t)).collect();
    let lo = *all.iter().min().expect("at least one term");
    let hi = *all.iter().max().expect("at least one term");
    if positive {
        if lo < 1 {
            bail!("isometry families are indexed from 1; index {lo} is out of range");
        }
        Ok(IndexWindow::integers(1, hi))
    } else {
        Ok(IndexWindow::integers(lo, hi))
    }
}

fn unit_matrix(window: &IndexWindow, i: i64, j: i64) -> Result<PairingMatrix> {
    Ok(PairingMatrix::single(
        window.clone(),
        Extent::Entire,
        HalfIndex::from_int(i),
        HalfIndex::from_int(j),
        GScalar::one(),
    )?)
}

fn unit_vector(window: &IndexWindow, k: i64) -> VectorCoeffs {
    VectorCoeffs::unit(window.clone(), HalfIndex::from_int(k))
}

/// Normally ordered differential-operator image of the expression.
pub fn weyl_element(src: &str) -> Result<WeylElement> {
    let terms = parse_op_expr(src)?;
    let window = op_window(&terms, false)?;
    let mut total = WeylElement::zero();
    for (neg, term) in &terms {
        let part = match term {
            OpTerm::MatrixUnit(i, j) => d_map(&unit_matrix(&window, *i, *j)?),
            OpTerm::Del(k) => del(&unit_vector(&window, *k)),
            OpTerm::Delbar(k) => delbar(&unit_vector(&window, *k)),
        };
        let part = if *neg { -&part } else { part };
        total = &total + &part;
    }
    Ok(total)
}

/// Isometry-algebra image of the expression, with the identity weight.
pub fn cuntz_element(src: &str) -> Result<CuntzElement> {
    let terms = parse_op_expr(src)?;
    let window = op_window(&terms, true)?;
    let l = PairingMatrix::identity(window.clone(), Extent::Entire);
    let mut parts = Vec::new();
    for (neg, term) in &terms {
        let element = match term {
            OpTerm::MatrixUnit(i, j) => cuntz_d(&unit_matrix(&window, *i, *j)?, &l)?,
            OpTerm::Del(k) => cuntz_del(&unit_vector(&window, *k), &l),
            OpTerm::Delbar(k) => cuntz_delbar(&unit_vector(&window, *k)),
        };
        let element =
            if *neg { element.scale(&GScalar::from_int(-1)) } else { element };
        parts.extend(element.terms().map(|(w, c)| (w.clone(), c.clone())));
    }
    Ok(CuntzElement::from_terms(parts))
}

/// A right-aligned labelled grid.
fn render_table(
    title: &str,
    row_labels: &[String],
    col_labels: &[String],
    cells: &[Vec<String>],
) -> String {
    let mut widths: Vec<usize> = col_labels.iter().map(|h| h.len()).collect();
    for row in cells {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    let label_width = row_labels.iter().map(|r| r.len()).max().unwrap_or(1);
    let mut out = String::new();
    out.push_str(title);
    out.push('\n');
    out.push_str(&" ".repeat(label_width));
    for (j, h) in col_labels.iter().enumerate() {
        out.push_str(&format!("  {h:>width$}", width = widths[j]));
    }
    out.push('\n');
    for (label, row) in row_labels.iter().zip(cells) {
        out.push_str(&format!("{label:>label_width$}"));
        for (j, cell) in row.iter().enumerate() {
            out.push_str(&format!("  {cell:>width$}", width = widths[j]));
        }
        out.push('\n');
    }
    out
}

fn window_table(
    title: &str,
    window: &IndexWindow,
    entry: impl Fn(HalfIndex, HalfIndex) -> String,
) -> String {
    let labels: Vec<String> = window.iter().map(|i| i.to_string()).collect();
    let cells: Vec<Vec<String>> =
        window.iter().map(|r| window.iter().map(|c| entry(r, c)).collect()).collect();
    render_table(title, &labels, &labels, &cells)
}

/// Table of a derivative pairing matrix over a named basis.
pub fn d_matrix_table(basis: &str, window: i64, n: i64) -> Result<String> {
    if window < 1 {
        bail!("window must be at least 1, got {window}");
    }
    match basis {
        "x2dx" => {
            let w = IndexWindow::integers(1, window);
            let m = x2dx_matrix(&w)?;
            Ok(window_table(&format!("d-matrix basis=x2dx window={w}"), &w, |r, c| {
                m.entry(r, c).to_string()
            }))
        }
        "monomial" => {
            let w = IndexWindow::integers(1, window);
            let m = monomial_field_matrix(n, &w);
            Ok(window_table(&format!("d-matrix basis=monomial n={n} window={w}"), &w, |r, c| {
                m.entry(r, c).to_string()
            }))
        }
        "circle" => {
            let w = IndexWindow::integers(-window, window);
            let m = circle_field_matrix(n, &w);
            Ok(window_table(&format!("d-matrix basis=circle n={n} window={w}"), &w, |r, c| {
                m.entry(r, c).to_string()
            }))
        }
        other => bail!("unknown basis `{other}`; expected x2dx, monomial, or circle"),
    }
}

fn parse_rational(label: &str, s: &str) -> Result<Rational> {
    s.trim().parse().with_context(|| format!("invalid rational for --{label}: `{s}`"))
}

/// Table of the 2-cocycle `φ_u(w, z)` over a finite algebra basis.
pub fn cocycle_table(
    algebra: &str,
    u: &str,
    degree: u32,
    alpha: Option<&str>,
    beta: Option<&str>,
) -> Result<String> {
    let (sc, names) = match algebra {
        "sl2" => (sl2(), vec!["e", "f", "h"]),
        "solvable4" => {
            let alpha = parse_rational(
                "alpha",
                alpha.ok_or_else(|| anyhow!("--alpha is required for solvable4"))?,
            )?;
            let beta = parse_rational(
                "beta",
                beta.ok_or_else(|| anyhow!("--beta is required for solvable4"))?,
            )?;
            (solvable4(&alpha, &beta)?, vec!["t", "x", "y", "z"])
        }
        other => bail!("unknown algebra `{other}`; expected sl2 or solvable4"),
    };
    let pos = names
        .iter()
        .position(|name| *name == u)
        .ok_or_else(|| anyhow!("unknown basis label `{u}` for {algebra}; expected one of {names:?}"))?;
    let basis: Vec<LinComb> = (0..names.len())
        .map(|k| LinComb::singleton(Label::E(k as u32), GScalar::one()))
        .collect();
    let spec = WeightSpec::new(degree, IndexWindow::integers(0, names.len() as i64 - 1));
    let mut cells = Vec::new();
    for w in &basis {
        let mut row = Vec::new();
        for z in &basis {
            let value = cocycle(&basis[pos], w, z, &sc, &spec)?
                .expect("finite algebra brackets stay inside the model");
            row.push(value.to_string());
        }
        cells.push(row);
    }
    let labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let title = format!("cocycle table phi_u(w, z) for algebra={algebra} u={u} degree={degree}");
    Ok(render_table(&title, &labels, &labels, &cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_element_of_matrix_unit_is_x_d() {
        assert_eq!(weyl_element("D(E12)").unwrap().to_string(), "x[1] d[2]");
    }

    #[test]
    fn signs_and_sums_combine() {
        let e = weyl_element("D(E12) - D(E12) + del(e1)").unwrap();
        assert_eq!(e.to_string(), "d[1]");
    }

    #[test]
    fn general_indices_accept_negatives() {
        let e = weyl_element("D(E(-1,2))").unwrap();
        assert_eq!(e.to_string(), "x[-1] d[2]");
    }

    #[test]
    fn cuntz_matrix_unit_is_a_shift_pair() {
        assert_eq!(cuntz_element("D(E12)").unwrap().to_string(), "s[1] s*[2]");
    }

    #[test]
    fn cuntz_rejects_nonpositive_indices() {
        assert!(cuntz_element("del(e0)").is_err());
    }

    #[test]
    fn malformed_terms_are_rejected() {
        for bad in ["D(F12)", "del(x1)", "D(E123)", "", "D(E12) +"] {
            assert!(weyl_element(bad).is_err(), "`{bad}` parsed");
        }
    }

    #[test]
    fn sl2_cocycle_table_shows_the_frozen_values() {
        let table = cocycle_table("sl2", "h", 2, None, None).unwrap();
        assert!(table.contains("12"));
        assert!(table.contains("-12"));
    }

    #[test]
    fn x2dx_table_has_minus_pi_diagonal() {
        let table = d_matrix_table("x2dx", 4, 1).unwrap();
        assert!(table.contains("-pi"));
    }
}
