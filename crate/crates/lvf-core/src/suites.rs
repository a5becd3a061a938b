//! Named verification suites: each bundles seeded random instances and
//! fixed batteries for one area of the library into a deterministic
//! [`Report`]. Same configuration and seed, same bytes out.
//!
//! Suites pre-sample all instance data from a single [`Sampler`] stream,
//! then fan independent instances out through [`par`]; check names carry
//! zero-padded instance tags so the name-sorted report does not depend on
//! the execution order.

use crate::cuntz::{
    embed_kernel, homotope_check, injectivity_check, matrix_algebra, q_commutator_check,
    verify_cuntz_relations, CuntzError,
};
use crate::index::{HalfIndex, IndexWindow, WindowError};
use crate::jsmap::{
    ad_matrix, cocycle, cylindrical_derivative, d_map, del, epsilon, epsilon_tilde,
    flow_derivative, flow_integral_error, killing_form, n_point_motion_check, op_bracket,
    required_margin, verify_comm_relations, JSContext, JsError, WeightSpec,
};
use crate::liealg::{
    dynamics_check, heisenberg_virasoro, schrodinger_virasoro, sl2, solvable4,
    verify_realization, witt, Label, LieError, LinComb, StructureConstants,
};
use crate::linalg::GMatrix;
use crate::pairings::{
    circle_field_matrix, monomial_field_matrix, quadrature_pairing, shift_parity,
    sine_derivative_triple, sine_operator_matrix, sv_action_matrix, x2dx_matrix, Extent,
    PairingError, PairingMatrix, VectorCoeffs,
};
use crate::par;
use crate::report::{CheckResult, Report};
use crate::sample::Sampler;
use crate::scalar::{GScalar, PiScalar, Rational};
use crate::wavelet::{verify_wavelet_d, LaurentPoly, QMFSystem, WaveletError};
use crate::weyl::{WeylElement, WeylError};

/// Simpson node count the float-mode suites default to, chosen so the
/// 1e−8 and 1e−10 quadrature tolerances hold with headroom to spare; the
/// library-level default of 4096 nodes is too coarse for them.
pub const DEFAULT_SUITE_QUADRATURE_NODES: usize = 65536;

/// Tolerance for the sine-triple quadrature cross-check.
pub const TOL_SINE_TRIPLE: f64 = 1e-10;

/// Tolerance for the quadratic-field matrix quadrature cross-check.
pub const TOL_X2DX_QUADRATURE: f64 = 1e-8;

/// Default tolerance demanded of the window-8 flow comparison.
pub const DEFAULT_FLOW_TOLERANCE: f64 = 2e-3;

/// Relative tolerance between cylindrical and flow derivatives.
pub const TOL_CYLINDRICAL_RELATIVE: f64 = 1e-5;

/// Default flow time for the sine-basis flow checks.
pub const DEFAULT_FLOW_TIME: f64 = 0.05;

/// Step of the symmetric finite-difference flow derivative used as the
/// oracle for the cylindrical derivative.
const FLOW_DIFF_STEP: f64 = 1e-5;

/// Every suite the runner knows, in presentation order.
pub fn suite_names() -> &'static [&'static str] {
    &[
        "weyl-core",
        "js-identities",
        "killing-cocycle",
        "sine-examples",
        "heisenberg-virasoro",
        "schrodinger-virasoro",
        "circle-witt",
        "dynamics",
        "cuntz-identities",
        "homotope",
        "wavelet",
    ]
}

/// Knobs a suite run accepts; each suite reads the subset it understands
/// and documents fixed batteries that ignore the instance count.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    /// Half-width cap of the integer index windows for instance-driven
    /// suites.
    pub window: i64,
    /// Random-instance count for the instance-driven suites.
    pub instances: usize,
    /// Branch count for the wavelet suite.
    pub n: usize,
    /// Monomial exponent range for the wavelet relation checks.
    pub max_exp: i64,
    /// Simpson subdivisions for every float-mode quadrature.
    pub quadrature_nodes: usize,
    /// Flow time of the quadratic-field comparison.
    pub flow_time: f64,
    /// Tolerance of the window-8 flow comparison.
    pub flow_tolerance: f64,
}

impl SuiteConfig {
    /// Defaults for a named suite.
    pub fn default_for(suite: &str) -> Self {
        SuiteConfig {
            suite: suite.to_string(),
            seed: 7,
            window: 8,
            instances: 100,
            n: 2,
            max_exp: 30,
            quadrature_nodes: DEFAULT_SUITE_QUADRATURE_NODES,
            flow_time: DEFAULT_FLOW_TIME,
            flow_tolerance: DEFAULT_FLOW_TOLERANCE,
        }
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig::default_for("js-identities")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error(transparent)]
    Js(#[from] JsError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Cuntz(#[from] CuntzError),
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
}

/// Runs the named suite and assembles its report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, SuiteError> {
    let checks = match cfg.suite.as_str() {
        "weyl-core" => weyl_core_suite(cfg)?,
        "js-identities" => js_identities_suite(cfg)?,
        "killing-cocycle" => killing_cocycle_suite(cfg)?,
        "sine-examples" => sine_examples_suite(cfg)?,
        "heisenberg-virasoro" => heisenberg_virasoro_suite()?,
        "schrodinger-virasoro" => schrodinger_virasoro_suite()?,
        "circle-witt" => circle_witt_suite()?,
        "dynamics" => dynamics_suite(cfg)?,
        "cuntz-identities" => cuntz_identities_suite(cfg)?,
        "homotope" => homotope_suite(cfg)?,
        "wavelet" => wavelet_suite(cfg)?,
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    Ok(Report::new(cfg.suite.clone(), cfg.seed, checks))
}

fn require_instances(cfg: &SuiteConfig) -> Result<usize, SuiteError> {
    if cfg.instances == 0 {
        return Err(SuiteError::InvalidParameter {
            name: "instances",
            reason: "at least one random instance is required".to_string(),
        });
    }
    Ok(cfg.instances)
}

fn tag_check(mut check: CheckResult, tag: &str) -> CheckResult {
    check.name = format!("{}-{}", check.name, tag);
    check
}

fn tag_checks(mut checks: Vec<CheckResult>, tag: &str) -> Vec<CheckResult> {
    for c in &mut checks {
        c.name = format!("{}-{}", c.name, tag);
    }
    checks
}

fn collect_groups<E: Into<SuiteError>>(
    groups: Vec<Result<Vec<CheckResult>, E>>,
) -> Result<Vec<CheckResult>, SuiteError> {
    let mut out = Vec::new();
    for g in groups {
        out.extend(g.map_err(Into::into)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// weyl-core
// ---------------------------------------------------------------------

/// Associativity, the derivation property of commutators, and text
/// round-trips on random normally ordered elements, plus the defining
/// reordering example.
fn weyl_core_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let count = require_instances(cfg)?;
    let window = IndexWindow::integers(-3, 3);
    let mut sampler = Sampler::new(cfg.seed);
    let mut inputs = Vec::with_capacity(count);
    for i in 0..count {
        let a = sampler.weyl_element(&window, 3, 2);
        let b = sampler.weyl_element(&window, 3, 2);
        let c = sampler.weyl_element(&window, 3, 2);
        inputs.push((i, a, b, c));
    }
    let groups = par::map_collect(inputs, |(i, a, b, c)| -> Result<Vec<CheckResult>, WeylError> {
        let cap = 64;
        let tag = format!("i{i:03}");
        let mut out = Vec::new();
        let ab_c = a.multiply_capped(&b, cap)?.multiply_capped(&c, cap)?;
        let a_bc = a.multiply_capped(&b.multiply_capped(&c, cap)?, cap)?;
        out.push(CheckResult::assert(format!("weyl-assoc-{tag}"), ab_c == a_bc, || {
            format!("difference = {}", &(&ab_c - &a_bc))
        }));
        let bc = b.multiply_capped(&c, cap)?;
        let lhs = a.commutator_capped(&bc, cap)?;
        let rhs = &a.commutator_capped(&b, cap)?.multiply_capped(&c, cap)?
            + &b.multiply_capped(&a.commutator_capped(&c, cap)?, cap)?;
        out.push(CheckResult::assert(format!("weyl-derivation-{tag}"), lhs == rhs, || {
            format!("difference = {}", &(&lhs - &rhs))
        }));
        let round: Result<WeylElement, _> = a.to_string().parse();
        let round_ok = round.map(|parsed| parsed == a).unwrap_or(false);
        out.push(CheckResult::assert(format!("weyl-roundtrip-{tag}"), round_ok, || {
            format!("`{}` did not parse back to the same element", a)
        }));
        Ok(out)
    });
    let mut checks = collect_groups(groups)?;
    let d1: WeylElement = "d[1]".parse().expect("generator literal");
    let x1: WeylElement = "x[1]".parse().expect("generator literal");
    let reordered = d1.multiply(&x1)?;
    let expected: WeylElement = "x[1] d[1] + 1".parse().expect("canonical literal");
    checks.push(CheckResult::assert("weyl-ordering-example", reordered == expected, || {
        format!("d[1]·x[1] normalized to {reordered}")
    }));
    Ok(checks)
}

// ---------------------------------------------------------------------
// js-identities
// ---------------------------------------------------------------------

/// The four first-order commutation identities on seeded banded
/// instances, with the margin derived from the participating bands.
fn js_identities_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let count = require_instances(cfg)?;
    if cfg.window < 4 {
        return Err(SuiteError::InvalidParameter {
            name: "window",
            reason: format!("half-width {} is below the minimum of 4", cfg.window),
        });
    }
    let spread = (cfg.window - 3) as usize;
    let mut sampler = Sampler::new(cfg.seed);
    let mut inputs = Vec::with_capacity(count);
    for i in 0..count {
        let half = 4 + (i % spread) as i64;
        let window = IndexWindow::integers(-half, half);
        let a = sampler.banded_matrix(&window, (i % 3) as u64, 50);
        let b = sampler.banded_matrix(&window, ((i + 1) % 3) as u64, 50);
        let h = sampler.vector(&window, 60);
        let r = sampler.vector(&window, 60);
        inputs.push((i, window, a, b, h, r));
    }
    let groups =
        par::map_collect(inputs, |(i, window, a, b, h, r)| -> Result<Vec<CheckResult>, JsError> {
            let margin = required_margin(&[&a, &b])?;
            let ctx = JSContext::exact(window, margin);
            Ok(tag_checks(verify_comm_relations(&a, &b, &h, &r, &ctx)?, &format!("i{i:03}")))
        });
    collect_groups(groups)
}

// ---------------------------------------------------------------------
// killing-cocycle
// ---------------------------------------------------------------------

/// Bilinear expansion of a precomputed form matrix over linear
/// combinations of basis labels.
fn expand_form(
    form: &GMatrix,
    sc: &StructureConstants,
    u: &LinComb,
    v: &LinComb,
) -> GScalar {
    let mut total = GScalar::zero();
    for (lu, cu) in u.terms() {
        let i = sc.position(lu).expect("label inside the model");
        for (lv, cv) in v.terms() {
            let j = sc.position(lv).expect("label inside the model");
            total = &total + &(&(cu * cv) * &form[(i, j)]);
        }
    }
    total
}

/// The ε/B/cocycle battery on one finite algebra: ε symmetry, the
/// bracket identity, symmetry and ad-invariance of the induced form, and
/// the 2-cocycle identities, all in exact arithmetic.
fn form_battery(
    prefix: &str,
    sc: &StructureConstants,
    spec: &WeightSpec,
) -> Result<Vec<CheckResult>, SuiteError> {
    let dim = sc.dimension();
    let basis: Vec<LinComb> = sc
        .labels()
        .iter()
        .map(|l| LinComb::singleton(l.clone(), GScalar::one()))
        .collect();
    let ads: Vec<PairingMatrix> =
        basis.iter().map(|u| ad_matrix(u, sc)).collect::<Result<_, _>>()?;
    let brackets: Vec<Vec<LinComb>> = basis
        .iter()
        .map(|u| {
            basis
                .iter()
                .map(|v| sc.bracket_lin(u, v).expect("finite algebra brackets stay inside"))
                .collect()
        })
        .collect();
    let mut bform = GMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            bform[(i, j)] = killing_form(&basis[i], &basis[j], sc, spec)?;
        }
    }
    let mut checks = Vec::new();

    let mut bad = None;
    for i in 0..dim {
        for j in (i + 1)..dim {
            if epsilon_tilde(&basis[i], &basis[j], sc)?
                != epsilon_tilde(&basis[j], &basis[i], sc)?
                && bad.is_none()
            {
                bad = Some((i, j));
            }
        }
    }
    checks.push(CheckResult::assert(format!("{prefix}-epsilon-symmetric"), bad.is_none(), || {
        let (i, j) = bad.expect("failure recorded");
        format!("ε̃ differs between basis pair ({i}, {j}) and its swap")
    }));

    let mut bad = None;
    'outer: for (i, au) in ads.iter().enumerate() {
        for (j, aw) in ads.iter().enumerate() {
            for (k, az) in ads.iter().enumerate() {
                let lhs = d_map(au).commutator(&epsilon(aw, az)?)?;
                let rhs = &(-&epsilon(&op_bracket(au, aw)?, az)?)
                    - &epsilon(aw, &op_bracket(au, az)?)?;
                if lhs != rhs {
                    bad = Some((i, j, k));
                    break 'outer;
                }
            }
        }
    }
    checks.push(CheckResult::assert(
        format!("{prefix}-epsilon-bracket-identity"),
        bad.is_none(),
        || {
            let (i, j, k) = bad.expect("failure recorded");
            format!("[D(ad u), ε(ad w, ad z)] ≠ −ε([u,w],z) − ε(w,[u,z]) at basis triple ({i}, {j}, {k})")
        },
    ));

    let mut bad = None;
    for i in 0..dim {
        for j in 0..dim {
            if bform[(i, j)] != bform[(j, i)] && bad.is_none() {
                bad = Some((i, j));
            }
        }
    }
    checks.push(CheckResult::assert(format!("{prefix}-form-symmetric"), bad.is_none(), || {
        let (i, j) = bad.expect("failure recorded");
        format!("B({i},{j}) = {} but B({j},{i}) = {}", bform[(i, j)], bform[(j, i)])
    }));

    let mut bad = None;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let lhs = expand_form(&bform, sc, &brackets[i][j], &basis[k]);
                let rhs = expand_form(&bform, sc, &basis[j], &brackets[i][k]);
                if !(&lhs + &rhs).is_zero() && bad.is_none() {
                    bad = Some((i, j, k));
                }
            }
        }
    }
    checks.push(CheckResult::assert(format!("{prefix}-form-ad-invariant"), bad.is_none(), || {
        let (i, j, k) = bad.expect("failure recorded");
        format!("B([u,w],z) + B(w,[u,z]) ≠ 0 at basis triple ({i}, {j}, {k})")
    }));

    let mut bad = None;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let phi = cocycle(&basis[i], &basis[j], &basis[k], sc, spec)?
                    .expect("finite algebra brackets stay inside");
                let swapped = cocycle(&basis[i], &basis[k], &basis[j], sc, spec)?
                    .expect("finite algebra brackets stay inside");
                if !(&phi + &swapped).is_zero() && bad.is_none() {
                    bad = Some((i, j, k));
                }
                let direct = expand_form(&bform, sc, &brackets[i][j], &basis[k]);
                if phi != direct && bad.is_none() {
                    bad = Some((i, j, k));
                }
            }
        }
    }
    checks.push(CheckResult::assert(
        format!("{prefix}-cocycle-antisymmetric"),
        bad.is_none(),
        || {
            let (i, j, k) = bad.expect("failure recorded");
            format!("φ_u(w,z) + φ_u(z,w) ≠ 0 or φ mismatches B([u,w],z) at ({i}, {j}, {k})")
        },
    ));

    let mut bad = None;
    for u in 0..dim {
        for y in 0..dim {
            for w in 0..dim {
                for z in 0..dim {
                    let t1 = expand_form(&bform, sc, &brackets[u][y], &brackets[w][z]);
                    let t2 = expand_form(&bform, sc, &brackets[u][w], &brackets[z][y]);
                    let t3 = expand_form(&bform, sc, &brackets[u][z], &brackets[y][w]);
                    if !(&(&t1 + &t2) + &t3).is_zero() && bad.is_none() {
                        bad = Some((u, y, w, z));
                    }
                }
            }
        }
    }
    checks.push(CheckResult::assert(format!("{prefix}-cocycle-cyclic"), bad.is_none(), || {
        let (u, y, w, z) = bad.expect("failure recorded");
        format!("φ_u(y,[w,z]) + φ_u(w,[z,y]) + φ_u(z,[y,w]) ≠ 0 at ({u}, {y}, {w}, {z})")
    }));

    Ok(checks)
}

/// ε/B/cocycle battery on the rank-one simple algebra with frozen oracle
/// values, and on a seeded four-dimensional solvable algebra.
fn killing_cocycle_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let mut checks = Vec::new();

    let sc = sl2();
    let spec = WeightSpec::new(2, IndexWindow::integers(0, 2));
    checks.extend(form_battery("sl2", &sc, &spec)?);

    let e = LinComb::singleton(Label::E(0), GScalar::one());
    let f = LinComb::singleton(Label::E(1), GScalar::one());
    let h = LinComb::singleton(Label::E(2), GScalar::one());
    let frozen_ok = killing_form(&h, &h, &sc, &spec)? == GScalar::from_int(12)
        && killing_form(&e, &f, &sc, &spec)? == GScalar::from_int(6)
        && killing_form(&e, &e, &sc, &spec)?.is_zero();
    checks.push(CheckResult::assert("sl2-form-frozen-values", frozen_ok, || {
        "B(h,h) = 12, B(e,f) = 6, B(e,e) = 0 no longer hold on the degree-2 truncation"
            .to_string()
    }));

    let expected = [[0i64, 12, 0], [-12, 0, 0], [0, 0, 0]];
    let basis = [e.clone(), f.clone(), h.clone()];
    let mut bad = None;
    for (i, w) in basis.iter().enumerate() {
        for (j, z) in basis.iter().enumerate() {
            let v = cocycle(&h, w, z, &sc, &spec)?.expect("brackets stay inside");
            if v != GScalar::from_int(expected[i][j]) && bad.is_none() {
                bad = Some((i, j, v));
            }
        }
    }
    checks.push(CheckResult::assert("sl2-cocycle-table-frozen", bad.is_none(), || {
        let (i, j, v) = bad.expect("failure recorded");
        format!("φ_h(basis {i}, basis {j}) = {v}, expected {}", expected[i][j])
    }));

    // A single rational constant relating B to the classical trace form
    // tr(ad u · ad v) across all nine basis pairs.
    let basis3 = [e, f, h];
    let ads: Vec<GMatrix> = basis3
        .iter()
        .map(|u| ad_matrix(u, &sc).map(|m| m.to_gmatrix()))
        .collect::<Result<_, _>>()?;
    let mut ratio: Option<GScalar> = None;
    let mut bad = None;
    for i in 0..3 {
        for j in 0..3 {
            let b = killing_form(&basis3[i], &basis3[j], &sc, &spec)?;
            let k = (&ads[i] * &ads[j]).trace();
            if k.is_zero() {
                if !b.is_zero() && bad.is_none() {
                    bad = Some(format!("K({i},{j}) = 0 but B = {b}"));
                }
                continue;
            }
            let r = b.checked_div(&k).expect("nonzero divisor");
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev != r && bad.is_none() => {
                    bad = Some(format!("ratio at ({i},{j}) is {r}, elsewhere {prev}"));
                }
                _ => {}
            }
        }
    }
    if bad.is_none() && ratio != Some(GScalar::ratio(3, 2).expect("nonzero denominator")) {
        bad = Some(format!(
            "overall ratio {:?} differs from the frozen 3/2",
            ratio.map(|r| r.to_string())
        ));
    }
    checks.push(CheckResult::assert(
        "sl2-form-proportional-to-killing",
        bad.is_none(),
        || bad.clone().expect("failure recorded"),
    ));

    let mut sampler = Sampler::new(cfg.seed);
    let (alpha, beta) = sampler.solvable_parameters();
    let sc4 = solvable4(&alpha, &beta)?;
    let spec4 = WeightSpec::new(2, IndexWindow::integers(0, 3));
    checks.extend(form_battery("solvable4", &sc4, &spec4)?);
    checks.push(
        CheckResult::pass("solvable4-parameters")
            .with_witness(format!("α = {alpha}, β = {beta}")),
    );
    Ok(checks)
}

// ---------------------------------------------------------------------
// sine-examples
// ---------------------------------------------------------------------

/// The matrix entry obtained by summing derivative triples over the
/// field coefficients: an independent route to the closed form.
fn sine_operator_oracle_entry(
    lambda: &Rational,
    c: &VectorCoeffs,
    m: i64,
    k: i64,
) -> GScalar {
    let mut v = GScalar::zero();
    if m == k {
        let lam = GScalar::from_rational(lambda.clone());
        v = &v - &(&lam * &GScalar::from_int(m * m));
    }
    let mut field = GScalar::zero();
    for (idx, cj) in c.entries() {
        let j = idx.as_int().expect("integer support");
        if j >= 1 {
            let triple = sine_derivative_triple(j as u64, m as u64, k as u64);
            if !triple.is_zero() {
                field = &field + &(cj * &GScalar::from_rational(triple));
            }
        }
    }
    let one_minus = &GScalar::one() - &GScalar::from_rational(lambda.clone());
    &v + &(&one_minus * &field)
}

fn sine_operator_closed_form_check(
    name: &str,
    lambda: &Rational,
    c: &VectorCoeffs,
    window: &IndexWindow,
) -> Result<CheckResult, SuiteError> {
    let matrix = sine_operator_matrix(lambda, c, window)?;
    for mi in window.iter() {
        for ki in window.iter() {
            let m = mi.as_int().expect("integer window");
            let k = ki.as_int().expect("integer window");
            let want = sine_operator_oracle_entry(lambda, c, m, k);
            let got = matrix.entry(mi, ki);
            if got != want {
                return Ok(CheckResult::fail(
                    name,
                    format!("entry ({m},{k}) is {got}, triple-sum oracle gives {want}"),
                ));
            }
        }
    }
    Ok(CheckResult::pass(name).with_window(window))
}

/// Quadrature cross-checks of the sine-basis derivative triples and the
/// quadratic-field matrix, the antisymmetry of the shifted matrix, and
/// the truncated-flow comparison.
fn sine_examples_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    if cfg.flow_time <= 0.0 {
        return Err(SuiteError::InvalidParameter {
            name: "flow-time",
            reason: format!("flow time {} must be positive", cfg.flow_time),
        });
    }
    let nodes = cfg.quadrature_nodes;
    let mut checks = Vec::new();

    let mut triples = Vec::new();
    for n in 1..=10u64 {
        for m in 1..=10u64 {
            for k in 1..=10u64 {
                triples.push((n, m, k));
            }
        }
    }
    let max_err = par::map_reduce(
        triples,
        || 0.0f64,
        move |acc: f64, (n, m, k)| {
            let exact = sine_derivative_triple(n, m, k).to_f64();
            let (nf, mf, kf) = (n as f64, m as f64, k as f64);
            let q = quadrature_pairing(
                move |x| (nf * x).sin() * mf * (mf * x).cos(),
                move |x| (kf * x).sin(),
                nodes,
            );
            acc.max((q - exact).abs())
        },
        f64::max,
    );
    checks.push(
        CheckResult::assert("sine-triple-vs-quadrature", max_err <= TOL_SINE_TRIPLE, || {
            format!(
                "max |quadrature − exact| = {max_err:.3e} over 1 ≤ n,m,k ≤ 10 at {nodes} nodes"
            )
        })
        .with_error(max_err),
    );

    let op_window = IndexWindow::integers(1, 10);
    let fixed_lambda = Rational::new(1, 3).expect("nonzero denominator");
    let fixed_c = VectorCoeffs::from_pairs(
        IndexWindow::integers(1, 3),
        [
            (HalfIndex::from_int(1), GScalar::from_int(2)),
            (HalfIndex::from_int(2), GScalar::from_int(-1)),
            (HalfIndex::from_int(3), GScalar::ratio(1, 2).expect("nonzero denominator")),
        ],
    )
    .expect("support inside the window");
    checks.push(sine_operator_closed_form_check(
        "sine-operator-closed-form-fixed",
        &fixed_lambda,
        &fixed_c,
        &op_window,
    )?);
    let mut sampler = Sampler::new(cfg.seed);
    let rand_lambda = sampler.rational(3, 4);
    let rand_c = sampler.vector(&IndexWindow::integers(1, 4), 80);
    checks.push(sine_operator_closed_form_check(
        "sine-operator-closed-form-random",
        &rand_lambda,
        &rand_c,
        &op_window,
    )?);

    let w12 = IndexWindow::integers(1, 12);
    let x2 = x2dx_matrix(&w12)?;
    let mut bad = None;
    for r in w12.iter() {
        for c in w12.iter() {
            let n = r.as_int().expect("integer window");
            let m = c.as_int().expect("integer window");
            let want = if n == m {
                PiScalar::pi_multiple(Rational::from_int(-1))
            } else {
                PiScalar::pi_multiple(
                    Rational::new(4 * n * m, n * n - m * m).expect("distinct modes"),
                )
            };
            if x2.entry(r, c) != want && bad.is_none() {
                bad = Some((n, m));
            }
        }
    }
    checks.push(
        CheckResult::assert("x2dx-closed-form", bad.is_none(), || {
            let (n, m) = bad.expect("failure recorded");
            format!("entry ({n},{m}) deviates from 4πnm/(n²−m²) / −π")
        })
        .with_window(&w12),
    );

    let mut mode_pairs = Vec::new();
    for n in 1..=12i64 {
        for m in 1..=12i64 {
            mode_pairs.push((n, m));
        }
    }
    let x2_ref = &x2;
    let max_q = par::map_reduce(
        mode_pairs,
        || 0.0f64,
        move |acc: f64, (n, m)| {
            let exact = x2_ref
                .entry(HalfIndex::from_int(n), HalfIndex::from_int(m))
                .to_f64();
            let (nf, mf) = (n as f64, m as f64);
            let q = quadrature_pairing(
                move |x| nf * x * x * (nf * x).cos(),
                move |x| (mf * x).sin(),
                nodes,
            );
            acc.max((q - exact).abs())
        },
        f64::max,
    );
    checks.push(
        CheckResult::assert("x2dx-vs-quadrature", max_q <= TOL_X2DX_QUADRATURE, || {
            format!("max |quadrature − entry| = {max_q:.3e} over n,m ≤ 12 at {nodes} nodes")
        })
        .with_error(max_q)
        .with_window(&w12),
    );

    let shifted = x2.add_pi_diagonal(&Rational::from_int(1));
    checks.push(CheckResult::assert(
        "x2dx-antisymmetric-shift",
        shifted.is_antisymmetric(),
        || "Ā + πI is not antisymmetric".to_string(),
    ));

    let e6 = flow_integral_error(6, cfg.flow_time, nodes)?;
    let e8 = flow_integral_error(8, cfg.flow_time, nodes)?;
    let e10 = flow_integral_error(10, cfg.flow_time, nodes)?;
    let (v6, v8, v10) = (e6.max_abs_error, e8.max_abs_error, e10.max_abs_error);
    let tol = cfg.flow_tolerance;
    checks.push(
        CheckResult::assert("x2dx-flow-window-8-tolerance", v8 <= tol, || {
            format!(
                "window-8 flow error {v8:.4e} exceeds tolerance {tol:.1e}: truncating the \
                 quadratic field to eight sine modes leaves order-one coupling to the \
                 discarded modes"
            )
        })
        .with_error(v8)
        .with_window("{1..8}"),
    );
    checks.push(
        CheckResult::assert("x2dx-flow-error-monotone", v6 > v8 && v8 > v10, || {
            format!("flow errors do not decrease: {v6:.4e} (6) vs {v8:.4e} (8) vs {v10:.4e} (10)")
        })
        .with_error(v10),
    );
    Ok(checks)
}

// ---------------------------------------------------------------------
// graded realizations
// ---------------------------------------------------------------------

/// Sign convention: with row-convention matrices, `[D(M_S), D(M_T)] =
/// −D(M_{[S,T]})`, so graded fields embed through `−D` (or `i·D` for the
/// circle fields, whose matrices carry an extra factor of `i`).
fn heisenberg_virasoro_suite() -> Result<Vec<CheckResult>, SuiteError> {
    let sc = heisenberg_virasoro(-3, 3, -3, 3);
    let window = IndexWindow::integers(-20, 20);
    let ctx = JSContext::exact(window.clone(), 6);
    let neg = GScalar::from_int(-1);
    let realize = |label: &Label| match label {
        Label::L(a) => Some(d_map(&monomial_field_matrix(*a + 1, &window)).scale(&neg)),
        Label::Y(p) => Some(del(&VectorCoeffs::unit(window.clone(), *p))),
        _ => None,
    };
    Ok(verify_realization(&sc, realize, &ctx)?)
}

fn schrodinger_virasoro_suite() -> Result<Vec<CheckResult>, SuiteError> {
    let half = Rational::new(1, 2).expect("nonzero denominator");
    let third = Rational::new(1, 3).expect("nonzero denominator");
    let cases: [(Rational, Rational, &str); 4] = [
        (Rational::zero(), Rational::zero(), "s0-rho0"),
        (Rational::zero(), Rational::from_int(1), "s0-rho1"),
        (half.clone(), half.clone(), "s12-rho12"),
        (half.clone(), third, "s12-rho13"),
    ];
    let mut checks = Vec::new();
    for (s, rho, tag) in &cases {
        let sc = schrodinger_virasoro(s, rho, -3, 3, -3, 3)?;
        let parity = shift_parity(s)?;
        let window = IndexWindow::with_parity(-20, 20, parity)?;
        let ctx = JSContext::exact(window.clone(), 6);
        let neg = GScalar::from_int(-1);
        let realize = |label: &Label| match label {
            Label::L(m) => sv_action_matrix(*m, rho, s, &window)
                .ok()
                .map(|a| d_map(&a).scale(&neg)),
            Label::Y(p) => Some(del(&VectorCoeffs::unit(window.clone(), *p))),
            _ => None,
        };
        checks.extend(tag_checks(verify_realization(&sc, realize, &ctx)?, tag));
    }
    let zero_case = schrodinger_virasoro(&Rational::zero(), &Rational::zero(), -3, 3, -3, 3)?;
    checks.push(CheckResult::assert(
        "sv-zero-shift-matches-heisenberg-virasoro",
        zero_case == heisenberg_virasoro(-3, 3, -3, 3),
        || "the (0,0) deformation deviates from the undeformed two-sorted algebra".to_string(),
    ));
    Ok(checks)
}

fn circle_witt_suite() -> Result<Vec<CheckResult>, SuiteError> {
    let sc = witt(-3, 3);
    let window = IndexWindow::integers(-20, 20);
    let ctx = JSContext::exact(window.clone(), 6);
    let i_unit = GScalar::new(Rational::zero(), Rational::from_int(1));
    let realize = |label: &Label| match label {
        Label::L(n) => Some(d_map(&circle_field_matrix(*n, &window)).scale(&i_unit)),
        _ => None,
    };
    Ok(verify_realization(&sc, realize, &ctx)?)
}

// ---------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------

fn eval_phi(which: usize, args: &[f64]) -> f64 {
    match which % 4 {
        0 => args.iter().map(|a| a.sin()).sum(),
        1 => args.iter().product(),
        2 => args.iter().sum::<f64>().cos(),
        _ => 1.0 / (1.0 + args.iter().map(|a| a * a).sum::<f64>()),
    }
}

/// A sparse vector with real rational entries.
fn real_vector(sampler: &mut Sampler, window: &IndexWindow, fill: u32) -> VectorCoeffs {
    let mut pairs = Vec::new();
    for idx in window.iter() {
        if sampler.chance(fill) {
            pairs.push((idx, GScalar::from_rational(sampler.rational(1, 2))));
        }
    }
    VectorCoeffs::from_pairs(window.clone(), pairs).expect("support inside the window")
}

/// Substitution-operator iteration on random self-maps, the product rule
/// on up-to-four ∂-factors, and cylindrical derivatives against the
/// symmetric finite-difference flow oracle.
fn dynamics_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let mut sampler = Sampler::new(cfg.seed);
    let mut checks = Vec::new();

    for i in 0..20usize {
        let n = 2 + i % 5;
        let h = sampler.index_map(n);
        let window = IndexWindow::integers(0, n as i64 - 1);
        let phi = sampler.vector(&window, 70);
        let max_power = 1 + (i % 4) as u32;
        checks.extend(tag_checks(dynamics_check(&h, &phi, max_power)?, &format!("m{i:02}")));
    }

    for i in 0..20usize {
        let window = IndexWindow::integers(-3, 3);
        let a = sampler.entire_matrix(&window, 40);
        let factors = 1 + i % 4;
        let fs: Vec<VectorCoeffs> =
            (0..factors).map(|_| sampler.vector(&window, 60)).collect();
        let ctx = JSContext::exact(window.clone(), 0);
        checks.push(tag_check(n_point_motion_check(&a, &fs, &ctx)?, &format!("i{i:02}")));
    }

    // Real coefficients only: the dot pairing projects to real parts, so
    // the two derivative routes coincide over the real sequence model.
    // Entries are kept at magnitude ≤ 1/2 so the fixed finite-difference
    // steps stay far from both truncation and cancellation error at the
    // 1e−5 relative tolerance.
    let half_scale = GScalar::ratio(1, 2).expect("nonzero denominator");
    for i in 0..50usize {
        let dim = 2 + (i % 5) as i64;
        let window = IndexWindow::integers(1, dim);
        let which = i % 4;
        let mut attempts = 0;
        let (a, ls, x, cyl) = loop {
            let gm = sampler.rational_gmatrix(window.len(), window.len(), 1, 2);
            let a = PairingMatrix::from_gmatrix(window.clone(), Extent::Entire, &gm)?
                .scale(&half_scale);
            let count = 1 + i % 3;
            let ls: Vec<VectorCoeffs> = (0..count)
                .map(|_| real_vector(&mut sampler, &window, 70).scale(&half_scale))
                .collect();
            let x = real_vector(&mut sampler, &window, 80).scale(&half_scale);
            let phi = move |args: &[f64]| eval_phi(which, args);
            let cyl = cylindrical_derivative(&a, &ls, &phi, &x);
            attempts += 1;
            // Resample until the derivative is large enough that the
            // ~5e−9 absolute finite-difference noise cannot matter.
            if cyl.abs() >= 0.005 || attempts > 500 {
                break (a, ls, x, cyl);
            }
        };
        let phi = move |args: &[f64]| eval_phi(which, args);
        let forward = flow_derivative(&a, &ls, &phi, &x, FLOW_DIFF_STEP);
        let backward = flow_derivative(&a, &ls, &phi, &x, -FLOW_DIFF_STEP);
        let flow = 0.5 * (forward + backward);
        let rel = (cyl - flow).abs() / cyl.abs();
        checks.push(
            CheckResult::assert(
                format!("cylindrical-vs-flow-i{i:02}"),
                rel <= TOL_CYLINDRICAL_RELATIVE,
                || {
                    format!(
                        "relative error {rel:.3e} between cylindrical {cyl:.6e} and flow {flow:.6e}"
                    )
                },
            )
            .with_error(rel),
        );
    }
    Ok(checks)
}

// ---------------------------------------------------------------------
// cuntz-identities
// ---------------------------------------------------------------------

/// The four isometry-algebra identities on seeded random matrix/vector
/// instances over windows of size four through eight.
fn cuntz_identities_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let count = require_instances(cfg)?;
    let mut sampler = Sampler::new(cfg.seed);
    let mut inputs = Vec::with_capacity(count);
    for i in 0..count {
        let size = 4 + (i % 5) as i64;
        let window = IndexWindow::integers(1, size);
        let a = sampler.entire_matrix(&window, 50);
        let b = sampler.entire_matrix(&window, 50);
        let l = sampler.entire_matrix(&window, 50);
        let h = sampler.vector(&window, 60);
        let g = sampler.vector(&window, 60);
        let f = sampler.vector(&window, 60);
        inputs.push((i, a, b, l, h, g, f));
    }
    let groups = par::map_collect(
        inputs,
        |(i, a, b, l, h, g, f)| -> Result<Vec<CheckResult>, PairingError> {
            Ok(tag_checks(verify_cuntz_relations(&a, &b, &l, &h, &g, &f)?, &format!("i{i:03}")))
        },
    );
    collect_groups(groups)
}

// ---------------------------------------------------------------------
// homotope
// ---------------------------------------------------------------------

/// Homotope embeddings of 2×2 and 3×3 matrix algebras: the
/// antihomomorphism law, q-commutators, the first-order identities with
/// the weight as pairing, and kernel behavior for invertible, zero, and
/// rank-one weights.
fn homotope_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let mut sampler = Sampler::new(cfg.seed);
    let q_values = [
        GScalar::from_int(-1),
        GScalar::zero(),
        GScalar::one(),
        GScalar::ratio(1, 2).expect("nonzero denominator"),
    ];
    let mut checks = Vec::new();
    for &n in &[2usize, 3] {
        for r in 0..10usize {
            let rho = sampler.gmatrix(n, n, 3);
            let model = matrix_algebra(n, &rho);
            let dim = model.dim();
            let a = sampler.coords(dim, 3);
            let b = sampler.coords(dim, 3);
            let tag = format!("n{n}-r{r:02}");
            checks.push(tag_check(homotope_check(&model, &a, &b), &tag));
            checks.push(tag_check(
                q_commutator_check(&model, &a, &b, &q_values[r % q_values.len()]),
                &tag,
            ));
            let la = model.left_mult_matrix(&a);
            let lb = model.left_mult_matrix(&b);
            let lmat = model.l_matrix();
            let window = model.window();
            let h = sampler.vector(&window, 70);
            let g = sampler.vector(&window, 70);
            let f = sampler.vector(&window, 70);
            checks.extend(tag_checks(
                verify_cuntz_relations(&la, &lb, &lmat, &h, &g, &f)?,
                &tag,
            ));
        }
        let invertible = sampler.invertible_gmatrix(n, 3);
        checks.push(tag_check(
            injectivity_check(&matrix_algebra(n, &invertible)),
            &format!("n{n}-invertible"),
        ));
        let zero_model = matrix_algebra(n, &GMatrix::zeros(n, n));
        let kernel = embed_kernel(&zero_model);
        checks.push(CheckResult::assert(
            format!("homotope-zero-weight-kernel-n{n}"),
            kernel.len() == n * n,
            || format!("zero weight kernel has dimension {}, expected {}", kernel.len(), n * n),
        ));
        checks.push(CheckResult::assert(
            format!("homotope-zero-weight-detected-n{n}"),
            injectivity_check(&zero_model).status.is_fail(),
            || "the injectivity check did not flag the zero weight".to_string(),
        ));
    }
    let mut rank_one = GMatrix::zeros(2, 2);
    rank_one[(0, 0)] = GScalar::one();
    let kernel = embed_kernel(&matrix_algebra(2, &rank_one));
    checks.push(CheckResult::assert(
        "homotope-rank-one-weight-kernel",
        kernel.len() == 2,
        || format!("rank-one weight kernel has dimension {}, expected 2", kernel.len()),
    ));
    Ok(checks)
}

// ---------------------------------------------------------------------
// wavelet
// ---------------------------------------------------------------------

fn isometry_relations_check(sys: &QMFSystem, max_exp: i64) -> CheckResult {
    let n = sys.n();
    let name = format!("wavelet-isometry-relations-n{n}");
    for k in -max_exp..=max_exp {
        let f = LaurentPoly::monomial(k);
        for i in 0..n {
            let si = sys.s(i, &f);
            for j in 0..n {
                let got = sys.s_star(j, &si);
                let want = if i == j { f.clone() } else { LaurentPoly::zero() };
                if got != want {
                    return CheckResult::fail(
                        name,
                        format!("S*_{j} S_{i} on z^{{{k}}} gives {got}"),
                    );
                }
            }
        }
    }
    CheckResult::pass(name)
}

fn completeness_check(sys: &QMFSystem, max_exp: i64) -> CheckResult {
    let n = sys.n();
    let name = format!("wavelet-completeness-n{n}");
    for k in -max_exp..=max_exp {
        let f = LaurentPoly::monomial(k);
        let mut terms: Vec<(i64, GScalar)> = Vec::new();
        for i in 0..n {
            let branch = sys.s(i, &sys.s_star(i, &f));
            terms.extend(branch.terms().map(|(j, c)| (j, c.clone())));
        }
        let total = LaurentPoly::from_pairs(terms);
        if total != f {
            return CheckResult::fail(
                name,
                format!("Σ S_i S*_i on z^{{{k}}} gives {total}"),
            );
        }
    }
    CheckResult::pass(name)
}

/// QMF verification of the standard monomial systems, the isometry and
/// completeness relations on a monomial range, the two evaluation routes
/// of the induced operator on random rational pairings, and a broken
/// filter as negative control.
fn wavelet_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    if cfg.max_exp < 1 {
        return Err(SuiteError::InvalidParameter {
            name: "max-exp",
            reason: format!("exponent range {} must be at least 1", cfg.max_exp),
        });
    }
    let mut branch_counts = vec![2usize, 3, 4];
    if !branch_counts.contains(&cfg.n) {
        branch_counts.push(cfg.n);
    }
    let mut checks = Vec::new();
    for &n in &branch_counts {
        let sys = QMFSystem::standard(n)?;
        for (idx, c) in sys.verify().into_iter().enumerate() {
            checks.push(tag_check(c, &format!("n{n}-{idx:02}")));
        }
        checks.push(isometry_relations_check(&sys, cfg.max_exp));
        checks.push(completeness_check(&sys, cfg.max_exp));
    }
    let mut sampler = Sampler::new(cfg.seed);
    let mut inputs = Vec::new();
    for i in 0..50usize {
        let n = branch_counts[i % 3];
        let p = sampler.rational_gmatrix(n, n, 3, 3);
        let f = sampler.laurent_poly(10, 6);
        inputs.push((i, n, p, f));
    }
    let groups =
        par::map_collect(inputs, |(i, n, p, f)| -> Result<Vec<CheckResult>, WaveletError> {
            let sys = QMFSystem::standard(n)?;
            Ok(vec![tag_check(verify_wavelet_d(&p, &sys, &f)?, &format!("i{i:02}"))])
        });
    checks.extend(collect_groups(groups)?);
    let broken = QMFSystem::new(
        2,
        vec![LaurentPoly::one(), LaurentPoly::term(GScalar::from_int(2), 1)],
    )?;
    let failures = broken.verify().into_iter().filter(|c| c.status.is_fail()).count();
    checks.push(CheckResult::assert("wavelet-broken-filter-detected", failures > 0, || {
        "a non-unit filter passed QMF verification".to_string()
    }));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: &str) -> SuiteConfig {
        let mut cfg = SuiteConfig::default_for(suite);
        cfg.instances = 6;
        cfg.window = 6;
        cfg.max_exp = 12;
        cfg
    }

    #[test]
    fn every_named_suite_runs() {
        for name in suite_names() {
            let report = run_suite(&small(name)).unwrap();
            assert_eq!(report.suite, *name);
            assert!(!report.checks.is_empty(), "suite {name} produced no checks");
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let err = run_suite(&SuiteConfig::default_for("nope")).unwrap_err();
        assert!(matches!(err, SuiteError::UnknownSuite(s) if s == "nope"));
    }

    #[test]
    fn js_suite_passes_and_tags_instances() {
        let report = run_suite(&small("js-identities")).unwrap();
        assert!(report.all_passed(), "failures: {:?}", report.failures().collect::<Vec<_>>());
        assert!(report.find("comm-dd-i000").is_some());
        assert!(report.find("comm-d-delbar-i005").is_some());
    }

    #[test]
    fn exact_suites_pass() {
        for name in [
            "weyl-core",
            "killing-cocycle",
            "heisenberg-virasoro",
            "schrodinger-virasoro",
            "circle-witt",
            "dynamics",
            "cuntz-identities",
            "homotope",
            "wavelet",
        ] {
            let report = run_suite(&small(name)).unwrap();
            assert!(
                report.all_passed(),
                "suite {name} failures: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn sine_suite_reports_flow_truncation_honestly() {
        let report = run_suite(&small("sine-examples")).unwrap();
        for name in [
            "sine-triple-vs-quadrature",
            "sine-operator-closed-form-fixed",
            "sine-operator-closed-form-random",
            "x2dx-closed-form",
            "x2dx-vs-quadrature",
            "x2dx-antisymmetric-shift",
        ] {
            let check = report.find(name).unwrap();
            assert!(check.status.is_pass(), "{name}: {:?}", check);
        }
        let flow = report.find("x2dx-flow-window-8-tolerance").unwrap();
        assert!(flow.max_abs_error.is_some());
        let mono = report.find("x2dx-flow-error-monotone").unwrap();
        assert!(mono.status.is_pass(), "{:?}", mono);
    }

    #[test]
    fn sine_suite_flags_insufficient_quadrature() {
        let mut cfg = small("sine-examples");
        cfg.quadrature_nodes = 100;
        let report = run_suite(&cfg).unwrap();
        // 100 Simpson nodes still integrate the band-limited triple
        // products exactly; the non-periodic quadratic-field integrands
        // are what loses accuracy first.
        assert!(report.find("x2dx-vs-quadrature").unwrap().status.is_fail());
        assert!(!report.all_passed());
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        for name in ["js-identities", "dynamics", "wavelet"] {
            let a = run_suite(&small(name)).unwrap().to_json();
            let b = run_suite(&small(name)).unwrap().to_json();
            assert_eq!(a, b, "suite {name} is not deterministic");
        }
    }

    #[test]
    fn seeds_change_instances_but_not_names() {
        let mut cfg = small("js-identities");
        let first = run_suite(&cfg).unwrap();
        cfg.seed = 8;
        let second = run_suite(&cfg).unwrap();
        let names = |r: &Report| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&first), names(&second));
        assert!(first.all_passed() && second.all_passed());
        assert_ne!(first.to_json(), second.to_json(), "seed is recorded in the report");
    }
}
