//! The identity suites. Each case compares two sides on a finite window,
//! once in floating point and, when every input is rational, once exactly.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::oracle::symbolic_matrix;
use crate::asymptotics::hankel_step;
use crate::error::{Error, Result};
use crate::operators::{evaluate_section, sg, volterra, volterra_compiled, Expr, OpSpec};
use crate::scalar::{cx_ratio, rational_from_f64, rational_to_string, Real};
use crate::sections::{materialize, sub, FiniteSection};
use crate::series::{BilateralCoeffs, Coefficient, SymbolSpec};

/// Suite names in the order they run and report.
pub const SUITE_MANIFEST: [&str; 8] = [
    "commutator",
    "decomposition",
    "toeplitz_product",
    "sat_defect",
    "esshank_expansion",
    "esstoep_identity",
    "esshank_identity",
    "hankel_step_zero",
];

/// Relative Frobenius tolerance of the float path.
pub const FLOAT_TOL: f64 = 1e-12;

pub const DEFAULT_WINDOW: usize = 32;

/// Largest step index checked by `hankel_step_zero`.
const HANKEL_STEP_MAX_N: usize = 64;

type Builder = fn(&RunConfig, usize) -> Result<Vec<Case>>;

fn registry() -> [(&'static str, Builder); 8] {
    [
        ("commutator", commutator_cases),
        ("decomposition", decomposition_cases),
        ("toeplitz_product", toeplitz_product_cases),
        ("sat_defect", sat_defect_cases),
        ("esshank_expansion", esshank_expansion_cases),
        ("esstoep_identity", esstoep_cases),
        ("esshank_identity", esshank_identity_cases),
        ("hankel_step_zero", hankel_step_zero_cases),
    ]
}

/// Fails when the suite registry and the manifest drift apart.
pub fn check_manifest() -> Result<()> {
    let names: Vec<&str> = registry().iter().map(|(n, _)| *n).collect();
    if names != SUITE_MANIFEST {
        return Err(Error::Invalid(format!(
            "suite registry {names:?} does not match the manifest"
        )));
    }
    Ok(())
}

/// Side of an identity that is not a plain operator expression.
#[derive(Clone, Debug)]
enum Built {
    Zero,
    /// `diag(l / (n + l))`.
    SatDiagonal {
        n: usize,
    },
    /// `V_h − V_z V_g S` with `h' = (1 − z²) g'`.
    HankelCompanion {
        g: SymbolSpec,
    },
    /// Column `n` is `Σ_k n/(k+n) g_k z^{k+n} − (n+1)/(k+n+1) g_k z^{k+n+2}`.
    EsshankExpansion {
        g: SymbolSpec,
    },
    /// `Jₙ T Sⁿ⁺¹` of a Volterra or `S_g` rule.
    HankelStep {
        g: SymbolSpec,
        sg: bool,
        n: usize,
    },
}

impl Built {
    fn is_rational(&self) -> bool {
        match self {
            Built::Zero | Built::SatDiagonal { .. } => true,
            Built::HankelCompanion { g }
            | Built::EsshankExpansion { g }
            | Built::HankelStep { g, .. } => g.is_rational(),
        }
    }

    fn build<R: Real>(&self, rows: usize, cols: usize) -> Result<FiniteSection<R>> {
        Ok(match self {
            Built::Zero => FiniteSection::zeros(rows, cols),
            Built::SatDiagonal { n } => FiniteSection::from_fn(rows, cols, |m, l| {
                if m == l {
                    cx_ratio::<R>(l as i64, (n + l) as i64)
                } else {
                    Complex::zero()
                }
            }),
            Built::HankelCompanion { g } => {
                let h = volterra_compiled(&g.compile::<R>()?.hankel_companion());
                let tail = Expr::compose(vec![
                    Expr::volterra(SymbolSpec::monomial(1)),
                    Expr::volterra(g.clone()),
                    Expr::shift(1),
                ]);
                sub(
                    &materialize(&h, rows, cols),
                    &evaluate_section::<R>(&tail, rows, cols, None)?,
                )?
            }
            Built::EsshankExpansion { g } => {
                let c = g.compile::<R>()?;
                FiniteSection::from_fn(rows, cols, |m, n| {
                    let mut v = Complex::zero();
                    if m >= n && n > 0 {
                        let k = m - n;
                        v = v + cx_ratio::<R>(n as i64, (k + n) as i64) * c.coeff(k);
                    }
                    if m >= n + 2 {
                        let k = m - n - 2;
                        v = v - cx_ratio::<R>((n + 1) as i64, (k + n + 1) as i64) * c.coeff(k);
                    }
                    v
                })
            }
            Built::HankelStep { g, sg: is_sg, n } => {
                let rule = if *is_sg {
                    sg::<R>(g)?
                } else {
                    volterra::<R>(g)?
                };
                hankel_step(&rule, *n, rows, cols)
            }
        })
    }
}

#[derive(Clone, Debug)]
enum Side {
    Expr(Expr),
    Built(Built),
}

impl Side {
    fn is_rational(&self) -> bool {
        match self {
            Side::Expr(e) => e.is_rational(),
            Side::Built(b) => b.is_rational(),
        }
    }

    fn section<R: Real>(&self, rows: usize, cols: usize) -> Result<FiniteSection<R>> {
        match self {
            Side::Expr(e) => evaluate_section::<R>(e, rows, cols, None),
            Side::Built(b) => b.build::<R>(rows, cols),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Case {
    label: String,
    inputs: BTreeMap<String, String>,
    lhs: Side,
    rhs: Side,
    rows: usize,
    cols: usize,
    /// Diagonal entries to tabulate against both SAT formulas.
    probe: Option<SatProbe>,
}

#[derive(Clone, Debug)]
struct SatProbe {
    n: usize,
    ls: Vec<usize>,
}

/// One row of the coefficient table of the SAT defect `(I − S*ⁿV_{zⁿ})e_l`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SatCoefficient {
    pub n: usize,
    pub l: usize,
    /// Entry `(l, l)` read from the exact section.
    pub observed: String,
    /// Entry `(l, l)` from the power-series oracle.
    pub oracle: String,
    /// `l / (n + l)`.
    pub derived: String,
    /// `(l + 1) / (n + l + 1)`, the same formula with the index shifted by one.
    pub shifted: String,
    pub matches_derived: bool,
    pub matches_shifted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub inputs: BTreeMap<String, String>,
    pub window: (usize, usize),
    pub exact_path_used: bool,
    /// Frobenius norm of `lhs − rhs`: the exact one when the rational path
    /// ran, the float one otherwise.
    pub residual: Option<f64>,
    pub float_residual: Option<f64>,
    pub float_relative_residual: Option<f64>,
    /// Whether the power-series oracle reproduced both exact sides.
    pub oracle_agrees: Option<bool>,
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<SatCoefficient>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub float_tolerance: f64,
    pub exact_tolerance: f64,
    pub cases: Vec<CaseResult>,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub pass: bool,
}

fn exact_residual(l: &FiniteSection<BigRational>, r: &FiniteSection<BigRational>) -> Result<f64> {
    let d = sub(l, r)?;
    Ok(if d.is_zero() {
        0.0
    } else {
        d.frobenius().max(f64::MIN_POSITIVE)
    })
}

fn oracle_side(
    side: &Side,
    rows: usize,
    cols: usize,
    exact: &FiniteSection<BigRational>,
) -> Result<Option<bool>> {
    match side {
        Side::Expr(e) => {
            let sym = symbolic_matrix(e, rows, cols, 2 * (rows + cols) + 64)?;
            Ok(Some(sym.entries() == exact.entries()))
        }
        Side::Built(_) => Ok(None),
    }
}

fn run_case(case: &Case, exact_mode: Option<bool>) -> CaseResult {
    let mut out = CaseResult {
        label: case.label.clone(),
        inputs: case.inputs.clone(),
        window: (case.rows, case.cols),
        exact_path_used: false,
        residual: None,
        float_residual: None,
        float_relative_residual: None,
        oracle_agrees: None,
        skipped: None,
        coefficients: Vec::new(),
        pass: false,
    };
    let rational = case.lhs.is_rational() && case.rhs.is_rational();
    if exact_mode == Some(true) && !rational {
        out.skipped = Some("rational path forced but the inputs are irrational".into());
        return out;
    }
    match run_paths(case, rational && exact_mode != Some(false), &mut out) {
        Ok(()) => {}
        Err(e) => out.skipped = Some(e.to_string()),
    }
    out.pass = out.skipped.is_none()
        && out.float_relative_residual.is_some_and(|r| r < FLOAT_TOL)
        && (!out.exact_path_used
            || (out.residual == Some(0.0) && out.oracle_agrees != Some(false)))
        && out.coefficients.iter().all(|c| c.matches_derived);
    out
}

fn run_paths(case: &Case, exact: bool, out: &mut CaseResult) -> Result<()> {
    let (rows, cols) = (case.rows, case.cols);
    let certify = |s: &FiniteSection<f64>| {
        if s.fully_exact() {
            Ok(())
        } else {
            Err(Error::Uncertifiable(format!(
                "window too small for certification ({} of {} entries exact)",
                s.exact_window().exact_count(),
                rows * cols
            )))
        }
    };
    let lf = case.lhs.section::<f64>(rows, cols)?;
    let rf = case.rhs.section::<f64>(rows, cols)?;
    certify(&lf)?;
    certify(&rf)?;
    let d = sub(&lf, &rf)?.frobenius();
    let scale = lf.frobenius().max(rf.frobenius());
    out.float_residual = Some(d);
    out.float_relative_residual = Some(if scale == 0.0 { d } else { d / scale });
    out.residual = Some(d);

    if exact {
        let lq = case.lhs.section::<BigRational>(rows, cols)?;
        let rq = case.rhs.section::<BigRational>(rows, cols)?;
        out.residual = Some(exact_residual(&lq, &rq)?);
        out.exact_path_used = true;
        let agree = [
            oracle_side(&case.lhs, rows, cols, &lq)?,
            oracle_side(&case.rhs, rows, cols, &rq)?,
        ];
        out.oracle_agrees = agree.into_iter().flatten().reduce(|a, b| a && b);
        if let (Some(p), Side::Expr(e)) = (&case.probe, &case.lhs) {
            let sym = symbolic_matrix(e, rows, cols, 2 * (rows + cols) + 64)?;
            out.coefficients =
                p.ls.iter()
                    .map(|&l| sat_coefficient(p.n, l, &lq, &sym))
                    .collect();
        }
    }
    Ok(())
}

fn sat_coefficient(
    n: usize,
    l: usize,
    exact: &FiniteSection<BigRational>,
    sym: &FiniteSection<BigRational>,
) -> SatCoefficient {
    let q = |p: usize, d: usize| BigRational::new(p.into(), d.into());
    let (derived, shifted) = (q(l, n + l), q(l + 1, n + l + 1));
    let observed = exact.get(l, l).clone();
    let real = observed.im.is_zero() && *sym.get(l, l) == observed;
    SatCoefficient {
        n,
        l,
        observed: complex_string(&observed),
        oracle: complex_string(sym.get(l, l)),
        derived: rational_to_string(&derived),
        shifted: rational_to_string(&shifted),
        matches_derived: real && observed.re == derived,
        matches_shifted: real && observed.re == shifted,
    }
}

fn complex_string(z: &Complex<BigRational>) -> String {
    if z.im.is_zero() {
        rational_to_string(&z.re)
    } else {
        format!(
            "{}+{}i",
            rational_to_string(&z.re),
            rational_to_string(&z.im)
        )
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, config: &RunConfig) -> Result<SuiteResult> {
    check_manifest()?;
    let (_, builder) = registry()
        .into_iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Unknown {
            kind: "suite",
            name: name.to_string(),
        })?;
    let window = config.window.unwrap_or(DEFAULT_WINDOW);
    if window < 4 {
        return Err(Error::Invalid(format!(
            "window {window} is too small for the identity suites"
        )));
    }
    let cases = builder(config, window)?;
    let results: Vec<CaseResult> = cases
        .par_iter()
        .map(|c| run_case(c, config.exact))
        .collect();
    let skipped = results.iter().filter(|c| c.skipped.is_some()).count();
    let pass = !results.is_empty() && results.iter().all(|c| c.pass);
    let note = (name == "sat_defect").then(|| {
        "the diagonal of I − S*ⁿV_{zⁿ} is l/(n+l); the index-shifted (l+1)/(n+l+1) is reported beside it".to_string()
    });
    Ok(SuiteResult {
        suite: name.to_string(),
        float_tolerance: FLOAT_TOL,
        exact_tolerance: 0.0,
        cases: results,
        skipped,
        note,
        pass,
    })
}

fn neg(e: Expr) -> Expr {
    Expr::Scale {
        scale: (Coefficient::real(-1, 1), Box::new(e)),
    }
}

fn diff(a: Expr, b: Expr) -> Expr {
    Expr::Add {
        add: vec![a, neg(b)],
    }
}

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn case(
    label: String,
    inputs: BTreeMap<String, String>,
    lhs: Side,
    rhs: Side,
    window: usize,
) -> Case {
    Case {
        label,
        inputs,
        lhs,
        rhs,
        rows: window,
        cols: window,
        probe: None,
    }
}

/// `g(0)` as an exact coefficient; irrational values become the dyadic
/// rational of their double, which the float path reproduces bit for bit.
fn constant_term(g: &SymbolSpec) -> Result<Coefficient> {
    if g.is_rational() {
        return Ok(Coefficient(g.compile::<BigRational>()?.coeff(0)));
    }
    let c = g.compile::<f64>()?.coeff(0);
    let r = |x: f64| {
        rational_from_f64(x).ok_or_else(|| Error::Invalid(format!("non-finite g(0) = {x}")))
    };
    Ok(Coefficient::new(r(c.re)?, r(c.im)?))
}

fn commutator_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (name, g) in config.symbols_or_registry() {
        for n in [1u32, 2, 5] {
            // V_{zⁿ}V_g = SⁿV_g − V_gSⁿ
            let lhs = Expr::compose(vec![
                Expr::volterra(SymbolSpec::monomial(n)),
                Expr::volterra(g.clone()),
            ]);
            let rhs = diff(
                Expr::compose(vec![Expr::shift(n as i64), Expr::volterra(g.clone())]),
                Expr::compose(vec![Expr::volterra(g.clone()), Expr::shift(n as i64)]),
            );
            cases.push(case(
                format!("V_(z^{n}) V_g = S^{n} V_g - V_g S^{n}, g = {name}"),
                inputs(&[("g", name.clone()), ("n", n.to_string())]),
                Side::Expr(lhs),
                Side::Expr(rhs),
                window,
            ));
        }
    }
    Ok(cases)
}

fn decomposition_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    config
        .symbols_or_registry()
        .into_iter()
        .map(|(name, g)| {
            let g0 = constant_term(&g)?;
            let rhs = Expr::Add {
                add: vec![
                    Expr::sg(g.clone()),
                    Expr::volterra(g.clone()),
                    Expr::Scale {
                        scale: (g0.clone(), Box::new(Expr::op(OpSpec::Delta0))),
                    },
                ],
            };
            Ok(case(
                format!("M_g = S_g + V_g + g(0) delta_0, g = {name}"),
                inputs(&[("g", name), ("g0", serde_json::to_string(&g0)?)]),
                Side::Expr(Expr::mult(g)),
                Side::Expr(rhs),
                window,
            ))
        })
        .collect()
}

fn to_spec(b: &BilateralCoeffs<BigRational>) -> Vec<(i64, Coefficient)> {
    b.iter().map(|(k, v)| (k, Coefficient(v.clone()))).collect()
}

fn random_band(rng: &mut ChaCha8Rng, band: i64) -> BilateralCoeffs<BigRational> {
    let q = |rng: &mut ChaCha8Rng| {
        BigRational::new(
            rng.random_range(-9i64..=9).into(),
            rng.random_range(1i64..=7).into(),
        )
    };
    BilateralCoeffs::new((-band..=band).map(|k| {
        let re = q(rng);
        let im = if rng.random_bool(0.5) {
            q(rng)
        } else {
            BigRational::zero()
        };
        (k, Complex::new(re, im))
    }))
}

fn toeplitz_product_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    let real = |pairs: &[(i64, i64, i64)]| {
        BilateralCoeffs::new(pairs.iter().map(|&(k, p, q)| {
            (
                k,
                Complex::new(BigRational::new(p.into(), q.into()), BigRational::zero()),
            )
        }))
    };
    let mut pairs = vec![
        (
            real(&[(-1, 1, 1), (1, 1, 1)]),
            real(&[(-2, 1, 2), (0, 1, 1), (3, -1, 3)]),
        ),
        (
            real(&[(-4, 1, 1), (4, 2, 1)]),
            real(&[(-4, -1, 5), (-1, 3, 1), (2, 1, 7)]),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..3 {
        pairs.push((random_band(&mut rng, 4), random_band(&mut rng, 4)));
    }
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(i, (b, q))| {
            let (bs, qs) = (to_spec(&b), to_spec(&q));
            let lhs = Expr::op(OpSpec::Toeplitz {
                coeffs: to_spec(&b.mul(&q)),
            });
            let rhs = Expr::Add {
                add: vec![
                    Expr::compose(vec![
                        Expr::op(OpSpec::Toeplitz { coeffs: bs.clone() }),
                        Expr::op(OpSpec::Toeplitz { coeffs: qs.clone() }),
                    ]),
                    Expr::compose(vec![
                        Expr::op(OpSpec::Hankel {
                            coeffs: to_spec(&b.reflect()),
                        }),
                        Expr::op(OpSpec::Hankel { coeffs: qs.clone() }),
                    ]),
                ],
            };
            let show = |c: &[(i64, Coefficient)]| serde_json::to_string(c).unwrap_or_default();
            case(
                format!("T_bq = T_b T_q + H_b~ H_q, pair {i}"),
                inputs(&[("b", show(&bs)), ("q", show(&qs))]),
                Side::Expr(lhs),
                Side::Expr(rhs),
                window,
            )
        })
        .collect())
}

fn sat_defect_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for n in [1usize, 2, 3, 5, 8] {
        // I − S*ⁿV_{zⁿ} is diagonal with entries l/(n+l).
        let lhs = diff(
            Expr::op(OpSpec::Identity),
            Expr::compose(vec![
                Expr::op(OpSpec::Backshift { n: n as i64 }),
                Expr::volterra(SymbolSpec::monomial(n as u32)),
            ]),
        );
        let mut c = case(
            format!("I - S*^{n} V_(z^{n}) = diag(l/({n}+l))"),
            inputs(&[("n", n.to_string())]),
            Side::Expr(lhs),
            Side::Built(Built::SatDiagonal { n }),
            window,
        );
        c.probe = Some(SatProbe {
            n,
            ls: (0..4.min(window)).collect(),
        });
        cases.push(c);
    }
    for (name, g) in config.symbols_or_registry() {
        for n in [1i64, 4] {
            // S*ⁿV_gSⁿ = V_g − S*ⁿV_{zⁿ}V_g
            let lhs = Expr::compose(vec![
                Expr::op(OpSpec::Backshift { n }),
                Expr::volterra(g.clone()),
                Expr::shift(n),
            ]);
            let rhs = diff(
                Expr::volterra(g.clone()),
                Expr::compose(vec![
                    Expr::op(OpSpec::Backshift { n }),
                    Expr::volterra(SymbolSpec::monomial(n as u32)),
                    Expr::volterra(g.clone()),
                ]),
            );
            cases.push(case(
                format!("S*^{n} V_g S^{n} = V_g - S*^{n} V_(z^{n}) V_g, g = {name}"),
                inputs(&[("g", name.clone()), ("n", n.to_string())]),
                Side::Expr(lhs),
                Side::Expr(rhs),
                window,
            ));
        }
    }
    Ok(cases)
}

fn esshank_expansion_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    Ok(config
        .symbols_or_registry()
        .into_iter()
        .map(|(name, g)| {
            let lhs = diff(
                Expr::sg(g.clone()),
                Expr::compose(vec![Expr::shift(1), Expr::sg(g.clone()), Expr::shift(1)]),
            );
            case(
                format!("(S_g - S S_g S) e_n expansion, g = {name}"),
                inputs(&[("g", name)]),
                Side::Expr(lhs),
                Side::Built(Built::EsshankExpansion { g }),
                window,
            )
        })
        .collect())
}

fn esstoep_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (name, g) in config.symbols_or_registry() {
        let vz_vg = Expr::compose(vec![
            Expr::volterra(SymbolSpec::monomial(1)),
            Expr::volterra(g.clone()),
        ]);
        cases.push(case(
            format!("S V_g - V_g S = V_z V_g, g = {name}"),
            inputs(&[("g", name.clone())]),
            Side::Expr(diff(
                Expr::compose(vec![Expr::shift(1), Expr::volterra(g.clone())]),
                Expr::compose(vec![Expr::volterra(g.clone()), Expr::shift(1)]),
            )),
            Side::Expr(vz_vg.clone()),
            window,
        ));
        // From the decomposition: S S_g − S_g S = −V_zV_g − g(0) S δ₀.
        let g0 = constant_term(&g)?;
        let rhs = Expr::Add {
            add: vec![
                neg(vz_vg),
                Expr::Scale {
                    scale: (
                        Coefficient(-g0.0.clone()),
                        Box::new(Expr::compose(vec![
                            Expr::shift(1),
                            Expr::op(OpSpec::Delta0),
                        ])),
                    ),
                },
            ],
        };
        cases.push(case(
            format!("S S_g - S_g S = -V_z V_g - g(0) S delta_0, g = {name}"),
            inputs(&[("g", name)]),
            Side::Expr(diff(
                Expr::compose(vec![Expr::shift(1), Expr::sg(g.clone())]),
                Expr::compose(vec![Expr::sg(g.clone()), Expr::shift(1)]),
            )),
            Side::Expr(rhs),
            window,
        ));
    }
    Ok(cases)
}

fn esshank_identity_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (name, g) in config.symbols_or_registry() {
        let svs = Expr::compose(vec![
            Expr::shift(1),
            Expr::volterra(g.clone()),
            Expr::shift(1),
        ]);
        cases.push(case(
            format!("S V_g S = V_g S^2 + V_z V_g S, g = {name}"),
            inputs(&[("g", name.clone())]),
            Side::Expr(svs.clone()),
            Side::Expr(Expr::Add {
                add: vec![
                    Expr::compose(vec![Expr::volterra(g.clone()), Expr::shift(2)]),
                    Expr::compose(vec![
                        Expr::volterra(SymbolSpec::monomial(1)),
                        Expr::volterra(g.clone()),
                        Expr::shift(1),
                    ]),
                ],
            }),
            window,
        ));
        cases.push(case(
            format!("V_g - S V_g S = V_h - V_z V_g S, h' = (1-z^2) g', g = {name}"),
            inputs(&[("g", name)]),
            Side::Expr(diff(Expr::volterra(g.clone()), svs)),
            Side::Built(Built::HankelCompanion { g }),
            window,
        ));
    }
    Ok(cases)
}

fn hankel_step_zero_cases(config: &RunConfig, window: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (name, g) in config.symbols_or_registry() {
        for is_sg in [false, true] {
            for n in 0..=HANKEL_STEP_MAX_N {
                let family = if is_sg { "sg" } else { "volterra" };
                cases.push(Case {
                    label: format!("J_{n} T S^{} = 0, T = {family}({name})", n + 1),
                    inputs: inputs(&[
                        ("g", name.clone()),
                        ("operator", family.into()),
                        ("n", n.to_string()),
                    ]),
                    lhs: Side::Built(Built::HankelStep {
                        g: g.clone(),
                        sg: is_sg,
                        n,
                    }),
                    rhs: Side::Built(Built::Zero),
                    rows: (n + 1).min(window),
                    cols: window,
                    probe: None,
                });
            }
        }
    }
    Ok(cases)
}
