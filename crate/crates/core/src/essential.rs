//! Commutator defects and numerical compactness probes.
//!
//! `T` is essentially Toeplitz when `ST − TS` is compact and essentially
//! Hankel when `T − STS` is compact. On a finite window compactness is
//! judged from how the column-tail norms `‖T·P_{≥n}‖` and the singular
//! values `σ_n` decay in `n`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    diagnose_hankel, diagnose_toeplitz, fit_rate, hankel_step, zero_rule, DiagnoseOptions,
    TestVectorFamily, Topology, TopologyVerdict,
};
use crate::error::{Error, Result};
use crate::operators::{backshift_pow, evaluate, mult, sg, shift_pow, volterra, Expr};
use crate::scalar::{self, Real};
use crate::sections::{
    compose, op_norm_with, singular_values, sub, FiniteSection, NormOptions, Operand,
};
use crate::series::{ClassFlag, ClassFlags, SymbolKind, SymbolSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectKind {
    /// `ST − TS`
    LeftCommutator,
    /// `S*T − TS*`
    StarCommutator,
    /// `T − STS`
    HankelDefect,
    /// `T − S*TS*`
    HankelDefectStar,
    /// `S*TS − T`
    ToeplitzDefect,
}

impl DefectKind {
    pub const ALL: [DefectKind; 5] = [
        DefectKind::LeftCommutator,
        DefectKind::StarCommutator,
        DefectKind::HankelDefect,
        DefectKind::HankelDefectStar,
        DefectKind::ToeplitzDefect,
    ];

    pub fn formula(self) -> &'static str {
        match self {
            DefectKind::LeftCommutator => "ST - TS",
            DefectKind::StarCommutator => "S*T - TS*",
            DefectKind::HankelDefect => "T - STS",
            DefectKind::HankelDefectStar => "T - S*TS*",
            DefectKind::ToeplitzDefect => "S*TS - T",
        }
    }
}

impl std::str::FromStr for DefectKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
            Error::Unknown {
                kind: "defect kind",
                name: s.to_string(),
            }
        })
    }
}

/// `rows × cols` section of the defect of `t`. Every entry must be certified;
/// otherwise the window is rejected as uncertifiable.
pub fn defect<R: Real>(
    t: Operand<'_, R>,
    kind: DefectKind,
    rows: usize,
    cols: usize,
) -> Result<FiniteSection<R>> {
    let s = shift_pow::<R>(1);
    let b = backshift_pow::<R>(1);
    let t_sec = t.section(rows, cols);
    let pair = |left: &crate::sections::OperatorRule<R>,
                right: &crate::sections::OperatorRule<R>|
     -> Result<FiniteSection<R>> {
        let inner = compose(t, right, rows + 1, cols, None)?;
        compose(left, &inner, rows, cols, None)
    };
    let out = match kind {
        DefectKind::LeftCommutator => sub(
            &compose(&s, t, rows, cols, None)?,
            &compose(t, &s, rows, cols, None)?,
        )?,
        DefectKind::StarCommutator => sub(
            &compose(&b, t, rows, cols, None)?,
            &compose(t, &b, rows, cols, None)?,
        )?,
        DefectKind::HankelDefect => sub(&t_sec, &pair(&s, &s)?)?,
        DefectKind::HankelDefectStar => sub(&t_sec, &pair(&b, &b)?)?,
        DefectKind::ToeplitzDefect => sub(&pair(&b, &s)?, &t_sec)?,
    };
    if !out.fully_exact() {
        return Err(Error::Uncertifiable(format!(
            "{} on a {rows}x{cols} window: {} of {} entries certified",
            kind.formula(),
            out.exact_window().exact_count(),
            rows * cols
        )));
    }
    Ok(out)
}

/// [`defect`] of an operator expression.
pub fn defect_expr<R: Real>(
    expr: &Expr,
    kind: DefectKind,
    rows: usize,
    cols: usize,
    cutoff: Option<usize>,
) -> Result<FiniteSection<R>> {
    let t = evaluate::<R>(expr, rows + 2, cols + 2, cutoff)?;
    defect(t.operand(), kind, rows, cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactnessVerdict {
    CompactLike,
    NoncompactLike,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProbeOptions {
    /// Tails below this at the last cut count as vanished.
    pub tolerance: f64,
    /// Tail decay at least like `n^compact_rate` counts as compact.
    pub compact_rate: f64,
    /// Tail decay slower than `n^noncompact_rate` counts as non-compact.
    pub noncompact_rate: f64,
    #[serde(skip)]
    pub norm: NormOptions,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            tolerance: 1e-3,
            compact_rate: -0.5,
            noncompact_rate: -0.25,
            norm: NormOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactnessEstimate {
    pub window: usize,
    pub cut_grid: Vec<usize>,
    pub tail_norms: Vec<f64>,
    pub tails_monotone: bool,
    pub tail_rate: Option<f64>,
    /// `‖P_{<4n} T P_{[n,4n)}‖`: the tail at a fixed cut-to-window ratio, so
    /// that it does not shrink merely because the cut nears the window edge.
    pub scaled_tails: Vec<f64>,
    pub scaled_rate: Option<f64>,
    /// `σ_n` of the whole window at each cut `n` (descending order, 0-based).
    pub sigma_tail: Vec<f64>,
    pub sigma_rate: Option<f64>,
    /// Geometric limit of the scaled tails.
    pub extrapolated_ess_norm: f64,
    /// 1 when the geometric fit through the last three tails predicts the
    /// fourth-to-last one exactly; 0 when it misses by 100% or more.
    pub fit_quality: f64,
    pub tolerance: f64,
    pub verdict: CompactnessVerdict,
}

/// Geometric (Aitken) limit of the last three tails with a fit-quality score.
/// Sequences whose increments do not shrink fall back to the last value with
/// quality 0.
pub fn extrapolate_tails(tails: &[f64]) -> (f64, f64) {
    let k = tails.len();
    let Some(&last) = tails.last() else {
        return (0.0, 0.0);
    };
    if k < 3 {
        return (last.max(0.0), 0.0);
    }
    let (t1, t2, t3) = (tails[k - 3], tails[k - 2], tails[k - 1]);
    let (d1, d2) = (t2 - t1, t3 - t2);
    let scale = t3.abs().max(1e-300);
    if d2.abs() <= 1e-12 * scale {
        return (t3.max(0.0), 1.0);
    }
    let r = d2 / d1;
    if d1 == 0.0 || !r.is_finite() || r.abs() >= 1.0 {
        return (t3.max(0.0), 0.0);
    }
    let limit = (t3 + d2 * r / (1.0 - r)).max(0.0);
    let quality = if k >= 4 {
        // t_k = L + C r^k through the last three points, evaluated one step back.
        let predicted = limit + (t1 - limit) / r;
        let actual = tails[k - 4];
        (1.0 - ((predicted - actual).abs() / actual.abs().max(1e-300)).min(1.0)).max(0.0)
    } else {
        0.0
    };
    (limit, quality)
}

/// Tail norms and singular-value tails of the `window × window` section of `t`.
pub fn compactness_probe(
    t: Operand<'_, f64>,
    window: usize,
    cut_grid: &[usize],
    opts: &ProbeOptions,
) -> Result<CompactnessEstimate> {
    if cut_grid.is_empty() || cut_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid(
            "cut grid must be nonempty and increasing".into(),
        ));
    }
    let max_cut = *cut_grid.last().expect("nonempty");
    if window < 4 * max_cut {
        return Err(Error::Invalid(format!(
            "window {window} is below 4 × max cut {max_cut}"
        )));
    }
    let a = t.section(window, window);
    let (tail_norms, scaled_tails): (Vec<f64>, Vec<f64>) = cut_grid
        .par_iter()
        .map(|&n| {
            let tail = op_norm_with(&a.column_tail(n), &opts.norm).value;
            let scaled = op_norm_with(&a.block(4 * n, n..4 * n), &opts.norm).value;
            (tail, scaled)
        })
        .unzip();
    let sv = singular_values(&a);
    let sigma_tail: Vec<f64> = cut_grid
        .iter()
        .map(|&n| sv.get(n).copied().unwrap_or(0.0))
        .collect();
    let tails_monotone = tail_norms.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let tail_rate = fit_rate(cut_grid, &tail_norms);
    let sigma_rate = fit_rate(cut_grid, &sigma_tail);
    let scaled_rate = fit_rate(cut_grid, &scaled_tails);
    let (extrapolated_ess_norm, fit_quality) = extrapolate_tails(&scaled_tails);

    let last_tail = *tail_norms.last().expect("nonempty");
    let last_sigma = *sigma_tail.last().expect("nonempty");
    let below = last_tail < opts.tolerance && last_sigma < opts.tolerance;
    let sigma_decays =
        last_sigma < opts.tolerance || sigma_rate.is_some_and(|r| r <= opts.compact_rate);
    let tails_decay = scaled_rate.is_some_and(|r| r <= opts.compact_rate);
    let verdict = if below || (tails_monotone && tails_decay && sigma_decays) {
        CompactnessVerdict::CompactLike
    } else if last_tail > opts.tolerance && scaled_rate.is_none_or(|r| r > opts.noncompact_rate) {
        CompactnessVerdict::NoncompactLike
    } else {
        CompactnessVerdict::Inconclusive
    };

    Ok(CompactnessEstimate {
        window,
        cut_grid: cut_grid.to_vec(),
        tail_norms,
        tails_monotone,
        tail_rate,
        scaled_tails,
        scaled_rate,
        sigma_tail,
        sigma_rate,
        extrapolated_ess_norm,
        fit_quality,
        tolerance: opts.tolerance,
        verdict,
    })
}

/// Doubling cut grid `N/32, …, N/4` (at least one cut).
pub fn default_cut_grid(window: usize) -> Vec<usize> {
    let top = (window / 4).max(1);
    let mut cuts = vec![top];
    while cuts.len() < 4 && cuts[0] / 2 >= 1 {
        cuts.insert(0, cuts[0] / 2);
    }
    cuts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Volterra,
    Sg,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "volterra" => Ok(Family::Volterra),
            "sg" => Ok(Family::Sg),
            _ => Err(Error::Unknown {
                kind: "operator family",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Theorem,
    Numeric,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    pub value: Option<bool>,
    pub provenance: Provenance,
    pub theorem: Option<bool>,
    /// Raw numeric verdict (a compactness or convergence verdict) if probed.
    pub numeric: Option<String>,
}

impl ClassEntry {
    fn combine(theorem: Option<bool>, numeric: Option<(Option<bool>, String)>) -> Self {
        let (num_value, num_label) = match numeric {
            Some((v, l)) => (v, Some(l)),
            None => (None, None),
        };
        let (value, provenance) = match (theorem, num_value) {
            (Some(t), _) => (Some(t), Provenance::Theorem),
            (None, Some(n)) => (Some(n), Provenance::Numeric),
            (None, None) => (None, Provenance::Unknown),
        };
        ClassEntry {
            value,
            provenance,
            theorem,
            numeric: num_label.map(|l| l.to_string()),
        }
    }
}

/// `‖(S_g − S S_g S)e_n‖` over a range of `n` against the first nonzero
/// Taylor coefficient `a_{k₀}` of `g`.
#[derive(Clone, Debug, Serialize)]
pub struct SgHankelLowerBound {
    pub k0: usize,
    pub a_k0_abs: f64,
    pub n_range: (usize, usize),
    pub min_norm: f64,
    pub norms: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub symbol: String,
    pub operator: Family,
    pub bounded: Option<bool>,
    #[serde(rename = "UAT")]
    pub uat: ClassEntry,
    #[serde(rename = "SAT")]
    pub sat: ClassEntry,
    #[serde(rename = "WAT")]
    pub wat: ClassEntry,
    #[serde(rename = "UAH")]
    pub uah: ClassEntry,
    #[serde(rename = "essToep")]
    pub ess_toep: ClassEntry,
    #[serde(rename = "essHank")]
    pub ess_hank: ClassEntry,
    pub probes: BTreeMap<String, CompactnessEstimate>,
    pub lower_bound: Option<SgHankelLowerBound>,
    pub anomalies: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Run numeric probes in addition to the theorem facts.
    pub numeric: bool,
    pub window: usize,
    pub probe: ProbeOptions,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            numeric: true,
            window: 256,
            probe: ProbeOptions::default(),
            seed: 0,
        }
    }
}

/// Class flags of `g`, inferring the polynomial ones when none are attached.
pub fn effective_flags(g: &SymbolSpec) -> Option<ClassFlags> {
    if let Some(f) = g.class_flags() {
        return Some(f.clone());
    }
    let compiled = g.compile::<f64>().ok()?;
    compiled.degree().map(|_| {
        ClassFlags(vec![
            ClassFlag::InVmoa,
            ClassFlag::InHinfty,
            ClassFlag::InQa,
        ])
    })
}

fn is_zero_symbol(g: &SymbolSpec) -> bool {
    g.compile::<f64>().ok().is_some_and(|c| {
        c.degree()
            .is_some_and(|d| (0..=d).all(|k| c.coeff(k).is_zero()))
    })
}

/// For `−log(α − z)`: essentially Hankel exactly when `α² = 1`.
fn log_alpha_ess_hank(g: &SymbolSpec) -> Option<bool> {
    match g.kind() {
        SymbolKind::NegLogOneMinusZ => Some(true),
        SymbolKind::NegLogAlphaMinusZ { alpha } => {
            let a = &alpha.0;
            let sq = a * a;
            Some(sq.re.is_one() && sq.im.is_zero())
        }
        _ => None,
    }
}

struct Facts {
    bounded: Option<bool>,
    uat: Option<bool>,
    sat: Option<bool>,
    wat: Option<bool>,
    uah: Option<bool>,
    ess_toep: Option<bool>,
    ess_hank: Option<bool>,
}

fn theorem_facts(g: &SymbolSpec, family: Family, notes: &mut Vec<String>) -> Facts {
    let flags = effective_flags(g);
    let none = Facts {
        bounded: None,
        uat: None,
        sat: None,
        wat: None,
        uah: None,
        ess_toep: None,
        ess_hank: None,
    };
    let Some(flags) = flags else {
        notes.push("no class flags: every entry is left to the numeric probes".into());
        return none;
    };
    match family {
        Family::Volterra => {
            if !(flags.in_vmoa() || flags.bmoa_only()) {
                return none;
            }
            let ess_hank = if flags.in_vmoa() {
                Some(true)
            } else {
                log_alpha_ess_hank(g)
            };
            Facts {
                bounded: Some(true),
                uat: Some(flags.in_vmoa()),
                sat: Some(true),
                wat: Some(true),
                uah: Some(true),
                ess_toep: Some(true),
                ess_hank,
            }
        }
        Family::Sg => {
            if !flags.in_hinfty() {
                if flags.bmoa_only() {
                    notes.push(
                        "g is not bounded, so S_g is unbounded on H²; nothing is classified".into(),
                    );
                    return Facts {
                        bounded: Some(false),
                        ..none
                    };
                }
                return none;
            }
            let zero = is_zero_symbol(g);
            if zero {
                notes.push("g ≡ 0 gives S_g = 0, which is essentially Hankel".into());
            }
            Facts {
                bounded: Some(true),
                uat: Some(flags.in_qa()),
                sat: Some(true),
                wat: Some(true),
                uah: Some(true),
                ess_toep: Some(true),
                ess_hank: Some(zero),
            }
        }
    }
}

fn compact_value(v: CompactnessVerdict) -> Option<bool> {
    match v {
        CompactnessVerdict::CompactLike => Some(true),
        CompactnessVerdict::NoncompactLike => Some(false),
        CompactnessVerdict::Inconclusive => None,
    }
}

fn verdict_label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn topology_value(v: TopologyVerdict) -> Option<bool> {
    match v {
        TopologyVerdict::Converges => Some(true),
        TopologyVerdict::Diverges => Some(false),
        TopologyVerdict::Inconclusive => None,
    }
}

/// `‖defect(S_g, hankel_defect)·e_n‖` for `n` in `lo..=hi`.
pub fn sg_hankel_lower_bound(g: &SymbolSpec, lo: usize, hi: usize) -> Result<SgHankelLowerBound> {
    let compiled = g.compile::<f64>()?;
    let scan = compiled.degree().unwrap_or(hi + 2);
    let k0 = compiled
        .first_nonzero(scan + 1)
        .ok_or_else(|| Error::Invalid("g vanishes identically".into()))?;
    let a_k0_abs = compiled.coeff(k0).norm();
    let rule = sg::<f64>(g)?;
    let rows = hi + scan + 4;
    let d = defect(Operand::Rule(&rule), DefectKind::HankelDefect, rows, hi + 1)?;
    let norms: Vec<(usize, f64)> = (lo..=hi)
        .map(|n| {
            (
                n,
                d.column(n).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            )
        })
        .collect();
    let min_norm = norms.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(SgHankelLowerBound {
        k0,
        a_k0_abs,
        n_range: (lo, hi),
        min_norm,
        norms,
    })
}

/// Theorem-derived classification of `V_g` or `S_g`, with optional numeric
/// probes attached. A numeric verdict never overrides a theorem entry;
/// disagreements are listed as anomalies.
pub fn classify(
    g: &SymbolSpec,
    family: Family,
    opts: &ClassifyOptions,
) -> Result<ClassificationRecord> {
    let mut notes = Vec::new();
    let facts = theorem_facts(g, family, &mut notes);
    let mut probes = BTreeMap::new();
    let mut numeric: BTreeMap<&'static str, (Option<bool>, String)> = BTreeMap::new();
    let mut lower_bound = None;

    let run_numeric = opts.numeric && facts.bounded != Some(false);
    if run_numeric {
        let n = opts.window;
        let cuts = default_cut_grid(n);
        let rule = match family {
            Family::Volterra => volterra::<f64>(g)?,
            Family::Sg => sg::<f64>(g)?,
        };
        let t = Operand::Rule(&rule);

        let toep = compactness_probe(
            Operand::Section(&defect(t, DefectKind::LeftCommutator, n, n)?),
            n,
            &cuts,
            &opts.probe,
        )?;
        numeric.insert(
            "essToep",
            (compact_value(toep.verdict), verdict_label(&toep.verdict)),
        );
        probes.insert("left_commutator".to_string(), toep);

        let hank = compactness_probe(
            Operand::Section(&defect(t, DefectKind::HankelDefect, n, n)?),
            n,
            &cuts,
            &opts.probe,
        )?;
        numeric.insert(
            "essHank",
            (compact_value(hank.verdict), verdict_label(&hank.verdict)),
        );
        probes.insert("hankel_defect".to_string(), hank);

        if family == Family::Sg && !is_zero_symbol(g) {
            lower_bound = Some(sg_hankel_lower_bound(g, n / 2, n)?);
        }

        // Strong and weak convergence of S*ⁿTSⁿ to its expected limit.
        let limit = match family {
            Family::Volterra => zero_rule(),
            Family::Sg => mult::<f64>(g)?,
        };
        let grid: Vec<usize> = cuts.clone();
        let dopts = DiagnoseOptions {
            window: Some(n),
            seed: opts.seed,
            ..Default::default()
        };
        let fam = TestVectorFamily::monomials(0..8);
        let report = diagnose_toeplitz(&rule, &fam, &grid, Some(&limit), &dopts)?;
        for (key, top) in [
            ("UAT", Topology::Uniform),
            ("SAT", Topology::Strong),
            ("WAT", Topology::Weak),
        ] {
            if let Some(v) = report.topology_verdicts.get(&top) {
                numeric.insert(key, (topology_value(*v), verdict_label(v)));
            }
        }
        let hreport = diagnose_hankel(&rule, &fam, &grid, Some(&zero_rule()), &dopts)?;
        let zero_steps = grid.iter().all(|&k| hankel_step(&rule, k, n, n).is_zero());
        if let Some(v) = hreport.topology_verdicts.get(&Topology::Uniform) {
            let label = if zero_steps {
                "zero_sections".to_string()
            } else {
                verdict_label(v)
            };
            numeric.insert(
                "UAH",
                (
                    if zero_steps {
                        Some(true)
                    } else {
                        topology_value(*v)
                    },
                    label,
                ),
            );
        }
        if family == Family::Volterra {
            let own = compactness_probe(t, n, &cuts, &opts.probe)?;
            // For V_g, uniform convergence of the steps is compactness of V_g.
            if let Some(v) = compact_value(own.verdict) {
                numeric.insert("UAT", (Some(v), verdict_label(&own.verdict)));
            }
            probes.insert("operator".to_string(), own);
        }
    }

    let mut anomalies = Vec::new();
    let mut entry = |key: &'static str, theorem: Option<bool>| {
        let e = ClassEntry::combine(theorem, numeric.remove(key));
        if let (Some(t), Some(n)) = (e.theorem, e.numeric.as_ref()) {
            let nv = match n.as_str() {
                "compact_like" | "converges" | "zero_sections" => Some(true),
                "noncompact_like" | "diverges" => Some(false),
                _ => None,
            };
            if nv.is_some_and(|nv| nv != t) {
                anomalies.push(format!("{key}: theorem says {t}, numeric probe says {n}"));
            }
        }
        e
    };
    let uat = entry("UAT", facts.uat);
    let sat = entry("SAT", facts.sat);
    let wat = entry("WAT", facts.wat);
    let uah = entry("UAH", facts.uah);
    let ess_toep = entry("essToep", facts.ess_toep);
    let ess_hank = entry("essHank", facts.ess_hank);

    Ok(ClassificationRecord {
        symbol: g.to_string(),
        operator: family,
        bounded: facts.bounded,
        uat,
        sat,
        wat,
        uah,
        ess_toep,
        ess_hank,
        probes,
        lower_bound,
        anomalies,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductProbe {
    pub product: String,
    pub defect: DefectKind,
    pub estimate: CompactnessEstimate,
}

/// Probes of the product rules for essentially Hankel `V_g`, `V_h` and
/// essentially Toeplitz `V_k`: the Hankel defects of `V_gV_k` and `V_kV_g`,
/// and the left commutator of `V_gV_h`.
pub fn product_structure_check(
    g: &SymbolSpec,
    h: &SymbolSpec,
    k: &SymbolSpec,
    window: usize,
    opts: &ProbeOptions,
) -> Result<Vec<ProductProbe>> {
    let cuts = default_cut_grid(window);
    let cases = [
        ("V_g V_k", g, k, DefectKind::HankelDefect),
        ("V_k V_g", k, g, DefectKind::HankelDefect),
        ("V_g V_h", g, h, DefectKind::LeftCommutator),
    ];
    cases
        .iter()
        .map(|(label, a, b, kind)| {
            let expr = Expr::compose(vec![
                Expr::volterra((*a).clone()),
                Expr::volterra((*b).clone()),
            ]);
            let d = defect_expr::<f64>(&expr, *kind, window, window, None)?;
            Ok(ProductProbe {
                product: format!("{label} with g = {g}, h = {h}, k = {k}"),
                defect: *kind,
                estimate: compactness_probe(Operand::Section(&d), window, &cuts, opts)?,
            })
        })
        .collect()
}

/// Frobenius norm of a column, used by lower-bound checks.
pub fn column_norm<R: Real>(s: &FiniteSection<R>, l: usize) -> f64 {
    s.column(l)
        .iter()
        .map(|z| scalar::to_c64(z).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{delta0, mult, sg, volterra};
    use crate::scalar::cx_ratio;
    use crate::sections::{add, materialize, scale};
    use num_complex::Complex;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn mult_commutes_with_the_shift() {
        for (_, g) in SymbolSpec::registry() {
            let m = mult::<f64>(&g).unwrap();
            assert!(
                defect(Operand::Rule(&m), DefectKind::LeftCommutator, 20, 20)
                    .unwrap()
                    .is_zero()
            );
        }
    }

    #[test]
    fn volterra_left_commutator_is_vz_vg() {
        let vz = volterra::<Q>(&SymbolSpec::monomial(1)).unwrap();
        for name in ["z", "z2", "cesaro", "one_plus_half_z"] {
            let v = volterra::<Q>(&SymbolSpec::named(name).unwrap()).unwrap();
            let d = defect(Operand::Rule(&v), DefectKind::LeftCommutator, 16, 16).unwrap();
            let p = compose(&vz, &v, 16, 16, None).unwrap();
            assert_eq!(d.entries(), p.entries(), "{name}");
        }
    }

    #[test]
    fn sg_left_commutator_is_linear_in_the_decomposition() {
        for name in ["one", "z", "z2", "one_plus_half_z", "cesaro_trunc16"] {
            let g = SymbolSpec::named(name).unwrap();
            let d = |r: &crate::sections::OperatorRule<Q>| {
                defect(Operand::Rule(r), DefectKind::LeftCommutator, 12, 12).unwrap()
            };
            let lhs = d(&sg::<Q>(&g).unwrap());
            let g0 = g.compile::<Q>().unwrap().coeff(0);
            let rhs = add(
                &add(
                    &scale(&cx_ratio(-1, 1), &d(&volterra::<Q>(&g).unwrap())),
                    &d(&mult::<Q>(&g).unwrap()),
                )
                .unwrap(),
                &scale(&(-g0), &d(&delta0::<Q>())),
            )
            .unwrap();
            assert_eq!(lhs.entries(), rhs.entries(), "{name}");
        }
        // S·δ₀ − δ₀·S has the single entry 1 at (1, 0).
        let d0 = defect(
            Operand::Rule(&delta0::<Q>()),
            DefectKind::LeftCommutator,
            4,
            4,
        )
        .unwrap();
        assert_eq!(*d0.get(1, 0), cx_ratio::<Q>(1, 1));
        assert_eq!(d0.entries().iter().filter(|v| !v.is_zero()).count(), 1);
    }

    #[test]
    fn cesaro_hankel_defect_matches_companion_identity() {
        let g = SymbolSpec::named("cesaro").unwrap();
        let v = volterra::<Q>(&g).unwrap();
        let d = defect(Operand::Rule(&v), DefectKind::HankelDefect, 16, 16).unwrap();
        let vh = crate::operators::volterra_compiled(&g.compile::<Q>().unwrap().hankel_companion());
        let vz = volterra::<Q>(&SymbolSpec::monomial(1)).unwrap();
        let s = crate::operators::shift_pow::<Q>(1);
        let vgs = compose(&v, &s, 17, 16, None).unwrap();
        let rhs = sub(
            &materialize(&vh, 16, 16),
            &compose(&vz, &vgs, 16, 16, None).unwrap(),
        )
        .unwrap();
        assert_eq!(d.entries(), rhs.entries());
    }

    #[test]
    fn sg_hankel_defect_expansion() {
        let g = SymbolSpec::named("one_plus_half_z").unwrap();
        let d = defect(
            Operand::Rule(&sg::<Q>(&g).unwrap()),
            DefectKind::HankelDefect,
            20,
            10,
        )
        .unwrap();
        let gc = [cx_ratio::<Q>(1, 1), cx_ratio::<Q>(1, 2)];
        for n in 1..10usize {
            let mut expect = vec![Complex::<Q>::zero(); 20];
            for (k, gk) in gc.iter().enumerate() {
                expect[k + n] =
                    expect[k + n].clone() + cx_ratio::<Q>(n as i64, (k + n) as i64) * gk.clone();
                if k + n + 2 < 20 {
                    expect[k + n + 2] = expect[k + n + 2].clone()
                        - cx_ratio::<Q>((n + 1) as i64, (k + n + 1) as i64) * gk.clone();
                }
            }
            assert_eq!(d.column(n), expect, "n={n}");
        }
    }

    #[test]
    fn tails_of_vz_are_reciprocal() {
        let vz = volterra::<f64>(&SymbolSpec::monomial(1)).unwrap();
        let est = compactness_probe(
            Operand::Rule(&vz),
            256,
            &[8, 16, 32, 64],
            &ProbeOptions::default(),
        )
        .unwrap();
        for (n, t) in est.cut_grid.iter().zip(&est.tail_norms) {
            assert!((t - 1.0 / (*n as f64 + 1.0)).abs() < 1e-12, "n={n} t={t}");
        }
        assert_eq!(est.verdict, CompactnessVerdict::CompactLike);
        assert!(est.extrapolated_ess_norm < 0.01);
    }

    #[test]
    fn identity_like_sg_is_noncompact() {
        let s1 = sg::<f64>(&SymbolSpec::monomial(0)).unwrap();
        let est = compactness_probe(
            Operand::Rule(&s1),
            128,
            &default_cut_grid(128),
            &ProbeOptions::default(),
        )
        .unwrap();
        assert!(est.tail_norms.iter().all(|t| (t - 1.0).abs() < 1e-12));
        assert_eq!(est.verdict, CompactnessVerdict::NoncompactLike);
        assert!((est.extrapolated_ess_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn aitken_recovers_geometric_limits() {
        let tails: Vec<f64> = (0..5).map(|k| 0.3 + 0.5f64.powi(k)).collect();
        let (l, q) = extrapolate_tails(&tails);
        assert!((l - 0.3).abs() < 1e-12);
        assert!(q > 0.999);
    }

    #[test]
    fn uncertifiable_windows_are_rejected() {
        let s = materialize(
            &volterra::<f64>(&SymbolSpec::named("cesaro").unwrap()).unwrap(),
            8,
            8,
        );
        let err = defect(Operand::Section(&s), DefectKind::HankelDefectStar, 8, 8).unwrap_err();
        assert!(matches!(err, Error::Uncertifiable(_)), "{err:?}");
    }

    #[test]
    fn defect_kinds_parse() {
        assert_eq!(
            "hankel_defect".parse::<DefectKind>().unwrap(),
            DefectKind::HankelDefect
        );
        assert!("nope".parse::<DefectKind>().is_err());
    }

    #[test]
    fn classification_of_registry_cases() {
        let quick = ClassifyOptions {
            window: 128,
            ..Default::default()
        };
        let cesaro = classify(
            &SymbolSpec::named("cesaro").unwrap(),
            Family::Volterra,
            &quick,
        )
        .unwrap();
        assert_eq!(cesaro.sat.value, Some(true));
        assert_eq!(cesaro.uat.value, Some(false));
        assert_eq!(cesaro.ess_toep.value, Some(true));
        assert_eq!(cesaro.ess_hank.value, Some(true));
        assert_eq!(cesaro.ess_hank.numeric.as_deref(), Some("compact_like"));
        assert_eq!(cesaro.ess_hank.provenance, Provenance::Theorem);

        let poly = classify(
            &SymbolSpec::named("one_plus_half_z").unwrap(),
            Family::Sg,
            &quick,
        )
        .unwrap();
        assert_eq!(poly.uat.value, Some(true));
        assert_eq!(poly.ess_hank.value, Some(false));
        let lb = poly.lower_bound.unwrap();
        assert_eq!(lb.k0, 0);
        assert!(lb.min_norm >= lb.a_k0_abs);

        let unbounded =
            classify(&SymbolSpec::named("cesaro").unwrap(), Family::Sg, &quick).unwrap();
        assert_eq!(unbounded.bounded, Some(false));
        assert_eq!(unbounded.sat.provenance, Provenance::Unknown);

        let theorem_only = ClassifyOptions {
            numeric: false,
            ..Default::default()
        };
        let alpha = classify(
            &SymbolSpec::named("log_alpha_i").unwrap(),
            Family::Volterra,
            &theorem_only,
        )
        .unwrap();
        assert_eq!(alpha.ess_hank.value, Some(false));
        assert!(alpha.probes.is_empty());
    }
}
