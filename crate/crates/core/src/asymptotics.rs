//! The sequences `S*ⁿTSⁿ` and `Hₙ(T) = JₙTSⁿ⁺¹`, their convergence in the
//! uniform, strong and weak topologies, and extraction of limit symbols.
//!
//! Distances are measured on an `M × M` window with `M ≥ 4·max(n)`. Entries
//! of both steps are index relabelings of the rule, so every window is exact;
//! the window only truncates the infinite matrix.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_complex::{Complex, Complex64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{hankel, toeplitz};
use crate::scalar::Real;
use crate::sections::{
    materialize, op_norm_with, sub, FiniteSection, NormEstimate, NormOptions, OperatorRule,
};
use crate::series::{BilateralCoeffs, SymbolSpec};

/// `S*ⁿ T Sⁿ`: entry `(i, l)` is `T(i+n, l+n)`.
pub fn toeplitz_step<R: Real>(
    t: &OperatorRule<R>,
    n: usize,
    rows: usize,
    cols: usize,
) -> FiniteSection<R> {
    materialize(&t.shifted(n), rows, cols)
}

/// `Jₙ T Sⁿ⁺¹`: entry `(i, l)` is `T(n-i, l+n+1)` for `i ≤ n`, zero below.
pub fn hankel_step<R: Real>(
    t: &OperatorRule<R>,
    n: usize,
    rows: usize,
    cols: usize,
) -> FiniteSection<R> {
    FiniteSection::from_fn(rows, cols, |i, l| {
        if i <= n {
            t.entry(n - i, l + n + 1)
        } else {
            Complex::zero()
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Toeplitz,
    Hankel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Uniform,
    Strong,
    Weak,
}

/// Unit vectors (ℓ² coefficient norm) that the strong metric is taken over.
#[derive(Clone, Debug, Serialize)]
pub struct TestVectorFamily {
    labels: Vec<String>,
    #[serde(skip)]
    vectors: Vec<Vec<Complex64>>,
}

fn normalized(mut v: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|z| *z /= norm);
    Some(v)
}

fn random_unit_polynomials(count: usize, degree: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = (0..=degree)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            normalized(v).expect("random polynomial is nonzero")
        })
        .collect()
}

impl TestVectorFamily {
    pub fn empty() -> Self {
        TestVectorFamily {
            labels: Vec::new(),
            vectors: Vec::new(),
        }
    }

    /// Appends `v / ‖v‖`; the zero vector is rejected.
    pub fn push(&mut self, label: impl Into<String>, v: Vec<Complex64>) -> Result<()> {
        let v =
            normalized(v).ok_or_else(|| Error::Invalid("test vector must be nonzero".into()))?;
        self.labels.push(label.into());
        self.vectors.push(v);
        Ok(())
    }

    pub fn monomials(range: std::ops::Range<usize>) -> Self {
        let mut f = Self::empty();
        for l in range {
            let mut v = vec![Complex64::zero(); l + 1];
            v[l] = Complex64::new(1.0, 0.0);
            f.push(format!("e_{l}"), v).expect("monomial is nonzero");
        }
        f
    }

    /// `count` polynomials of degree `degree` with uniform coefficients in
    /// the unit square, drawn from a ChaCha stream seeded by `seed`.
    pub fn random_polynomials(count: usize, degree: usize, seed: u64) -> Self {
        let mut f = Self::empty();
        for (i, v) in random_unit_polynomials(count, degree, seed)
            .into_iter()
            .enumerate()
        {
            f.push(format!("rand_{seed}_{i}"), v).expect("nonzero");
        }
        f
    }

    /// The Taylor polynomial of order `order` of an H² symbol.
    pub fn truncated(symbol: &SymbolSpec, order: usize) -> Result<Self> {
        let g = symbol.compile::<f64>()?;
        let mut f = Self::empty();
        f.push(
            format!("{symbol}|{order}"),
            (0..=order).map(|k| g.coeff(k)).collect(),
        )?;
        Ok(f)
    }

    pub fn extend(mut self, other: TestVectorFamily) -> Self {
        self.labels.extend(other.labels);
        self.vectors.extend(other.vectors);
        self
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Longest coefficient vector in the family.
    pub fn support(&self) -> usize {
        self.vectors.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Fixed probe set for the weak metric: `e_0..e_15` plus eight seeded random
/// unit polynomials of degree at most 63.
pub fn weak_probes(seed: u64) -> Vec<Vec<Complex64>> {
    let mut probes: Vec<Vec<Complex64>> = TestVectorFamily::monomials(0..16).vectors;
    probes.extend(random_unit_polynomials(8, 63, seed));
    probes
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A metric below this is converged outright.
    pub tol: f64,
    /// Allowed rise between consecutive values in the "nonincreasing" check.
    pub slack: f64,
    /// Divergence needs the final value above `diverge_ratio · initial`.
    pub diverge_ratio: f64,
    /// A fitted log-log rate at or below this counts as a decreasing trend.
    pub decay_rate: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tol: 1e-6,
            slack: 1e-9,
            diverge_ratio: 0.1,
            decay_rate: -0.25,
        }
    }
}

/// Least-squares slope of `log value` against `log n` over the last half of
/// the grid. Zero values are skipped; fewer than two usable points give `None`.
pub fn fit_rate(ns: &[usize], values: &[f64]) -> Option<f64> {
    let start = ns.len() / 2;
    let pts: Vec<(f64, f64)> = ns[start..]
        .iter()
        .zip(&values[start..])
        .filter(|(n, v)| **n > 0 && **v > 0.0 && v.is_finite())
        .map(|(n, v)| ((*n as f64).ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyVerdict {
    Converges,
    Diverges,
    Inconclusive,
}

fn last_half_nonincreasing(values: &[f64], slack: f64) -> bool {
    values[values.len() / 2..]
        .windows(2)
        .all(|w| w[1] <= w[0] + slack)
}

/// Converges when the final value is below `tol`, or when the last half is
/// nonincreasing and decays at least like `n^decay_rate`. Diverges when the
/// final value keeps more than `diverge_ratio` of the initial one with no
/// decreasing trend.
pub fn topology_verdict(ns: &[usize], values: &[f64], th: &Thresholds) -> TopologyVerdict {
    let (Some(&first), Some(&last)) = (values.first(), values.last()) else {
        return TopologyVerdict::Inconclusive;
    };
    let monotone = last_half_nonincreasing(values, th.slack);
    let rate = fit_rate(ns, values);
    let decaying = monotone && rate.is_some_and(|r| r <= th.decay_rate);
    if monotone && (last < th.tol || decaying) {
        TopologyVerdict::Converges
    } else if last > th.diverge_ratio * first && !decaying {
        TopologyVerdict::Diverges
    } else {
        TopologyVerdict::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConvergesUniform,
    ConvergesStrongOnly,
    ConvergesWeakOnly,
    Diverges,
    Inconclusive,
}

/// The strongest measured topology that converges decides; "only" means
/// the stronger measured topologies did not converge.
pub fn overall_verdict(per: &BTreeMap<Topology, TopologyVerdict>) -> Verdict {
    let conv = |t| per.get(&t) == Some(&TopologyVerdict::Converges);
    if conv(Topology::Uniform) {
        Verdict::ConvergesUniform
    } else if conv(Topology::Strong) {
        Verdict::ConvergesStrongOnly
    } else if conv(Topology::Weak) {
        Verdict::ConvergesWeakOnly
    } else if !per.is_empty() && per.values().all(|v| *v == TopologyVerdict::Diverges) {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    }
}

/// Convergence record of one diagonal (or anti-diagonal) of the step sequence.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalFlag {
    pub index: i64,
    /// Last raw value of the sequence.
    pub last: (f64, f64),
    /// `|a_last − a_prev| ≤ tol·max(1, |a_last|)`.
    pub cauchy: bool,
    /// Polynomial extrapolation of the sequence in `1/n` to `n = ∞`.
    pub extrapolated: (f64, f64),
    /// Extrapolations from the last `K` and last `K−1` points agree.
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolExtraction {
    pub coeffs: BilateralCoeffs<f64>,
    pub flags: Vec<DiagonalFlag>,
}

impl SymbolExtraction {
    pub fn all_stable(&self) -> bool {
        self.flags.iter().all(|f| f.cauchy || f.stable)
    }
}

/// Geometric grid `64, 128, …, 8192` used for symbol extrapolation.
pub fn default_extraction_grid() -> Vec<usize> {
    (6..=13).map(|p| 1usize << p).collect()
}

pub const SYMBOL_TOL: f64 = 1e-8;

/// Neville's scheme evaluated at `h = 0`.
fn neville_at_zero(h: &[f64], a: &[Complex64]) -> Complex64 {
    let mut p = a.to_vec();
    let k = h.len();
    for j in 1..k {
        for i in 0..k - j {
            p[i] = (p[i + 1] * h[i] - p[i] * h[i + j]) / (h[i] - h[i + j]);
        }
    }
    p[0]
}

fn flag_sequence(index: i64, ns: &[usize], seq: &[Complex64], tol: f64) -> DiagonalFlag {
    let last = *seq.last().expect("nonempty grid");
    let scale = |z: Complex64| tol * z.norm().max(1.0);
    let cauchy = seq.len() >= 2 && (last - seq[seq.len() - 2]).norm() <= scale(last);
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n.max(1) as f64).collect();
    let full = neville_at_zero(&h, seq);
    let stable = if seq.len() >= 3 {
        let fewer = neville_at_zero(&h[1..], &seq[1..]);
        (full - fewer).norm() <= scale(full)
    } else {
        false
    };
    DiagonalFlag {
        index,
        last: (last.re, last.im),
        cauchy,
        extrapolated: (full.re, full.im),
        stable,
    }
}

fn assemble(flags: Vec<DiagonalFlag>, tol: f64) -> SymbolExtraction {
    let mut coeffs = BilateralCoeffs::default();
    for f in &flags {
        let value = if f.cauchy {
            Complex64::new(f.last.0, f.last.1)
        } else if f.stable {
            Complex64::new(f.extrapolated.0, f.extrapolated.1)
        } else {
            continue;
        };
        // Round extrapolation noise around zero to an exact zero.
        let snap = |x: f64| if x.abs() <= tol { 0.0 } else { x };
        coeffs.insert(f.index, Complex64::new(snap(value.re), snap(value.im)));
    }
    SymbolExtraction { coeffs, flags }
}

/// Limits of the diagonals `d ∈ diags` (`d = m − l`) of `S*ⁿTSⁿ`, read from
/// `T(n + max(d,0), n + max(−d,0))` over `n_grid`.
pub fn extract_symbol(
    t: &OperatorRule<f64>,
    diags: RangeInclusive<i64>,
    n_grid: &[usize],
    tol: f64,
) -> SymbolExtraction {
    let flags = diags
        .map(|d| {
            let seq: Vec<Complex64> = n_grid
                .iter()
                .map(|&n| t.entry(n + d.max(0) as usize, n + (-d).max(0) as usize))
                .collect();
            flag_sequence(d, n_grid, &seq, tol)
        })
        .collect();
    assemble(flags, tol)
}

/// Limits of the anti-diagonals `j = i + l + 1 ∈ anti` of `Hₙ(T)`, read from
/// the first row `T(n, n + j)`. Anti-diagonal `j` is stored at index `−j`,
/// matching the Hankel rule `b̂(−(m+l+1))`.
pub fn extract_hankel_symbol(
    t: &OperatorRule<f64>,
    anti: RangeInclusive<usize>,
    n_grid: &[usize],
    tol: f64,
) -> SymbolExtraction {
    let flags = anti
        .filter(|&j| j >= 1)
        .map(|j| {
            let seq: Vec<Complex64> = n_grid.iter().map(|&n| t.entry(n, n + j)).collect();
            flag_sequence(-(j as i64), n_grid, &seq, tol)
        })
        .collect();
    assemble(flags, tol)
}

#[derive(Clone, Debug)]
pub struct DiagnoseOptions {
    pub topologies: Vec<Topology>,
    /// Window size `M`; defaults to `max(4·max(n_grid), 64)`.
    pub window: Option<usize>,
    pub thresholds: Thresholds,
    pub seed: u64,
    pub norm: NormOptions,
    /// Diagonals `−k..=k` (anti-diagonals `1..=2k`) read for the symbol.
    pub symbol_band: i64,
    pub extraction_grid: Vec<usize>,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            topologies: vec![Topology::Uniform, Topology::Strong, Topology::Weak],
            window: None,
            thresholds: Thresholds::default(),
            seed: 0,
            norm: NormOptions::default(),
            symbol_band: 8,
            extraction_grid: default_extraction_grid(),
        }
    }
}

/// What the step sequence was compared against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    Candidate(String),
    ExtractedSymbol,
    /// No candidate and the symbol did not stabilize; no distances computed.
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub operator: String,
    pub step: StepKind,
    pub topology: Vec<Topology>,
    pub n_grid: Vec<usize>,
    pub window: usize,
    pub reference: Reference,
    pub metrics: BTreeMap<Topology, Vec<f64>>,
    /// Uniform metric on a `4n × 4n` window at each `n`. A fixed window makes
    /// the metric shrink as `n` nears its edge even when the steps do not
    /// converge; the uniform verdict is taken from these values instead.
    pub scaled_uniform: Option<Vec<f64>>,
    pub fitted_rate: BTreeMap<Topology, Option<f64>>,
    pub topology_verdicts: BTreeMap<Topology, TopologyVerdict>,
    pub verdict: Verdict,
    pub symbol_estimate: BilateralCoeffs<f64>,
    pub symbol_flags: Vec<DiagonalFlag>,
    pub thresholds: Thresholds,
    /// False if any power iteration stopped at its iteration cap.
    pub norms_converged: bool,
}

impl ConvergenceReport {
    pub fn metric(&self, t: Topology) -> Option<&[f64]> {
        self.metrics.get(&t).map(Vec::as_slice)
    }

    /// One `n,uniform,strong,weak` line per grid point; missing columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,uniform,strong,weak\n");
        for (i, n) in self.n_grid.iter().enumerate() {
            let col = |t| {
                self.metrics
                    .get(&t)
                    .map(|v| format!("{:?}", v[i]))
                    .unwrap_or_default()
            };
            out.push_str(&format!(
                "{n},{},{},{}\n",
                col(Topology::Uniform),
                col(Topology::Strong),
                col(Topology::Weak)
            ));
        }
        out
    }
}

struct PointMetrics {
    uniform: Option<f64>,
    strong: Option<f64>,
    weak: Option<f64>,
    converged: bool,
}

fn apply(d: &FiniteSection<f64>, v: &[Complex64], rows: usize) -> Vec<Complex64> {
    (0..rows.min(d.rows()))
        .map(|m| v.iter().enumerate().map(|(l, x)| d.get(m, l) * x).sum())
        .collect()
}

fn point_metrics(
    d: &FiniteSection<f64>,
    family: &TestVectorFamily,
    probes: &[Vec<Complex64>],
    opts: &DiagnoseOptions,
) -> PointMetrics {
    let want = |t| opts.topologies.contains(&t);
    let mut out = PointMetrics {
        uniform: None,
        strong: None,
        weak: None,
        converged: true,
    };
    if want(Topology::Uniform) {
        let est = op_norm_with(d, &opts.norm);
        out.uniform = Some(est.value);
        out.converged = est.converged;
    }
    if want(Topology::Strong) {
        out.strong = Some(
            family
                .vectors()
                .iter()
                .map(|f| {
                    apply(d, f, d.rows())
                        .iter()
                        .map(|z| z.norm_sqr())
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max),
        );
    }
    if want(Topology::Weak) {
        let images: Vec<Vec<Complex64>> = probes.iter().map(|f| apply(d, f, 64)).collect();
        let mut best = 0.0f64;
        for h in probes {
            for img in &images {
                let ip: Complex64 = img.iter().zip(h).map(|(a, b)| a * b.conj()).sum();
                best = best.max(ip.norm());
            }
        }
        out.weak = Some(best);
    }
    out
}

/// Window of the scaled uniform metric at step `n`.
pub fn scaled_window(n: usize) -> usize {
    (4 * n).max(16)
}

fn check_grid(n_grid: &[usize]) -> Result<()> {
    if n_grid.is_empty() {
        return Err(Error::Invalid("empty n grid".into()));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("n grid must be strictly increasing".into()));
    }
    Ok(())
}

fn diagnose(
    kind: StepKind,
    t: &OperatorRule<f64>,
    family: &TestVectorFamily,
    n_grid: &[usize],
    candidate: Option<&OperatorRule<f64>>,
    opts: &DiagnoseOptions,
) -> Result<ConvergenceReport> {
    check_grid(n_grid)?;
    let max_n = *n_grid.last().expect("nonempty");
    let window = opts.window.unwrap_or((4 * max_n).max(64));
    if family.support() > window {
        return Err(Error::Invalid(format!(
            "test vectors of length {} exceed the window {window}",
            family.support()
        )));
    }
    let k = opts.symbol_band;
    let extraction = match kind {
        StepKind::Toeplitz => extract_symbol(t, -k..=k, &opts.extraction_grid, SYMBOL_TOL),
        StepKind::Hankel => {
            extract_hankel_symbol(t, 1..=(2 * k) as usize, &opts.extraction_grid, SYMBOL_TOL)
        }
    };

    let derived;
    let (reference, limit) = match candidate {
        Some(c) => (Reference::Candidate(c.description().to_string()), Some(c)),
        None if extraction.all_stable() => {
            derived = match kind {
                StepKind::Toeplitz => toeplitz(&extraction.coeffs),
                StepKind::Hankel => hankel(&extraction.coeffs),
            };
            (Reference::ExtractedSymbol, Some(&derived))
        }
        None => (Reference::None, None),
    };

    let mut topologies = opts.topologies.clone();
    topologies.sort();
    topologies.dedup();

    let mut metrics = BTreeMap::new();
    let mut scaled_uniform = None;
    let mut norms_converged = true;
    if let Some(limit) = limit {
        let uniform = topologies.contains(&Topology::Uniform);
        let cols = if uniform {
            window
        } else {
            family.support().max(64).min(window)
        };
        let probes = weak_probes(opts.seed);
        let difference = |n: usize, rows: usize, cols: usize| {
            let step = match kind {
                StepKind::Toeplitz => toeplitz_step(t, n, rows, cols),
                StepKind::Hankel => hankel_step(t, n, rows, cols),
            };
            sub(&step, &materialize(limit, rows, cols)).expect("same shape")
        };
        let points: Vec<(PointMetrics, Option<NormEstimate>)> = n_grid
            .par_iter()
            .map(|&n| {
                let point = point_metrics(&difference(n, window, cols), family, &probes, opts);
                let scaled = uniform.then(|| {
                    let w = scaled_window(n).min(window);
                    op_norm_with(&difference(n, w, w), &opts.norm)
                });
                (point, scaled)
            })
            .collect();
        norms_converged = points
            .iter()
            .all(|(p, s)| p.converged && s.as_ref().is_none_or(|s| s.converged));
        if uniform {
            scaled_uniform = Some(
                points
                    .iter()
                    .map(|(_, s)| s.as_ref().expect("requested").value)
                    .collect(),
            );
        }
        let points: Vec<PointMetrics> = points.into_iter().map(|(p, _)| p).collect();
        for (top, pick) in [
            (
                Topology::Uniform,
                (|p: &PointMetrics| p.uniform) as fn(&PointMetrics) -> Option<f64>,
            ),
            (Topology::Strong, |p| p.strong),
            (Topology::Weak, |p| p.weak),
        ] {
            if topologies.contains(&top) {
                metrics.insert(
                    top,
                    points
                        .iter()
                        .map(|p| pick(p).expect("requested"))
                        .collect::<Vec<_>>(),
                );
            }
        }
    }

    let fitted_rate = metrics
        .iter()
        .map(|(t, v)| (*t, fit_rate(n_grid, v)))
        .collect();
    let topology_verdicts: BTreeMap<Topology, TopologyVerdict> = if metrics.is_empty() {
        topologies
            .iter()
            .map(|t| (*t, TopologyVerdict::Inconclusive))
            .collect()
    } else {
        metrics
            .iter()
            .map(|(&t, v)| {
                let v = match (t, &scaled_uniform) {
                    (Topology::Uniform, Some(scaled)) => scaled,
                    _ => v,
                };
                (t, topology_verdict(n_grid, v, &opts.thresholds))
            })
            .collect()
    };
    let verdict = if reference == Reference::None {
        Verdict::Inconclusive
    } else {
        overall_verdict(&topology_verdicts)
    };

    Ok(ConvergenceReport {
        operator: t.description().to_string(),
        step: kind,
        topology: topologies,
        n_grid: n_grid.to_vec(),
        window,
        reference,
        metrics,
        scaled_uniform,
        fitted_rate,
        topology_verdicts,
        verdict,
        symbol_estimate: extraction.coeffs,
        symbol_flags: extraction.flags,
        thresholds: opts.thresholds,
        norms_converged,
    })
}

/// Distances of `S*ⁿTSⁿ` from `candidate` (or from the Toeplitz operator of
/// the extracted symbol when no candidate is given).
pub fn diagnose_toeplitz(
    t: &OperatorRule<f64>,
    family: &TestVectorFamily,
    n_grid: &[usize],
    candidate: Option<&OperatorRule<f64>>,
    opts: &DiagnoseOptions,
) -> Result<ConvergenceReport> {
    diagnose(StepKind::Toeplitz, t, family, n_grid, candidate, opts)
}

/// Distances of `JₙTSⁿ⁺¹` from `candidate` (or from the Hankel operator of
/// the anti-diagonal limits).
pub fn diagnose_hankel(
    t: &OperatorRule<f64>,
    family: &TestVectorFamily,
    n_grid: &[usize],
    candidate: Option<&OperatorRule<f64>>,
    opts: &DiagnoseOptions,
) -> Result<ConvergenceReport> {
    diagnose(StepKind::Hankel, t, family, n_grid, candidate, opts)
}

/// The zero operator, the candidate limit for compact sequences.
pub fn zero_rule() -> OperatorRule<f64> {
    OperatorRule::new("0", Some(0), Some(0), |_, _| Complex64::zero())
}
