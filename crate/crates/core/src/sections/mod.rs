//! Infinite-matrix rules and their finite sections.
//!
//! An [`OperatorRule`] is the exact entry rule of an operator in the monomial
//! basis `e_k = z^k`, together with band metadata: `upper` bounds `l - m` and
//! `lower` bounds `m - l` over the nonzero entries `(m, l)`. A
//! [`FiniteSection`] is a materialized rectangular corner. Products carry an
//! [`ExactWindow`] recording which entries provably equal the entries of the
//! infinite product; everything else is marked inexact, never assumed.

mod norm;

pub use norm::{op_norm, op_norm_with, singular_values, NormEstimate, NormMethod, NormOptions};

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{self, Real};

type EntryFn<R> = dyn Fn(usize, usize) -> Complex<R> + Send + Sync;

/// Exact entry rule `(m, l) ↦ T_{m,l}` of an infinite matrix.
#[derive(Clone)]
pub struct OperatorRule<R: Real> {
    entry: Arc<EntryFn<R>>,
    upper: Option<i64>,
    lower: Option<i64>,
    description: String,
}

impl<R: Real> fmt::Debug for OperatorRule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorRule")
            .field("description", &self.description)
            .field("upper", &self.upper)
            .field("lower", &self.lower)
            .finish()
    }
}

fn band_allows(upper: Option<i64>, lower: Option<i64>, m: usize, l: usize) -> bool {
    let d = l as i64 - m as i64;
    upper.is_none_or(|u| d <= u) && lower.is_none_or(|w| -d <= w)
}

fn add_band(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

fn max_band(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a?.max(b?))
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<R: Real> OperatorRule<R> {
    /// `upper`/`lower` of `None` mean unbounded. The closure is only called
    /// inside the declared band; outside it the entry is zero.
    pub fn new<F>(
        description: impl Into<String>,
        upper: Option<i64>,
        lower: Option<i64>,
        entry: F,
    ) -> Self
    where
        F: Fn(usize, usize) -> Complex<R> + Send + Sync + 'static,
    {
        OperatorRule {
            entry: Arc::new(entry),
            upper,
            lower,
            description: description.into(),
        }
    }

    pub fn entry(&self, m: usize, l: usize) -> Complex<R> {
        if band_allows(self.upper, self.lower, m, l) {
            (self.entry)(m, l)
        } else {
            Complex::zero()
        }
    }

    /// Evaluates the closure directly, bypassing the band shortcut. Used to
    /// test that a declared band is honest.
    pub fn raw_entry(&self, m: usize, l: usize) -> Complex<R> {
        (self.entry)(m, l)
    }

    pub fn upper_bandwidth(&self) -> Option<i64> {
        self.upper
    }

    pub fn lower_bandwidth(&self) -> Option<i64> {
        self.lower
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    pub fn adjoint(&self) -> Self {
        let inner = self.entry.clone();
        OperatorRule {
            entry: Arc::new(move |m, l| inner(l, m).conj()),
            upper: self.lower,
            lower: self.upper,
            description: format!("({})*", self.description),
        }
    }

    pub fn scale(&self, c: Complex<R>) -> Self {
        let inner = self.entry.clone();
        let cc = c.clone();
        OperatorRule {
            entry: Arc::new(move |m, l| cc.clone() * inner(m, l)),
            upper: self.upper,
            lower: self.lower,
            description: format!("{}·({})", fmt_c(&c), self.description),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        OperatorRule {
            upper: max_band(self.upper, other.upper),
            lower: max_band(self.lower, other.lower),
            description: format!("{} + {}", self.description, other.description),
            entry: Arc::new(move |m, l| a.entry(m, l) + b.entry(m, l)),
        }
    }

    /// The index-shifted rule `(m, l) ↦ T_{m+n, l+n}`, i.e. `S*ⁿ T Sⁿ`.
    pub fn shifted(&self, n: usize) -> Self {
        let inner = self.clone();
        OperatorRule {
            upper: self.upper,
            lower: self.lower,
            description: format!("S*^{n}·({})·S^{n}", self.description),
            entry: Arc::new(move |m, l| inner.entry(m + n, l + n)),
        }
    }
}

fn fmt_c<R: Real>(c: &Complex<R>) -> String {
    let z = scalar::to_c64(c);
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("({}{:+}i)", z.re, z.im)
    }
}

/// Which entries of a section are certified equal to the infinite operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactWindow {
    rows: usize,
    cols: usize,
    mask: Option<Vec<bool>>,
}

impl ExactWindow {
    pub fn full(rows: usize, cols: usize) -> Self {
        ExactWindow {
            rows,
            cols,
            mask: None,
        }
    }

    fn from_mask(rows: usize, cols: usize, mask: Vec<bool>) -> Self {
        if mask.iter().all(|&b| b) {
            ExactWindow::full(rows, cols)
        } else {
            ExactWindow {
                rows,
                cols,
                mask: Some(mask),
            }
        }
    }

    pub fn is_exact(&self, m: usize, l: usize) -> bool {
        match &self.mask {
            None => m < self.rows && l < self.cols,
            Some(mask) => m < self.rows && l < self.cols && mask[m * self.cols + l],
        }
    }

    pub fn is_full(&self) -> bool {
        self.mask.is_none()
    }

    pub fn exact_count(&self) -> usize {
        match &self.mask {
            None => self.rows * self.cols,
            Some(mask) => mask.iter().filter(|&&b| b).count(),
        }
    }

    /// In every column the exact entries form a prefix of rows.
    pub fn is_row_monotone(&self) -> bool {
        (0..self.cols).all(|l| {
            let mut seen_inexact = false;
            (0..self.rows).all(|m| {
                let e = self.is_exact(m, l);
                if !e {
                    seen_inexact = true;
                }
                e || seen_inexact
            })
        })
    }

    /// Largest `k` such that the leading `k × k` block is exact.
    pub fn certified_square(&self) -> usize {
        let n = self.rows.min(self.cols);
        (0..n)
            .find(|&k| (0..=k).any(|j| !self.is_exact(k, j) || !self.is_exact(j, k)))
            .unwrap_or(n)
    }

    fn transpose(&self) -> Self {
        let mask = self.mask.as_ref().map(|mask| {
            let mut t = vec![false; mask.len()];
            for m in 0..self.rows {
                for l in 0..self.cols {
                    t[l * self.rows + m] = mask[m * self.cols + l];
                }
            }
            t
        });
        ExactWindow {
            rows: self.cols,
            cols: self.rows,
            mask,
        }
    }

    fn and(&self, other: &Self) -> Self {
        match (&self.mask, &other.mask) {
            (None, None) => self.clone(),
            (Some(_), None) => self.clone(),
            (None, Some(_)) => other.clone(),
            (Some(a), Some(b)) => ExactWindow::from_mask(
                self.rows,
                self.cols,
                a.iter().zip(b).map(|(x, y)| *x && *y).collect(),
            ),
        }
    }

    fn restrict(&self, rows: usize, cols: usize) -> Self {
        match &self.mask {
            None => ExactWindow::full(rows, cols),
            Some(mask) => ExactWindow::from_mask(
                rows,
                cols,
                (0..rows)
                    .flat_map(|m| (0..cols).map(move |l| (m, l)))
                    .map(|(m, l)| mask[m * self.cols + l])
                    .collect(),
            ),
        }
    }
}

/// A materialized `rows × cols` corner of an infinite operator matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSection<R: Real> {
    entries: Array2<Complex<R>>,
    exact: ExactWindow,
    upper: Option<i64>,
    lower: Option<i64>,
}

impl<R: Real> FiniteSection<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FiniteSection {
            entries: Array2::from_elem((rows, cols), Complex::zero()),
            exact: ExactWindow::full(rows, cols),
            upper: Some(-(rows as i64)),
            lower: Some(-(cols as i64)),
        }
    }

    /// Builds a section from explicit entries, all certified exact.
    pub fn from_fn<F: Fn(usize, usize) -> Complex<R>>(rows: usize, cols: usize, f: F) -> Self {
        FiniteSection {
            entries: Array2::from_shape_fn((rows, cols), |(m, l)| f(m, l)),
            exact: ExactWindow::full(rows, cols),
            upper: None,
            lower: None,
        }
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn get(&self, m: usize, l: usize) -> &Complex<R> {
        &self.entries[[m, l]]
    }

    pub fn entries(&self) -> &Array2<Complex<R>> {
        &self.entries
    }

    pub fn exact_window(&self) -> &ExactWindow {
        &self.exact
    }

    pub fn is_exact(&self, m: usize, l: usize) -> bool {
        self.exact.is_exact(m, l)
    }

    pub fn fully_exact(&self) -> bool {
        self.exact.is_full()
    }

    pub fn upper_bandwidth(&self) -> Option<i64> {
        self.upper
    }

    pub fn lower_bandwidth(&self) -> Option<i64> {
        self.lower
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|v| scalar::to_c64(v).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(scalar::norm_f64)
            .fold(0.0, f64::max)
    }

    pub fn column(&self, l: usize) -> Vec<Complex<R>> {
        self.entries.column(l).to_vec()
    }

    /// Top-left `rows × cols` sub-window.
    pub fn restrict(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows() && cols <= self.cols());
        FiniteSection {
            entries: self.entries.slice(ndarray::s![..rows, ..cols]).to_owned(),
            exact: self.exact.restrict(rows, cols),
            upper: self.upper,
            lower: self.lower,
        }
    }

    /// Columns `from..cols` (the restriction `T·P_{cols ≥ from}`).
    pub fn column_tail(&self, from: usize) -> Self {
        self.block(self.rows(), from.min(self.cols())..self.cols())
    }

    /// Rows `0..rows` and the column range `cols`, keeping the certificate.
    pub fn block(&self, rows: usize, cols: std::ops::Range<usize>) -> Self {
        assert!(rows <= self.rows() && cols.end <= self.cols() && cols.start <= cols.end);
        let width = cols.end - cols.start;
        let mask = (0..rows)
            .flat_map(|m| cols.clone().map(move |l| (m, l)))
            .map(|(m, l)| self.is_exact(m, l))
            .collect();
        FiniteSection {
            entries: self
                .entries
                .slice(ndarray::s![..rows, cols.clone()])
                .to_owned(),
            exact: ExactWindow::from_mask(rows, width, mask),
            upper: None,
            lower: None,
        }
    }

    pub fn to_f64(&self) -> FiniteSection<f64> {
        FiniteSection {
            entries: self.entries.map(scalar::to_c64),
            exact: self.exact.clone(),
            upper: self.upper,
            lower: self.lower,
        }
    }

    pub fn apply(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        (0..self.rows())
            .map(|m| {
                self.entries
                    .row(m)
                    .iter()
                    .zip(v)
                    .filter(|(a, x)| !a.is_zero() && !x.is_zero())
                    .fold(Complex::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect()
    }

    /// Writes `m,l,re,im` rows for every nonzero entry.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "m,l,re,im")?;
        for ((m, l), v) in self.entries.indexed_iter() {
            if !v.is_zero() {
                let z = scalar::to_c64(v);
                writeln!(w, "{m},{l},{:?},{:?}", z.re, z.im)?;
            }
        }
        Ok(())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::ShapeMismatch(
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols(),
            ));
        }
        Ok(())
    }
}

/// Reads back a CSV written by [`FiniteSection::write_csv`] into a dense
/// `rows × cols` array of doubles.
pub fn read_csv(text: &str, rows: usize, cols: usize) -> Result<FiniteSection<f64>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("m,l,re,im") {
        return Err(Error::Invalid(
            "matrix CSV must start with header m,l,re,im".into(),
        ));
    }
    let mut out = FiniteSection::from_fn(rows, cols, |_, _| Complex::zero());
    for line in lines.filter(|s| !s.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(Error::Invalid(format!("bad CSV row `{line}`")));
        }
        let parse_err = |_| Error::Invalid(format!("bad CSV row `{line}`"));
        let m: usize = f[0]
            .parse()
            .map_err(|_| Error::Invalid(format!("bad CSV row `{line}`")))?;
        let l: usize = f[1]
            .parse()
            .map_err(|_| Error::Invalid(format!("bad CSV row `{line}`")))?;
        let re: f64 = f[2].parse().map_err(parse_err)?;
        let im: f64 = f[3].parse().map_err(parse_err)?;
        if m >= rows || l >= cols {
            return Err(Error::Invalid(format!(
                "entry ({m},{l}) outside {rows}x{cols}"
            )));
        }
        out.entries[[m, l]] = Complex::new(re, im);
    }
    Ok(out)
}

/// Either an infinite rule or an already materialized section.
#[derive(Debug)]
pub enum Operand<'a, R: Real> {
    Rule(&'a OperatorRule<R>),
    Section(&'a FiniteSection<R>),
}

impl<R: Real> Clone for Operand<'_, R> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<R: Real> Copy for Operand<'_, R> {}

impl<'a, R: Real> From<&'a OperatorRule<R>> for Operand<'a, R> {
    fn from(r: &'a OperatorRule<R>) -> Self {
        Operand::Rule(r)
    }
}

impl<'a, R: Real> From<&'a FiniteSection<R>> for Operand<'a, R> {
    fn from(s: &'a FiniteSection<R>) -> Self {
        Operand::Section(s)
    }
}

impl<R: Real> Operand<'_, R> {
    pub fn upper_bandwidth(&self) -> Option<i64> {
        match self {
            Operand::Rule(r) => r.upper,
            Operand::Section(s) => s.upper,
        }
    }

    pub fn lower_bandwidth(&self) -> Option<i64> {
        match self {
            Operand::Rule(r) => r.lower,
            Operand::Section(s) => s.lower,
        }
    }

    fn rows_available(&self) -> Option<usize> {
        match self {
            Operand::Rule(_) => None,
            Operand::Section(s) => Some(s.rows()),
        }
    }

    fn cols_available(&self) -> Option<usize> {
        match self {
            Operand::Rule(_) => None,
            Operand::Section(s) => Some(s.cols()),
        }
    }

    /// A `rows × cols` section of this operand. Sections smaller than the
    /// request are zero-padded and the padding is marked inexact.
    pub fn section(&self, rows: usize, cols: usize) -> FiniteSection<R> {
        match self {
            Operand::Rule(r) => materialize(r, rows, cols),
            Operand::Section(s) => {
                if s.rows() >= rows && s.cols() >= cols {
                    return s.restrict(rows, cols);
                }
                let mut entries = Array2::from_elem((rows, cols), Complex::zero());
                let mut mask = vec![false; rows * cols];
                for m in 0..rows.min(s.rows()) {
                    for l in 0..cols.min(s.cols()) {
                        entries[[m, l]] = s.entries[[m, l]].clone();
                        mask[m * cols + l] = s.is_exact(m, l);
                    }
                }
                FiniteSection {
                    entries,
                    exact: ExactWindow::from_mask(rows, cols, mask),
                    upper: s.upper,
                    lower: s.lower,
                }
            }
        }
    }
}

/// Materializes the `rows × cols` corner of `rule`; every entry is exact.
pub fn materialize<R: Real>(rule: &OperatorRule<R>, rows: usize, cols: usize) -> FiniteSection<R> {
    FiniteSection {
        entries: Array2::from_shape_fn((rows, cols), |(m, l)| rule.entry(m, l)),
        exact: ExactWindow::full(rows, cols),
        upper: rule.upper,
        lower: rule.lower,
    }
}

/// `rows × cols` corner of the product `A·B` with an exactness certificate.
///
/// Entry `(m, l)` is certified when the inner range covers every `k` with a
/// possibly nonzero term (`k ≤ m + upper(A)` or `k ≤ l + lower(B)`) and every
/// term used is itself exact. `cutoff` bounds the inner dimension; it is
/// required when neither band bounds the sum.
pub fn compose<'a, 'b, R>(
    a: impl Into<Operand<'a, R>>,
    b: impl Into<Operand<'b, R>>,
    rows: usize,
    cols: usize,
    cutoff: Option<usize>,
) -> Result<FiniteSection<R>>
where
    R: Real + 'a + 'b,
{
    let (a, b) = (a.into(), b.into());
    let (ua, la) = (a.upper_bandwidth(), a.lower_bandwidth());
    let (ub, lb) = (b.upper_bandwidth(), b.lower_bandwidth());

    // Largest inner index any window entry needs.
    let need_max = min_opt(
        ua.map(|u| rows as i64 - 1 + u),
        lb.map(|w| cols as i64 - 1 + w),
    );
    let mut inner: Option<usize> = need_max.map(|n| (n + 1).max(0) as usize);
    for avail in [a.cols_available(), b.rows_available(), cutoff]
        .into_iter()
        .flatten()
    {
        inner = Some(inner.map_or(avail, |k| k.min(avail)));
    }
    let inner = inner.ok_or(Error::UnboundedInner)?;

    let asec = a.section(rows, inner);
    let bsec = b.section(inner, cols);

    let mut entries = Array2::from_elem((rows, cols), Complex::<R>::zero());
    for m in 0..rows {
        let k_lo = la.map_or(0, |w| (m as i64 - w).max(0) as usize);
        let k_hi = ua.map_or(inner as i64, |u| (m as i64 + u + 1).min(inner as i64));
        for k in k_lo..k_hi.max(k_lo as i64) as usize {
            let av = &asec.entries[[m, k]];
            if av.is_zero() {
                continue;
            }
            let l_lo = lb.map_or(0, |w| (k as i64 - w).max(0) as usize).min(cols);
            let l_hi = ub
                .map_or(cols as i64, |u| (k as i64 + u + 1).min(cols as i64))
                .max(0) as usize;
            for l in l_lo..l_hi.max(l_lo) {
                let bv = &bsec.entries[[k, l]];
                if !bv.is_zero() {
                    entries[[m, l]] = entries[[m, l]].clone() + av.clone() * bv.clone();
                }
            }
        }
    }

    let both_full = asec.fully_exact() && bsec.fully_exact();
    let mut mask = vec![true; rows * cols];
    for m in 0..rows {
        for l in 0..cols {
            let need_hi = min_opt(ua.map(|u| m as i64 + u), lb.map(|w| l as i64 + w));
            let covered = need_hi.is_some_and(|h| h < inner as i64);
            let mut ok = covered;
            if ok && !both_full {
                let lo = [la.map(|w| m as i64 - w), ub.map(|u| l as i64 - u), Some(0)]
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(0);
                let hi = need_hi.unwrap_or(inner as i64 - 1);
                ok = (lo..=hi).all(|k| {
                    let k = k as usize;
                    asec.is_exact(m, k) && bsec.is_exact(k, l)
                });
            }
            mask[m * cols + l] = ok;
        }
    }

    Ok(FiniteSection {
        entries,
        exact: ExactWindow::from_mask(rows, cols, mask),
        upper: add_band(ua, ub),
        lower: add_band(la, lb),
    })
}

/// Entrywise sum; the result is exact where both inputs are.
pub fn add<R: Real>(a: &FiniteSection<R>, b: &FiniteSection<R>) -> Result<FiniteSection<R>> {
    a.check_shape(b)?;
    Ok(FiniteSection {
        entries: &a.entries + &b.entries,
        exact: a.exact.and(&b.exact),
        upper: max_band(a.upper, b.upper),
        lower: max_band(a.lower, b.lower),
    })
}

pub fn sub<R: Real>(a: &FiniteSection<R>, b: &FiniteSection<R>) -> Result<FiniteSection<R>> {
    add(a, &scale(&Complex::new(-R::one(), R::zero()), b))
}

pub fn scale<R: Real>(c: &Complex<R>, a: &FiniteSection<R>) -> FiniteSection<R> {
    FiniteSection {
        entries: a.entries.map(|v| c.clone() * v.clone()),
        exact: a.exact.clone(),
        upper: a.upper,
        lower: a.lower,
    }
}

/// Conjugate transpose, with the exactness window transposed.
pub fn adjoint<R: Real>(a: &FiniteSection<R>) -> FiniteSection<R> {
    FiniteSection {
        entries: a.entries.t().mapv(|v| v.conj()),
        exact: a.exact.transpose(),
        upper: a.lower,
        lower: a.upper,
    }
}

/// Applies a rule to a finitely supported coefficient vector, returning the
/// first `rows` output coefficients (exact whenever the rule's lower band or
/// the input support makes the sum finite, which it always is here).
pub fn apply_rule<R: Real>(
    rule: &OperatorRule<R>,
    v: &[Complex<R>],
    rows: usize,
) -> Vec<Complex<R>> {
    (0..rows)
        .map(|m| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .fold(Complex::zero(), |acc, (l, x)| {
                    acc + rule.entry(m, l) * x.clone()
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn shift() -> OperatorRule<f64> {
        OperatorRule::new("S", Some(-1), Some(1), |m, l| {
            if m == l + 1 {
                c(1.0)
            } else {
                c(0.0)
            }
        })
    }

    fn backshift() -> OperatorRule<f64> {
        OperatorRule::new("S*", Some(1), Some(-1), |m, l| {
            if l == m + 1 {
                c(1.0)
            } else {
                c(0.0)
            }
        })
    }

    fn as_real(s: &FiniteSection<f64>) -> Vec<Vec<f64>> {
        (0..s.rows())
            .map(|m| (0..s.cols()).map(|l| s.get(m, l).re).collect())
            .collect()
    }

    #[test]
    fn materialize_shift_and_backshift() {
        let s = materialize(&shift(), 3, 3);
        assert_eq!(
            as_real(&s),
            vec![vec![0., 0., 0.], vec![1., 0., 0.], vec![0., 1., 0.]]
        );
        let b = materialize(&backshift(), 3, 3);
        assert_eq!(
            as_real(&b),
            vec![vec![0., 1., 0.], vec![0., 0., 1.], vec![0., 0., 0.]]
        );
        assert!(s.fully_exact());
    }

    #[test]
    fn backshift_times_shift_is_identity() {
        let p = compose(&backshift(), &shift(), 6, 6, None).unwrap();
        assert!(p.fully_exact());
        for m in 0..6 {
            for l in 0..6 {
                assert_eq!(p.get(m, l).re, if m == l { 1.0 } else { 0.0 });
            }
        }
        let q = compose(&shift(), &backshift(), 6, 6, None).unwrap();
        assert_eq!(q.get(0, 0).re, 0.0);
        assert_eq!(q.get(3, 3).re, 1.0);
    }

    #[test]
    fn truncated_section_operands_lose_certification_at_the_edge() {
        let dense = OperatorRule::new("ones-lower", Some(0), None, |_, _| c(1.0));
        let a = materialize(&dense, 4, 4);
        let p = compose(&a, &dense, 6, 4, None).unwrap();
        // A is only 4×4, so rows 4 and 5 are padded and inexact.
        assert!(p.is_exact(3, 0));
        assert!(!p.is_exact(4, 0));
        assert!(p.exact_window().is_row_monotone());
    }

    #[test]
    fn unbounded_inner_range_needs_cutoff() {
        let dense = OperatorRule::<f64>::new("dense", None, None, |_, _| c(1.0));
        assert_eq!(
            compose(&dense, &dense, 2, 2, None).unwrap_err(),
            Error::UnboundedInner
        );
        let p = compose(&dense, &dense, 2, 2, Some(10)).unwrap();
        assert_eq!(p.get(0, 0).re, 10.0);
        assert!(!p.is_exact(0, 0));
    }

    #[test]
    fn lower_band_of_right_factor_certifies_unbounded_left() {
        let dense = OperatorRule::<f64>::new("dense", None, None, |_, _| c(1.0));
        let p = compose(&dense, &shift(), 3, 3, None).unwrap();
        assert!(p.fully_exact());
        assert_eq!(p.get(2, 1).re, 1.0);
    }

    #[test]
    fn adjoint_and_algebra() {
        let s = materialize(&shift(), 5, 5);
        assert_eq!(adjoint(&s), materialize(&backshift(), 5, 5));
        assert_eq!(adjoint(&adjoint(&s)), s);
        let z = add(&s, &scale(&c(-1.0), &s)).unwrap();
        assert!(z.is_zero());
        assert!(matches!(
            add(&s, &materialize(&shift(), 4, 5)),
            Err(Error::ShapeMismatch(..))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let s = materialize(&shift(), 4, 4);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("m,l,re,im\n1,0,1.0,0.0\n"));
        assert_eq!(read_csv(&text, 4, 4).unwrap().entries(), s.entries());
    }
}
