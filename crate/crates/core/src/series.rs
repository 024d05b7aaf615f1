//! Taylor and bilateral coefficient sequences for analytic and trigonometric
//! symbols.
//!
//! A [`SymbolSpec`] is the symbolic description a user (or the built-in
//! registry) writes down. It is compiled for a particular scalar type into a
//! [`CompiledSymbol`], which emits any Taylor coefficient on demand.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, cx_ratio, lift, CRational, Real};

/// Exact complex coefficient as written in a symbol document.
///
/// Accepts a JSON number, a string such as `"-3/4"`, or a two element array
/// `[re, im]` of either. Floats are converted to their exact dyadic value.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient(pub CRational);

impl Coefficient {
    pub fn real(p: i64, q: i64) -> Self {
        Coefficient(Complex::new(
            BigRational::new(p.into(), q.into()),
            BigRational::zero(),
        ))
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coefficient(Complex::new(re, im))
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im.is_zero() {
            s.serialize_str(&scalar::rational_to_string(&self.0.re))
        } else {
            let mut seq = s.serialize_seq(Some(2))?;
            seq.serialize_element(&scalar::rational_to_string(&self.0.re))?;
            seq.serialize_element(&scalar::rational_to_string(&self.0.im))?;
            seq.end()
        }
    }
}

fn rational_from_json<E: de::Error>(v: &serde_json::Value) -> std::result::Result<BigRational, E> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                n.as_f64()
                    .and_then(scalar::rational_from_f64)
                    .ok_or_else(|| E::custom(format!("non-finite number {n}")))
            }
        }
        serde_json::Value::String(s) => scalar::parse_rational(s)
            .ok_or_else(|| E::custom(format!("cannot parse `{s}` as a rational"))),
        other => Err(E::custom(format!(
            "expected a number or string, got {other}"
        ))),
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Array(parts) if parts.len() == 2 => Ok(Coefficient::new(
                rational_from_json(&parts[0])?,
                rational_from_json(&parts[1])?,
            )),
            serde_json::Value::Array(_) => {
                Err(de::Error::custom("complex coefficient must be [re, im]"))
            }
            _ => Ok(Coefficient::new(
                rational_from_json(&v)?,
                BigRational::zero(),
            )),
        }
    }
}

/// Taylor coefficients `g_0, ..., g_N` of an analytic function.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorCoeffs<R: Real> {
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> TaylorCoeffs<R> {
    pub fn new(coeffs: Vec<Complex<R>>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "Taylor coefficients need at least the constant term"
        );
        TaylorCoeffs { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; zero past the stored order.
    pub fn get(&self, k: usize) -> Complex<R> {
        self.coeffs.get(k).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn as_slice(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn restrict(&self, order: usize) -> Self {
        TaylorCoeffs {
            coeffs: (0..=order).map(|k| self.get(k)).collect(),
        }
    }
}

/// Finitely supported Fourier coefficients `b̂(k)`, `k ∈ Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct BilateralCoeffs<R: Real> {
    coeffs: BTreeMap<i64, Complex<R>>,
}

impl<R: Real> Default for BilateralCoeffs<R> {
    fn default() -> Self {
        BilateralCoeffs {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<R: Real> BilateralCoeffs<R> {
    pub fn new<I: IntoIterator<Item = (i64, Complex<R>)>>(entries: I) -> Self {
        let mut b = BilateralCoeffs::default();
        for (k, v) in entries {
            b.insert(k, v);
        }
        b
    }

    /// Adds `v` to the coefficient at `k`; zeros are not stored.
    pub fn insert(&mut self, k: i64, v: Complex<R>) {
        let cur = self.coeffs.remove(&k).unwrap_or_else(Complex::zero) + v;
        if !cur.is_zero() {
            self.coeffs.insert(k, cur);
        }
    }

    pub fn get(&self, k: i64) -> Complex<R> {
        self.coeffs.get(&k).cloned().unwrap_or_else(Complex::zero)
    }

    /// Largest `|k|` with a nonzero coefficient (0 for the zero symbol).
    pub fn band(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Complex<R>)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients of `b̃(z) = b(z̄)`: index `k` moves to `-k`.
    pub fn reflect(&self) -> Self {
        BilateralCoeffs {
            coeffs: self.coeffs.iter().map(|(k, v)| (-k, v.clone())).collect(),
        }
    }

    /// Coefficients of the pointwise conjugate `conj(b)` on the circle.
    pub fn conj_reflect(&self) -> Self {
        BilateralCoeffs {
            coeffs: self.coeffs.iter().map(|(k, v)| (-k, v.conj())).collect(),
        }
    }

    /// Coefficients of the product `b·q` (discrete convolution).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BilateralCoeffs::default();
        for (j, a) in &self.coeffs {
            for (k, b) in &other.coeffs {
                out.insert(j + k, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn lift_from(exact: &BilateralCoeffs<BigRational>) -> Self {
        BilateralCoeffs::new(exact.iter().map(|(k, v)| (k, lift::<R>(v))))
    }
}

impl<R: Real> Serialize for BilateralCoeffs<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (k, v) in &self.coeffs {
            let c = scalar::to_c64(v);
            seq.serialize_element(&(k, c.re, c.im))?;
        }
        seq.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassFlag {
    #[serde(rename = "in_VMOA")]
    InVmoa,
    #[serde(rename = "in_BMOA_only")]
    InBmoaOnly,
    #[serde(rename = "in_Hinfty")]
    InHinfty,
    #[serde(rename = "in_QA")]
    InQa,
}

/// Function-class membership asserted by the registry (never computed).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassFlags(pub Vec<ClassFlag>);

impl ClassFlags {
    fn polynomial() -> Self {
        ClassFlags(vec![ClassFlag::InVmoa, ClassFlag::InHinfty])
    }

    pub fn contains(&self, f: ClassFlag) -> bool {
        self.0.contains(&f)
    }

    pub fn in_vmoa(&self) -> bool {
        self.contains(ClassFlag::InVmoa) || self.contains(ClassFlag::InQa)
    }

    pub fn in_hinfty(&self) -> bool {
        self.contains(ClassFlag::InHinfty) || self.contains(ClassFlag::InQa)
    }

    pub fn in_qa(&self) -> bool {
        self.contains(ClassFlag::InQa) || (self.in_vmoa() && self.in_hinfty())
    }

    pub fn bmoa_only(&self) -> bool {
        self.contains(ClassFlag::InBmoaOnly)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    Explicit {
        coeffs: Vec<Coefficient>,
    },
    Monomial {
        n: u32,
    },
    NegLogOneMinusZ,
    NegLogAlphaMinusZ {
        alpha: Coefficient,
    },
    LinearCombination {
        terms: Vec<(Coefficient, SymbolSpec)>,
    },
    TrigPolynomial {
        coeffs: Vec<(i64, Coefficient)>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SymbolRepr {
    Name(String),
    Named { name: String },
    Kind(SymbolKind),
}

/// Symbolic description of an analytic symbol `g` (or, for
/// `trig_polynomial`, of a bounded symbol `b` on the circle).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolRepr", into = "SymbolKind")]
pub struct SymbolSpec {
    kind: SymbolKind,
    #[serde(skip)]
    class_flags: Option<ClassFlags>,
}

impl TryFrom<SymbolRepr> for SymbolSpec {
    type Error = Error;

    fn try_from(r: SymbolRepr) -> Result<Self> {
        match r {
            SymbolRepr::Name(name) | SymbolRepr::Named { name } => SymbolSpec::named(&name),
            SymbolRepr::Kind(kind) => Ok(SymbolSpec::from_kind(kind)),
        }
    }
}

impl From<SymbolSpec> for SymbolKind {
    fn from(s: SymbolSpec) -> Self {
        s.kind
    }
}

impl fmt::Display for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::Explicit { coeffs } => {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.0.is_zero())
                    .map(|(k, c)| {
                        let c = fmt_coefficient(c);
                        match k {
                            0 => c,
                            1 => format!("{c}·z"),
                            _ => format!("{c}·z^{k}"),
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
            SymbolKind::Monomial { n } => match n {
                0 => write!(f, "1"),
                1 => write!(f, "z"),
                _ => write!(f, "z^{n}"),
            },
            SymbolKind::NegLogOneMinusZ => write!(f, "-log(1-z)"),
            SymbolKind::NegLogAlphaMinusZ { alpha } => {
                write!(f, "-log(({})-z)", fmt_coefficient(alpha))
            }
            SymbolKind::LinearCombination { terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|(c, s)| format!("({})·[{}]", fmt_coefficient(c), s))
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
            SymbolKind::TrigPolynomial { coeffs } => {
                let parts: Vec<String> = coeffs
                    .iter()
                    .map(|(k, c)| format!("({})·e^{{{k}iθ}}", fmt_coefficient(c)))
                    .collect();
                write!(f, "P+[{}]", parts.join(" + "))
            }
        }
    }
}

fn fmt_coefficient(c: &Coefficient) -> String {
    let re = scalar::rational_to_string(&c.0.re);
    if c.0.im.is_zero() {
        re
    } else {
        format!(
            "{re}{}{}i",
            if c.0.im.is_negative() { "" } else { "+" },
            scalar::rational_to_string(&c.0.im)
        )
    }
}

/// Names accepted by [`SymbolSpec::named`], in registry order.
pub const REGISTRY_NAMES: [&str; 7] = [
    "one",
    "z",
    "z2",
    "one_plus_half_z",
    "cesaro",
    "cesaro_trunc16",
    "log_alpha_i",
];

impl SymbolSpec {
    pub fn from_kind(kind: SymbolKind) -> Self {
        let class_flags = registry_flags(&kind);
        SymbolSpec { kind, class_flags }
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn class_flags(&self) -> Option<&ClassFlags> {
        self.class_flags.as_ref()
    }

    pub fn monomial(n: u32) -> Self {
        Self::from_kind(SymbolKind::Monomial { n })
    }

    pub fn neg_log_one_minus_z() -> Self {
        Self::from_kind(SymbolKind::NegLogOneMinusZ)
    }

    pub fn neg_log_alpha_minus_z(alpha: CRational) -> Self {
        Self::from_kind(SymbolKind::NegLogAlphaMinusZ {
            alpha: Coefficient(alpha),
        })
    }

    pub fn explicit(coeffs: Vec<CRational>) -> Self {
        Self::from_kind(SymbolKind::Explicit {
            coeffs: coeffs.into_iter().map(Coefficient).collect(),
        })
    }

    /// Polynomial with rational coefficients `p_k / q_k`.
    pub fn rational_polynomial(coeffs: &[(i64, i64)]) -> Self {
        Self::explicit(
            coeffs
                .iter()
                .map(|&(p, q)| {
                    Complex::new(BigRational::new(p.into(), q.into()), BigRational::zero())
                })
                .collect(),
        )
    }

    pub fn linear_combination(terms: Vec<(CRational, SymbolSpec)>) -> Self {
        Self::from_kind(SymbolKind::LinearCombination {
            terms: terms
                .into_iter()
                .map(|(c, s)| (Coefficient(c), s))
                .collect(),
        })
    }

    pub fn trig_polynomial(b: &BilateralCoeffs<BigRational>) -> Self {
        Self::from_kind(SymbolKind::TrigPolynomial {
            coeffs: b.iter().map(|(k, v)| (k, Coefficient(v.clone()))).collect(),
        })
    }

    /// Built-in symbols used by the suites and scenarios.
    pub fn named(name: &str) -> Result<Self> {
        Ok(match name {
            "one" => Self::monomial(0),
            "z" => Self::monomial(1),
            "z2" => Self::monomial(2),
            "one_plus_half_z" => Self::rational_polynomial(&[(1, 1), (1, 2)]),
            "cesaro" => Self::neg_log_one_minus_z(),
            "cesaro_trunc16" => {
                let mut c = vec![(0, 1)];
                c.extend((1..=16).map(|k| (1, k)));
                Self::rational_polynomial(&c)
            }
            "log_alpha_i" => {
                Self::neg_log_alpha_minus_z(Complex::new(BigRational::zero(), BigRational::one()))
            }
            _ => {
                return Err(Error::Unknown {
                    kind: "symbol",
                    name: name.to_string(),
                })
            }
        })
    }

    pub fn registry() -> Vec<(&'static str, SymbolSpec)> {
        REGISTRY_NAMES
            .iter()
            .map(|n| (*n, Self::named(n).expect("registry names resolve")))
            .collect()
    }

    /// True when every coefficient is rational, so the exact path applies.
    pub fn is_rational(&self) -> bool {
        match &self.kind {
            SymbolKind::NegLogAlphaMinusZ { alpha } => alpha.0.re.is_one() && alpha.0.im.is_zero(),
            SymbolKind::LinearCombination { terms } => terms.iter().all(|(_, s)| s.is_rational()),
            _ => true,
        }
    }

    pub fn compile<R: Real>(&self) -> Result<CompiledSymbol<R>> {
        Ok(CompiledSymbol {
            repr: compile_kind(&self.kind)?,
            label: self.to_string(),
        })
    }
}

fn registry_flags(kind: &SymbolKind) -> Option<ClassFlags> {
    match kind {
        SymbolKind::Explicit { .. } | SymbolKind::Monomial { .. } => Some(ClassFlags::polynomial()),
        SymbolKind::NegLogOneMinusZ | SymbolKind::NegLogAlphaMinusZ { .. } => {
            Some(ClassFlags(vec![ClassFlag::InBmoaOnly]))
        }
        SymbolKind::TrigPolynomial { .. } => Some(ClassFlags(vec![ClassFlag::InQa])),
        SymbolKind::LinearCombination { terms } => {
            let all_poly = terms.iter().all(|(_, s)| {
                s.class_flags
                    .as_ref()
                    .is_some_and(|f| f.in_vmoa() && f.in_hinfty())
            });
            all_poly.then(ClassFlags::polynomial)
        }
    }
}

fn check_alpha(alpha: &CRational) -> Result<()> {
    let modulus_sqr = scalar::crational_abs_sqr_f64(alpha);
    if (modulus_sqr - 1.0).abs() > 1e-12 {
        return Err(Error::BranchUndefined(format!(
            "|alpha|^2 = {modulus_sqr}, alpha must be unimodular"
        )));
    }
    // alpha - z meets the negative real axis for some |z| < 1 iff Re(alpha) < 0.
    if alpha.re.is_negative() {
        return Err(Error::BranchUndefined(
            "Re(alpha) < 0: alpha - z crosses the principal cut inside the disk".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug)]
enum Repr<R: Real> {
    Poly(Vec<Complex<R>>),
    Harmonic,
    Log {
        constant: Complex<R>,
        inv_alpha: Complex<R>,
    },
    Combination(Vec<(Complex<R>, Repr<R>)>),
    HankelCompanion(Box<Repr<R>>),
}

fn compile_kind<R: Real>(kind: &SymbolKind) -> Result<Repr<R>> {
    Ok(match kind {
        SymbolKind::Explicit { coeffs } => Repr::Poly(coeffs.iter().map(|c| lift(&c.0)).collect()),
        SymbolKind::Monomial { n } => {
            let mut c = vec![Complex::zero(); *n as usize + 1];
            c[*n as usize] = Complex::one();
            Repr::Poly(c)
        }
        SymbolKind::NegLogOneMinusZ => Repr::Harmonic,
        SymbolKind::NegLogAlphaMinusZ { alpha } => {
            check_alpha(&alpha.0)?;
            let a = &alpha.0;
            let constant = if a.re.is_one() && a.im.is_zero() {
                Complex::zero()
            } else {
                let af = Complex::new(
                    num_traits::ToPrimitive::to_f64(&a.re).unwrap_or(f64::NAN),
                    num_traits::ToPrimitive::to_f64(&a.im).unwrap_or(f64::NAN),
                );
                let log = af.ln();
                let irrational = || Error::Irrational(format!("-log({af}) has no rational value"));
                Complex::new(
                    R::from_f64_inexact(-log.re).ok_or_else(irrational)?,
                    R::from_f64_inexact(-log.im).ok_or_else(irrational)?,
                )
            };
            let norm = &a.re * &a.re + &a.im * &a.im;
            let inv = Complex::new(&a.re / &norm, -(&a.im / &norm));
            Repr::Log {
                constant,
                inv_alpha: lift(&inv),
            }
        }
        SymbolKind::LinearCombination { terms } => Repr::Combination(
            terms
                .iter()
                .map(|(c, s)| Ok((lift(&c.0), compile_kind(&s.kind)?)))
                .collect::<Result<_>>()?,
        ),
        SymbolKind::TrigPolynomial { coeffs } => {
            let max = coeffs
                .iter()
                .map(|(k, _)| *k)
                .filter(|k| *k >= 0)
                .max()
                .unwrap_or(0) as usize;
            let mut c = vec![Complex::zero(); max + 1];
            for (k, v) in coeffs {
                if *k >= 0 {
                    c[*k as usize] = c[*k as usize].clone() + lift(&v.0);
                }
            }
            Repr::Poly(c)
        }
    })
}

impl<R: Real> Repr<R> {
    fn coeff(&self, k: usize) -> Complex<R> {
        match self {
            Repr::Poly(c) => c.get(k).cloned().unwrap_or_else(Complex::zero),
            Repr::Harmonic => {
                if k == 0 {
                    Complex::zero()
                } else {
                    cx_ratio(1, k as i64)
                }
            }
            Repr::Log {
                constant,
                inv_alpha,
            } => {
                if k == 0 {
                    constant.clone()
                } else {
                    inv_alpha.powu(k as u32) * cx_ratio::<R>(1, k as i64)
                }
            }
            Repr::Combination(terms) => terms
                .iter()
                .fold(Complex::zero(), |acc, (c, r)| acc + c.clone() * r.coeff(k)),
            Repr::HankelCompanion(g) => {
                let gk = g.coeff(k);
                if k >= 2 {
                    gk - cx_ratio::<R>(k as i64 - 2, k as i64) * g.coeff(k - 2)
                } else {
                    gk
                }
            }
        }
    }

    fn degree(&self) -> Option<usize> {
        match self {
            Repr::Poly(c) => Some(c.iter().rposition(|v| !v.is_zero()).unwrap_or(0)),
            Repr::Harmonic | Repr::Log { .. } => None,
            Repr::Combination(terms) => terms
                .iter()
                .try_fold(0, |acc, (_, r)| r.degree().map(|d| acc.max(d))),
            Repr::HankelCompanion(g) => g.degree().map(|d| d + 2),
        }
    }
}

/// A symbol compiled for scalar type `R`; coefficient emission is infallible.
#[derive(Clone, Debug)]
pub struct CompiledSymbol<R: Real> {
    repr: Repr<R>,
    label: String,
}

impl<R: Real> CompiledSymbol<R> {
    /// Taylor coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> Complex<R> {
        self.repr.coeff(k)
    }

    /// Polynomial degree bound, `None` for infinite series.
    pub fn degree(&self) -> Option<usize> {
        self.repr.degree()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn taylor(&self, order: usize) -> TaylorCoeffs<R> {
        TaylorCoeffs::new((0..=order).map(|k| self.coeff(k)).collect())
    }

    /// First index with a nonzero coefficient, searched up to `limit`.
    pub fn first_nonzero(&self, limit: usize) -> Option<usize> {
        (0..=limit).find(|&k| !self.coeff(k).is_zero())
    }

    /// The symbol `h` with `h' = (1 - z²) g'`, i.e. `h_m = g_m - ((m-2)/m) g_{m-2}`
    /// (the constant term is carried over from `g`).
    pub fn hankel_companion(&self) -> Self {
        CompiledSymbol {
            repr: Repr::HankelCompanion(Box::new(self.repr.clone())),
            label: format!("∫(1-z²)·d[{}]", self.label),
        }
    }
}

/// Exact Taylor coefficients of `symbol` through degree `order`.
pub fn coeffs_of<R: Real>(symbol: &SymbolSpec, order: usize) -> Result<TaylorCoeffs<R>> {
    Ok(symbol.compile::<R>()?.taylor(order))
}

/// Coefficients of `b̃(z) = b(z̄)`.
pub fn reflect<R: Real>(b: &BilateralCoeffs<R>) -> BilateralCoeffs<R> {
    b.reflect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn monomial_coefficients() {
        let c = coeffs_of::<BigRational>(&SymbolSpec::monomial(3), 5).unwrap();
        let expect: Vec<CRational> = [0, 0, 0, 1, 0, 0]
            .iter()
            .map(|&v| Complex::new(rat(v, 1), rat(0, 1)))
            .collect();
        assert_eq!(c.as_slice(), expect.as_slice());
    }

    #[test]
    fn neg_log_one_minus_z_matches_integrated_geometric_series() {
        // -log(1-z) = ∫ Σ_{j≥0} u^j du, so the z^k coefficient is (coefficient of u^{k-1}) / k = 1/k.
        let geometric = vec![rat(1, 1); 4];
        let mut integrated = vec![rat(0, 1)];
        integrated.extend(
            geometric
                .iter()
                .enumerate()
                .map(|(j, c)| c / rat(j as i64 + 1, 1)),
        );

        let c = coeffs_of::<BigRational>(&SymbolSpec::neg_log_one_minus_z(), 4).unwrap();
        for (k, want) in integrated.iter().enumerate() {
            assert_eq!(c.get(k), Complex::new(want.clone(), rat(0, 1)), "k = {k}");
        }
    }

    #[test]
    fn neg_log_alpha_i_matches_numeric_differentiation() {
        let alpha = Complex64::new(0.0, 1.0);
        let c = coeffs_of::<f64>(&SymbolSpec::named("log_alpha_i").unwrap(), 2).unwrap();
        // Closed form: [-log(i), 1/i, 1/(2 i²)].
        assert!((c.get(0) - Complex64::new(0.0, -std::f64::consts::FRAC_PI_2)).norm() < 1e-15);
        assert!((c.get(1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((c.get(2) - Complex64::new(-0.5, 0.0)).norm() < 1e-15);

        // Independent check: Cauchy integral on a small circle, k-th coefficient
        // = (1/2π) ∫ g(r e^{iθ}) r^{-k} e^{-ikθ} dθ by the trapezoid rule.
        let g = |z: Complex64| -(alpha - z).ln();
        let (r, m) = (0.25, 256);
        for k in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let z = Complex64::from_polar(r, theta);
                acc += g(z) * Complex64::from_polar(r.powi(-(k as i32)), -(k as f64) * theta);
            }
            acc /= m as f64;
            assert!(
                (acc - c.get(k)).norm() < 1e-12,
                "k={k}: {acc} vs {}",
                c.get(k)
            );
        }
    }

    #[test]
    fn alpha_on_the_cut_or_off_the_circle_is_rejected() {
        let minus_one = SymbolSpec::neg_log_alpha_minus_z(Complex::new(rat(-1, 1), rat(0, 1)));
        assert!(matches!(
            minus_one.compile::<f64>(),
            Err(Error::BranchUndefined(_))
        ));
        let off = SymbolSpec::neg_log_alpha_minus_z(Complex::new(rat(1, 2), rat(0, 1)));
        assert!(matches!(
            off.compile::<f64>(),
            Err(Error::BranchUndefined(_))
        ));
        let ok = SymbolSpec::neg_log_alpha_minus_z(Complex::new(rat(3, 5), rat(4, 5)));
        assert!(ok.compile::<f64>().is_ok());
    }

    #[test]
    fn exact_path_rejects_irrational_constant_term() {
        let s = SymbolSpec::named("log_alpha_i").unwrap();
        assert!(matches!(
            s.compile::<BigRational>(),
            Err(Error::Irrational(_))
        ));
        assert!(!s.is_rational());
        let one = SymbolSpec::neg_log_alpha_minus_z(Complex::new(rat(1, 1), rat(0, 1)));
        let c = coeffs_of::<BigRational>(&one, 3).unwrap();
        assert_eq!(c.get(3), Complex::new(rat(1, 3), rat(0, 1)));
    }

    #[test]
    fn reflect_examples() {
        let b = BilateralCoeffs::<f64>::new([(1, Complex64::new(1.0, 0.0))]);
        assert_eq!(reflect(&b).get(-1), Complex64::new(1.0, 0.0));
        assert_eq!(reflect(&b).get(1), Complex64::new(0.0, 0.0));
        let c = Complex64::new(2.0, -1.0);
        let fixed = BilateralCoeffs::<f64>::new([(0, c)]);
        assert_eq!(reflect(&fixed), fixed);
        let (a, bb) = (Complex64::new(1.5, 0.0), Complex64::new(0.0, 2.0));
        let two = BilateralCoeffs::<f64>::new([(-2, a), (3, bb)]);
        assert_eq!(reflect(&two), BilateralCoeffs::new([(2, a), (-3, bb)]));
    }

    #[test]
    fn registry_flags_follow_family() {
        let poly = SymbolSpec::named("one_plus_half_z").unwrap();
        assert!(poly.class_flags().unwrap().in_qa());
        let ces = SymbolSpec::named("cesaro").unwrap();
        assert!(ces.class_flags().unwrap().bmoa_only());
        let mix = SymbolSpec::linear_combination(vec![
            (Complex::new(rat(2, 1), rat(0, 1)), SymbolSpec::monomial(1)),
            (Complex::new(rat(1, 1), rat(0, 1)), ces),
        ]);
        assert!(mix.class_flags().is_none());
    }

    #[test]
    fn symbol_documents_parse() {
        let s: SymbolSpec =
            serde_json::from_str(r#"{"kind":"explicit","coeffs":[1,"1/2",[0,"-1/3"]]}"#).unwrap();
        let c = coeffs_of::<BigRational>(&s, 2).unwrap();
        assert_eq!(c.get(1), Complex::new(rat(1, 2), rat(0, 1)));
        assert_eq!(c.get(2), Complex::new(rat(0, 1), rat(-1, 3)));

        let named: SymbolSpec = serde_json::from_str(r#""cesaro""#).unwrap();
        assert_eq!(named, SymbolSpec::neg_log_one_minus_z());
        let named2: SymbolSpec = serde_json::from_str(r#"{"name":"z2"}"#).unwrap();
        assert_eq!(named2, SymbolSpec::monomial(2));
        let alpha: SymbolSpec =
            serde_json::from_str(r#"{"kind":"neg_log_alpha_minus_z","alpha":[0.6,0.8]}"#).unwrap();
        assert!(alpha.compile::<f64>().is_ok());
        let bad: std::result::Result<SymbolSpec, _> = serde_json::from_str(r#""nope""#);
        assert!(bad.is_err());

        let round: SymbolSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(round, s);
    }

    #[test]
    fn hankel_companion_of_cesaro_is_z_plus_half_z_squared() {
        let h = SymbolSpec::neg_log_one_minus_z()
            .compile::<BigRational>()
            .unwrap()
            .hankel_companion();
        assert_eq!(h.coeff(1), Complex::new(rat(1, 1), rat(0, 1)));
        assert_eq!(h.coeff(2), Complex::new(rat(1, 2), rat(0, 1)));
        for m in 3..40 {
            assert!(h.coeff(m).is_zero(), "m = {m}");
        }
    }
}
