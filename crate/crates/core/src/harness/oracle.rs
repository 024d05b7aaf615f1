//! Exact oracles for the identity suites.
//!
//! [`rational_oracle`] evaluates an expression with the matrix rules over
//! `Complex<BigRational>`. [`symbolic_matrix`] never touches a matrix rule:
//! it applies each operator to `e_l` by calculus on power series (products,
//! termwise derivatives and integrals, Laurent products for `T_b` and `H_b`),
//! so agreement between the two checks the closed-form entries themselves.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operators::{evaluate_section, Expr, Measure, OpSpec};
use crate::scalar::CRational;
use crate::sections::FiniteSection;
use crate::series::{coeffs_of, BilateralCoeffs, SymbolSpec};

/// Exact `window × window` section of `expr` over complex rationals.
pub fn rational_oracle(
    expr: &Expr,
    rows: usize,
    cols: usize,
) -> Result<FiniteSection<BigRational>> {
    if !expr.is_rational() {
        return Err(Error::Irrational(format!("{expr:?}")));
    }
    evaluate_section::<BigRational>(expr, rows, cols, Some(rows + cols + 64))
}

/// A power series known exactly through degree `valid` (`None`: the stored
/// coefficients are the complete polynomial).
#[derive(Clone, Debug, PartialEq)]
struct Series {
    coeffs: Vec<CRational>,
    valid: Option<i64>,
}

fn zero() -> CRational {
    Complex::zero()
}

fn q(p: i64, d: i64) -> CRational {
    Complex::new(BigRational::new(p.into(), d.into()), BigRational::zero())
}

impl Series {
    fn complete(coeffs: Vec<CRational>) -> Self {
        Series {
            coeffs,
            valid: None,
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    fn get(&self, k: usize) -> CRational {
        self.coeffs.get(k).cloned().unwrap_or_else(zero)
    }

    fn valid_through(&self, deg: i64) -> bool {
        self.valid.is_none_or(|v| v >= deg)
    }

    fn limit(self, depth: usize) -> Self {
        let mut s = self;
        if s.coeffs.len() > depth + 1 {
            s.coeffs.truncate(depth + 1);
            s.valid = Some(s.valid.map_or(depth as i64, |v| v.min(depth as i64)));
        }
        s
    }
}

fn min_valid(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn product(a: &[CRational], b: &[CRational], depth: usize) -> Vec<CRational> {
    let n = (a.len() + b.len()).saturating_sub(1).min(depth + 1);
    let mut out = vec![zero(); n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(n.saturating_sub(i)) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + x * y;
            }
        }
    }
    out
}

fn derivative(a: &[CRational]) -> Vec<CRational> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * q(k as i64, 1))
        .collect()
}

/// `∫₀ᶻ`, termwise.
fn integral(a: &[CRational]) -> Vec<CRational> {
    std::iter::once(zero())
        .chain(a.iter().enumerate().map(|(k, c)| c * q(1, k as i64 + 1)))
        .collect()
}

struct SymbolSeries {
    coeffs: Vec<CRational>,
    /// Degree through which `coeffs` is exact; `None` for polynomials.
    valid: Option<i64>,
}

fn symbol_series(g: &SymbolSpec, depth: usize) -> Result<SymbolSeries> {
    let compiled = g.compile::<BigRational>()?;
    let degree = compiled.degree();
    let order = degree.unwrap_or(depth);
    let t = coeffs_of::<BigRational>(g, order)?;
    Ok(SymbolSeries {
        coeffs: t.as_slice().to_vec(),
        valid: if degree.is_some() {
            None
        } else {
            Some(depth as i64)
        },
    })
}

fn bilateral(coeffs: &[(i64, crate::series::Coefficient)]) -> BilateralCoeffs<BigRational> {
    BilateralCoeffs::new(coeffs.iter().map(|(k, c)| (*k, c.0.clone())))
}

fn apply_op(op: &OpSpec, f: Series, depth: usize) -> Result<Series> {
    let idx = |n: i64| usize::try_from(n).map_err(|_| Error::NegativeIndex(n));
    Ok(match op {
        OpSpec::Identity => f,
        OpSpec::Shift { n } => {
            let n = idx(*n)?;
            let mut c = vec![zero(); n];
            c.extend(f.coeffs);
            Series {
                coeffs: c,
                valid: f.valid.map(|v| v + n as i64),
            }
            .limit(depth)
        }
        OpSpec::Backshift { n } => {
            let n = idx(*n)?;
            Series {
                coeffs: f.coeffs.into_iter().skip(n).collect(),
                valid: f.valid.map(|v| v - n as i64),
            }
        }
        OpSpec::Projection { n } => {
            let n = idx(*n)?;
            if !f.valid_through(n as i64) {
                return Err(Error::Uncertifiable(
                    "projection of a truncated series".into(),
                ));
            }
            Series::complete(f.coeffs.into_iter().take(n + 1).collect())
        }
        OpSpec::Flip { n } => {
            let n = idx(*n)?;
            if !f.valid_through(n as i64) {
                return Err(Error::Uncertifiable("flip of a truncated series".into()));
            }
            Series::complete((0..=n).map(|i| f.get(n - i)).collect())
        }
        OpSpec::Delta0 => {
            if !f.valid_through(0) {
                return Err(Error::Uncertifiable(
                    "point evaluation of an empty series".into(),
                ));
            }
            Series::complete(vec![f.get(0)])
        }
        OpSpec::Volterra { symbol } => {
            let g = symbol_series(symbol, depth)?;
            // V_g f = ∫ f·g'; degree m of the result needs g' through m − 1.
            let prod = product(&f.coeffs, &derivative(&g.coeffs), depth);
            Series {
                coeffs: integral(&prod),
                valid: min_valid(f.valid.map(|v| v + 1), g.valid),
            }
            .limit(depth)
        }
        OpSpec::Sg { symbol } => {
            let g = symbol_series(symbol, depth)?;
            // S_g f = ∫ f'·g.
            let prod = product(&derivative(&f.coeffs), &g.coeffs, depth);
            Series {
                coeffs: integral(&prod),
                valid: min_valid(f.valid, g.valid.map(|v| v + 1)),
            }
            .limit(depth)
        }
        OpSpec::Mult { symbol } => {
            let g = symbol_series(symbol, depth)?;
            Series {
                coeffs: product(&f.coeffs, &g.coeffs, depth),
                valid: min_valid(f.valid, g.valid),
            }
            .limit(depth)
        }
        OpSpec::Toeplitz { coeffs } => {
            // P₊(b·f) as a Laurent product.
            let b = bilateral(coeffs);
            let lo = b.min_index().unwrap_or(0).min(0);
            let mut out =
                vec![zero(); (f.coeffs.len() as i64 + b.max_index().unwrap_or(0).max(0)) as usize];
            for (k, bk) in b.iter() {
                for (j, fj) in f.coeffs.iter().enumerate() {
                    let m = j as i64 + k;
                    if m >= 0 {
                        out[m as usize] = &out[m as usize] + bk * fj;
                    }
                }
            }
            Series {
                coeffs: out,
                valid: f.valid.map(|v| v + lo),
            }
            .limit(depth)
        }
        OpSpec::Hankel { coeffs } => {
            // Coefficient m is the (−m−1)-th Laurent coefficient of b·f.
            let b = bilateral(coeffs);
            let j = b.min_index().filter(|k| *k < 0).map_or(0, |k| -k);
            if !f.valid_through(j - 1) {
                return Err(Error::Uncertifiable(
                    "Hankel image of a truncated series".into(),
                ));
            }
            let mut out = vec![zero(); j.max(0) as usize];
            for (k, bk) in b.iter() {
                for (l, fl) in f.coeffs.iter().enumerate() {
                    let m = -(l as i64 + k) - 1;
                    if m >= 0 && (m as usize) < out.len() {
                        out[m as usize] = &out[m as usize] + bk * fl;
                    }
                }
            }
            Series::complete(out)
        }
        OpSpec::MomentHankel { measure } => {
            // (H_μ f)_m = ∫ t^m f(t) dμ(t), for the complete polynomial f.
            if f.valid.is_some() {
                return Err(Error::Uncertifiable(
                    "moment Hankel image of a truncated series".into(),
                ));
            }
            let mu = measure.to_measure()?;
            mu.validate()?;
            let integrate_monomial = |k: usize| -> CRational {
                match &mu {
                    Measure::Lebesgue => q(1, k as i64 + 1),
                    Measure::Atoms(atoms) => {
                        let s = atoms.iter().fold(BigRational::zero(), |acc, (t, w)| {
                            acc + num_traits::pow(t.clone(), k) * w
                        });
                        Complex::new(s, BigRational::zero())
                    }
                }
            };
            let coeffs = (0..=depth)
                .map(|m| {
                    f.coeffs
                        .iter()
                        .enumerate()
                        .fold(zero(), |acc, (l, fl)| acc + fl * integrate_monomial(m + l))
                })
                .collect();
            Series {
                coeffs,
                valid: Some(depth as i64),
            }
        }
    })
}

fn apply(expr: &Expr, f: Series, depth: usize) -> Result<Series> {
    match expr {
        Expr::Op(op) => apply_op(op, f, depth),
        Expr::Compose { compose } => compose
            .iter()
            .rev()
            .try_fold(f, |acc, e| apply(e, acc, depth)),
        Expr::Add { add } => {
            let mut out = Series::complete(Vec::new());
            for term in add {
                let s = apply(term, f.clone(), depth)?;
                let n = out.coeffs.len().max(s.coeffs.len());
                out = Series {
                    coeffs: (0..n).map(|k| out.get(k) + s.get(k)).collect(),
                    valid: min_valid(out.valid, s.valid),
                };
            }
            Ok(out)
        }
        Expr::Scale { scale: (c, inner) } => {
            let s = apply(inner, f, depth)?;
            Ok(Series {
                coeffs: s.coeffs.iter().map(|x| x * &c.0).collect(),
                valid: s.valid,
            })
        }
        Expr::Adjoint { .. } => Err(Error::Invalid("the symbolic oracle has no adjoints".into())),
    }
}

/// `rows × cols` section of `expr`, column `l` computed as the image of `e_l`
/// by power-series calculus. Non-polynomial symbols are truncated at degree
/// `depth`; entries that truncation could affect are refused.
pub fn symbolic_matrix(
    expr: &Expr,
    rows: usize,
    cols: usize,
    depth: usize,
) -> Result<FiniteSection<BigRational>> {
    let mut columns = Vec::with_capacity(cols);
    for l in 0..cols {
        let mut e = vec![zero(); l + 1];
        e[l] = Complex::one();
        let image = apply(expr, Series::complete(e), depth)?;
        if !image.valid_through(rows as i64 - 1) {
            return Err(Error::Uncertifiable(format!(
                "column {l} is exact only through degree {:?}",
                image.valid
            )));
        }
        columns.push(image);
    }
    Ok(FiniteSection::from_fn(rows, cols, |m, l| columns[l].get(m)))
}

/// Image of `e_l` as a coefficient vector of length `rows`.
pub fn symbolic_column(expr: &Expr, l: usize, rows: usize, depth: usize) -> Result<Vec<CRational>> {
    let s = symbolic_matrix(expr, rows, l + 1, depth)?;
    Ok(s.column(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::OpSpec;
    use crate::series::{Coefficient, SymbolSpec};

    fn agree(expr: &Expr, n: usize) {
        let sym = symbolic_matrix(expr, n, n, 3 * n).unwrap();
        let rat = rational_oracle(expr, n, n).unwrap();
        assert_eq!(sym.entries(), rat.entries(), "{expr:?}");
    }

    #[test]
    fn calculus_matches_the_matrix_rules() {
        for (_, g) in SymbolSpec::registry()
            .into_iter()
            .filter(|(_, g)| g.is_rational())
        {
            agree(&Expr::volterra(g.clone()), 12);
            agree(&Expr::sg(g.clone()), 12);
            agree(&Expr::mult(g.clone()), 12);
        }
        let b = vec![
            (-3, Coefficient::real(1, 2)),
            (0, Coefficient::real(2, 1)),
            (2, Coefficient::real(-1, 3)),
        ];
        agree(&Expr::op(OpSpec::Toeplitz { coeffs: b.clone() }), 10);
        agree(&Expr::op(OpSpec::Hankel { coeffs: b }), 10);
        agree(
            &Expr::op(OpSpec::MomentHankel {
                measure: crate::operators::MeasureSpec::Named("lebesgue".into()),
            }),
            8,
        );
        for op in [
            OpSpec::Shift { n: 2 },
            OpSpec::Backshift { n: 3 },
            OpSpec::Flip { n: 4 },
            OpSpec::Projection { n: 3 },
            OpSpec::Delta0,
        ] {
            agree(&Expr::op(op), 9);
        }
    }

    #[test]
    fn products_and_sums_agree() {
        let g = SymbolSpec::named("cesaro").unwrap();
        let expr = Expr::Add {
            add: vec![
                Expr::compose(vec![Expr::shift(1), Expr::volterra(g.clone())]),
                Expr::Scale {
                    scale: (
                        Coefficient::real(-1, 1),
                        Box::new(Expr::compose(vec![Expr::volterra(g), Expr::shift(1)])),
                    ),
                },
            ],
        };
        agree(&expr, 10);
    }

    #[test]
    fn truncation_is_never_silent() {
        let g = SymbolSpec::named("cesaro").unwrap();
        let expr = Expr::compose(vec![
            Expr::op(OpSpec::Backshift { n: 5 }),
            Expr::volterra(g),
        ]);
        assert!(symbolic_matrix(&expr, 8, 4, 10).is_err());
        assert!(symbolic_matrix(&expr, 8, 4, 13).is_ok());
    }

    #[test]
    fn irrational_symbols_are_refused() {
        let g = SymbolSpec::named("log_alpha_i").unwrap();
        assert!(matches!(
            rational_oracle(&Expr::volterra(g), 4, 4),
            Err(Error::Irrational(_))
        ));
    }
}
