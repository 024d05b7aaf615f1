//! Operator expressions as written in run configs:
//! `{"op": "volterra", "symbol": "cesaro"}`, `{"compose": [..]}`,
//! `{"add": [..]}`, `{"scale": [c, expr]}`, `{"adjoint": expr}`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{
    backshift_pow, delta0, flip, hankel, identity, moment_hankel, mult, projection, sg, shift_pow,
    toeplitz, volterra, Measure,
};
use crate::error::{Error, Result};
use crate::scalar::{lift, Real};
use crate::sections::{self, compose, FiniteSection, Operand, OperatorRule};
use crate::series::{BilateralCoeffs, Coefficient, SymbolSpec};

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Named(String),
    Atoms {
        atoms: Vec<(Coefficient, Coefficient)>,
    },
}

impl MeasureSpec {
    pub fn to_measure(&self) -> Result<Measure> {
        match self {
            MeasureSpec::Named(n) if n == "lebesgue" => Ok(Measure::Lebesgue),
            MeasureSpec::Named(n) => Err(Error::Unknown {
                kind: "measure",
                name: n.clone(),
            }),
            MeasureSpec::Atoms { atoms } => {
                let real = |c: &Coefficient| -> Result<BigRational> {
                    if c.0.im.is_zero() {
                        Ok(c.0.re.clone())
                    } else {
                        Err(Error::InvalidMeasure("atoms must be real".into()))
                    }
                };
                Ok(Measure::Atoms(
                    atoms
                        .iter()
                        .map(|(t, w)| Ok((real(t)?, real(w)?)))
                        .collect::<Result<_>>()?,
                ))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OpSpec {
    Identity,
    Shift {
        #[serde(default = "one")]
        n: i64,
    },
    Backshift {
        #[serde(default = "one")]
        n: i64,
    },
    Projection {
        n: i64,
    },
    Flip {
        n: i64,
    },
    Delta0,
    Volterra {
        symbol: SymbolSpec,
    },
    Sg {
        symbol: SymbolSpec,
    },
    Mult {
        symbol: SymbolSpec,
    },
    Toeplitz {
        coeffs: Vec<(i64, Coefficient)>,
    },
    Hankel {
        coeffs: Vec<(i64, Coefficient)>,
    },
    MomentHankel {
        measure: MeasureSpec,
    },
}

fn index(n: i64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::NegativeIndex(n))
}

fn bilateral<R: Real>(coeffs: &[(i64, Coefficient)]) -> BilateralCoeffs<R> {
    BilateralCoeffs::new(coeffs.iter().map(|(k, c)| (*k, lift::<R>(&c.0))))
}

impl OpSpec {
    pub fn rule<R: Real>(&self) -> Result<OperatorRule<R>> {
        Ok(match self {
            OpSpec::Identity => identity(),
            OpSpec::Shift { n } => shift_pow(index(*n)?),
            OpSpec::Backshift { n } => backshift_pow(index(*n)?),
            OpSpec::Projection { n } => projection(index(*n)?),
            OpSpec::Flip { n } => flip(index(*n)?),
            OpSpec::Delta0 => delta0(),
            OpSpec::Volterra { symbol } => volterra(symbol)?,
            OpSpec::Sg { symbol } => sg(symbol)?,
            OpSpec::Mult { symbol } => mult(symbol)?,
            OpSpec::Toeplitz { coeffs } => toeplitz(&bilateral(coeffs)),
            OpSpec::Hankel { coeffs } => hankel(&bilateral(coeffs)),
            OpSpec::MomentHankel { measure } => moment_hankel(&measure.to_measure()?)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Compose { compose: Vec<Expr> },
    Add { add: Vec<Expr> },
    Scale { scale: (Coefficient, Box<Expr>) },
    Adjoint { adjoint: Box<Expr> },
    Op(OpSpec),
}

impl Expr {
    pub fn op(spec: OpSpec) -> Self {
        Expr::Op(spec)
    }

    pub fn compose(factors: Vec<Expr>) -> Self {
        Expr::Compose { compose: factors }
    }

    pub fn volterra(symbol: SymbolSpec) -> Self {
        Expr::Op(OpSpec::Volterra { symbol })
    }

    pub fn sg(symbol: SymbolSpec) -> Self {
        Expr::Op(OpSpec::Sg { symbol })
    }

    pub fn mult(symbol: SymbolSpec) -> Self {
        Expr::Op(OpSpec::Mult { symbol })
    }

    pub fn shift(n: i64) -> Self {
        Expr::Op(OpSpec::Shift { n })
    }

    /// Static band bounds `(upper, lower)` of the expression.
    pub fn bands<R: Real>(&self) -> Result<(Option<i64>, Option<i64>)> {
        Ok(match self {
            Expr::Op(op) => {
                let r = op.rule::<R>()?;
                (r.upper_bandwidth(), r.lower_bandwidth())
            }
            Expr::Compose { compose } => {
                let mut acc = (Some(0), Some(0));
                for f in compose {
                    let (u, w) = f.bands::<R>()?;
                    acc = (
                        acc.0.zip(u).map(|(a, b)| a + b),
                        acc.1.zip(w).map(|(a, b)| a + b),
                    );
                }
                acc
            }
            Expr::Add { add } => {
                let mut acc: Option<(Option<i64>, Option<i64>)> = None;
                for t in add {
                    let (u, w) = t.bands::<R>()?;
                    acc = Some(match acc {
                        None => (u, w),
                        Some((au, aw)) => (
                            au.zip(u).map(|(a, b)| a.max(b)),
                            aw.zip(w).map(|(a, b)| a.max(b)),
                        ),
                    });
                }
                acc.unwrap_or((Some(0), Some(0)))
            }
            Expr::Scale { scale } => scale.1.bands::<R>()?,
            Expr::Adjoint { adjoint } => {
                let (u, w) = adjoint.bands::<R>()?;
                (w, u)
            }
        })
    }

    /// True when every symbol and coefficient in the expression is rational.
    pub fn is_rational(&self) -> bool {
        match self {
            Expr::Op(
                OpSpec::Volterra { symbol } | OpSpec::Sg { symbol } | OpSpec::Mult { symbol },
            ) => symbol.is_rational(),
            Expr::Op(_) => true,
            Expr::Compose { compose: v } | Expr::Add { add: v } => v.iter().all(Expr::is_rational),
            Expr::Scale { scale } => scale.1.is_rational(),
            Expr::Adjoint { adjoint } => adjoint.is_rational(),
        }
    }
}

/// Result of evaluating an expression: leaves stay infinite rules, products
/// become sections.
#[derive(Clone, Debug)]
pub enum Evaluated<R: Real> {
    Rule(OperatorRule<R>),
    Section(FiniteSection<R>),
}

impl<R: Real> Evaluated<R> {
    pub fn operand(&self) -> Operand<'_, R> {
        match self {
            Evaluated::Rule(r) => Operand::Rule(r),
            Evaluated::Section(s) => Operand::Section(s),
        }
    }

    pub fn into_section(self, rows: usize, cols: usize) -> FiniteSection<R> {
        match self {
            Evaluated::Rule(r) => sections::materialize(&r, rows, cols),
            Evaluated::Section(s) => Operand::Section(&s).section(rows, cols),
        }
    }
}

/// Evaluates `expr` so that its `rows × cols` corner is available. `cutoff`
/// bounds inner dimensions that no band limits.
pub fn evaluate<R: Real>(
    expr: &Expr,
    rows: usize,
    cols: usize,
    cutoff: Option<usize>,
) -> Result<Evaluated<R>> {
    match expr {
        Expr::Op(op) => Ok(Evaluated::Rule(op.rule()?)),
        Expr::Scale { scale: (c, inner) } => {
            let c = lift::<R>(&c.0);
            Ok(match evaluate::<R>(inner, rows, cols, cutoff)? {
                Evaluated::Rule(r) => Evaluated::Rule(r.scale(c)),
                Evaluated::Section(s) => Evaluated::Section(sections::scale(&c, &s)),
            })
        }
        Expr::Adjoint { adjoint } => Ok(match evaluate::<R>(adjoint, cols, rows, cutoff)? {
            Evaluated::Rule(r) => Evaluated::Rule(r.adjoint()),
            Evaluated::Section(s) => Evaluated::Section(sections::adjoint(&s)),
        }),
        Expr::Add { add } => {
            let terms = add
                .iter()
                .map(|t| evaluate::<R>(t, rows, cols, cutoff))
                .collect::<Result<Vec<_>>>()?;
            if terms.is_empty() {
                return Ok(Evaluated::Section(FiniteSection::zeros(rows, cols)));
            }
            if terms.iter().all(|t| matches!(t, Evaluated::Rule(_))) {
                let mut rules = terms.into_iter().map(|t| match t {
                    Evaluated::Rule(r) => r,
                    Evaluated::Section(_) => unreachable!(),
                });
                let first = rules.next().expect("nonempty");
                return Ok(Evaluated::Rule(rules.fold(first, |acc, r| acc.add(&r))));
            }
            let mut acc: Option<FiniteSection<R>> = None;
            for t in terms {
                let s = t.into_section(rows, cols);
                acc = Some(match acc {
                    None => s,
                    Some(a) => sections::add(&a, &s)?,
                });
            }
            Ok(Evaluated::Section(acc.expect("nonempty")))
        }
        Expr::Compose { compose: factors } => match factors.len() {
            0 => Ok(Evaluated::Rule(identity())),
            1 => evaluate(&factors[0], rows, cols, cutoff),
            n => {
                let bands = factors
                    .iter()
                    .map(|f| f.bands::<R>())
                    .collect::<Result<Vec<_>>>()?;
                // dims[i] = rows of the product of factors i.., i.e. the inner
                // dimension between factor i-1 and the rest.
                let mut dims = vec![rows; n];
                for i in 0..n - 1 {
                    let rest_lower: Option<i64> = bands[i + 1..]
                        .iter()
                        .try_fold(0, |acc, (_, w)| w.map(|w| acc + w));
                    let from_upper = bands[i].0.map(|u| (dims[i] as i64 + u).max(0) as usize);
                    let from_lower = rest_lower.map(|w| (cols as i64 + w).max(0) as usize);
                    dims[i + 1] = match (from_upper, from_lower) {
                        (Some(a), Some(b)) => a.min(b),
                        (Some(a), None) | (None, Some(a)) => a,
                        (None, None) => cutoff.ok_or(Error::UnboundedInner)?,
                    };
                }
                let mut acc = evaluate::<R>(&factors[n - 1], dims[n - 1], cols, cutoff)?;
                for i in (0..n - 1).rev() {
                    let left = evaluate::<R>(&factors[i], dims[i], dims[i + 1], cutoff)?;
                    let product = compose(left.operand(), acc.operand(), dims[i], cols, cutoff)?;
                    acc = Evaluated::Section(product);
                }
                Ok(acc)
            }
        },
    }
}

/// `rows × cols` section of `expr` with its exactness certificate.
pub fn evaluate_section<R: Real>(
    expr: &Expr,
    rows: usize,
    cols: usize,
    cutoff: Option<usize>,
) -> Result<FiniteSection<R>> {
    Ok(evaluate::<R>(expr, rows, cols, cutoff)?.into_section(rows, cols))
}
