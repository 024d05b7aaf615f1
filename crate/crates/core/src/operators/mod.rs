//! Exact entry rules for the operators on H² in the basis `e_k = z^k`.
//!
//! Closed forms, with `g = Σ g_k z^k`:
//!
//! ```text
//! V_g f = ∫₀ᶻ f g'   :  (V_g)_{m,l} = ((m-l)/m) g_{m-l}   for m > l
//! S_g f = ∫₀ᶻ f' g   :  (S_g)_{m,l} = (l/m) g_{m-l}       for m ≥ l ≥ 1
//! M_g f = g f        :  (M_g)_{m,l} = g_{m-l}             for m ≥ l
//! T_b                :  (T_b)_{m,l} = b̂(m-l)
//! H_b                :  (H_b)_{m,l} = b̂(-(m+l+1))
//! H_μ                :  (H_μ)_{m,l} = μ_{m+l},  μ_k = ∫ t^k dμ(t)
//! ```

mod expr;

pub use expr::{evaluate, evaluate_section, Evaluated, Expr, MeasureSpec, OpSpec};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cx_ratio, Real};
use crate::sections::OperatorRule;
use crate::series::{BilateralCoeffs, CompiledSymbol, SymbolSpec};

fn unit<R: Real>(hit: bool) -> Complex<R> {
    if hit {
        Complex::one()
    } else {
        Complex::zero()
    }
}

pub fn identity<R: Real>() -> OperatorRule<R> {
    OperatorRule::new("I", Some(0), Some(0), |m, l| unit(m == l))
}

/// `Sⁿ`: 1 at `(l+n, l)`.
pub fn shift_pow<R: Real>(n: usize) -> OperatorRule<R> {
    OperatorRule::new(
        format!("S^{n}"),
        Some(-(n as i64)),
        Some(n as i64),
        move |m, l| unit(m == l + n),
    )
}

/// `S*ⁿ`: 1 at `(l, l+n)`.
pub fn backshift_pow<R: Real>(n: usize) -> OperatorRule<R> {
    OperatorRule::new(
        format!("S*^{n}"),
        Some(n as i64),
        Some(-(n as i64)),
        move |m, l| unit(l == m + n),
    )
}

/// `P_n`: projection onto span{e_0, …, e_n}.
pub fn projection<R: Real>(n: usize) -> OperatorRule<R> {
    OperatorRule::new(format!("P_{n}"), Some(0), Some(0), move |m, l| {
        unit(m == l && l <= n)
    })
}

/// `J_n e_i = e_{n-i}` for `i ≤ n`, zero on the rest.
pub fn flip<R: Real>(n: usize) -> OperatorRule<R> {
    OperatorRule::new(
        format!("J_{n}"),
        Some(n as i64),
        Some(n as i64),
        move |m, l| unit(l <= n && m + l == n),
    )
}

/// `δ₀ f = f(0)`, as the rank one operator `f ↦ f(0)·e_0`.
pub fn delta0<R: Real>() -> OperatorRule<R> {
    OperatorRule::new("δ0", Some(0), Some(0), |m, l| unit(m == 0 && l == 0))
}

fn lower_from_degree<R: Real>(g: &CompiledSymbol<R>) -> Option<i64> {
    g.degree().map(|d| d as i64)
}

pub fn volterra_compiled<R: Real>(g: &CompiledSymbol<R>) -> OperatorRule<R> {
    let sym = g.clone();
    OperatorRule::new(
        format!("V[{}]", g.label()),
        Some(-1),
        lower_from_degree(g),
        move |m, l| {
            if m > l {
                let d = m - l;
                cx_ratio::<R>(d as i64, m as i64) * sym.coeff(d)
            } else {
                Complex::zero()
            }
        },
    )
}

pub fn sg_compiled<R: Real>(g: &CompiledSymbol<R>) -> OperatorRule<R> {
    let sym = g.clone();
    OperatorRule::new(
        format!("S[{}]", g.label()),
        Some(0),
        lower_from_degree(g),
        move |m, l| {
            if m >= l && l >= 1 {
                cx_ratio::<R>(l as i64, m as i64) * sym.coeff(m - l)
            } else {
                Complex::zero()
            }
        },
    )
}

pub fn mult_compiled<R: Real>(g: &CompiledSymbol<R>) -> OperatorRule<R> {
    let sym = g.clone();
    OperatorRule::new(
        format!("M[{}]", g.label()),
        Some(0),
        lower_from_degree(g),
        move |m, l| {
            if m >= l {
                sym.coeff(m - l)
            } else {
                Complex::zero()
            }
        },
    )
}

/// `V_g f(z) = ∫₀ᶻ f(u) g'(u) du`; strictly lower triangular.
pub fn volterra<R: Real>(g: &SymbolSpec) -> Result<OperatorRule<R>> {
    Ok(volterra_compiled(&g.compile()?))
}

/// `S_g f(z) = ∫₀ᶻ f'(u) g(u) du`; lower triangular with zero first column.
pub fn sg<R: Real>(g: &SymbolSpec) -> Result<OperatorRule<R>> {
    Ok(sg_compiled(&g.compile()?))
}

/// Multiplication by the analytic symbol `g`.
pub fn mult<R: Real>(g: &SymbolSpec) -> Result<OperatorRule<R>> {
    Ok(mult_compiled(&g.compile()?))
}

/// `T_b = P₊M_b`, constant along diagonals.
pub fn toeplitz<R: Real>(b: &BilateralCoeffs<R>) -> OperatorRule<R> {
    let upper = b.min_index().map_or(0, |k| -k);
    let lower = b.max_index().unwrap_or(0);
    let coeffs = b.clone();
    OperatorRule::new("T_b", Some(upper), Some(lower), move |m, l| {
        coeffs.get(m as i64 - l as i64)
    })
}

/// Hankel matrix `b̂(-(m+l+1))`, constant along anti-diagonals.
pub fn hankel<R: Real>(b: &BilateralCoeffs<R>) -> OperatorRule<R> {
    // Nonzero entries need m + l + 1 ≤ j, j the largest index with b̂(-j) ≠ 0.
    let j = b.min_index().filter(|k| *k < 0).map_or(0, |k| -k);
    let band = j - 1;
    let coeffs = b.clone();
    OperatorRule::new("H_b", Some(band), Some(band), move |m, l| {
        coeffs.get(-((m + l + 1) as i64))
    })
}

/// A positive measure on `[0, 1)`: finitely many atoms or Lebesgue measure.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    Lebesgue,
    Atoms(Vec<(BigRational, BigRational)>),
}

impl Measure {
    pub fn validate(&self) -> Result<()> {
        if let Measure::Atoms(atoms) = self {
            if atoms.is_empty() {
                return Err(Error::InvalidMeasure("no atoms".into()));
            }
            for (t, w) in atoms {
                if t.is_negative() || *t >= BigRational::one() {
                    return Err(Error::InvalidMeasure(format!(
                        "atom position {t} outside [0, 1)"
                    )));
                }
                if !w.is_positive() {
                    return Err(Error::InvalidMeasure(format!(
                        "atom weight {w} is not positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// k-th moment `∫ t^k dμ`.
    pub fn moment<R: Real>(&self, k: usize) -> R {
        match self {
            Measure::Lebesgue => R::ratio(1, k as i64 + 1),
            Measure::Atoms(atoms) => atoms.iter().fold(R::zero(), |acc, (t, w)| {
                let tk = if k == 0 {
                    BigRational::one()
                } else {
                    num_traits::pow(t.clone(), k)
                };
                acc + R::from_rational(&(tk * w))
            }),
        }
    }
}

/// `H_μ f(z) = ∫₀¹ f(t)/(1 - tz) dμ(t)`; entries are the moments `μ_{m+l}`.
pub fn moment_hankel<R: Real>(measure: &Measure) -> Result<OperatorRule<R>> {
    measure.validate()?;
    let name = match measure {
        Measure::Lebesgue => "H_μ[lebesgue]".to_string(),
        Measure::Atoms(a) => format!("H_μ[{} atoms]", a.len()),
    };
    let mu = measure.clone();
    Ok(OperatorRule::new(name, None, None, move |m, l| {
        Complex::new(mu.moment::<R>(m + l), R::zero())
    }))
}

/// Structural class a catalog rule claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    StrictlyLower,
    Lower,
    Banded,
    HankelType,
}

#[derive(Clone, Debug)]
pub struct OperatorCatalogEntry<R: Real> {
    pub name: &'static str,
    pub rule: OperatorRule<R>,
    /// Defining formula of the operator.
    pub provenance: &'static str,
    pub structure: Structure,
    pub symbol_dependencies: Vec<SymbolSpec>,
}

/// Every operator family, instantiated with symbol `g`, trigonometric
/// symbol `b` and parameter `n`.
pub fn catalog<R: Real>(
    g: &SymbolSpec,
    b: &BilateralCoeffs<R>,
    n: usize,
) -> Result<Vec<OperatorCatalogEntry<R>>> {
    let entry = |name, rule, provenance, structure, deps: Vec<SymbolSpec>| OperatorCatalogEntry {
        name,
        rule,
        provenance,
        structure,
        symbol_dependencies: deps,
    };
    Ok(vec![
        entry(
            "shift",
            shift_pow(n),
            "S^n f(z) = z^n f(z)",
            Structure::Banded,
            vec![],
        ),
        entry(
            "backshift",
            backshift_pow(n),
            "S* f(z) = (f(z) - f(0)) / z",
            Structure::Banded,
            vec![],
        ),
        entry(
            "projection",
            projection(n),
            "P_n f = Σ_{k≤n} a_k z^k",
            Structure::Banded,
            vec![],
        ),
        entry(
            "flip",
            flip(n),
            "J_n e_i = e_{n-i}, zero past n",
            Structure::HankelType,
            vec![],
        ),
        entry("delta0", delta0(), "δ0 f = f(0)", Structure::Banded, vec![]),
        entry("identity", identity(), "I f = f", Structure::Banded, vec![]),
        entry(
            "volterra",
            volterra(g)?,
            "V_g f(z) = ∫_0^z f(u) g'(u) du",
            Structure::StrictlyLower,
            vec![g.clone()],
        ),
        entry(
            "sg",
            sg(g)?,
            "S_g f(z) = ∫_0^z f'(u) g(u) du",
            Structure::Lower,
            vec![g.clone()],
        ),
        entry(
            "mult",
            mult(g)?,
            "M_g f = g f",
            Structure::Lower,
            vec![g.clone()],
        ),
        entry(
            "toeplitz",
            toeplitz(b),
            "T_b = P+ M_b",
            Structure::Banded,
            vec![],
        ),
        entry(
            "hankel",
            hankel(b),
            "H_b: entries b̂(-(m+l+1))",
            Structure::HankelType,
            vec![],
        ),
        entry(
            "moment_hankel",
            moment_hankel(&Measure::Lebesgue)?,
            "H_μ f(z) = ∫_0^1 f(t) / (1 - tz) dμ(t)",
            Structure::HankelType,
            vec![],
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sections::{add, compose, materialize, scale};
    use num_complex::Complex64;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Complex<Q> {
        cx_ratio(p, d)
    }

    #[test]
    fn shift_and_flip_entries() {
        let s2 = shift_pow::<f64>(2);
        assert_eq!(s2.entry(5, 3).re, 1.0);
        assert_eq!(s2.entry(4, 3).re, 0.0);
        let j3 = flip::<f64>(3);
        assert_eq!(j3.entry(0, 3).re, 1.0);
        assert_eq!(j3.entry(3, 0).re, 1.0);
        assert_eq!(j3.entry(4, 4).re, 0.0);
        let j2 = materialize(&flip::<f64>(2), 4, 4);
        for m in 0..4 {
            for l in 0..4 {
                let want = if l <= 2 && m + l == 2 { 1.0 } else { 0.0 };
                assert_eq!(j2.get(m, l).re, want);
            }
        }
    }

    #[test]
    fn delta0_keeps_the_constant_term() {
        let v = vec![q(3, 1), q(5, 1), q(7, 2)];
        let out = crate::sections::apply_rule(&delta0::<Q>(), &v, 3);
        assert_eq!(out, vec![q(3, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn volterra_examples() {
        let vz = volterra::<Q>(&SymbolSpec::monomial(1)).unwrap();
        for l in 0..10 {
            assert_eq!(vz.entry(l + 1, l), q(1, l as i64 + 1));
            assert_eq!(vz.entry(l + 2, l), q(0, 1));
            assert_eq!(vz.entry(l, l), q(0, 1));
        }
        let ces = volterra::<Q>(&SymbolSpec::neg_log_one_minus_z()).unwrap();
        for m in 1..12 {
            for l in 0..m {
                assert_eq!(ces.entry(m, l), q(1, m as i64));
            }
        }
        let vz2 = volterra::<Q>(&SymbolSpec::monomial(2)).unwrap();
        assert_eq!(vz2.entry(5, 3), q(2, 5));
        assert_eq!(vz2.entry(4, 3), q(0, 1));
    }

    #[test]
    fn sg_examples() {
        let s1 = sg::<Q>(&SymbolSpec::monomial(0)).unwrap();
        for m in 0..8 {
            for l in 0..8 {
                let want = if m == l && m > 0 { q(1, 1) } else { q(0, 1) };
                assert_eq!(s1.entry(m, l), want);
            }
        }
        let ces = sg::<Q>(&SymbolSpec::neg_log_one_minus_z()).unwrap();
        for m in 1..12i64 {
            for l in 1..m {
                assert_eq!(ces.entry(m as usize, l as usize), q(l, m * (m - l)));
            }
            assert_eq!(ces.entry(m as usize, m as usize), q(0, 1));
        }
    }

    #[test]
    fn sg_lowest_order_term_on_monomials() {
        // g = z^2 + 3 z^5: first nonzero coefficient a_2 = 1.
        let g = SymbolSpec::explicit(vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(3, 1)]);
        let rule = sg::<Q>(&g).unwrap();
        for n in 1..10usize {
            let col: Vec<_> = (0..n + 8).map(|m| rule.entry(m, n)).collect();
            let first = col.iter().position(|v| !v.is_zero()).unwrap();
            assert_eq!(first, n + 2);
            assert_eq!(col[first], q(n as i64, n as i64 + 2));
        }
    }

    #[test]
    fn mult_examples_and_decomposition() {
        let mz = materialize(&mult::<f64>(&SymbolSpec::monomial(1)).unwrap(), 8, 8);
        assert_eq!(
            mz.entries(),
            materialize(&shift_pow::<f64>(1), 8, 8).entries()
        );
        let m1 = materialize(&mult::<Q>(&SymbolSpec::monomial(0)).unwrap(), 8, 8);
        assert_eq!(m1.entries(), materialize(&identity::<Q>(), 8, 8).entries());

        for (_, g) in SymbolSpec::registry()
            .into_iter()
            .filter(|(_, g)| g.is_rational())
        {
            let c = g.compile::<Q>().unwrap();
            let lhs = materialize(&mult_compiled(&c), 16, 16);
            let rhs = add(
                &add(
                    &materialize(&sg_compiled(&c), 16, 16),
                    &materialize(&volterra_compiled(&c), 16, 16),
                )
                .unwrap(),
                &scale(&c.coeff(0), &materialize(&delta0(), 16, 16)),
            )
            .unwrap();
            assert_eq!(lhs.entries(), rhs.entries(), "{g}");
        }
    }

    #[test]
    fn toeplitz_and_hankel_examples() {
        let b = BilateralCoeffs::<f64>::new([(1, Complex64::new(1.0, 0.0))]);
        assert_eq!(
            materialize(&toeplitz(&b), 6, 6).entries(),
            materialize(&shift_pow(1), 6, 6).entries()
        );
        let bm = BilateralCoeffs::<f64>::new([(-1, Complex64::new(1.0, 0.0))]);
        let h = materialize(&hankel(&bm), 5, 5);
        assert_eq!(h.get(0, 0).re, 1.0);
        assert_eq!(h.frobenius(), 1.0);
    }

    #[test]
    fn moment_hankel_examples() {
        let hilbert = moment_hankel::<Q>(&Measure::Lebesgue).unwrap();
        assert_eq!(hilbert.entry(2, 3), q(1, 6));
        let origin =
            moment_hankel::<Q>(&Measure::Atoms(vec![(Q::from_integer(0.into()), Q::one())]))
                .unwrap();
        assert_eq!(origin.entry(0, 0), q(1, 1));
        assert_eq!(origin.entry(0, 1), q(0, 1));
        assert_eq!(origin.entry(3, 2), q(0, 1));
        let half = moment_hankel::<Q>(&Measure::Atoms(vec![(
            Q::new(1.into(), 2.into()),
            Q::one(),
        )]))
        .unwrap();
        assert_eq!(half.entry(2, 3), q(1, 32));
        let bad = Measure::Atoms(vec![(Q::one(), Q::one())]);
        assert!(matches!(
            moment_hankel::<f64>(&bad),
            Err(Error::InvalidMeasure(_))
        ));
        let bad_w = Measure::Atoms(vec![(Q::new(1.into(), 3.into()), Q::zero())]);
        assert!(matches!(
            moment_hankel::<f64>(&bad_w),
            Err(Error::InvalidMeasure(_))
        ));
    }

    #[test]
    fn half_atom_sections_are_positive_semidefinite() {
        use nalgebra::DMatrix;
        let rule = moment_hankel::<f64>(&Measure::Atoms(vec![(
            Q::new(1.into(), 2.into()),
            Q::one(),
        )]))
        .unwrap();
        for n in [1usize, 4, 12] {
            let s = materialize(&rule, n, n);
            let m = DMatrix::from_fn(n, n, |i, j| s.get(i, j).re);
            let eig = m.symmetric_eigenvalues();
            assert!(eig.iter().all(|&e| e > -1e-12), "{eig:?}");
            if n > 2 {
                assert!((s.get(1, 2).re - 0.125).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn catalog_bands_match_structure() {
        let b = BilateralCoeffs::<f64>::new([
            (-2, Complex64::new(1.0, 0.0)),
            (3, Complex64::new(0.5, 0.0)),
        ]);
        for g in ["cesaro", "one_plus_half_z"] {
            let g = SymbolSpec::named(g).unwrap();
            for e in catalog::<f64>(&g, &b, 3).unwrap() {
                let u = e.rule.upper_bandwidth();
                match e.structure {
                    Structure::StrictlyLower => assert_eq!(u, Some(-1), "{}", e.name),
                    Structure::Lower => assert_eq!(u, Some(0), "{}", e.name),
                    _ => {}
                }
                // The declared band is honest: the raw closure vanishes outside it.
                for m in 0..24usize {
                    for l in 0..24usize {
                        let d = l as i64 - m as i64;
                        let outside = u.is_some_and(|u| d > u)
                            || e.rule.lower_bandwidth().is_some_and(|w| -d > w);
                        if outside {
                            assert_eq!(
                                e.rule.raw_entry(m, l),
                                Complex64::new(0.0, 0.0),
                                "{} ({m},{l})",
                                e.name
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_formula_small_window() {
        let g = SymbolSpec::neg_log_one_minus_z();
        let vg = volterra::<Q>(&g).unwrap();
        let lhs = compose(
            &volterra::<Q>(&SymbolSpec::monomial(1)).unwrap(),
            &vg,
            8,
            8,
            None,
        )
        .unwrap();
        let rhs = crate::sections::sub(
            &compose(&shift_pow::<Q>(1), &vg, 8, 8, None).unwrap(),
            &compose(&vg, &shift_pow::<Q>(1), 8, 8, None).unwrap(),
        )
        .unwrap();
        assert!(lhs.fully_exact() && rhs.fully_exact());
        assert_eq!(lhs.entries(), rhs.entries());
    }
}
