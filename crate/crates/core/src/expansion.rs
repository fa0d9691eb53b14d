//! Expansion of functions on V(n,q) in the m-polynomial basis, and the
//! univariate representation of binary m-polynomials.
//!
//! For a generalized Hadamard matrix G the values MG(x;s) form a basis of
//! the functions on V(n,q); the expansion coefficients come out of the
//! orthogonality relations. Two coefficient systems exist:
//!
//! * alpha: `gamma(x) = sum_s alpha_s MG(x;s)`, and
//! * beta:  `gamma(x) = sum_s beta_s MG(s;x)`.
//!
//! When G is symmetric, `alpha_l = q^-n sum_i gamma(i) conj(MG(l;i))` and
//! `beta_l = q^-n sum_i gamma(i) conj(MG(i;l))`; with the signed core
//! pattern instead, both sums pick up `(-1)^{i_0}` inside and `(-1)^{l_0}`
//! outside. Every expansion is verified by reconstruction before it is
//! returned.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{compositions, Composition};
use crate::error::{Error, Result};
use crate::matrix::MatrixG;
use crate::mg::{mg_direct, mg_table, MTable};
use crate::scalar::{Scalar, ScalarContext};
use crate::structure::check_hadamard;

/// Which coefficient system an expansion uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Alpha,
    Beta,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Alpha => "alpha",
            Side::Beta => "beta",
        }
    }
}

/// Which hypothesis of G justified the coefficient formulas.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpansionVariant {
    Symmetric,
    Core,
}

impl ExpansionVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ExpansionVariant::Symmetric => "symmetric",
            ExpansionVariant::Core => "core",
        }
    }
}

/// A function given by its values on all of V(n,q), stored in canonical
/// order.
#[derive(Clone, PartialEq, Debug)]
pub struct GridFunction {
    n: usize,
    q: usize,
    order: Vec<Composition>,
    values: Vec<Scalar>,
}

impl GridFunction {
    /// Builds a grid function from point/value pairs, which must cover
    /// V(n,q) exactly (no omissions, duplicates, or strays).
    pub fn new(
        n: usize,
        q: usize,
        entries: impl IntoIterator<Item = (Composition, Scalar)>,
    ) -> Result<Self> {
        let order: Vec<Composition> = compositions(n, q).collect();
        let index: HashMap<&Composition, usize> =
            order.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut values: Vec<Option<Scalar>> = vec![None; order.len()];
        for (point, value) in entries {
            let Some(&i) = index.get(&point) else {
                return Err(Error::IncompleteGrid {
                    n,
                    q,
                    detail: format!("stray grid point {point}"),
                });
            };
            if values[i].is_some() {
                return Err(Error::IncompleteGrid {
                    n,
                    q,
                    detail: format!("duplicate grid point {point}"),
                });
            }
            values[i] = Some(value);
        }
        let mut filled = Vec::with_capacity(order.len());
        for (i, value) in values.into_iter().enumerate() {
            match value {
                Some(v) => filled.push(v),
                None => {
                    return Err(Error::IncompleteGrid {
                        n,
                        q,
                        detail: format!("missing grid point {}", order[i]),
                    })
                }
            }
        }
        Ok(GridFunction { n, q, order, values: filled })
    }

    /// Tabulates a closure over V(n,q).
    pub fn from_fn(n: usize, q: usize, mut f: impl FnMut(&Composition) -> Scalar) -> Self {
        let order: Vec<Composition> = compositions(n, q).collect();
        let values = order.iter().map(&mut f).collect();
        GridFunction { n, q, order, values }
    }

    /// The monomial `x^e = prod_i x_i^{e_i}` evaluated over the grid.
    pub fn monomial(n: usize, q: usize, exponents: &[usize], ctx: &ScalarContext) -> Result<Self> {
        if exponents.len() != q {
            return Err(Error::LengthMismatch { expected: q, found: exponents.len() });
        }
        let exps = exponents.to_vec();
        Ok(Self::from_fn(n, q, |x| {
            let mut acc = BigInt::one();
            for (&base, &e) in x.parts().iter().zip(&exps) {
                acc *= BigInt::from(base).pow(e as u32);
            }
            Scalar::from_bigint(&acc, ctx)
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn order(&self) -> &[Composition] {
        &self.order
    }

    /// Values in canonical order.
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value_at(&self, x: &Composition) -> Option<&Scalar> {
        self.order.iter().position(|c| c == x).map(|i| &self.values[i])
    }

    pub fn eq_values(&self, other: &GridFunction) -> bool {
        self.n == other.n
            && self.q == other.q
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.eq_value(b))
    }
}

/// Coefficients of an expansion in canonical V(n,q) order, together with
/// the side and the hypothesis variant that produced them.
#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub side: Side,
    pub variant: ExpansionVariant,
    pub n: usize,
    pub q: usize,
    pub coefficients: Vec<Scalar>,
}

fn detect_variant(g: &MatrixG) -> Result<ExpansionVariant> {
    let report = check_hadamard(g);
    if !report.is_hadamard {
        return Err(Error::HypothesisNotSatisfied(
            "expansion requires a generalized Hadamard matrix".to_string(),
        ));
    }
    if report.is_symmetric {
        Ok(ExpansionVariant::Symmetric)
    } else if report.is_core_pattern {
        Ok(ExpansionVariant::Core)
    } else {
        Err(Error::HypothesisNotSatisfied(
            "expansion requires G symmetric or with the signed core pattern".to_string(),
        ))
    }
}

/// Coefficients alpha with `gamma(x) = sum_s alpha_s MG(x;s)`.
pub fn expand_alpha(g: &MatrixG, f: &GridFunction) -> Result<ExpansionResult> {
    expand(g, f, Side::Alpha)
}

/// Coefficients beta with `gamma(x) = sum_s beta_s MG(s;x)`.
pub fn expand_beta(g: &MatrixG, f: &GridFunction) -> Result<ExpansionResult> {
    expand(g, f, Side::Beta)
}

pub fn expand(g: &MatrixG, f: &GridFunction, side: Side) -> Result<ExpansionResult> {
    if f.q() != g.q() {
        return Err(Error::LengthMismatch { expected: g.q(), found: f.q() });
    }
    let variant = detect_variant(g)?;
    let table = mg_table(g, f.n())?;
    let result = expand_with_table(g, f, side, variant, &table);
    // The orthogonality relations guarantee the expansion inverts exactly;
    // verify it before handing the coefficients out.
    let rebuilt = reconstruct_with_table(g, &result, &table);
    for (i, (a, b)) in rebuilt.values().iter().zip(f.values()).enumerate() {
        if !a.eq_value(b) {
            return Err(Error::RoundTripFailed { at: table.order()[i].to_string() });
        }
    }
    Ok(result)
}

fn expand_with_table(
    g: &MatrixG,
    f: &GridFunction,
    side: Side,
    variant: ExpansionVariant,
    table: &MTable,
) -> ExpansionResult {
    let ctx = g.context();
    let order = table.order();
    let q_pow_n_inv = BigRational::new(BigInt::one(), BigInt::from(g.q()).pow(f.n() as u32));
    let mut coefficients = Vec::with_capacity(order.len());
    for (li, l) in order.iter().enumerate() {
        let mut acc = Scalar::zero(ctx);
        for (ii, i) in order.iter().enumerate() {
            let basis = match side {
                Side::Alpha => table.value(li, ii),
                Side::Beta => table.value(ii, li),
            };
            let term = &f.values()[ii] * &basis.conj();
            let signed = match variant {
                ExpansionVariant::Symmetric => term,
                ExpansionVariant::Core => {
                    if i.parts()[0] % 2 == 1 {
                        term.neg()
                    } else {
                        term
                    }
                }
            };
            acc = &acc + &signed;
        }
        let mut coeff = acc.scale(&q_pow_n_inv);
        if variant == ExpansionVariant::Core && l.parts()[0] % 2 == 1 {
            coeff = coeff.neg();
        }
        coefficients.push(coeff);
    }
    ExpansionResult { side, variant, n: f.n(), q: f.q(), coefficients }
}

/// Evaluates an expansion back into its grid function.
pub fn reconstruct(g: &MatrixG, expansion: &ExpansionResult) -> Result<GridFunction> {
    if expansion.q != g.q() {
        return Err(Error::LengthMismatch { expected: g.q(), found: expansion.q });
    }
    let table = mg_table(g, expansion.n)?;
    Ok(reconstruct_with_table(g, expansion, &table))
}

fn reconstruct_with_table(g: &MatrixG, expansion: &ExpansionResult, table: &MTable) -> GridFunction {
    let ctx = g.context();
    let order = table.order();
    let values: Vec<Scalar> = (0..order.len())
        .map(|xi| {
            let mut acc = Scalar::zero(ctx);
            for (si, coeff) in expansion.coefficients.iter().enumerate() {
                let basis = match expansion.side {
                    Side::Alpha => table.value(xi, si),
                    Side::Beta => table.value(si, xi),
                };
                acc = &acc + &(coeff * basis);
            }
            acc
        })
        .collect();
    GridFunction {
        n: expansion.n,
        q: expansion.q,
        order: order.to_vec(),
        values,
    }
}

/// Which argument of MG(p;s) varies in a univariate fit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FitSide {
    /// Polynomial in `s_0 - s_1` with p held fixed.
    S,
    /// Polynomial in `p_0 - p_1` with s held fixed.
    P,
}

/// For q = 2 every function on V(n,2) collapses to one variable
/// `u = x_0 - x_1`; this interpolates MG(fixed;.) (or MG(.;fixed)) at the
/// n+1 grid nodes `u in {-n, -n+2, ..., n}` exactly and returns the unique
/// polynomial of degree <= n, lowest-degree coefficient first with trailing
/// zeros trimmed.
pub fn fit_univariate(
    g: &MatrixG,
    n: usize,
    fixed: &Composition,
    side: FitSide,
) -> Result<Vec<Scalar>> {
    if g.q() != 2 {
        return Err(Error::FitRequiresBinary(g.q()));
    }
    if fixed.arity() != 2 {
        return Err(Error::LengthMismatch { expected: 2, found: fixed.arity() });
    }
    if fixed.total() != n {
        return Err(Error::SumMismatch { expected: n, found: fixed.total() });
    }
    let ctx = g.context();
    let points: Vec<(BigInt, Scalar)> = compositions(n, 2)
        .map(|x| {
            let node = BigInt::from(x.parts()[0] as i64 * 2 - n as i64);
            let value = match side {
                FitSide::S => mg_direct(g, fixed, &x),
                FitSide::P => mg_direct(g, &x, fixed),
            }?;
            Ok((node, value))
        })
        .collect::<Result<_>>()?;

    // Exact Lagrange interpolation; the nodes are distinct by construction
    // so the basis denominators never vanish.
    let mut coefficients = vec![Scalar::zero(ctx); n + 1];
    for (k, (node_k, value_k)) in points.iter().enumerate() {
        let mut numer = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (node_j, _)) in points.iter().enumerate() {
            if j == k {
                continue;
            }
            // Multiply the running polynomial by (u - node_j).
            let mut next = vec![BigRational::from_integer(BigInt::ZERO); numer.len() + 1];
            for (d, c) in numer.iter().enumerate() {
                next[d] -= c * BigRational::from_integer(node_j.clone());
                next[d + 1] += c;
            }
            numer = next;
            let gap = BigRational::from_integer(node_k - node_j);
            assert!(!gap.numer().is_zero(), "interpolation nodes are distinct");
            denom *= gap;
        }
        let scaled = value_k.scale(&(BigRational::one() / denom));
        for (d, c) in numer.iter().enumerate() {
            coefficients[d] = &coefficients[d] + &scaled.scale(c);
        }
    }
    while coefficients.len() > 1 && coefficients.last().unwrap().is_zero() {
        coefficients.pop();
    }
    Ok(coefficients)
}
