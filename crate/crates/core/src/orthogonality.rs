//! Exhaustive verification of the orthogonality relations satisfied by the
//! m-polynomials of a generalized Hadamard matrix.
//!
//! Three relations are checked over all pairs (p,t) of V(n,q):
//!
//! * basic:      `sum_s (1/s!) MG(p;s) conj(MG(t;s)) = q^n/p! * delta`
//! * symmetric:  `sum_s MG(p;s) conj(MG(s;t)) = q^n * delta` (G symmetric)
//! * core:       `sum_s (-1)^{s_0} MG(p;s) conj(MG(s;t)) = (-1)^{t_0} q^n * delta`
//!   (G with the signed core pattern)
//!
//! All three are evaluated from one shared table per (G,n). In exact mode
//! the basic relation is accumulated with the integer weights n!/s! so that
//! intermediates stay in the ring of integers whenever G has integral
//! entries; the reported values are normalized back at the end.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::combinatorics::{factorial, multi_factorial, Composition};
use crate::error::{Error, Result};
use crate::matrix::MatrixG;
use crate::mg::{mg_table, Violation};
use crate::scalar::Scalar;
use crate::structure::check_hadamard;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrthVariant {
    Basic,
    Symmetric,
    Core,
}

impl OrthVariant {
    pub fn name(&self) -> &'static str {
        match self {
            OrthVariant::Basic => "basic",
            OrthVariant::Symmetric => "symmetric",
            OrthVariant::Core => "core",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub variant: OrthVariant,
    pub n: usize,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
    /// Largest |computed - expected| over all pairs; approximate mode only.
    pub max_abs_deviation: Option<f64>,
    /// Whether the matrix was verified to satisfy the variant's hypothesis.
    pub hypothesis_ok: bool,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_basic(g: &MatrixG, n: usize) -> Result<OrthogonalityReport> {
    verify_with(g, n, OrthVariant::Basic, false)
}

pub fn verify_symmetric(g: &MatrixG, n: usize) -> Result<OrthogonalityReport> {
    verify_with(g, n, OrthVariant::Symmetric, false)
}

pub fn verify_core(g: &MatrixG, n: usize) -> Result<OrthogonalityReport> {
    verify_with(g, n, OrthVariant::Core, false)
}

/// Runs one of the three relations. With `force` the hypothesis check is
/// still performed but an unsatisfied hypothesis no longer aborts, so the
/// report can demonstrate how the relation fails off-hypothesis.
pub fn verify_with(
    g: &MatrixG,
    n: usize,
    variant: OrthVariant,
    force: bool,
) -> Result<OrthogonalityReport> {
    let structure = check_hadamard(g);
    let hypothesis_ok = match variant {
        OrthVariant::Basic => structure.is_hadamard,
        OrthVariant::Symmetric => structure.is_hadamard && structure.is_symmetric,
        OrthVariant::Core => structure.is_hadamard && structure.is_core_pattern,
    };
    if !hypothesis_ok && !force {
        let requirement = match variant {
            OrthVariant::Basic => "a generalized Hadamard matrix",
            OrthVariant::Symmetric => "a symmetric generalized Hadamard matrix",
            OrthVariant::Core => "a generalized Hadamard matrix with the signed core pattern",
        };
        return Err(Error::HypothesisNotSatisfied(format!(
            "the {} relation requires {requirement}",
            variant.name()
        )));
    }

    let table = mg_table(g, n)?;
    let order = table.order().to_vec();
    let factorials: Vec<BigInt> = order.iter().map(multi_factorial).collect();
    let n_factorial = factorial(n);
    let q_pow_n = BigRational::from_integer(BigInt::from(g.q()).pow(n as u32));
    let ctx = g.context();

    let mut violations = Vec::new();
    let mut max_dev: Option<f64> = None;
    let mut pairs_checked = 0usize;
    for (pi, p) in order.iter().enumerate() {
        for (ti, t) in order.iter().enumerate() {
            pairs_checked += 1;
            let computed = match variant {
                OrthVariant::Basic => {
                    let mut acc = Scalar::zero(ctx);
                    for si in 0..order.len() {
                        let weight =
                            BigRational::new(n_factorial.clone(), factorials[si].clone());
                        let term = table.value(pi, si) * &table.value(ti, si).conj();
                        acc = &acc + &term.scale(&weight);
                    }
                    acc.scale(&BigRational::new(BigInt::one(), n_factorial.clone()))
                }
                OrthVariant::Symmetric => {
                    let mut acc = Scalar::zero(ctx);
                    for si in 0..order.len() {
                        acc = &acc + &(table.value(pi, si) * &table.value(si, ti).conj());
                    }
                    acc
                }
                OrthVariant::Core => {
                    let mut acc = Scalar::zero(ctx);
                    for (si, s) in order.iter().enumerate() {
                        let term = table.value(pi, si) * &table.value(si, ti).conj();
                        acc = if s.parts()[0] % 2 == 1 { &acc - &term } else { &acc + &term };
                    }
                    acc
                }
            };
            let expected = expected_value(variant, p, t, pi == ti, &q_pow_n, ctx);
            if let Some(diff) = computed
                .checked_sub(&expected)
                .ok()
                .and_then(|d| d.approx_magnitude())
            {
                max_dev = Some(max_dev.map_or(diff, |m| m.max(diff)));
            }
            if !computed.eq_value(&expected) {
                violations.push(Violation { p: p.clone(), t: t.clone(), computed, expected });
            }
        }
    }

    Ok(OrthogonalityReport {
        variant,
        n,
        pairs_checked,
        violations,
        max_abs_deviation: max_dev,
        hypothesis_ok,
    })
}

fn expected_value(
    variant: OrthVariant,
    p: &Composition,
    t: &Composition,
    diagonal: bool,
    q_pow_n: &BigRational,
    ctx: &crate::scalar::ScalarContext,
) -> Scalar {
    // The core relation's right side carries a sign, but it multiplies the
    // delta, so off the diagonal everything is zero.
    if !diagonal {
        return Scalar::zero(ctx);
    }
    match variant {
        OrthVariant::Basic => Scalar::from_rational(
            q_pow_n / BigRational::from_integer(multi_factorial(p)),
            ctx,
        ),
        OrthVariant::Symmetric => Scalar::from_rational(q_pow_n.clone(), ctx),
        OrthVariant::Core => {
            let value = Scalar::from_rational(q_pow_n.clone(), ctx);
            if t.parts()[0] % 2 == 1 {
                value.neg()
            } else {
                value
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Radicand, ScalarContext};

    fn plain() -> ScalarContext {
        ScalarContext::Exact(Radicand::plain())
    }

    fn from_ints(rows: &[&[i64]]) -> MatrixG {
        let c = plain();
        MatrixG::new(
            rows.iter()
                .map(|row| row.iter().map(|&v| Scalar::from_integer(v, &c)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn hadamard_2x2() -> MatrixG {
        from_ints(&[&[1, 1], &[1, -1]])
    }

    fn dft3() -> MatrixG {
        let ctx = ScalarContext::Exact(Radicand::sqrt(-3).unwrap());
        let parse = |t: &str| Scalar::parse(t, &ctx).unwrap();
        MatrixG::new(vec![
            vec![parse("1"), parse("1"), parse("1")],
            vec![parse("1"), parse("-1/2+1/2*r"), parse("-1/2-1/2*r")],
            vec![parse("1"), parse("-1/2-1/2*r"), parse("-1/2+1/2*r")],
        ])
        .unwrap()
    }

    fn sqrt3_matrix() -> MatrixG {
        let ctx = ScalarContext::Exact(Radicand::sqrt(3).unwrap());
        let parse = |t: &str| Scalar::parse(t, &ctx).unwrap();
        MatrixG::new(vec![
            vec![parse("1"), parse("1"), parse("1")],
            vec![parse("-1"), parse("1/2-1/2*r"), parse("1/2+1/2*r")],
            vec![parse("-1"), parse("1/2+1/2*r"), parse("1/2-1/2*r")],
        ])
        .unwrap()
    }

    #[test]
    fn basic_relation_on_the_2x2_hadamard() {
        let report = verify_basic(&hadamard_2x2(), 6).unwrap();
        assert!(report.passed());
        assert!(report.hypothesis_ok);
        assert_eq!(report.pairs_checked, 49);
        assert!(report.max_abs_deviation.is_none());
    }

    #[test]
    fn basic_relation_on_exact_complex_entries() {
        for n in 0..=3 {
            let report = verify_basic(&dft3(), n).unwrap();
            assert!(report.passed(), "n={n}");
        }
    }

    #[test]
    fn hypothesis_enforcement_and_negative_control() {
        let ones = from_ints(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            verify_basic(&ones, 2),
            Err(Error::HypothesisNotSatisfied(_))
        ));
        let forced = verify_with(&ones, 2, OrthVariant::Basic, true).unwrap();
        assert!(!forced.hypothesis_ok);
        assert!(!forced.passed());
        assert!(!forced.violations.is_empty());
    }

    #[test]
    fn symmetric_relation_on_the_2x2_hadamard() {
        let report = verify_symmetric(&hadamard_2x2(), 6).unwrap();
        assert!(report.passed());

        // Degenerate case: a single pair at n = 0.
        let report = verify_symmetric(&hadamard_2x2(), 0).unwrap();
        assert!(report.passed());
        assert_eq!(report.pairs_checked, 1);
    }

    #[test]
    fn core_relation_on_both_core_pattern_matrices() {
        for n in 0..=3 {
            let report = verify_core(&sqrt3_matrix(), n).unwrap();
            assert!(report.passed(), "3x3 n={n}");
        }
        let listed = from_ints(&[&[1, 1], &[-1, 1]]);
        for n in 0..=4 {
            let report = verify_core(&listed, n).unwrap();
            assert!(report.passed(), "2x2 n={n}");
        }
    }

    #[test]
    fn variant_hypotheses_are_distinguished() {
        // Hadamard but not symmetric: the symmetric relation must refuse.
        assert!(matches!(
            verify_symmetric(&sqrt3_matrix(), 2),
            Err(Error::HypothesisNotSatisfied(_))
        ));
        // Hadamard but not core-patterned.
        assert!(matches!(
            verify_core(&hadamard_2x2(), 2),
            Err(Error::HypothesisNotSatisfied(_))
        ));
    }

    #[test]
    fn approximate_mode_reports_deviation() {
        let ctx = ScalarContext::approx(1e-9);
        let f = |v: f64| Scalar::parse(&format!("{v}"), &ctx).unwrap();
        let g = MatrixG::new(vec![vec![f(1.0), f(1.0)], vec![f(1.0), f(-1.0)]]).unwrap();
        let report = verify_basic(&g, 4).unwrap();
        assert!(report.passed());
        let dev = report.max_abs_deviation.expect("approximate mode");
        assert!(dev <= 1e-12, "deviation {dev}");
    }
}
