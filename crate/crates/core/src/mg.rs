//! Evaluation of the m-polynomials MG(p;s) of a matrix G.
//!
//! Two independent routes are implemented and kept as each other's oracle:
//!
//! * the direct sum over contingency tables with row sums s and column
//!   sums p, `MG(p;s) = s! * sum_r prod_{a,b} g_ab^{r_ab} / r_ab!`, and
//! * the generator expansion, reading MG(p;s) off as the z^p coefficient
//!   of `prod_i (sum_j g_ij z_j)^{s_i}`.
//!
//! Tables use the generator (one expansion fills a whole column); single
//! point queries use the direct sum.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::combinatorics::{
    composition_count, compositions, multi_factorial, tables, Composition,
};
use crate::error::{Error, Result};
use crate::matrix::MatrixG;
use crate::scalar::Scalar;
use crate::structure::{check_core_pattern, check_symmetric};

/// Default upper bound on the number of cells a table may occupy.
pub const DEFAULT_CELL_BUDGET: u64 = 1_000_000;

fn check_args(g: &MatrixG, c: &Composition) -> Result<()> {
    if c.arity() != g.q() {
        return Err(Error::LengthMismatch { expected: g.q(), found: c.arity() });
    }
    Ok(())
}

/// MG(p;s) by the direct sum over margin-constrained contingency tables.
pub fn mg_direct(g: &MatrixG, p: &Composition, s: &Composition) -> Result<Scalar> {
    check_args(g, p)?;
    check_args(g, s)?;
    if p.total() != s.total() {
        return Err(Error::SumMismatch { expected: s.total(), found: p.total() });
    }
    let s_factorial = multi_factorial(s);
    let mut acc = Scalar::zero(g.context());
    for table in tables(s, p)? {
        let mut term = Scalar::one(g.context());
        let mut denom = BigInt::one();
        for a in 0..g.q() {
            for b in 0..g.q() {
                let exp = table.entry(a, b);
                if exp == 0 {
                    continue;
                }
                term = &term * &g.entry(a, b).pow_nonneg(exp);
                denom *= crate::combinatorics::factorial(exp);
            }
        }
        // s!/prod r! is a product of per-row multinomials, so the division
        // is exact.
        let coeff = BigRational::new(s_factorial.clone(), denom);
        acc = &acc + &term.scale(&coeff);
    }
    Ok(acc)
}

/// Expands the generator polynomial of s and returns the coefficient of
/// z^p for every p in V(n,q); coefficients that vanish are present as
/// explicit zeros.
pub fn mg_generator(g: &MatrixG, s: &Composition) -> Result<BTreeMap<Composition, Scalar>> {
    check_args(g, s)?;
    let q = g.q();
    let n = s.total();
    let zero_exponent = Composition::new(vec![0; q]).expect("q >= 2");
    let mut poly: BTreeMap<Composition, Scalar> = BTreeMap::new();
    poly.insert(zero_exponent, Scalar::one(g.context()));
    for i in 0..q {
        for _ in 0..s.parts()[i] {
            let mut next: BTreeMap<Composition, Scalar> = BTreeMap::new();
            for (exponent, coeff) in &poly {
                for j in 0..q {
                    let weight = g.entry(i, j);
                    if weight.is_strict_zero() {
                        continue;
                    }
                    let mut bumped = exponent.parts().to_vec();
                    bumped[j] += 1;
                    let key = Composition::new(bumped).expect("q >= 2");
                    let term = coeff * weight;
                    match next.get_mut(&key) {
                        Some(existing) => *existing = &*existing + &term,
                        None => {
                            next.insert(key, term);
                        }
                    }
                }
            }
            poly = next;
        }
    }
    let mut out = BTreeMap::new();
    for p in compositions(n, q) {
        let coeff = poly.remove(&p).unwrap_or_else(|| Scalar::zero(g.context()));
        out.insert(p, coeff);
    }
    Ok(out)
}

/// The full |V(n,q)| x |V(n,q)| array of MG(p;s) values in canonical order,
/// rows indexed by p and columns by s.
#[derive(Clone, Debug)]
pub struct MTable {
    n: usize,
    order: Vec<Composition>,
    index: HashMap<Composition, usize>,
    values: Vec<Vec<Scalar>>,
    fingerprint: u64,
}

impl MTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length of the table.
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// The canonical enumeration of V(n,q) labelling both axes.
    pub fn order(&self) -> &[Composition] {
        &self.order
    }

    pub fn index_of(&self, c: &Composition) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// MG(p;s) by axis indices into `order`.
    pub fn value(&self, p_index: usize, s_index: usize) -> &Scalar {
        &self.values[p_index][s_index]
    }

    pub fn value_at(&self, p: &Composition, s: &Composition) -> Option<&Scalar> {
        Some(self.value(self.index_of(p)?, self.index_of(s)?))
    }

    /// Hash of the source matrix this table was computed from.
    pub fn matrix_fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Sum of column `s_index` over all rows.
    pub fn column_sum(&self, s_index: usize) -> Scalar {
        let mut acc = self.values[0][s_index].clone();
        for row in &self.values[1..] {
            acc = &acc + &row[s_index];
        }
        acc
    }
}

pub fn mg_table(g: &MatrixG, n: usize) -> Result<MTable> {
    mg_table_with_budget(g, n, DEFAULT_CELL_BUDGET)
}

pub fn mg_table_with_budget(g: &MatrixG, n: usize, cell_budget: u64) -> Result<MTable> {
    let side = composition_count(n, g.q());
    let cells = &side * &side;
    if cells > BigUint::from(cell_budget) {
        return Err(Error::BudgetExceeded {
            required_cells: cells.to_string(),
            budget: cell_budget,
        });
    }
    let order: Vec<Composition> = compositions(n, g.q()).collect();
    let index: HashMap<Composition, usize> = order
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let size = order.len();
    let mut values = vec![vec![Scalar::zero(g.context()); size]; size];
    for (s_index, s) in order.iter().enumerate() {
        let column = mg_generator(g, s)?;
        for (p_index, p) in order.iter().enumerate() {
            values[p_index][s_index] = column[p].clone();
        }
    }
    Ok(MTable { n, order, index, values, fingerprint: g.fingerprint() })
}

/// The closed form of the sum of MG(p;s) over all p in V(n,q):
/// `prod_i (sum_j g_ij)^{s_i}`, the product of the powered row sums of G.
pub fn mg_sum_over_p(g: &MatrixG, s: &Composition) -> Result<Scalar> {
    check_args(g, s)?;
    let mut acc = Scalar::one(g.context());
    for (i, &exp) in s.parts().iter().enumerate() {
        acc = &acc * &g.row_sum(i).pow_nonneg(exp);
    }
    Ok(acc)
}

/// The value of MG(s;p) predicted from MG(p;s) by the applicable symmetry
/// law: `(p!/s!) * MG(p;s)` when G is symmetric, with an extra
/// `(-1)^{s_0+p_0}` sign when G instead has the signed first-row /
/// first-column pattern with a symmetric core.
pub fn mg_swapped(g: &MatrixG, p: &Composition, s: &Composition) -> Result<Scalar> {
    let base = mg_direct(g, p, s)?;
    let ratio = BigRational::new(multi_factorial(p), multi_factorial(s));
    let scaled = base.scale(&ratio);
    if check_symmetric(g) {
        Ok(scaled)
    } else if check_core_pattern(g) {
        if (s.parts()[0] + p.parts()[0]) % 2 == 1 {
            Ok(scaled.neg())
        } else {
            Ok(scaled)
        }
    } else {
        Err(Error::HypothesisNotSatisfied(
            "matrix is neither symmetric nor of the signed core pattern".to_string(),
        ))
    }
}

/// The normalization `L_{p,s}(G) = MG(p;s) / s!` that satisfies the
/// matrix-product multiplication identity.
pub fn l_poly(g: &MatrixG, p: &Composition, s: &Composition) -> Result<Scalar> {
    let value = mg_direct(g, p, s)?;
    Ok(value.scale(&BigRational::new(BigInt::one(), multi_factorial(s))))
}

/// A pair of grid points where a verified identity fails, with both sides.
#[derive(Clone, Debug)]
pub struct Violation {
    pub p: Composition,
    pub t: Composition,
    pub computed: Scalar,
    pub expected: Scalar,
}

#[derive(Clone, Debug)]
pub struct MultiplicationReport {
    pub n: usize,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl MultiplicationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the multiplication identity
/// `L_{p,t}(G1*G2) = sum_s s! * L_{p,s}(G2) * L_{s,t}(G1)`
/// for every p, t in V(n,q) and reports each violated pair.
///
/// The factor order on the right follows this crate's convention that the
/// second argument of MG selects the matrix row (at n = 1 the identity
/// collapses to plain matrix multiplication, which pins the order down).
pub fn verify_multiplication(g1: &MatrixG, g2: &MatrixG, n: usize) -> Result<MultiplicationReport> {
    let product = g1.matmul(g2)?;
    let table_product = mg_table(&product, n)?;
    let table1 = mg_table(g1, n)?;
    let table2 = mg_table(g2, n)?;
    let order = table1.order();
    let factorials: Vec<BigInt> = order.iter().map(multi_factorial).collect();
    let mut violations = Vec::new();
    let mut pairs_checked = 0usize;
    for (pi, p) in order.iter().enumerate() {
        for (ti, t) in order.iter().enumerate() {
            pairs_checked += 1;
            // Multiplied through by t! the identity is division-free:
            // MG_{G1 G2}(p;t) = sum_s MG_{G2}(p;s) * MG_{G1}(s;t).
            let mut rhs = Scalar::zero(g1.context());
            for si in 0..order.len() {
                rhs = &rhs + &(table2.value(pi, si) * table1.value(si, ti));
            }
            let lhs = table_product.value(pi, ti);
            if !rhs.eq_value(lhs) {
                let t_inv = BigRational::new(BigInt::one(), factorials[ti].clone());
                violations.push(Violation {
                    p: p.clone(),
                    t: t.clone(),
                    computed: rhs.scale(&t_inv),
                    expected: lhs.scale(&t_inv),
                });
            }
        }
    }
    Ok(MultiplicationReport { n, pairs_checked, violations })
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

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn int(v: i64) -> Scalar {
        Scalar::from_integer(v, &plain())
    }

    #[test]
    fn identity_matrix_gives_kronecker_delta() {
        let id = MatrixG::identity(3, &plain()).unwrap();
        for p in compositions(3, 3) {
            for s in compositions(3, 3) {
                let value = mg_direct(&id, &p, &s).unwrap();
                let expected = if p == s { int(1) } else { int(0) };
                assert!(value.eq_value(&expected), "p={p} s={s}");
            }
        }
    }

    #[test]
    fn reference_values_for_both_2x2_matrices() {
        // The two sign conventions of the same Hadamard pair give opposite
        // values at this point.
        let listed = from_ints(&[&[1, 1], &[-1, 1]]);
        let value = mg_direct(&listed, &comp(&[2, 4]), &comp(&[3, 3])).unwrap();
        assert!(value.eq_value(&int(-3)));

        let symmetric = from_ints(&[&[1, 1], &[1, -1]]);
        let value = mg_direct(&symmetric, &comp(&[2, 4]), &comp(&[3, 3])).unwrap();
        assert!(value.eq_value(&int(3)));
    }

    #[test]
    fn generator_column_for_concentrated_s() {
        let g = from_ints(&[&[1, 1], &[1, -1]]);
        let column = mg_generator(&g, &comp(&[0, 6])).unwrap();
        let expected = [1i64, -6, 15, -20, 15, -6, 1];
        for (k, p) in compositions(6, 2).enumerate() {
            assert!(column[&p].eq_value(&int(expected[k])), "p={p}");
        }
    }

    #[test]
    fn generator_column_cross_checked_against_direct_sum() {
        let g = from_ints(&[&[1, 1], &[1, -1]]);
        let column = mg_generator(&g, &comp(&[5, 1])).unwrap();
        let expected = [-1i64, -4, -5, 0, 5, 4, 1];
        for (k, p) in compositions(6, 2).enumerate() {
            assert!(column[&p].eq_value(&int(expected[k])), "p={p}");
            let direct = mg_direct(&g, &p, &comp(&[5, 1])).unwrap();
            assert!(column[&p].eq_value(&direct));
        }
    }

    #[test]
    fn generator_of_empty_product() {
        let g = from_ints(&[&[1, 1], &[1, -1]]);
        let column = mg_generator(&g, &comp(&[0, 0])).unwrap();
        assert_eq!(column.len(), 1);
        assert!(column[&comp(&[0, 0])].eq_value(&int(1)));
    }

    #[test]
    fn both_routes_agree_on_small_random_matrices() {
        // Deterministic pseudo-random integer matrices.
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 7) as i64 - 3
        };
        for q in 2..=3usize {
            let rows: Vec<Vec<i64>> = (0..q).map(|_| (0..q).map(|_| next()).collect()).collect();
            let g = from_ints(&rows.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
            for n in 0..=3usize {
                for s in compositions(n, q) {
                    let column = mg_generator(&g, &s).unwrap();
                    for p in compositions(n, q) {
                        let direct = mg_direct(&g, &p, &s).unwrap();
                        assert!(direct.eq_value(&column[&p]), "q={q} n={n} p={p} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_row_is_legal() {
        let g = from_ints(&[&[0, 0], &[1, 2]]);
        let value = mg_direct(&g, &comp(&[1, 1]), &comp(&[2, 0])).unwrap();
        assert!(value.is_zero());
        let column = mg_generator(&g, &comp(&[2, 0])).unwrap();
        assert!(column.values().all(Scalar::is_zero));
        // Entirely concentrated on the nonzero row the value survives.
        let value = mg_direct(&g, &comp(&[1, 1]), &comp(&[0, 2])).unwrap();
        assert!(value.eq_value(&int(4)));
    }

    #[test]
    fn table_layout_and_budget() {
        let g = from_ints(&[&[1, 1], &[1, -1]]);
        let table = mg_table(&g, 6).unwrap();
        assert_eq!(table.size(), 7);
        assert_eq!(table.n(), 6);
        assert!(table
            .value_at(&comp(&[3, 3]), &comp(&[2, 4]))
            .unwrap()
            .eq_value(&int(4)));
        assert_eq!(table.matrix_fingerprint(), g.fingerprint());

        assert!(matches!(
            mg_table_with_budget(&g, 6, 48),
            Err(Error::BudgetExceeded { budget: 48, .. })
        ));

        let tiny = mg_table(&g, 0).unwrap();
        assert_eq!(tiny.size(), 1);
        assert!(tiny.value(0, 0).eq_value(&int(1)));
    }

    #[test]
    fn column_sums_match_powered_row_sums() {
        for g in [from_ints(&[&[1, 1], &[1, -1]]), from_ints(&[&[1, 1], &[-1, 1]])] {
            for n in 0..=6usize {
                let table = mg_table(&g, n).unwrap();
                for (si, s) in table.order().iter().enumerate() {
                    let closed = mg_sum_over_p(&g, s).unwrap();
                    assert!(table.column_sum(si).eq_value(&closed), "n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn sum_over_p_reference_values() {
        let g = from_ints(&[&[1, 1], &[1, -1]]);
        assert!(mg_sum_over_p(&g, &comp(&[3, 3])).unwrap().eq_value(&int(0)));
        assert!(mg_sum_over_p(&g, &comp(&[6, 0])).unwrap().eq_value(&int(64)));
        let ones = from_ints(&[&[1, 1], &[1, 1]]);
        assert!(mg_sum_over_p(&ones, &comp(&[1, 1])).unwrap().eq_value(&int(4)));
    }

    #[test]
    fn swapped_predictions_match_direct_evaluation() {
        let symmetric = from_ints(&[&[1, 1], &[1, -1]]);
        let p = comp(&[2, 4]);
        let s = comp(&[3, 3]);
        let predicted = mg_swapped(&symmetric, &p, &s).unwrap();
        assert!(predicted.eq_value(&int(4)));
        assert!(predicted.eq_value(&mg_direct(&symmetric, &s, &p).unwrap()));

        let listed = from_ints(&[&[1, 1], &[-1, 1]]);
        let predicted = mg_swapped(&listed, &p, &s).unwrap();
        assert!(predicted.eq_value(&int(4)));
        assert!(predicted.eq_value(&mg_direct(&listed, &s, &p).unwrap()));

        // p = s degenerates to the value itself under both laws.
        let diag = mg_swapped(&symmetric, &s, &s).unwrap();
        assert!(diag.eq_value(&mg_direct(&symmetric, &s, &s).unwrap()));

        let plainest = from_ints(&[&[1, 2], &[3, 4]]);
        assert!(matches!(
            mg_swapped(&plainest, &p, &s),
            Err(Error::HypothesisNotSatisfied(_))
        ));
    }

    #[test]
    fn l_poly_reference_values() {
        let doubled_identity = from_ints(&[&[2, 0], &[0, 2]]);
        let p = comp(&[1, 1]);
        assert!(l_poly(&doubled_identity, &p, &p).unwrap().eq_value(&int(4)));

        let id = MatrixG::identity(2, &plain()).unwrap();
        let s = comp(&[1, 1]);
        let value = l_poly(&id, &s, &s).unwrap();
        assert!(value.eq_value(&int(1)));

        let g = from_ints(&[&[1, 1], &[1, -1]]);
        let value = l_poly(&g, &comp(&[2, 4]), &comp(&[3, 3])).unwrap();
        let twelfth = Scalar::from_rational(
            BigRational::new(BigInt::from(1), BigInt::from(12)),
            &plain(),
        );
        assert!(value.eq_value(&twelfth));
    }

    #[test]
    fn multiplication_identity_holds() {
        let id = MatrixG::identity(2, &plain()).unwrap();
        let report = verify_multiplication(&id, &id, 3).unwrap();
        assert!(report.passed());
        assert_eq!(report.pairs_checked, 16);

        // A non-commuting pair; the identity is sensitive to factor order.
        let a = from_ints(&[&[1, 2], &[0, -1]]);
        let b = from_ints(&[&[2, 1], &[1, 1]]);
        let report = verify_multiplication(&a, &b, 3).unwrap();
        assert!(report.passed());
        let report = verify_multiplication(&b, &a, 3).unwrap();
        assert!(report.passed());

        let h = from_ints(&[&[1, 1], &[1, -1]]);
        let report = verify_multiplication(&h, &h.conj_transpose(), 3).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn l_poly_transposition_relation() {
        // L_{s,t}(G^T) = L_{t,s}(G); anchors which argument selects the row.
        let g = from_ints(&[&[1, 2], &[3, -1]]);
        let gt = g.conj_transpose();
        for n in 0..=3usize {
            for s in compositions(n, 2) {
                for t in compositions(n, 2) {
                    let lhs = l_poly(&gt, &s, &t).unwrap();
                    let rhs = l_poly(&g, &t, &s).unwrap();
                    assert!(lhs.eq_value(&rhs), "n={n} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn conjugation_commutes_with_evaluation() {
        let ctx = ScalarContext::Exact(Radicand::sqrt(-3).unwrap());
        let parse = |t: &str| Scalar::parse(t, &ctx).unwrap();
        let omega = "-1/2+1/2*r";
        let omega_sq = "-1/2-1/2*r";
        let dft3 = MatrixG::new(vec![
            vec![parse("1"), parse("1"), parse("1")],
            vec![parse("1"), parse(omega), parse(omega_sq)],
            vec![parse("1"), parse(omega_sq), parse(omega)],
        ])
        .unwrap();
        let conjugated = MatrixG::new(
            (0..3)
                .map(|i| (0..3).map(|j| dft3.entry(i, j).conj()).collect())
                .collect(),
        )
        .unwrap();
        let table = mg_table(&dft3, 2).unwrap();
        let conj_table = mg_table(&conjugated, 2).unwrap();
        for pi in 0..table.size() {
            for si in 0..table.size() {
                assert!(table
                    .value(pi, si)
                    .conj()
                    .eq_value(conj_table.value(pi, si)));
            }
        }
    }

    #[test]
    fn argument_validation() {
        let g = from_ints(&[&[1, 1], &[1, -1]]);
        assert!(matches!(
            mg_direct(&g, &comp(&[1, 1, 1]), &comp(&[3, 0])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            mg_direct(&g, &comp(&[1, 1]), &comp(&[3, 0])),
            Err(Error::SumMismatch { .. })
        ));
    }
}
