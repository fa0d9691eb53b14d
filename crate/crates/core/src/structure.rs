//! Structural predicates on G that gate the orthogonality and expansion
//! machinery: generalized Hadamard, symmetric, and the signed first-row /
//! first-column pattern with a symmetric core.

use crate::matrix::MatrixG;
use crate::scalar::Scalar;

/// A row pair whose inner product deviates from the Hadamard requirement.
#[derive(Clone, Debug)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub found: Scalar,
    pub expected: Scalar,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub is_hadamard: bool,
    pub is_symmetric: bool,
    pub is_core_pattern: bool,
    /// Counterexamples to the Hadamard identity; empty iff `is_hadamard`.
    pub witnesses: Vec<Witness>,
}

/// Checks `G * conj-transpose(G) = q * I` (exactly in exact mode, within
/// tolerance in approximate mode) and reports every offending row pair.
/// The symmetry and core-pattern flags are filled in alongside.
pub fn check_hadamard(g: &MatrixG) -> StructureReport {
    let q = g.q();
    let ctx = g.context();
    let q_scalar = Scalar::from_integer(q as i64, ctx);
    let zero = Scalar::zero(ctx);
    let mut witnesses = Vec::new();
    for i in 0..q {
        for k in 0..q {
            let mut inner = Scalar::zero(ctx);
            for j in 0..q {
                inner = &inner + &(g.entry(i, j) * &g.entry(k, j).conj());
            }
            let expected = if i == k { q_scalar.clone() } else { zero.clone() };
            if !inner.eq_value(&expected) {
                witnesses.push(Witness { i, j: k, found: inner, expected });
            }
        }
    }
    StructureReport {
        is_hadamard: witnesses.is_empty(),
        is_symmetric: check_symmetric(g),
        is_core_pattern: check_core_pattern(g),
        witnesses,
    }
}

/// `G = G^T`.
pub fn check_symmetric(g: &MatrixG) -> bool {
    let q = g.q();
    for i in 0..q {
        for j in i + 1..q {
            if !g.entry(i, j).eq_value(g.entry(j, i)) {
                return false;
            }
        }
    }
    true
}

/// First row all ones (including the corner), first column below it all
/// minus one, and the core (G with row 0 and column 0 removed) symmetric.
pub fn check_core_pattern(g: &MatrixG) -> bool {
    let q = g.q();
    let ctx = g.context();
    let one = Scalar::one(ctx);
    let minus_one = Scalar::from_integer(-1, ctx);
    for j in 0..q {
        if !g.entry(0, j).eq_value(&one) {
            return false;
        }
    }
    for i in 1..q {
        if !g.entry(i, 0).eq_value(&minus_one) {
            return false;
        }
    }
    for i in 1..q {
        for j in i + 1..q {
            if !g.entry(i, j).eq_value(g.entry(j, i)) {
                return false;
            }
        }
    }
    true
}
