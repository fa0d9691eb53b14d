//! The square coefficient matrix G whose rows generate the m-polynomials.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarContext};

/// A q-by-q scalar matrix with `q >= 2`, all entries sharing one scalar
/// context. Entries are 0-indexed: `entry(i, j)` is row i, column j.
#[derive(Clone, PartialEq, Debug)]
pub struct MatrixG {
    q: usize,
    entries: Vec<Scalar>,
    ctx: ScalarContext,
}

impl MatrixG {
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let q = rows.len();
        if q < 2 {
            return Err(Error::MatrixTooSmall(q));
        }
        let mut entries = Vec::with_capacity(q * q);
        for row in rows {
            if row.len() != q {
                return Err(Error::LengthMismatch { expected: q, found: row.len() });
            }
            entries.extend(row);
        }
        let mut ctx = entries[0].context();
        for entry in &entries[1..] {
            ctx = ctx.merge(&entry.context())?;
        }
        Ok(MatrixG { q, entries, ctx })
    }

    pub fn identity(q: usize, ctx: &ScalarContext) -> Result<Self> {
        if q < 2 {
            return Err(Error::MatrixTooSmall(q));
        }
        let rows = (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| if i == j { Scalar::one(ctx) } else { Scalar::zero(ctx) })
                    .collect()
            })
            .collect();
        MatrixG::new(rows)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn context(&self) -> &ScalarContext {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.q + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.q..(i + 1) * self.q]
    }

    /// Sum of the entries of row i.
    pub fn row_sum(&self, i: usize) -> Scalar {
        self.row(i)
            .iter()
            .fold(Scalar::zero(&self.ctx), |acc, x| &acc + x)
    }

    pub fn conj_transpose(&self) -> MatrixG {
        let rows = (0..self.q)
            .map(|i| (0..self.q).map(|j| self.entry(j, i).conj()).collect())
            .collect();
        MatrixG::new(rows).expect("shape and context preserved")
    }

    pub fn matmul(&self, rhs: &MatrixG) -> Result<MatrixG> {
        if self.q != rhs.q {
            return Err(Error::LengthMismatch { expected: self.q, found: rhs.q });
        }
        self.ctx.merge(&rhs.ctx)?;
        let rows = (0..self.q)
            .map(|i| {
                (0..self.q)
                    .map(|j| {
                        let mut acc = Scalar::zero(&self.ctx);
                        for k in 0..self.q {
                            acc = &acc + &(self.entry(i, k) * rhs.entry(k, j));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        MatrixG::new(rows)
    }

    /// Stable hash of the matrix contents, used to tie derived tables and
    /// reports back to their source matrix.
    pub fn fingerprint(&self) -> u64 {
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        self.q.hash(&mut hasher);
        match &self.ctx {
            ScalarContext::Exact(rad) => {
                0u8.hash(&mut hasher);
                rad.value().unwrap_or(0).hash(&mut hasher);
            }
            ScalarContext::Approx { tol } => {
                1u8.hash(&mut hasher);
                tol.to_bits().hash(&mut hasher);
            }
        }
        for entry in &self.entries {
            entry.to_string().hash(&mut hasher);
        }
        hasher.finish()
    }
}
