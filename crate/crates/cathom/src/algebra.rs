//! Finite-dimensional associative ℚ-algebras presented by structure
//! constants, and the trace-form radical.
//!
//! Both the category algebra ℚ𝒞 and the Mackey algebra μ_ℚ(G) reduce
//! their semisimplicity and radical questions to this module. Over a
//! field of characteristic zero the Jacobson radical equals the radical
//! of the bilinear form (x, y) ↦ tr(L_{xy}), L being left multiplication.

use crate::exactla::{kernel_basis, RatMatrix, Rational};
use num::Zero;

/// Sorted sparse vector in basis coordinates.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn sparse_unit(i: usize) -> SparseVec {
    vec![(i, Rational::from_integer(1.into()))]
}

pub fn sparse_add(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                let v = &x.1 + &y.1;
                if !v.is_zero() {
                    out.push((x.0, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                out.push(x.clone());
                i += 1;
                let _ = y;
            }
            (Some(_), Some(y)) => {
                out.push(y.clone());
                j += 1;
            }
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(y)) => {
                out.push(y.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub fn sparse_scale(a: &SparseVec, c: &Rational) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

/// Multiplication table of a unital associative algebra on a fixed basis.
#[derive(Debug, Clone)]
pub struct MultTable {
    pub dim: usize,
    /// prod[i][j] = b_i · b_j in basis coordinates.
    pub prod: Vec<Vec<SparseVec>>,
    /// Coordinates of the unit element.
    pub unit: SparseVec,
}

impl MultTable {
    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x {
            for (j, b) in y {
                out = sparse_add(&out, &sparse_scale(&self.prod[*i][*j], &(a * b)));
            }
        }
        out
    }

    /// Matrix of left multiplication by x on the algebra itself.
    pub fn left_mul_matrix(&self, x: &SparseVec) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(x, &sparse_unit(j));
            for (i, v) in col {
                m.set(i, j, v);
            }
        }
        m
    }

    fn trace_of_left_mul_basis(&self) -> Vec<Rational> {
        (0..self.dim)
            .map(|k| {
                let mut t = Rational::zero();
                for m in 0..self.dim {
                    if let Ok(pos) = self.prod[k][m].binary_search_by_key(&m, |e| e.0) {
                        t += &self.prod[k][m][pos].1;
                    }
                }
                t
            })
            .collect()
    }

    /// Basis of the Jacobson radical as columns, in basis coordinates:
    /// the kernel of the Gram matrix G[i][j] = tr(L_{b_i b_j}).
    pub fn jacobson_radical_basis(&self) -> RatMatrix {
        let traces = self.trace_of_left_mul_basis();
        let gram = RatMatrix::from_fn(self.dim, self.dim, |i, j| {
            let mut t = Rational::zero();
            for (k, c) in &self.prod[i][j] {
                t += c * &traces[*k];
            }
            t
        });
        kernel_basis(&gram)
    }

    pub fn is_semisimple(&self) -> bool {
        self.jacobson_radical_basis().cols() == 0
    }

    /// Exhaustive associativity and unit check.
    pub fn validate(&self) -> Result<(), String> {
        for i in 0..self.dim {
            let e = sparse_unit(i);
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                return Err(format!("unit law fails at basis element {i}"));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.prod[i][j].clone();
                for k in 0..self.dim {
                    let lhs = self.mul_vec(&ij, &sparse_unit(k));
                    let rhs = self.mul_vec(&sparse_unit(i), &self.prod[j][k]);
                    if lhs != rhs {
                        return Err(format!("associativity fails on ({i}, {j}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn group_algebra_z2() -> MultTable {
        // basis e, s with s² = e
        let one = || rat(1, 1);
        MultTable {
            dim: 2,
            prod: vec![
                vec![vec![(0, one())], vec![(1, one())]],
                vec![vec![(1, one())], vec![(0, one())]],
            ],
            unit: vec![(0, one())],
        }
    }

    fn dual_numbers() -> MultTable {
        // basis 1, x with x² = 0
        let one = || rat(1, 1);
        MultTable {
            dim: 2,
            prod: vec![vec![vec![(0, one())], vec![(1, one())]], vec![vec![(1, one())], vec![]]],
            unit: vec![(0, one())],
        }
    }

    #[test]
    fn radical_of_group_algebra_is_zero() {
        let a = group_algebra_z2();
        a.validate().unwrap();
        assert!(a.is_semisimple());
    }

    #[test]
    fn radical_of_dual_numbers_is_nilpotents() {
        let a = dual_numbers();
        a.validate().unwrap();
        let r = a.jacobson_radical_basis();
        assert_eq!(r.cols(), 1);
        assert!(r.get(0, 0).is_zero());
        assert!(!r.get(1, 0).is_zero());
    }
}
