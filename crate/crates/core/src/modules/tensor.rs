use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::BitVector;
use crate::milnor::{BiDegree, MilnorAlgebra};

use super::{check_module_window, check_vector, GradedModule};

/// `M ⊗ N` with the diagonal action `a·(x⊗y) = Σ a' x ⊗ a'' y`.
///
/// The basis of a bidegree is the concatenation, over splittings `d = d1 + d2`
/// in increasing order of `d1`, of the product bases `x_i ⊗ y_j` (row-major).
pub struct TensorModule {
    left: Arc<dyn GradedModule>,
    right: Arc<dyn GradedModule>,
    max_stem: i32,
}

#[derive(Clone, Copy, Debug)]
struct Block {
    left: BiDegree,
    right: BiDegree,
    offset: usize,
    left_dim: usize,
    right_dim: usize,
}

impl TensorModule {
    pub fn new(left: Arc<dyn GradedModule>, right: Arc<dyn GradedModule>) -> Result<Self> {
        if !Arc::ptr_eq(left.algebra(), right.algebra()) {
            return Err(Error::Contract(
                "tensor factors must share one algebra instance".into(),
            ));
        }
        let max_stem = (left.max_stem() + right.min_stem()).min(right.max_stem() + left.min_stem());
        Ok(TensorModule {
            left,
            right,
            max_stem,
        })
    }

    fn blocks(&self, d: BiDegree) -> Result<(Vec<Block>, usize)> {
        check_module_window(d, self.max_stem)?;
        let mut blocks = Vec::new();
        let mut offset = 0;
        for s1 in self.left.min_stem()..=d.stem - self.right.min_stem() {
            for w1 in self.left.weights(s1)? {
                let l = BiDegree::new(s1, w1);
                let r = d - l;
                let right_dim = self.right.dim(r)?;
                if right_dim == 0 {
                    continue;
                }
                let left_dim = self.left.dim(l)?;
                blocks.push(Block {
                    left: l,
                    right: r,
                    offset,
                    left_dim,
                    right_dim,
                });
                offset += left_dim * right_dim;
            }
        }
        Ok((blocks, offset))
    }

    /// Index of `x_i ⊗ y_j` with `x_i ∈ M_left`, `y_j ∈ N_right`.
    pub fn pure_index(&self, left: BiDegree, i: usize, right: BiDegree, j: usize) -> Result<usize> {
        let (blocks, _) = self.blocks(left + right)?;
        let b = blocks
            .iter()
            .find(|b| b.left == left)
            .ok_or_else(|| Error::Contract(format!("no tensor block {left} ⊗ {right}")))?;
        Ok(b.offset + i * b.right_dim + j)
    }
}

impl GradedModule for TensorModule {
    fn name(&self) -> String {
        format!("({}) ⊗ ({})", self.left.name(), self.right.name())
    }

    fn algebra(&self) -> &Arc<MilnorAlgebra> {
        self.left.algebra()
    }

    fn max_stem(&self) -> i32 {
        self.max_stem
    }

    fn min_stem(&self) -> i32 {
        self.left.min_stem() + self.right.min_stem()
    }

    fn dim(&self, d: BiDegree) -> Result<usize> {
        Ok(self.blocks(d)?.1)
    }

    fn weights(&self, stem: i32) -> Result<Vec<i32>> {
        check_module_window(BiDegree::new(stem, 0), self.max_stem)?;
        let mut out = BTreeSet::new();
        for s1 in self.left.min_stem()..=stem - self.right.min_stem() {
            let rw = self.right.weights(stem - s1)?;
            for w1 in self.left.weights(s1)? {
                out.extend(rw.iter().map(|w2| w1 + w2));
            }
        }
        Ok(out.into_iter().collect())
    }

    fn act_basis(
        &self,
        op: BiDegree,
        op_index: usize,
        d: BiDegree,
        x: &BitVector,
    ) -> Result<BitVector> {
        let (src, src_dim) = self.blocks(d)?;
        check_vector(d, x, src_dim)?;
        let (dst, dst_dim) = self.blocks(op + d)?;
        let mut out = BitVector::zeros(dst_dim);
        let terms = self.algebra().coproduct_basis(op, op_index)?;
        for b in &src {
            for k in x
                .iter_ones()
                .filter(|&k| k >= b.offset && k < b.offset + b.left_dim * b.right_dim)
            {
                let (i, j) = ((k - b.offset) / b.right_dim, (k - b.offset) % b.right_dim);
                let xi = BitVector::unit(b.left_dim, i);
                let yj = BitVector::unit(b.right_dim, j);
                for &(ld, li, rd, ri) in &terms {
                    let Some(t) = dst.iter().find(|t| t.left == b.left + ld) else {
                        continue;
                    };
                    let ax = self.left.act_basis(ld, li, b.left, &xi)?;
                    if ax.is_zero() {
                        continue;
                    }
                    let ay = self.right.act_basis(rd, ri, b.right, &yj)?;
                    for p in ax.iter_ones() {
                        for q in ay.iter_ones() {
                            out.flip(t.offset + p * t.right_dim + q);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `M^{⊗n}` with the iterated diagonal action, `n ≥ 1`.
pub fn tensor_power(m: Arc<dyn GradedModule>, n: usize) -> Result<Arc<dyn GradedModule>> {
    if n == 0 {
        return Err(Error::Contract("tensor power needs n ≥ 1".into()));
    }
    let mut acc = m.clone();
    for _ in 1..n {
        acc = Arc::new(TensorModule::new(acc, m.clone())?);
    }
    Ok(acc)
}
