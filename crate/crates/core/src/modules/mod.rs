//! Bidegree-wise finite graded left modules over the Steenrod algebra.

mod margolis;
mod quotient;
mod tensor;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::BitVector;
use crate::milnor::{BiDegree, MilnorAlgebra, SteenrodElement};

pub use margolis::{margolis, MargolisReport};
pub use quotient::{ExteriorProfile, QuotientModule};
pub use tensor::{tensor_power, TensorModule};

/// A left module over the Steenrod algebra, finite in each bidegree and
/// truncated at `max_stem`. Elements of a bidegree are coordinate vectors in
/// a fixed basis.
pub trait GradedModule: Send + Sync {
    fn name(&self) -> String;

    fn algebra(&self) -> &Arc<MilnorAlgebra>;

    fn max_stem(&self) -> i32;

    /// Lowest stem carrying a nonzero bidegree.
    fn min_stem(&self) -> i32 {
        0
    }

    fn dim(&self, d: BiDegree) -> Result<usize>;

    /// Weights `w` with `dim(stem, w) > 0`, increasing.
    fn weights(&self, stem: i32) -> Result<Vec<i32>>;

    /// Action of the basis element `op_index` of `A_op` on `x ∈ M_d`.
    fn act_basis(
        &self,
        op: BiDegree,
        op_index: usize,
        d: BiDegree,
        x: &BitVector,
    ) -> Result<BitVector>;

    /// Action of an arbitrary element.
    fn act(&self, a: &SteenrodElement, d: BiDegree, x: &BitVector) -> Result<BitVector> {
        let target = a.degree + d;
        let mut out = BitVector::zeros(self.dim(target)?);
        for i in a.coeffs.iter_ones() {
            out.add_assign(&self.act_basis(a.degree, i, d, x)?);
        }
        Ok(out)
    }
}

pub(crate) fn check_module_window(d: BiDegree, max_stem: i32) -> Result<()> {
    if d.stem > max_stem {
        return Err(Error::window(d, max_stem));
    }
    Ok(())
}

pub(crate) fn check_vector(d: BiDegree, x: &BitVector, dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::Contract(format!(
            "vector of length {} in a bidegree {d} of dimension {dim}",
            x.len()
        )));
    }
    Ok(())
}

/// The algebra as a free module of rank one on a class in bidegree (0,0).
pub struct FreeAlgebraModule {
    alg: Arc<MilnorAlgebra>,
    max_stem: i32,
}

impl FreeAlgebraModule {
    pub fn new(alg: Arc<MilnorAlgebra>, max_stem: i32) -> Result<Self> {
        if max_stem > alg.max_stem() {
            return Err(Error::Contract(format!(
                "module window {max_stem} exceeds the algebra window {}",
                alg.max_stem()
            )));
        }
        Ok(FreeAlgebraModule { alg, max_stem })
    }
}

impl GradedModule for FreeAlgebraModule {
    fn name(&self) -> String {
        "A".into()
    }

    fn algebra(&self) -> &Arc<MilnorAlgebra> {
        &self.alg
    }

    fn max_stem(&self) -> i32 {
        self.max_stem
    }

    fn dim(&self, d: BiDegree) -> Result<usize> {
        check_module_window(d, self.max_stem)?;
        self.alg.dim(d)
    }

    fn weights(&self, stem: i32) -> Result<Vec<i32>> {
        check_module_window(BiDegree::new(stem, 0), self.max_stem)?;
        Ok((0..=stem.max(0) / 2)
            .filter(|&w| self.alg.dim(BiDegree::new(stem, w)).unwrap_or(0) > 0)
            .collect())
    }

    fn act_basis(
        &self,
        op: BiDegree,
        op_index: usize,
        d: BiDegree,
        x: &BitVector,
    ) -> Result<BitVector> {
        let target = op + d;
        let mut out = BitVector::zeros(self.dim(target)?);
        check_vector(d, x, self.dim(d)?)?;
        let elt = SteenrodElement::new(d, x.clone());
        self.alg.add_basis_times(op, op_index, &elt, &mut out)?;
        Ok(out)
    }
}

/// `F2` concentrated in bidegree (0,0) with trivial action.
pub struct TrivialModule {
    alg: Arc<MilnorAlgebra>,
    max_stem: i32,
}

impl TrivialModule {
    pub fn new(alg: Arc<MilnorAlgebra>, max_stem: i32) -> Self {
        TrivialModule { alg, max_stem }
    }
}

impl GradedModule for TrivialModule {
    fn name(&self) -> String {
        "F2".into()
    }

    fn algebra(&self) -> &Arc<MilnorAlgebra> {
        &self.alg
    }

    fn max_stem(&self) -> i32 {
        self.max_stem
    }

    fn dim(&self, d: BiDegree) -> Result<usize> {
        check_module_window(d, self.max_stem)?;
        Ok(usize::from(d == BiDegree::ZERO))
    }

    fn weights(&self, stem: i32) -> Result<Vec<i32>> {
        check_module_window(BiDegree::new(stem, 0), self.max_stem)?;
        Ok(if stem == 0 { vec![0] } else { Vec::new() })
    }

    fn act_basis(
        &self,
        op: BiDegree,
        _op_index: usize,
        d: BiDegree,
        x: &BitVector,
    ) -> Result<BitVector> {
        let target = op + d;
        let dim = self.dim(target)?;
        check_vector(d, x, self.dim(d)?)?;
        Ok(if op == BiDegree::ZERO {
            x.clone()
        } else {
            BitVector::zeros(dim)
        })
    }
}

/// Modules addressed by name: `sphere` (F2), `kw:n` (`A//E(P_{n+1})`), `wbp`
/// (`A//E(P_1, P_2, …)` through the window) and `wbp:n`
/// (`A//E(P_1, …, P_{n+1})`).
pub fn module_by_name(
    alg: Arc<MilnorAlgebra>,
    name: &str,
    max_stem: i32,
) -> Result<Arc<dyn GradedModule>> {
    let bad = || {
        Error::Contract(format!(
            "unknown module `{name}`; expected sphere, kw:n, wbp or wbp:n"
        ))
    };
    let index = |s: &str| s.parse::<u32>().map_err(|_| bad());
    Ok(match name.split_once(':') {
        None if name == "sphere" => Arc::new(TrivialModule::new(alg, max_stem)),
        None if name == "wbp" => Arc::new(QuotientModule::new(
            alg,
            ExteriorProfile::AllInWindow,
            max_stem,
        )?),
        Some(("kw", n)) => {
            let n = index(n)?;
            Arc::new(QuotientModule::new(
                alg,
                ExteriorProfile::finite(&[n + 1])?,
                max_stem,
            )?)
        }
        Some(("wbp", n)) => {
            let ts: Vec<u32> = (1..=index(n)? + 1).collect();
            Arc::new(QuotientModule::new(
                alg,
                ExteriorProfile::finite(&ts)?,
                max_stem,
            )?)
        }
        _ => return Err(bad()),
    })
}
