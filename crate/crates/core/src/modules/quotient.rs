use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{BitVector, Quotient, Subspace};
use crate::milnor::{p_degree, BiDegree, MilnorAlgebra, SteenrodElement};

use super::{check_module_window, check_vector, GradedModule};

/// The indices `t` of the exterior generators `P_t` divided out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExteriorProfile {
    Finite(BTreeSet<u32>),
    /// Every `P_t` whose bidegree fits in the window.
    AllInWindow,
}

impl ExteriorProfile {
    pub fn finite(ts: &[u32]) -> Result<Self> {
        let set: BTreeSet<u32> = ts.iter().copied().collect();
        if set.len() != ts.len() || set.contains(&0) {
            return Err(Error::Contract(format!(
                "exterior profile needs distinct indices t ≥ 1, got {ts:?}"
            )));
        }
        Ok(ExteriorProfile::Finite(set))
    }

    /// The indices in effect for a window.
    pub fn indices(&self, max_stem: i32) -> Vec<u32> {
        match self {
            ExteriorProfile::Finite(s) => s.iter().copied().collect(),
            ExteriorProfile::AllInWindow => (1..)
                .take_while(|&t| p_degree(t).stem <= max_stem)
                .collect(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ExteriorProfile::Finite(s) => {
                let parts: Vec<String> = s.iter().map(|t| format!("P_{t}")).collect();
                format!("A//E({})", parts.join(","))
            }
            ExteriorProfile::AllInWindow => "A//E(P_1,P_2,...)".into(),
        }
    }
}

/// `A // E(T) = A / Σ_{t∈T} A·P_t`, a left module. Each bidegree stores the
/// subspace of right multiples and presents the quotient by the non-pivot
/// coordinates of the algebra's monomial basis.
pub struct QuotientModule {
    alg: Arc<MilnorAlgebra>,
    profile: ExteriorProfile,
    indices: Vec<u32>,
    max_stem: i32,
    quotients: BTreeMap<BiDegree, Quotient>,
}

impl QuotientModule {
    pub fn new(alg: Arc<MilnorAlgebra>, profile: ExteriorProfile, max_stem: i32) -> Result<Self> {
        if max_stem > alg.max_stem() {
            return Err(Error::Contract(format!(
                "module window {max_stem} exceeds the algebra window {}",
                alg.max_stem()
            )));
        }
        let indices = profile.indices(max_stem);
        let degrees: Vec<BiDegree> = alg
            .nonzero_bidegrees()
            .filter(|d| d.stem <= max_stem)
            .collect();
        let quotients = degrees
            .par_iter()
            .map(|&d| Ok((d, right_multiples(&alg, &indices, d)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(QuotientModule {
            alg,
            profile,
            indices,
            max_stem,
            quotients,
        })
    }

    pub fn profile(&self) -> &ExteriorProfile {
        &self.profile
    }

    /// The `t` with `P_t` divided out.
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    fn quotient(&self, d: BiDegree) -> Result<Option<&Quotient>> {
        check_module_window(d, self.max_stem)?;
        Ok(self.quotients.get(&d))
    }

    /// Class of an algebra element, in quotient coordinates.
    pub fn project(&self, a: &SteenrodElement) -> Result<BitVector> {
        match self.quotient(a.degree)? {
            Some(q) => Ok(q.coordinates(&a.coeffs)),
            None => Ok(BitVector::zeros(0)),
        }
    }

    /// The subspace `Σ A·P_t` of right multiples in `A_d`.
    pub fn relations(&self, d: BiDegree) -> Result<Subspace> {
        Ok(match self.quotient(d)? {
            Some(q) => q.subspace().clone(),
            None => Subspace::zero(self.alg.dim(d)?),
        })
    }

    /// An algebra element representing the class with coordinates `x`.
    pub fn lift(&self, d: BiDegree, x: &BitVector) -> Result<SteenrodElement> {
        match self.quotient(d)? {
            Some(q) => {
                check_vector(d, x, q.dim())?;
                Ok(SteenrodElement::new(d, q.lift(x)))
            }
            None => {
                check_vector(d, x, 0)?;
                Ok(SteenrodElement::zero(d, self.alg.dim(d)?))
            }
        }
    }
}

fn right_multiples(alg: &MilnorAlgebra, indices: &[u32], d: BiDegree) -> Result<Quotient> {
    let dim = alg.dim(d)?;
    let mut rows = Vec::new();
    for &t in indices {
        let p = p_degree(t);
        let src = d - p;
        if src.stem < 0 {
            continue;
        }
        let pt = alg.p(t)?;
        let (_, pt_index) = (pt.degree, pt.coeffs.first_one().unwrap());
        for j in 0..alg.dim(src)? {
            rows.push(alg.multiply_basis(src, j, p, pt_index)?);
        }
    }
    Quotient::new(dim, Subspace::from_spanning(dim, rows))
}

impl GradedModule for QuotientModule {
    fn name(&self) -> String {
        self.profile.label()
    }

    fn algebra(&self) -> &Arc<MilnorAlgebra> {
        &self.alg
    }

    fn max_stem(&self) -> i32 {
        self.max_stem
    }

    fn dim(&self, d: BiDegree) -> Result<usize> {
        Ok(self.quotient(d)?.map_or(0, |q| q.dim()))
    }

    fn weights(&self, stem: i32) -> Result<Vec<i32>> {
        check_module_window(BiDegree::new(stem, 0), self.max_stem)?;
        Ok(self
            .quotients
            .range(BiDegree::new(stem, i32::MIN)..=BiDegree::new(stem, i32::MAX))
            .filter(|(_, q)| q.dim() > 0)
            .map(|(d, _)| d.weight)
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
        let Some(tq) = self.quotient(target)? else {
            check_vector(d, x, self.dim(d)?)?;
            return Ok(BitVector::zeros(0));
        };
        let lifted = self.lift(d, x)?;
        let mut out = BitVector::zeros(self.alg.dim(target)?);
        self.alg.add_basis_times(op, op_index, &lifted, &mut out)?;
        Ok(tq.coordinates(&out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Arc<MilnorAlgebra>, QuotientModule) {
        let alg = Arc::new(MilnorAlgebra::new(14));
        let q =
            QuotientModule::new(alg.clone(), ExteriorProfile::finite(&[1]).unwrap(), 14).unwrap();
        (alg, q)
    }

    #[test]
    fn small_dimensions() {
        let (_, q) = setup();
        assert_eq!(q.dim(BiDegree::ZERO).unwrap(), 1);
        assert_eq!(q.dim(BiDegree::new(2, 1)).unwrap(), 0);
        assert_eq!(q.dim(BiDegree::new(1, 0)).unwrap(), 1);
    }

    #[test]
    fn action_on_unit() {
        let (alg, q) = setup();
        let one = BitVector::unit(1, 0);
        let p1 = alg.p(1).unwrap();
        assert!(q.act(&p1, BiDegree::ZERO, &one).unwrap().is_zero());
        let p2 = alg.p(2).unwrap();
        assert!(!q.act(&p2, BiDegree::ZERO, &one).unwrap().is_zero());
        assert_eq!(q.act(&alg.unit(), BiDegree::ZERO, &one).unwrap(), one);
    }

    #[test]
    fn profile_indices() {
        assert_eq!(ExteriorProfile::AllInWindow.indices(14), vec![1, 2, 3]);
        assert_eq!(ExteriorProfile::AllInWindow.indices(13), vec![1, 2]);
        assert!(ExteriorProfile::finite(&[1, 1]).is_err());
        assert!(ExteriorProfile::finite(&[0]).is_err());
    }
}
