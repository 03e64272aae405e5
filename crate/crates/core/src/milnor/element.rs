use crate::linalg::BitVector;

use super::BiDegree;

/// A homogeneous element of the Steenrod algebra: coordinates in the basis
/// dual to the monomial basis of its bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SteenrodElement {
    pub degree: BiDegree,
    pub coeffs: BitVector,
}

/// A homogeneous element of the dual algebra in the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualElement {
    pub degree: BiDegree,
    pub coeffs: BitVector,
}

macro_rules! element_common {
    ($t:ident) => {
        impl $t {
            pub fn new(degree: BiDegree, coeffs: BitVector) -> Self {
                $t { degree, coeffs }
            }

            pub fn zero(degree: BiDegree, dim: usize) -> Self {
                $t {
                    degree,
                    coeffs: BitVector::zeros(dim),
                }
            }

            pub fn basis(degree: BiDegree, dim: usize, index: usize) -> Self {
                $t {
                    degree,
                    coeffs: BitVector::unit(dim, index),
                }
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.is_zero()
            }

            pub fn dim(&self) -> usize {
                self.coeffs.len()
            }

            /// Sum of two elements of the same bidegree.
            pub fn add(&self, other: &$t) -> crate::Result<$t> {
                if self.degree != other.degree {
                    return Err(crate::Error::Contract(format!(
                        "adding elements of bidegrees {} and {}",
                        self.degree, other.degree
                    )));
                }
                Ok($t {
                    degree: self.degree,
                    coeffs: self.coeffs.add(&other.coeffs),
                })
            }
        }
    };
}

element_common!(SteenrodElement);
element_common!(DualElement);
