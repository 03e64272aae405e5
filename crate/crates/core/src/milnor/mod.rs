//! The τ = 0 motivic dual Steenrod algebra `F2[ξ1, ξ2, …] ⊗ E(τ0, τ1, …)`,
//! its Hopf structure, and the Steenrod algebra obtained from it by
//! bidegree-wise duality.
//!
//! Conventions used throughout the crate:
//!
//! * The Milnor basis element dual to `τ^E ξ^R` is written `Q(E)P(R)`; `P_t`
//!   is the dual of `ξ_t` and `Q(i)` the dual of `τ_i`.
//! * Products are defined by `⟨a·b, m⟩ = Σ ⟨a, m(1)⟩⟨b, m(2)⟩`, with the
//!   left coproduct factor paired against `a`. With this convention the
//!   classical Milnor product formula holds verbatim on τ-free elements.

mod algebra;
mod classical;
mod element;
pub mod grammar;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use algebra::{MilnorAlgebra, TensorTerm};
pub use classical::{classical_product, ClassicalElement};
pub use element::{DualElement, SteenrodElement};

/// `(stem, weight)`. The Chow degree is `stem − 2·weight`.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct BiDegree {
    pub stem: i32,
    pub weight: i32,
}

impl BiDegree {
    pub const ZERO: BiDegree = BiDegree { stem: 0, weight: 0 };

    pub const fn new(stem: i32, weight: i32) -> Self {
        BiDegree { stem, weight }
    }

    pub const fn chow(self) -> i32 {
        self.stem - 2 * self.weight
    }

    /// Componentwise `self ≤ other`.
    pub fn le_componentwise(self, other: BiDegree) -> bool {
        self.stem <= other.stem && self.weight <= other.weight
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.stem, self.weight)
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.stem + o.stem, self.weight + o.weight)
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.stem - o.stem, self.weight - o.weight)
    }
}

impl Neg for BiDegree {
    type Output = BiDegree;
    fn neg(self) -> BiDegree {
        BiDegree::new(-self.stem, -self.weight)
    }
}

impl Mul<BiDegree> for i32 {
    type Output = BiDegree;
    fn mul(self, d: BiDegree) -> BiDegree {
        BiDegree::new(self * d.stem, self * d.weight)
    }
}

/// `|ξ_n| = (2^{n+1} − 2, 2^n − 1)`, `n ≥ 1`.
pub const fn xi_degree(n: u32) -> BiDegree {
    BiDegree::new((1 << (n + 1)) - 2, (1 << n) - 1)
}

/// `|τ_i| = (2^{i+1} − 1, 2^i − 1)`, `i ≥ 0`.
pub const fn tau_degree(i: u32) -> BiDegree {
    BiDegree::new((1 << (i + 1)) - 1, (1 << i) - 1)
}

/// `|P_t| = |ξ_t|`.
pub const fn p_degree(t: u32) -> BiDegree {
    xi_degree(t)
}

/// Bidegree of the periodicity class `w_n` detected by `P_{n+1}`:
/// `|P_{n+1}| − (1, 0)`.
pub const fn w_degree(n: u32) -> BiDegree {
    let p = p_degree(n + 1);
    BiDegree::new(p.stem - 1, p.weight)
}

/// A monomial `τ_{i1} ⋯ τ_{ik} · ξ1^{r1} ξ2^{r2} ⋯` of the dual algebra.
///
/// `tau` is strictly increasing; `xi[j-1]` is the exponent of `ξ_j`, with no
/// trailing zeros. The derived ordering compares `tau` as an index list
/// first, then `xi` lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DualMonomial {
    tau: Vec<u32>,
    xi: Vec<u32>,
}

impl DualMonomial {
    pub fn one() -> Self {
        DualMonomial::default()
    }

    /// Builds a monomial; returns `None` if a τ index repeats (τ_i² = 0).
    pub fn new(tau: &[u32], xi: &[u32]) -> Option<Self> {
        let mut t = tau.to_vec();
        t.sort_unstable();
        if t.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let mut x = xi.to_vec();
        while x.last() == Some(&0) {
            x.pop();
        }
        Some(DualMonomial { tau: t, xi: x })
    }

    pub fn xi(n: u32) -> Self {
        assert!(n >= 1, "ξ_n is indexed from 1");
        let mut x = vec![0; n as usize];
        x[n as usize - 1] = 1;
        DualMonomial {
            tau: Vec::new(),
            xi: x,
        }
    }

    pub fn xi_power(n: u32, e: u32) -> Self {
        assert!(n >= 1, "ξ_n is indexed from 1");
        let mut x = vec![0; n as usize];
        x[n as usize - 1] = e;
        DualMonomial::new(&[], &x).unwrap()
    }

    pub fn tau(i: u32) -> Self {
        DualMonomial {
            tau: vec![i],
            xi: Vec::new(),
        }
    }

    pub fn tau_indices(&self) -> &[u32] {
        &self.tau
    }

    /// Exponents of `ξ_1, ξ_2, …`.
    pub fn xi_exponents(&self) -> &[u32] {
        &self.xi
    }

    pub fn xi_exponent(&self, n: u32) -> u32 {
        self.xi.get(n as usize - 1).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.tau.is_empty() && self.xi.is_empty()
    }

    pub fn is_tau_free(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn degree(&self) -> BiDegree {
        let mut d = BiDegree::ZERO;
        for &i in &self.tau {
            d = d + tau_degree(i);
        }
        for (k, &e) in self.xi.iter().enumerate() {
            d = d + (e as i32) * xi_degree(k as u32 + 1);
        }
        d
    }

    /// Product in the dual algebra; `None` when a τ appears twice.
    pub fn mul(&self, other: &DualMonomial) -> Option<DualMonomial> {
        let mut tau = Vec::with_capacity(self.tau.len() + other.tau.len());
        let (mut i, mut j) = (0, 0);
        while i < self.tau.len() || j < other.tau.len() {
            match (self.tau.get(i), other.tau.get(j)) {
                (Some(a), Some(b)) if a == b => return None,
                (Some(a), Some(b)) if a < b => {
                    tau.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    tau.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    tau.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    tau.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let n = self.xi.len().max(other.xi.len());
        let xi = (0..n)
            .map(|k| self.xi.get(k).copied().unwrap_or(0) + other.xi.get(k).copied().unwrap_or(0))
            .collect();
        Some(DualMonomial { tau, xi })
    }

    /// Every way of writing `self = left · right`. These pairs index the
    /// coproduct of the dual basis element in the Steenrod algebra.
    pub fn factorizations(&self) -> Vec<(DualMonomial, DualMonomial)> {
        let mut out = Vec::new();
        let k = self.tau.len();
        let mut split = vec![0u32; self.xi.len()];
        loop {
            for mask in 0u32..(1 << k) {
                let mut lt = Vec::new();
                let mut rt = Vec::new();
                for (b, &i) in self.tau.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        lt.push(i);
                    } else {
                        rt.push(i);
                    }
                }
                let rx: Vec<u32> = self.xi.iter().zip(&split).map(|(r, a)| r - a).collect();
                out.push((
                    DualMonomial::new(&lt, &split).unwrap(),
                    DualMonomial::new(&rt, &rx).unwrap(),
                ));
            }
            // odometer over 0..=r_j
            let mut pos = 0;
            loop {
                if pos == split.len() {
                    return out;
                }
                if split[pos] < self.xi[pos] {
                    split[pos] += 1;
                    break;
                }
                split[pos] = 0;
                pos += 1;
            }
        }
    }
}

impl fmt::Display for DualMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        for &i in &self.tau {
            parts.push(format!("t{i}"));
        }
        for (k, &e) in self.xi.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", k + 1)),
                _ => parts.push(format!("x{}^{e}", k + 1)),
            }
        }
        f.write_str(&parts.join(" "))
    }
}

/// Exponent sequence `R = (r_start, r_start+1, …)` with length `l(R) = Σ r_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequenceR {
    start: u32,
    entries: Vec<u32>,
}

impl SequenceR {
    pub fn new(start: u32, entries: &[u32]) -> Self {
        let mut e = entries.to_vec();
        while e.last() == Some(&0) {
            e.pop();
        }
        SequenceR { start, entries: e }
    }

    pub fn empty(start: u32) -> Self {
        SequenceR::new(start, &[])
    }

    /// `Δ_j`: a single 1 in position `j`.
    pub fn delta(start: u32, j: u32) -> Self {
        assert!(j >= start);
        let mut e = vec![0; (j - start) as usize + 1];
        e[(j - start) as usize] = 1;
        SequenceR::new(start, &e)
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn entry(&self, j: u32) -> u32 {
        if j < self.start {
            return 0;
        }
        self.entries
            .get((j - self.start) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Indices `j` with `r_j > 0`.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(move |(k, _)| self.start + k as u32)
    }

    pub fn length(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `R − Δ_j`, or `None` when `r_j = 0`.
    pub fn minus_delta(&self, j: u32) -> Option<SequenceR> {
        if self.entry(j) == 0 {
            return None;
        }
        let mut e = self.entries.clone();
        e[(j - self.start) as usize] -= 1;
        Some(SequenceR::new(self.start, &e))
    }

    pub fn plus_delta(&self, j: u32) -> SequenceR {
        assert!(j >= self.start);
        let mut e = self.entries.clone();
        let k = (j - self.start) as usize;
        if e.len() <= k {
            e.resize(k + 1, 0);
        }
        e[k] += 1;
        SequenceR::new(self.start, &e)
    }

    pub fn doubled(&self) -> SequenceR {
        SequenceR::new(
            self.start,
            &self.entries.iter().map(|r| 2 * r).collect::<Vec<_>>(),
        )
    }

    /// Exponents of `ξ_1, ξ_2, …`, treating entry `j` as the exponent of `ξ_j`.
    pub fn xi_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.start.saturating_sub(1) as usize];
        if self.start == 0 {
            // index 0 has no ξ; it must be zero
            assert_eq!(self.entry(0), 0, "ξ_0 has no exponent slot");
            out.extend(self.entries.iter().skip(1));
        } else {
            out.extend(&self.entries);
        }
        out
    }

    /// `Σ r_j · |ξ_j|`.
    pub fn degree(&self) -> BiDegree {
        self.support().fold(BiDegree::ZERO, |d, j| {
            d + (self.entry(j) as i32) * xi_degree(j)
        })
    }

    /// Index list with multiplicity, e.g. `2Δ_2 + Δ_3 ↦ [2, 2, 3]`.
    pub fn as_index_list(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for j in self.support() {
            out.extend(std::iter::repeat_n(j, self.entry(j) as usize));
        }
        out
    }
}

impl fmt::Display for SequenceR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .support()
            .map(|j| match self.entry(j) {
                1 => format!("Δ{j}"),
                r => format!("{r}Δ{j}"),
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_degrees() {
        assert_eq!(xi_degree(1), BiDegree::new(2, 1));
        assert_eq!(xi_degree(2), BiDegree::new(6, 3));
        assert_eq!(tau_degree(0), BiDegree::new(1, 0));
        assert_eq!(tau_degree(1), BiDegree::new(3, 1));
        assert_eq!(w_degree(0), BiDegree::new(1, 1));
        assert_eq!(w_degree(1), BiDegree::new(5, 3));
        assert_eq!(w_degree(2), BiDegree::new(13, 7));
        for n in 1..6 {
            assert_eq!(xi_degree(n).chow(), 0);
            assert_eq!(tau_degree(n).chow(), 1);
        }
    }

    #[test]
    fn monomial_product_is_exterior_in_tau() {
        let t0 = DualMonomial::tau(0);
        assert_eq!(t0.mul(&t0), None);
        let x1 = DualMonomial::xi(1);
        assert_eq!(x1.mul(&x1), Some(DualMonomial::xi_power(1, 2)));
        assert_eq!(t0.mul(&x1), Some(DualMonomial::new(&[0], &[1]).unwrap()));
    }

    #[test]
    fn factorizations_count() {
        let m = DualMonomial::new(&[0, 2], &[2, 1]).unwrap();
        let f = m.factorizations();
        assert_eq!(f.len(), 4 * 3 * 2);
        for (a, b) in &f {
            assert_eq!(a.mul(b).as_ref(), Some(&m));
        }
    }

    #[test]
    fn sequence_arithmetic() {
        let r = SequenceR::new(2, &[2, 1]);
        assert_eq!(r.length(), 3);
        assert_eq!(r.degree(), 2 * xi_degree(2) + xi_degree(3));
        assert_eq!(r.minus_delta(3), Some(SequenceR::new(2, &[2])));
        assert_eq!(r.minus_delta(4), None);
        assert_eq!(r.as_index_list(), vec![2, 2, 3]);
        assert_eq!(SequenceR::delta(1, 2).doubled().xi_exponents(), vec![0, 2]);
    }
}
