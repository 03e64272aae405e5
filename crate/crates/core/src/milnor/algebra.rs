use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::linalg::BitVector;

use super::{
    classical::ClassicalElement, tau_degree, xi_degree, BiDegree, DualElement, DualMonomial,
    SequenceR, SteenrodElement,
};

/// A pure tensor `left ⊗ right` in the coproduct of a Steenrod algebra element.
pub type TensorTerm = (SteenrodElement, SteenrodElement);

type TensorSum = HashSet<(DualMonomial, DualMonomial)>;

/// Structure constants for products landing in one target bidegree, grouped
/// by the bidegree of the left factor.
struct ProductTable {
    blocks: HashMap<BiDegree, ProductBlock>,
}

struct ProductBlock {
    right_dim: usize,
    /// `entries[i * right_dim + j]` lists the target basis indices of `P_i · P_j`.
    entries: Vec<Vec<u32>>,
}

/// The Steenrod algebra and its dual, truncated at `max_stem`.
///
/// Monomial bases are enumerated eagerly at construction. Product tables and
/// antipode matrices are filled lazily per bidegree behind a lock; every
/// public operation is a pure function of its inputs.
pub struct MilnorAlgebra {
    max_stem: i32,
    bases: BTreeMap<BiDegree, Vec<DualMonomial>>,
    index: HashMap<DualMonomial, usize>,
    products: RwLock<HashMap<BiDegree, Arc<ProductTable>>>,
    antipodes: RwLock<HashMap<BiDegree, Arc<Vec<BitVector>>>>,
}

impl std::fmt::Debug for MilnorAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MilnorAlgebra")
            .field("max_stem", &self.max_stem)
            .field("bidegrees", &self.bases.len())
            .finish()
    }
}

fn xi_monomials(max_stem: i32) -> Vec<Vec<u32>> {
    // generators ξ_n with |ξ_n| ≤ max_stem
    let mut gens = Vec::new();
    let mut n = 1;
    while xi_degree(n).stem <= max_stem {
        gens.push(xi_degree(n).stem);
        n += 1;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    fn rec(k: usize, budget: i32, gens: &[i32], exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == gens.len() {
            out.push(exps.clone());
            return;
        }
        let mut e = 0;
        while e as i32 * gens[k] <= budget {
            exps[k] = e;
            rec(k + 1, budget - e as i32 * gens[k], gens, exps, out);
            e += 1;
        }
        exps[k] = 0;
    }
    rec(0, max_stem, &gens, &mut exps, &mut out);
    out
}

fn tau_sets(max_stem: i32) -> Vec<Vec<u32>> {
    let mut idx = Vec::new();
    let mut i = 0;
    while tau_degree(i).stem <= max_stem {
        idx.push(i);
        i += 1;
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << idx.len()) {
        let set: Vec<u32> = idx
            .iter()
            .copied()
            .filter(|&i| mask >> i & 1 == 1)
            .collect();
        let stem: i32 = set.iter().map(|&i| tau_degree(i).stem).sum();
        if stem <= max_stem {
            out.push(set);
        }
    }
    out
}

fn tensor_mul(a: &TensorSum, b: &TensorSum) -> TensorSum {
    let mut out = TensorSum::new();
    for (l1, r1) in a {
        for (l2, r2) in b {
            if let (Some(l), Some(r)) = (l1.mul(l2), r1.mul(r2)) {
                let key = (l, r);
                if !out.remove(&key) {
                    out.insert(key);
                }
            }
        }
    }
    out
}

fn toggle(set: &mut TensorSum, key: (DualMonomial, DualMonomial)) {
    if !set.remove(&key) {
        set.insert(key);
    }
}

/// `Δ(ξ_n^{2^k}) = Σ_i ξ_{n-i}^{2^{i+k}} ⊗ ξ_i^{2^k}`.
fn delta_xi_pow2(n: u32, k: u32) -> TensorSum {
    let mut out = TensorSum::new();
    for i in 0..=n {
        let left = if n - i == 0 {
            DualMonomial::one()
        } else {
            DualMonomial::xi_power(n - i, 1 << (i + k))
        };
        let right = if i == 0 {
            DualMonomial::one()
        } else {
            DualMonomial::xi_power(i, 1 << k)
        };
        toggle(&mut out, (left, right));
    }
    out
}

/// `Δ(τ_n) = τ_n ⊗ 1 + Σ_i ξ_{n-i}^{2^i} ⊗ τ_i`.
fn delta_tau(n: u32) -> TensorSum {
    let mut out = TensorSum::new();
    toggle(&mut out, (DualMonomial::tau(n), DualMonomial::one()));
    for i in 0..=n {
        let left = if n - i == 0 {
            DualMonomial::one()
        } else {
            DualMonomial::xi_power(n - i, 1 << i)
        };
        toggle(&mut out, (left, DualMonomial::tau(i)));
    }
    out
}

impl MilnorAlgebra {
    pub fn new(max_stem: i32) -> Self {
        let mut bases: BTreeMap<BiDegree, Vec<DualMonomial>> = BTreeMap::new();
        let xis = xi_monomials(max_stem);
        for taus in tau_sets(max_stem) {
            for xi in &xis {
                let m = DualMonomial::new(&taus, xi).unwrap();
                let d = m.degree();
                if d.stem <= max_stem {
                    bases.entry(d).or_default().push(m);
                }
            }
        }
        let mut index = HashMap::new();
        for list in bases.values_mut() {
            list.sort();
            for (i, m) in list.iter().enumerate() {
                index.insert(m.clone(), i);
            }
        }
        MilnorAlgebra {
            max_stem,
            bases,
            index,
            products: RwLock::new(HashMap::new()),
            antipodes: RwLock::new(HashMap::new()),
        }
    }

    pub fn max_stem(&self) -> i32 {
        self.max_stem
    }

    fn trivially_empty(d: BiDegree) -> bool {
        d.stem < 0 || d.weight < 0 || d.chow() < 0
    }

    fn check_window(&self, d: BiDegree) -> Result<()> {
        if d.stem > self.max_stem && !Self::trivially_empty(d) {
            return Err(Error::window(d, self.max_stem));
        }
        Ok(())
    }

    /// Monomial basis of the dual in bidegree `d`, in canonical order.
    /// Empty whenever the Chow degree or the weight is negative.
    pub fn dual_basis(&self, d: BiDegree) -> Result<&[DualMonomial]> {
        self.check_window(d)?;
        Ok(self.bases.get(&d).map_or(&[][..], |v| v.as_slice()))
    }

    pub fn dim(&self, d: BiDegree) -> Result<usize> {
        Ok(self.dual_basis(d)?.len())
    }

    /// Bidegrees with a nonempty basis, in increasing order.
    pub fn nonzero_bidegrees(&self) -> impl Iterator<Item = BiDegree> + '_ {
        self.bases.keys().copied()
    }

    /// Position of a monomial in the basis of its bidegree.
    pub fn index_of(&self, m: &DualMonomial) -> Result<usize> {
        self.check_window(m.degree())?;
        self.index
            .get(m)
            .copied()
            .ok_or_else(|| Error::window(m.degree(), self.max_stem))
    }

    pub fn monomial(&self, d: BiDegree, i: usize) -> Result<&DualMonomial> {
        self.dual_basis(d)?
            .get(i)
            .ok_or_else(|| Error::Contract(format!("basis index {i} out of range at {d}")))
    }

    fn dual_monomial_element(&self, m: &DualMonomial) -> Result<DualElement> {
        let d = m.degree();
        Ok(DualElement::basis(d, self.dim(d)?, self.index_of(m)?))
    }

    /// The dual basis element `(τ^E ξ^R)^*`.
    pub fn milnor_element(&self, m: &DualMonomial) -> Result<SteenrodElement> {
        let d = m.degree();
        Ok(SteenrodElement::basis(d, self.dim(d)?, self.index_of(m)?))
    }

    pub fn unit(&self) -> SteenrodElement {
        SteenrodElement::basis(BiDegree::ZERO, 1, 0)
    }

    pub fn dual_unit(&self) -> DualElement {
        DualElement::basis(BiDegree::ZERO, 1, 0)
    }

    pub fn zero(&self, d: BiDegree) -> Result<SteenrodElement> {
        Ok(SteenrodElement::zero(d, self.dim(d)?))
    }

    /// `P^s_t`, dual to `ξ_t^{2^s}`.
    pub fn pst(&self, s: u32, t: u32) -> Result<SteenrodElement> {
        if t == 0 {
            return Err(Error::Contract("P^s_t requires t ≥ 1".into()));
        }
        self.milnor_element(&DualMonomial::xi_power(t, 1 << s))
    }

    /// `P_t = P^0_t`, dual to `ξ_t`.
    pub fn p(&self, t: u32) -> Result<SteenrodElement> {
        self.pst(0, t)
    }

    /// `P^R`, dual to `ξ^R`.
    pub fn p_r(&self, r: &SequenceR) -> Result<SteenrodElement> {
        self.milnor_element(&DualMonomial::new(&[], &r.xi_exponents()).unwrap())
    }

    /// `Q(i)`, dual to `τ_i`.
    pub fn q(&self, i: u32) -> Result<SteenrodElement> {
        self.milnor_element(&DualMonomial::tau(i))
    }

    // ---- dual algebra -------------------------------------------------

    /// Bilinear product in the dual algebra.
    pub fn dual_product(&self, a: &DualElement, b: &DualElement) -> Result<DualElement> {
        let d = a.degree + b.degree;
        let dim = self.dim(d)?;
        let mut out = BitVector::zeros(dim);
        let ba = self.dual_basis(a.degree)?;
        let bb = self.dual_basis(b.degree)?;
        for i in a.coeffs.iter_ones() {
            for j in b.coeffs.iter_ones() {
                if let Some(m) = ba[i].mul(&bb[j]) {
                    out.flip(self.index_of(&m)?);
                }
            }
        }
        Ok(DualElement::new(d, out))
    }

    /// Coproduct of a dual monomial, as a sorted list of tensor terms.
    pub fn coproduct(&self, m: &DualMonomial) -> Vec<(DualMonomial, DualMonomial)> {
        let mut acc = TensorSum::new();
        acc.insert((DualMonomial::one(), DualMonomial::one()));
        for &i in m.tau_indices() {
            acc = tensor_mul(&acc, &delta_tau(i));
        }
        for (k, &e) in m.xi_exponents().iter().enumerate() {
            let n = k as u32 + 1;
            let mut bit = 0;
            while e >> bit != 0 {
                if e >> bit & 1 == 1 {
                    acc = tensor_mul(&acc, &delta_xi_pow2(n, bit));
                }
                bit += 1;
            }
        }
        let mut v: Vec<_> = acc.into_iter().collect();
        v.sort();
        v
    }

    /// Counit: 1 on the unit monomial, 0 elsewhere.
    pub fn counit(m: &DualMonomial) -> bool {
        m.is_one()
    }

    fn antipode_rows(&self, d: BiDegree) -> Result<Arc<Vec<BitVector>>> {
        if let Some(rows) = self.antipodes.read().get(&d) {
            return Ok(rows.clone());
        }
        let basis = self.dual_basis(d)?.to_vec();
        let dim = basis.len();
        let mut rows = Vec::with_capacity(dim);
        for m in &basis {
            // Σ m(1) c(m(2)) = ε(m), and the only term with m(1) = 1 is 1 ⊗ m.
            let mut c = BitVector::zeros(dim);
            if m.is_one() {
                c.flip(0);
            }
            for (left, right) in self.coproduct(m) {
                if left.is_one() {
                    continue;
                }
                let rd = right.degree();
                let sub = self.antipode_rows(rd)?;
                let rb = self.dual_basis(rd)?;
                let c_right = &sub[self.index[&right]];
                for k in c_right.iter_ones() {
                    if let Some(prod) = left.mul(&rb[k]) {
                        c.flip(self.index[&prod]);
                    }
                }
            }
            rows.push(c);
        }
        let rows = Arc::new(rows);
        self.antipodes.write().insert(d, rows.clone());
        Ok(rows)
    }

    /// The antipode of the dual algebra, solved degree by degree from
    /// `Σ m(1)·c(m(2)) = ε(m)`.
    pub fn antipode_dual(&self, x: &DualElement) -> Result<DualElement> {
        let rows = self.antipode_rows(x.degree)?;
        let mut out = BitVector::zeros(x.dim());
        for i in x.coeffs.iter_ones() {
            out.add_assign(&rows[i]);
        }
        Ok(DualElement::new(x.degree, out))
    }

    pub fn antipode_monomial(&self, m: &DualMonomial) -> Result<DualElement> {
        self.antipode_dual(&self.dual_monomial_element(m)?)
    }

    // ---- Steenrod algebra ---------------------------------------------

    /// Evaluation `⟨a, x⟩`.
    pub fn pair(&self, a: &SteenrodElement, x: &DualElement) -> Result<bool> {
        if a.degree != x.degree {
            return Err(Error::Contract(format!(
                "pairing an element of bidegree {} with a dual element of bidegree {}",
                a.degree, x.degree
            )));
        }
        Ok(a.coeffs.dot(&x.coeffs))
    }

    fn product_table(&self, target: BiDegree) -> Result<Arc<ProductTable>> {
        if let Some(t) = self.products.read().get(&target) {
            return Ok(t.clone());
        }
        let basis = self.dual_basis(target)?;
        let mut blocks: HashMap<BiDegree, ProductBlock> = HashMap::new();
        for (k, m) in basis.iter().enumerate() {
            for (left, right) in self.coproduct(m) {
                let ld = left.degree();
                let block = match blocks.get_mut(&ld) {
                    Some(b) => b,
                    None => {
                        let left_dim = self.dim(ld)?;
                        let right_dim = self.dim(target - ld)?;
                        blocks.entry(ld).or_insert(ProductBlock {
                            right_dim,
                            entries: vec![Vec::new(); left_dim * right_dim],
                        })
                    }
                };
                let e = self.index[&left] * block.right_dim + self.index[&right];
                // terms of Δ(m) are distinct, so each k is pushed at most once
                block.entries[e].push(k as u32);
            }
        }
        let table = Arc::new(ProductTable { blocks });
        self.products.write().insert(target, table.clone());
        Ok(table)
    }

    /// `P_i · P_j` for basis elements `i` in `left` and `j` in `right`.
    pub fn multiply_basis(
        &self,
        left: BiDegree,
        i: usize,
        right: BiDegree,
        j: usize,
    ) -> Result<BitVector> {
        let target = left + right;
        let dim = self.dim(target)?;
        let table = self.product_table(target)?;
        let mut out = BitVector::zeros(dim);
        if let Some(b) = table.blocks.get(&left) {
            for &k in &b.entries[i * b.right_dim + j] {
                out.flip(k as usize);
            }
        }
        Ok(out)
    }

    /// Accumulates `P_i · b` into `out` (which lives in bidegree `left + b.degree`).
    pub fn add_basis_times(
        &self,
        left: BiDegree,
        i: usize,
        b: &SteenrodElement,
        out: &mut BitVector,
    ) -> Result<()> {
        if b.is_zero() {
            return Ok(());
        }
        let table = self.product_table(left + b.degree)?;
        if let Some(block) = table.blocks.get(&left) {
            for j in b.coeffs.iter_ones() {
                for &k in &block.entries[i * block.right_dim + j] {
                    out.flip(k as usize);
                }
            }
        }
        Ok(())
    }

    /// Accumulates `a · P_j` into `out`.
    pub fn add_times_basis(
        &self,
        a: &SteenrodElement,
        right: BiDegree,
        j: usize,
        out: &mut BitVector,
    ) -> Result<()> {
        if a.is_zero() {
            return Ok(());
        }
        let table = self.product_table(a.degree + right)?;
        if let Some(block) = table.blocks.get(&a.degree) {
            for i in a.coeffs.iter_ones() {
                for &k in &block.entries[i * block.right_dim + j] {
                    out.flip(k as usize);
                }
            }
        }
        Ok(())
    }

    /// Product defined by `⟨a·b, m⟩ = Σ ⟨a, m(1)⟩⟨b, m(2)⟩`.
    pub fn multiply(&self, a: &SteenrodElement, b: &SteenrodElement) -> Result<SteenrodElement> {
        let d = a.degree + b.degree;
        let mut out = BitVector::zeros(self.dim(d)?);
        for i in a.coeffs.iter_ones() {
            self.add_basis_times(a.degree, i, b, &mut out)?;
        }
        Ok(SteenrodElement::new(d, out))
    }

    /// Product of several elements, left to right.
    pub fn multiply_all(&self, factors: &[&SteenrodElement]) -> Result<SteenrodElement> {
        let mut acc = self.unit();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Component of `Δ(a)` in `A_left ⊗ A_{|a| − left}`, as pure tensors of
    /// basis elements. Transpose of the dual product.
    pub fn coproduct_a(&self, a: &SteenrodElement, left: BiDegree) -> Result<Vec<TensorTerm>> {
        let right = a.degree - left;
        let ld = self.dim(left)?;
        let rd = self.dim(right)?;
        let basis = self.dual_basis(a.degree)?;
        let mut terms: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for k in a.coeffs.iter_ones() {
            for (l, r) in basis[k].factorizations() {
                if l.degree() == left {
                    let key = (self.index[&l], self.index[&r]);
                    let e = terms.entry(key).or_insert(false);
                    *e = !*e;
                }
            }
        }
        Ok(terms
            .into_iter()
            .filter(|(_, on)| *on)
            .map(|((i, j), _)| {
                (
                    SteenrodElement::basis(left, ld, i),
                    SteenrodElement::basis(right, rd, j),
                )
            })
            .collect())
    }

    /// All terms of `Δ(P_k)` for the basis element `k` of `d`, as
    /// `(left bidegree, left index, right bidegree, right index)`.
    pub fn coproduct_basis(
        &self,
        d: BiDegree,
        k: usize,
    ) -> Result<Vec<(BiDegree, usize, BiDegree, usize)>> {
        let m = self.monomial(d, k)?;
        Ok(m.factorizations()
            .into_iter()
            .map(|(l, r)| (l.degree(), self.index[&l], r.degree(), self.index[&r]))
            .collect())
    }

    /// Conjugation, the transpose of the dual antipode.
    pub fn conjugate(&self, a: &SteenrodElement) -> Result<SteenrodElement> {
        let rows = self.antipode_rows(a.degree)?;
        let coeffs =
            BitVector::from_bools(&rows.iter().map(|row| a.coeffs.dot(row)).collect::<Vec<_>>());
        Ok(SteenrodElement::new(a.degree, coeffs))
    }

    /// Restriction of `a` to τ-free monomials: an algebra map onto the
    /// classical Steenrod algebra.
    pub fn to_classical(&self, a: &SteenrodElement) -> Result<ClassicalElement> {
        let basis = self.dual_basis(a.degree)?;
        let mut out = ClassicalElement::zero();
        for k in a.coeffs.iter_ones() {
            if basis[k].is_tau_free() {
                out.toggle(basis[k].xi_exponents());
            }
        }
        Ok(out)
    }

    /// Image of a classical element under `Sq(R) ↦ P^R`, in bidegree `d`.
    pub fn from_classical(&self, c: &ClassicalElement, d: BiDegree) -> Result<SteenrodElement> {
        let mut out = self.zero(d)?;
        for r in c.terms() {
            let m = DualMonomial::new(&[], r).unwrap();
            if m.degree() != d {
                return Err(Error::Contract(format!(
                    "classical term of bidegree {} in an element of bidegree {d}",
                    m.degree()
                )));
            }
            out.coeffs.flip(self.index_of(&m)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> MilnorAlgebra {
        MilnorAlgebra::new(16)
    }

    #[test]
    fn basis_examples() {
        let a = alg();
        assert_eq!(
            a.dual_basis(BiDegree::new(2, 1)).unwrap(),
            &[DualMonomial::xi(1)]
        );
        let b = a.dual_basis(BiDegree::new(3, 1)).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&DualMonomial::tau(1)));
        assert!(b.contains(&DualMonomial::new(&[0], &[1]).unwrap()));
        assert!(a.dual_basis(BiDegree::new(2, 0)).unwrap().is_empty());
        assert!(a.dual_basis(BiDegree::new(3, 2)).unwrap().is_empty());
        assert!(a.dual_basis(BiDegree::new(100, 60)).unwrap().is_empty());
        assert!(matches!(
            a.dual_basis(BiDegree::new(17, 8)),
            Err(Error::Window { .. })
        ));
    }

    #[test]
    fn coproduct_examples() {
        let a = alg();
        let one = DualMonomial::one();
        let x1 = DualMonomial::xi(1);
        let mut expect = vec![(x1.clone(), one.clone()), (one.clone(), x1.clone())];
        expect.sort();
        assert_eq!(a.coproduct(&x1), expect);

        let t0 = DualMonomial::tau(0);
        let t1 = DualMonomial::tau(1);
        let mut expect = vec![
            (t1.clone(), one.clone()),
            (x1.clone(), t0.clone()),
            (one.clone(), t1.clone()),
        ];
        expect.sort();
        assert_eq!(a.coproduct(&t1), expect);
        assert_eq!(a.coproduct(&one), vec![(one.clone(), one)]);
    }

    #[test]
    fn antipode_examples() {
        let a = alg();
        let x1 = a.dual_monomial_element(&DualMonomial::xi(1)).unwrap();
        assert_eq!(a.antipode_dual(&x1).unwrap(), x1);
        let t0 = a.dual_monomial_element(&DualMonomial::tau(0)).unwrap();
        assert_eq!(a.antipode_dual(&t0).unwrap(), t0);
        let x2 = a.dual_monomial_element(&DualMonomial::xi(2)).unwrap();
        let x1_cubed = a
            .dual_monomial_element(&DualMonomial::xi_power(1, 3))
            .unwrap();
        assert_eq!(a.antipode_dual(&x2).unwrap(), x2.add(&x1_cubed).unwrap());
    }

    #[test]
    fn pairing_examples() {
        let a = alg();
        let p1 = a.p(1).unwrap();
        let x1 = a.dual_monomial_element(&DualMonomial::xi(1)).unwrap();
        assert!(a.pair(&p1, &x1).unwrap());
        assert!(a.pair(&a.unit(), &a.dual_unit()).unwrap());
        assert!(a.pair(&p1, &a.dual_unit()).is_err());
    }

    #[test]
    fn product_examples() {
        let a = alg();
        let p1 = a.p(1).unwrap();
        let p2 = a.p(2).unwrap();
        assert!(a.multiply(&p1, &p1).unwrap().is_zero());
        assert_eq!(a.multiply(&p1, &p2).unwrap(), a.multiply(&p2, &p1).unwrap());
        let q0 = a.q(0).unwrap();
        assert!(a.multiply(&q0, &q0).unwrap().is_zero());
        assert_eq!(a.multiply(&a.unit(), &p2).unwrap(), p2);
    }

    #[test]
    fn coproduct_a_examples() {
        let a = alg();
        let p2 = a.p(2).unwrap();
        let terms = a.coproduct_a(&p2, BiDegree::ZERO).unwrap();
        assert_eq!(terms, vec![(a.unit(), p2.clone())]);
        assert!(a.coproduct_a(&p2, BiDegree::new(2, 1)).unwrap().is_empty());
        let p_2 = a.p_r(&SequenceR::new(1, &[2])).unwrap();
        let terms = a.coproduct_a(&p_2, BiDegree::new(2, 1)).unwrap();
        let p1 = a.p(1).unwrap();
        assert_eq!(terms, vec![(p1.clone(), p1)]);
    }

    #[test]
    fn conjugation_examples() {
        let a = alg();
        for t in 1..=3 {
            let p = a.p(t).unwrap();
            assert_eq!(a.conjugate(&p).unwrap(), p);
        }
        let p_2 = a.p_r(&SequenceR::new(1, &[2])).unwrap();
        let c = a.conjugate(&p_2).unwrap();
        assert_eq!(a.conjugate(&c).unwrap(), p_2);
    }

    #[test]
    fn named_elements() {
        let a = alg();
        assert_eq!(a.pst(0, 1).unwrap().degree, BiDegree::new(2, 1));
        assert_eq!(a.pst(0, 2).unwrap().degree, BiDegree::new(6, 3));
        let p_2 = a.p_r(&SequenceR::delta(1, 1).doubled()).unwrap();
        assert_eq!(p_2.degree, BiDegree::new(4, 2));
        assert_eq!(a.p_r(&SequenceR::delta(1, 2)).unwrap(), a.p(2).unwrap());
        assert!(matches!(a.pst(0, 4), Err(Error::Window { .. })));
    }

    #[test]
    fn classical_restriction() {
        let a = alg();
        for t in 1..=3u32 {
            let mut r = vec![0; t as usize];
            r[t as usize - 1] = 1;
            assert_eq!(
                a.to_classical(&a.p(t).unwrap()).unwrap(),
                ClassicalElement::milnor(&r)
            );
        }
        assert!(a.to_classical(&a.q(0).unwrap()).unwrap().is_zero());
    }
}
