//! Dense, bit-packed linear algebra over the two-element field.
//!
//! Every reduction picks pivots deterministically (lowest column first, then
//! lowest row), so bases derived from these routines are stable across runs.

use std::fmt;

use crate::error::{Error, Result};

const LIMB_BITS: usize = 64;

fn limbs_for(len: usize) -> usize {
    len.div_ceil(LIMB_BITS)
}

/// A fixed-length vector over F2, packed 64 entries per limb.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    limbs: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            limbs: vec![0; limbs_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones exactly at `indices` (repeated indices cancel).
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        Self::from_indices(len, [i])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.limbs[i / LIMB_BITS] >> (i % LIMB_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % LIMB_BITS);
        if value {
            self.limbs[i / LIMB_BITS] |= mask;
        } else {
            self.limbs[i / LIMB_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.limbs[i / LIMB_BITS] ^= 1u64 << (i % LIMB_BITS);
    }

    /// In-place XOR. Panics on length mismatch.
    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in vector addition");
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    pub fn add(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Standard bilinear form.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        self.limbs
            .iter()
            .zip(&other.limbs)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &l) in self.limbs.iter().enumerate() {
            if l != 0 {
                return Some(k * LIMB_BITS + l.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(k, &limb)| {
            let mut l = limb;
            std::iter::from_fn(move || {
                if l == 0 {
                    None
                } else {
                    let tz = l.trailing_zeros() as usize;
                    l &= l - 1;
                    Some(k * LIMB_BITS + tz)
                }
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Entries `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        BitVector::from_indices(
            len,
            self.iter_ones()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }

    /// XOR `other` into entries `start..start + other.len()`.
    pub fn add_at(&mut self, start: usize, other: &BitVector) {
        assert!(start + other.len <= self.len);
        if start.is_multiple_of(LIMB_BITS) {
            let base = start / LIMB_BITS;
            for (k, &l) in other.limbs.iter().enumerate() {
                self.limbs[base + k] ^= l;
            }
        } else {
            for i in other.iter_ones() {
                self.flip(start + i);
            }
        }
    }

    /// Pads (or truncates, which must only drop zeros) to a new length.
    pub fn resized(&self, len: usize) -> BitVector {
        let mut out = BitVector::zeros(len);
        for i in self.iter_ones() {
            assert!(i < len, "resizing would drop a nonzero entry");
            out.set(i, true);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[{self}]")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major matrix over F2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    columns: usize,
}

/// Output of [`BitMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; nonzero rows first.
    pub echelon: BitMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, columns: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(columns); rows],
            columns,
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
            columns: n,
        }
    }

    pub fn from_rows(columns: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != columns) {
            return Err(Error::Contract(format!(
                "row of length {} in a matrix with {columns} columns",
                bad.len()
            )));
        }
        Ok(BitMatrix { rows, columns })
    }

    pub fn from_bools(rows: &[&[bool]]) -> Self {
        let columns = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| BitVector::from_bools(r)).collect();
        BitMatrix::from_rows(columns, rows).expect("ragged rows")
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// `self · v`, with `v` indexed by columns.
    pub fn apply(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.columns {
            return Err(Error::Contract(format!(
                "vector of length {} applied to a matrix with {} columns",
                v.len(),
                self.columns
            )));
        }
        Ok(BitVector::from_bools(
            &self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>(),
        ))
    }

    /// `Σ c_i · row_i`, i.e. the transpose applied to `c`.
    pub fn combine_rows(&self, c: &BitVector) -> Result<BitVector> {
        if c.len() != self.rows.len() {
            return Err(Error::Contract(format!(
                "coefficient vector of length {} for {} rows",
                c.len(),
                self.rows.len()
            )));
        }
        let mut out = BitVector::zeros(self.columns);
        for i in c.iter_ones() {
            out.add_assign(&self.rows[i]);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.columns, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Reduced row-echelon form by Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let pivots = reduce_in_place(&mut rows, self.columns);
        let rank = pivots.len();
        Rref {
            echelon: BitMatrix {
                rows,
                columns: self.columns,
            },
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space `{v : self · v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let Rref {
            echelon, pivots, ..
        } = self.rref();
        let mut basis = Vec::new();
        let mut p = 0;
        for free in 0..self.columns {
            if p < pivots.len() && pivots[p] == free {
                p += 1;
                continue;
            }
            let mut v = BitVector::unit(self.columns, free);
            for (k, &pc) in pivots.iter().enumerate() {
                if echelon.rows[k].get(free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.columns, basis)
    }

    /// Coefficients `c` with `Σ c_i · row_i = b`, or `None` when `b` is
    /// outside the row space.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.columns {
            return Err(Error::Contract(format!(
                "right-hand side of length {} for a row space of dimension {}",
                b.len(),
                self.columns
            )));
        }
        let n = self.rows.len();
        let mut rows: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitVector::unit(n, i)))
            .collect();
        let pivots = reduce_prefix(&mut rows, self.columns);
        let mut residual = b.concat(&BitVector::zeros(n));
        for (k, &pc) in pivots.iter().enumerate() {
            if residual.get(pc) {
                residual.add_assign(&rows[k]);
            }
        }
        if !residual.slice(0, self.columns).is_zero() {
            return Ok(None);
        }
        Ok(Some(residual.slice(self.columns, n)))
    }
}

/// Gauss–Jordan on `rows`, pivoting only in columns `< limit`. Returns pivot
/// columns; the pivot rows end up first, in pivot order.
fn reduce_prefix(rows: &mut [BitVector], limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..limit {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, found);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.add_assign(&pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

fn reduce_in_place(rows: &mut [BitVector], columns: usize) -> Vec<usize> {
    reduce_prefix(rows, columns)
}

/// Image of `e_i ↦ images[i]` in the target, and the kernel in the source.
pub fn image_and_kernel(
    source_dim: usize,
    target_dim: usize,
    images: &[BitVector],
) -> (Subspace, Subspace) {
    assert_eq!(images.len(), source_dim);
    let mut rows: Vec<BitVector> = images
        .iter()
        .enumerate()
        .map(|(i, im)| {
            assert_eq!(im.len(), target_dim);
            im.concat(&BitVector::unit(source_dim, i))
        })
        .collect();
    let pivots = reduce_in_place(&mut rows, target_dim + source_dim);
    let split = pivots.iter().take_while(|&&p| p < target_dim).count();
    let image = Subspace {
        ambient_dim: target_dim,
        basis: rows[..split]
            .iter()
            .map(|r| r.slice(0, target_dim))
            .collect(),
        pivots: pivots[..split].to_vec(),
    };
    let kernel = Subspace {
        ambient_dim: source_dim,
        basis: rows[split..pivots.len()]
            .iter()
            .map(|r| r.slice(target_dim, source_dim))
            .collect(),
        pivots: pivots[split..].iter().map(|p| p - target_dim).collect(),
    };
    (image, kernel)
}

/// A linear subspace stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| BitVector::unit(ambient_dim, i))
                .collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn from_spanning(ambient_dim: usize, vectors: Vec<BitVector>) -> Self {
        let mut rows = vectors;
        for v in &rows {
            assert_eq!(v.len(), ambient_dim, "spanning vector has wrong length");
        }
        let pivots = reduce_in_place(&mut rows, ambient_dim);
        rows.truncate(pivots.len());
        Subspace {
            ambient_dim,
            basis: rows,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> BitMatrix {
        BitMatrix {
            rows: self.basis.clone(),
            columns: self.ambient_dim,
        }
    }

    /// Clears every pivot coordinate of `v` using the basis.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out.get(p) {
                out.add_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.ambient_dim, vs)
    }
}

/// Quotient `V / S` presented by the coordinates of `V` that are not pivots of `S`.
#[derive(Clone, Debug)]
pub struct Quotient {
    subspace: Subspace,
    reps: Vec<usize>,
}

impl Quotient {
    pub fn new(ambient_dim: usize, s: Subspace) -> Result<Self> {
        if s.ambient_dim != ambient_dim {
            return Err(Error::Contract(format!(
                "subspace of a {}-dimensional space used in a {ambient_dim}-dimensional quotient",
                s.ambient_dim
            )));
        }
        let mut is_pivot = vec![false; ambient_dim];
        for &p in &s.pivots {
            is_pivot[p] = true;
        }
        let reps = (0..ambient_dim).filter(|&i| !is_pivot[i]).collect();
        Ok(Quotient { subspace: s, reps })
    }

    /// Non-pivot coordinates; their unit vectors form a basis of the quotient.
    pub fn coset_reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// Canonical representative of `v + S`: zero on every pivot coordinate.
    pub fn project(&self, v: &BitVector) -> BitVector {
        self.subspace.reduce(v)
    }

    /// Coordinates of `v + S` in the basis of coset representatives.
    pub fn coordinates(&self, v: &BitVector) -> BitVector {
        let reduced = self.project(v);
        BitVector::from_indices(
            self.reps.len(),
            self.reps
                .iter()
                .enumerate()
                .filter(|(_, &r)| reduced.get(r))
                .map(|(k, _)| k),
        )
    }

    /// Ambient vector for quotient coordinates.
    pub fn lift(&self, coords: &BitVector) -> BitVector {
        BitVector::from_indices(
            self.subspace.ambient_dim,
            coords.iter_ones().map(|k| self.reps[k]),
        )
    }
}

/// The quotient construction as a free function.
pub fn quotient(ambient_dim: usize, s: Subspace) -> Result<Quotient> {
    Quotient::new(ambient_dim, s)
}
