//! The classical mod 2 Steenrod algebra in the Milnor basis, multiplied with
//! Milnor's matrix formula. This is an independent route to products of
//! τ-free elements.

use std::collections::BTreeSet;
use std::fmt;

/// A classical element: a sum of Milnor basis elements `Sq(R)`, graded by
/// `Σ r_j (2^j − 1)` (the motivic weight of `ξ^R`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassicalElement {
    terms: BTreeSet<Vec<u32>>,
}

fn trim(r: &[u32]) -> Vec<u32> {
    let mut v = r.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn weight_of(r: &[u32]) -> i64 {
    r.iter()
        .enumerate()
        .map(|(k, &e)| e as i64 * ((1i64 << (k + 1)) - 1))
        .sum()
}

impl ClassicalElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn milnor(r: &[u32]) -> Self {
        let mut e = Self::zero();
        e.toggle(r);
        e
    }

    pub fn toggle(&mut self, r: &[u32]) {
        let r = trim(r);
        if !self.terms.remove(&r) {
            self.terms.insert(r);
        }
    }

    pub fn add_assign(&mut self, other: &ClassicalElement) {
        for r in &other.terms {
            self.toggle(r);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weight of the terms, `None` for zero or inhomogeneous elements.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(|r| weight_of(r));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }
}

impl fmt::Display for ClassicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|r| {
                let inner: Vec<String> = r.iter().map(|e| e.to_string()).collect();
                format!("Sq({})", inner.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Multinomial coefficient mod 2: odd iff the binary digits are disjoint.
fn multinomial_odd(parts: &[u32]) -> bool {
    let mut seen = 0u32;
    for &p in parts {
        if seen & p != 0 {
            return false;
        }
        seen |= p;
    }
    true
}

/// `Sq(R) · Sq(S)` by Milnor's matrix formula.
fn milnor_product(r: &[u32], s: &[u32]) -> ClassicalElement {
    let rows = r.len();
    let cols = s.len();
    // x[i][j] for 1 ≤ i ≤ rows, 1 ≤ j ≤ cols; row 0 and column 0 are derived.
    let mut x = vec![vec![0u32; cols + 1]; rows + 1];
    let mut out = ClassicalElement::zero();
    let cells: Vec<(usize, usize)> = (1..=rows)
        .flat_map(|i| (1..=cols).map(move |j| (i, j)))
        .collect();

    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        x: &mut Vec<Vec<u32>>,
        r: &[u32],
        s: &[u32],
        out: &mut ClassicalElement,
    ) {
        let rows = r.len();
        let cols = s.len();
        if k == cells.len() {
            // fill column 0 and row 0
            for i in 1..=rows {
                let used: u32 = (1..=cols).map(|j| x[i][j] << j).sum();
                x[i][0] = r[i - 1] - used;
            }
            for j in 1..=cols {
                let used: u32 = (1..=rows).map(|i| x[i][j]).sum();
                x[0][j] = s[j - 1] - used;
            }
            let n_max = rows + cols;
            let mut t = vec![0u32; n_max];
            for n in 1..=n_max {
                let diag: Vec<u32> = (0..=n)
                    .filter(|&i| i <= rows && n - i <= cols)
                    .map(|i| x[i][n - i])
                    .collect();
                if !multinomial_odd(&diag) {
                    return;
                }
                t[n - 1] = diag.iter().sum();
            }
            out.toggle(&t);
            return;
        }
        let (i, j) = cells[k];
        let row_used: u32 = (1..j).map(|jj| x[i][jj] << jj).sum();
        let col_used: u32 = (1..i).map(|ii| x[ii][j]).sum();
        let mut v = 0u32;
        while row_used + (v << j) <= r[i - 1] && col_used + v <= s[j - 1] {
            x[i][j] = v;
            rec(k + 1, cells, x, r, s, out);
            v += 1;
        }
        x[i][j] = 0;
    }

    rec(0, &cells, &mut x, r, s, &mut out);
    out
}

/// Bilinear extension of Milnor's product formula.
pub fn classical_product(a: &ClassicalElement, b: &ClassicalElement) -> ClassicalElement {
    let mut out = ClassicalElement::zero();
    for r in a.terms() {
        for s in b.terms() {
            out.add_assign(&milnor_product(r, s));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(r: &[u32]) -> ClassicalElement {
        ClassicalElement::milnor(r)
    }

    #[test]
    fn textbook_products() {
        // Sq(2)Sq(1) = Sq(3) + Sq(0,1)
        let mut expect = sq(&[3]);
        expect.toggle(&[0, 1]);
        assert_eq!(classical_product(&sq(&[2]), &sq(&[1])), expect);
        // Sq(1)Sq(2) = Sq(3)
        assert_eq!(classical_product(&sq(&[1]), &sq(&[2])), sq(&[3]));
        // Sq(1)Sq(1) = 0
        assert!(classical_product(&sq(&[1]), &sq(&[1])).is_zero());
        // Q_1 = Sq(0,1) squares to zero and commutes with Q_0 = Sq(1)
        assert!(classical_product(&sq(&[0, 1]), &sq(&[0, 1])).is_zero());
        assert_eq!(
            classical_product(&sq(&[1]), &sq(&[0, 1])),
            classical_product(&sq(&[0, 1]), &sq(&[1]))
        );
    }

    #[test]
    fn unit_is_neutral() {
        let a = sq(&[3, 1]);
        assert_eq!(classical_product(&sq(&[]), &a), a);
        assert_eq!(classical_product(&a, &sq(&[])), a);
    }
}
