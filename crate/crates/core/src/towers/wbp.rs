use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{image_and_kernel, BitVector};
use crate::milnor::{grammar, p_degree, BiDegree, MilnorAlgebra, SequenceR, SteenrodElement};
use crate::modules::{ExteriorProfile, GradedModule, QuotientModule};

use super::VerificationReport;

/// Basis `e_R` of the layer `V_i`: sequences `R = (r_2, r_3, …)` of length
/// `i`, `|e_R| = Σ r_j |P_j|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WbpLayer {
    pub i: u32,
    pub basis: Vec<SequenceR>,
}

impl WbpLayer {
    pub fn degree(&self, k: usize) -> BiDegree {
        self.basis[k].degree()
    }
}

/// Length-`i` sequences with `|e_R|.stem ≤ max_stem` and indices `j ≥ 2`
/// (at most `max_j` when given), sorted by their index lists.
pub fn vi_basis(i: u32, max_stem: i32, max_j: Option<u32>) -> WbpLayer {
    let top = (2..)
        .take_while(|&j| p_degree(j).stem <= max_stem && max_j.is_none_or(|m| j <= m))
        .last()
        .unwrap_or(1);
    let mut out = Vec::new();
    fn rec(
        left: u32,
        from: u32,
        top: u32,
        budget: i32,
        list: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if left == 0 {
            out.push(list.clone());
            return;
        }
        for j in from..=top {
            let s = p_degree(j).stem;
            if s > budget {
                break;
            }
            list.push(j);
            rec(left - 1, j, top, budget - s, list, out);
            list.pop();
        }
    }
    let mut lists = Vec::new();
    rec(i, 2, top, max_stem, &mut Vec::new(), &mut lists);
    lists.sort();
    for list in lists {
        let mut r = SequenceR::empty(2);
        for j in list {
            r = r.plus_delta(j);
        }
        out.push(r);
    }
    WbpLayer { i, basis: out }
}

/// Layers of `wBP⟨n⟩`: indices `j ∈ 2..=n+1`.
pub fn vi_basis_truncated(i: u32, max_stem: i32, n: u32) -> WbpLayer {
    vi_basis(i, max_stem, Some(n + 1))
}

/// `C_i = A//E(P_1) ⊗ V_i`, `0 ≤ i ≤ i_max`, with
/// `d([a]⊗e_R) = Σ_j [a·P_j]⊗e_{R−Δ_j}`, through total stem `window`.
pub struct WbpComplex {
    alg: Arc<MilnorAlgebra>,
    quotient: QuotientModule,
    window: i32,
    max_j: Option<u32>,
    layers: Vec<WbpLayer>,
}

#[derive(Clone, Copy, Debug)]
struct Block {
    r_index: usize,
    coeff: BiDegree,
    offset: usize,
    dim: usize,
}

impl WbpComplex {
    pub fn new(
        alg: Arc<MilnorAlgebra>,
        i_max: u32,
        window: i32,
        max_j: Option<u32>,
    ) -> Result<Self> {
        let quotient = QuotientModule::new(alg.clone(), ExteriorProfile::finite(&[1])?, window)?;
        let layers = (0..=i_max).map(|i| vi_basis(i, window, max_j)).collect();
        Ok(WbpComplex {
            alg,
            quotient,
            window,
            max_j,
            layers,
        })
    }

    pub fn layer(&self, i: u32) -> &WbpLayer {
        &self.layers[i as usize]
    }

    pub fn i_max(&self) -> u32 {
        self.layers.len() as u32 - 1
    }

    /// `A//E(P_1)` as used for the coefficients.
    pub fn coefficients(&self) -> &QuotientModule {
        &self.quotient
    }

    fn layout(&self, i: u32, d: BiDegree) -> Result<(Vec<Block>, usize)> {
        if d.stem > self.window {
            return Err(Error::window(d, self.window));
        }
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (k, r) in self.layers[i as usize].basis.iter().enumerate() {
            let c = d - r.degree();
            if c.stem < 0 || c.weight < 0 {
                continue;
            }
            let dim = self.quotient.dim(c)?;
            if dim > 0 {
                blocks.push(Block {
                    r_index: k,
                    coeff: c,
                    offset,
                    dim,
                });
                offset += dim;
            }
        }
        Ok((blocks, offset))
    }

    pub fn dim(&self, i: u32, d: BiDegree) -> Result<usize> {
        Ok(self.layout(i, d)?.1)
    }

    /// `[x]·P_j` for a class `x ∈ A//E(P_1)` in bidegree `c`.
    fn right_times_p(&self, c: BiDegree, x: &BitVector, j: u32) -> Result<BitVector> {
        let lifted = self.quotient.lift(c, x)?;
        let p = self.alg.p(j)?;
        let target = c + p.degree;
        let mut out = BitVector::zeros(self.alg.dim(target)?);
        self.alg
            .add_times_basis(&lifted, p.degree, p.coeffs.first_one().unwrap(), &mut out)?;
        self.quotient.project(&SteenrodElement::new(target, out))
    }

    /// Images under `d : C_i → C_{i−1}` of the basis of `C_i` at `d`.
    pub fn differential_rows(&self, i: u32, d: BiDegree) -> Result<Vec<BitVector>> {
        if i == 0 {
            return Ok(vec![BitVector::zeros(0); self.dim(0, d)?]);
        }
        let (src, _) = self.layout(i, d)?;
        let (dst, dst_dim) = self.layout(i - 1, d)?;
        let lower = &self.layers[i as usize - 1].basis;
        let mut rows = Vec::new();
        for b in &src {
            let r = &self.layers[i as usize].basis[b.r_index];
            for k in 0..b.dim {
                let x = BitVector::unit(b.dim, k);
                let mut row = BitVector::zeros(dst_dim);
                for j in r.support() {
                    let smaller = r.minus_delta(j).unwrap();
                    let idx = lower
                        .iter()
                        .position(|s| *s == smaller)
                        .expect("R − Δ_j lies in the lower layer");
                    let image = self.right_times_p(b.coeff, &x, j)?;
                    if image.is_zero() {
                        continue;
                    }
                    let t = dst
                        .iter()
                        .find(|t| t.r_index == idx)
                        .expect("nonzero image has a block");
                    row.add_at(t.offset, &image);
                }
                rows.push(row);
            }
        }
        Ok(rows)
    }

    /// Homology at position `i` in bidegree `d`.
    pub fn homology(&self, i: u32, d: BiDegree) -> Result<usize> {
        let dim = self.dim(i, d)?;
        let z = if i == 0 {
            dim
        } else {
            let rows = self.differential_rows(i, d)?;
            image_and_kernel(dim, self.dim(i - 1, d)?, &rows).1.dim()
        };
        let b = if i < self.i_max() {
            let rows = self.differential_rows(i + 1, d)?;
            image_and_kernel(rows.len(), dim, &rows).0.dim()
        } else {
            0
        };
        Ok(z - b)
    }

    /// Bidegrees `(stem, w)` with `stem ≤ window` and some term nonzero.
    fn bidegrees(&self) -> Vec<BiDegree> {
        let mut out = Vec::new();
        for stem in 0..=self.window {
            for w in 0..=stem / 2 {
                let d = BiDegree::new(stem, w);
                if (0..=self.i_max()).any(|i| self.dim(i, d).unwrap_or(0) > 0) {
                    out.push(d);
                }
            }
        }
        out
    }

    fn target_quotient(&self) -> Result<QuotientModule> {
        let profile = match self.max_j {
            Some(m) => ExteriorProfile::finite(&(1..=m).collect::<Vec<_>>())?,
            None => ExteriorProfile::AllInWindow,
        };
        QuotientModule::new(self.alg.clone(), profile, self.window)
    }
}

/// `d² = 0`, homology at position 0 equal to `A//E(P_1, P_2, …)` (or the
/// truncated profile), vanishing at positions `1..i_max−1`, the
/// well-definedness relation `[P_1·P_j] = 0`, and the layer connectivity
/// bound.
pub fn wbp_complex_check(
    alg: Arc<MilnorAlgebra>,
    i_max: u32,
    window: i32,
    max_j: Option<u32>,
) -> Result<VerificationReport> {
    if i_max == 0 {
        return Err(Error::Contract("wBP complex check needs i_max ≥ 1".into()));
    }
    let c = WbpComplex::new(alg.clone(), i_max, window, max_j)?;
    let mut rep = VerificationReport::new("wbp_complex")
        .param("i_max", i_max)
        .param("window", window)
        .param("max_j", max_j.map_or(serde_json::Value::Null, |j| j.into()));

    // [P_1·P_j] = 0 in A//E(P_1)
    let p1 = alg.p(1)?;
    for j in (2..).take_while(|&j| (p_degree(j) + p1.degree).stem <= window) {
        let prod = alg.multiply(&p1, &alg.p(j)?)?;
        let class = c.quotient.project(&prod)?;
        rep.require(
            class.is_zero(),
            || json!({"failure": "[P_1·P_j] ≠ 0", "j": j}),
        );
    }
    for layer in c.layers.iter().skip(1) {
        if let Some(low) = layer.basis.iter().map(|r| r.degree().stem).min() {
            let shifted = low - (layer.i as i32 - 1);
            rep.require(
                shifted > 5 * layer.i as i32,
                || json!({"failure": "layer connectivity", "i": layer.i, "lowest_stem": low}),
            );
        }
    }

    let target = c.target_quotient()?;
    for d in c.bidegrees() {
        for i in 1..i_max {
            let upper = c.differential_rows(i + 1, d)?;
            let lower = c.differential_rows(i, d)?;
            let lower_dim = c.dim(i - 1, d)?;
            let (_, z) = image_and_kernel(lower.len(), lower_dim, &lower);
            let (b, _) = image_and_kernel(upper.len(), lower.len(), &upper);
            if !b.is_subspace_of(&z) {
                rep.fail(
                    json!({"failure": "d² ≠ 0", "position": i + 1, "bidegree": d.to_string()}),
                );
            }
            let h = z.dim() - b.dim().min(z.dim());
            if b.is_subspace_of(&z) && h != 0 {
                rep.fail(
                    json!({"failure": "homology at an intermediate position", "position": i,
                                "bidegree": d.to_string(), "dim": h}),
                );
            }
        }
        let h0 = c.homology(0, d)?;
        let want = target.dim(d)?;
        rep.require(h0 == want, || {
            json!({"failure": "position 0 differs from the quotient", "bidegree": d.to_string(),
                   "homology": h0, "quotient": want})
        });
    }
    Ok(rep)
}

/// How `[P_j]` compares with `P_1`-factored candidates in `A//E(P_1)`.
fn factored_candidates(
    alg: &MilnorAlgebra,
    q: &QuotientModule,
    j: u32,
) -> Result<Vec<(&'static str, Option<bool>)>> {
    let pj = alg.p(j)?;
    let target = q.project(&pj)?;
    let p1 = alg.p(1)?;
    let doubled = alg.p_r(&SequenceR::delta(1, j - 1).doubled())?;
    let undoubled = alg.p_r(&SequenceR::delta(1, j - 1))?;
    let same_index = alg.p_r(&SequenceR::delta(1, j).doubled());
    let mut out = Vec::new();
    // `factor_first` puts the factor to the left of P_1
    let mut test = |name, factor: Option<SteenrodElement>, factor_first: bool| -> Result<()> {
        let verdict = match factor {
            Some(f) if f.degree + p1.degree == pj.degree => {
                let prod = if factor_first {
                    alg.multiply(&f, &p1)?
                } else {
                    alg.multiply(&p1, &f)?
                };
                Some(q.project(&prod)? == target)
            }
            _ => None,
        };
        out.push((name, verdict));
        Ok(())
    };
    let conj_doubled = alg.conjugate(&doubled)?;
    test("P_1·c(P^{2Δ_(j-1)})", Some(conj_doubled.clone()), false)?;
    test("P_1·P^{2Δ_(j-1)}", Some(doubled), false)?;
    test("c(P^{2Δ_(j-1)})·P_1", Some(conj_doubled), true)?;
    test(
        "P_1·c(P^{Δ_(j-1)})",
        Some(alg.conjugate(&undoubled)?),
        false,
    )?;
    test(
        "P_1·c(P^{2Δ_j})",
        same_index.ok().map(|x| alg.conjugate(&x)).transpose()?,
        false,
    )?;
    Ok(out)
}

/// Per generator `e_R` of layers `1..`, the primary differential
/// `Σ_j [P_j]⊗e_{R−Δ_j}` against the factored form
/// `Σ_j [P_1·c(P^{2Δ_{j−1}})]⊗e_{R−Δ_j}`; the relation
/// `[P_1·c(P^{2R})] = Σ_j [c(P^{2(R−Δ_j)})·P_1·c(P^{2Δ_j})]`; and the
/// unquotiented `P_1 P^{2R} + P^{2R} P_1 = Σ_j P_{j+1} P^{2(R−Δ_j)}`.
/// Witnesses record which exponent conventions hold for each `j`.
pub fn wbp_differential_check(
    alg: Arc<MilnorAlgebra>,
    i_max: u32,
    window: i32,
) -> Result<VerificationReport> {
    if i_max == 0 {
        return Err(Error::Contract("wBP differential check needs i ≥ 1".into()));
    }
    let q = QuotientModule::new(alg.clone(), ExteriorProfile::finite(&[1])?, window)?;
    let mut rep = VerificationReport::new("wbp_differential")
        .param("i_max", i_max)
        .param("window", window);
    let p1 = alg.p(1)?;

    let js: Vec<u32> = (2..).take_while(|&j| p_degree(j).stem <= window).collect();
    let mut factored_ok = Vec::new();
    for &j in &js {
        let cands = factored_candidates(&alg, &q, j)?;
        let holds: Vec<&str> = cands
            .iter()
            .filter(|(_, v)| *v == Some(true))
            .map(|(n, _)| *n)
            .collect();
        let fails: Vec<&str> = cands
            .iter()
            .filter(|(_, v)| *v == Some(false))
            .map(|(n, _)| *n)
            .collect();
        let mismatched: Vec<&str> = cands
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(n, _)| *n)
            .collect();
        let primary = cands[0].1 == Some(true);
        factored_ok.push((j, primary));
        let w = json!({"j": j, "holds": holds, "fails": fails, "degree_mismatch": mismatched});
        if primary {
            rep.note(w);
        } else {
            rep.fail(w);
        }
    }

    // generators: every term of d(e_R) must match its factored counterpart
    for i in 1..=i_max {
        let layer = vi_basis(i, window, None);
        if layer.basis.is_empty() {
            break;
        }
        for r in &layer.basis {
            let bad: Vec<u32> = r
                .support()
                .filter(|j| !factored_ok.iter().any(|(jj, ok)| jj == j && *ok))
                .collect();
            if !bad.is_empty() {
                rep.fail(json!({"failure": "factored differential differs", "R": r.to_string(), "j": bad}));
            }
        }
        rep.note(json!({"layer": i, "generators": layer.basis.len()}));
    }

    // relations indexed by R = (r_1, r_2, …) with |P_1·P^{2R}| inside the window
    for r in sequences_from_one(window - p1.degree.stem) {
        let double = alg.p_r(&r.doubled())?;
        let lhs = q.project(&alg.multiply(&p1, &alg.conjugate(&double)?)?)?;
        let deg = p1.degree + double.degree;
        let mut rhs = BitVector::zeros(q.dim(deg)?);
        let mut raw_rhs_right = alg.zero(deg)?;
        let mut raw_rhs_left = alg.zero(deg)?;
        for j in r.support() {
            let rest = alg.conjugate(&alg.p_r(&r.minus_delta(j).unwrap().doubled())?)?;
            let cd = alg.conjugate(&alg.p_r(&SequenceR::delta(1, j).doubled())?)?;
            let term = alg.multiply_all(&[&rest, &p1, &cd])?;
            rhs.add_assign(&q.project(&term)?);
            let pj1 = alg.p(j + 1)?;
            let rest_raw = alg.p_r(&r.minus_delta(j).unwrap().doubled())?;
            raw_rhs_right = raw_rhs_right.add(&alg.multiply(&pj1, &rest_raw)?)?;
            raw_rhs_left = raw_rhs_left.add(&alg.multiply(&rest_raw, &pj1)?)?;
        }
        if lhs != rhs {
            rep.fail(json!({"failure": "[P_1·c(P^{2R})] relation", "R": r.to_string()}));
        }
        let raw_lhs = alg
            .multiply(&p1, &double)?
            .add(&alg.multiply(&double, &p1)?)?;
        let as_written = raw_lhs == raw_rhs_right;
        let reversed = raw_lhs == raw_rhs_left;
        if !as_written {
            rep.fail(
                json!({"failure": "P_1 P^{2R} + P^{2R} P_1 relation", "R": r.to_string(),
                            "lhs": grammar::format_steenrod(&alg, &raw_lhs)?,
                            "P_(j+1) P^{2(R-Δ_j)} ordering holds": as_written,
                            "P^{2(R-Δ_j)} P_(j+1) ordering holds": reversed}),
            );
        } else if !reversed {
            rep.note(json!({"R": r.to_string(), "ordering": "only P_(j+1)·P^{2(R-Δ_j)}"}));
        }
    }
    Ok(rep)
}

/// Sequences `(r_1, r_2, …)`, nonempty, with `|P^{2R}|.stem ≤ max_stem`.
fn sequences_from_one(max_stem: i32) -> Vec<SequenceR> {
    let mut out = Vec::new();
    let top = (1..)
        .take_while(|&j| 2 * p_degree(j).stem <= max_stem)
        .last()
        .unwrap_or(0);
    fn rec(j: u32, top: u32, budget: i32, cur: &mut Vec<u32>, out: &mut Vec<SequenceR>) {
        if j > top {
            if cur.iter().any(|&r| r > 0) {
                out.push(SequenceR::new(1, cur));
            }
            return;
        }
        let s = 2 * p_degree(j).stem;
        let mut r = 0;
        while r * s <= budget {
            cur.push(r as u32);
            rec(j + 1, top, budget - r * s, cur, out);
            cur.pop();
            r += 1;
        }
    }
    rec(1, top, max_stem, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_examples() {
        let l0 = vi_basis(0, 20, None);
        assert_eq!(l0.basis, vec![SequenceR::empty(2)]);
        assert_eq!(l0.degree(0), BiDegree::ZERO);
        let l1 = vi_basis(1, 20, None);
        let degs: Vec<BiDegree> = (0..l1.basis.len()).map(|k| l1.degree(k)).collect();
        assert_eq!(degs, vec![BiDegree::new(6, 3), BiDegree::new(14, 7)]);
        let l2 = vi_basis(2, 20, None);
        assert_eq!(
            l2.basis,
            vec![SequenceR::new(2, &[2]), SequenceR::new(2, &[1, 1])]
        );
        assert_eq!(vi_basis_truncated(2, 40, 1).basis.len(), 1);
    }

    #[test]
    fn complex_checks_small() {
        let alg = Arc::new(MilnorAlgebra::new(16));
        let rep = wbp_complex_check(alg.clone(), 3, 16, None).unwrap();
        assert!(rep.passed(), "{}", rep.to_json());
        let c = WbpComplex::new(alg, 3, 16, None).unwrap();
        assert_eq!(c.homology(0, BiDegree::ZERO).unwrap(), 1);
    }

    #[test]
    fn differential_identities_small() {
        let alg = Arc::new(MilnorAlgebra::new(16));
        let rep = wbp_differential_check(alg, 3, 16).unwrap();
        assert!(rep.passed(), "{}", rep.to_json());
    }
}
