use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{image_and_kernel, BitVector};
use crate::milnor::{p_degree, BiDegree, MilnorAlgebra};
use crate::modules::{ExteriorProfile, GradedModule, QuotientModule};

use super::VerificationReport;

/// The truncated `kw_n` complex `K_m`: free rank-one terms `A·g_q` with
/// `|g_q| = q·(r − (1,0))`, `r = |P_{n+1}|`, for `0 ≤ q ≤ m`, and differential
/// `a·g_q ↦ (a·P_{n+1})·g_{q−1}`.
///
/// `window` bounds the stem of the algebra coefficient `a`, not the total
/// bidegree. Homology of a coefficient bidegree `e` needs `A_{e+r}`, so the
/// safe window is `e.stem ≤ window − r.stem`.
pub struct KwComplex {
    alg: Arc<MilnorAlgebra>,
    n: u32,
    m: u32,
    window: i32,
}

/// Homology dimensions of `K_m` in each homological degree, keyed by total
/// bidegree; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KwHomology {
    pub n: u32,
    pub m: u32,
    pub window: i32,
    pub safe_max_stem: i32,
    pub degrees: Vec<BTreeMap<BiDegree, usize>>,
}

impl KwHomology {
    /// Sum over homological degrees, keyed by total bidegree.
    pub fn total(&self) -> BTreeMap<BiDegree, usize> {
        let mut out = BTreeMap::new();
        for deg in &self.degrees {
            for (d, h) in deg {
                *out.entry(*d).or_insert(0) += h;
            }
        }
        out
    }
}

impl KwComplex {
    pub fn new(alg: Arc<MilnorAlgebra>, n: u32, m: u32, window: i32) -> Result<Self> {
        let r = p_degree(n + 1);
        if window > alg.max_stem() {
            return Err(Error::Contract(format!(
                "coefficient window {window} exceeds the algebra window {}",
                alg.max_stem()
            )));
        }
        if window < r.stem {
            return Err(Error::window(r, window));
        }
        Ok(KwComplex { alg, n, m, window })
    }

    pub fn r(&self) -> BiDegree {
        p_degree(self.n + 1)
    }

    pub fn safe_max_stem(&self) -> i32 {
        self.window - self.r().stem
    }

    /// `|g_q|`.
    pub fn generator_degree(&self, q: u32) -> BiDegree {
        q as i32 * (self.r() - BiDegree::new(1, 0))
    }

    /// Images of `A_e → A_{e+r}`, `a ↦ a·P_{n+1}`.
    fn times_p(&self, e: BiDegree) -> Result<Vec<BitVector>> {
        let p = self.alg.p(self.n + 1)?;
        let j = p.coeffs.first_one().unwrap();
        (0..self.alg.dim(e)?)
            .map(|i| self.alg.multiply_basis(e, i, p.degree, j))
            .collect()
    }

    /// Homology at `q` with algebra coefficients in bidegree `e`.
    pub fn homology_coeff(&self, q: u32, e: BiDegree) -> Result<usize> {
        if q > self.m {
            return Ok(0);
        }
        let dim = self.alg.dim(e)?;
        if dim == 0 {
            return Ok(0);
        }
        let r = self.r();
        let cycles = if q == 0 {
            dim
        } else {
            let out = self.times_p(e)?;
            image_and_kernel(dim, self.alg.dim(e + r)?, &out).1.dim()
        };
        let boundaries = if q < self.m {
            let src = e - r;
            let inc = self.times_p(src)?;
            image_and_kernel(inc.len(), dim, &inc).0.dim()
        } else {
            0
        };
        Ok(cycles - boundaries)
    }

    /// Homology at `q` in total bidegree `d`.
    pub fn homology_at(&self, q: u32, d: BiDegree) -> Result<usize> {
        self.homology_coeff(q, d - self.generator_degree(q))
    }

    /// Total homology in bidegree `d`, summed over homological degrees.
    pub fn total_homology_at(&self, d: BiDegree) -> Result<usize> {
        (0..=self.m).map(|q| self.homology_at(q, d)).sum()
    }

    pub fn homology(&self) -> Result<KwHomology> {
        let safe = self.safe_max_stem();
        let coeffs: Vec<BiDegree> = self
            .alg
            .nonzero_bidegrees()
            .filter(|e| e.stem <= safe)
            .collect();
        let mut degrees = Vec::new();
        for q in 0..=self.m {
            let mut map = BTreeMap::new();
            for &e in &coeffs {
                let h = self.homology_coeff(q, e)?;
                if h > 0 {
                    map.insert(e + self.generator_degree(q), h);
                }
            }
            degrees.push(map);
        }
        Ok(KwHomology {
            n: self.n,
            m: self.m,
            window: self.window,
            safe_max_stem: safe,
            degrees,
        })
    }
}

/// Homology of `K_m` over its safe window.
pub fn kw_homology(alg: Arc<MilnorAlgebra>, n: u32, m: u32, window: i32) -> Result<KwHomology> {
    KwComplex::new(alg, n, m, window)?.homology()
}

fn p_squared_zero(alg: &MilnorAlgebra, t: u32) -> Result<bool> {
    let p = alg.p(t)?;
    Ok(alg.multiply(&p, &p)?.is_zero())
}

/// Chain-level checks on `K_m`: `d² = 0`, Chow accounting on the bases,
/// degree 0 equal to `A//E(P_{n+1})`, vanishing in degrees `1..m−1`, no
/// homology in Chow degrees below `−m`, and a class in Chow degree `−m`.
pub fn kw_chow_check(
    alg: Arc<MilnorAlgebra>,
    n: u32,
    m: u32,
    window: i32,
) -> Result<VerificationReport> {
    let k = KwComplex::new(alg.clone(), n, m, window)?;
    let mut rep = VerificationReport::new("kw_chow")
        .param("n", n)
        .param("m", m)
        .param("window", window)
        .param("safe_max_stem", k.safe_max_stem());

    if m >= 2 {
        rep.require(
            p_squared_zero(&alg, n + 1)?,
            || json!({"failure": "d² ≠ 0", "reason": format!("P_{}² ≠ 0", n + 1)}),
        );
    }
    // every basis element of term q sits in Chow degree ≥ −q
    for q in 0..=m {
        for e in alg.nonzero_bidegrees().filter(|e| e.stem <= window) {
            let d = e + k.generator_degree(q);
            rep.require(
                d.chow() >= -(q as i32),
                || json!({"failure": "chow accounting", "q": q, "bidegree": d.to_string()}),
            );
        }
    }

    let h = k.homology()?;
    if m >= 1 {
        let quotient = QuotientModule::new(
            alg.clone(),
            ExteriorProfile::finite(&[n + 1])?,
            k.safe_max_stem(),
        )?;
        for e in alg
            .nonzero_bidegrees()
            .filter(|e| e.stem <= k.safe_max_stem())
        {
            let got = h.degrees[0].get(&e).copied().unwrap_or(0);
            let want = quotient.dim(e)?;
            rep.require(got == want, || {
                json!({"failure": "degree 0 differs from the quotient", "bidegree": e.to_string(),
                       "homology": got, "quotient": want})
            });
        }
    }
    for q in 1..m {
        if let Some((d, dim)) = h.degrees[q as usize].iter().next() {
            rep.fail(
                json!({"failure": "homology in an intermediate degree", "q": q,
                            "bidegree": d.to_string(), "dim": dim}),
            );
        }
    }
    let total = h.total();
    for (d, dim) in &total {
        rep.require(d.chow() >= -(m as i32), || {
            json!({"failure": "homology below Chow degree -m", "bidegree": d.to_string(), "dim": dim})
        });
    }
    match total.iter().find(|(d, _)| d.chow() == -(m as i32)) {
        Some((d, dim)) => rep.note(json!({"sharpness": d.to_string(), "dim": dim})),
        None => rep.fail(json!({"failure": "no class in Chow degree -m inside the safe window"})),
    }
    Ok(rep)
}

/// Vanishing inputs for attaching the next stage of the tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub n: u32,
    pub m: u32,
    pub square_zero: bool,
    /// Total homology of `K_{m−1}` at `(m+1)r − (m,0)` and `(m+2)r − (m,0)`.
    pub existence: Vec<(BiDegree, usize)>,
    /// Total homology of `K_m` at `(m+2)r − (m+1,0)`.
    pub uniqueness: (BiDegree, usize),
}

impl ObstructionReport {
    pub fn passed(&self) -> bool {
        self.square_zero && self.existence.iter().all(|(_, h)| *h == 0) && self.uniqueness.1 == 0
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut rep = VerificationReport::new("k_invariant")
            .param("n", self.n)
            .param("m", self.m);
        rep.require(self.square_zero, || json!({"failure": "P_{n+1}² ≠ 0"}));
        for (d, h) in &self.existence {
            if *h == 0 {
                rep.note(json!({"existence": d.to_string(), "dim": 0}));
            } else {
                rep.fail(json!({"failure": "existence group nonzero", "bidegree": d.to_string(), "dim": h}));
            }
        }
        let (d, h) = self.uniqueness;
        if h == 0 {
            rep.note(json!({"uniqueness": d.to_string(), "dim": 0}));
        } else {
            rep.fail(
                json!({"failure": "uniqueness group nonzero", "bidegree": d.to_string(), "dim": h}),
            );
        }
        rep
    }
}

/// `P_{n+1}² = 0`, and vanishing of the homology groups that house the
/// next k-invariant and its ambiguity.
pub fn k_invariant_check(
    alg: Arc<MilnorAlgebra>,
    n: u32,
    m: u32,
    window: i32,
) -> Result<ObstructionReport> {
    if m == 0 {
        return Err(Error::Contract("k-invariant check needs m ≥ 1".into()));
    }
    let r = p_degree(n + 1);
    let mi = m as i32;
    let below = KwComplex::new(alg.clone(), n, m - 1, window)?;
    let here = KwComplex::new(alg.clone(), n, m, window)?;
    let existence = [
        (mi + 1) * r - BiDegree::new(mi, 0),
        (mi + 2) * r - BiDegree::new(mi, 0),
    ]
    .into_iter()
    .map(|d| Ok((d, below.total_homology_at(d)?)))
    .collect::<Result<Vec<_>>>()?;
    let u = (mi + 2) * r - BiDegree::new(mi + 1, 0);
    Ok(ObstructionReport {
        n,
        m,
        square_zero: p_squared_zero(&alg, n + 1)?,
        existence,
        uniqueness: (u, here.total_homology_at(u)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Arc<MilnorAlgebra> {
        Arc::new(MilnorAlgebra::new(14))
    }

    #[test]
    fn m_zero_is_the_algebra() {
        let a = alg();
        let h = kw_homology(a.clone(), 0, 0, 14).unwrap();
        for (d, dim) in &h.degrees[0] {
            assert_eq!(*dim, a.dim(*d).unwrap());
        }
        assert_eq!(
            h.degrees[0].len(),
            a.nonzero_bidegrees().filter(|e| e.stem <= 12).count()
        );
    }

    #[test]
    fn lowest_top_class() {
        let h = kw_homology(alg(), 0, 1, 14).unwrap();
        let lowest = h.degrees[1].keys().next().copied().unwrap();
        assert_eq!(lowest, BiDegree::new(3, 2));
        assert_eq!(lowest.chow(), -1);
    }

    #[test]
    fn chow_checks_pass() {
        for (n, m) in [(0, 0), (0, 1), (0, 3), (1, 2)] {
            let rep = kw_chow_check(alg(), n, m, 14).unwrap();
            assert!(rep.passed(), "{}", rep.to_json());
        }
    }

    #[test]
    fn obstruction_groups_vanish() {
        let rep = k_invariant_check(alg(), 0, 1, 14).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.existence[0].0, BiDegree::new(3, 2));
        assert!(k_invariant_check(alg(), 0, 0, 14).is_err());
    }
}
