//! Algebraic models of the towers `kw_n`, `K(w_n)` and `wBP`, with the
//! Chow-degree vanishing checks that drive their construction.

use std::sync::Arc;

use serde_json::json;

use crate::error::Result;
use crate::milnor::{w_degree, BiDegree, MilnorAlgebra};
use crate::modules::{tensor_power, ExteriorProfile, GradedModule, QuotientModule};
use crate::resolution::ExtChart;

mod kw;
mod report;
mod wbp;

pub use kw::{
    k_invariant_check, kw_chow_check, kw_homology, KwComplex, KwHomology, ObstructionReport,
};
pub use report::{Verdict, VerificationReport};
pub use wbp::{
    vi_basis, vi_basis_truncated, wbp_complex_check, wbp_differential_check, WbpComplex, WbpLayer,
};

/// `power`-fold tensor power of `A//E(P_{n+1})` (or of `A//E(P_1, P_2, …)`
/// when `n` is `None`) under the diagonal action: dimension 1 at `(0,0)`
/// and nothing in negative Chow degree through `window`.
pub fn smash_chow_check(
    alg: Arc<MilnorAlgebra>,
    n: Option<u32>,
    power: usize,
    window: i32,
) -> Result<VerificationReport> {
    if power == 0 {
        return Err(crate::Error::Contract("smash power must be ≥ 1".into()));
    }
    let profile = match n {
        Some(n) => ExteriorProfile::finite(&[n + 1])?,
        None => ExteriorProfile::AllInWindow,
    };
    let label = profile.label();
    let q: Arc<dyn GradedModule> = Arc::new(QuotientModule::new(alg, profile, window)?);
    let m = tensor_power(q, power)?;
    let mut rep = VerificationReport::new("smash_chow")
        .param("module", label)
        .param("power", power)
        .param("window", window);
    let unit = m.dim(BiDegree::ZERO)?;
    rep.require(
        unit == 1,
        || json!({"failure": "dim at (0,0)", "dim": unit}),
    );
    let mut lowest_chow = None::<i32>;
    for stem in 0..=window {
        for w in 0..=stem {
            let d = BiDegree::new(stem, w);
            let dim = m.dim(d)?;
            if dim == 0 {
                continue;
            }
            lowest_chow = Some(lowest_chow.map_or(d.chow(), |c| c.min(d.chow())));
            rep.require(d.chow() >= 0, || {
                json!({"failure": "negative Chow degree", "bidegree": d.to_string(), "dim": dim})
            });
        }
    }
    rep.note(json!({"lowest_chow": lowest_chow}));
    Ok(rep)
}

/// `F2[w_n^{±1}]`: one class at `k·|w_n|` in filtration `k` for every integer
/// `k` with `|k·|w_n|.stem| ≤ max_stem`.
pub fn laurent_chart(n: u32, max_stem: i32) -> ExtChart {
    let w = w_degree(n);
    let mut chart = ExtChart::new(format!("K(w_{n})"), max_stem);
    let top = max_stem / w.stem;
    for k in -top..=top {
        chart.add(k, k * w.stem, k * w.weight, 1);
    }
    chart
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_examples() {
        let c = laurent_chart(0, 6);
        assert_eq!(c.len(), 13);
        for s in -6..=6 {
            assert_eq!(c.mult(s, s, s), 1);
        }
        assert_eq!(laurent_chart(1, 10).mult(-1, -5, -3), 1);
    }

    #[test]
    fn smash_powers() {
        let alg = Arc::new(MilnorAlgebra::new(12));
        assert!(smash_chow_check(alg.clone(), Some(0), 2, 12)
            .unwrap()
            .passed());
        assert!(smash_chow_check(alg.clone(), Some(1), 3, 12)
            .unwrap()
            .passed());
        assert!(smash_chow_check(alg, None, 2, 12).unwrap().passed());
    }
}
