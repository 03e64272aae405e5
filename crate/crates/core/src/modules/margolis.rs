use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{image_and_kernel, BitVector};
use crate::milnor::{p_degree, BiDegree};

use super::GradedModule;

/// Margolis homology `ker P_t / im P_t` of a module, per bidegree, over the
/// safe sub-window `stem ≤ max_stem − margin`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MargolisReport {
    pub module: String,
    pub t: u32,
    pub max_stem: i32,
    pub margin: i32,
    pub safe_max_stem: i32,
    /// Homology dimension at every nonzero bidegree of the module inside the
    /// safe window (zeros included).
    pub homology: BTreeMap<BiDegree, usize>,
}

impl MargolisReport {
    pub fn is_exact(&self) -> bool {
        self.homology.values().all(|&h| h == 0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (BiDegree, usize)> + '_ {
        self.homology
            .iter()
            .filter(|(_, &h)| h > 0)
            .map(|(d, h)| (*d, *h))
    }
}

fn action_images(m: &dyn GradedModule, t: u32, d: BiDegree) -> Result<Vec<BitVector>> {
    let alg = m.algebra();
    let pt = alg.p(t)?;
    let dim = m.dim(d)?;
    (0..dim)
        .map(|i| m.act(&pt, d, &BitVector::unit(dim, i)))
        .collect()
}

/// Left action of `P_t` on `M`, with `max_stem` at most the module window and
/// `margin ≥ |P_t|.stem`. Every bidegree of the safe window is checked for
/// `P_t² = 0` before homology is taken.
pub fn margolis(
    m: &dyn GradedModule,
    t: u32,
    max_stem: i32,
    margin: i32,
) -> Result<MargolisReport> {
    let p = p_degree(t);
    if margin < p.stem {
        return Err(Error::Contract(format!(
            "margin {margin} is below |P_{t}|.stem = {}",
            p.stem
        )));
    }
    if max_stem > m.max_stem() {
        return Err(Error::window(BiDegree::new(max_stem, 0), m.max_stem()));
    }
    let safe = max_stem - margin;
    let mut homology = BTreeMap::new();
    for stem in m.min_stem()..=safe {
        for w in m.weights(stem)? {
            let d = BiDegree::new(stem, w);
            let out = action_images(m, t, d)?;
            let (_, ker) = image_and_kernel(out.len(), m.dim(d + p)?, &out);
            let src = d - p;
            let inc = if src.stem >= m.min_stem() {
                action_images(m, t, src)?
            } else {
                Vec::new()
            };
            let (im, _) = image_and_kernel(inc.len(), m.dim(d)?, &inc);
            if im.basis().iter().any(|v| !ker.contains(v)) {
                return Err(Error::NotExterior {
                    t,
                    module: m.name(),
                    degree: src,
                });
            }
            homology.insert(d, ker.dim() - im.dim());
        }
    }
    Ok(MargolisReport {
        module: m.name(),
        t,
        max_stem,
        margin,
        safe_max_stem: safe,
        homology,
    })
}
