//! Minimal free resolutions over the Steenrod algebra and the Ext charts
//! they expose.

mod chart;

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{image_and_kernel, BitVector, Subspace};
use crate::milnor::{p_degree, BiDegree, MilnorAlgebra, SteenrodElement};
use crate::modules::GradedModule;

pub use chart::{
    compare_charts, polynomial_chart, ChartDiff, ChartKey, ChartMismatch, ExtChart,
    CHART_FORMAT_VERSION,
};

/// Window and resource limits of a resolution.
#[derive(Clone, Debug)]
pub struct ResolutionConfig {
    pub max_stem: i32,
    pub max_filt: i32,
    /// Stop with a partial result when a single bidegree needs more new
    /// generators than this.
    pub max_gens_per_bidegree: usize,
    /// Worker threads; `None` uses the global pool. Never changes results.
    pub threads: Option<usize>,
}

impl ResolutionConfig {
    pub fn new(max_stem: i32, max_filt: i32) -> Self {
        ResolutionConfig {
            max_stem,
            max_filt,
            max_gens_per_bidegree: 10_000,
            threads: None,
        }
    }

    /// Algebra window needed: coefficients of the differentials reach
    /// `max_stem + 2`.
    pub fn algebra_window(&self) -> i32 {
        self.max_stem + 2
    }

    /// Module window needed: the augmentation is evaluated one stem above
    /// the chart.
    pub fn module_window(&self) -> i32 {
        self.max_stem + 1
    }
}

/// A free module, generators listed in the order they were created
/// (increasing internal degree, then weight).
#[derive(Clone, Debug, Default)]
pub struct FreeModule {
    pub filtration: i32,
    generators: Vec<BiDegree>,
}

/// One summand `A_{d − |g|}·g` of a free module in bidegree `d`.
#[derive(Clone, Copy, Debug)]
struct Block {
    generator: usize,
    coeff_degree: BiDegree,
    offset: usize,
    dim: usize,
}

impl FreeModule {
    /// Internal bidegrees `(t, w)` of the generators.
    pub fn generators(&self) -> &[BiDegree] {
        &self.generators
    }

    fn layout(&self, alg: &MilnorAlgebra, d: BiDegree) -> Result<(Vec<Block>, usize)> {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (g, &gd) in self.generators.iter().enumerate() {
            let e = d - gd;
            if e.stem < 0 || e.weight < 0 || e.chow() < 0 {
                continue;
            }
            let dim = alg.dim(e)?;
            if dim > 0 {
                blocks.push(Block {
                    generator: g,
                    coeff_degree: e,
                    offset,
                    dim,
                });
                offset += dim;
            }
        }
        Ok((blocks, offset))
    }

    pub fn dim(&self, alg: &MilnorAlgebra, d: BiDegree) -> Result<usize> {
        Ok(self.layout(alg, d)?.1)
    }
}

/// A map out of a free module: the image of each generator as a sum of
/// `coefficient · target generator`.
#[derive(Clone, Debug, Default)]
pub struct ModuleMap {
    images: Vec<Vec<(usize, SteenrodElement)>>,
}

impl ModuleMap {
    pub fn image(&self, generator: usize) -> &[(usize, SteenrodElement)] {
        &self.images[generator]
    }
}

/// A minimal free resolution `⋯ → F_1 → F_0 → M`, computed in stems
/// `≤ max_stem` and filtrations `≤ max_filt`.
pub struct Resolution {
    module: Arc<dyn GradedModule>,
    config: ResolutionConfig,
    free: Vec<FreeModule>,
    /// `ε(g)` for the generators of `F_0`, as elements of `M`.
    augmentation: Vec<BitVector>,
    /// `maps[s]` is `d_s : F_s → F_{s−1}` for `s ≥ 1`; `maps[0]` is unused.
    maps: Vec<ModuleMap>,
    chart: ExtChart,
}

struct NewGenerators {
    weight: i32,
    vectors: Vec<BitVector>,
    layout: Vec<Block>,
}

impl Resolution {
    fn alg(&self) -> &MilnorAlgebra {
        self.module.algebra()
    }

    pub fn module(&self) -> &Arc<dyn GradedModule> {
        &self.module
    }

    pub fn config(&self) -> &ResolutionConfig {
        &self.config
    }

    pub fn chart(&self) -> &ExtChart {
        &self.chart
    }

    pub fn free_module(&self, s: usize) -> &FreeModule {
        &self.free[s]
    }

    pub fn differential(&self, s: usize) -> Option<&ModuleMap> {
        (s >= 1).then(|| &self.maps[s])
    }

    pub fn augmentation(&self, generator: usize) -> &BitVector {
        &self.augmentation[generator]
    }

    /// Dimension of `F_s` at `d`; level `−1` is the module itself.
    fn level_dim(&self, s: i32, d: BiDegree) -> Result<usize> {
        if s < 0 {
            self.module.dim(d)
        } else {
            self.free[s as usize].dim(self.alg(), d)
        }
    }

    /// Images of the basis of `F_s` at `d` under `d_s` (or `ε` for `s = 0`).
    fn map_rows(&self, s: usize, d: BiDegree) -> Result<Vec<BitVector>> {
        let alg = self.alg();
        let (blocks, _) = self.free[s].layout(alg, d)?;
        let target_dim = self.level_dim(s as i32 - 1, d)?;
        let target_layout = if s >= 1 {
            Some(self.free[s - 1].layout(alg, d)?.0)
        } else {
            None
        };
        let mut rows = Vec::new();
        for b in &blocks {
            let gd = self.free[s].generators[b.generator];
            for k in 0..b.dim {
                let row = match &target_layout {
                    None => self.module.act_basis(
                        b.coeff_degree,
                        k,
                        gd,
                        &self.augmentation[b.generator],
                    )?,
                    Some(tl) => {
                        let mut row = BitVector::zeros(target_dim);
                        for (h, c) in &self.maps[s].images[b.generator] {
                            // absent when A is zero in the coefficient bidegree
                            let Some(tb) = tl.iter().find(|t| t.generator == *h) else {
                                continue;
                            };
                            let mut part = BitVector::zeros(tb.dim);
                            alg.add_basis_times(b.coeff_degree, k, c, &mut part)?;
                            row.add_at(tb.offset, &part);
                        }
                        row
                    }
                };
                rows.push(row);
            }
        }
        Ok(rows)
    }

    /// `ker(F_{s−1} → F_{s−2})` at `d`, or all of `M` when `s = 0`.
    fn cycles(&self, s: usize, d: BiDegree) -> Result<Subspace> {
        if s == 0 {
            return Ok(Subspace::full(self.module.dim(d)?));
        }
        let rows = self.map_rows(s - 1, d)?;
        let target = self.level_dim(s as i32 - 2, d)?;
        Ok(image_and_kernel(rows.len(), target, &rows).1)
    }

    fn boundaries(&self, s: usize, d: BiDegree) -> Result<Subspace> {
        let rows = self.map_rows(s, d)?;
        let target = self.level_dim(s as i32 - 1, d)?;
        Ok(image_and_kernel(rows.len(), target, &rows).0)
    }

    fn candidate_weights(&self, s: usize, t: i32) -> Result<Vec<i32>> {
        if s == 0 {
            return self.module.weights(t);
        }
        let mut ws = BTreeSet::new();
        for g in &self.free[s - 1].generators {
            if g.stem <= t {
                ws.extend(g.weight..=g.weight + (t - g.stem) / 2);
            }
        }
        let mut out = Vec::new();
        for w in ws {
            if self.level_dim(s as i32 - 1, BiDegree::new(t, w))? > 0 {
                out.push(w);
            }
        }
        Ok(out)
    }

    fn new_generators(&self, s: usize, d: BiDegree) -> Result<NewGenerators> {
        let z = self.cycles(s, d)?;
        let b = self.boundaries(s, d)?;
        if let Some(v) = b.basis().iter().find(|v| !z.contains(v)) {
            return Err(Error::invariant(
                "d∘d = 0",
                format!("boundary {v} at filtration {s}, bidegree {d} is not a cycle"),
            ));
        }
        let mut span = b;
        let mut vectors = Vec::new();
        for v in z.basis() {
            if !span.contains(v) {
                vectors.push(v.clone());
                span = span.sum(&Subspace::from_spanning(v.len(), vec![v.clone()]));
            }
        }
        let layout = if s >= 1 {
            self.free[s - 1].layout(self.alg(), d)?.0
        } else {
            Vec::new()
        };
        Ok(NewGenerators {
            weight: d.weight,
            vectors,
            layout,
        })
    }

    fn append(&mut self, s: usize, t: i32, found: NewGenerators) {
        let d = BiDegree::new(t, found.weight);
        for v in found.vectors {
            self.free[s].generators.push(d);
            if s == 0 {
                self.augmentation.push(v);
            } else {
                let mut image = Vec::new();
                for b in &found.layout {
                    let part = v.slice(b.offset, b.dim);
                    if !part.is_zero() {
                        image.push((b.generator, SteenrodElement::new(b.coeff_degree, part)));
                    }
                }
                self.maps[s].images.push(image);
            }
            self.chart.add(s as i32, t - s as i32, found.weight, 1);
        }
    }

    fn run(&mut self) -> Result<()> {
        let cfg = self.config.clone();
        for n in 0..=cfg.max_stem {
            for s in 0..=cfg.max_filt as usize {
                let t = n + s as i32;
                let weights = self.candidate_weights(s, t)?;
                let this = &*self;
                let found: Vec<NewGenerators> = weights
                    .par_iter()
                    .map(|&w| this.new_generators(s, BiDegree::new(t, w)))
                    .collect::<Result<_>>()?;
                if found
                    .iter()
                    .any(|f| f.vectors.len() > cfg.max_gens_per_bidegree)
                {
                    let mut partial = self.chart.restricted(n - 1, Some(cfg.max_filt));
                    partial.partial = true;
                    return Err(Error::ResourceBound {
                        completed_stem: n - 1,
                        stopped_at: n,
                        partial: Box::new(partial),
                    });
                }
                for f in found {
                    self.append(s, t, f);
                }
            }
        }
        Ok(())
    }

    /// Checks `d∘d = 0`, exactness `rank d_s + rank d_{s+1} = dim F_s` (with
    /// `d_0 = ε`, and `ε` onto), and minimality, at every bidegree where all
    /// three terms are complete.
    pub fn verify(&self) -> Result<()> {
        let alg = self.alg();
        for (s, map) in self.maps.iter().enumerate().skip(1) {
            for (g, image) in map.images.iter().enumerate() {
                if image.is_empty() {
                    return Err(Error::invariant(
                        "minimality",
                        format!("generator {g} of F_{s} has zero image"),
                    ));
                }
                if let Some((h, _)) = image.iter().find(|(_, c)| c.degree == BiDegree::ZERO) {
                    return Err(Error::invariant(
                        "minimality",
                        format!("d(g{g}) in F_{s} has a unit coefficient on g{h}"),
                    ));
                }
            }
        }
        for n in 0..=self.config.max_stem {
            for w in self.module.weights(n)? {
                let d = BiDegree::new(n, w);
                let rows = self.map_rows(0, d)?;
                let (im, _) = image_and_kernel(rows.len(), self.module.dim(d)?, &rows);
                if im.dim() != self.module.dim(d)? {
                    return Err(Error::invariant(
                        "augmentation onto",
                        format!("ε misses part of the module at {d}"),
                    ));
                }
            }
            for s in 0..self.config.max_filt as usize {
                let t = n + s as i32;
                for w in self.candidate_weights(s + 1, t)? {
                    let d = BiDegree::new(t, w);
                    let dim = self.free[s].dim(alg, d)?;
                    let low = self.map_rows(s, d)?;
                    let (_, z) =
                        image_and_kernel(low.len(), self.level_dim(s as i32 - 1, d)?, &low);
                    let high = self.map_rows(s + 1, d)?;
                    let (b, _) = image_and_kernel(high.len(), dim, &high);
                    if !b.is_subspace_of(&z) {
                        return Err(Error::invariant(
                            "d∘d = 0",
                            format!("filtration {}, bidegree {d}", s + 1),
                        ));
                    }
                    if (dim - z.dim()) + b.dim() != dim {
                        return Err(Error::invariant(
                            "exactness",
                            format!(
                                "filtration {s}, bidegree {d}: rank d_s = {}, rank d_s+1 = {}, dim F_s = {dim}",
                                dim - z.dim(),
                                b.dim()
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Resolves `M` through `config.max_stem` and `config.max_filt`.
///
/// Bidegrees are processed by increasing stem, then filtration; the
/// weights of one `(stem, s)` are independent and are computed in parallel,
/// then appended in weight order.
pub fn minimal_resolution(
    module: Arc<dyn GradedModule>,
    config: ResolutionConfig,
) -> Result<Resolution> {
    if config.max_stem < 0 || config.max_filt < 0 {
        return Err(Error::Contract(
            "resolution windows must be non-negative".into(),
        ));
    }
    if module.algebra().max_stem() < config.algebra_window() {
        return Err(Error::Contract(format!(
            "algebra window {} is below the {} needed for stems ≤ {}",
            module.algebra().max_stem(),
            config.algebra_window(),
            config.max_stem
        )));
    }
    if module.max_stem() < config.module_window() {
        return Err(Error::Contract(format!(
            "module window {} is below the {} needed for stems ≤ {}",
            module.max_stem(),
            config.module_window(),
            config.max_stem
        )));
    }
    if module.min_stem() < 0 {
        return Err(Error::Contract(
            "module must be concentrated in stems ≥ 0".into(),
        ));
    }
    let levels = config.max_filt as usize + 1;
    let chart = ExtChart::new(module.name(), config.max_stem).with_max_filt(config.max_filt);
    let mut res = Resolution {
        module,
        free: (0..levels)
            .map(|s| FreeModule {
                filtration: s as i32,
                generators: Vec::new(),
            })
            .collect(),
        augmentation: Vec::new(),
        maps: vec![ModuleMap::default(); levels],
        chart,
        config: config.clone(),
    };
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Contract(format!("thread pool: {e}")))?;
            pool.install(|| res.run())?;
        }
        None => res.run()?,
    }
    Ok(res)
}

/// `Ext_{E(T)}(F2, F2) = F2[w_{t−1} : t ∈ T]`, with `|w_{t−1}| = |P_t| − (1,0)`
/// in filtration 1.
pub fn koszul_chart(ts: &[u32], max_stem: i32) -> Result<ExtChart> {
    let mut sorted = ts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ts.len() || sorted.contains(&0) {
        return Err(Error::Contract(format!(
            "Koszul chart needs distinct indices t ≥ 1, got {ts:?}"
        )));
    }
    let gens: Vec<BiDegree> = sorted
        .iter()
        .map(|&t| p_degree(t) - BiDegree::new(1, 0))
        .collect();
    let names: Vec<String> = sorted.iter().map(|t| format!("P_{t}")).collect();
    polynomial_chart(&format!("Ext_E({})", names.join(",")), &gens, max_stem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{FreeAlgebraModule, TrivialModule};

    #[test]
    fn koszul_examples() {
        let c = koszul_chart(&[1], 6).unwrap();
        for s in 0..=6 {
            assert_eq!(c.mult(s, s, s), 1);
        }
        assert_eq!(c.total_mult(), 7);
        let c = koszul_chart(&[2], 10).unwrap();
        assert_eq!(c.mult(2, 10, 6), 1);
        let c = koszul_chart(&[1, 2], 10).unwrap();
        assert_eq!(c.classes().filter(|(k, _)| k.s == 2).count(), 3);
    }

    #[test]
    fn free_module_has_trivial_ext() {
        let alg = Arc::new(MilnorAlgebra::new(10));
        let a = Arc::new(FreeAlgebraModule::new(alg, 9).unwrap());
        let r = minimal_resolution(a, ResolutionConfig::new(8, 4)).unwrap();
        let classes: Vec<_> = r.chart().classes().collect();
        assert_eq!(classes, vec![(ChartKey::new(0, 0, 0), 1)]);
        r.verify().unwrap();
    }

    #[test]
    fn sphere_low_stems() {
        let alg = Arc::new(MilnorAlgebra::new(10));
        let f2 = Arc::new(TrivialModule::new(alg, 9));
        let r = minimal_resolution(f2, ResolutionConfig::new(8, 4)).unwrap();
        assert_eq!(r.chart().mult(0, 0, 0), 1);
        let ext1: Vec<(i32, i32)> = r
            .chart()
            .classes()
            .filter(|(k, _)| k.s == 1)
            .map(|(k, _)| (k.stem + 1, k.weight))
            .collect();
        assert_eq!(ext1, vec![(1, 0), (2, 1), (4, 2), (8, 4)]);
        r.verify().unwrap();
    }

    #[test]
    fn resource_bound_is_partial() {
        let alg = Arc::new(MilnorAlgebra::new(10));
        let f2 = Arc::new(TrivialModule::new(alg, 9));
        let mut cfg = ResolutionConfig::new(8, 8);
        cfg.max_gens_per_bidegree = 0;
        match minimal_resolution(f2, cfg) {
            Err(Error::ResourceBound {
                completed_stem,
                partial,
                ..
            }) => {
                assert_eq!(completed_stem, -1);
                assert!(partial.partial);
            }
            other => panic!("unexpected {:?}", other.map(|_| ())),
        }
    }
}
