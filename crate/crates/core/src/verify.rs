//! Named verification suites. Each suite builds its own windows and returns
//! one report per check.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::BitVector;
use crate::milnor::{
    classical_product, p_degree, w_degree, BiDegree, DualElement, DualMonomial, MilnorAlgebra,
    SteenrodElement,
};
use crate::modules::{
    margolis, module_by_name, ExteriorProfile, FreeAlgebraModule, GradedModule, QuotientModule,
};
use crate::resolution::{
    compare_charts, koszul_chart, minimal_resolution, polynomial_chart, ExtChart, ResolutionConfig,
};
use crate::towers::{
    k_invariant_check, kw_chow_check, laurent_chart, smash_chow_check, wbp_complex_check,
    wbp_differential_check, VerificationReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hopf,
    Pst,
    Margolis,
    Kw,
    Wbp,
    Charts,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Hopf,
        Suite::Pst,
        Suite::Margolis,
        Suite::Kw,
        Suite::Wbp,
        Suite::Charts,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Hopf => "hopf",
            Suite::Pst => "pst",
            Suite::Margolis => "margolis",
            Suite::Kw => "kw",
            Suite::Wbp => "wbp",
            Suite::Charts => "charts",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "hopf" => Suite::Hopf,
            "pst" => Suite::Pst,
            "margolis" => Suite::Margolis,
            "kw" => Suite::Kw,
            "wbp" => Suite::Wbp,
            "charts" => Suite::Charts,
            "all" => Suite::All,
            _ => return Err(Error::Contract(format!("unknown suite `{s}`"))),
        })
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Hopf => hopf_suite(24),
        Suite::Pst => pst_suite(),
        Suite::Margolis => margolis_suite(),
        Suite::Kw => kw_suite(),
        Suite::Wbp => wbp_suite(),
        Suite::Charts => charts_suite(),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(s)?);
            }
            Ok(out)
        }
    }
}

/// `|P^s_t| = 2^s·|ξ_t|`.
fn pst_degree(s: u32, t: u32) -> BiDegree {
    (1 << s) * p_degree(t)
}

fn monomials(alg: &MilnorAlgebra, max_stem: i32) -> Vec<DualMonomial> {
    alg.nonzero_bidegrees()
        .filter(|d| d.stem <= max_stem)
        .flat_map(|d| alg.dual_basis(d).unwrap().to_vec())
        .collect()
}

fn toggle<T: Ord>(set: &mut BTreeSet<T>, x: T) {
    if !set.remove(&x) {
        set.insert(x);
    }
}

fn dual_of(alg: &MilnorAlgebra, m: &DualMonomial) -> Result<DualElement> {
    let d = m.degree();
    Ok(DualElement::basis(d, alg.dim(d)?, alg.index_of(m)?))
}

fn steenrod_basis(alg: &MilnorAlgebra, d: BiDegree, i: usize) -> Result<SteenrodElement> {
    Ok(SteenrodElement::basis(d, alg.dim(d)?, i))
}

/// Hopf algebra axioms on the dual through `max_stem`, duality of the
/// product with the dual coproduct, and conjugation as an involutive
/// anti-automorphism.
pub fn hopf_suite(max_stem: i32) -> Result<Vec<VerificationReport>> {
    let alg = MilnorAlgebra::new(max_stem);
    let ms = monomials(&alg, max_stem);
    let degrees: Vec<BiDegree> = alg
        .nonzero_bidegrees()
        .filter(|d| d.stem <= max_stem)
        .collect();

    let mut coassoc = VerificationReport::new("coassociativity").param("max_stem", max_stem);
    let mut counit = VerificationReport::new("counit").param("max_stem", max_stem);
    let mut antipode = VerificationReport::new("antipode_axiom").param("max_stem", max_stem);
    for m in &ms {
        let delta = alg.coproduct(m);
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for (a, b) in &delta {
            for (a1, a2) in alg.coproduct(a) {
                toggle(&mut left, (a1, a2, b.clone()));
            }
            for (b1, b2) in alg.coproduct(b) {
                toggle(&mut right, (a.clone(), b1, b2));
            }
        }
        coassoc.require(left == right, || json!({"monomial": m.to_string()}));

        let mut l = BTreeSet::new();
        let mut r = BTreeSet::new();
        for (a, b) in &delta {
            if MilnorAlgebra::counit(a) {
                toggle(&mut l, b.clone());
            }
            if MilnorAlgebra::counit(b) {
                toggle(&mut r, a.clone());
            }
        }
        let only_m: BTreeSet<_> = [m.clone()].into();
        counit.require(
            l == only_m && r == only_m,
            || json!({"monomial": m.to_string()}),
        );

        let d = m.degree();
        let mut sl = DualElement::zero(d, alg.dim(d)?);
        let mut sr = sl.clone();
        for (a, b) in &delta {
            sl = sl.add(&alg.dual_product(&alg.antipode_monomial(a)?, &dual_of(&alg, b)?)?)?;
            sr = sr.add(&alg.dual_product(&dual_of(&alg, a)?, &alg.antipode_monomial(b)?)?)?;
        }
        let expected = if m.is_one() {
            alg.dual_unit()
        } else {
            DualElement::zero(d, alg.dim(d)?)
        };
        antipode.require(sl == expected && sr == expected, || {
            json!({"monomial": m.to_string(), "side": if sl != expected { "S(m')m''" } else { "m'S(m'')" }})
        });
    }

    // Σ c(a')a'' = ε(a) = Σ a'c(a'') on the algebra side
    let mut antipode_a =
        VerificationReport::new("antipode_axiom_algebra").param("max_stem", max_stem);
    let mut duality =
        VerificationReport::new("product_coproduct_duality").param("max_stem", max_stem);
    for &d in &degrees {
        for k in 0..alg.dim(d)? {
            let mut sl = alg.zero(d)?;
            let mut sr = alg.zero(d)?;
            for (ld, li, rd, ri) in alg.coproduct_basis(d, k)? {
                let a1 = steenrod_basis(&alg, ld, li)?;
                let a2 = steenrod_basis(&alg, rd, ri)?;
                sl = sl.add(&alg.multiply(&alg.conjugate(&a1)?, &a2)?)?;
                sr = sr.add(&alg.multiply(&a1, &alg.conjugate(&a2)?)?)?;
            }
            let expected = if d == BiDegree::ZERO {
                alg.unit()
            } else {
                alg.zero(d)?
            };
            antipode_a.require(
                sl == expected && sr == expected,
                || json!({"bidegree": d.to_string(), "index": k}),
            );
        }
    }
    // ⟨a·b, m⟩ = Σ ⟨a, m'⟩⟨b, m''⟩ against the coproduct of m
    for &da in &degrees {
        for &db in &degrees {
            let d = da + db;
            if d.stem > max_stem || alg.dim(d)? == 0 {
                continue;
            }
            for i in 0..alg.dim(da)? {
                for j in 0..alg.dim(db)? {
                    let prod = alg.multiply_basis(da, i, db, j)?;
                    let mut want = BitVector::zeros(alg.dim(d)?);
                    for (k, m) in alg.dual_basis(d)?.iter().enumerate() {
                        let hits = alg
                            .coproduct(m)
                            .iter()
                            .filter(|(x, y)| {
                                x.degree() == da
                                    && y.degree() == db
                                    && alg.index_of(x).ok() == Some(i)
                                    && alg.index_of(y).ok() == Some(j)
                            })
                            .count();
                        if hits % 2 == 1 {
                            want.flip(k);
                        }
                    }
                    duality.require(
                        prod == want,
                        || json!({"left": format!("{da}#{i}"), "right": format!("{db}#{j}")}),
                    );
                }
            }
        }
    }

    let mut conj = VerificationReport::new("conjugation").param("max_stem", max_stem);
    for &da in &degrees {
        for i in 0..alg.dim(da)? {
            let a = steenrod_basis(&alg, da, i)?;
            let ca = alg.conjugate(&a)?;
            conj.require(
                alg.conjugate(&ca)? == a,
                || json!({"involution": format!("{da}#{i}")}),
            );
            for &db in &degrees {
                if (da + db).stem > max_stem {
                    continue;
                }
                for j in 0..alg.dim(db)? {
                    let b = steenrod_basis(&alg, db, j)?;
                    let lhs = alg.conjugate(&alg.multiply(&a, &b)?)?;
                    let rhs = alg.multiply(&alg.conjugate(&b)?, &ca)?;
                    conj.require(
                        lhs == rhs,
                        || json!({"anti_automorphism": [format!("{da}#{i}"), format!("{db}#{j}")]}),
                    );
                }
            }
        }
    }
    let mut out = vec![coassoc, counit, antipode, antipode_a, duality, conj];
    for r in &mut out {
        r.note(json!({"monomials": ms.len()}));
    }
    Ok(out)
}

/// Exteriority of `P^s_t` through stem 24, commutativity of the `P_t`
/// through stem 30, and agreement with the classical Milnor product on every
/// pair of τ-free basis elements with total stem ≤ 24.
pub fn pst_suite() -> Result<Vec<VerificationReport>> {
    let alg = MilnorAlgebra::new(30);
    let mut ext = VerificationReport::new("pst_exteriority").param("max_stem", 24);
    for t in 1.. {
        if 2 * pst_degree(0, t).stem > 24 {
            break;
        }
        for s in 0.. {
            if 2 * pst_degree(s, t).stem > 24 {
                break;
            }
            let p = alg.pst(s, t)?;
            let square_zero = alg.multiply(&p, &p)?.is_zero();
            ext.note(json!({"s": s, "t": t, "square_zero": square_zero}));
            ext.require(
                square_zero == (s < t),
                || json!({"failure": "exteriority", "s": s, "t": t}),
            );
        }
    }

    let mut comm = VerificationReport::new("p_commutativity").param("max_stem", 30);
    for s in 1.. {
        if p_degree(s).stem * 2 > 30 {
            break;
        }
        for t in s + 1.. {
            if (p_degree(s) + p_degree(t)).stem > 30 {
                break;
            }
            let (ps, pt) = (alg.p(s)?, alg.p(t)?);
            let ok = alg.multiply(&ps, &pt)? == alg.multiply(&pt, &ps)?;
            comm.require(ok, || json!({"s": s, "t": t}));
            comm.note(json!({"pair": [s, t]}));
        }
    }

    Ok(vec![ext, comm, classical_oracle(&alg, 24)?])
}

/// `to_classical(a·b) = to_classical(a)·to_classical(b)` for all τ-free basis
/// pairs with `|a|.stem + |b|.stem ≤ max_stem`.
pub fn classical_oracle(alg: &MilnorAlgebra, max_stem: i32) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("classical_oracle").param("max_stem", max_stem);
    let free: Vec<SteenrodElement> = monomials(alg, max_stem)
        .into_iter()
        .filter(|m| m.is_tau_free() && !m.is_one())
        .map(|m| alg.milnor_element(&m))
        .collect::<Result<_>>()?;
    let mut pairs = 0usize;
    for a in &free {
        for b in &free {
            if a.degree.stem + b.degree.stem > max_stem {
                continue;
            }
            pairs += 1;
            let lhs = alg.to_classical(&alg.multiply(a, b)?)?;
            let rhs = classical_product(&alg.to_classical(a)?, &alg.to_classical(b)?);
            rep.require(lhs == rhs, || json!({"left": a.degree.to_string(), "right": b.degree.to_string(),
                                               "motivic": lhs.to_string(), "classical": rhs.to_string()}));
        }
    }
    rep.note(json!({"pairs": pairs}));
    Ok(rep)
}

/// Margolis exactness of `P_1, P_2, P_3` on `A` through stem 30, freeness of
/// `A` over `E(P_1, P_2)`, and the quotient action being well defined.
pub fn margolis_suite() -> Result<Vec<VerificationReport>> {
    let window = 30;
    let alg = Arc::new(MilnorAlgebra::new(window));
    let a = FreeAlgebraModule::new(alg.clone(), window)?;
    let mut out = Vec::new();
    for t in 1..=3 {
        let report = margolis(&a, t, window, p_degree(t).stem)?;
        let mut rep = VerificationReport::new("margolis_exactness")
            .param("t", t)
            .param("safe_max_stem", report.safe_max_stem);
        for (d, h) in report.nonzero() {
            rep.fail(json!({"bidegree": d.to_string(), "dim": h}));
        }
        rep.note(json!({"bidegrees": report.homology.len()}));
        out.push(rep);
    }

    // A ≅ A//E(P_1,P_2) ⊗ E(P_1,P_2) as graded vector spaces
    let q = QuotientModule::new(alg.clone(), ExteriorProfile::finite(&[1, 2])?, window)?;
    let e = [
        BiDegree::ZERO,
        p_degree(1),
        p_degree(2),
        p_degree(1) + p_degree(2),
    ];
    let mut mm = VerificationReport::new("milnor_moore").param("T", json!([1, 2]));
    for d in alg
        .nonzero_bidegrees()
        .filter(|d| d.stem <= window)
        .collect::<Vec<_>>()
    {
        let mut expected = 0;
        for &x in &e {
            let c = d - x;
            if c.stem >= 0 && c.weight >= 0 {
                expected += q.dim(c)?;
            }
        }
        let got = alg.dim(d)?;
        mm.require(
            got == expected,
            || json!({"bidegree": d.to_string(), "A": got, "product": expected}),
        );
    }

    // x·(relation) stays a relation, so the quotient action is independent of lifts
    let mut wd = VerificationReport::new("quotient_well_defined").param("window", 20);
    for d in alg
        .nonzero_bidegrees()
        .filter(|d| d.stem <= 20)
        .collect::<Vec<_>>()
    {
        let rel = q.relations(d)?;
        for op in alg
            .nonzero_bidegrees()
            .filter(|o| o.stem >= 1 && o.stem + d.stem <= 20)
            .collect::<Vec<_>>()
        {
            let target = q.relations(op + d)?;
            for i in 0..alg.dim(op)? {
                for v in rel.basis() {
                    let mut image = BitVector::zeros(alg.dim(op + d)?);
                    alg.add_basis_times(op, i, &SteenrodElement::new(d, v.clone()), &mut image)?;
                    wd.require(
                        target.contains(&image),
                        || json!({"operation": format!("{op}#{i}"), "bidegree": d.to_string()}),
                    );
                }
            }
        }
    }
    out.push(mm);
    out.push(wd);
    Ok(out)
}

/// Window for the `kw_n` tower checks: room for two copies of `|P_{n+1}|`
/// above stem 24.
pub fn kw_window(n: u32) -> i32 {
    24.max(2 * p_degree(n + 1).stem + 2)
}

/// Chow bounds and k-invariant vanishing for `n ≤ 2`, `m ≤ 4`.
pub fn kw_suite() -> Result<Vec<VerificationReport>> {
    let alg = Arc::new(MilnorAlgebra::new(kw_window(2)));
    let mut out = Vec::new();
    for n in 0..=2 {
        let window = kw_window(n);
        for m in 0..=4 {
            out.push(kw_chow_check(alg.clone(), n, m, window)?);
            if m >= 1 {
                out.push(k_invariant_check(alg.clone(), n, m, window)?.to_report());
            }
        }
    }
    Ok(out)
}

/// The `wBP` complex through stem 24, the conjugation identities through
/// stem 32, and Chow bounds on smash powers.
pub fn wbp_suite() -> Result<Vec<VerificationReport>> {
    let alg = Arc::new(MilnorAlgebra::new(32));
    let mut out = vec![wbp_complex_check(alg.clone(), 3, 24, None)?];
    for n in 1..=2 {
        out.push(wbp_complex_check(alg.clone(), 3, 24, Some(n + 1))?);
    }
    out.push(wbp_differential_check(alg.clone(), 3, 32)?);
    for n in 0..=1 {
        for power in 2..=3 {
            out.push(smash_chow_check(alg.clone(), Some(n), power, 20)?);
        }
    }
    out.push(smash_chow_check(alg, None, 2, 20)?);
    Ok(out)
}

/// Resolves the named module through `max_stem` with `max_filt = max_stem`.
pub fn resolve_named(name: &str, max_stem: i32, max_filt: i32) -> Result<ExtChart> {
    let cfg = ResolutionConfig::new(max_stem, max_filt);
    let alg = Arc::new(MilnorAlgebra::new(cfg.algebra_window()));
    let m = module_by_name(alg, name, cfg.module_window())?;
    Ok(minimal_resolution(m, cfg)?.chart().clone())
}

fn chart_report(
    check: &str,
    module: &str,
    got: &ExtChart,
    want: &ExtChart,
    max_stem: i32,
) -> VerificationReport {
    let mut rep = VerificationReport::new(check)
        .param("module", module)
        .param("max_stem", max_stem);
    let diff = compare_charts(got, want, max_stem);
    for m in &diff.mismatches {
        rep.fail(serde_json::to_value(m).expect("mismatch serializes"));
    }
    rep.note(json!({"classes": got.len()}));
    rep
}

/// Ext charts against their change-of-rings predictions, a verified
/// resolution of the sphere, and the Laurent chart of `K(w_n)`.
pub fn charts_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (n, max_stem) in [(0, 24), (1, 24), (2, 28)] {
        let name = format!("kw:{n}");
        let got = resolve_named(&name, max_stem, max_stem)?;
        let want = koszul_chart(&[n + 1], max_stem)?;
        out.push(chart_report("kw_ext", &name, &got, &want, max_stem));
    }
    let gens: Vec<BiDegree> = (0..=2).map(w_degree).collect();
    let got = resolve_named("wbp", 20, 20)?;
    out.push(chart_report(
        "wbp_ext",
        "wbp",
        &got,
        &polynomial_chart("wbp", &gens, 20)?,
        20,
    ));
    for n in 0..=2u32 {
        let name = format!("wbp:{n}");
        let got = resolve_named(&name, 20, 20)?;
        let want = polynomial_chart(&name, &gens[..=n as usize], 20)?;
        out.push(chart_report("wbp_truncated_ext", &name, &got, &want, 20));
    }

    let cfg = ResolutionConfig::new(16, 8);
    let alg = Arc::new(MilnorAlgebra::new(cfg.algebra_window()));
    let sphere = module_by_name(alg, "sphere", cfg.module_window())?;
    let res = minimal_resolution(sphere, cfg)?;
    let mut rep = VerificationReport::new("resolution_exactness")
        .param("module", "sphere")
        .param("max_stem", 16)
        .param("max_filt", 8);
    if let Err(e) = res.verify() {
        rep.fail(json!({"failure": e.to_string()}));
    }
    rep.note(json!({"classes": res.chart().len()}));
    out.push(rep);

    for n in 0..=2 {
        let max_stem = 24;
        let laurent = laurent_chart(n, max_stem);
        let mut rep = VerificationReport::new("laurent_chart")
            .param("n", n)
            .param("max_stem", max_stem);
        let w = w_degree(n);
        let positive = laurent.restricted(max_stem, None);
        let koszul = koszul_chart(&[n + 1], max_stem)?;
        let nonneg: Vec<_> = positive.classes().filter(|(k, _)| k.s >= 0).collect();
        let kz: Vec<_> = koszul.classes().collect();
        rep.require(
            nonneg == kz,
            || json!({"failure": "non-negative part differs from F2[w_n]"}),
        );
        for (k, mult) in laurent.classes() {
            let ok = mult == 1 && k.stem == k.s * w.stem && k.weight == k.s * w.weight;
            rep.require(ok, || json!({"class": k.to_string()}));
        }
        rep.require(
            laurent.mult(0, 0, 0) == 1,
            || json!({"failure": "missing unit"}),
        );
        out.push(rep);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), *s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_hopf_suite() {
        for r in hopf_suite(10).unwrap() {
            assert!(r.passed(), "{}", r.to_json());
        }
    }
}
