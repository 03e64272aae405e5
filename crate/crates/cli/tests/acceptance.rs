//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact.

use std::fs;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use ctau_core::milnor::{classical_product, p_degree, w_degree, BiDegree, MilnorAlgebra};
use ctau_core::modules::{margolis, FreeAlgebraModule};
use ctau_core::resolution::{compare_charts, koszul_chart, polynomial_chart, ExtChart};
use ctau_core::towers::{
    k_invariant_check, kw_chow_check, smash_chow_check, wbp_complex_check, wbp_differential_check,
};
use ctau_core::verify::{hopf_suite, kw_window, resolve_named};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn hopf() -> Outcome {
    let reports = hopf_suite(24).map_err(|e| e.to_string())?;
    let failed: Vec<_> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.check.clone())
        .collect();
    check(
        failed.is_empty(),
        format!(
            "{} checks through stem 24, failed: {failed:?}",
            reports.len()
        ),
    )
}

fn pst_degree(s: u32, t: u32) -> BiDegree {
    (1 << s) * p_degree(t)
}

fn exteriority() -> Outcome {
    let alg = MilnorAlgebra::new(24);
    let mut bad = Vec::new();
    let mut count = 0;
    for t in 1..=4 {
        for s in 0..=4 {
            if 2 * pst_degree(s, t).stem > 24 {
                continue;
            }
            let p = alg.pst(s, t).map_err(|e| e.to_string())?;
            let zero = alg.multiply(&p, &p).map_err(|e| e.to_string())?.is_zero();
            count += 1;
            if zero != (s < t) {
                bad.push((s, t));
            }
        }
    }
    check(
        bad.is_empty() && count > 0,
        format!("{count} pairs (s,t), mismatches {bad:?}"),
    )
}

fn commutativity() -> Outcome {
    let alg = MilnorAlgebra::new(30);
    let mut bad = Vec::new();
    let mut count = 0;
    for s in 1..=4 {
        for t in s + 1..=4 {
            if (p_degree(s) + p_degree(t)).stem > 30 {
                continue;
            }
            let (ps, pt) = (alg.p(s).unwrap(), alg.p(t).unwrap());
            count += 1;
            if alg.multiply(&ps, &pt).unwrap() != alg.multiply(&pt, &ps).unwrap() {
                bad.push((s, t));
            }
        }
    }
    check(
        bad.is_empty() && count > 0,
        format!("{count} pairs, non-commuting {bad:?}"),
    )
}

fn margolis_exactness() -> Outcome {
    let alg = Arc::new(MilnorAlgebra::new(30));
    let a = FreeAlgebraModule::new(alg, 30).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for t in 1..=3 {
        let r = margolis(&a, t, 30, p_degree(t).stem).map_err(|e| e.to_string())?;
        if r.safe_max_stem != 30 - p_degree(t).stem || !r.is_exact() {
            return Err(format!(
                "t={t}: safe window {}, nonzero {:?}",
                r.safe_max_stem,
                r.nonzero().collect::<Vec<_>>()
            ));
        }
        notes.push(format!("t={t} exact through stem {}", r.safe_max_stem));
    }
    Ok(notes.join(", "))
}

fn kw_ext() -> Outcome {
    let mut notes = Vec::new();
    for (n, max_stem) in [(0u32, 24), (1, 24), (2, 28)] {
        let got =
            resolve_named(&format!("kw:{n}"), max_stem, max_stem).map_err(|e| e.to_string())?;
        let want = koszul_chart(&[n + 1], max_stem).map_err(|e| e.to_string())?;
        if !compare_charts(&got, &want, max_stem).is_empty() {
            return Err(format!("kw:{n} differs from the Koszul chart"));
        }
        let stem = (1 << (n + 2)) - 3;
        let weight = (1 << (n + 1)) - 1;
        let mut explicit = ExtChart::new("explicit", max_stem);
        for s in 0..=max_stem / stem {
            explicit.add(s, s * stem, s * weight, 1);
        }
        let got_classes: Vec<_> = got.classes().collect();
        let want_classes: Vec<_> = explicit.classes().collect();
        if got_classes != want_classes {
            return Err(format!("kw:{n} classes are not (s, {stem}s, {weight}s)"));
        }
        notes.push(format!("kw:{n} {} classes", got.len()));
    }
    Ok(notes.join(", "))
}

fn wbp_ext() -> Outcome {
    let got = resolve_named("wbp", 20, 20).map_err(|e| e.to_string())?;
    let gens: Vec<BiDegree> = (0..=2).map(w_degree).collect();
    let want = polynomial_chart("F2[w0,w1,w2]", &gens, 20).map_err(|e| e.to_string())?;
    let diff = compare_charts(&got, &want, 20);
    check(
        diff.is_empty(),
        format!(
            "{} classes, {} mismatches",
            got.len(),
            diff.mismatches.len()
        ),
    )
}

fn kw_towers() -> Outcome {
    let alg = Arc::new(MilnorAlgebra::new(kw_window(2)));
    let mut runs = 0;
    for n in 0..=2 {
        for m in 0..=4 {
            let r = kw_chow_check(alg.clone(), n, m, kw_window(n)).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("kw_chow n={n} m={m}: {}", r.to_json()));
            }
            runs += 1;
            if m >= 1 {
                let o = k_invariant_check(alg.clone(), n, m, kw_window(n))
                    .map_err(|e| e.to_string())?;
                let vanish = o
                    .existence
                    .iter()
                    .chain([&o.uniqueness])
                    .all(|(_, h)| *h == 0);
                if !(o.square_zero && vanish && o.passed()) {
                    return Err(format!(
                        "k-invariant n={n} m={m}: {}",
                        o.to_report().to_json()
                    ));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} checks for n ≤ 2, m ≤ 4"))
}

fn wbp_complex() -> Outcome {
    let alg = Arc::new(MilnorAlgebra::new(24));
    let r = wbp_complex_check(alg, 3, 24, None).map_err(|e| e.to_string())?;
    check(
        r.passed(),
        format!("i ≤ 3 through stem 24, {} witnesses", r.witnesses.len()),
    )
}

fn conjugation() -> Outcome {
    let alg = Arc::new(MilnorAlgebra::new(32));
    let r = wbp_differential_check(alg, 3, 32).map_err(|e| e.to_string())?;
    let js: Vec<u64> = r
        .witnesses
        .iter()
        .filter_map(|w| w.get("j")?.as_u64())
        .collect();
    check(r.passed(), format!("window 32, j in {js:?}"))
}

fn classical_oracle() -> Outcome {
    let alg = MilnorAlgebra::new(24);
    let free: Vec<_> = alg
        .nonzero_bidegrees()
        .flat_map(|d| alg.dual_basis(d).unwrap().to_vec())
        .filter(|m| m.is_tau_free() && !m.is_one())
        .map(|m| alg.milnor_element(&m).unwrap())
        .collect();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut pairs = 0;
    while pairs < 150 {
        let a = free.choose(&mut rng).unwrap();
        let b = free.choose(&mut rng).unwrap();
        if a.degree.stem + b.degree.stem > 24 {
            continue;
        }
        let lhs = alg.to_classical(&alg.multiply(a, b).unwrap()).unwrap();
        let rhs = classical_product(&alg.to_classical(a).unwrap(), &alg.to_classical(b).unwrap());
        if lhs != rhs {
            return Err(format!("{} · {} differs", a.degree, b.degree));
        }
        pairs += 1;
    }
    Ok(format!("{pairs} random τ-free pairs"))
}

fn smash() -> Outcome {
    let alg = Arc::new(MilnorAlgebra::new(20));
    for n in 0..=1 {
        for power in 2..=3 {
            let r = smash_chow_check(alg.clone(), Some(n), power, 20).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(r.to_json());
            }
        }
    }
    Ok("squares and cubes for n ≤ 1 through stem 20".into())
}

fn ctau(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_ctau"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn cli_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let json = path("sphere.json");
    let out = ctau(&[
        "resolve",
        "--module",
        "sphere",
        "--max-stem",
        "12",
        "--max-filt",
        "6",
        "--out",
        &json,
    ])?;
    if !out.status.success() {
        return Err("resolve failed".into());
    }
    let text = fs::read_to_string(&json).map_err(|e| e.to_string())?;
    let chart = ExtChart::from_json(&text).map_err(|e| e.to_string())?;
    if chart.to_json() != text {
        return Err("chart JSON does not round-trip".into());
    }
    let mut renders = Vec::new();
    for run in 0..2 {
        let (svg, tsv) = (path(&format!("a{run}.svg")), path(&format!("a{run}.tsv")));
        for (flag, file) in [("--svg", &svg), ("--tsv", &tsv)] {
            if !ctau(&["chart", "--in", &json, flag, file])?
                .status
                .success()
            {
                return Err(format!("chart {flag} failed"));
            }
        }
        renders.push((fs::read(&svg).unwrap(), fs::read(&tsv).unwrap()));
    }
    if renders[0] != renders[1] {
        return Err("SVG/TSV bytes differ across runs".into());
    }
    let verify = ctau(&["verify", "--suite", "all"])?;
    check(
        verify.status.success(),
        format!(
            "round-trip, deterministic renders, verify exit {:?}",
            verify.status.code()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Hopf axioms through stem 24", hopf),
        ("P^s_t exteriority table", exteriority),
        ("P_t commutativity through stem 30", commutativity),
        ("Margolis exactness for t = 1, 2, 3", margolis_exactness),
        ("kw_n Ext equals the Koszul chart", kw_ext),
        ("wBP Ext equals F2[w0,w1,w2] through stem 20", wbp_ext),
        ("kw tower Chow and k-invariant checks", kw_towers),
        ("wBP complex through stem 24", wbp_complex),
        ("conjugation identities at window 32", conjugation),
        ("classical Milnor product oracle", classical_oracle),
        ("smash-power Chow bounds", smash),
        ("CLI contract", cli_contract),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}; {secs:.2}s)", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({detail}; {secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
