use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use ctau_core::linalg::{image_and_kernel, BitVector};
use ctau_core::milnor::{grammar, BiDegree, MilnorAlgebra, SteenrodElement};
use ctau_core::modules::{ExteriorProfile, GradedModule, QuotientModule};
use ctau_core::resolution::ExtChart;

const WINDOW: i32 = 20;

fn alg() -> &'static Arc<MilnorAlgebra> {
    static ALG: OnceLock<Arc<MilnorAlgebra>> = OnceLock::new();
    ALG.get_or_init(|| Arc::new(MilnorAlgebra::new(WINDOW)))
}

fn degrees(max_stem: i32) -> Vec<BiDegree> {
    alg()
        .nonzero_bidegrees()
        .filter(|d| d.stem <= max_stem)
        .collect()
}

/// A nonzero-dimensional bidegree with stem ≤ `max_stem` and a random element in it.
fn element(max_stem: i32) -> impl Strategy<Value = SteenrodElement> {
    let ds = degrees(max_stem);
    (0..ds.len(), any::<u64>()).prop_map(move |(k, bits)| {
        let d = ds[k];
        let dim = alg().dim(d).unwrap();
        SteenrodElement::new(
            d,
            BitVector::from_indices(dim, (0..dim).filter(|i| bits >> (i % 64) & 1 == 1)),
        )
    })
}

fn bitvec(len: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVector::from_bools(&b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity(a in element(8), b in element(6), c in element(6)) {
        prop_assume!((a.degree + b.degree + c.degree).stem <= WINDOW);
        let l = alg().multiply(&alg().multiply(&a, &b).unwrap(), &c).unwrap();
        let r = alg().multiply(&a, &alg().multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn conjugation_reverses_products(a in element(10), b in element(10)) {
        let alg = alg();
        let lhs = alg.conjugate(&alg.multiply(&a, &b).unwrap()).unwrap();
        let rhs = alg.multiply(&alg.conjugate(&b).unwrap(), &alg.conjugate(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(alg.conjugate(&alg.conjugate(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn steenrod_text_round_trips(a in element(WINDOW)) {
        let text = grammar::format_steenrod(alg(), &a).unwrap();
        let back = grammar::parse_steenrod(alg(), &text).unwrap();
        if a.is_zero() {
            prop_assert!(back.is_zero());
        } else {
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn quotient_lift_projects_back(k in 0usize..64, bits in any::<u64>()) {
        static Q: OnceLock<QuotientModule> = OnceLock::new();
        let q = Q.get_or_init(|| {
            QuotientModule::new(alg().clone(), ExteriorProfile::finite(&[1, 2]).unwrap(), WINDOW).unwrap()
        });
        let ds: Vec<BiDegree> = degrees(WINDOW).into_iter().filter(|d| q.dim(*d).unwrap() > 0).collect();
        let d = ds[k % ds.len()];
        let dim = q.dim(d).unwrap();
        let x = BitVector::from_indices(dim, (0..dim).filter(|i| bits >> (i % 64) & 1 == 1));
        prop_assert_eq!(q.project(&q.lift(d, &x).unwrap()).unwrap(), x);
    }

    #[test]
    fn rank_nullity(rows in proptest::collection::vec(bitvec(9), 0..12)) {
        let (image, kernel) = image_and_kernel(rows.len(), 9, &rows);
        prop_assert_eq!(image.dim() + kernel.dim(), rows.len());
        for v in kernel.basis() {
            let mut sum = BitVector::zeros(9);
            for i in v.iter_ones() {
                sum.add_assign(&rows[i]);
            }
            prop_assert!(sum.is_zero());
        }
        for r in &rows {
            prop_assert!(image.contains(r));
        }
    }

    #[test]
    fn chart_json_round_trips(
        classes in proptest::collection::btree_map((0i32..6, -10i32..=10, -5i32..8), 1u32..4, 0..20),
        max_filt in proptest::option::of(0i32..8),
    ) {
        let mut chart = ExtChart::new("M", 10);
        if let Some(f) = max_filt {
            chart = chart.with_max_filt(f);
        }
        for ((s, stem, w), m) in classes {
            chart.add(s, stem, w, m);
        }
        let text = chart.to_json();
        let back = ExtChart::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, chart);
    }
}
