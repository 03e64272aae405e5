use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use ctau_core::milnor::{classical_product, MilnorAlgebra, SteenrodElement};

#[test]
fn random_tau_free_pairs_match_classical_product() {
    let alg = MilnorAlgebra::new(24);
    let free: Vec<SteenrodElement> = alg
        .nonzero_bidegrees()
        .flat_map(|d| alg.dual_basis(d).unwrap().to_vec())
        .filter(|m| m.is_tau_free())
        .map(|m| alg.milnor_element(&m).unwrap())
        .collect();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 200 {
        let a = free.choose(&mut rng).unwrap();
        let b = free.choose(&mut rng).unwrap();
        if a.degree.stem + b.degree.stem > 24 {
            continue;
        }
        let lhs = alg.to_classical(&alg.multiply(a, b).unwrap()).unwrap();
        let rhs = classical_product(&alg.to_classical(a).unwrap(), &alg.to_classical(b).unwrap());
        assert_eq!(lhs, rhs, "{a:?} · {b:?}");
        checked += 1;
    }
}

#[test]
fn adem_relation_sq2_sq2() {
    // classically Sq2Sq2 = Sq3Sq1 = Sq(1,1)
    let alg = MilnorAlgebra::new(8);
    let sq2 = ctau_core::milnor::ClassicalElement::milnor(&[2]);
    assert_eq!(
        classical_product(&sq2, &sq2),
        ctau_core::milnor::ClassicalElement::milnor(&[1, 1])
    );
    // and the motivic square restricts to it
    let p2 = alg
        .p_r(&ctau_core::milnor::SequenceR::new(1, &[2]))
        .unwrap();
    let sq = alg.multiply(&p2, &p2).unwrap();
    assert_eq!(
        alg.to_classical(&sq).unwrap(),
        ctau_core::milnor::ClassicalElement::milnor(&[1, 1])
    );
}
