//! Dual coproduct recomputed from the generator formulas
//! `Δξ_n = Σ ξ_{n−i}^{2^i} ⊗ ξ_i` and `Δτ_n = τ_n ⊗ 1 + Σ ξ_{n−i}^{2^i} ⊗ τ_i`,
//! expanded multiplicatively with `τ_i² = 0`.

use std::collections::BTreeSet;

use ctau_core::milnor::{DualMonomial, MilnorAlgebra};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Mono {
    tau: BTreeSet<u32>,
    xi: Vec<u32>,
}

impl Mono {
    fn one() -> Self {
        Mono {
            tau: BTreeSet::new(),
            xi: Vec::new(),
        }
    }

    fn xi_pow(n: u32, e: u32) -> Self {
        let mut m = Mono::one();
        if n > 0 && e > 0 {
            m.xi = vec![0; n as usize];
            m.xi[n as usize - 1] = e;
        }
        m
    }

    fn tau(i: u32) -> Self {
        let mut m = Mono::one();
        m.tau.insert(i);
        m
    }

    fn times(&self, o: &Mono) -> Option<Mono> {
        if !self.tau.is_disjoint(&o.tau) {
            return None;
        }
        let len = self.xi.len().max(o.xi.len());
        let mut xi: Vec<u32> = (0..len)
            .map(|k| self.xi.get(k).unwrap_or(&0) + o.xi.get(k).unwrap_or(&0))
            .collect();
        while xi.last() == Some(&0) {
            xi.pop();
        }
        Some(Mono {
            tau: self.tau.union(&o.tau).copied().collect(),
            xi,
        })
    }

    fn to_dual(&self) -> DualMonomial {
        let tau: Vec<u32> = self.tau.iter().copied().collect();
        DualMonomial::new(&tau, &self.xi).unwrap()
    }
}

type Tensor = BTreeSet<(Mono, Mono)>;

fn toggle(t: &mut Tensor, x: (Mono, Mono)) {
    if !t.remove(&x) {
        t.insert(x);
    }
}

fn mul(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (a1, a2) in a {
        for (b1, b2) in b {
            if let (Some(l), Some(r)) = (a1.times(b1), a2.times(b2)) {
                toggle(&mut out, (l, r));
            }
        }
    }
    out
}

fn delta_xi(n: u32) -> Tensor {
    let mut t = Tensor::new();
    for i in 0..=n {
        toggle(&mut t, (Mono::xi_pow(n - i, 1 << i), Mono::xi_pow(i, 1)));
    }
    t
}

fn delta_tau(n: u32) -> Tensor {
    let mut t = Tensor::new();
    toggle(&mut t, (Mono::tau(n), Mono::one()));
    for i in 0..=n {
        toggle(&mut t, (Mono::xi_pow(n - i, 1 << i), Mono::tau(i)));
    }
    t
}

fn delta(m: &DualMonomial) -> BTreeSet<(DualMonomial, DualMonomial)> {
    let mut acc: Tensor = [(Mono::one(), Mono::one())].into();
    for &i in m.tau_indices() {
        acc = mul(&acc, &delta_tau(i));
    }
    for (k, &e) in m.xi_exponents().iter().enumerate() {
        for _ in 0..e {
            acc = mul(&acc, &delta_xi(k as u32 + 1));
        }
    }
    acc.into_iter()
        .map(|(a, b)| (a.to_dual(), b.to_dual()))
        .collect()
}

#[test]
fn coproduct_matches_generator_formulas() {
    let alg = MilnorAlgebra::new(22);
    let mut checked = 0;
    for d in alg.nonzero_bidegrees().collect::<Vec<_>>() {
        for m in alg.dual_basis(d).unwrap() {
            let got: BTreeSet<_> = alg.coproduct(m).into_iter().collect();
            assert_eq!(got, delta(m), "coproduct of {m}");
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn product_is_dual_to_oracle_coproduct() {
    let alg = MilnorAlgebra::new(16);
    let degrees: Vec<_> = alg.nonzero_bidegrees().collect();
    for &d in &degrees {
        for (k, m) in alg.dual_basis(d).unwrap().iter().enumerate() {
            for (a, b) in delta(m) {
                let (da, db) = (a.degree(), b.degree());
                let p = alg
                    .multiply_basis(da, alg.index_of(&a).unwrap(), db, alg.index_of(&b).unwrap())
                    .unwrap();
                let hits = delta(m).iter().filter(|(x, y)| *x == a && *y == b).count();
                assert_eq!(p.get(k), hits % 2 == 1, "⟨{a}·{b}, {m}⟩");
            }
        }
    }
}

#[test]
fn classical_milnor_examples() {
    // Sq(1)Sq(2) = Sq(3) and Sq(2)Sq(1) = Sq(3) + Sq(0,1)
    let alg = MilnorAlgebra::new(10);
    let p1 = alg
        .p_r(&ctau_core::milnor::SequenceR::new(1, &[1]))
        .unwrap();
    let p2 = alg
        .p_r(&ctau_core::milnor::SequenceR::new(1, &[2]))
        .unwrap();
    let fmt = |a: &ctau_core::milnor::SteenrodElement| {
        ctau_core::milnor::grammar::format_steenrod(&alg, a).unwrap()
    };
    assert_eq!(fmt(&alg.multiply(&p1, &p2).unwrap()), "P(3)");
    assert_eq!(fmt(&alg.multiply(&p2, &p1).unwrap()), "P(0,1) + P(3)");
}
