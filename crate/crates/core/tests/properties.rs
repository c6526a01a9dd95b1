mod common;

use arcscheme::arcgen::ZariskiFormula;
use arcscheme::oracle::count_points;
use arcscheme::rationalizer::{branch_children, TaggedTuple};
use arcscheme::{scissor_reduce, Field, Poly, ScissorPolynomial};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(seed: u64) -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn run(law: Instance, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    law(&mut rng).map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(config(0x5eed_0001))]

    #[test]
    fn partition_identity(seed in any::<u64>()) {
        run(partition_instance, seed)?;
    }

    #[test]
    fn regular_leaf(seed in any::<u64>()) {
        run(regular_leaf_instance, seed)?;
    }

    #[test]
    fn recursion(seed in any::<u64>()) {
        run(recursion_instance, seed)?;
    }

    #[test]
    fn reduced_fiber(seed in any::<u64>()) {
        run(reduced_fiber_instance, seed)?;
    }

    #[test]
    fn fubini(seed in any::<u64>()) {
        run(fubini_instance, seed)?;
    }

    #[test]
    fn disjoint_union(seed in any::<u64>()) {
        run(disjoint_union_instance, seed)?;
    }

    #[test]
    fn constant_section(seed in any::<u64>()) {
        run(constant_section_instance, seed)?;
    }

    #[test]
    fn basis_independence(seed in any::<u64>()) {
        run(basis_instance, seed)?;
    }
}

fn tuple_strategy() -> impl Strategy<Value = TaggedTuple> {
    prop::collection::vec((0u64..4, any::<bool>()), 1..4).prop_map(|v| {
        let (values, tags): (Vec<u64>, Vec<bool>) = v.into_iter().unzip();
        TaggedTuple::new(&values, &tags)
    })
}

fn poly_strategy(m: usize, field: Field) -> impl Strategy<Value = Poly> {
    prop::collection::vec(any::<u64>(), 1..4).prop_map(move |seeds| {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds[0]);
        random_poly(&mut rng, m, field, 3, seeds.len()).add(&Poly::from_int(m, field, (seeds[0] % 3) as i64))
    })
}

proptest! {
    #![proptest_config(config(0x5eed_0002))]

    #[test]
    fn transform_raises_values(theta in tuple_strategy(), bits in any::<u8>()) {
        let m = theta.len();
        let eta: Vec<bool> = (0..m).map(|j| !theta.is_tagged(j) && bits >> j & 1 == 1).collect();
        let children = branch_children(&theta, &eta).unwrap();
        prop_assert_eq!(children.len(), 1 << eta.iter().filter(|&&e| e).count());
        for child in &children {
            let v = child.values();
            for j in 0..m {
                let raised = v[j] == theta.values()[j] + 1;
                if eta[j] {
                    prop_assert!(raised != child.is_tagged(j));
                } else {
                    prop_assert_eq!(v[j], theta.values()[j]);
                    prop_assert_eq!(child.is_tagged(j), theta.is_tagged(j));
                }
            }
            prop_assert!(theta.preceq(child) || eta.iter().zip(child.tags()).any(|(&e, t)| e && t));
        }
    }

    #[test]
    fn transforms_commute(theta in tuple_strategy(), a in any::<u8>(), b in any::<u8>()) {
        let m = theta.len();
        let unit = |j: usize| (0..m).map(|i| i == j).collect::<Vec<bool>>();
        let free: Vec<usize> = (0..m).filter(|&j| !theta.is_tagged(j)).collect();
        prop_assume!(free.len() >= 2);
        let (i, j) = (free[a as usize % free.len()], free[(a as usize + 1 + b as usize % (free.len() - 1)) % free.len()]);
        prop_assume!(i != j);
        for di in [false, true] {
            for dj in [false, true] {
                let d = |k: usize, on: bool| if on { unit(k) } else { vec![false; m] };
                let ij = theta.transform(&unit(i), &d(i, di)).unwrap().transform(&unit(j), &d(j, dj)).unwrap();
                let ji = theta.transform(&unit(j), &d(j, dj)).unwrap().transform(&unit(i), &d(i, di)).unwrap();
                prop_assert_eq!(ij, ji);
            }
        }
    }

    #[test]
    fn preceq_is_monotone_under_raising(theta in tuple_strategy(), bits in any::<u8>()) {
        let m = theta.len();
        let eta: Vec<bool> = (0..m).map(|j| !theta.is_tagged(j) && bits >> j & 1 == 1).collect();
        let raised = theta.transform(&eta, &eta).unwrap();
        prop_assert!(theta.preceq(&raised));
        prop_assert!(raised.preceq(&raised));
    }

    #[test]
    fn ring_axioms(f in poly_strategy(3, Field::Rationals), g in poly_strategy(3, Field::Rationals), h in poly_strategy(3, Field::Rationals)) {
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn leibniz(f in poly_strategy(3, Field::Prime(5)), g in poly_strategy(3, Field::Prime(5)), v in 0usize..3) {
        prop_assert_eq!(f.mul(&g).derive(v), f.derive(v).mul(&g).add(&f.mul(&g.derive(v))));
    }

    #[test]
    fn basic_open_scissor(seed in any::<u64>()) {
        // #Y = #S_k(D(f_1), .., D(f_k)) + #V(f_1, .., f_k), with #D(g) counted through a tagged unit t = g
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (q, field) = random_field(&mut rng);
        let m = (seed % 2 + 1) as usize;
        let k = (seed / 2 % 3 + 1) as usize;
        let fs: Vec<Poly> = (0..k).map(|_| random_poly(&mut rng, m, field, 2, 2)).collect();
        let vars = &XYZ[..m];
        let y = ZariskiFormula::lefschetz(names(vars), field);
        let whole = BigInt::from(count_points(&y, q).unwrap());
        let open_count = |g: &Poly| -> BigInt {
            let mut nm = names(vars);
            nm.push("t".into());
            let map: Vec<usize> = (0..m).collect();
            let t = Poly::var(m + 1, field, m);
            let eq = t.sub(&g.remap(m + 1, &map));
            let mut tags = vec![false; m];
            tags.push(true);
            BigInt::from(count_points(&ZariskiFormula::new(nm, field, vec![eq], tags).unwrap(), q).unwrap())
        };
        // inclusion-exclusion is exactly the expansion of S_k
        let s = ScissorPolynomial::new(k);
        let mut scissor = BigInt::from(0);
        for (mono, c) in s.poly().terms() {
            let mut g = Poly::one(m, field);
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    g = g.mul(&fs[i]);
                }
            }
            scissor += BigInt::from(c.numer().clone()) * open_count(&g);
        }
        let closed = BigInt::from(count_points(&ZariskiFormula::untagged(names(vars), field, fs).unwrap(), q).unwrap());
        prop_assert_eq!(whole, scissor + closed);
    }
}

#[test]
fn scissor_of_ones_is_one() {
    for n in 2..=6 {
        let ones: Vec<Poly> = (0..n).map(|_| Poly::one(1, Field::Rationals)).collect();
        let v = ScissorPolynomial::new(n).apply(&ones);
        assert_eq!(scissor_reduce(&v), Poly::one(1, Field::Rationals));
    }
}
