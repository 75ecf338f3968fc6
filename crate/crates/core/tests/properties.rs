use descent_core::brauer::{class_vector, cor_class, invariant_vector};
use descent_core::descent::{
    insep_descent_test, sep_descent, slot_convert, verify_certificate, DescentCertificate, Obstruction, Verdict,
};
use descent_core::field::{Field, RatField};
use descent_core::involution::{monomial_squares, phi};
use descent_core::places::is_in_wp_global;
use descent_core::quadext::InsepExt;
use descent_core::sample::{disguised_base_change, random_insep, random_sep_ext, random_td};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f2() -> RatField {
    RatField::new(1, "t")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(seed in any::<u64>(), k in 1u8..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = RatField::new(k, "t");
        let (a, b, c) = (f.random(3, &mut rng), f.random(3, &mut rng), f.random_nonzero(3, &mut rng));
        prop_assert_eq!(f.mul(&f.add(&a, &b), &c), f.add(&f.mul(&a, &c), &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&c, &f.inv(&c).unwrap()), f.one());
        let (r0, r1) = f.square_split(&a);
        prop_assert_eq!(f.add(&f.square(&r0), &f.mul(&f.tau(), &f.square(&r1))), a.clone());
        prop_assert_eq!(f.parse(&f.render(&a)).unwrap(), a);
    }

    #[test]
    fn wp_membership_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = RatField::new(2, "t");
        let g = f.random(3, &mut rng);
        let w = is_in_wp_global(&g.wp()).witness.expect("wp(g) is a member");
        prop_assert_eq!(w.wp(), g.wp());
    }

    #[test]
    fn invariants_are_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = f2();
        let (a1, a2, b) = (f.random(2, &mut rng), f.random(2, &mut rng), f.random_nonzero(2, &mut rng));
        let sum = invariant_vector(&f, &a1, &b).add(&invariant_vector(&f, &a2, &b));
        prop_assert_eq!(invariant_vector(&f, &f.add(&a1, &a2), &b), sum);
    }

    #[test]
    fn slot_conversion_preserves_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = f2();
        let ext = random_sep_ext(&f, 2, &mut rng);
        let (a, b, c) = (ext.random(1, &mut rng), ext.random_nonzero(1, &mut rng), ext.random_nonzero(1, &mut rng));
        if let Some(x) = slot_convert(&ext, &a, &b, &c) {
            prop_assert_eq!(class_vector(&ext, &[(a, b)]), class_vector(&ext, &[(x, c)]));
        }
    }

    #[test]
    fn insep_reduction_matches_sampled_squares(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ext = InsepExt::new(1);
        let kf = ext.field();
        let a = random_insep(&ext, 2, 2, &mut rng);
        let squares = monomial_squares(&kf, &phi(&a));
        let coords: Vec<_> = (0..squares.len()).map(|_| kf.random(1, &mut rng)).collect();
        let x2 = kf.sum(squares.iter().zip(&coords).map(|(q, d)| kf.mul(q, &kf.square(d))).collect::<Vec<_>>().iter());
        if insep_descent_test(&ext, &a) {
            prop_assert!(ext.in_base(&x2).is_some());
        } else {
            prop_assert!(squares.iter().any(|q| ext.in_base(q).is_none()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn certificates_survive_json(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = f2();
        let ext = random_sep_ext(&f, 2, &mut rng);
        let b = random_td(&f, 2, 1, &mut rng);
        let a = disguised_base_change(&ext, &b, 1, &mut rng);
        let v = sep_descent(&ext, &a, 3).unwrap();
        let cert = v.certificate().expect("base changes descend");
        let text = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert!(verify_certificate(back.certificate().unwrap()).is_ok());
        let mut bad: DescentCertificate = cert.clone();
        bad.descended[0].a = f.render(&f.add(&f.parse(&bad.descended[0].a).unwrap(), &f.one()));
        bad.witnesses[0] = descent_core::descent::FactorWitness::Global;
        let tampered_class = class_vector(&ext, &[(ext.one(), ext.embed(&b.factors[0].1))]);
        if !tampered_class.is_zero() {
            prop_assert!(verify_certificate(&bad).is_err());
        }
    }

    #[test]
    fn obstructions_recheck(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = f2();
        let ext = random_sep_ext(&f, 2, &mut rng);
        let a = descent_core::involution::TDInvolution::new(vec![
            (ext.random(1, &mut rng), ext.embed(&f.random_nonzero(2, &mut rng))),
            (ext.random(1, &mut rng), ext.embed(&f.random_nonzero(2, &mut rng))),
        ]);
        match sep_descent(&ext, &a, 2).unwrap() {
            Verdict::NoDescent { obstruction: Obstruction::CorNonsplit { invariants } } => {
                let cor = cor_class(&ext, &a.factors).unwrap();
                prop_assert!(!cor.is_zero());
                prop_assert_eq!(cor.render("t"), invariants);
            }
            Verdict::Descends { certificate } => prop_assert!(verify_certificate(&certificate).is_ok()),
            Verdict::Unknown { .. } => {}
            v => prop_assert!(false, "unexpected verdict {:?}", v),
        }
    }
}
