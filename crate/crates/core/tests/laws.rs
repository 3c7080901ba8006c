use caminalab::constructions::{datum_rng, random_datum, random_element};
use caminalab::fpla::FpVec;
use caminalab::{Element, GroupDatum};
use proptest::prelude::*;

fn datum() -> impl Strategy<Value = GroupDatum> {
    (
        prop::sample::select(vec![3u32, 5, 7]),
        1usize..6,
        1usize..4,
        any::<u64>(),
    )
        .prop_map(|(p, r, n, seed)| random_datum(p, r, n, seed, false).unwrap())
}

#[test]
fn associativity_on_ten_thousand_triples() {
    let mut count = 0;
    for seed in 0..20u64 {
        let g = random_datum(
            [3, 5, 7][seed as usize % 3],
            2 + seed as usize % 4,
            1 + seed as usize % 3,
            seed,
            false,
        )
        .unwrap();
        let mut rng = datum_rng(g.p, g.r, g.n, seed);
        for _ in 0..500 {
            let x = random_element(&g, &mut rng);
            let y = random_element(&g, &mut rng);
            let z = random_element(&g, &mut rng);
            let xy = g.multiply(&x, &y).unwrap();
            let yz = g.multiply(&y, &z).unwrap();
            assert_eq!(g.multiply(&xy, &z).unwrap(), g.multiply(&x, &yz).unwrap());
            count += 1;
        }
    }
    assert!(count >= 10_000);
}

proptest! {
    #[test]
    fn commutator_is_central_and_bilinear(g in datum(), seed in any::<u64>()) {
        let mut rng = datum_rng(g.p, g.r, g.n, seed);
        let x = random_element(&g, &mut rng);
        let y = random_element(&g, &mut rng);
        let c = g.commutator(&x, &y);
        prop_assert!(c.e.is_zero());
        prop_assert_eq!(c.z.clone(), g.commutator_form(&x.e.0, &y.e.0));
        let word = g.multiply(
            &g.multiply(&g.inverse(&x), &g.inverse(&y)).unwrap(),
            &g.multiply(&x, &y).unwrap(),
        ).unwrap();
        prop_assert_eq!(word, c);
    }

    #[test]
    fn pth_power_is_linear(g in datum(), seed in any::<u64>()) {
        let mut rng = datum_rng(g.p, g.r, g.n, seed);
        let x = random_element(&g, &mut rng);
        let xp = g.power(&x, g.p as i64);
        prop_assert_eq!(xp, Element::new(FpVec::zeros(g.r), g.mu.apply(&x.e.0)));
        prop_assert_eq!(g.power(&x, (g.p * g.p) as i64), g.identity());
    }

    #[test]
    fn element_orders_follow_mu(g in datum(), seed in any::<u64>()) {
        let mut rng = datum_rng(g.p, g.r, g.n, seed);
        let x = random_element(&g, &mut rng);
        let expected = if x.e.is_zero() && x.z.is_zero() {
            1
        } else if g.mu.apply(&x.e.0).is_zero() {
            g.p as u64
        } else {
            (g.p * g.p) as u64
        };
        prop_assert_eq!(g.element_order(&x), expected);
    }

    #[test]
    fn camina_implies_center_is_derived(g in datum()) {
        if g.is_camina() {
            let rep = g.subgroup_report();
            prop_assert_eq!(rep.center_dim, g.n);
            prop_assert_eq!(rep.derived_dim, g.n);
        }
    }
}
