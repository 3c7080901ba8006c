use caminalab::brauer::is_isomorphic;
use caminalab::constructions::{datum_rng, draw};
use caminalab::enumerate::{classify, classify_with, scan_camina_b, Shape};
use caminalab::equiv::transport;
use caminalab::fpla::{gl_order, FpMat};
use caminalab::par::Exec;
use rand_core::RngCore;

fn random_gl(p: u32, d: usize, rng: &mut impl RngCore) -> FpMat {
    loop {
        let entries = (0..d * d).map(|_| draw(rng, p)).collect();
        let m = FpMat::new(p, d, d, entries).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

#[test]
fn orbit_members_are_isomorphic_and_representatives_are_not() {
    let rep = classify(3, 4, 2).unwrap();
    let mut rng = datum_rng(3, 4, 2, 99);
    for class in &rep.classes {
        let g = &class.representative;
        for _ in 0..4 {
            let a = random_gl(3, 4, &mut rng);
            let c = random_gl(3, 2, &mut rng);
            let h = transport(g, &a, &c).unwrap();
            let w = is_isomorphic(g, &h).unwrap().expect("same orbit");
            // present only once the full homomorphism check has passed
            assert!(w.q.is_some());
        }
    }
    for i in 0..rep.classes.len() {
        for j in i + 1..rep.classes.len() {
            let (a, b) = (
                &rep.classes[i].representative,
                &rep.classes[j].representative,
            );
            assert!(
                is_isomorphic(a, b).unwrap().is_none(),
                "classes {i} and {j}"
            );
        }
    }
}

#[test]
fn orbit_sizes_partition_the_data() {
    for (p, r, n) in [(3, 2, 1), (3, 4, 1), (3, 4, 2)] {
        let rep = classify(p, r, n).unwrap();
        let shape = Shape::new(p, r, n);
        let total: u128 = rep.classes.iter().map(|c| c.orbit_size).sum();
        assert_eq!(total, rep.survivors as u128 * shape.mu_space());
        let group = gl_order(r, p) * gl_order(n, p);
        for o in &rep.b_orbits {
            assert_eq!(group % o.size as u128, 0);
        }
        for c in &rep.classes {
            assert_eq!(group % c.orbit_size, 0);
        }
    }
}

#[test]
fn survivor_counts_are_pinned() {
    assert_eq!(scan_camina_b(3, 2, 1).unwrap().len(), 2);
    assert_eq!(scan_camina_b(3, 4, 1).unwrap().len(), 468);
    assert_eq!(scan_camina_b(3, 4, 2).unwrap().len(), 101_088);
}

#[test]
fn sequential_and_parallel_agree() {
    let a = classify_with(3, 4, 1, Exec::Sequential).unwrap();
    let b = classify_with(3, 4, 1, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn guards_reject_large_scans() {
    assert!(scan_camina_b(3, 6, 2).is_err());
    assert!(scan_camina_b(4, 2, 1).is_err());
}
