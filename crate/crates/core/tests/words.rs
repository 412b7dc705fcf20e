use linkfill_core::lattice::{cycle_to_plaquettes, word_to_cycle};
use linkfill_core::modules::{basis_j, normal_form_j, PlaquetteChain};
use linkfill_core::nilpotent::{
    basic_commutator, hall_basis, hall_span_rank, lcs_depth, magnus, phi_closed_form, phi_k, phi_surjectivity_check,
    ses4_check, witt_rank, FreeWord,
};
use linkfill_core::{Ambient, Error, Filtration, LaurentPoly};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Lyndon words of length `n` over `d` letters, by brute force.
fn lyndon_count(d: usize, n: usize) -> u64 {
    let mut count = 0;
    let total = d.pow(n as u32);
    for code in 0..total {
        let w: Vec<usize> = (0..n).map(|i| code / d.pow(i as u32) % d).collect();
        if (1..n).all(|r| {
            let rot: Vec<usize> = w[r..].iter().chain(w[..r].iter()).copied().collect();
            w < rot
        }) {
            count += 1;
        }
    }
    count
}

#[test]
fn witt_ranks() {
    for k in 1..=6 {
        let lyndon = lyndon_count(3, k);
        assert_eq!(witt_rank(3, k), lyndon, "k={k}");
        assert_eq!(hall_basis(3, 6).iter().filter(|h| h.weight == k).count() as u64, lyndon);
    }
    assert_eq!((1..=5).map(|k| witt_rank(3, k)).collect::<Vec<_>>(), [3, 3, 8, 18, 48]);
    assert_eq!(witt_rank(2, 4), lyndon_count(2, 4));
}

#[test]
fn hall_commutators_span() {
    for k in 1..=5 {
        assert_eq!(hall_span_rank(3, k) as u64, witt_rank(3, k));
    }
    for h in hall_basis(3, 5) {
        assert_eq!(lcs_depth(&h.bracket.word(3), 7), Filtration::Exact(h.weight));
    }
}

#[test]
fn phi_examples() {
    let w = FreeWord::parse("[[x,y],z]", 3).unwrap();
    let want = normal_form_j(
        &PlaquetteChain::generator(Ambient::Torus, 2, LaurentPoly::one_minus(3, 2)),
        1,
    )
    .unwrap();
    assert_eq!(phi_k(&w, 3, Ambient::Torus).unwrap(), want);

    let xy = FreeWord::parse("[x,y]", 3).unwrap();
    let labels = basis_j(0, Ambient::Torus).labels;
    let v = phi_k(&xy, 2, Ambient::Torus).unwrap();
    assert_eq!(v[labels.iter().position(|l| l == "P_z").unwrap()], BigInt::from(1));

    let x = FreeWord::parse("x", 3).unwrap();
    assert_eq!(lcs_depth(&x, 4), Filtration::Exact(1));
    assert_eq!(phi_k(&x, 2, Ambient::Torus), Err(Error::NotInCommutatorSubgroup));
    assert!(matches!(
        phi_k(&xy, 3, Ambient::Torus),
        Err(Error::NotInLowerCentral { depth: 2, .. })
    ));
}

#[test]
fn closed_form_images() {
    for ambient in [Ambient::Relative, Ambient::Torus] {
        for len in 2..=5usize {
            for code in 0..3usize.pow(len as u32) {
                let letters: Vec<usize> = (0..len).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                if letters[0] == letters[1] {
                    continue;
                }
                let w = basic_commutator(&letters, 3).unwrap();
                assert_eq!(
                    phi_k(&w, len, ambient).unwrap(),
                    phi_closed_form(&letters, ambient).unwrap(),
                    "{letters:?}"
                );
            }
        }
    }
}

#[test]
fn surjectivity_and_bookkeeping() {
    for ambient in [Ambient::Relative, Ambient::Torus] {
        for k in 2..=5 {
            assert!(
                phi_surjectivity_check(k, ambient).unwrap().all_ok(),
                "dim {} k={k}",
                ambient.dim()
            );
        }
    }
    for k in 2..=5 {
        let r = ses4_check(k).unwrap();
        assert_eq!(r.target_rank, (k - 1) * (k + 1));
        assert!(r.consistent());
    }
}

fn word() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0usize..3, prop::bool::ANY), 0..12)
        .prop_map(|v| FreeWord::from_letters(3, v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 }))))
}

proptest! {
    #[test]
    fn magnus_is_multiplicative(a in word(), b in word()) {
        prop_assert_eq!(magnus(&a.mul(&b), 4), magnus(&a, 4).mul(&magnus(&b, 4)));
        prop_assert_eq!(magnus(&a.mul(&a.inverse()), 4), magnus(&FreeWord::identity(3), 4));
    }

    #[test]
    fn commutators_go_deeper(a in word(), b in word()) {
        let c = a.commutator(&b);
        let depth = |w: &FreeWord| match lcs_depth(w, 6) { Filtration::Exact(d) => d, Filtration::AtLeast(d) => d };
        prop_assert!(depth(&c) >= depth(&a) + depth(&b) || depth(&c) == 7);
    }

    #[test]
    fn phi_is_additive(a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3) {
        prop_assume!(a != b && c != d);
        let u = basic_commutator(&[a, b, 0], 3).unwrap();
        let v = basic_commutator(&[c, d, 1], 3).unwrap();
        let sum: Vec<BigInt> = phi_k(&u, 3, Ambient::Torus).unwrap().iter()
            .zip(phi_k(&v, 3, Ambient::Torus).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        prop_assert_eq!(phi_k(&u.mul(&v), 3, Ambient::Torus).unwrap(), sum);
    }

    #[test]
    fn traced_words_are_cycles(a in word()) {
        let w = a.commutator(&FreeWord::generator(3, 2));
        let c = word_to_cycle(&w, Ambient::Torus).unwrap();
        prop_assert!(c.boundary_is_zero());
        prop_assert!(cycle_to_plaquettes(&c).is_ok());
    }
}
