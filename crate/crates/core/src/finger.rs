//! Finger moves as equivariant maps `F: C_1 -> H` and the perturbed linking
//! map `Lk + F o j`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{face_linking, orbit_rep, Ambient};
use crate::link::LinkSpec;
use crate::modules::{basis_j, j_boundary, EdgeChain, MeridianChain, PlaquetteChain};
use crate::ring::{series_mul, LaurentPoly, Monomial, MAX_DIM};

/// Images of the edge generators (`Z`, or `E_x, E_y, E_z`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FingerMoveMap {
    pub ambient: Ambient,
    pub values: Vec<MeridianChain>,
}

impl FingerMoveMap {
    pub fn new(ambient: Ambient, values: Vec<MeridianChain>) -> Result<Self> {
        if values.len() != ambient.edge_generators() {
            return Err(Error::InvalidArgument(format!(
                "expected {} edge images, got {}",
                ambient.edge_generators(),
                values.len()
            )));
        }
        Ok(FingerMoveMap { ambient, values })
    }

    pub fn zero(link: &LinkSpec) -> Self {
        let ambient = link.ambient();
        FingerMoveMap {
            ambient,
            values: (0..ambient.edge_generators())
                .map(|_| MeridianChain::zero(link))
                .collect(),
        }
    }

    /// Extension by `Z[Z^d]`-linearity.
    pub fn apply(&self, c: &EdgeChain, link: &LinkSpec) -> MeridianChain {
        let mut out = MeridianChain::zero(link);
        for (coef, image) in c.coords().iter().zip(self.values.iter()) {
            out = out.add(&image.scale(coef));
        }
        out
    }

    pub fn add(&self, other: &FingerMoveMap) -> FingerMoveMap {
        FingerMoveMap {
            ambient: self.ambient,
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
}

/// `Lk(c)` with every line orbit, from the single-plaquette linking numbers.
pub fn linking_map(c: &PlaquetteChain, link: &LinkSpec) -> Result<MeridianChain> {
    let lines = link.lines()?;
    let origin = Monomial::one();
    let mut coords = Vec::with_capacity(lines.len());
    for line in lines.iter() {
        let mut total = LaurentPoly::zero(link.dim);
        for (i, coef) in c.coords().iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            total = &total + &(coef * &face_linking(line, i, &origin)?);
        }
        coords.push(total);
    }
    Ok(MeridianChain::new(link, coords))
}

/// `Lk(c) + F(j(c))`.
pub fn perturbed_linking(c: &PlaquetteChain, f: &FingerMoveMap, link: &LinkSpec) -> Result<MeridianChain> {
    Ok(linking_map(c, link)?.add(&f.apply(&j_boundary(c), link)))
}

/// Deterministic random finger map: every edge image has, per component,
/// up to `value_degree` terms with exponents in `[-radius, radius]` and
/// coefficients in `[-3, 3]`.
pub fn random_finger_map(seed: u64, radius: i64, value_degree: usize, link: &LinkSpec) -> FingerMoveMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ambient = link.ambient();
    let d = link.dim;
    let values = (0..ambient.edge_generators())
        .map(|_| {
            let coords = (0..link.len())
                .map(|_| {
                    let n = rng.gen_range(0..=value_degree);
                    let mut p = LaurentPoly::zero(d);
                    for _ in 0..n {
                        let mut e = [0i64; MAX_DIM];
                        for x in e.iter_mut().take(d) {
                            *x = rng.gen_range(-radius..=radius);
                        }
                        p.add_term(Monomial(e), BigInt::from(rng.gen_range(-3i64..=3)));
                    }
                    p
                })
                .collect();
            MeridianChain::new(link, coords)
        })
        .collect();
    FingerMoveMap { ambient, values }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub element: String,
    pub component: String,
    /// Degree of the lowest surviving term of `F(j(c))`.
    pub degree: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvarianceReport {
    pub k: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl InvarianceReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every basis element `c` of `I^k J / I^{k+1} J`, checks that `F(j(c))`
/// has no term of degree `<= k` on any line, i.e. that `Lk + F o j` and
/// `Lk` induce the same map `i_k`.
pub fn kernel_invariance_check(k: usize, link: &LinkSpec, f: &FingerMoveMap) -> Result<InvarianceReport> {
    let ambient = link.ambient();
    if f.ambient != ambient {
        return Err(Error::DimensionMismatch(f.ambient.dim(), ambient.dim()));
    }
    let basis = basis_j(k, ambient);
    let d = link.dim;
    let directions: Vec<[i64; MAX_DIM]> = link
        .components
        .iter()
        .map(|c| {
            let mut v = [0; MAX_DIM];
            v[..d].copy_from_slice(&c.direction);
            v
        })
        .collect();
    // truncated expansions of the edge images, per edge and component
    let images: Vec<Vec<_>> = f
        .values
        .iter()
        .map(|m| m.coords().iter().map(|p| p.u_expansion(k)).collect())
        .collect();
    let mut violations = Vec::new();
    for (e, label) in basis.elements.iter().zip(basis.labels.iter()) {
        let jc = j_boundary(&PlaquetteChain::from_basis_element(ambient, e));
        for (l, v) in directions.iter().enumerate() {
            let mut total = alloc::collections::BTreeMap::new();
            for (edge, coef) in jc.coords().iter().enumerate() {
                let reduced = coef.map_monomials(|h| orbit_rep(v, d, h)).u_expansion(k);
                for (alpha, c) in series_mul(&reduced, &images[edge][l], k) {
                    *total.entry(alpha).or_insert_with(BigInt::zero) += c;
                }
            }
            if let Some(deg) = total
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(a, _)| a.degree())
                .min()
            {
                violations.push(Violation {
                    element: label.clone(),
                    component: link.components[l].label.clone(),
                    degree: deg,
                });
            }
        }
    }
    Ok(InvarianceReport {
        k,
        checked: basis.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::standard_link;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn zero_map_changes_nothing() {
        let link = standard_link(1, Ambient::Relative);
        let c = PlaquetteChain::generator(Ambient::Relative, 0, p("1 - x"));
        let f = FingerMoveMap::zero(&link);
        assert_eq!(
            perturbed_linking(&c, &f, &link).unwrap(),
            linking_map(&c, &link).unwrap()
        );
        assert!(kernel_invariance_check(1, &link, &f).unwrap().clean());
    }

    #[test]
    fn single_meridian_example() {
        let link = standard_link(1, Ambient::Relative);
        let c = PlaquetteChain::generator(Ambient::Relative, 0, p("1 - x"));
        let mut coords: Vec<LaurentPoly> = (0..3).map(|_| LaurentPoly::zero(2)).collect();
        coords[2] = LaurentPoly::one(2);
        let f = FingerMoveMap::new(Ambient::Relative, alloc::vec![MeridianChain::new(&link, coords)]).unwrap();
        let mut extra: Vec<LaurentPoly> = (0..3).map(|_| LaurentPoly::zero(2)).collect();
        extra[2] = &p("1 - x") * &p("1 - y");
        let want = linking_map(&c, &link).unwrap().add(&MeridianChain::new(&link, extra));
        assert_eq!(perturbed_linking(&c, &f, &link).unwrap(), want);
    }

    #[test]
    fn random_maps_are_reproducible() {
        let link = standard_link(2, Ambient::Torus);
        assert_eq!(random_finger_map(7, 2, 3, &link), random_finger_map(7, 2, 3, &link));
        let f = random_finger_map(7, 0, 3, &link);
        for m in f.values.iter() {
            for c in m.coords() {
                assert!(c.terms().all(|(e, _)| e.is_one()));
            }
        }
    }

    #[test]
    fn relation_is_killed() {
        for ambient in [Ambient::Relative, Ambient::Torus] {
            let link = standard_link(2, ambient);
            let rel = PlaquetteChain::new(ambient, PlaquetteChain::relation_coords(ambient));
            for seed in 0..5 {
                let f = random_finger_map(seed, 2, 3, &link);
                assert!(perturbed_linking(&rel, &f, &link).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn invariance_small() {
        for ambient in [Ambient::Relative, Ambient::Torus] {
            for k in 1..=3 {
                let link = standard_link(k, ambient);
                for seed in 0..10 {
                    let f = random_finger_map(seed, 2, 3, &link);
                    assert!(kernel_invariance_check(k, &link, &f).unwrap().clean());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn additive_and_equivariant(seed_a in 0u64..1000, seed_b in 0u64..1000, g in proptest::array::uniform3(-2i64..3)) {
            let link = standard_link(1, Ambient::Torus);
            let fa = random_finger_map(seed_a, 2, 3, &link);
            let fb = random_finger_map(seed_b, 2, 3, &link);
            let c = PlaquetteChain::new(Ambient::Torus, alloc::vec![
                LaurentPoly::parse("1 - x*z", 3).unwrap(),
                LaurentPoly::parse("y - 2", 3).unwrap(),
                LaurentPoly::parse("x^-1", 3).unwrap(),
            ]);
            let lhs = perturbed_linking(&c, &fa.add(&fb), &link).unwrap();
            let rhs = perturbed_linking(&c, &fa, &link).unwrap()
                .add(&perturbed_linking(&c, &fb, &link).unwrap())
                .add(&linking_map(&c, &link).unwrap().scale(&LaurentPoly::constant(3, -1)));
            prop_assert_eq!(lhs, rhs);
            let gm = LaurentPoly::monomial(3, Monomial(g), 1);
            prop_assert_eq!(
                perturbed_linking(&c.scale(&gm), &fa, &link).unwrap(),
                perturbed_linking(&c, &fa, &link).unwrap().scale(&gm)
            );
        }
    }
}
