//! The modules `J` (plaquettes), `H` (meridians) and `C_1` (edges), the
//! inclusion `j: J -> C_1`, and ordered bases of `I^k M / I^{k+1} M`.
//!
//! Plaquette chains are kept in a normal form modulo the single relation
//! of `J`: in `T^3` the `P_z` coordinate is free of `z`
//! (relation `(1-x)P_x + (1-y)P_y + (1-z)P_z = 0`); in `T^2 x I` the `P_y`
//! coordinate is free of `y` (relation `(1-x)P_x - (1-y)P_y = 0`, the sign
//! forced by `j(P_x) = (1-y)Z`, `j(P_y) = (1-x)Z`). Meridian coordinates
//! are kept on canonical orbit representatives of their line.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{orbit_rep, reduced_axis, Ambient};
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::link::LinkSpec;
use crate::ring::{var_name, AugClass, Filtration, LaurentPoly, MultiIndex, MAX_DIM};

fn om(dim: usize, axis: usize) -> LaurentPoly {
    LaurentPoly::one_minus(dim, axis)
}

/// Element of `J` in normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaquetteChain {
    ambient: Ambient,
    coords: Vec<LaurentPoly>,
}

impl PlaquetteChain {
    /// Normalizes `coords` (one Laurent polynomial per `P_x, P_y[, P_z]`).
    pub fn new(ambient: Ambient, coords: Vec<LaurentPoly>) -> Self {
        let d = ambient.dim();
        assert_eq!(coords.len(), d, "one coordinate per plaquette generator");
        assert!(coords.iter().all(|p| p.dim() == d), "coordinate dimension");
        PlaquetteChain {
            ambient,
            coords: normalize_plaquettes(ambient, coords),
        }
    }

    pub fn zero(ambient: Ambient) -> Self {
        let d = ambient.dim();
        PlaquetteChain {
            ambient,
            coords: (0..d).map(|_| LaurentPoly::zero(d)).collect(),
        }
    }

    /// `coeff * P_generator`.
    pub fn generator(ambient: Ambient, generator: usize, coeff: LaurentPoly) -> Self {
        let mut coords: Vec<LaurentPoly> = (0..ambient.dim()).map(|_| LaurentPoly::zero(ambient.dim())).collect();
        coords[generator] = coeff;
        Self::new(ambient, coords)
    }

    /// The chain `(1-x)^a(1-y)^b(1-z)^c P_i` named by a basis element.
    pub fn from_basis_element(ambient: Ambient, e: &BasisElement) -> Self {
        Self::generator(
            ambient,
            e.generator,
            LaurentPoly::difference_power(ambient.dim(), &e.multiplier),
        )
    }

    /// Coordinates of the defining relation, before normalization.
    pub fn relation_coords(ambient: Ambient) -> Vec<LaurentPoly> {
        let d = ambient.dim();
        match ambient {
            Ambient::Relative => alloc::vec![om(d, 0), -&om(d, 1)],
            Ambient::Torus => alloc::vec![om(d, 0), om(d, 1), om(d, 2)],
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn coords(&self) -> &[LaurentPoly] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &PlaquetteChain) -> PlaquetteChain {
        assert_eq!(self.ambient, other.ambient);
        let coords = self
            .coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a + b)
            .collect();
        PlaquetteChain::new(self.ambient, coords)
    }

    /// Module action of the group ring.
    pub fn scale(&self, r: &LaurentPoly) -> PlaquetteChain {
        let coords = self.coords.iter().map(|a| a * r).collect();
        PlaquetteChain::new(self.ambient, coords)
    }

    pub fn filtration_degree(&self, maxdeg: usize) -> Filtration {
        min_filtration(self.coords.iter(), maxdeg)
    }
}

fn normalize_plaquettes(ambient: Ambient, mut c: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    let d = ambient.dim();
    match ambient {
        Ambient::Torus => {
            let rest = c[2].at_one(2);
            let a = (&c[2] - &rest).div_one_minus(2).expect("vanishes at z = 1");
            c[0] = &c[0] - &(&om(d, 0) * &a);
            c[1] = &c[1] - &(&om(d, 1) * &a);
            c[2] = rest;
        }
        Ambient::Relative => {
            let rest = c[1].at_one(1);
            let a = (&c[1] - &rest).div_one_minus(1).expect("vanishes at y = 1");
            c[0] = &c[0] + &(&om(d, 0) * &a);
            c[1] = rest;
        }
    }
    c
}

fn min_filtration<'a>(coords: impl Iterator<Item = &'a LaurentPoly>, maxdeg: usize) -> Filtration {
    let mut best = Filtration::AtLeast(maxdeg + 1);
    for p in coords {
        if let Filtration::Exact(k) = p.filtration_degree(maxdeg) {
            best = match best {
                Filtration::Exact(b) if b <= k => best,
                _ => Filtration::Exact(k),
            };
        }
    }
    best
}

/// Element of `C_1`: one coordinate for `Z` (relative) or `E_x, E_y, E_z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeChain {
    ambient: Ambient,
    coords: Vec<LaurentPoly>,
}

impl EdgeChain {
    pub fn new(ambient: Ambient, coords: Vec<LaurentPoly>) -> Self {
        assert_eq!(coords.len(), ambient.edge_generators());
        EdgeChain { ambient, coords }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn coords(&self) -> &[LaurentPoly] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    pub fn filtration_degree(&self, maxdeg: usize) -> Filtration {
        min_filtration(self.coords.iter(), maxdeg)
    }
}

/// The inclusion of plaquette boundaries into edge chains.
pub fn j_boundary(p: &PlaquetteChain) -> EdgeChain {
    let d = p.ambient.dim();
    let c = &p.coords;
    match p.ambient {
        // j(P_x) = (1-y)Z, j(P_y) = (1-x)Z
        Ambient::Relative => EdgeChain::new(p.ambient, alloc::vec![&(&om(d, 1) * &c[0]) + &(&om(d, 0) * &c[1])]),
        // j(P_x) = (1-z)E_y - (1-y)E_z, cyclically
        Ambient::Torus => {
            let ex = &(&om(d, 1) * &c[2]) - &(&om(d, 2) * &c[1]);
            let ey = &(&om(d, 2) * &c[0]) - &(&om(d, 0) * &c[2]);
            let ez = &(&om(d, 0) * &c[1]) - &(&om(d, 1) * &c[0]);
            EdgeChain::new(p.ambient, alloc::vec![ex, ey, ez])
        }
    }
}

/// Element of `H`: one coordinate per link component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeridianChain {
    dim: usize,
    labels: Vec<String>,
    directions: Vec<[i64; MAX_DIM]>,
    coords: Vec<LaurentPoly>,
}

impl MeridianChain {
    /// Normalizes each coordinate onto canonical orbit representatives.
    pub fn new(link: &LinkSpec, coords: Vec<LaurentPoly>) -> Self {
        assert_eq!(coords.len(), link.len(), "one coordinate per component");
        let directions: Vec<[i64; MAX_DIM]> = link
            .components
            .iter()
            .map(|c| {
                let mut v = [0; MAX_DIM];
                v[..link.dim].copy_from_slice(&c.direction);
                v
            })
            .collect();
        let coords = coords
            .iter()
            .zip(directions.iter())
            .map(|(p, v)| {
                assert_eq!(p.dim(), link.dim);
                p.map_monomials(|h| orbit_rep(v, link.dim, h))
            })
            .collect();
        MeridianChain {
            dim: link.dim,
            labels: link.components.iter().map(|c| c.label.clone()).collect(),
            directions,
            coords,
        }
    }

    pub fn zero(link: &LinkSpec) -> Self {
        Self::new(link, (0..link.len()).map(|_| LaurentPoly::zero(link.dim)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> &[LaurentPoly] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &MeridianChain) -> MeridianChain {
        assert_eq!(self.labels, other.labels);
        let coords = self
            .coords
            .iter()
            .zip(other.coords.iter())
            .zip(self.directions.iter())
            .map(|((a, b), v)| (a + b).map_monomials(|h| orbit_rep(v, self.dim, h)))
            .collect();
        MeridianChain { coords, ..self.clone() }
    }

    /// Module action of the group ring.
    pub fn scale(&self, r: &LaurentPoly) -> MeridianChain {
        let coords = self
            .coords
            .iter()
            .zip(self.directions.iter())
            .map(|(a, v)| (a * r).map_monomials(|h| orbit_rep(v, self.dim, h)))
            .collect();
        MeridianChain { coords, ..self.clone() }
    }

    pub fn filtration_degree(&self, maxdeg: usize) -> Filtration {
        min_filtration(self.coords.iter(), maxdeg)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModuleTag {
    J,
    H,
    C1,
}

/// Generator (plaquette, component or edge index) times `prod (1-x_i)^{a_i}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BasisElement {
    pub generator: usize,
    pub multiplier: MultiIndex,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientBasis {
    pub module: ModuleTag,
    pub degree: usize,
    pub dim: usize,
    pub elements: Vec<BasisElement>,
    pub labels: Vec<String>,
}

impl QuotientBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, e: &BasisElement) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }
}

fn element_label(multiplier: &MultiIndex, name: &str) -> String {
    let f = multiplier.factor_label();
    if f.is_empty() {
        String::from(name)
    } else {
        format!("{f} {name}")
    }
}

pub fn plaquette_name(i: usize) -> String {
    format!("P_{}", var_name(i))
}

/// Basis of `I^k J / I^{k+1} J`: generators in the order `P_z, P_y, P_x`,
/// multipliers in lexicographically ascending exponent order. In `T^3`
/// `P_z` carries only `(1-x)^a(1-y)^b`; in `T^2 x I` `P_y` only `(1-x)^k`.
pub fn basis_j(k: usize, ambient: Ambient) -> QuotientBasis {
    let d = ambient.dim();
    let mut elements = Vec::new();
    for generator in (0..d).rev() {
        let multipliers = match (ambient, generator) {
            (Ambient::Torus, 2) => MultiIndex::all_without(d, k, 2),
            (Ambient::Relative, 1) => MultiIndex::all_without(d, k, 1),
            _ => MultiIndex::all(d, k),
        };
        for multiplier in multipliers {
            elements.push(BasisElement { generator, multiplier });
        }
    }
    let labels = elements
        .iter()
        .map(|e| element_label(&e.multiplier, &plaquette_name(e.generator)))
        .collect();
    QuotientBasis {
        module: ModuleTag::J,
        degree: k,
        dim: d,
        elements,
        labels,
    }
}

/// Graded data of one meridian summand `Z[Z^d] / (1 - x^v)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LineQuotient {
    pub dim: usize,
    pub direction: [i64; MAX_DIM],
    /// Variable eliminated by the relation; `u_axis = -v_axis sum_{m != axis} v_m u_m`.
    pub axis: usize,
}

impl LineQuotient {
    pub fn new(dim: usize, direction: &[i64], label: &str) -> Result<Self> {
        let mut v = [0; MAX_DIM];
        v[..dim].copy_from_slice(direction);
        if !v[..dim].iter().any(|x| x.abs() == 1) {
            return Err(Error::UnsupportedDirection {
                label: String::from(label),
                reason: String::from("no coordinate equal to +-1, graded quotient has no monomial basis"),
            });
        }
        Ok(LineQuotient {
            dim,
            direction: v,
            axis: reduced_axis(&v, dim),
        })
    }

    /// Linear forms of the induced substitution on `u`-variables.
    pub fn forms(&self) -> [[i64; MAX_DIM]; MAX_DIM] {
        let mut f = [[0; MAX_DIM]; MAX_DIM];
        for (i, row) in f.iter_mut().enumerate().take(self.dim) {
            if i == self.axis {
                let s = self.direction[i];
                for (m, (r, &v)) in row.iter_mut().zip(self.direction.iter()).enumerate().take(self.dim) {
                    if m != i {
                        *r = -s * v;
                    }
                }
            } else {
                row[i] = 1;
            }
        }
        f
    }

    /// Multi-indices of the graded basis in degree `k`.
    pub fn monomials(&self, k: usize) -> Vec<MultiIndex> {
        MultiIndex::all_without(self.dim, k, self.axis)
    }

    /// Invariant factors of `S_k / l S_{k-1}` (`l = sum v_m u_m`) other than 1.
    pub fn torsion(&self, k: usize) -> Vec<BigInt> {
        if k == 0 {
            return Vec::new();
        }
        let lower = MultiIndex::all(self.dim, k - 1);
        let upper = MultiIndex::all(self.dim, k);
        let index: BTreeMap<MultiIndex, usize> = upper.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let mut m = IntMatrix::zeros(lower.len(), upper.len());
        for (r, beta) in lower.iter().enumerate() {
            for axis in 0..self.dim {
                let c = index[&beta.plus(&MultiIndex::unit(axis))];
                m.set(r, c, BigInt::from(self.direction[axis]));
            }
        }
        let s = smith_normal_form(&m);
        let mut t = s.torsion();
        if s.rank() < lower.len() {
            t.push(BigInt::zero());
        }
        t
    }

    /// Image of a class of `I^k / I^{k+1}` under the relation.
    pub fn reduce(&self, a: &AugClass) -> AugClass {
        a.substitute(&self.forms())
    }
}

/// Basis of `I^k H / I^{k+1} H`: components in link order, each with the
/// monomials free of its eliminated variable in ascending order.
pub fn basis_h(k: usize, link: &LinkSpec) -> Result<QuotientBasis> {
    link.validate()?;
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for (generator, c) in link.components.iter().enumerate() {
        let q = LineQuotient::new(link.dim, &c.direction, &c.label)?;
        if let Some(f) = q.torsion(k).first() {
            return Err(Error::Torsion {
                degree: k,
                label: c.label.clone(),
                factor: format!("{f}"),
            });
        }
        for multiplier in q.monomials(k) {
            labels.push(element_label(&multiplier, &c.label));
            elements.push(BasisElement { generator, multiplier });
        }
    }
    Ok(QuotientBasis {
        module: ModuleTag::H,
        degree: k,
        dim: link.dim,
        elements,
        labels,
    })
}

/// Coordinates of a plaquette chain in [`basis_j`] at degree `k`.
pub fn normal_form_j(p: &PlaquetteChain, k: usize) -> Result<Vec<BigInt>> {
    let basis = basis_j(k, p.ambient);
    let mut out = alloc::vec![BigInt::zero(); basis.len()];
    for (generator, coord) in p.coords.iter().enumerate() {
        let class = coord.reduce_mod_filtration(k)?;
        for (alpha, c) in class.terms() {
            let e = BasisElement {
                generator,
                multiplier: *alpha,
            };
            let pos = basis
                .position(&e)
                .ok_or_else(|| Error::StructureMismatch(format!("{e:?} outside the J basis")))?;
            out[pos] = c.clone();
        }
    }
    Ok(out)
}

/// Coordinates of a meridian chain in `basis` (from [`basis_h`]).
pub fn normal_form_h(m: &MeridianChain, basis: &QuotientBasis) -> Result<Vec<BigInt>> {
    let k = basis.degree;
    let mut out = alloc::vec![BigInt::zero(); basis.len()];
    for (generator, coord) in m.coords.iter().enumerate() {
        let class = coord.reduce_mod_filtration(k)?;
        for (alpha, c) in class.terms() {
            let e = BasisElement {
                generator,
                multiplier: *alpha,
            };
            let pos = basis
                .position(&e)
                .ok_or_else(|| Error::StructureMismatch(format!("{e:?} outside the H basis")))?;
            out[pos] = c.clone();
        }
    }
    Ok(out)
}
