//! Cubical lattice chains, periodic lines and the geometric linking oracle.
//!
//! Two ambient models are supported. In [`Ambient::Torus`] the jungle gym
//! is the 1-skeleton of the unit cubulation of `R^3`, plaquette `P_i` is
//! the unit square with normal `+e_i`, and lines are straight lines in
//! `R^3`. In [`Ambient::Relative`] (the universal cover of `T^2 x I` with
//! tops and bottoms contracted) the only edges are the vertical segments
//! `Z` over lattice points of `R^2`, a 2-cell is the vertical square over a
//! horizontal lattice edge, and every line lies at its own height, so it is
//! described by its projection to `R^2`. There `P_x` over `g` is the
//! square over the edge from `g` to `g + e_y` with boundary `Z_g - Z_{g+e_y}`,
//! and `P_y` the square over the edge from `g` to `g + e_x`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::modules::PlaquetteChain;
use crate::nilpotent::FreeWord;
use crate::ring::{var_name, LaurentPoly, Monomial};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Ambient {
    /// `T^2 x I`, group ring `Z[Z^2]`.
    Relative,
    /// `T^3`, group ring `Z[Z^3]`.
    Torus,
}

impl Ambient {
    pub fn from_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Ambient::Relative),
            3 => Ok(Ambient::Torus),
            d => Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Ambient::Relative => 2,
            Ambient::Torus => 3,
        }
    }

    /// Rank of the edge module `C_1`.
    pub fn edge_generators(self) -> usize {
        match self {
            Ambient::Relative => 1,
            Ambient::Torus => 3,
        }
    }

    pub fn edge_name(self, e: usize) -> String {
        match self {
            Ambient::Relative => String::from("Z"),
            Ambient::Torus => format!("E_{}", var_name(e)),
        }
    }

    /// Orientation of `P_i` relative to the crossing sign `sign(v_i)`.
    pub fn plaquette_sign(self, i: usize) -> i64 {
        match (self, i) {
            (Ambient::Relative, 1) => -1,
            _ => 1,
        }
    }
}

/// Axis whose exponent is removed when choosing orbit representatives for
/// a line with direction `v`: the first axis with a unit entry, else the
/// first nonzero one.
pub fn reduced_axis(v: &[i64; 3], dim: usize) -> usize {
    (0..dim)
        .find(|&i| v[i].abs() == 1)
        .or_else(|| (0..dim).find(|&i| v[i] != 0))
        .expect("nonzero direction")
}

/// Canonical representative of `h` modulo `Z v`: the `reduced_axis`
/// exponent is brought into `[0, |v_i|)`.
pub fn orbit_rep(v: &[i64; 3], dim: usize, h: &Monomial) -> Monomial {
    let i = reduced_axis(v, dim);
    let vi = v[i];
    let r = h.exp(i).rem_euclid(vi.abs());
    let n = (h.exp(i) - r) / vi;
    h.shifted(v, -n)
}

/// A lifted link component `{ p + t v }` with rational basepoint
/// `p = numer / denom`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Line {
    pub ambient: Ambient,
    pub label: String,
    pub direction: [i64; 3],
    pub numer: [i64; 3],
    pub denom: i64,
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

impl Line {
    pub fn new(ambient: Ambient, label: &str, direction: &[i64], numer: &[i64], denom: i64) -> Result<Self> {
        let d = ambient.dim();
        if direction.len() != d || numer.len() != d {
            return Err(Error::InvalidLink(format!("{label}: expected vectors of length {d}")));
        }
        if gcd_all(direction) != 1 {
            return Err(Error::InvalidLink(format!(
                "{label}: direction must be primitive and nonzero"
            )));
        }
        if denom <= 0 {
            return Err(Error::InvalidLink(format!("{label}: bad denominator")));
        }
        let mut dir = [0; 3];
        dir[..d].copy_from_slice(direction);
        let mut num = [0; 3];
        num[..d].copy_from_slice(numer);
        Ok(Line {
            ambient,
            label: String::from(label),
            direction: dir,
            numer: num,
            denom,
        })
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn reduced_axis(&self) -> usize {
        reduced_axis(&self.direction, self.dim())
    }

    /// Canonical representative of `h` modulo the stabilizer `Z v`.
    pub fn canonical(&self, h: &Monomial) -> Monomial {
        orbit_rep(&self.direction, self.dim(), h)
    }

    /// Whether the line misses the jungle gym and meets every 2-cell
    /// transversally.
    pub fn check_transverse(&self) -> Result<()> {
        let d = self.dim() as i128;
        let v = self.direction.map(|x| x as i128);
        let p = self.numer.map(|x| x as i128);
        let den = self.denom as i128;
        let fail = |what: &str| {
            Err(Error::NonTransverse {
                label: self.label.clone(),
                cell: String::from(what),
            })
        };
        match self.ambient {
            Ambient::Relative => {
                // misses every lattice point of R^2
                let det = v[0] * p[1] - v[1] * p[0];
                if det % den == 0 {
                    return fail("a vertical edge");
                }
            }
            Ambient::Torus => {
                for i in 0..d as usize {
                    if v[i] == 0 && p[i] % den == 0 {
                        return fail("a coordinate plane");
                    }
                }
                for i in 0..3 {
                    for m in i + 1..3 {
                        if v[i] == 0 && v[m] == 0 {
                            continue;
                        }
                        // meets {x_i, x_m in Z} iff (p_m v_i - p_i v_m) in gcd(v_i, v_m) Z
                        let g = v[i].gcd(&v[m]);
                        let det = p[m] * v[i] - p[i] * v[m];
                        if det % (den * g) == 0 {
                            return fail("a lattice edge");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether no translate of `self` meets `other` (lines of different
    /// components in the torus model).
    pub fn disjoint_from(&self, other: &Line) -> bool {
        let v = self.direction.map(|x| x as i128);
        let w = other.direction.map(|x| x as i128);
        let (a, b) = (self.denom as i128, other.denom as i128);
        // p - q over the common denominator a*b
        let diff: [i128; 3] = core::array::from_fn(|i| self.numer[i] as i128 * b - other.numer[i] as i128 * a);
        let den = a * b;
        let cross = [
            v[1] * w[2] - v[2] * w[1],
            v[2] * w[0] - v[0] * w[2],
            v[0] * w[1] - v[1] * w[0],
        ];
        if cross.iter().any(|&c| c != 0) {
            let g = cross.iter().fold(0i128, |g, c| g.gcd(c));
            let n = cross.map(|c| c / g);
            let dot: i128 = (0..3).map(|i| n[i] * diff[i]).sum();
            return dot % den != 0;
        }
        // parallel: p - q + g = t v with t mod 1 fixed by one coordinate
        let i0 = (0..3).find(|&i| v[i] != 0).unwrap();
        for r in 0..v[i0].abs() {
            // t = (diff_i0 / den + r) / v_i0, test every coordinate
            let tn = diff[i0] + r * den;
            let td = den * v[i0];
            let hits = (0..3).all(|i| (tn * v[i] - diff[i] * v[i0]) % td == 0);
            if hits {
                return false;
            }
        }
        true
    }

    /// Translates `h . self` crossing the cell `P_normal` at `g`, with their
    /// intersection signs; translates are given by canonical representatives.
    pub fn face_crossings(&self, normal: usize, g: &Monomial) -> Result<Vec<(Monomial, i64)>> {
        let i = normal;
        let vi = self.direction[i] as i128;
        if vi == 0 {
            return Ok(Vec::new());
        }
        let d = self.dim();
        let sign = vi.signum() as i64 * self.ambient.plaquette_sign(i);
        let den = self.denom as i128;
        let mut out = Vec::with_capacity(vi.unsigned_abs() as usize);
        for r in 0..vi.abs() {
            // t = (g_i - p_i - r) / v_i; s_m = p_m + t v_m over denominator den * v_i
            let tnum = g.exp(i) as i128 * den - self.numer[i] as i128 - r * den;
            let sd = den * vi;
            let mut h = [0i64; 3];
            h[i] = r as i64;
            for m in (0..d).filter(|&m| m != i) {
                let sn = self.numer[m] as i128 * vi + tnum * self.direction[m] as i128;
                // h_m = ceil(g_m - s_m)
                let (mut num, mut dd) = (g.exp(m) as i128 * sd - sn, sd);
                if dd < 0 {
                    num = -num;
                    dd = -dd;
                }
                if num % dd == 0 {
                    return Err(Error::NonTransverse {
                        label: self.label.clone(),
                        cell: format!("P_{} at {:?}", var_name(i), &g.0[..d]),
                    });
                }
                h[m] = Integer::div_ceil(&num, &dd) as i64;
            }
            out.push((self.canonical(&Monomial(h)), sign));
        }
        Ok(out)
    }
}

/// Edge key: generator index (`0` for `Z`, axis for `E_x, E_y, E_z`) and base point.
pub type EdgeKey = (usize, Monomial);
/// Face key: plaquette generator index and base point.
pub type FaceKey = (usize, Monomial);

fn add_entry<K: Ord>(map: &mut BTreeMap<K, i64>, key: K, c: i64) -> Result<()> {
    if c == 0 {
        return Ok(());
    }
    let slot = map.entry(key).or_insert(0);
    *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
    Ok(())
}

fn prune<K: Ord>(map: &mut BTreeMap<K, i64>) {
    map.retain(|_, c| *c != 0);
}

fn point_string(m: &Monomial, d: usize) -> String {
    let parts: Vec<String> = m.0[..d].iter().map(|e| format!("{e}")).collect();
    format!("({})", parts.join(","))
}

/// Integral 1-chain on the jungle gym. In the relative model this is a
/// chain of vertical edges, a cycle iff its coefficients sum to zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GridCycle {
    ambient: Ambient,
    edges: BTreeMap<EdgeKey, i64>,
}

impl GridCycle {
    pub fn new(ambient: Ambient) -> Self {
        GridCycle {
            ambient,
            edges: BTreeMap::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn add_edge(&mut self, generator: usize, base: Monomial, c: i64) -> Result<()> {
        assert!(generator < self.ambient.edge_generators());
        add_entry(&mut self.edges, (generator, base), c)?;
        prune(&mut self.edges);
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeKey, &i64)> {
        self.edges.iter()
    }

    pub fn coeff(&self, generator: usize, base: &Monomial) -> i64 {
        self.edges.get(&(generator, *base)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn try_add(&self, other: &GridCycle, scale: i64) -> Result<GridCycle> {
        let mut out = self.clone();
        for (k, c) in other.edges.iter() {
            add_entry(&mut out.edges, *k, c.checked_mul(scale).ok_or(Error::Overflow)?)?;
        }
        prune(&mut out.edges);
        Ok(out)
    }

    pub fn translate(&self, g: &Monomial) -> GridCycle {
        GridCycle {
            ambient: self.ambient,
            edges: self.edges.iter().map(|((e, b), c)| ((*e, b.times(g)), *c)).collect(),
        }
    }

    /// Signed vertex degrees (boundary of the chain), or the total
    /// coefficient in the relative model.
    pub fn boundary_is_zero(&self) -> bool {
        match self.ambient {
            Ambient::Relative => self.edges.values().map(|&c| c as i128).sum::<i128>() == 0,
            Ambient::Torus => {
                let mut deg: BTreeMap<Monomial, i128> = BTreeMap::new();
                for ((a, b), c) in self.edges.iter() {
                    *deg.entry(b.times(&Monomial::var(*a))).or_insert(0) += *c as i128;
                    *deg.entry(*b).or_insert(0) -= *c as i128;
                }
                deg.values().all(|&c| c == 0)
            }
        }
    }

    /// Coordinates in `C_1` as Laurent polynomials per edge generator.
    pub fn to_edge_coords(&self) -> Vec<LaurentPoly> {
        let d = self.ambient.dim();
        let mut out: Vec<LaurentPoly> = (0..self.ambient.edge_generators())
            .map(|_| LaurentPoly::zero(d))
            .collect();
        for ((e, b), c) in self.edges.iter() {
            out[*e].add_term(*b, (*c).into());
        }
        out
    }

    pub fn from_edge_coords(ambient: Ambient, coords: &[LaurentPoly]) -> Result<GridCycle> {
        let mut out = GridCycle::new(ambient);
        for (e, p) in coords.iter().enumerate() {
            for (m, c) in p.terms() {
                add_entry(&mut out.edges, (e, *m), c.to_i64().ok_or(Error::Overflow)?)?;
            }
        }
        prune(&mut out.edges);
        Ok(out)
    }

    fn min_corner(&self) -> Monomial {
        let mut corner = [i64::MAX; 3];
        for (_, b) in self.edges.keys() {
            for (c, e) in corner.iter_mut().zip(b.0.iter()) {
                *c = (*c).min(*e);
            }
        }
        for c in corner.iter_mut().skip(self.ambient.dim()) {
            *c = 0;
        }
        Monomial(corner)
    }
}

impl fmt::Display for GridCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ambient.dim();
        for ((e, b), c) in self.edges.iter() {
            writeln!(f, "{} {}: {}", self.ambient.edge_name(*e), point_string(b, d), c)?;
        }
        Ok(())
    }
}

/// Integral 2-chain of plaquettes `P_i` at lattice points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoChain {
    ambient: Ambient,
    faces: BTreeMap<FaceKey, i64>,
}

impl TwoChain {
    pub fn new(ambient: Ambient) -> Self {
        TwoChain {
            ambient,
            faces: BTreeMap::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn add_face(&mut self, normal: usize, base: Monomial, c: i64) -> Result<()> {
        assert!(normal < self.ambient.dim());
        add_entry(&mut self.faces, (normal, base), c)?;
        prune(&mut self.faces);
        Ok(())
    }

    pub fn faces(&self) -> impl Iterator<Item = (&FaceKey, &i64)> {
        self.faces.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    /// Cellular boundary, computed cell by cell from the square geometry.
    pub fn boundary(&self) -> Result<GridCycle> {
        let mut out = GridCycle::new(self.ambient);
        for ((i, g), c) in self.faces.iter() {
            match self.ambient {
                Ambient::Relative => {
                    // P_x over [g, g + e_y], P_y over [g, g + e_x]
                    let other = 1 - i;
                    add_entry(&mut out.edges, (0, *g), *c)?;
                    add_entry(&mut out.edges, (0, g.times(&Monomial::var(other))), -c)?;
                }
                Ambient::Torus => {
                    // oriented by (e_a, e_b) = (e_{i+1}, e_{i+2})
                    let a = (i + 1) % 3;
                    let b = (i + 2) % 3;
                    let ea = Monomial::var(a);
                    let eb = Monomial::var(b);
                    add_entry(&mut out.edges, (a, *g), *c)?;
                    add_entry(&mut out.edges, (b, g.times(&ea)), *c)?;
                    add_entry(&mut out.edges, (a, g.times(&eb)), -c)?;
                    add_entry(&mut out.edges, (b, *g), -c)?;
                }
            }
        }
        prune(&mut out.edges);
        Ok(out)
    }

    pub fn from_plaquettes(chain: &PlaquetteChain) -> Result<TwoChain> {
        let mut out = TwoChain::new(chain.ambient());
        for (i, p) in chain.coords().iter().enumerate() {
            for (m, c) in p.terms() {
                add_entry(&mut out.faces, (i, *m), c.to_i64().ok_or(Error::Overflow)?)?;
            }
        }
        prune(&mut out.faces);
        Ok(out)
    }

    /// Plaquette coordinates, before relation normalization.
    pub fn plaquette_coords(&self) -> Vec<LaurentPoly> {
        let d = self.ambient.dim();
        let mut out: Vec<LaurentPoly> = (0..d).map(|_| LaurentPoly::zero(d)).collect();
        for ((i, g), c) in self.faces.iter() {
            out[*i].add_term(*g, (*c).into());
        }
        out
    }
}

impl fmt::Display for TwoChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ambient.dim();
        for ((i, g), c) in self.faces.iter() {
            writeln!(f, "P_{} {}: {}", var_name(*i), point_string(g, d), c)?;
        }
        Ok(())
    }
}

/// Default sweep order for [`fill_cycle`].
pub fn default_fill_axes(ambient: Ambient) -> [usize; 2] {
    match ambient {
        Ambient::Relative => [1, 0],
        Ambient::Torus => [2, 1],
    }
}

/// A 2-chain bounding `c`, built by sweeping toward the smallest corner of
/// the support along the default axes.
pub fn fill_cycle(c: &GridCycle) -> Result<TwoChain> {
    fill_cycle_along(c, default_fill_axes(c.ambient))
}

/// [`fill_cycle`] with an explicit pair of distinct sweep axes.
pub fn fill_cycle_along(c: &GridCycle, axes: [usize; 2]) -> Result<TwoChain> {
    let d = c.ambient.dim();
    if axes[0] == axes[1] || axes.iter().any(|&a| a >= d) {
        return Err(Error::InvalidArgument(format!("bad sweep axes {axes:?}")));
    }
    if !c.boundary_is_zero() {
        return Err(Error::NotACycle);
    }
    let mut s = TwoChain::new(c.ambient);
    if c.is_empty() {
        return Ok(s);
    }
    let corner = c.min_corner();
    match c.ambient {
        Ambient::Relative => {
            for ((_, g), &n) in c.edges.iter() {
                // walk g down to the corner, first along axes[0], then axes[1];
                // Z_q - Z_{q - e_b} is the boundary of -P_{other(b)} at q - e_b
                let mut q = *g;
                for &b in axes.iter() {
                    let other = 1 - b;
                    for t in corner.exp(b)..q.exp(b) {
                        let mut at = q;
                        at.0[b] = t;
                        add_entry(&mut s.faces, (other, at), -n)?;
                    }
                    q.0[b] = corner.exp(b);
                }
            }
            prune(&mut s.faces);
        }
        Ambient::Torus => {
            let mut rest = c.clone();
            for &b in axes.iter() {
                let mut layer = TwoChain::new(c.ambient);
                for ((a, q), &n) in rest.edges.iter() {
                    if *a == b {
                        continue;
                    }
                    // edge E_a(q) is swept down to level corner_b by the squares
                    // spanned by (e_a, e_b) at heights corner_b .. q_b - 1
                    let normal = 3 - a - b;
                    let orient = if (normal + 1) % 3 == *a { 1 } else { -1 };
                    for t in corner.exp(b)..q.exp(b) {
                        let mut at = *q;
                        at.0[b] = t;
                        add_entry(&mut layer.faces, (normal, at), -n * orient)?;
                    }
                }
                prune(&mut layer.faces);
                rest = rest.try_add(&layer.boundary()?, -1)?;
                for (k, v) in layer.faces {
                    add_entry(&mut s.faces, k, v)?;
                }
            }
            prune(&mut s.faces);
            if !rest.is_empty() {
                return Err(Error::NotACycle);
            }
        }
    }
    Ok(s)
}

/// Equivariant linking of a single plaquette `P_normal` at `g` with `line`.
pub fn face_linking(line: &Line, normal: usize, g: &Monomial) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(line.dim());
    for (h, s) in line.face_crossings(normal, g)? {
        out.add_term(h, s.into());
    }
    Ok(out)
}

/// Intersection of a filling 2-chain with the orbit of `line`.
pub fn chain_linking(s: &TwoChain, line: &Line) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(line.dim());
    for ((i, g), c) in s.faces.iter() {
        for (h, sign) in line.face_crossings(*i, g)? {
            out.add_term(h, (sign * c).into());
        }
    }
    Ok(out)
}

/// `sum_g iota(S, g . line) g` for `S = fill_cycle(c)`, over canonical
/// orbit representatives `g`.
pub fn geometric_linking(c: &GridCycle, line: &Line) -> Result<LaurentPoly> {
    if c.ambient != line.ambient {
        return Err(Error::DimensionMismatch(c.ambient.dim(), line.dim()));
    }
    chain_linking(&fill_cycle(c)?, line)
}

/// The closed edge path traced by a word over `x, y, z` from the origin.
/// In the relative model `z`-edges become the vertical edge `Z` over their
/// position and horizontal steps are contracted.
pub fn word_to_cycle(w: &FreeWord, ambient: Ambient) -> Result<GridCycle> {
    if w.rank() > 3 {
        return Err(Error::InvalidArgument(String::from(
            "words must be over at most 3 letters",
        )));
    }
    let mut pos = Monomial::one();
    let mut steps: Vec<(usize, Monomial, i64)> = Vec::with_capacity(w.len());
    for &(a, e) in w.letters() {
        if e > 0 {
            steps.push((a, pos, 1));
            pos = pos.times(&Monomial::var(a));
        } else {
            pos = pos.times(&Monomial::var(a).inverse());
            steps.push((a, pos, -1));
        }
    }
    if !pos.is_one() {
        return Err(Error::NotInCommutatorSubgroup);
    }
    let mut out = GridCycle::new(ambient);
    for (a, base, c) in steps {
        match ambient {
            Ambient::Torus => add_entry(&mut out.edges, (a, base), c)?,
            Ambient::Relative => {
                if a == 2 {
                    let mut b = base;
                    b.0[2] = 0;
                    add_entry(&mut out.edges, (0, b), c)?;
                }
            }
        }
    }
    prune(&mut out.edges);
    Ok(out)
}

/// Homology class of a cycle in normalized plaquette coordinates.
pub fn cycle_to_plaquettes(c: &GridCycle) -> Result<PlaquetteChain> {
    let s = fill_cycle(c)?;
    Ok(PlaquetteChain::new(c.ambient, s.plaquette_coords()))
}

/// Boundary cycle of a plaquette chain, cell by cell.
pub fn plaquettes_to_cycle(p: &PlaquetteChain) -> Result<GridCycle> {
    TwoChain::from_plaquettes(p)?.boundary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[i64]) -> Monomial {
        Monomial::new(e)
    }

    fn square(ambient: Ambient, normal: usize, g: Monomial) -> GridCycle {
        let mut s = TwoChain::new(ambient);
        s.add_face(normal, g, 1).unwrap();
        s.boundary().unwrap()
    }

    #[test]
    fn fill_single_plaquette() {
        for normal in 0..3 {
            let c = square(Ambient::Torus, normal, m(&[2, -1, 3]));
            let s = fill_cycle(&c).unwrap();
            assert_eq!(s.len(), 1);
            assert_eq!(s.faces().next().unwrap(), (&(normal, m(&[2, -1, 3])), &1));
        }
        for normal in 0..2 {
            let c = square(Ambient::Relative, normal, m(&[1, 1]));
            let s = fill_cycle(&c).unwrap();
            assert_eq!(s.faces().collect::<Vec<_>>(), [(&(normal, m(&[1, 1])), &1)]);
        }
    }

    #[test]
    fn fill_empty_and_rectangle() {
        assert!(fill_cycle(&GridCycle::new(Ambient::Torus)).unwrap().is_empty());
        // 2x1 rectangle in the xy-plane: boundary edges traced by hand
        let mut c = GridCycle::new(Ambient::Torus);
        c.add_edge(0, m(&[0, 0, 0]), 1).unwrap();
        c.add_edge(0, m(&[1, 0, 0]), 1).unwrap();
        c.add_edge(1, m(&[2, 0, 0]), 1).unwrap();
        c.add_edge(0, m(&[1, 1, 0]), -1).unwrap();
        c.add_edge(0, m(&[0, 1, 0]), -1).unwrap();
        c.add_edge(1, m(&[0, 0, 0]), -1).unwrap();
        let s = fill_cycle(&c).unwrap();
        assert_eq!(s.boundary().unwrap(), c);
        let faces: Vec<_> = s.faces().map(|(k, v)| (*k, *v)).collect();
        assert_eq!(faces, [((2, m(&[0, 0, 0])), 1), ((2, m(&[1, 0, 0])), 1)]);
    }

    #[test]
    fn non_cycles_are_rejected() {
        let mut c = GridCycle::new(Ambient::Torus);
        c.add_edge(0, m(&[0, 0, 0]), 1).unwrap();
        assert_eq!(fill_cycle(&c), Err(Error::NotACycle));
        let mut r = GridCycle::new(Ambient::Relative);
        r.add_edge(0, m(&[0, 0]), 2).unwrap();
        assert_eq!(fill_cycle(&r), Err(Error::NotACycle));
    }

    fn unit_lines() -> Vec<Line> {
        alloc::vec![
            Line::new(Ambient::Torus, "l_x", &[1, 0, 0], &[1, 2, 3], 8).unwrap(),
            Line::new(Ambient::Torus, "l_y", &[0, 1, 0], &[1, 1, 1], 6).unwrap(),
            Line::new(Ambient::Torus, "l_z", &[0, 0, 1], &[1, 1, 1], 4).unwrap(),
        ]
    }

    #[test]
    fn axis_lines_pair_diagonally() {
        for (i, l) in unit_lines().iter().enumerate() {
            for normal in 0..3 {
                let c = square(Ambient::Torus, normal, Monomial::one());
                let lk = geometric_linking(&c, l).unwrap();
                let want = if i == normal {
                    LaurentPoly::one(3)
                } else {
                    LaurentPoly::zero(3)
                };
                assert_eq!(lk, want, "P_{normal} with {}", l.label);
            }
        }
    }

    #[test]
    fn meridian_line_example() {
        // the (1,1)-curve, drawn with negative slope
        let l0 = Line::new(Ambient::Relative, "l_0", &[1, -1], &[1, 1], 4).unwrap();
        let px = square(Ambient::Relative, 0, Monomial::one());
        let y = Monomial::var(1);
        let x = Monomial::var(0);
        let c = px.try_add(&px.translate(&y), -1).unwrap();
        assert_eq!(
            geometric_linking(&c, &l0).unwrap(),
            LaurentPoly::parse("1 - y", 2).unwrap()
        );
        let c = px.translate(&x).try_add(&px.translate(&y), -1).unwrap();
        assert!(geometric_linking(&c, &l0).unwrap().is_zero());
    }

    #[test]
    fn transversality_checks() {
        assert!(Line::new(Ambient::Relative, "a", &[1, -1], &[1, 1], 2)
            .unwrap()
            .check_transverse()
            .is_err());
        assert!(Line::new(Ambient::Relative, "a", &[1, -1], &[1, 1], 4)
            .unwrap()
            .check_transverse()
            .is_ok());
        assert!(Line::new(Ambient::Torus, "a", &[1, 0, -1], &[1, 1, 1], 2)
            .unwrap()
            .check_transverse()
            .is_err());
        assert!(Line::new(Ambient::Torus, "a", &[0, 0, 1], &[0, 1, 1], 4)
            .unwrap()
            .check_transverse()
            .is_err());
        assert!(Line::new(Ambient::Torus, "a", &[2, 0, 0], &[1, 1, 1], 4).is_err());
        let a = Line::new(Ambient::Torus, "a", &[1, 0, 0], &[1, 1, 1], 4).unwrap();
        let b = Line::new(Ambient::Torus, "b", &[0, 1, 0], &[1, 1, 1], 4).unwrap();
        assert!(!a.disjoint_from(&b));
        let b = Line::new(Ambient::Torus, "b", &[0, 1, 0], &[1, 1, 1], 6).unwrap();
        assert!(a.disjoint_from(&b));
        let c = Line::new(Ambient::Torus, "c", &[1, 0, 0], &[3, 5, 5], 4).unwrap();
        assert!(!a.disjoint_from(&c));
    }

    #[test]
    fn words_trace_squares() {
        let w = FreeWord::parse("[x,y]", 3).unwrap();
        assert_eq!(
            word_to_cycle(&w, Ambient::Torus).unwrap(),
            square(Ambient::Torus, 2, Monomial::one())
        );
        let w = FreeWord::parse("[[x,y],z]", 3).unwrap();
        let c = word_to_cycle(&w, Ambient::Torus).unwrap();
        assert_eq!(c.edges().count(), 8);
        let sq = square(Ambient::Torus, 2, Monomial::one());
        assert_eq!(c, sq.try_add(&sq.translate(&Monomial::var(2)), -1).unwrap());
        assert!(word_to_cycle(&FreeWord::identity(3), Ambient::Torus)
            .unwrap()
            .is_empty());
        let w = FreeWord::parse("x y", 3).unwrap();
        assert_eq!(word_to_cycle(&w, Ambient::Torus), Err(Error::NotInCommutatorSubgroup));
    }

    #[test]
    fn relative_words_project_vertical_edges() {
        let w = FreeWord::parse("[z,y]", 3).unwrap();
        assert_eq!(
            word_to_cycle(&w, Ambient::Relative).unwrap(),
            square(Ambient::Relative, 0, Monomial::one())
        );
        let w = FreeWord::parse("[z,x]", 3).unwrap();
        assert_eq!(
            word_to_cycle(&w, Ambient::Relative).unwrap(),
            square(Ambient::Relative, 1, Monomial::one())
        );
    }

    fn arb_torus_chain() -> impl Strategy<Value = TwoChain> {
        proptest::collection::vec((0usize..3, -2i64..3, -2i64..3, -2i64..3, -3i64..4), 0..8).prop_map(|fs| {
            let mut s = TwoChain::new(Ambient::Torus);
            for (i, a, b, c, n) in fs {
                s.add_face(i, m(&[a, b, c]), n).unwrap();
            }
            s
        })
    }

    fn arb_relative_chain() -> impl Strategy<Value = TwoChain> {
        proptest::collection::vec((0usize..2, -3i64..4, -3i64..4, -3i64..4), 0..8).prop_map(|fs| {
            let mut s = TwoChain::new(Ambient::Relative);
            for (i, a, b, n) in fs {
                s.add_face(i, m(&[a, b]), n).unwrap();
            }
            s
        })
    }

    fn generic_torus_lines() -> Vec<Line> {
        alloc::vec![
            Line::new(Ambient::Torus, "a", &[1, 0, -2], &[1, 3, 2], 7).unwrap(),
            Line::new(Ambient::Torus, "b", &[0, 1, -3], &[2, 1, 5], 11).unwrap(),
            Line::new(Ambient::Torus, "c", &[2, 3, 1], &[1, 2, 4], 13).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn fill_bounds_torus(s in arb_torus_chain()) {
            let c = s.boundary().unwrap();
            prop_assert_eq!(fill_cycle(&c).unwrap().boundary().unwrap(), c.clone());
            prop_assert_eq!(fill_cycle_along(&c, [0, 2]).unwrap().boundary().unwrap(), c);
        }

        #[test]
        fn fill_bounds_relative(s in arb_relative_chain()) {
            let c = s.boundary().unwrap();
            prop_assert_eq!(fill_cycle(&c).unwrap().boundary().unwrap(), c.clone());
            prop_assert_eq!(fill_cycle_along(&c, [0, 1]).unwrap().boundary().unwrap(), c);
        }

        #[test]
        fn linking_independent_of_filling(s in arb_torus_chain()) {
            let c = s.boundary().unwrap();
            let f1 = fill_cycle_along(&c, [2, 1]).unwrap();
            let f2 = fill_cycle_along(&c, [0, 2]).unwrap();
            for l in generic_torus_lines() {
                prop_assert_eq!(chain_linking(&f1, &l).unwrap(), chain_linking(&f2, &l).unwrap());
                prop_assert_eq!(chain_linking(&s, &l).unwrap(), chain_linking(&f1, &l).unwrap());
            }
        }

        #[test]
        fn linking_independent_of_filling_relative(s in arb_relative_chain()) {
            let c = s.boundary().unwrap();
            let l = Line::new(Ambient::Relative, "a", &[1, -3], &[1, 2], 9).unwrap();
            let f = fill_cycle_along(&c, [0, 1]).unwrap();
            prop_assert_eq!(chain_linking(&s, &l).unwrap(), chain_linking(&f, &l).unwrap());
        }

        #[test]
        fn linking_is_equivariant(s in arb_torus_chain(), g in proptest::array::uniform3(-3i64..4)) {
            let c = s.boundary().unwrap();
            let g = Monomial(g);
            for l in generic_torus_lines() {
                let lhs = geometric_linking(&c.translate(&g), &l).unwrap();
                let rhs = geometric_linking(&c, &l).unwrap().translate(&g).map_monomials(|h| l.canonical(h));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
