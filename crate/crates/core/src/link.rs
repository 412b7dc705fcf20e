//! Periodic link specifications and the standard links `L_k`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{Ambient, Line};
use crate::ring::var_name;

/// One link component: the homology class of the curve in the base torus
/// and the seed from which its basepoint is derived.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub direction: Vec<i64>,
    pub label: String,
    pub offset_seed: u32,
}

impl Component {
    pub fn new(direction: &[i64], label: &str, offset_seed: u32) -> Self {
        Component {
            direction: direction.to_vec(),
            label: String::from(label),
            offset_seed,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinkSpec {
    pub dim: usize,
    pub components: Vec<Component>,
}

impl LinkSpec {
    pub fn new(dim: usize, components: Vec<Component>) -> Result<Self> {
        let spec = LinkSpec { dim, components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn empty(ambient: Ambient) -> Self {
        LinkSpec {
            dim: ambient.dim(),
            components: Vec::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::from_dim(self.dim).expect("validated dimension")
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.components.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        Ambient::from_dim(self.dim).map_err(|_| Error::InvalidLink(format!("dimension {}", self.dim)))?;
        let mut labels = BTreeSet::new();
        let mut seeds = BTreeSet::new();
        for c in self.components.iter() {
            if c.direction.len() != self.dim {
                return Err(Error::InvalidLink(format!(
                    "{}: direction has length {}, expected {}",
                    c.label,
                    c.direction.len(),
                    self.dim
                )));
            }
            if c.direction.iter().any(|x| x.abs() > 1 << 20) {
                return Err(Error::InvalidLink(format!("{}: direction too large", c.label)));
            }
            if !labels.insert(c.label.as_str()) {
                return Err(Error::InvalidLink(format!("duplicate label {}", c.label)));
            }
            if !seeds.insert(c.offset_seed) {
                return Err(Error::InvalidLink(format!("duplicate offset seed {}", c.offset_seed)));
            }
            if c.offset_seed > 1 << 16 {
                return Err(Error::InvalidLink(format!("{}: offset seed too large", c.label)));
            }
        }
        Ok(())
    }

    /// Lifted lines, one per component. Component `j` gets a basepoint with
    /// denominator `2 s + 4` (`s` its offset seed); numerators are the first
    /// in lexicographic order making the line transverse to the lattice and
    /// disjoint from every translate of the lines placed before it.
    pub fn lines(&self) -> Result<Vec<Line>> {
        self.validate()?;
        let ambient = self.ambient();
        let d = self.dim;
        let mut placed: Vec<Line> = Vec::with_capacity(self.len());
        for c in self.components.iter() {
            let den = 2 * c.offset_seed as i64 + 4;
            let mut numer = vec![1i64; d];
            let line = loop {
                let line = Line::new(ambient, &c.label, &c.direction, &numer, den)?;
                let ok = line.check_transverse().is_ok()
                    && (ambient == Ambient::Relative || placed.iter().all(|l| l.disjoint_from(&line)));
                if ok {
                    break line;
                }
                // next numerator vector in [1, den - 1]^d
                let mut pos = d;
                loop {
                    if pos == 0 {
                        return Err(Error::InvalidLink(format!("no admissible basepoint for {}", c.label)));
                    }
                    pos -= 1;
                    if numer[pos] < den - 1 {
                        numer[pos] += 1;
                        for n in numer[pos + 1..].iter_mut() {
                            *n = 1;
                        }
                        break;
                    }
                }
            };
            placed.push(line);
        }
        Ok(placed)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.label == label)
    }
}

/// Conventional label of a direction in the standard families, e.g.
/// `l_x`, `l_{xy^2}`, `l_{yz}`.
pub fn standard_label(direction: &[i64]) -> Option<String> {
    let nonzero: Vec<usize> = (0..direction.len()).filter(|&i| direction[i] != 0).collect();
    match nonzero.as_slice() {
        [i] => Some(format!("l_{}", var_name(*i))),
        [a, b] if direction[*a] == 1 && direction[*b] < 0 => {
            let j = -direction[*b];
            let pow = if j == 1 { String::new() } else { format!("^{j}") };
            Some(format!("l_{{{}{}{}}}", var_name(*a), var_name(*b), pow))
        }
        _ => None,
    }
}

/// `L_k`: in `T^2 x I` the curves `(0,1)`, `(1,0)`, `(1,-j)` for
/// `j = 1..k` (the first drawn with direction `(0,-1)`); in `T^3` the axis
/// curves `z, y, x` followed by `(1,0,-j)` and `(0,1,-j)`.
pub fn standard_link(k: usize, ambient: Ambient) -> LinkSpec {
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    match ambient {
        Ambient::Relative => {
            dirs.push(vec![0, -1]);
            dirs.push(vec![1, 0]);
            for j in 1..=k as i64 {
                dirs.push(vec![1, -j]);
            }
        }
        Ambient::Torus => {
            dirs.push(vec![0, 0, 1]);
            dirs.push(vec![0, 1, 0]);
            dirs.push(vec![1, 0, 0]);
            for j in 1..=k as i64 {
                dirs.push(vec![1, 0, -j]);
            }
            for j in 1..=k as i64 {
                dirs.push(vec![0, 1, -j]);
            }
        }
    }
    let components = dirs
        .iter()
        .enumerate()
        .map(|(s, v)| Component::new(v, &standard_label(v).expect("standard family"), s as u32))
        .collect();
    LinkSpec {
        dim: ambient.dim(),
        components,
    }
}

/// The one-component link of the `(1,1)`-curve in `T^2 x I`, drawn with
/// negative slope so that `x l_0 = y l_0`.
pub fn single_curve_link() -> LinkSpec {
    LinkSpec {
        dim: 2,
        components: vec![Component::new(&[1, -1], "l_0", 0)],
    }
}
