//! Linking matrices `i_k: I^k J / I^{k+1} J -> I^k H / I^{k+1} H`,
//! injectivity tests and filling certificates.
//!
//! Rows are indexed by [`basis_j`], columns by [`basis_h`]. The closed form
//! of an entry uses that `P_i` meets `|v_i|` translates of a line with
//! direction `v`, each with sign `sigma_i sign(v_i)`, so
//! `Lk(P_i) = sigma_i v_i` in degree zero and
//! `Lk((1-x)^a(1-y)^b(1-z)^c P_i) = sigma_i v_i * u^{(a,b,c)}` after the
//! line's substitution (e.g. `u_x = j u_y` on `l_{xy^j}`).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{chain_linking, fill_cycle, plaquettes_to_cycle, Ambient, Line};
use crate::linalg::{bareiss_rank, determinant, left_kernel, smith_normal_form, IntMatrix};
use crate::link::{standard_link, LinkSpec};
use crate::modules::{
    basis_h, basis_j, j_boundary, normal_form_h, BasisElement, LineQuotient, MeridianChain, PlaquetteChain,
    QuotientBasis,
};
use crate::ring::{AugClass, LaurentPoly, MultiIndex};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    ClosedForm,
    Geometric,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinkingMatrix {
    pub k: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: IntMatrix,
}

/// Whether `v` lies in one of the direction families with a closed form:
/// axis directions, `(1,-j)` in the plane, `(1,0,-j)` and `(0,1,-j)` in space
/// (up to sign).
pub fn supported_direction(ambient: Ambient, v: &[i64]) -> bool {
    let nonzero = v.iter().filter(|x| **x != 0).count();
    if nonzero == 1 {
        return v.iter().any(|x| x.abs() == 1);
    }
    let s = if v[0] < 0 || (v[0] == 0 && v.get(1).is_some_and(|&y| y < 0)) {
        -1
    } else {
        1
    };
    let w: Vec<i64> = v.iter().map(|x| s * x).collect();
    match ambient {
        Ambient::Relative => w[0] == 1 && w[1] <= -1,
        Ambient::Torus => (w[0] == 1 && w[1] == 0 && w[2] <= -1) || (w[0] == 0 && w[1] == 1 && w[2] <= -1),
    }
}

/// Linking class of a `J` basis element with one component, in the
/// variables left after the component's relation.
pub fn closed_form_entry(row: &BasisElement, link: &LinkSpec, component: usize) -> Result<AugClass> {
    let ambient = link.ambient();
    let c = &link.components[component];
    if !supported_direction(ambient, &c.direction) {
        return Err(Error::UnsupportedDirection {
            label: c.label.clone(),
            reason: String::from("not in the axis, (1,-j), (1,0,-j) or (0,1,-j) families"),
        });
    }
    let q = LineQuotient::new(link.dim, &c.direction, &c.label)?;
    let i = row.generator;
    let lambda = ambient.plaquette_sign(i) * c.direction[i];
    let class = AugClass::from_multi(link.dim, row.multiplier, BigInt::one());
    Ok(q.reduce(&class).scale(&BigInt::from(lambda)))
}

/// Bases and lines needed to assemble `i_k` row by row.
#[derive(Clone, Debug)]
pub struct MatrixPlan {
    pub k: usize,
    pub link: LinkSpec,
    pub basis_j: QuotientBasis,
    pub basis_h: QuotientBasis,
    pub lines: Vec<Line>,
}

impl MatrixPlan {
    pub fn new(k: usize, link: &LinkSpec) -> Result<Self> {
        let bh = basis_h(k, link)?;
        Ok(MatrixPlan {
            k,
            link: link.clone(),
            basis_j: basis_j(k, link.ambient()),
            basis_h: bh,
            lines: link.lines()?,
        })
    }

    pub fn row(&self, index: usize, mode: Mode) -> Result<Vec<BigInt>> {
        let e = &self.basis_j.elements[index];
        match mode {
            Mode::ClosedForm => self.closed_form_row(e),
            Mode::Geometric => self.geometric_row(e),
        }
    }

    fn closed_form_row(&self, e: &BasisElement) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); self.basis_h.len()];
        for component in 0..self.link.len() {
            let class = closed_form_entry(e, &self.link, component)?;
            for (alpha, c) in class.terms() {
                let col = BasisElement {
                    generator: component,
                    multiplier: *alpha,
                };
                let pos = self
                    .basis_h
                    .position(&col)
                    .ok_or_else(|| Error::StructureMismatch(format!("{col:?} outside the H basis")))?;
                out[pos] = c.clone();
            }
        }
        Ok(out)
    }

    /// Emits the boundary cycle of the row element, fills it afresh and
    /// intersects the filling with every line orbit.
    fn geometric_row(&self, e: &BasisElement) -> Result<Vec<BigInt>> {
        let ambient = self.link.ambient();
        let cycle = plaquettes_to_cycle(&PlaquetteChain::from_basis_element(ambient, e))?;
        let filling = fill_cycle(&cycle)?;
        let coords = self
            .lines
            .iter()
            .map(|l| chain_linking(&filling, l))
            .collect::<Result<Vec<LaurentPoly>>>()?;
        normal_form_h(&MeridianChain::new(&self.link, coords), &self.basis_h)
    }

    pub fn assemble(&self, rows: Vec<Vec<BigInt>>) -> LinkingMatrix {
        let entries = if rows.is_empty() {
            IntMatrix::zeros(0, self.basis_h.len())
        } else {
            IntMatrix::from_rows(&rows)
        };
        LinkingMatrix {
            k: self.k,
            rows: self.basis_j.labels.clone(),
            cols: self.basis_h.labels.clone(),
            entries,
        }
    }
}

pub fn build_matrix(k: usize, link: &LinkSpec, mode: Mode) -> Result<LinkingMatrix> {
    let plan = MatrixPlan::new(k, link)?;
    let rows = (0..plan.basis_j.len())
        .map(|i| plan.row(i, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(plan.assemble(rows))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Injectivity {
    pub injective: bool,
    pub rank_bareiss: usize,
    pub rank_smith: usize,
    /// A nonzero integer row vector `v` with `v M = 0`, in row-basis coordinates.
    pub witness: Option<Vec<BigInt>>,
}

impl Injectivity {
    pub fn methods_agree(&self) -> bool {
        self.rank_bareiss == self.rank_smith
    }
}

/// Trivial kernel of `v -> v M` on integer row vectors.
pub fn is_injective(m: &IntMatrix) -> Injectivity {
    let rank_bareiss = bareiss_rank(m);
    let rank_smith = smith_normal_form(m).rank();
    let full = m.rows();
    let injective = rank_bareiss == full && rank_smith == full;
    let witness = if injective { None } else { left_kernel(m).pop() };
    Injectivity {
        injective,
        rank_bareiss,
        rank_smith,
        witness,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VandermondeBlock {
    pub rows: Vec<String>,
    /// The block with column `j` divided by `j`.
    pub reduced: IntMatrix,
    pub det_block: BigInt,
    pub det_vandermonde: BigInt,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VandermondeReport {
    pub k: usize,
    pub ambient: Ambient,
    pub blocks: Vec<VandermondeBlock>,
}

fn structure(msg: String) -> Error {
    Error::StructureMismatch(msg)
}

fn find_row(b: &QuotientBasis, generator: usize, a: &[u32]) -> usize {
    b.position(&BasisElement {
        generator,
        multiplier: MultiIndex::new(a),
    })
    .expect("basis element")
}

fn find_col(b: &QuotientBasis, component: usize, a: &[u32]) -> Option<usize> {
    b.position(&BasisElement {
        generator: component,
        multiplier: MultiIndex::new(a),
    })
}

/// Checks a square block `B[a][j] = j^a` (`a, j = 1..n`) against
/// `V^T diag(1..n)` with `V[m][n] = m^{n-1}`.
fn vandermonde_block(
    m: &IntMatrix,
    rows: &[usize],
    cols: &[usize],
    labels: &QuotientBasis,
) -> Result<VandermondeBlock> {
    let n = rows.len();
    let block = m.submatrix(rows, cols);
    let mut reduced = IntMatrix::zeros(n, n);
    for (a, _) in rows.iter().enumerate() {
        for (j, _) in cols.iter().enumerate() {
            let x = block.get(a, j);
            let jj = BigInt::from(j as i64 + 1);
            if (x % &jj) != BigInt::zero() {
                return Err(structure(format!("block column {} not divisible by {}", j + 1, j + 1)));
            }
            reduced.set(a, j, x / &jj);
        }
    }
    let vt = IntMatrix::from_rows(
        &(0..n)
            .map(|a| (1..=n).map(|j| BigInt::from(j).pow(a as u32)).collect::<Vec<BigInt>>())
            .collect::<Vec<_>>(),
    );
    if reduced != vt {
        return Err(structure(format!("block is not a scaled Vandermonde matrix:\n{block}")));
    }
    Ok(VandermondeBlock {
        rows: rows.iter().map(|&r| labels.labels[r].clone()).collect(),
        det_block: determinant(&block),
        det_vandermonde: determinant(&reduced.transpose()),
        reduced,
    })
}

/// Verifies the block-triangular shape of `i_k` over `L_k` and extracts the
/// Vandermonde blocks responsible for injectivity.
pub fn vandermonde_check(k: usize, ambient: Ambient) -> Result<VandermondeReport> {
    if k == 0 {
        return Err(Error::InvalidArgument(String::from(
            "the Vandermonde structure starts at k = 1",
        )));
    }
    let link = standard_link(k, ambient);
    let plan = MatrixPlan::new(k, &link)?;
    let mat = build_matrix(k, &link, Mode::ClosedForm)?;
    let m = &mat.entries;
    let bj = &plan.basis_j;
    let bh = &plan.basis_h;
    let ku = k as u32;
    let mut blocks = Vec::new();
    match ambient {
        Ambient::Relative => {
            // components: 0 = l_y, 1 = l_x, 1 + j = l_{xy^j}
            let axis_cols = [find_col(bh, 0, &[ku, 0]).unwrap(), find_col(bh, 1, &[0, ku]).unwrap()];
            let b0 = [find_row(bj, 1, &[ku, 0]), find_row(bj, 0, &[0, ku])];
            for r in 0..bj.len() {
                for (c, &col) in axis_cols.iter().enumerate() {
                    let want = if b0.get(c) == Some(&r) {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    };
                    if m.get(r, col) != &want {
                        return Err(structure(format!(
                            "axis column {} at row {}",
                            bh.labels[col], bj.labels[r]
                        )));
                    }
                }
            }
            let rows: Vec<usize> = (1..=ku).map(|a| find_row(bj, 0, &[a, ku - a])).collect();
            let cols: Vec<usize> = (1..=k).map(|j| find_col(bh, 1 + j, &[0, ku]).unwrap()).collect();
            blocks.push(vandermonde_block(m, &rows, &cols, bj)?);
            let full = determinant(m);
            if full != blocks[0].det_block {
                return Err(structure(format!(
                    "det i_k = {full} differs from the block determinant"
                )));
            }
        }
        Ambient::Torus => {
            // components: 0 = l_z, 1 = l_y, 2 = l_x, 2 + j = l_{xz^j}, 2 + k + j = l_{yz^j}
            let is_b0 = |e: &BasisElement| match e.generator {
                0 => e.multiplier.get(0) == 0,
                1 => e.multiplier.get(1) == 0,
                _ => true,
            };
            let axis_component = |g: usize| 2 - g;
            for (r, e) in bj.elements.iter().enumerate() {
                for (c, h) in bh.elements.iter().enumerate() {
                    let x = m.get(r, c);
                    if h.generator <= 2 {
                        let want = is_b0(e) && h.generator == axis_component(e.generator) && {
                            let mut a = e.multiplier;
                            a.0[e.generator] = 0;
                            a == h.multiplier
                        };
                        if *x != if want { BigInt::one() } else { BigInt::zero() } {
                            return Err(structure(format!(
                                "axis column {} at row {}",
                                bh.labels[c], bj.labels[r]
                            )));
                        }
                    } else if !is_b0(e) {
                        let xz = h.generator <= 2 + k;
                        let allowed = (e.generator == 0 && xz) || (e.generator == 1 && !xz);
                        if !allowed && !x.is_zero() {
                            return Err(structure(format!("row {} meets column {}", bj.labels[r], bh.labels[c])));
                        }
                    }
                }
            }
            // P_x rows with a >= 1 against l_{xz^j} at u_y^b u_z^{k-b}
            for b in 0..ku {
                let rows: Vec<usize> = (1..=ku - b).map(|a| find_row(bj, 0, &[a, b, ku - a - b])).collect();
                let cols: Vec<usize> = (1..=rows.len())
                    .map(|j| find_col(bh, 2 + j, &[0, b, ku - b]).unwrap())
                    .collect();
                blocks.push(vandermonde_block(m, &rows, &cols, bj)?);
            }
            // P_y rows with b >= 1 against l_{yz^j} at u_x^a u_z^{k-a}
            for a in 0..ku {
                let rows: Vec<usize> = (1..=ku - a).map(|b| find_row(bj, 1, &[a, b, ku - a - b])).collect();
                let cols: Vec<usize> = (1..=rows.len())
                    .map(|j| find_col(bh, 2 + k + j, &[a, 0, ku - a]).unwrap())
                    .collect();
                blocks.push(vandermonde_block(m, &rows, &cols, bj)?);
            }
        }
    }
    Ok(VandermondeReport { k, ambient, blocks })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CertifyOptions {
    /// Highest degree cross-checked against the geometric oracle; `None`
    /// disables the cross-check.
    pub geometric_depth: Option<usize>,
}

impl CertifyOptions {
    pub fn default_for(ambient: Ambient) -> Self {
        CertifyOptions {
            geometric_depth: Some(default_geometric_cap(ambient)),
        }
    }

    pub fn closed_form_only() -> Self {
        CertifyOptions { geometric_depth: None }
    }
}

pub fn default_geometric_cap(ambient: Ambient) -> usize {
    match ambient {
        Ambient::Relative => 4,
        Ambient::Torus => 3,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeRecord {
    pub j: usize,
    pub matrix: LinkingMatrix,
    pub injectivity: Injectivity,
    /// Agreement with the geometric oracle, if it was run at this degree.
    pub geometric_agrees: Option<bool>,
    /// `j(I^j J) ⊂ I^{j+1} C_1` on every basis element.
    pub boundary_vanishes: bool,
}

impl DegreeRecord {
    pub fn passed(&self) -> bool {
        self.injectivity.injective
            && self.injectivity.methods_agree()
            && self.geometric_agrees != Some(false)
            && self.boundary_vanishes
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub m: usize,
    pub ambient: Ambient,
    pub link: LinkSpec,
    pub degrees: Vec<DegreeRecord>,
    pub verdict: bool,
    pub lemma_chain: Vec<String>,
}

impl Certificate {
    /// First failing degree, with its kernel witness if any.
    pub fn failure(&self) -> Option<&DegreeRecord> {
        self.degrees.iter().find(|d| !d.passed())
    }
}

/// Whether `j` maps every basis element of `I^k J / I^{k+1} J` into `I^{k+1} C_1`.
pub fn boundary_vanishing(k: usize, ambient: Ambient) -> bool {
    basis_j(k, ambient).elements.iter().all(|e| {
        j_boundary(&PlaquetteChain::from_basis_element(ambient, e))
            .filtration_degree(k + 1)
            .at_least(k + 1)
    })
}

/// Certifies that `L_{m-3}` is `m`-filling: `i_j` injective for
/// `0 <= j <= m - 3` (closed form, two rank methods), cross-checked against
/// the oracle up to the configured depth, with the boundary-vanishing
/// hypothesis recorded per degree.
pub fn certify_filling(m: usize, ambient: Ambient, opts: CertifyOptions) -> Result<Certificate> {
    certify_filling_with(m, ambient, opts, build_matrix)
}

/// [`certify_filling`] with a caller-supplied matrix builder.
pub fn certify_filling_with<B>(m: usize, ambient: Ambient, opts: CertifyOptions, build: B) -> Result<Certificate>
where
    B: Fn(usize, &LinkSpec, Mode) -> Result<LinkingMatrix>,
{
    if m < 2 {
        return Err(Error::InvalidArgument(String::from("m must be at least 2")));
    }
    if m == 2 {
        return Ok(Certificate {
            m,
            ambient,
            link: LinkSpec::empty(ambient),
            degrees: Vec::new(),
            verdict: true,
            lemma_chain: vec![String::from(
                "m = 2: every spine has pi_1 surjecting onto H_1, so the empty link is 2-filling",
            )],
        });
    }
    let top = m - 3;
    let link = standard_link(top, ambient);
    let mut degrees = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let matrix = build(j, &link, Mode::ClosedForm)?;
        let injectivity = is_injective(&matrix.entries);
        let geometric_agrees = match opts.geometric_depth {
            Some(cap) if j <= cap => Some(build(j, &link, Mode::Geometric)?.entries == matrix.entries),
            _ => None,
        };
        degrees.push(DegreeRecord {
            j,
            matrix,
            injectivity,
            geometric_agrees,
            boundary_vanishes: boundary_vanishing(j, ambient),
        });
    }
    let verdict = degrees.iter().all(|d| d.passed());
    let lemma_chain = vec![
        format!("finger moves: j(I^j J) in I^(j+1) C_1 for 0 <= j <= {top}, so i_j is independent of the spine"),
        format!("links: i_j injective over L_{top} for 0 <= j <= {top} (j = 0 recorded explicitly)"),
        format!("lower central series: injectivity for 0 <= j <= {} = k - 2 with k = {} gives pi_1(G) -> pi_1(M - L) injective mod the {m}-th term", top, m - 1),
        format!("conclusion: L_{top} is {m}-filling"),
    ];
    Ok(Certificate {
        m,
        ambient,
        link,
        degrees,
        verdict,
        lemma_chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::single_curve_link;

    fn ints(m: &IntMatrix) -> Vec<Vec<i64>> {
        m.to_rows()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn degree_zero_is_identity() {
        let m = build_matrix(0, &standard_link(0, Ambient::Relative), Mode::ClosedForm).unwrap();
        assert_eq!(ints(&m.entries), [[1, 0], [0, 1]]);
        let m = build_matrix(0, &standard_link(0, Ambient::Torus), Mode::Geometric).unwrap();
        assert_eq!(ints(&m.entries), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    }

    #[test]
    fn degree_one_table() {
        let m = build_matrix(1, &standard_link(1, Ambient::Relative), Mode::ClosedForm).unwrap();
        assert_eq!(ints(&m.entries), [[1, 0, 1], [0, 1, 1], [0, 0, 1]]);
        assert_eq!(m.rows, ["(1-x) P_y", "(1-y) P_x", "(1-x) P_x"]);
        assert_eq!(m.cols, ["(1-x) l_y", "(1-y) l_x", "(1-y) l_{xy}"]);
    }

    #[test]
    fn closed_form_examples() {
        let link = standard_link(2, Ambient::Relative);
        let row = BasisElement {
            generator: 0,
            multiplier: MultiIndex::new(&[2, 0]),
        };
        let e = closed_form_entry(&row, &link, 3).unwrap();
        assert_eq!(e, AugClass::from_multi(2, MultiIndex::new(&[0, 2]), 4));
        let row = BasisElement {
            generator: 0,
            multiplier: MultiIndex::new(&[1, 1]),
        };
        assert_eq!(
            closed_form_entry(&row, &link, 3).unwrap(),
            AugClass::from_multi(2, MultiIndex::new(&[0, 2]), 2)
        );
        let link3 = standard_link(1, Ambient::Torus);
        let row = BasisElement {
            generator: 0,
            multiplier: MultiIndex::new(&[0, 1, 2]),
        };
        assert_eq!(
            closed_form_entry(&row, &link3, 2).unwrap(),
            AugClass::from_multi(3, MultiIndex::new(&[0, 1, 2]), 1)
        );
    }

    #[test]
    fn negative_control() {
        let m = build_matrix(1, &single_curve_link(), Mode::Geometric).unwrap();
        assert_eq!(ints(&m.entries), [[1], [1], [1]]);
        let inj = is_injective(&m.entries);
        assert!(!inj.injective);
        let w: Vec<i64> = inj.witness.unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(w, [0, 1, -1]);
    }

    #[test]
    fn vandermonde_small() {
        let r = vandermonde_check(2, Ambient::Relative).unwrap();
        assert_eq!(ints(&r.blocks[0].reduced.transpose()), [[1, 1], [1, 2]]);
        assert_eq!(r.blocks[0].det_block, BigInt::from(2));
        let r = vandermonde_check(1, Ambient::Relative).unwrap();
        assert_eq!(r.blocks[0].det_block, BigInt::one());
        assert_eq!(vandermonde_check(3, Ambient::Torus).unwrap().blocks.len(), 6);
    }

    #[test]
    fn certificates() {
        let c = certify_filling(2, Ambient::Torus, CertifyOptions::default_for(Ambient::Torus)).unwrap();
        assert!(c.verdict && c.link.is_empty());
        let c = certify_filling(3, Ambient::Relative, CertifyOptions::default_for(Ambient::Relative)).unwrap();
        assert!(c.verdict);
        assert_eq!(ints(&c.degrees[0].matrix.entries), [[1, 0], [0, 1]]);
        let c = certify_filling(5, Ambient::Relative, CertifyOptions::default_for(Ambient::Relative)).unwrap();
        assert!(c.verdict);
        assert_eq!(c.degrees.len(), 3);
    }
}
