//! Serialized forms of links, linking matrices, certificates and finger maps.

use linkfill_core::certify::{Certificate, DegreeRecord, Injectivity, LinkingMatrix};
use linkfill_core::finger::FingerMoveMap;
use linkfill_core::linalg::IntMatrix;
use linkfill_core::modules::MeridianChain;
use linkfill_core::{Ambient, Component, Error, LaurentPoly, LinkSpec, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

fn small(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

fn small_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(small).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct ComponentJson {
    pub direction: Vec<i64>,
    pub label: String,
    pub offset_seed: u32,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LinkSpecJson {
    pub dim: usize,
    pub components: Vec<ComponentJson>,
}

impl From<&LinkSpec> for LinkSpecJson {
    fn from(l: &LinkSpec) -> Self {
        LinkSpecJson {
            dim: l.dim,
            components: l
                .components
                .iter()
                .map(|c| ComponentJson {
                    direction: c.direction.clone(),
                    label: c.label.clone(),
                    offset_seed: c.offset_seed,
                })
                .collect(),
        }
    }
}

impl TryFrom<&LinkSpecJson> for LinkSpec {
    type Error = Error;

    fn try_from(j: &LinkSpecJson) -> Result<LinkSpec> {
        let components = j
            .components
            .iter()
            .map(|c| Component::new(&c.direction, &c.label, c.offset_seed))
            .collect();
        LinkSpec::new(j.dim, components)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrixJson {
    pub k: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

impl TryFrom<&LinkingMatrix> for LinkingMatrixJson {
    type Error = Error;

    fn try_from(m: &LinkingMatrix) -> Result<Self> {
        Ok(LinkingMatrixJson {
            k: m.k,
            rows: m.rows.clone(),
            cols: m.cols.clone(),
            entries: m
                .entries
                .to_rows()
                .iter()
                .map(|r| small_vec(r))
                .collect::<Result<_>>()?,
        })
    }
}

impl TryFrom<&LinkingMatrixJson> for LinkingMatrix {
    type Error = Error;

    fn try_from(j: &LinkingMatrixJson) -> Result<LinkingMatrix> {
        if j.entries.len() != j.rows.len() || j.entries.iter().any(|r| r.len() != j.cols.len()) {
            return Err(Error::StructureMismatch(String::from(
                "entries do not match the row/column labels",
            )));
        }
        let entries = if j.entries.is_empty() {
            IntMatrix::zeros(0, j.cols.len())
        } else {
            IntMatrix::from_rows(&j.entries)
        };
        Ok(LinkingMatrix {
            k: j.k,
            rows: j.rows.clone(),
            cols: j.cols.clone(),
            entries,
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct DegreeJson {
    pub j: usize,
    pub injective: bool,
    /// Index into [`CertificateJson::matrices`].
    pub matrix_ref: usize,
    pub rank_bareiss: usize,
    pub rank_smith: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub geometric_agrees: Option<bool>,
    pub boundary_vanishes: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct CertificateJson {
    pub m: usize,
    pub dim: usize,
    pub link: LinkSpecJson,
    pub degrees: Vec<DegreeJson>,
    pub verdict: bool,
    pub lemma_chain: Vec<String>,
    pub matrices: Vec<LinkingMatrixJson>,
}

impl TryFrom<&Certificate> for CertificateJson {
    type Error = Error;

    fn try_from(c: &Certificate) -> Result<Self> {
        let mut degrees = Vec::new();
        let mut matrices = Vec::new();
        for (i, d) in c.degrees.iter().enumerate() {
            matrices.push(LinkingMatrixJson::try_from(&d.matrix)?);
            degrees.push(DegreeJson {
                j: d.j,
                injective: d.injectivity.injective,
                matrix_ref: i,
                rank_bareiss: d.injectivity.rank_bareiss,
                rank_smith: d.injectivity.rank_smith,
                geometric_agrees: d.geometric_agrees,
                boundary_vanishes: d.boundary_vanishes,
                witness: d.injectivity.witness.as_deref().map(small_vec).transpose()?,
            });
        }
        Ok(CertificateJson {
            m: c.m,
            dim: c.ambient.dim(),
            link: LinkSpecJson::from(&c.link),
            degrees,
            verdict: c.verdict,
            lemma_chain: c.lemma_chain.clone(),
            matrices,
        })
    }
}

impl TryFrom<&CertificateJson> for Certificate {
    type Error = Error;

    fn try_from(j: &CertificateJson) -> Result<Certificate> {
        let degrees = j
            .degrees
            .iter()
            .map(|d| {
                let m = j
                    .matrices
                    .get(d.matrix_ref)
                    .ok_or_else(|| Error::StructureMismatch(format!("dangling matrixRef {}", d.matrix_ref)))?;
                Ok(DegreeRecord {
                    j: d.j,
                    matrix: LinkingMatrix::try_from(m)?,
                    injectivity: Injectivity {
                        injective: d.injective,
                        rank_bareiss: d.rank_bareiss,
                        rank_smith: d.rank_smith,
                        witness: d.witness.as_ref().map(|w| w.iter().map(|&x| BigInt::from(x)).collect()),
                    },
                    geometric_agrees: d.geometric_agrees,
                    boundary_vanishes: d.boundary_vanishes,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            m: j.m,
            ambient: Ambient::from_dim(j.dim)?,
            link: LinkSpec::try_from(&j.link)?,
            degrees,
            verdict: j.verdict,
            lemma_chain: j.lemma_chain.clone(),
        })
    }
}

/// A finger map together with the link and degree it is checked against.
/// `values[e][l]` is the image of edge generator `e` on component `l`,
/// written as a Laurent polynomial.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct FingerMapJson {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub link: LinkSpecJson,
    pub values: Vec<Vec<String>>,
}

impl FingerMapJson {
    pub fn new(k: usize, seed: Option<u64>, link: &LinkSpec, f: &FingerMoveMap) -> Self {
        FingerMapJson {
            k,
            seed,
            link: LinkSpecJson::from(link),
            values: f
                .values
                .iter()
                .map(|m| m.coords().iter().map(|p| p.to_string()).collect())
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<(LinkSpec, FingerMoveMap)> {
        let link = LinkSpec::try_from(&self.link)?;
        let values = self
            .values
            .iter()
            .map(|row| {
                if row.len() != link.len() {
                    return Err(Error::DimensionMismatch(row.len(), link.len()));
                }
                let coords = row
                    .iter()
                    .map(|s| LaurentPoly::parse(s, link.dim))
                    .collect::<Result<Vec<_>>>()?;
                Ok(MeridianChain::new(&link, coords))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = FingerMoveMap::new(link.ambient(), values)?;
        Ok((link, f))
    }
}
