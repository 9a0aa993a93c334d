//! JSON input schemas and their conversion into library types.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use qcob_core::abelian::{to_int_matrix, FiniteAbelianGroup, GroupElement};
use qcob_core::exact::{parse_rational, Modulus, Rational, Residue};
use qcob_core::linking::{diagonal_form, linking_from_presentation, LinkingForm};
use qcob_core::obstruct::{connected_sum, reverse, DTable, KnotRecord, ManifoldDescriptor};

/// `[prime, exponent, multiplicity]`.
pub type Triple = (u64, u32, u32);

/// Deserialize with the JSON path and line of the first bad field in the error.
pub fn parse_str<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("parse error in {origin} at field `{path}`: {}", e.into_inner())
    })
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| anyhow!("bad rational {s:?}: {e}"))
}

pub fn group(triples: &[Triple]) -> Result<FiniteAbelianGroup> {
    Ok(FiniteAbelianGroup::from_triples(triples)?)
}

/// A linking form given directly, by a presentation matrix, or as a diagonal
/// sum of `lambda_u` on `Z/p^n`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum FormFile {
    Diagonal { p: u64, n: u32, units: Vec<i64> },
    Presentation(Vec<Vec<i64>>),
    Gram { group: Vec<Triple>, gram: Vec<Vec<String>> },
}

impl FormFile {
    pub fn to_form(&self) -> Result<LinkingForm> {
        match self {
            Self::Diagonal { p, n, units } => Ok(diagonal_form(*p, *n, units)?),
            Self::Presentation(a) => {
                check_square(a)?;
                Ok(linking_from_presentation(&to_int_matrix(a))?.form().clone())
            }
            Self::Gram { group: triples, gram } => gram_form(group(triples)?, gram),
        }
    }
}

fn check_square(a: &[Vec<i64>]) -> Result<()> {
    if a.iter().any(|row| row.len() != a.len()) {
        bail!("presentation matrix must be square");
    }
    Ok(())
}

fn gram_form(g: FiniteAbelianGroup, gram: &[Vec<String>]) -> Result<LinkingForm> {
    let k = g.rank();
    if gram.len() != k || gram.iter().any(|r| r.len() != k) {
        bail!("Gram matrix must be {k} x {k} for {g}");
    }
    let parsed = gram.iter().map(|r| r.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(LinkingForm::from_gram(g, &parsed)?)
}

/// One manifold. Exactly one of `h1`, `surgery`, `presentation`,
/// `connected_sum` and `reversed` gives the underlying data.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<Vec<Triple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surgery: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected_sum: Option<Vec<DescriptorFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reversed: Option<Box<DescriptorFile>>,
    /// Gram matrix in the coordinates of `h1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linking: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_table: Option<BTreeMap<String, String>>,
}

pub const DESCRIPTOR_KEYS: [&str; 9] =
    ["name", "h1", "surgery", "presentation", "connected_sum", "reversed", "linking", "rho0", "d_table"];

impl DescriptorFile {
    pub fn to_descriptor(&self, fallback: &str) -> Result<ManifoldDescriptor> {
        let name = self.name.clone().unwrap_or_else(|| fallback.to_string());
        let sources = [
            self.h1.is_some(),
            self.surgery.is_some(),
            self.presentation.is_some(),
            self.connected_sum.is_some(),
            self.reversed.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            bail!("{name}: give exactly one of h1, surgery, presentation, connected_sum, reversed");
        }
        let mut y = if let Some(t) = &self.h1 {
            ManifoldDescriptor::abstract_group(name.clone(), group(t)?)
        } else if let Some(n) = self.surgery {
            ManifoldDescriptor::surgery(name.clone(), n)?
        } else if let Some(a) = &self.presentation {
            check_square(a)?;
            ManifoldDescriptor::from_presentation(name.clone(), &to_int_matrix(a))?
        } else if let Some(parts) = &self.connected_sum {
            let parts = parts
                .iter()
                .enumerate()
                .map(|(i, d)| d.to_descriptor(&format!("{name}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            named(connected_sum(&parts), self.name.as_deref())
        } else {
            let inner = self.reversed.as_ref().expect("one source").to_descriptor(&format!("{name}'"))?;
            named(reverse(&inner), self.name.as_deref())
        };
        if let Some(gram) = &self.linking {
            let form = gram_form(y.h1().clone(), gram)?;
            y = y.with_linking(form).with_context(|| name.clone())?;
        }
        if let Some(r) = &self.rho0 {
            y = y.with_rho0(Residue::new(&rational(r)?, Modulus::Two));
        }
        if let Some(table) = &self.d_table {
            let t = d_table(y.h1(), table).with_context(|| format!("{name}: d_table"))?;
            y = y.with_d_table(t)?;
        }
        Ok(y)
    }
}

/// Sums and reversals keep their generated name unless one is given.
fn named(y: ManifoldDescriptor, name: Option<&str>) -> ManifoldDescriptor {
    match name {
        Some(n) => y.with_name(n),
        None => y,
    }
}

/// Element from a table key: comma separated coordinates, or a single
/// integer read through `Z/N` when the group is cyclic.
pub fn element(g: &FiniteAbelianGroup, key: &str) -> Result<GroupElement> {
    let parts: Vec<i64> = key
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| anyhow!("bad element label {key:?}")))
        .collect::<Result<_>>()?;
    if parts.len() == 1 && g.is_cyclic() {
        return Ok(g.cyclic_element(parts[0])?);
    }
    if parts.len() != g.rank() {
        bail!("label {key:?} needs {} coordinates for {g}", g.rank());
    }
    Ok(g.element(&parts)?)
}

pub fn d_table(g: &FiniteAbelianGroup, table: &BTreeMap<String, String>) -> Result<DTable> {
    let entries = table.iter().map(|(k, v)| Ok((element(g, k)?, rational(v)?))).collect::<Result<Vec<_>>>()?;
    Ok(DTable::from_entries(g.clone(), entries)?)
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub manifolds: Vec<DescriptorFile>,
}

impl FamilyFile {
    pub fn descriptors(&self) -> Result<Vec<ManifoldDescriptor>> {
        self.manifolds.iter().enumerate().map(|(i, d)| d.to_descriptor(&format!("Y{}", i + 1))).collect()
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KnotEntry {
    pub name: String,
    #[serde(default)]
    pub determinant: Option<i64>,
    #[serde(default)]
    pub cyclic: bool,
    #[serde(default)]
    pub goeritz: Option<Vec<Vec<i64>>>,
    /// Homology of the branched double cover.
    #[serde(default)]
    pub h1: Option<Vec<Triple>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KnotFile {
    pub knots: Vec<KnotEntry>,
}

impl KnotEntry {
    pub fn to_record(&self) -> Result<KnotRecord> {
        if let Some(g) = &self.goeritz {
            check_square(g)?;
        }
        let cover = match &self.h1 {
            Some(t) => Some(ManifoldDescriptor::abstract_group(format!("Y_{}", self.name), group(t)?)),
            None => None,
        };
        Ok(KnotRecord {
            name: self.name.clone(),
            determinant: self.determinant,
            cyclic: self.cyclic,
            goeritz: self.goeritz.as_deref().map(to_int_matrix),
            branched_cover: cover,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_files() {
        let text = r#"{"manifolds": [{"name": "L", "surgery": 5}, {"h1": [[3, 1, 2]]},
            {"connected_sum": [{"surgery": 3}, {"reversed": {"surgery": 3}}]}]}"#;
        let family: FamilyFile = parse_str(text, "test").unwrap();
        let ys = family.descriptors().unwrap();
        assert_eq!(ys[0].name(), "L");
        assert_eq!(ys[1].name(), "Y2");
        assert_eq!(ys[1].h1(), &FiniteAbelianGroup::homogeneous(3, 1, 2).unwrap());
        assert!(ys[2].rho0().unwrap().is_zero());
    }

    #[test]
    fn field_errors_name_the_path() {
        let err = parse_str::<FamilyFile>(r#"{"manifolds": [{"surgery": "five"}]}"#, "f.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("manifolds[0].surgery") && msg.contains("line 1"), "{msg}");
        let err = parse_str::<FamilyFile>(r#"{"manifold": []}"#, "f.json").unwrap_err();
        assert!(err.to_string().contains("unknown field"));
        let bad = DescriptorFile { surgery: Some(3), h1: Some(vec![(3, 1, 1)]), ..Default::default() };
        assert!(bad.to_descriptor("Y").is_err());
    }

    #[test]
    fn table_labels() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[15]).unwrap();
        assert_eq!(element(&g, "7").unwrap(), g.cyclic_element(7).unwrap());
        assert_eq!(element(&g, "1,2").unwrap(), g.element(&[1, 2]).unwrap());
        assert!(element(&g, "1,2,3").is_err());
        let t = FiniteAbelianGroup::trivial();
        assert_eq!(element(&t, "0").unwrap(), t.zero());
        let table: BTreeMap<String, String> = [("0".to_string(), "0".to_string())].into();
        assert!(d_table(&t, &table).unwrap().is_complete());
    }

    #[test]
    fn form_files() {
        let f: FormFile = parse_str(r#"{"diagonal": {"p": 3, "n": 1, "units": [1, 1, 1, 1]}}"#, "t").unwrap();
        assert_eq!(f.to_form().unwrap().group().rank(), 4);
        let f: FormFile = parse_str(r#"{"presentation": [[2, 1], [1, 2]]}"#, "t").unwrap();
        assert_eq!(f.to_form().unwrap().group().order(), 3u32.into());
        let f: FormFile = parse_str(r#"{"gram": {"group": [[3, 1, 1]], "gram": [["1/3"]]}}"#, "t").unwrap();
        assert!(f.to_form().unwrap().is_nondegenerate());
    }
}
