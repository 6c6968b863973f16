//! JSON formats for fans, polynomials, algebra elements, modules, descent data
//! and quotients. Matrices are arrays of rows of `"p/q"` strings; cone keys
//! are comma-joined ray indices with `""` for the zero cone; arrow keys are
//! `"lower|upper"` for `u` and `"upper|lower"` for `v`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Entries};
use crate::descent::{DescentDatum, GlueMap};
use crate::equivariant::{EqDiagramModule, QuotientData};
use crate::error::{Error, Result};
use crate::fan::{ConeId, CoveringPair, Fan};
use crate::lattice::{IntMatrix, LatticeVector};
use crate::laurent::{LaurentPoly, Rational};
use crate::linalg::QMatrix;
use crate::pervmod::DiagramModule;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// A fan given inline or as a path relative to the referring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    Inline(FanJson),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<i64>,
}

/// A matrix entry: `"p/q"` or a bare integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Text(String),
    Int(i64),
}

pub type MatrixJson = Vec<Vec<ScalarJson>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub row: String,
    pub col: String,
    pub poly: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanRef>,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanRef>,
    #[serde(default)]
    pub spaces: BTreeMap<String, usize>,
    #[serde(default)]
    pub torus: BTreeMap<String, Vec<MatrixJson>>,
    #[serde(default)]
    pub u: BTreeMap<String, MatrixJson>,
    #[serde(default)]
    pub v: BTreeMap<String, MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentJson {
    pub fan: FanRef,
    pub charts: BTreeMap<String, ModuleJson>,
    #[serde(default)]
    pub glue: BTreeMap<String, BTreeMap<String, MatrixJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientJson {
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<Vec<i64>>>,
    /// Rank of the torus; needed only when the matrix has no rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

pub fn from_str<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

fn scalar(s: &ScalarJson) -> Result<Rational> {
    match s {
        ScalarJson::Text(t) => parse_rational(t),
        ScalarJson::Int(i) => Ok(Rational::from_integer((*i).into())),
    }
}

/// Parses a matrix of the expected shape; `[]` stands for any empty matrix.
pub fn parse_matrix(m: &MatrixJson, rows: usize, cols: usize, what: &str) -> Result<QMatrix> {
    if m.is_empty() && rows * cols == 0 {
        return Ok(QMatrix::zeros(rows, cols));
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let found_cols = m.first().map_or(0, Vec::len);
        return Err(Error::Shape(format!("{what}: expected {rows}x{cols}, found {}x{found_cols}", m.len())));
    }
    let data = m.iter().flatten().map(scalar).collect::<Result<Vec<_>>>()?;
    QMatrix::from_vec(rows, cols, data)
}

pub fn matrix_to_json(m: &QMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| m.row_slice(i).iter().map(|x| ScalarJson::Text(x.to_string())).collect()).collect()
}

pub fn fan_from_json(f: &FanJson) -> Result<Fan> {
    let rays = f.rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
    Fan::build(f.rank, rays, &f.max_cones)
}

pub fn fan_to_json(f: &Fan) -> Result<FanJson> {
    Ok(FanJson {
        rank: f.rank(),
        rays: f.rays().iter().map(LatticeVector::to_i64).collect::<Result<Vec<_>>>()?,
        max_cones: f.maximal_cones().into_iter().map(|c| f.cone(c).to_vec()).collect(),
    })
}

pub fn parse_fan(text: &str) -> Result<Fan> {
    fan_from_json(&from_str(text)?)
}

pub fn read_fan(path: &Path) -> Result<Fan> {
    parse_fan(&read_text(path)?)
}

/// Resolves a fan reference; paths are relative to `base`.
pub fn resolve_fan(r: &FanRef, base: Option<&Path>) -> Result<Fan> {
    match r {
        FanRef::Inline(f) => fan_from_json(f),
        FanRef::Path(p) => {
            let mut path = PathBuf::from(p);
            if path.is_relative() {
                if let Some(b) = base {
                    path = b.join(path);
                }
            }
            read_fan(&path)
        }
    }
}

pub fn parse_poly(terms: &[TermJson], nvars: usize) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(nvars);
    for t in terms {
        if t.e.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: t.e.len() });
        }
        let term = LaurentPoly::term(parse_rational(&t.c)?, t.e.iter().map(|&x| x.into()).collect());
        out = &out + &term;
    }
    Ok(out)
}

pub fn poly_to_json(p: &LaurentPoly) -> Result<Vec<TermJson>> {
    Ok(p.small_terms()?.into_iter().map(|(c, e)| TermJson { c: c.to_string(), e }).collect())
}

fn parse_pair_key(key: &str) -> Result<(&str, &str)> {
    key.split_once('|').ok_or_else(|| Error::MalformedKey(format!("{key:?} is not of the form a|b")))
}

/// Raw entries of an element file, without the membership check.
pub fn parse_entries(json: &ElementJson, fan: &Fan) -> Result<Entries> {
    let mut entries = Entries::new();
    for e in &json.entries {
        let (r, c) = (fan.parse_key(&e.row)?, fan.parse_key(&e.col)?);
        let p = parse_poly(&e.poly, fan.rank())?;
        let sum = match entries.get(&(r, c)) {
            Some(q) => q + &p,
            None => p,
        };
        entries.insert((r, c), sum);
    }
    entries.retain(|_, p| !p.is_zero());
    Ok(entries)
}

/// Fan of an element or module file, checked against `expected` if given.
fn file_fan(r: Option<&FanRef>, expected: Option<&Arc<Fan>>, base: Option<&Path>) -> Result<Arc<Fan>> {
    match (r, expected) {
        (Some(r), Some(f)) => {
            if resolve_fan(r, base)? != **f {
                return Err(Error::FanMismatch);
            }
            Ok(f.clone())
        }
        (Some(r), None) => Ok(Arc::new(resolve_fan(r, base)?)),
        (None, Some(f)) => Ok(f.clone()),
        (None, None) => Err(Error::Parse("no fan given".into())),
    }
}

pub fn parse_element(text: &str, fan: Option<&Arc<Fan>>, base: Option<&Path>) -> Result<AlgebraElement> {
    let json: ElementJson = from_str(text)?;
    let fan = file_fan(json.fan.as_ref(), fan, base)?;
    let entries = parse_entries(&json, &fan)?;
    AlgebraElement::from_entries(&fan, entries)
}

pub fn element_to_json(x: &AlgebraElement) -> Result<ElementJson> {
    let fan = x.fan();
    let entries = x
        .entries()
        .iter()
        .map(|(&(r, c), p)| Ok(EntryJson { row: fan.key(r), col: fan.key(c), poly: poly_to_json(p)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ElementJson { fan: Some(FanRef::Inline(fan_to_json(fan)?)), entries })
}

fn module_from_parts(json: &ModuleJson, fan: &Arc<Fan>, ntorus: usize) -> Result<DiagramModule> {
    let mut dims = vec![0; fan.num_cones()];
    for (k, &d) in &json.spaces {
        dims[fan.parse_key(k)?.0] = d;
    }
    let mut torus: Vec<Vec<QMatrix>> = dims.iter().map(|&d| vec![QMatrix::identity(d); ntorus]).collect();
    for (k, list) in &json.torus {
        let c = fan.parse_key(k)?;
        if list.len() != ntorus {
            return Err(Error::Shape(format!("cone {k:?}: {} torus matrices, expected {ntorus}", list.len())));
        }
        let d = dims[c.0];
        torus[c.0] = list
            .iter()
            .enumerate()
            .map(|(j, m)| parse_matrix(m, d, d, &format!("torus matrix {} on {k:?}", j + 1)))
            .collect::<Result<Vec<_>>>()?;
    }
    let pair = |key: &str, lower_first: bool| -> Result<CoveringPair> {
        let (a, b) = parse_pair_key(key)?;
        let (a, b) = (fan.parse_key(a)?, fan.parse_key(b)?);
        let (lo, hi) = if lower_first { (a, b) } else { (b, a) };
        fan.covering_pair(lo, hi).ok_or_else(|| Error::MalformedKey(format!("{key:?} is not a covering pair")))
    };
    let mut us = BTreeMap::new();
    for (k, m) in &json.u {
        let p = pair(k, true)?;
        us.insert(p, parse_matrix(m, dims[p.upper.0], dims[p.lower.0], &format!("u {k:?}"))?);
    }
    let mut vs = BTreeMap::new();
    for (k, m) in &json.v {
        let p = pair(k, false)?;
        vs.insert(p, parse_matrix(m, dims[p.lower.0], dims[p.upper.0], &format!("v {k:?}"))?);
    }
    DiagramModule::with_torus_rank(fan, ntorus, dims, torus, us, vs)
}

fn module_parts_to_json(m: &DiagramModule) -> ModuleJson {
    let fan = m.fan();
    let spaces = fan.cone_ids().map(|c| (fan.key(c), m.dim(c))).collect();
    let torus = fan.cone_ids().map(|c| (fan.key(c), m.torus(c).iter().map(matrix_to_json).collect())).collect();
    let u = m
        .u_arrows()
        .iter()
        .map(|(p, x)| (format!("{}|{}", fan.key(p.lower), fan.key(p.upper)), matrix_to_json(x)))
        .collect();
    let v = m
        .v_arrows()
        .iter()
        .map(|(p, x)| (format!("{}|{}", fan.key(p.upper), fan.key(p.lower)), matrix_to_json(x)))
        .collect();
    ModuleJson { fan: None, spaces, torus, u, v, quotient: None }
}

pub fn module_from_json(json: &ModuleJson, fan: Option<&Arc<Fan>>, base: Option<&Path>) -> Result<DiagramModule> {
    let fan = file_fan(json.fan.as_ref(), fan, base)?;
    module_from_parts(json, &fan, fan.rank())
}

pub fn parse_module(text: &str, base: Option<&Path>) -> Result<DiagramModule> {
    module_from_json(&from_str(text)?, None, base)
}

pub fn module_to_json(m: &DiagramModule) -> Result<ModuleJson> {
    let mut json = module_parts_to_json(m);
    json.fan = Some(FanRef::Inline(fan_to_json(m.fan())?));
    Ok(json)
}

pub fn quotient_from_json(json: &QuotientJson, rank: Option<usize>) -> Result<QuotientData> {
    let to_matrix = |rows: &Vec<Vec<i64>>| -> Result<IntMatrix> {
        let n = rows.first().map(Vec::len).or(json.rank).or(rank).ok_or_else(|| {
            Error::Parse("empty matrix needs a \"rank\" field".into())
        })?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("ragged integer matrix".into()));
        }
        IntMatrix::from_vec(rows.len(), n, rows.iter().flatten().map(|&x| x.into()).collect())
    };
    let q = match (&json.q, &json.characters) {
        (Some(q), None) => QuotientData::from_matrix(to_matrix(q)?)?,
        (None, Some(c)) => {
            let m = to_matrix(c)?;
            QuotientData::from_characters(m.cols(), &m)?
        }
        _ => return Err(Error::Parse("quotient needs exactly one of \"Q\" and \"characters\"".into())),
    };
    if let Some(n) = rank {
        if q.source_rank() != n {
            return Err(Error::DimensionMismatch { expected: n, found: q.source_rank() });
        }
    }
    Ok(q)
}

pub fn parse_quotient(text: &str) -> Result<QuotientData> {
    quotient_from_json(&from_str(text)?, None)
}

pub fn quotient_to_json(q: &QuotientData) -> Result<QuotientJson> {
    let m = q.q();
    let rows = (0..m.rows()).map(|i| m.row(i).to_i64()).collect::<Result<Vec<_>>>()?;
    Ok(QuotientJson { q: Some(rows), characters: None, rank: Some(m.cols()) })
}

pub fn parse_eq_module(text: &str, base: Option<&Path>) -> Result<EqDiagramModule> {
    let json: ModuleJson = from_str(text)?;
    let fan = file_fan(json.fan.as_ref(), None, base)?;
    let qj = json.quotient.as_ref().ok_or_else(|| Error::Parse("equivariant module needs a \"quotient\"".into()))?;
    let q = quotient_from_json(qj, Some(fan.rank()))?;
    let m = module_from_parts(&json, &fan, q.quotient_rank())?;
    EqDiagramModule::new(m, q)
}

pub fn eq_module_to_json(m: &EqDiagramModule) -> Result<ModuleJson> {
    let mut json = module_to_json(m.module())?;
    json.quotient = Some(quotient_to_json(m.quotient())?);
    Ok(json)
}

pub fn parse_descent(text: &str, base: Option<&Path>) -> Result<DescentDatum> {
    let json: DescentJson = from_str(text)?;
    let fan = Arc::new(resolve_fan(&json.fan, base)?);
    let mut charts = BTreeMap::new();
    for (k, mj) in &json.charts {
        let s = fan.parse_key(k)?;
        let sub = Arc::new(fan.restrict_to(s));
        charts.insert(s, module_from_json(mj, Some(&sub), base)?);
    }
    let chart_dim = |s: ConeId, r: ConeId| -> Result<usize> {
        let chart = charts.get(&s).ok_or_else(|| Error::Descent(format!("no chart for {:?}", fan.key(s))))?;
        let local = fan.translate_cone(chart.fan(), r)?;
        Ok(chart.dim(local))
    };
    let mut glue = BTreeMap::new();
    for (k, blocks) in &json.glue {
        let (a, b) = parse_pair_key(k)?;
        let (s, t) = (fan.parse_key(a)?, fan.parse_key(b)?);
        let mut map = GlueMap::new();
        for (rk, m) in blocks {
            let r = fan.parse_key(rk)?;
            map.insert(r, parse_matrix(m, chart_dim(t, r)?, chart_dim(s, r)?, &format!("gluing {k:?} on {rk:?}"))?);
        }
        glue.insert((s, t), map);
    }
    DescentDatum::new(&fan, charts, glue)
}

pub fn descent_to_json(d: &DescentDatum) -> Result<DescentJson> {
    let fan = d.fan();
    let charts = d.charts().iter().map(|(s, m)| (fan.key(*s), module_parts_to_json(m))).collect();
    let glue = d
        .glue_maps()
        .iter()
        .map(|(&(s, t), map)| {
            let blocks = map.iter().map(|(r, m)| (fan.key(*r), matrix_to_json(m))).collect();
            (format!("{}|{}", fan.key(s), fan.key(t)), blocks)
        })
        .collect();
    Ok(DescentJson { fan: FanRef::Inline(fan_to_json(fan)?), charts, glue })
}
