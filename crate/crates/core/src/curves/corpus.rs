use super::{DegreeThreeMap, HyperellipticModel, PlaneModel};
use crate::algebra::parse::{parse_bipoly, parse_unipoly};
use crate::algebra::rational::parse_rational;
use crate::{Error, Result};
use serde::Deserialize;
use std::path::Path;

const DEFAULT_CORPUS: &str = include_str!("../../data/corpus.toml");

#[derive(Deserialize)]
struct RawCorpus {
    #[serde(default)]
    model: Vec<RawModel>,
    #[serde(default)]
    map: Vec<RawMap>,
    #[serde(default)]
    curve: Vec<RawCurve>,
}

#[derive(Deserialize)]
struct RawModel {
    label: String,
    vars: [String; 2],
    equation: String,
}

#[derive(Deserialize)]
struct RawMap {
    id: String,
    parent: String,
    g_numerator: String,
    g_denominator: String,
    f: String,
    curve_variable: String,
    #[serde(default = "zero_str")]
    parameter_shift: String,
}

fn zero_str() -> String {
    "0".into()
}

#[derive(Deserialize)]
struct RawCurve {
    id: String,
    map: String,
    equation: String,
}

/// A printed discriminant curve together with the map it comes from.
#[derive(Clone, Debug)]
pub struct CurveRecord {
    pub id: String,
    pub map: String,
    pub model: HyperellipticModel,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub models: Vec<PlaneModel>,
    pub maps: Vec<DegreeThreeMap>,
    pub curves: Vec<CurveRecord>,
}

impl Corpus {
    pub fn default_corpus() -> Result<Corpus> {
        Corpus::parse(DEFAULT_CORPUS)
    }

    pub fn load(path: &Path) -> Result<Corpus> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Corpus::parse(&s)
    }

    pub fn parse(src: &str) -> Result<Corpus> {
        let raw: RawCorpus = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        let mut c = Corpus::default();
        for m in raw.model {
            let f = parse_bipoly(&m.equation, &m.vars[0], &m.vars[1])?;
            c.models.push(PlaneModel { label: m.label, vars: m.vars, f });
        }
        for m in raw.map {
            let parent = c
                .models
                .iter()
                .find(|p| p.label == m.parent)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("map {}: unknown parent {}", m.id, m.parent)))?;
            let [v0, v1] = [parent.vars[0].clone(), parent.vars[1].clone()];
            if !parent.vars.contains(&m.curve_variable) {
                return Err(Error::InvalidInput(format!("map {}: curve variable {} not in parent", m.id, m.curve_variable)));
            }
            c.maps.push(DegreeThreeMap {
                g_num: parse_bipoly(&m.g_numerator, &v0, &v1)?,
                g_den: parse_bipoly(&m.g_denominator, &v0, &v1)?,
                f: parse_bipoly(&m.f, &m.curve_variable, "t")?,
                shift: parse_rational(&m.parameter_shift)?,
                curve_variable: m.curve_variable,
                id: m.id,
                parent,
            });
        }
        for r in raw.curve {
            if c.map(&r.map).is_none() {
                return Err(Error::InvalidInput(format!("curve {}: unknown map {}", r.id, r.map)));
            }
            let d = parse_unipoly(&r.equation, "t")?;
            let model = HyperellipticModel::new(&r.id, d)?;
            c.curves.push(CurveRecord { id: r.id, map: r.map, model });
        }
        Ok(c)
    }

    pub fn map(&self, id: &str) -> Option<&DegreeThreeMap> {
        self.maps.iter().find(|m| m.id == id)
    }

    pub fn curve(&self, id: &str) -> Option<&CurveRecord> {
        self.curves.iter().find(|c| c.id == id)
    }
}
