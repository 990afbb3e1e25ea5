//! JSON descriptions of convolution systems.
//!
//! One canonical ingestion format, versioned by `format: 1`. Two modes:
//! `semigroup` builds the system from an element list, an operation table,
//! and one of three measure blocks (`idempotent`, `generator`,
//! `per_interval`); `explicit` lists every interval space and every
//! multiplication table directly. Rationals are exact `"p/q"` strings.
//! Validation failures carry the JSON path of the offending field.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convsys::{ConvolutionSystem, FiniteSemigroup};
use crate::error::Error;
use crate::finprob::{parse_rat, FinProbSpace, ProbMorphism, Rat};
use crate::order::TimeSet;
use crate::projective::{CylinderEvent, CylinderTower};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Explicit,
    Semigroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupDesc {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasuresDesc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_interval: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub outcomes: Vec<String>,
    pub weights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDesc {
    pub from: String,
    pub to: String,
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDesc {
    pub levels: Vec<Vec<String>>,
    pub events: Vec<EventDesc>,
}

/// A parsed but not yet validated description document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub format: u32,
    pub times: Vec<String>,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measures: Option<MeasuresDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spaces: Option<BTreeMap<String, SpaceDesc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerDesc>,
}

fn located(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Description {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_str(text: &str) -> Result<SystemDescription, Error> {
    let desc: SystemDescription = serde_json::from_str(text)
        .map_err(|e| located("(document)", e.to_string()))?;
    if desc.format != 1 {
        return Err(located("format", format!("unsupported format {}", desc.format)));
    }
    Ok(desc)
}

pub fn parse_file(path: &std::path::Path) -> Result<SystemDescription, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| located(path.display().to_string(), e.to_string()))?;
    parse_str(&text)
}

pub fn serialize(desc: &SystemDescription) -> String {
    serde_json::to_string_pretty(desc).expect("description serializes")
}

fn parse_weights(path: &str, raw: &[String]) -> Result<Vec<Rat>, Error> {
    raw.iter()
        .enumerate()
        .map(|(i, s)| parse_rat(s).map_err(|e| located(format!("{path}[{i}]"), e.to_string())))
        .collect()
}

fn interval_key(times: &Arc<TimeSet>, key: &str, path: &str) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 2 {
        return Err(located(path, format!("interval key {key:?} is not \"s,t\"")));
    }
    let s = times
        .index_of(parts[0])
        .ok_or_else(|| located(path, format!("unknown time label {:?}", parts[0])))?;
    let t = times
        .index_of(parts[1])
        .ok_or_else(|| located(path, format!("unknown time label {:?}", parts[1])))?;
    if s >= t {
        return Err(located(path, format!("interval key {key:?} is not increasing")));
    }
    Ok((s, t))
}

fn triple_key(times: &Arc<TimeSet>, key: &str, path: &str) -> Result<(usize, usize, usize), Error> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 3 {
        return Err(located(path, format!("triple key {key:?} is not \"r,s,t\"")));
    }
    let idx = |l: &str| {
        times
            .index_of(l)
            .ok_or_else(|| located(path, format!("unknown time label {l:?}")))
    };
    let (r, s, t) = (idx(parts[0])?, idx(parts[1])?, idx(parts[2])?);
    if r >= s || s >= t {
        return Err(located(path, format!("triple key {key:?} is not increasing")));
    }
    Ok((r, s, t))
}

impl SystemDescription {
    /// Builds the described convolution system, with path-located
    /// diagnostics for every validation failure.
    pub fn to_system(&self) -> Result<Arc<ConvolutionSystem>, Error> {
        let times = TimeSet::new(self.times.clone())
            .map_err(|e| located("times", e.to_string()))?;
        match self.mode {
            Mode::Semigroup => self.semigroup_system(&times),
            Mode::Explicit => self.explicit_system(&times),
        }
    }

    fn semigroup_desc(&self) -> Result<FiniteSemigroup, Error> {
        let sg = self
            .semigroup
            .as_ref()
            .ok_or_else(|| located("semigroup", "semigroup mode needs a semigroup block"))?;
        FiniteSemigroup::new(sg.elements.clone(), sg.table.clone())
            .map_err(|e| located("semigroup.table", e.to_string()))
    }

    fn semigroup_system(&self, times: &Arc<TimeSet>) -> Result<Arc<ConvolutionSystem>, Error> {
        let sg = self.semigroup_desc()?;
        let measures = self
            .measures
            .as_ref()
            .ok_or_else(|| located("measures", "semigroup mode needs a measures block"))?;
        let given = [
            measures.idempotent.is_some(),
            measures.generator.is_some(),
            measures.per_interval.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if given != 1 {
            return Err(located(
                "measures",
                "exactly one of idempotent, generator, per_interval is required",
            ));
        }
        if let Some(raw) = &measures.idempotent {
            let mu = parse_weights("measures.idempotent", raw)?;
            FinProbSpace::new(sg.elements().to_vec(), mu.clone())
                .map_err(|e| located("measures.idempotent", e.to_string()))?;
            return ConvolutionSystem::from_idempotent(&sg, mu, Arc::clone(times))
                .map_err(|e| located("measures.idempotent", e.to_string()));
        }
        if let Some(raw) = &measures.generator {
            let nu = parse_weights("measures.generator", raw)?;
            return ConvolutionSystem::from_semigroup_generator(&sg, nu, Arc::clone(times))
                .map_err(|e| located("measures.generator", e.to_string()));
        }
        let per = measures.per_interval.as_ref().unwrap();
        let n = times.len();
        let mut spaces = BTreeMap::new();
        for s in 0..n {
            for t in s + 1..n {
                let key = format!("{},{}", times.label(s), times.label(t));
                let path = format!("measures.per_interval.{key}");
                let raw = per
                    .get(&key)
                    .ok_or_else(|| located(&*path, "missing interval measure"))?;
                let weights = parse_weights(&path, raw)?;
                let space = FinProbSpace::new(sg.elements().to_vec(), weights)
                    .map_err(|e| located(&*path, e.to_string()))?;
                spaces.insert((s, t), space);
            }
        }
        for key in per.keys() {
            interval_key(times, key, &format!("measures.per_interval.{key}"))?;
        }
        let mut mults = BTreeMap::new();
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    let domain = FinProbSpace::product(&[
                        Arc::clone(&spaces[&(r, s)]),
                        Arc::clone(&spaces[&(s, t)]),
                    ])?;
                    let m = sg.len();
                    let map = (0..domain.len()).map(|i| sg.op(i / m, i % m)).collect();
                    mults.insert(
                        (r, s, t),
                        ProbMorphism::new(domain, Arc::clone(&spaces[&(r, t)]), map)?,
                    );
                }
            }
        }
        ConvolutionSystem::from_parts(Arc::clone(times), spaces, mults)
    }

    fn explicit_system(&self, times: &Arc<TimeSet>) -> Result<Arc<ConvolutionSystem>, Error> {
        let spaces_desc = self
            .spaces
            .as_ref()
            .ok_or_else(|| located("spaces", "explicit mode needs a spaces block"))?;
        let mult_desc = self
            .mult
            .as_ref()
            .ok_or_else(|| located("mult", "explicit mode needs a mult block"))?;
        let n = times.len();
        let mut spaces = BTreeMap::new();
        for s in 0..n {
            for t in s + 1..n {
                let key = format!("{},{}", times.label(s), times.label(t));
                let path = format!("spaces.{key}");
                let desc = spaces_desc
                    .get(&key)
                    .ok_or_else(|| located(&*path, "missing interval space"))?;
                let weights = parse_weights(&format!("{path}.weights"), &desc.weights)?;
                let space = FinProbSpace::new(desc.outcomes.clone(), weights)
                    .map_err(|e| located(&*path, e.to_string()))?;
                spaces.insert((s, t), space);
            }
        }
        for key in spaces_desc.keys() {
            interval_key(times, key, &format!("spaces.{key}"))?;
        }
        let mut mults = BTreeMap::new();
        for (key, table) in mult_desc {
            let path = format!("mult.{key}");
            let (r, s, t) = triple_key(times, key, &path)?;
            let domain = FinProbSpace::product(&[
                Arc::clone(&spaces[&(r, s)]),
                Arc::clone(&spaces[&(s, t)]),
            ])?;
            if table.len() != domain.len() {
                return Err(located(
                    &*path,
                    format!("table has {} entries, expected {}", table.len(), domain.len()),
                ));
            }
            let codomain = Arc::clone(&spaces[&(r, t)]);
            let map = table
                .iter()
                .enumerate()
                .map(|(i, label)| {
                    codomain.index_of(label).ok_or_else(|| {
                        located(format!("{path}[{i}]"), format!("unknown outcome {label:?}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            mults.insert((r, s, t), ProbMorphism::new(domain, codomain, map)?);
        }
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    if !mults.contains_key(&(r, s, t)) {
                        return Err(located(
                            "mult",
                            format!(
                                "missing multiplication for triple ({},{},{})",
                                times.label(r),
                                times.label(s),
                                times.label(t)
                            ),
                        ));
                    }
                }
            }
        }
        ConvolutionSystem::from_parts(Arc::clone(times), spaces, mults)
    }

    /// Builds the refinement tower, if the description has one. Each level
    /// rebuilds the system from the same semigroup rule over the level's
    /// time labels; only semigroup mode supports towers.
    pub fn to_tower(&self) -> Result<Option<CylinderTower>, Error> {
        let Some(tower) = &self.tower else {
            return Ok(None);
        };
        if self.mode != Mode::Semigroup {
            return Err(located("tower", "towers need semigroup mode (one generating rule)"));
        }
        let sg = self.semigroup_desc()?;
        let measures = self.measures.as_ref().unwrap();
        let mut levels = Vec::new();
        for (i, labels) in tower.levels.iter().enumerate() {
            let path = format!("tower.levels[{i}]");
            let times =
                TimeSet::new(labels.clone()).map_err(|e| located(&*path, e.to_string()))?;
            let level = if let Some(raw) = &measures.idempotent {
                let mu = parse_weights("measures.idempotent", raw)?;
                ConvolutionSystem::from_idempotent(&sg, mu, times)
            } else if let Some(raw) = &measures.generator {
                let nu = parse_weights("measures.generator", raw)?;
                ConvolutionSystem::from_semigroup_generator(&sg, nu, times)
            } else {
                return Err(located(
                    "tower",
                    "towers need an idempotent or generator measure rule",
                ));
            }
            .map_err(|e| located(&*path, e.to_string()))?;
            levels.push(level);
        }
        let events = tower
            .events
            .iter()
            .map(|e| CylinderEvent {
                from: e.from.clone(),
                to: e.to.clone(),
                outcomes: e.outcomes.clone(),
            })
            .collect();
        Ok(Some(CylinderTower { levels, events }))
    }
}

/// Fixture A as a description document (semigroup mode, idempotent measure).
pub fn fixture_a_description() -> SystemDescription {
    SystemDescription {
        format: 1,
        times: vec!["0".into(), "1".into(), "2".into(), "3".into()],
        mode: Mode::Semigroup,
        semigroup: Some(SemigroupDesc {
            elements: vec!["0".into(), "1".into()],
            table: vec![vec![0, 1], vec![1, 0]],
        }),
        measures: Some(MeasuresDesc {
            idempotent: Some(vec!["1/2".into(), "1/2".into()]),
            generator: None,
            per_interval: None,
        }),
        spaces: None,
        mult: None,
        tower: None,
    }
}

/// Fixture B as a description document (semigroup mode, generator measure).
pub fn fixture_b_description() -> SystemDescription {
    SystemDescription {
        format: 1,
        times: vec!["0".into(), "1".into(), "2".into()],
        mode: Mode::Semigroup,
        semigroup: Some(SemigroupDesc {
            elements: vec!["0".into(), "1".into(), "2".into()],
            table: vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        }),
        measures: Some(MeasuresDesc {
            idempotent: None,
            generator: Some(vec!["1/2".into(), "1/2".into(), "0".into()]),
            per_interval: None,
        }),
        spaces: None,
        mult: None,
        tower: None,
    }
}
