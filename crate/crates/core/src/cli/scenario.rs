//! The versioned JSON scenario format.
//!
//! Every structure is given by explicit tables. Names are resolved and every
//! structure is validated by [`Scenario::resolve`] before any command runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::descent::{free_chains, orbit_chains, product_chains, HomologyFunctor};
use crate::error::{Error, Result};
use crate::fincat::{validate_blowup_square, BlowupSquare, CoverMode, FinMorphism, FinObject, Group, GroupContext};
use crate::homalg::RingSpec;
use crate::simplicial::{AugmentedSimplicialObject, TruncatedSimplicialObject};

pub const FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    /// `table[a][b] = a·b`, identity 0.
    Table(Vec<Vec<usize>>),
}

/// A plain set of `size` points, or a G-set with `action[g][x] = g·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub source: String,
    pub target: String,
    pub values: Vec<usize>,
}

/// `faces[n − 1][i] = d_i : X_n → X_{n−1}` and `degeneracies[n][i] = s_i : X_n → X_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialSpec {
    pub levels: Vec<ObjectSpec>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
    /// Defaults to the point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<ObjectSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<Vec<usize>>,
}

/// Names of the four edges `Z′ → X′` (top), `Z′ → Z` (left), `Z → X` (bottom), `X′ → X` (right).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareSpec {
    pub top: String,
    pub left: String,
    pub bottom: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    /// `free_chains`, `orbit_chains` or `product_chains`.
    pub name: String,
    pub ring: RingSpec,
    /// For `product_chains`: the simplicial object `K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<CoverMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upto: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default)]
    pub simplicial: BTreeMap<String, SimplicialSpec>,
    #[serde(default)]
    pub squares: BTreeMap<String, SquareSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<FunctorSpec>,
    #[serde(default)]
    pub params: Params,
}

impl Scenario {
    pub fn empty() -> Self {
        Scenario {
            format: FORMAT,
            description: None,
            groups: BTreeMap::new(),
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            simplicial: BTreeMap::new(),
            squares: BTreeMap::new(),
            functor: None,
            params: Params::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        if s.format != FORMAT {
            return Err(Error::InvalidInput(format!("unsupported scenario format {}; expected {FORMAT}", s.format)));
        }
        Ok(s)
    }

    /// Pretty JSON with a trailing newline; keys are ordered.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenarios serialize");
        s.push('\n');
        s
    }

    /// Resolves every name and runs every validator.
    pub fn resolve(&self) -> Result<Resolved> {
        let groups = self
            .groups
            .iter()
            .map(|(name, g)| {
                let group = match g {
                    GroupSpec::Cyclic(n) => Group::cyclic(*n),
                    GroupSpec::Symmetric(k) => Group::symmetric(*k),
                    GroupSpec::Table(t) => Group::new(t.clone()),
                }
                .map_err(|e| Error::InvalidInput(format!("group {name:?}: {e}")))?;
                Ok((name.clone(), Arc::new(group)))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let object = |what: &str, spec: &ObjectSpec| -> Result<FinObject> {
            build_object(&groups, spec).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
        };
        let objects =
            self.objects.iter().map(|(name, o)| Ok((name.clone(), object(&format!("object {name:?}"), o)?))).collect::<Result<BTreeMap<_, _>>>()?;
        let lookup = |what: &str, name: &str| -> Result<FinObject> {
            objects.get(name).cloned().ok_or_else(|| Error::InvalidInput(format!("{what} refers to unknown object {name:?}")))
        };
        let morphisms = self
            .morphisms
            .iter()
            .map(|(name, m)| {
                let what = format!("morphism {name:?}");
                let f = FinMorphism::new(lookup(&what, &m.source)?, lookup(&what, &m.target)?, m.values.clone())
                    .map_err(|e| Error::InvalidInput(format!("{what}: {e}")))?;
                Ok((name.clone(), f))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let simplicial = self
            .simplicial
            .iter()
            .map(|(name, x)| {
                let what = format!("simplicial object {name:?}");
                let wrap = |e: Error| Error::InvalidInput(format!("{what}: {e}"));
                let levels = x.levels.iter().enumerate().map(|(n, l)| object(&format!("{what} level {n}"), l)).collect::<Result<Vec<_>>>()?;
                let body = TruncatedSimplicialObject::new(levels, x.faces.clone(), x.degeneracies.clone()).map_err(wrap)?;
                let base = match &x.base {
                    Some(b) => object(&format!("{what} base"), b)?,
                    None => FinObject::point(&body.context()),
                };
                let aug = x.augmentation.clone().unwrap_or_else(|| vec![0; body.level(0).size()]);
                let y = AugmentedSimplicialObject::new(body, base, aug).map_err(wrap)?;
                let check = y.validate();
                if !check.valid {
                    return Err(wrap(Error::InvalidSimplicial(check.failure.unwrap_or_default())));
                }
                Ok((name.clone(), y))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let squares = self
            .squares
            .iter()
            .map(|(name, s)| {
                let edge = |e: &str| {
                    morphisms.get(e).cloned().ok_or_else(|| Error::InvalidInput(format!("square {name:?} refers to unknown morphism {e:?}")))
                };
                let sq = BlowupSquare { top: edge(&s.top)?, left: edge(&s.left)?, bottom: edge(&s.bottom)?, right: edge(&s.right)? };
                let check = validate_blowup_square(&sq);
                if !check.valid {
                    return Err(Error::InvalidBlowup(format!("square {name:?}: {}", check.reason.unwrap_or_default())));
                }
                Ok((name.clone(), sq))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        if let Some(f) = &self.functor {
            if f.name == "product_chains" {
                let k = f.complex.as_deref().ok_or_else(|| Error::InvalidInput("product_chains needs \"complex\"".into()))?;
                if !simplicial.contains_key(k) {
                    return Err(Error::InvalidInput(format!("functor refers to unknown simplicial object {k:?}")));
                }
            } else if f.complex.is_some() {
                return Err(Error::InvalidInput(format!("{} takes no complex", f.name)));
            }
            build_functor(f, f.ring, &simplicial)?;
        }
        Ok(Resolved { groups, objects, morphisms, simplicial, squares, functor: self.functor.clone() })
    }

    /// Records a group under `name`, as a multiplication table.
    pub fn add_group(&mut self, name: &str, g: &Group) {
        self.groups.insert(name.into(), GroupSpec::Table(g.table_rows()));
    }

    pub fn add_morphism(&mut self, name: &str, f: &FinMorphism, source: &str, target: &str, group: Option<&str>) {
        self.objects.insert(source.into(), ObjectSpec::from_object(f.source(), group));
        self.objects.insert(target.into(), ObjectSpec::from_object(f.target(), group));
        self.morphisms.insert(name.into(), MorphismSpec { source: source.into(), target: target.into(), values: f.values().to_vec() });
    }
}

fn build_object(groups: &BTreeMap<String, Arc<Group>>, spec: &ObjectSpec) -> Result<FinObject> {
    let x = match (&spec.group, &spec.action) {
        (None, None) => FinObject::plain(spec.size.ok_or_else(|| Error::InvalidInput("plain object needs \"size\"".into()))?),
        (Some(g), action) => {
            let group = groups.get(g).ok_or_else(|| Error::InvalidInput(format!("unknown group {g:?}")))?.clone();
            match action {
                Some(rows) => {
                    let x = FinObject::with_action(group, rows.clone())?;
                    if spec.size.is_some_and(|s| s != x.size()) {
                        return Err(Error::InvalidInput("\"size\" disagrees with the action table".into()));
                    }
                    x
                }
                None => FinObject::trivial(spec.size.ok_or_else(|| Error::InvalidInput("object needs \"size\" or \"action\"".into()))?, &Some(group)),
            }
        }
        (None, Some(_)) => return Err(Error::InvalidInput("an action needs a group".into())),
    };
    match &spec.labels {
        Some(l) => x.with_labels(l.clone()),
        None => Ok(x),
    }
}

impl ObjectSpec {
    /// G-sets are written with their full action table.
    pub fn from_object(x: &FinObject, group: Option<&str>) -> Self {
        let labels = x.labels().map(<[String]>::to_vec);
        match (x.action(), group) {
            (Some(a), Some(g)) => ObjectSpec { size: None, group: Some(g.into()), action: Some(a.rows()), labels },
            _ => ObjectSpec { size: Some(x.size()), group: None, action: None, labels },
        }
    }
}

impl SimplicialSpec {
    pub fn from_object(x: &AugmentedSimplicialObject, group: Option<&str>) -> Self {
        let body = x.body();
        let point = FinObject::point(&body.context());
        let trivial_aug = x.base() == &point;
        SimplicialSpec {
            levels: body.levels().iter().map(|l| ObjectSpec::from_object(l, group)).collect(),
            faces: body.face_tables()[1..].to_vec(),
            degeneracies: body.degeneracy_tables().to_vec(),
            base: (!trivial_aug).then(|| ObjectSpec::from_object(x.base(), group)),
            augmentation: (!trivial_aug).then(|| x.augmentation().to_vec()),
        }
    }
}

/// A scenario with every name resolved and every structure validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub groups: BTreeMap<String, Arc<Group>>,
    pub objects: BTreeMap<String, FinObject>,
    pub morphisms: BTreeMap<String, FinMorphism>,
    pub simplicial: BTreeMap<String, AugmentedSimplicialObject>,
    pub squares: BTreeMap<String, BlowupSquare>,
    pub functor: Option<FunctorSpec>,
}

fn pick<'a, T>(what: &str, map: &'a BTreeMap<String, T>, name: Option<&str>) -> Result<(&'a str, &'a T)> {
    match name {
        Some(n) => map.get_key_value(n).map(|(k, v)| (k.as_str(), v)).ok_or_else(|| Error::InvalidInput(format!("no {what} named {n:?}"))),
        None if map.len() == 1 => {
            let (k, v) = map.iter().next().expect("one entry");
            Ok((k.as_str(), v))
        }
        None if map.is_empty() => Err(Error::InvalidInput(format!("the scenario has no {what}"))),
        None => Err(Error::InvalidInput(format!("the scenario has several {what}s; choose one with --name"))),
    }
}

impl Resolved {
    /// The named simplicial object, or the only one that is not the functor's `K`.
    pub fn simplicial_object(&self, name: Option<&str>) -> Result<(&str, &AugmentedSimplicialObject)> {
        if name.is_none() {
            if let Some(k) = self.functor.as_ref().and_then(|f| f.complex.as_deref()) {
                let rest: BTreeMap<String, &AugmentedSimplicialObject> =
                    self.simplicial.iter().filter(|(n, _)| n.as_str() != k).map(|(n, x)| (n.clone(), x)).collect();
                if rest.len() == 1 {
                    let (n, _) = rest.into_iter().next().expect("one entry");
                    let (k, v) = self.simplicial.get_key_value(&n).expect("filtered from the map");
                    return Ok((k.as_str(), v));
                }
            }
        }
        pick("simplicial object", &self.simplicial, name)
    }

    pub fn morphism(&self, name: Option<&str>) -> Result<(&str, &FinMorphism)> {
        pick("morphism", &self.morphisms, name)
    }

    /// The scenario's functor, with the ring replaced when `ring` is given.
    pub fn functor(&self, ring: Option<RingSpec>) -> Result<Box<dyn HomologyFunctor>> {
        let spec = self.functor.as_ref().ok_or_else(|| Error::InvalidInput("the scenario selects no functor".into()))?;
        build_functor(spec, ring.unwrap_or(spec.ring), &self.simplicial)
    }

    /// The group name an object lives over, for writing it back.
    pub fn group_name(&self, ctx: &GroupContext) -> Option<&str> {
        let g = ctx.as_ref()?;
        self.groups.iter().find(|(_, h)| Arc::ptr_eq(h, g) || **h == *g).map(|(n, _)| n.as_str())
    }
}

fn build_functor(spec: &FunctorSpec, ring: RingSpec, simplicial: &BTreeMap<String, AugmentedSimplicialObject>) -> Result<Box<dyn HomologyFunctor>> {
    Ok(match spec.name.as_str() {
        "free_chains" => Box::new(free_chains(ring)),
        "orbit_chains" => Box::new(orbit_chains(ring)),
        "product_chains" => {
            let k = spec
                .complex
                .as_deref()
                .and_then(|k| simplicial.get(k))
                .ok_or_else(|| Error::InvalidInput("product_chains needs a known complex".into()))?;
            Box::new(product_chains(k.body(), ring)?)
        }
        other => return Err(Error::InvalidInput(format!("unknown functor {other:?}; expected free_chains, orbit_chains or product_chains"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = r#"{
        "format": 1,
        "simplicial": {
            "S1": { "levels": [{"size": 1}, {"size": 2}], "faces": [[[0, 0], [0, 0]]], "degeneracies": [[[0]]] }
        },
        "functor": { "name": "product_chains", "ring": "int", "complex": "S1" }
    }"#;

    #[test]
    fn parses_and_resolves() {
        let s = Scenario::parse(CIRCLE).unwrap();
        let r = s.resolve().unwrap();
        assert_eq!(r.simplicial["S1"].body().level_sizes(), vec![1, 2]);
        assert!(r.functor(None).unwrap().name().starts_with("product_chains"));
        assert_eq!(Scenario::parse(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Scenario::parse(&CIRCLE.replace("\"format\": 1", "\"format\": 2")).is_err());
        assert!(Scenario::parse(&CIRCLE.replace("\"levels\"", "\"level\"")).is_err());
        let bad = Scenario::parse(&CIRCLE.replace("[[[0, 0], [0, 0]]]", "[[[0, 0], [0, 1]]]")).unwrap();
        assert!(bad.resolve().is_err());
        let dangling = Scenario::parse(&CIRCLE.replace("\"complex\": \"S1\"", "\"complex\": \"S2\"")).unwrap();
        assert!(dangling.resolve().is_err());
    }

    #[test]
    fn gsets_round_trip() {
        let g = Arc::new(Group::cyclic(2).unwrap());
        let (x, _) = crate::random::coset_space(&g, &[0]);
        let mut s = Scenario::empty();
        s.add_group("Z2", &g);
        s.add_morphism("p", &FinMorphism::to_point(&x), "G", "pt", Some("Z2"));
        let r = Scenario::parse(&s.to_json()).unwrap().resolve().unwrap();
        assert_eq!(r.morphisms["p"].source(), &x);
    }
}
