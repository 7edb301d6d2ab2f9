//! The JSON instance format shared by every command.
//!
//! ```json
//! {
//!   "points": ["a", "b", "c"],
//!   "family": [["a", "b", "c"], ["a", "b"]],
//!   "mu": [{"set": ["a", "b", "c"], "mu": ["b"]}, {"set": ["a", "b"], "mu": ["a", "b"]}],
//!   "layers": [["a", "b"], ["c"]]
//! }
//! ```
//!
//! Other sections: `vocabulary` (points default to its valuations), `good`,
//! `prefrel` (`[attacker, attacked]` pairs of `name` or `name#k` copies),
//! `worlds`, `r_edges`, `d_edges`, `cross` (world to points), `target` and
//! `queries`. Sets are arrays of names. Unknown sections are kept as warnings.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value as Json;

use crate::bridge::valuation_names;
use crate::choice::{ChoiceFunction, Domain, Layering};
use crate::error::{Error, Result};
use crate::hierarchy::AccessGraph;
use crate::logic::{parse_formula, Formula, Theory, Vocabulary};
use crate::points::PointSet;
use crate::structure::PreferentialStructure;

pub const SECTIONS: [&str; 13] = [
    "vocabulary", "points", "family", "mu", "layers", "good", "prefrel", "worlds", "r_edges",
    "d_edges", "cross", "target", "queries",
];

#[derive(Deserialize)]
struct MuEntry {
    set: Vec<String>,
    mu: Vec<String>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawQuery {
    Entail {
        #[serde(default)]
        theory: Vec<String>,
        formula: String,
    },
    Bang {
        world: String,
        formula: String,
        /// World to the variables true there; unlisted worlds make everything false.
        #[serde(default)]
        valuations: BTreeMap<String, Vec<String>>,
    },
    Degree {
        world: String,
        other: String,
    },
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct Raw {
    vocabulary: Option<Vec<String>>,
    points: Option<Vec<String>>,
    family: Option<Vec<Vec<String>>>,
    mu: Option<Vec<MuEntry>>,
    layers: Option<Vec<Vec<String>>>,
    good: Option<Vec<String>>,
    prefrel: Option<Vec<(String, String)>>,
    worlds: Option<Vec<String>>,
    r_edges: Option<Vec<(String, String)>>,
    d_edges: Option<Vec<(String, String)>>,
    cross: Option<BTreeMap<String, Vec<String>>>,
    target: Option<Vec<String>>,
    queries: Option<Vec<RawQuery>>,
}

#[derive(Clone, Debug)]
pub enum Query {
    Entail {
        text: String,
        theory: Theory,
        formula: Formula,
    },
    Bang {
        text: String,
        world: usize,
        formula: Formula,
        valuations: Vec<u32>,
    },
    Degree {
        world: usize,
        other: usize,
    },
}

/// A validated instance. Each field is present when its sections were.
#[derive(Clone, Debug)]
pub struct Instance {
    pub path: String,
    pub vocabulary: Option<Vocabulary>,
    pub names: Vec<String>,
    pub choice: Option<ChoiceFunction>,
    pub layering: Option<Layering>,
    pub good: Option<PointSet>,
    pub structure: Option<PreferentialStructure>,
    pub access: Option<AccessGraph>,
    pub target: Option<Vec<usize>>,
    pub queries: Vec<Query>,
    /// Sections found in the file, in canonical order.
    pub sections: Vec<&'static str>,
    pub warnings: Vec<String>,
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Instance {
            path: self.path.to_string(),
            message: message.into(),
        }
    }

    fn point(&self, names: &[String], name: &str, at: &str) -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| self.err(format!("{at}: unknown point `{name}`")))
    }

    fn set(&self, names: &[String], items: &[String], at: &str) -> Result<PointSet> {
        items.iter().map(|n| self.point(names, n, at)).collect()
    }

    fn world(&self, worlds: &[String], name: &str, at: &str) -> Result<usize> {
        worlds
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| self.err(format!("{at}: unknown world `{name}`")))
    }

    /// `name` or `name#k`.
    fn copy_ref(&self, names: &[String], r: &str, at: &str) -> Result<(usize, usize)> {
        let (name, k) = match r.rsplit_once('#') {
            Some((n, k)) => {
                let k = k
                    .parse::<usize>()
                    .map_err(|_| self.err(format!("{at}: bad copy index in `{r}`")))?;
                (n, k)
            }
            None => (r, 0),
        };
        Ok((self.point(names, name, at)?, k))
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p)?;
    parse_instance(&text, &p.display().to_string())
}

/// Parse instance text; `path` only labels errors.
pub fn parse_instance(text: &str, path: &str) -> Result<Instance> {
    let ctx = Ctx { path };
    let doc: Json = serde_json::from_str(text)
        .map_err(|e| ctx.err(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let Json::Object(map) = &doc else {
        return Err(ctx.err("top level must be an object"));
    };
    let mut warnings = Vec::new();
    for key in map.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            warnings.push(format!("unknown section `{key}` ignored"));
        }
    }
    let sections: Vec<&'static str> = SECTIONS.iter().copied().filter(|s| map.contains_key(*s)).collect();
    let raw: Raw = serde_json::from_value(doc).map_err(|e| ctx.err(e.to_string()))?;

    let vocabulary = raw.vocabulary.as_ref().map(|v| Vocabulary::new(v)).transpose()?;
    let names = match (&raw.points, &vocabulary) {
        (Some(p), _) => p.clone(),
        (None, Some(v)) if v.len() <= 6 => valuation_names(v),
        (None, Some(_)) => return Err(ctx.err("valuation points need at most 6 variables")),
        (None, None) => Vec::new(),
    };

    let choice = match &raw.mu {
        None => {
            if raw.family.is_some() {
                warnings.push("family given without mu; it is unused".into());
            }
            None
        }
        Some(entries) => {
            let family: Vec<PointSet> = match &raw.family {
                Some(fam) => fam
                    .iter()
                    .enumerate()
                    .map(|(i, s)| ctx.set(&names, s, &format!("family[{i}]")))
                    .collect::<Result<_>>()?,
                None => entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| ctx.set(&names, &e.set, &format!("mu[{i}].set")))
                    .collect::<Result<_>>()?,
            };
            let domain = Arc::new(Domain::new(names.clone(), family).map_err(|e| ctx.err(e.to_string()))?);
            let mut table = vec![None; domain.family().len()];
            for (i, e) in entries.iter().enumerate() {
                let set = ctx.set(&names, &e.set, &format!("mu[{i}].set"))?;
                let mu = ctx.set(&names, &e.mu, &format!("mu[{i}].mu"))?;
                let pos = domain
                    .position(set)
                    .ok_or_else(|| ctx.err(format!("mu[{i}].set {} is not in the family", domain.show(set))))?;
                if table[pos].replace(mu).is_some() {
                    return Err(ctx.err(format!("mu[{i}].set {} given twice", domain.show(set))));
                }
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(k, t)| t.ok_or_else(|| ctx.err(format!("no mu entry for {}", domain.show(domain.family()[k])))))
                .collect::<Result<Vec<_>>>()?;
            Some(ChoiceFunction::new(domain, table).map_err(|e| ctx.err(e.to_string()))?)
        }
    };

    let layering = raw
        .layers
        .as_ref()
        .map(|ls| {
            let blocks = ls
                .iter()
                .enumerate()
                .map(|(i, l)| ctx.set(&names, l, &format!("layers[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Layering::new(&names, blocks).map_err(|e| ctx.err(e.to_string()))
        })
        .transpose()?;

    let good = raw.good.as_ref().map(|g| ctx.set(&names, g, "good")).transpose()?;

    let structure = raw
        .prefrel
        .as_ref()
        .map(|edges| {
            let refs = edges
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let at = format!("prefrel[{i}]");
                    Ok((ctx.copy_ref(&names, a, &at)?, ctx.copy_ref(&names, b, &at)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut counts = vec![1usize; names.len()];
            for &((p, k), (q, l)) in &refs {
                counts[p] = counts[p].max(k + 1);
                counts[q] = counts[q].max(l + 1);
            }
            let mut s = PreferentialStructure::new(names.clone())?;
            let mut first = Vec::with_capacity(names.len());
            for (p, &k) in counts.iter().enumerate() {
                first.push(s.copy_count());
                for _ in 0..k {
                    s.add_copy(p, "");
                }
            }
            for &((p, k), (q, l)) in &refs {
                s.add_attack(first[p] + k, first[q] + l)
                    .map_err(|e| ctx.err(format!("prefrel: {e}")))?;
            }
            Ok::<_, Error>(s)
        })
        .transpose()?;

    let access = match &raw.worlds {
        None => {
            for (sec, present) in [
                ("r_edges", raw.r_edges.is_some()),
                ("d_edges", raw.d_edges.is_some()),
                ("cross", raw.cross.is_some()),
                ("target", raw.target.is_some()),
            ] {
                if present {
                    return Err(ctx.err(format!("`{sec}` needs a `worlds` section")));
                }
            }
            None
        }
        Some(worlds) => {
            let pairs = |edges: &Option<Vec<(String, String)>>, sec: &str| {
                edges
                    .iter()
                    .flatten()
                    .enumerate()
                    .map(|(i, (a, b))| {
                        let at = format!("{sec}[{i}]");
                        Ok((ctx.world(worlds, a, &at)?, ctx.world(worlds, b, &at)?))
                    })
                    .collect::<Result<Vec<_>>>()
            };
            let r = pairs(&raw.r_edges, "r_edges")?;
            let mut g = AccessGraph::new(worlds.clone(), r, None).map_err(|e| ctx.err(e.to_string()))?;
            if raw.d_edges.is_some() {
                g = g.with_decision(pairs(&raw.d_edges, "d_edges")?)?;
            }
            if let Some(cross) = &raw.cross {
                let mut sets = vec![PointSet::EMPTY; worlds.len()];
                for (w, pts) in cross {
                    let at = format!("cross.{w}");
                    let m = ctx.world(worlds, w, &at)?;
                    sets[m] = ctx.set(&names, pts, &at)?;
                }
                g = g.with_cross(sets)?;
            }
            Some(g)
        }
    };
    let target = match (&raw.target, &raw.worlds) {
        (Some(t), Some(worlds)) => Some(
            t.iter()
                .map(|w| ctx.world(worlds, w, "target"))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => None,
    };

    let mut queries = Vec::new();
    for (i, q) in raw.queries.into_iter().flatten().enumerate() {
        let at = format!("queries[{i}]");
        let need_vocab = || {
            vocabulary
                .as_ref()
                .ok_or_else(|| ctx.err(format!("{at}: formulas need a `vocabulary` section")))
        };
        let need_worlds = || {
            raw.worlds
                .as_ref()
                .ok_or_else(|| ctx.err(format!("{at}: needs a `worlds` section")))
        };
        let formula = |v: &Vocabulary, s: &str| parse_formula(s, v).map_err(|e| ctx.err(format!("{at}: {e}")));
        queries.push(match q {
            RawQuery::Entail { theory, formula: f } => {
                let v = need_vocab()?;
                let t = theory.iter().map(|s| formula(v, s)).collect::<Result<Vec<_>>>()?;
                Query::Entail {
                    text: format!("{{{}}} |~ {f}", theory.join(", ")),
                    theory: Theory::new(t),
                    formula: formula(v, &f)?,
                }
            }
            RawQuery::Bang {
                world,
                formula: f,
                valuations,
            } => {
                let v = need_vocab()?;
                let worlds = need_worlds()?;
                let mut vals = vec![0u32; worlds.len()];
                for (w, trues) in &valuations {
                    let m = ctx.world(worlds, w, &at)?;
                    for var in trues {
                        let k = v
                            .index_of(var)
                            .ok_or_else(|| ctx.err(format!("{at}: unknown variable `{var}`")))?;
                        vals[m] |= 1 << k;
                    }
                }
                Query::Bang {
                    text: format!("{world} |= !{f}"),
                    world: ctx.world(worlds, &world, &at)?,
                    formula: formula(v, &f)?,
                    valuations: vals,
                }
            }
            RawQuery::Degree { world, other } => {
                let worlds = need_worlds()?;
                Query::Degree {
                    world: ctx.world(worlds, &world, &at)?,
                    other: ctx.world(worlds, &other, &at)?,
                }
            }
        });
    }

    Ok(Instance {
        path: path.to_string(),
        vocabulary,
        names,
        choice,
        layering,
        good,
        structure,
        access,
        target,
        queries,
        sections,
        warnings,
    })
}

/// A choice table and optional layering in instance form; reads back equal.
pub fn choice_instance_json(f: &ChoiceFunction, layering: Option<&Layering>) -> Json {
    let d = f.domain();
    let names = |s: PointSet| Json::from(s.iter().map(|x| d.name(x).to_string()).collect::<Vec<_>>());
    let mut out = serde_json::Map::new();
    out.insert("points".into(), Json::from(d.names().to_vec()));
    out.insert("family".into(), Json::Array(d.family().iter().map(|&y| names(y)).collect()));
    let mu = f
        .entries()
        .map(|(y, fy)| serde_json::json!({"set": names(y), "mu": names(fy)}))
        .collect();
    out.insert("mu".into(), Json::Array(mu));
    if let Some(l) = layering {
        out.insert("layers".into(), Json::Array(l.blocks().iter().map(|&b| names(b)).collect()));
    }
    Json::Object(out)
}

impl Instance {
    pub fn require_choice(&self) -> Result<&ChoiceFunction> {
        self.choice.as_ref().ok_or_else(|| self.missing("mu"))
    }

    pub fn require_layering(&self) -> Result<&Layering> {
        self.layering.as_ref().ok_or_else(|| self.missing("layers"))
    }

    pub fn require_structure(&self) -> Result<&PreferentialStructure> {
        self.structure.as_ref().ok_or_else(|| self.missing("prefrel"))
    }

    pub fn require_access(&self) -> Result<&AccessGraph> {
        self.access.as_ref().ok_or_else(|| self.missing("worlds"))
    }

    pub fn require_good(&self) -> Result<PointSet> {
        self.good.ok_or_else(|| self.missing("good"))
    }

    pub fn require_vocabulary(&self) -> Result<&Vocabulary> {
        self.vocabulary.as_ref().ok_or_else(|| self.missing("vocabulary"))
    }

    fn missing(&self, section: &str) -> Error {
        Error::Instance {
            path: self.path.clone(),
            message: format!("missing `{section}` section"),
        }
    }

    /// Warnings for sections present but not read by a command.
    pub fn unused(&self, used: &[&str]) -> Vec<String> {
        self.sections
            .iter()
            .filter(|s| !used.contains(s))
            .map(|s| format!("section `{s}` is not used by this command"))
            .collect()
    }
}
