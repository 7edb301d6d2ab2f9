//! Commands over instances, each producing one [`RunReport`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::bridge::{check_logic, closure_table, entail, logic_from_mu, LogicCondition};
use crate::choice::{check_domain_closure, check_mu, ChoiceFunction, Closure, Layering, MuCondition};
use crate::error::{Error, Result};
use crate::general::{construct_general, construct_transitive};
use crate::generate::{fuzz, smooth_transitive_auto, Mode};
use crate::hierarchy::{
    bang, check_access_facts, degree_compare, extend_access, gamma, is_vacuous, max_alternations, satisfies,
    satisfies_by_trigger, AccessGraph, HierarchicalConditional,
};
use crate::instance::{Instance, Query};
use crate::logic::{defining_formula, Formula, ModelSet, Vocabulary};
use crate::points::PointSet;
use crate::report::{ConditionReport, Witness};
use crate::smooth::{rank_augment, repair_smooth};
use crate::structure::{verify_representation, PreferentialStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Represent,
    Entail,
    Ctd,
    Extend,
    Fuzz,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Check,
        Command::Represent,
        Command::Entail,
        Command::Ctd,
        Command::Extend,
        Command::Fuzz,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Represent => "represent",
            Command::Entail => "entail",
            Command::Ctd => "ctd",
            Command::Extend => "extend",
            Command::Fuzz => "fuzz",
        }
    }

    /// Instance sections the command reads.
    fn sections(self) -> &'static [&'static str] {
        match self {
            Command::Check => &["vocabulary", "points", "family", "mu", "layers", "prefrel"],
            Command::Represent => &["vocabulary", "points", "family", "mu", "layers"],
            Command::Entail => &["vocabulary", "points", "family", "mu", "layers", "prefrel", "queries"],
            Command::Ctd => &[
                "vocabulary", "points", "layers", "good", "prefrel", "worlds", "r_edges", "d_edges", "cross",
                "target", "queries",
            ],
            Command::Extend => &[
                "vocabulary", "points", "layers", "good", "prefrel", "worlds", "r_edges", "cross", "target",
            ],
            Command::Fuzz => &["points"],
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Instance {
                path: "command".into(),
                message: format!("unknown command `{s}`"),
            })
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Condition ids; `all` selects every one. `None` means the command default.
    pub conditions: Option<Vec<String>>,
    pub mode: Mode,
    pub depth: Option<usize>,
    pub seed: u64,
    pub budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            conditions: None,
            mode: Mode::General,
            depth: None,
            seed: 0,
            budget: 100,
        }
    }
}

/// A constructed object with a digest of its JSON form.
#[derive(Clone, Debug, Serialize)]
pub struct Artifact {
    pub name: String,
    pub sha256: String,
    pub content: Json,
}

impl Artifact {
    pub fn new(name: impl Into<String>, content: Json) -> Self {
        let bytes = serde_json::to_vec(&content).expect("json values serialize");
        let sha256 = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        Artifact {
            name: name.into(),
            sha256,
            content,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Answer {
    pub query: String,
    pub answer: Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Command,
    pub mode: Option<Mode>,
    pub reports: Vec<ConditionReport>,
    pub artifacts: Vec<Artifact>,
    pub answers: Vec<Answer>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    /// Wall time; kept out of the JSON so equal runs give equal bytes.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    fn new(command: Command) -> Self {
        RunReport {
            command,
            mode: None,
            reports: Vec::new(),
            artifacts: Vec::new(),
            answers: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }

    /// 0 when every report holds, 1 otherwise. Input errors never get a report; they exit 2.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn report(&self, condition: &str) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.condition == condition)
    }

    pub fn answer(&self, query: &str) -> Option<&Json> {
        self.answers.iter().find(|a| a.query == query).map(|a| &a.answer)
    }

    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }

    fn answer_with(&mut self, query: impl Into<String>, answer: Json) {
        self.answers.push(Answer {
            query: query.into(),
            answer,
        });
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.command.id())?;
        if let Some(m) = self.mode {
            write!(f, " ({})", serde_json::to_value(m).map_err(|_| fmt::Error)?.as_str().unwrap_or(""))?;
        }
        writeln!(f)?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for r in &self.reports {
            writeln!(f, "  {r}")?;
        }
        for a in &self.answers {
            writeln!(f, "  {} => {}", a.query, a.answer)?;
        }
        for a in &self.artifacts {
            writeln!(f, "  artifact {} sha256:{}", a.name, &a.sha256[..16])?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "{}", if self.passed() { "all checks hold" } else { "some checks fail" })
    }
}

/// Precondition failures of a construction become a failing report; every
/// other error is an input error and propagates.
fn refused<T>(r: Result<T>, report: &mut RunReport) -> Result<Option<T>> {
    match r {
        Ok(t) => Ok(Some(t)),
        Err(Error::Precondition { condition, witness }) => {
            report
                .reports
                .push(ConditionReport::fail(format!("requires {condition}"), Witness::text("witness", witness)));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn wants_all(ids: &[String]) -> bool {
    ids.iter().any(|s| s == "all")
}

pub fn run(command: Command, instance: Option<&Instance>, opts: &RunOptions) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    match (command, instance) {
        (Command::Fuzz, inst) => run_fuzz(inst, opts, &mut report)?,
        (_, None) => {
            return Err(Error::Instance {
                path: "-".into(),
                message: format!("`{}` needs an instance file", command.id()),
            })
        }
        (_, Some(inst)) => {
            report.warnings.extend(inst.warnings.iter().cloned());
            report.warnings.extend(inst.unused(command.sections()));
            match command {
                Command::Check => run_check(inst, opts, &mut report)?,
                Command::Represent => run_represent(inst, opts, &mut report)?,
                Command::Entail => run_entail(inst, opts, &mut report)?,
                Command::Ctd => run_ctd(inst, &mut report)?,
                Command::Extend => run_extend(inst, &mut report)?,
                Command::Fuzz => unreachable!("handled above"),
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn run_check(inst: &Instance, opts: &RunOptions, report: &mut RunReport) -> Result<()> {
    let layering = inst.layering.as_ref();
    if let Some(f) = &inst.choice {
        let (conds, closures) = match &opts.conditions {
            Some(ids) if !wants_all(ids) => {
                let mut conds = Vec::new();
                let mut closures = Vec::new();
                for id in ids {
                    match id.as_str() {
                        "union-closed" => closures.push(Closure::FiniteUnion),
                        "intersection-closed" => closures.push(Closure::FiniteIntersection),
                        _ => conds.push(id.parse::<MuCondition>()?),
                    }
                }
                (conds, closures)
            }
            _ => {
                let conds: Vec<MuCondition> = MuCondition::ALL
                    .into_iter()
                    .filter(|c| layering.is_some() || !c.needs_layering())
                    .collect();
                if layering.is_none() {
                    report.notes.push("no layers section; layered conditions skipped".into());
                }
                (conds, vec![Closure::FiniteUnion, Closure::FiniteIntersection])
            }
        };
        for c in closures {
            report.reports.push(check_domain_closure(f.domain(), c));
        }
        for c in conds {
            report.reports.push(check_mu(c, f, layering)?);
        }
    }
    if let Some(s) = &inst.structure {
        report.reports.push(s.is_transitive());
        report.reports.push(s.is_cycle_free());
        report.reports.push(s.is_ranked().0);
        if let Some(l) = layering {
            report.reports.push(s.is_a_ranked(l)?);
        }
        if let Some(f) = &inst.choice {
            report.reports.push(s.is_smooth(f.domain()));
            report.reports.push(verify_representation(s, f));
        }
        report.artifacts.push(Artifact::new("structure", serde_json::to_value(s).expect("serializable")));
    }
    if inst.choice.is_none() && inst.structure.is_none() {
        return Err(Error::Instance {
            path: inst.path.clone(),
            message: "`check` needs a `mu` or `prefrel` section".into(),
        });
    }
    Ok(())
}

fn layering_or_single(inst: &Instance, f: &ChoiceFunction, report: &mut RunReport) -> Result<Layering> {
    match &inst.layering {
        Some(l) => Ok(l.clone()),
        None => {
            report.notes.push("no layers section; all points share one layer".into());
            Layering::single(f.domain().names())
        }
    }
}

fn structure_artifact(report: &mut RunReport, s: &PreferentialStructure) {
    report.notes.push(format!("{} copies, {} attacks", s.copy_count(), s.edge_count()));
    report.artifacts.push(Artifact::new("structure", serde_json::to_value(s).expect("serializable")));
}

fn run_represent(inst: &Instance, opts: &RunOptions, report: &mut RunReport) -> Result<()> {
    let f = inst.require_choice()?;
    report.mode = Some(opts.mode);
    match opts.mode {
        Mode::General => {
            let l = layering_or_single(inst, f, report)?;
            if let Some(s) = refused(construct_general(f, &l), report)? {
                report.reports.push(verify_representation(&s, f));
                report.reports.push(s.is_a_ranked(&l)?);
                structure_artifact(report, &s);
            }
        }
        Mode::Transitive => {
            let l = layering_or_single(inst, f, report)?;
            let depth = opts.depth.unwrap_or(f.domain().point_count() + 1);
            if let Some(out) = refused(construct_transitive(f, &l, depth), report)? {
                let s = &out.structure;
                report.reports.push(verify_representation(s, f));
                report.reports.push(s.is_transitive());
                if out.a_ranked_mode {
                    report.reports.push(s.is_a_ranked(&l)?);
                } else if let Some(ob) = &out.obstruction {
                    report.notes.push(format!("built without rank attacks: {ob}"));
                }
                structure_artifact(report, s);
            }
        }
        Mode::Smooth | Mode::SmoothTransitive => {
            let built = if opts.mode == Mode::Smooth {
                repair_smooth(f)
            } else {
                smooth_transitive_auto(f).map(|(s, restricted)| {
                    if restricted {
                        report
                            .notes
                            .push("some set has an empty choice; points outside the kernel get no copies".into());
                    }
                    s
                })
            };
            if let Some(s) = refused(built, report)? {
                report.reports.push(verify_representation(&s, f));
                report.reports.push(s.is_smooth(f.domain()));
                if opts.mode == Mode::SmoothTransitive {
                    report.reports.push(s.is_transitive());
                    report.reports.push(s.is_cycle_free());
                }
                let s = match &inst.layering {
                    Some(l) => match refused(rank_augment(&s, l), report)? {
                        Some(a) => {
                            report.reports.push(a.is_a_ranked(l)?);
                            let mut v = verify_representation(&a, f);
                            v.condition = "ranked-represents".into();
                            report.reports.push(v);
                            a
                        }
                        None => s,
                    },
                    None => s,
                };
                structure_artifact(report, &s);
            }
        }
    }
    Ok(())
}

/// Layer blocks over valuations as defining formulas, lowest first.
fn layer_formulas(l: &Layering, v: &Vocabulary) -> Result<Vec<Formula>> {
    l.blocks()
        .iter()
        .map(|&b| {
            let m = ModelSet::from_points(v.len(), b)
                .ok_or_else(|| Error::ValuationMismatch {
                    points: l.names().len(),
                    valuations: v.valuation_count(),
                })?;
            Ok(defining_formula(&m, v))
        })
        .collect()
}

fn run_entail(inst: &Instance, opts: &RunOptions, report: &mut RunReport) -> Result<()> {
    let v = inst.require_vocabulary()?;
    if inst.structure.is_none() && inst.choice.is_none() {
        return Err(Error::Instance {
            path: inst.path.clone(),
            message: "`entail` needs a `prefrel` or `mu` section".into(),
        });
    }
    let table = || match &inst.structure {
        Some(s) => closure_table(s, v),
        None => logic_from_mu(inst.require_choice()?, v),
    };
    for q in &inst.queries {
        if let Query::Entail { text, theory, formula } = q {
            let holds = match &inst.structure {
                Some(s) => entail(s, v, theory, formula)?,
                None => table()?.entails(theory, formula),
            };
            report.answer_with(text.clone(), Json::Bool(holds));
        }
    }
    if let Some(ids) = &opts.conditions {
        let conds: Vec<LogicCondition> = if wants_all(ids) {
            LogicCondition::ALL
                .into_iter()
                .filter(|&c| c != LogicCondition::AMin || inst.layering.is_some())
                .collect()
        } else {
            ids.iter().map(|s| s.parse()).collect::<Result<_>>()?
        };
        let ct = table()?;
        let alphas = inst.layering.as_ref().map(|l| layer_formulas(l, v)).transpose()?;
        for c in conds {
            report.reports.push(check_logic(c, &ct, alphas.as_deref())?);
        }
        report.artifacts.push(Artifact::new("consequence", serde_json::to_value(&ct).expect("serializable")));
    }
    if report.answers.is_empty() && report.reports.is_empty() {
        report.notes.push("no entail queries and no --conditions given".into());
    }
    Ok(())
}

fn conditional(inst: &Instance, report: &mut RunReport) -> Result<Option<HierarchicalConditional>> {
    let l = inst.require_layering()?;
    let good = inst.require_good()?;
    let plain;
    let s = match &inst.structure {
        Some(s) => s,
        None => {
            report.notes.push("no prefrel section; one copy per point and only rank attacks".into());
            plain = PreferentialStructure::injective(inst.names.clone())?;
            &plain
        }
    };
    let Some(s) = refused(rank_augment(s, l), report)? else {
        return Ok(None);
    };
    refused(HierarchicalConditional::new(s, l.clone(), good), report)
}

fn world_set(g: &AccessGraph, ws: impl IntoIterator<Item = usize>) -> String {
    let names: Vec<&str> = ws.into_iter().map(|m| g.worlds()[m].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Fails with the first world whose verdict differs from the target.
fn target_report(c: &HierarchicalConditional, g: &AccessGraph, target: &[usize]) -> ConditionReport {
    let wrong: Vec<usize> = (0..g.worlds().len())
        .filter(|&m| satisfies(c, g, m) != target.contains(&m))
        .collect();
    match wrong.first() {
        None => ConditionReport::pass("target-match"),
        Some(_) => ConditionReport::fail("target-match", Witness::text("worlds", world_set(g, wrong))),
    }
}

fn run_ctd(inst: &Instance, report: &mut RunReport) -> Result<()> {
    let g = inst.require_access()?;
    let Some(c) = conditional(inst, report)? else {
        return Ok(());
    };
    let n = g.worlds().len();
    let mut sat = Vec::new();
    for m in 0..n {
        let holds = satisfies(&c, g, m);
        if holds {
            sat.push(m);
        }
        report.answer_with(
            format!("world {}", g.worlds()[m]),
            json!({
                "satisfies": holds,
                "trigger_layer": gamma(&c, g, m),
                "vacuous": is_vacuous(&c, g, m),
            }),
        );
    }
    report.notes.push(format!("satisfying worlds {}", world_set(g, sat)));
    let disagree: Vec<usize> = (0..n)
        .filter(|&m| satisfies(&c, g, m) != satisfies_by_trigger(&c, g, m))
        .collect();
    report.reports.push(if disagree.is_empty() {
        ConditionReport::pass("trigger-agrees")
    } else {
        ConditionReport::fail("trigger-agrees", Witness::text("worlds", world_set(g, disagree)))
    });
    report.reports.extend(check_access_facts(&c, g));
    if let Some(t) = &inst.target {
        report.reports.push(target_report(&c, g, t));
    }
    for q in &inst.queries {
        match q {
            Query::Bang {
                text,
                world,
                formula,
                valuations,
            } => {
                let holds = bang(&c, g, *world, formula, valuations)?;
                report.answer_with(text.clone(), Json::Bool(holds));
            }
            Query::Degree { world, other } => {
                let d = degree_compare(&c, g, *world, *other);
                report.answer_with(
                    format!("{} < {}", g.worlds()[*world], g.worlds()[*other]),
                    serde_json::to_value(d).expect("serializable"),
                );
            }
            Query::Entail { .. } => {}
        }
    }
    Ok(())
}

fn run_extend(inst: &Instance, report: &mut RunReport) -> Result<()> {
    let g = inst.require_access()?;
    let target = inst.target.as_ref().ok_or_else(|| Error::Instance {
        path: inst.path.clone(),
        message: "missing `target` section".into(),
    })?;
    let Some(c) = conditional(inst, report)? else {
        return Ok(());
    };
    let g = if g.has_cross_edges() {
        report.warnings.push("declared cross edges are dropped; the extension assigns its own".into());
        g.clone().with_cross(vec![PointSet::EMPTY; g.worlds().len()])?
    } else {
        g.clone()
    };
    match extend_access(&c, &g, target) {
        Ok(out) => {
            let cross: serde_json::Map<String, Json> = (0..out.worlds().len())
                .map(|m| {
                    let pts: Vec<&str> = out.cross(m).iter().map(|p| c.names()[p].as_str()).collect();
                    (out.worlds()[m].clone(), json!(pts))
                })
                .collect();
            report.artifacts.push(Artifact::new("cross", Json::Object(cross)));
            report.reports.push(target_report(&c, &out, target));
            report.reports.extend(check_access_facts(&c, &out));
            let alt = max_alternations(&c, &out);
            let shown = world_set(&out, alt.chain.iter().copied());
            report.reports.push(if alt.count <= c.layer_count() {
                ConditionReport::pass("alternation-bound")
            } else {
                ConditionReport::fail("alternation-bound", Witness::text("chain", shown.clone()))
            });
            report.notes.push(format!(
                "longest run of satisfied-to-violated switches is {} along {shown}; {} layers",
                alt.count,
                c.layer_count()
            ));
        }
        Err(Error::LayersExhausted { world, chain }) => {
            report.reports.push(ConditionReport::fail(
                "layers-exhausted",
                Witness::text("world", world).with("chain", crate::report::Value::Text, chain.join(" R ")),
            ));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn run_fuzz(inst: Option<&Instance>, opts: &RunOptions, report: &mut RunReport) -> Result<()> {
    let points = inst.map_or(3, |i| i.names.len());
    let depth = opts.depth.unwrap_or(points + 1);
    report.mode = Some(opts.mode);
    let out = fuzz(opts.mode, opts.seed, opts.budget, points, depth)?;
    report
        .notes
        .push(format!("{} cases over {points} points, seed {}", out.cases, out.seed));
    if out.failures.is_empty() {
        report.reports.push(ConditionReport::pass("fuzz"));
    }
    for fail in &out.failures {
        report.reports.push(ConditionReport::fail(
            format!("case {}: {}", fail.case, fail.check),
            Witness::text("detail", fail.detail.clone()),
        ));
        report
            .artifacts
            .push(Artifact::new(format!("case-{}", fail.case), fail.instance.clone()));
    }
    Ok(())
}
