//! Table generators, random instances, and the fuzz driver with shrinking.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::choice::{check_domain_closure, require_conditions, ChoiceFunction, Closure, Domain, Layering, MuCondition};
use crate::error::{Error, Result};
use crate::general::{construct_general, construct_transitive};
use crate::hierarchy::{AccessGraph, HierarchicalConditional};
use crate::instance::choice_instance_json;
use crate::points::PointSet;
use crate::report::{ConditionReport, Witness};
use crate::smooth::{
    check_cum_mu_f, check_hull_lemmas, construct_smooth_transitive, kernel, rank_augment, repair_smooth,
};
use crate::structure::{verify_representation, PreferentialStructure};

/// Largest exhaustive stream `gen_choice_functions` will start.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 24;

pub fn point_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect()
}

pub fn rng_for(seed: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ case.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

/// Tables over `domain`. With `enforce_subset` each `f(Y)` is a subset of
/// `Y`, otherwise any subset of the base.
pub fn gen_choice_functions(domain: Arc<Domain>, enforce_subset: bool, mode: GenMode) -> Result<ChoiceStream> {
    let base = domain.base();
    let pools: Vec<Vec<PointSet>> = domain
        .family()
        .iter()
        .map(|&y| (if enforce_subset { y } else { base }).subsets().collect())
        .collect();
    let state = match mode {
        GenMode::Exhaustive => {
            let total = pools.iter().fold(1u128, |a, p| a.saturating_mul(p.len() as u128));
            if total > EXHAUSTIVE_LIMIT {
                return Err(Error::Budget(format!("{total} tables exceed {EXHAUSTIVE_LIMIT}")));
            }
            Walk::Odometer {
                cursor: vec![0; pools.len()],
                done: false,
            }
        }
        GenMode::Sampled { seed, count } => Walk::Sampled {
            rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            left: count,
        },
    };
    Ok(ChoiceStream { domain, pools, state })
}

enum Walk {
    Odometer { cursor: Vec<usize>, done: bool },
    Sampled { rng: Box<ChaCha8Rng>, left: usize },
}

pub struct ChoiceStream {
    domain: Arc<Domain>,
    pools: Vec<Vec<PointSet>>,
    state: Walk,
}

impl Iterator for ChoiceStream {
    type Item = ChoiceFunction;

    fn next(&mut self) -> Option<ChoiceFunction> {
        let table: Vec<PointSet> = match &mut self.state {
            Walk::Odometer { cursor, done } => {
                if *done {
                    return None;
                }
                let t = cursor.iter().zip(&self.pools).map(|(&i, p)| p[i]).collect();
                *done = true;
                for k in (0..cursor.len()).rev() {
                    if cursor[k] + 1 < self.pools[k].len() {
                        cursor[k] += 1;
                        cursor[k + 1..].iter_mut().for_each(|c| *c = 0);
                        *done = false;
                        break;
                    }
                }
                t
            }
            Walk::Sampled { rng, left } => {
                if *left == 0 {
                    return None;
                }
                *left -= 1;
                self.pools.iter().map(|p| p[rng.random_range(0..p.len())]).collect()
            }
        };
        Some(ChoiceFunction::new(self.domain.clone(), table).expect("tables stay inside the base"))
    }
}

/// Random ordered partition of `n` points into at most `max_layers` blocks.
pub fn random_layering(rng: &mut ChaCha8Rng, names: &[String], max_layers: usize) -> Layering {
    let n = names.len();
    let k = rng.random_range(1..=max_layers.max(1));
    let mut blocks = vec![PointSet::EMPTY; k];
    for x in 0..n {
        blocks[rng.random_range(0..k)].insert(x);
    }
    blocks.retain(|b| !b.is_empty());
    Layering::new(names, blocks).expect("disjoint non-empty blocks")
}

/// Random nonempty sets closed under union.
pub fn random_union_closed(rng: &mut ChaCha8Rng, n: usize) -> Vec<PointSet> {
    let full = PointSet::full(n).bits();
    let mut fam: Vec<PointSet> = Vec::new();
    for _ in 0..rng.random_range(1..=n + 2) {
        let s = PointSet::from_bits(rng.random_range(1..=full));
        if !fam.contains(&s) {
            fam.push(s);
        }
    }
    let mut k = 0;
    while k < fam.len() {
        for j in 0..k {
            let u = fam[j] | fam[k];
            if !fam.contains(&u) {
                fam.push(u);
            }
        }
        k += 1;
    }
    fam.sort_by_key(|s| (s.len(), s.bits()));
    fam
}

/// Random layered structure: copies (points of the top layer may have none),
/// random attacks that only go up in a rank-sorted order, every lower-rank
/// copy attacking every higher-rank one, transitively closed.
pub fn random_ranked_structure(rng: &mut ChaCha8Rng, l: &Layering, max_copies: usize) -> PreferentialStructure {
    let names = l.names().to_vec();
    let top = l.len();
    let mut s = PreferentialStructure::new(names.clone()).expect("small base");
    for x in 0..names.len() {
        let low = usize::from(l.rank(x) != Some(top) || rng.random_bool(0.85));
        for _ in 0..rng.random_range(low..=max_copies.max(low)) {
            s.add_copy(x, "");
        }
    }
    let mut order: Vec<usize> = (0..s.copy_count()).collect();
    order.shuffle(rng);
    order.sort_by_key(|&c| l.rank(s.copy(c).point));
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.random_bool(0.3) {
                s.insert_edge(order[i], order[j]);
            }
        }
    }
    rank_augment(&s, l).expect("edges follow rank order").transitive_closure()
}

/// A case for the smooth pipeline: union-closed family, table passing
/// inclusion, preferential, cumulativity and layer conditions.
#[derive(Clone, Debug)]
pub struct Case {
    pub choice: ChoiceFunction,
    pub layering: Layering,
}

pub const SMOOTH_CONDITIONS: [MuCondition; 4] = [MuCondition::Subset, MuCondition::Pr, MuCondition::Cum, MuCondition::A];
pub const GENERAL_CONDITIONS: [MuCondition; 3] = [MuCondition::Subset, MuCondition::Pr, MuCondition::A];

/// Some cases come from random tables that happen to pass; the rest from
/// random layered structures, which always pass.
pub fn random_smooth_case(rng: &mut ChaCha8Rng, n: usize) -> Case {
    let names = point_names(n);
    loop {
        let l = random_layering(rng, &names, n);
        let fam = random_union_closed(rng, n);
        let d = Arc::new(Domain::new(names.clone(), fam).expect("distinct members"));
        if rng.random_bool(0.3) {
            for _ in 0..50 {
                let t: Vec<PointSet> = d
                    .family()
                    .iter()
                    .map(|&y| PointSet::from_bits(rng.random::<u64>()) & y)
                    .collect();
                let f = ChoiceFunction::new(d.clone(), t).expect("inside the base");
                if require_conditions(&f, Some(&l), &SMOOTH_CONDITIONS).is_ok() {
                    return Case { choice: f, layering: l };
                }
            }
        }
        let s = random_ranked_structure(rng, &l, 2);
        let f = s.induced_choice(&d).expect("same base");
        if require_conditions(&f, Some(&l), &SMOOTH_CONDITIONS).is_ok() {
            return Case { choice: f, layering: l };
        }
    }
}

/// Full non-empty powerset, random table with `f(Y) <= Y`, random layering.
pub fn random_general_case(rng: &mut ChaCha8Rng, n: usize) -> Case {
    let names = point_names(n);
    let l = random_layering(rng, &names, n);
    let d = Arc::new(Domain::powerset(names, false).expect("small base"));
    let seed = rng.random::<u64>();
    let f = gen_choice_functions(d, true, GenMode::Sampled { seed, count: 1 })
        .expect("sampling has no budget")
        .next()
        .expect("one table");
    Case { choice: f, layering: l }
}

/// A hierarchical conditional and a world graph with a target, for the extension.
#[derive(Clone, Debug)]
pub struct ChainCase {
    pub conditional: HierarchicalConditional,
    pub graph: AccessGraph,
    pub target: Vec<usize>,
}

pub fn random_chain_case(rng: &mut ChaCha8Rng) -> ChainCase {
    let layers = rng.random_range(1..=5);
    let sizes: Vec<usize> = (0..layers).map(|_| rng.random_range(1..=3)).collect();
    let n: usize = sizes.iter().sum();
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut blocks = Vec::new();
    let mut at = 0;
    for &k in &sizes {
        blocks.push(PointSet::full(at + k) - PointSet::full(at));
        at += k;
    }
    let l = Layering::new(&names, blocks).expect("partition");
    let mut s = PreferentialStructure::injective(names).expect("small base");
    for i in 0..n {
        for j in i + 1..n {
            if l.rank(i) == l.rank(j) && rng.random_bool(0.3) {
                s.insert_edge(i, j);
            }
        }
    }
    let s = rank_augment(&s, &l).expect("edges follow rank order").transitive_closure();
    let good = PointSet::from_bits(rng.random::<u64>()) & PointSet::full(n);
    let conditional = HierarchicalConditional::new(s, l, good).expect("ranked by construction");

    let w = rng.random_range(1..=12);
    let worlds: Vec<String> = (0..w).map(|i| format!("w{i}")).collect();
    let chain = rng.random_bool(0.5);
    let mut edges = Vec::new();
    for j in 1..w {
        if chain {
            edges.push((j - 1, j));
        } else {
            for i in 0..j {
                if rng.random_bool(0.25) {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = AccessGraph::new(worlds, edges, None).expect("edges go forward");
    let target = (0..w).filter(|_| rng.random_bool(0.5)).collect();
    ChainCase {
        conditional,
        graph,
        target,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    General,
    Transitive,
    Smooth,
    SmoothTransitive,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "general" => Mode::General,
            "transitive" => Mode::Transitive,
            "smooth" => Mode::Smooth,
            "smooth-transitive" => Mode::SmoothTransitive,
            _ => return Err(Error::Instance {
                path: "--mode".into(),
                message: format!("unknown mode `{s}`"),
            }),
        })
    }
}

/// Smooth tree construction over the whole base when possible, else the kernel.
pub fn smooth_transitive_auto(f: &ChoiceFunction) -> Result<(PreferentialStructure, bool)> {
    let restrict = kernel(f) != f.domain().base();
    match construct_smooth_transitive(f, false) {
        Ok(s) => Ok((s, false)),
        Err(Error::Precondition { condition, .. }) if restrict && condition == "nonempty-choice" => {
            Ok((construct_smooth_transitive(f, true)?, true))
        }
        Err(e) => Err(e),
    }
}

fn failed(condition: &str, message: String) -> ConditionReport {
    ConditionReport::fail(condition.to_string(), Witness::text("error", message))
}

fn with_prefix(prefix: &str, mut r: ConditionReport) -> ConditionReport {
    r.condition = format!("{prefix}:{}", r.condition);
    r
}

/// Every property the fuzz driver asserts for one case, as reports.
pub fn case_checks(mode: Mode, case: &Case, depth: usize) -> Vec<ConditionReport> {
    let f = &case.choice;
    let l = &case.layering;
    let mut out = Vec::new();
    match mode {
        Mode::General | Mode::Transitive => {
            let admissible = require_conditions(f, Some(l), &GENERAL_CONDITIONS).is_ok();
            let built = if mode == Mode::General {
                construct_general(f, l).map(|s| (s, true))
            } else {
                construct_transitive(f, l, depth.max(f.domain().point_count() + 1))
                    .map(|o| (o.structure, o.a_ranked_mode))
            };
            match (admissible, built) {
                (true, Ok((s, ranked))) => {
                    out.push(verify_representation(&s, f));
                    if mode == Mode::Transitive {
                        out.push(s.is_transitive());
                    }
                    if ranked {
                        out.push(s.is_a_ranked(l).unwrap_or_else(|e| failed("a-ranked", e.to_string())));
                    }
                }
                (false, Err(Error::Precondition { .. })) => out.push(ConditionReport::pass("refused")),
                (true, Err(e)) => out.push(failed("construct", e.to_string())),
                (false, Ok(_)) => out.push(failed("refused", "built despite a failing condition".into())),
                (false, Err(e)) => out.push(failed("refused", e.to_string())),
            }
        }
        Mode::Smooth | Mode::SmoothTransitive => {
            let built = if mode == Mode::Smooth {
                repair_smooth(f)
            } else {
                smooth_transitive_auto(f).map(|(s, _)| s)
            };
            match built {
                Ok(s) => {
                    out.push(verify_representation(&s, f));
                    out.push(s.is_smooth(f.domain()));
                    if mode == Mode::SmoothTransitive {
                        out.push(s.is_transitive());
                        out.push(s.is_cycle_free());
                    }
                    match rank_augment(&s, l) {
                        Ok(a) => out.push(a.is_a_ranked(l).unwrap_or_else(|e| failed("a-ranked", e.to_string()))),
                        Err(e) => out.push(failed("rank-augment", e.to_string())),
                    }
                }
                Err(e) => out.push(failed("construct", e.to_string())),
            }
            out.extend(check_hull_lemmas(f).into_iter().map(|r| with_prefix("hull", r)));
            out.extend(check_cum_mu_f(f).into_iter().map(|r| with_prefix("hull", r)));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzFailure {
    pub case: u64,
    pub check: String,
    pub detail: String,
    /// The shrunk case in instance format; re-running it fails the same check.
    pub instance: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub mode: Mode,
    pub seed: u64,
    pub points: usize,
    pub cases: u64,
    pub failures: Vec<FuzzFailure>,
}

fn case_for(mode: Mode, seed: u64, k: u64, n: usize) -> Case {
    let mut rng = rng_for(seed, k);
    match mode {
        Mode::General | Mode::Transitive => random_general_case(&mut rng, n),
        Mode::Smooth | Mode::SmoothTransitive => random_smooth_case(&mut rng, n),
    }
}

fn first_failure(mode: Mode, case: &Case, depth: usize) -> Option<ConditionReport> {
    case_checks(mode, case, depth).into_iter().find(|r| !r.holds)
}

/// Drop family members one at a time while the case stays well-formed for
/// the mode and the same check still fails.
pub fn shrink(mode: Mode, case: &Case, check: &str, depth: usize) -> Case {
    let smooth_mode = matches!(mode, Mode::Smooth | Mode::SmoothTransitive);
    shrink_by(case, smooth_mode, |c| {
        first_failure(mode, c, depth).is_some_and(|r| r.condition == check)
    })
}

/// Greedy shrinking against any failure predicate. `smooth_inputs` keeps
/// candidates union-closed and passing the smooth preconditions.
pub fn shrink_by(case: &Case, smooth_inputs: bool, still_fails: impl Fn(&Case) -> bool) -> Case {
    let mut cur = case.clone();
    loop {
        let mut improved = false;
        let fam = cur.choice.family().to_vec();
        for drop in 0..fam.len() {
            if fam.len() == 1 {
                break;
            }
            let keep: Vec<usize> = (0..fam.len()).filter(|&i| i != drop).collect();
            let d = Domain::new(cur.choice.domain().names().to_vec(), keep.iter().map(|&i| fam[i]).collect());
            let Ok(d) = d else { continue };
            let d = Arc::new(d);
            if smooth_inputs && check_domain_closure(&d, Closure::FiniteUnion).witness.is_some() {
                continue;
            }
            let f = ChoiceFunction::new(d, keep.iter().map(|&i| cur.choice.at(i)).collect()).expect("same sets");
            if smooth_inputs && require_conditions(&f, Some(&cur.layering), &SMOOTH_CONDITIONS).is_err() {
                continue;
            }
            let cand = Case {
                choice: f,
                layering: cur.layering.clone(),
            };
            if still_fails(&cand) {
                cur = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            return cur;
        }
    }
}

/// `budget` seeded cases; failures come shrunk.
pub fn fuzz(mode: Mode, seed: u64, budget: u64, points: usize, depth: usize) -> Result<FuzzReport> {
    if points == 0 || points > 4 {
        return Err(Error::Budget(format!("fuzzing takes 1..=4 points, got {points}")));
    }
    let mut failures = Vec::new();
    for k in 0..budget {
        let case = case_for(mode, seed, k, points);
        if let Some(r) = first_failure(mode, &case, depth) {
            let small = shrink(mode, &case, &r.condition, depth);
            failures.push(FuzzFailure {
                case: k,
                check: r.condition.clone(),
                detail: r.witness.map(|w| w.to_string()).unwrap_or_default(),
                instance: choice_instance_json(&small.choice, Some(&small.layering)),
            });
        }
    }
    Ok(FuzzReport {
        mode,
        seed,
        points,
        cases: budget,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn exhaustive_counts() {
        let d = Arc::new(Domain::new(point_names(1), vec![PointSet::from_bits(1)]).unwrap());
        assert_eq!(gen_choice_functions(d, true, GenMode::Exhaustive).unwrap().count(), 2);
        let d = Arc::new(Domain::powerset(point_names(2), false).unwrap());
        assert_eq!(gen_choice_functions(d.clone(), true, GenMode::Exhaustive).unwrap().count(), 16);
        assert_eq!(gen_choice_functions(d, false, GenMode::Exhaustive).unwrap().count(), 64);
        let d = Arc::new(Domain::powerset(point_names(4), true).unwrap());
        assert!(gen_choice_functions(d, false, GenMode::Exhaustive).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let d = Arc::new(Domain::powerset(point_names(3), false).unwrap());
        let a: Vec<_> = gen_choice_functions(d.clone(), true, GenMode::Sampled { seed: 9, count: 5 }).unwrap().collect();
        let b: Vec<_> = gen_choice_functions(d, true, GenMode::Sampled { seed: 9, count: 5 }).unwrap().collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| f.entries().all(|(y, fy)| fy.is_subset(y))));
    }

    #[test]
    fn smooth_cases_pass_preconditions() {
        for k in 0..30 {
            let c = random_smooth_case(&mut rng_for(3, k), 3);
            assert!(require_conditions(&c.choice, Some(&c.layering), &SMOOTH_CONDITIONS).is_ok());
            assert!(check_domain_closure(c.choice.domain(), Closure::FiniteUnion).holds);
        }
    }

    #[test]
    fn fuzz_smooth_clean() {
        for mode in [Mode::General, Mode::Transitive, Mode::Smooth, Mode::SmoothTransitive] {
            let r = fuzz(mode, 1, 40, 3, 4).unwrap();
            assert!(r.failures.is_empty(), "{mode:?}: {:?}", r.failures);
        }
    }

    #[test]
    fn instance_json_round_trip() {
        let c = random_general_case(&mut rng_for(5, 0), 3);
        let j = choice_instance_json(&c.choice, Some(&c.layering));
        let back = parse_instance(&j.to_string(), "x").unwrap();
        assert_eq!(back.choice.as_ref(), Some(&c.choice));
        assert_eq!(back.layering.as_ref(), Some(&c.layering));
    }

    #[test]
    fn shrinking_keeps_the_failure() {
        let c = random_general_case(&mut rng_for(5, 1), 3);
        let ab = PointSet::from_bits(0b011);
        let small = shrink_by(&c, false, |k| k.choice.family().contains(&ab));
        assert_eq!(small.choice.family(), &[ab]);
        assert_eq!(small.choice.get(ab), c.choice.get(ab));
    }

    #[test]
    fn general_cases_are_not_all_refused() {
        let built = (0..200)
            .map(|k| random_general_case(&mut rng_for(2, k), 2))
            .filter(|c| case_checks(Mode::General, c, 3).iter().any(|r| r.condition == "represents"))
            .count();
        assert!(built > 0);
    }
}
