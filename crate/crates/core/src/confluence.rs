//! Local-confluence structures, the generalized Newman certification, and
//! the brute-force equivalence suites.
//!
//! An lc-structure orders the rewrite steps by a total terminating stage
//! order with nothing at the bottom, and attaches to every step a conversion
//! between the strategy's chosen target and the step's own target that only
//! uses strictly lower steps. Validity is a list of checkable equations;
//! given a valid structure, the induced global strategy is certified
//! confluent by re-running the stage-by-stage equality chain and emitting
//! the split-coequalizer certificate.
//!
//! The suites at the bottom are deliberately naive: transitive closures,
//! class merging and exhaustive peak enumeration. They are the independent
//! oracles everything else is compared against.

use std::collections::BTreeMap;
use std::collections::VecDeque;


use crate::carrier::{CarrierObject, Element, Kind};
use crate::filtration::Filtration;
use crate::graph::{Direction, InternalGraph, Path, PathStep};
use crate::linalg::same_span;
use crate::linear::AlgebraicRelation;
use crate::strategy::{induce_global_strategy, ConfluenceStatus, GlobalStrategy, SplitCertificate};
use crate::termination::{LocalStrategy, StrategyChoice};
use crate::{Error, Result};

/// A local-confluence structure on a local strategy: a total terminating
/// stage order on the edge object with empty minimal stage, plus one
/// conversion path per edge generator.
#[derive(Clone, Debug)]
pub struct LcStructure {
    base: LocalStrategy,
    stages: Filtration,
    /// Conversion per edge generator, in edge label order.
    conversions: Vec<Path>,
}

impl LcStructure {
    pub fn new(base: LocalStrategy, stages: Filtration, conversions: Vec<Path>) -> Result<Self> {
        if stages.ambient() != base.graph().edges() {
            return Err(Error::InvalidLc(
                "stage filtration must filter the edge object".into(),
            ));
        }
        if conversions.len() != base.graph().edges().size() {
            return Err(Error::InvalidLc(
                "one conversion per edge generator required".into(),
            ));
        }
        Ok(LcStructure {
            base,
            stages,
            conversions,
        })
    }

    pub fn local(&self) -> &LocalStrategy {
        &self.base
    }

    pub fn stages(&self) -> &Filtration {
        &self.stages
    }

    pub fn conversion(&self, edge_label: &str) -> Result<&Path> {
        let i = self
            .base
            .graph()
            .edges()
            .index_of(edge_label)
            .ok_or_else(|| Error::UnknownLabel(edge_label.to_string()))?;
        Ok(&self.conversions[i])
    }

    pub fn conversions(&self) -> &[Path] {
        &self.conversions
    }
}

/// The individual lc-structure conditions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LcCondition {
    /// The stage order is total.
    TotalOrder,
    /// Minimal stages carry no edges.
    MinEmpty,
    /// Conversions only use strictly lower steps.
    StageBound,
    /// Conversion sources match the strategy's chosen target.
    SourceEquation,
    /// Conversion targets match the edge targets.
    TargetEquation,
}

#[derive(Clone, Debug)]
pub struct LcCheck {
    pub condition: LcCondition,
    pub ok: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct LcReport {
    pub checks: Vec<LcCheck>,
}

impl LcReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&LcCheck> {
        self.checks.iter().find(|c| !c.ok)
    }
}

/// Verifies every lc-structure condition, with witnesses for failures.
pub fn verify_lc_structure(lc: &LcStructure) -> Result<LcReport> {
    let mut checks = Vec::new();
    let graph = lc.base.graph();
    let edges = graph.edges();
    let stages = &lc.stages;

    // Totality of the stage order.
    let idx = stages.index();
    let mut total = LcCheck {
        condition: LcCondition::TotalOrder,
        ok: true,
        witness: None,
    };
    'outer: for i in 0..idx.len() {
        for j in 0..idx.len() {
            if !idx.leq(i, j) && !idx.leq(j, i) {
                total.ok = false;
                total.witness = Some(format!("{} and {}", idx.name(i), idx.name(j)));
                break 'outer;
            }
        }
    }
    checks.push(total);

    // Minimal stages are empty.
    let mut min_empty = LcCheck {
        condition: LcCondition::MinEmpty,
        ok: true,
        witness: None,
    };
    for i in idx.minimal_indices() {
        if stages.stage(i).size() != 0 {
            min_empty.ok = false;
            min_empty.witness = Some(format!(
                "stage {} holds {} edges",
                idx.name(i),
                stages.stage(i).size()
            ));
            break;
        }
    }
    checks.push(min_empty);

    // Per-edge conditions.
    let mut bound = LcCheck {
        condition: LcCondition::StageBound,
        ok: true,
        witness: None,
    };
    let mut src_eq = LcCheck {
        condition: LcCondition::SourceEquation,
        ok: true,
        witness: None,
    };
    let mut tgt_eq = LcCheck {
        condition: LcCondition::TargetEquation,
        ok: true,
        witness: None,
    };
    let tgt_h = lc.base.sum_tgt().compose(lc.base.h())?;
    for (k, label) in edges.labels().iter().enumerate() {
        let conv = &lc.conversions[k];
        graph.validate_path(conv)?;
        let entry = stages
            .entry_stage(label)
            .ok_or_else(|| Error::InvalidLc(format!("edge '{label}' enters no stage")))?;
        let (below, _) = stages.below(entry)?;
        if bound.ok {
            'chains: for chain in conv.chains() {
                for step in &chain.steps {
                    let ok = match &step.step {
                        Element::Point(l) => below.contains_label(l),
                        Element::Vector(m) => m.keys().all(|l| below.contains_label(l)),
                    };
                    if !ok {
                        bound.ok = false;
                        bound.witness = Some(format!("'{label}' uses {}", step.step));
                        break 'chains;
                    }
                }
            }
        }
        let r = edges.generator(label)?;
        if src_eq.ok {
            let want = tgt_h.apply(&graph.src().apply(&r)?)?;
            let got = graph.path_source(conv)?;
            if want != got {
                src_eq.ok = false;
                src_eq.witness = Some(format!("'{label}': {got} instead of {want}"));
            }
        }
        if tgt_eq.ok {
            let want = graph.tgt().apply(&r)?;
            let got = graph.path_target(conv)?;
            if want != got {
                tgt_eq.ok = false;
                tgt_eq.witness = Some(format!("'{label}': {got} instead of {want}"));
            }
        }
    }
    checks.push(bound);
    checks.push(src_eq);
    checks.push(tgt_eq);
    Ok(LcReport { checks })
}

/// A Newman certificate: the split-coequalizer data of the induced strategy
/// plus the audit that re-derived confluence stage by stage.
#[derive(Clone, Debug)]
pub struct NewmanCertificate {
    pub certificate: SplitCertificate,
    /// Edges whose confluence equation was re-derived along the stage order.
    pub audited_edges: usize,
}

/// Generalized Newman's lemma as an executable certificate: a valid
/// lc-structure forces the induced strategy to be confluent. The proof's
/// equality chain is re-verified edge by edge along the stage order; a
/// failure after a valid structure is an engine bug and reported as such.
pub fn newman(lc: &LcStructure) -> Result<(GlobalStrategy, NewmanCertificate)> {
    let report = verify_lc_structure(lc)?;
    if !report.passed() {
        let f = report.first_failure().expect("failed");
        return Err(Error::InvalidLc(format!(
            "{:?}{}",
            f.condition,
            f.witness
                .as_ref()
                .map(|w| format!(": {w}"))
                .unwrap_or_default()
        )));
    }
    let gs = induce_global_strategy(&lc.base)?;
    let graph = lc.base.graph();
    let edges = graph.edges();
    let htau = gs.htau();

    // Audit: process edges in stage order, checking that the normal-form
    // map equalizes the endpoints of every conversion step (all strictly
    // lower, hence already audited) and then of the edge itself.
    let order = {
        let mut labels: Vec<(usize, String)> = edges
            .labels()
            .iter()
            .map(|l| (lc.stages.entry_stage(l).expect("validated"), l.clone()))
            .collect();
        labels.sort_by_key(|(s, _)| *s);
        labels
    };
    let descend = lc.base.sum_tgt().compose(lc.base.h())?;
    let mut audited = 0usize;
    for (_, label) in &order {
        let r = edges.generator(label)?;
        let conv = lc.conversion(label)?;
        for chain in conv.chains() {
            for step in &chain.steps {
                let s_nf = htau.apply(&graph.src().apply(&step.step)?)?;
                let t_nf = htau.apply(&graph.tgt().apply(&step.step)?)?;
                if s_nf != t_nf {
                    return Err(Error::InternalInvariant(format!(
                        "audit failed below edge '{label}'"
                    )));
                }
            }
        }
        // The chain of equalities for the edge itself.
        let src_nf = htau.apply(&graph.src().apply(&r)?)?;
        let via_h = htau.apply(&descend.apply(&graph.src().apply(&r)?)?)?;
        let conv_src_nf = htau.apply(&graph.path_source(conv)?)?;
        let conv_tgt_nf = htau.apply(&graph.path_target(conv)?)?;
        let tgt_nf = htau.apply(&graph.tgt().apply(&r)?)?;
        if src_nf != via_h || via_h != conv_src_nf || conv_src_nf != conv_tgt_nf || conv_tgt_nf != tgt_nf
        {
            return Err(Error::InternalInvariant(format!(
                "audit chain broke at edge '{label}'"
            )));
        }
        audited += 1;
    }

    match gs.confluence_check()? {
        ConfluenceStatus::Confluent => {}
        ConfluenceStatus::Violated { witness } => {
            return Err(Error::InternalInvariant(format!(
                "valid lc-structure but confluence fails at '{witness}'"
            )));
        }
    }
    let certificate = gs.split_coequalizer_certificate()?;
    Ok((
        gs,
        NewmanCertificate {
            certificate,
            audited_edges: audited,
        },
    ))
}

/// Longest-reduction rank per base label of a set strategy's relation.
fn set_reduction_rank(graph: &InternalGraph) -> Result<BTreeMap<String, usize>> {
    let base = graph.base();
    let edges = graph.edges();
    let src = graph.src().table().expect("set").to_vec();
    let tgt = graph.tgt().table().expect("set").to_vec();
    let n = base.size();
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..edges.size() {
        succs[src[e]].push(tgt[e]);
    }
    let mut memo: Vec<Option<usize>> = vec![None; n];
    fn eval(i: usize, succs: &[Vec<usize>], memo: &mut [Option<usize>], guard: usize) -> Result<usize> {
        if guard == 0 {
            return Err(Error::NotTerminating("rank recursion depth exceeded".into()));
        }
        if let Some(v) = memo[i] {
            return Ok(v);
        }
        let mut best = 0;
        for &j in &succs[i] {
            best = best.max(1 + eval(j, succs, memo, guard - 1)?);
        }
        memo[i] = Some(best);
        Ok(best)
    }
    let mut out = BTreeMap::new();
    for (i, l) in base.labels().iter().enumerate() {
        out.insert(l.clone(), eval(i, &succs, &mut memo, n + 1)?);
    }
    Ok(out)
}

/// Builds the stage filtration of the edge object from a strict key per
/// generator: stage zero is empty and each generator enters at its key rank
/// plus one, making the order total with nothing minimal.
fn stage_filtration_from_keys(
    edges: &CarrierObject,
    keys: &[(String, (usize, usize, usize))],
) -> Result<Filtration> {
    let mut sorted = keys.to_vec();
    sorted.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut stages: Vec<Vec<String>> = vec![Vec::new()];
    let mut acc: Vec<String> = Vec::new();
    for (label, _) in &sorted {
        acc.push(label.clone());
        stages.push(acc.clone());
    }
    Filtration::from_stage_labels(edges, &stages)
}

/// Searches for an lc-structure on a set strategy.
///
/// When the step relation is acyclic, edges are ordered by the
/// longest-reduction rank of their source (then by edge position); every
/// conversion valley of a locally confluent relation uses only sources
/// strictly reachable from the peak, so the search is complete for such
/// relations. Graphs that terminate only strategically (their relation has
/// cycles) fall back to the entry stages of the endpoints as the key. The
/// conversion for each edge is found by breadth-first search over strictly
/// lower edges used in either direction, with deterministic expansion order
/// and a depth cap of twice the base size.
pub fn search_lc_structure_set(ls: &LocalStrategy) -> Result<LcStructure> {
    search_lc_structure_set_capped(ls, None)
}

/// As [`search_lc_structure_set`], with an explicit conversion depth cap
/// instead of the default of twice the base size.
pub fn search_lc_structure_set_capped(
    ls: &LocalStrategy,
    depth_cap: Option<usize>,
) -> Result<LcStructure> {
    let graph = ls.graph();
    if graph.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    let base = graph.base();
    let edges = graph.edges();
    let src = graph.src().table().expect("set").to_vec();
    let tgt = graph.tgt().table().expect("set").to_vec();

    let edge_keys: Vec<(usize, usize, usize)> = match set_reduction_rank(graph) {
        Ok(rank) => (0..edges.size())
            .map(|e| (rank[&base.labels()[src[e]]], e, 0))
            .collect(),
        Err(Error::NotTerminating(_)) => {
            let entry = |v: usize| {
                ls.filtration()
                    .entry_stage(&base.labels()[v])
                    .expect("filtration covers the base")
            };
            (0..edges.size())
                .map(|e| (entry(src[e]), entry(tgt[e]), e))
                .collect()
        }
        Err(other) => return Err(other),
    };
    let keys: Vec<(String, (usize, usize, usize))> = edges
        .labels()
        .iter()
        .enumerate()
        .map(|(e, l)| (l.clone(), edge_keys[e]))
        .collect();
    let stages = stage_filtration_from_keys(edges, &keys)?;

    let key_of = |e: usize| edge_keys[e];
    let mut conversions = Vec::with_capacity(edges.size());
    for (e, label) in edges.labels().iter().enumerate() {
        let x = Element::point(&base.labels()[src[e]]);
        let y_label = base.labels()[tgt[e]].clone();
        // Start of the conversion: the strategy's chosen target at the
        // source.
        let start = match ls.choice_at(&x)? {
            StrategyChoice::Step(step) => {
                if step == edges.generator(label)? {
                    // The chosen step converts trivially.
                    conversions.push(graph.unit_path(&Element::point(&y_label))?);
                    continue;
                }
                let Element::Point(t) = graph.tgt().apply(&step)? else {
                    return Err(Error::KindMismatch);
                };
                t
            }
            StrategyChoice::Unit(_) => {
                return Err(Error::InternalInvariant(format!(
                    "edge '{label}' starts at a normal form"
                )))
            }
        };
        let allowed: Vec<usize> = (0..edges.size()).filter(|&f| key_of(f) < key_of(e)).collect();
        let cap = depth_cap.unwrap_or(2 * base.size());
        match bfs_conversion(graph, &allowed, &start, &y_label, cap)? {
            Some(path) => conversions.push(path),
            None => return Err(Error::Exhausted(label.clone())),
        }
    }
    LcStructure::new(ls.clone(), stages, conversions)
}

/// Breadth-first conversion search over a fixed set of edges, both
/// directions, bounded depth. Returns the shortest conversion path found.
fn bfs_conversion(
    graph: &InternalGraph,
    allowed: &[usize],
    from: &str,
    to: &str,
    depth_cap: usize,
) -> Result<Option<Path>> {
    let base = graph.base();
    let src = graph.src().table().expect("set");
    let tgt = graph.tgt().table().expect("set");
    let start = base.index_of(from).ok_or_else(|| Error::UnknownLabel(from.into()))?;
    let goal = base.index_of(to).ok_or_else(|| Error::UnknownLabel(to.into()))?;
    if start == goal {
        return Ok(Some(graph.unit_path(&Element::point(to))?));
    }
    let mut parent: Vec<Option<(usize, usize, Direction)>> = vec![None; base.size()];
    let mut dist = vec![usize::MAX; base.size()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if dist[v] >= depth_cap {
            continue;
        }
        for &e in allowed {
            for (a, b, dir) in [
                (src[e], tgt[e], Direction::Forward),
                (tgt[e], src[e], Direction::Backward),
            ] {
                if a == v && dist[b] == usize::MAX {
                    dist[b] = dist[v] + 1;
                    parent[b] = Some((v, e, dir));
                    if b == goal {
                        // Reconstruct the step sequence.
                        let mut steps = Vec::new();
                        let mut cur = goal;
                        while let Some((prev, edge, dir)) = parent[cur] {
                            steps.push(PathStep {
                                step: graph.edges().generator(&graph.edges().labels()[edge])?,
                                dir,
                            });
                            cur = prev;
                        }
                        steps.reverse();
                        return Ok(Some(graph.chain_path(steps)?));
                    }
                    queue.push_back(b);
                }
            }
        }
    }
    Ok(None)
}

/// Builds an lc-structure for an algebraic relation by lifting joinability
/// witnesses of basis peaks to conversion paths. Edges are ordered by the
/// longest-reduction rank of their source label, with rule generators below
/// the diagonal generators of the same rank.
pub fn search_lc_structure_linear(
    ar: &AlgebraicRelation,
    ls: &LocalStrategy,
) -> Result<LcStructure> {
    let graph = ls.graph();
    if graph.kind() != Kind::Vect {
        return Err(Error::KindMismatch);
    }
    let edges = graph.edges();
    let ranks = ar.reduction_rank()?;
    let rule_labels = ar.rule_labels();

    let mut keys: Vec<(String, (usize, usize, usize))> = Vec::new();
    for (i, rl) in rule_labels.iter().enumerate() {
        keys.push((rl.clone(), (ranks[&ar.rule(i).lhs], 0, i)));
    }
    for (i, bl) in ar.basis().labels().iter().enumerate() {
        keys.push((format!("id.{bl}"), (ranks[bl], 1, i)));
    }
    let stages = stage_filtration_from_keys(edges, &keys)?;

    let mut conversions = Vec::with_capacity(edges.size());
    for label in edges.labels() {
        if let Some(rest) = label.strip_prefix("id.") {
            // Diagonal generator: convert the chosen step backwards, or
            // nothing at a normal form.
            match ar.chosen_rule(rest)? {
                None => {
                    conversions.push(graph.unit_path(&Element::basis(rest))?);
                }
                Some(rule) => {
                    let step = Element::basis(&rule_labels[rule]);
                    conversions.push(graph.chain_path(vec![PathStep {
                        step,
                        dir: Direction::Backward,
                    }])?);
                }
            }
            continue;
        }
        let rule_idx = rule_labels
            .iter()
            .position(|l| l == label)
            .expect("edge label is a rule or diagonal");
        let rule = ar.rule(rule_idx);
        let chosen = ar
            .chosen_rule(&rule.lhs)?
            .expect("lhs has at least this rule");
        if chosen == rule_idx {
            conversions.push(graph.unit_path(&rule.rhs)?);
            continue;
        }
        let chosen_rhs = ar.rule(chosen).rhs.clone();
        let Some((trace_a, trace_b, _)) = ar.joinability_witness(&chosen_rhs, &rule.rhs)? else {
            return Err(Error::Exhausted(label.clone()));
        };
        // Forward steps from the chosen target to the meet, then the other
        // branch backwards.
        let mut steps = Vec::new();
        for s in &trace_a {
            steps.push(PathStep {
                step: ar.step_edge_vector(graph, s)?,
                dir: Direction::Forward,
            });
        }
        for s in trace_b.iter().rev() {
            steps.push(PathStep {
                step: ar.step_edge_vector(graph, s)?,
                dir: Direction::Backward,
            });
        }
        if steps.is_empty() {
            conversions.push(graph.unit_path(&rule.rhs)?);
        } else {
            conversions.push(graph.chain_path(steps)?);
        }
    }
    LcStructure::new(ls.clone(), stages, conversions)
}

/// The four classical equivalent conditions of a terminating set relation,
/// each decided by brute force.
#[derive(Clone, Debug)]
pub struct ScReport {
    /// Local confluence: one-step peaks are joinable.
    pub sc1: bool,
    /// Confluence: many-step peaks are joinable.
    pub sc2: bool,
    /// Church-Rosser: convertible elements are joinable.
    pub sc3: bool,
    /// Normal forms biject with conversion classes.
    pub sc4: bool,
    pub witness: Option<String>,
}

impl ScReport {
    pub fn all_agree(&self) -> bool {
        self.sc1 == self.sc2 && self.sc2 == self.sc3 && self.sc3 == self.sc4
    }

    pub fn confluent(&self) -> bool {
        self.sc2
    }
}

/// Brute-force oracle suite for a terminating relation on a finite set.
pub fn sc_suite(base: &CarrierObject, rel: &[(String, String)]) -> Result<ScReport> {
    if base.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    // Reuse the filtration builder's cycle detection for the precondition.
    crate::filtration::filtration_from_terminating_relation(base, rel)?;
    let n = base.size();
    let idx = |l: &str| base.index_of(l).expect("validated");
    let steps: Vec<(usize, usize)> = rel.iter().map(|(x, y)| (idx(x), idx(y))).collect();

    // Reflexive-transitive closure.
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(x, y) in &steps {
        reach[x][y] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let joinable =
        |u: usize, v: usize| (0..n).any(|z| reach[u][z] && reach[v][z]);

    // Conversion classes by merging.
    let mut class: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(x, y) in &steps {
            let (cx, cy) = (class[x], class[y]);
            if cx != cy {
                let m = cx.min(cy);
                for c in class.iter_mut() {
                    if *c == cx || *c == cy {
                        *c = m;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let is_nf = |x: usize| steps.iter().all(|&(a, _)| a != x);

    let mut witness = None;
    let mut sc1 = true;
    'sc1: for &(x, u) in &steps {
        for &(x2, v) in &steps {
            if x == x2 && !joinable(u, v) {
                sc1 = false;
                witness = Some(format!(
                    "peak {} <- {} -> {}",
                    base.labels()[u],
                    base.labels()[x],
                    base.labels()[v]
                ));
                break 'sc1;
            }
        }
    }
    let mut sc2 = true;
    'sc2: for x in 0..n {
        for u in 0..n {
            for v in 0..n {
                if reach[x][u] && reach[x][v] && !joinable(u, v) {
                    sc2 = false;
                    break 'sc2;
                }
            }
        }
    }
    let mut sc3 = true;
    'sc3: for u in 0..n {
        for v in 0..n {
            if class[u] == class[v] && !joinable(u, v) {
                sc3 = false;
                break 'sc3;
            }
        }
    }
    // SC4: every class contains exactly one normal form.
    let mut sc4 = true;
    let classes: Vec<usize> = {
        let mut cs: Vec<usize> = class.clone();
        cs.sort_unstable();
        cs.dedup();
        cs
    };
    for &c in &classes {
        let count = (0..n).filter(|&x| class[x] == c && is_nf(x)).count();
        if count != 1 {
            sc4 = false;
        }
    }
    Ok(ScReport {
        sc1,
        sc2,
        sc3,
        sc4,
        witness,
    })
}

/// The three equivalent conditions of a decreasing algebraic relation.
#[derive(Clone, Debug)]
pub struct AcReport {
    /// Basis peaks are joinable under well-formed reduction.
    pub ac1: bool,
    /// The well-formed step relation is confluent on the reachable
    /// truncation.
    pub ac2: bool,
    /// Normal forms map isomorphically onto the congruence quotient.
    pub ac3: bool,
}

impl AcReport {
    pub fn all_agree(&self) -> bool {
        self.ac1 == self.ac2 && self.ac2 == self.ac3
    }

    pub fn confluent(&self) -> bool {
        self.ac1
    }
}

/// Brute-force suite for algebraic relations: basis-peak joinability, the
/// set-level suite on the reachable truncation of the step relation, and
/// the rank comparison of normal forms against the quotient.
pub fn ac_suite(ar: &AlgebraicRelation) -> Result<AcReport> {
    ar.ensure_decreasing()?;

    // AC1: joinability of all basis peaks.
    let mut ac1 = true;
    'ac1: for x in ar.basis().labels() {
        let rules = ar.rules_for(x);
        for (i, &r1) in rules.iter().enumerate() {
            for &r2 in &rules[i + 1..] {
                let u = ar.rule(r1).rhs.clone();
                let v = ar.rule(r2).rhs.clone();
                if ar.joinability_witness(&u, &v)?.is_none() {
                    ac1 = false;
                    break 'ac1;
                }
            }
        }
    }

    // AC2: set-level suite on the truncation reachable from the basis.
    let mut vectors: Vec<Element> = ar.basis().generators();
    let mut edges: Vec<(String, String)> = Vec::new();
    let render = |e: &Element| format!("{e}");
    let mut frontier: Vec<Element> = vectors.clone();
    while let Some(v) = frontier.pop() {
        for (_, next) in ar.wf_successors(&v) {
            let pair = (render(&v), render(&next));
            if !edges.contains(&pair) {
                edges.push(pair);
            }
            if !vectors.iter().any(|w| w == &next) {
                vectors.push(next.clone());
                frontier.push(next);
            }
        }
    }
    let labels: Vec<String> = vectors.iter().map(render).collect();
    let truncation = CarrierObject::new(Kind::Set, labels)?;
    let sc = sc_suite(&truncation, &edges)?;
    if !sc.all_agree() {
        return Err(Error::InternalInvariant(
            "set-level oracles disagree on the truncation".into(),
        ));
    }
    let ac2 = sc.confluent();

    // AC3: the canonical map from normal forms to the quotient.
    let (_, canonical) = ar.congruence_quotient()?;
    let ac3 = canonical.is_isomorphism();

    Ok(AcReport { ac1, ac2, ac3 })
}

/// Outcome of the random step-bridging check: every contextual step embeds
/// into a one-step valley of well-formed steps, and basis steps coincide in
/// both relations.
#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub trials: usize,
    pub basis_clause_ok: bool,
    pub counterexamples: Vec<String>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.basis_clause_ok && self.counterexamples.is_empty()
    }
}

/// Checks the bridge between the contextual and well-formed step relations
/// on random steps: for `u -> v` contextual there is `w` with one optional
/// well-formed step from each side meeting at `w`.
pub fn bridge_lemma_check(
    ar: &AlgebraicRelation,
    trials: usize,
    rng: &mut impl rand::Rng,
) -> Result<BridgeReport> {
    ar.ensure_decreasing()?;

    // Basis clause: a basis element steps contextually exactly as it steps
    // well-formedly, rule for rule.
    let mut basis_clause_ok = true;
    for (i, r) in ar.rules().iter().enumerate() {
        let x = Element::basis(&r.lhs);
        let via_alg = ar.alg_step(&x, i, &crate::linalg::rat(1), &Element::zero())?;
        let via_wf = ar.wf_step(&x, i, &crate::linalg::rat(1), &Element::zero())?;
        if via_alg != via_wf || via_alg != r.rhs {
            basis_clause_ok = false;
        }
    }

    let mut counterexamples = Vec::new();
    if ar.rules().is_empty() {
        return Ok(BridgeReport {
            trials: 0,
            basis_clause_ok,
            counterexamples,
        });
    }
    for _ in 0..trials {
        let rule = rng.gen_range(0..ar.rules().len());
        let lhs = ar.rule(rule).lhs.clone();
        let coeff = crate::linalg::rat(rng.gen_range(-2i64..=2));
        // Random context, possibly containing the rewritten label.
        let mut context = Element::zero();
        for l in ar.basis().labels() {
            if rng.gen_bool(0.4) {
                let c = crate::linalg::rat(rng.gen_range(-2i64..=2));
                context = context.add(&Element::vector(&[(l.as_str(), c)]));
            }
        }
        let u = Element::basis(&lhs).scale(&coeff).add(&context);
        let v = ar.alg_step(&u, rule, &coeff, &context)?;

        // One-or-zero well-formed steps from each side.
        let mut from_u: Vec<Element> = vec![u.clone()];
        from_u.extend(ar.wf_successors(&u).into_iter().map(|(_, e)| e));
        let mut from_v: Vec<Element> = vec![v.clone()];
        from_v.extend(ar.wf_successors(&v).into_iter().map(|(_, e)| e));
        let met = from_u.iter().any(|a| from_v.iter().any(|b| a == b));
        if !met {
            counterexamples.push(format!("{u} -> {v}"));
        }
    }
    Ok(BridgeReport {
        trials,
        basis_clause_ok,
        counterexamples,
    })
}

/// Checks that the quotient is invariant under closures: the quotient by
/// the graph, by its symmetric enrichment, and by its composite-enriched
/// star all coincide.
pub fn quotient_invariance(graph: &InternalGraph) -> Result<bool> {
    let q1 = graph.quotient()?;
    let q2 = graph.sum(&graph.opposite())?.graph.quotient()?;
    if q1.object != q2.object {
        return Ok(false);
    }
    match graph.kind() {
        Kind::Set => {
            // Independent route for the star: merge along all reachability
            // pairs computed by iterated composition.
            let base = graph.base();
            let n = base.size();
            let src = graph.src().table().expect("set");
            let tgt = graph.tgt().table().expect("set");
            let mut reach = vec![vec![false; n]; n];
            for (i, row) in reach.iter_mut().enumerate() {
                row[i] = true;
            }
            for e in 0..graph.edges().size() {
                reach[src[e]][tgt[e]] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if reach[i][k] && reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
            let pairs: Vec<(String, String)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| reach[i][j])
                .map(|(i, j)| (base.labels()[i].clone(), base.labels()[j].clone()))
                .collect();
            let star = crate::graph::StructuredGraph::relation_graph(base, &pairs)?;
            let q3 = star.graph.quotient()?;
            Ok(q1.object == q3.object)
        }
        Kind::Vect => {
            // The star's relation span adds differences of composable
            // pairs, which must not change the span of `tgt - src`.
            let base = graph.base();
            let dim = base.size();
            let mut gen_diffs: Vec<Vec<crate::linalg::Rat>> = Vec::new();
            for g in graph.edges().generators() {
                let d = graph.tgt().apply(&g)?.sub(&graph.src().apply(&g)?);
                gen_diffs.push(base.coordinates(&d)?);
            }
            let (prod, pb) = graph.product_with_projections(graph)?;
            let mut star_diffs = gen_diffs.clone();
            for g in prod.edges().generators() {
                let s = graph.src().apply(&pb.proj1.apply(&g)?)?;
                let t = graph.tgt().apply(&pb.proj2.apply(&g)?)?;
                star_diffs.push(base.coordinates(&t.sub(&s))?);
            }
            Ok(same_span(&gen_diffs, &star_diffs, dim))
        }
    }
}
