//! Terminating directed posets and filtrations of carrier objects.
//!
//! A filtration presents an object as the colimit of a diagram of stages
//! indexed by a directed poset. Stages are stored as subobjects (subsets of
//! element labels, or sub-bases), so every link map is an inclusion; all of
//! the worked examples live in this regime. The poset is finite, hence
//! terminating automatically.

use std::collections::BTreeMap;

use crate::carrier::{coproduct_many, CarrierMap, CarrierObject, Element, Kind};
use crate::{Error, Result};

/// A finite directed poset: either an initial segment of the naturals or an
/// explicit cover relation. Directedness (every pair has an upper bound) is
/// validated at construction; termination is automatic for finite posets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DirectedPoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl DirectedPoset {
    /// The chain `0 < 1 < ... < n-1`.
    pub fn nat_prefix(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Malformed("a directed poset is non-empty".into()));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n)
            .map(|i| (0..n).map(|j| i <= j).collect())
            .collect();
        Ok(DirectedPoset { names, leq })
    }

    /// A finite poset from labels and a cover relation `(lower, upper)`.
    pub fn from_covers(labels: &[&str], covers: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        for (i, l) in names.iter().enumerate() {
            if names[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let n = names.len();
        if n == 0 {
            return Err(Error::Malformed("a directed poset is non-empty".into()));
        }
        let index = |l: &str| {
            names
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in covers {
            let (i, j) = (index(lo)?, index(hi)?);
            leq[i][j] = true;
        }
        // Transitive closure.
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        // Antisymmetry, i.e. the cover relation is acyclic.
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Malformed(format!(
                        "cycle between '{}' and '{}'",
                        names[i], names[j]
                    )));
                }
            }
        }
        // Directedness, exhaustively over pairs.
        for i in 0..n {
            for j in 0..n {
                if !(0..n).any(|z| leq[i][z] && leq[j][z]) {
                    return Err(Error::Malformed(format!(
                        "'{}' and '{}' have no upper bound",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(DirectedPoset { names, leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    pub fn minimal_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.lt(j, i)))
            .collect()
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        self.minimal_indices().contains(&i)
    }

    pub fn strictly_below(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.lt(j, i)).collect()
    }

    /// Covers `(i, j)`: `i < j` with nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt(i, j) && !(0..self.len()).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Indices in some linear extension of the order.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut remaining: Vec<usize> = (0..self.len()).collect();
        let mut out = Vec::new();
        while !remaining.is_empty() {
            let pos = remaining
                .iter()
                .position(|&i| remaining.iter().all(|&j| j == i || !self.lt(j, i)))
                .expect("finite posets always have a minimal element");
            out.push(remaining.remove(pos));
        }
        out
    }

    /// The longest strictly descending chain starting at `i` (zero at
    /// minimal indices).
    pub fn depth(&self, i: usize) -> usize {
        self.strictly_below(i)
            .into_iter()
            .map(|j| 1 + self.depth(j))
            .max()
            .unwrap_or(0)
    }
}

/// A filtration of a carrier object by a terminating directed poset.
///
/// Stages are subobjects, links are inclusions, and the object is the union
/// of its stages; this is validated at construction and violations are hard
/// errors.
#[derive(Clone, Debug)]
pub struct Filtration {
    index: DirectedPoset,
    ambient: CarrierObject,
    stages: Vec<CarrierObject>,
}

impl Filtration {
    pub fn new(
        index: DirectedPoset,
        ambient: CarrierObject,
        stages: Vec<CarrierObject>,
    ) -> Result<Self> {
        if stages.len() != index.len() {
            return Err(Error::Malformed("one stage per index required".into()));
        }
        for s in &stages {
            if s.kind() != ambient.kind() {
                return Err(Error::KindMismatch);
            }
            for l in s.labels() {
                if !ambient.contains_label(l) {
                    return Err(Error::UnknownLabel(l.clone()));
                }
            }
        }
        // Functoriality: the diagram is monotone under inclusion.
        for i in 0..stages.len() {
            for j in 0..stages.len() {
                if index.leq(i, j) {
                    for l in stages[i].labels() {
                        if !stages[j].contains_label(l) {
                            return Err(Error::Malformed(format!(
                                "stage '{}' is not included in stage '{}' (label '{l}')",
                                index.name(i),
                                index.name(j)
                            )));
                        }
                    }
                }
            }
        }
        // Colimit: every ambient label is hit by some stage.
        for l in ambient.labels() {
            if !stages.iter().any(|s| s.contains_label(l)) {
                return Err(Error::Malformed(format!(
                    "label '{l}' is not reached by any stage"
                )));
            }
        }
        Ok(Filtration {
            index,
            ambient,
            stages,
        })
    }

    /// A filtration from stage label lists over the naturals.
    pub fn from_stage_labels(ambient: &CarrierObject, stages: &[Vec<String>]) -> Result<Self> {
        let index = DirectedPoset::nat_prefix(stages.len())?;
        let objs: Result<Vec<CarrierObject>> = stages
            .iter()
            .map(|labels| {
                // Keep ambient label order within each stage.
                let ordered: Vec<String> = ambient
                    .labels()
                    .iter()
                    .filter(|l| labels.contains(l))
                    .cloned()
                    .collect();
                if ordered.len() != labels.len() {
                    let missing = labels
                        .iter()
                        .find(|l| !ambient.contains_label(l))
                        .cloned()
                        .unwrap_or_default();
                    return Err(Error::UnknownLabel(missing));
                }
                CarrierObject::new(ambient.kind(), ordered)
            })
            .collect();
        Filtration::new(index, ambient.clone(), objs?)
    }

    pub fn index(&self) -> &DirectedPoset {
        &self.index
    }

    pub fn ambient(&self) -> &CarrierObject {
        &self.ambient
    }

    pub fn stage(&self, i: usize) -> &CarrierObject {
        &self.stages[i]
    }

    pub fn stages(&self) -> &[CarrierObject] {
        &self.stages
    }

    /// The injection of a stage into the ambient object.
    pub fn injection(&self, i: usize) -> Result<CarrierMap> {
        CarrierMap::inclusion(&self.stages[i], &self.ambient)
    }

    /// The first index (in linear-extension order) whose stage contains the
    /// label.
    pub fn entry_stage(&self, label: &str) -> Option<usize> {
        self.index
            .linear_extension()
            .into_iter()
            .find(|&i| self.stages[i].contains_label(label))
    }

    /// The colimit of the stages strictly below `i`, with its injection into
    /// the ambient object. At minimal indices this is the stage itself.
    pub fn below(&self, i: usize) -> Result<(CarrierObject, CarrierMap)> {
        let obj = if self.index.is_minimal(i) {
            self.stages[i].clone()
        } else {
            let belows = self.index.strictly_below(i);
            let labels: Vec<String> = self
                .ambient
                .labels()
                .iter()
                .filter(|l| belows.iter().any(|&j| self.stages[j].contains_label(l)))
                .cloned()
                .collect();
            CarrierObject::new(self.ambient.kind(), labels)?
        };
        let inj = CarrierMap::inclusion(&obj, &self.ambient)?;
        Ok((obj, inj))
    }

    /// The object of normal forms: the coproduct of the minimal stages, with
    /// its canonical map into the ambient object.
    pub fn min_object(&self) -> Result<(CarrierObject, CarrierMap)> {
        let mins = self.index.minimal_indices();
        let parts: Vec<(&str, &CarrierObject)> = mins
            .iter()
            .map(|&i| (self.index.name(i), &self.stages[i]))
            .collect();
        let (object, injections) = coproduct_many(&parts)?;
        // Copair the stage inclusions through the coproduct injections.
        let mut images: Vec<Element> = vec![Element::zero(); object.size()];
        for (part, &i) in injections.iter().zip(&mins) {
            let stage_inj = self.injection(i)?;
            for (j, _) in self.stages[i].labels().iter().enumerate() {
                let in_cop = part.generator_image(j);
                let idx = match &in_cop {
                    Element::Point(l) => object.index_of(l).expect("own label"),
                    Element::Vector(m) => {
                        let l = m.keys().next().expect("basis image");
                        object.index_of(l).expect("own label")
                    }
                };
                images[idx] = stage_inj.generator_image(j);
            }
        }
        let into_ambient =
            CarrierMap::from_generator_images(object.clone(), self.ambient.clone(), &images)?;
        Ok((object, into_ambient))
    }

    /// Restriction `f . inclusion(E_{<i})` of a map defined on the ambient
    /// object.
    pub fn restrict_map(&self, f: &CarrierMap, i: usize) -> Result<CarrierMap> {
        if f.dom() != &self.ambient {
            return Err(Error::DomainMismatch);
        }
        let (_, inj) = self.below(i)?;
        f.compose(&inj)
    }

    /// Pushes a set filtration forward along the free vector space functor.
    pub fn free_vector_space(&self) -> Result<Filtration> {
        if self.ambient.kind() != Kind::Set {
            return Err(Error::KindMismatch);
        }
        let ambient = CarrierObject::new(Kind::Vect, self.ambient.labels().to_vec())?;
        let stages: Result<Vec<CarrierObject>> = self
            .stages
            .iter()
            .map(|s| CarrierObject::new(Kind::Vect, s.labels().to_vec()))
            .collect();
        Filtration::new(self.index.clone(), ambient, stages?)
    }
}

/// Builds the stage filtration of a terminating relation on a finite set:
/// stage zero is the set of normal forms, and each later stage adds the
/// elements with a step into the previous stage.
pub fn filtration_from_terminating_relation(
    base: &CarrierObject,
    rel: &[(String, String)],
) -> Result<Filtration> {
    if base.kind() != Kind::Set {
        return Err(Error::KindMismatch);
    }
    for (x, y) in rel {
        if !base.contains_label(x) {
            return Err(Error::UnknownLabel(x.clone()));
        }
        if !base.contains_label(y) {
            return Err(Error::UnknownLabel(y.clone()));
        }
    }
    if let Some(cycle) = find_cycle(base, rel) {
        return Err(Error::NotTerminating(cycle));
    }
    let has_step = |x: &str| rel.iter().any(|(a, _)| a == x);
    let mut stages: Vec<Vec<String>> = Vec::new();
    let nf: Vec<String> = base
        .labels()
        .iter()
        .filter(|l| !has_step(l))
        .cloned()
        .collect();
    stages.push(nf);
    loop {
        let prev = stages.last().expect("nonempty");
        let next: Vec<String> = base
            .labels()
            .iter()
            .filter(|x| {
                prev.contains(x)
                    || rel
                        .iter()
                        .any(|(a, b)| a == *x && prev.contains(b))
            })
            .cloned()
            .collect();
        if next.len() == prev.len() {
            break;
        }
        stages.push(next);
    }
    if stages.last().expect("nonempty").len() != base.size() {
        // Unreachable for terminating relations on finite sets; left as a
        // defensive invariant.
        return Err(Error::InternalInvariant(
            "stages failed to stabilize at the whole set".into(),
        ));
    }
    Filtration::from_stage_labels(base, &stages)
}

/// Finds any cycle in the step relation, reported as a label path.
fn find_cycle(base: &CarrierObject, rel: &[(String, String)]) -> Option<String> {
    let n = base.size();
    let mut adj = vec![Vec::new(); n];
    for (x, y) in rel {
        let i = base.index_of(x)?;
        let j = base.index_of(y)?;
        adj[i].push(j);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();
    fn visit(
        v: usize,
        adj: &[Vec<usize>],
        state: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for &w in &adj[v] {
            if state[w] == 1 {
                let start = stack.iter().position(|&x| x == w).expect("on stack");
                let mut cycle = stack[start..].to_vec();
                cycle.push(w);
                return Some(cycle);
            }
            if state[w] == 0 {
                if let Some(c) = visit(w, adj, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    for v in 0..n {
        if state[v] == 0 {
            if let Some(cycle) = visit(v, &adj, &mut state, &mut stack) {
                let names: Vec<&str> = cycle.iter().map(|&i| base.labels()[i].as_str()).collect();
                return Some(names.join(" -> "));
            }
        }
    }
    None
}

/// A strict terminating order on basis labels: either numeric ranks or an
/// explicit precedence DAG (edges point from smaller to larger).
#[derive(Clone, Debug)]
pub enum TermOrder {
    Rank(BTreeMap<String, u64>),
    Dag { labels: Vec<String>, below: Vec<(String, String)> },
}

impl TermOrder {
    pub fn from_ranks(ranks: &[(&str, u64)]) -> Self {
        TermOrder::Rank(
            ranks
                .iter()
                .map(|(l, r)| (l.to_string(), *r))
                .collect(),
        )
    }

    /// Whether `x < y` strictly.
    pub fn lt(&self, x: &str, y: &str) -> bool {
        match self {
            TermOrder::Rank(ranks) => match (ranks.get(x), ranks.get(y)) {
                (Some(a), Some(b)) => a < b,
                _ => false,
            },
            TermOrder::Dag { labels, below } => {
                if !labels.iter().any(|l| l == x) || !labels.iter().any(|l| l == y) {
                    return false;
                }
                // Reachability along the precedence edges.
                let mut frontier = vec![x.to_string()];
                let mut seen = vec![x.to_string()];
                while let Some(cur) = frontier.pop() {
                    for (lo, hi) in below {
                        if lo == &cur && !seen.contains(hi) {
                            if hi == y {
                                return true;
                            }
                            seen.push(hi.clone());
                            frontier.push(hi.clone());
                        }
                    }
                }
                false
            }
        }
    }
}

/// One rewrite rule of an algebraic relation: a basis label and the vector
/// it rewrites to.
#[derive(Clone, Debug)]
pub struct AlgebraicRule {
    pub lhs: String,
    pub rhs: Element,
}

/// Heights of basis labels under the min-max recurrence: normal forms have
/// height zero, and a reducible label is one more than the best rule, where
/// a rule is measured by the tallest label in its target's support.
pub fn height(
    basis: &CarrierObject,
    order: &TermOrder,
    rules: &[AlgebraicRule],
) -> Result<BTreeMap<String, usize>> {
    if basis.kind() != Kind::Vect {
        return Err(Error::KindMismatch);
    }
    for r in rules {
        if !basis.contains_label(&r.lhs) {
            return Err(Error::UnknownLabel(r.lhs.clone()));
        }
        if !basis.contains(&r.rhs) {
            return Err(Error::Malformed(format!(
                "rule target {} leaves the basis",
                r.rhs
            )));
        }
        for y in r.rhs.support() {
            if !order.lt(y, &r.lhs) {
                return Err(Error::NotDecreasing(format!(
                    "rule {} -> {} is not strictly decreasing at '{y}'",
                    r.lhs, r.rhs
                )));
            }
        }
    }
    let mut heights: BTreeMap<String, usize> = BTreeMap::new();
    fn eval(
        x: &str,
        rules: &[AlgebraicRule],
        heights: &mut BTreeMap<String, usize>,
    ) -> usize {
        if let Some(&h) = heights.get(x) {
            return h;
        }
        let mine: Vec<&AlgebraicRule> = rules.iter().filter(|r| r.lhs == x).collect();
        let h = if mine.is_empty() {
            0
        } else {
            // A target with empty support still costs one step.
            mine.iter()
                .map(|r| {
                    r.rhs
                        .support()
                        .iter()
                        .map(|y| eval(y, rules, heights))
                        .max()
                        .unwrap_or(0)
                })
                .min()
                .expect("nonempty")
                + 1
        };
        heights.insert(x.to_string(), h);
        h
    }
    for l in basis.labels() {
        eval(l, rules, &mut heights);
    }
    Ok(heights)
}

/// The height filtration of a free vector space: stage `i` is spanned by the
/// labels of height at most `i`, so a vector lies in stage `i` exactly when
/// its support does.
pub fn filtration_from_height(
    basis: &CarrierObject,
    order: &TermOrder,
    rules: &[AlgebraicRule],
) -> Result<Filtration> {
    let heights = height(basis, order, rules)?;
    let max_h = heights.values().copied().max().unwrap_or(0);
    let stages: Vec<Vec<String>> = (0..=max_h)
        .map(|i| {
            basis
                .labels()
                .iter()
                .filter(|l| heights[*l] <= i)
                .cloned()
                .collect()
        })
        .collect();
    Filtration::from_stage_labels(basis, &stages)
}

/// Membership of a vector in the span of a stage: support containment.
pub fn vector_in_stage(stage: &CarrierObject, v: &Element) -> bool {
    match v {
        Element::Vector(m) => m.keys().all(|l| stage.contains_label(l)),
        Element::Point(l) => stage.contains_label(l),
    }
}
