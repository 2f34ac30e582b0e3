//! Deterministic random instance generators for the property suites.
//!
//! Every generator takes an explicit ChaCha stream; suites derive one stream
//! per instance from `(seed, index)` so runs are reproducible and instances
//! are independent of evaluation order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::carrier::{CarrierMap, CarrierObject, Element, Kind};
use crate::filtration::{AlgebraicRule, TermOrder};
use crate::linalg::{rat, Rat};
use crate::linear::AlgebraicRelation;
use crate::Result;

/// The per-instance random stream of a seeded suite.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index))
}

/// A randomly generated terminating relation on a finite set.
#[derive(Clone, Debug)]
pub struct SetInstance {
    pub base: CarrierObject,
    pub rel: Vec<(String, String)>,
}

/// Random terminating set system: edges always point down a random rank
/// assignment, which rules out cycles.
pub fn random_terminating_set_system(
    rng: &mut ChaCha8Rng,
    max_elements: usize,
    max_rules: usize,
) -> SetInstance {
    let n = rng.gen_range(2..=max_elements.max(2));
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let base = CarrierObject::new(Kind::Set, labels.clone()).expect("fresh labels");
    // A random permutation serving as the descending rank.
    let mut rank: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        rank.swap(i, j);
    }
    let mut rel = Vec::new();
    let rules = rng.gen_range(0..=max_rules);
    for _ in 0..rules {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        if rank[x] > rank[y] {
            let pair = (labels[x].clone(), labels[y].clone());
            if !rel.contains(&pair) {
                rel.push(pair);
            }
        }
    }
    SetInstance { base, rel }
}

/// Random decreasing algebraic relation: ranks follow basis order and every
/// rule target is supported strictly below its head, with small rational
/// coefficients.
pub fn random_decreasing_relation(
    rng: &mut ChaCha8Rng,
    max_basis: usize,
) -> Result<AlgebraicRelation> {
    let n = rng.gen_range(2..=max_basis.max(2));
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let basis = CarrierObject::new(Kind::Vect, labels.clone())?;
    let order = TermOrder::Rank(
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u64))
            .collect(),
    );
    let rule_count = rng.gen_range(0..=n + 1);
    let mut rules = Vec::new();
    for _ in 0..rule_count {
        let head = rng.gen_range(1..n);
        let mut pairs: Vec<(&str, Rat)> = Vec::new();
        for l in labels.iter().take(head) {
            if rng.gen_bool(0.5) {
                let num = rng.gen_range(-2i64..=2);
                if num != 0 {
                    let den = rng.gen_range(1i64..=2);
                    pairs.push((l.as_str(), Rat::new(num.into(), den.into())));
                }
            }
        }
        rules.push(AlgebraicRule {
            lhs: labels[head].clone(),
            rhs: Element::vector(&pairs),
        });
    }
    AlgebraicRelation::from_rules(basis, order, rules)
}

/// A random vector in the span of the given basis with small coefficients.
pub fn random_vector(rng: &mut ChaCha8Rng, basis: &CarrierObject, density: f64) -> Element {
    let mut v = Element::zero();
    for l in basis.labels() {
        if rng.gen_bool(density) {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                v = v.add(&Element::vector(&[(l.as_str(), rat(c))]));
            }
        }
    }
    v
}

/// A chain of nested set graphs over a common base, for colimit-stability
/// checks: returns the stage edge subsets (as index lists into the top
/// graph's edges) and the top graph itself.
pub fn random_set_graph_chain(
    rng: &mut ChaCha8Rng,
    stages: usize,
) -> Result<(crate::graph::InternalGraph, Vec<Vec<usize>>)> {
    let n = rng.gen_range(2..=4);
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let base = CarrierObject::new(Kind::Set, labels)?;
    let ne = rng.gen_range(1..=6);
    let edge_labels: Vec<String> = (0..ne).map(|i| format!("e{i}")).collect();
    let edges = CarrierObject::new(Kind::Set, edge_labels)?;
    let src = CarrierMap::from_table(
        edges.clone(),
        base.clone(),
        (0..ne).map(|_| rng.gen_range(0..n)).collect(),
    )?;
    let tgt = CarrierMap::from_table(
        edges.clone(),
        base.clone(),
        (0..ne).map(|_| rng.gen_range(0..n)).collect(),
    )?;
    let graph = crate::graph::InternalGraph::new(base, edges, src, tgt)?;
    // Nested edge subsets, last one full.
    let mut subsets = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for s in 0..stages {
        let remaining: Vec<usize> = (0..ne).filter(|i| !current.contains(i)).collect();
        let take = if s + 1 == stages {
            remaining.len()
        } else {
            rng.gen_range(0..=remaining.len())
        };
        for &i in remaining.iter().take(take) {
            current.push(i);
        }
        let mut sorted = current.clone();
        sorted.sort_unstable();
        subsets.push(sorted);
    }
    Ok((graph, subsets))
}

/// A chain of nested vector-space graphs (sub-bases of the edge object)
/// over a common base, for the linear colimit-stability check.
pub fn random_vect_graph_chain(
    rng: &mut ChaCha8Rng,
    stages: usize,
) -> Result<(crate::graph::InternalGraph, Vec<Vec<usize>>)> {
    let n = rng.gen_range(2..=3);
    let labels: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let base = CarrierObject::new(Kind::Vect, labels)?;
    let ne = rng.gen_range(1..=3);
    let edge_labels: Vec<String> = (0..ne).map(|i| format!("r{i}")).collect();
    let edges = CarrierObject::new(Kind::Vect, edge_labels)?;
    let images = |rng: &mut ChaCha8Rng| -> Vec<Element> {
        (0..ne).map(|_| random_vector(rng, &base, 0.6)).collect()
    };
    let src = CarrierMap::from_generator_images(edges.clone(), base.clone(), &images(rng))?;
    let tgt = CarrierMap::from_generator_images(edges.clone(), base.clone(), &images(rng))?;
    let graph = crate::graph::InternalGraph::new(base, edges, src, tgt)?;
    let mut subsets = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for s in 0..stages {
        let remaining: Vec<usize> = (0..ne).filter(|i| !current.contains(i)).collect();
        let take = if s + 1 == stages {
            remaining.len()
        } else {
            rng.gen_range(0..=remaining.len())
        };
        for &i in remaining.iter().take(take) {
            current.push(i);
        }
        let mut sorted = current.clone();
        sorted.sort_unstable();
        subsets.push(sorted);
    }
    Ok((graph, subsets))
}

/// The restriction of a graph to a subset of its edge generators.
pub fn edge_subgraph(
    graph: &crate::graph::InternalGraph,
    keep: &[usize],
) -> Result<crate::graph::InternalGraph> {
    let edge_labels: Vec<String> = keep
        .iter()
        .map(|&i| graph.edges().labels()[i].clone())
        .collect();
    let sub = CarrierObject::new(graph.edges().kind(), edge_labels)?;
    let inclusion = CarrierMap::inclusion(&sub, graph.edges())?;
    let src = graph.src().compose(&inclusion)?;
    let tgt = graph.tgt().compose(&inclusion)?;
    crate::graph::InternalGraph::new(graph.base().clone(), sub, src, tgt)
}
