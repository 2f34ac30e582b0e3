//! Independent oracles for the acceptance suite. Nothing here goes through
//! the engine's own row reduction, class merging, or reduction machinery.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use rewrite_core::carrier::{CarrierMap, CarrierObject, Element};
use rewrite_core::filtration::Filtration;
use rewrite_core::graph::InternalGraph;
use rewrite_core::linalg::Rat;
use rewrite_core::termination::LocalStrategy;

/// Rank by fraction-free (Bareiss) elimination over integers, after
/// clearing denominators row by row.
pub fn bareiss_rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::from(1), |acc, r| {
                let d = r.denom();
                let g = gcd(&acc, d);
                acc / g * d
            });
            row.iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in 0..m.len() {
            if r == row {
                continue;
            }
            for c in 0..cols {
                if c == col {
                    continue;
                }
                let v = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
        if row == m.len() {
            break;
        }
    }
    rank
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a.is_zero() {
        BigInt::from(1)
    } else {
        a
    }
}

/// Path-halving union-find, independent of the engine's class merging.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn class_count(&mut self, n: usize) -> usize {
        let mut roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// Remainder of a polynomial modulo x^2 + 1 by dense long division; the
/// basis labels are 1, x, x^2, ...
pub fn remainder_mod_x2_plus_1(basis: &CarrierObject, u: &Element) -> Element {
    let n = basis.size();
    let mut coeffs = basis.coordinates(u).unwrap();
    for i in (2..n).rev() {
        if !coeffs[i].is_zero() {
            let c = coeffs[i].clone();
            coeffs[i] = Rat::zero();
            coeffs[i - 2] = &coeffs[i - 2] - &c;
        }
    }
    Element::vector(&[("1", coeffs[0].clone()), ("x", coeffs[1].clone())])
}

/// The cyclic four-element graph.
pub fn four_element_graph() -> InternalGraph {
    let e = CarrierObject::set(&["a", "b", "c", "d"]).unwrap();
    let r = CarrierObject::set(&["f1", "f2", "f3", "f4"]).unwrap();
    let src = CarrierMap::from_assignments(
        r.clone(),
        e.clone(),
        &[("f1", "a"), ("f2", "b"), ("f3", "a"), ("f4", "b")],
    )
    .unwrap();
    let tgt = CarrierMap::from_assignments(
        r.clone(),
        e.clone(),
        &[("f1", "b"), ("f2", "a"), ("f3", "c"), ("f4", "d")],
    )
    .unwrap();
    InternalGraph::new(e, r, src, tgt).unwrap()
}

/// A strategy on the four-element graph from explicit stage lists and
/// per-element (edge, target) choices.
pub fn four_element_strategy(
    stages: &[Vec<String>],
    choices: &[(&str, &str, &str)],
) -> LocalStrategy {
    let graph = four_element_graph();
    let base = graph.base().clone();
    let filt = Filtration::from_stage_labels(&base, stages).unwrap();
    let sum = graph
        .sum(&InternalGraph::identity_graph(&base))
        .unwrap();
    let mut h_images = Vec::new();
    for l in base.labels() {
        match choices.iter().find(|(x, _, _)| x == l) {
            Some((_, edge, _)) => {
                let e = graph.edges().generator(edge).unwrap();
                h_images.push(sum.summands.left.apply(&e).unwrap());
            }
            None => h_images.push(sum.summands.right.apply(&Element::point(l)).unwrap()),
        }
    }
    let h = CarrierMap::from_generator_images(base.clone(), sum.graph.edges().clone(), &h_images)
        .unwrap();
    let mut htau = Vec::new();
    for i in 0..filt.index().len() {
        let stage = filt.stage(i);
        let (below, _) = filt.below(i).unwrap();
        let images: Vec<Element> = stage
            .labels()
            .iter()
            .map(|l| match choices.iter().find(|(x, _, _)| x == l) {
                Some((_, _, y)) => below.generator(y).unwrap(),
                None => below.generator(l).unwrap(),
            })
            .collect();
        htau.push(CarrierMap::from_generator_images(stage.clone(), below.clone(), &images).unwrap());
    }
    LocalStrategy::new(graph, filt, h, htau).unwrap()
}

pub fn stage_labels(labels: &[&[&str]]) -> Vec<Vec<String>> {
    labels
        .iter()
        .map(|s| s.iter().map(|l| l.to_string()).collect())
        .collect()
}
