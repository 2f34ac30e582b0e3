//! System description files: a JSON document naming the carrier, the
//! labels, the rules, and optionally an explicit order, filtration and
//! strategy. Rational literals are exact strings ("p/q" or integers);
//! decimal notation is rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Deserialize;

use rewrite_core::carrier::{CarrierMap, CarrierObject, Element, Kind};
use rewrite_core::filtration::{
    filtration_from_terminating_relation, AlgebraicRule, Filtration, TermOrder,
};
use rewrite_core::graph::InternalGraph;
use rewrite_core::linear::AlgebraicRelation;
use rewrite_core::termination::LocalStrategy;
use rewrite_core::{Error as CoreError, Result as CoreResult};

#[derive(Debug)]
pub enum LoadError {
    /// Anything wrong with the input itself: exit code 1.
    Input(String),
    /// Structurally sound input that fails verification: exit code 2.
    Core(CoreError),
}

impl From<CoreError> for LoadError {
    fn from(e: CoreError) -> Self {
        LoadError::Core(e)
    }
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Input(m) => write!(f, "input error: {m}"),
            LoadError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    kind: String,
    #[serde(default)]
    elements: Option<Vec<String>>,
    #[serde(default)]
    basis: Option<Vec<String>>,
    #[serde(default)]
    rules: Vec<RuleFile>,
    #[serde(default)]
    order: Option<BTreeMap<String, u64>>,
    #[serde(default)]
    filtration: Option<Vec<Vec<String>>>,
    #[serde(default)]
    strategy: Option<BTreeMap<String, String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    id: String,
    lhs: String,
    rhs: RhsFile,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RhsFile {
    Label(String),
    Combination(BTreeMap<String, String>),
}

/// A fully built set system: graph, filtration, and the local strategy.
pub struct SetSystem {
    pub base: CarrierObject,
    pub rules: Vec<(String, String, String)>,
    pub graph: InternalGraph,
    pub filtration: Filtration,
    pub strategy: LocalStrategy,
}

/// A fully built linear system.
pub struct LinearSystem {
    pub relation: AlgebraicRelation,
}

pub enum System {
    Set(Box<SetSystem>),
    Linear(Box<LinearSystem>),
}

/// Parses an exact rational literal; decimals are not rationals.
pub fn parse_rational(s: &str) -> Result<BigRational, LoadError> {
    BigRational::from_str(s.trim())
        .map_err(|_| LoadError::Input(format!("'{s}' is not an exact rational (use p/q)")))
}

pub fn load_system(path: &str) -> Result<System, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Input(format!("cannot read '{path}': {e}")))?;
    let file: SystemFile =
        serde_json::from_str(&text).map_err(|e| LoadError::Input(format!("bad JSON: {e}")))?;
    match file.kind.as_str() {
        "set" => build_set(file).map(|s| System::Set(Box::new(s))),
        "linear" => build_linear(file).map(|s| System::Linear(Box::new(s))),
        other => Err(LoadError::Input(format!(
            "unknown kind '{other}' (expected 'set' or 'linear')"
        ))),
    }
}

fn build_set(file: SystemFile) -> Result<SetSystem, LoadError> {
    let labels = file
        .elements
        .ok_or_else(|| LoadError::Input("set systems need an 'elements' list".into()))?;
    let base = CarrierObject::new(
        Kind::Set,
        labels,
    )?;
    let mut rules: Vec<(String, String, String)> = Vec::new();
    for r in &file.rules {
        let rhs = match &r.rhs {
            RhsFile::Label(l) => l.clone(),
            RhsFile::Combination(_) => {
                return Err(LoadError::Input(format!(
                    "rule '{}' of a set system must rewrite to a single label",
                    r.id
                )))
            }
        };
        if !base.contains_label(&r.lhs) {
            return Err(LoadError::Input(format!("unknown element '{}'", r.lhs)));
        }
        if !base.contains_label(&rhs) {
            return Err(LoadError::Input(format!("unknown element '{rhs}'")));
        }
        if rules.iter().any(|(id, _, _)| id == &r.id) {
            return Err(LoadError::Input(format!("duplicate rule id '{}'", r.id)));
        }
        rules.push((r.id.clone(), r.lhs.clone(), rhs));
    }

    let edge_labels: Vec<&str> = rules.iter().map(|(id, _, _)| id.as_str()).collect();
    let edges = CarrierObject::set(&edge_labels)?;
    let src_assign: Vec<(&str, &str)> = rules
        .iter()
        .map(|(id, lhs, _)| (id.as_str(), lhs.as_str()))
        .collect();
    let tgt_assign: Vec<(&str, &str)> = rules
        .iter()
        .map(|(id, _, rhs)| (id.as_str(), rhs.as_str()))
        .collect();
    let src = CarrierMap::from_assignments(edges.clone(), base.clone(), &src_assign)?;
    let tgt = CarrierMap::from_assignments(edges.clone(), base.clone(), &tgt_assign)?;
    let graph = InternalGraph::new(base.clone(), edges, src, tgt)?;

    let filtration = match &file.filtration {
        Some(stages) => Filtration::from_stage_labels(&base, stages)?,
        None => {
            let pairs: Vec<(String, String)> = rules
                .iter()
                .map(|(_, lhs, rhs)| (lhs.clone(), rhs.clone()))
                .collect();
            filtration_from_terminating_relation(&base, &pairs)?
        }
    };

    // Explicit strategy choices, or the canonical least-target derivation.
    let choice_of: BTreeMap<String, String> = match &file.strategy {
        Some(map) => {
            for (x, id) in map {
                if !base.contains_label(x) {
                    return Err(LoadError::Input(format!("unknown element '{x}'")));
                }
                if !rules.iter().any(|(rid, _, _)| rid == id) {
                    return Err(LoadError::Input(format!("unknown rule id '{id}'")));
                }
            }
            map.clone()
        }
        None => {
            let entry = |l: &str| filtration.entry_stage(l).expect("covers base");
            let mut out = BTreeMap::new();
            for x in base.labels() {
                let mut candidates: Vec<&(String, String, String)> = rules
                    .iter()
                    .filter(|(_, lhs, rhs)| lhs == x && entry(rhs) < entry(x))
                    .collect();
                candidates.sort_by_key(|(id, _, rhs)| {
                    (
                        entry(rhs),
                        base.index_of(rhs),
                        rules.iter().position(|(i, _, _)| i == id),
                    )
                });
                if let Some((id, _, _)) = candidates.first() {
                    out.insert(x.clone(), id.clone());
                }
            }
            out
        }
    };

    let strategy = build_set_strategy(&base, &rules, &graph, &filtration, &choice_of)?;
    Ok(SetSystem {
        base,
        rules,
        graph,
        filtration,
        strategy,
    })
}

/// Assembles `(h, htau)` from per-element rule choices. Elements without a
/// choice take the unit. A choice whose target does not sit strictly below
/// is reported as a core error so the caller can map it to a verification
/// failure.
fn build_set_strategy(
    base: &CarrierObject,
    rules: &[(String, String, String)],
    graph: &InternalGraph,
    filtration: &Filtration,
    choice_of: &BTreeMap<String, String>,
) -> CoreResult<LocalStrategy> {
    let sum = graph.sum(&InternalGraph::identity_graph(base))?;
    let target_of = |x: &str| -> Option<&str> {
        choice_of.get(x).map(|id| {
            rules
                .iter()
                .find(|(rid, _, _)| rid == id)
                .map(|(_, _, rhs)| rhs.as_str())
                .expect("validated rule id")
        })
    };
    let mut h_images = Vec::new();
    for l in base.labels() {
        match choice_of.get(l) {
            Some(id) => {
                let e = graph.edges().generator(id)?;
                h_images.push(sum.summands.left.apply(&e)?);
            }
            None => h_images.push(sum.summands.right.apply(&Element::point(l))?),
        }
    }
    let h = CarrierMap::from_generator_images(
        base.clone(),
        sum.graph.edges().clone(),
        &h_images,
    )?;
    let mut htau = Vec::new();
    for i in 0..filtration.index().len() {
        let stage = filtration.stage(i);
        let (below, _) = filtration.below(i)?;
        let images: CoreResult<Vec<Element>> = stage
            .labels()
            .iter()
            .map(|l| {
                let t = target_of(l).unwrap_or(l);
                if !below.contains_label(t) {
                    return Err(rewrite_core::Error::NotTerminating(format!(
                        "choice at '{l}' does not descend: '{t}' is not strictly below stage {}",
                        filtration.index().name(i)
                    )));
                }
                below.generator(t)
            })
            .collect();
        htau.push(CarrierMap::from_generator_images(
            stage.clone(),
            below.clone(),
            &images?,
        )?);
    }
    LocalStrategy::new(graph.clone(), filtration.clone(), h, htau)
}

fn build_linear(file: SystemFile) -> Result<LinearSystem, LoadError> {
    let labels = file
        .basis
        .ok_or_else(|| LoadError::Input("linear systems need a 'basis' list".into()))?;
    let basis = CarrierObject::new(Kind::Vect, labels.clone())?;
    if file.filtration.is_some() || file.strategy.is_some() {
        return Err(LoadError::Input(
            "explicit filtrations and strategies are only supported for set systems".into(),
        ));
    }
    let order = match &file.order {
        Some(ranks) => {
            for l in ranks.keys() {
                if !basis.contains_label(l) {
                    return Err(LoadError::Input(format!("unknown basis label '{l}'")));
                }
            }
            TermOrder::Rank(ranks.clone())
        }
        None => TermOrder::Rank(
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), i as u64))
                .collect(),
        ),
    };
    let mut rules = Vec::new();
    for r in &file.rules {
        let rhs = match &r.rhs {
            RhsFile::Label(_) => {
                return Err(LoadError::Input(format!(
                    "rule '{}' of a linear system must rewrite to a coefficient map",
                    r.id
                )))
            }
            RhsFile::Combination(pairs) => {
                let mut v = Element::zero();
                for (label, lit) in pairs {
                    if !basis.contains_label(label) {
                        return Err(LoadError::Input(format!("unknown basis label '{label}'")));
                    }
                    let c = parse_rational(lit)?;
                    v = v.add(&Element::vector(&[(label.as_str(), c)]));
                }
                v
            }
        };
        rules.push((
            r.id.clone(),
            AlgebraicRule {
                lhs: r.lhs.clone(),
                rhs,
            },
        ));
    }
    let relation = AlgebraicRelation::new(basis, order, rules)?;
    Ok(LinearSystem { relation })
}

/// Parses a linear expression such as `x^3+x^2-1/2*x+1` over the basis:
/// monomials are `[coeff*]label` joined by `+`/`-`.
pub fn parse_linear_term(basis: &CarrierObject, input: &str) -> Result<Element, LoadError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(LoadError::Input("empty term".into()));
    }
    let mut out = Element::zero();
    let mut rest = s.as_str();
    let mut sign = BigRational::from_integer(1.into());
    if let Some(stripped) = rest.strip_prefix('-') {
        sign = -sign;
        rest = stripped;
    } else if let Some(stripped) = rest.strip_prefix('+') {
        rest = stripped;
    }
    while !rest.is_empty() {
        // Longest-prefix match: a monomial runs until the next top-level
        // +/- that is not part of a label such as "x^-1".
        let cut = rest
            .char_indices()
            .skip(1)
            .find(|&(i, c)| (c == '+' || c == '-') && !rest[..i].ends_with('^'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let (mono, tail) = rest.split_at(cut);
        let (coeff, label) = match mono.split_once('*') {
            Some((c, l)) => (parse_rational(c)?, l),
            None => {
                if basis.contains_label(mono) {
                    (BigRational::from_integer(1.into()), mono)
                } else {
                    return Err(LoadError::Input(format!(
                        "'{mono}' is neither 'coeff*label' nor a basis label"
                    )));
                }
            }
        };
        if !basis.contains_label(label) {
            return Err(LoadError::Input(format!("unknown basis label '{label}'")));
        }
        out = out.add(&Element::vector(&[(label, &sign * coeff)]));
        rest = tail;
        if let Some(stripped) = rest.strip_prefix('-') {
            sign = -BigRational::from_integer(1.into());
            rest = stripped;
        } else if let Some(stripped) = rest.strip_prefix('+') {
            sign = BigRational::from_integer(1.into());
            rest = stripped;
        }
    }
    Ok(out)
}
