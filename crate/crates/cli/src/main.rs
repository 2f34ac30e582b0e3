//! Batch front-end for the rewriting engine.
//!
//! Commands load a JSON system description, run the requested builders and
//! verifiers, and print a deterministic report (fixed-width text or JSON).
//!
//! Exit codes: 0 pass, 1 input error, 2 verification failure, 3 confluence
//! failure, 4 internal-consistency abort (a certified equivalence failed to
//! hold, which is always an engine bug).

mod report;
mod system;

use std::collections::VecDeque;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rewrite_core::carrier::Element;
use rewrite_core::confluence::{
    ac_suite, bridge_lemma_check, newman, quotient_invariance, sc_suite,
    search_lc_structure_linear, search_lc_structure_set_capped,
};
use rewrite_core::instances::{
    instance_rng, random_decreasing_relation, random_terminating_set_system,
};
use rewrite_core::strategy::induce_global_strategy;
use rewrite_core::termination::strategy_from_set_relation;
use rewrite_core::Error as CoreError;

use report::*;
use system::{load_system, parse_linear_term, LoadError, System};

#[derive(Parser)]
#[command(name = "rewrite", version, about = "rewriting engine front-end")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the local strategy of a system description.
    Check {
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Normalize a term via the induced strategy and the independent oracle.
    Normalize {
        path: String,
        term: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for a local-confluence structure and certify confluence.
    Newman {
        path: String,
        #[arg(long)]
        json: bool,
        /// Conversion search depth cap (set systems only).
        #[arg(long)]
        depth_cap: Option<usize>,
    },
    /// Compare the quotient by the graph with the object of normal forms.
    Quotient {
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized equivalence suites.
    Suite {
        /// Which suites to run: set, linear, or all.
        #[arg(long, default_value = "all")]
        kind: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        max_elements: usize,
        #[arg(long, default_value_t = 16)]
        max_rules: usize,
        #[arg(long, default_value_t = 5)]
        max_basis: usize,
        /// Contextual-step bridge trials per linear instance.
        #[arg(long, default_value_t = 5)]
        bridge_trials: usize,
        #[arg(long)]
        depth_cap: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { path, json } => cmd_check(&path, json),
        Command::Normalize { path, term, json } => cmd_normalize(&path, &term, json),
        Command::Newman {
            path,
            json,
            depth_cap,
        } => cmd_newman(&path, json, depth_cap),
        Command::Quotient { path, json } => cmd_quotient(&path, json),
        Command::Suite {
            kind,
            seed,
            count,
            max_elements,
            max_rules,
            max_basis,
            bridge_trials,
            depth_cap,
            json,
        } => cmd_suite(SuiteArgs {
            kind,
            seed,
            count,
            max_elements,
            max_rules,
            max_basis,
            bridge_trials,
            depth_cap,
            json,
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &LoadError) -> u8 {
    match e {
        LoadError::Input(_) => 1,
        LoadError::Core(c) => match c {
            CoreError::NotTerminating(_) | CoreError::NotDecreasing(_) => 2,
            CoreError::NotConfluent(_) | CoreError::Exhausted(_) => 3,
            CoreError::InternalInvariant(_) => 4,
            _ => 1,
        },
    }
}

fn emit<T: serde::Serialize>(json: bool, value: &T, human: String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        );
    } else {
        print!("{human}");
    }
}

fn cmd_check(path: &str, json: bool) -> Result<ExitCode, LoadError> {
    let system = load_system(path)?;
    let report = match &system {
        System::Set(s) => s.strategy.verify()?,
        System::Linear(l) => {
            let (_, ls) = l.relation.to_internal()?;
            ls.verify()?
        }
    };
    let out = CheckReport {
        command: "check",
        system: path.to_string(),
        axioms: report
            .checks
            .iter()
            .map(|c| AxiomLine {
                axiom: c.axiom.to_string(),
                ok: c.ok,
                witness: c.witness.clone(),
            })
            .collect(),
        passed: report.passed(),
    };
    emit(json, &out, out.render_human());
    Ok(if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_normalize(path: &str, term: &str, json: bool) -> Result<ExitCode, LoadError> {
    let system = load_system(path)?;
    let (input, strategy_nf, oracle_nf, agreement) = match &system {
        System::Set(s) => {
            if !s.base.contains_label(term) {
                return Err(LoadError::Input(format!("unknown element '{term}'")));
            }
            let gs = induce_global_strategy(&s.strategy)?;
            let nf = gs.normal_form_in_base(&Element::point(term))?;
            // Independent oracle: the normal forms reachable from the term.
            let reachable = reachable_normal_forms(s, term);
            let Element::Point(nf_label) = &nf else {
                unreachable!("set strategy yields points")
            };
            if !reachable.contains(nf_label) {
                return Err(LoadError::Core(CoreError::InternalInvariant(format!(
                    "strategy normal form '{nf_label}' is not reachable from '{term}'"
                ))));
            }
            (
                term.to_string(),
                nf_label.clone(),
                reachable.join(" "),
                true,
            )
        }
        System::Linear(l) => {
            let v = parse_linear_term(l.relation.basis(), term)?;
            let (_, ls) = l.relation.to_internal()?;
            let gs = induce_global_strategy(&ls)?;
            let nf = gs.normal_form_in_base(&v)?;
            let (oracle, _) = l.relation.wf_normalize(&v)?;
            if nf != oracle {
                return Err(LoadError::Core(CoreError::InternalInvariant(format!(
                    "strategy normal form {nf} disagrees with the reduction oracle {oracle}"
                ))));
            }
            (format!("{v}"), format!("{nf}"), format!("{oracle}"), true)
        }
    };
    let out = NormalizeReport {
        command: "normalize",
        system: path.to_string(),
        input,
        strategy_normal_form: strategy_nf,
        oracle_normal_form: oracle_nf,
        agreement,
    };
    emit(json, &out, out.render_human());
    Ok(ExitCode::SUCCESS)
}

/// All normal forms reachable from `from` in a set system, sorted.
fn reachable_normal_forms(s: &system::SetSystem, from: &str) -> Vec<String> {
    let mut seen = vec![from.to_string()];
    let mut queue = VecDeque::from([from.to_string()]);
    while let Some(x) = queue.pop_front() {
        for (_, lhs, rhs) in &s.rules {
            if lhs == &x && !seen.contains(rhs) {
                seen.push(rhs.clone());
                queue.push_back(rhs.clone());
            }
        }
    }
    let mut nfs: Vec<String> = seen
        .into_iter()
        .filter(|x| s.rules.iter().all(|(_, lhs, _)| lhs != x))
        .collect();
    nfs.sort_unstable();
    nfs
}

fn cmd_newman(path: &str, json: bool, depth_cap: Option<usize>) -> Result<ExitCode, LoadError> {
    let system = load_system(path)?;
    let (lc, staged) = match &system {
        System::Set(s) => {
            let report = s.strategy.verify()?;
            if !report.passed() {
                let f = report.first_failure().expect("failed");
                return Err(LoadError::Core(CoreError::NotTerminating(format!(
                    "strategy violates {}: {:?}",
                    f.axiom, f.witness
                ))));
            }
            let lc = search_lc_structure_set_capped(&s.strategy, depth_cap)?;
            (lc, s.graph.edges().size())
        }
        System::Linear(l) => {
            let (graph, ls) = l.relation.to_internal()?;
            let lc = search_lc_structure_linear(&l.relation, &ls)?;
            (lc, graph.edges().size())
        }
    };
    let (_, cert) = newman(&lc)?;
    let out = CertificateReport {
        command: "newman",
        system: path.to_string(),
        staged_edges: staged,
        audited_edges: cert.audited_edges,
        retraction: cert.certificate.retraction,
        section_square: cert.certificate.section_square,
        source_section: cert.certificate.source_section,
        coequalizes: cert.certificate.coequalizes,
        quotient_size: cert.certificate.quotient_size,
        min_size: cert.certificate.min_size,
        canonical_iso: cert.certificate.canonical_iso,
        certified: cert.certificate.holds(),
    };
    emit(json, &out, out.render_human());
    Ok(if out.certified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn cmd_quotient(path: &str, json: bool) -> Result<ExitCode, LoadError> {
    let system = load_system(path)?;
    let (quotient, min, iso) = match &system {
        System::Set(s) => {
            let q = s.graph.quotient()?;
            let (min_obj, min_inj) = s.filtration.min_object()?;
            let canonical = q.projection.compose(&min_inj)?;
            (q.object.size(), min_obj.size(), canonical.is_isomorphism())
        }
        System::Linear(l) => {
            let (graph, ls) = l.relation.to_internal()?;
            let q = graph.quotient()?;
            let (min_obj, min_inj) = ls.filtration().min_object()?;
            let canonical = q.projection.compose(&min_inj)?;
            (q.object.size(), min_obj.size(), canonical.is_isomorphism())
        }
    };
    let out = QuotientReport {
        command: "quotient",
        system: path.to_string(),
        quotient_size: quotient,
        min_size: min,
        canonical_iso: iso,
    };
    emit(json, &out, out.render_human());
    Ok(ExitCode::SUCCESS)
}

struct SuiteArgs {
    kind: String,
    seed: u64,
    count: u64,
    max_elements: usize,
    max_rules: usize,
    max_basis: usize,
    bridge_trials: usize,
    depth_cap: Option<usize>,
    json: bool,
}

fn cmd_suite(args: SuiteArgs) -> Result<ExitCode, LoadError> {
    let run_set = matches!(args.kind.as_str(), "set" | "all");
    let run_linear = matches!(args.kind.as_str(), "linear" | "all");
    if !run_set && !run_linear {
        return Err(LoadError::Input(format!(
            "unknown suite kind '{}' (expected set, linear, or all)",
            args.kind
        )));
    }
    let mut set_lines = Vec::new();
    let mut linear_lines = Vec::new();
    let mut all_ok = true;

    if run_set {
        for i in 0..args.count {
            let mut rng = instance_rng(args.seed, i);
            let inst = random_terminating_set_system(&mut rng, args.max_elements, args.max_rules);
            let sc = sc_suite(&inst.base, &inst.rel)?;
            let ls = strategy_from_set_relation(&inst.base, &inst.rel)?;
            let qinv = quotient_invariance(ls.graph())?;
            let (lc_found, newman_certified) =
                match search_lc_structure_set_capped(&ls, args.depth_cap) {
                    Ok(lc) => {
                        let (_, cert) = newman(&lc)?;
                        (true, Some(cert.certificate.holds()))
                    }
                    Err(CoreError::Exhausted(_)) => (false, None),
                    Err(e) => return Err(LoadError::Core(e)),
                };
            // Certified confluence must match the brute-force oracle.
            let matches_oracle = lc_found == sc.confluent();
            let line = SetInstanceLine {
                index: i,
                elements: inst.base.size(),
                rules: inst.rel.len(),
                sc1: sc.sc1,
                sc2: sc.sc2,
                sc3: sc.sc3,
                sc4: sc.sc4,
                sc_agree: sc.all_agree(),
                lc_found,
                newman_certified,
                matches_oracle,
                quotient_invariant: qinv,
            };
            all_ok = all_ok
                && line.sc_agree
                && line.matches_oracle
                && line.newman_certified.unwrap_or(true)
                && line.quotient_invariant;
            set_lines.push(line);
        }
    }
    if run_linear {
        for i in 0..args.count {
            let mut rng = instance_rng(args.seed ^ 0x6c69_6e65_6172, i);
            let ar = random_decreasing_relation(&mut rng, args.max_basis)?;
            let ac = ac_suite(&ar)?;
            let bridge = bridge_lemma_check(&ar, args.bridge_trials, &mut rng)?;
            let (graph, _) = ar.to_internal()?;
            let qinv = quotient_invariance(&graph)?;
            let line = LinearInstanceLine {
                index: i,
                basis: ar.basis().size(),
                rules: ar.rules().len(),
                ac1: ac.ac1,
                ac2: ac.ac2,
                ac3: ac.ac3,
                ac_agree: ac.all_agree(),
                bridge_counterexamples: bridge.counterexamples.len(),
                bridge_trials: bridge.trials,
                quotient_invariant: qinv,
            };
            all_ok = all_ok
                && line.ac_agree
                && line.bridge_counterexamples == 0
                && line.quotient_invariant;
            linear_lines.push(line);
        }
    }

    let agree = |good: usize, total: usize| format!("{good}/{total}");
    let sc_total = set_lines.len();
    let sc_good = set_lines.iter().filter(|l| l.sc_agree).count();
    let match_good = set_lines.iter().filter(|l| l.matches_oracle).count();
    let lc_successes = set_lines.iter().filter(|l| l.lc_found).count() as u64;
    let ac_total = linear_lines.len();
    let ac_good = linear_lines.iter().filter(|l| l.ac_agree).count();
    let bridge_cx: u64 = linear_lines
        .iter()
        .map(|l| l.bridge_counterexamples as u64)
        .sum();
    let bridge_total: u64 = linear_lines.iter().map(|l| l.bridge_trials as u64).sum();
    let q_good = set_lines.iter().filter(|l| l.quotient_invariant).count()
        + linear_lines.iter().filter(|l| l.quotient_invariant).count();
    let q_total = sc_total + ac_total;

    let out = SuiteReport {
        command: "suite",
        kind: args.kind,
        seed: args.seed,
        count: args.count,
        set_instances: set_lines,
        linear_instances: linear_lines,
        sc_agreement: agree(sc_good, sc_total),
        lc_successes,
        oracle_matches: agree(match_good, sc_total),
        ac_agreement: agree(ac_good, ac_total),
        bridge_counterexamples: bridge_cx,
        bridge_trials: bridge_total,
        quotient_invariance: agree(q_good, q_total),
        passed: all_ok,
    };
    emit(args.json, &out, out.render_human());
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        // A failed agreement is a violated theorem, i.e. an engine bug.
        ExitCode::from(4)
    })
}
