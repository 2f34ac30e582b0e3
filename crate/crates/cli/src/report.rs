//! Report structures shared by the human-readable and JSON outputs. JSON
//! key order follows struct field order, so identical inputs render
//! byte-identical reports.

use serde::Serialize;

#[derive(Serialize)]
pub struct AxiomLine {
    pub axiom: String,
    pub ok: bool,
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub system: String,
    pub axioms: Vec<AxiomLine>,
    pub passed: bool,
}

impl CheckReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("check {}\n", self.system));
        out.push_str(&format!("{:<24} {:<6} witness\n", "axiom", "status"));
        for line in &self.axioms {
            out.push_str(&format!(
                "{:<24} {:<6} {}\n",
                line.axiom,
                if line.ok { "pass" } else { "FAIL" },
                line.witness.as_deref().unwrap_or("-")
            ));
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.passed { "pass" } else { "FAIL" }
        ));
        out
    }
}

#[derive(Serialize)]
pub struct NormalizeReport {
    pub command: &'static str,
    pub system: String,
    pub input: String,
    pub strategy_normal_form: String,
    pub oracle_normal_form: String,
    pub agreement: bool,
}

impl NormalizeReport {
    pub fn render_human(&self) -> String {
        format!(
            "normalize {}\ninput:                {}\nstrategy normal form: {}\noracle normal form:   {}\nagreement: {}\n",
            self.system,
            self.input,
            self.strategy_normal_form,
            self.oracle_normal_form,
            if self.agreement { "yes" } else { "NO" }
        )
    }
}

#[derive(Serialize)]
pub struct CertificateReport {
    pub command: &'static str,
    pub system: String,
    pub staged_edges: usize,
    pub audited_edges: usize,
    pub retraction: bool,
    pub section_square: bool,
    pub source_section: bool,
    pub coequalizes: bool,
    pub quotient_size: usize,
    pub min_size: usize,
    pub canonical_iso: bool,
    pub certified: bool,
}

impl CertificateReport {
    pub fn render_human(&self) -> String {
        format!(
            "newman {}\nstaged edges:    {}\naudited edges:   {}\nsplit equations: retraction={} section={} source={} coequalizes={}\nquotient size:   {}\nnormal forms:    {}\ncanonical map is isomorphism: {}\ncertified: {}\n",
            self.system,
            self.staged_edges,
            self.audited_edges,
            pf(self.retraction),
            pf(self.section_square),
            pf(self.source_section),
            pf(self.coequalizes),
            self.quotient_size,
            self.min_size,
            if self.canonical_iso { "yes" } else { "NO" },
            if self.certified { "yes" } else { "NO" }
        )
    }
}

#[derive(Serialize)]
pub struct QuotientReport {
    pub command: &'static str,
    pub system: String,
    pub quotient_size: usize,
    pub min_size: usize,
    pub canonical_iso: bool,
}

impl QuotientReport {
    pub fn render_human(&self) -> String {
        format!(
            "quotient {}\nquotient size: {}\nnormal forms:  {}\ncanonical map is isomorphism: {}\n",
            self.system,
            self.quotient_size,
            self.min_size,
            if self.canonical_iso { "yes" } else { "no" }
        )
    }
}

fn pf(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
pub struct SetInstanceLine {
    pub index: u64,
    pub elements: usize,
    pub rules: usize,
    pub sc1: bool,
    pub sc2: bool,
    pub sc3: bool,
    pub sc4: bool,
    pub sc_agree: bool,
    pub lc_found: bool,
    pub newman_certified: Option<bool>,
    pub matches_oracle: bool,
    pub quotient_invariant: bool,
}

#[derive(Serialize)]
pub struct LinearInstanceLine {
    pub index: u64,
    pub basis: usize,
    pub rules: usize,
    pub ac1: bool,
    pub ac2: bool,
    pub ac3: bool,
    pub ac_agree: bool,
    pub bridge_counterexamples: usize,
    pub bridge_trials: usize,
    pub quotient_invariant: bool,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub command: &'static str,
    pub kind: String,
    pub seed: u64,
    pub count: u64,
    pub set_instances: Vec<SetInstanceLine>,
    pub linear_instances: Vec<LinearInstanceLine>,
    pub sc_agreement: String,
    pub lc_successes: u64,
    pub oracle_matches: String,
    pub ac_agreement: String,
    pub bridge_counterexamples: u64,
    pub bridge_trials: u64,
    pub quotient_invariance: String,
    pub passed: bool,
}

impl SuiteReport {
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite kind={} seed={} count={}\n",
            self.kind, self.seed, self.count
        ));
        for l in &self.set_instances {
            out.push_str(&format!(
                "set {:>4}: n={:<2} rules={:<2} sc={}{}{}{} {} lc={} newman={} oracle-match={} qinv={}\n",
                l.index,
                l.elements,
                l.rules,
                b01(l.sc1),
                b01(l.sc2),
                b01(l.sc3),
                b01(l.sc4),
                if l.sc_agree { "agree" } else { "DISAGREE" },
                if l.lc_found { "found" } else { "none" },
                match l.newman_certified {
                    Some(true) => "ok",
                    Some(false) => "FAIL",
                    None => "-",
                },
                if l.matches_oracle { "yes" } else { "NO" },
                if l.quotient_invariant { "ok" } else { "FAIL" },
            ));
        }
        for l in &self.linear_instances {
            out.push_str(&format!(
                "lin {:>4}: n={:<2} rules={:<2} ac={}{}{} {} bridge={}/{} qinv={}\n",
                l.index,
                l.basis,
                l.rules,
                b01(l.ac1),
                b01(l.ac2),
                b01(l.ac3),
                if l.ac_agree { "agree" } else { "DISAGREE" },
                l.bridge_counterexamples,
                l.bridge_trials,
                if l.quotient_invariant { "ok" } else { "FAIL" },
            ));
        }
        if !self.set_instances.is_empty() {
            out.push_str(&format!("SC agreement {}\n", self.sc_agreement));
            out.push_str(&format!("lc-search successes {}\n", self.lc_successes));
            out.push_str(&format!("newman/oracle matches {}\n", self.oracle_matches));
        }
        if !self.linear_instances.is_empty() {
            out.push_str(&format!("AC agreement {}\n", self.ac_agreement));
            out.push_str(&format!(
                "bridge {} counterexamples in {} trials\n",
                self.bridge_counterexamples, self.bridge_trials
            ));
        }
        out.push_str(&format!("quotient invariance {}\n", self.quotient_invariance));
        out.push_str(&format!(
            "result: {}\n",
            if self.passed { "pass" } else { "FAIL" }
        ));
        out
    }
}

fn b01(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}
