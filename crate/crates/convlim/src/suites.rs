//! Named verification suites behind a common trait.
//!
//! Every theorem-level check is packaged as a [`Suite`]: a named strategy
//! taking a parsed system (plus optional tower) and returning a [`Report`].
//! Suites are registered in a static table and selected by name at runtime,
//! so the CLI and the acceptance tests share one dispatch path.

use std::sync::Arc;

use crate::convsys::{check_flow, check_system, ConvolutionSystem, SystemMorphism};
use crate::cpps::{
    build_cpps, build_flow, build_restrictions, check_tau, lift_isomorphism, verify_cpps,
    verify_kimpa, verify_ll1, verify_projint,
};
use crate::error::Error;
use crate::l2::{verify_l2, verify_theorem_ps};
use crate::projective::{
    tower_consistency, verify_projective, verify_window_commutation, ConnectingFamily,
    CylinderTower,
};
use crate::report::Report;

/// Input shared by all suites.
pub struct SuiteInput {
    pub system: Arc<ConvolutionSystem>,
    pub tower: Option<CylinderTower>,
}

impl SuiteInput {
    pub fn new(system: Arc<ConvolutionSystem>) -> Self {
        SuiteInput { system, tower: None }
    }
}

/// One named verification strategy.
pub trait Suite: Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, input: &SuiteInput) -> Result<Report, Error>;
}

struct Axioms;
impl Suite for Axioms {
    fn name(&self) -> &'static str {
        "axioms"
    }
    fn description(&self) -> &'static str {
        "measure preservation and associativity of the multiplications"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        Ok(check_system(&input.system))
    }
}

struct Partitions;
impl Suite for Partitions {
    fn name(&self) -> &'static str {
        "partitions"
    }
    fn description(&self) -> &'static str {
        "the interval connecting family is a projective system over every window"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        let started = std::time::Instant::now();
        let mut report = Report::new("partitions");
        let n = input.system.times().len();
        for s in 0..n {
            for t in s + 1..n {
                let fam = ConnectingFamily::interval(&input.system, s, t)?;
                let mut sub = verify_projective(&fam);
                for c in &mut sub.checks {
                    c.name = format!("({s},{t})::{}", c.name);
                }
                report.merge(sub);
            }
        }
        report.sort();
        report.elapsed_ms = started.elapsed().as_millis();
        Ok(report)
    }
}

struct Global;
impl Suite for Global {
    fn name(&self) -> &'static str {
        "global"
    }
    fn description(&self) -> &'static str {
        "the global connecting family is projective, with the window commutation identity"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        let started = std::time::Instant::now();
        let fam = ConnectingFamily::global(&input.system)?;
        let mut report = verify_projective(&fam);
        report.suite = "global".into();
        let mut commutation = verify_window_commutation(&input.system);
        for c in &mut commutation.checks {
            c.name = format!("commutation::{}", c.name);
        }
        report.merge(commutation);
        report.sort();
        report.elapsed_ms = started.elapsed().as_millis();
        Ok(report)
    }
}

struct Cpps;
impl Suite for Cpps {
    fn name(&self) -> &'static str {
        "cpps"
    }
    fn description(&self) -> &'static str {
        "the flat system is a CPPS: isomorphisms, factorization, associativity"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        Ok(verify_cpps(&build_cpps(&input.system)?))
    }
}

struct Tau;
impl Suite for Tau {
    fn name(&self) -> &'static str {
        "tau"
    }
    fn description(&self) -> &'static str {
        "the canonical family is an epimorphism of systems onto the base"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        Ok(check_tau(&build_cpps(&input.system)?))
    }
}

struct Lift;
impl Suite for Lift {
    fn name(&self) -> &'static str {
        "lift"
    }
    fn description(&self) -> &'static str {
        "the identity isomorphism lifts to the flat systems and intertwines the epimorphisms"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        let identity = SystemMorphism::identity(&input.system);
        let (_, report) = lift_isomorphism(&identity)?;
        Ok(report)
    }
}

struct Flow;
impl Suite for Flow {
    fn name(&self) -> &'static str {
        "flow"
    }
    fn description(&self) -> &'static str {
        "the grid flow satisfies generation, independence, and composition"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        Ok(check_flow(&build_flow(&input.system)?))
    }
}

struct Ll1;
impl Suite for Ll1 {
    fn name(&self) -> &'static str {
        "ll1"
    }
    fn description(&self) -> &'static str {
        "restriction maps factor the interval epimorphisms through the global ones"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        let c = build_cpps(&input.system)?;
        let r = build_restrictions(&c)?;
        Ok(verify_ll1(&c, &r))
    }
}

struct Projint;
impl Suite for Projint {
    fn name(&self) -> &'static str {
        "projint"
    }
    fn description(&self) -> &'static str {
        "restriction maps form a projective system over nested windows"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        let c = build_cpps(&input.system)?;
        let r = build_restrictions(&c)?;
        Ok(verify_projint(&c, &r))
    }
}

struct Kimpa;
impl Suite for Kimpa {
    fn name(&self) -> &'static str {
        "kimpa"
    }
    fn description(&self) -> &'static str {
        "the window-indexed and global limits coincide canonically"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        verify_kimpa(&input.system)
    }
}

struct L2;
impl Suite for L2 {
    fn name(&self) -> &'static str {
        "l2"
    }
    fn description(&self) -> &'static str {
        "Koopman isometries co-associate; unitarity matches isomorphism"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        verify_l2(&input.system)
    }
}

struct Ps;
impl Suite for Ps {
    fn name(&self) -> &'static str {
        "ps"
    }
    fn description(&self) -> &'static str {
        "the grid product system is isomorphic to L2 of the flat system"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        verify_theorem_ps(&input.system)
    }
}

struct Tower;
impl Suite for Tower {
    fn name(&self) -> &'static str {
        "tower"
    }
    fn description(&self) -> &'static str {
        "cylinder event masses are consistent within and across refinement levels"
    }
    fn run(&self, input: &SuiteInput) -> Result<Report, Error> {
        let tower = input
            .tower
            .as_ref()
            .ok_or_else(|| Error::System("the description has no tower block".into()))?;
        tower_consistency(tower)
    }
}

static REGISTRY: &[&dyn Suite] = &[
    &Axioms,
    &Partitions,
    &Global,
    &Cpps,
    &Tau,
    &Lift,
    &Flow,
    &Ll1,
    &Projint,
    &Kimpa,
    &L2,
    &Ps,
    &Tower,
];

/// All registered suites, in registration order.
pub fn registry() -> &'static [&'static dyn Suite] {
    REGISTRY
}

/// Looks a suite up by name.
pub fn suite(name: &str) -> Result<&'static dyn Suite, Error> {
    REGISTRY
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// Runs every suite applicable to the input: all of them when a tower is
/// present, all but `tower` otherwise.
pub fn run_all(input: &SuiteInput) -> Result<Vec<Report>, Error> {
    let mut reports = Vec::new();
    for s in REGISTRY {
        if s.name() == "tower" && input.tower.is_none() {
            continue;
        }
        reports.push(s.run(input)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_a, fixture_b};

    #[test]
    fn registry_has_the_documented_names() {
        let names: Vec<&str> = registry().iter().map(|s| s.name()).collect();
        assert_eq!(
            names,
            vec![
                "axioms",
                "partitions",
                "global",
                "cpps",
                "tau",
                "lift",
                "flow",
                "ll1",
                "projint",
                "kimpa",
                "l2",
                "ps",
                "tower"
            ]
        );
    }

    #[test]
    fn unknown_suite_names_are_rejected() {
        assert!(matches!(suite("bogus"), Err(Error::UnknownSuite(_))));
        assert!(suite("axioms").is_ok());
    }

    #[test]
    fn all_suites_pass_on_fixture_b() {
        let input = SuiteInput::new(fixture_b());
        for report in run_all(&input).unwrap() {
            assert!(report.all_pass(), "{}", report.human_summary());
        }
    }

    #[test]
    fn all_suites_pass_on_fixture_a() {
        let input = SuiteInput::new(fixture_a());
        for report in run_all(&input).unwrap() {
            assert!(report.all_pass(), "{}", report.human_summary());
        }
    }

    #[test]
    fn tower_suite_requires_a_tower() {
        let input = SuiteInput::new(fixture_b());
        assert!(suite("tower").unwrap().run(&input).is_err());
    }
}
