//! Named verification suites driven by a [`RunConfig`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::RunConfig;
use crate::identities::{run_suite, Bounds, IdentityError, Suite};
use crate::numerics::{int, rat, Rational};
use crate::racah::ParamTriple;
use crate::report::VerificationReport;
use crate::rewrite::{
    check_identity_suite, parse_identity, RewriteError, CYCLIC_IDENTITY, FOUR_FORM_IDENTITY,
    WEIGHTED_IDENTITY,
};
use crate::samples::default_samples;
use crate::star::{associativity_suite, kappa_associativity_report, StarError};
use crate::verma::{verify_casimir_spectrum, verify_intertwiners, VermaError};

#[derive(Debug, Error)]
pub enum BatchError {
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Verma(#[from] VermaError),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifySuite {
    Main,
    Classical,
    Reverse,
    Convolution,
    Operator,
    Zagier,
    Oracle,
    Cmz,
    Star,
    Rewrite,
    Verma,
}

impl VerifySuite {
    pub const ALL: [VerifySuite; 11] = [
        VerifySuite::Main,
        VerifySuite::Classical,
        VerifySuite::Reverse,
        VerifySuite::Convolution,
        VerifySuite::Operator,
        VerifySuite::Zagier,
        VerifySuite::Oracle,
        VerifySuite::Cmz,
        VerifySuite::Star,
        VerifySuite::Rewrite,
        VerifySuite::Verma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerifySuite::Main => "main",
            VerifySuite::Classical => "classical",
            VerifySuite::Reverse => "reverse",
            VerifySuite::Convolution => "convolution",
            VerifySuite::Operator => "operator",
            VerifySuite::Zagier => "zagier",
            VerifySuite::Oracle => "oracle",
            VerifySuite::Cmz => "cmz",
            VerifySuite::Star => "star",
            VerifySuite::Rewrite => "rewrite",
            VerifySuite::Verma => "verma",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_list(src: &str) -> Result<Vec<VerifySuite>, BatchError> {
        if src.trim() == "all" {
            return Ok(VerifySuite::ALL.to_vec());
        }
        src.split(',').map(|s| s.parse()).collect()
    }
}

impl FromStr for VerifySuite {
    type Err = BatchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VerifySuite::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| BatchError::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for VerifySuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `{suite, config, reports}` as written by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutput {
    pub suite: String,
    pub config: RunConfig,
    pub reports: Vec<VerificationReport>,
}

impl VerifyOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }
}

pub fn samples_for(cfg: &RunConfig) -> Vec<ParamTriple> {
    default_samples(cfg.seed, cfg.sample_count)
}

/// Four weights per triple: the triple plus a grid value chosen by position.
pub fn four_weight_samples(triples: &[ParamTriple]) -> Vec<Vec<Rational>> {
    let extra = [rat(1, 2), int(1), rat(7, 3)];
    triples
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut v = t.to_vec();
            v.push(extra[i % 3].clone());
            v
        })
        .collect()
}

fn rewrite_reports(
    samples: &[ParamTriple],
    max_deg: u32,
) -> Result<Vec<VerificationReport>, BatchError> {
    let triples: Vec<Vec<Rational>> = samples.iter().map(ParamTriple::to_vec).collect();
    let quads = four_weight_samples(samples);
    let mut out = Vec::new();
    for (id, src, weights, deg) in [
        ("rewrite_cyclic", CYCLIC_IDENTITY, &triples, max_deg),
        ("rewrite_weighted", WEIGHTED_IDENTITY, &triples, max_deg),
        (
            "rewrite_four_forms",
            FOUR_FORM_IDENTITY,
            &quads,
            max_deg.min(2),
        ),
    ] {
        let terms = parse_identity(src)?;
        let (basis, eval) = check_identity_suite(id, &terms, weights, deg)?;
        out.push(basis);
        out.push(eval);
    }
    Ok(out)
}

fn verma_reports(samples: &[ParamTriple]) -> Result<Vec<VerificationReport>, BatchError> {
    let inter = samples
        .par_iter()
        .map(|s| verify_intertwiners(&s.lam1, &s.lam2, 3, 4))
        .collect::<Result<Vec<_>, _>>()?;
    let casimir = samples
        .par_iter()
        .map(|s| verify_casimir_spectrum(&s.lam1, &s.lam2, 4, 3))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(vec![
        VerificationReport::merge_all("intertwiner", false, inter),
        VerificationReport::merge_all("casimir_spectrum", false, casimir),
    ])
}

/// κ-deformed associativity over a few samples, report only.
fn cmz_star_report(samples: &[ParamTriple]) -> VerificationReport {
    let parts: Vec<VerificationReport> = samples
        .par_iter()
        .take(6)
        .flat_map_iter(|s| {
            crate::identities::cmz_kappas()
                .into_iter()
                .map(move |k| kappa_associativity_report(s, &k, 3, 2))
        })
        .collect();
    let mut r = VerificationReport::merge_all("cmz_star_associativity", true, parts);
    r.note(format!(
        "{} of {} instances have a nonzero defect",
        r.failure_count, r.instances_checked
    ));
    let lines: Vec<String> = r
        .breakdown
        .iter()
        .map(|(g, t)| format!("{g}: {} of {} nonzero", t.failed, t.checked))
        .collect();
    for l in lines {
        r.note(l);
    }
    r
}

pub fn run_verify_suite(
    suite: VerifySuite,
    cfg: &RunConfig,
) -> Result<Vec<VerificationReport>, BatchError> {
    let samples = samples_for(cfg);
    let bounds = Bounds {
        max_n: cfg.max_n,
        max_degree: cfg.max_degree,
    };
    let lift = |s: Suite| run_suite(s, &samples, bounds).map_err(BatchError::from);
    match suite {
        VerifySuite::Main => lift(Suite::Main),
        VerifySuite::Classical => lift(Suite::Classical),
        VerifySuite::Reverse => lift(Suite::Reverse),
        VerifySuite::Convolution => lift(Suite::Convolution),
        VerifySuite::Operator => lift(Suite::Operator),
        VerifySuite::Zagier => lift(Suite::Zagier),
        VerifySuite::Oracle => lift(Suite::Oracle),
        VerifySuite::Cmz => {
            let mut r = lift(Suite::Cmz)?;
            r.push(cmz_star_report(&samples));
            Ok(r)
        }
        VerifySuite::Star => Ok(vec![associativity_suite(
            &samples,
            cfg.hbar_order,
            cfg.max_degree,
        )?]),
        VerifySuite::Rewrite => rewrite_reports(&samples, cfg.max_degree),
        VerifySuite::Verma => verma_reports(&samples),
    }
}

pub fn run_verify(
    suites: &[VerifySuite],
    label: &str,
    cfg: &RunConfig,
) -> Result<VerifyOutput, BatchError> {
    let mut reports = Vec::new();
    for s in suites {
        reports.extend(run_verify_suite(*s, cfg)?);
    }
    Ok(VerifyOutput {
        suite: label.to_string(),
        config: cfg.clone(),
        reports,
    })
}
