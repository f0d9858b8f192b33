//! Acceptance gate: runs every verification suite at full scale and
//! reports one pass/fail line per criterion. Run with `--nocapture` to
//! see the lines on success.

use std::collections::HashMap;
use std::time::Instant;

use hallgroups::verify::{run_suite, Scale};

const SEED: u64 = 2026;

struct Criterion {
    number: usize,
    title: &'static str,
    cases: &'static [&'static str],
    budget_secs: u64,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "commutator [bc, a] has exactly d_0 = -1, d_1 = 1",
        cases: &["lemma-3.2/d-coordinates"],
        budget_secs: 1,
    },
    Criterion {
        number: 2,
        title: "scaling identity f^k d f^-k = d/n^k for k <= 30",
        cases: &["lemma-3.2/scaling-identity"],
        budget_secs: 1,
    },
    Criterion {
        number: 3,
        title: "embedding is a homomorphism with trivial kernel; images are members",
        cases: &["lemma-3.2/embed-homomorphism"],
        budget_secs: 10,
    },
    Criterion {
        number: 4,
        title: "membership criterion matches the depth-8 word-ball oracle",
        cases: &["lemma-3.2/membership-oracle"],
        budget_secs: 60,
    },
    Criterion {
        number: 5,
        title: "Smith form contract and gcd-of-minors oracle",
        cases: &["snf/umv-contract", "snf/minors-oracle"],
        budget_secs: 30,
    },
    Criterion {
        number: 6,
        title: "wreath evaluation homomorphism; disjoint conjugates span (Z/m)^t",
        cases: &[
            "wreath/homomorphism",
            "wreath/derived-words-in-base",
            "wreath/disjoint-direct-power",
        ],
        budget_secs: 10,
    },
    Criterion {
        number: 7,
        title: "digit recurrence at N = 200; rigid membership matches bounded oracle",
        cases: &["rigid/recurrence", "rigid/membership-oracle", "rigid/closure"],
        budget_secs: 30,
    },
    Criterion {
        number: 8,
        title: "three-prime membership matches bounded oracle; closed under addition",
        cases: &["pqr/oracle-members", "pqr/oracle-rejects", "pqr/closure"],
        budget_secs: 30,
    },
    Criterion {
        number: 9,
        title: "automorphism order divides m*s*l; witness words hit their targets",
        cases: &["fgab-embed/order-divides-bound", "fgab-embed/witness-words"],
        budget_secs: 10,
    },
    Criterion {
        number: 10,
        title: "unique k-th roots; band superadditivity; derived length witnesses",
        cases: &[
            "unitriangular/root-power",
            "unitriangular/band-superadditive",
            "unitriangular/derived-length",
        ],
        budget_secs: 30,
    },
];

#[test]
fn acceptance() {
    let mut results: HashMap<String, (bool, String)> = HashMap::new();
    let mut suite_elapsed: HashMap<String, u64> = HashMap::new();
    for suite in hallgroups::verify::SUITE_NAMES {
        let start = Instant::now();
        let report = run_suite(suite, SEED, Scale::Full).expect("known suite");
        suite_elapsed.insert(suite.to_string(), start.elapsed().as_secs());
        for c in report.cases {
            results.insert(format!("{suite}/{}", c.id), (c.pass, c.detail));
        }
    }

    let mut all_pass = true;
    for criterion in CRITERIA {
        let mut pass = true;
        let mut failures = Vec::new();
        for case in criterion.cases {
            match results.get(*case) {
                Some((true, _)) => {}
                Some((false, detail)) => {
                    pass = false;
                    failures.push(format!("{case}: {detail}"));
                }
                None => {
                    pass = false;
                    failures.push(format!("{case}: missing from report"));
                }
            }
        }
        // runtime is measured per suite; the budget for a suite is the
        // sum over the criteria it carries
        let suite = criterion.cases[0].split('/').next().unwrap();
        let suite_budget: u64 = CRITERIA
            .iter()
            .filter(|c| c.cases[0].split('/').next().unwrap() == suite)
            .map(|c| c.budget_secs)
            .sum();
        let elapsed = suite_elapsed[suite];
        if elapsed > suite_budget {
            pass = false;
            failures.push(format!("suite {suite} took {elapsed}s > {suite_budget}s"));
        }
        println!(
            "criterion {:2}: {} - {}{}",
            criterion.number,
            if pass { "PASS" } else { "FAIL" },
            criterion.title,
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) },
        );
        all_pass &= pass;
    }
    assert!(all_pass, "one or more acceptance criteria failed");
}
