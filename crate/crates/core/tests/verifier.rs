//! Round trips through JSON and the independent checker, and rejection of
//! edited certificates.

use quartdiff_core::certificate::{Certificate, Config, Proof, Step, Verdict};
use quartdiff_core::elliptic::{Place, TorsorStatus};
use quartdiff_core::pipeline::solve;
use quartdiff_core::verify::{verify_certificate, VerifyError};

fn certificate(n: u64) -> Certificate {
    let cert = solve(n, &Config::default()).certificate().clone();
    Certificate::from_json(&cert.to_json()).expect("certificate parses")
}

fn triples_mut(cert: &mut Certificate) -> &mut Vec<quartdiff_core::certificate::TripleProof> {
    match &mut cert.proof {
        Proof::Triples { triples } => triples,
        _ => panic!("expected a triple proof"),
    }
}

fn location(err: VerifyError) -> String {
    let VerifyError::Invalid { location, .. } = err;
    location
}

#[test]
fn n31_round_trip_is_accepted() {
    let cert = certificate(31);
    let report = verify_certificate(&cert).expect("accepted");
    assert_eq!(report.verdict, Verdict::NotRepresentable);
    assert_eq!(report.steps, 5);
    assert_eq!(report.conditional, vec!["equation (31, 1, 2): mw-sieve".to_string()]);
}

#[test]
fn n31_sieve_prime_edit_is_rejected() {
    let mut cert = certificate(31);
    for t in triples_mut(&mut cert) {
        if let Some(Step::MwSieve(s)) = &mut t.step {
            assert_eq!(s.p, 5);
            s.p = 7;
        }
    }
    let err = verify_certificate(&cert).unwrap_err();
    assert_eq!(location(err), "equation (31, 1, 2): mw-sieve");
}

#[test]
fn witness_for_9999_is_accepted() {
    let cert = certificate(9999);
    assert!(matches!(cert.proof, Proof::Witness { .. }));
    assert_eq!(verify_certificate(&cert).unwrap().verdict, Verdict::Representable);
}

#[test]
fn edited_witness_is_rejected() {
    let mut cert = certificate(9999);
    if let Proof::Witness { witness } = &mut cert.proof {
        witness.y += 1;
    }
    assert_eq!(location(verify_certificate(&cert).unwrap_err()), "witness");
}

#[test]
fn dropped_triple_is_rejected() {
    let mut cert = certificate(31);
    triples_mut(&mut cert).pop();
    assert_eq!(location(verify_certificate(&cert).unwrap_err()), "triples");
}

#[test]
fn dropped_gaussian_case_is_rejected() {
    let mut cert = certificate(219);
    verify_certificate(&cert).expect("accepted");
    let mut edited = false;
    for t in triples_mut(&mut cert) {
        if let Some(Step::GaussianCaseSplit(g)) = &mut t.step {
            g.cases.pop();
            edited = true;
            break;
        }
    }
    assert!(edited, "219 uses the Gaussian case split");
    let loc = location(verify_certificate(&cert).unwrap_err());
    assert!(loc.ends_with("gaussian-case-split"), "{loc}");
}

#[test]
fn weakened_local_obstruction_is_rejected() {
    let mut cert = certificate(31);
    for t in triples_mut(&mut cert) {
        if let Some(Step::LocalObstruction(o)) = &mut t.step {
            o.k = 1;
        }
    }
    let loc = location(verify_certificate(&cert).unwrap_err());
    assert!(loc.ends_with("local-obstruction"), "{loc}");
}

#[test]
fn false_torsor_claim_is_rejected() {
    // n = 1 is settled by an easy curve; declare a soluble torsor insoluble.
    let mut cert = certificate(1);
    let Proof::EasyCurveRank0 { step } = &mut cert.proof else {
        panic!("expected an easy curve");
    };
    let torsor = step
        .descent
        .curve
        .torsors
        .iter_mut()
        .find(|t| t.d == 1)
        .expect("d = 1 is listed");
    torsor.status = TorsorStatus::Insoluble { place: Place::Prime(2) };
    assert_eq!(location(verify_certificate(&cert).unwrap_err()), "easy-curve-rank0");
}

#[test]
fn wrong_verdict_is_rejected() {
    let mut cert = certificate(31);
    cert.verdict = Verdict::Undecided;
    assert_eq!(location(verify_certificate(&cert).unwrap_err()), "verdict");
}

#[test]
fn undecided_certificate_lists_the_open_equation() {
    let cert = certificate(799);
    let report = verify_certificate(&cert).expect("steps present are valid");
    assert_eq!(report.verdict, Verdict::Undecided);
    assert_eq!(report.uncovered, vec![(47, 34, 1)]);
}
