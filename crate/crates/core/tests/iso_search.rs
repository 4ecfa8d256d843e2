use superdouble::catalog::Catalog;
use superdouble::iso::{search_iso, verify_certificate, ExhaustReason, SearchOptions, SearchOutcome, Strategy};
use superdouble::scalar::{Bindings, Rat};

fn b(pairs: &[(&str, i64)]) -> Bindings {
    let mut out = Bindings::new();
    for (k, v) in pairs {
        out.insert(k, Rat::int(*v));
    }
    out
}

#[test]
fn s11_shear_is_rediscovered() {
    let c = Catalog::builtin().unwrap();
    let src = c.triple("MT22_3", &Bindings::new()).unwrap();
    let tgt = c.triple("MT22_4", &b(&[("eps", 1)])).unwrap();
    let out = search_iso(&src, &tgt, &SearchOptions::default()).unwrap();
    match out {
        SearchOutcome::Found { strategy, .. } => assert_eq!(strategy, Strategy::Shear),
        other => panic!("{other:?}"),
    }
    let opts = SearchOptions { shortcuts: false, ..Default::default() };
    let out = search_iso(&src, &tgt, &opts).unwrap();
    let cert = out.certificate().expect("grid search finds the shear");
    assert!(verify_certificate(cert).unwrap().passed());
}

#[test]
fn c1_0_signs_are_isomorphic() {
    let c = Catalog::builtin().unwrap();
    let src = c.triple("MT42_7", &b(&[("p", 0), ("eps", 1)])).unwrap();
    let tgt = c.triple("MT42_7", &b(&[("p", 0), ("eps", -1)])).unwrap();
    let out = search_iso(&src, &tgt, &SearchOptions::default()).unwrap();
    match &out {
        SearchOutcome::Found { nodes, cert, .. } => {
            assert!(*nodes <= SearchOptions::default().budget);
            assert!(verify_certificate(cert).unwrap().passed());
        }
        o => panic!("{o:?}"),
    }
}

#[test]
fn fingerprint_separates_iii_and_iv0() {
    let c = Catalog::builtin().unwrap();
    let src = c.triple("MT42_3", &Bindings::new()).unwrap();
    let tgt = c.triple("MT42_6", &b(&[("p", 0)])).unwrap();
    let out = search_iso(&src, &tgt, &SearchOptions::default()).unwrap();
    assert!(matches!(out, SearchOutcome::Exhausted { reason: ExhaustReason::Fingerprint(..), .. }));
}
