use superdouble::catalog::Catalog;
use superdouble::classify::{check_classes, claims, classify_dims, ClassificationReport, Evidence, ReportOptions};
use superdouble::iso::verify_certificate;

fn classify(dims: (usize, usize)) -> ClassificationReport {
    classify_dims(&Catalog::builtin().unwrap(), dims, &ReportOptions::default()).unwrap()
}

fn catalog_edges(rep: &ClassificationReport) -> usize {
    rep.edges.iter().filter(|e| matches!(e.evidence, Evidence::Catalog(_))).count()
}

/// Every class carries one claimed label and no label spans two classes.
fn labels_agree(rep: &ClassificationReport) {
    let mut seen = std::collections::BTreeMap::new();
    for (ci, c) in rep.classes.iter().enumerate() {
        for &i in c {
            let n = &rep.nodes[i];
            let label = claims::expected_class(&n.id, &n.bindings).unwrap_or_else(|| panic!("{}", n.label()));
            assert_eq!(*seen.entry(label.clone()).or_insert(ci), ci, "{label} split across classes");
        }
    }
    assert_eq!(seen.len(), rep.classes.len());
}

#[test]
fn dim_2_2_has_three_classes() {
    let rep = classify((2, 2));
    assert_eq!(rep.classes.len(), 3);
    assert_eq!(catalog_edges(&rep), 2);
    labels_agree(&rep);
    assert!(check_classes(&rep).passed());
}

#[test]
fn dim_2_4_uses_catalog_certificates() {
    let rep = classify((2, 4));
    assert_eq!(rep.classes.len(), 16);
    assert!(catalog_edges(&rep) > 100, "{} catalog edges", catalog_edges(&rep));
    labels_agree(&rep);
    assert!(check_classes(&rep).passed());
}

#[test]
fn merge_certificates_reverify() {
    let rep = classify((2, 2));
    for e in &rep.edges {
        assert!(verify_certificate(&e.cert).unwrap().passed(), "{}", e.evidence);
    }
}
