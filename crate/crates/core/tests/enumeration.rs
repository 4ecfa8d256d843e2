use superdouble::catalog::Catalog;
use superdouble::classify::{enumerate_duals, recover_triples, DualAnsatz, EnumerateOptions, OrbitSampling};
use superdouble::scalar::Bindings;

#[test]
fn table2_is_recovered_from_its_seeds() {
    let cat = Catalog::builtin().unwrap();
    let seeds: Vec<_> = ["A11", "N11", "S11"]
        .iter()
        .map(|n| (n.to_string(), cat.algebra(n, &Bindings::new()).unwrap(), cat.automorphisms(n).unwrap().to_vec()))
        .collect();
    let refs: Vec<_> = cat
        .triples_in("table2.sd")
        .map(|e| (e.name.clone(), e.value.substitute(&e.value.ctx.branches()[0]).unwrap()))
        .collect();
    let r = recover_triples(&seeds, &refs, &EnumerateOptions::default(), &OrbitSampling::default(), 20_000).unwrap();
    assert!(r.passed(), "{:?}", r.references);
    assert!(r.duals.iter().all(|d| !d.matches.is_empty()));
}

/// Duals of the (1,2) seeds only bracket two odd elements into the even one.
#[test]
fn dim_1_2_duals_have_odd_odd_shape() {
    let cat = Catalog::builtin().unwrap();
    let ansatz = DualAnsatz::new(1, 2);
    for name in ["C2_m1", "C2_1", "C3", "C4", "C5_0"] {
        let seed = cat.algebra(name, &Bindings::new()).unwrap();
        let e = enumerate_duals(&seed, &ansatz, &EnumerateOptions::default()).unwrap();
        assert!(!e.solutions.is_empty(), "{name}");
        for s in &e.solutions {
            for (i, j, k) in (0..3).flat_map(|i| (0..3).flat_map(move |j| (0..3).map(move |k| (i, j, k)))) {
                if !(i > 0 && j > 0 && k == 0) {
                    assert!(s.tensor.get(i, j, k).is_zero(), "{name}: {s}");
                }
            }
        }
    }
}
