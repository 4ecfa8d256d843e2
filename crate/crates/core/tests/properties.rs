use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use superdouble::algebra::{commutant_series, SuperAlgebra};
use superdouble::catalog::Catalog;
use superdouble::classify::{dual_action, enumerate_duals, reduce_orbits, DualAnsatz, EnumerateOptions, OrbitSampling};
use superdouble::iso::{check_instance, from_automorphism, t_duality, verify_certificate, IsoCertificate};
use superdouble::scalar::{random_rat, Bindings, ParamContext, Rat, RatFunc, Scalar, Var};
use superdouble::triple::{build_double, check_compatibility, ManinTriple};

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::builtin().unwrap())
}

fn rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Rat::frac(n, d))
}

/// `c0 + c1 x + c2 y + c3 x y`, plus `c4 sqrt(2)` when `radical`.
fn scalar(radical: bool) -> impl Strategy<Value = Scalar> {
    proptest::collection::vec(rat(), 5).prop_map(move |c| {
        let x = Scalar::var(Var::new("x"));
        let y = Scalar::var(Var::new("y"));
        let mut s =
            Scalar::from_rat(c[0].clone()).add(&x.scale(&c[1])).add(&y.scale(&c[2])).add(&x.mul(&y).scale(&c[3]));
        if radical {
            let r = Scalar::sqrt(RatFunc::from_rat(Rat::int(2)), None).unwrap();
            s = s.add(&r.scale(&c[4]));
        }
        s
    })
}

fn bindings(ctx: &ParamContext, rng: &mut ChaCha8Rng) -> Option<Bindings> {
    let branches = ctx.branches();
    if ctx.params.iter().all(|p| p.domain != superdouble::scalar::Domain::Real) {
        return branches.get(rng.gen_range(0..branches.len().max(1))).cloned();
    }
    ctx.sample(rng, 200)
}

fn instance(c: &IsoCertificate, rng: &mut ChaCha8Rng) -> Option<IsoCertificate> {
    let b = bindings(&c.ctx, rng)?;
    let ci = c.substitute(&b).ok()?;
    check_instance(&ci.matrix, &ci.source, &ci.target, Bindings::new()).passed().then_some(ci)
}

fn perturb(t: &ManinTriple, rng: &mut ChaCha8Rng) -> ManinTriple {
    let mut t = t.clone();
    let g = t.left.grading.clone();
    let d = g.dim();
    loop {
        let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
        if !g.admissible(i, j, k) || (i == j && !g.is_odd(i)) {
            continue;
        }
        let half: &mut SuperAlgebra = if rng.gen_bool(0.5) { &mut t.left } else { &mut t.right };
        let v = half.tensor.get(i, j, k).add(&Scalar::from_rat(random_rat(rng)));
        let partner = if g.sign(i, j) == 1 { v.neg() } else { v.clone() };
        half.tensor.set(i, j, k, v);
        half.tensor.set(j, i, k, partner);
        return t;
    }
}

fn concrete_triple(rng: &mut ChaCha8Rng) -> ManinTriple {
    let ts = catalog().triples();
    loop {
        let e = &ts[rng.gen_range(0..ts.len())];
        if let Some(b) = bindings(&e.value.ctx, rng) {
            if let Ok(t) = e.value.substitute(&b) {
                return t;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(true), b in scalar(true), c in scalar(false)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !c.is_zero() {
            prop_assert!(c.mul(&c.inv().unwrap()).is_one());
            prop_assert_eq!(a.mul(&c).div(&c).unwrap(), a.clone());
        }
    }

    #[test]
    fn substitution_is_a_homomorphism(a in scalar(true), b in scalar(true), x in rat(), y in rat()) {
        let vals = Bindings::new().with("x", x).with("y", y).vars();
        let (sa, sb) = (a.substitute(&vals).unwrap(), b.substitute(&vals).unwrap());
        prop_assert_eq!(a.add(&b).substitute(&vals).unwrap(), sa.add(&sb));
        prop_assert_eq!(a.mul(&b).substitute(&vals).unwrap(), sa.mul(&sb));
        prop_assert!(sa.vars().is_empty());
    }

    #[test]
    fn certificates_close_under_inverse_and_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let certs = catalog().certificates();
        let c = &certs[rng.gen_range(0..certs.len())].value;
        if let Some(ci) = instance(c, &mut rng) {
            let inv = ci.inverse().unwrap();
            prop_assert!(verify_certificate(&inv).unwrap().passed());
            prop_assert!(ci.then(&inv).unwrap().matrix.is_identity());
            let td = ci.then(&t_duality(&ci.target)).unwrap();
            prop_assert!(verify_certificate(&td).unwrap().passed());
        }
    }

    #[test]
    fn isomorphic_doubles_share_fingerprints(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let certs = catalog().certificates();
        let c = &certs[rng.gen_range(0..certs.len())].value;
        if let Some(ci) = instance(c, &mut rng) {
            let f = |t: &ManinTriple| commutant_series(&build_double(t).unwrap().algebra, &Bindings::new()).unwrap();
            prop_assert_eq!(f(&ci.source), f(&ci.target));
        }
    }

    #[test]
    fn t_duality_preserves_the_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = concrete_triple(&mut rng);
        let c = t_duality(&t);
        let r = check_instance(&c.matrix, &c.source, &c.target, Bindings::new());
        prop_assert!(r.form_residuals.is_empty());
        prop_assert!(r.passed());
    }

    #[test]
    fn automorphisms_lift_to_form_isometries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = concrete_triple(&mut rng);
        let Ok(fams) = catalog().automorphisms(&t.left.label()) else { return Ok(()) };
        if fams.is_empty() {
            return Ok(());
        }
        let fam = &fams[rng.gen_range(0..fams.len())];
        let Some(b) = fam.ctx.sample(&mut rng, 50) else { return Ok(()) };
        let Ok(a) = fam.instantiate(&b) else { return Ok(()) };
        let Ok(true) = t.left.is_automorphism(&a) else { return Ok(()) };
        let c = from_automorphism(&t, &a).unwrap();
        let r = check_instance(&c.matrix, &c.source, &c.target, Bindings::new());
        prop_assert!(r.form_residuals.is_empty());
        prop_assert!(r.passed());
    }

    #[test]
    fn compatible_triples_have_invariant_forms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = perturb(&concrete_triple(&mut rng), &mut rng);
        if check_compatibility(&t).unwrap().is_empty() {
            prop_assert!(build_double(&t).unwrap().ad_invariance().unwrap().is_empty());
        }
    }

    /// The double's mixed brackets are defined through the form, so the form
    /// is invariant whatever the halves are.
    #[test]
    fn invariance_holds_for_incompatible_halves(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = perturb(&concrete_triple(&mut rng), &mut rng);
        prop_assert!(build_double(&t).unwrap().ad_invariance().unwrap().is_empty());
    }
}

#[test]
fn orbit_edges_map_solutions() {
    let cat = catalog();
    for seed in ["A11", "N11", "S11"] {
        let alg = cat.algebra(seed, &Bindings::new()).unwrap();
        let e = enumerate_duals(&alg, &DualAnsatz::new(1, 1), &EnumerateOptions::default()).unwrap();
        let red = reduce_orbits(&e.solutions, cat.automorphisms(seed).unwrap(), &OrbitSampling::default()).unwrap();
        let members: usize = red.orbits.iter().map(|o| o.members.len()).sum();
        assert_eq!(members, e.solutions.len());
        for edge in &red.edges {
            let moved = dual_action(&e.solutions[edge.from].tensor, &edge.automorphism).unwrap();
            assert_eq!(moved, e.solutions[edge.to].tensor, "{seed}");
        }
    }
}

#[test]
fn automorphism_groups_cover_triple_halves() {
    let cat = catalog();
    let covered = cat.triples().iter().filter(|e| cat.automorphisms(&e.value.left.label()).is_ok()).count();
    assert_eq!(covered, cat.triples().len());
}
