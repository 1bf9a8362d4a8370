use cubic_torsion::algebra::fq::{ff_poly_roots, lift_poly};
use cubic_torsion::algebra::numfield::squarefree_decompose;
use cubic_torsion::algebra::rational::rational_roots;
use cubic_torsion::algebra::{is_rational_square, nf_is_isomorphic, FiniteField, Fp, Rational, Ring, UniPoly};
use cubic_torsion::curves::{fiber_cubic, rational_point_search, Corpus, CurvePoint, HyperellipticModel};
use cubic_torsion::jacobian::{group_structure, l_polynomial, random_element, OddModel};
use cubic_torsion::padic::{annihilator_space, disc_point_bound, integrate_between, ResidueDisc};
use cubic_torsion::sieve::{run_sieve, DivisorClass, SieveInstance};
use cubic_torsion::verdicts::{classify_cubic, interpret_t, scan_values, FieldStatus, FiberKind, Signature, TValue};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn corpus() -> &'static Corpus {
    static C: OnceLock<Corpus> = OnceLock::new();
    C.get_or_init(|| Corpus::default_corpus().unwrap())
}

fn curve(id: &str) -> &'static HyperellipticModel {
    &corpus().curve(id).unwrap().model
}

fn poly(c: &[i64]) -> UniPoly<Rational> {
    UniPoly::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect(), Rational::zero())
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = UniPoly<Rational>> {
    (1..=max_deg).prop_flat_map(|n| (prop::collection::vec(-6i64..=6, n), prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]))).prop_map(|(mut c, lc)| {
        c.push(lc);
        poly(&c)
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=30).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resultant_and_discriminant_laws(f in int_poly(4), g in int_poly(4)) {
        let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
        let rfg = f.resultant(&g);
        let rgf = g.resultant(&f);
        let sign = if (m * n) % 2 == 1 { -Rational::one() } else { Rational::one() };
        prop_assert_eq!(rfg.clone(), sign * rgf);
        if m >= 1 && n >= 1 {
            let fg = f.mul(&g);
            let lhs = fg.discriminant().unwrap();
            let rhs = f.discriminant().unwrap() * g.discriminant().unwrap() * rfg.clone() * rfg;
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn squarefree_round_trip(a in int_poly(3), b in int_poly(2), c in int_poly(2)) {
        let d = a.mul(&b).mul(&b).mul(&c);
        if d.degree().unwrap_or(0) <= 10 {
            let (s, k) = squarefree_decompose(&d).unwrap();
            prop_assert_eq!(s.mul(&k).mul(&k), d);
            prop_assert_eq!(s.gcd(&s.derivative()).degree(), Some(0));
        }
    }

    #[test]
    fn rational_squares(q in small_rational(), p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13])) {
        prop_assert!(is_rational_square(&(q.clone() * q.clone())));
        if !Zero::is_zero(&q) {
            prop_assert!(!is_rational_square(&(Rational::from_integer(p.into()) * q.clone() * q)));
        }
    }

    #[test]
    fn finite_field_roots_match_enumeration(c in prop::collection::vec(0u64..50, 2..5), pk in prop::sample::select(vec![(5u64, 1usize), (7, 2), (3, 3), (11, 2), (13, 2)])) {
        let (p, k) = pk;
        let mut c: Vec<Fp> = c.iter().map(|&v| Fp::from_u64(v, p)).collect();
        c.push(Fp::from_u64(1, p));
        let f = UniPoly::new(c, Fp::zero(p));
        let field = FiniteField::get(p, k).unwrap();
        let fq = lift_poly(&f, &field);
        let mut roots: Vec<u128> = ff_poly_roots(&fq).unwrap().iter().map(|r| field.index_of(&r.c)).collect();
        roots.sort();
        roots.dedup();
        let brute: Vec<u128> = (0..field.order()).filter(|&i| fq.eval(&field.element(i)).is_zero()).collect();
        prop_assert_eq!(roots, brute);
    }

    #[test]
    fn fiber_discriminant_matches_curve_square_class(t0 in small_rational(), mi in 0usize..6) {
        let m = &corpus().maps[mi];
        let rec = corpus().curves.iter().find(|c| c.map == m.id).unwrap();
        if let Ok(h) = fiber_cubic(m, &t0) {
            let tau = t0.clone() + m.shift.clone();
            let dv = rec.model.d.eval(&tau);
            let disc = h.discriminant().unwrap();
            if !Zero::is_zero(&dv) {
                prop_assert!(is_rational_square(&(disc / dv)), "map {} t = {}", m.id, t0);
            }
        }
    }

    #[test]
    fn cusps_are_the_degenerate_locus(t0 in small_rational(), mi in 0usize..6) {
        let m = &corpus().maps[mi];
        let i = interpret_t(m, &TValue::Finite(t0.clone())).unwrap();
        let degenerate = match fiber_cubic(m, &t0) {
            Err(_) => true,
            Ok(h) => !rational_roots(&h).is_empty(),
        };
        prop_assert_eq!(i.kind == FiberKind::Cusp, degenerate);
    }

    #[test]
    fn cubic_classes_partition(c in prop::collection::vec(-20i64..=20, 3), lc in 1i64..=4) {
        let mut c = c;
        c.push(lc);
        let h = poly(&c);
        let k = classify_cubic(&h).unwrap();
        let reducible = !rational_roots(&h).is_empty();
        prop_assert_eq!(k.status == FieldStatus::Reducible, reducible);
        if k.status == FieldStatus::Cyclic {
            prop_assert!(is_rational_square(&k.discriminant) && k.discriminant.is_positive());
            prop_assert_eq!(k.signature, Signature::TotallyReal);
        }
        if !reducible && !Zero::is_zero(&k.discriminant) {
            prop_assert_eq!(k.status == FieldStatus::Cyclic, is_rational_square(&k.discriminant));
        }
        prop_assert_eq!(k.signature == Signature::Complex, k.discriminant.is_negative());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cantor_group_laws(seed in any::<u64>(), ci in 0usize..3, pi in 0usize..3) {
        let id = ["C2(16)", "C3(16)", "C2(20)"][ci];
        let p = [7u64, 13, 17][pi];
        let rc = OddModel::new(curve(id)).unwrap().reduce(p).unwrap();
        let jac = &rc.jac;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(jac, &mut rng).unwrap();
        let b = random_element(jac, &mut rng).unwrap();
        let c = random_element(jac, &mut rng).unwrap();
        prop_assert_eq!(jac.add(&a, &b), jac.add(&b, &a));
        prop_assert_eq!(jac.add(&jac.add(&a, &b), &c), jac.add(&a, &jac.add(&b, &c)));
        prop_assert!(jac.add(&a, &jac.neg(&a)).is_zero());
        let n = seed % 23;
        let rep = (0..n).fold(jac.zero(), |acc, _| jac.add(&acc, &a));
        prop_assert_eq!(jac.mul_u(n, &a), rep);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dlog_recovers_multiples(n in 0u64..10_000, pi in 0usize..2) {
        let (id, p, nn) = [("C2(16)", 11u64, 22u64), ("C2(20)", 3, 47)][pi];
        let h = curve(id);
        let rc = OddModel::new(h).unwrap().reduce(p).unwrap();
        let order = l_polynomial(h, p).unwrap().jacobian_order();
        let gs = group_structure(&rc, order).unwrap();
        let gen = gs.generators.last().unwrap().clone();
        let target = gs.jac.mul_u(n, &gen);
        let m = gs.dlog_multiple(&target, &gen, nn).unwrap().unwrap();
        let q = cubic_torsion::jacobian::quotient_order(&gs.quotient_coords(&gen, nn).unwrap(), &gs.quotient_moduli(nn));
        prop_assert_eq!(m % q, n % q);
    }

    #[test]
    fn nf_isomorphism_is_reflexive_and_symmetric(a in prop::collection::vec(-9i64..=9, 3), b in prop::collection::vec(-9i64..=9, 3), shift in -3i64..=3) {
        let mut ca = a.clone();
        ca.push(1);
        let h1 = poly(&ca);
        let mut cb = b.clone();
        cb.push(1);
        let h2 = poly(&cb);
        // h3(x) = h1(x + shift) defines the same field as h1
        let h3 = h1.compose(&poly(&[shift, 1]));
        if rational_roots(&h1).is_empty() && rational_roots(&h2).is_empty() {
            prop_assert!(nf_is_isomorphic(&h1, &h1).unwrap());
            prop_assert!(nf_is_isomorphic(&h1, &h3).unwrap());
            if let (Ok(x), Ok(y)) = (nf_is_isomorphic(&h1, &h2), nf_is_isomorphic(&h2, &h1)) {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn scan_is_order_independent(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let m = corpus().map("16_3").unwrap();
        let ts = cubic_torsion::verdicts::rationals_by_height(6);
        let mut shuffled = ts.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = scan_values(m, 6, &ts).unwrap();
        let b = scan_values(m, 6, &shuffled).unwrap();
        prop_assert_eq!(&a.counts, &b.counts);
        for r in &a.rows {
            prop_assert_eq!(b.class_of(&r.t), r.class.as_ref());
        }
    }
}

#[test]
fn l_polynomials_satisfy_weil() {
    for rec in &corpus().curves {
        for p in cubic_torsion::jacobian::good_primes(&rec.model, 6) {
            let l = l_polynomial(&rec.model, p).unwrap();
            assert!(l.functional_equation_holds(), "{} p = {p}", rec.id);
            assert_eq!(l.eval(1) as u64, l.jacobian_order());
            let g = rec.model.genus as i32;
            let sp = (p as f64).sqrt();
            let n = l.jacobian_order() as f64;
            assert!((sp - 1.0).powi(2 * g) <= n + 1e-6 && n <= (sp + 1.0).powi(2 * g) + 1e-6);
            for r in l.reciprocal_root_moduli() {
                assert!((r - sp).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn group_generators_have_their_orders() {
    for (id, p) in [("C2(16)", 5u64), ("C2(16)", 11), ("C3(16)", 17), ("C2(20)", 37), ("C4(16)", 31)] {
        let h = curve(id);
        let rc = OddModel::new(h).unwrap().reduce(p).unwrap();
        let gs = group_structure(&rc, l_polynomial(h, p).unwrap().jacobian_order()).unwrap();
        for (g, &n) in gs.generators.iter().zip(&gs.invariants) {
            assert!(gs.jac.mul_u(n, g).is_zero());
            for (ell, _) in cubic_torsion::algebra::fp::factor_u64(n) {
                assert!(!gs.jac.mul_u(n / ell, g).is_zero(), "{id} p = {p}");
            }
        }
    }
}

#[test]
fn point_search_is_exact_and_monotone() {
    for rec in &corpus().curves {
        let small: BTreeSet<CurvePoint> = rational_point_search(&rec.model, 8).into_iter().collect();
        let large: BTreeSet<CurvePoint> = rational_point_search(&rec.model, 16).into_iter().collect();
        assert!(small.is_subset(&large), "{}", rec.id);
        assert!(large.iter().all(|p| rec.model.contains(p)));
    }
}

#[test]
fn strassmann_bounds_refine_and_cover_known_points() {
    let h = curve("C2(16)");
    let p = 5;
    let g0 = "(0,0)".parse().unwrap();
    let g1 = "inf+".parse().unwrap();
    let known = rational_point_search(h, 20);
    let rc = OddModel::new(h).unwrap().reduce(p).unwrap();
    let mut prev: Option<Vec<usize>> = None;
    for k in [5u32, 7] {
        let ints = integrate_between(h, &g0, &g1, p, k).unwrap();
        let vecs = annihilator_space(&ints, h.genus, 1, k).unwrap();
        let mut bounds = Vec::new();
        for center in rc.points() {
            let inside = known.iter().filter(|q| rc.reduce_point(q).ok() == Some(center)).count();
            let b = vecs.iter().map(|a| disc_point_bound(h, a, &ResidueDisc::new(center), p, k).unwrap()).min().unwrap();
            assert!(b >= inside, "k = {k} {center}");
            bounds.push(b);
        }
        if let Some(pb) = &prev {
            assert!(bounds.iter().zip(pb).all(|(a, b)| a <= b));
        }
        prev = Some(bounds);
    }
}

fn c216_instance(primes: Vec<u64>) -> SieveInstance {
    let h = curve("C2(16)").clone();
    let gen = DivisorClass::difference(&"(0,0)".parse().unwrap(), &"inf+".parse().unwrap());
    SieveInstance {
        known_points: rational_point_search(&h, 20),
        curve: h,
        primes,
        n: 22,
        d: 1,
        gamma: vec![gen],
        base_point: "inf+".parse().unwrap(),
    }
}

#[test]
fn sieve_is_sound_monotone_and_order_free() {
    let a = run_sieve(&c216_instance(vec![5])).unwrap();
    let b = run_sieve(&c216_instance(vec![5, 11])).unwrap();
    let c = run_sieve(&c216_instance(vec![11, 5])).unwrap();
    assert!(a.sound && b.sound && c.sound);
    let sa: BTreeSet<_> = a.survivors.iter().cloned().collect();
    let sb: BTreeSet<_> = b.survivors.iter().cloned().collect();
    let sc: BTreeSet<_> = c.survivors.iter().cloned().collect();
    assert!(sb.is_subset(&sa));
    assert_eq!(sb, sc);
}

#[test]
fn annihilator_congruences_mod_p5() {
    let expect = [("C2(16)", 5u64, vec![2983i64, 0, 1]), ("C3(16)", 3, vec![118, 0, 1]), ("C2(20)", 3, vec![1, 4, 0, 1])];
    for (id, p, a) in expect {
        let h = curve(id);
        let ints = integrate_between(h, &"(0,0)".parse().unwrap(), &"inf+".parse().unwrap(), p, 5).unwrap();
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        assert!(cubic_torsion::padic::in_annihilator_span(&a, &ints, 5).unwrap(), "{id}");
    }
}
