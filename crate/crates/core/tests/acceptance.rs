//! Acceptance suite: one PASS/FAIL line per checked claim.
//!
//! Some lines check literal values that are misprinted in the source tables
//! (a y-coordinate on C4(16) and the coefficients of the exceptional curve).
//! They run unchanged and report FAIL with the reason; a separate line checks
//! the corrected value. Only unexpected failures make the exit code nonzero.

use cubic_torsion::algebra::{nf_is_isomorphic, rat};
use cubic_torsion::curves::{discriminant_curve, rational_point_search, square_factor, Corpus, CurvePoint, HyperellipticModel};
use cubic_torsion::jacobian::{count_points, good_primes, group_structure, l_polynomial, random_element, OddModel};
use cubic_torsion::padic::{in_annihilator_span, integrate_between};
use cubic_torsion::sieve::{certify_rational_points, run_sieve, verify_certificate, CertifyConfig, Dec, DivisorClass, RationalPointCertificate, SieveInstance};
use cubic_torsion::verdicts::{
    classify_cubic, derived_exceptional_curve, exceptional_field_polynomial, exceptional_fiber_polynomial, interpret_point,
    printed_exceptional_curve, same_field, scan_family, torsion_order_at_origin, FiberKind, FieldStatus,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

#[derive(Default)]
struct Ledger {
    pass: usize,
    fail: usize,
    known: usize,
}

impl Ledger {
    fn check(&mut self, crit: u32, name: &str, ok: bool, detail: impl std::fmt::Display) {
        if ok {
            self.pass += 1;
            println!("PASS [{crit:>2}] {name}");
        } else {
            self.fail += 1;
            println!("FAIL [{crit:>2}] {name}: {detail}");
        }
    }

    /// A literal value believed to be misprinted; failure is expected and
    /// reported with its reason.
    fn literal(&mut self, crit: u32, name: &str, ok: bool, reason: &str) {
        if ok {
            self.pass += 1;
            println!("PASS [{crit:>2}] {name}");
        } else {
            self.known += 1;
            println!("FAIL [{crit:>2}] {name}: {reason}");
        }
    }
}

fn pt(s: &str) -> CurvePoint {
    s.parse().expect("literal point")
}

fn pts(v: &[&str]) -> BTreeSet<CurvePoint> {
    v.iter().map(|s| pt(s)).collect()
}

fn claimed(c: &RationalPointCertificate) -> BTreeSet<CurvePoint> {
    c.claimed_points.iter().cloned().collect()
}

fn show(s: &BTreeSet<CurvePoint>) -> String {
    let v: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

/// Sorted multiples n with d·μ(P) = n·[(0,0) − ∞+] in J(𝔽_p)/N, over the
/// points of C(𝔽_p) whose image lies in the subgroup; plus the number of
/// points outside it.
fn multiset(h: &HyperellipticModel, p: u64, n: u64) -> (Vec<u64>, usize) {
    let rc = OddModel::new(h).unwrap().reduce(p).unwrap();
    let gs = group_structure(&rc, l_polynomial(h, p).unwrap().jacobian_order()).unwrap();
    let base = rc.reduce_point(&pt("inf+")).unwrap();
    let x = rc.mu_embed(&rc.reduce_point(&pt("(0,0)")).unwrap(), &base);
    let mut got = Vec::new();
    let mut outside = 0;
    for q in rc.points() {
        match gs.dlog_multiple(&rc.mu_embed(&q, &base), &x, n).unwrap() {
            Some(m) => got.push(m),
            None => outside += 1,
        }
    }
    got.sort();
    (got, outside)
}

/// +1 if `got` equals `want` mod m, −1 if it equals −want, 0 otherwise.
fn sign_match(got: &[u64], want: &[u64], m: u64) -> i32 {
    let norm = |v: &mut Vec<u64>| v.sort();
    let mut g: Vec<u64> = got.iter().map(|x| x % m).collect();
    let mut ng: Vec<u64> = got.iter().map(|x| (m - x % m) % m).collect();
    let mut w: Vec<u64> = want.iter().map(|x| x % m).collect();
    norm(&mut g);
    norm(&mut ng);
    norm(&mut w);
    if g == w {
        1
    } else if ng == w {
        -1
    } else {
        0
    }
}

fn tampered_rejected(c: &RationalPointCertificate) -> bool {
    !matches!(verify_certificate(c), Ok(true))
}

fn main() -> ExitCode {
    let corpus = Corpus::default_corpus().expect("corpus");
    let cfg = CertifyConfig::default_config().expect("certify config");
    let curve = |id: &str| &corpus.curve(id).unwrap().model;
    let mut led = Ledger::default();

    let ids: Vec<&str> = corpus.curves.iter().map(|c| c.id.as_str()).collect();
    let certs: BTreeMap<String, Result<RationalPointCertificate, String>> = ids
        .par_iter()
        .map(|id| (id.to_string(), certify_rational_points(curve(id), cfg.get(id).unwrap()).map_err(|e| e.to_string())))
        .collect();
    let cert = |id: &str| certs[id].as_ref().ok();

    // 1. rank-one certificates
    let three = pts(&["(0,0)", "inf+", "inf-"]);
    for id in ["C2(16)", "C3(16)", "C2(20)"] {
        match &certs[id] {
            Ok(c) => {
                let v = verify_certificate(c).unwrap_or(false);
                led.check(1, &format!("{id}(Q) = {{(0,0), (1:1:0), (1:-1:0)}}, certificate verifies"), v && claimed(c) == three, format!("verified {v}, claimed {}", show(&claimed(c))));
            }
            Err(e) => led.check(1, &format!("{id}(Q) certificate"), false, e),
        }
    }

    // 2. point counts
    for (id, p, want) in [("C2(16)", 5u64, 11u64), ("C2(16)", 11, 16), ("C2(20)", 3, 5), ("C2(20)", 37, 39)] {
        let h = curve(id);
        let got = count_points(h, p, 1).unwrap();
        let enumerated = OddModel::new(h).unwrap().reduce(p).unwrap().points().len() as u64;
        led.check(2, &format!("#{id}(F_{p}) = {want}"), got == want && enumerated == want, format!("count {got}, enumerated {enumerated}"));
    }

    // 3. group structures
    for (id, p, want) in [
        ("C2(16)", 5u64, vec![363u64]),
        ("C2(16)", 11, vec![2, 1056]),
        ("C3(16)", 3, vec![54]),
        ("C3(16)", 17, vec![5274]),
        ("C2(20)", 3, vec![141]),
        ("C2(20)", 37, vec![3, 655791]),
    ] {
        let h = curve(id);
        let rc = OddModel::new(h).unwrap().reduce(p).unwrap();
        let gs = group_structure(&rc, l_polynomial(h, p).unwrap().jacobian_order()).unwrap();
        led.check(3, &format!("J_{id}(F_{p}) has invariants {want:?}"), gs.invariants == want && gs.verify(), format!("{:?}", gs.invariants));
    }

    // 4. Chabauty congruences mod p^5
    for (id, p, a, name) in [
        ("C2(16)", 5u64, vec![2983i64, 0, 1], "I2 + 2983 I0"),
        ("C3(16)", 3, vec![118, 0, 1], "I2 + 118 I0"),
        ("C2(20)", 3, vec![1, 4, 0, 1], "I3 + 4 I1 + I0"),
    ] {
        let h = curve(id);
        let ints = integrate_between(h, &pt("(0,0)"), &pt("inf+"), p, 5).unwrap();
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        let ok = in_annihilator_span(&a, &ints, 5).unwrap();
        led.check(4, &format!("{id}: {name} vanishes on J(Q) mod {p}^5"), ok, "not in the annihilator span");
    }

    // 5. sieve multisets, up to n -> -n
    {
        let h = curve("C2(16)");
        let (m, _) = multiset(h, 5, 22);
        let s = sign_match(&m, &[0, 2, 2, 4, 4, 5, 5, 7, 7, 9, 10], 11);
        led.check(5, "C2(16), F_5, N = 22: {0,2,2,4,4,5,5,7,7,9,10} mod 11", s != 0, format!("{m:?}"));
        let (m, outside) = multiset(h, 11, 22);
        let s = sign_match(&m, &[0, 3, 10, 10, 17, 20, 21, 21], 22);
        led.check(5, "C2(16), F_11, N = 22: {0,3,10,10,17,20,21,21}, 8 of 16 in the subgroup", s != 0 && m.len() == 8 && outside == 8, format!("{m:?}, {outside} outside"));

        let h = curve("C2(20)");
        let (m3, _) = multiset(h, 3, 47);
        let s3 = sign_match(&m3, &[0, 19, 26, 45, 46], 47);
        led.check(5, "C2(20), F_3, N = 47: {0,19,26,45,46}", s3 != 0, format!("{m3:?}"));
        let want37 = [
            0, 1, 1, 1, 2, 2, 3, 3, 6, 6, 7, 9, 12, 14, 14, 16, 17, 18, 22, 23, 27, 28, 29, 31, 31, 33, 36, 38, 39, 39, 42, 42, 43, 43, 44, 44, 44, 45, 46,
        ];
        let (m37, _) = multiset(h, 37, 47);
        let s37 = sign_match(&m37, &want37, 47);
        led.check(5, "C2(20), F_37, N = 47: the 39 printed multiples", s37 != 0 && s37 == s3, format!("{m37:?}"));
        match cert("C2(20)").and_then(|c| c.sieve.as_ref()) {
            Some(sv) => {
                let surv: BTreeSet<u64> = sv.survivors.iter().map(|v| v[0].0 % 47).collect();
                let flip = |x: u64| if s3 < 0 { (47 - x) % 47 } else { x };
                let printed: BTreeSet<u64> = surv.iter().map(|&x| flip(x)).collect();
                let ok = s3 != 0 && !printed.contains(&19) && !printed.contains(&26) && printed == [0u64, 45, 46].into_iter().collect();
                led.check(5, "C2(20): sieve over {3, 37} leaves {0, 45, 46}, excluding 19 and 26", ok, format!("{printed:?}"));
            }
            None => led.check(5, "C2(20): sieve survivors", false, "no certificate"),
        }
    }

    // 6. the other curves
    match cert("C1(16)") {
        Some(c) => led.check(
            6,
            "C1(16)(Q) = {(1/2,0), inf} by the rank-0 route",
            c.rank_input.value == Dec(0) && claimed(c) == pts(&["(1/2,0)", "inf"]) && verify_certificate(c).unwrap_or(false),
            show(&claimed(c)),
        ),
        None => led.check(6, "C1(16) certificate", false, certs["C1(16)"].as_ref().unwrap_err()),
    }
    {
        let h = curve("C4(16)");
        let printed = CurvePoint::affine(rat(-1, 4), rat(201, 4));
        led.literal(6, "C4(16): printed point (-1/4, 201/4) lies on the curve", h.contains(&printed), "not on the curve; the y-coordinate is 201/64");
        let fixed = CurvePoint::affine(rat(-1, 4), rat(201, 64));
        led.check(6, "C4(16): (-1/4, 201/64) lies on the curve", h.contains(&fixed), "not on the curve");
        let want = pts(&["(0,0)", "inf+", "inf-", "(-1/4,201/64)", "(-1/4,-201/64)"]);
        match cert("C4(16)") {
            Some(c) => led.check(6, "C4(16)(Q) = {(0,0), inf+, inf-, (-1/4, +-201/64)}, certificate verifies", claimed(c) == want && verify_certificate(c).unwrap_or(false), show(&claimed(c))),
            None => led.check(6, "C4(16) certificate", false, certs["C4(16)"].as_ref().unwrap_err()),
        }
    }
    match cert("C1(20)") {
        Some(c) => led.check(6, "C1(20)(Q) = {(1,0), (-1,0)}", claimed(c) == pts(&["(1,0)", "(-1,0)"]) && verify_certificate(c).unwrap_or(false), show(&claimed(c))),
        None => led.check(6, "C1(20) certificate", false, certs["C1(20)"].as_ref().unwrap_err()),
    }

    // 7. the exceptional curve
    {
        let k = exceptional_field_polynomial();
        let class = classify_cubic(&k).unwrap();
        led.check(7, "x^3 - 8x^2 - x + 8/9 defines a cyclic cubic field", class.status == FieldStatus::Cyclic, class.status);
        let iso = nf_is_isomorphic(&k, &exceptional_fiber_polynomial()).unwrap();
        led.check(7, "that field is the f4 fiber field at t = -1/4 (16x^3 - 33x^2 - 15x + 16)", iso, "not isomorphic");
        let printed = printed_exceptional_curve().and_then(|e| torsion_order_at_origin(&e, 64));
        led.literal(
            7,
            "printed curve (a, b): (0,0) has order 16",
            matches!(printed, Ok(Some(16))),
            &format!("order is {printed:?}, not 16; the printed coefficients do not give a Z/16 point"),
        );
        let m4 = corpus.map("16_4").unwrap();
        let derived = derived_exceptional_curve(m4).and_then(|e| Ok((torsion_order_at_origin(&e, 64)?, same_field(&e, &k)?)));
        led.check(7, "curve derived from the t = -1/4 fiber: (0,0) has order 16 over the same field", matches!(derived, Ok((Some(16), true))), format!("{derived:?}"));
    }

    // 8. printed curves are discriminant curves
    for rec in &corpus.curves {
        let m = corpus.map(&rec.map).unwrap();
        let same = discriminant_curve(m).map(|h| square_factor(&rec.model.d, &h.d).is_some()).unwrap_or(false);
        led.check(8, &format!("{} equals the discriminant curve of {} up to a square", rec.id, rec.map), same, "differs");
    }

    // 9. cusps
    for id in ["C1(16)", "C2(16)", "C3(16)", "C2(20)", "C4(16)"] {
        let Some(c) = cert(id) else {
            led.check(9, &format!("{id}: cusp reading"), false, "no certificate");
            continue;
        };
        let m = corpus.map(&corpus.curve(id).unwrap().map).unwrap();
        let readings: Vec<_> = c.claimed_points.iter().map(|p| (p.clone(), interpret_point(m, p))).collect();
        let noncusp: Vec<String> = readings
            .iter()
            .filter(|(_, r)| !matches!(r, Ok(i) if i.kind == FiberKind::Cusp))
            .map(|(p, r)| format!("{p} -> {}", r.as_ref().map(|i| i.t0.to_string()).unwrap_or_else(|e| e.to_string())))
            .collect();
        if id == "C4(16)" {
            let ok = noncusp.len() == 2
                && readings.iter().filter(|(_, r)| matches!(r, Ok(i) if i.kind == FiberKind::EllipticPoint)).all(|(_, r)| r.as_ref().unwrap().t0.to_string() == "-1/4");
            led.check(9, "C4(16): t = -1/4 is the only non-cusp among the certified points", ok, noncusp.join("; "));
        } else {
            led.check(9, &format!("{id}: every certified point lies over a cusp"), noncusp.is_empty(), noncusp.join("; "));
        }
    }

    // 10. property suites
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0x16_20);
        let mut bad = 0;
        let mut n = 0;
        for id in ["C2(16)", "C3(16)", "C2(20)"] {
            for p in [7u64, 13, 17, 19] {
                let rc = OddModel::new(curve(id)).unwrap().reduce(p).unwrap();
                let j = &rc.jac;
                for _ in 0..84 {
                    let a = random_element(j, &mut rng).unwrap();
                    let b = random_element(j, &mut rng).unwrap();
                    let c = random_element(j, &mut rng).unwrap();
                    let ok = j.add(&a, &b) == j.add(&b, &a)
                        && j.add(&j.add(&a, &b), &c) == j.add(&a, &j.add(&b, &c))
                        && j.add(&a, &j.neg(&a)).is_zero()
                        && j.is_valid(&j.add(&a, &b));
                    bad += usize::from(!ok);
                    n += 1;
                }
            }
        }
        led.check(10, &format!("Cantor arithmetic: group laws on {n} random triples"), n >= 1000 && bad == 0, format!("{bad} of {n} failed"));

        let mut bad = Vec::new();
        for rec in &corpus.curves {
            let h = &rec.model;
            for p in good_primes(h, 4) {
                let l = l_polynomial(h, p).unwrap();
                let ok = l.functional_equation_holds() && (1..=2).all(|k| l.predicted_count(k) == count_points(h, p, k).unwrap() as i128);
                if !ok {
                    bad.push(format!("{} p={p}", rec.id));
                }
            }
        }
        led.check(10, "L-polynomials: functional equation and #C(F_p), #C(F_p^2)", bad.is_empty(), bad.join(", "));

        let mut bad = Vec::new();
        for (id, res) in &certs {
            let Ok(c) = res else { continue };
            let h = curve(id);
            let found: BTreeSet<CurvePoint> = rational_point_search(h, 60).into_iter().collect();
            if !found.is_subset(&claimed(c)) {
                bad.push(format!("{id}: search finds {}", show(&found)));
            }
            if let Some(ch) = &c.chabauty {
                let total: u64 = ch.disc_bounds.iter().filter_map(|d| d.bound.map(|b| b.0)).sum();
                let under = ch.disc_bounds.iter().any(|d| d.bound.map(|b| (b.0 as usize) < d.known.len()).unwrap_or(false));
                if under || total != c.claimed_points.len() as u64 {
                    bad.push(format!("{id}: disc bounds sum to {total} for {} points", c.claimed_points.len()));
                }
            }
        }
        led.check(10, "Strassmann bounds agree with point enumeration (height 60)", bad.is_empty(), bad.join("; "));

        let mut bad = Vec::new();
        for (id, primes, n) in [("C2(16)", vec![5u64, 11], 22u64), ("C2(20)", vec![3, 37], 47), ("C3(16)", vec![3], 2), ("C4(16)", vec![3, 11], 20)] {
            let h = curve(id).clone();
            let inst = SieveInstance {
                known_points: rational_point_search(&h, 30),
                curve: h,
                primes,
                n,
                d: 1,
                gamma: vec![DivisorClass::difference(&pt("(0,0)"), &pt("inf+"))],
                base_point: pt("inf+"),
            };
            match run_sieve(&inst) {
                Ok(r) if r.sound => {}
                Ok(_) => bad.push(format!("{id}: a known point was sieved out")),
                Err(e) => bad.push(format!("{id}: {e}")),
            }
        }
        led.check(10, "sieve soundness: known points survive", bad.is_empty(), bad.join("; "));

        let mut bad = Vec::new();
        for (id, res) in &certs {
            let Ok(c) = res else { continue };
            let back = RationalPointCertificate::from_json(&c.to_json());
            if back.as_ref().ok() != Some(c) || !verify_certificate(c).unwrap_or(false) {
                bad.push(format!("{id}: round trip"));
            }
            let mut t = c.clone();
            t.claimed_points.pop();
            if !tampered_rejected(&t) {
                bad.push(format!("{id}: dropping a point is accepted"));
            }
            if let Some(sv) = &c.sieve {
                let n = sv.n.0;
                let mut t = c.clone();
                let hit = t.sieve.as_mut().unwrap().per_prime_multiples.iter_mut().flat_map(|r| r.points.iter_mut()).find_map(|pm| pm.multiple.as_mut());
                if let Some(m) = hit {
                    m[0] = Dec((m[0].0 + 1) % n);
                    if !tampered_rejected(&t) {
                        bad.push(format!("{id}: altered multiple is accepted"));
                    }
                }
            }
        }
        let again = certify_rational_points(curve("C4(16)"), cfg.get("C4(16)").unwrap()).map(|c| c.to_json());
        if again.ok() != cert("C4(16)").map(|c| c.to_json()) {
            bad.push("C4(16): certification is not deterministic".into());
        }
        led.check(10, "certificates: JSON round trip, tamper rejection, determinism", bad.is_empty(), bad.join("; "));
    }

    // 11. witness scans
    let scans: Vec<_> = corpus.maps.par_iter().map(|m| (m.id.clone(), scan_family(m, 50))).collect();
    for (id, r) in scans {
        match r {
            Ok(r) => {
                let c = r.first_complex_witness.clone();
                let rl = r.first_real_nonsquare_witness.clone();
                led.check(11, &format!("map {id}: height <= 50 witnesses with disc < 0 and disc > 0 nonsquare"), c.is_some() && rl.is_some(), format!("complex {c:?}, real {rl:?}"));
            }
            Err(e) => led.check(11, &format!("map {id}: scan"), false, e),
        }
    }

    println!("\n{} passed, {} failed, {} misprinted literals failed as expected", led.pass, led.fail, led.known);
    if led.fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
