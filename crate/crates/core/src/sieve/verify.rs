use super::certificate::*;
use super::certify::{best_disc_bound, QuotientConfig, SaturationInput};
use super::{compute_d, compute_d_rank_zero, product_quotient_order, remove_saturated, run_sieve, saturation_check, DivisorClass, SieveInstance};
use crate::algebra::parse::parse_unipoly;
use crate::curves::{rational_point_search, CurvePoint, HyperellipticModel};
use crate::jacobian::{certify_infinite_order, torsion_bound, FpPoint, OddModel};
use crate::padic::{disc_point_bound, rational_disc_bound, in_annihilator_span, integrate_between, ResidueDisc};
use crate::verdicts::{elliptic_torsion_bound, power_quotient, pullback_points};
use crate::Result;
use num_bigint::BigInt;
use std::collections::BTreeSet;

/// Re-verify a certificate from scratch. Ok(true) iff every recorded value is
/// recomputed identically and the disc coverage argument is complete.
pub fn verify_certificate(cert: &RationalPointCertificate) -> Result<bool> {
    Ok(verification_failures(cert)?.is_empty())
}

/// The list of checks that failed; empty when the certificate is valid.
pub fn verification_failures(cert: &RationalPointCertificate) -> Result<Vec<String>> {
    let d = parse_unipoly(&cert.equation, "x")?;
    let h = HyperellipticModel::new(&cert.curve, d)?;
    let mut fail = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            fail.push(what);
        }
    };
    let claimed: BTreeSet<CurvePoint> = cert.claimed_points.iter().cloned().collect();
    check(claimed.len() == cert.claimed_points.len(), "claimed points are not distinct".into());
    for q in &claimed {
        check(h.contains(q), format!("{q} is not on the curve"));
    }
    for q in rational_point_search(&h, cert.search_height.0) {
        check(claimed.contains(&q), format!("the rational point {q} is missing from the claim"));
    }
    match cert.route.as_str() {
        "elliptic-quotient" => verify_quotient(&h, cert, &claimed, &mut check)?,
        "chabauty-sieve" => verify_chabauty(&h, cert, &claimed, &mut check)?,
        r => check(false, format!("unknown route {r}")),
    }
    Ok(fail)
}

fn verify_quotient(h: &HyperellipticModel, cert: &RationalPointCertificate, claimed: &BTreeSet<CurvePoint>, check: &mut impl FnMut(bool, String)) -> Result<()> {
    let Some(q) = &cert.quotient else {
        check(false, "missing quotient record".into());
        return Ok(());
    };
    check(cert.rank_input.value.0 == 0, "the quotient route needs rank 0".into());
    let cfg = QuotientConfig { exponent: q.exponent.0 as u32 };
    let e = power_quotient(h, cfg.exponent)?;
    check(e.d.to_string() == q.quartic, "quotient curve differs".into());
    let tb = elliptic_torsion_bound(&e, &undec(&q.torsion_primes))?;
    check(tb == q.torsion_bound.0, format!("torsion bound {tb} differs"));
    let pts = rational_point_search(&e, q.search_height.0);
    check(pts.len() as u64 == tb, "the quotient points do not exhaust the torsion bound".into());
    check(pts == q.points, "quotient point list differs".into());
    let back: BTreeSet<CurvePoint> = pullback_points(h, &pts, cfg.exponent)?.into_iter().collect();
    check(&back == claimed, "pullback differs from the claim".into());
    Ok(())
}

fn verify_chabauty(h: &HyperellipticModel, cert: &RationalPointCertificate, claimed: &BTreeSet<CurvePoint>, check: &mut impl FnMut(bool, String)) -> Result<()> {
    let rank = cert.rank_input.value.0;
    check((rank as usize) < h.genus && rank <= 1, format!("rank {rank} is not handled"));
    let (Some(ch), Some(sv)) = (&cert.chabauty, &cert.sieve) else {
        check(false, "missing Chabauty or sieve record".into());
        return Ok(());
    };
    let p = ch.p.0;
    let k = ch.precision.0 as u32;
    let generator = match (&cert.infinite_order, rank) {
        (Some(io), 1) => {
            let ok = certify_infinite_order(h, &io.plus, &io.minus, &undec(&io.primes));
            check(matches!(ok, Ok(true)), "generator not certified of infinite order".into());
            check(claimed.contains(&io.plus) && claimed.contains(&io.minus), "generator points not claimed".into());
            Some([io.plus.clone(), io.minus.clone()])
        }
        (None, 0) => None,
        _ => {
            check(false, "infinite-order record does not match the rank".into());
            return Ok(());
        }
    };

    // annihilators
    let vecs: Vec<Vec<BigInt>> = ch
        .annihilator_vectors
        .iter()
        .map(|v| v.iter().map(|x| x.parse::<BigInt>()).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| crate::Error::Parse(e.to_string()))?;
    if let Some(g) = &generator {
        let ints = integrate_between(h, &g[0], &g[1], p, k)?;
        for (i, a) in vecs.iter().enumerate() {
            check(a.len() == h.genus && in_annihilator_span(a, &ints, k).unwrap_or(false), format!("vector {i} does not annihilate"));
        }
    }

    // sieve, recomputed
    let known: Vec<CurvePoint> = claimed.iter().cloned().collect();
    let gamma: Vec<DivisorClass> = match &generator {
        Some(g) => vec![DivisorClass::difference(&g[0], &g[1])],
        None => known.iter().filter(|q| **q != sv.base).map(|q| DivisorClass::difference(q, &sv.base)).collect(),
    };
    check(gamma.iter().map(|g| g.to_string()).collect::<Vec<_>>() == sv.gamma, "Γ differs".into());
    let tprimes = undec(&sv.torsion_primes);
    let tb = torsion_bound(h, &tprimes)?;
    check(tb == sv.torsion_bound.0, format!("torsion bound {tb} differs"));
    let s = undec(&sv.s);
    check(s.contains(&p), "the Chabauty prime is not a sieve prime".into());
    let mut inst = SieveInstance {
        curve: h.clone(),
        primes: s.clone(),
        n: sv.n.0,
        d: 1,
        gamma: gamma.clone(),
        known_points: known.clone(),
        base_point: sv.base.clone(),
    };
    let d = if let Some(g) = &generator {
        let first = run_sieve(&inst)?;
        let d = compute_d(sv.n.0, tb, product_quotient_order(&first, 0))?;
        let mut ells = Vec::new();
        for sat in &sv.saturated {
            let si = SaturationInput { ell: sat.ell.0, aux: sat.aux.0 };
            let gen = DivisorClass::difference(&g[0], &g[1]);
            let ok = saturation_check(h, &gen, si.ell, si.aux, &tprimes).unwrap_or(false);
            check(ok, format!("saturation at {} not confirmed", si.ell));
            if ok {
                ells.push(si.ell);
            }
        }
        remove_saturated(d, &ells)
    } else {
        let order = super::certify::torsion_gamma_order(h, &gamma, s[0])?;
        compute_d_rank_zero(sv.n.0, tb, order)?
    };
    check(d == sv.d.0, format!("d = {d} differs from the recorded {}", sv.d.0));
    inst.d = d;
    let res = run_sieve(&inst)?;
    check(res.sound, "a claimed point is eliminated".into());
    check(res.transcripts.len() == sv.per_prime_multiples.len(), "prime list differs".into());
    for (t, rec) in res.transcripts.iter().zip(&sv.per_prime_multiples) {
        check(t.p == rec.p.0 && t.invariants == undec(&rec.invariants), format!("group structure at {} differs", t.p));
        let ours: Vec<PointMultiple> = t
            .points
            .iter()
            .map(|pi| PointMultiple { point: pi.point.to_string(), multiple: pi.multiple.as_ref().map(|m| decs(m)) })
            .collect();
        check(ours == rec.points, format!("multiples at {} differ", t.p));
    }
    let surv: Vec<Vec<Dec>> = res.survivors.iter().map(|v| decs(v)).collect();
    check(surv == sv.survivors, "survivors differ".into());

    // disc coverage at the Chabauty prime
    let rc = OddModel::new(h)?.reduce(p)?;
    let Some(proj) = res.projection(p) else {
        return Ok(());
    };
    let pts: Vec<FpPoint> = rc.points();
    check(pts.len() == ch.disc_bounds.len(), "disc list is incomplete".into());
    for center in pts {
        let name = center.to_string();
        let Some(rec) = ch.disc_bounds.iter().find(|r| r.center == name) else {
            check(false, format!("disc {name} is not covered"));
            continue;
        };
        let inside = known.iter().filter(|q| rc.reduce_point(q).ok() == Some(center)).count();
        match rec.status.as_str() {
            "eliminated" => {
                check(!proj.contains(&center) && inside == 0, format!("disc {name} is not eliminated"));
            }
            "bounded" => {
                let b = match rec.differential {
                    Some(i) if (i.0 as usize) < vecs.len() => {
                        let disc = ResidueDisc::new(center);
                        disc_point_bound(h, &vecs[i.0 as usize], &disc, p, k).ok().map(|b| rational_disc_bound(h, &disc, p, b))
                    }
                    _ => best_disc_bound(h, &vecs, center, p, k).map(|x| x.0),
                };
                check(b.is_some() && b.map(|b| b as u64) == rec.bound.map(|x| x.0), format!("bound at {name} differs"));
                check(b.is_some_and(|b| b <= inside), format!("disc {name} may hold unclaimed points"));
            }
            s => check(false, format!("unknown disc status {s}")),
        }
    }
    Ok(())
}
