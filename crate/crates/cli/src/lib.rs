//! Corpus runs: certificate generation, independent re-verification and the
//! reproduction report.

use cubic_torsion::curves::{discriminant_curve, square_factor, validate_map, Corpus, CurvePoint};
use cubic_torsion::sieve::{certify_rational_points, verification_failures, CertifyConfig, RationalPointCertificate};
use cubic_torsion::verdicts::{interpret_point, FiberKind};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "CUBIC_TORSION_OUT";

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub corpus: Corpus,
    pub certify: CertifyConfig,
    /// Restrict the run to these curve ids; empty means every configured curve.
    pub curves: Vec<String>,
    pub out_dir: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(corpus: Corpus, certify: CertifyConfig) -> Self {
        RunConfig { corpus, certify, curves: Vec::new(), out_dir: None, jobs: 0 }
    }

    pub fn default_run() -> anyhow::Result<Self> {
        Ok(Self::new(Corpus::default_corpus()?, CertifyConfig::default_config()?))
    }

    /// Every selected curve must exist in the corpus and have a configuration,
    /// and every rank input needs a source.
    pub fn validate(&self) -> anyhow::Result<()> {
        for id in self.selected() {
            if self.corpus.curve(&id).is_none() {
                anyhow::bail!("curve {id} is not in the corpus");
            }
            let cfg = self.certify.get(&id).ok_or_else(|| anyhow::anyhow!("no configuration for {id}"))?;
            if cfg.rank_source.trim().is_empty() {
                anyhow::bail!("{id}: rank_source must not be empty");
            }
        }
        Ok(())
    }

    pub fn selected(&self) -> Vec<String> {
        if self.curves.is_empty() {
            self.corpus.curves.iter().map(|c| c.id.clone()).filter(|id| self.certify.get(id).is_some()).collect()
        } else {
            self.curves.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointReading {
    pub point: CurvePoint,
    pub t: String,
    pub cusp: bool,
    pub field: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CurveOutcome {
    pub id: String,
    /// The printed curve agrees with the discriminant of its map up to a square.
    pub discriminant_ok: bool,
    pub certificate: Option<RationalPointCertificate>,
    /// Stage and message of the first failure.
    pub error: Option<String>,
    pub verification_failures: Vec<String>,
    pub readings: Vec<PointReading>,
    pub seconds: f64,
}

impl CurveOutcome {
    pub fn passed(&self) -> bool {
        self.discriminant_ok && self.certificate.is_some() && self.error.is_none() && self.verification_failures.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOutcome {
    pub curves: Vec<CurveOutcome>,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.curves.iter().all(CurveOutcome::passed)
    }

    pub fn get(&self, id: &str) -> Option<&CurveOutcome> {
        self.curves.iter().find(|c| c.id == id)
    }
}

fn run_curve(cfg: &RunConfig, id: &str) -> CurveOutcome {
    let t0 = Instant::now();
    let mut out = CurveOutcome {
        id: id.to_string(),
        discriminant_ok: false,
        certificate: None,
        error: None,
        verification_failures: Vec::new(),
        readings: Vec::new(),
        seconds: 0.0,
    };
    let stage = |out: &mut CurveOutcome, what: &str, e: &dyn std::fmt::Display| {
        out.error.get_or_insert_with(|| format!("{what}: {e}"));
    };
    let (Some(rec), Some(cc)) = (cfg.corpus.curve(id), cfg.certify.get(id)) else {
        out.error = Some("configuration: unknown curve".into());
        return out;
    };
    let Some(map) = cfg.corpus.map(&rec.map) else {
        out.error = Some(format!("configuration: map {} missing", rec.map));
        return out;
    };
    match validate_map(map).and_then(|ok| if ok { discriminant_curve(map) } else { Err(cubic_torsion::Error::InvalidMap(map.id.clone())) }) {
        Ok(h) => out.discriminant_ok = square_factor(&rec.model.d, &h.d).is_some(),
        Err(e) => stage(&mut out, "discriminant curve", &e),
    }
    match certify_rational_points(&rec.model, cc) {
        Ok(cert) => {
            match verification_failures(&cert) {
                Ok(f) => out.verification_failures = f,
                Err(e) => stage(&mut out, "verification", &e),
            }
            for p in &cert.claimed_points {
                match interpret_point(map, p) {
                    Ok(i) => out.readings.push(PointReading {
                        point: p.clone(),
                        t: i.t0.to_string(),
                        cusp: i.kind == FiberKind::Cusp,
                        field: i.class.map(|c| format!("{} {}", c.status, c.signature)),
                    }),
                    Err(e) => stage(&mut out, "interpretation", &e),
                }
            }
            out.certificate = Some(cert);
        }
        Err(e) => stage(&mut out, "certification", &e),
    }
    out.seconds = t0.elapsed().as_secs_f64();
    out
}

/// File name for a curve id: "C2(16)" → "C2_16.json".
pub fn certificate_file_name(id: &str) -> String {
    let s: String = id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("{}.json", s.trim_end_matches('_'))
}

/// Certify every selected curve; certificates are written to the output
/// directory when one is set, failures included in the outcome.
pub fn run_corpus(cfg: &RunConfig) -> anyhow::Result<RunOutcome> {
    cfg.validate()?;
    let ids = cfg.selected();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let curves: Vec<CurveOutcome> = pool.install(|| ids.par_iter().map(|id| run_curve(cfg, id)).collect());
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        for c in &curves {
            if let Some(cert) = &c.certificate {
                std::fs::write(dir.join(certificate_file_name(&c.id)), cert.to_json() + "\n")?;
            }
        }
    }
    Ok(RunOutcome { curves })
}

/// Load and re-verify a certificate file. Ok(failures); empty means valid.
pub fn verify_file(path: &Path) -> anyhow::Result<Vec<String>> {
    let s = std::fs::read_to_string(path)?;
    let cert = RationalPointCertificate::from_json(&s)?;
    Ok(verification_failures(&cert)?)
}

/// The rational points each curve is expected to have.
pub fn expected_points(id: &str) -> Option<Vec<CurvePoint>> {
    let pts: &[&str] = match id {
        "C1(16)" => &["(1/2,0)", "inf"],
        "C2(16)" | "C3(16)" | "C2(20)" => &["(0,0)", "inf+", "inf-"],
        "C4(16)" => &["(0,0)", "inf+", "inf-", "(-1/4,201/64)", "(-1/4,-201/64)"],
        "C1(20)" => &["(1,0)", "(-1,0)"],
        _ => return None,
    };
    Some(pts.iter().map(|s| s.parse().expect("literal point")).collect())
}

fn same_points(a: &[CurvePoint], b: &[CurvePoint]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

/// One row per curve: expected point set, certificate, verification, cusp
/// reading and time.
pub fn emit_reproduction_report(run: &RunOutcome) -> String {
    if run.curves.is_empty() {
        return String::new();
    }
    let mut s = String::new();
    s.push_str(&format!("{:<8} {:<6} {:<6} {:<6} {:<8} {:>8}  {}\n", "curve", "disc", "cert", "verify", "points", "seconds", "notes"));
    for c in &run.curves {
        let pts_ok = match (&c.certificate, expected_points(&c.id)) {
            (Some(cert), Some(exp)) => same_points(&cert.claimed_points, &exp),
            _ => false,
        };
        let yn = |b: bool| if b { "pass" } else { "FAIL" };
        let mut notes = Vec::new();
        if let Some(e) = &c.error {
            notes.push(e.clone());
        }
        notes.extend(c.verification_failures.iter().cloned());
        for r in &c.readings {
            notes.push(format!("{} -> t = {} {}", r.point, r.t, if r.cusp { "cusp".to_string() } else { r.field.clone().unwrap_or_default() }));
        }
        s.push_str(&format!(
            "{:<8} {:<6} {:<6} {:<6} {:<8} {:>8.1}  {}\n",
            c.id,
            yn(c.discriminant_ok),
            if c.certificate.is_some() { "pass" } else { "none" },
            yn(c.certificate.is_some() && c.verification_failures.is_empty() && c.error.is_none()),
            yn(pts_ok),
            c.seconds,
            notes.join("; ")
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names() {
        assert_eq!(certificate_file_name("C2(16)"), "C2_16.json");
    }

    #[test]
    fn empty_report_and_empty_corpus() {
        assert_eq!(emit_reproduction_report(&RunOutcome::default()), "");
        let cfg = RunConfig::new(Corpus::default(), CertifyConfig::default());
        let out = run_corpus(&cfg).unwrap();
        assert!(out.curves.is_empty() && out.all_passed());
    }

    #[test]
    fn unknown_curve_is_a_config_error() {
        let mut cfg = RunConfig::default_run().unwrap();
        cfg.curves = vec!["C9(99)".into()];
        assert!(run_corpus(&cfg).is_err());
    }

    #[test]
    fn c220_alone_and_with_small_n() {
        let mut cfg = RunConfig::default_run().unwrap();
        cfg.curves = vec!["C2(20)".into()];
        let out = run_corpus(&cfg).unwrap();
        assert_eq!(out.curves.len(), 1);
        assert!(out.all_passed());
        assert_eq!(out.curves[0].certificate.as_ref().unwrap().claimed_points.len(), 3);
        assert!(out.curves[0].readings.iter().all(|r| r.cusp));

        for c in cfg.certify.curve.iter_mut() {
            if c.id == "C2(20)" {
                c.n = 5;
            }
        }
        let out = run_corpus(&cfg).unwrap();
        assert!(out.curves[0].certificate.is_none());
        assert!(!out.all_passed());
        assert!(emit_reproduction_report(&out).contains("none"));
    }
}
