//! Acceptance suite: one test per criterion, each printing a PASS line
//! once its assertions held. Run with
//! `cargo test -p covol-cli --test acceptance -- --nocapture` to see the
//! lines.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use covol_cli::corpus::{ingest_corpus, ValidatedCorpus};
use covol_core::bounds::{
    brauer_siegel_class_bound, class_number_bound, ideal_count_upper, maximal_chain,
    minimal_chain, odlyzko_check, vigneras_chain, BoundsConfig,
};
use covol_core::covolume::{covolume_floor, covolume_gamma1, enumerate_s_sets};
use covol_core::numfield::{
    class_number_oracle, count_ideals, dedekind_zeta, is_fundamental_discriminant,
};
use covol_core::quatalg::PlaceId;

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/starter.json")
}

fn corpus() -> ValidatedCorpus {
    ingest_corpus(&corpus_path(), true).expect("starter corpus validates")
}

fn pass(n: u32, name: &str) {
    println!("ACCEPTANCE {n} ({name}): PASS");
}

/// Catalan's constant by its alternating series, with the truncation error
/// bounded by the first omitted term.
fn catalan_enclosure() -> (f64, f64) {
    let mut acc = 0.0f64;
    let terms = 200_000u64;
    for k in 0..terms {
        let t = 1.0 / ((2 * k + 1) as f64).powi(2);
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    let err = 1.0 / ((2 * terms + 1) as f64).powi(2) + 1e-12;
    (acc - err, acc + err)
}

#[test]
fn criterion_1_lemma31_suite() {
    let start = Instant::now();
    let corpus = corpus();
    let s = 1.5;
    for (label, field) in &corpus.fields {
        let h = field.h_k() as f64;
        let disc_bound = class_number_bound(field);
        assert!(
            h <= disc_bound,
            "{label}: h_k = {h} exceeds 242 d^(3/4)/1.64^r1 = {disc_bound}"
        );
        let zeta = dedekind_zeta(field, s, 10_000).expect("zeta at 1.5");
        let bs = brauer_siegel_class_bound(field, s, &zeta).expect("s > 1");
        assert!(
            h <= bs.hi,
            "{label}: h_k = {h} exceeds the Brauer-Siegel edge {}",
            bs.hi
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "class-number bound suite took {elapsed:?}, budget 10 s"
    );
    pass(1, "class-number bound suite");
}

#[test]
fn criterion_2_zeta_accuracy() {
    let corpus = corpus();
    let q = &corpus.fields["Q"];
    let z = dedekind_zeta(q, 2.0, 10_000).expect("zeta");
    let basel = std::f64::consts::PI.powi(2) / 6.0;
    assert!(z.contains(basel), "zeta_Q(2) enclosure misses pi^2/6");
    assert!(z.contains(1.6449340668482264));
    assert!(z.width() <= 2e-4, "zeta_Q width {}", z.width());

    let qi = &corpus.fields["Qi"];
    let z = dedekind_zeta(qi, 2.0, 10_000).expect("zeta");
    let (g_lo, g_hi) = catalan_enclosure();
    assert!(
        z.lo <= basel * g_hi && basel * g_lo <= z.hi,
        "zeta_Qi(2) enclosure misses zeta(2) * G"
    );
    assert!(z.contains(1.506703009922985));
    assert!(z.width() <= 4e-4, "zeta_Qi width {}", z.width());
    pass(2, "zeta accuracy");
}

#[test]
fn criterion_3_covolume_instance() {
    let corpus = corpus();
    let alg = &corpus.algebras["Qi-B23"];
    let zeta = dedekind_zeta(alg.field(), 2.0, 10_000).expect("zeta");
    let covol = covolume_gamma1(alg, &zeta);
    // (16/pi^2) * zeta(2) * G.
    let expected = 16.0 / std::f64::consts::PI.powi(2) * 1.506703009922985;
    assert!((expected - 2.44257).abs() < 1e-4);
    assert!(
        covol.value.contains(expected),
        "covolume {} misses {expected}",
        covol.value
    );
    assert!(covol.value.width() <= 1e-3, "width {}", covol.value.width());
    let floor = covolume_floor(alg.field());
    assert!((floor.lo - 0.101321).abs() < 1e-5);
    assert!(
        floor.lo <= covol.value.lo,
        "floor {} above covolume lower endpoint {}",
        floor.lo,
        covol.value.lo
    );
    pass(3, "covolume instance");
}

#[test]
fn criterion_4_ideal_count_vs_bound() {
    let start = Instant::now();
    let corpus = corpus();
    for (label, field) in &corpus.fields {
        for x in [1.0, 10.0, 100.0, 1000.0] {
            let count = count_ideals(field, x).expect("count");
            let bound = ideal_count_upper(field.degree(), x);
            assert!(
                (count as f64) <= bound,
                "{label} at X = {x}: {count} > {bound}"
            );
        }
    }
    let qi = &corpus.fields["Qi"];
    assert_eq!(count_ideals(qi, 5.0).unwrap(), 5, "Gaussian count at X = 5");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "ideal counting took {elapsed:?}, budget 30 s"
    );
    pass(4, "ideal counts vs bound");
}

#[test]
fn criterion_5_s_enumeration_instance() {
    let corpus = corpus();
    let alg = &corpus.algebras["Qi-B23"];
    let en = enumerate_s_sets(alg, 10.0, 100).expect("enumeration");
    assert_eq!(en.count, 3);
    assert_eq!(en.sets.len(), 3);
    assert!(en.sets[0].primes.is_empty());
    let mut singleton_places: Vec<PlaceId> = en.sets[1..]
        .iter()
        .map(|s| {
            assert_eq!(s.primes.len(), 1);
            s.primes[0].place
        })
        .collect();
    singleton_places.sort();
    assert_eq!(
        singleton_places,
        vec![PlaceId { p: 5, index: 0 }, PlaceId { p: 5, index: 1 }],
        "the two primes above 5"
    );

    // Maximal-lattice chain at the V giving X = 10.
    let volume = (10.0f64 * 4.0f64.powf(3.0 / 22.0)).powf(1.0 / 3.0);
    assert!((volume - 2.2946).abs() < 1e-3);
    let zeta = dedekind_zeta(alg.field(), 2.0, 10_000).expect("zeta");
    let report = maximal_chain(alg, &zeta, volume, &BoundsConfig::default()).expect("chain");
    let k1 = report
        .links
        .iter()
        .find(|l| l.name.starts_with("K1"))
        .expect("K1 link");
    assert!(k1.holds && k1.flag.is_none());
    assert_eq!(k1.lhs, 3.0);
    assert!((k1.rhs - 270.5808).abs() < 0.01);
    let ratio = k1.lhs / k1.rhs;
    assert!(ratio <= 0.0111, "K1 ratio {ratio}");
    pass(5, "S-enumeration instance");
}

#[test]
fn criterion_6_odlyzko_diagnostic() {
    let corpus = corpus();
    let config = BoundsConfig::default();
    let qi = odlyzko_check(&corpus.fields["Qi"], &config);
    assert!(
        (qi.minimal_c - 4.83019).abs() <= 1e-4,
        "minimal_C(Qi) = {}",
        qi.minimal_c
    );
    assert!(!qi.holds, "Qi must be flagged as failing at C = 4.5");
    let qr5 = odlyzko_check(&corpus.fields["Qr5"], &config);
    assert!(
        (qr5.minimal_c - 6.60707).abs() <= 1e-4,
        "minimal_C(Qr5) = {}",
        qr5.minimal_c
    );
    assert!(!qr5.holds, "Qr5 must be flagged as failing at C = 4.5");

    // The report states the minimal valid C over the whole corpus.
    let out = Command::new(env!("CARGO_BIN_EXE_covol"))
        .args([
            "bounds",
            "odlyzko",
            "--corpus",
            corpus_path().to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let minimal_valid = report["details"]["minimal_valid_c_over_corpus"]
        .as_f64()
        .expect("stated minimal valid C");
    let expected: f64 = corpus
        .fields
        .values()
        .map(|f| odlyzko_check(f, &config).minimal_c)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((minimal_valid - expected).abs() < 1e-6);
    let failing: Vec<&str> = report["details"]["fields_failing_at_configured_c"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(failing.contains(&"Qi") && failing.contains(&"Qr5"));
    pass(6, "Odlyzko diagnostic");
}

#[test]
fn criterion_7_chain_integrity() {
    let corpus = corpus();
    let config = BoundsConfig::default();
    for (label, alg) in &corpus.algebras {
        let zeta = dedekind_zeta(alg.field(), 2.0, 10_000).expect("zeta");
        let volume = covolume_gamma1(alg, &zeta).value.hi;
        for report in [
            vigneras_chain(alg, volume, &config).expect("vigneras"),
            minimal_chain(alg, &zeta, volume, &config).expect("minimal"),
        ] {
            for link in &report.links {
                assert_eq!(
                    link.holds,
                    link.recheck(),
                    "{label}: recomputing {} from its emitted numbers changed the flag",
                    link.name
                );
                assert!(
                    link.flag.is_some() || link.holds,
                    "{label}: in-range link failed: {} ({} {} {})",
                    link.name,
                    link.lhs,
                    link.relation.symbol(),
                    link.rhs
                );
            }
        }
    }
    // The quoted instance numbers for the Gaussian algebra.
    let alg = &corpus.algebras["Qi-B23"];
    let zeta = dedekind_zeta(alg.field(), 2.0, 10_000).unwrap();
    let volume = covolume_gamma1(alg, &zeta).value.hi;
    assert!((volume - 2.4426).abs() < 1e-3);
    let report = minimal_chain(alg, &zeta, volume, &config).unwrap();
    let m3 = report.links.iter().find(|l| l.name.starts_with("M3")).unwrap();
    assert_eq!(m3.lhs, 2.0);
    assert!((m3.rhs - 2.679).abs() < 0.01);
    assert!(m3.holds);
    let m6 = report.links.iter().find(|l| l.name.starts_with("M6")).unwrap();
    assert!((m6.lhs - 684.48).abs() < 0.1);
    assert!(m6.rhs > 2.0e9 && m6.rhs < 2.5e9);
    assert!(m6.holds);
    pass(7, "chain integrity");
}

#[test]
fn criterion_8_oracle_agreement() {
    let start = Instant::now();
    let corpus = corpus();
    let mut checked = 0;
    for (label, field) in &corpus.fields {
        if field.is_imaginary_quadratic() {
            let h = class_number_oracle(field.signed_discriminant()).expect("oracle");
            assert_eq!(h, field.h_k(), "{label}");
            checked += 1;
        }
    }
    assert!(checked >= 9, "expected the nine imaginary quadratic entries");

    // Brute-force recount over all fundamental -d with d <= 500.
    for d in (-500..0).filter(|d| is_fundamental_discriminant(*d)) {
        assert_eq!(
            class_number_oracle(d).unwrap(),
            recount_reduced_forms(d),
            "d = {d}"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "oracle agreement took {elapsed:?}, budget 5 s"
    );
    pass(8, "oracle agreement");
}

/// Direct (a, b) sweep over reduced forms, independent of the divisor
/// enumeration inside the oracle.
fn recount_reduced_forms(d: i64) -> u64 {
    let abs_d = (-d) as u64;
    let mut count = 0;
    let a_max = ((abs_d as f64) / 3.0).sqrt() as i64 + 1;
    for a in 1..=a_max {
        for b in -a..=a {
            let num = b * b + abs_d as i64;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a {
                    let boundary = b.unsigned_abs() as i64 == a || c == a;
                    if !boundary || b >= 0 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn criterion_9_cli_determinism() {
    let corpus = corpus_path();
    let corpus = corpus.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["corpus", "verify", "--corpus", corpus],
        vec!["field", "info", "--corpus", corpus, "--label", "Qm23"],
        vec!["field", "zeta", "--corpus", corpus, "--label", "Qi"],
        vec![
            "ideals", "count", "--corpus", corpus, "--label", "C23", "--max-norm", "200",
        ],
        vec![
            "algebra", "covolume", "--corpus", corpus, "--algebra", "Qi-B23",
        ],
        vec![
            "algebra", "typebound", "--corpus", corpus, "--algebra", "Qr5-D",
        ],
        vec!["bounds", "lemma31", "--corpus", corpus],
        vec!["bounds", "odlyzko", "--corpus", corpus],
        vec!["bounds", "vigneras", "--corpus", corpus],
        vec![
            "bounds", "minimal", "--corpus", corpus, "--algebra", "Qi-B23", "--volume", "2.4426",
        ],
        vec![
            "bounds", "maximal", "--corpus", corpus, "--algebra", "Qi-B23", "--volume", "2.2946",
        ],
    ];
    for args in &invocations {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_covol"))
                .args(args)
                .arg("--format")
                .arg("json")
                .output()
                .expect("binary runs")
        };
        let first = run();
        let second = run();
        assert!(
            first.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        assert_eq!(
            first.stdout, second.stdout,
            "{args:?} produced differing bytes"
        );
        // Valid JSON as well as identical.
        serde_json::from_slice::<serde_json::Value>(&first.stdout).expect("json output");
    }
    pass(9, "CLI determinism");
}
