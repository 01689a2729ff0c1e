use std::process::Command;
use std::sync::Arc;

use fieldrec::report::campaign_challenges;
use fieldrec::{generate_challenge, run_campaign, run_challenge, CampaignConfig, Challenge, EngineSettings, Family};
use fieldrec_core::polyfield::{FieldDescriptor, RationalFunction};
use fieldrec_core::reconstruct::{class_representative, reconstruct_isomorphism, sample_element, EngineConfig, Oracle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fieldrec"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fieldrec-harness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn linear_challenge_is_affine_and_invertible() {
    let q = FieldDescriptor::rationals(2);
    let ch = generate_challenge(1, Family::Linear, &q).unwrap();
    let (map, inv) = (ch.hidden_morphism().unwrap(), ch.hidden_inverse_morphism().unwrap());
    for im in map.images().iter().chain(inv.images()) {
        assert!(im.is_polynomial() && im.degree() == 1, "{im}");
    }
    // Independent inverse check: substitute by hand at random points.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x = sample_element(&q, &mut rng);
        assert_eq!(x.compose(map.images()).unwrap().compose(inv.images()).unwrap(), x);
    }
    assert!(!map.is_identity());
}

#[test]
fn monomial_challenge_has_unimodular_exponents() {
    let f3 = FieldDescriptor::prime(3, 2);
    let ch = generate_challenge(2, Family::Monomial, &f3).unwrap();
    let map = ch.hidden_morphism().unwrap();
    let mut rows = Vec::new();
    for im in map.images() {
        let (n, d) = (im.numerator(), im.denominator());
        let terms: Vec<_> = n.terms().chain(d.terms()).collect();
        assert_eq!(terms.len(), 2, "{im} is not a monomial");
        let ne: Vec<i64> = n.terms().next().unwrap().0.iter().map(|&e| e as i64).collect();
        let de: Vec<i64> = d.terms().next().unwrap().0.iter().map(|&e| e as i64).collect();
        rows.push([ne[0] - de[0], ne[1] - de[1]]);
    }
    let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    assert!(det == 1 || det == -1, "{rows:?}");
    assert!(map.is_inverse_of(&ch.hidden_inverse_morphism().unwrap()).unwrap());
}

#[test]
fn de_jonquieres_challenge_is_triangular() {
    let q = FieldDescriptor::rationals(2);
    let ch = generate_challenge(3, Family::DeJonquieres, &q).unwrap();
    assert_eq!(ch.hidden_map[0], "t1");
    assert_eq!(ch.hidden_inverse[0], "t1");
    let map = ch.hidden_morphism().unwrap();
    let t2 = RationalFunction::var(&q, 1);
    // The image of t2 is a·t2 + q(t1): its t2-derivative is a nonzero constant.
    let a = map.images()[1].partial(1);
    assert!(a.is_constant() && !a.is_zero());
    let q_part = map.images()[1].sub(&t2.mul(&a));
    assert_eq!(q_part.partial(1), RationalFunction::zero(&q));
    let inv = ch.hidden_inverse_morphism().unwrap();
    assert_eq!(inv.images()[1], t2.sub(&q_part).div(&a).unwrap());
}

#[test]
fn composite_challenges_respect_the_degree_bound() {
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(3, 2)] {
        for seed in 0..6 {
            let ch = generate_challenge(seed, Family::Composite, &d).unwrap();
            let m = ch.hidden_morphism().unwrap();
            assert!(m.images().iter().all(|f| f.degree() <= 8));
            assert!(m.is_inverse_of(&ch.hidden_inverse_morphism().unwrap()).unwrap());
        }
    }
}

#[test]
fn challenges_are_reproducible_and_serializable() {
    let d = FieldDescriptor::prime(3, 2);
    for fam in Family::ALL {
        let a = generate_challenge(17, fam, &d).unwrap();
        assert_eq!(a, generate_challenge(17, fam, &d).unwrap());
        let back: Challenge = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }
    assert_ne!(generate_challenge(1, Family::Linear, &d).unwrap(), generate_challenge(2, Family::Linear, &d).unwrap());
}

#[test]
fn round_trip_through_inverse_oracle() {
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(3, 2)] {
        for (i, fam) in Family::ALL.into_iter().enumerate() {
            let ch = generate_challenge(100 + i as u64, fam, &d).unwrap();
            let rec = reconstruct_isomorphism(&ch.oracle().unwrap(), &EngineConfig::default()).unwrap();
            let inv = ch.inverse_oracle().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            for _ in 0..500 {
                let x = sample_element(&d, &mut rng);
                let y = rec.morphism.apply(&x).unwrap().pow(rec.sign).unwrap();
                let back = inv.query_rep(&y).unwrap();
                assert_eq!(class_representative(&back).unwrap(), class_representative(&x).unwrap(), "{} at {x}", ch.id);
            }
        }
    }
}

fn small_config(corrupt: bool) -> CampaignConfig {
    CampaignConfig {
        seed: 21,
        fields: vec!["Q(t1,t2)".into(), "F3(t1,t2)".into()],
        families: Family::ALL.to_vec(),
        count: 4,
        corrupt,
        engine: EngineSettings::default(),
    }
}

#[test]
fn campaigns_are_deterministic() {
    let cfg = small_config(false);
    let a = run_campaign(&cfg).unwrap();
    let b = run_campaign(&cfg).unwrap();
    assert_eq!(a.reports.len(), 8);
    assert!(a.passed());
    assert_eq!(a.summary.successes, 8);
    let ja: Vec<String> = a.reports.iter().map(|r| r.canonical_json()).collect();
    let jb: Vec<String> = b.reports.iter().map(|r| r.canonical_json()).collect();
    assert_eq!(ja, jb);
    assert!(a.reports.iter().all(|r| r.timings_ms.contains_key("total")));
}

#[test]
fn corrupted_campaign_has_no_false_successes() {
    let cfg = small_config(true);
    let report = run_campaign(&cfg).unwrap();
    assert_eq!(report.summary.false_successes, 0);
    assert_eq!(report.summary.diagnosed_failures, report.reports.len());
    assert!(report.passed());
    let chs = campaign_challenges(&cfg).unwrap();
    assert!(chs.iter().all(|c| c.corrupt_class.is_some()));
}

#[test]
fn recovered_sign_follows_the_oracle() {
    let q = Arc::new("Q(t1,t2)".parse::<FieldDescriptor>().unwrap());
    let mut ch = generate_challenge(5, Family::Linear, &q).unwrap();
    let good = run_challenge(&ch, &EngineSettings::default());
    assert!(good.success);
    ch.hidden_sign = -ch.hidden_sign;
    let flipped = run_challenge(&ch, &EngineSettings::default());
    assert!(flipped.success, "{:?}", flipped.failure);
    assert_eq!(flipped.recovered_map, good.recovered_map);
    assert_ne!(flipped.sign, good.sign);
}

#[test]
fn cli_exit_codes() {
    let out = exe().args(["density", "--p", "2", "--r", "2", "--d", "4", "--table"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p\tr\td\texact"));
    assert!(text.contains("2\t2\t4\t3/5\t"));

    let ch = tmp("ch.json");
    let rep = tmp("rep.json");
    let st = exe().args(["challenge", "--seed", "8", "--family", "composite", "--field", "F3(t1,t2)", "--out"]).arg(&ch).status();
    assert!(st.unwrap().success());
    let st = exe().arg("reconstruct").arg("--in").arg(&ch).arg("--out").arg(&rep).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["success"], true);

    let bad = tmp("bad.json");
    let st = exe().args(["challenge", "--seed", "8", "--family", "linear", "--corrupt", "--out"]).arg(&bad).status();
    assert!(st.unwrap().success());
    let st = exe().arg("reconstruct").arg("--in").arg(&bad).status().unwrap();
    assert_eq!(st.code(), Some(1));

    let st = exe().args(["depend", "t1", "t1^2+1", "--field", "F4(t1,t2)"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let out = exe().args(["depend", "t1^2", "t1^3+t1"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("dependent"));
    let out = exe().args(["residue", "--symbol", "<t1, t2>", "--center", "t1"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "<t2>");
    let st = exe().args(["residue", "--symbol", "<t1, t2>", "--center", "t1^2-t2^2"]).status().unwrap();
    assert_eq!(st.code(), Some(2));

    let cfg = tmp("cfg.json");
    std::fs::write(&cfg, serde_json::to_string(&small_config(false)).unwrap()).unwrap();
    let st = exe().arg("campaign").arg("--config").arg(&cfg).arg("--out").arg(tmp("camp.json")).status().unwrap();
    assert_eq!(st.code(), Some(0));
}
