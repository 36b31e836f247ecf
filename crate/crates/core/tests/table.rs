use geomgen_core::data;
use geomgen_core::generator::ExDefinitionSet;
use geomgen_core::table::{build_table, reverify, MappingTable, TableBuildConfig, TableError};

fn config(iterations: usize) -> TableBuildConfig {
    TableBuildConfig { iterations, n_max: 2, seed: 9, ..Default::default() }
}

#[test]
fn zero_iterations_rejected() {
    let err = build_table(&data::repository(), &data::rules(), config(0)).unwrap_err();
    assert_eq!(err, TableError::ZeroIterations);
    let bad = TableBuildConfig { n_max: 0, ..config(1) };
    assert!(matches!(build_table(&data::repository(), &data::rules(), bad), Err(TableError::BadNMax { .. })));
}

#[test]
fn singleton_entry_is_always_drawn() {
    let repo = data::repository();
    let mut t = MappingTable::new(config(1));
    let s = ExDefinitionSet::parse(&repo, "triangle a b c; midpoint d a b; midpoint e a c").unwrap();
    t.insert("K_25", s.clone());
    for seed in 0..20 {
        assert_eq!(t.sample("K_25", seed).unwrap(), &s);
    }
    assert_eq!(t.sample("K_99", 0).unwrap_err(), TableError::UnknownKP("K_99".into()));
}

#[test]
fn duplicate_sets_are_stored_once() {
    let repo = data::repository();
    let mut t = MappingTable::new(config(1));
    let s = ExDefinitionSet::parse(&repo, "segment a b; midpoint c a b").unwrap();
    let renamed = ExDefinitionSet::parse(&repo, "segment x y; midpoint z x y").unwrap();
    assert!(t.insert("K_8", s));
    assert!(!t.insert("K_8", renamed));
    assert_eq!(t.len(), 1);
}

#[test]
fn draws_are_uniform() {
    let repo = data::repository();
    let mut t = MappingTable::new(config(1));
    let sets = [
        "segment a b; midpoint c a b",
        "triangle a b c; midpoint d a b",
        "triangle a b c; circumcenter d a b c",
        "triangle a b c; orthocenter d a b c",
    ];
    for s in sets {
        t.insert("K_1", ExDefinitionSet::parse(&repo, s).unwrap());
    }
    let mut counts = [0usize; 4];
    let n = 10_000;
    for seed in 0..n {
        let got = t.sample("K_1", seed as u64).unwrap().to_string();
        let i = t.get("K_1").unwrap().iter().position(|s| s.to_string() == got).unwrap();
        counts[i] += 1;
    }
    // chi-square with 3 degrees of freedom; 16.27 is the 0.1% critical value
    let expected = n as f64 / 4.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 16.27, "{counts:?} chi2 {chi2}");
}

#[test]
fn builds_are_deterministic_and_grow_with_iterations() {
    let repo = data::repository();
    let rules = data::rules();
    let a = build_table(&repo, &rules, config(15)).unwrap();
    let b = build_table(&repo, &rules, config(15)).unwrap();
    assert_eq!(a, b);
    let c = build_table(&repo, &rules, config(30)).unwrap();
    for (kp, n) in a.counts() {
        assert!(c.counts()[&kp] >= n, "{kp}");
    }
}

#[test]
fn stored_sets_reverify() {
    let repo = data::repository();
    let rules = data::rules();
    let t = build_table(&repo, &rules, config(15)).unwrap();
    assert!(!t.is_empty());
    for (kp, exd) in t.iter().step_by(7) {
        assert!(reverify(exd, kp, &rules, t.config.limits), "{kp}: {exd}");
    }
}
