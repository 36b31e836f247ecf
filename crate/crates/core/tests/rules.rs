mod common;

use std::time::Instant;

use geomgen_core::data;
use geomgen_core::deduction::{DerivationKind, Engine, Limits};
use geomgen_core::formal::Statement;

use common::{fixtures, scene};

/// Runs one rule round on its fixture. Returns an error line on failure.
fn fires(n: usize) -> Result<(), String> {
    let rules = data::rules();
    let rule = &rules[n - 1];
    assert_eq!(rule.id, format!("K_{n}"));
    let sc = scene(&fixtures::fixture(n));
    for s in rule.premises.iter().chain([&rule.conclusion]) {
        if !sc.check(s) {
            return Err(format!("{}: fixture fails `{s}`", rule.id));
        }
    }
    let premises: Vec<Statement> =
        rule.premises.iter().filter(|s| !s.predicate.is_numeric_guard()).cloned().collect();
    let engine = Engine::new(rules.clone(), Limits::default());
    let mut state = engine.start(&premises, &sc);
    engine.dd_round(&mut state);
    let id = state
        .lookup(&rule.conclusion.canonical())
        .ok_or_else(|| format!("{}: `{}` not derived", rule.id, rule.conclusion))?;
    let by_rule = state.fact(id).derivations.iter().any(|d| matches!(d.kind, DerivationKind::Rule { rule, .. } if rule == n - 1));
    if by_rule {
        Ok(())
    } else {
        Err(format!("{}: `{}` derived, but not by this rule", rule.id, rule.conclusion))
    }
}

#[test]
fn every_rule_fires_on_its_fixture() {
    let t = Instant::now();
    let failures: Vec<String> = (1..=43).filter_map(|n| fires(n).err()).collect();
    eprintln!("43 rules in {:?}", t.elapsed());
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
#[ignore]
fn debug_rule() {
    let n: usize = std::env::var("RULE").unwrap().parse().unwrap();
    let rules = data::rules();
    let rule = &rules[n - 1];
    let sc = scene(&fixtures::fixture(n));
    let premises: Vec<Statement> =
        rule.premises.iter().filter(|s| !s.predicate.is_numeric_guard()).cloned().collect();
    let counts = std::rc::Rc::new(std::cell::RefCell::new(Vec::new()));
    let engine = Engine::new(rules.clone(), Limits::default()).with_counts(counts.clone());
    let mut state = engine.start(&premises, &sc);
    for f in state.facts() {
        eprintln!("premise {}", f.statement);
    }
    engine.dd_round(&mut state);
    eprintln!("matches {:?}", counts.borrow().get(n - 1));
    for f in state.facts() {
        eprintln!("fact {} {:?}", f.statement, f.derivations.iter().map(|d| &d.kind).collect::<Vec<_>>());
    }
}
