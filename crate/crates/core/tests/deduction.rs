mod common;

use std::collections::BTreeSet;

use common::{c, scene};
use geomgen_core::data;
use geomgen_core::deduction::{
    enumerate_conclusions, prune, traceback, ArState, DerivationKind, Engine, Limits, Origin, ProofDag, ProofError,
    ProofState, Subsystem,
};
use geomgen_core::formal::Statement;
use geomgen_core::generator::{sample_set, saturate_set};
use geomgen_core::numeric::NumericScene;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn st(s: &str) -> Statement {
    Statement::parse(s).unwrap().canonical()
}

fn engine() -> Engine {
    Engine::new(data::rules(), Limits::default())
}

fn saturate(premises: &[&str], scene: &NumericScene) -> ProofState {
    let p: Vec<Statement> = premises.iter().map(|s| st(s)).collect();
    engine().saturate(&p, scene).unwrap()
}

fn rule_ids(state: &ProofState, s: &Statement) -> Vec<String> {
    let f = state.fact(state.lookup(s).expect("fact present"));
    f.derivations
        .iter()
        .map(|d| match &d.kind {
            DerivationKind::Rule { rule, .. } => state.rules[*rule].id.clone(),
            DerivationKind::Algebraic(_) => "AR".into(),
        })
        .collect()
}

// ab horizontal, cd vertical, ef horizontal again
fn perp_perp_scene() -> NumericScene {
    scene(&[
        ("a", c(0.0, 0.0)),
        ("b", c(1.0, 0.0)),
        ("c", c(0.3, -1.0)),
        ("d", c(0.3, 2.0)),
        ("e", c(2.0, 1.0)),
        ("f", c(3.5, 1.0)),
    ])
}

fn triangle_scene() -> NumericScene {
    let (a, b, cc) = (c(0.0, 0.0), c(4.0, 0.0), c(1.0, 3.0));
    scene(&[
        ("a", a),
        ("b", b),
        ("c", cc),
        ("d", c((b.x + cc.x) / 2.0, (b.y + cc.y) / 2.0)),
        ("e", c((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)),
        ("f", c((a.x + cc.x) / 2.0, (a.y + cc.y) / 2.0)),
    ])
}

#[test]
fn two_perpendiculars_give_parallel() {
    let state = saturate(&["perp a b c d", "perp c d e f"], &perp_perp_scene());
    assert!(state.contains(&st("para a b e f")));
    assert!(enumerate_conclusions(&state).contains(&st("para a b e f")));
}

#[test]
fn midline_is_parallel_to_third_side() {
    let state = saturate(&["midp f a c", "midp d c b"], &triangle_scene());
    let para = st("para f d a b");
    assert!(state.contains(&para));
    assert!(rule_ids(&state, &para).contains(&"K_25".to_string()));
}

#[test]
fn parallel_transitivity_is_algebraic() {
    let state = saturate(&["para a b c d", "para c d e f"], &scene(&[
        ("a", c(0.0, 0.0)),
        ("b", c(2.0, 1.0)),
        ("c", c(0.0, 3.0)),
        ("d", c(4.0, 5.0)),
        ("e", c(1.0, -2.0)),
        ("f", c(3.0, -1.0)),
    ]));
    assert!(rule_ids(&state, &st("para a b e f")).contains(&"AR".to_string()));
}

#[test]
fn algebraic_queries_and_certificates() {
    let sc = perp_perp_scene();
    let one = [st("perp a b c d")];
    let cert = ArState::from_facts(&sc, one.iter()).query(&st("perp c d a b")).unwrap();
    assert_eq!(cert.facts, vec![0]);

    let two = [st("perp a b c d"), st("perp c d e f")];
    let cert = ArState::from_facts(&sc, two.iter()).query(&st("para a b e f")).unwrap();
    assert_eq!(cert.subsystem, Subsystem::Angle);
    assert_eq!(cert.facts.iter().copied().collect::<BTreeSet<_>>(), BTreeSet::from([0, 1]));
    assert!(ArState::from_facts(&sc, one.iter()).query(&st("para a b e f")).is_none());

    let cong = [st("cong a b c d")];
    assert!(ArState::from_facts(&sc, cong.iter()).query(&st("eqratio a b c d a b c d")).is_some());
}

#[test]
fn nothing_derived_means_no_conclusions() {
    let state = engine().start(&[], &perp_perp_scene());
    assert!(enumerate_conclusions(&state).is_empty());
}

#[test]
fn premise_has_no_traceback() {
    let state = saturate(&["perp a b c d", "perp c d e f"], &perp_perp_scene());
    assert_eq!(
        traceback(&state, &st("perp a b c d")).unwrap_err(),
        ProofError::NotDerived(st("perp a b c d").to_string())
    );
}

#[test]
fn pruning_drops_a_dangling_lemma_only() {
    let state = saturate(&["midp f a c", "midp d c b", "midp e a b"], &triangle_scene());
    let goal = traceback(&state, &st("para f d a b")).unwrap();
    let lemma = traceback(&state, &st("para e f b c")).unwrap();
    assert!(lemma.steps.iter().all(|s| !goal.steps.contains(s)));

    let minimal = prune(&goal, &state.rules, &state.scene).unwrap();
    assert_eq!(minimal.steps, goal.steps);

    let mut leaves = lemma.leaves.clone();
    leaves.extend(goal.leaves.iter().cloned());
    let padded = ProofDag {
        conclusion: goal.conclusion.clone(),
        leaves,
        steps: lemma.steps.iter().chain(&goal.steps).cloned().collect(),
    };
    let pruned = prune(&padded, &state.rules, &state.scene).unwrap();
    assert_eq!(pruned.step_count(), padded.steps.len() - lemma.steps.len());
    assert_eq!(pruned.steps, minimal.steps);
}

fn random_state(seed: u64) -> Option<ProofState> {
    let repo = data::repository();
    let exd = sample_set(&repo, 2, &mut ChaCha8Rng::seed_from_u64(seed));
    saturate_set(&exd, &engine(), 0).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derived_facts_hold_and_certificates_replay(seed in any::<u64>()) {
        let Some(state) = random_state(seed) else { return Ok(()) };
        for f in state.facts() {
            prop_assert!(state.scene.check_tol(&f.statement, 1e-9), "{}", f.statement);
            if f.origin == Origin::Premise {
                prop_assert!(f.derivations.is_empty());
            }
            for d in &f.derivations {
                if let DerivationKind::Algebraic(_) = d.kind {
                    let ante: Vec<Statement> =
                        d.antecedents.iter().map(|&a| state.fact(a).statement.clone()).collect();
                    let ar = ArState::from_facts(&state.scene, ante.iter());
                    prop_assert!(ar.query(&f.statement).is_some(), "{} from {:?}", f.statement, ante);
                }
            }
        }
    }

    #[test]
    fn saturation_is_deterministic(seed in any::<u64>()) {
        let facts = |s: Option<ProofState>| s.map(|s| s.statements().map(|x| x.to_string()).collect::<Vec<_>>());
        prop_assert_eq!(facts(random_state(seed)), facts(random_state(seed)));
    }

    #[test]
    fn extra_premise_keeps_every_fact(seed in any::<u64>()) {
        let repo = data::repository();
        let exd = sample_set(&repo, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let Ok(base) = saturate_set(&exd, &engine(), 0) else { return Ok(()) };
        // any fact that holds in the scene will do as the extra premise
        let Some(extra) = enumerate_conclusions(&base).into_iter().last() else { return Ok(()) };
        let mut premises = exd.premises();
        premises.push(extra);
        let Ok(more) = engine().saturate(&premises, &base.scene) else { return Ok(()) };
        for s in base.statements() {
            prop_assert!(more.contains(s), "{} lost", s);
        }
    }
}
