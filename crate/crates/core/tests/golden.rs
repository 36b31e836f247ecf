use std::time::Instant;

use geomgen_core::data;
use geomgen_core::deduction::{enumerate_conclusions, prune, traceback, Engine, Limits};
use geomgen_core::formal::{premises, Statement};
use geomgen_core::numeric::{NumericScene, SceneOptions};

fn run(construction: &str, goal: &str) -> (usize, Vec<String>) {
    let repo = data::repository();
    let inst = repo.construction(construction).unwrap();
    let scene = NumericScene::build(&inst, 7, SceneOptions::default()).unwrap();
    let engine = Engine::new(data::rules(), Limits::default());
    let t = Instant::now();
    let state = engine.saturate(&premises(&inst), &scene).unwrap();
    eprintln!("facts {} rounds {} in {:?}", state.len(), state.rounds(), t.elapsed());
    let mut state = state;
    let goal = Statement::parse(goal).unwrap();
    state.admit(&goal).expect("goal holds");
    let dag = traceback(&state, &goal).unwrap();
    let path = prune(&dag, &state.rules, &state.scene).unwrap();
    for s in &path.steps {
        eprintln!("{} {:?} <- {:?}", s.derived, s.kind.label(), s.antecedents.iter().map(|a| a.to_string()).collect::<Vec<_>>());
    }
    eprintln!("{} conclusions", enumerate_conclusions(&state).len());
    (path.step_count(), path.steps.iter().map(|s| s.derived.to_string()).collect())
}

#[test]
fn midline_example() {
    let (n, _) = run(
        "triangle a b c; midpoint d c b; midpoint e a b; midpoint f a c; circumcenter g d e f",
        "eqangle d g a b a b f g",
    );
    assert_eq!(n, 3);
}

#[test]
fn circle_intersection_example() {
    let (n, _) = run(
        "segment a b; midpoint c b a; mirror d c b; intersection_cc2 e c a b c; intersection_lt f a e b a b; intersection_ll g b f d e",
        "eqangle a e b f d e c g",
    );
    assert!(n <= 8, "{n} steps");
}

#[test]
#[ignore]
fn debug_ex1() {
    let repo = data::repository();
    let inst = repo.construction("segment a b; midpoint c b a; mirror d c b; intersection_cc2 e c a b c; intersection_lt f a e b a b; intersection_ll g b f d e").unwrap();
    let scene = NumericScene::build(&inst, 7, SceneOptions::default()).unwrap();
    let engine = Engine::new(data::rules(), Limits::default());
    let state = engine.saturate(&premises(&inst), &scene).unwrap();
    let (cost, _) = geomgen_core::deduction::costs(&state);
    for q in ["perp a e b e", "circle c a b e", "cyclic a b e d"] {
        let s = Statement::parse(q).unwrap().canonical();
        match state.lookup(&s) {
            Some(id) => eprintln!("{q}: cost {} derivs {:?}", cost[id as usize], state.fact(id).derivations),
            None => eprintln!("{q}: absent"),
        }
    }
}
