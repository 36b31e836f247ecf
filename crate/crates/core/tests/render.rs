mod common;

use common::{c, scene};
use geomgen_core::data;
use geomgen_core::deduction::{prune, traceback};
use geomgen_core::formal::Statement;
use geomgen_core::generator::{saturate_set, ExDefinitionSet};
use geomgen_core::render::{
    answer_steps, diagram_spec, render_clause, render_diagram, render_question, render_statement, render_text,
    Element, TemplateError, TemplateSet,
};

const MIDLINE: &str = "triangle a b c; midpoint d c b; midpoint e a b; midpoint f a c; circumcenter g d e f";

fn st(s: &str) -> Statement {
    Statement::parse(s).unwrap()
}

#[test]
fn midpoint_clause_and_parallel_question() {
    let t = data::templates();
    let repo = data::repository();
    let inst = repo.clause("midpoint f a c").unwrap();
    assert_eq!(render_clause(&inst, &t).unwrap(), "Let point F be the midpoint of segment AC.");
    assert_eq!(render_question(&st("para f d a b"), &t).unwrap(), "Prove that FD ∥ AB.");
}

#[test]
fn one_sentence_per_step_and_clause() {
    let t = data::templates();
    let repo = data::repository();
    let exd = ExDefinitionSet::parse(&repo, MIDLINE).unwrap();
    let state = saturate_set(&exd, &geomgen_core::deduction::Engine::new(data::rules(), Default::default()), 0).unwrap();
    let goal = st("para d f a b");
    let proof = prune(&traceback(&state, &goal).unwrap(), &state.rules, &state.scene).unwrap();
    assert_eq!(proof.step_count(), 1);
    let text = render_text(&exd, &goal, &answer_steps(&proof), &t).unwrap();
    assert_eq!(text.answer.len(), 1);
    assert_eq!(text.clauses.len(), exd.len());
    assert!(text.answer[0].contains("K_25"), "{}", text.answer[0]);
}

#[test]
fn clauses_never_mention_later_points() {
    let t = data::templates();
    let repo = data::repository();
    let exd = ExDefinitionSet::parse(&repo, MIDLINE).unwrap();
    let text = render_text(&exd, &st("para d f a b"), &[], &t).unwrap();
    for (i, clause) in text.clauses.iter().enumerate() {
        let known: Vec<char> = exd.entries()[..=i]
            .iter()
            .flat_map(|e| e.introduced.iter().map(|p| p.letter().to_ascii_uppercase()))
            .collect();
        // all-caps words are runs of point names
        for w in clause.split(|ch: char| !ch.is_alphanumeric()) {
            if !w.is_empty() && w.chars().all(|ch| ch.is_ascii_uppercase()) {
                assert!(w.chars().all(|ch| known.contains(&ch)), "{clause}: {w}");
            }
        }
    }
}

#[test]
fn rendering_is_a_function_of_the_statement() {
    let t = data::templates();
    for s in ["eqangle a b c d e f g h", "cong a b c d", "simtri a b c d e f", "cyclic a b c d", "eqratio6 a b c d e f"] {
        let s = st(s);
        let again = st(&s.to_string());
        assert_eq!(render_statement(&s, &t).unwrap(), render_statement(&again, &t).unwrap());
    }
}

#[test]
fn template_file_errors() {
    let repo = data::repository();
    let full = data::TEMPLATES_EN;
    let without_para: String = full.lines().filter(|l| !l.starts_with("pred.para ")).collect::<Vec<_>>().join("\n");
    match TemplateSet::parse(&without_para, &repo) {
        Err(TemplateError::Uncovered(names)) => assert_eq!(names, vec!["pred.para".to_string()]),
        other => panic!("{other:?}"),
    }
    let dup = format!("{full}\npred.para = again\n");
    assert!(matches!(TemplateSet::parse(&dup, &repo), Err(TemplateError::Duplicate { .. })));
    let dangling = full.replace("pred.perp = ${0}${1} ⊥ ${2}${3}", "pred.perp = ${0}${1} ⊥ ${2}${4}");
    assert!(matches!(TemplateSet::parse(&dangling, &repo), Err(TemplateError::Dangling { index: 4, .. })));
}

#[test]
fn templates_round_trip() {
    let repo = data::repository();
    let t = data::templates();
    let perp = full_perp();
    assert_eq!(t.by_predicate["perp"], perp);
    let again = TemplateSet::parse(&t.to_text(), &repo).unwrap();
    assert_eq!(again, t);
}

fn full_perp() -> &'static str {
    "${0}${1} ⊥ ${2}${3}"
}

fn attr(node: &roxmltree::Node, name: &str) -> f64 {
    node.attribute(name).unwrap().parse().unwrap()
}

#[test]
fn lone_point_sits_at_canvas_center() {
    let repo = data::repository();
    let exd = ExDefinitionSet::parse(&repo, "free a").unwrap();
    let svg = render_diagram(&exd, &scene(&[("a", c(0.5, 0.5))]));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let dot = doc.descendants().find(|n| n.attribute("class") == Some("point")).unwrap();
    assert_eq!((attr(&dot, "cx"), attr(&dot, "cy")), (200.0, 200.0));
    assert!(doc.descendants().any(|n| n.attribute("class") == Some("label") && n.text() == Some("A")));
}

#[test]
fn midpoint_gets_two_ticks_equidistant_from_it() {
    let repo = data::repository();
    let exd = ExDefinitionSet::parse(&repo, "segment a b; midpoint c a b").unwrap();
    let sc = scene(&[("a", c(0.0, 0.0)), ("b", c(3.0, 1.0)), ("c", c(1.5, 0.5))]);
    let svg = render_diagram(&exd, &sc);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let m = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("point"))
        .map(|n| (attr(&n, "cx"), attr(&n, "cy")))
        .nth(2)
        .unwrap();
    let ticks: Vec<f64> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("tick"))
        .map(|n| {
            let x = (attr(&n, "x1") + attr(&n, "x2")) / 2.0;
            let y = (attr(&n, "y1") + attr(&n, "y2")) / 2.0;
            ((x - m.0).powi(2) + (y - m.1).powi(2)).sqrt()
        })
        .collect();
    assert_eq!(ticks.len(), 2);
    assert!((ticks[0] - ticks[1]).abs() < 0.05, "{ticks:?}");
}

#[test]
fn midline_figure_is_labelled_and_on_canvas() {
    let repo = data::repository();
    let exd = ExDefinitionSet::parse(&repo, MIDLINE).unwrap();
    let engine = geomgen_core::deduction::Engine::new(data::rules(), Default::default());
    let state = saturate_set(&exd, &engine, 0).unwrap();
    let spec = diagram_spec(&exd, &state.scene);
    let mut labels = Vec::new();
    for e in &spec.elements {
        let inside = |p: (f64, f64)| (0.0..=400.0).contains(&p.0) && (0.0..=400.0).contains(&p.1);
        match e {
            Element::Point { name, at, label } => {
                assert!(inside(*at) && inside(*label));
                labels.push((name.upper(), *label));
            }
            Element::Segment { from, to, .. } | Element::Tick { from, to } => assert!(inside(*from) && inside(*to)),
            Element::Circle { center, radius } => {
                assert!(center.0 - radius >= -1e-6 && center.0 + radius <= 400.0 + 1e-6);
                assert!(center.1 - radius >= -1e-6 && center.1 + radius <= 400.0 + 1e-6);
            }
            Element::RightAngle { corner } => assert!(corner.iter().all(|p| inside(*p))),
        }
    }
    let names: Vec<&str> = labels.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["A", "B", "C", "D", "E", "F", "G"]);
    for i in 0..labels.len() {
        for j in 0..i {
            let (a, b) = (labels[i].1, labels[j].1);
            assert!(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() >= 8.0, "{} {}", labels[i].0, labels[j].0);
        }
    }
    let svg = spec.to_svg();
    assert!(roxmltree::Document::parse(&svg).is_ok());
    assert_eq!(svg, render_diagram(&exd, &state.scene));
}
