//! Prose and SVG output for generated problems.

pub mod diagram;
pub mod templates;
pub mod text;

pub use diagram::{diagram_spec, render_diagram, DiagramSpec, Element};
pub use templates::{fill, TemplateError, TemplateSet};
pub use text::{
    answer_steps, render_clause, render_problem, render_question, render_statement, render_step, render_text,
    AnswerStep, TextualProblem,
};
