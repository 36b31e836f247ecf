//! Coordinate models: construction recipes, scenes and numeric predicate
//! evaluation.

pub mod check;
pub mod geom;
pub mod recipe;
pub mod scene;

pub use check::{check_coords, check_with, DEFAULT_TOLERANCE, GUARD_MARGIN};
pub use geom::{Circle, Coord, Line};
pub use recipe::{CircleTerm, ConstructionRecipe, LineTerm, RecipeArg, RecipeError, RecipeKind};
pub use scene::{mix_seed, NumericScene, SceneError, SceneOptions};

use crate::formal::Statement;

/// Evaluates `stmt` in `scene` at the scene's tolerance.
pub fn check_numeric(stmt: &Statement, scene: &NumericScene) -> bool {
    scene.check(stmt)
}
