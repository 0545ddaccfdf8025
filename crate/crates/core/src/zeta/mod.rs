//! Truncated partial zeta values at negative integers for `Q` and for `L`
//! at finite abelian levels, the Delta operators, and the integrality test
//! for families of locally constant functions.

mod engine;
mod function;
mod level;

pub use engine::{norm_character, FrobeniusChoice, ZetaEngine, ZetaRoute};
pub use function::{even_orbit_basis, LocallyConstantFn};
pub use level::{LevelData, Side};
