//! Rhombus tilings of planar zonotopes, encoded as sign vectors over the
//! triangles of their dual pseudoline arrangements.

pub mod arrangement;
pub mod error;
mod geometry;
pub mod lemmas;
pub mod proof;
pub mod render;
pub mod space;
pub mod symmetry;
pub mod tiling;

pub use arrangement::{
    default_directions, render_directions, total_tiles, total_triangles, PseudolineRef, TriangleRef, TriangleTable,
    Vec2, ZonotopeSpec,
};
pub use error::{Error, Result};
pub use geometry::{zonotope_area, Rhombus};
pub use tiling::{
    parse_placements, placements_to_string, seed_tiling, signs_from_placements, PolarityTable, Side, Sign,
    TilePlacement, Tiling, Zonotope,
};
