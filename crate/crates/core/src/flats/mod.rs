//! Finite windows of triangle-square flats with exact coordinates.

mod analysis;
mod generate;
mod probes;
mod project;
mod torus;

use std::collections::{BTreeMap, HashMap};

pub use analysis::{
    classify, coloring, region_is_convex, regions, vertex_type, Classification, Color, Coloring, FlatClass, Region,
    RegionDecomp, VertexType, THOROUGH_BOUND,
};
pub use probes::{
    ft_probe, move_descriptor, next_move_locality_check, noncrossing_check, rough_linearity_check, rough_linearity_sweep, sample_pair, FtRow,
    LinearityReport, LocalityReport, NoncrossingReport,
};
pub use project::{
    embed, interval_image_check, isom_embed_check, project, quasi_flat, EmbedReport, IntervalImageReport, Keep,
    QuasiFlatReport,
};
pub use torus::{develop_torus, lattice_coords, snub_torus, TorusBuilder};

use serde::{Deserialize, Serialize};

use crate::complex::{CellKind, ComplexData, TsComplex, VertexId};
use crate::error::Result;
use crate::exact::Point;

pub use generate::{
    gen_eisenstein, gen_gaussian, gen_radial_y, gen_regions, gen_striped, radial_y_probe_points, HalfPlane, RegionSpec,
    Window,
};

/// A finite piece of a flat. `margin` is the combinatorial distance to the
/// window boundary (vertices whose link is not a full circle).
#[derive(Clone, Debug)]
pub struct FlatWindow {
    pub complex: TsComplex,
    pub coords: BTreeMap<VertexId, Point>,
    pub margin: BTreeMap<VertexId, u32>,
    pub window: Window,
    /// Generators of a translation action, when the flat is periodic.
    pub translations: Option<[Point; 2]>,
    /// How the window was made, when it came from a preset.
    pub recipe: Option<Recipe>,
    at: HashMap<Point, VertexId>,
}

impl FlatWindow {
    pub fn new(
        complex: TsComplex,
        coords: BTreeMap<VertexId, Point>,
        window: Window,
        translations: Option<[Point; 2]>,
    ) -> Self {
        let at = coords.iter().map(|(&v, &p)| (p, v)).collect();
        let margin = generate::margins(&complex);
        FlatWindow { complex, coords, margin, window, translations, recipe: None, at }
    }

    /// Re-checks the geometry of a window that did not come from a generator.
    pub fn verify(&self) -> Result<()> {
        generate::verify_geometry(&self.complex, &self.coords, self.window)
    }

    pub fn coord(&self, v: VertexId) -> Point {
        self.coords[&v]
    }

    pub fn vertex_at(&self, p: Point) -> Option<VertexId> {
        self.at.get(&p).copied()
    }

    pub fn margin(&self, v: VertexId) -> u32 {
        self.margin[&v]
    }

    pub fn max_margin(&self) -> u32 {
        self.margin.values().copied().max().unwrap_or(0)
    }

    /// Vertices with margin at least `m`, ascending.
    pub fn deep_vertices(&self, m: u32) -> Vec<VertexId> {
        self.margin.iter().filter(|(_, &x)| x >= m).map(|(&v, _)| v).collect()
    }

    /// The vertex closest to the window centre.
    pub fn center(&self) -> VertexId {
        *self.coords.iter().min_by_key(|(&v, p)| (p.norm4(), v)).unwrap().0
    }

    pub fn coord_map(&self) -> HashMap<VertexId, Point> {
        self.coords.iter().map(|(&v, &p)| (v, p)).collect()
    }
}

/// A named way of producing windows of any radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum Recipe {
    Gaussian,
    Eisenstein,
    Striped { stripes: Vec<(CellKind, u32)> },
    /// The window radius fixes the arm length as `(radius - 4) / 2`.
    RadialY { widths: [u32; 3] },
    Torus { torus: ComplexData },
    Regions { regions: Vec<RegionSpec> },
}

impl Recipe {
    pub fn build(&self, radius: i64) -> Result<FlatWindow> {
        let mut f = match self {
            Recipe::Gaussian => gen_gaussian(radius),
            Recipe::Eisenstein => gen_eisenstein(radius),
            Recipe::Striped { stripes } => gen_striped(stripes, radius),
            Recipe::RadialY { widths } => gen_radial_y(((radius - 4) / 2).max(1) as u32, *widths),
            Recipe::Torus { torus } => develop_torus(&TsComplex::new(torus.clone())?, radius),
            Recipe::Regions { regions } => gen_regions(regions, Window::Disk { radius }, None),
        }?;
        f.recipe = Some(self.clone());
        Ok(f)
    }
}

/// Serializable description of a window, used by the JSON interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowMeta {
    #[serde(flatten)]
    pub shape: Window,
    /// Set for windows produced by the generators; other windows are
    /// re-checked for local flatness when loaded.
    pub trusted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
}
