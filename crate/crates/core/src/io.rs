//! The JSON interchange format.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{Cell, ComplexData, Dart, Edge, TsComplex, VertexId};
use crate::diagram::AngledDiagram;
use crate::error::{Result, TsqError};
use crate::exact::{Point, Rt3};
use crate::flats::{FlatWindow, WindowMeta};

/// A plane vector `((x0 + x1√3)/2, (y0 + y1√3)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vector {
    pub x: [i64; 2],
    pub y: [i64; 2],
}

impl From<Point> for Vector {
    fn from(p: Point) -> Self {
        Vector { x: [p.x.a, p.x.b], y: [p.y.a, p.y.b] }
    }
}

impl From<Vector> for Point {
    fn from(v: Vector) -> Self {
        Point::new(Rt3::new(v.x[0], v.x[1]), Rt3::new(v.y[0], v.y[1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordEntry {
    pub vertex: VertexId,
    pub x: [i64; 2],
    pub y: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationEntry {
    pub vertex: VertexId,
    /// Outgoing darts in counterclockwise order.
    pub darts: Vec<Dart>,
}

/// A complex, optionally with plane coordinates, a rotation system, a
/// period lattice and window metadata.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<CoordEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations: Option<Vec<RotationEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translations: Option<[Vector; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowMeta>,
}

impl Document {
    pub fn from_complex(k: &TsComplex) -> Self {
        let ComplexData { vertices, edges, cells } = k.to_data();
        Document { vertices, edges, cells, ..Default::default() }
    }

    pub fn from_flat(f: &FlatWindow) -> Self {
        let mut doc = Document::from_complex(&f.complex);
        doc.coords = Some(f.coords.iter().map(|(&vertex, p)| CoordEntry { vertex, x: [p.x.a, p.x.b], y: [p.y.a, p.y.b] }).collect());
        doc.translations = f.translations.map(|[a, b]| [a.into(), b.into()]);
        doc.window = Some(WindowMeta { shape: f.window, trusted: true, recipe: f.recipe.clone() });
        doc
    }

    pub fn from_diagram(d: &AngledDiagram) -> Self {
        let mut doc = Document::from_complex(d.complex());
        doc.rotations =
            Some(d.rotation().iter().map(|(&vertex, darts)| RotationEntry { vertex, darts: darts.clone() }).collect());
        doc
    }

    pub fn data(&self) -> ComplexData {
        ComplexData { vertices: self.vertices.clone(), edges: self.edges.clone(), cells: self.cells.clone() }
    }

    pub fn complex(&self) -> Result<TsComplex> {
        TsComplex::new(self.data())
    }

    pub fn coord_map(&self) -> Option<BTreeMap<VertexId, Point>> {
        let cs = self.coords.as_ref()?;
        Some(cs.iter().map(|c| (c.vertex, Vector { x: c.x, y: c.y }.into())).collect())
    }

    /// The flat window described by the document. Windows not marked as
    /// trusted are checked for consistent geometry.
    pub fn flat(&self) -> Result<FlatWindow> {
        let coords = self.coord_map().ok_or_else(|| TsqError::Flat("document has no coordinates".into()))?;
        let meta = self.window.clone().ok_or_else(|| TsqError::Flat("document has no window".into()))?;
        let k = self.complex()?;
        if let Some(v) = k.vertices().iter().find(|v| !coords.contains_key(v)) {
            return Err(TsqError::Flat(format!("vertex {v} has no coordinates")));
        }
        let translations = self.translations.map(|[a, b]| [a.into(), b.into()]);
        let mut f = FlatWindow::new(k, coords, meta.shape, translations);
        f.recipe = meta.recipe;
        if !meta.trusted {
            f.verify()?;
        }
        Ok(f)
    }

    /// The angled diagram described by the rotation system, or else by the
    /// coordinates.
    pub fn diagram(&self) -> Result<AngledDiagram> {
        let k = self.complex()?;
        if let Some(rot) = &self.rotations {
            let rotation = rot.iter().map(|r| (r.vertex, r.darts.clone())).collect();
            return AngledDiagram::new(k, rotation, None);
        }
        if let Some(coords) = self.coord_map() {
            let coords: HashMap<VertexId, Point> = coords.into_iter().collect();
            return AngledDiagram::from_coords(k, &coords, None);
        }
        Err(TsqError::NonPlanar("document has neither rotations nor coordinates".into()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| TsqError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Document::parse(&text)
    }
}
