//! Small named complexes used throughout tests, examples and the CLI.

use crate::complex::{Cell, CellKind, ComplexBuilder, ComplexData, Dart, Edge, TsComplex, VertexId};

fn build(b: &ComplexBuilder) -> TsComplex {
    b.build().expect("catalog complexes are valid")
}

/// A single edge between vertices 0 and 1.
pub fn single_edge() -> TsComplex {
    let mut b = ComplexBuilder::new();
    b.edge(0, 1);
    build(&b)
}

/// One square on vertices 0, 1, 2, 3 in boundary order.
pub fn single_square() -> TsComplex {
    let mut b = ComplexBuilder::new();
    b.square(0, 1, 2, 3);
    build(&b)
}

/// One triangle on vertices 0, 1, 2.
pub fn single_triangle() -> TsComplex {
    let mut b = ComplexBuilder::new();
    b.triangle(0, 1, 2);
    build(&b)
}

/// Square 0-1-2-3 with a triangle glued along edge 2-3, apex 4.
pub fn triangle_on_square() -> TsComplex {
    let mut b = ComplexBuilder::new();
    b.square(0, 1, 2, 3);
    b.triangle(3, 2, 4);
    build(&b)
}

/// Three squares pairwise sharing an edge at vertex 0 (a cube corner).
pub fn cube_corner() -> TsComplex {
    let mut b = ComplexBuilder::new();
    b.square(0, 1, 4, 2);
    b.square(0, 2, 5, 3);
    b.square(0, 3, 6, 1);
    build(&b)
}

/// One vertex, two loop edges, one square glued as a torus.
pub fn square_torus() -> TsComplex {
    let data = ComplexData {
        vertices: vec![0],
        edges: vec![Edge { id: 0, ends: [0, 0] }, Edge { id: 1, ends: [0, 0] }],
        cells: vec![Cell {
            id: 0,
            kind: CellKind::Square,
            boundary: vec![Dart::new(0, false), Dart::new(1, false), Dart::new(0, true), Dart::new(1, true)],
        }],
    };
    TsComplex::new(data).expect("valid torus")
}

/// One vertex, three loop edges, two triangles: a rhombus with opposite sides
/// identified and one diagonal.
pub fn triangle_torus() -> TsComplex {
    let data = ComplexData {
        vertices: vec![0],
        edges: (0..3).map(|id| Edge { id, ends: [0, 0] }).collect(),
        cells: vec![
            Cell {
                id: 0,
                kind: CellKind::Triangle,
                boundary: vec![Dart::new(0, false), Dart::new(1, false), Dart::new(2, true)],
            },
            Cell {
                id: 1,
                kind: CellKind::Triangle,
                boundary: vec![Dart::new(2, false), Dart::new(0, true), Dart::new(1, true)],
            },
        ],
    };
    TsComplex::new(data).expect("valid torus")
}

/// Id of grid vertex `(x, y)` in [`square_grid`] of width `w`.
pub fn grid_vertex(w: u32, x: u32, y: u32) -> VertexId {
    y * (w + 1) + x
}

/// `w × h` squares with vertices `(x, y)`, `0 ≤ x ≤ w`, `0 ≤ y ≤ h`.
pub fn square_grid(w: u32, h: u32) -> TsComplex {
    let mut b = ComplexBuilder::new();
    for y in 0..h {
        for x in 0..w {
            let p = |dx, dy| grid_vertex(w, x + dx, y + dy);
            b.square(p(0, 0), p(1, 0), p(1, 1), p(0, 1));
        }
    }
    if w == 0 || h == 0 {
        for y in 0..=h {
            for x in 0..=w {
                b.vertex(grid_vertex(w, x, y));
            }
        }
    }
    build(&b)
}

/// Six triangles around vertex 0; the ring is 1..=6.
pub fn hexagon() -> TsComplex {
    let mut b = ComplexBuilder::new();
    for i in 1..=6 {
        b.triangle(0, i, i % 6 + 1);
    }
    build(&b)
}

/// A row of `n` squares capped by a triangle at each end. The valence-2 apexes
/// are 0 (left) and 1 (right); the top row is `2..=n+2`, the bottom row
/// `n+3..=2n+3`, both left to right.
pub fn tst_strip(n: u32) -> TsComplex {
    let top = |k: u32| 2 + k;
    let bottom = |k: u32| 3 + n + k;
    let mut b = ComplexBuilder::new();
    b.triangle(0, top(0), bottom(0));
    for k in 0..n {
        b.square(top(k), top(k + 1), bottom(k + 1), bottom(k));
    }
    b.triangle(top(n), 1, bottom(n));
    build(&b)
}

/// Two triangles sharing edge 2-3, apexes 0 and 1.
pub fn rhombus() -> TsComplex {
    tst_strip(0)
}
