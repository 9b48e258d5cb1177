use serde::Serialize;

use crate::line_census::LineSet;
use crate::projective::{Line3, QuarticSurface};
use crate::singularities::is_singular_at;

/// Lines as vertices, joined when they meet at a smooth point of X.
#[derive(Clone, Debug, Serialize)]
pub struct LineGraph {
    pub field_degree: u32,
    pub vertices: Vec<[[u32; 4]; 2]>,
    #[serde(skip)]
    pub lines: Vec<Line3>,
    pub adjacency: Vec<Vec<usize>>,
    pub valency: Vec<usize>,
}

impl LineGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adjacency.iter().enumerate() {
            out.extend(nb.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn index_of(&self, l: &Line3) -> Option<usize> {
        self.lines.iter().position(|m| m == l)
    }
}

pub fn build_line_graph(x: &QuarticSurface, lines: &LineSet) -> LineGraph {
    let n = lines.len();
    let mut adjacency = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            if let Some(p) = lines.lines[a].meet(&lines.lines[b]) {
                if !is_singular_at(x, &p) {
                    adjacency[a].push(b);
                    adjacency[b].push(a);
                }
            }
        }
    }
    for nb in &mut adjacency {
        nb.sort_unstable();
    }
    LineGraph {
        field_degree: lines.field.k(),
        vertices: lines.lines.iter().map(|l| l.bits()).collect(),
        lines: lines.lines.clone(),
        valency: adjacency.iter().map(Vec::len).collect(),
        adjacency,
    }
}

/// All cycles of length 3 or 4 with distinct vertices, one per rotation and
/// reflection class. Each cycle starts at its smallest vertex and, for
/// squares, its second vertex is smaller than its last.
pub fn find_cycles(g: &LineGraph, length: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    match length {
        3 => {
            for a in 0..g.len() {
                for (i, &b) in g.adjacency[a].iter().enumerate().filter(|&(_, &b)| b > a) {
                    for &c in &g.adjacency[a][i + 1..] {
                        if g.adjacent(b, c) {
                            out.push(vec![a, b, c]);
                        }
                    }
                }
            }
        }
        4 => {
            for a in 0..g.len() {
                let nb: Vec<usize> = g.adjacency[a].iter().copied().filter(|&b| b > a).collect();
                for (i, &b) in nb.iter().enumerate() {
                    for &d in &nb[i + 1..] {
                        for &c in &g.adjacency[b] {
                            if c > a && c != d && g.adjacent(c, d) {
                                out.push(vec![a, b, c, d]);
                            }
                        }
                    }
                }
            }
        }
        _ => panic!("only cycles of length 3 and 4 are supported"),
    }
    out.sort();
    out
}

/// Summary of a line graph for reports.
#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub squares: usize,
    pub triangle_free: bool,
    pub square_free: bool,
}

pub fn summarize(g: &LineGraph) -> GraphSummary {
    let triangles = find_cycles(g, 3).len();
    let squares = find_cycles(g, 4).len();
    GraphSummary {
        vertices: g.len(),
        edges: g.edges().len(),
        triangles,
        squares,
        triangle_free: triangles == 0,
        square_free: triangles == 0 && squares == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> LineGraph {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        LineGraph {
            field_degree: 1,
            vertices: Vec::new(),
            lines: Vec::new(),
            valency: adjacency.iter().map(Vec::len).collect(),
            adjacency,
        }
    }

    #[test]
    fn complete_graph_cycle_counts() {
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((a, b));
            }
        }
        let g = graph(5, &edges);
        // K5: C(5,3) triangles, 5 · 3 squares.
        assert_eq!(find_cycles(&g, 3).len(), 10);
        assert_eq!(find_cycles(&g, 4).len(), 15);
    }

    #[test]
    fn square_without_triangles() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(find_cycles(&g, 3).is_empty());
        assert_eq!(find_cycles(&g, 4), vec![vec![0, 1, 2, 3]]);
    }
}
