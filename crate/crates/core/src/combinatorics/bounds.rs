use std::collections::BTreeSet;

use serde::Serialize;

use super::graph::{find_cycles, LineGraph};
use crate::finite_field::Field;
use crate::line_census::{lines_in_plane, CensusError};
use crate::line_invariants::{Fibration, LineKind, LineReport};
use crate::projective::{kernel, Plane3, Point3, QuarticSurface};

/// Global bound on the number of lines.
pub const MAX_LINES: usize = 68;
/// Lines through one singular point.
pub const MAX_LINES_THROUGH_SINGULAR_POINT: usize = 8;
/// Bound without triangles and squares.
pub const SQUARE_FREE_BOUND: usize = 55;

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub subject: String,
    pub value: usize,
    pub bound: usize,
    pub holds: bool,
}

impl BoundCheck {
    fn at_most(name: &str, subject: String, value: usize, bound: usize) -> BoundCheck {
        BoundCheck { name: name.into(), subject, value, bound, holds: value <= bound }
    }

    fn equal(name: &str, subject: String, value: usize, expected: usize) -> BoundCheck {
        BoundCheck { name: name.into(), subject, value, bound: expected, holds: value == expected }
    }
}

/// Parabolic subgraphs of one type: Φ ≤ v(D) + offset for each of them.
#[derive(Clone, Debug, Serialize)]
pub struct ParabolicSummary {
    pub kind: String,
    pub count: usize,
    pub offset: usize,
    /// Smallest v(D) + offset seen.
    pub tightest: Option<usize>,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub lines: usize,
    pub checks: Vec<BoundCheck>,
    pub parabolic: Vec<ParabolicSummary>,
    pub completely_reducible_planes: usize,
}

impl BoundReport {
    pub fn violations(&self) -> Vec<&BoundCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.violations().is_empty() && self.parabolic.iter().all(|p| p.violations == 0)
    }
}

/// The valency bound of a line from its invariants, or None when no row of
/// the bound tables applies.
pub fn valency_bound(r: &LineReport) -> Option<(&'static str, usize)> {
    let (d, s) = (r.degree, r.singularity);
    if d == 0 {
        return Some(("degree 0", 2));
    }
    match r.fibration {
        Fibration::QuasiElliptic => match (d, s) {
            (3, _) => Some(("quasi-elliptic d=3", 16)),
            (2, _) if r.cuspidal => Some(("cuspidal", 19)),
            (2, _) => Some(("quasi-elliptic d=2", 13)),
            (1, 2) => Some(("quasi-elliptic d=1 s=2", 8)),
            (1, 1) => Some(("quasi-elliptic d=1 s=1", 12)),
            _ => None,
        },
        Fibration::Elliptic => match (r.kind, d, s) {
            (LineKind::First, 3, _) => Some(("elliptic first kind d=3", 18)),
            (LineKind::First, 2, _) => Some(("elliptic first kind d=2", 13)),
            (LineKind::First, 1, _) => Some(("elliptic first kind d=1", 8)),
            (LineKind::Second, 3, _) => Some(("elliptic second kind d=3", 20)),
            (LineKind::Second, 2, _) => Some(("elliptic second kind d=2", 10)),
            (LineKind::Second, 1, 2) => Some(("elliptic second kind d=1 s=2", 9)),
            (LineKind::Second, 1, 1) => Some(("elliptic second kind d=1 s=1", 11)),
            _ => None,
        },
    }
}

fn line_checks(g: &LineGraph, reports: &[LineReport], out: &mut Vec<BoundCheck>) {
    for (i, r) in reports.iter().enumerate() {
        let subject = format!("line {i}");
        out.push(BoundCheck::equal("graph degree equals valency", subject.clone(), g.valency[i], r.valency));
        if let Some((name, b)) = valency_bound(r) {
            out.push(BoundCheck::at_most(name, subject.clone(), r.valency, b));
        }
        if r.kind == LineKind::First {
            out.push(BoundCheck::at_most("v <= 3 + 5d", subject.clone(), r.valency, 3 + 5 * r.degree));
        }
        if r.fibration == Fibration::Elliptic && r.kind == LineKind::Second && r.degree == 3 {
            if r.valency > 16 {
                out.push(BoundCheck::equal("v > 16 implies special", subject.clone(), r.special as usize, 1));
            }
            let pq = match r.valency {
                19 => Some((6, 1)),
                20 => Some((6, 2)),
                _ => None,
            };
            if let Some(pq) = pq {
                let holds = r.pq == pq;
                out.push(BoundCheck {
                    name: format!("v = {} implies (p, q) = {pq:?}", r.valency),
                    subject,
                    value: r.pq.0 * 10 + r.pq.1,
                    bound: pq.0 * 10 + pq.1,
                    holds,
                });
            }
        }
    }
}

/// v(D): valencies of the members minus the edges inside D.
fn subgraph_valency(g: &LineGraph, members: &[usize]) -> usize {
    members
        .iter()
        .map(|&a| g.valency[a] - members.iter().filter(|&&b| g.adjacent(a, b)).count())
        .sum()
}

fn parabolic(g: &LineGraph) -> Vec<ParabolicSummary> {
    let phi = g.len();
    let mut out = Vec::new();
    let mut summarize = |kind: &str, offset: usize, subgraphs: &mut dyn Iterator<Item = Vec<usize>>| {
        let mut s = ParabolicSummary { kind: kind.into(), count: 0, offset, tightest: None, violations: 0 };
        for d in subgraphs {
            let b = subgraph_valency(g, &d) + offset;
            s.count += 1;
            s.tightest = Some(s.tightest.map_or(b, |t: usize| t.min(b)));
            s.violations += usize::from(phi > b);
        }
        out.push(s);
    };
    summarize("triangle", 24, &mut find_cycles(g, 3).into_iter());
    // Squares with a diagonal are not fibers.
    let squares = find_cycles(g, 4).into_iter().filter(|c| !g.adjacent(c[0], c[2]) && !g.adjacent(c[1], c[3]));
    summarize("square", 24, &mut squares.into_iter());
    summarize("star", 25, &mut stars(g).into_iter());
    out
}

/// Centers with four pairwise disjoint neighbours.
fn stars(g: &LineGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for c in 0..g.len() {
        let nb = &g.adjacency[c];
        let n = nb.len();
        for i in 0..n {
            for j in i + 1..n {
                if g.adjacent(nb[i], nb[j]) {
                    continue;
                }
                for k in j + 1..n {
                    if g.adjacent(nb[i], nb[k]) || g.adjacent(nb[j], nb[k]) {
                        continue;
                    }
                    for l in k + 1..n {
                        if [i, j, k].iter().all(|&x| !g.adjacent(nb[x], nb[l])) {
                            out.push(vec![c, nb[i], nb[j], nb[k], nb[l]]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Planes spanned by two meeting lines of the census.
fn planes_of_meeting_pairs(g: &LineGraph) -> BTreeSet<Plane3> {
    let mut planes = BTreeSet::new();
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            if g.lines[a].meet(&g.lines[b]).is_none() {
                continue;
            }
            let [p, q] = g.lines[a].rows();
            let [r, s] = g.lines[b].rows();
            let k = kernel(&[p, q, r, s]);
            if k.len() == 1 {
                planes.insert(Plane3::new(k[0]).expect("nonzero plane"));
            }
        }
    }
    planes
}

/// Each line not in Π meets Π in one point, either singular or on exactly one
/// line of Π, so Φ splits into three counts.
fn plane_decomposition(
    x: &QuarticSurface,
    g: &LineGraph,
    search: Field,
    singular: &[Point3],
    out: &mut Vec<BoundCheck>,
) -> Result<usize, CensusError> {
    let mut count = 0;
    for plane in planes_of_meeting_pairs(g) {
        let sec = lines_in_plane(x, &plane, search)?;
        if !sec.completely_reducible() {
            continue;
        }
        count += 1;
        let inside: Vec<usize> =
            (0..g.len()).filter(|&i| sec.lines.iter().any(|(l, _)| *l == g.lines[i])).collect();
        let sing_on_plane: Vec<&Point3> = singular.iter().filter(|p| plane.contains(p)).collect();
        let through_sing = (0..g.len())
            .filter(|i| !inside.contains(i))
            .filter(|&i| sing_on_plane.iter().any(|p| g.lines[i].contains_point(p)))
            .count();
        let meeting: usize = inside
            .iter()
            .map(|&i| g.adjacency[i].iter().filter(|j| !inside.contains(j)).count())
            .sum();
        let total = inside.len() + through_sing + meeting;
        out.push(BoundCheck::equal("plane decomposition of the line count", format!("{plane:?}"), total, g.len()));
    }
    Ok(count)
}

/// Evaluates every applicable inequality on a census: `reports[i]` belongs to
/// vertex `i`, and `singular` lists the singular points found.
pub fn bound_calculators(
    x: &QuarticSurface,
    g: &LineGraph,
    reports: &[LineReport],
    singular: &[Point3],
    search: Field,
) -> Result<BoundReport, CensusError> {
    assert_eq!(g.len(), reports.len());
    let phi = g.len();
    let mut checks = vec![BoundCheck::at_most("total lines", "census".into(), phi, MAX_LINES)];
    line_checks(g, reports, &mut checks);
    for p in singular {
        let through = g.lines.iter().filter(|l| l.contains_point(p)).count();
        checks.push(BoundCheck::at_most("lines through a singular point", format!("{p:?}"), through, MAX_LINES_THROUGH_SINGULAR_POINT));
    }
    let parabolic = parabolic(g);
    let triangles = parabolic[0].count;
    let squares = parabolic[1].count;
    if triangles == 0 && squares == 0 {
        checks.push(BoundCheck::at_most("square-free and triangle-free", "census".into(), phi, SQUARE_FREE_BOUND));
    }
    if triangles == 0 && squares > 0 && g.valency.iter().all(|&v| v <= 13) {
        checks.push(BoundCheck::at_most("triangle-free with a square", "census".into(), phi, 4 * 11 + 24));
    }
    let planes = plane_decomposition(x, g, search, singular, &mut checks)?;
    Ok(BoundReport { lines: phi, checks, parabolic, completely_reducible_planes: planes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_small_valencies_gives_68() {
        // Four lines of valency at most 13, two of them inside D each.
        assert_eq!(4 * (13 - 2) + 24, MAX_LINES);
    }
}
