use std::fmt;

use serde::{Serialize, Serializer};

use crate::finite_field::{Embedding, Fe, Field};
use crate::line_census::{line_equation, line_points, ternary_linear_factors, CensusError, LinearFactor};
use crate::polynomial::{conic_is_degenerate, TernaryForm};
use crate::projective::{Plane3, Point3, QuarticSurface};
use crate::singularities::is_singular_at;

/// Configuration type of a plane section containing lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigLabel {
    /// Four lines, no three concurrent.
    A(u8),
    /// Exactly three concurrent lines.
    B(u8),
    /// Four concurrent lines.
    C(u8),
    /// A double line and two simple lines meeting off it.
    D(u8),
    /// A double line and two simple lines meeting on it.
    E(u8),
    /// Two double lines.
    F(u8),
    /// A triple line and a simple line.
    G(u8),
    /// A quadruple line.
    H,
    /// Two lines and an irreducible conic with prescribed tangencies.
    R(u8),
    Unlisted,
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConfigLabel::*;
        match self {
            A(i) => write!(f, "A{i}"),
            B(i) => write!(f, "B{i}"),
            C(i) => write!(f, "C{i}"),
            D(i) => write!(f, "D{i}"),
            E(i) => write!(f, "E{i}"),
            F(i) => write!(f, "F{i}"),
            G(i) => write!(f, "G{i}"),
            H => write!(f, "H"),
            R(i) => write!(f, "R{i}"),
            Unlisted => write!(f, "Unlisted"),
        }
    }
}

impl Serialize for ConfigLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A classified plane section.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneConfig {
    pub plane: [u32; 4],
    /// Line multiplicities, largest first.
    pub multiplicities: Vec<usize>,
    /// Degree left after removing the linear components.
    pub residual_degree: usize,
    pub label: ConfigLabel,
}

/// Plane-coordinate view of a section with a singularity oracle.
struct Section<'a> {
    x: &'a QuarticSurface,
    basis: [[Fe; 4]; 3],
    search: Field,
}

impl Section<'_> {
    fn singular(&self, y: [Fe; 3]) -> bool {
        let f = y[0].field();
        let basis = if f == self.search {
            self.basis
        } else {
            let e = Embedding::new(self.search, f).expect("extension of the search field");
            self.basis.map(|r| r.map(|c| e.apply(c)))
        };
        let p = [0, 1, 2, 3].map(|i| y[0] * basis[0][i] + y[1] * basis[1][i] + y[2] * basis[2][i]);
        is_singular_at(self.x, &Point3::new(p).expect("nonzero point"))
    }
}

fn same_point(a: [Fe; 3], b: [Fe; 3]) -> bool {
    (a[1] * b[2] + a[2] * b[1]).is_zero() && (a[2] * b[0] + a[0] * b[2]).is_zero() && (a[0] * b[1] + a[1] * b[0]).is_zero()
}

fn dot3(l: [Fe; 3], y: [Fe; 3]) -> Fe {
    l[0] * y[0] + l[1] * y[1] + l[2] * y[2]
}

pub fn classify_plane_config(x: &QuarticSurface, plane: &Plane3, search: Field) -> Result<ConfigLabel, CensusError> {
    Ok(plane_config(x, plane, search)?.label)
}

pub fn plane_config(x: &QuarticSurface, plane: &Plane3, search: Field) -> Result<PlaneConfig, CensusError> {
    let xs = x.embed(search)?;
    let plane = plane.embed(&Embedding::new(plane.0[0].field(), search)?);
    let basis = plane.basis();
    let form = xs.form().restrict_to_plane(basis);
    if form.is_zero() {
        return Err(CensusError::PlaneInSurface);
    }
    let (factors, rest) = ternary_linear_factors(&form, search)?;
    let sec = Section { x: &xs, basis, search };
    let total: usize = factors.iter().map(|f| f.1).sum();
    let label = match (total, factors.len()) {
        (4, _) => classify_lines(&sec, &factors),
        (2, 2) if !conic_is_degenerate(&rest) => classify_conic(&sec, factors[0].0, factors[1].0, &rest),
        _ => ConfigLabel::Unlisted,
    };
    let mut multiplicities: Vec<usize> = factors.iter().map(|f| f.1).collect();
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PlaneConfig { plane: plane.0.map(|c| c.bits()), multiplicities, residual_degree: rest.degree(), label })
}

fn classify_lines(sec: &Section, factors: &[LinearFactor]) -> ConfigLabel {
    let mut fs = factors.to_vec();
    fs.sort_by(|a, b| b.1.cmp(&a.1));
    let mults: Vec<usize> = fs.iter().map(|f| f.1).collect();
    let l: Vec<[Fe; 3]> = fs.iter().map(|f| f.0).collect();
    let sing_meet = |a: usize, b: usize| sec.singular(line_equation(l[a], l[b]));
    match mults.as_slice() {
        [1, 1, 1, 1] => four_lines(sec, &l),
        [2, 1, 1] => {
            let p = line_equation(l[1], l[2]);
            if dot3(l[0], p).is_zero() {
                return ConfigLabel::E(sec.singular(p) as u8);
            }
            let on_double = sing_meet(0, 1) as u8 + sing_meet(0, 2) as u8;
            match (on_double, sec.singular(p)) {
                (0, false) => ConfigLabel::D(0),
                (0, true) => ConfigLabel::Unlisted,
                (1, false) => ConfigLabel::D(1),
                (2, false) => ConfigLabel::D(2),
                (1, true) => ConfigLabel::D(3),
                (_, true) => ConfigLabel::D(4),
                _ => unreachable!(),
            }
        }
        [2, 2] => ConfigLabel::F(1 + sing_meet(0, 1) as u8),
        [3, 1] => ConfigLabel::G(sing_meet(0, 1) as u8),
        [4] => ConfigLabel::H,
        _ => ConfigLabel::Unlisted,
    }
}

fn four_lines(sec: &Section, l: &[[Fe; 3]]) -> ConfigLabel {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let meet = |a: usize, b: usize| line_equation(l[a], l[b]);
    let through = |p: [Fe; 3]| (0..4).filter(|&i| dot3(l[i], p).is_zero()).collect::<Vec<_>>();
    let mut max_conc: Vec<usize> = Vec::new();
    for &(a, b) in &pairs {
        let t = through(meet(a, b));
        if t.len() > max_conc.len() {
            max_conc = t;
        }
    }
    match max_conc.len() {
        4 => ConfigLabel::C(sec.singular(meet(0, 1)) as u8),
        3 => {
            let q = meet(max_conc[0], max_conc[1]);
            let m = (0..4).find(|i| !max_conc.contains(i)).unwrap();
            let c = max_conc.iter().filter(|&&i| sec.singular(meet(m, i))).count() as u8;
            ConfigLabel::B(if sec.singular(q) { 4 + c } else { c })
        }
        _ => {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|&(a, b)| sec.singular(meet(a, b))).collect();
            ConfigLabel::A(general_label(&edges))
        }
    }
}

/// Index of the general four-line configuration from the graph whose edges
/// are the singular intersection points.
fn general_label(edges: &[(usize, usize)]) -> u8 {
    let mut deg = [0usize; 4];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let max = *deg.iter().max().unwrap();
    match edges.len() {
        0 => 0,
        1 => 1,
        2 if max == 2 => 2,
        2 => 5,
        3 if max == 3 => 3,
        3 if deg.contains(&0) => 4,
        3 => 6,
        4 if max == 3 => 7,
        4 => 8,
        5 => 9,
        _ => 10,
    }
}

/// Intersection of a conic with a line: the points and whether it is tangent.
struct ConicTrace {
    points: Vec<[Fe; 3]>,
    tangent: bool,
}

fn conic_trace(sec: &Section, q: &TernaryForm, l: [Fe; 3]) -> Option<ConicTrace> {
    let [p0, p1] = line_points(l);
    let b = q.restrict_to_line(p0, p1);
    let tangent = b.coeff(1).is_zero();
    // A transversal pair may only be defined over the quadratic extension.
    let field = if tangent { sec.search } else { Field::new(2 * sec.search.k()).ok()? };
    let e = Embedding::new(sec.search, field).ok()?;
    let roots = b.root_orders(field).ok()?;
    let points = roots
        .iter()
        .map(|(r, _)| [0, 1, 2].map(|i| r.u * e.apply(p0[i]) + r.v * e.apply(p1[i])))
        .collect();
    Some(ConicTrace { points, tangent })
}

fn classify_conic(sec: &Section, a: [Fe; 3], b: [Fe; 3], q: &TernaryForm) -> ConfigLabel {
    for (l, m) in [(a, b), (b, a)] {
        if let Some(label) = conic_label(sec, l, m, q) {
            return label;
        }
    }
    ConfigLabel::Unlisted
}

fn conic_label(sec: &Section, l: [Fe; 3], m: [Fe; 3], q: &TernaryForm) -> Option<ConfigLabel> {
    let on_l = conic_trace(sec, q, l)?;
    let on_m = conic_trace(sec, q, m)?;
    let lm = line_equation(l, m);
    let m_touch = on_m.tangent.then(|| on_m.points[0]);
    let m_touch_off_l = m_touch.is_some_and(|t| !dot3(l, t).is_zero());
    let lm_smooth = !sec.singular(lm);
    if on_l.tangent {
        let s = on_l.points[0];
        return (sec.singular(s) && m_touch_off_l && lm_smooth).then_some(ConfigLabel::R(3));
    }
    let sing: Vec<bool> = on_l.points.iter().map(|&p| sec.singular(p)).collect();
    if sing.iter().filter(|&&s| s).count() != 1 {
        return None;
    }
    if m_touch_off_l && lm_smooth {
        return Some(ConfigLabel::R(1));
    }
    let t = on_l.points[sing.iter().position(|&s| !s).unwrap()];
    let field = t[0].field();
    let touch_at_t = m_touch.is_some_and(|c| {
        let e = Embedding::new(c[0].field(), field).unwrap();
        same_point(c.map(|x| e.apply(x)), t)
    });
    touch_at_t.then_some(ConfigLabel::R(2))
}

#[cfg(test)]
mod tests {
    use super::general_label;

    #[test]
    fn general_labels_cover_all_graph_shapes() {
        assert_eq!(general_label(&[]), 0);
        assert_eq!(general_label(&[(0, 1)]), 1);
        assert_eq!(general_label(&[(0, 1), (1, 2)]), 2);
        assert_eq!(general_label(&[(0, 1), (2, 3)]), 5);
        assert_eq!(general_label(&[(0, 1), (0, 2), (0, 3)]), 3);
        assert_eq!(general_label(&[(0, 1), (1, 2), (0, 2)]), 4);
        assert_eq!(general_label(&[(0, 1), (1, 2), (2, 3)]), 6);
        assert_eq!(general_label(&[(0, 1), (1, 2), (0, 2), (2, 3)]), 7);
        assert_eq!(general_label(&[(0, 1), (1, 2), (2, 3), (3, 0)]), 8);
    }
}
