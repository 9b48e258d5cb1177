use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::tally::{FiberTallyRow, Menu, Shape, EULER_BUDGET};
use crate::singularities::AdeLabel;

/// Picard numbers of K3 surfaces are at most 22.
pub const MAX_PICARD: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("row {case} has Euler sum {euler}, expected {EULER_BUDGET}")]
    EulerMismatch { case: String, euler: u32 },
    #[error("fiber kind {0} has no incidence model")]
    Unmodelled(String),
    #[error("K · L = {0} is outside 0..=2")]
    BadKl(i64),
}

/// Symmetric integer matrix on labelled classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<i64>>,
    pub kl: i64,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn rank(&self) -> usize {
        gram_rank(self)
    }
}

/// The components of one fiber with their mutual intersections and the
/// intersections with L and each admissible K.
#[derive(Clone, Debug)]
pub struct FiberModel {
    pub names: Vec<String>,
    pub mult: Vec<i64>,
    pub edges: Vec<(usize, usize, i64)>,
    pub l: Vec<i64>,
    pub k_options: Vec<Vec<i64>>,
    /// Singular points of X whose exceptional curves are in the fiber.
    pub sing: Vec<AdeLabel>,
}

impl FiberModel {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn intersection(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return -2;
        }
        self.edges.iter().find(|&&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i)).map_or(0, |e| e.2)
    }

    fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.len()];
        v[i] = 1;
        v
    }

    fn with_l(mut self, l: &[(usize, i64)]) -> FiberModel {
        for &(i, x) in l {
            self.l[i] = x;
        }
        self
    }
}

fn iii() -> FiberModel {
    FiberModel {
        names: vec!["c0".into(), "c1".into()],
        mult: vec![1, 1],
        edges: vec![(0, 1, 2)],
        l: vec![0, 0],
        k_options: vec![vec![1, 1]],
        sing: Vec::new(),
    }
}

/// D̃_{4+2n}: ends a, b at c1, chain c1..c_{2n+1}, ends d, e at the last.
fn istar(n: usize) -> FiberModel {
    let chain = 2 * n + 1;
    let mut names = vec!["a".to_string(), "b".to_string()];
    names.extend((1..=chain).map(|i| format!("c{i}")));
    names.extend(["d".to_string(), "e".to_string()]);
    let (d, e) = (chain + 2, chain + 3);
    let mut edges = vec![(0, 2, 1), (1, 2, 1), (chain + 1, d, 1), (chain + 1, e, 1)];
    edges.extend((2..chain + 1).map(|i| (i, i + 1, 1)));
    let mut mult = vec![1, 1];
    mult.extend(std::iter::repeat_n(2, chain));
    mult.extend([1, 1]);
    let mut m = FiberModel { names, mult, edges, l: vec![0; chain + 4], k_options: Vec::new(), sing: Vec::new() };
    m.k_options = vec![m.unit(2 + n)];
    m
}

/// Ẽ7: chain v0..v6, branch w at v3.
fn e7_affine() -> FiberModel {
    let mut names: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
    names.push("w".into());
    let mut edges: Vec<(usize, usize, i64)> = (0..6).map(|i| (i, i + 1, 1)).collect();
    edges.push((3, 7, 1));
    let mut m = FiberModel {
        names,
        mult: vec![1, 2, 3, 4, 3, 2, 1, 2],
        edges,
        l: vec![0; 8],
        k_options: Vec::new(),
        sing: Vec::new(),
    };
    m.k_options = vec![m.unit(7)];
    m
}

/// Ẽ8: chain u0..u7 with multiplicities 2,4,6,5,4,3,2,1, branch b at u2.
fn e8_affine() -> FiberModel {
    let mut names: Vec<String> = (0..8).map(|i| format!("u{i}")).collect();
    names.push("b".into());
    let mut edges: Vec<(usize, usize, i64)> = (0..7).map(|i| (i, i + 1, 1)).collect();
    edges.push((2, 8, 1));
    let mut m = FiberModel {
        names,
        mult: vec![2, 4, 6, 5, 4, 3, 2, 1, 3],
        edges,
        l: vec![0; 9],
        k_options: Vec::new(),
        sing: Vec::new(),
    };
    // K meets a component of multiplicity 2 once: either end of that weight.
    m.k_options = vec![m.unit(0), m.unit(6)];
    m
}

pub fn fiber_model(shape: Shape) -> Option<FiberModel> {
    use AdeLabel::*;
    let m = match shape {
        Shape::IiiLineConic => iii().with_l(&[(0, 1), (1, 2)]),
        Shape::IiiCusp => FiberModel { sing: vec![A(1)], ..iii().with_l(&[(0, 3)]) },
        Shape::IStarThreeLines { n } => {
            let m = istar(n);
            let (d, e) = (2 * n + 3, 2 * n + 4);
            FiberModel { sing: vec![A(2 * n + 2)], ..m.with_l(&[(1, 1), (d, 1), (e, 1)]) }
        }
        Shape::IStarDoubleLine => FiberModel { sing: vec![A(1); 3], ..istar(0).with_l(&[(2, 1), (0, 1)]) },
        Shape::IStarLineConicApart { n } => {
            FiberModel { sing: vec![A(2 * n + 3)], ..istar(n).with_l(&[(0, 1), (2 * n + 3, 2)]) }
        }
        Shape::IStarLineConicTogether { n } => {
            FiberModel { sing: vec![D(2 * n + 3)], ..istar(n).with_l(&[(0, 1), (1, 2)]) }
        }
        Shape::IStarCusp { n } => FiberModel { sing: vec![D(2 * n + 4)], ..istar(n).with_l(&[(0, 3)]) },
        Shape::IiiStarLineConic => FiberModel { sing: vec![E(6)], ..e7_affine().with_l(&[(0, 1), (6, 2)]) },
        Shape::IiiStarCusp => FiberModel { sing: vec![E(7)], ..e7_affine().with_l(&[(0, 3)]) },
        Shape::IiStarCusp => FiberModel { sing: vec![E(8)], ..e8_affine().with_l(&[(7, 3)]) },
        Shape::Unmodelled => return None,
    };
    Some(m)
}

/// Singular locus of the surface implied by a row.
pub fn row_singularities(menu: &Menu, row: &FiberTallyRow) -> Vec<AdeLabel> {
    let mut out = Vec::new();
    for (c, k) in row.counts.iter().zip(&menu.kinds) {
        if *c > 0 {
            let m = fiber_model(k.shape).map(|m| m.sing).unwrap_or_default();
            for _ in 0..*c {
                out.extend(m.iter().copied());
            }
        }
    }
    out.sort();
    out
}

/// Sum notation such as "A3+2A1"; empty locus is "-".
pub fn format_singularities(labels: &[AdeLabel]) -> String {
    if labels.is_empty() {
        return "-".into();
    }
    let mut groups: Vec<(AdeLabel, usize)> = Vec::new();
    for &l in labels {
        match groups.iter_mut().find(|g| g.0 == l) {
            Some(g) => g.1 += 1,
            None => groups.push((l, 1)),
        }
    }
    // Larger types first: E before D before A, higher index first.
    groups.sort_by(|a, b| b.0.cmp(&a.0));
    groups
        .iter()
        .map(|(l, c)| if *c == 1 { l.to_string() } else { format!("{c}{l}") })
        .collect::<Vec<_>>()
        .join("+")
}

/// One Gram matrix per K · L value in `kl` and per choice of K incidences,
/// on the basis F, L, K and all fiber components.
pub fn build_config_lattice(menu: &Menu, row: &FiberTallyRow, kl: &[i64]) -> Result<Vec<GramMatrix>, LatticeError> {
    let euler = row.euler(menu);
    if euler != EULER_BUDGET {
        return Err(LatticeError::EulerMismatch { case: row.case.clone(), euler });
    }
    let mut fibers: Vec<(String, FiberModel)> = Vec::new();
    for (c, k) in row.counts.iter().zip(&menu.kinds) {
        if *c == 0 {
            continue;
        }
        let m = fiber_model(k.shape).ok_or_else(|| LatticeError::Unmodelled(k.name.clone()))?;
        for i in 0..*c {
            fibers.push((format!("{}#{i}", k.name), m.clone()));
        }
    }
    let mut out = Vec::new();
    for &x in kl {
        if !(0..=2).contains(&x) {
            return Err(LatticeError::BadKl(x));
        }
        let mut choice = vec![0usize; fibers.len()];
        loop {
            out.push(assemble(menu.line_degree, x, &fibers, &choice));
            // Odometer over K options.
            let mut i = 0;
            while i < fibers.len() {
                choice[i] += 1;
                if choice[i] < fibers[i].1.k_options.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == fibers.len() {
                break;
            }
        }
    }
    Ok(out)
}

fn assemble(degree: i64, kl: i64, fibers: &[(String, FiberModel)], choice: &[usize]) -> GramMatrix {
    let mut labels = vec!["F".to_string(), "L".to_string(), "K".to_string()];
    for (name, m) in fibers {
        labels.extend(m.names.iter().map(|c| format!("{name}.{c}")));
    }
    let n = labels.len();
    let mut g = vec![vec![0i64; n]; n];
    g[0][1] = degree;
    g[0][2] = 2;
    g[1][1] = -2;
    g[2][2] = -2;
    g[1][2] = kl;
    let mut off = 3;
    for ((_, m), &k) in fibers.iter().zip(choice) {
        for i in 0..m.len() {
            g[1][off + i] = m.l[i];
            g[2][off + i] = m.k_options[k][i];
            for j in 0..m.len() {
                g[off + i][off + j] = m.intersection(i, j);
            }
        }
        off += m.len();
    }
    for i in 0..n {
        for j in 0..i {
            g[i][j] = g[j][i];
        }
    }
    GramMatrix { labels, entries: g, kl }
}

/// Degree-2 configuration: F, L, a section E0 and 20 fiber lines, of which
/// the first `j` meet E0.
pub fn section_lattice(j: usize) -> GramMatrix {
    const LINES: usize = 20;
    assert!(j <= LINES);
    let mut labels = vec!["F".to_string(), "L".to_string(), "E0".to_string()];
    labels.extend((0..LINES).map(|i| format!("m{i}")));
    let n = labels.len();
    let mut g = vec![vec![0i64; n]; n];
    g[0][1] = 2;
    g[0][2] = 1;
    g[1][2] = 1;
    g[1][1] = -2;
    g[2][2] = -2;
    for i in 0..LINES {
        g[3 + i][3 + i] = -2;
        g[1][3 + i] = 1;
        g[2][3 + i] = i64::from(i < j);
    }
    for i in 0..n {
        for k in 0..i {
            g[i][k] = g[k][i];
        }
    }
    GramMatrix { labels, entries: g, kl: 0 }
}

pub fn gram_rank(m: &GramMatrix) -> usize {
    integer_rank(&m.entries)
}

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    bareiss(rows).0
}

/// Determinant of a square integer matrix.
pub fn integer_determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix");
    let (rank, last, sign) = bareiss(rows);
    if rank < n {
        BigInt::zero()
    } else if sign {
        -last
    } else {
        last
    }
}

/// Returns the rank, the last pivot and whether an odd number of row swaps
/// happened. For a nonsingular square matrix the last pivot is ± det.
fn bareiss(rows: &[Vec<i64>]) -> (usize, BigInt, bool) {
    let n = rows.len();
    if n == 0 {
        return (0, BigInt::one(), false);
    }
    let m = rows[0].len();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut odd = false;
    for c in 0..m {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        if p != r {
            a.swap(p, r);
            odd = !odd;
        }
        for i in r + 1..n {
            for j in c + 1..m {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, prev, odd)
}

/// Ranks of all admissible matrices for one row and K · L value.
#[derive(Clone, Debug, Serialize)]
pub struct RankSummary {
    pub kl: i64,
    pub min_rank: usize,
    pub max_rank: usize,
    pub matrices: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowRanks {
    pub case: String,
    pub valency: u32,
    pub fibers: Vec<(String, u32)>,
    pub singularities: String,
    pub by_kl: Vec<RankSummary>,
}

impl RowRanks {
    pub fn min_rank(&self) -> usize {
        self.by_kl.iter().map(|s| s.min_rank).min().unwrap_or(0)
    }

    /// K · L values for which some matrix has rank at most 22.
    pub fn surviving_kl(&self) -> Vec<i64> {
        self.by_kl.iter().filter(|s| s.min_rank <= MAX_PICARD).map(|s| s.kl).collect()
    }

    pub fn survives(&self) -> bool {
        !self.surviving_kl().is_empty()
    }
}

pub fn row_ranks(menu: &Menu, row: &FiberTallyRow) -> Result<RowRanks, LatticeError> {
    let mut by_kl = Vec::new();
    for kl in 0..=2 {
        let ranks: Vec<usize> = build_config_lattice(menu, row, &[kl])?.iter().map(gram_rank).collect();
        by_kl.push(RankSummary {
            kl,
            min_rank: *ranks.iter().min().unwrap(),
            max_rank: *ranks.iter().max().unwrap(),
            matrices: ranks.len(),
        });
    }
    Ok(RowRanks {
        case: row.case.clone(),
        valency: row.valency,
        fibers: row.fibers(menu),
        singularities: format_singularities(&row_singularities(menu, row)),
        by_kl,
    })
}

/// Rows of a table whose lattice can have rank at most 22.
pub fn rank_filter(menu: &Menu, rows: &[FiberTallyRow]) -> Result<Vec<RowRanks>, LatticeError> {
    Ok(rows.iter().map(|r| row_ranks(menu, r)).collect::<Result<Vec<_>, _>>()?.into_iter().filter(RowRanks::survives).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_fiber(m: &FiberModel) {
        // F · c = 0 for every component, F · L = 3, F · K = 2.
        for i in 0..m.len() {
            let fc: i64 = (0..m.len()).map(|j| m.mult[j] * m.intersection(i, j)).sum();
            assert_eq!(fc, 0, "{:?}", m.names);
        }
        let fl: i64 = m.mult.iter().zip(&m.l).map(|(a, b)| a * b).sum();
        assert_eq!(fl, 3);
        for k in &m.k_options {
            assert_eq!(m.mult.iter().zip(k).map(|(a, b)| a * b).sum::<i64>(), 2);
        }
    }

    #[test]
    fn fiber_models_are_consistent() {
        for shape in [
            Shape::IiiLineConic,
            Shape::IiiCusp,
            Shape::IStarThreeLines { n: 0 },
            Shape::IStarThreeLines { n: 1 },
            Shape::IStarDoubleLine,
            Shape::IStarLineConicApart { n: 0 },
            Shape::IStarLineConicApart { n: 2 },
            Shape::IStarLineConicTogether { n: 1 },
            Shape::IStarCusp { n: 3 },
            Shape::IiiStarLineConic,
            Shape::IiiStarCusp,
            Shape::IiStarCusp,
        ] {
            check_fiber(&fiber_model(shape).unwrap());
        }
    }

    #[test]
    fn determinant_of_small_matrices() {
        assert_eq!(integer_determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(integer_determinant(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]), BigInt::from(4));
        assert_eq!(integer_rank(&[vec![1, 2, 3], vec![2, 4, 6]]), 1);
    }

    #[test]
    fn singularity_notation() {
        use AdeLabel::*;
        assert_eq!(format_singularities(&[A(1), A(3), A(1)]), "A3+2A1");
        assert_eq!(format_singularities(&[]), "-");
    }
}
