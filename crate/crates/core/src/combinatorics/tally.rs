use std::collections::BTreeMap;

use serde::Serialize;

/// Sum of the Euler contributions of the reducible fibers of a
/// quasi-elliptic fibration on a K3 surface in characteristic 2.
pub const EULER_BUDGET: u32 = 20;

/// Largest number of I*_0 fibers admitted in the degree-3 menu.
pub const MAX_ISTAR0_DEGREE3: u32 = 2;

/// Where the residual components sit inside a fiber, for the lattice model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// III: a line and a conic.
    IiiLineConic,
    /// III: a cuspidal cubic and the A1 curve of its singular point.
    IiiCusp,
    /// I*_{2n}: three lines on the ends b, d, e.
    IStarThreeLines { n: usize },
    /// I*_0: a double line in the center and a simple line on an end.
    IStarDoubleLine,
    /// I*_{2n}: a line and a conic on ends at opposite sides of the chain.
    IStarLineConicApart { n: usize },
    /// I*_{2n}: a line and a conic on the two ends at the same side.
    IStarLineConicTogether { n: usize },
    /// I*_{2n}: a cuspidal cubic on an end.
    IStarCusp { n: usize },
    /// III*: a line and a conic on the two ends of the long chain.
    IiiStarLineConic,
    /// III*: a cuspidal cubic on an end of the long chain.
    IiiStarCusp,
    /// II*: a cuspidal cubic on the end of multiplicity 1.
    IiStarCusp,
    /// No incidence model; rows using it have no lattice.
    Unmodelled,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberKind {
    pub name: String,
    /// Kinds with the same `merge` name are variants of one case.
    pub merge: String,
    /// Family name used by count caps.
    pub family: String,
    pub euler: u32,
    pub valency: u32,
    pub shape: Shape,
}

impl FiberKind {
    fn new(name: &str, merge: &str, family: &str, euler: u32, valency: u32, shape: Shape) -> FiberKind {
        assert!(valency <= euler);
        FiberKind { name: name.into(), merge: merge.into(), family: family.into(), euler, valency, shape }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowOrder {
    /// Count vectors in descending lexicographic order.
    Counts,
    /// Valency descending, then counts descending.
    ValencyThenCounts,
}

#[derive(Clone, Debug, Serialize)]
pub struct Menu {
    pub name: String,
    /// Degree of the line: F · L in the lattice model.
    pub line_degree: i64,
    pub kinds: Vec<FiberKind>,
    /// Upper bounds on the total count of a family.
    pub caps: Vec<(String, u32)>,
    pub order: RowOrder,
}

/// Valencies `above < v <= at_most`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ValencyFilter {
    pub above: u32,
    pub at_most: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberTallyRow {
    pub case: String,
    /// Aligned with the menu's kinds.
    pub counts: Vec<u32>,
    pub valency: u32,
}

impl FiberTallyRow {
    pub fn euler(&self, menu: &Menu) -> u32 {
        self.counts.iter().zip(&menu.kinds).map(|(c, k)| c * k.euler).sum()
    }

    pub fn count_of(&self, menu: &Menu, name: &str) -> u32 {
        menu.kinds.iter().position(|k| k.name == name).map_or(0, |i| self.counts[i])
    }

    /// Nonzero counts by kind name, in menu order.
    pub fn fibers(&self, menu: &Menu) -> Vec<(String, u32)> {
        self.counts.iter().zip(&menu.kinds).filter(|(c, _)| **c > 0).map(|(c, k)| (k.name.clone(), *c)).collect()
    }
}

/// Fibers of a degree-3 quasi-elliptic line, labelled by local valency.
pub fn degree3_menu() -> Menu {
    let mut kinds = Vec::new();
    let istar = |n: usize, v: u32| {
        let shape = match (n, v) {
            (_, 3) => Shape::IStarThreeLines { n },
            (0, 2) => Shape::IStarDoubleLine,
            (_, 2) => Shape::Unmodelled,
            (_, 1) => Shape::IStarLineConicApart { n },
            _ => Shape::IStarCusp { n },
        };
        let name = format!("I*{},{}", 2 * n, v);
        FiberKind::new(&name, &name, &format!("I*{}", 2 * n), 4 + 2 * n as u32, v, shape)
    };
    for (n, v) in [(1, 3), (0, 3), (0, 2), (0, 1)] {
        kinds.push(istar(n, v));
    }
    for n in 0..=8 {
        for v in (0..=3).rev() {
            if !kinds.iter().any(|k| k.name == format!("I*{},{}", 2 * n, v)) {
                kinds.push(istar(n, v));
            }
        }
    }
    for (v, shape) in [(2, Shape::Unmodelled), (1, Shape::IiiStarLineConic), (0, Shape::IiiStarCusp)] {
        let name = format!("III*{v}");
        kinds.push(FiberKind::new(&name, &name, "III*", 7, v, shape));
    }
    for (v, shape) in [(2, Shape::Unmodelled), (1, Shape::Unmodelled), (0, Shape::IiStarCusp)] {
        let name = format!("II*{v}");
        kinds.push(FiberKind::new(&name, &name, "II*", 8, v, shape));
    }
    kinds.push(FiberKind::new("iii'", "iii'", "III", 1, 1, Shape::IiiLineConic));
    kinds.push(FiberKind::new("iii''", "iii''", "III", 1, 0, Shape::IiiCusp));
    Menu {
        name: "degree 3".into(),
        line_degree: 3,
        kinds,
        caps: vec![("I*0".into(), MAX_ISTAR0_DEGREE3)],
        order: RowOrder::Counts,
    }
}

/// Fibers refined by the singular points they contain.
pub fn refined_menu() -> Menu {
    let mut kinds = vec![
        FiberKind::new("III*1", "III*1", "III*", 7, 1, Shape::IiiStarLineConic),
        FiberKind::new("I*a2,1", "I*2,1", "I*2", 6, 1, Shape::IStarLineConicApart { n: 1 }),
        FiberKind::new("I*b2,1", "I*2,1", "I*2", 6, 1, Shape::IStarLineConicTogether { n: 1 }),
        FiberKind::new("I*2,0", "I*2,0", "I*2", 6, 0, Shape::IStarCusp { n: 1 }),
        FiberKind::new("I*0,1", "I*0,1", "I*0", 4, 1, Shape::IStarLineConicApart { n: 0 }),
        FiberKind::new("I*0,0", "I*0,0", "I*0", 4, 0, Shape::IStarCusp { n: 0 }),
    ];
    for n in 2..=8usize {
        let e = 4 + 2 * n as u32;
        let fam = format!("I*{}", 2 * n);
        let merge = format!("I*{},1", 2 * n);
        kinds.push(FiberKind::new(&format!("I*a{},1", 2 * n), &merge, &fam, e, 1, Shape::IStarLineConicApart { n }));
        kinds.push(FiberKind::new(&format!("I*b{},1", 2 * n), &merge, &fam, e, 1, Shape::IStarLineConicTogether { n }));
        let name = format!("I*{},0", 2 * n);
        kinds.push(FiberKind::new(&name, &name, &fam, e, 0, Shape::IStarCusp { n }));
    }
    kinds.push(FiberKind::new("III*0", "III*0", "III*", 7, 0, Shape::IiiStarCusp));
    kinds.push(FiberKind::new("II*0", "II*0", "II*", 8, 0, Shape::IiStarCusp));
    kinds.push(FiberKind::new("III1", "III1", "III", 1, 1, Shape::IiiLineConic));
    kinds.push(FiberKind::new("III0", "III0", "III", 1, 0, Shape::IiiCusp));
    Menu { name: "refined".into(), line_degree: 3, kinds, caps: Vec::new(), order: RowOrder::ValencyThenCounts }
}

pub const TABLE3_FILTER: ValencyFilter = ValencyFilter { above: 16, at_most: 20 };
pub const TABLE4_FILTER: ValencyFilter = ValencyFilter { above: 13, at_most: 16 };

/// All count vectors with Euler sum exactly `budget` whose valency passes
/// the filter and which respect the menu's caps, sorted and numbered.
pub fn euler_tally_enumerate(menu: &Menu, budget: u32, filter: ValencyFilter) -> Vec<FiberTallyRow> {
    let mut rows = Vec::new();
    let mut counts = vec![0u32; menu.kinds.len()];
    search(menu, filter, 0, budget, 0, &mut counts, &mut rows);
    rows.retain(|r| within_caps(menu, r));
    match menu.order {
        RowOrder::Counts => rows.sort_by(|a, b| b.counts.cmp(&a.counts)),
        RowOrder::ValencyThenCounts => {
            rows.sort_by(|a, b| b.valency.cmp(&a.valency).then_with(|| b.counts.cmp(&a.counts)))
        }
    }
    number_cases(menu, &mut rows);
    rows
}

fn search(
    menu: &Menu,
    filter: ValencyFilter,
    idx: usize,
    remaining: u32,
    valency: u32,
    counts: &mut Vec<u32>,
    out: &mut Vec<FiberTallyRow>,
) {
    // Every kind has valency at most its Euler cost.
    if valency + remaining <= filter.above {
        return;
    }
    if idx == menu.kinds.len() {
        if remaining == 0 && valency <= filter.at_most {
            out.push(FiberTallyRow { case: String::new(), counts: counts.clone(), valency });
        }
        return;
    }
    let k = &menu.kinds[idx];
    let max = remaining / k.euler;
    for c in 0..=max {
        counts[idx] = c;
        search(menu, filter, idx + 1, remaining - c * k.euler, valency + c * k.valency, counts, out);
    }
    counts[idx] = 0;
}

fn within_caps(menu: &Menu, row: &FiberTallyRow) -> bool {
    menu.caps.iter().all(|(family, max)| {
        let total: u32 = row.counts.iter().zip(&menu.kinds).filter(|(_, k)| &k.family == family).map(|(c, _)| c).sum();
        total <= *max
    })
}

/// Rows equal after merging variant kinds share a case number and get
/// letter suffixes in row order.
fn number_cases(menu: &Menu, rows: &mut [FiberTallyRow]) {
    let merged = |r: &FiberTallyRow| {
        let mut m: BTreeMap<&str, u32> = BTreeMap::new();
        for (c, k) in r.counts.iter().zip(&menu.kinds) {
            *m.entry(k.merge.as_str()).or_default() += c;
        }
        m
    };
    let keys: Vec<_> = rows.iter().map(merged).collect();
    let mut case = 0;
    let mut i = 0;
    while i < rows.len() {
        let mut j = i + 1;
        while j < rows.len() && keys[j] == keys[i] {
            j += 1;
        }
        case += 1;
        if j - i == 1 {
            rows[i].case = case.to_string();
        } else {
            for (s, row) in rows[i..j].iter_mut().enumerate() {
                row.case = format!("{case}{}", (b'a' + s as u8) as char);
            }
        }
        i = j;
    }
}

/// Rows that satisfy the Euler identity and the filter but are removed by the
/// menu's caps.
pub fn capped_rows(menu: &Menu, budget: u32, filter: ValencyFilter) -> Vec<FiberTallyRow> {
    let mut uncapped = menu.clone();
    uncapped.caps.clear();
    let all = euler_tally_enumerate(&uncapped, budget, filter);
    all.into_iter()
        .filter(|r| !within_caps(menu, r))
        .map(|mut r| {
            r.case = String::new();
            r
        })
        .collect()
}
