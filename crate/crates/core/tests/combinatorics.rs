mod common;

use common::random_fe;
use k3lines::combinatorics::lattice::{integer_determinant, section_lattice, GramMatrix};
use k3lines::combinatorics::tally::capped_rows;
use k3lines::combinatorics::tally::Menu;
use k3lines::combinatorics::*;
use k3lines::finite_field::{Fe, Field};
use k3lines::fixtures::Fixture;
use k3lines::line_census::{all_lines, CensusMode};
use k3lines::line_invariants::valency_and_fibers;
use k3lines::linalg::nullspace;
use k3lines::projective::{form4_monomials, Form4, Plane3, QuarticSurface};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---------- exact rank ----------

fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
    let mul = |x: i64, y: i64| ((x as i128 * y as i128) % p as i128) as i64;
    let inv = |x: i64| {
        let (mut b, mut e, mut acc) = (x, p - 2, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let mut r = 0;
    for c in 0..m {
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(piv, r);
        let iv = inv(a[r][c]);
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = mul(a[i][c], iv);
                for j in c..m {
                    a[i][j] = (a[i][j] - mul(f, a[r][j])).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

const PRIMES: [i64; 3] = [1_000_000_007, 998_244_353, 2_147_483_647];

fn modular_rank(rows: &[Vec<i64>]) -> usize {
    PRIMES.iter().map(|&p| rank_mod_p(rows, p)).max().unwrap()
}

fn gram_from_graph(n: usize, edges: &[(usize, usize)]) -> GramMatrix {
    let mut e = vec![vec![0i64; n]; n];
    for (i, row) in e.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        e[a][b] = 1;
        e[b][a] = 1;
    }
    GramMatrix { labels: (0..n).map(|i| i.to_string()).collect(), entries: e, kl: 0 }
}

#[test]
fn dynkin_ranks() {
    assert_eq!(gram_rank(&gram_from_graph(3, &[(0, 1), (1, 2)])), 3);
    // Affine E8: chain of 8 with a branch at the third vertex.
    let mut edges: Vec<(usize, usize)> = (0..7).map(|i| (i, i + 1)).collect();
    edges.push((2, 8));
    assert_eq!(gram_rank(&gram_from_graph(9, &edges)), 8);
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=23, 1usize..=23, 0usize..=23, any::<u64>()).prop_map(|(n, m, r, seed)| {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = r.min(n).min(m);
        let b: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let c: Vec<Vec<i64>> = (0..r).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        (0..n).map(|i| (0..m).map(|j| (0..r).map(|k| b[i][k] * c[k][j]).sum()).collect()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bareiss_rank_matches_modular_ranks(m in matrix_strategy()) {
        prop_assert_eq!(integer_rank(&m), modular_rank(&m));
    }

    #[test]
    fn full_random_23x23_matches_modular_rank(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<Vec<i64>> = (0..23).map(|_| (0..23).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        prop_assert_eq!(integer_rank(&m), modular_rank(&m));
    }
}

// ---------- Euler tallies ----------

/// Expected rows: case, nonzero counts by kind name, valency.
type Golden = (&'static str, &'static [(&'static str, u32)], u32);

const TABLE3: [Golden; 14] = [
    ("1", &[("I*2,3", 1), ("iii'", 14)], 17),
    ("2", &[("I*0,3", 2), ("iii'", 12)], 18),
    ("3", &[("I*0,3", 2), ("iii'", 11), ("iii''", 1)], 17),
    ("4", &[("I*0,3", 1), ("I*0,2", 1), ("iii'", 12)], 17),
    ("5", &[("I*0,3", 1), ("iii'", 16)], 19),
    ("6", &[("I*0,3", 1), ("iii'", 15), ("iii''", 1)], 18),
    ("7", &[("I*0,3", 1), ("iii'", 14), ("iii''", 2)], 17),
    ("8", &[("I*0,2", 1), ("iii'", 16)], 18),
    ("9", &[("I*0,2", 1), ("iii'", 15), ("iii''", 1)], 17),
    ("10", &[("I*0,1", 1), ("iii'", 16)], 17),
    ("11", &[("iii'", 20)], 20),
    ("12", &[("iii'", 19), ("iii''", 1)], 19),
    ("13", &[("iii'", 18), ("iii''", 2)], 18),
    ("14", &[("iii'", 17), ("iii''", 3)], 17),
];

// Case 2 carries III0 = 0: the only value compatible with the Euler sum.
const TABLE4: [Golden; 16] = [
    ("1", &[("I*0,1", 1), ("III1", 15), ("III0", 1)], 16),
    ("2", &[("I*0,0", 1), ("III1", 16)], 16),
    ("3", &[("III1", 16), ("III0", 4)], 16),
    ("4a", &[("I*a2,1", 1), ("III1", 14)], 15),
    ("4b", &[("I*b2,1", 1), ("III1", 14)], 15),
    ("5", &[("I*0,1", 1), ("III1", 14), ("III0", 2)], 15),
    ("6", &[("I*0,0", 1), ("III1", 15), ("III0", 1)], 15),
    ("7", &[("III1", 15), ("III0", 5)], 15),
    ("8", &[("III*1", 1), ("III1", 13)], 14),
    ("9a", &[("I*a2,1", 1), ("III1", 13), ("III0", 1)], 14),
    ("9b", &[("I*b2,1", 1), ("III1", 13), ("III0", 1)], 14),
    ("10", &[("I*2,0", 1), ("III1", 14)], 14),
    ("11", &[("I*0,1", 2), ("III1", 12)], 14),
    ("12", &[("I*0,1", 1), ("III1", 13), ("III0", 3)], 14),
    ("13", &[("I*0,0", 1), ("III1", 14), ("III0", 2)], 14),
    ("14", &[("III1", 14), ("III0", 6)], 14),
];

const TABLE5: [(&str, &str); 7] =
    [("2", "D4"), ("3", "4A1"), ("4b", "D5"), ("5", "A3+2A1"), ("8", "E6"), ("9a", "A5+A1"), ("11", "2A3")];

fn assert_golden(menu: &Menu, rows: &[FiberTallyRow], golden: &[Golden]) {
    assert_eq!(rows.len(), golden.len());
    for (row, (case, fibers, v)) in rows.iter().zip(golden) {
        let expected: Vec<(String, u32)> = fibers.iter().map(|(n, c)| (n.to_string(), *c)).collect();
        assert_eq!(&row.case, case);
        assert_eq!(row.fibers(menu), expected, "case {case}");
        assert_eq!(row.valency, *v, "case {case}");
        assert_eq!(row.euler(menu), EULER_BUDGET);
    }
}

#[test]
fn degree_3_tally_reproduces_table_3() {
    let menu = degree3_menu();
    let rows = euler_tally_enumerate(&menu, EULER_BUDGET, TABLE3_FILTER);
    assert_golden(&menu, &rows, &TABLE3);
}

#[test]
fn the_cap_removes_exactly_one_row() {
    let menu = degree3_menu();
    let extra = capped_rows(&menu, EULER_BUDGET, TABLE3_FILTER);
    assert_eq!(extra.len(), 1);
    assert_eq!(extra[0].fibers(&menu), vec![("I*0,3".to_string(), 3), ("iii'".to_string(), 8)]);
    assert_eq!(extra[0].valency, 17);
    assert_eq!(row_ranks(&menu, &extra[0]).unwrap().min_rank(), 23);
}

#[test]
fn refined_tally_reproduces_table_4() {
    let menu = refined_menu();
    let rows = euler_tally_enumerate(&menu, EULER_BUDGET, TABLE4_FILTER);
    assert_golden(&menu, &rows, &TABLE4);
}

#[test]
fn rank_filter_reproduces_table_5() {
    let menu = refined_menu();
    let rows = euler_tally_enumerate(&menu, EULER_BUDGET, TABLE4_FILTER);
    let survivors = rank_filter(&menu, &rows).unwrap();
    let got: Vec<(&str, &str)> = survivors.iter().map(|r| (r.case.as_str(), r.singularities.as_str())).collect();
    assert_eq!(got, TABLE5);
    for r in &survivors {
        assert_eq!(r.surviving_kl(), vec![0], "case {}", r.case);
    }
}

#[test]
fn every_table_3_row_has_rank_23() {
    let menu = degree3_menu();
    for row in euler_tally_enumerate(&menu, EULER_BUDGET, TABLE3_FILTER) {
        let r = row_ranks(&menu, &row).unwrap();
        assert!(r.min_rank() >= 23, "case {}", row.case);
    }
}

/// Drops the second component of every III fiber so that the basis is
/// independent when the determinant is nonzero.
fn reduced_iii_basis(g: &GramMatrix) -> Vec<Vec<i64>> {
    let keep: Vec<usize> = (0..g.dim()).filter(|&i| !g.labels[i].ends_with(".c1")).collect();
    keep.iter().map(|&i| keep.iter().map(|&j| g.entries[i][j]).collect()).collect()
}

#[test]
fn determinants_of_pure_iii_rows_are_linear_in_kl() {
    // Schur complement against the block of fiber components, by hand:
    // 20 III fibers with u of them of cusp type give 2^20 (12κ + 16 - 4u).
    let cases: [(&Menu, &str, i64); 4] = [
        (&degree3_menu(), "11", 16),
        (&refined_menu(), "3", 0),
        (&refined_menu(), "7", -4),
        (&refined_menu(), "14", -8),
    ];
    for (menu, case, c) in cases {
        let filter = if menu.name == "refined" { TABLE4_FILTER } else { TABLE3_FILTER };
        let rows = euler_tally_enumerate(menu, EULER_BUDGET, filter);
        let row = rows.iter().find(|r| r.case == case).unwrap();
        for kl in 0..=2 {
            let g = &build_config_lattice(menu, row, &[kl]).unwrap()[0];
            let m = reduced_iii_basis(g);
            assert_eq!(m.len(), 23);
            let det = integer_determinant(&m);
            assert_eq!(det.magnitude(), (BigInt::from(12 * kl + c) << 20usize).magnitude(), "case {case} κ={kl}");
        }
    }
}

#[test]
fn section_configuration_has_rank_23_for_every_incidence() {
    for j in 0..=20 {
        let g = section_lattice(j);
        assert!(g.is_symmetric());
        assert_eq!(gram_rank(&g), 23, "j = {j}");
        // (-2)^20 from the fiber lines times the Schur complement 4.
        assert_eq!(integer_determinant(&g.entries), BigInt::from(1u64 << 22));
    }
}

#[test]
fn lattices_are_symmetric_with_expected_diagonal() {
    let menu = refined_menu();
    for row in euler_tally_enumerate(&menu, EULER_BUDGET, TABLE4_FILTER) {
        for g in build_config_lattice(&menu, &row, &[0, 1, 2]).unwrap() {
            assert!(g.is_symmetric());
            assert_eq!(g.entries[0][0], 0);
            assert!((1..g.dim()).all(|i| g.entries[i][i] == -2));
        }
    }
}

#[test]
fn inconsistent_rows_are_rejected() {
    let menu = refined_menu();
    let mut row = euler_tally_enumerate(&menu, EULER_BUDGET, TABLE4_FILTER).remove(0);
    row.counts[menu.kinds.len() - 1] += 1;
    assert!(matches!(build_config_lattice(&menu, &row, &[0]), Err(LatticeError::EulerMismatch { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tally_rows_obey_the_euler_identity(above in 0u32..20, width in 0u32..6) {
        let filter = ValencyFilter { above, at_most: above + width };
        for menu in [degree3_menu(), refined_menu()] {
            let rows = euler_tally_enumerate(&menu, EULER_BUDGET, filter);
            for r in &rows {
                prop_assert_eq!(r.euler(&menu), EULER_BUDGET);
                let v: u32 = r.counts.iter().zip(&menu.kinds).map(|(c, k)| c * k.valency).sum();
                prop_assert_eq!(v, r.valency);
                prop_assert!(v > filter.above && v <= filter.at_most);
            }
            let mut cases: Vec<_> = rows.iter().map(|r| r.case.clone()).collect();
            cases.dedup();
            prop_assert_eq!(cases.len(), rows.len());
        }
    }
}

// ---------- plane configurations ----------

/// Points and lines of the plane x0 = 0 in coordinates (x1, x2, x3).
fn p3(y: [Fe; 3]) -> [Fe; 4] {
    [y[0].field().zero(), y[0], y[1], y[2]]
}

fn linear(l: [Fe; 3]) -> Form4 {
    Form4::linear(p3(l))
}

fn eval3(l: [Fe; 3], y: [Fe; 3]) -> Fe {
    l[0] * y[0] + l[1] * y[1] + l[2] * y[2]
}

/// x0 G + Π l_i^{m_i}, where G is a cubic through `singular` and off
/// `smooth`; on x0 = 0 the surface is singular exactly where the product is
/// singular and G vanishes.
fn lines_product(lines: &[([Fe; 3], usize)]) -> Form4 {
    let mut prod: Option<Form4> = None;
    for &(l, m) in lines {
        for _ in 0..m {
            prod = Some(match prod {
                None => linear(l),
                Some(q) => q.mul(&linear(l)),
            });
        }
    }
    prod.unwrap()
}

/// x0 G + P where P(x1, x2, x3) is the plane section and G is a random cubic
/// through the points meant to be singular and off the points meant to be smooth.
fn surface_with_section(f: Field, p: &Form4, singular: &[[Fe; 3]], smooth: &[[Fe; 3]], seed: u64) -> QuarticSurface {
    let monos: Vec<[usize; 4]> = form4_monomials(3).filter(|e| e[0] == 0).collect();
    let rows: Vec<Vec<Fe>> = singular
        .iter()
        .map(|y| monos.iter().map(|e| y[0].pow(e[1] as u64) * y[1].pow(e[2] as u64) * y[2].pow(e[3] as u64)).collect())
        .collect();
    let null = nullspace(&rows, monos.len(), f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let weights: Vec<Fe> = null.iter().map(|_| random_fe(&mut rng, f)).collect();
        let coeffs: Vec<Fe> = (0..monos.len())
            .map(|i| null.iter().zip(&weights).fold(f.zero(), |acc, (v, &w)| acc + v[i] * w))
            .collect();
        let mut g = Form4::zero(f, 3);
        for (e, c) in monos.iter().zip(&coeffs) {
            g.set(*e, *c);
        }
        // A pure x0 term keeps G from vanishing identically.
        g.set([3, 0, 0, 0], f.one());
        if smooth.iter().any(|&y| g.eval(p3(y)).is_zero()) {
            continue;
        }
        let x0 = Form4::linear([f.one(), f.zero(), f.zero(), f.zero()]);
        let form = x0.mul(&g).add(p);
        let terms: Vec<([usize; 4], Fe)> = form.terms().collect();
        let x = QuarticSurface::from_terms(f, &terms).unwrap();
        return x;
    }
    panic!("no cubic through the singular points avoids the smooth ones");
}

fn x0_plane(f: Field) -> Plane3 {
    Plane3::new([f.one(), f.zero(), f.zero(), f.zero()]).unwrap()
}

fn meet(a: [Fe; 3], b: [Fe; 3]) -> [Fe; 3] {
    [a[1] * b[2] + a[2] * b[1], a[2] * b[0] + a[0] * b[2], a[0] * b[1] + a[1] * b[0]]
}

fn classify(f: Field, lines: &[([Fe; 3], usize)], singular: &[[Fe; 3]], smooth: &[[Fe; 3]]) -> ConfigLabel {
    let x = surface_with_section(f, &lines_product(lines), singular, smooth, 1);
    classify_plane_config(&x, &x0_plane(f), f).unwrap()
}

/// General four-line labels from the shape of the graph of singular
/// intersection points: (edges, sorted degrees) -> index.
fn general_oracle(edges: usize, mut degrees: [usize; 4]) -> u8 {
    degrees.sort();
    match (edges, degrees) {
        (0, _) => 0,
        (1, _) => 1,
        (2, [0, 1, 1, 2]) => 2,
        (2, [1, 1, 1, 1]) => 5,
        (3, [1, 1, 1, 3]) => 3,
        (3, [0, 2, 2, 2]) => 4,
        (3, [1, 1, 2, 2]) => 6,
        (4, [1, 2, 2, 3]) => 7,
        (4, [2, 2, 2, 2]) => 8,
        (5, _) => 9,
        (6, _) => 10,
        _ => unreachable!(),
    }
}

fn field() -> Field {
    Field::new(4).unwrap()
}

#[test]
fn four_general_lines_follow_the_singular_graph() {
    let f = field();
    let (o, z) = (f.one(), f.zero());
    let lines = [[o, z, z], [z, o, z], [z, z, o], [o, o, o]];
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    for mask in 0u32..64 {
        let chosen: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        let mut deg = [0usize; 4];
        for &(a, b) in &chosen {
            deg[a] += 1;
            deg[b] += 1;
        }
        let sing: Vec<[Fe; 3]> = chosen.iter().map(|&(a, b)| meet(lines[a], lines[b])).collect();
        let smooth: Vec<[Fe; 3]> =
            pairs.iter().filter(|p| !chosen.contains(p)).map(|&(a, b)| meet(lines[a], lines[b])).collect();
        let got = classify(f, &lines.map(|l| (l, 1)), &sing, &smooth);
        assert_eq!(got, ConfigLabel::A(general_oracle(chosen.len(), deg)), "mask {mask:06b}");
    }
}

#[test]
fn three_concurrent_lines() {
    let f = field();
    let (o, z) = (f.one(), f.zero());
    let lines = [[z, o, z], [z, z, o], [z, o, o], [o, z, z]];
    let q = [o, z, z];
    let feet: Vec<[Fe; 3]> = (0..3).map(|i| meet(lines[i], lines[3])).collect();
    for mask in 0u32..16 {
        let mut sing = Vec::new();
        let mut smooth = Vec::new();
        for (i, &p) in std::iter::once(&q).chain(&feet).enumerate() {
            if mask >> i & 1 == 1 {
                sing.push(p);
            } else {
                smooth.push(p);
            }
        }
        let c = (mask >> 1).count_ones() as u8;
        let expected = if mask & 1 == 1 { 4 + c } else { c };
        assert_eq!(classify(f, &lines.map(|l| (l, 1)), &sing, &smooth), ConfigLabel::B(expected), "mask {mask:04b}");
    }
}

#[test]
fn four_concurrent_lines() {
    let f = field();
    let (o, z, g) = (f.one(), f.zero(), f.generator());
    let lines = [[z, o, z], [z, z, o], [z, o, o], [z, o, g]].map(|l| (l, 1));
    let q = [o, z, z];
    assert_eq!(classify(f, &lines, &[], &[q]), ConfigLabel::C(0));
    assert_eq!(classify(f, &lines, &[q], &[]), ConfigLabel::C(1));
}

#[test]
fn double_line_configurations() {
    let f = field();
    let (o, z) = (f.one(), f.zero());
    let (d, a, b) = ([o, z, z], [z, o, z], [z, z, o]);
    let pts = [meet(a, d), meet(b, d), meet(a, b)];
    let expect = |s_ad: bool, s_bd: bool, s_ab: bool| match ((s_ad as u8 + s_bd as u8), s_ab) {
        (0, false) => ConfigLabel::D(0),
        (1, false) => ConfigLabel::D(1),
        (2, false) => ConfigLabel::D(2),
        (1, true) => ConfigLabel::D(3),
        (2, true) => ConfigLabel::D(4),
        _ => ConfigLabel::Unlisted,
    };
    for mask in 0u32..8 {
        let flags = [mask & 1 == 1, mask & 2 == 2, mask & 4 == 4];
        let sing: Vec<[Fe; 3]> = (0..3).filter(|&i| flags[i]).map(|i| pts[i]).collect();
        let smooth: Vec<[Fe; 3]> = (0..3).filter(|&i| !flags[i]).map(|i| pts[i]).collect();
        let got = classify(f, &[(d, 2), (a, 1), (b, 1)], &sing, &smooth);
        assert_eq!(got, expect(flags[0], flags[1], flags[2]), "mask {mask:03b}");
    }
    // a and b meet on the double line.
    let c = [z, o, o];
    let q = meet(a, b);
    assert_eq!(classify(f, &[(c, 2), (a, 1), (b, 1)], &[], &[q]), ConfigLabel::E(0));
    assert_eq!(classify(f, &[(c, 2), (a, 1), (b, 1)], &[q], &[]), ConfigLabel::E(1));
    // Three singular points on the double line, one of them a ∩ D.
    let extra = [z, o, f.generator()];
    assert_eq!(eval3(d, extra), z);
    assert_eq!(classify(f, &[(d, 2), (a, 1), (b, 1)], &[pts[0], extra], &[pts[1], pts[2]]), ConfigLabel::D(1));
}

#[test]
fn multiple_line_configurations() {
    let f = field();
    let (o, z) = (f.one(), f.zero());
    let (a, b) = ([o, z, z], [z, o, z]);
    let p = meet(a, b);
    assert_eq!(classify(f, &[(a, 2), (b, 2)], &[], &[p]), ConfigLabel::F(1));
    assert_eq!(classify(f, &[(a, 2), (b, 2)], &[p], &[]), ConfigLabel::F(2));
    assert_eq!(classify(f, &[(a, 3), (b, 1)], &[], &[p]), ConfigLabel::G(0));
    assert_eq!(classify(f, &[(a, 3), (b, 1)], &[p], &[]), ConfigLabel::G(1));
    assert_eq!(classify(f, &[(a, 4)], &[], &[]), ConfigLabel::H);
}

/// Surface whose x0 = 0 section is l · m · (y0 y2 + y1^2).
fn conic_surface(f: Field, l: [Fe; 3], m: [Fe; 3], singular: &[[Fe; 3]], smooth: &[[Fe; 3]]) -> ConfigLabel {
    let mut conic = Form4::zero(f, 2);
    conic.set([0, 1, 0, 1], f.one());
    conic.set([0, 0, 2, 0], f.one());
    let section = lines_product(&[(l, 1), (m, 1)]).mul(&conic);
    let x = surface_with_section(f, &section, singular, smooth, 2);
    classify_plane_config(&x, &x0_plane(f), f).unwrap()
}

#[test]
fn conic_configurations() {
    let f = field();
    let (o, z) = (f.one(), f.zero());
    // Points (1, t, t^2) and (0, 0, 1) on the conic; the tangent at (1, t, t^2)
    // is t^2 y0 + y2 and at (0, 0, 1) it is y0.
    let (s, t, inf) = ([o, z, z], [o, o, o], [z, z, o]);
    let l = [z, o, o];
    // R1: l meets the conic at S (singular) and T; m touches the conic off l.
    let m = [o, z, z];
    assert_eq!(conic_surface(f, l, m, &[s], &[t, inf, meet(l, m)]), ConfigLabel::R(1));
    // R2: m touches the conic at T on l.
    let m2 = [o, z, o];
    assert_eq!(conic_surface(f, l, m2, &[s], &[t]), ConfigLabel::R(2));
    // R3: l touches the conic at the singular point S.
    let l3 = [z, z, o];
    assert_eq!(conic_surface(f, l3, m, &[s], &[inf, meet(l3, m)]), ConfigLabel::R(3));
    // Both intersection points smooth: not in the list.
    assert_eq!(conic_surface(f, l, m, &[], &[s, t, inf, meet(l, m)]), ConfigLabel::Unlisted);
}

// ---------- line graph of the family ----------

fn family_x_graph() -> (QuarticSurface, LineGraph, Field) {
    let f = Field::new(6).unwrap();
    let fx = Fixture::FamilyX { lambda: 1 };
    let x = fx.surface(f);
    let set = all_lines(&x, f, CensusMode::Closure, &[fx.line(f)]).unwrap();
    let g = build_line_graph(&x, &set);
    (x, g, f)
}

fn in_x0(g: &LineGraph, i: usize) -> bool {
    g.lines[i].equations().iter().any(|e| e[1].is_zero() && e[2].is_zero() && e[3].is_zero())
}

#[test]
fn family_x_graph_degrees() {
    let (x, g, f) = family_x_graph();
    assert_eq!(g.len(), 68);
    for i in 0..g.len() {
        let expected = if in_x0(&g, i) { 16 } else { 19 };
        assert_eq!(g.valency[i], expected);
        assert_eq!(g.valency[i], valency_and_fibers(&x, &g.lines[i], f).unwrap().valency);
    }
    assert_eq!((0..g.len()).filter(|&i| in_x0(&g, i)).count(), 4);
}

/// Triangle and 4-cycle counts from traces of powers of the adjacency matrix:
/// tr A^3 = 6 C3 and tr A^4 = 8 C4 + 4 Σ C(d, 2) + 2 m.
fn cycle_counts_by_trace(g: &LineGraph) -> (usize, usize) {
    let n = g.len();
    let a: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(g.adjacent(i, j))).collect()).collect();
    let mul = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| -> Vec<Vec<u64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    };
    let a2 = mul(&a, &a);
    let a3 = mul(&a2, &a);
    let a4 = mul(&a2, &a2);
    let tr3: u64 = (0..n).map(|i| a3[i][i]).sum();
    let tr4: u64 = (0..n).map(|i| a4[i][i]).sum();
    let deg: Vec<u64> = (0..n).map(|i| a2[i][i]).collect();
    let edges: u64 = deg.iter().sum::<u64>() / 2;
    let pairs: u64 = deg.iter().map(|d| d * d.saturating_sub(1) / 2).sum();
    ((tr3 / 6) as usize, ((tr4 - 4 * pairs - 2 * edges) / 8) as usize)
}

#[test]
fn family_x_cycles() {
    let (_, g, _) = family_x_graph();
    let cusp: Vec<usize> = (0..g.len()).filter(|&i| in_x0(&g, i)).collect();
    // The four concurrent lines meet only at the singular point.
    for &a in &cusp {
        for &b in &cusp {
            assert!(!g.adjacent(a, b));
        }
    }
    assert!(!find_cycles(&g, 3).is_empty());
    let squares = find_cycles(&g, 4);
    // No square holds two of them; every other line meets exactly one.
    let on_cusp = |c: &Vec<usize>| c.iter().filter(|i| cusp.contains(i)).count();
    assert_eq!(squares.iter().filter(|c| on_cusp(c) == 1).count(), 2880);
    assert!(squares.iter().all(|c| on_cusp(c) <= 1));
    for i in (0..g.len()).filter(|i| !cusp.contains(i)) {
        assert_eq!(cusp.iter().filter(|&&c| g.adjacent(i, c)).count(), 1);
    }
    let (tri, sq) = cycle_counts_by_trace(&g);
    assert_eq!((find_cycles(&g, 3).len(), squares.len()), (tri, sq));
    assert_eq!((tri, sq), (384, 13968));
    for c in &squares {
        for i in 0..4 {
            assert!(g.adjacent(c[i], c[(i + 1) % 4]));
        }
    }
}

#[test]
fn family_x_plane_x0_is_c1() {
    let (x, _, f) = family_x_graph();
    assert_eq!(classify_plane_config(&x, &x0_plane(f), f).unwrap(), ConfigLabel::C(1));
}
