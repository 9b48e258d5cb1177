//! The verification suite: every headline computation as a named check with
//! its expected value, what was computed and how long it took.

use std::collections::BTreeSet;
use std::rc::Rc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{
    bound_calculators, build_line_graph, classify_plane_config, degree3_menu, euler_tally_enumerate, rank_filter,
    refined_menu, row_ranks, ConfigLabel, Menu, EULER_BUDGET, TABLE3_FILTER, TABLE4_FILTER,
};
use crate::finite_field::{roots, Fe, Field, MAX_DEGREE};
use crate::fixtures::{family_x, Fixture};
use crate::line_census::{all_lines, contains_line, lines_meeting_std, stabilization_sweep, CensusMode, LineSet, StandardizedLine};
use crate::line_invariants::{
    alpha_beta, cuspidal_poly_phi, full_report, is_cuspidal, resultant_line, Fibration, LineKind, LineReport,
};
use crate::normalize::cmd_normalize_c1;
use crate::polynomial::Poly;
use crate::projective::{form4_monomials, transform_surface, Line3, Plane3, Point3, ProjTransform, QuarticSurface};
use crate::singularities::{ade_type, global_singular_search, singular_points_on_lines, AdeLabel};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Printed in the literature.
    Published,
    /// Computed independently and frozen.
    Derived,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: String,
    pub source: Source,
    pub computed: String,
    pub pass: bool,
    pub seconds: f64,
    /// CLI invocation reproducing the computation.
    pub reproduce: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOptions {
    /// λ as a bitmask in GF(2^lambda_degree).
    pub lambda: u32,
    pub lambda_degree: u32,
    /// Largest field degree any check may use.
    pub max_degree: u32,
    pub random_surfaces: usize,
    pub scrambles: usize,
    pub seed: u64,
    /// Criteria to run; empty means all.
    pub criteria: Vec<u8>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            lambda: 1,
            lambda_degree: 1,
            max_degree: MAX_DEGREE,
            random_surfaces: 200,
            scrambles: 50,
            seed: 1,
            criteria: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub options: VerifyOptions,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// (criterion, all of its checks pass, total seconds), in order.
    pub fn criteria(&self) -> Vec<(u8, bool, f64)> {
        let ids: BTreeSet<u8> = self.checks.iter().map(|c| c.criterion).collect();
        ids.into_iter()
            .map(|id| {
                let cs = self.checks.iter().filter(|c| c.criterion == id);
                let (pass, secs) = cs.fold((true, 0.0), |(p, s), c| (p && c.pass, s + c.seconds));
                (id, pass, secs)
            })
            .collect()
    }

    /// The report with all timings zeroed, for comparing runs.
    pub fn without_timing(&self) -> VerificationReport {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.seconds = 0.0;
        }
        r
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("λ = 0 gives a degenerate member of family X")]
    DegenerateLambda,
    #[error("λ = {0} is not an element of GF(2^{1})")]
    BadLambda(u32, u32),
    #[error("field degree cap {0} is outside 1..={MAX_DEGREE}")]
    BadCap(u32),
}

/// A census with the report of every line.
struct Census {
    field: Field,
    surface: QuarticSurface,
    lines: LineSet,
    reports: Vec<LineReport>,
}

impl Census {
    fn new(surface: QuarticSurface, lines: LineSet) -> Result<Census, String> {
        let field = lines.field;
        let surface = surface.embed(field).map_err(|e| e.to_string())?;
        let reports = lines
            .lines
            .iter()
            .map(|l| full_report(&surface, l, field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Census { field, surface, lines, reports })
    }
}

/// One separable pencil map seen in the random suite.
struct RandomLine {
    degree: usize,
    ramification: Vec<(usize, usize)>,
    symbol: String,
}

struct Suite {
    opts: VerifyOptions,
    lambda: Fe,
    checks: Vec<Check>,
    family: Option<Result<Rc<Census>, String>>,
    ex20: Option<Result<Rc<Census>, String>>,
    random: Vec<RandomLine>,
}

type Outcome = Result<(String, bool), String>;

fn too_small(need: u32, cap: u32) -> String {
    format!("FieldTooSmall: needs GF(2^{need}), cap is {cap}")
}

impl Suite {
    fn wants(&self, c: u8) -> bool {
        self.opts.criteria.is_empty() || self.opts.criteria.contains(&c)
    }

    fn check(
        &mut self,
        criterion: u8,
        name: &str,
        expected: impl Into<String>,
        source: Source,
        reproduce: &str,
        f: impl FnOnce(&mut Suite) -> Outcome,
    ) {
        let start = Instant::now();
        let (computed, pass) = match f(self) {
            Ok(r) => r,
            Err(e) => (format!("error: {e}"), false),
        };
        self.checks.push(Check {
            criterion,
            name: name.into(),
            expected: expected.into(),
            source,
            computed,
            pass,
            seconds: start.elapsed().as_secs_f64(),
            reproduce: reproduce.into(),
        });
    }

    fn field(&self, k: u32) -> Result<Field, String> {
        if k > self.opts.max_degree {
            return Err(too_small(k, self.opts.max_degree));
        }
        Field::new(k).map_err(|e| e.to_string())
    }

    fn family_surface(&self) -> QuarticSurface {
        family_x(self.lambda.field(), self.lambda)
    }

    /// Closure census of X from the seed line, at the degree where the
    /// stabilization sweep settles.
    fn family(&mut self) -> Result<Rc<Census>, String> {
        if self.family.is_none() {
            let r = (|| {
                let x = self.family_surface();
                let m = self.opts.lambda_degree;
                let cap = self.opts.max_degree.min(12);
                let degrees: Vec<u32> = (1..=cap).filter(|k| k % m == 0).collect();
                let seed = Fixture::FamilyX { lambda: 0 }.line(x.field());
                let sweep = stabilization_sweep(&x, &[seed], &degrees).map_err(|e| e.to_string())?;
                if !sweep.is_stable() {
                    return Err(format!("line count not stable: {:?}", sweep.counts));
                }
                let f = Field::new(sweep.minimal_degree.unwrap()).map_err(|e| e.to_string())?;
                let xs = x.embed(f).map_err(|e| e.to_string())?;
                let seed = seed.embed(&crate::finite_field::Embedding::new(x.field(), f).map_err(|e| e.to_string())?);
                let set = all_lines(&xs, f, CensusMode::Closure, &[seed]).map_err(|e| e.to_string())?;
                Census::new(xs, set).map(Rc::new)
            })();
            self.family = Some(r);
        }
        self.family.clone().unwrap()
    }

    fn ex20(&mut self) -> Result<Rc<Census>, String> {
        if self.ex20.is_none() {
            let r = (|| {
                let f = self.field(18)?;
                let fx = Fixture::Ex20;
                let x = fx.surface(f);
                let set = all_lines(&x, f, CensusMode::Closure, &[fx.line(f)]).map_err(|e| e.to_string())?;
                Census::new(x, set).map(Rc::new)
            })();
            self.ex20 = Some(r);
        }
        self.ex20.clone().unwrap()
    }
}

fn in_x0(l: &Line3) -> bool {
    l.rows().iter().all(|r| r[0].is_zero())
}

fn criterion_1(s: &mut Suite) {
    let rep = "k3lines lines --fixture familyX --sweep";
    s.check(1, "family X line count", "68", Source::Published, rep, |s| {
        let c = s.family()?;
        Ok((format!("{} over GF(2^{})", c.lines.len(), c.field.k()), c.lines.len() == 68))
    });
    s.check(1, "lines in x0 = 0 are cuspidal", "4 lines, 4 cuspidal", Source::Published, "k3lines line-report --fixture familyX --all", |s| {
        let c = s.family()?;
        let inside: Vec<&LineReport> = c.lines.lines.iter().zip(&c.reports).filter(|(l, _)| in_x0(l)).map(|(_, r)| r).collect();
        let cusp = inside.iter().filter(|r| r.cuspidal).count();
        Ok((format!("{} lines, {cusp} cuspidal", inside.len()), inside.len() == 4 && cusp == 4))
    });
    s.check(
        1,
        "remaining lines are special of valency 19",
        "64 lines with v = 19, d = 3, second kind, 3_2^2",
        Source::Published,
        "k3lines line-report --fixture familyX --all",
        |s| {
            let c = s.family()?;
            let others: Vec<&LineReport> = c.lines.lines.iter().zip(&c.reports).filter(|(l, _)| !in_x0(l)).map(|(_, r)| r).collect();
            let good = others
                .iter()
                .filter(|r| r.valency == 19 && r.degree == 3 && r.kind == LineKind::Second && r.ramification_symbol == "3_2^2" && r.special)
                .count();
            Ok((format!("{} lines, {good} of that kind", others.len()), others.len() == 64 && good == 64))
        },
    );
}

fn criterion_2(s: &mut Suite) {
    s.check(2, "singular points of X over GF(2^6)", "[0:0:0:1]", Source::Published, "k3lines singular --fixture familyX --field 6", |s| {
        let f = s.field(6)?;
        let x = s.family_surface().embed(f.compositum(&s.lambda.field()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let pts = global_singular_search(&x, x.field()).map_err(|e| e.to_string())?;
        let shown: Vec<[u32; 4]> = pts.iter().map(|p| p.bits()).collect();
        Ok((format!("{shown:?}"), shown == [[0, 0, 0, 1]]))
    });
    s.check(2, "type of [0:0:0:1] on X", "A3", Source::Published, "k3lines singular --fixture familyX --field 6", |s| {
        let x = s.family_surface();
        let p = Point3::from_bits(x.field(), [0, 0, 0, 1]).map_err(|e| e.to_string())?;
        let t = ade_type(&x, &p).map_err(|e| e.to_string())?;
        Ok((t.label.to_string(), t.label == AdeLabel::A(3)))
    });
    s.check(2, "configuration of the plane x0 = 0 on X", "C1", Source::Published, "k3lines config --fixture familyX --plane 1,0,0,0 --field 6", |s| {
        let f = s.field(6)?;
        let x = s.family_surface();
        let f = f.compositum(&x.field()).map_err(|e| e.to_string())?;
        let plane = Plane3::new([f.one(), f.zero(), f.zero(), f.zero()]).map_err(|e| e.to_string())?;
        let label = classify_plane_config(&x, &plane, f).map_err(|e| e.to_string())?;
        Ok((label.to_string(), label == ConfigLabel::C(1)))
    });
}

/// Lines of the form x1 = s^4 x0, x0 = a x2 + b x3 with a = s / (s^4 + s + 1)
/// and b = 1 / s^2, over the roots s of the degree-15 polynomial, and x0 = x3 = 0.
fn ex16_formula_lines(f: Field) -> Result<Vec<Line3>, String> {
    let p = Poly::from_bits(f, &[1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1]);
    let (o, z) = (f.one(), f.zero());
    let mut out = vec![Line3::from_equations([o, z, z, z], [z, z, z, o]).map_err(|e| e.to_string())?];
    for (s, _) in roots(&p, f).map_err(|e| e.to_string())? {
        let a = s * (s.pow(4) + s + o).inv();
        let b = s.square().inv();
        out.push(Line3::from_equations([s.pow(4), o, z, z], [o, z, a, b]).map_err(|e| e.to_string())?);
    }
    out.sort();
    Ok(out)
}

fn criterion_3(s: &mut Suite) {
    let rep = "k3lines line-report --fixture EX16 --field 15";
    s.check(3, "invariants of x0 = x1 = 0 on the 16-line example", "d = 3, quasi-elliptic, v = 16", Source::Published, rep, |s| {
        let f = s.field(15)?;
        let fx = Fixture::Ex16;
        let r = full_report(&fx.surface(f), &fx.line(f), f).map_err(|e| e.to_string())?;
        let ok = r.degree == 3 && r.fibration == Fibration::QuasiElliptic && r.valency == 16;
        Ok((format!("d = {}, {:?}, v = {}", r.degree, r.fibration, r.valency), ok))
    });
    s.check(3, "lines meeting x0 = x1 = 0 match the printed formulas", "16 lines, equal sets", Source::Published, rep, |s| {
        let f = s.field(15)?;
        let fx = Fixture::Ex16;
        let x = fx.surface(f);
        let sl = StandardizedLine::new(&x, &fx.line(f), f).map_err(|e| e.to_string())?;
        let mut meeting: Vec<Line3> = lines_meeting_std(&x, &sl).map_err(|e| e.to_string())?.into_iter().map(|m| m.line).collect();
        meeting.sort();
        let formulas = ex16_formula_lines(f)?;
        let on_x = formulas.iter().all(|l| contains_line(&x, l));
        Ok((format!("{} meeting, {} from formulas, equal: {}", meeting.len(), formulas.len(), meeting == formulas), on_x && meeting == formulas && meeting.len() == 16))
    });
}

fn criterion_4(s: &mut Suite) {
    let rep = "k3lines line-report --fixture EX20 --field 18";
    s.check(4, "x0 = x1 = 0 on the 20-line example is cuspidal", "φ ≡ 0, cuspidal, v = 19", Source::Published, rep, |s| {
        let c = s.ex20()?;
        let fx = Fixture::Ex20;
        let line = fx.line(c.field);
        let phi = cuspidal_poly_phi(&c.surface).map_err(|e| e.to_string())?;
        let cusp = is_cuspidal(&c.surface, &line).map_err(|e| e.to_string())?;
        let i = c.lines.lines.iter().position(|l| *l == line).ok_or("line missing from census")?;
        let v = c.reports[i].valency;
        Ok((format!("φ ≡ 0: {}, cuspidal: {cusp}, v = {v}", phi.is_zero()), phi.is_zero() && cusp && v == 19))
    });
    s.check(4, "line count of the 20-line example", "20", Source::Published, "k3lines lines --fixture EX20 --field 18 --mode closure", |s| {
        let c = s.ex20()?;
        Ok((c.lines.len().to_string(), c.lines.len() == 20))
    });
    s.check(4, "singular point of the 20-line example", "A2 at [0:0:0:1]", Source::Published, "k3lines singular --fixture EX20 --field 18 --on-lines", |s| {
        let c = s.ex20()?;
        let pts = singular_points_on_lines(&c.surface, &c.lines.lines, c.field).map_err(|e| e.to_string())?;
        let mut shown = Vec::new();
        for p in &pts {
            let t = ade_type(&c.surface, p).map_err(|e| e.to_string())?;
            shown.push(format!("{} at {:?}", t.label, p.bits()));
        }
        Ok((shown.join(", "), shown == ["A2 at [0, 0, 0, 1]"]))
    });
}

fn criterion_5(s: &mut Suite) {
    let rep = "k3lines line-report --fixture EX12 --field 10";
    s.check(5, "invariants of x0 = x1 = 0 on the 12-valency example", "separable, quasi-elliptic, d = 2, not cuspidal, v = 12", Source::Published, rep, |s| {
        let f = s.field(10)?;
        let fx = Fixture::Ex12;
        let r = full_report(&fx.surface(f), &fx.line(f), f).map_err(|e| e.to_string())?;
        let ok = r.separable && r.fibration == Fibration::QuasiElliptic && r.degree == 2 && !r.cuspidal && r.valency == 12;
        Ok((format!("separable: {}, {:?}, d = {}, cuspidal: {}, v = {}", r.separable, r.fibration, r.degree, r.cuspidal, r.valency), ok))
    });
    s.check(5, "planes of the lines meeting x0 = x1 = 0", "2 in x1 = x0, 10 in x0 = t x1 with t^10 + t^8 + t^5 + t^4 + 1 = 0", Source::Published, rep, |s| {
        let f = s.field(10)?;
        let fx = Fixture::Ex12;
        let x = fx.surface(f);
        let sl = StandardizedLine::new(&x, &fx.line(f), f).map_err(|e| e.to_string())?;
        let mut meeting = lines_meeting_std(&x, &sl).map_err(|e| e.to_string())?;
        meeting.retain(|m| m.smooth);
        // Plane [u:v] is v x0 = u x1, so x0 = (u / v) x1.
        let param = |m: &crate::line_census::MeetingLine| (!m.plane.v.is_zero()).then(|| m.plane.u * m.plane.v.inv());
        let diagonal = meeting.iter().filter(|m| param(m) == Some(f.one())).count();
        let others: Vec<Fe> = meeting.iter().filter_map(param).filter(|t| !t.is_one()).collect();
        let found: BTreeSet<u32> = others.iter().map(|t| t.bits()).collect();
        let inverted: BTreeSet<u32> = others.iter().map(|t| t.inv().bits()).collect();
        let p = Poly::from_bits(f, &[1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1]);
        let expected: BTreeSet<u32> = roots(&p, f).map_err(|e| e.to_string())?.iter().map(|r| r.0.bits()).collect();
        let ok = diagonal == 2 && others.len() == 10 && found == expected && expected.len() == 10;
        let computed = format!(
            "{diagonal} in x1 = x0, {} in {} other planes; x0 = t x1 with t a root: {}; x1 = t x0 with t a root: {}",
            others.len(),
            found.len(),
            found == expected,
            inverted == expected
        );
        Ok((computed, ok))
    });
}

fn random_surface(rng: &mut ChaCha8Rng, f: Field) -> Option<QuarticSurface> {
    let density = [0.3, 0.6, 1.0][rng.gen_range(0..3)];
    let mut terms = Vec::new();
    for e in form4_monomials(4).filter(|e| e[0] + e[1] > 0) {
        if rng.gen_bool(density) {
            terms.push((e, f.elem(rng.gen_range(0..f.order()) as u32)));
        }
    }
    QuarticSurface::from_terms(f, &terms).ok()
}

/// Violations of the resultant law on one surface containing x0 = x1 = 0.
fn resultant_violations(x: &QuarticSurface, f: Field, kinds: &mut [usize; 2]) -> Result<Option<(usize, Vec<String>)>, String> {
    let Ok(pm) = alpha_beta(x) else { return Ok(None) };
    if pm.degree == 0 {
        return Ok(None);
    }
    let d = pm.degree;
    let mut bad = Vec::new();
    let r = resultant_line(x).map_err(|e| e.to_string())?;
    if r.is_zero() {
        kinds[1] += 1;
        return Ok(Some((d, bad)));
    }
    kinds[0] += 1;
    if r.degree() != 3 + 5 * d {
        bad.push(format!("deg R = {} for d = {d}", r.degree()));
    }
    let o = f.one();
    let z = f.zero();
    let line = Line3::from_equations([o, z, z, z], [z, o, z, z]).map_err(|e| e.to_string())?;
    let sl = StandardizedLine::new(x, &line, f).map_err(|e| e.to_string())?;
    let meeting = lines_meeting_std(x, &sl).map_err(|e| e.to_string())?;
    let smooth: Vec<&crate::line_census::MeetingLine> = meeting.iter().filter(|m| m.smooth).collect();
    if smooth.len() > 3 + 5 * d {
        bad.push(format!("v = {} > 3 + 5d", smooth.len()));
    }
    let back = sl.transform.inverse();
    let orders = r.root_orders(f).map_err(|e| e.to_string())?;
    for m in &smooth {
        let p = back.apply_point(&m.point).coords();
        let (u, v) = (p[2], p[3]);
        let order = orders.iter().find(|(q, _)| q.u * v == q.v * u).map_or(0, |o| o.1);
        let through = smooth.iter().filter(|n| n.point == m.point).count();
        if order == 0 || (through >= 2 && order < 2) {
            bad.push(format!("meeting point {:?} has root order {order} with {through} lines", m.point.bits()));
        }
    }
    Ok(Some((d, bad)))
}

fn criterion_6(s: &mut Suite) {
    let n = s.opts.random_surfaces;
    let expected = format!("{n} surfaces, no violations");
    s.check(6, "resultant law on random surfaces", expected, Source::Published, "k3lines verify-paper --criteria 6", |s| {
        let f = Field::new(4).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(s.opts.seed);
        let mut kinds = [0usize; 2];
        let mut bad = Vec::new();
        let mut done = 0;
        while done < n {
            let Some(x) = random_surface(&mut rng, f) else { continue };
            let Some((d, v)) = resultant_violations(&x, f, &mut kinds)? else { continue };
            if let Ok(ram) = crate::line_invariants::ramification_profile(&x) {
                if ram.separable {
                    s.random.push(RandomLine { degree: d, ramification: ram.profile(), symbol: ram.symbol() });
                }
            }
            bad.extend(v);
            done += 1;
        }
        let computed = format!("{done} surfaces ({} first kind, {} second kind), {} violations", kinds[0], kinds[1], bad.len());
        Ok((computed, bad.is_empty()))
    });
}

fn degree3_profiles() -> [&'static str; 4] {
    ["2_4", "2_2^2", "2_2 3_2", "3_2^2"]
}

fn riemann_hurwitz(degree: usize, profile: &[(usize, usize)], symbol: &str) -> bool {
    let total: usize = profile.iter().map(|p| p.1).sum();
    total + 2 == 2 * degree && (degree != 3 || degree3_profiles().contains(&symbol))
}

fn criterion_7(s: &mut Suite) {
    s.check(7, "Riemann-Hurwitz on every separable line", "Σm = 2d - 2; degree 3 only 2_4, 2_2^2, 2_2 3_2, 3_2^2", Source::Published, "k3lines line-report --fixture familyX --all", |s| {
        let mut lines = 0;
        let mut bad = 0;
        let mut sources = Vec::new();
        for c in [s.family(), s.ex20()] {
            match c {
                Ok(c) => {
                    for r in c.reports.iter().filter(|r| r.separable && r.degree > 0) {
                        lines += 1;
                        bad += usize::from(!riemann_hurwitz(r.degree, &r.ramification, &r.ramification_symbol));
                    }
                    sources.push(format!("{} lines over GF(2^{})", c.lines.len(), c.field.k()));
                }
                Err(e) => return Err(e),
            }
        }
        for r in &s.random {
            lines += 1;
            bad += usize::from(!riemann_hurwitz(r.degree, &r.ramification, &r.symbol));
        }
        sources.push(format!("{} random", s.random.len()));
        Ok((format!("{lines} separable lines ({}), {bad} violations", sources.join(", ")), bad == 0 && lines > 0))
    });
}

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

fn table_matches(menu: &Menu, golden: &[Golden], filter: crate::combinatorics::ValencyFilter) -> (String, bool) {
    let rows = euler_tally_enumerate(menu, EULER_BUDGET, filter);
    let mismatched: Vec<&str> = golden
        .iter()
        .zip(&rows)
        .filter(|((case, fibers, v), row)| {
            let want: Vec<(String, u32)> = fibers.iter().map(|(n, c)| (n.to_string(), *c)).collect();
            row.case != *case || row.fibers(menu) != want || row.valency != *v || row.euler(menu) != EULER_BUDGET
        })
        .map(|(g, _)| g.0)
        .collect();
    let ok = rows.len() == golden.len() && mismatched.is_empty();
    (format!("{} rows, mismatched cases {mismatched:?}", rows.len()), ok)
}

fn criterion_8(s: &mut Suite) {
    s.check(8, "degree-3 tally", "14 rows", Source::Published, "k3lines tables --which 3", |_| {
        Ok(table_matches(&degree3_menu(), &TABLE3, TABLE3_FILTER))
    });
    s.check(8, "refined tally", "14 cases, two of them split (16 rows)", Source::Published, "k3lines tables --which 4", |_| {
        Ok(table_matches(&refined_menu(), &TABLE4, TABLE4_FILTER))
    });
    let survivors = TABLE5.iter().map(|(c, t)| format!("{c}:{t}")).collect::<Vec<_>>().join(" ");
    s.check(8, "rank filter survivors", format!("{survivors}, all with K.L = 0"), Source::Published, "k3lines tables --which 5", |_| {
        let menu = refined_menu();
        let rows = euler_tally_enumerate(&menu, EULER_BUDGET, TABLE4_FILTER);
        let kept = rank_filter(&menu, &rows).map_err(|e| e.to_string())?;
        let got: Vec<(&str, &str)> = kept.iter().map(|r| (r.case.as_str(), r.singularities.as_str())).collect();
        let kl_zero = kept.iter().all(|r| r.surviving_kl() == [0]);
        let shown = kept.iter().map(|r| format!("{}:{} K.L={:?}", r.case, r.singularities, r.surviving_kl())).collect::<Vec<_>>().join(" ");
        Ok((shown, got == TABLE5 && kl_zero))
    });
    s.check(8, "degree-3 rows have rank 23", "min rank 23 for all 14 rows", Source::Published, "k3lines tables --which 3", |_| {
        let menu = degree3_menu();
        let rows = euler_tally_enumerate(&menu, EULER_BUDGET, TABLE3_FILTER);
        let mut mins = Vec::new();
        for r in &rows {
            mins.push(row_ranks(&menu, r).map_err(|e| e.to_string())?.min_rank());
        }
        Ok((format!("min ranks {mins:?}"), mins.len() == 14 && mins.iter().all(|&m| m >= 23)))
    });
}

fn random_transform(rng: &mut ChaCha8Rng, f: Field) -> ProjTransform {
    loop {
        let m = [0; 4].map(|_| [0; 4].map(|_| f.elem(rng.gen_range(0..f.order()) as u32)));
        if let Ok(t) = ProjTransform::new(m) {
            return t;
        }
    }
}

fn criterion_9(s: &mut Suite) {
    let n = s.opts.scrambles;
    s.check(9, "C1 normal form of scrambled family X", format!("{n} of {n} recovered"), Source::Published, "k3lines normalize-c1 --fixture familyX --field 6 --scramble 1", |s| {
        let c = s.family()?;
        let f = c.field;
        let mut rng = ChaCha8Rng::seed_from_u64(s.opts.seed);
        let mut ok = 0;
        let mut first_err = None;
        for _ in 0..n {
            let t = random_transform(&mut rng, f);
            let y = transform_surface(&c.surface, &t).map_err(|e| e.to_string())?;
            match cmd_normalize_c1(&y, f) {
                Ok(out) if !out.lambda_fe.is_zero() => ok += 1,
                Ok(_) => {
                    first_err.get_or_insert_with(|| "λ = 0".to_string());
                }
                Err(e) => {
                    first_err.get_or_insert_with(|| e.to_string());
                }
            }
        }
        let tail = first_err.map(|e| format!(", first failure: {e}")).unwrap_or_default();
        Ok((format!("{ok} of {n} recovered{tail}"), ok == n))
    });
}

fn criterion_10(s: &mut Suite) {
    s.check(10, "bounds on every census", "all applicable bounds hold", Source::Published, "k3lines graph --fixture familyX --field 6", |s| {
        let mut parts = Vec::new();
        let mut ok = true;
        for c in [s.family()?, s.ex20()?] {
            let g = build_line_graph(&c.surface, &c.lines);
            let sing = singular_points_on_lines(&c.surface, &c.lines.lines, c.field).map_err(|e| e.to_string())?;
            let b = bound_calculators(&c.surface, &g, &c.reports, &sing, c.field).map_err(|e| e.to_string())?;
            let parabolic: usize = b.parabolic.iter().map(|p| p.count).sum();
            parts.push(format!("{} lines: {} checks, {parabolic} parabolic subgraphs, {} violations", c.lines.len(), b.checks.len(), b.violations().len()));
            ok &= b.all_hold();
        }
        Ok((parts.join("; "), ok))
    });
}

/// Run the suite. Resource limits surface as failing checks, never as
/// silent passes.
pub fn cmd_verify_paper(opts: VerifyOptions) -> Result<VerificationReport, VerifyError> {
    if opts.max_degree == 0 || opts.max_degree > MAX_DEGREE {
        return Err(VerifyError::BadCap(opts.max_degree));
    }
    let lf = Field::new(opts.lambda_degree).map_err(|_| VerifyError::BadLambda(opts.lambda, opts.lambda_degree))?;
    let lambda = lf.try_elem(opts.lambda as u64).map_err(|_| VerifyError::BadLambda(opts.lambda, opts.lambda_degree))?;
    if lambda.is_zero() {
        return Err(VerifyError::DegenerateLambda);
    }
    let mut s = Suite { opts, lambda, checks: Vec::new(), family: None, ex20: None, random: Vec::new() };
    let steps: [(u8, fn(&mut Suite)); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    for (id, run) in steps {
        if s.wants(id) {
            run(&mut s);
        }
    }
    Ok(VerificationReport { options: s.opts, checks: s.checks })
}
