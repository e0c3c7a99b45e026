//! Self-contained acceptance suite. Every criterion is a list of named
//! checks; randomized parts draw from a seeded ChaCha stream, so a run is
//! reproducible from its seed.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{run_conic_example, run_family_example};
use crate::dualgraph::{build, DualGraph, Edge, Vertex};
use crate::error::{Error, Result};
use crate::invariants::{genus_bound, main_theorem_predicate};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::peeling::{bark, sharp_residuals};
use crate::rational::{fmt_q, q, qf};
use crate::search::{example4_constraints, example4_search, stated_instance_check, Example4Instance, SearchSpec};
use crate::zariski::{verify_decomposition, zariski_decompose};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Set when the check is known to fail because the stated value is wrong.
    pub known_issue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    /// One line: id, PASS/FAIL, title and every failing check.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {} {status}: {}", self.id, self.title);
        for c in self.checks.iter().filter(|c| !c.passed) {
            line.push_str(&format!(" [{}: {}", c.name, c.detail));
            if let Some(k) = &c.known_issue {
                line.push_str(&format!("; known issue: {k}"));
            }
            line.push(']');
        }
        line
    }

    /// Every failing check carries a known issue.
    pub fn failures_are_known(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.known_issue.is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
    pub passed: usize,
    pub failed: usize,
    pub unexpected_failures: usize,
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into(), known_issue: None });
    }

    fn known(&mut self, name: &str, passed: bool, detail: impl Into<String>, issue: &str) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            known_issue: (!passed).then(|| issue.to_string()),
        });
    }

    fn result<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, format!("error: {e}"));
                None
            }
        }
    }

    fn timed(&mut self, name: &str, took: Duration, limit: Duration) {
        self.check(name, took < limit, format!("{:.3}s (limit {:.1}s)", took.as_secs_f64(), limit.as_secs_f64()));
    }

    fn finish(self, id: u8, title: &str) -> CriterionReport {
        let passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        CriterionReport { id, title: title.into(), passed, checks: self.checks }
    }
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let criteria = vec![
        conic_pencil(),
        conic_invariants(),
        peeling_suite(&mut rng),
        zariski_suite(&mut rng),
        family_sweep(),
        hirzebruch_suite(),
        blow_up_suite(&mut rng),
        theorem_predicates(),
    ];
    let passed = criteria.iter().filter(|c| c.passed).count();
    let unexpected_failures = criteria.iter().filter(|c| !c.failures_are_known()).count();
    SelftestReport { seed, failed: criteria.len() - passed, passed, unexpected_failures, criteria }
}

fn conic_pencil() -> CriterionReport {
    let mut b = Builder::new();
    let start = Instant::now();
    let r = b.result("run", run_conic_example());
    let took = start.elapsed();
    if let Some(r) = r {
        let p = &r.pencil;
        b.check("bigness 9 - 8 = 1 > 0", p.big.square == q(1) && p.big.big == Some(true), fmt_q(&p.big.square));
        let (_, comps) = crate::catalog::conic_components();
        let fixed_ok = p.fixed_parts.len() == 1 && p.fixed_parts[0].class == comps[0].1;
        b.check("fixed part 2H - E1 - ... - E7", fixed_ok, format!("{} fixed parts", p.fixed_parts.len()));
        b.check(
            "fixed part pairing -1",
            p.fixed_parts.first().is_some_and(|f| f.pairing == q(-1)),
            p.fixed_parts.first().map(|f| fmt_q(&f.pairing)).unwrap_or_default(),
        );
        let line = r.model.plane_class(1, &[0, 0, 0, 0, 0, 0, 0, 1]).expect("plane");
        b.check("residual H - E8", p.residual == line, p.residual.to_string());
        b.check("residual square 0", r.residual_square == q(0), fmt_q(&r.residual_square));
        b.check("g = 0, b = 0", p.fiber_genus == q(0) && p.base_genus == 0, fmt_q(&p.fiber_genus));
        b.check("k = 4", p.k == q(4) && p.k_matches_gram, fmt_q(&p.k));
    }
    b.timed("runtime", took, Duration::from_secs(1));
    b.finish(1, "conic configuration: bigness, fixed part, residual pencil, g, b, k")
}

fn conic_invariants() -> CriterionReport {
    let mut b = Builder::new();
    if let Some(r) = b.result("run", run_conic_example()) {
        let inv = &r.invariants;
        b.check(
            "p_a(D) = 2 by adjunction and by the graph",
            r.pa_from_class == q(2) && r.pa_from_graph == 2 && inv.r == 3 && inv.l == 4,
            format!("class {}, graph {}, r {}, l {}", fmt_q(&r.pa_from_class), r.pa_from_graph, inv.r, inv.l),
        );
        let terms = (inv.c1bar_sq.clone(), inv.c2bar, 6 * (inv.pa_d - 1), inv.d_sq.clone(), 2 * inv.l);
        b.check(
            "log Noether 1 + 5 + 6 + 4 + 8 = 12 * 2",
            terms == (q(1), 5, 6, q(4), 8) && inv.chi_bar == q(2) && r.noether_ok,
            format!(
                "{} + {} + {} + {} + {} = 12 * {}",
                fmt_q(&terms.0),
                terms.1,
                terms.2,
                fmt_q(&terms.3),
                terms.4,
                fmt_q(&inv.chi_bar)
            ),
        );
        b.check("c2bar = 5", inv.c2bar == 5, inv.c2bar.to_string());
        b.known(
            "e(S - D) = c2bar",
            inv.e_open == inv.c2bar,
            format!("e(S) - e(D) = {}, c2bar = {}", inv.e_open, inv.c2bar),
            "the closed formula e(S) + 2(p_a - 1 - l) is off by l from e(S) - e(D)",
        );
        b.check("BMY", r.bmy_ok && r.bmy_empty_bark_ok, format!("P^2 = {}", fmt_q(&r.p_square)));
    }
    b.finish(2, "conic configuration invariants: p_a two ways, log Noether, e(S - D), BMY")
}

/// A random graph whose chains and stars are built from rational curves of
/// self-intersection at most -2, hung on ineligible hubs.
pub fn random_admissible_graph(rng: &mut impl Rng) -> DualGraph {
    let mut vs: Vec<Vertex> = Vec::new();
    let mut es: Vec<Edge> = Vec::new();
    let mut next = 0usize;
    let mut fresh = |vs: &mut Vec<Vertex>, genus: u32, s: i64| {
        let id = format!("v{next}");
        next += 1;
        vs.push(build::v(&id, genus, s));
        id
    };
    let pieces = rng.gen_range(1..=4);
    for _ in 0..pieces {
        match rng.gen_range(0..3) {
            0 => {
                let len = rng.gen_range(1..=5);
                let ids: Vec<String> = (0..len).map(|_| fresh(&mut vs, 0, -rng.gen_range(2..=6))).collect();
                for w in ids.windows(2) {
                    es.push(build::e(&w[0], &w[1], 1));
                }
            }
            1 => {
                let (genus, s) = if rng.gen_bool(0.5) { (rng.gen_range(1..=2), rng.gen_range(-3..=3)) } else { (0, rng.gen_range(-1..=2)) };
                let hub = fresh(&mut vs, genus, s);
                for _ in 0..rng.gen_range(1..=4) {
                    let mut prev = hub.clone();
                    for _ in 0..rng.gen_range(1..=4) {
                        let id = fresh(&mut vs, 0, -rng.gen_range(2..=5));
                        es.push(build::e(&prev, &id, 1));
                        prev = id;
                    }
                }
            }
            _ => {
                let center = fresh(&mut vs, 0, -rng.gen_range(2..=4));
                let arms: [usize; 3] = match rng.gen_range(0..4) {
                    0 => [1, 1, rng.gen_range(1..=4)],
                    1 => [1, 2, 2],
                    2 => [1, 2, 3],
                    _ => [1, 2, 4],
                };
                for len in arms {
                    let mut prev = center.clone();
                    for _ in 0..len {
                        let id = fresh(&mut vs, 0, -rng.gen_range(2..=3));
                        es.push(build::e(&prev, &id, 1));
                        prev = id;
                    }
                }
            }
        }
    }
    DualGraph::new(vs, es).expect("generated graph is well formed")
}

fn peeling_suite(rng: &mut ChaCha8Rng) -> CriterionReport {
    let mut b = Builder::new();
    let mut literal = true;
    let mut sharp = true;
    let mut detail = Vec::new();
    for d in 2..=9i64 {
        let g = DualGraph::new(
            vec![build::v("z", 1, 0), build::v("t", 0, -d)],
            vec![build::e("z", "t", 1)],
        )
        .expect("graph");
        match bark(&g) {
            Ok(r) => {
                let a = r.coefficients.get("t").cloned().unwrap_or_default();
                literal &= a == q(1) - qf(1, d);
                sharp &= a == qf(1, d) && r.sharp_coeffs["t"] == q(1) - qf(1, d);
                detail.push(format!("d={d}: {}", fmt_q(&a)));
            }
            Err(e) => {
                literal = false;
                sharp = false;
                detail.push(format!("d={d}: {e}"));
            }
        }
    }
    b.known(
        "(-d) tip bark = 1 - 1/d, d = 2..9",
        literal,
        detail.join(", "),
        "the bark coefficient solves -d a = -1, so a = 1/d; 1 - 1/d is the D# coefficient",
    );
    b.check("(-d) tip: bark 1/d and D# coefficient 1 - 1/d, d = 2..9", sharp, "");

    let mut chain_ok = true;
    for r in 1..=8usize {
        let (mut vs, mut es) = build::chain("c", &vec![-2; r]);
        vs.push(build::v("z", 1, 0));
        es.push(build::e("z", &format!("c{}", r - 1), 1));
        let g = DualGraph::new(vs, es).expect("graph");
        let ok = bark(&g).is_ok_and(|res| res.coefficients.get("c0") == Some(&qf(r as i64, r as i64 + 1)));
        chain_ok &= ok;
    }
    b.check("(-2)-chain tip bark = r/(r+1), r = 1..8", chain_ok, "");

    let d4 = DualGraph::new(
        vec![build::v("c", 0, -2), build::v("a", 0, -2), build::v("b", 0, -2), build::v("d", 0, -2)],
        vec![build::e("c", "a", 1), build::e("c", "b", 1), build::e("c", "d", 1)],
    )
    .expect("graph");
    match bark(&d4) {
        Ok(r) => b.check(
            "D4 fork bark (1,1,1,1), Bk^2 = -2",
            r.coefficients.values().all(|a| *a == q(1)) && r.coefficients.len() == 4 && r.bark_square == q(-2),
            fmt_q(&r.bark_square),
        ),
        Err(e) => b.check("D4 fork bark (1,1,1,1), Bk^2 = -2", false, e.to_string()),
    }

    let mut bad = Vec::new();
    let mut nonempty = 0;
    for i in 0..200 {
        let g = random_admissible_graph(rng);
        match bark(&g) {
            Ok(r) => {
                if !r.is_empty() {
                    nonempty += 1;
                }
                let in_range = r.coefficients.values().all(|a| *a > q(0) && *a <= q(1));
                let orth = sharp_residuals(&g, &r).is_ok_and(|m| m.values().all(|x| *x == q(0)));
                if !(r.bound_ok && in_range && orth) {
                    bad.push(format!("#{i}: Bk^2 {} t {}", fmt_q(&r.bark_square), r.tips_count));
                }
            }
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    b.check(
        "Bk^2 >= -t on 200 random admissible graphs",
        bad.is_empty() && nonempty > 100,
        if bad.is_empty() { format!("{nonempty} with non-empty bark") } else { bad.join("; ") },
    );
    b.finish(3, "peeling: tip values, D4 fork, Bk^2 >= -t on random graphs")
}

fn del_pezzo_curves(m: &SurfaceModel) -> Vec<DivisorClass> {
    let n = m.num_points();
    let mut out: Vec<DivisorClass> = (1..=n).map(|i| m.exceptional(i)).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            let mut nus = vec![0; n];
            nus[i - 1] = 1;
            nus[j - 1] = 1;
            out.push(m.plane_class(1, &nus).expect("plane"));
        }
    }
    // Conics through five of the points.
    if n == 5 {
        out.push(m.plane_class(2, &[1; 5]).expect("plane"));
    } else if n == 6 {
        for skip in 0..n {
            let nus: Vec<i64> = (0..n).map(|k| i64::from(k != skip)).collect();
            out.push(m.plane_class(2, &nus).expect("plane"));
        }
    }
    out
}

/// Plane blow-up with `n <= 6`, up to eight `(-1)`-curves as candidates and
/// `X = alpha H - beta K + sum c_i C_i`.
pub fn random_zariski_input(rng: &mut impl Rng) -> (SurfaceModel, DivisorClass, Vec<DivisorClass>) {
    let n = rng.gen_range(1..=6);
    let m = SurfaceModel::plane(n);
    let mut curves = del_pezzo_curves(&m);
    curves.shuffle(rng);
    let k = rng.gen_range(1..=curves.len().min(8));
    curves.truncate(k);
    let alpha = rng.gen_range(0..=3);
    let beta = rng.gen_range(0..=2);
    let mut x = m.plane_class(alpha, &[]).expect("plane").add_scaled(&q(-beta), &m.canonical_class());
    for c in &curves {
        x = x.add_scaled(&q(rng.gen_range(0..=4)), c);
    }
    (m, x, curves)
}

fn zariski_suite(rng: &mut ChaCha8Rng) -> CriterionReport {
    let mut b = Builder::new();
    let m = SurfaceModel::plane(1);
    let x = DivisorClass::from_i64(&[1, 2]);
    let cands = [m.exceptional(1)];
    if let Some(z) = b.result("H + 2E1", zariski_decompose(&m, &x, &cands)) {
        b.known(
            "H + 2E1 gives P = H + E1, N = E1",
            z.p == DivisorClass::from_i64(&[1, 1]) && z.n == DivisorClass::from_i64(&[0, 1]),
            format!("P = {}, N = {}", z.p, z.n),
            "P = H + E1 has P.E1 = -1; the orthogonal solution is P = H, N = 2E1",
        );
        b.check("H + 2E1 satisfies all four properties", verify_decomposition(&m, &z, &cands).all_ok, "");
    }
    let mut failures = Vec::new();
    let mut nontrivial = 0;
    for i in 0..100 {
        let (m, x, cands) = random_zariski_input(rng);
        let z = match zariski_decompose(&m, &x, &cands) {
            Ok(z) => z,
            Err(e) => {
                failures.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if !z.n.is_zero() {
            nontrivial += 1;
        }
        if !verify_decomposition(&m, &z, &cands).all_ok {
            failures.push(format!("#{i}: properties"));
        }
        let mut shuffled = cands.clone();
        shuffled.shuffle(rng);
        match zariski_decompose(&m, &x, &shuffled) {
            Ok(z2) if z2.p == z.p && z2.n == z.n => {}
            _ => failures.push(format!("#{i}: order dependence")),
        }
        match zariski_decompose(&m, &z.p, &cands) {
            Ok(z3) if z3.n.is_zero() => {}
            _ => failures.push(format!("#{i}: not idempotent")),
        }
        if m.intersect(&z.p, &x).ok() != m.square(&z.p).ok() {
            failures.push(format!("#{i}: P.X != P^2"));
        }
    }
    b.check(
        "100 random inputs: properties, order independence, idempotence, at least 25 with N != 0",
        failures.is_empty() && nontrivial >= 25,
        if failures.is_empty() { format!("{nontrivial} with non-zero N") } else { failures.join("; ") },
    );
    b.finish(4, "Zariski decomposition: H + 2E1 and 100 random inputs")
}

fn family_sweep() -> CriterionReport {
    let mut b = Builder::new();
    for a in 2..=6 {
        let Some(r) = b.result(&format!("a = {a}"), run_family_example(a)) else { continue };
        let pairing_ok = r.pencil.fixed_parts.len() == 1 && r.pencil.fixed_parts[0].pairing == q(-1);
        b.check(&format!("a = {a}: fixed-part pairing -1"), pairing_ok, "");
        b.check(&format!("a = {a}: residual (2a - 2)(H - E1)"), r.residual_matches, r.pencil.residual.to_string());
        b.check(
            &format!("a = {a}: k = 3 with discrepancy flag against 3a"),
            r.pencil.k == q(3) && r.k_discrepancy && r.discrepancies.iter().any(|d| d.quantity == "k"),
            fmt_q(&r.pencil.k),
        );
    }
    b.finish(5, "family sweep a = 2..6: pairing, residual, k with discrepancy flag")
}

fn hirzebruch_suite() -> CriterionReport {
    let mut b = Builder::new();
    let mut bad = Vec::new();
    for g in 0..=30i64 {
        for e in 0..=g {
            let inst = Example4Instance { g, e, x: 5, y: 0 };
            let ok = inst.classes().and_then(|(_, f, _)| {
                let m = inst.model();
                Ok(m.square(&f)? == q(0) && m.arithmetic_genus(&f)? == q(g))
            });
            if !ok.unwrap_or(false) {
                bad.push(format!("({g},{e})"));
            }
        }
    }
    b.check("F^2 = 0 and p_a(F) = g for 0 <= e <= g <= 30", bad.is_empty(), bad.join(" "));

    let mut bad = Vec::new();
    for g in 10..20 {
        for e in 0..10 {
            for x in 5..10 {
                for y in 0..5 {
                    let inst = Example4Instance { g, e, x, y };
                    let ok = inst.classes().and_then(|(d, f, _)| inst.model().intersect(&d, &f));
                    if ok.ok() != Some(inst.k_value()) {
                        bad.push(format!("({g},{e},{x},{y})"));
                    }
                }
            }
        }
    }
    b.check("D.F = x(g+1+e) + 2y - 8g - 8 on a 10x10x5x5 grid", bad.is_empty(), bad.join(" "));

    let mut bad = Vec::new();
    for g in 8..=40 {
        for e in 0..=g {
            let r = example4_constraints(&Example4Instance { g, e, x: 8, y: 1 });
            if r.effective_ok != (q(4 * e) > q(g + 1)) || r.fixed_part_ok != (q(8 * e) < q(3 * g - 4)) {
                bad.push(format!("({g},{e})"));
            }
        }
    }
    b.check("x=8, y=1: e > (g+1)/4 and e < (3g-4)/8 match on g in [8,40]", bad.is_empty(), bad.join(" "));

    let claim = stated_instance_check();
    b.check(
        "(g,e) = (10,3) flagged as failing (D)",
        !claim.holds && claim.row.d_value == q(-7),
        fmt_q(&claim.row.d_value),
    );

    let start = Instant::now();
    let spec = SearchSpec { g: 8..=40, x: 5..=12, y: 0..=5, e: None, all_rows: false };
    let res = b.result("grid search", example4_search(&spec));
    let took = start.elapsed();
    if let Some(r) = res {
        b.check(
            "grid search flags the stated instance",
            r.claims.iter().any(|c| !c.holds) && r.notes.iter().any(|n| n.contains("stated instance fails")),
            format!("{} rows evaluated, {} feasible", r.evaluated, r.feasible),
        );
    }
    b.timed("grid g in [8,40], x in [5,12], y in [0,5]", took, Duration::from_secs(5));
    b.finish(6, "Hirzebruch family: F, D.F, reductions at x=8 y=1, stated instance, grid search")
}

/// Random class on a random plane or Hirzebruch model.
pub fn random_blow_up_pair(rng: &mut impl Rng) -> (SurfaceModel, DivisorClass) {
    let m = if rng.gen_bool(0.5) {
        SurfaceModel::plane(rng.gen_range(0..=6))
    } else {
        SurfaceModel::hirzebruch(rng.gen_range(0..=3), rng.gen_range(0..=4))
    };
    let c = DivisorClass((0..m.basis_len()).map(|_| q(rng.gen_range(-4..=4))).collect());
    (m, c)
}

fn blow_up_suite(rng: &mut ChaCha8Rng) -> CriterionReport {
    let mut b = Builder::new();
    let mut bad = Vec::new();
    for i in 0..100 {
        let (m, c) = random_blow_up_pair(rng);
        for mult in [1i64, 2] {
            let ok = (|| -> Result<bool> {
                let (m1, out) = m.blow_up(std::slice::from_ref(&c), &[q(mult)])?;
                let d_y = out[0].add_scaled(&q(mult - 1), &m1.exceptional(m1.num_points()));
                Ok(m1.arithmetic_genus(&d_y)? == m.arithmetic_genus(&c)?)
            })();
            if !ok.unwrap_or(false) {
                bad.push(format!("#{i} m={mult}"));
            }
        }
    }
    b.check("p_a preserved for 100 pairs, m = 1 and m = 2", bad.is_empty(), bad.join(" "));
    b.finish(7, "blow-up invariance of p_a")
}

fn theorem_predicates() -> CriterionReport {
    let mut b = Builder::new();
    let mut bad = Vec::new();
    for (g, k) in [(1, 1), (1, 2), (2, 1)] {
        let bs: Vec<i64> = if g + k == 3 { vec![2] } else { (2..=6).collect() };
        for bb in bs {
            match main_theorem_predicate(g, k, bb, Some(0)) {
                Ok(r) if r.passes => {}
                _ => bad.push(format!("({g},{k},{bb})")),
            }
        }
    }
    b.check("passes on (1,1,b>=2), (1,2,2), (2,1,2)", bad.is_empty(), bad.join(" "));
    b.check(
        "fails on (2,2,3)",
        main_theorem_predicate(2, 2, 3, None).is_ok_and(|r| !r.passes),
        "",
    );
    let g1 = genus_bound(2, &q(4));
    let g2 = genus_bound(1, &q(0));
    b.check(
        "genus_bound(2, 4) = 3 and genus_bound(1, 0) = 1",
        g1.as_ref().ok() == Some(&q(3)) && g2.as_ref().ok() == Some(&q(1)),
        format!("{:?} {:?}", g1.map(|x| fmt_q(&x)), g2.map(|x| fmt_q(&x))),
    );
    b.check("genus_bound(0, 1) is an error", matches!(genus_bound(0, &q(1)), Err(Error::InvalidInput(_))), "");
    b.finish(8, "theorem predicate and genus bound")
}
