//! Acceptance run: one line per criterion, followed by oracle cross-checks
//! that recompute key values without going through the library solvers.
//!
//! Exits non-zero if any check fails without a recorded known issue.

use std::io::Write;
use std::process::ExitCode;

use logpair_core::dualgraph::SegmentReport;
use logpair_core::peeling::bark;
use logpair_core::rational::{q, Q};
use logpair_core::search::Example4Instance;
use logpair_core::selftest::{random_admissible_graph, random_zariski_input, run_selftest, DEFAULT_SEED};
use logpair_core::zariski::zariski_decompose;
use logpair_core::{DivisorClass, DualGraph};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<Q>]) -> Q {
    match m.len() {
        0 => q(1),
        1 => m[0][0].clone(),
        n => (0..n)
            .filter(|&j| !m[0][j].is_zero())
            .map(|j| {
                let minor: Vec<Vec<Q>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
                let t = &m[0][j] * det(&minor);
                if j % 2 == 0 { t } else { -t }
            })
            .sum(),
    }
}

/// Cramer's rule for `m x = rhs`.
fn cramer(m: &[Vec<Q>], rhs: &[Q]) -> Vec<Q> {
    let d = det(m);
    (0..m.len())
        .map(|j| {
            let mj: Vec<Vec<Q>> =
                m.iter().zip(rhs).map(|(r, b)| r.iter().enumerate().map(|(k, x)| if k == j { b.clone() } else { x.clone() }).collect()).collect();
            det(&mj) / &d
        })
        .collect()
}

fn segment_lists(r: &SegmentReport) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = r.rods.clone();
    out.extend(r.twigs.iter().map(|t| t.vertices.clone()));
    out.extend(r.forks.iter().map(|f| {
        let mut v = vec![f.center.clone()];
        v.extend(f.branches.iter().flatten().cloned());
        v
    }));
    out
}

fn bark_oracle(g: &DualGraph) -> Result<(), String> {
    let got = bark(g).map_err(|e| e.to_string())?;
    let mut total = Q::zero();
    for seg in segment_lists(&g.classify_segments()) {
        let idx: Vec<usize> = seg.iter().map(|id| g.index_of(id).unwrap()).collect();
        let m = g.gram_on(&idx).0;
        let rhs: Vec<Q> = seg.iter().map(|id| q(g.branching_number(id).unwrap() as i64 - 2)).collect();
        let a = cramer(&m, &rhs);
        for (id, ai) in seg.iter().zip(&a) {
            if got.coefficients.get(id) != Some(ai) {
                return Err(format!("{id}: oracle {ai}, library {:?}", got.coefficients.get(id)));
            }
        }
        total += a.iter().zip(&rhs).map(|(x, y)| x * y).sum::<Q>();
    }
    if total != got.bark_square {
        return Err(format!("Bk^2 oracle {total}, library {}", got.bark_square));
    }
    Ok(())
}

/// Plane blow-up pairing `diag(1, -1, ..., -1)`.
fn plane_dot(a: &DivisorClass, b: &DivisorClass) -> Q {
    a.0.iter().zip(&b.0).enumerate().map(|(i, (x, y))| if i == 0 { x * y } else { -(x * y) }).sum()
}

/// Hirzebruch blow-up pairing written out by hand.
fn hirz_dot(e: i64, a: &DivisorClass, b: &DivisorClass) -> Q {
    let head = &a.0[0] * &b.0[0] * q(e) + &a.0[0] * &b.0[1] + &a.0[1] * &b.0[0];
    let tail: Q = a.0[2..].iter().zip(&b.0[2..]).map(|(x, y)| x * y).sum();
    head - tail
}

fn main() -> ExitCode {
    let out = std::io::stdout();
    let mut out = out.lock();
    let report = run_selftest(DEFAULT_SEED);
    writeln!(out, "acceptance (seed {:#x})", report.seed).unwrap();
    for c in &report.criteria {
        writeln!(out, "{}", c.summary_line()).unwrap();
    }
    let mut unexpected = report.unexpected_failures;

    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 1);
    let mut oracle = |name: &str, res: Result<(), String>| {
        match &res {
            Ok(()) => writeln!(out, "oracle PASS: {name}").unwrap(),
            Err(e) => writeln!(out, "oracle FAIL: {name} [{e}]").unwrap(),
        }
        if res.is_err() {
            unexpected += 1;
        }
    };

    let graphs: Result<(), String> = (0..200).try_for_each(|i| {
        let g = random_admissible_graph(&mut rng);
        bark_oracle(&g).map_err(|e| format!("graph #{i}: {e}"))
    });
    oracle("bark coefficients by Cramer's rule on 200 random graphs", graphs);

    let zar: Result<(), String> = (0..100).try_for_each(|i| {
        let (m, x, cands) = random_zariski_input(&mut rng);
        let z = zariski_decompose(&m, &x, &cands).map_err(|e| format!("input #{i}: {e}"))?;
        let sum_ok = &z.p + &z.n == x;
        let orth = z.support.iter().all(|&s| plane_dot(&z.p, &cands[s]).is_zero());
        let nef = cands.iter().all(|c| !plane_dot(&z.p, c).is_negative());
        let pos = z.n_coeffs.iter().all(|a| a.is_positive());
        if sum_ok && orth && nef && pos {
            Ok(())
        } else {
            Err(format!("input #{i}: sum {sum_ok} orth {orth} nef {nef} pos {pos}"))
        }
    });
    oracle("Zariski outputs against a hand-written plane pairing", zar);

    let fibers: Result<(), String> = (2..=20).try_for_each(|g| {
        (0..=g).try_for_each(|e| {
            let inst = Example4Instance { g, e, x: 8, y: 1 };
            let (d, f, _) = inst.classes().map_err(|e| e.to_string())?;
            let k = hirz_dot(e, &d, &f);
            let kf: DivisorClass = DivisorClass(
                [q(-2), q(e - 2)].into_iter().chain(std::iter::repeat_n(q(1), inst.points())).collect(),
            );
            let genus = (hirz_dot(e, &f, &f) + hirz_dot(e, &kf, &f)) / q(2) + q(1);
            if k == q(8 * e + 2) && hirz_dot(e, &f, &f).is_zero() && genus == q(g) {
                Ok(())
            } else {
                Err(format!("(g, e) = ({g}, {e}): k {k}, genus {genus}"))
            }
        })
    });
    oracle("fiber class: F^2 = 0, p_a(F) = g, D.F = 8e + 2 at x=8, y=1", fibers);

    writeln!(out, "{} criteria passed, {} failed, {} unexpected", report.passed, report.failed, unexpected).unwrap();
    if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
