//! Log Chern numbers of a pair `(S, D)` and the inequalities built on them.
//!
//! Two Euler numbers of the open surface are kept side by side. `c2bar` is
//! the closed formula `e(S) + 2(p_a(D) - 1 - l)`, which the log Noether
//! identity with the `2l` term is built around. `e_open` is computed by
//! additivity, `e(S) - sum e(D_i) + l`, counting each edge multiplicity as
//! that many transverse intersection points. The two differ by exactly `l`;
//! both are reported and the identities are checked for each.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::dualgraph::DualGraph;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, HodgeData, SurfaceModel};
use crate::matrix::{is_negative_definite, QMatrix};
use crate::rational::{as_i64, fmt_q, q, qf, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogInvariants {
    /// `(K + D)^2`
    #[serde(with = "crate::rational::one")]
    pub c1bar_sq: Q,
    /// `e(S) + 2(p_a(D) - 1 - l)`
    pub c2bar: i64,
    #[serde(rename = "pa_D")]
    pub pa_d: i64,
    /// Sum of edge multiplicities.
    pub l: i64,
    /// Number of components of `D`.
    pub r: usize,
    /// Number of connected components of `D`.
    pub m: usize,
    /// `chi(O_S) + (K + D).D / 2`
    #[serde(with = "crate::rational::one")]
    pub chi_bar: Q,
    /// `e(S) - e(D)` by additivity over components and intersection points.
    pub e_open: i64,
    pub e_open_matches_c2bar: bool,
    #[serde(rename = "D_sq", with = "crate::rational::one")]
    pub d_sq: Q,
    #[serde(rename = "K_dot_D", with = "crate::rational::one")]
    pub k_dot_d: Q,
    pub euler_e: i64,
    pub hodge: HodgeData,
    /// `p_g(S, D) = p_a(D) + m - 1`, rational surfaces only.
    pub pg_log: Option<i64>,
    /// `h^1(S, K + D) = m - 1`, rational surfaces only.
    pub h1_log: Option<i64>,
    pub notes: Vec<String>,
}

pub fn log_chern(model: &SurfaceModel, d: &DivisorClass, graph: &DualGraph) -> Result<LogInvariants> {
    model.check_len(d)?;
    if d.is_zero() || graph.is_empty() {
        return Err(Error::InvalidInput("boundary divisor must be non-zero".into()));
    }
    graph.check_against(model)?;
    if let Some(total) = graph.total_class(model) {
        if total != *d {
            return Err(Error::InvalidInput(format!("class {d} differs from the sum of the graph classes {total}")));
        }
    }
    let pa_class = model.arithmetic_genus(d)?;
    let pa_graph = graph.arithmetic_genus();
    if pa_class != q(pa_graph) {
        return Err(Error::InconsistentGenus { from_class: fmt_q(&pa_class), from_graph: pa_graph.to_string() });
    }
    let k = model.canonical_class();
    let kd = &k + d;
    let c1bar_sq = model.square(&kd)?;
    let d_sq = model.square(d)?;
    let k_dot_d = model.intersect(&k, d)?;
    let hodge = model.hodge();
    let l = graph.total_edge_weight();
    let r = graph.len();
    let m = graph.components().len();
    let c2bar = hodge.euler_e + 2 * (pa_graph - 1 - l);
    let e_d: i64 = graph.vertices().iter().map(|v| 2 - 2 * v.genus as i64).sum::<i64>() - l;
    let e_open = hodge.euler_e - e_d;
    let chi_bar = q(hodge.chi_o()) + (&k_dot_d + &d_sq) * qf(1, 2);
    let mut notes = Vec::new();
    if e_open != c2bar {
        notes.push(format!("e(S) - e(D) = {e_open} differs from e(S) + 2(p_a(D) - 1 - l) = {c2bar} by l = {l}"));
    }
    let snc = graph.snc_violations();
    if !snc.is_empty() {
        notes.push(format!("boundary is not SNC ({}); e_open counts each multiplicity as a point", snc.join("; ")));
    }
    let (pg_log, h1_log) = if hodge.is_rational() {
        let lg = log_genus_rational(graph, &hodge)?;
        (Some(lg.pg_log), Some(lg.h1_log))
    } else {
        notes.push("p_g(S, D) and h^1(S, K + D) require cohomology, unsupported".into());
        (None, None)
    };
    Ok(LogInvariants {
        c1bar_sq,
        c2bar,
        pa_d: pa_graph,
        l,
        r,
        m,
        chi_bar,
        e_open,
        e_open_matches_c2bar: e_open == c2bar,
        d_sq,
        k_dot_d,
        euler_e: hodge.euler_e,
        hodge,
        pg_log,
        h1_log,
        notes,
    })
}

/// `c1bar^2 + c2bar + 6(p_a(D) - 1) + D^2 + 2l = 12 chi_bar`.
pub fn noether_check(inv: &LogInvariants, d_sq: &Q) -> bool {
    let lhs = &inv.c1bar_sq + q(inv.c2bar + 6 * (inv.pa_d - 1) + 2 * inv.l) + d_sq;
    lhs == &inv.chi_bar * q(12)
}

/// The same identity with `e_open` in place of `c2bar`, where the edge term
/// is `l` instead of `2l`.
pub fn noether_check_open(inv: &LogInvariants, d_sq: &Q) -> bool {
    let lhs = &inv.c1bar_sq + q(inv.e_open + 6 * (inv.pa_d - 1) + inv.l) + d_sq;
    lhs == &inv.chi_bar * q(12)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerBoundReport {
    /// `p_a(D) <= 2(l + q) + 1 - h^{1,1}`
    pub hypothesis_holds: bool,
    pub hypothesis_rhs: i64,
    /// `chi(Omega^1(log D)) = 2(q + l) + 1 - h^{1,1} - p_a(D)`
    pub chi_log_cotangent: i64,
    /// `c2bar <= 2 p_g(S, D) + 1`
    pub conclusion: Option<bool>,
    /// `c2bar <= p_g(S, D) + 1`, evaluated when `p_g(S) = 0`.
    pub conclusion_pg_zero: Option<bool>,
    /// `e_open <= 2 p_g(S, D) + 1`
    pub conclusion_open: Option<bool>,
    pub notes: Vec<String>,
}

pub fn euler_bound_check(inv: &LogInvariants, hodge: &HodgeData) -> EulerBoundReport {
    let hypothesis_rhs = 2 * (inv.l + hodge.q) + 1 - hodge.h11;
    let hypothesis_holds = inv.pa_d <= hypothesis_rhs;
    let chi_log_cotangent = 2 * (hodge.q + inv.l) + 1 - hodge.h11 - inv.pa_d;
    let mut notes = Vec::new();
    if !hypothesis_holds {
        notes.push("hypothesis fails; conclusion evaluated anyway".into());
    }
    let (conclusion, conclusion_pg_zero, conclusion_open) = match inv.pg_log {
        Some(pg) => (
            Some(inv.c2bar <= 2 * pg + 1),
            (hodge.p_g == 0).then_some(inv.c2bar <= pg + 1),
            Some(inv.e_open <= 2 * pg + 1),
        ),
        None => {
            notes.push("p_g(S, D) unavailable; conclusions not evaluated".into());
            (None, None, None)
        }
    };
    EulerBoundReport {
        hypothesis_holds,
        hypothesis_rhs,
        chi_log_cotangent,
        conclusion,
        conclusion_pg_zero,
        conclusion_open,
        notes,
    }
}

/// `P^2 / 3 <= c2 - N^2 / 4`
pub fn bmy_check(p_sq: &Q, n_sq: &Q, c2bar: &Q) -> bool {
    p_sq / q(3) <= c2bar - n_sq / q(4)
}

/// `(n + 2) / (2 n^2) * P^2 + 1`
pub fn genus_bound(n: u64, p_sq: &Q) -> Result<Q> {
    if n == 0 {
        return Err(Error::InvalidInput("pencil multiplicity n must be at least 1".into()));
    }
    let n = q(n as i64);
    Ok((&n + q(2)) / (q(2) * &n * &n) * p_sq + q(1))
}

/// `3(n + 2)(2n + 3 - N^2/4) / (2 n^2)`, the bound on `g - 1`.
pub fn genus_minus_one_bound(n: u64, n_sq: &Q) -> Result<Q> {
    main_bound(n, n_sq, 2, 3)
}

/// Variant of [`genus_minus_one_bound`] for `p_g(S) = 0`:
/// `3(n + 2)(n + 2 - N^2/4) / (2 n^2)`.
pub fn genus_minus_one_bound_pg0(n: u64, n_sq: &Q) -> Result<Q> {
    main_bound(n, n_sq, 1, 2)
}

/// `3(n + 2)(lead n + c - N^2/4) / (2 n^2)`
fn main_bound(n: u64, n_sq: &Q, lead: i64, c: i64) -> Result<Q> {
    if n == 0 {
        return Err(Error::InvalidInput("pencil multiplicity n must be at least 1".into()));
    }
    let n = q(n as i64);
    Ok(q(3) * (&n + q(2)) * (q(lead) * &n + q(c) - n_sq / q(4)) / (q(2) * &n * &n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpCompletion {
    pub class: DivisorClass,
    #[serde(with = "crate::rational::vec")]
    pub coefficients: Vec<Q>,
    #[serde(with = "crate::rational::one")]
    pub square_before: Q,
    #[serde(with = "crate::rational::one")]
    pub square_after: Q,
    /// `X.D_j <= 0` for every component, where the square cannot drop.
    pub nonpositive_on_components: bool,
}

/// `X# = X + sum a_i D_i` with `X#.D_j = 0` for every `D_j`.
pub fn sharp_completion(model: &SurfaceModel, x: &DivisorClass, comps: &[DivisorClass]) -> Result<SharpCompletion> {
    model.check_len(x)?;
    let square_before = model.square(x)?;
    let gram = comps
        .iter()
        .map(|a| comps.iter().map(|b| model.intersect(a, b)).collect())
        .collect::<Result<Vec<Vec<Q>>>>()
        .map(QMatrix)?;
    if !is_negative_definite(&gram)? {
        return Err(Error::NotNegativeDefinite);
    }
    let pairings = comps.iter().map(|c| model.intersect(x, c)).collect::<Result<Vec<_>>>()?;
    let rhs: Vec<Q> = pairings.iter().map(|p| -p).collect();
    let coefficients = gram.solve(&rhs)?;
    let class = comps.iter().zip(&coefficients).fold(x.clone(), |acc, (c, a)| acc.add_scaled(a, c));
    let square_after = model.square(&class)?;
    let nonpositive_on_components = pairings.iter().all(|p| !p.is_positive());
    Ok(SharpCompletion { class, coefficients, square_before, square_after, nonpositive_on_components })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub g: i64,
    pub k: i64,
    pub b: i64,
    pub h1_log: Option<i64>,
    /// `b >= 2` implies `2 <= g + k <= 3`.
    pub clause_range: bool,
    /// `g + k = 3` implies `b <= 2` and `h^1(S, K + D) = 0`.
    pub clause_boundary: bool,
    pub passes: bool,
    /// `(g, k)` is one of `(1, 1)`, `(1, 2)`, `(2, 1)`.
    pub in_listed_pairs: bool,
    /// `3 <= 2g + k <= 9`
    pub alt_weighted_range: bool,
    /// `g <= 5`
    pub alt_genus_cap: bool,
    pub notes: Vec<String>,
}

pub fn main_theorem_predicate(g: i64, k: i64, b: i64, h1_log: Option<i64>) -> Result<TheoremReport> {
    if k <= 0 {
        return Err(Error::InvalidInput(format!("k = {k}; the statement needs k > 0")));
    }
    let mut notes = Vec::new();
    let clause_range = b < 2 || (2..=3).contains(&(g + k));
    let clause_boundary = if g + k == 3 {
        if h1_log.is_none() {
            notes.push("g + k = 3 but h^1(S, K + D) not supplied; only b <= 2 checked".into());
        }
        b <= 2 && h1_log.is_none_or(|h| h == 0)
    } else {
        true
    };
    let in_listed_pairs = matches!((g, k), (1, 1) | (1, 2) | (2, 1));
    let alt_weighted_range = (3..=9).contains(&(2 * g + k));
    let alt_genus_cap = g <= 5;
    if b >= 2 && (clause_range != alt_weighted_range || clause_range != alt_genus_cap) {
        notes.push("the bound shapes 2 <= g+k <= 3, 3 <= 2g+k <= 9 and g <= 5 disagree here".into());
    }
    Ok(TheoremReport {
        g,
        k,
        b,
        h1_log,
        clause_range,
        clause_boundary,
        passes: clause_range && clause_boundary,
        in_listed_pairs,
        alt_weighted_range,
        alt_genus_cap,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogGenus {
    pub pg_log: i64,
    pub h1_log: i64,
    pub m: usize,
}

/// `p_g(S, D) = p_a(D) + m - 1` and `h^1(S, K + D) = m - 1` on a rational
/// surface, with `m` the number of connected components of `D`.
pub fn log_genus_rational(graph: &DualGraph, hodge: &HodgeData) -> Result<LogGenus> {
    if !hodge.is_rational() {
        return Err(Error::Unsupported(format!("q = {}, p_g = {}; surface is not rational", hodge.q, hodge.p_g)));
    }
    let m = graph.components().len();
    let mm = m as i64;
    Ok(LogGenus { pg_log: graph.arithmetic_genus() + mm - 1, h1_log: mm - 1, m })
}

/// `p_a` of a class as an integer, when it is one.
pub fn integral_genus(model: &SurfaceModel, c: &DivisorClass) -> Result<i64> {
    let pa = model.arithmetic_genus(c)?;
    as_i64(&pa).ok_or_else(|| Error::InvalidInput(format!("arithmetic genus {} is not integral", fmt_q(&pa))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::build::{e, v};

    fn ex2() -> (SurfaceModel, DivisorClass, DualGraph) {
        let m = SurfaceModel::plane(8);
        let c1 = m.plane_class(2, &[1, 1, 1, 1, 1, 1, 1, 0]).unwrap();
        let c2 = m.plane_class(2, &[1, 1, 1, 1, 0, 0, 0, 1]).unwrap();
        let c3 = m.plane_class(2, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        let d = &(&c1 + &c2) + &c3;
        let comps = vec![("C1".to_string(), c1), ("C2".to_string(), c2), ("C3".to_string(), c3)];
        let g = DualGraph::from_classes(&m, &comps).unwrap();
        (m, d, g)
    }

    #[test]
    fn example_two_invariants() {
        let (m, d, g) = ex2();
        assert_eq!(d, m.plane_class(6, &[2; 8]).unwrap());
        let inv = log_chern(&m, &d, &g).unwrap();
        assert_eq!(inv.c1bar_sq, q(1));
        assert_eq!(inv.c2bar, 5);
        assert_eq!(inv.pa_d, 2);
        assert_eq!(inv.l, 4);
        assert_eq!(inv.chi_bar, q(2));
        assert_eq!(inv.d_sq, q(4));
        assert_eq!(inv.euler_e, 11);
        assert_eq!(inv.e_open, 9);
        assert!(!inv.e_open_matches_c2bar);
        assert!(noether_check(&inv, &inv.d_sq));
        assert!(noether_check_open(&inv, &inv.d_sq));
        assert_eq!((inv.pg_log, inv.h1_log, inv.m), (Some(2), Some(0), 1));

        let rep = euler_bound_check(&inv, &m.hodge());
        assert!(!rep.hypothesis_holds);
        assert_eq!(rep.hypothesis_rhs, 0);
        assert_eq!(rep.chi_log_cotangent, -2);
        assert_eq!(rep.conclusion, Some(true));
        assert_eq!(rep.conclusion_pg_zero, Some(false));
    }

    #[test]
    fn perturbed_noether_fails() {
        let (m, d, g) = ex2();
        let mut inv = log_chern(&m, &d, &g).unwrap();
        inv.c2bar += 1;
        assert!(!noether_check(&inv, &inv.d_sq));
    }

    #[test]
    fn zero_divisor_rejected() {
        let m = SurfaceModel::plane(0);
        let g = DualGraph::new(vec![v("L", 0, 1)], vec![]).unwrap();
        assert!(log_chern(&m, &DivisorClass::zero(1), &g).is_err());
    }

    #[test]
    fn triangle_of_lines() {
        let m = SurfaceModel::plane(0);
        let g = DualGraph::new(
            vec![v("A", 0, 1), v("B", 0, 1), v("C", 0, 1)],
            vec![e("A", "B", 1), e("B", "C", 1), e("A", "C", 1)],
        )
        .unwrap();
        let inv = log_chern(&m, &DivisorClass::from_i64(&[3]), &g).unwrap();
        assert_eq!(inv.pa_d, 1);
        assert_eq!(inv.l, 3);
        assert_eq!(inv.c2bar, -3);
        // The complement is a two-dimensional torus.
        assert_eq!(inv.e_open, 0);
        assert!(noether_check(&inv, &inv.d_sq));
        assert!(noether_check_open(&inv, &inv.d_sq));
    }

    #[test]
    fn genus_mismatch_is_an_error() {
        let m = SurfaceModel::plane(0);
        let g = DualGraph::new(vec![v("C", 0, 9)], vec![]).unwrap();
        assert!(matches!(
            log_chern(&m, &DivisorClass::from_i64(&[3]), &g),
            Err(Error::InconsistentGenus { .. })
        ));
    }

    #[test]
    fn bmy_examples() {
        assert!(bmy_check(&q(1), &q(0), &q(5)));
        assert!(bmy_check(&q(0), &q(0), &q(0)));
        assert!(!bmy_check(&q(9), &q(0), &q(2)));
    }

    #[test]
    fn genus_bounds() {
        assert_eq!(genus_bound(2, &q(4)).unwrap(), q(3));
        assert_eq!(genus_bound(1, &q(0)).unwrap(), q(1));
        assert!(genus_bound(0, &q(1)).is_err());
        assert_eq!(genus_minus_one_bound(100, &q(0)).unwrap(), qf(3 * 102 * 203, 20000));
        assert_eq!(genus_minus_one_bound_pg0(1, &q(0)).unwrap(), qf(27, 2));
    }

    #[test]
    fn sharp_completion_examples() {
        // F = H - E1, C = E1 - E2 on P2 blown up twice.
        let m = SurfaceModel::plane(2);
        let f = DivisorClass::from_i64(&[1, -1, 0]);
        let none = sharp_completion(&m, &f, &[]).unwrap();
        assert_eq!(none.class, f);
        let c = DivisorClass::from_i64(&[0, 1, -1]);
        let s = sharp_completion(&m, &f, &[c.clone()]).unwrap();
        assert_eq!(s.coefficients, vec![qf(1, 2)]);
        assert_eq!(s.square_after, &s.square_before + qf(1, 2));
        assert_eq!(m.intersect(&s.class, &c).unwrap(), q(0));

        let m = SurfaceModel::plane(4);
        let f = DivisorClass::from_i64(&[1, -1, 0, -1, 0]);
        let c1 = DivisorClass::from_i64(&[0, 1, -1, 0, 0]);
        let c2 = DivisorClass::from_i64(&[0, 0, 0, 1, -1]);
        let s = sharp_completion(&m, &f, &[c1, c2]).unwrap();
        assert_eq!(s.coefficients, vec![qf(1, 2), qf(1, 2)]);

        assert!(sharp_completion(&m, &f, &[DivisorClass::from_i64(&[1, 0, 0, 0, 0])]).is_err());
    }

    #[test]
    fn theorem_predicate() {
        assert!(main_theorem_predicate(1, 1, 5, None).unwrap().passes);
        assert!(!main_theorem_predicate(2, 2, 3, None).unwrap().clause_range);
        let r = main_theorem_predicate(2, 1, 2, Some(0)).unwrap();
        assert!(r.clause_range && r.clause_boundary && r.in_listed_pairs);
        assert!(!main_theorem_predicate(2, 1, 3, Some(0)).unwrap().passes);
        assert!(!main_theorem_predicate(1, 2, 2, Some(1)).unwrap().passes);
        assert!(main_theorem_predicate(0, 0, 2, None).is_err());
    }

    #[test]
    fn log_genus() {
        let h = SurfaceModel::plane(0).hodge();
        let (_, _, g) = ex2();
        assert_eq!(log_genus_rational(&g, &h).unwrap(), LogGenus { pg_log: 2, h1_log: 0, m: 1 });
        let two = DualGraph::new(vec![v("A", 0, -1), v("B", 0, -1)], vec![]).unwrap();
        assert_eq!(log_genus_rational(&two, &h).unwrap(), LogGenus { pg_log: 0, h1_log: 1, m: 2 });
        let ell = DualGraph::new(vec![v("A", 1, 0)], vec![]).unwrap();
        assert_eq!(log_genus_rational(&ell, &h).unwrap(), LogGenus { pg_log: 1, h1_log: 0, m: 1 });
        let k3 = HodgeData { q: 0, p_g: 1, h11: 20, euler_e: 24 };
        assert!(matches!(log_genus_rational(&ell, &k3), Err(Error::Unsupported(_))));
    }
}
