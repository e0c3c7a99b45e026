//! Peeling: barks of admissible rational twigs, rods and forks, the
//! fractional boundary `D# = D - Bk(D)`, and almost minimal models obtained by
//! contracting exceptional curves of the first kind.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dualgraph::{DualGraph, Exclusion, SegmentKind};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::matrix::{is_negative_definite, QMatrix};
use crate::rational::{fmt_q, q, Q};

/// Unique solution `a` of `gram * a = rhs` for a negative definite `gram`.
pub fn orthogonal_correction(gram: &QMatrix, rhs: &[Q]) -> Result<Vec<Q>> {
    if gram.dim() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: gram.dim(), found: rhs.len() });
    }
    if !is_negative_definite(gram)? {
        return Err(Error::NotNegativeDefinite);
    }
    gram.solve(rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentBark {
    pub kind: String,
    pub vertices: Vec<String>,
    #[serde(with = "crate::rational::vec")]
    pub coefficients: Vec<Q>,
    /// `Bk(L)^2` of this segment alone.
    #[serde(with = "crate::rational::one")]
    pub square: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarkResult {
    /// Bark coefficient `a_i` of each component in the bark support.
    #[serde(with = "crate::rational::map")]
    pub coefficients: BTreeMap<String, Q>,
    #[serde(with = "crate::rational::one")]
    pub bark_square: Q,
    /// Multiplicity of every component of `D` in `D#`.
    #[serde(rename = "sharp_coefficients", with = "crate::rational::map")]
    pub sharp_coeffs: BTreeMap<String, Q>,
    #[serde(rename = "tips")]
    pub tips_count: usize,
    pub bound_ok: bool,
    pub segments: Vec<SegmentBark>,
    pub excluded: Vec<Exclusion>,
}

impl BarkResult {
    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Bark of the boundary described by `g`.
///
/// Each maximal admissible rational twig, rod and fork `L = sum C_i` gets the
/// solution of `sum_i a_i C_i.C_j = (K + D).C_j = -2 + beta(C_j)`; the bark
/// is the sum over segments, and its square is
/// `sum_i a_i (-2 + beta(C_i))`.
pub fn bark(g: &DualGraph) -> Result<BarkResult> {
    let (segs, excluded) = g.segments();
    let ids: Vec<&str> = g.vertices().iter().map(|v| v.id.as_str()).collect();
    let mut coefficients = BTreeMap::new();
    let mut bark_square = Q::zero();
    let mut tips_count = 0;
    let mut segments = Vec::with_capacity(segs.len());
    for s in &segs {
        let gram = g.gram_on(&s.vertices);
        let rhs: Vec<Q> = s.vertices.iter().map(|&i| q(g.beta(i) as i64 - 2)).collect();
        let a = orthogonal_correction(&gram, &rhs)?;
        let square: Q = a.iter().zip(&rhs).map(|(x, y)| x * y).sum();
        for (&i, ai) in s.vertices.iter().zip(&a) {
            if !ai.is_positive() || *ai > Q::one() {
                return Err(Error::InvalidInput(format!(
                    "bark coefficient {} of {} outside (0, 1]",
                    fmt_q(ai),
                    ids[i]
                )));
            }
            if coefficients.insert(ids[i].to_string(), ai.clone()).is_some() {
                return Err(Error::InvalidGraph(format!("{} lies in two segments", ids[i])));
            }
        }
        bark_square += &square;
        tips_count += s.tip_ends();
        segments.push(SegmentBark {
            kind: match s.kind {
                SegmentKind::Rod => "rod",
                SegmentKind::Twig => "twig",
                SegmentKind::Fork => "fork",
            }
            .into(),
            vertices: s.vertices.iter().map(|&i| ids[i].to_string()).collect(),
            coefficients: a,
            square,
        });
    }
    let sharp_coeffs = ids
        .iter()
        .map(|id| (id.to_string(), Q::one() - coefficients.get(*id).cloned().unwrap_or_else(Q::zero)))
        .collect();
    let bound_ok = bark_square >= q(-(tips_count as i64));
    Ok(BarkResult { coefficients, bark_square, sharp_coeffs, tips_count, bound_ok, segments, excluded })
}

/// `Bk(D)^2 >= -t`.
pub fn bark_square_bound_check(b: &BarkResult) -> bool {
    b.bark_square >= q(-(b.tips_count as i64))
}

/// `(K + D#).C` on each bark-support component, from the graph alone:
/// `(-2 + beta(C)) - Bk.C`.
pub fn sharp_residuals(g: &DualGraph, b: &BarkResult) -> Result<BTreeMap<String, Q>> {
    let mut out = BTreeMap::new();
    for id in b.coefficients.keys() {
        let j = g.index_of(id)?;
        let mut bk_dot = Q::zero();
        for (other, a) in &b.coefficients {
            let i = g.index_of(other)?;
            bk_dot += a * g.entry(i, j);
        }
        out.insert(id.clone(), q(g.beta(j) as i64 - 2) - bk_dot);
    }
    Ok(out)
}

/// `K + D#` as a class, when every component carries one.
pub fn adjoint_sharp_class(model: &SurfaceModel, g: &DualGraph, b: &BarkResult) -> Result<DivisorClass> {
    let classes = g
        .classes()
        .filter(|c| c.len() == g.len())
        .ok_or_else(|| Error::InvalidInput("every component needs a class".into()))?;
    let mut acc = model.canonical_class();
    for (id, c) in classes {
        model.check_len(c)?;
        acc = acc.add_scaled(&b.sharp_coeffs[id], c);
    }
    Ok(acc)
}

/// `(K + D#).C` on each bark-support component, by direct lattice pairing.
pub fn sharp_pairings(model: &SurfaceModel, g: &DualGraph, b: &BarkResult) -> Result<BTreeMap<String, Q>> {
    let adj = adjoint_sharp_class(model, g, b)?;
    let classes = g.classes().expect("checked by adjoint_sharp_class");
    b.coefficients
        .keys()
        .map(|id| Ok((id.clone(), model.intersect(&adj, &classes[id])?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contraction {
    /// 1-based index of the contracted `E_i` on the model at that step.
    pub exceptional: usize,
    #[serde(with = "crate::rational::one")]
    pub pairing: Q,
    /// Boundary component that was the contracted curve itself.
    pub removed_component: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeCurveFinding {
    pub test_index: usize,
    #[serde(with = "crate::rational::one")]
    pub square: Q,
    #[serde(with = "crate::rational::one")]
    pub pairing: Q,
    pub in_boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalizationReport {
    pub model: SurfaceModel,
    pub components: Vec<(String, DivisorClass)>,
    pub graph: DualGraph,
    pub bark: BarkResult,
    pub contractions: Vec<Contraction>,
    pub warnings: Vec<String>,
    /// Classes of square at most -2 with `(K + D).E < 0`. Every such curve
    /// must already be a boundary component.
    pub negative_curve_findings: Vec<NegativeCurveFinding>,
    pub negative_curve_ok: bool,
    /// `K + D#` pairs non-negatively with every class of the test set.
    pub nef_on_test_set: bool,
    pub negative_on: Vec<String>,
    pub test_set: String,
}

const CONTRACTION_CAP: usize = 1000;

/// Contract basis exceptional curves `E_i` with `(K + D#).E_i < 0` until none
/// is left, recomputing barks after every step.
///
/// `extra_tests` are additional classes on the input model; they are pushed
/// forward along the contractions and join the final nefness test set.
/// Non-basis `(-1)`-classes with negative pairing are skipped with a warning.
pub fn almost_minimalize(
    model: &SurfaceModel,
    components: &[(String, DivisorClass)],
    extra_tests: &[DivisorClass],
) -> Result<MinimalizationReport> {
    let mut model = model.clone();
    let mut comps = components.to_vec();
    let mut extras = extra_tests.to_vec();
    for c in comps.iter().map(|(_, c)| c).chain(&extras) {
        model.check_len(c)?;
    }
    let mut contractions = Vec::new();
    let mut warnings = Vec::new();

    let negative_curve_findings = negative_curve_check(&model, &comps, &extras)?;
    let negative_curve_ok = negative_curve_findings.iter().all(|f| f.in_boundary);

    loop {
        let graph = DualGraph::from_classes(&model, &comps)?;
        let bk = bark(&graph)?;
        let adj = adjoint_sharp_class(&model, &graph, &bk)?;

        let mut found = None;
        for i in 1..=model.num_points() {
            let p = model.intersect(&adj, &model.exceptional(i))?;
            if p.is_negative() {
                found = Some((i, p));
                break;
            }
        }
        let Some((i, pairing)) = found else {
            for (t, c) in extras.iter().enumerate() {
                if model.square(c)? == q(-1) && model.intersect(&adj, c)?.is_negative() {
                    warnings.push(format!("test class #{t} is a (-1)-class with (K+D#).E < 0 but not a basis class; skipped"));
                }
            }
            let (nef_on_test_set, negative_on) = nef_check(&model, &adj, &comps, &extras)?;
            return Ok(MinimalizationReport {
                model,
                components: comps,
                graph,
                bark: bk,
                contractions,
                warnings,
                negative_curve_findings,
                negative_curve_ok,
                nef_on_test_set,
                negative_on,
                test_set: "boundary components, basis exceptional classes and supplied test classes only; \
                           nefness beyond this finite set is not certified"
                    .into(),
            });
        };
        if contractions.len() >= CONTRACTION_CAP {
            return Err(Error::IterationCap(CONTRACTION_CAP));
        }

        let e = model.exceptional(i);
        let removed = comps.iter().position(|(_, c)| *c == e);
        let mut meeting = 0;
        for (id, c) in &comps {
            let m = model.intersect(c, &e)?;
            if m > Q::one() {
                warnings.push(format!("contracting E{i}: image of {id} acquires a singular point"));
            }
            if m.is_positive() {
                meeting += 1;
            }
        }
        if removed.is_none() && meeting > 2 {
            warnings.push(format!("contracting E{i}: {meeting} components pass through one point"));
        }
        let removed_component = removed.map(|k| comps.remove(k).0);
        comps = comps
            .into_iter()
            .map(|(id, c)| Ok((id, model.pushforward(&c, i)?)))
            .collect::<Result<_>>()?;
        extras = extras.iter().map(|c| model.pushforward(c, i)).collect::<Result<_>>()?;
        model = model.contract(i)?;
        contractions.push(Contraction { exceptional: i, pairing, removed_component });
    }
}

fn negative_curve_check(
    model: &SurfaceModel,
    comps: &[(String, DivisorClass)],
    tests: &[DivisorClass],
) -> Result<Vec<NegativeCurveFinding>> {
    let k = model.canonical_class();
    let d = comps.iter().fold(DivisorClass::zero(model.basis_len()), |acc, (_, c)| &acc + c);
    let kd = &k + &d;
    let mut out = Vec::new();
    for (t, c) in tests.iter().enumerate() {
        let square = model.square(c)?;
        let pairing = model.intersect(&kd, c)?;
        if square <= q(-2) && pairing.is_negative() {
            let in_boundary = comps.iter().any(|(_, x)| x == c);
            out.push(NegativeCurveFinding { test_index: t, square, pairing, in_boundary });
        }
    }
    Ok(out)
}

fn nef_check(
    model: &SurfaceModel,
    adj: &DivisorClass,
    comps: &[(String, DivisorClass)],
    extras: &[DivisorClass],
) -> Result<(bool, Vec<String>)> {
    let mut bad = Vec::new();
    for (id, c) in comps {
        if model.intersect(adj, c)?.is_negative() {
            bad.push(id.clone());
        }
    }
    for i in 1..=model.num_points() {
        if model.intersect(adj, &model.exceptional(i))?.is_negative() {
            bad.push(format!("E{i}"));
        }
    }
    for (t, c) in extras.iter().enumerate() {
        if model.intersect(adj, c)?.is_negative() {
            bad.push(format!("test#{t}"));
        }
    }
    Ok((bad.is_empty(), bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::build::{chain, e, v};
    use crate::rational::qf;

    #[test]
    fn correction_examples() {
        let g = QMatrix::from_i64(&[&[-2]]);
        assert_eq!(orthogonal_correction(&g, &[q(-1)]).unwrap(), vec![qf(1, 2)]);
        let g = QMatrix::from_i64(&[&[-2, 1], &[1, -2]]);
        assert_eq!(orthogonal_correction(&g, &[q(-1), q(-1)]).unwrap(), vec![q(1), q(1)]);
        assert_eq!(orthogonal_correction(&g, &[q(-1), q(0)]).unwrap(), vec![qf(2, 3), qf(1, 3)]);
        let bad = QMatrix::from_i64(&[&[-1, 1], &[1, -1]]);
        assert_eq!(orthogonal_correction(&bad, &[q(0), q(0)]), Err(Error::NotNegativeDefinite));
        assert!(orthogonal_correction(&g, &[q(1)]).is_err());
    }

    #[test]
    fn isolated_minus_two_rod() {
        let g = DualGraph::new(vec![v("x", 0, -2)], vec![]).unwrap();
        let b = bark(&g).unwrap();
        assert_eq!(b.coefficients["x"], q(1));
        // Bk = C, so Bk^2 = C^2.
        assert_eq!(b.bark_square, q(-2));
        assert_eq!(b.tips_count, 2);
        assert!(bark_square_bound_check(&b));
        assert_eq!(b.sharp_coeffs["x"], q(0));
    }

    #[test]
    fn two_vertex_rod() {
        let (vs, es) = chain("c", &[-2, -2]);
        let b = bark(&DualGraph::new(vs, es).unwrap()).unwrap();
        assert_eq!(b.coefficients["c0"], q(1));
        assert_eq!(b.coefficients["c1"], q(1));
        // -a_1 - a_r
        assert_eq!(b.bark_square, q(-2));
    }

    fn star_with(branch: &[i64]) -> DualGraph {
        // Branch vertex of genus one so the twigs are the only segments.
        let mut vs = vec![v("z", 1, -1), v("p", 0, -2), v("s", 0, -2)];
        let (cv, mut es) = chain("t", branch);
        vs.extend(cv);
        es.extend([e(&format!("t{}", branch.len() - 1), "z", 1), e("p", "z", 1), e("s", "z", 1)]);
        DualGraph::new(vs, es).unwrap()
    }

    #[test]
    fn single_twig_tip() {
        let b = bark(&star_with(&[-2])).unwrap();
        assert_eq!(b.coefficients["t0"], qf(1, 2));
        assert_eq!(b.segments.iter().find(|s| s.vertices == ["t0"]).unwrap().square, qf(-1, 2));
    }

    #[test]
    fn d4_fork() {
        let g = DualGraph::new(
            vec![v("c", 0, -2), v("a", 0, -2), v("b", 0, -2), v("d", 0, -2)],
            vec![e("c", "a", 1), e("c", "b", 1), e("c", "d", 1)],
        )
        .unwrap();
        let b = bark(&g).unwrap();
        assert!(b.coefficients.values().all(|a| *a == q(1)));
        assert_eq!(b.bark_square, q(-2));
        assert_eq!(b.tips_count, 3);
        assert!(b.bound_ok);
        assert!(sharp_residuals(&g, &b).unwrap().values().all(Zero::is_zero));
    }

    #[test]
    fn empty_bark() {
        let g = DualGraph::new(vec![v("x", 1, 3)], vec![]).unwrap();
        let b = bark(&g).unwrap();
        assert!(b.is_empty());
        assert_eq!(b.bark_square, q(0));
        assert!(bark_square_bound_check(&b));
    }

    #[test]
    fn sharp_pairing_vanishes_on_twig_with_classes() {
        // Line pencil plus a (-2) chain realised by infinitely near points.
        let m = SurfaceModel::plane(3);
        let comps = vec![
            ("L".to_string(), DivisorClass::from_i64(&[1, -1, 0, 0])),
            ("A".to_string(), DivisorClass::from_i64(&[0, 1, -1, 0])),
            ("B".to_string(), DivisorClass::from_i64(&[0, 0, 1, -1])),
        ];
        let g = DualGraph::from_classes(&m, &comps).unwrap();
        let b = bark(&g).unwrap();
        assert_eq!(b.segments.len(), 1);
        for (_, p) in sharp_pairings(&m, &g, &b).unwrap() {
            assert_eq!(p, q(0));
        }
        for (_, p) in sharp_residuals(&g, &b).unwrap() {
            assert_eq!(p, q(0));
        }
    }

    #[test]
    fn minimalize_identity_when_nothing_to_contract() {
        let m = SurfaceModel::plane(0);
        let comps = vec![("C".to_string(), DivisorClass::from_i64(&[4]))];
        let r = almost_minimalize(&m, &comps, &[]).unwrap();
        assert!(r.contractions.is_empty());
        assert_eq!(r.model, m);
        assert!(r.nef_on_test_set);
    }

    #[test]
    fn minimalize_empty_boundary_contracts_e1() {
        let m = SurfaceModel::plane(1);
        let r = almost_minimalize(&m, &[], &[]).unwrap();
        assert_eq!(r.contractions.len(), 1);
        assert_eq!(r.contractions[0].pairing, q(-1));
        assert_eq!(r.model, SurfaceModel::plane(0));
    }

    #[test]
    fn minimalize_removes_exceptional_boundary_component() {
        // D = quartic strict transform + E1, where the quartic passes once through p1.
        let m = SurfaceModel::plane(1);
        let comps = vec![
            ("Q".to_string(), DivisorClass::from_i64(&[4, -1])),
            ("E".to_string(), DivisorClass::from_i64(&[0, 1])),
        ];
        let r = almost_minimalize(&m, &comps, &[]).unwrap();
        // (K + D).E1 = -1 + (1 - 1) = -1, so E1 goes and Q becomes a plane quartic.
        assert_eq!(r.contractions.len(), 1);
        assert_eq!(r.contractions[0].removed_component.as_deref(), Some("E"));
        assert_eq!(r.components, vec![("Q".to_string(), DivisorClass::from_i64(&[4]))]);
        assert!(r.nef_on_test_set);
    }

    #[test]
    fn negative_curve_filter() {
        let m = SurfaceModel::plane(2);
        let c = DivisorClass::from_i64(&[0, 1, -1]);
        let comps = vec![("C".to_string(), c.clone())];
        let r = almost_minimalize(&m, &comps, &[c.clone()]).unwrap();
        assert_eq!(r.negative_curve_findings.len(), 1);
        assert!(r.negative_curve_ok);
        let fake = c.scale(&q(2));
        let r = almost_minimalize(&m, &comps, &[fake]).unwrap();
        assert!(!r.negative_curve_ok);
    }

    #[test]
    fn non_basis_minus_one_is_skipped() {
        // H - E1 - E2 is a (-1)-class; with D = 0 on P^2 blown up at two
        // points K pairs to -1 with it. After E1, E2 go it is H and not (-1).
        let m = SurfaceModel::plane(2);
        let r = almost_minimalize(&m, &[], &[DivisorClass::from_i64(&[1, -1, -1])]).unwrap();
        assert_eq!(r.contractions.len(), 2);
        assert!(r.warnings.is_empty());
        assert!(!r.nef_on_test_set);
    }
}
