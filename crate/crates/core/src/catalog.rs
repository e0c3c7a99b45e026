//! Worked examples: a conic configuration on `P^2` blown up at eight points,
//! a family on `P^2` blown up at `4a - 3` points, and the Hirzebruch family
//! handled by [`crate::search`].

use serde::{Deserialize, Serialize};

use crate::dualgraph::DualGraph;
use crate::error::Result;
use crate::invariants::{
    bmy_check, euler_bound_check, log_chern, noether_check, noether_check_open, EulerBoundReport, LogInvariants,
};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::pencil::{analyze_adjoint_system, ExtractionPolicy, PencilReport};
use crate::peeling::{bark, BarkResult};
use crate::rational::{fmt_q, q, Q};
use crate::search::{example4_constraints, lattice_check, Example4Instance, Example4Row, LatticeCheck};

/// A computed value that differs from the value stated with the example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub computed: String,
    pub stated: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicExample {
    pub model: SurfaceModel,
    pub components: Vec<(String, DivisorClass)>,
    #[serde(rename = "D")]
    pub d: DivisorClass,
    pub candidates: Vec<DivisorClass>,
    pub graph: DualGraph,
    pub pencil: PencilReport,
    #[serde(rename = "residual_square", with = "crate::rational::one")]
    pub residual_square: Q,
    #[serde(with = "crate::rational::one")]
    pub pa_from_class: Q,
    pub pa_from_graph: i64,
    pub invariants: LogInvariants,
    pub noether_ok: bool,
    pub noether_open_ok: bool,
    pub euler_bound: EulerBoundReport,
    pub bark: BarkResult,
    /// `(K + D#)^2`
    #[serde(with = "crate::rational::one")]
    pub p_square: Q,
    /// BMY with the computed bark.
    pub bmy_ok: bool,
    /// BMY with `P = K + D` and `N = 0`.
    pub bmy_empty_bark_ok: bool,
    pub discrepancies: Vec<Discrepancy>,
}

pub fn conic_components() -> (SurfaceModel, Vec<(String, DivisorClass)>) {
    let m = SurfaceModel::plane(8);
    let c1 = m.plane_class(2, &[1, 1, 1, 1, 1, 1, 1, 0]).expect("plane model");
    let c2 = m.plane_class(2, &[1, 1, 1, 1, 0, 0, 0, 1]).expect("plane model");
    let c3 = m.plane_class(2, &[0, 0, 0, 0, 1, 1, 1, 1]).expect("plane model");
    (m, vec![("C1".into(), c1), ("C2".into(), c2), ("C3".into(), c3)])
}

/// Three conics on `P^2` blown up at eight points, `D = 6H - 2 sum E_i`,
/// with the conic through `E1..E7` as fixed-part candidate.
pub fn run_conic_example() -> Result<ConicExample> {
    let (model, components) = conic_components();
    let d = components.iter().fold(DivisorClass::zero(model.basis_len()), |acc, (_, c)| &acc + c);
    let candidates = vec![components[0].1.clone()];
    let graph = DualGraph::from_classes(&model, &components)?;
    let pencil = analyze_adjoint_system(&model, &d, &candidates, ExtractionPolicy::NegativePairing)?;
    let residual_square = model.square(&pencil.residual)?;
    let pa_from_class = model.arithmetic_genus(&d)?;
    let pa_from_graph = graph.arithmetic_genus();
    let invariants = log_chern(&model, &d, &graph)?;
    let noether_ok = noether_check(&invariants, &invariants.d_sq);
    let noether_open_ok = noether_check_open(&invariants, &invariants.d_sq);
    let euler_bound = euler_bound_check(&invariants, &model.hodge());
    let bk = bark(&graph)?;
    let p_square = &invariants.c1bar_sq - &bk.bark_square;
    let c2 = q(invariants.c2bar);
    let bmy_ok = bmy_check(&p_square, &bk.bark_square, &c2);
    let bmy_empty_bark_ok = bmy_check(&invariants.c1bar_sq, &q(0), &c2);
    let mut discrepancies = Vec::new();
    if invariants.e_open != invariants.c2bar {
        discrepancies.push(Discrepancy {
            quantity: "e(S - D)".into(),
            computed: invariants.e_open.to_string(),
            stated: invariants.c2bar.to_string(),
            note: "additivity gives e(S) - e(D); the stated value is e(S) + 2(p_a(D) - 1 - l)".into(),
        });
    }
    if !bk.is_empty() {
        discrepancies.push(Discrepancy {
            quantity: "Bk(D)^2".into(),
            computed: fmt_q(&bk.bark_square),
            stated: "0".into(),
            note: "C1 is a (-3)-twig attached to C3, so the bark is not empty".into(),
        });
    }
    Ok(ConicExample {
        model,
        components,
        d,
        candidates,
        graph,
        pencil,
        residual_square,
        pa_from_class,
        pa_from_graph,
        invariants,
        noether_ok,
        noether_open_ok,
        euler_bound,
        bark: bk,
        p_square,
        bmy_ok,
        bmy_empty_bark_ok,
        discrepancies,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyExample {
    pub a: i64,
    pub model: SurfaceModel,
    #[serde(rename = "D")]
    pub d: DivisorClass,
    pub candidates: Vec<DivisorClass>,
    pub pencil: PencilReport,
    /// `(2a - 2)(H - E1)`
    pub expected_residual: DivisorClass,
    pub residual_matches: bool,
    #[serde(with = "crate::rational::one")]
    pub candidate_square: Q,
    pub k_stated: i64,
    pub k_discrepancy: bool,
    pub discrepancies: Vec<Discrepancy>,
}

/// `P^2` blown up at `4a - 3` points with
/// `D = 3a H - (3a - 3) E1 - 2 (E2 + ... + E_{4a-3})` and the candidate
/// `(a - 1) H - (a - 2) E1 - (E2 + ... + E_{4a-3})`.
pub fn family_data(a: i64) -> Result<(SurfaceModel, DivisorClass, DivisorClass)> {
    if a < 2 {
        return Err(crate::Error::InvalidInput(format!("a = {a}; need a >= 2")));
    }
    let pts = (4 * a - 3) as usize;
    let m = SurfaceModel::plane(pts);
    let mut nus = vec![3 * a - 3];
    nus.extend(vec![2; pts - 1]);
    let d = m.plane_class(3 * a, &nus)?;
    let mut gn = vec![a - 2];
    gn.extend(vec![1; pts - 1]);
    let g = m.plane_class(a - 1, &gn)?;
    Ok((m, d, g))
}

pub fn run_family_example(a: i64) -> Result<FamilyExample> {
    let (model, d, g) = family_data(a)?;
    let candidates = vec![g.clone()];
    let pencil = analyze_adjoint_system(&model, &d, &candidates, ExtractionPolicy::NegativePairing)?;
    let mut f = vec![1];
    f.extend(vec![0; model.num_points() - 1]);
    let expected_residual = model.plane_class(1, &f)?.scale(&q(2 * a - 2));
    let residual_matches = pencil.residual == expected_residual;
    let candidate_square = model.square(&g)?;
    let k_stated = 3 * a;
    let k_discrepancy = pencil.k != q(k_stated);
    let mut discrepancies = Vec::new();
    if k_discrepancy {
        discrepancies.push(Discrepancy {
            quantity: "k".into(),
            computed: fmt_q(&pencil.k),
            stated: k_stated.to_string(),
            note: "k = D.(H - E1) = 3a - (3a - 3) on the lattice".into(),
        });
    }
    Ok(FamilyExample {
        a,
        model,
        d,
        candidates,
        pencil,
        expected_residual,
        residual_matches,
        candidate_square,
        k_stated,
        k_discrepancy,
        discrepancies,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirzebruchExample {
    pub instance: Example4Instance,
    pub row: Example4Row,
    pub lattice: LatticeCheck,
    /// Pencil analysis with `M` removed as a stated fixed part.
    pub pencil: PencilReport,
    pub discrepancies: Vec<Discrepancy>,
}

pub fn run_hirzebruch_example(inst: Example4Instance) -> Result<HirzebruchExample> {
    let row = example4_constraints(&inst);
    let lattice = lattice_check(&inst)?;
    let (d, _, fixed) = inst.classes()?;
    let pencil = analyze_adjoint_system(&inst.model(), &d, &[fixed], ExtractionPolicy::Asserted)?;
    let mut discrepancies = Vec::new();
    if row.fixed_part_ok != row.fixed_part_lattice_ok {
        discrepancies.push(Discrepancy {
            quantity: "(K + D).M".into(),
            computed: fmt_q(&row.fixed_part_lattice_value),
            stated: fmt_q(&row.fixed_part_value),
            note: "the printed fixed-part inequality drops the factor e on Dinf^2".into(),
        });
    }
    if (inst.g, inst.e, inst.x, inst.y) == (10, 3, 8, 1) && !row.feasible {
        discrepancies.push(Discrepancy {
            quantity: "inequality (D)".into(),
            computed: fmt_q(&row.d_value),
            stated: "> 0".into(),
            note: "stated to satisfy all inequalities".into(),
        });
    }
    Ok(HirzebruchExample { instance: inst, row, lattice, pencil, discrepancies })
}
