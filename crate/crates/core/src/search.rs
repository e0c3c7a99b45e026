//! The four-inequality system on a Hirzebruch surface `Sigma_e` blown up at
//! `4g + 4` points, and an exhaustive search over its parameters.
//!
//! With `a = g + 1 - e` the boundary is `D = x Dinf + y G - 2 sum E_i`, the
//! fiber class is `F = 2 Dinf + a G - sum E_i` and the fixed part is the pull
//! back `M = (x - 4) Dinf + (y + e - a - 2) G`, so that `K + D - M = F`.
//!
//! The fixed-part inequality is evaluated twice: in the printed form
//! `(x-4)(x-2) + (x-2)(y+e-a-2) + (x-4)(y+e-2) < 0` and as the lattice pairing
//! `(K + D).M`, whose first term carries an extra factor `e`.

use std::ops::RangeInclusive;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::rational::{q, Q};

pub const THREADS_ENV: &str = "LOGPAIR_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Example4Instance {
    pub g: i64,
    pub e: i64,
    pub x: i64,
    pub y: i64,
}

fn wide_q(n: i128) -> Q {
    Q::from_integer(n.into())
}

fn halves(n: i128) -> Q {
    Q::new(n.into(), 2.into())
}

impl Example4Instance {
    pub fn new(g: i64, e: i64, x: i64, y: i64) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidInput(format!("g = {g}; need g >= 2")));
        }
        if !(0..=g).contains(&e) {
            return Err(Error::InvalidInput(format!("e = {e}; need 0 <= e <= g = {g}")));
        }
        Ok(Example4Instance { g, e, x, y })
    }

    /// `g + 1 - e`, positive by construction.
    pub fn a(&self) -> i64 {
        self.g + 1 - self.e
    }

    pub fn points(&self) -> usize {
        (4 * self.g + 4) as usize
    }

    fn wide(&self) -> (i128, i128, i128, i128) {
        (self.g as i128, self.e as i128, self.x as i128, self.y as i128)
    }

    /// `(x + 1)(y + ex/2) + x - 3(4g + 4)`, the dimension bound of `|D|`.
    pub fn d_value(&self) -> Q {
        let (g, e, x, y) = self.wide();
        halves((x + 1) * (2 * y + e * x) + 2 * x - 6 * (4 * g + 4))
    }

    /// `(x - 2)(y + e - 2 + (x - 2)e/2) - (4g + 4)/2`
    pub fn big_value(&self) -> Q {
        let (g, e, x, y) = self.wide();
        halves((x - 2) * (2 * (y + e - 2) + (x - 2) * e) - (4 * g + 4))
    }

    /// `(x - 3)(y + e - a - 1 + (x - 4)e/2)`
    pub fn effective_value(&self) -> Q {
        let (g, e, x, y) = self.wide();
        let a = g + 1 - e;
        halves((x - 3) * (2 * (y + e - a - 1) + (x - 4) * e))
    }

    /// `(x - 4)(x - 2) + (x - 2)(y + e - a - 2) + (x - 4)(y + e - 2)`
    pub fn fixed_part_printed(&self) -> Q {
        let (g, e, x, y) = self.wide();
        let a = g + 1 - e;
        wide_q((x - 4) * (x - 2) + (x - 2) * (y + e - a - 2) + (x - 4) * (y + e - 2))
    }

    /// `e(x - 4)(x - 2) + (x - 2)(y + e - a - 2) + (x - 4)(y + e - 2)`, which
    /// is `(K + D).M` on the lattice.
    pub fn fixed_part_lattice(&self) -> Q {
        let (g, e, x, y) = self.wide();
        let a = g + 1 - e;
        wide_q(e * (x - 4) * (x - 2) + (x - 2) * (y + e - a - 2) + (x - 4) * (y + e - 2))
    }

    /// `x(g + 1 + e) + 2y - 8g - 8`
    pub fn k_value(&self) -> Q {
        let (g, e, x, y) = self.wide();
        wide_q(x * (g + 1 + e) + 2 * y - 8 * g - 8)
    }

    pub fn model(&self) -> SurfaceModel {
        SurfaceModel::hirzebruch(self.e as u32, self.points())
    }

    /// `(D, F, M)` as lattice classes on [`Self::model`].
    pub fn classes(&self) -> Result<(DivisorClass, DivisorClass, DivisorClass)> {
        let m = self.model();
        let n = self.points();
        let d = m.hirzebruch_class(&q(self.x), &q(self.y), &vec![2; n])?;
        let f = m.hirzebruch_class(&q(2), &q(self.a()), &vec![1; n])?;
        let fixed = m.hirzebruch_class(&q(self.x - 4), &q(self.y + self.e - self.a() - 2), &[])?;
        Ok((d, f, fixed))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example4Row {
    pub g: i64,
    pub e: i64,
    pub x: i64,
    pub y: i64,
    pub a: i64,
    #[serde(with = "crate::rational::one")]
    pub d_value: Q,
    pub d_ok: bool,
    #[serde(with = "crate::rational::one")]
    pub big_value: Q,
    pub big_ok: bool,
    #[serde(with = "crate::rational::one")]
    pub effective_value: Q,
    pub effective_ok: bool,
    #[serde(with = "crate::rational::one")]
    pub fixed_part_value: Q,
    pub fixed_part_ok: bool,
    #[serde(with = "crate::rational::one")]
    pub fixed_part_lattice_value: Q,
    pub fixed_part_lattice_ok: bool,
    #[serde(with = "crate::rational::one")]
    pub k: Q,
    /// All four printed inequalities hold.
    pub feasible: bool,
}

pub fn example4_constraints(inst: &Example4Instance) -> Example4Row {
    let d_value = inst.d_value();
    let big_value = inst.big_value();
    let effective_value = inst.effective_value();
    let fixed_part_value = inst.fixed_part_printed();
    let fixed_part_lattice_value = inst.fixed_part_lattice();
    let d_ok = d_value.is_positive();
    let big_ok = big_value.is_positive();
    let effective_ok = effective_value.is_positive();
    let fixed_part_ok = fixed_part_value.is_negative();
    Example4Row {
        g: inst.g,
        e: inst.e,
        x: inst.x,
        y: inst.y,
        a: inst.a(),
        feasible: d_ok && big_ok && effective_ok && fixed_part_ok,
        fixed_part_lattice_ok: fixed_part_lattice_value.is_negative(),
        k: inst.k_value(),
        d_value,
        d_ok,
        big_value,
        big_ok,
        effective_value,
        effective_ok,
        fixed_part_value,
        fixed_part_ok,
        fixed_part_lattice_value,
    }
}

/// Integer values of `e` in `[0, g]` admitted by three readings of the
/// system at `x = 8`, `y = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRow {
    pub g: i64,
    /// `(12g - 13)/36 < e < (3g - 4)/8`, the interval as printed.
    pub printed_interval: Vec<i64>,
    /// `(12g - 5)/36 < e < (3g - 4)/8`, from exact evaluation of inequality (D).
    pub exact_interval: Vec<i64>,
    /// All four printed inequalities, evaluated exactly.
    pub printed_system: Vec<i64>,
    /// As above with the fixed-part inequality replaced by `(K + D).M < 0`.
    pub lattice_system: Vec<i64>,
    /// The claim "nonempty for g >= 27" applies to this `g`.
    pub claim_applies: bool,
}

pub fn interval_row(g: i64) -> Result<IntervalRow> {
    let mut printed_interval = Vec::new();
    let mut exact_interval = Vec::new();
    let mut printed_system = Vec::new();
    let mut lattice_system = Vec::new();
    for e in 0..=g {
        let r = example4_constraints(&Example4Instance::new(g, e, 8, 1)?);
        if q(36 * e) > q(12 * g - 13) && q(8 * e) < q(3 * g - 4) {
            printed_interval.push(e);
        }
        if q(36 * e) > q(12 * g - 5) && q(8 * e) < q(3 * g - 4) {
            exact_interval.push(e);
        }
        if r.feasible {
            printed_system.push(e);
        }
        if r.d_ok && r.big_ok && r.effective_ok && r.fixed_part_lattice_ok {
            lattice_system.push(e);
        }
    }
    Ok(IntervalRow { g, printed_interval, exact_interval, printed_system, lattice_system, claim_applies: g >= 27 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub instance: Example4Instance,
    pub claim: String,
    pub row: Example4Row,
    pub holds: bool,
}

/// The stated example `g = 10`, `e = 3`, `x = 8`, `y = 1`, claimed to satisfy
/// every inequality.
pub fn stated_instance_check() -> ClaimCheck {
    let instance = Example4Instance { g: 10, e: 3, x: 8, y: 1 };
    let row = example4_constraints(&instance);
    ClaimCheck {
        instance,
        claim: "g = 10, e = 3, x = 8, y = 1 satisfies all four inequalities".into(),
        holds: row.feasible,
        row,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub evaluated: usize,
    pub feasible: usize,
    /// Feasible rows, or every row when requested, sorted by `(g, e, x, y)`.
    pub rows: Vec<Example4Row>,
    pub intervals: Vec<IntervalRow>,
    pub claims: Vec<ClaimCheck>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub g: RangeInclusive<i64>,
    pub x: RangeInclusive<i64>,
    pub y: RangeInclusive<i64>,
    /// Defaults to `0..=g` for each `g`.
    pub e: Option<RangeInclusive<i64>>,
    pub all_rows: bool,
}

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.parse().ok().filter(|&n| n > 0)
}

pub fn example4_search(spec: &SearchSpec) -> Result<SearchReport> {
    for (name, r) in [("g", &spec.g), ("x", &spec.x), ("y", &spec.y)] {
        if r.is_empty() {
            return Err(Error::InvalidInput(format!("empty {name} range")));
        }
    }
    if spec.e.as_ref().is_some_and(|r| r.is_empty()) {
        return Err(Error::InvalidInput("empty e range".into()));
    }
    if *spec.g.start() < 2 {
        return Err(Error::InvalidInput("g must be at least 2".into()));
    }
    let mut instances = Vec::new();
    for g in spec.g.clone() {
        let es = match &spec.e {
            Some(r) => (*r.start()).max(0)..=(*r.end()).min(g),
            None => 0..=g,
        };
        for e in es {
            for x in spec.x.clone() {
                for y in spec.y.clone() {
                    instances.push(Example4Instance { g, e, x, y });
                }
            }
        }
    }
    let run = || -> Result<(Vec<Example4Row>, Vec<IntervalRow>)> {
        let rows: Vec<Example4Row> = instances.par_iter().map(example4_constraints).collect();
        let intervals = spec.g.clone().into_par_iter().map(interval_row).collect::<Result<Vec<_>>>()?;
        Ok((rows, intervals))
    };
    let (rows, intervals) = match thread_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let evaluated = rows.len();
    let feasible = rows.iter().filter(|r| r.feasible).count();
    let rows = if spec.all_rows { rows } else { rows.into_iter().filter(|r| r.feasible).collect() };
    let mut notes = vec![
        "fixed_part_value is the printed inequality; fixed_part_lattice_value is (K+D).M on the lattice".into(),
        "positive dimension bounds are taken to give irreducible members; this is assumed, not checked".into(),
    ];
    if rows.iter().any(|r| r.feasible && !r.fixed_part_lattice_ok) {
        notes.push("some feasible rows have (K+D).M >= 0 on the lattice".into());
    }
    let claim = stated_instance_check();
    if !claim.holds {
        notes.push(format!("stated instance fails: inequality (D) evaluates to {}", crate::rational::fmt_q(&claim.row.d_value)));
    }
    Ok(SearchReport { evaluated, feasible, rows, intervals, claims: vec![claim], notes })
}

/// Lattice cross-check of one instance: `F^2`, `p_a(F)`, `D.F`, `(K + D).M`
/// and the dimension bound of `|D|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCheck {
    #[serde(with = "crate::rational::one")]
    pub f_square: Q,
    #[serde(with = "crate::rational::one")]
    pub f_genus: Q,
    #[serde(with = "crate::rational::one")]
    pub d_dot_f: Q,
    #[serde(with = "crate::rational::one")]
    pub adjoint_dot_m: Q,
    pub residual_is_f: bool,
    pub agrees: bool,
}

pub fn lattice_check(inst: &Example4Instance) -> Result<LatticeCheck> {
    let m = inst.model();
    let (d, f, fixed) = inst.classes()?;
    let adj = &m.canonical_class() + &d;
    let f_square = m.square(&f)?;
    let f_genus = m.arithmetic_genus(&f)?;
    let d_dot_f = m.intersect(&d, &f)?;
    let adjoint_dot_m = m.intersect(&adj, &fixed)?;
    let residual_is_f = &adj - &fixed == f;
    let dim_d = crate::pencil::dim_lower_bound_hirzebruch(inst.x, inst.y, inst.e, &vec![2; inst.points()]);
    let agrees = f_square.is_zero()
        && f_genus == q(inst.g)
        && d_dot_f == inst.k_value()
        && adjoint_dot_m == inst.fixed_part_lattice()
        && dim_d == inst.d_value()
        && residual_is_f;
    Ok(LatticeCheck { f_square, f_genus, d_dot_f, adjoint_dot_m, residual_is_f, agrees })
}
