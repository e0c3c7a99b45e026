//! Adjoint linear systems `|K + D|` on rational models: dimension lower
//! bounds, bigness, removal of fixed components and detection of a pencil
//! `K + D = Z + nF` with `F^2 = 0`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, ModelKind, SurfaceModel};
use crate::rational::{as_i64, fmt_q, gcd_all, q, qf, Q};

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn half_sum(mults: &[Q], f: impl Fn(&Q) -> Q) -> Q {
    mults.iter().map(f).sum::<Q>() * qf(1, 2)
}

/// `d(d + 3)/2 - sum nu(nu + 1)/2`
pub fn dim_lower_bound_p2(d: i64, mults: &[i64]) -> Q {
    plane_dim_bound(&q(d), &qs(mults))
}

/// `d^2 - sum nu^2 > 0`
pub fn is_big_p2(d: i64, mults: &[i64]) -> bool {
    plane_big(&q(d), &qs(mults))
}

/// `(a + 1)(b + ae/2) + a - sum nu(nu + 1)/2`
pub fn dim_lower_bound_hirzebruch(a: i64, b: i64, e: i64, mults: &[i64]) -> Q {
    hirzebruch_dim_bound(&q(a), &q(b), &q(e), &qs(mults))
}

/// `a(b + ae/2) - sum nu^2 / 2 > 0`
pub fn is_big_hirzebruch(a: i64, b: i64, e: i64, mults: &[i64]) -> bool {
    hirzebruch_big(&q(a), &q(b), &q(e), &qs(mults))
}

fn plane_dim_bound(d: &Q, mults: &[Q]) -> Q {
    d * (d + q(3)) * qf(1, 2) - half_sum(mults, |n| n * (n + q(1)))
}

fn plane_big(d: &Q, mults: &[Q]) -> bool {
    d * d - mults.iter().map(|n| n * n).sum::<Q>() > Q::zero()
}

fn hirzebruch_dim_bound(a: &Q, b: &Q, e: &Q, mults: &[Q]) -> Q {
    (a + q(1)) * (b + a * e * qf(1, 2)) + a - half_sum(mults, |n| n * (n + q(1)))
}

fn hirzebruch_big(a: &Q, b: &Q, e: &Q, mults: &[Q]) -> bool {
    a * (b + a * e * qf(1, 2)) - half_sum(mults, |n| n * n) > Q::zero()
}

/// Bigness and dimension estimate of a class from its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEstimate {
    #[serde(with = "crate::rational::one")]
    pub square: Q,
    /// Lower bound for `dim |C|`; absent on custom models.
    #[serde(with = "crate::rational::opt")]
    pub dim_lower_bound: Option<Q>,
    pub big: Option<bool>,
    pub witness: String,
}

pub fn estimate(model: &SurfaceModel, c: &DivisorClass) -> Result<SystemEstimate> {
    model.check_len(c)?;
    let square = model.square(c)?;
    let head = model.head_len();
    let mults: Vec<Q> = c.0[head..].iter().map(|x| -x).collect();
    Ok(match model.kind() {
        ModelKind::PlaneBlowup => {
            let d = &c.0[0];
            let big = plane_big(d, &mults);
            SystemEstimate {
                dim_lower_bound: Some(plane_dim_bound(d, &mults)),
                big: Some(big),
                witness: format!("d^2 - sum nu^2 = {}", fmt_q(&square)),
                square,
            }
        }
        ModelKind::HirzebruchBlowup { e } => {
            let (a, b, e) = (&c.0[0], &c.0[1], q(*e as i64));
            let big = hirzebruch_big(a, b, &e, &mults);
            SystemEstimate {
                dim_lower_bound: Some(hirzebruch_dim_bound(a, b, &e, &mults)),
                big: Some(big),
                witness: format!("a(b + ae/2) - sum nu^2/2 = {}", fmt_q(&(&square * qf(1, 2)))),
                square,
            }
        }
        ModelKind::Custom { .. } => SystemEstimate {
            square,
            dim_lower_bound: None,
            big: None,
            witness: "no dimension estimate on a custom lattice".into(),
        },
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionPolicy {
    /// Remove a candidate only while it pairs negatively with the current
    /// adjoint class.
    #[default]
    NegativePairing,
    /// Remove every candidate once, in order, as a stated fixed part.
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPart {
    pub candidate: usize,
    pub class: DivisorClass,
    /// Pairing with the adjoint class at the moment of removal.
    #[serde(with = "crate::rational::one")]
    pub pairing: Q,
    pub estimate: SystemEstimate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilReport {
    pub adjoint_class: DivisorClass,
    pub big: SystemEstimate,
    pub policy: ExtractionPolicy,
    pub fixed_parts: Vec<FixedPart>,
    pub residual: DivisorClass,
    #[serde(rename = "F")]
    pub pencil_class: DivisorClass,
    #[serde(rename = "n")]
    pub multiplicity: i64,
    #[serde(rename = "g", with = "crate::rational::one")]
    pub fiber_genus: Q,
    #[serde(rename = "b")]
    pub base_genus: i64,
    #[serde(with = "crate::rational::one")]
    pub k: Q,
    /// `D.F` recomputed from the full Gram matrix.
    pub k_matches_gram: bool,
    pub notes: Vec<String>,
}

const EXTRACTION_CAP: usize = 1000;

/// Split `K + D` into fixed parts from `candidates` and a residual `nF`.
pub fn analyze_adjoint_system(
    model: &SurfaceModel,
    d: &DivisorClass,
    candidates: &[DivisorClass],
    policy: ExtractionPolicy,
) -> Result<PencilReport> {
    model.check_len(d)?;
    for c in candidates {
        model.check_len(c)?;
    }
    if !model.is_rational() {
        return Err(Error::Unsupported("pencil analysis needs a rational model".into()));
    }
    let adjoint = &model.canonical_class() + d;
    let big = estimate(model, &adjoint)?;
    let mut notes = Vec::new();
    let mut current = adjoint.clone();
    let mut fixed_parts = Vec::new();
    match policy {
        ExtractionPolicy::NegativePairing => loop {
            let mut next = None;
            for (i, g) in candidates.iter().enumerate() {
                let p = model.intersect(&current, g)?;
                if p.is_negative() {
                    next = Some((i, p));
                    break;
                }
            }
            let Some((i, pairing)) = next else { break };
            if fixed_parts.len() >= EXTRACTION_CAP {
                return Err(Error::IterationCap(EXTRACTION_CAP));
            }
            let g = &candidates[i];
            fixed_parts.push(FixedPart { candidate: i, class: g.clone(), pairing, estimate: estimate(model, g)? });
            current = &current - g;
        },
        ExtractionPolicy::Asserted => {
            for (i, g) in candidates.iter().enumerate() {
                let pairing = model.intersect(&current, g)?;
                if !pairing.is_negative() {
                    notes.push(format!(
                        "candidate #{i} removed as asserted although its pairing {} is not negative",
                        fmt_q(&pairing)
                    ));
                }
                fixed_parts.push(FixedPart { candidate: i, class: g.clone(), pairing, estimate: estimate(model, g)? });
                current = &current - g;
            }
        }
    }
    for f in &fixed_parts {
        if f.estimate.dim_lower_bound.as_ref().is_some_and(|b| b.is_negative()) {
            notes.push(format!(
                "candidate #{} has a negative dimension lower bound; its effectivity is assumed, not certified",
                f.candidate
            ));
        }
    }
    let residual = current;
    let (multiplicity, pencil_class) = primitive_part(&residual)?;
    if !model.square(&pencil_class)?.is_zero() {
        return Err(Error::NoPencil(format!(
            "residual {residual} = {multiplicity} * {pencil_class} with F^2 = {}",
            fmt_q(&model.square(&pencil_class)?)
        )));
    }
    let fiber_genus = model.arithmetic_genus(&pencil_class)?;
    let k = model.intersect(d, &pencil_class)?;
    let gram_k: Q = model
        .gram()
        .mul_vec(&pencil_class.0)?
        .iter()
        .zip(&d.0)
        .map(|(a, b)| a * b)
        .sum();
    notes.push("base of the pencil taken to be P^1 (b = 0) for rational models".into());
    Ok(PencilReport {
        adjoint_class: adjoint,
        big,
        policy,
        fixed_parts,
        residual,
        pencil_class,
        multiplicity,
        fiber_genus,
        base_genus: 0,
        k_matches_gram: gram_k == k,
        k,
        notes,
    })
}

/// `c = n F` with `F` integral and primitive, `n >= 1`.
pub fn primitive_part(c: &DivisorClass) -> Result<(i64, DivisorClass)> {
    if c.is_zero() {
        return Err(Error::NoPencil("residual class is zero".into()));
    }
    if !c.is_integral() {
        return Err(Error::NoPencil(format!("residual {c} is not integral")));
    }
    let nums: Vec<BigInt> = c.0.iter().map(|x| x.numer().clone()).collect();
    let g = gcd_all(&nums);
    let n = Q::from(g);
    let f = DivisorClass(c.0.iter().map(|x| x / &n).collect());
    let n = as_i64(&n).filter(|n| *n >= 1).ok_or_else(|| Error::NoPencil("multiplicity out of range".into()))?;
    Ok((n, f))
}
