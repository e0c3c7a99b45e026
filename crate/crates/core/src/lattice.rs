//! Picard lattices of rational surface models.
//!
//! A model is a base surface (the plane, a Hirzebruch surface, or an abstract
//! lattice given by its Gram matrix) followed by `n` point blow-ups. The basis
//! is the base part followed by the total transforms `E1, ..., En` of the
//! exceptional curves, in insertion order. Infinitely near points are not
//! distinguished from proper ones.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{fmt_q, q, Q};

/// A divisor class written in the basis of some [`SurfaceModel`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(#[serde(with = "crate::rational::vec")] pub Vec<Q>);

impl DivisorClass {
    pub fn zero(len: usize) -> Self {
        DivisorClass(vec![Q::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut c = Self::zero(len);
        c.0[i] = Q::one();
        c
    }

    pub fn from_i64(v: &[i64]) -> Self {
        DivisorClass(v.iter().map(|&x| q(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn scale(&self, s: &Q) -> Self {
        DivisorClass(self.0.iter().map(|x| x * s).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &Q, other: &DivisorClass) -> Self {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "class length mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), rhs.len(), "class length mismatch");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

/// Irregularity, geometric genus, `h^{1,1}` and topological Euler number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeData {
    pub q: i64,
    pub p_g: i64,
    pub h11: i64,
    pub euler_e: i64,
}

impl HodgeData {
    /// `e = 2 - 4q + 2p_g + h^{1,1}`
    pub fn euler_from_hodge(&self) -> i64 {
        2 - 4 * self.q + 2 * self.p_g + self.h11
    }

    pub fn is_consistent(&self) -> bool {
        self.euler_e == self.euler_from_hodge()
    }

    pub fn chi_o(&self) -> i64 {
        1 - self.q + self.p_g
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0 && self.p_g == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Basis `(H, E1..En)`.
    PlaneBlowup,
    /// Basis `(Dinf, G, E1..En)` with `Dinf^2 = e`, `Dinf.G = 1`, `G^2 = 0`.
    HirzebruchBlowup { e: u32 },
    /// Arbitrary base lattice, blown up `n` times.
    Custom { gram: QMatrix, canonical: Vec<Q>, hodge: HodgeData },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct SurfaceModel {
    kind: ModelKind,
    num_points: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModelJson {
    P2Blowup {
        points: usize,
    },
    Hirzebruch {
        e: u32,
        points: usize,
    },
    Custom {
        #[serde(with = "crate::rational::matrix")]
        gram: Vec<Vec<Q>>,
        #[serde(with = "crate::rational::vec")]
        canonical: Vec<Q>,
        hodge: HodgeData,
        #[serde(default)]
        points: usize,
    },
}

impl TryFrom<ModelJson> for SurfaceModel {
    type Error = Error;
    fn try_from(m: ModelJson) -> Result<Self> {
        match m {
            ModelJson::P2Blowup { points } => Ok(SurfaceModel::plane(points)),
            ModelJson::Hirzebruch { e, points } => Ok(SurfaceModel::hirzebruch(e, points)),
            ModelJson::Custom { gram, canonical, hodge, points } => {
                let mut m = SurfaceModel::custom(QMatrix(gram), canonical, hodge)?;
                m.num_points = points;
                Ok(m)
            }
        }
    }
}

impl From<SurfaceModel> for ModelJson {
    fn from(m: SurfaceModel) -> Self {
        match m.kind {
            ModelKind::PlaneBlowup => ModelJson::P2Blowup { points: m.num_points },
            ModelKind::HirzebruchBlowup { e } => ModelJson::Hirzebruch { e, points: m.num_points },
            ModelKind::Custom { gram, canonical, hodge } => {
                ModelJson::Custom { gram: gram.0, canonical, hodge, points: m.num_points }
            }
        }
    }
}

impl SurfaceModel {
    pub fn plane(points: usize) -> Self {
        SurfaceModel { kind: ModelKind::PlaneBlowup, num_points: points }
    }

    pub fn hirzebruch(e: u32, points: usize) -> Self {
        SurfaceModel { kind: ModelKind::HirzebruchBlowup { e }, num_points: points }
    }

    /// Abstract lattice model. `hodge` describes the base surface before any
    /// blow-up and must satisfy the Euler number relation.
    pub fn custom(gram: QMatrix, canonical: Vec<Q>, hodge: HodgeData) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if canonical.len() != gram.dim() {
            return Err(Error::DimensionMismatch { expected: gram.dim(), found: canonical.len() });
        }
        if !hodge.is_consistent() {
            return Err(Error::InvalidInput(format!(
                "Hodge data violates e = 2 - 4q + 2p_g + h11: {hodge:?}"
            )));
        }
        Ok(SurfaceModel { kind: ModelKind::Custom { gram, canonical, hodge }, num_points: 0 })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    /// Number of base (non-exceptional) basis vectors.
    pub fn head_len(&self) -> usize {
        match &self.kind {
            ModelKind::PlaneBlowup => 1,
            ModelKind::HirzebruchBlowup { .. } => 2,
            ModelKind::Custom { gram, .. } => gram.dim(),
        }
    }

    pub fn basis_len(&self) -> usize {
        self.head_len() + self.num_points
    }

    /// Basis position of `E_i`, 1-based.
    pub fn exceptional_index(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.num_points, "no exceptional class E{i}");
        self.head_len() + i - 1
    }

    pub fn exceptional(&self, i: usize) -> DivisorClass {
        DivisorClass::unit(self.basis_len(), self.exceptional_index(i))
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let head: Vec<String> = match &self.kind {
            ModelKind::PlaneBlowup => vec!["H".into()],
            ModelKind::HirzebruchBlowup { .. } => vec!["Dinf".into(), "G".into()],
            ModelKind::Custom { gram, .. } => (1..=gram.dim()).map(|i| format!("B{i}")).collect(),
        };
        head.into_iter().chain((1..=self.num_points).map(|i| format!("E{i}"))).collect()
    }

    pub fn hodge(&self) -> HodgeData {
        let n = self.num_points as i64;
        match &self.kind {
            ModelKind::PlaneBlowup => HodgeData { q: 0, p_g: 0, h11: n + 1, euler_e: n + 3 },
            ModelKind::HirzebruchBlowup { .. } => {
                HodgeData { q: 0, p_g: 0, h11: n + 2, euler_e: n + 4 }
            }
            ModelKind::Custom { hodge, .. } => HodgeData {
                h11: hodge.h11 + n,
                euler_e: hodge.euler_e + n,
                ..hodge.clone()
            },
        }
    }

    pub fn is_rational(&self) -> bool {
        self.hodge().is_rational()
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> Q {
        let h = self.head_len();
        if i >= h || j >= h {
            return if i == j { q(-1) } else { Q::zero() };
        }
        match &self.kind {
            ModelKind::PlaneBlowup => q(1),
            ModelKind::HirzebruchBlowup { e } => match (i, j) {
                (0, 0) => q(*e as i64),
                (1, 1) => Q::zero(),
                _ => q(1),
            },
            ModelKind::Custom { gram, .. } => gram.0[i][j].clone(),
        }
    }

    pub fn gram(&self) -> QMatrix {
        let n = self.basis_len();
        QMatrix((0..n).map(|i| (0..n).map(|j| self.gram_entry(i, j)).collect()).collect())
    }

    pub fn check_len(&self, c: &DivisorClass) -> Result<()> {
        if c.len() != self.basis_len() {
            return Err(Error::DimensionMismatch { expected: self.basis_len(), found: c.len() });
        }
        Ok(())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Q> {
        self.check_len(a)?;
        self.check_len(b)?;
        let h = self.head_len();
        let (a, b) = (&a.0, &b.0);
        let head = match &self.kind {
            ModelKind::PlaneBlowup => &a[0] * &b[0],
            ModelKind::HirzebruchBlowup { e } => {
                q(*e as i64) * &a[0] * &b[0] + &a[0] * &b[1] + &a[1] * &b[0]
            }
            ModelKind::Custom { gram, .. } => {
                let mut s = Q::zero();
                for i in 0..h {
                    if a[i].is_zero() {
                        continue;
                    }
                    for j in 0..h {
                        s += &a[i] * &gram.0[i][j] * &b[j];
                    }
                }
                s
            }
        };
        let tail: Q = a[h..].iter().zip(&b[h..]).map(|(x, y)| x * y).sum();
        Ok(head - tail)
    }

    pub fn square(&self, a: &DivisorClass) -> Result<Q> {
        self.intersect(a, a)
    }

    /// `-3H + sum E_i`, `-2Dinf + (e-2)G + sum E_i`, or the custom base
    /// canonical class plus `sum E_i`.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut head: Vec<Q> = match &self.kind {
            ModelKind::PlaneBlowup => vec![q(-3)],
            ModelKind::HirzebruchBlowup { e } => vec![q(-2), q(*e as i64 - 2)],
            ModelKind::Custom { canonical, .. } => canonical.clone(),
        };
        head.extend(std::iter::repeat_n(q(1), self.num_points));
        DivisorClass(head)
    }

    /// `c.(c + K) / 2 + 1`.
    pub fn arithmetic_genus(&self, c: &DivisorClass) -> Result<Q> {
        let k = self.canonical_class();
        self.check_len(c)?;
        let ck = c + &k;
        Ok(self.intersect(c, &ck)? / q(2) + q(1))
    }

    /// Total transform of `c` after one further blow-up.
    pub fn pullback(&self, c: &DivisorClass) -> DivisorClass {
        let mut v = c.0.clone();
        v.push(Q::zero());
        DivisorClass(v)
    }

    /// Blow up one new point. Each class is replaced by its pullback minus its
    /// multiplicity at the point times the new exceptional class.
    pub fn blow_up(&self, classes: &[DivisorClass], mults: &[Q]) -> Result<(SurfaceModel, Vec<DivisorClass>)> {
        if classes.len() != mults.len() {
            return Err(Error::DimensionMismatch { expected: classes.len(), found: mults.len() });
        }
        let next = SurfaceModel { kind: self.kind.clone(), num_points: self.num_points + 1 };
        let e_new = next.exceptional(next.num_points);
        let out = classes
            .iter()
            .zip(mults)
            .map(|(c, m)| {
                self.check_len(c)?;
                Ok(self.pullback(c).add_scaled(&-m, &e_new))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((next, out))
    }

    /// Contract the basis exceptional class `E_i` (1-based). Classes on the
    /// contracted model are obtained with [`SurfaceModel::pushforward`].
    pub fn contract(&self, i: usize) -> Result<SurfaceModel> {
        if i == 0 || i > self.num_points {
            return Err(Error::InvalidInput(format!(
                "E{i} is not a basis exceptional class of a model with {} points",
                self.num_points
            )));
        }
        Ok(SurfaceModel { kind: self.kind.clone(), num_points: self.num_points - 1 })
    }

    /// Pushforward along the contraction of `E_i`: drop its coordinate.
    pub fn pushforward(&self, c: &DivisorClass, i: usize) -> Result<DivisorClass> {
        self.check_len(c)?;
        if i == 0 || i > self.num_points {
            return Err(Error::InvalidInput(format!("no exceptional class E{i}")));
        }
        let idx = self.exceptional_index(i);
        let mut v = c.0.clone();
        v.remove(idx);
        Ok(DivisorClass(v))
    }

    /// `d H - sum nu_i E_i` on a plane blow-up.
    pub fn plane_class(&self, d: i64, nus: &[i64]) -> Result<DivisorClass> {
        if self.kind != ModelKind::PlaneBlowup {
            return Err(Error::InvalidInput("plane class on a non-plane model".into()));
        }
        self.with_exceptional_part(vec![q(d)], nus)
    }

    /// `a Dinf + b G - sum nu_i E_i` on a Hirzebruch blow-up.
    pub fn hirzebruch_class(&self, a: &Q, b: &Q, nus: &[i64]) -> Result<DivisorClass> {
        if !matches!(self.kind, ModelKind::HirzebruchBlowup { .. }) {
            return Err(Error::InvalidInput("Hirzebruch class on another model".into()));
        }
        self.with_exceptional_part(vec![a.clone(), b.clone()], nus)
    }

    fn with_exceptional_part(&self, mut head: Vec<Q>, nus: &[i64]) -> Result<DivisorClass> {
        if nus.len() > self.num_points {
            return Err(Error::DimensionMismatch { expected: self.num_points, found: nus.len() });
        }
        head.extend(nus.iter().map(|&n| q(-n)));
        head.resize(self.basis_len(), Q::zero());
        Ok(DivisorClass(head))
    }
}

/// Free functions mirroring the model methods.
pub fn intersect(model: &SurfaceModel, a: &DivisorClass, b: &DivisorClass) -> Result<Q> {
    model.intersect(a, b)
}

pub fn canonical_class(model: &SurfaceModel) -> DivisorClass {
    model.canonical_class()
}

pub fn arithmetic_genus_class(model: &SurfaceModel, c: &DivisorClass) -> Result<Q> {
    model.arithmetic_genus(c)
}

pub fn blow_up_transform(
    model: &SurfaceModel,
    classes: &[DivisorClass],
    mults: &[Q],
) -> Result<(SurfaceModel, Vec<DivisorClass>)> {
    model.blow_up(classes, mults)
}
