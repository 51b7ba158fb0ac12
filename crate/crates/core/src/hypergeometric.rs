//! Modification factors of the four I-functions as [`Expr`]s.
//!
//! Every infinite-product ratio `∏_{h≤b}/∏_{h≤0}` is reduced in one place,
//! [`rising`] and its inverse [`poch_ratio`]. Each model's displays are built
//! by their own functions so that the two sides of an identity never share a
//! construction.
//!
//! *DIRECT* forms substitute the fixed point's restriction of the tautological
//! roots (`y_j ↦ x_{i_j}`, `w_j ↦ -x_{j_j}`) and take the degrees `d⃗`.
//! *FACTORED* forms take `a⃗` (`a_j = d_j - β·x_j` on the rank-`r` side,
//! `a_j = d_j + β·x_{r+j}` on the rank-`s` side) and are written on the
//! standard fixed point, reached through the frame of [`FixedPoint::frame`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Expr, LinearForm, Rat, ShiftedRoot, Var};
use crate::localization::{BetaClass, DegreeVector, FixedPoint, LocalizationError, ModelShape, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergeometricError {
    #[error("{model} lives on the {expected:?} side, fixed point is on the {got:?} side")]
    SideMismatch { model: Model, expected: Side, got: Side },
    #[error("{model} needs {expected} degrees, got {got}")]
    DegreeLength { model: Model, expected: usize, got: usize },
    #[error(transparent)]
    Shape(#[from] LocalizationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Model {
    Gr,
    GrHat,
    Pax,
    Paxy,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Gr, Model::GrHat, Model::Pax, Model::Paxy];

    pub fn side(self) -> Side {
        match self {
            Model::Gr | Model::Pax => Side::Primal,
            Model::GrHat | Model::Paxy => Side::Dual,
        }
    }

    pub fn c_side(self) -> CSide {
        match self {
            Model::Gr | Model::GrHat => CSide::GrSide,
            Model::Pax | Model::Paxy => CSide::PaxSide,
        }
    }

    /// `a_j` for the factored form from `d_j` at frame position `p` of the
    /// `j`-th root.
    pub fn a_from_d(self, d: i64, bx_at_root: i64) -> i64 {
        match self.side() {
            Side::Primal => d - bx_at_root,
            Side::Dual => d + bx_at_root,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Model::Gr => "GR",
            Model::GrHat => "GR_HAT",
            Model::Pax => "PAX",
            Model::Paxy => "PAXY",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Form {
    Direct,
    Factored,
}

/// Which common factor: `C_β` (Grassmannian duality) or `C̃_β` (PAX/PAXY).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CSide {
    GrSide,
    PaxSide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub model: Model,
    pub form: Form,
    pub fp: FixedPoint,
    pub beta: BetaClass,
    pub degrees: DegreeVector,
}

/// `f(h) = base + h·step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub base: LinearForm,
    pub step: LinearForm,
}

impl Affine {
    pub fn new(base: LinearForm, step: LinearForm) -> Self {
        Affine { base, step }
    }

    /// `base + h·z`.
    pub fn in_z(base: LinearForm) -> Self {
        Affine { base, step: LinearForm::var(Var::Zgiv) }
    }

    /// `base + h`.
    pub fn unit(base: LinearForm) -> Self {
        Affine { base, step: LinearForm::constant(1) }
    }

    pub fn at(&self, h: i64) -> LinearForm {
        &self.base + &self.step.scale(&Rat::from_int(h))
    }
}

/// `∏_{h=lo}^{hi} f(h)`, empty when `hi < lo`.
pub fn product_range(f: &Affine, lo: i64, hi: i64) -> Expr {
    Expr::product((lo..=hi).map(|h| Expr::linear(f.at(h))))
}

/// `∏_{h≤c} f(h) / ∏_{h≤0} f(h)`.
pub fn rising(f: &Affine, c: i64) -> Expr {
    if c >= 0 {
        product_range(f, 1, c)
    } else {
        Expr::quotient(Expr::one(), product_range(f, c + 1, 0))
    }
}

/// `∏_{h≤0} f(h) / ∏_{h≤c} f(h)`; `step` must be nonzero.
pub fn poch_ratio(f: &Affine, c: i64) -> Expr {
    if c >= 0 {
        Expr::quotient(Expr::one(), product_range(f, 1, c))
    } else {
        product_range(f, c + 1, 0)
    }
}

/// Integer vectors of length `parts` with entries `>= lower_bound` summing to
/// `a`, in lexicographic order.
pub fn compositions(a: i64, parts: usize, lower_bound: i64) -> Vec<DegreeVector> {
    fn rec(left: i64, parts: usize, lb: i64, cur: &mut Vec<i64>, out: &mut Vec<DegreeVector>) {
        if parts == 1 {
            if left >= lb {
                cur.push(left);
                out.push(DegreeVector(cur.clone()));
                cur.pop();
            }
            return;
        }
        let max_first = left - (parts as i64 - 1) * lb;
        for v in lb..=max_first {
            cur.push(v);
            rec(left - v, parts - 1, lb, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 {
        rec(a, parts, lower_bound, &mut Vec::new(), &mut out);
    }
    out
}

/// `Σ c_v·v + zc·z` over the given variables.
fn lin(terms: &[(i64, Var)], zc: i64) -> LinearForm {
    let mut f = LinearForm::zero();
    for &(c, v) in terms {
        f = f.plus_atom(c, v);
    }
    f.plus_atom(zc, Var::Zgiv)
}

fn check_spec(spec: &FactorSpec, shape: &ModelShape) -> Result<(), HypergeometricError> {
    let expected = spec.model.side();
    if spec.fp.side() != expected {
        return Err(HypergeometricError::SideMismatch { model: spec.model, expected, got: spec.fp.side() });
    }
    let want = shape.rank(expected);
    if spec.degrees.len() != want {
        return Err(HypergeometricError::DegreeLength { model: spec.model, expected: want, got: spec.degrees.len() });
    }
    spec.beta.clone().for_shape(shape)?;
    FixedPoint::new(spec.fp.side(), spec.fp.indices().to_vec(), shape)?;
    Ok(())
}

/// The restricted modification factor described by `spec`.
pub fn restricted_factor(spec: &FactorSpec, shape: &ModelShape) -> Result<Expr, HypergeometricError> {
    check_spec(spec, shape)?;
    let d = spec.degrees.entries();
    let b = &spec.beta;
    Ok(match spec.form {
        Form::Direct => match spec.model {
            Model::Gr => direct_gr(spec.fp.indices(), b, d, shape),
            Model::GrHat => direct_gr_hat(spec.fp.indices(), b, d, shape),
            Model::Pax => direct_pax(spec.fp.indices(), b, d, shape),
            Model::Paxy => direct_paxy(spec.fp.indices(), b, d, shape),
        },
        Form::Factored => {
            let frame = Frame::new(&spec.fp, b, shape);
            match spec.model {
                Model::Gr => factored_gr(&frame, d),
                Model::GrHat => factored_gr_hat(&frame, d),
                Model::Pax => factored_pax(&frame, d),
                Model::Paxy => factored_paxy(&frame, d),
            }
        }
    })
}

/// `(−y_j + z_k)`-style blocks of the GR display with `y_j = x_{i_j}`.
fn direct_gr(idx: &[usize], b: &BetaClass, d: &[i64], shape: &ModelShape) -> Expr {
    let r = idx.len();
    let mut f = Vec::new();
    for j in 0..r {
        for i in 0..r {
            if i != j {
                let base = lin(&[(1, Var::X(idx[j])), (-1, Var::X(idx[i]))], 0);
                f.push(rising(&Affine::in_z(base), d[j] - d[i]));
            }
        }
    }
    for j in 0..r {
        for i in 1..=shape.m() {
            let base = lin(&[(1, Var::X(idx[j])), (-1, Var::X(i))], 0);
            f.push(poch_ratio(&Affine::in_z(base), d[j] - b.x(i)));
        }
    }
    for j in 0..r {
        for k in 1..=shape.n() {
            let base = lin(&[(-1, Var::X(idx[j])), (1, Var::Zk(k))], 0);
            f.push(poch_ratio(&Affine::in_z(base), -d[j] + b.z(k)));
        }
    }
    Expr::product(f)
}

/// GR_HAT display with `w_j = -x_{j_j}`.
#[allow(clippy::needless_range_loop)]
fn direct_gr_hat(idx: &[usize], b: &BetaClass, d: &[i64], shape: &ModelShape) -> Expr {
    let s = idx.len();
    let w = |j: usize| (-1, Var::X(idx[j]));
    let mut f = Vec::new();
    for j in 0..s {
        for i in 0..s {
            if i != j {
                let (cj, vj) = w(j);
                let (ci, vi) = w(i);
                let base = lin(&[(cj, vj), (-ci, vi)], 0);
                f.push(rising(&Affine::in_z(base), d[j] - d[i]));
            }
        }
    }
    for j in 0..s {
        for i in 1..=shape.m() {
            let base = lin(&[w(j), (1, Var::X(i))], 0);
            f.push(poch_ratio(&Affine::in_z(base), d[j] + b.x(i)));
        }
    }
    for k in 1..=shape.n() {
        for j in 0..s {
            let base = lin(&[w(j), (1, Var::Zk(k))], 0);
            f.push(rising(&Affine::in_z(base), d[j] + b.z(k)));
        }
    }
    for i in 1..=shape.m() {
        for k in 1..=shape.n() {
            let base = lin(&[(-1, Var::X(i)), (1, Var::Zk(k))], 0);
            f.push(poch_ratio(&Affine::in_z(base), -b.x(i) + b.z(k)));
        }
    }
    Expr::product(f)
}

/// PAX display with `y_j = x_{i_j}`.
fn direct_pax(idx: &[usize], b: &BetaClass, d: &[i64], shape: &ModelShape) -> Expr {
    let r = idx.len();
    let mut f = Vec::new();
    for j in 0..r {
        for i in 0..r {
            if i != j {
                let base = lin(&[(1, Var::X(idx[j])), (-1, Var::X(idx[i]))], 0);
                f.push(rising(&Affine::in_z(base), d[j] - d[i]));
            }
        }
    }
    for j in 0..r {
        for i in 1..=shape.m() {
            let base = lin(&[(1, Var::X(idx[j])), (-1, Var::X(i))], 0);
            f.push(poch_ratio(&Affine::in_z(base), d[j] - b.x(i)));
        }
    }
    for j in 0..r {
        for k in 1..=shape.n() {
            let base = lin(&[(1, Var::X(idx[j])), (-1, Var::Zk(k))], 0);
            f.push(rising(&Affine::in_z(base), d[j] - b.z(k)));
        }
    }
    Expr::product(f)
}

/// PAXY display with `w_j = -x_{j_j}`.
fn direct_paxy(idx: &[usize], b: &BetaClass, d: &[i64], shape: &ModelShape) -> Expr {
    let s = idx.len();
    let mut f = Vec::new();
    for i in 0..s {
        for j in 0..s {
            if i != j {
                // w_i - w_j = -x_{j_i} + x_{j_j}
                let base = lin(&[(-1, Var::X(idx[i])), (1, Var::X(idx[j]))], 0);
                f.push(rising(&Affine::in_z(base), d[i] - d[j]));
            }
        }
    }
    for j in 0..s {
        for i in 1..=shape.m() {
            let base = lin(&[(-1, Var::X(idx[j])), (1, Var::X(i))], 0);
            f.push(poch_ratio(&Affine::in_z(base), d[j] + b.x(i)));
        }
    }
    for k in 1..=shape.n() {
        for j in 0..s {
            let base = lin(&[(1, Var::X(idx[j])), (-1, Var::Zk(k))], 0);
            f.push(poch_ratio(&Affine::in_z(base), -d[j] - b.z(k)));
        }
    }
    for i in 1..=shape.m() {
        for k in 1..=shape.n() {
            let base = lin(&[(1, Var::X(i)), (-1, Var::Zk(k))], 0);
            f.push(rising(&Affine::in_z(base), b.x(i) - b.z(k)));
        }
    }
    Expr::product(f)
}

/// Standard-position view of a fixed point: `X_p = x_{frame[p]}` and
/// `bx_p = β·x_{frame[p]}`.
struct Frame<'a> {
    frame: Vec<usize>,
    beta: &'a BetaClass,
    r: usize,
    n: usize,
}

impl<'a> Frame<'a> {
    fn new(fp: &FixedPoint, beta: &'a BetaClass, shape: &ModelShape) -> Self {
        Frame { frame: fp.frame(shape), beta, r: shape.r(), n: shape.n() }
    }

    fn m(&self) -> usize {
        self.frame.len()
    }

    fn s(&self) -> usize {
        self.m() - self.r
    }

    /// `X_p`, 1-based position.
    fn x(&self, p: usize) -> Var {
        Var::X(self.frame[p - 1])
    }

    fn bx(&self, p: usize) -> i64 {
        self.beta.x(self.frame[p - 1])
    }

    fn bz(&self, k: usize) -> i64 {
        self.beta.z(k)
    }

    /// `c_p·X_p + c_q·X_q + zc·z`.
    fn pair(&self, cp: i64, p: usize, cq: i64, q: usize, zc: i64) -> LinearForm {
        lin(&[(cp, self.x(p)), (cq, self.x(q))], zc)
    }

    /// `c_p·X_p + c_k·z_k + zc·z`.
    fn with_zk(&self, cp: i64, p: usize, ck: i64, k: usize, zc: i64) -> LinearForm {
        lin(&[(cp, self.x(p)), (ck, Var::Zk(k))], zc)
    }

    /// `X_p`-only shifted root `Lx = X_p/z + bx_p`.
    fn lx(&self, p: usize) -> LinearForm {
        LinearForm::atom(ShiftedRoot { var: self.x(p), shift: self.bx(p) })
    }

    fn lz(&self, k: usize) -> LinearForm {
        LinearForm::atom(ShiftedRoot { var: Var::Zk(k), shift: self.bz(k) })
    }
}

fn factored_gr(fr: &Frame, a: &[i64]) -> Expr {
    if a.iter().any(|&v| v < 0) {
        return Expr::zero();
    }
    let (r, s, m, n) = (fr.r, fr.s(), fr.m(), fr.n);
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut f = Vec::new();
    for j in 1..=r {
        for i in 1..=r {
            if i != j {
                let base = fr.pair(1, j, -1, i, fr.bx(j) - fr.bx(i));
                f.push(rising(&Affine::in_z(base), a[j - 1] - a[i - 1]));
            }
        }
    }
    for j in 1..=r {
        let aj = a[j - 1];
        for k in 1..=n {
            let base = fr.with_zk(-1, j, 1, k, fr.bz(k) - fr.bx(j));
            let step = lin(&[], -1);
            num.push(product_range(&Affine::new(base, step), 0, aj - 1));
        }
        for i in 1..=m {
            let base = fr.pair(1, j, -1, i, fr.bx(j) - fr.bx(i));
            den.push(product_range(&Affine::in_z(base), 1, aj));
        }
    }
    f.push(Expr::quotient(Expr::product(num), Expr::product(den)));
    for j in 1..=r {
        for i in 1..=s {
            let base = fr.pair(1, j, -1, r + i, 0);
            f.push(poch_ratio(&Affine::in_z(base), fr.bx(j) - fr.bx(r + i)));
        }
    }
    for j in 1..=r {
        for k in 1..=n {
            let base = fr.with_zk(-1, j, 1, k, 0);
            f.push(poch_ratio(&Affine::in_z(base), -fr.bx(j) + fr.bz(k)));
        }
    }
    Expr::product(f)
}

fn factored_gr_hat(fr: &Frame, a: &[i64]) -> Expr {
    if a.iter().any(|&v| v < 0) {
        return Expr::zero();
    }
    let (r, s, m, n) = (fr.r, fr.s(), fr.m(), fr.n);
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut f = Vec::new();
    for j in 1..=s {
        for i in 1..=s {
            if i != j {
                let base = fr.pair(1, r + i, -1, r + j, fr.bx(r + i) - fr.bx(r + j));
                f.push(rising(&Affine::in_z(base), a[j - 1] - a[i - 1]));
            }
        }
    }
    for j in 1..=s {
        let aj = a[j - 1];
        for k in 1..=n {
            let base = fr.with_zk(-1, r + j, 1, k, fr.bz(k) - fr.bx(r + j));
            num.push(product_range(&Affine::in_z(base), 1, aj));
        }
        for i in 1..=m {
            let base = fr.pair(-1, r + j, 1, i, fr.bx(i) - fr.bx(r + j));
            den.push(product_range(&Affine::in_z(base), 1, aj));
        }
    }
    f.push(Expr::quotient(Expr::product(num), Expr::product(den)));
    for i in 1..=r {
        for j in 1..=s {
            let base = fr.pair(1, i, -1, r + j, 0);
            f.push(poch_ratio(&Affine::in_z(base), fr.bx(i) - fr.bx(r + j)));
        }
    }
    for i in 1..=r {
        for k in 1..=n {
            let base = fr.with_zk(-1, i, 1, k, 0);
            f.push(poch_ratio(&Affine::in_z(base), -fr.bx(i) + fr.bz(k)));
        }
    }
    Expr::product(f)
}

fn factored_pax(fr: &Frame, a: &[i64]) -> Expr {
    if a.iter().any(|&v| v < 0) {
        return Expr::zero();
    }
    let (r, s, m, n) = (fr.r, fr.s(), fr.m(), fr.n);
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut f = Vec::new();
    for j in 1..=r {
        for i in 1..=r {
            if i != j {
                let base = fr.pair(1, j, -1, i, fr.bx(j) - fr.bx(i));
                f.push(rising(&Affine::in_z(base), a[j - 1] - a[i - 1]));
            }
        }
    }
    for j in 1..=r {
        let aj = a[j - 1];
        for k in 1..=n {
            let base = fr.with_zk(1, j, -1, k, fr.bx(j) - fr.bz(k));
            num.push(product_range(&Affine::in_z(base), 1, aj));
        }
        for i in 1..=m {
            let base = fr.pair(1, j, -1, i, fr.bx(j) - fr.bx(i));
            den.push(product_range(&Affine::in_z(base), 1, aj));
        }
    }
    f.push(Expr::quotient(Expr::product(num), Expr::product(den)));
    for j in 1..=r {
        for i in 1..=s {
            let base = fr.pair(1, j, -1, r + i, 0);
            f.push(poch_ratio(&Affine::in_z(base), fr.bx(j) - fr.bx(r + i)));
        }
    }
    for j in 1..=r {
        for k in 1..=n {
            let base = fr.with_zk(1, j, -1, k, 0);
            f.push(rising(&Affine::in_z(base), fr.bx(j) - fr.bz(k)));
        }
    }
    Expr::product(f)
}

fn factored_paxy(fr: &Frame, a: &[i64]) -> Expr {
    if a.iter().any(|&v| v < 0) {
        return Expr::zero();
    }
    let (r, s, m, n) = (fr.r, fr.s(), fr.m(), fr.n);
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut f = Vec::new();
    for j in 1..=s {
        for i in 1..=s {
            if i != j {
                let base = fr.pair(-1, r + j, 1, r + i, fr.bx(r + i) - fr.bx(r + j));
                f.push(rising(&Affine::in_z(base), a[j - 1] - a[i - 1]));
            }
        }
    }
    for j in 1..=s {
        let aj = a[j - 1];
        for k in 1..=n {
            let base = fr.with_zk(1, r + j, -1, k, fr.bx(r + j) - fr.bz(k));
            let step = lin(&[], -1);
            num.push(product_range(&Affine::new(base, step), 0, aj - 1));
        }
        for i in 1..=m {
            let base = fr.pair(-1, r + j, 1, i, fr.bx(i) - fr.bx(r + j));
            den.push(product_range(&Affine::in_z(base), 1, aj));
        }
    }
    f.push(Expr::quotient(Expr::product(num), Expr::product(den)));
    for j in 1..=s {
        for i in 1..=r {
            let base = fr.pair(1, i, -1, r + j, 0);
            f.push(poch_ratio(&Affine::in_z(base), fr.bx(i) - fr.bx(r + j)));
        }
    }
    for i in 1..=r {
        for k in 1..=n {
            let base = fr.with_zk(1, i, -1, k, 0);
            f.push(rising(&Affine::in_z(base), fr.bx(i) - fr.bz(k)));
        }
    }
    Expr::product(f)
}

/// The common factor `C_β` or `C̃_β` at `fp` (either side of the pair).
pub fn c_factor(side: CSide, fp: &FixedPoint, beta: &BetaClass, shape: &ModelShape) -> Expr {
    let fr = Frame::new(fp, beta, shape);
    let (r, s, n) = (fr.r, fr.s(), fr.n);
    let mut f = Vec::new();
    for i in 1..=r {
        for k in 1..=s {
            let base = fr.pair(1, i, -1, r + k, 0);
            f.push(poch_ratio(&Affine::in_z(base), fr.bx(i) - fr.bx(r + k)));
        }
    }
    for j in 1..=r {
        for k in 1..=n {
            match side {
                CSide::GrSide => {
                    let base = fr.with_zk(-1, j, 1, k, 0);
                    f.push(poch_ratio(&Affine::in_z(base), -fr.bx(j) + fr.bz(k)));
                }
                CSide::PaxSide => {
                    let base = fr.with_zk(1, j, -1, k, 0);
                    f.push(rising(&Affine::in_z(base), fr.bx(j) - fr.bz(k)));
                }
            }
        }
    }
    Expr::product(f)
}

/// The bracketed summand of the collapsed coefficient for one composition
/// `a⃗` of `a`, in shifted roots, without the `z^{(n-m)a}` prefactor.
pub fn composition_term(model: Model, fp: &FixedPoint, beta: &BetaClass, a: &[i64], shape: &ModelShape) -> Expr {
    let fr = Frame::new(fp, beta, shape);
    let (r, m, n) = (fr.r, fr.m(), fr.n);
    let rank = shape.rank(model.side());
    let root = |j: usize| match model.side() {
        Side::Primal => j,
        Side::Dual => r + j,
    };
    let mut f = Vec::new();
    // pairwise block
    for j in 1..=rank {
        for i in 1..=rank {
            if i == j {
                continue;
            }
            let c = a[j - 1] - a[i - 1];
            let base = match model {
                Model::Gr | Model::Pax => &fr.lx(root(j)) - &fr.lx(root(i)),
                Model::GrHat | Model::Paxy => &fr.lx(root(i)) - &fr.lx(root(j)),
            };
            f.push(rising(&Affine::unit(base), c));
        }
    }
    for j in 1..=rank {
        let aj = a[j - 1];
        let lj = fr.lx(root(j));
        let mut num = Vec::new();
        for k in 1..=n {
            let lz = fr.lz(k);
            num.push(match model {
                Model::Gr => product_range(&Affine::new(&lz - &lj, LinearForm::constant(-1)), 0, aj - 1),
                Model::GrHat => product_range(&Affine::unit(&lz - &lj), 1, aj),
                Model::Pax => product_range(&Affine::unit(&lj - &lz), 1, aj),
                Model::Paxy => product_range(&Affine::new(&lj - &lz, LinearForm::constant(-1)), 0, aj - 1),
            });
        }
        let mut den = Vec::new();
        for i in 1..=m {
            let li = fr.lx(i);
            let base = match model.side() {
                Side::Primal => &lj - &li,
                Side::Dual => &li - &lj,
            };
            den.push(product_range(&Affine::unit(base), 1, aj));
        }
        f.push(Expr::quotient(Expr::product(num), Expr::product(den)));
    }
    Expr::product(f)
}

/// `z^{(n-m)a} Σ_{a⃗} term(a⃗)` at `fp`, the sum running over compositions of
/// `a` with nonnegative parts.
pub fn collapsed_at(model: Model, fp: &FixedPoint, beta: &BetaClass, a: i64, shape: &ModelShape) -> Expr {
    let rank = shape.rank(model.side());
    let terms = compositions(a, rank, 0)
        .into_iter()
        .map(|c| composition_term(model, fp, beta, c.entries(), shape));
    let zpow = (shape.n() as i64 - shape.m() as i64) * a;
    Expr::product([Expr::pow(Expr::var(Var::Zgiv), zpow as i32), Expr::sum(terms)])
}

/// The collapsed coefficient at the standard fixed point.
pub fn collapsed(model: Model, beta: &BetaClass, a: i64, shape: &ModelShape) -> Expr {
    collapsed_at(model, &FixedPoint::standard(model.side(), shape), beta, a, shape)
}

/// The degrees `a⃗` of the factored form matching direct degrees `d⃗` at `fp`.
pub fn factored_degrees(model: Model, fp: &FixedPoint, beta: &BetaClass, d: &DegreeVector, shape: &ModelShape) -> DegreeVector {
    let frame = fp.frame(shape);
    let offset = match model.side() {
        Side::Primal => 0,
        Side::Dual => shape.r(),
    };
    // Roots keep their order: the j-th restricted root is x_{frame[offset+j]}.
    d.entries()
        .iter()
        .enumerate()
        .map(|(j, &dj)| model.a_from_d(dj, beta.x(frame[offset + j])))
        .collect::<Vec<_>>()
        .into()
}
