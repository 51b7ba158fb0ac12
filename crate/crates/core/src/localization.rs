//! Torus-fixed-point combinatorics on Grassmannian bundles.
//!
//! The rank-`r` side (tautological roots `y`) hosts the GR and PAX models, the
//! rank-`s` side (roots `w`) hosts GR_HAT and PAXY. A fixed point is an index
//! subset of `[m]` of the side's rank; the two sides are matched by taking
//! complements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Expr, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalizationError {
    #[error("invalid shape (m={m}, n={n}, r={r}): need 1 <= n <= m and 1 <= r <= m-1")]
    InvalidShape { m: usize, n: usize, r: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("fixed point {indices:?} is not a strictly increasing {size}-subset of 1..={m}")]
    InvalidFixedPoint { indices: Vec<usize>, size: usize, m: usize },
    #[error("beta class has {got} x-pairings and {got_z} z-pairings, shape needs {m} and {n}")]
    BetaLength { got: usize, got_z: usize, m: usize, n: usize },
    #[error("beta class flagged ample but beta.x_{i} = {bx} < beta.z_{k} = {bz}")]
    NotAmple { i: usize, k: usize, bx: i64, bz: i64 },
}

/// Ranks `(m, n, r)` with `s = m - r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct ModelShape {
    m: usize,
    n: usize,
    r: usize,
}

#[derive(Serialize, Deserialize)]
struct RawShape {
    m: usize,
    n: usize,
    r: usize,
}

impl TryFrom<RawShape> for ModelShape {
    type Error = LocalizationError;
    fn try_from(raw: RawShape) -> Result<Self, Self::Error> {
        ModelShape::new(raw.m, raw.n, raw.r)
    }
}

impl From<ModelShape> for RawShape {
    fn from(s: ModelShape) -> Self {
        RawShape { m: s.m, n: s.n, r: s.r }
    }
}

impl ModelShape {
    pub fn new(m: usize, n: usize, r: usize) -> Result<Self, LocalizationError> {
        if n < 1 || n > m || r < 1 || r >= m {
            return Err(LocalizationError::InvalidShape { m, n, r });
        }
        Ok(ModelShape { m, n, r })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.m - self.r
    }

    pub fn rank(&self, side: Side) -> usize {
        match side {
            Side::Primal => self.r,
            Side::Dual => self.s(),
        }
    }

    /// `x_1..x_m, z_1..z_n, z`.
    pub fn registry(&self) -> Vec<Var> {
        (1..=self.m)
            .map(Var::X)
            .chain((1..=self.n).map(Var::Zk))
            .chain(std::iter::once(Var::Zgiv))
            .collect()
    }
}

impl fmt::Display for ModelShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, n={}, r={})", self.m, self.n, self.r)
    }
}

/// Which Grassmannian bundle a fixed point lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Rank `r`: GR and PAX.
    Primal,
    /// Rank `s`: GR_HAT and PAXY.
    Dual,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Primal => Side::Dual,
            Side::Dual => Side::Primal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FixedPoint {
    side: Side,
    indices: Vec<usize>,
}

impl FixedPoint {
    pub fn new(side: Side, indices: Vec<usize>, shape: &ModelShape) -> Result<Self, LocalizationError> {
        let size = shape.rank(side);
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = indices.iter().all(|&i| (1..=shape.m()).contains(&i));
        if indices.len() != size || !increasing || !in_range {
            return Err(LocalizationError::InvalidFixedPoint { indices, size, m: shape.m() });
        }
        Ok(FixedPoint { side, indices })
    }

    /// `{1..r}` on the primal side, `{r+1..m}` on the dual side.
    pub fn standard(side: Side, shape: &ModelShape) -> Self {
        let indices = match side {
            Side::Primal => (1..=shape.r()).collect(),
            Side::Dual => (shape.r() + 1..=shape.m()).collect(),
        };
        FixedPoint { side, indices }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_standard(&self, shape: &ModelShape) -> bool {
        *self == FixedPoint::standard(self.side, shape)
    }

    /// Positions `1..m` reordered so the primal-side subset comes first:
    /// `frame[p-1]` is the original index placed at standard position `p`.
    pub fn frame(&self, shape: &ModelShape) -> Vec<usize> {
        let primal = match self.side {
            Side::Primal => self.clone(),
            Side::Dual => complement(self, shape),
        };
        let rest = complement(&primal, shape);
        primal.indices.iter().chain(rest.indices.iter()).copied().collect()
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

/// All fixed points of `side` in lexicographic order.
pub fn fixed_points(side: Side, shape: &ModelShape) -> Vec<FixedPoint> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=m + 1 - left {
            cur.push(i);
            rec(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut subsets = Vec::new();
    rec(1, shape.m(), shape.rank(side), &mut Vec::new(), &mut subsets);
    subsets.into_iter().map(|indices| FixedPoint { side, indices }).collect()
}

/// `[m] \ fp`, tagged with the opposite side.
pub fn complement(fp: &FixedPoint, shape: &ModelShape) -> FixedPoint {
    let indices = (1..=shape.m()).filter(|i| !fp.indices.contains(i)).collect();
    FixedPoint { side: fp.side.opposite(), indices }
}

/// The restriction of `y_k` to a primal fixed point: `x_{i_k}`.
pub fn restrict_y(fp: &FixedPoint, k: usize) -> Result<Var, LocalizationError> {
    let bound = fp.indices.len();
    match k.checked_sub(1).and_then(|k0| fp.indices.get(k0)) {
        Some(&i) if fp.side == Side::Primal => Ok(Var::X(i)),
        _ => Err(LocalizationError::IndexOutOfRange { index: k, bound }),
    }
}

/// The restriction of `w_k` to a dual fixed point: `-x_{j_k}`.
pub fn restrict_w(fp: &FixedPoint, k: usize) -> Result<Expr, LocalizationError> {
    let bound = fp.indices.len();
    match k.checked_sub(1).and_then(|k0| fp.indices.get(k0)) {
        Some(&j) if fp.side == Side::Dual => Ok(-Expr::var(Var::X(j))),
        _ => Err(LocalizationError::IndexOutOfRange { index: k, bound }),
    }
}

/// A permutation of `1..=m`, stored as its list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { images: (1..=m).collect() }
    }

    /// `images[i-1]` is the image of `i`. Returns `None` unless this is a
    /// bijection of `1..=len`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i == 0 || i > images.len() || std::mem::replace(&mut seen[i - 1], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| img == i + 1)
    }
}

/// The permutation sending the primal subset of `fp` onto `{1..r}` and its
/// complement onto `{r+1..m}`, both order-preservingly.
pub fn permute_to_standard(fp: &FixedPoint, shape: &ModelShape) -> Permutation {
    let frame = fp.frame(shape);
    let mut images = vec![0; shape.m()];
    for (pos, &orig) in frame.iter().enumerate() {
        images[orig - 1] = pos + 1;
    }
    Permutation { images }
}

/// A curve class seen through its pairings `β·x_i` and `β·z_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BetaClass {
    bx: Vec<i64>,
    bz: Vec<i64>,
    #[serde(default)]
    ample: bool,
}

impl BetaClass {
    pub fn new(bx: Vec<i64>, bz: Vec<i64>, ample: bool) -> Result<Self, LocalizationError> {
        if ample {
            for (i, &x) in bx.iter().enumerate() {
                for (k, &z) in bz.iter().enumerate() {
                    if x < z {
                        return Err(LocalizationError::NotAmple { i: i + 1, k: k + 1, bx: x, bz: z });
                    }
                }
            }
        }
        Ok(BetaClass { bx, bz, ample })
    }

    pub fn zero(shape: &ModelShape) -> Self {
        BetaClass { bx: vec![0; shape.m()], bz: vec![0; shape.n()], ample: true }
    }

    /// Checks the vector lengths against `shape`.
    pub fn for_shape(self, shape: &ModelShape) -> Result<Self, LocalizationError> {
        if self.bx.len() != shape.m() || self.bz.len() != shape.n() {
            return Err(LocalizationError::BetaLength {
                got: self.bx.len(),
                got_z: self.bz.len(),
                m: shape.m(),
                n: shape.n(),
            });
        }
        Ok(self)
    }

    pub fn bx(&self) -> &[i64] {
        &self.bx
    }

    pub fn bz(&self) -> &[i64] {
        &self.bz
    }

    /// `β·x_i`, 1-based.
    pub fn x(&self, i: usize) -> i64 {
        self.bx[i - 1]
    }

    /// `β·z_k`, 1-based.
    pub fn z(&self, k: usize) -> i64 {
        self.bz[k - 1]
    }

    pub fn is_ample_flagged(&self) -> bool {
        self.ample
    }

    /// Whether `β·x_i >= β·z_k` holds for all `i, k`, regardless of the flag.
    pub fn satisfies_ample(&self) -> bool {
        let min_x = self.bx.iter().min();
        let max_z = self.bz.iter().max();
        match (min_x, max_z) {
            (Some(x), Some(z)) => x >= z,
            _ => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bx.iter().chain(&self.bz).all(|&v| v == 0)
    }

    /// `⟨c_1(E), β⟩ = Σ_i β·x_i`.
    pub fn sum_x(&self) -> i64 {
        self.bx.iter().sum()
    }

    pub fn sum_z(&self) -> i64 {
        self.bz.iter().sum()
    }

    /// The class with x-pairings relabelled: `β·x_i` moves to index `σ(i)`.
    pub fn permuted(&self, sigma: &Permutation) -> BetaClass {
        let mut bx = self.bx.clone();
        for (i, &v) in self.bx.iter().enumerate() {
            bx[sigma.apply(i + 1) - 1] = v;
        }
        BetaClass { bx, bz: self.bz.clone(), ample: self.ample }
    }
}

impl fmt::Display for BetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bx={:?} bz={:?}", self.bx, self.bz)
    }
}

/// Degrees `d_1..d_k` (or `a_1..a_k` for factored forms) on one side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn zeros(len: usize) -> Self {
        DegreeVector(vec![0; len])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Entry `j`, 1-based.
    pub fn get(&self, j: usize) -> i64 {
        self.0[j - 1]
    }
}

impl From<Vec<i64>> for DegreeVector {
    fn from(v: Vec<i64>) -> Self {
        DegreeVector(v)
    }
}
