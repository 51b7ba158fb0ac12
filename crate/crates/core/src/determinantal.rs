//! Numerology of determinantal loci `{rank A ≤ s}` for a map `A: E → F`
//! of ranks `m` and `n`, and the scenario presets used by the CLI.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::localization::{BetaClass, LocalizationError, ModelShape};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeterminantalError {
    #[error("invalid determinantal data m={m} n={n} s={s}: need 0 <= s <= n <= m")]
    InvalidConfig { m: usize, n: usize, s: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Shape(#[from] LocalizationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Formal,
    /// `P^N` with `E` trivial and `F = O(1)^n`.
    Proj(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetConfig {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub base: BaseKind,
}

impl DetConfig {
    pub fn new(m: usize, n: usize, s: usize, base: BaseKind) -> Result<Self, DeterminantalError> {
        if s > n || n > m {
            return Err(DeterminantalError::InvalidConfig { m, n, s });
        }
        Ok(DetConfig { m, n, s, base })
    }
}

pub fn codim(cfg: &DetConfig) -> usize {
    (cfg.n - cfg.s) * (cfg.m - cfg.s)
}

/// Dimension of the locus when the base is `P^N` and `m = n`; `None` for a
/// formal base. May be negative when the locus is expected empty.
pub fn dim(cfg: &DetConfig) -> Option<i64> {
    match cfg.base {
        BaseKind::Formal => None,
        BaseKind::Proj(big_n) => Some(big_n as i64 - codim(cfg) as i64),
    }
}

/// Degree of the anticanonical class of the locus on `P^N` with `m = n`:
/// zero exactly in the Calabi–Yau case.
pub fn canonical_degree(s: usize, m: usize, big_n: usize) -> i64 {
    big_n as i64 + 1 - ((m - s) * m) as i64
}

/// Triples `(s, m, N)` with `m = n` giving Calabi–Yau loci of dimension
/// `dimension` on `P^N`, for `0 ≤ s < m ≤ max_m` and `N ≤ max_n`.
pub fn cy_classify_dim(max_m: usize, max_n: usize, dimension: i64) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for s in 0..m {
            for big_n in 0..=max_n {
                let cfg = DetConfig { m, n: m, s, base: BaseKind::Proj(big_n) };
                if canonical_degree(s, m, big_n) == 0 && dim(&cfg) == Some(dimension) {
                    out.push((s, m, big_n));
                }
            }
        }
    }
    out.sort_by_key(|&(s, m, big_n)| (big_n, m, s));
    out
}

pub fn cy_classify(max_m: usize, max_n: usize) -> Vec<(usize, usize, usize)> {
    cy_classify_dim(max_m, max_n, 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Scenario {
    Gn3fold,
    Generic { m: usize, n: usize, r: usize, ample: bool },
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Gn3fold => write!(f, "GN_3FOLD"),
            Scenario::Generic { m, n, r, ample } => {
                write!(f, "GENERIC({m},{n},{r}")?;
                if *ample {
                    write!(f, ",ample")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Scenario {
    type Err = DeterminantalError;

    /// Accepts `GN_3FOLD`, `GENERIC(m,n,r)` and `GENERIC(m,n,r,ample)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || DeterminantalError::UnknownScenario(s.to_string());
        let t = s.trim().to_ascii_uppercase();
        if t == "GN_3FOLD" {
            return Ok(Scenario::Gn3fold);
        }
        let inner = t.strip_prefix("GENERIC(").and_then(|r| r.strip_suffix(')')).ok_or_else(unknown)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let ample = match parts.len() {
            3 => false,
            4 if parts[3] == "AMPLE" => true,
            _ => return Err(unknown()),
        };
        let num = |p: &str| p.parse::<usize>().map_err(|_| unknown());
        Ok(Scenario::Generic { m: num(parts[0])?, n: num(parts[1])?, r: num(parts[2])?, ample })
    }
}

/// Entry vectors of length `len` over `[-2, 2]` in lexicographic order.
fn entry_vectors(len: usize) -> impl Iterator<Item = Vec<i64>> {
    let total = 5usize.pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0i64; len];
        for slot in v.iter_mut().rev() {
            *slot = (idx % 5) as i64 - 2;
            idx /= 5;
        }
        v
    })
}

fn admissible(shape: &ModelShape, v: &[i64], ample: bool) -> bool {
    let (bx, bz) = v.split_at(shape.m());
    !ample || bx.iter().min() >= bz.iter().max()
}

fn to_beta(shape: &ModelShape, v: &[i64], ample: bool) -> BetaClass {
    let (bx, bz) = v.split_at(shape.m());
    BetaClass::new(bx.to_vec(), bz.to_vec(), ample).expect("sweep entries satisfy the flag")
}

/// Every `β` with entries in `[-2, 2]`, in lexicographic order of
/// `(bx, bz)`, keeping only ample ones when `ample` is set.
pub fn generic_sweep(shape: &ModelShape, ample: bool) -> Vec<BetaClass> {
    entry_vectors(shape.m() + shape.n())
        .filter(|v| admissible(shape, v, ample))
        .map(|v| to_beta(shape, &v, ample))
        .collect()
}

pub fn generic_sweep_len(shape: &ModelShape, ample: bool) -> usize {
    entry_vectors(shape.m() + shape.n()).filter(|v| admissible(shape, v, ample)).count()
}

/// `count` evenly spaced members of [`generic_sweep`], without building it.
pub fn generic_sweep_sample(shape: &ModelShape, ample: bool, count: usize) -> Vec<BetaClass> {
    let len = generic_sweep_len(shape, ample);
    let wanted: Vec<usize> = spread_indices(len, count);
    let mut out = Vec::with_capacity(wanted.len());
    let mut next = wanted.iter().peekable();
    for (i, v) in entry_vectors(shape.m() + shape.n()).filter(|v| admissible(shape, v, ample)).enumerate() {
        match next.peek() {
            Some(&&w) if w == i => {
                out.push(to_beta(shape, &v, ample));
                next.next();
            }
            Some(_) => {}
            None => break,
        }
    }
    out
}

/// Indices of `count` evenly spaced items out of `len` (all of them when
/// `len <= count`).
pub fn spread_indices(len: usize, count: usize) -> Vec<usize> {
    if len <= count {
        return (0..len).collect();
    }
    (0..count).map(|i| i * len / count).collect()
}

pub fn scenario_preset(scenario: &Scenario) -> Result<(ModelShape, Vec<BetaClass>), DeterminantalError> {
    match *scenario {
        Scenario::Gn3fold => {
            let shape = ModelShape::new(4, 4, 2)?;
            // x_i pairs with the trivial factors of E; z_k with O(-1).
            let betas = (0..=2)
                .map(|d| BetaClass::new(vec![0; 4], vec![-d; 4], true).expect("x >= z"))
                .collect();
            Ok((shape, betas))
        }
        Scenario::Generic { m, n, r, ample } => {
            let shape = ModelShape::new(m, n, r)?;
            Ok((shape, generic_sweep(&shape, ample)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codimension_examples() {
        assert_eq!(codim(&DetConfig::new(4, 4, 2, BaseKind::Formal).unwrap()), 4);
        assert_eq!(codim(&DetConfig::new(3, 2, 2, BaseKind::Formal).unwrap()), 0);
        let cfg = DetConfig::new(5, 5, 1, BaseKind::Proj(19)).unwrap();
        assert_eq!(codim(&cfg), 16);
        assert_eq!(dim(&cfg), Some(3));
        assert_eq!(dim(&DetConfig::new(4, 4, 2, BaseKind::Proj(7)).unwrap()), Some(3));
        assert!(DetConfig::new(3, 4, 1, BaseKind::Formal).is_err());
    }

    #[test]
    fn codim_decreases_in_s() {
        for m in 1..8 {
            for n in 1..=m {
                for s in 1..n {
                    let lo = DetConfig::new(m, n, s - 1, BaseKind::Formal).unwrap();
                    let hi = DetConfig::new(m, n, s, BaseKind::Formal).unwrap();
                    assert!(codim(&lo) > codim(&hi));
                }
            }
        }
    }

    #[test]
    fn calabi_yau_threefolds() {
        let mut got = cy_classify(8, 30);
        got.sort();
        assert_eq!(got, vec![(1, 5, 19), (2, 4, 7), (4, 5, 4)]);
        assert_eq!(cy_classify(4, 7), vec![(2, 4, 7)]);
        let mut wide = cy_classify(12, 60);
        wide.sort();
        assert_eq!(wide, got);
    }

    #[test]
    fn surface_variant_matches_brute_force() {
        let mut brute = Vec::new();
        for m in 1..=8usize {
            for s in 0..m {
                for big_n in 0..=30usize {
                    let c = (m - s) * (m - s);
                    if big_n + 1 == (m - s) * m && big_n as i64 - c as i64 == 2 {
                        brute.push((s, m, big_n));
                    }
                }
            }
        }
        let mut got = cy_classify_dim(8, 30, 2);
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
    }

    #[test]
    fn gn_preset() {
        let (shape, betas) = scenario_preset(&Scenario::Gn3fold).unwrap();
        assert_eq!((shape.m(), shape.n(), shape.r()), (4, 4, 2));
        assert_eq!(betas.len(), 3);
        for (d, b) in betas.iter().enumerate() {
            assert_eq!(b.bx(), &[0, 0, 0, 0]);
            assert_eq!(b.bz(), &[-(d as i64); 4]);
        }
    }

    #[test]
    fn generic_sweeps() {
        let (_, betas) = scenario_preset(&Scenario::Generic { m: 3, n: 1, r: 1, ample: true }).unwrap();
        assert!(betas.iter().all(|b| b.satisfies_ample()));
        let (_, all) = scenario_preset(&Scenario::Generic { m: 2, n: 2, r: 1, ample: false }).unwrap();
        assert_eq!(all.len(), 625);
        let (_, ample) = scenario_preset(&Scenario::Generic { m: 2, n: 2, r: 1, ample: true }).unwrap();
        let mut count = 0;
        for x1 in -2..=2i64 {
            for x2 in -2..=2 {
                for z1 in -2..=2 {
                    for z2 in -2..=2 {
                        if x1.min(x2) >= z1.max(z2) {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(ample.len(), count);
    }

    #[test]
    fn scenario_names() {
        for s in ["GN_3FOLD", "GENERIC(3,1,1)", "GENERIC(4,2,3,ample)"] {
            let parsed: Scenario = s.parse().unwrap();
            assert_eq!(parsed.to_string().to_ascii_uppercase(), s.to_ascii_uppercase());
        }
        assert!(matches!("K3".parse::<Scenario>(), Err(DeterminantalError::UnknownScenario(_))));
        let toml = toml::to_string(&Scenario::Generic { m: 3, n: 1, r: 1, ample: true }).unwrap();
        assert_eq!(toml::from_str::<Scenario>(&toml).unwrap(), Scenario::Generic { m: 3, n: 1, r: 1, ample: true });
    }

    #[test]
    fn samples_come_from_the_sweep() {
        assert_eq!(spread_indices(100, 4), vec![0, 25, 50, 75]);
        assert_eq!(spread_indices(3, 4), vec![0, 1, 2]);
        let shape = ModelShape::new(3, 2, 1).unwrap();
        for ample in [false, true] {
            let full = generic_sweep(&shape, ample);
            let sample = generic_sweep_sample(&shape, ample, 7);
            let picked: Vec<_> = spread_indices(full.len(), 7).into_iter().map(|i| full[i].clone()).collect();
            assert_eq!(sample, picked);
        }
    }
}
