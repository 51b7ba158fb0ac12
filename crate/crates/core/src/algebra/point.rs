use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::expr::Var;
use super::rat::Rat;
use crate::localization::ModelShape;

const NUM_BOUND: i64 = 1_000_000;
const DEN_BOUND: i64 = 1_000;

/// An assignment of rationals to `x_1..x_m`, `z_1..z_n` and `z`.
///
/// Alongside the reduced values the point keeps every coordinate over one
/// common denominator, which evaluation uses to add linear forms without
/// cross-multiplying.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    x: Vec<Rat>,
    zk: Vec<Rat>,
    z: Rat,
    common_den: BigInt,
    x_num: Vec<BigInt>,
    zk_num: Vec<BigInt>,
    z_num: BigInt,
}

impl Point {
    pub fn new(x: Vec<Rat>, zk: Vec<Rat>, z: Rat) -> Self {
        let common_den = x
            .iter()
            .chain(zk.iter())
            .chain(std::iter::once(&z))
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scale = |r: &Rat| r.numer() * (&common_den / r.denom());
        let x_num = x.iter().map(scale).collect();
        let zk_num = zk.iter().map(scale).collect();
        let z_num = scale(&z);
        Point { x, zk, z, common_den, x_num, zk_num, z_num }
    }

    pub fn get(&self, v: Var) -> Option<&Rat> {
        match v {
            Var::X(i) => i.checked_sub(1).and_then(|i| self.x.get(i)),
            Var::Zk(k) => k.checked_sub(1).and_then(|k| self.zk.get(k)),
            Var::Zgiv => Some(&self.z),
        }
    }

    /// Numerator of `v` over [`Point::common_den`].
    pub fn scaled(&self, v: Var) -> Option<&BigInt> {
        match v {
            Var::X(i) => i.checked_sub(1).and_then(|i| self.x_num.get(i)),
            Var::Zk(k) => k.checked_sub(1).and_then(|k| self.zk_num.get(k)),
            Var::Zgiv => Some(&self.z_num),
        }
    }

    pub fn common_den(&self) -> &BigInt {
        &self.common_den
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.zk.len()
    }

    pub fn z(&self) -> &Rat {
        &self.z
    }

    /// All assignments in registry order `x_1..x_m, z_1..z_n, z`.
    pub fn entries(&self) -> Vec<(Var, Rat)> {
        let mut out = Vec::with_capacity(self.x.len() + self.zk.len() + 1);
        out.extend(self.x.iter().enumerate().map(|(i, r)| (Var::X(i + 1), r.clone())));
        out.extend(self.zk.iter().enumerate().map(|(k, r)| (Var::Zk(k + 1), r.clone())));
        out.push((Var::Zgiv, self.z.clone()));
        out
    }

    /// The point with `x` coordinates relabelled: the value of `x_i` moves to
    /// `x_{perm(i)}`.
    pub fn relabel_x(&self, perm: &dyn Fn(usize) -> usize) -> Point {
        let mut x = self.x.clone();
        for (i, v) in self.x.iter().enumerate() {
            x[perm(i + 1) - 1] = v.clone();
        }
        Point::new(x, self.zk.clone(), self.z.clone())
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> =
            self.entries().into_iter().map(|(v, r)| (v.to_string(), r.to_string())).collect();
        map.serialize(serializer)
    }
}

/// A seeded pseudo-random point for `shape`.
///
/// The generator is ChaCha8 keyed by `seed` with `attempt` selecting the
/// stream, so the result depends only on `(shape, seed, attempt)`. Each
/// coordinate is `a/b` with `a` uniform in `[-10^6, 10^6]` and `b` uniform in
/// `[1, 10^3]`, drawn in registry order.
pub fn random_point(shape: &ModelShape, seed: u64, attempt: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    let mut draw = || {
        let num = rng.gen_range(-NUM_BOUND..=NUM_BOUND);
        let den = rng.gen_range(1..=DEN_BOUND);
        Rat::new(num, den)
    };
    let x = (0..shape.m()).map(|_| draw()).collect();
    let zk = (0..shape.n()).map(|_| draw()).collect();
    let z = draw();
    Point::new(x, zk, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape() -> ModelShape {
        ModelShape::new(3, 2, 1).unwrap()
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_point(&shape(), 42, 0), random_point(&shape(), 42, 0));
    }

    #[test]
    fn attempts_and_seeds_differ() {
        let base = random_point(&shape(), 42, 0);
        assert_ne!(base, random_point(&shape(), 42, 1));
        assert_ne!(base, random_point(&shape(), 43, 0));
    }

    #[test]
    fn bounds_and_totality() {
        let s = shape();
        for attempt in 0..20 {
            let p = random_point(&s, 7, attempt);
            for v in s.registry() {
                let r = p.get(v).expect("registry variable assigned");
                assert!(r.denom() <= &BigInt::from(DEN_BOUND));
                assert!(r.numer().magnitude() <= &BigInt::from(NUM_BOUND).magnitude().clone());
            }
        }
    }

    #[test]
    fn common_denominator_consistent() {
        let p = random_point(&shape(), 1, 3);
        for (v, r) in p.entries() {
            let back = Rat::from_big(p.scaled(v).unwrap().clone(), p.common_den().clone()).unwrap();
            assert_eq!(back, r);
        }
    }
}
