//! Small exact symbolic mode: clears an [`Expr`] into a numerator/denominator
//! pair of sparse polynomials. No gcd is taken, so two rational functions are
//! compared by cross-multiplication.

use std::collections::BTreeMap;
use std::fmt;

use super::expr::{Atom, Expr, Node, Var};
use super::rat::Rat;

/// Exponent vector, sorted by variable, zero exponents omitted.
pub type Monomial = Vec<(Var, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cleared form exceeds total degree {max_degree}; fall back to evaluation")]
pub struct DegreeOverflow {
    pub max_degree: u32,
}

fn mono_degree(m: &Monomial) -> u32 {
    m.iter().map(|(_, e)| e).sum()
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<Var, u32> = a.iter().copied().collect();
    for (v, e) in b {
        *out.entry(*v).or_insert(0) += e;
    }
    out.into_iter().collect()
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(v, 1)], Rat::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    fn insert(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.insert(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Coefficient of the largest monomial in the map order.
    fn leading(&self) -> Option<&Rat> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in m {
                if *e == 1 {
                    write!(f, "*{v}")?;
                } else {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A cleared rational function `numerator / denominator`, normalized so the
/// denominator's leading coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyPair {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl PolyPair {
    fn new(numerator: Poly, denominator: Poly) -> Self {
        let lead = denominator.leading().cloned().unwrap_or_else(Rat::one);
        let inv = lead.recip().expect("leading coefficient is nonzero");
        PolyPair { numerator: numerator.scale(&inv), denominator: denominator.scale(&inv) }
    }

    /// Equality as rational functions: `n1 * d2 == n2 * d1`.
    pub fn same_function(&self, other: &PolyPair) -> bool {
        self.numerator.mul(&other.denominator) == other.numerator.mul(&self.denominator)
    }
}

/// Clear `e` into a polynomial pair, failing once any intermediate numerator
/// or denominator exceeds `max_degree`.
pub fn expand_small(e: &Expr, max_degree: u32) -> Result<PolyPair, DegreeOverflow> {
    let (n, d) = clear(e, max_degree)?;
    Ok(PolyPair::new(n, d))
}

fn check(p: Poly, max_degree: u32) -> Result<Poly, DegreeOverflow> {
    if p.degree() > max_degree {
        Err(DegreeOverflow { max_degree })
    } else {
        Ok(p)
    }
}

fn add_pairs(a: (Poly, Poly), b: (Poly, Poly), max: u32) -> Result<(Poly, Poly), DegreeOverflow> {
    if a.1 == b.1 {
        return Ok((check(a.0.add(&b.0), max)?, a.1));
    }
    let num = a.0.mul(&b.1).add(&b.0.mul(&a.1));
    Ok((check(num, max)?, check(a.1.mul(&b.1), max)?))
}

fn clear(e: &Expr, max: u32) -> Result<(Poly, Poly), DegreeOverflow> {
    match e.node() {
        Node::Const(c) => Ok((Poly::constant(c.clone()), Poly::one())),
        Node::Var(v) => Ok((Poly::var(*v), Poly::one())),
        Node::Linear(l) => {
            let mut acc = (Poly::constant(l.constant_term().clone()), Poly::one());
            for (atom, c) in l.terms() {
                let term = match atom {
                    Atom::Var(v) => (Poly::var(*v).scale(c), Poly::one()),
                    Atom::Shifted(s) => {
                        let z = Poly::var(Var::Zgiv);
                        let num = Poly::var(s.var).add(&z.scale(&Rat::from_int(s.shift)));
                        (num.scale(c), z)
                    }
                };
                acc = add_pairs(acc, term, max)?;
            }
            Ok(acc)
        }
        Node::Sum(terms) => {
            let mut acc = (Poly::zero(), Poly::one());
            for t in terms {
                acc = add_pairs(acc, clear(t, max)?, max)?;
            }
            Ok(acc)
        }
        Node::Product(factors) => {
            let mut num = Poly::one();
            let mut den = Poly::one();
            for f in factors {
                let (n, d) = clear(f, max)?;
                num = check(num.mul(&n), max)?;
                den = check(den.mul(&d), max)?;
            }
            Ok((num, den))
        }
        Node::Quotient(a, b) => {
            let (an, ad) = clear(a, max)?;
            let (bn, bd) = clear(b, max)?;
            Ok((check(an.mul(&bd), max)?, check(ad.mul(&bn), max)?))
        }
        Node::Pow(b, k) => {
            let (bn, bd) = clear(b, max)?;
            let (base_n, base_d) = if *k < 0 { (bd, bn) } else { (bn, bd) };
            let mut num = Poly::one();
            let mut den = Poly::one();
            for _ in 0..k.unsigned_abs() {
                num = check(num.mul(&base_n), max)?;
                den = check(den.mul(&base_d), max)?;
            }
            Ok((num, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> Expr {
        Expr::var(Var::X(1))
    }

    fn z() -> Expr {
        Expr::var(Var::Zgiv)
    }

    #[test]
    fn difference_of_squares() {
        let e = (x1() + z()) * (x1() - z());
        let pair = expand_small(&e, 4).unwrap();
        let expected = Poly::var(Var::X(1))
            .mul(&Poly::var(Var::X(1)))
            .add(&Poly::var(Var::Zgiv).mul(&Poly::var(Var::Zgiv)).scale(&Rat::from_int(-1)));
        assert_eq!(pair.numerator, expected);
        assert_eq!(pair.denominator, Poly::one());
    }

    #[test]
    fn cross_multiplied_equality() {
        let a = (x1() * x1() - z() * z()) / (x1() - z());
        let b = x1() + z();
        let pa = expand_small(&a, 6).unwrap();
        let pb = expand_small(&b, 6).unwrap();
        assert!(pa.same_function(&pb));
        assert!(!pa.same_function(&expand_small(&(x1() - z()), 6).unwrap()));
    }

    #[test]
    fn overflow_is_reported() {
        let e = Expr::pow(x1() + z(), 5);
        assert_eq!(expand_small(&e, 4), Err(DegreeOverflow { max_degree: 4 }));
        assert!(expand_small(&e, 5).is_ok());
    }

    #[test]
    fn shifted_root_clears_z() {
        let e = Expr::shifted(Var::X(1), 2);
        let pair = expand_small(&e, 2).unwrap();
        assert_eq!(pair.denominator, Poly::var(Var::Zgiv));
        assert_eq!(pair.numerator.degree(), 1);
    }
}
