//! Immutable rational expressions over the formal variables `x_i`, `z_k` and
//! the Givental variable `z`.
//!
//! Nodes are reference counted, so subtrees can be shared freely between
//! expressions and across threads. Affine-linear combinations get their own
//! node ([`LinearForm`]) because every factor of the hypergeometric products
//! is affine; this lets `x_j - x_j` cancel structurally and keeps evaluation
//! on an integer fast path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::Point;
use super::rat::Rat;

/// A formal variable. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `x_i = c_1(L_i^vee)`, `1 <= i <= m`.
    X(usize),
    /// `z_k = c_1(M_k^vee)`, `1 <= k <= n`.
    Zk(usize),
    /// The Givental variable `z`.
    Zgiv,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Zk(k) => write!(f, "z{k}"),
            Var::Zgiv => write!(f, "z"),
        }
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "z" {
            return Ok(Var::Zgiv);
        }
        let idx = |t: &str| t.parse::<usize>().ok().filter(|&i| i >= 1);
        if let Some(i) = s.strip_prefix('x').and_then(idx) {
            return Ok(Var::X(i));
        }
        if let Some(k) = s.strip_prefix('z').and_then(idx) {
            return Ok(Var::Zk(k));
        }
        Err(format!("unknown variable `{s}`"))
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A shifted root `v/z + shift`, e.g. `x_i/z + beta.x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftedRoot {
    pub var: Var,
    pub shift: i64,
}

impl fmt::Display for ShiftedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.var {
            Var::X(i) => format!("Lx{i}"),
            Var::Zk(k) => format!("Lz{k}"),
            Var::Zgiv => "Lz".to_string(),
        };
        write!(f, "{name}")
    }
}

/// Leaves a [`LinearForm`] may combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Var(Var),
    Shifted(ShiftedRoot),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(v) => write!(f, "{v}"),
            Atom::Shifted(s) => write!(f, "{s}"),
        }
    }
}

impl From<Var> for Atom {
    fn from(v: Var) -> Self {
        Atom::Var(v)
    }
}

impl From<ShiftedRoot> for Atom {
    fn from(s: ShiftedRoot) -> Self {
        Atom::Shifted(s)
    }
}

/// `sum_a c_a * a + c_0` with zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    terms: BTreeMap<Atom, Rat>,
    constant: Rat,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn constant(c: impl Into<Rat>) -> Self {
        LinearForm { terms: BTreeMap::new(), constant: c.into() }
    }

    pub fn atom(a: impl Into<Atom>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a.into(), Rat::one());
        LinearForm { terms, constant: Rat::zero() }
    }

    pub fn var(v: Var) -> Self {
        LinearForm::atom(v)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Rat)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> &Rat {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + c * atom`.
    pub fn plus_atom(mut self, c: impl Into<Rat>, a: impl Into<Atom>) -> Self {
        self.add_atom(c.into(), a.into());
        self
    }

    /// `self + c`.
    pub fn plus_const(mut self, c: impl Into<Rat>) -> Self {
        self.constant += &c.into();
        self
    }

    fn add_atom(&mut self, c: Rat, a: Atom) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(a).or_insert_with(Rat::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            terms: self.terms.iter().map(|(a, k)| (*a, k * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.keys()
    }
}

impl Add<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_atom(c.clone(), *a);
        }
        out.constant += &rhs.constant;
        out
    }
}

impl Sub<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &rhs.scale(&Rat::from_int(-1))
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&Rat::from_int(-1))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in &self.terms {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{a}")?;
            } else {
                write!(f, "{mag}*{a}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            let neg = self.constant.is_negative();
            let mag = if neg { -&self.constant } else { self.constant.clone() };
            write!(f, " {} {mag}", if neg { "-" } else { "+" })
        } else {
            Ok(())
        }
    }
}

/// Expression node.
#[derive(Debug)]
pub enum Node {
    Const(Rat),
    Var(Var),
    Linear(LinearForm),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quotient(Expr, Expr),
    Pow(Expr, i32),
}

/// An immutable, cheaply clonable expression.
#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

/// Raised when evaluation cannot produce a value.
#[derive(Debug, Clone, thiserror::Error)]
pub enum EvalError {
    /// The point hits a pole; `at` is the sub-expression that vanished in a
    /// denominator.
    #[error("division by zero at `{at}`")]
    DivisionByZero { at: Expr },
    #[error("variable {0} is not assigned by the point")]
    Unassigned(Var),
}

impl Expr {
    fn wrap(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: impl Into<Rat>) -> Self {
        Expr::wrap(Node::Const(c.into()))
    }

    pub fn zero() -> Self {
        Expr::constant(Rat::zero())
    }

    pub fn one() -> Self {
        Expr::constant(Rat::one())
    }

    pub fn var(v: Var) -> Self {
        Expr::wrap(Node::Var(v))
    }

    pub fn shifted(var: Var, shift: i64) -> Self {
        Expr::linear(LinearForm::atom(ShiftedRoot { var, shift }))
    }

    /// A linear form; constant forms collapse to a constant node.
    pub fn linear(form: LinearForm) -> Self {
        if form.is_constant() {
            Expr::constant(form.constant)
        } else {
            Expr::wrap(Node::Linear(form))
        }
    }

    /// Sum of terms. Constant-zero terms are dropped and nested sums are
    /// flattened.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Self {
        let mut out = Vec::new();
        for t in terms {
            match t.node() {
                Node::Const(c) if c.is_zero() => {}
                Node::Sum(inner) => out.extend(inner.iter().cloned()),
                _ => out.push(t),
            }
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::wrap(Node::Sum(out)),
        }
    }

    /// Product of factors. A constant-zero factor makes the whole product the
    /// zero constant; constant-one factors are dropped.
    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Self {
        let mut out = Vec::new();
        for f in factors {
            match f.node() {
                Node::Const(c) if c.is_zero() => return Expr::zero(),
                Node::Const(c) if c.is_one() => {}
                Node::Product(inner) => out.extend(inner.iter().cloned()),
                _ => out.push(f),
            }
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::wrap(Node::Product(out)),
        }
    }

    /// `num / den`. A structurally zero numerator gives the zero constant; a
    /// zero denominator is only reported at evaluation time.
    pub fn quotient(num: Expr, den: Expr) -> Self {
        if num.is_zero_const() {
            return Expr::zero();
        }
        if den.is_one_const() {
            return num;
        }
        Expr::wrap(Node::Quotient(num, den))
    }

    pub fn pow(base: Expr, exp: i32) -> Self {
        match exp {
            0 => Expr::one(),
            1 => base,
            _ if base.is_one_const() => Expr::one(),
            _ => Expr::wrap(Node::Pow(base, exp)),
        }
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self.node(), Node::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&Rat> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Linear(l) => 1 + l.terms.len(),
            Node::Sum(v) | Node::Product(v) => 1 + v.iter().map(Expr::size).sum::<usize>(),
            Node::Quotient(a, b) => 1 + a.size() + b.size(),
            Node::Pow(b, _) => 1 + b.size(),
        }
    }

    /// Every leaf atom occurring in the expression.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self.node() {
            Node::Const(_) => {}
            Node::Var(v) => {
                out.insert(Atom::Var(*v));
            }
            Node::Linear(l) => out.extend(l.atoms().copied()),
            Node::Sum(v) | Node::Product(v) => v.iter().for_each(|e| e.collect_atoms(out)),
            Node::Quotient(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Node::Pow(b, _) => b.collect_atoms(out),
        }
    }

    /// Exact value at `p`.
    pub fn eval(&self, p: &Point) -> Result<Rat, EvalError> {
        let f = self.eval_frac(p)?;
        Ok(f.into_rat())
    }

    fn eval_frac(&self, p: &Point) -> Result<Frac, EvalError> {
        match self.node() {
            Node::Const(c) => Ok(Frac::from_rat(c)),
            Node::Var(v) => Frac::from_point(p, *v),
            Node::Linear(l) => self.eval_linear(l, p),
            Node::Sum(terms) => {
                let mut acc = Frac::zero();
                for t in terms {
                    acc = acc.add(&t.eval_frac(p)?);
                }
                Ok(acc.reduced())
            }
            Node::Product(factors) => {
                let mut acc = Frac::one();
                for f in factors {
                    acc = acc.mul(&f.eval_frac(p)?);
                }
                Ok(acc)
            }
            Node::Quotient(a, b) => {
                let num = a.eval_frac(p)?;
                let den = b.eval_frac(p)?;
                if den.num.is_zero() {
                    return Err(EvalError::DivisionByZero { at: b.clone() });
                }
                Ok(num.mul(&den.recip()))
            }
            Node::Pow(b, e) => {
                let base = b.eval_frac(p)?;
                if *e < 0 && base.num.is_zero() {
                    return Err(EvalError::DivisionByZero { at: b.clone() });
                }
                let base = if *e < 0 { base.recip() } else { base };
                let mut acc = Frac::one();
                for _ in 0..e.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                Ok(acc)
            }
        }
    }

    fn eval_linear(&self, l: &LinearForm, p: &Point) -> Result<Frac, EvalError> {
        let mut acc = Frac::from_rat(&l.constant);
        for (atom, c) in &l.terms {
            let v = match atom {
                Atom::Var(v) => Frac::from_point(p, *v)?,
                Atom::Shifted(s) => {
                    // x/z + shift = (X + shift*Z)/Z over the point's common denominator
                    let x = p.scaled(s.var).ok_or(EvalError::Unassigned(s.var))?;
                    let z = p.scaled(Var::Zgiv).expect("z is always assigned");
                    if z.is_zero() {
                        return Err(EvalError::DivisionByZero { at: Expr::var(Var::Zgiv) });
                    }
                    Frac { num: x + z * BigInt::from(s.shift), den: z.clone() }
                }
            };
            acc = acc.add(&v.scale(c));
        }
        Ok(acc)
    }

    /// Substitute variables by expressions. Shifted roots of a substituted
    /// variable are rewritten as `e/z + shift` (with `z` itself substituted).
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Expr>) -> Expr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(v) => map(*v).unwrap_or_else(|| self.clone()),
            Node::Linear(l) => {
                let touched = l.atoms().any(|a| match a {
                    Atom::Var(v) => map(*v).is_some(),
                    Atom::Shifted(s) => map(s.var).is_some() || map(Var::Zgiv).is_some(),
                });
                if !touched {
                    return self.clone();
                }
                let mut terms = vec![Expr::constant(l.constant.clone())];
                for (a, c) in &l.terms {
                    let leaf = match a {
                        Atom::Var(v) => map(*v).unwrap_or_else(|| Expr::var(*v)),
                        Atom::Shifted(s) => {
                            let x = map(s.var).unwrap_or_else(|| Expr::var(s.var));
                            let z = map(Var::Zgiv).unwrap_or_else(|| Expr::var(Var::Zgiv));
                            Expr::sum([Expr::quotient(x, z), Expr::constant(s.shift)])
                        }
                    };
                    terms.push(Expr::product([Expr::constant(c.clone()), leaf]));
                }
                Expr::sum(terms)
            }
            Node::Sum(v) => Expr::sum(v.iter().map(|e| e.substitute(map))),
            Node::Product(v) => Expr::product(v.iter().map(|e| e.substitute(map))),
            Node::Quotient(a, b) => Expr::quotient(a.substitute(map), b.substitute(map)),
            Node::Pow(b, e) => Expr::pow(b.substitute(map), *e),
        }
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::var(v)
    }
}

impl From<Rat> for Expr {
    fn from(c: Rat) -> Self {
        Expr::constant(c)
    }
}

impl From<i64> for Expr {
    fn from(c: i64) -> Self {
        Expr::constant(c)
    }
}

impl From<LinearForm> for Expr {
    fn from(l: LinearForm) -> Self {
        Expr::linear(l)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::quotient(self, rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self.node() {
            Node::Const(c) => Expr::constant(-c),
            Node::Linear(l) => Expr::linear(-l),
            _ => Expr::product([Expr::constant(-1), self]),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => {
                if c.is_negative() || !c.is_integer() {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Node::Var(v) => write!(f, "{v}"),
            Node::Linear(l) => write!(f, "({l})"),
            Node::Sum(v) => {
                write!(f, "(")?;
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Node::Product(v) => {
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Node::Quotient(a, b) => write!(f, "[{a}]/[{b}]"),
            Node::Pow(b, e) => write!(f, "{b}^{e}"),
        }
    }
}

/// Unreduced fraction used during evaluation; reduced only at sums and at
/// the end, which keeps long products free of gcd computations.
#[derive(Clone, Debug)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn zero() -> Self {
        Frac { num: BigInt::zero(), den: BigInt::one() }
    }

    fn one() -> Self {
        Frac { num: BigInt::one(), den: BigInt::one() }
    }

    fn from_rat(r: &Rat) -> Self {
        Frac { num: r.numer().clone(), den: r.denom().clone() }
    }

    fn from_point(p: &Point, v: Var) -> Result<Frac, EvalError> {
        let num = p.scaled(v).ok_or(EvalError::Unassigned(v))?;
        Ok(Frac { num: num.clone(), den: p.common_den().clone() })
    }

    fn scale(&self, c: &Rat) -> Frac {
        if c.is_one() {
            return self.clone();
        }
        if c.is_integer() {
            return Frac { num: &self.num * c.numer(), den: self.den.clone() };
        }
        Frac { num: &self.num * c.numer(), den: &self.den * c.denom() }
    }

    fn add(&self, o: &Frac) -> Frac {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            Frac { num: &self.num + &o.num, den: self.den.clone() }
        } else {
            Frac { num: &self.num * &o.den + &o.num * &self.den, den: &self.den * &o.den }
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn recip(&self) -> Frac {
        Frac { num: self.den.clone(), den: self.num.clone() }
    }

    fn reduced(self) -> Frac {
        if self.num.is_zero() {
            return Frac::zero();
        }
        let g = self.num.gcd(&self.den);
        let (mut num, mut den) = (self.num / &g, self.den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Frac { num, den }
    }

    fn into_rat(self) -> Rat {
        Rat::from_big(self.num, self.den).expect("evaluation never builds a zero denominator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[i64], zk: &[i64], z: i64) -> Point {
        Point::new(
            x.iter().map(|&v| Rat::from_int(v)).collect(),
            zk.iter().map(|&v| Rat::from_int(v)).collect(),
            Rat::from_int(z),
        )
    }

    #[test]
    fn eval_simple_quotient() {
        let e = (Expr::var(Var::X(1)) - Expr::var(Var::X(2))) / Expr::var(Var::Zgiv);
        assert_eq!(e.eval(&pt(&[3, 1], &[], 2)).unwrap(), Rat::one());
    }

    #[test]
    fn zero_power_is_one() {
        let e = Expr::pow(Expr::var(Var::X(1)), 0) * Expr::one();
        assert_eq!(e.eval(&pt(&[17], &[], 5)).unwrap(), Rat::one());
    }

    #[test]
    fn pole_reports_division_by_zero() {
        let den = Expr::var(Var::X(1)) - Expr::var(Var::X(2));
        let e = Expr::one() / den;
        match e.eval(&pt(&[4, 4], &[], 1)) {
            Err(EvalError::DivisionByZero { .. }) => {}
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn linear_cancels_structurally() {
        let l = &LinearForm::var(Var::X(2)) - &LinearForm::var(Var::X(2));
        assert!(l.is_zero());
        let e = Expr::product([Expr::var(Var::X(1)), Expr::linear(l)]);
        assert!(e.is_zero_const());
    }

    #[test]
    fn shifted_root_value() {
        // x1/z + 3 at x1 = 1, z = 2
        let e = Expr::shifted(Var::X(1), 3);
        assert_eq!(e.eval(&pt(&[1], &[], 2)).unwrap(), Rat::new(7, 2));
        let e = Expr::shifted(Var::X(1), 3);
        assert!(matches!(e.eval(&pt(&[1], &[], 0)), Err(EvalError::DivisionByZero { .. })));
    }

    #[test]
    fn unassigned_variable() {
        let e = Expr::var(Var::Zk(3));
        assert!(matches!(e.eval(&pt(&[1], &[1], 1)), Err(EvalError::Unassigned(Var::Zk(3)))));
    }

    #[test]
    fn substitute_shifted() {
        // Lx1 with x1 -> x2 becomes x2/z + shift
        let e = Expr::shifted(Var::X(1), -1);
        let s = e.substitute(&|v| (v == Var::X(1)).then(|| Expr::var(Var::X(2))));
        let p = pt(&[5, 6], &[], 3);
        assert_eq!(s.eval(&p).unwrap(), Rat::new(6, 3) - Rat::one());
    }

    #[test]
    fn var_parse_display() {
        for v in [Var::X(3), Var::Zk(12), Var::Zgiv] {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
        }
        assert!("x0".parse::<Var>().is_err());
        assert!("y1".parse::<Var>().is_err());
    }
}
