use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number; the scalar ring of every structure function.
pub type Rational = BigRational;

/// Shorthand for an integer valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`, normalized.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An ordered list of coordinate names.
#[derive(Clone, Debug)]
pub struct Chart(Arc<[String]>);

impl Chart {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Chart(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    /// The zero dimensional chart of a point.
    pub fn point() -> Self {
        Chart::new(Vec::<String>::new())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Appends coordinates, rejecting duplicates.
    pub fn extend<S: AsRef<str>>(&self, more: &[S]) -> Result<Chart> {
        let mut names: Vec<String> = self.0.to_vec();
        for m in more {
            let m = m.as_ref();
            if names.iter().any(|n| n == m) {
                return Err(Error::Invalid(format!("duplicate coordinate `{m}`")));
            }
            names.push(m.to_string());
        }
        Ok(Chart::new(names))
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Chart {}

impl Hash for Chart {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(", "))
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients in canonical form:
/// no zero coefficients are stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    chart: Chart,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(chart: &Chart) -> Self {
        Polynomial {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        Self::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(chart.dim()), c);
        }
        Polynomial {
            chart: chart.clone(),
            terms,
        }
    }

    pub fn from_int(chart: &Chart, n: i64) -> Self {
        Self::constant(chart, rat(n))
    }

    /// The coordinate function with the given index.
    pub fn coordinate(chart: &Chart, index: usize) -> Self {
        assert!(index < chart.dim(), "coordinate index out of range");
        let mut e = vec![0; chart.dim()];
        e[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(e), Rational::one());
        Polynomial {
            chart: chart.clone(),
            terms,
        }
    }

    pub fn var(chart: &Chart, name: &str) -> Result<Self> {
        chart
            .index_of(name)
            .map(|i| Self::coordinate(chart, i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn from_terms<I>(chart: &Chart, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(chart);
        for (e, c) in terms {
            if e.len() != chart.dim() {
                return Err(Error::DimensionMismatch {
                    expected: chart.dim(),
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    fn check_chart(&self, other: &Polynomial) -> Result<()> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                left: self.chart.to_string(),
                right: other.chart.to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_chart(other)?;
        let mut out = Polynomial::zero(&self.chart);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.chart);
        }
        Polynomial {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.chart);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative along the coordinate with the given index.
    pub fn partial(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[index] -= 1;
            out.add_term(Monomial(d), c * rat(e as i64));
        }
        out
    }

    pub fn partial_by_name(&self, name: &str) -> Result<Polynomial> {
        let i = self
            .chart
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.partial(i))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.chart.dim(),
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over another chart, matching coordinates
    /// by name. Fails if a coordinate in use is absent from `target`.
    pub fn reexpress(&self, target: &Chart) -> Result<Polynomial> {
        if &self.chart == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.chart.dim());
        for name in self.chart.names() {
            map.push(target.index_of(name));
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.dim()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = k,
                    None => {
                        return Err(Error::UnknownVariable(self.chart.names()[i].clone()));
                    }
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Minimum and maximum degree of the terms in the given coordinates.
    pub fn degree_range_in(&self, vars: &[usize]) -> Option<(u32, u32)> {
        let mut range: Option<(u32, u32)> = None;
        for m in self.terms.keys() {
            let d: u32 = vars.iter().map(|&i| m.0[i]).sum();
            range = Some(match range {
                None => (d, d),
                Some((lo, hi)) => (lo.min(d), hi.max(d)),
            });
        }
        range
    }

    /// True when every term has exactly degree `d` in the given coordinates
    /// (the zero polynomial qualifies).
    pub fn is_homogeneous_in(&self, vars: &[usize], d: u32) -> bool {
        match self.degree_range_in(vars) {
            None => true,
            Some((lo, hi)) => lo == d && hi == d,
        }
    }

    /// Coefficient of `var^power` with respect to one coordinate, as a
    /// polynomial with that coordinate removed.
    pub fn coefficient_of_power(&self, var: usize, power: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.chart);
        for (m, c) in &self.terms {
            if m.0[var] == power {
                let mut e = m.0.clone();
                e[var] = 0;
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$try(rhs)
                    .expect("polynomial operands live on different charts")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.check_chart(rhs)
            .expect("polynomial operands live on different charts");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        self.check_chart(rhs)
            .expect("polynomial operands live on different charts");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, chart: &Chart, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, &e) in chart.names().iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Writes a single term without its sign.
fn write_unsigned_term(f: &mut fmt::Formatter<'_>, chart: &Chart, m: &Monomial, c: &Rational) -> fmt::Result {
    let a = c.abs();
    if m.degree() == 0 {
        return write_rational(f, &a);
    }
    if !a.is_one() {
        write_rational(f, &a)?;
        write!(f, "*")?;
    }
    write_monomial(f, chart, m)
}

impl fmt::Display for Polynomial {
    /// Canonical form: descending graded-lex order, `+`/`-` separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_unsigned_term(f, &self.chart, m, c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Chart {
        Chart::new(["x", "y"])
    }

    #[test]
    fn additive_inverse_is_zero() {
        let c = xy();
        let p = Polynomial::var(&c, "x").unwrap() * Polynomial::var(&c, "y").unwrap() + Polynomial::from_int(&c, 3);
        assert!((&p + &(-&p)).is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let c = Chart::new(["x"]);
        let x = Polynomial::var(&c, "x").unwrap();
        let one = Polynomial::one(&c);
        assert_eq!(&x * &x, x.pow(2));
        // (x+1)(x-1) = x^2 - 1, expanded by hand
        let expected = Polynomial::from_terms(&c, [(vec![2], rat(1)), (vec![0], rat(-1))]).unwrap();
        assert_eq!((&x + &one) * (&x - &one), expected);
    }

    #[test]
    fn partial_derivative_examples() {
        let c = xy();
        assert!(Polynomial::from_int(&c, 7).partial(0).is_zero());
        let x = Polynomial::var(&c, "x").unwrap();
        let y = Polynomial::var(&c, "y").unwrap();
        assert_eq!(x.pow(2).partial(0), x.scale(&rat(2)));
        // monomial rule: d/dx (x^2 y) = 2xy
        assert_eq!((x.pow(2) * &y).partial(0), (&x * &y).scale(&rat(2)));
        assert!(matches!(x.partial_by_name("z"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn evaluation_examples() {
        let c = xy();
        let x = Polynomial::var(&c, "x").unwrap();
        let y = Polynomial::var(&c, "y").unwrap();
        assert_eq!(Polynomial::zero(&c).evaluate(&[rat(5), rat(-2)]).unwrap(), rat(0));
        let p = (&x * &y).scale(&ratio(1, 2));
        assert_eq!(p.evaluate(&[rat(2), rat(3)]).unwrap(), rat(3));
        assert!(matches!(p.evaluate(&[rat(1)]), Err(Error::DimensionMismatch { .. })));
        let cx = Chart::new(["x"]);
        let q = Polynomial::var(&cx, "x").unwrap().pow(2) + Polynomial::one(&cx);
        assert_eq!(q.evaluate(&[rat(2)]).unwrap(), rat(5));
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = Polynomial::one(&Chart::new(["x"]));
        let b = Polynomial::one(&Chart::new(["y"]));
        assert!(matches!(a.try_add(&b), Err(Error::ChartMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(Error::ChartMismatch { .. })));
    }

    #[test]
    fn reexpress_matches_names() {
        let small = Chart::new(["x"]);
        let big = Chart::new(["v", "x"]);
        let x = Polynomial::var(&small, "x").unwrap().pow(3);
        let lifted = x.reexpress(&big).unwrap();
        assert_eq!(lifted, Polynomial::var(&big, "x").unwrap().pow(3));
        assert_eq!(lifted.reexpress(&small).unwrap(), x);
        let v = Polynomial::var(&big, "v").unwrap();
        assert!(v.reexpress(&small).is_err());
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        let c = xy();
        let x = Polynomial::var(&c, "x").unwrap();
        let y = Polynomial::var(&c, "y").unwrap();
        let p = &y - &x.pow(2) + (&x * &y).scale(&ratio(1, 2)) - Polynomial::from_int(&c, 4);
        assert_eq!(p.to_string(), "-x^2 + 1/2*x*y + y - 4");
        assert_eq!(Polynomial::zero(&c).to_string(), "0");
    }
}
