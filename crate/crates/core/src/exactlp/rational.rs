//! Exact rational scalars, vectors and dense matrices.
//!
//! Every quantity on the certificate path is a [`Rational`]; nothing here ever
//! rounds. Vectors and matrices carry their dimensions explicitly and check
//! them on every binary operation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Gcd, Lcm, Sign};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use malachite_q::Rational;

pub fn zero() -> Rational {
    Rational::ZERO
}

pub fn one() -> Rational {
    Rational::ONE
}

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

/// `n / d`, reduced. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::from_signeds(n, d)
}

pub fn is_zero(r: &Rational) -> bool {
    r.sign() == Ordering::Equal
}

pub fn is_positive(r: &Rational) -> bool {
    r.sign() == Ordering::Greater
}

pub fn is_negative(r: &Rational) -> bool {
    r.sign() == Ordering::Less
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Parses an integer or a `num/den` fraction. Decimal points and exponents
/// are rejected: certificate inputs must be exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(Error::DecimalNotAccepted(t.to_string()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = Integer::from_str(num).map_err(|_| Error::MalformedRational(t.to_string()))?;
    let d = Integer::from_str(den).map_err(|_| Error::MalformedRational(t.to_string()))?;
    if d == 0u32 {
        return Err(Error::MalformedRational(t.to_string()));
    }
    Ok(Rational::from_integers(n, d))
}

/// Like [`parse_rational`] but also accepts finite decimal notation
/// (`0.001`, `1e-3`), converted exactly. Only for sampling parameters.
pub fn parse_rational_or_decimal(s: &str) -> Result<Rational> {
    let t = s.trim();
    match parse_rational(t) {
        Err(Error::DecimalNotAccepted(_)) => {}
        other => return other,
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..]
                .parse()
                .map_err(|_| Error::MalformedRational(t.to_string()))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(Error::MalformedRational(t.to_string()));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::MalformedRational(t.to_string()));
    }
    let digits = format!("{whole}{frac}");
    let n = Natural::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|_| Error::MalformedRational(t.to_string()))?;
    let scale = exponent - frac.len() as i64;
    let ten = Rational::from(10u32);
    let mut value = Rational::from(n);
    if scale >= 0 {
        for _ in 0..scale {
            value *= &ten;
        }
    } else {
        for _ in 0..(-scale) {
            value /= &ten;
        }
    }
    Ok(if neg { -value } else { value })
}

/// Serde adapter writing a rational as a `"num/den"` (or integer) string and
/// reading strings or JSON integers. JSON floats are refused.
pub mod qserde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a \"num/den\" string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
            Ok(Rational::from(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
            Ok(Rational::from(v))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rational, E> {
            Err(E::custom(Error::DecimalNotAccepted(v.to_string())))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }
    }
}

/// [`qserde`] for optional rationals, with `null` for `None`.
pub mod qserde_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "qserde")] Rational);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// A dense exact vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&e| int(e)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !is_zero(a) && !is_zero(b) {
                acc += a * b;
            }
        }
        acc
    }

    pub fn add(&self, other: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: &Rational, other: &QVector) {
        if is_zero(s) {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !is_zero(b) {
                *a += s * b;
            }
        }
    }

    /// Positive rescaling to the unique primitive integer vector on the same
    /// ray. The zero vector is returned unchanged.
    pub fn primitive(&self) -> QVector {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = Natural::ONE;
        for a in &self.0 {
            l = l.lcm(a.denominator_ref());
        }
        let lr = Rational::from(l);
        let scaled: Vec<Rational> = self.0.iter().map(|a| a * &lr).collect();
        let mut g = Natural::ZERO;
        for a in &scaled {
            g = g.gcd(a.numerator_ref());
        }
        let gr = Rational::from(g);
        QVector(scaled.into_iter().map(|a| a / &gr).collect())
    }

    pub fn concat(&self, other: &QVector) -> QVector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        QVector(v)
    }

    pub fn max_abs(&self) -> Rational {
        self.0.iter().map(abs).max().unwrap_or_else(zero)
    }
}

impl Deref for QVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for QVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|r| r.to_string()))
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry(#[serde(with = "qserde")] Rational);
        let entries: Vec<Entry> = Vec::deserialize(d)?;
        Ok(QVector(entries.into_iter().map(|e| e.0).collect()))
    }
}

/// A dense exact matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    cols: usize,
    rows: Vec<QVector>,
}

impl QMatrix {
    pub fn from_rows(cols: usize, rows: Vec<QVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::Dimension(format!(
                "matrix row has {} entries, expected {cols}",
                bad.dim()
            )));
        }
        Ok(QMatrix { cols, rows })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            cols,
            rows: vec![QVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            cols: n,
            rows: (0..n).map(|k| QVector::unit(n, k)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors (all of dimension `rows`).
    pub fn from_columns(rows: usize, columns: &[QVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                m.rows[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> QVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.rows[i][j] = v;
    }

    pub fn mul_vec(&self, x: &QVector) -> QVector {
        debug_assert_eq!(x.dim(), self.cols);
        self.rows.iter().map(|r| r.dot(x)).collect()
    }

    /// `selfᵀ y`
    pub fn tr_mul_vec(&self, y: &QVector) -> QVector {
        debug_assert_eq!(y.dim(), self.nrows());
        let mut out = QVector::zeros(self.cols);
        for (r, yi) in self.rows.iter().zip(y.iter()) {
            out.axpy(yi, r);
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix {
            cols: self.nrows(),
            rows: (0..self.cols).map(|j| self.column(j)).collect(),
        }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        debug_assert_eq!(self.cols, other.cols);
        QMatrix {
            cols: self.cols,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix {
            cols: self.cols,
            rows: self.rows.iter().map(|r| r.scale(s)).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.cols && (0..self.cols).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    /// Σ c_ij², exact.
    pub fn frobenius_sq(&self) -> Rational {
        self.rows.iter().map(|r| r.dot(r)).fold(zero(), |a, b| a + b)
    }

    pub fn quad_form(&self, x: &QVector) -> Rational {
        x.dot(&self.mul_vec(x))
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.rows[i][j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.rows[i][j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows.iter())
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<QVector> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, QVector::dim);
        QMatrix::from_rows(cols, rows).map_err(de::Error::custom)
    }
}

/// Basis of the null space `{u : M u = 0}` for a matrix given by rows of
/// dimension `dim`, by exact Gauss-Jordan elimination.
pub fn null_space(dim: usize, rows: &[QVector]) -> Vec<QVector> {
    let mut m: Vec<QVector> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = one() / &m[r][c];
        m[r] = m[r].scale(&inv);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !is_zero(&row[c]) {
                let f = -row[c].clone();
                row.axpy(&f, &pivot);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut u = QVector::zeros(dim);
            u[fc] = one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                u[pc] = -m[i][fc].clone();
            }
            u
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" -2 ").unwrap(), int(-2));
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!(matches!(parse_rational("1/0"), Err(Error::MalformedRational(_))));
        assert!(matches!(parse_rational("abc"), Err(Error::MalformedRational(_))));
        assert!(matches!(parse_rational("0.5"), Err(Error::DecimalNotAccepted(_))));
    }

    #[test]
    fn decimals_convert_exactly() {
        assert_eq!(parse_rational_or_decimal("0.001").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational_or_decimal("1e-2").unwrap(), ratio(1, 100));
        assert_eq!(parse_rational_or_decimal("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational_or_decimal("1/3").unwrap(), ratio(1, 3));
    }

    #[test]
    fn primitive_vectors() {
        let v = QVector::new(vec![ratio(1, 2), ratio(-3, 4), zero()]);
        assert_eq!(v.primitive(), QVector::from_i64(&[2, -3, 0]));
        assert_eq!(QVector::from_i64(&[4, 6]).primitive(), QVector::from_i64(&[2, 3]));
    }

    #[test]
    fn null_space_of_line() {
        let ns = null_space(2, &[QVector::from_i64(&[1, 1])]);
        assert_eq!(ns, vec![QVector::from_i64(&[-1, 1])]);
        assert_eq!(null_space(2, &[]).len(), 2);
    }

    #[test]
    fn serde_round_trip_and_float_rejection() {
        let v = QVector::new(vec![ratio(1, 3), int(-2)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/3","-2"]"#);
        let back: QVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let ints: QVector = serde_json::from_str("[1, -4]").unwrap();
        assert_eq!(ints, QVector::from_i64(&[1, -4]));
        assert!(serde_json::from_str::<QVector>("[0.5]").is_err());
    }
}
