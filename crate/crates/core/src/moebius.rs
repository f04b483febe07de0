//! Möbius geometry on the upper half-plane and the unit disc.
//!
//! Group elements are integer matrices of determinant one taken modulo sign.
//! The disc action is the half-plane action conjugated by the Cayley map
//! `C(z) = (z - i)/(z + i)`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Points closer than this to the boundary are rejected.
pub const BOUNDARY_TOL: f64 = 1e-14;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoebiusError {
    #[error("point {value} lies on or outside the boundary of the {model} model")]
    Boundary { value: Complex64, model: Model },
    #[error("expected a point in the {expected} model, got the {found} model")]
    WrongModel { expected: Model, found: Model },
    #[error("matrix ({a}, {b}; {c}, {d}) does not have determinant 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },
    #[error("matrix entry overflow while multiplying group elements")]
    Overflow,
    #[error("cannot parse {0:?} as a generator word")]
    BadWord(String),
    #[error("cannot parse {0:?} as a complex number")]
    BadComplex(String),
}

/// Generator tokens for the two presets: `S`, `T` for PSL(2,Z) and
/// `A = T^2`, `B = (1,0;2,1)` for Gamma(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
    TInv,
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn matrix(self) -> [i64; 4] {
        match self {
            Letter::S => [0, -1, 1, 0],
            Letter::T => [1, 1, 0, 1],
            Letter::TInv => [1, -1, 0, 1],
            Letter::A => [1, 2, 0, 1],
            Letter::AInv => [1, -2, 0, 1],
            Letter::B => [1, 0, 2, 1],
            Letter::BInv => [1, 0, -2, 1],
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Letter::S => "S",
            Letter::T => "T",
            Letter::TInv => "T^-1",
            Letter::A => "A",
            Letter::AInv => "A^-1",
            Letter::B => "B",
            Letter::BInv => "B^-1",
        }
    }

    fn parse(tok: &str) -> Option<Letter> {
        let (base, inv) = match tok
            .strip_suffix("^-1")
            .or_else(|| tok.strip_suffix("⁻¹"))
            .or_else(|| tok.strip_suffix("'"))
        {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let l = match base {
            "S" => Letter::S,
            "T" => Letter::T,
            "A" => Letter::A,
            "B" => Letter::B,
            _ => return None,
        };
        Some(if inv { l.inverse() } else { l })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Parse a whitespace separated word such as `"A B A^-1"`.
pub fn parse_word(s: &str) -> Result<Vec<Letter>, MoebiusError> {
    s.split_whitespace()
        .map(|t| Letter::parse(t).ok_or_else(|| MoebiusError::BadWord(s.to_string())))
        .collect()
}

pub fn format_word(w: &[Letter]) -> String {
    w.iter().map(|l| l.symbol()).collect::<Vec<_>>().join(" ")
}

/// An element of PSL(2,Z) in canonical sign, optionally with a word in the
/// generators whose product (left to right) is the matrix.
///
/// Equality, hashing and ordering look at the matrix only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    #[serde(default)]
    pub word: Vec<Letter>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.entries() == other.entries()
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries().hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.sup_norm(), self.entries()).cmp(&(other.sup_norm(), other.entries()))
    }
}

fn canonical(m: [i64; 4]) -> [i64; 4] {
    let [a, b, c, d] = m;
    if c < 0 || (c == 0 && d < 0) {
        [-a, -b, -c, -d]
    } else {
        m
    }
}

fn mat_mul(x: [i64; 4], y: [i64; 4]) -> Option<[i64; 4]> {
    let f = |p: i64, q: i64, r: i64, s: i64| -> Option<i64> {
        let v = p as i128 * q as i128 + r as i128 * s as i128;
        i64::try_from(v).ok()
    };
    Some([
        f(x[0], y[0], x[1], y[2])?,
        f(x[0], y[1], x[1], y[3])?,
        f(x[2], y[0], x[3], y[2])?,
        f(x[2], y[1], x[3], y[3])?,
    ])
}

fn append_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, MoebiusError> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(MoebiusError::NotUnimodular { a, b, c, d });
        }
        let [a, b, c, d] = canonical([a, b, c, d]);
        Ok(GroupElement { a, b, c, d, word: Vec::new() })
    }

    pub fn identity() -> Self {
        GroupElement { a: 1, b: 0, c: 0, d: 1, word: Vec::new() }
    }

    pub fn generator(l: Letter) -> Self {
        let [a, b, c, d] = canonical(l.matrix());
        GroupElement { a, b, c, d, word: vec![l] }
    }

    pub fn s() -> Self {
        Self::generator(Letter::S)
    }

    pub fn t() -> Self {
        Self::generator(Letter::T)
    }

    pub fn from_word(word: &[Letter]) -> Result<Self, MoebiusError> {
        let mut g = Self::identity();
        for &l in word {
            g = g.checked_mul(&Self::generator(l)).ok_or(MoebiusError::Overflow)?;
        }
        Ok(g)
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn sup_norm(&self) -> i64 {
        self.entries().iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Squared Frobenius norm, `a² + b² + c² + d²`.
    pub fn frobenius_sq(&self) -> i128 {
        self.entries().iter().map(|&x| x as i128 * x as i128).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.entries() == [1, 0, 0, 1]
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let m = canonical(mat_mul(self.entries(), other.entries())?);
        let mut word = self.word.clone();
        for &l in &other.word {
            append_reduced(&mut word, l);
        }
        Some(GroupElement { a: m[0], b: m[1], c: m[2], d: m[3], word })
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = canonical([self.d, -self.b, -self.c, self.a]);
        let word = self.word.iter().rev().map(|l| l.inverse()).collect();
        GroupElement { a, b, c, d, word }
    }

    /// Drop the word, keeping the matrix.
    pub fn without_word(mut self) -> Self {
        self.word.clear();
        self
    }

    pub fn word_string(&self) -> String {
        format_word(&self.word)
    }

    /// Membership in Gamma(2): congruent to the identity modulo 2.
    pub fn in_gamma2(&self) -> bool {
        self.a.rem_euclid(2) == 1
            && self.b.rem_euclid(2) == 0
            && self.c.rem_euclid(2) == 0
            && self.d.rem_euclid(2) == 1
    }

    /// `c z + d` evaluated at a complex number.
    pub fn j(&self, z: Complex64) -> Complex64 {
        Complex64::new(self.c as f64 * z.re + self.d as f64, self.c as f64 * z.im)
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.checked_mul(rhs).expect("matrix entry overflow in group multiplication")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)?;
        if !self.word.is_empty() {
            write!(f, " [{}]", self.word_string())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    HalfPlane,
    Disc,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::HalfPlane => "half-plane",
            Model::Disc => "disc",
        })
    }
}

/// A validated interior point of one of the two models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    value: Complex64,
    model: Model,
}

impl Point {
    pub fn half_plane(z: Complex64) -> Result<Self, MoebiusError> {
        if !(z.im >= BOUNDARY_TOL) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(MoebiusError::Boundary { value: z, model: Model::HalfPlane });
        }
        Ok(Point { value: z, model: Model::HalfPlane })
    }

    pub fn disc(w: Complex64) -> Result<Self, MoebiusError> {
        if !(w.norm() <= 1.0 - BOUNDARY_TOL) {
            return Err(MoebiusError::Boundary { value: w, model: Model::Disc });
        }
        Ok(Point { value: w, model: Model::Disc })
    }

    pub fn new(value: Complex64, model: Model) -> Result<Self, MoebiusError> {
        match model {
            Model::HalfPlane => Self::half_plane(value),
            Model::Disc => Self::disc(value),
        }
    }

    pub fn i() -> Self {
        Point { value: I, model: Model::HalfPlane }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn expect_half_plane(&self) -> Result<Complex64, MoebiusError> {
        match self.model {
            Model::HalfPlane => Ok(self.value),
            found => Err(MoebiusError::WrongModel { expected: Model::HalfPlane, found }),
        }
    }

    pub fn expect_disc(&self) -> Result<Complex64, MoebiusError> {
        match self.model {
            Model::Disc => Ok(self.value),
            found => Err(MoebiusError::WrongModel { expected: Model::Disc, found }),
        }
    }

    /// The same point in the half-plane model.
    pub fn as_half_plane(&self) -> Result<Point, MoebiusError> {
        match self.model {
            Model::HalfPlane => Ok(*self),
            Model::Disc => to_half_plane(*self),
        }
    }

    /// The same point in the disc model.
    pub fn as_disc(&self) -> Result<Point, MoebiusError> {
        match self.model {
            Model::Disc => Ok(*self),
            Model::HalfPlane => to_disc(*self),
        }
    }

    /// Hyperbolic distance for the curvature −1 metric.
    pub fn distance(&self, other: &Point) -> Result<f64, MoebiusError> {
        let z = self.as_half_plane()?.value;
        let w = other.as_half_plane()?.value;
        let num = (z - w).norm_sqr();
        Ok((1.0 + num / (2.0 * z.im * w.im)).acosh())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", format_complex(self.value), self.model)
    }
}

/// Format as `re+imi` with round-trip precision.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}i", z.re, sign, z.im.abs())
}

/// Parse `"2i"`, `"0.3+0.4i"`, `"-1e-3-2.5i"`, `"0.5"` and similar forms.
pub fn parse_complex(s: &str) -> Result<Complex64, MoebiusError> {
    let bad = || MoebiusError::BadComplex(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let im_of = |txt: &str| -> Result<f64, MoebiusError> {
        match txt {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => txt.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, im_of(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, im_of(body)?)),
    }
}

impl FromStr for Point {
    type Err = MoebiusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Point::half_plane(parse_complex(s)?)
    }
}

fn act_half_plane(g: &GroupElement, z: Complex64) -> Complex64 {
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let den = g.j(z).norm_sqr();
    let re = a * c * z.norm_sqr() + (a * d + b * c) * z.re + b * d;
    Complex64::new(re / den, z.im / den)
}

/// `g(z)` in the model of `z`.
pub fn apply_moebius(g: &GroupElement, z: Point) -> Result<Point, MoebiusError> {
    match z.model {
        Model::HalfPlane => Point::half_plane(act_half_plane(g, z.value)),
        Model::Disc => to_disc(Point::half_plane(act_half_plane(g, to_half_plane(z)?.value))?),
    }
}

/// `Im(z) / |cz + d|²`.
pub fn imag_factor(g: &GroupElement, z: Point) -> Result<f64, MoebiusError> {
    let z = z.expect_half_plane()?;
    Ok(z.im / g.j(z).norm_sqr())
}

pub fn to_disc(z: Point) -> Result<Point, MoebiusError> {
    let z = z.expect_half_plane()?;
    Point::disc((z - I) / (z + I))
}

pub fn to_half_plane(w: Point) -> Result<Point, MoebiusError> {
    let w = w.expect_disc()?;
    Point::half_plane(I * (1.0 + w) / (1.0 - w))
}

/// `1 - |C(z)|`, computed without cancellation for points near the boundary.
pub fn disc_gap(z: Complex64) -> f64 {
    let one_minus_sq = 4.0 * z.im / (z + I).norm_sqr();
    let r = ((z - I) / (z + I)).norm();
    one_minus_sq / (1.0 + r)
}

/// The logarithm of `cz + d` together with its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchValue {
    pub element: GroupElement,
    pub point: Point,
    pub log_value: Complex64,
}

/// Holomorphic logarithm of `cz + d`.
///
/// With canonical sign `cz + d` lies in the open upper half-plane when
/// `c > 0` and is the positive real `d` when `c = 0`, so the principal
/// logarithm is holomorphic in `z` in every case.
pub fn branch_log(g: &GroupElement, z: Point) -> Result<BranchValue, MoebiusError> {
    let zv = z.expect_half_plane()?;
    Ok(BranchValue { element: g.clone(), point: z, log_value: log_j(g, zv) })
}

pub(crate) fn log_j(g: &GroupElement, z: Complex64) -> Complex64 {
    if g.c == 0 {
        Complex64::new((g.d as f64).ln(), 0.0)
    } else {
        g.j(z).ln()
    }
}

/// `(cz + d)^s` on the branch of [`branch_log`].
pub fn automorphy(g: &GroupElement, z: Point, s: f64) -> Result<Complex64, MoebiusError> {
    let zv = z.expect_half_plane()?;
    Ok(automorphy_raw(g, zv, s))
}

pub(crate) fn automorphy_raw(g: &GroupElement, z: Complex64, s: f64) -> Complex64 {
    let l = log_j(g, z);
    Complex64::from_polar((s * l.re).exp(), s * l.im)
}

/// `σ(gh, z) / (σ(g, hz) σ(h, z))` for `σ = automorphy`.
///
/// Computed on logarithms. In PSL the factors agree up to sign, so the log
/// difference is an integer multiple of `iπ`; the defect is formed from the
/// rounded multiple, which keeps its modulus exactly one.
pub fn cocycle_defect(
    g: &GroupElement,
    h: &GroupElement,
    z: Point,
    s: f64,
) -> Result<Complex64, MoebiusError> {
    let zv = z.expect_half_plane()?;
    let hz = act_half_plane(h, zv);
    let gh = g * h;
    let diff = log_j(&gh, zv) - log_j(g, hz) - log_j(h, zv);
    let k = (diff.im / std::f64::consts::PI).round();
    Ok(Complex64::from_polar(1.0, s * k * std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn s_squared_is_identity_in_psl() {
        let s = GroupElement::s();
        assert!((&s * &s).is_identity());
    }

    #[test]
    fn canonical_sign() {
        let g = GroupElement::new(-1, 0, -1, -1).unwrap();
        assert_eq!(g.entries(), [1, 0, 1, 1]);
        let h = GroupElement::new(-1, -3, 0, -1).unwrap();
        assert_eq!(h.entries(), [1, 3, 0, 1]);
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("0.3+0.4i").unwrap(), c(0.3, 0.4));
        assert_eq!(parse_complex("-1e-3-2.5i").unwrap(), c(-1e-3, -2.5));
        assert_eq!(parse_complex("1.5e+2+i").unwrap(), c(150.0, 1.0));
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert!(parse_complex("abc").is_err());
        let z = c(0.1, -3.25);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn word_round_trip() {
        let w = parse_word("A B A^-1 T S").unwrap();
        assert_eq!(format_word(&w), "A B A^-1 T S");
        assert_eq!(parse_word("A⁻¹").unwrap(), vec![Letter::AInv]);
        assert!(parse_word("Q").is_err());
    }

    #[test]
    fn defect_on_s_s_at_three_halves() {
        let s = GroupElement::s();
        let d = cocycle_defect(&s, &s, Point::i(), 1.5).unwrap();
        assert!((d - c(0.0, 1.0)).norm() < 1e-12, "{d}");
    }
}
