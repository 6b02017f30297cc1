//! Dense-map multivariate polynomials in at most four variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{Coeff, Rational, C64};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 4;
pub const MAX_DEGREE: u32 = 12;

/// Exponent vector. Entries beyond the owning polynomial's `nvars` are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        let mut e = [0u8; MAX_VARS];
        for (slot, &x) in e.iter_mut().zip(exps) {
            *slot = x as u8;
        }
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0[var] as u32
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0).all(|(&a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a -= b;
        }
        Monomial(e)
    }

    pub fn exps(&self, nvars: usize) -> Vec<u32> {
        self.0[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub fn eval<C: Coeff>(&self, x: &[C]) -> C {
        let mut acc = C::one();
        for (v, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                acc = acc * x[v].clone();
            }
        }
        acc
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with x0 > x1 > x2 > x3.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All exponent vectors of total degree exactly `deg` in `nvars` variables,
/// in descending graded-lex order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(
        nvars: usize,
        var: usize,
        left: u32,
        cur: &mut [u32; MAX_VARS],
        out: &mut Vec<Monomial>,
    ) {
        if var + 1 == nvars {
            cur[var] = left;
            out.push(Monomial::new(&cur[..]));
            cur[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e;
            rec(nvars, var + 1, left - e, cur, out);
        }
        cur[var] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::default());
        }
        return out;
    }
    rec(nvars, 0, deg, &mut [0; MAX_VARS], &mut out);
    out
}

#[derive(Clone, PartialEq)]
pub struct MultiPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type QPoly = MultiPoly<Rational>;
pub type CPoly = MultiPoly<C64>;

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, &[], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0u32; MAX_VARS];
        e[i] = 1;
        Self::monomial(nvars, &e[..nvars], C::one())
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::new(exps), c);
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[C]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = [0u32; MAX_VARS];
            e[i] = 1;
            p.add_term(Monomial::new(&e), c.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, C)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(Monomial::new(&e), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> C {
        self.coeff(&Monomial::new(exps))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    /// Homogeneous of degree `d` (the zero polynomial counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(*m, a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[C]) -> Result<C> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            acc = acc + c.clone() * m.eval(x);
        }
        Ok(acc)
    }

    pub fn eval_c64(&self, x: &[C64]) -> C64 {
        assert_eq!(x.len(), self.nvars, "dimension mismatch");
        let mut acc = C64::zero();
        for (m, c) in &self.terms {
            acc += c.to_c64() * m.eval(x);
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut nm = *m;
            nm.0[var] -= 1;
            out.add_term(nm, c.clone() * C::from_i64(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|v| self.partial(v)).collect()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn to_c64(&self) -> CPoly {
        self.map(|c| c.to_c64())
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    pub fn coeff_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Composition with a linear change of variables: returns `f(L y)` where
    /// `x_i = sum_j L[i][j] y_j` and `y` has `L[0].len()` variables.
    pub fn substitute_linear(&self, l: &[Vec<C>]) -> Self {
        assert_eq!(l.len(), self.nvars);
        let m = l.first().map_or(0, |r| r.len());
        let forms: Vec<Self> = l.iter().map(|row| Self::linear(row)).collect();
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for (i, form) in forms.iter().enumerate() {
            let max_e = self.degree_in(i).unwrap_or(0);
            let mut pw = vec![Self::constant(m, C::one())];
            for k in 1..=max_e as usize {
                let next = &pw[k - 1] * form;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Self::zero(m);
        for (mono, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (i, pw) in powers.iter().enumerate() {
                let e = mono.exp(i) as usize;
                if e > 0 {
                    t = &t * &pw[e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Substitute a value for one variable, keeping the variable count.
    pub fn specialize(&self, var: usize, value: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut nm = *m;
            let e = nm.0[var];
            nm.0[var] = 0;
            let mut v = c.clone();
            for _ in 0..e {
                v = v * value.clone();
            }
            out.add_term(nm, v);
        }
        out
    }

    /// Coefficients of `f` as a polynomial in `var`: `f = sum_k c_k var^k`,
    /// where each `c_k` keeps the full variable list but has no `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut nm = *m;
            let e = nm.0[var] as usize;
            nm.0[var] = 0;
            out[e].add_term(nm, c.clone());
        }
        out
    }

    /// Remove a variable that does not occur, shifting higher indices down.
    pub fn drop_var(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            if m.0[var] != 0 {
                return Err(Error::Degenerate(format!("x{var} still occurs")));
            }
            let mut e = Vec::with_capacity(self.nvars - 1);
            for v in 0..self.nvars {
                if v != var {
                    e.push(m.exp(v));
                }
            }
            out.add_term(Monomial::new(&e), c.clone());
        }
        Ok(out)
    }

    /// Insert a new variable (not occurring) at position `var`.
    pub fn insert_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.exps(self.nvars);
            e.insert(var, 0);
            out.add_term(Monomial::new(&e), c.clone());
        }
        out
    }

    /// Homogenize with a new variable at position `var`, up to total degree `d`.
    pub fn homogenize(&self, var: usize, d: u32) -> Self {
        let mut out = Self::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.exps(self.nvars);
            e.insert(var, d - m.degree());
            out.add_term(Monomial::new(&e), c.clone());
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// Division with remainder by a single divisor (graded-lex leading terms).
    /// A single polynomial is a Gröbner basis of its ideal, so the remainder
    /// is zero exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let (lm, lc) = divisor.leading_term().ok_or(Error::ZeroPolynomial)?;
        let (lm, lc) = (*lm, lc.clone());
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        let mut out_rem = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (*m, c.clone())) {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = c / lc.clone();
                quo.add_term(qm, qc.clone());
                let mut t = Self::zero(self.nvars);
                t.add_term(qm, qc);
                rem = &rem - &(&t * divisor);
                // guard against float residue at the eliminated monomial
                rem.terms.remove(&m);
            } else {
                rem.terms.remove(&m);
                out_rem.add_term(m, c);
            }
        }
        Ok((quo, out_rem))
    }

    /// Exact quotient; errors when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::IdentityFailed {
                what: "exact polynomial division".into(),
                residual: r.max_coeff(),
            });
        }
        Ok(q)
    }

    /// Coefficient vector over the monomials of degree `d` (descending grlex).
    pub fn coeff_vector(&self, d: u32) -> Vec<C> {
        monomials_of_degree(self.nvars, d)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn from_coeff_vector(nvars: usize, d: u32, v: &[C]) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in monomials_of_degree(nvars, d).into_iter().zip(v) {
            p.add_term(m, c.clone());
        }
        p
    }
}

impl CPoly {
    /// Drop coefficients with modulus at most `tol` times the largest.
    pub fn prune(&self, rel_tol: f64) -> CPoly {
        let scale = self.max_coeff();
        let mut out = CPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if c.norm() > rel_tol * scale {
                out.add_term(*m, *c);
            }
        }
        out
    }

    /// Scale so the largest coefficient has modulus one.
    pub fn normalized(&self) -> CPoly {
        let s = self.max_coeff();
        if s == 0.0 {
            return self.clone();
        }
        self.scale(&C64::new(1.0 / s, 0.0))
    }

    /// Scale so the graded-lex leading coefficient equals one.
    pub fn monic(&self) -> CPoly {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = C64::one() / *c;
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn real_part(&self) -> CPoly {
        self.map(|c| C64::new(c.re, 0.0))
    }

    pub fn imag_part(&self) -> CPoly {
        self.map(|c| C64::new(c.im, 0.0))
    }

    /// Maximum imaginary-part modulus over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Distance between two polynomials measured in max coefficient modulus.
    pub fn distance(&self, other: &CPoly) -> f64 {
        (self - other).max_coeff()
    }

    /// Compare up to a nonzero scalar: both are scaled to unit leading
    /// coefficient (on the larger polynomial's leading monomial) first.
    pub fn distance_projective(&self, other: &CPoly) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        let Some((m, _)) = a
            .terms
            .iter()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        else {
            return b.max_coeff();
        };
        let ca = a.coeff(m);
        let cb = b.coeff(m);
        if cb.norm() < 1e-300 {
            return f64::INFINITY;
        }
        let a1 = a.scale(&(C64::one() / ca));
        let b1 = b.scale(&(C64::one() / cb));
        a1.distance(&b1)
    }
}

impl QPoly {
    /// Multiply by the least common denominator so all coefficients are integers.
    pub fn clear_denominators(&self) -> QPoly {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        self.scale(&Rational::from_integer(l))
    }
}

impl<'a, C: Coeff> Add<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Sub<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.map(|c| -c.clone())
    }
}

impl<C: Coeff> Add for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> Self {
        -&self
    }
}

const VAR_NAMES: [&str; 4] = ["x0", "x1", "x2", "x3"];

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for v in 0..self.nvars {
                match m.exp(v) {
                    0 => {}
                    1 => write!(f, "*{}", VAR_NAMES[v])?,
                    e => write!(f, "*{}^{e}", VAR_NAMES[v])?,
                }
            }
        }
        Ok(())
    }
}

/// Parse a polynomial written with `x0..x3`, integers/rationals, `+ - * ^`
/// and parentheses. Used by tests and fixtures.
pub fn parse_poly(nvars: usize, s: &str) -> Result<QPoly> {
    let tokens = tokenize(s)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        nvars,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = chars[start..i].iter().collect();
            out.push(Tok::Num(super::scalar::parse_rational(&txt)?));
        } else if c == 'x' {
            i += 1;
            let d = chars
                .get(i)
                .and_then(|d| d.to_digit(10))
                .ok_or_else(|| Error::Parse("bad variable".into()))?;
            out.push(Tok::Var(d as usize));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    if f.len() != 1 || f.degree() != Some(0) {
                        return Err(Error::Parse("division only by constants".into()));
                    }
                    let c = f.coeff(&Monomial::default());
                    acc = acc.scale(&(Rational::one() / c));
                }
                Some(Tok::Var(_)) | Some(Tok::Num(_)) | Some(Tok::Op('(')) => {
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let k: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| Error::Parse("bad exponent".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(Error::Parse("bad exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(QPoly::constant(self.nvars, n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                if v >= self.nvars {
                    return Err(Error::Parse(format!("variable x{v} out of range")));
                }
                Ok(QPoly::var(self.nvars, v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{int, rat};

    fn p4(s: &str) -> QPoly {
        parse_poly(4, s).unwrap()
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(&[2, 0, 0, 0]);
        let b = Monomial::new(&[1, 1, 0, 0]);
        let c = Monomial::new(&[0, 0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!(monomials_of_degree(4, 4).len(), 35);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        assert_eq!(monomials_of_degree(4, 12).len(), 455);
        let m = monomials_of_degree(3, 2);
        assert!(m.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn eval_examples() {
        let f = p4("x0*x1*x2*x3");
        assert_eq!(f.eval(&[int(1), int(1), int(1), int(1)]).unwrap(), int(1));
        let g = p4("x0^2 - x1^2");
        assert_eq!(g.eval(&[int(1), int(1), int(0), int(0)]).unwrap(), int(0));
        assert!(g.eval(&[int(1)]).is_err());
    }

    #[test]
    fn arithmetic_and_parse() {
        let f = p4("(x0 + x1)^2");
        assert_eq!(f, p4("x0^2 + 2*x0*x1 + x1^2"));
        assert_eq!(p4("x0/2 - 1/2*x0"), QPoly::zero(4));
        assert!(f.is_homogeneous());
        assert!(!p4("x0 + 1").is_homogeneous());
        assert_eq!(f.partial(0), p4("2*x0 + 2*x1"));
    }

    #[test]
    fn exact_division() {
        let a = p4("x1^2 - x2^2");
        let b = p4("x1 - x2");
        assert_eq!(a.exact_div(&b).unwrap(), p4("x1 + x2"));
        assert!(p4("x1^2 + x2^2").exact_div(&b).is_err());
        let f = p4("(x1 + 2*x2 - x3)*(x1^3 - 5*x2*x3^2 + x0^3)");
        let g = p4("x1^3 - 5*x2*x3^2 + x0^3");
        assert_eq!(f.exact_div(&g).unwrap(), p4("x1 + 2*x2 - x3"));
    }

    #[test]
    fn linear_substitution() {
        let f = p4("x0*x1");
        let l = vec![
            vec![int(1), int(1), int(0), int(0)],
            vec![int(1), int(-1), int(0), int(0)],
            vec![int(0), int(0), int(1), int(0)],
            vec![int(0), int(0), int(0), int(1)],
        ];
        assert_eq!(f.substitute_linear(&l), p4("x0^2 - x1^2"));
    }

    #[test]
    fn coefficient_split() {
        let f = p4("3*x0^2*x1 + x0*x2 - x3^2");
        let c = f.coefficients_in(0);
        assert_eq!(c.len(), 3);
        assert_eq!(c[2], p4("3*x1"));
        assert_eq!(c[1], p4("x2"));
        assert_eq!(c[0], p4("-x3^2"));
        assert_eq!(f.specialize(0, &rat(1, 2)), p4("3/4*x1 + 1/2*x2 - x3^2"));
        let g = p4("x1^2 - x3").drop_var(0).unwrap();
        assert_eq!(g, parse_poly(3, "x0^2 - x2").unwrap());
    }
}
