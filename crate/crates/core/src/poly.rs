//! Polynomials.
//!
//! [`Poly`] is the general sparse multivariate type used for input and
//! display. [`Form`] is a dense homogeneous ternary form in `x, y, z`, which
//! is what the curve machinery computes with: coefficients are stored in
//! graded-lex descending order (`x^D, x^{D-1}y, x^{D-1}z, x^{D-2}y^2, ...`).
//! [`UniPoly`] is a dense univariate polynomial for line restrictions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u32; 4]>);

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Poly<K: Field> {
    field: K,
    vars: Vec<String>,
    terms: BTreeMap<Monomial, K::Elem>,
}

impl<K: Field> Poly<K> {
    pub fn zero(field: &K, vars: &[&str]) -> Self {
        Poly { field: field.clone(), vars: vars.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K::Elem)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: K::Elem) {
        assert_eq!(m.0.len(), self.vars.len());
        let k = &self.field;
        let v = match self.terms.remove(&m) {
            Some(old) => k.add(&old, &c),
            None => c,
        };
        if !k.is_zero(&v) {
            self.terms.insert(m, v);
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn eval(&self, point: &[K::Elem]) -> K::Elem {
        let k = &self.field;
        self.terms.iter().fold(k.zero(), |acc, (m, c)| {
            let t = m.0.iter().zip(point).fold(c.clone(), |t, (&e, x)| k.mul(&t, &k.pow(x, e as u64)));
            k.add(&acc, &t)
        })
    }

    pub fn mul(&self, other: &Poly<K>) -> Poly<K> {
        let k = &self.field;
        let mut out = Poly { field: k.clone(), vars: self.vars.clone(), terms: BTreeMap::new() };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                out.add_term(m, k.mul(ca, cb));
            }
        }
        out
    }

    /// Parses a polynomial in the variables `vars`, e.g. `x^6+y^6-3*x*y*z^4`.
    pub fn parse(field: &K, vars: &[&str], src: &str) -> Result<Self> {
        Parser { field, vars, src: src.as_bytes(), pos: 0 }.poly()
    }

    /// Converts a homogeneous polynomial in exactly three variables to a dense form.
    pub fn to_form(&self) -> Result<Form<K>> {
        assert_eq!(self.vars.len(), 3, "forms are ternary");
        let d = match self.homogeneous_degree() {
            Some(d) => d,
            None if self.is_zero() => 0,
            None => return Err(Error::NotHomogeneous),
        };
        let mut f = Form::zero(&self.field, d);
        for (m, c) in &self.terms {
            let i = monomial_index(d, m.0[0], m.0[1]);
            f.coeffs[i] = c.clone();
        }
        Ok(f)
    }

    /// The ternary form obtained by substituting a linear form for each variable.
    pub fn substitute_linear(&self, images: &[Form<K>]) -> Result<Form<K>> {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        assert!(images.iter().all(|l| l.degree() == 1), "images must be linear forms");
        let k = &self.field;
        let d = match self.homogeneous_degree() {
            Some(d) => d,
            None if self.is_zero() => 0,
            None => return Err(Error::NotHomogeneous),
        };
        let mut acc = Form::zero(k, d);
        for (m, c) in &self.terms {
            let mut t = Form::from_coeffs(k, 0, vec![c.clone()]);
            for (l, &e) in images.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t = t.mul(l);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = &self.field;
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(&self.vars)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let cs = k.format_elem(c);
            match (factors.is_empty(), k.is_one(c)) {
                (true, _) => write!(f, "{cs}")?,
                (false, true) => write!(f, "{}", factors.join("*"))?,
                (false, false) => write!(f, "{cs}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

struct Parser<'a, K: Field> {
    field: &'a K,
    vars: &'a [&'a str],
    src: &'a [u8],
    pos: usize,
}

impl<K: Field> Parser<'_, K> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn poly(&mut self) -> Result<Poly<K>> {
        let mut p = Poly::zero(self.field, self.vars);
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        while let Some(c) = self.peek() {
            let negate = match c {
                b'+' => {
                    self.pos += 1;
                    false
                }
                b'-' => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(self.err(format!("unexpected `{}`", c as char))),
            };
            first = false;
            let (m, mut coeff) = self.term()?;
            if negate {
                coeff = self.field.neg(&coeff);
            }
            p.add_term(m, coeff);
        }
        Ok(p)
    }

    fn term(&mut self) -> Result<(Monomial, K::Elem)> {
        let k = self.field;
        let mut coeff = k.one();
        let mut exps: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.vars.len());
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    let mut v = k.parse_elem(&n)?;
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let d = self.integer()?;
                        let d = k.parse_elem(&d)?;
                        v = k.div(&v, &d).ok_or_else(|| self.err("zero denominator"))?;
                    }
                    coeff = k.mul(&coeff, &v);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    let idx = self
                        .vars
                        .iter()
                        .position(|v| self.src[self.pos..].starts_with(v.as_bytes()))
                        .ok_or_else(|| self.err(format!("unknown variable at `{}`", c as char)))?;
                    self.pos += self.vars[idx].len();
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        e = self.integer()?.parse().map_err(|_| Error::Parse { pos: start, msg: "bad exponent".into() })?;
                    }
                    exps[idx] += e;
                }
                _ => return Err(self.err("expected coefficient or variable")),
            }
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() => {}
                _ => break,
            }
        }
        Ok((Monomial(exps), coeff))
    }
}

/// Number of ternary monomials of degree `d`.
#[inline]
pub fn num_monomials(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Index of `x^a y^b z^(d-a-b)` in graded-lex descending order.
#[inline]
pub fn monomial_index(d: u32, a: u32, b: u32) -> usize {
    let (d, a, b) = (d as usize, a as usize, b as usize);
    (d - a) * (d - a + 1) / 2 + (d - a - b)
}

/// All exponent triples of degree `d` in storage order.
pub fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(num_monomials(d));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Dense homogeneous form in `x, y, z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<K: Field> {
    field: K,
    degree: u32,
    coeffs: Vec<K::Elem>,
}

impl<K: Field> fmt::Debug for Form<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({})", self.to_poly())
    }
}

impl<K: Field> Form<K> {
    pub fn zero(field: &K, degree: u32) -> Self {
        Form { field: field.clone(), degree, coeffs: vec![field.zero(); num_monomials(degree)] }
    }

    pub fn from_coeffs(field: &K, degree: u32, coeffs: Vec<K::Elem>) -> Self {
        assert_eq!(coeffs.len(), num_monomials(degree));
        Form { field: field.clone(), degree, coeffs }
    }

    pub fn monomial(field: &K, e: [u32; 3]) -> Self {
        let d = e[0] + e[1] + e[2];
        let mut f = Self::zero(field, d);
        f.coeffs[monomial_index(d, e[0], e[1])] = field.one();
        f
    }

    /// The linear form `a x + b y + c z`.
    pub fn linear(field: &K, abc: [K::Elem; 3]) -> Self {
        let [a, b, c] = abc;
        Form { field: field.clone(), degree: 1, coeffs: vec![a, b, c] }
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }
    pub fn into_coeffs(self) -> Vec<K::Elem> {
        self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    /// Nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], &K::Elem)> + '_ {
        monomials(self.degree).into_iter().zip(&self.coeffs).filter(|(_, c)| !self.field.is_zero(c))
    }

    pub fn add(&self, other: &Form<K>) -> Form<K> {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let k = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| k.add(a, b)).collect();
        Form { field: k.clone(), degree: self.degree, coeffs }
    }

    pub fn sub(&self, other: &Form<K>) -> Form<K> {
        assert_eq!(self.degree, other.degree, "subtracting forms of different degree");
        let k = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| k.sub(a, b)).collect();
        Form { field: k.clone(), degree: self.degree, coeffs }
    }

    pub fn scale(&self, c: &K::Elem) -> Form<K> {
        let k = &self.field;
        Form { field: k.clone(), degree: self.degree, coeffs: self.coeffs.iter().map(|a| k.mul(c, a)).collect() }
    }

    pub fn mul(&self, other: &Form<K>) -> Form<K> {
        let k = &self.field;
        let d = self.degree + other.degree;
        let mut out = vec![k.zero(); num_monomials(d)];
        let ta: Vec<_> = self.terms().collect();
        let tb: Vec<_> = other.terms().collect();
        for (ea, ca) in &ta {
            for (eb, cb) in &tb {
                let i = monomial_index(d, ea[0] + eb[0], ea[1] + eb[1]);
                out[i] = k.mul_add(&out[i], ca, cb);
            }
        }
        Form { field: k.clone(), degree: d, coeffs: out }
    }

    /// Linear combination `Σ c_i f_i` of forms of equal degree.
    pub fn combination(field: &K, degree: u32, coeffs: &[K::Elem], forms: &[Form<K>]) -> Form<K> {
        let mut out = vec![field.zero(); num_monomials(degree)];
        for (c, f) in coeffs.iter().zip(forms) {
            if field.is_zero(c) {
                continue;
            }
            assert_eq!(f.degree, degree);
            for (o, a) in out.iter_mut().zip(&f.coeffs) {
                *o = field.mul_add(o, c, a);
            }
        }
        Form { field: field.clone(), degree, coeffs: out }
    }

    pub fn eval(&self, p: &[K::Elem; 3]) -> K::Elem {
        let k = &self.field;
        let d = self.degree as u64;
        let px: Vec<K::Elem> = (0..=d).map(|e| k.pow(&p[0], e)).collect();
        let py: Vec<K::Elem> = (0..=d).map(|e| k.pow(&p[1], e)).collect();
        let pz: Vec<K::Elem> = (0..=d).map(|e| k.pow(&p[2], e)).collect();
        self.terms().fold(k.zero(), |acc, (e, c)| {
            let t = k.mul(&k.mul(c, &px[e[0] as usize]), &k.mul(&py[e[1] as usize], &pz[e[2] as usize]));
            k.add(&acc, &t)
        })
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, var: usize) -> Form<K> {
        let k = &self.field;
        if self.degree == 0 {
            return Form::zero(k, 0);
        }
        let d = self.degree - 1;
        let mut out = vec![k.zero(); num_monomials(d)];
        for (e, c) in self.terms() {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e;
            e2[var] -= 1;
            let i = monomial_index(d, e2[0], e2[1]);
            out[i] = k.add(&out[i], &k.mul(c, &k.from_i64(e[var] as i64)));
        }
        Form { field: k.clone(), degree: d, coeffs: out }
    }

    /// Restriction to the parametrized line `p + u v`, as a polynomial in `u`.
    pub fn restrict_to_line(&self, p: &[K::Elem; 3], v: &[K::Elem; 3]) -> UniPoly<K> {
        let k = &self.field;
        let lin = |i: usize| UniPoly::new(k, vec![p[i].clone(), v[i].clone()]);
        let (lx, ly, lz) = (lin(0), lin(1), lin(2));
        let d = self.degree as usize;
        let pows = |l: &UniPoly<K>| {
            let mut out = vec![UniPoly::new(k, vec![k.one()])];
            for i in 0..d {
                let next = out[i].mul(l);
                out.push(next);
            }
            out
        };
        let (px, py, pz) = (pows(&lx), pows(&ly), pows(&lz));
        let mut acc = UniPoly::new(k, vec![]);
        for (e, c) in self.terms() {
            let t = px[e[0] as usize].mul(&py[e[1] as usize]).mul(&pz[e[2] as usize]).scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    pub fn to_poly(&self) -> Poly<K> {
        let mut p = Poly::zero(&self.field, &["x", "y", "z"]);
        for (e, c) in self.terms() {
            p.add_term(Monomial::new(&e), c.clone());
        }
        p
    }

    /// Exact division by `divisor`, `None` if it does not divide.
    pub fn div_exact(&self, divisor: &Form<K>) -> Option<Form<K>> {
        let k = &self.field;
        if self.is_zero() {
            return Some(Form::zero(k, self.degree.saturating_sub(divisor.degree)));
        }
        if divisor.degree > self.degree {
            return None;
        }
        let (lead_idx, lead_exp, lead_c) = divisor.leading_term()?;
        let _ = lead_idx;
        let lead_inv = k.inv(&lead_c).expect("nonzero lead");
        let qd = self.degree - divisor.degree;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![k.zero(); num_monomials(qd)];
        let dterms: Vec<([u32; 3], K::Elem)> = divisor.terms().map(|(e, c)| (e, c.clone())).collect();
        for (i, e) in monomials(self.degree).into_iter().enumerate() {
            if k.is_zero(&rem[i]) {
                continue;
            }
            if !(0..3).all(|j| e[j] >= lead_exp[j]) {
                return None;
            }
            let qe = [e[0] - lead_exp[0], e[1] - lead_exp[1], e[2] - lead_exp[2]];
            let c = k.mul(&rem[i], &lead_inv);
            let nc = k.neg(&c);
            for (de, dc) in &dterms {
                let j = monomial_index(self.degree, qe[0] + de[0], qe[1] + de[1]);
                rem[j] = k.mul_add(&rem[j], &nc, dc);
            }
            quot[monomial_index(qd, qe[0], qe[1])] = c;
        }
        Some(Form { field: k.clone(), degree: qd, coeffs: quot })
    }

    /// Largest nonzero term in graded-lex order: `(index, exponents, coefficient)`.
    pub fn leading_term(&self) -> Option<(usize, [u32; 3], K::Elem)> {
        monomials(self.degree)
            .into_iter()
            .enumerate()
            .find(|(i, _)| !self.field.is_zero(&self.coeffs[*i]))
            .map(|(i, e)| (i, e, self.coeffs[i].clone()))
    }
}

/// Dense univariate polynomial, coefficients from low to high degree.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<K: Field> {
    field: K,
    coeffs: Vec<K::Elem>,
}

impl<K: Field> fmt::Debug for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| self.field.format_elem(c)).collect();
        write!(f, "UniPoly[{}]", cs.join(", "))
    }
}

impl<K: Field> UniPoly<K> {
    pub fn new(field: &K, mut coeffs: Vec<K::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, u: &K::Elem) -> K::Elem {
        let k = &self.field;
        self.coeffs.iter().rev().fold(k.zero(), |acc, c| k.mul_add(c, &acc, u))
    }

    pub fn add(&self, other: &UniPoly<K>) -> UniPoly<K> {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = k.zero();
        let c = (0..n)
            .map(|i| k.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        UniPoly::new(k, c)
    }

    pub fn scale(&self, c: &K::Elem) -> UniPoly<K> {
        let k = &self.field;
        UniPoly::new(k, self.coeffs.iter().map(|a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &UniPoly<K>) -> UniPoly<K> {
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(k, vec![]);
        }
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.mul_add(&out[i + j], a, b);
            }
        }
        UniPoly::new(k, out)
    }

    pub fn derivative(&self) -> UniPoly<K> {
        let k = &self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, a)| k.mul(a, &k.from_i64(i as i64))).collect();
        UniPoly::new(k, c)
    }

    /// Quotient and remainder.
    pub fn divrem(&self, divisor: &UniPoly<K>) -> (UniPoly<K>, UniPoly<K>) {
        let k = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = k.inv(&divisor.coeffs[dd]).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::new(k, vec![]), self.clone());
        }
        let mut quot = vec![k.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = k.mul(&rem[i], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            let nc = k.neg(&c);
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = k.mul_add(&rem[i - dd + j], &nc, b);
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(k, quot), UniPoly::new(k, rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly<K>) -> UniPoly<K> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> UniPoly<K> {
        match self.coeffs.last() {
            Some(lead) => self.scale(&self.field.inv(lead).expect("nonzero lead")),
            None => self.clone(),
        }
    }

    /// Squarefree test via `gcd(f, f') = 1`; requires degree below the characteristic.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn k() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn substitution_matches_expansion() {
        let k = k();
        let p = Poly::parse(&k, &["x", "y", "a"], "a^2*x - 3*y^3").unwrap();
        // a = x + 2z
        let images = [Form::linear(&k, [1, 0, 0]), Form::linear(&k, [0, 1, 0]), Form::linear(&k, [1, 0, 2])];
        let direct = Poly::parse(&k, &["x", "y", "z"], "x^3 + 4*x^2*z + 4*x*z^2 - 3*y^3").unwrap().to_form().unwrap();
        assert_eq!(p.substitute_linear(&images).unwrap(), direct);
        let bad = Poly::parse(&k, &["x", "y", "a"], "x + y^2").unwrap();
        assert_eq!(bad.substitute_linear(&images), Err(Error::NotHomogeneous));
    }

    #[test]
    fn parse_fermat_and_display() {
        let p = Poly::parse(&k(), &["x", "y", "z"], "x^6 + y^6 + z^6").unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.homogeneous_degree(), Some(6));
        assert_eq!(p.to_string(), "x^6+y^6+z^6");
    }

    #[test]
    fn parse_coefficients_and_implicit_products() {
        let p = Poly::parse(&k(), &["x", "y", "z"], "3x^2y - 2*z^3 + 1/2 x y z").unwrap();
        assert_eq!(p.num_terms(), 3);
        let q = Poly::parse(&Rationals, &["x", "y", "z"], "1/2*x*y*z-x").unwrap();
        assert_eq!(q.homogeneous_degree(), None);
    }

    #[test]
    fn parse_error_carries_position() {
        let err = Poly::parse(&k(), &["x", "y", "z"], "x^6 + w^6").unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 6, .. }), "{err:?}");
        assert!(Poly::parse(&k(), &["x", "y", "z"], "x^6 ++ y").is_err());
        assert!(Poly::parse(&k(), &["x", "y", "z"], "").is_err());
    }

    #[test]
    fn monomial_indexing_is_consistent() {
        for d in 0..8 {
            for (i, e) in monomials(d).into_iter().enumerate() {
                assert_eq!(monomial_index(d, e[0], e[1]), i);
            }
            assert_eq!(monomials(d).len(), num_monomials(d));
        }
    }

    #[test]
    fn exact_division() {
        let k = k();
        let f = Poly::parse(&k, &["x", "y", "z"], "x^2+y*z").unwrap().to_form().unwrap();
        let g = Poly::parse(&k, &["x", "y", "z"], "x-3*z").unwrap().to_form().unwrap();
        let fg = f.mul(&g);
        assert_eq!(fg.div_exact(&f).unwrap(), g);
        assert!(fg.add(&Form::monomial(&k, [0, 3, 0])).div_exact(&f).is_none());
    }

    #[test]
    fn line_restriction_matches_pointwise_evaluation() {
        let k = k();
        let f = Poly::parse(&k, &["x", "y", "z"], "x^3+2*x*y*z-y^2*z+5*z^3").unwrap().to_form().unwrap();
        let p = [3, 4, 1];
        let v = [1, 7, 2];
        let r = f.restrict_to_line(&p, &v);
        for u in 0..10u64 {
            let pt = [k.add(&p[0], &k.mul(&u, &v[0])), k.add(&p[1], &k.mul(&u, &v[1])), k.add(&p[2], &k.mul(&u, &v[2]))];
            assert_eq!(r.eval(&u), f.eval(&pt));
        }
    }

    #[test]
    fn squarefree_detection() {
        let k = k();
        let a = UniPoly::new(&k, vec![k.from_i64(-1), 0, 1]); // u^2 - 1
        assert!(a.is_squarefree());
        let b = a.mul(&UniPoly::new(&k, vec![1, 1])); // (u-1)(u+1)^2
        assert!(!b.is_squarefree());
    }

    proptest! {
        #[test]
        fn euler_identity(cs in prop::collection::vec(0u64..101, 10)) {
            // x F_x + y F_y + z F_z = d F
            let k = k();
            let f = Form::from_coeffs(&k, 3, cs);
            let x = Form::monomial(&k, [1, 0, 0]);
            let y = Form::monomial(&k, [0, 1, 0]);
            let z = Form::monomial(&k, [0, 0, 1]);
            let lhs = x.mul(&f.partial(0)).add(&y.mul(&f.partial(1))).add(&z.mul(&f.partial(2)));
            prop_assert_eq!(lhs, f.scale(&3));
        }

        #[test]
        fn form_product_is_commutative_and_evaluates(a in prop::collection::vec(0u64..101, 6), b in prop::collection::vec(0u64..101, 10), pt in prop::array::uniform3(0u64..101)) {
            let k = k();
            let fa = Form::from_coeffs(&k, 2, a);
            let fb = Form::from_coeffs(&k, 3, b);
            prop_assert_eq!(fa.mul(&fb), fb.mul(&fa));
            prop_assert_eq!(fa.mul(&fb).eval(&pt), k.mul(&fa.eval(&pt), &fb.eval(&pt)));
        }

        #[test]
        fn unipoly_divrem_reconstructs(a in prop::collection::vec(0u64..101, 1..8), b in prop::collection::vec(0u64..101, 1..5)) {
            let k = k();
            let pa = UniPoly::new(&k, a);
            let pb = UniPoly::new(&k, b);
            prop_assume!(!pb.is_zero());
            let (q, r) = pa.divrem(&pb);
            prop_assert_eq!(q.mul(&pb).add(&r), pa);
            prop_assert!(r.degree().map_or(true, |d| d < pb.degree().unwrap()));
        }
    }
}
