//! Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q²} ⊂ F_{p^{2k}}.
//!
//! Everything lives inside one ambient field F_{p^N}, N = lcm(2f, 2k), built from
//! the smallest primitive polynomial (coefficients read as base-p digits, c_0 least
//! significant). Every subfield F_{p^d} with d | N is the set of powers of
//! g^{(p^N-1)/(p^d-1)}, so the layers and their embeddings are compatible by
//! construction.

use serde_json::json;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Largest ambient field the tables are allowed to cover.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// An element of the ambient field: `None` is zero, `Some(j)` is g^j.
///
/// The derived order puts zero first and then follows generator powers, which is
/// the deterministic order used everywhere else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem(Option<u32>);

impl FFElem {
    pub const ZERO: FFElem = FFElem(None);
    pub const ONE: FFElem = FFElem(Some(0));

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    /// Discrete log with respect to the ambient generator.
    pub fn log(self) -> Option<u32> {
        self.0
    }
}

/// Named layers of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    Prime,
    Base,
    Quadratic,
    Lambda,
    Ambient,
}

#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    f: u32,
    k: u32,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Splits a prime power q = p^f with p odd.
pub fn split_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 3 {
        return Err(Error::BadPrime(q));
    }
    let p = prime_factors(q)[0];
    if p == 2 {
        return Err(Error::BadPrime(2));
    }
    let mut f = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        f += 1;
    }
    if m != 1 {
        return Err(Error::BadDegree(format!("{q} is not a prime power")));
    }
    Ok((p, f))
}

// Polynomials over F_p modulo a monic `modulus` of degree n (leading 1 implicit).
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let n = modulus.len();
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (n..2 * n).rev() {
        let t = prod[i];
        if t == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &c) in modulus.iter().enumerate() {
            prod[i - n + j] = (prod[i - n + j] + (p - c) * t) % p;
        }
    }
    prod.truncate(n);
    prod
}

fn poly_pow_x(e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let n = modulus.len();
    let mut result = vec![0u64; n];
    result[0] = 1;
    let mut base = vec![0u64; n];
    if n == 1 {
        base[0] = (p - modulus[0]) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

fn is_one(v: &[u64]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

fn smallest_primitive(p: u64, n: u32, order: u64) -> Vec<u64> {
    let factors = prime_factors(order);
    let count = p.pow(n);
    for m in 0..count {
        let mut coeffs = Vec::with_capacity(n as usize);
        let mut t = m;
        for _ in 0..n {
            coeffs.push(t % p);
            t /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        if !is_one(&poly_pow_x(order, &coeffs, p)) {
            continue;
        }
        if factors
            .iter()
            .all(|&l| !is_one(&poly_pow_x(order / l, &coeffs, p)))
        {
            return coeffs;
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

impl FieldTower {
    /// Builds the tower for q = p^f with λ-layer F_{p^{2k}}.
    pub fn new(p: u64, f: u32, k: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        if f == 0 || k == 0 {
            return Err(Error::BadDegree(format!("f = {f}, k = {k}")));
        }
        let degree = lcm(2 * f, 2 * k);
        let size = (p as u128).checked_pow(degree);
        if size.is_none_or(|s| s > MAX_FIELD_ORDER as u128) {
            return Err(Error::FieldTooLarge { p, degree });
        }
        let size = p.pow(degree);
        let order = size - 1;
        let modulus = smallest_primitive(p, degree, order);

        let n = degree as usize;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![NONE; size as usize];
        let mut state = vec![0u64; n];
        state[0] = 1;
        for j in 0..order as usize {
            let enc = encode(&state, p);
            assert_eq!(log[enc as usize], NONE, "generator order below p^N - 1");
            exp[j] = enc;
            log[enc as usize] = j as u32;
            let top = state[n - 1];
            for i in (1..n).rev() {
                state[i] = (state[i - 1] + (p - modulus[i]) * top) % p;
            }
            state[0] = ((p - modulus[0]) * top) % p;
        }
        assert!(is_one(&state), "generator order above p^N - 1");

        let mut zech = vec![NONE; order as usize];
        for j in 0..order as usize {
            let e = exp[j] as u64;
            let c0 = e % p;
            let shifted = e - c0 + (c0 + 1) % p;
            if shifted != 0 {
                zech[j] = log[shifted as usize];
            }
        }
        Ok(FieldTower {
            p,
            f,
            k,
            degree,
            order,
            modulus,
            exp,
            log,
            zech,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// q = p^f.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Order of the ambient multiplicative group.
    pub fn unit_order(&self) -> u64 {
        self.order
    }

    /// Coefficients c_0..c_{N-1} of the ambient modulus, leading 1 omitted.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn layer_degree(&self, layer: Layer) -> u32 {
        match layer {
            Layer::Prime => 1,
            Layer::Base => self.f,
            Layer::Quadratic => 2 * self.f,
            Layer::Lambda => 2 * self.k,
            Layer::Ambient => self.degree,
        }
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(Error::BadDegree(format!(
                "{d} does not divide the ambient degree {}",
                self.degree
            )));
        }
        Ok(())
    }

    fn stride(&self, d: u32) -> u64 {
        self.order / (self.p.pow(d) - 1)
    }

    /// Number of elements of F_{p^d}.
    pub fn subfield_size(&self, d: u32) -> u64 {
        self.p.pow(d)
    }

    /// The generator of F_{p^d}^× compatible with the ambient generator.
    pub fn generator(&self, d: u32) -> Result<FFElem> {
        self.check_degree(d)?;
        Ok(FFElem(Some(self.stride(d) as u32)))
    }

    pub fn in_subfield(&self, x: FFElem, d: u32) -> bool {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return false;
        }
        match x.0 {
            None => true,
            Some(j) => (j as u64).is_multiple_of(self.stride(d)),
        }
    }

    /// Degree of the smallest subfield containing `x`.
    pub fn degree_of(&self, x: FFElem) -> u32 {
        (1..=self.degree)
            .find(|&d| self.in_subfield(x, d))
            .unwrap_or(self.degree)
    }

    /// F_{p^d}^× in generator-power order.
    pub fn units(&self, d: u32) -> Result<Vec<FFElem>> {
        self.check_degree(d)?;
        let s = self.stride(d);
        Ok((0..self.p.pow(d) - 1)
            .map(|j| FFElem(Some((j * s) as u32)))
            .collect())
    }

    /// F_{p^d}: zero first, then generator powers.
    pub fn elements(&self, d: u32) -> Result<Vec<FFElem>> {
        let mut out = vec![FFElem::ZERO];
        out.extend(self.units(d)?);
        Ok(out)
    }

    /// Exponent of `x` with respect to the generator of F_{p^d}.
    pub fn layer_log(&self, x: FFElem, d: u32) -> Result<Option<u64>> {
        self.check_degree(d)?;
        if !self.in_subfield(x, d) {
            return Err(Error::WrongLayer(d));
        }
        Ok(x.0.map(|j| j as u64 / self.stride(d)))
    }

    pub fn from_int(&self, n: i64) -> FFElem {
        let c = n.rem_euclid(self.p as i64) as usize;
        if c == 0 {
            FFElem::ZERO
        } else {
            FFElem(Some(self.log[c]))
        }
    }

    /// The integer representative in [0, p) of an element of the prime field.
    pub fn to_fp(&self, x: FFElem) -> Option<u64> {
        match x.0 {
            None => Some(0),
            Some(j) => {
                let enc = self.exp[j as usize] as u64;
                (enc < self.p).then_some(enc)
            }
        }
    }

    /// Coordinates in the polynomial basis 1, g, ..., g^{N-1}.
    pub fn to_coeffs(&self, x: FFElem) -> Vec<u64> {
        let mut enc = x.0.map_or(0, |j| self.exp[j as usize] as u64);
        (0..self.degree)
            .map(|_| {
                let c = enc % self.p;
                enc /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FFElem> {
        if coeffs.len() != self.degree as usize {
            return Err(Error::BadDegree(format!(
                "expected {} coefficients, got {}",
                self.degree,
                coeffs.len()
            )));
        }
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        let enc = encode(&reduced, self.p);
        Ok(if enc == 0 {
            FFElem::ZERO
        } else {
            FFElem(Some(self.log[enc as usize]))
        })
    }

    pub fn add(&self, a: FFElem, b: FFElem) -> FFElem {
        match (a.0, b.0) {
            (None, _) => b,
            (_, None) => a,
            (Some(i), Some(j)) => {
                let d = (j as u64 + self.order - i as u64) % self.order;
                let z = self.zech[d as usize];
                if z == NONE {
                    FFElem::ZERO
                } else {
                    FFElem(Some(((i as u64 + z as u64) % self.order) as u32))
                }
            }
        }
    }

    pub fn neg(&self, a: FFElem) -> FFElem {
        a.0.map_or(FFElem::ZERO, |i| {
            FFElem(Some(((i as u64 + self.order / 2) % self.order) as u32))
        })
    }

    pub fn sub(&self, a: FFElem, b: FFElem) -> FFElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FFElem, b: FFElem) -> FFElem {
        match (a.0, b.0) {
            (Some(i), Some(j)) => FFElem(Some(((i as u64 + j as u64) % self.order) as u32)),
            _ => FFElem::ZERO,
        }
    }

    pub fn inv(&self, a: FFElem) -> Result<FFElem> {
        match a.0 {
            None => Err(Error::DivisionByZero),
            Some(i) => Ok(FFElem(Some(((self.order - i as u64) % self.order) as u32))),
        }
    }

    pub fn div(&self, a: FFElem, b: FFElem) -> Result<FFElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FFElem, e: u64) -> FFElem {
        match a.0 {
            None if e == 0 => FFElem::ONE,
            None => FFElem::ZERO,
            Some(i) => FFElem(Some(((i as u128 * e as u128) % self.order as u128) as u32)),
        }
    }

    /// Signed power; negative exponents of zero are an error.
    pub fn powi(&self, a: FFElem, e: i64) -> Result<FFElem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn sum<I: IntoIterator<Item = FFElem>>(&self, it: I) -> FFElem {
        it.into_iter().fold(FFElem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn multiplicative_order(&self, a: FFElem) -> Result<u64> {
        match a.0 {
            None => Err(Error::DivisionByZero),
            Some(i) => Ok(self.order / gcd(i as u64, self.order)),
        }
    }

    /// The absolute Frobenius x ↦ x^p.
    pub fn frobenius(&self, a: FFElem) -> FFElem {
        self.pow(a, self.p)
    }

    /// Conjugation x ↦ x^q of F_{q²}/F_q.
    pub fn conj(&self, a: FFElem) -> Result<FFElem> {
        let d = self.layer_degree(Layer::Quadratic);
        if !self.in_subfield(a, d) {
            return Err(Error::WrongLayer(d));
        }
        Ok(self.pow(a, self.q()))
    }

    /// Norm F_{q²} → F_q.
    pub fn norm(&self, a: FFElem) -> Result<FFElem> {
        let c = self.conj(a)?;
        Ok(self.mul(a, c))
    }

    /// Trace F_{q²} → F_q.
    pub fn trace(&self, a: FFElem) -> Result<FFElem> {
        let c = self.conj(a)?;
        Ok(self.add(a, c))
    }

    /// First square root in generator-power order, if one exists in the ambient field.
    pub fn sqrt(&self, a: FFElem) -> Option<FFElem> {
        match a.0 {
            None => Some(FFElem::ZERO),
            Some(j) if j % 2 == 0 => Some(FFElem(Some(j / 2))),
            Some(_) => None,
        }
    }

    /// The smallest nonsquare of F_q in generator-power order.
    pub fn epsilon(&self) -> FFElem {
        let half = (self.q() - 1) / 2;
        self.units(self.f)
            .expect("f divides the ambient degree")
            .into_iter()
            .find(|&x| self.pow(x, half) != FFElem::ONE)
            .expect("F_q has nonsquares for odd q")
    }

    /// The first square root of ε in F_{q²}, in generator-power order.
    pub fn sqrt_epsilon(&self) -> FFElem {
        let eps = self.epsilon();
        self.units(2 * self.f)
            .expect("2f divides the ambient degree")
            .into_iter()
            .find(|&y| self.mul(y, y) == eps)
            .expect("ε is a square in F_{q²}")
    }

    /// Minimal polynomial over F_p of the generator of F_{p^d}, lowest degree first.
    pub fn minimal_polynomial(&self, d: u32) -> Result<Vec<u64>> {
        let g = self.generator(d)?;
        let mut poly = vec![FFElem::ONE];
        let mut root = g;
        for _ in 0..d {
            let mut next = vec![FFElem::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, root));
            }
            poly = next;
            root = self.frobenius(root);
        }
        poly.into_iter()
            .map(|c| {
                self.to_fp(c)
                    .ok_or(Error::Inconsistent("minimal polynomial".into()))
            })
            .collect()
    }

    /// Renders `x` as "0", "1" or "{sym}^j" relative to the generator of F_{p^d}.
    pub fn format(&self, x: FFElem, d: u32, sym: &str) -> Result<String> {
        Ok(match self.layer_log(x, d)? {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(j) => format!("{sym}^{j}"),
        })
    }

    /// Inverse of [`FieldTower::format`]; a bare integer is read in the prime field.
    pub fn parse(&self, s: &str, d: u32, sym: &str) -> Result<FFElem> {
        self.check_degree(d)?;
        let s = s.trim();
        if let Some(rest) = s.strip_prefix(sym).and_then(|r| r.strip_prefix('^')) {
            let j: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            return Ok(self.pow(self.generator(d)?, j));
        }
        if s == sym {
            return self.generator(d);
        }
        let n: i64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("cannot read field element {s:?}")))?;
        Ok(self.from_int(n))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut modulus = self.modulus.clone();
        modulus.push(1);
        json!({
            "p": self.p,
            "f": self.f,
            "k": self.k,
            "q": self.q(),
            "degree": self.degree,
            "modulus": modulus,
        })
    }
}

fn encode(coeffs: &[u64], p: u64) -> u32 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a as u64, b as u64) as u32 * b
}
