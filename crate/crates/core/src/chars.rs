//! Tamely ramified characters μ_λ·ω_n^r and characters of U(1).
//!
//! A character of Q_{q^n}^× (or of the Weil group, via class field theory) is
//! stored as the pair (λ, r mod q^n - 1): λ is the value on a uniformizer, r the
//! exponent of the fundamental character on the units.

use serde_json::json;

use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower, Layer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultChar {
    pub n: u32,
    pub q: u64,
    pub lambda: FFElem,
    pub r: u64,
}

/// A character of U(1) ≅ μ_{q+1}: a ↦ a^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct U1Char {
    pub q: u64,
    pub k: u64,
}

impl MultChar {
    pub fn new(n: u32, q: u64, lambda: FFElem, r: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDegree("n = 0".into()));
        }
        if lambda.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = modulus(n, q);
        Ok(MultChar {
            n,
            q,
            lambda,
            r: r.rem_euclid(m as i64) as u64,
        })
    }

    /// ω_n^r with trivial unramified part.
    pub fn omega(n: u32, q: u64, r: i64) -> Result<Self> {
        Self::new(n, q, FFElem::ONE, r)
    }

    pub fn modulus(&self) -> u64 {
        modulus(self.n, self.q)
    }

    pub fn to_json(&self, tower: &FieldTower) -> Result<serde_json::Value> {
        Ok(json!({
            "n": self.n,
            "lambda": tower.format(self.lambda, tower.layer_degree(Layer::Lambda), "g")?,
            "r": self.r,
        }))
    }
}

fn modulus(n: u32, q: u64) -> u64 {
    q.pow(n) - 1
}

impl U1Char {
    pub fn new(q: u64, k: i64) -> Self {
        U1Char {
            q,
            k: k.rem_euclid(q as i64 + 1) as u64,
        }
    }
}

pub fn char_mul(tower: &FieldTower, a: &MultChar, b: &MultChar) -> Result<MultChar> {
    if a.n != b.n || a.q != b.q {
        return Err(Error::IncompatibleCharacters(format!(
            "degrees ({}, {}) and ({}, {})",
            a.n, a.q, b.n, b.q
        )));
    }
    Ok(MultChar {
        n: a.n,
        q: a.q,
        lambda: tower.mul(a.lambda, b.lambda),
        r: (a.r + b.r) % a.modulus(),
    })
}

pub fn char_inv(tower: &FieldTower, a: &MultChar) -> MultChar {
    MultChar {
        lambda: tower.inv(a.lambda).expect("λ is nonzero"),
        r: (a.modulus() - a.r) % a.modulus(),
        ..*a
    }
}

/// Conjugation of the character by Frobenius: ω_n^r ↦ ω_n^{qr}.
pub fn frobenius_twist(a: &MultChar) -> MultChar {
    MultChar {
        r: ((a.r as u128 * a.q as u128) % a.modulus() as u128) as u64,
        ..*a
    }
}

/// Restriction of a character of E^× (n = 2) to F^× on the units.
pub fn restrict_e_to_f(a: &MultChar) -> Result<MultChar> {
    if a.n != 2 {
        return Err(Error::IncompatibleCharacters(
            "restriction needs a character of the quadratic layer".into(),
        ));
    }
    Ok(MultChar {
        n: 1,
        q: a.q,
        lambda: a.lambda,
        r: a.r % (a.q - 1),
    })
}

/// The character of U(1) whose composite with a ↦ ā/a is `a`, if there is one.
///
/// This happens exactly when λ = 1 and (q-1) | r, with k = r/(q-1). Note that
/// ω^{(q-1)k} on the torus is the restriction of ω^{-k}∘det.
pub fn extension_to_g(a: &MultChar) -> Result<Option<U1Char>> {
    if a.n != 2 {
        return Err(Error::IncompatibleCharacters(
            "extension needs a character of the quadratic layer".into(),
        ));
    }
    if a.lambda != FFElem::ONE || !a.r.is_multiple_of(a.q - 1) {
        return Ok(None);
    }
    Ok(Some(U1Char::new(a.q, (a.r / (a.q - 1)) as i64)))
}

pub fn extends_to_g(a: &MultChar) -> Result<bool> {
    Ok(extension_to_g(a)?.is_some())
}

/// The representative in [0, p-1] of m modulo p+1.
pub fn bracket(m: i64, p: u64) -> Result<u64> {
    let v = m.rem_euclid(p as i64 + 1) as u64;
    if v == p {
        Err(Error::BracketUndefined(m))
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_at_p3() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let a = MultChar::omega(2, 3, 5).unwrap();
        let b = MultChar::omega(2, 3, 6).unwrap();
        assert_eq!(char_mul(&t, &a, &b).unwrap().r, 3);
        let c = MultChar::omega(1, 3, 1).unwrap();
        assert!(char_mul(&t, &a, &c).is_err());
    }

    #[test]
    fn frobenius_and_restriction() {
        let a = MultChar::omega(2, 3, 1).unwrap();
        assert_eq!(frobenius_twist(&a).r, 3);
        assert_eq!(frobenius_twist(&frobenius_twist(&a)), a);
        assert_eq!(
            restrict_e_to_f(&MultChar::omega(2, 3, 5).unwrap())
                .unwrap()
                .r,
            1
        );
    }

    #[test]
    fn extension_criterion() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let a = MultChar::omega(2, 3, 4).unwrap();
        assert_eq!(extension_to_g(&a).unwrap(), Some(U1Char::new(3, 2)));
        assert!(!extends_to_g(&MultChar::omega(2, 3, 3).unwrap()).unwrap());
        let twisted = MultChar::new(2, 3, t.from_int(2), 4).unwrap();
        assert!(!extends_to_g(&twisted).unwrap());
    }

    #[test]
    fn extension_matches_brute_force_on_u1() {
        // A character ω_2^r of F_{q²}^× factors through a ↦ ā/a iff it is trivial on
        // F_q^× = ker(a ↦ ā/a); then it agrees with b ↦ b^k on U(1).
        for (p, f) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let t = FieldTower::new(p, f, 1).unwrap();
            let q = t.q();
            let units = t.units(2 * f).unwrap();
            let z = t.generator(2 * f).unwrap();
            for r in 0..(q * q - 1) {
                let chi = |x: FFElem| {
                    let j = t.layer_log(x, 2 * f).unwrap().unwrap();
                    t.pow(z, j * r)
                };
                let trivial_on_base = t
                    .units(f)
                    .unwrap()
                    .into_iter()
                    .all(|x| chi(x) == FFElem::ONE);
                let a = MultChar::omega(2, q, r as i64).unwrap();
                let ext = extension_to_g(&a).unwrap();
                assert_eq!(ext.is_some(), trivial_on_base);
                if let Some(e) = ext {
                    for &x in &units {
                        let ratio = t.div(t.conj(x).unwrap(), x).unwrap();
                        let lhs = t.pow(z, t.layer_log(ratio, 2 * f).unwrap().unwrap() * e.k);
                        assert_eq!(lhs, chi(x), "q={q} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_values() {
        assert_eq!(bracket(-2, 3).unwrap(), 2);
        assert_eq!(bracket(0, 3).unwrap(), 0);
        assert_eq!(bracket(5, 3).unwrap(), 1);
        assert_eq!(bracket(-1, 5).unwrap_err(), Error::BracketUndefined(-1));
    }
}
