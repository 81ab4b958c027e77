//! Brute-force equivalence of G-parameters: search for g ∈ GL₂(F̄_p) with
//! g D(h) g⁻¹ = D'(h) on the tame generators and g A Θ(g)⁻¹ = A'.
//!
//! Nothing here consults the closed-form index rules. The characters are evaluated
//! on a generator σ of tame inertia and on Φ = Fr_p², and the search only looks at
//! the resulting matrices. Since Θ(g) = g / det g, the Frobenius constraint reads
//! g A adj(g) = A'.

use crate::chars::MultChar;
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower};
use crate::linalg::{nullspace, Mat2};

use super::{param_data, LGroup, LParam, ParamData};

/// Values of a parameter at Fr_p, σ and Φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamImage {
    pub frobenius: Mat2,
    pub sigma: Mat2,
    pub phi: Mat2,
}

impl ParamImage {
    pub fn evaluate(t: &FieldTower, d: &ParamData) -> Result<ParamImage> {
        let zeta = t.generator(2)?;
        let at = |c: &MultChar| -> Result<(FFElem, FFElem)> {
            if c.n != 2 || c.q != t.p() {
                return Err(Error::IncompatibleCharacters(
                    "expected characters of the quadratic extension of Q_p".into(),
                ));
            }
            Ok((t.pow(zeta, c.r), c.lambda))
        };
        let (s1, f1) = at(&d.restriction[0])?;
        let (s2, f2) = at(&d.restriction[1])?;
        Ok(ParamImage {
            frobenius: d.frobenius,
            sigma: Mat2::diag(s1, s2),
            phi: Mat2::diag(f1, f2),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotEquivalent,
    /// The witness is absent when it needs a square root outside the ambient field.
    Equivalent(Option<Mat2>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

fn quad(t: &FieldTower, v: &[FFElem]) -> FFElem {
    t.sub(t.mul(v[0], v[3]), t.mul(v[1], v[2]))
}

/// Equal restriction characters: any g commutes with the scalar restriction, and
/// the Frobenius constraint becomes X (cA) = A' X with det X = c, c² = det A'/det A.
fn scalar_case(t: &FieldTower, a: &Mat2, b: &Mat2) -> Result<Verdict> {
    let big_d = t.div(b.det(t), a.det(t))?;
    let Some(root) = t.sqrt(big_d) else {
        let zero = |m: &Mat2| m.trace(t).is_zero();
        return Ok(if zero(a) && zero(b) {
            Verdict::Equivalent(None)
        } else {
            Verdict::NotEquivalent
        });
    };
    for c in [root, t.neg(root)] {
        let ca = a.scale(t, c).entries();
        let bb = b.entries();
        let mut rows = Vec::with_capacity(4);
        for i in 0..2 {
            for j in 0..2 {
                let mut row = vec![FFElem::ZERO; 4];
                for k in 0..2 {
                    row[2 * i + k] = t.add(row[2 * i + k], ca[2 * k + j]);
                    row[2 * k + j] = t.sub(row[2 * k + j], bb[2 * i + k]);
                }
                rows.push(row);
            }
        }
        let basis = nullspace(t, &rows, 4)?;
        let mut x0 = basis.iter().find(|v| !quad(t, v).is_zero()).cloned();
        if x0.is_none() {
            'pairs: for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let s: Vec<FFElem> = (0..4).map(|n| t.add(basis[i][n], basis[j][n])).collect();
                    if !quad(t, &s).is_zero() {
                        x0 = Some(s);
                        break 'pairs;
                    }
                }
            }
        }
        if let Some(x0) = x0 {
            let scale = t.div(c, quad(t, &x0))?;
            let witness = t
                .sqrt(scale)
                .map(|s| Mat2::new(x0[0], x0[1], x0[2], x0[3]).scale(t, s));
            return Ok(Verdict::Equivalent(witness));
        }
    }
    Ok(Verdict::NotEquivalent)
}

/// Solves coeff·v = rhs for v ≠ 0. Returns Err(()) when impossible, Ok(None) when
/// the equation is vacuous.
fn scalar(t: &FieldTower, coeff: FFElem, rhs: FFElem) -> std::result::Result<Option<FFElem>, ()> {
    match (coeff.is_zero(), rhs.is_zero()) {
        (true, true) => Ok(None),
        (true, false) | (false, true) => Err(()),
        (false, false) => Ok(Some(t.div(rhs, coeff).map_err(|_| ())?)),
    }
}

/// Values of U, X, Y fixed by the equations, if any.
type Unknowns = (Option<FFElem>, Option<FFElem>, Option<FFElem>);

/// Monomial g: diag(x, y) or antidiag(x; y). With U = xy, X = x², Y = y² the
/// matrix g A adj(g) has entries that are single monomials in U, X, Y.
fn monomial_case(t: &FieldTower, a: &Mat2, b: &Mat2, anti: bool) -> Result<Verdict> {
    let n = |x: FFElem| t.neg(x);
    let (cu1, cx, cy, cu2) = if anti {
        (n(a.d), n(a.c), n(a.b), n(a.a))
    } else {
        (a.a, a.b, a.c, a.d)
    };
    let solve = || -> std::result::Result<Unknowns, ()> {
        let u1 = scalar(t, cu1, b.a)?;
        let u2 = scalar(t, cu2, b.d)?;
        let x = scalar(t, cx, b.b)?;
        let y = scalar(t, cy, b.c)?;
        let u = match (u1, u2) {
            (Some(p), Some(q)) if p != q => return Err(()),
            (p, q) => p.or(q),
        };
        if let (Some(u), Some(x), Some(y)) = (u, x, y) {
            if t.mul(u, u) != t.mul(x, y) {
                return Err(());
            }
        }
        Ok((u, x, y))
    };
    let Ok((u, x, y)) = solve() else {
        return Ok(Verdict::NotEquivalent);
    };
    let (u, x) = match (u, x, y) {
        (Some(u), Some(x), _) => (u, x),
        (Some(u), None, Some(y)) => (u, t.div(t.mul(u, u), y)?),
        (Some(u), None, None) => (u, FFElem::ONE),
        (None, Some(x), Some(y)) => match t.sqrt(t.mul(x, y)) {
            Some(u) => (u, x),
            None => return Ok(Verdict::Equivalent(None)),
        },
        (None, Some(x), None) => (x, x),
        (None, None, Some(y)) => (y, y),
        (None, None, None) => (FFElem::ONE, FFElem::ONE),
    };
    let witness = t.sqrt(x).map(|xr| {
        let yr = t.div(u, xr).expect("x is a unit");
        if anti {
            Mat2::antidiag(xr, yr)
        } else {
            Mat2::diag(xr, yr)
        }
    });
    Ok(Verdict::Equivalent(witness))
}

pub fn oracle_on_images(t: &FieldTower, a: &ParamImage, b: &ParamImage) -> Result<Verdict> {
    for m in [&a.sigma, &a.phi, &b.sigma, &b.phi] {
        if !m.is_diagonal() {
            return Err(Error::NotDiagonal);
        }
    }
    let da = [(a.sigma.a, a.phi.a), (a.sigma.d, a.phi.d)];
    let db = [(b.sigma.a, b.phi.a), (b.sigma.d, b.phi.d)];
    // g_ij may be nonzero only when the j-th character of a equals the i-th of b.
    let s = |i: usize, j: usize| da[j] == db[i];
    let (fa, fb) = (&a.frobenius, &b.frobenius);
    if s(0, 0) && s(0, 1) && s(1, 0) && s(1, 1) {
        return scalar_case(t, fa, fb);
    }
    if s(0, 0) && s(1, 1) {
        return monomial_case(t, fa, fb, false);
    }
    if s(0, 1) && s(1, 0) {
        return monomial_case(t, fa, fb, true);
    }
    Ok(Verdict::NotEquivalent)
}

pub fn intertwiner_witness(t: &FieldTower, a: &LParam, b: &LParam) -> Result<Verdict> {
    let ia = ParamImage::evaluate(t, &param_data(t, a)?)?;
    let ib = ParamImage::evaluate(t, &param_data(t, b)?)?;
    oracle_on_images(t, &ia, &ib)
}

pub fn intertwiner_oracle(t: &FieldTower, a: &LParam, b: &LParam) -> Result<bool> {
    if a.group() != b.group() {
        return Err(Error::CrossGroup(format!("{a:?} vs {b:?}")));
    }
    if a.group() != LGroup::G {
        // Abelian dual groups: conjugation is trivial, so equivalence is equality of data.
        return Ok(super::abelian_restriction(t, a)? == super::abelian_restriction(t, b)?);
    }
    Ok(intertwiner_witness(t, a, b)?.holds())
}

/// Checks g φ g⁻¹ = φ' directly, with Θ evaluated literally.
pub fn verify_witness(t: &FieldTower, g: &Mat2, a: &ParamImage, b: &ParamImage) -> Result<bool> {
    let gi = g.inv(t)?;
    let conj = |m: &Mat2| g.mul(t, m).mul(t, &gi);
    let frob = g.mul(t, &a.frobenius).mul(t, &super::theta(t, g)?.inv(t)?);
    Ok(conj(&a.sigma) == b.sigma && conj(&a.phi) == b.phi && frob == b.frobenius)
}
