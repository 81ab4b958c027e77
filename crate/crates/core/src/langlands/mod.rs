//! Langlands parameters with values in the L-groups of U(1), J = U(1)×U(1) and
//! G = U(1,1)(Q_{p²}/Q_p), stored as finite data: the image A of Fr_p in Ĝ and the
//! pair of characters of 𝒢_{Q_{p²}} on the diagonal.
//!
//! Galois characters μ_{2,λ}ω₂^r are MultChar with n = 2 and q = p. The only place
//! where λ is inverted to pass to characters of Q_{p²}^× is
//! [`representation_characters`].

pub mod cgroup;
pub mod oracle;

use serde_json::json;

use crate::chars::{bracket, char_inv, char_mul, frobenius_twist, MultChar};
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower, Layer};
use crate::linalg::Mat2;
use crate::reps::{pi_ss, IrrepLabel, LPacket};

pub use oracle::{intertwiner_oracle, intertwiner_witness, oracle_on_images, ParamImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LParam {
    /// η_k into ^L U(1).
    U1 { k: u64 },
    /// η_{k,ℓ} into ^L J.
    J { k: u64, l: u64 },
    /// φ_{k,ℓ} = ξ∘η_{k,ℓ} into ^L G.
    Endo { k: u64, l: u64 },
    /// ψ_{r,λ} through the L-group of the torus.
    Torus { r: u64, lambda: FFElem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LGroup {
    U1,
    J,
    G,
}

/// Frobenius image and diagonal restriction of a G-valued parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamData {
    pub frobenius: Mat2,
    pub restriction: [MultChar; 2],
}

impl LParam {
    pub fn group(&self) -> LGroup {
        match self {
            LParam::U1 { .. } => LGroup::U1,
            LParam::J { .. } => LGroup::J,
            LParam::Endo { .. } | LParam::Torus { .. } => LGroup::G,
        }
    }

    pub fn is_regular(&self) -> bool {
        match *self {
            LParam::Endo { k, l } => k != l,
            _ => true,
        }
    }
}

fn require_prime_field(t: &FieldTower) -> Result<u64> {
    if t.f() != 1 {
        return Err(Error::NeedsPrimeField);
    }
    Ok(t.p())
}

fn md(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Reduces indices into their stored ranges and checks λ ≠ 0.
pub fn normalize(t: &FieldTower, a: &LParam) -> Result<LParam> {
    let p = require_prime_field(t)?;
    let m = p + 1;
    Ok(match *a {
        LParam::U1 { k } => LParam::U1 { k: k % m },
        LParam::J { k, l } => LParam::J { k: k % m, l: l % m },
        LParam::Endo { k, l } => LParam::Endo { k: k % m, l: l % m },
        LParam::Torus { r, lambda } => {
            if lambda.is_zero() {
                return Err(Error::DivisionByZero);
            }
            LParam::Torus {
                r: r % (p * p - 1),
                lambda,
            }
        }
    })
}

fn omega2(p: u64, r: i128) -> MultChar {
    MultChar {
        n: 2,
        q: p,
        lambda: FFElem::ONE,
        r: md(r, p * p - 1),
    }
}

/// Restriction characters of η_k (one) or η_{k,ℓ} (two).
pub fn abelian_restriction(t: &FieldTower, a: &LParam) -> Result<Vec<MultChar>> {
    let p = require_prime_field(t)?;
    let e = |k: u64| omega2(p, (1 - p as i128) * k as i128);
    match *a {
        LParam::U1 { k } => Ok(vec![e(k)]),
        LParam::J { k, l } => Ok(vec![e(k), e(l)]),
        _ => Err(Error::CrossGroup(
            "not a parameter into an abelian L-group".into(),
        )),
    }
}

/// ξ: ^L J → ^L G. On data, ξ((x, y)h) = diag(x, y)μ_{2,-1}(h)h and
/// ξ((1, 1)Fr_p) = antidiag(-1; 1)Fr_p.
pub fn xi_embed(a: &LParam) -> Result<LParam> {
    match *a {
        LParam::J { k, l } => Ok(LParam::Endo { k, l }),
        _ => Err(Error::CrossGroup("ξ is defined on J-parameters".into())),
    }
}

pub fn param_data(t: &FieldTower, a: &LParam) -> Result<ParamData> {
    let p = require_prime_field(t)?;
    match normalize(t, a)? {
        LParam::Endo { k, l } => {
            let j = abelian_restriction(t, &LParam::J { k, l })?;
            let mu = MultChar::new(2, p, t.from_int(-1), 0)?;
            Ok(ParamData {
                frobenius: Mat2::from_ints(t, 0, -1, 1, 0),
                restriction: [char_mul(t, &j[0], &mu)?, char_mul(t, &j[1], &mu)?],
            })
        }
        LParam::Torus { r, lambda } => Ok(ParamData {
            frobenius: Mat2::diag(FFElem::ONE, lambda),
            restriction: [
                MultChar::new(2, p, t.inv(lambda)?, r as i64)?,
                MultChar::new(2, p, lambda, -(p as i64) * r as i64)?,
            ],
        }),
        _ => Err(Error::CrossGroup("not a G-parameter".into())),
    }
}

/// Θ(g) = Φ₂ (gᵀ)⁻¹ Φ₂⁻¹, the action of Fr_p on Ĝ.
pub fn theta(t: &FieldTower, g: &Mat2) -> Result<Mat2> {
    let phi = Mat2::from_ints(t, 0, 1, -1, 0);
    Ok(phi.mul(t, &g.transpose().inv(t)?).mul(t, &phi.inv(t)?))
}

/// Checks that the data define a homomorphism on the tame quotient: with σ a
/// generator of inertia (ω₂(σ) a generator of F_{p²}^×) and Φ = Fr_p², one needs
/// A Θ(D(σ)) A⁻¹ = D(σ)^p, A Θ(D(Φ)) A⁻¹ = D(Φ) and A Θ(A) = D(Φ).
pub fn is_homomorphism(t: &FieldTower, d: &ParamData) -> Result<bool> {
    let img = ParamImage::evaluate(t, d)?;
    let a = img.frobenius;
    let ainv = a.inv(t)?;
    let conj = |m: &Mat2| -> Result<Mat2> { Ok(a.mul(t, &theta(t, m)?).mul(t, &ainv)) };
    let sigma_p = img.sigma.map(|x| t.pow(x, t.p()));
    Ok(conj(&img.sigma)? == sigma_p
        && conj(&img.phi)? == img.phi
        && a.mul(t, &theta(t, &a)?) == img.phi)
}

/// Closed-form equivalence.
pub fn param_equiv(t: &FieldTower, a: &LParam, b: &LParam) -> Result<bool> {
    let p = require_prime_field(t)?;
    let n = p * p - 1;
    let a = normalize(t, a)?;
    let b = normalize(t, b)?;
    if a.group() != b.group() {
        return Err(Error::CrossGroup(format!("{a:?} vs {b:?}")));
    }
    let endo_torus = |k: u64, l: u64, r: u64, lambda: FFElem| {
        k == l && r == md((1 - p as i128) * k as i128, n) && lambda == t.from_int(-1)
    };
    Ok(match (a, b) {
        (LParam::U1 { k }, LParam::U1 { k: k2 }) => k == k2,
        (LParam::J { k, l }, LParam::J { k: k2, l: l2 }) => (k, l) == (k2, l2),
        (LParam::Endo { k, l }, LParam::Endo { k: k2, l: l2 }) => {
            (k, l) == (k2, l2) || (k, l) == (l2, k2)
        }
        (LParam::Torus { r, lambda }, LParam::Torus { r: r2, lambda: l2 }) => {
            (r, lambda) == (r2, l2)
                || (r2 == md(-(p as i128) * r as i128, n) && l2 == t.inv(lambda)?)
        }
        (LParam::Endo { k, l }, LParam::Torus { r, lambda })
        | (LParam::Torus { r, lambda }, LParam::Endo { k, l }) => endo_torus(k, l, r, lambda),
        _ => unreachable!("groups already matched"),
    })
}

/// Twist by ω₂^{(1-p)j}, i.e. by the parameter of ω^j∘det.
pub fn twist_param(t: &FieldTower, a: &LParam, j: i64) -> Result<LParam> {
    let p = require_prime_field(t)?;
    let m = p + 1;
    let s = |k: u64| md(k as i128 + j as i128, m);
    Ok(match normalize(t, a)? {
        LParam::U1 { k } => LParam::U1 { k: s(k) },
        LParam::J { k, l } => LParam::J { k: s(k), l: s(l) },
        LParam::Endo { k, l } => LParam::Endo { k: s(k), l: s(l) },
        LParam::Torus { r, lambda } => LParam::Torus {
            r: md(r as i128 + (1 - p as i128) * j as i128, p * p - 1),
            lambda,
        },
    })
}

/// Restriction to 𝒢_{Q_{p²}} of Ind(μ_{2,λ}ω₂^m): the character and its Frobenius conjugate.
pub fn induce_restrict(t: &FieldTower, m: u64, lambda: FFElem) -> Result<[MultChar; 2]> {
    let p = require_prime_field(t)?;
    let chi = MultChar::new(2, p, lambda, m as i64)?;
    Ok([chi, frobenius_twist(&chi)])
}

/// Characters of Q_{p²}^× matching the restriction of a G-parameter:
/// μ_{2,λ}ω₂^r ↦ μ_{λ⁻¹}ω^r.
pub fn representation_characters(t: &FieldTower, a: &LParam) -> Result<[MultChar; 2]> {
    let d = param_data(t, a)?;
    let flip = |c: &MultChar| MultChar {
        lambda: char_inv(t, c).lambda,
        ..*c
    };
    Ok([flip(&d.restriction[0]), flip(&d.restriction[1])])
}

fn supercuspidal_pair(p: u64, k: u64, l: u64) -> Result<LPacket> {
    Ok(LPacket::new(vec![
        IrrepLabel::Supercuspidal {
            k: l,
            r: bracket(k as i64 - l as i64 - 1, p)?,
        },
        IrrepLabel::Supercuspidal {
            k,
            r: bracket(l as i64 - k as i64 - 1, p)?,
        },
    ]))
}

/// Writes a torus parameter as ψ_{r+(1-p)k, λ} with 0 ≤ r ≤ p-1, 0 ≤ k ≤ p
/// and returns ω^k ⊗ π(r, λ)^ss ⊎ ω^{k+r+1} ⊗ π(p-1-r, λ⁻¹)^ss, checking that
/// every decomposition gives the same multiset.
fn torus_packet(t: &FieldTower, big_r: u64, lambda: FFElem) -> Result<LPacket> {
    let p = t.p();
    let n = p * p - 1;
    let lambda_inv = t.inv(lambda)?;
    let mut found: Option<LPacket> = None;
    for k in 0..=p {
        for r in 0..p {
            if md(r as i128 + (1 - p as i128) * k as i128, n) != big_r {
                continue;
            }
            let first = LPacket::new(pi_ss(t, r, lambda)?).twist(p, k as i64);
            let second =
                LPacket::new(pi_ss(t, p - 1 - r, lambda_inv)?).twist(p, (k + r + 1) as i64);
            let mut members = first.members().to_vec();
            members.extend_from_slice(second.members());
            let packet = LPacket::new(members);
            match &found {
                Some(prev) if *prev != packet => {
                    return Err(Error::Inconsistent(format!(
                        "torus parameter r = {big_r} has two different packets"
                    )))
                }
                _ => found = Some(packet),
            }
        }
    }
    found.ok_or_else(|| Error::Inconsistent(format!("no decomposition of r = {big_r}")))
}

/// The semisimple correspondence on G-parameters.
pub fn correspond(t: &FieldTower, a: &LParam) -> Result<LPacket> {
    let p = require_prime_field(t)?;
    match normalize(t, a)? {
        LParam::Endo { k, l } if k != l => supercuspidal_pair(p, k, l),
        LParam::Endo { k, .. } => correspond(
            t,
            &LParam::Torus {
                r: md((1 - p as i128) * k as i128, p * p - 1),
                lambda: t.from_int(-1),
            },
        ),
        LParam::Torus { r, lambda } => torus_packet(t, r, lambda),
        other => Err(Error::CrossGroup(format!("{other:?} is not a G-parameter"))),
    }
}

/// Endoscopic transfer of ω^k ⊗ ω^ℓ from J to G.
pub fn transfer(t: &FieldTower, k: u64, l: u64) -> Result<LPacket> {
    let p = require_prime_field(t)?;
    let (k, l) = (k % (p + 1), l % (p + 1));
    if k != l {
        return supercuspidal_pair(p, k, l);
    }
    let ps = IrrepLabel::PrincipalSeries {
        r: md((1 - p as i128) * k as i128, p * p - 1),
        lambda: t.from_int(-1),
    };
    Ok(LPacket::new(vec![ps, ps]))
}

/// All G-parameters with λ ranging over F_{p^d}^×: every φ_{k,ℓ}, then every ψ_{r,λ}.
pub fn g_params(t: &FieldTower, lambda_degree: u32) -> Result<Vec<LParam>> {
    let p = require_prime_field(t)?;
    let mut out = Vec::new();
    for k in 0..=p {
        for l in 0..=p {
            out.push(LParam::Endo { k, l });
        }
    }
    for r in 0..p * p - 1 {
        for lambda in t.units(lambda_degree)? {
            out.push(LParam::Torus { r, lambda });
        }
    }
    Ok(out)
}

/// Partition of `params` into classes under `equiv`, in first-occurrence order.
pub fn classes<T: Copy>(
    params: &[T],
    mut equiv: impl FnMut(&T, &T) -> Result<bool>,
) -> Result<Vec<Vec<T>>> {
    let mut out: Vec<Vec<T>> = Vec::new();
    'outer: for x in params {
        for class in out.iter_mut() {
            if equiv(&class[0], x)? {
                class.push(*x);
                continue 'outer;
            }
        }
        out.push(vec![*x]);
    }
    Ok(out)
}

pub fn param_json(t: &FieldTower, a: &LParam) -> Result<serde_json::Value> {
    Ok(match *a {
        LParam::U1 { k } => json!({"type": "u1", "k": k}),
        LParam::J { k, l } => json!({"type": "j", "k": k, "l": l}),
        LParam::Endo { k, l } => json!({"type": "endo", "k": k, "l": l}),
        LParam::Torus { r, lambda } => json!({
            "type": "torus",
            "r": r,
            "lambda": t.format(lambda, t.layer_degree(Layer::Lambda), "g")?,
        }),
    })
}

pub(crate) fn json_u64(v: &serde_json::Value, key: &str) -> Result<u64> {
    v.get(key)
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Parse(format!("missing non-negative integer field {key:?}")))
}

pub(crate) fn json_lambda(t: &FieldTower, v: &serde_json::Value) -> Result<FFElem> {
    let d = t.layer_degree(Layer::Lambda);
    match v.get("lambda") {
        None => Ok(FFElem::ONE),
        Some(serde_json::Value::String(s)) => t.parse(s, d, "g"),
        Some(serde_json::Value::Number(n)) => n
            .as_i64()
            .map(|n| t.from_int(n))
            .ok_or_else(|| Error::Parse("lambda must be an integer or \"g^j\"".into())),
        Some(_) => Err(Error::Parse("lambda must be an integer or \"g^j\"".into())),
    }
}

pub fn parse_param(t: &FieldTower, v: &serde_json::Value) -> Result<LParam> {
    let ty = v
        .get("type")
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::Parse("missing \"type\"".into()))?;
    let a = match ty {
        "u1" => LParam::U1 {
            k: json_u64(v, "k")?,
        },
        "j" => LParam::J {
            k: json_u64(v, "k")?,
            l: json_u64(v, "l")?,
        },
        "endo" => LParam::Endo {
            k: json_u64(v, "k")?,
            l: json_u64(v, "l")?,
        },
        "torus" => LParam::Torus {
            r: json_u64(v, "r")?,
            lambda: json_lambda(t, v)?,
        },
        other => return Err(Error::Parse(format!("unknown parameter type {other:?}"))),
    };
    normalize(t, &a)
}
