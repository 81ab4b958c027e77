//! Parameters into the C-group ((GL₂ × F̄_p^×)/⟨(−id, −1)⟩) ⋊ 𝒢_{Q_p}.
//!
//! Images are pairs [M, z]. The central coordinate of both families is ω₁^{1/2},
//! realized on 𝒢_{Q_{p²}} as ω₂^e with 2e ≡ p+1 (mod p²−1); Fr_p goes to [A, 1].

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chars::{char_mul, MultChar};
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower, Layer};
use crate::linalg::Mat2;
use crate::reps::LPacket;

use super::oracle::{oracle_on_images, ParamImage};
use super::{correspond, md, param_data, require_prime_field, theta, LParam, ParamData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CParam {
    CEndo { k: u64, l: u64 },
    CTorus { r: u64, lambda: FFElem },
}

/// Which square root of ω₁ on inertia serves as ω₁^{1/2}. The two differ by the
/// quadratic character ω₂^{(p²−1)/2}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfOmega {
    #[default]
    Standard,
    Twisted,
}

impl HalfOmega {
    pub fn exponent(self, p: u64) -> u64 {
        let n = p * p - 1;
        match self {
            HalfOmega::Standard => p.div_ceil(2),
            HalfOmega::Twisted => (p.div_ceil(2) + n / 2) % n,
        }
    }
}

impl std::str::FromStr for HalfOmega {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(HalfOmega::Standard),
            "twisted" => Ok(HalfOmega::Twisted),
            _ => Err(Error::Parse(format!("unknown square-root choice {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CData {
    pub frobenius: Mat2,
    /// Diagonal restriction, central factor included.
    pub restriction: [MultChar; 2],
    pub central: MultChar,
}

pub fn c_normalize(t: &FieldTower, a: &CParam) -> Result<CParam> {
    let p = require_prime_field(t)?;
    Ok(match *a {
        CParam::CEndo { k, l } => CParam::CEndo {
            k: k % (p + 1),
            l: l % (p + 1),
        },
        CParam::CTorus { r, lambda } => {
            if lambda.is_zero() {
                return Err(Error::DivisionByZero);
            }
            CParam::CTorus {
                r: r % (p * p - 1),
                lambda,
            }
        }
    })
}

pub fn c_data(t: &FieldTower, a: &CParam, half: HalfOmega) -> Result<CData> {
    let p = require_prime_field(t)?;
    let n = (p * p - 1) as i128;
    let central = MultChar::new(2, p, FFElem::ONE, half.exponent(p) as i64)?;
    let (frobenius, bare) = match c_normalize(t, a)? {
        CParam::CEndo { k, l } => {
            let shift = MultChar::new(2, p, FFElem::ONE, -1)?;
            let d = param_data(t, &LParam::Endo { k, l })?;
            (
                d.frobenius,
                [
                    char_mul(t, &d.restriction[0], &shift)?,
                    char_mul(t, &d.restriction[1], &shift)?,
                ],
            )
        }
        CParam::CTorus { r, lambda } => (
            Mat2::diag(FFElem::ONE, lambda),
            [
                MultChar::new(2, p, t.inv(lambda)?, r as i64)?,
                MultChar::new(
                    2,
                    p,
                    lambda,
                    md(-(p as i128) * r as i128 - (p as i128 + 1), n as u64) as i64,
                )?,
            ],
        ),
    };
    Ok(CData {
        frobenius,
        restriction: [
            char_mul(t, &bare[0], &central)?,
            char_mul(t, &bare[1], &central)?,
        ],
        central,
    })
}

/// d∘φ on 𝒢_{Q_{p²}}: the square of the central coordinate.
pub fn c_d(t: &FieldTower, a: &CParam, half: HalfOmega) -> Result<MultChar> {
    let c = c_data(t, a, half)?.central;
    char_mul(t, &c, &c)
}

pub fn omega1_on_quadratic(p: u64) -> Result<MultChar> {
    MultChar::new(2, p, FFElem::ONE, (p + 1) as i64)
}

#[derive(Clone, Copy)]
struct CImage {
    m: Mat2,
    z: FFElem,
}

fn same_class(t: &FieldTower, a: CImage, b: CImage) -> bool {
    (a.m == b.m && a.z == b.z) || (a.m == b.m.scale(t, t.from_int(-1)) && a.z == t.neg(b.z))
}

/// Homomorphism test in the quotient by ⟨(−id, −1)⟩, on σ, Φ = Fr_p² and Fr_p.
pub fn c_is_homomorphism(t: &FieldTower, d: &CData) -> Result<bool> {
    let bare = ParamData {
        frobenius: d.frobenius,
        restriction: d.restriction,
    };
    let img = ParamImage::evaluate(t, &bare)?;
    let zeta = t.generator(2)?;
    let z_sigma = t.pow(zeta, d.central.r);
    let z_phi = d.central.lambda;
    let a = d.frobenius;
    let ainv = a.inv(t)?;
    let conj = |m: &Mat2| -> Result<Mat2> { Ok(a.mul(t, &theta(t, m)?).mul(t, &ainv)) };
    let p = t.p();
    let sigma_rel = same_class(
        t,
        CImage {
            m: conj(&img.sigma)?,
            z: z_sigma,
        },
        CImage {
            m: img.sigma.map(|x| t.pow(x, p)),
            z: t.pow(z_sigma, p),
        },
    );
    let phi_rel = same_class(
        t,
        CImage {
            m: conj(&img.phi)?,
            z: z_phi,
        },
        CImage {
            m: img.phi,
            z: z_phi,
        },
    );
    let square = same_class(
        t,
        CImage {
            m: a.mul(t, &theta(t, &a)?),
            z: FFElem::ONE,
        },
        CImage {
            m: img.phi,
            z: z_phi,
        },
    );
    Ok(sigma_rel && phi_rel && square)
}

/// Closed-form equivalence; the rules do not depend on the square-root choice.
pub fn c_equiv(t: &FieldTower, a: &CParam, b: &CParam) -> Result<bool> {
    let p = require_prime_field(t)?;
    let n = p * p - 1;
    let flip = |r: u64| md(-(p as i128) * r as i128 - (p as i128 + 1), n);
    let endo_torus = |k: u64, l: u64, r: u64, lambda: FFElem| {
        k == l && r == md(-1 + (1 - p as i128) * k as i128, n) && lambda == t.from_int(-1)
    };
    Ok(match (c_normalize(t, a)?, c_normalize(t, b)?) {
        (CParam::CEndo { k, l }, CParam::CEndo { k: k2, l: l2 }) => {
            (k, l) == (k2, l2) || (k, l) == (l2, k2)
        }
        (CParam::CTorus { r, lambda }, CParam::CTorus { r: r2, lambda: l2 }) => {
            (r, lambda) == (r2, l2) || (r2 == flip(r) && l2 == t.inv(lambda)?)
        }
        (CParam::CEndo { k, l }, CParam::CTorus { r, lambda })
        | (CParam::CTorus { r, lambda }, CParam::CEndo { k, l }) => endo_torus(k, l, r, lambda),
    })
}

/// Oracle: the central coordinates agree, so [g, z] conjugation reduces to the
/// GL₂ problem on the stripped data.
pub fn c_oracle(t: &FieldTower, a: &CParam, b: &CParam, half: HalfOmega) -> Result<bool> {
    let strip = |c: &CParam| -> Result<ParamImage> {
        let d = c_data(t, c, half)?;
        let inv = crate::chars::char_inv(t, &d.central);
        let bare = ParamData {
            frobenius: d.frobenius,
            restriction: [
                char_mul(t, &d.restriction[0], &inv)?,
                char_mul(t, &d.restriction[1], &inv)?,
            ],
        };
        ParamImage::evaluate(t, &bare)
    };
    Ok(oracle_on_images(t, &strip(a)?, &strip(b)?)?.holds())
}

/// The same parameter written with the standard square root.
pub fn to_standard(t: &FieldTower, a: &CParam, half: HalfOmega) -> Result<CParam> {
    let p = require_prime_field(t)?;
    let a = c_normalize(t, a)?;
    if half == HalfOmega::Standard {
        return Ok(a);
    }
    let h = p.div_ceil(2);
    Ok(match a {
        CParam::CEndo { k, l } => CParam::CEndo {
            k: (k + h) % (p + 1),
            l: (l + h) % (p + 1),
        },
        CParam::CTorus { r, lambda } => CParam::CTorus {
            r: (r + (p * p - 1) / 2) % (p * p - 1),
            lambda,
        },
    })
}

/// The L-parameter whose packet a C-parameter is sent to: CEndo keeps its indices
/// and CTorus(r, λ) goes to ψ_{r+1, λ}.
pub fn c_to_l(t: &FieldTower, a: &CParam, half: HalfOmega) -> Result<LParam> {
    let p = require_prime_field(t)?;
    Ok(match to_standard(t, a, half)? {
        CParam::CEndo { k, l } => LParam::Endo { k, l },
        CParam::CTorus { r, lambda } => LParam::Torus {
            r: (r + 1) % (p * p - 1),
            lambda,
        },
    })
}

pub fn c_correspond(t: &FieldTower, a: &CParam, half: HalfOmega) -> Result<LPacket> {
    correspond(t, &c_to_l(t, a, half)?)
}

pub fn c_params(t: &FieldTower, lambda_degree: u32) -> Result<Vec<CParam>> {
    let p = require_prime_field(t)?;
    let mut out = Vec::new();
    for k in 0..=p {
        for l in 0..=p {
            out.push(CParam::CEndo { k, l });
        }
    }
    for r in 0..p * p - 1 {
        for lambda in t.units(lambda_degree)? {
            out.push(CParam::CTorus { r, lambda });
        }
    }
    Ok(out)
}

pub fn c_param_json(t: &FieldTower, a: &CParam) -> Result<serde_json::Value> {
    Ok(match *a {
        CParam::CEndo { k, l } => json!({"type": "c_endo", "k": k, "l": l}),
        CParam::CTorus { r, lambda } => json!({
            "type": "c_torus",
            "r": r,
            "lambda": t.format(lambda, t.layer_degree(Layer::Lambda), "g")?,
        }),
    })
}

pub fn parse_c_param(t: &FieldTower, v: &serde_json::Value) -> Result<CParam> {
    let ty = v
        .get("type")
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::Parse("missing \"type\"".into()))?;
    let a = match ty {
        "c_endo" => CParam::CEndo {
            k: super::json_u64(v, "k")?,
            l: super::json_u64(v, "l")?,
        },
        "c_torus" => CParam::CTorus {
            r: super::json_u64(v, "r")?,
            lambda: super::json_lambda(t, v)?,
        },
        other => return Err(Error::Parse(format!("unknown C-parameter type {other:?}"))),
    };
    c_normalize(t, &a)
}
