//! Labels for the smooth irreducible mod-p representations of U(1,1)(Q_{p²}/Q_p),
//! their L-packets, twists by ω^j∘det, and the semisimplified reductions
//! π(r, 0, μ_λ)^ss used when attaching packets to torus parameters.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower, Layer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    /// ω^k∘det.
    Char { k: u64 },
    /// (ω^k∘det) ⊗ St.
    Steinberg { k: u64 },
    /// ind_B^G(μ_λ ω^r).
    PrincipalSeries { r: u64, lambda: FFElem },
    /// (ω^k∘det) ⊗ π_r.
    Supercuspidal { k: u64, r: u64 },
}

/// Labels for SU(1,1)(Q_{p²}/Q_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SLLabel {
    Trivial,
    SteinbergS,
    PrincipalSeriesS { r: u64, lambda: FFElem },
    CuspS { r: u64 },
}

/// A multiset of labels, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LPacket(Vec<IrrepLabel>);

impl LPacket {
    pub fn new(mut members: Vec<IrrepLabel>) -> Self {
        members.sort();
        LPacket(members)
    }

    pub fn members(&self) -> &[IrrepLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_supercuspidal(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|l| l.is_supercuspidal())
    }

    pub fn twist(&self, p: u64, j: i64) -> LPacket {
        LPacket::new(self.0.iter().map(|l| twist_label(p, l, j)).collect())
    }

    pub fn to_json(&self, t: &FieldTower) -> Result<serde_json::Value> {
        let members: Result<Vec<_>> = self.0.iter().map(|l| label_json(t, l)).collect();
        Ok(serde_json::Value::Array(members?))
    }
}

/// π(r, 0, χ) ⊗ with χ = μ_ν ω^a a character of Q_p^× (a mod p-1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GL2Label {
    pub r: u64,
    pub nu: FFElem,
    pub a: u64,
}

impl IrrepLabel {
    pub fn is_supercuspidal(&self) -> bool {
        matches!(self, IrrepLabel::Supercuspidal { .. })
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            IrrepLabel::Char { .. } => "char",
            IrrepLabel::Steinberg { .. } => "steinberg",
            IrrepLabel::PrincipalSeries { .. } => "principal_series",
            IrrepLabel::Supercuspidal { .. } => "supercuspidal",
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

/// Whether `label` satisfies the range constraints of the classification.
pub fn is_valid_label(t: &FieldTower, label: &IrrepLabel) -> bool {
    let p = t.p();
    match *label {
        IrrepLabel::Char { k } | IrrepLabel::Steinberg { k } => k <= p,
        IrrepLabel::Supercuspidal { k, r } => k <= p && r < p,
        IrrepLabel::PrincipalSeries { r, lambda } => {
            r < p * p - 1 && !lambda.is_zero() && !(lambda == FFElem::ONE && r % (p - 1) == 0)
        }
    }
}

/// All labels, with λ ranging over F_{p^d}^× for the principal series.
pub fn classify(t: &FieldTower, lambda_degree: u32) -> Result<Vec<IrrepLabel>> {
    let p = require_prime_field(t)?;
    let lambdas = t.units(lambda_degree)?;
    let mut out = Vec::new();
    for k in 0..=p {
        out.push(IrrepLabel::Char { k });
        out.push(IrrepLabel::Steinberg { k });
        for r in 0..p {
            out.push(IrrepLabel::Supercuspidal { k, r });
        }
    }
    for r in 0..p * p - 1 {
        for &lambda in &lambdas {
            let l = IrrepLabel::PrincipalSeries { r, lambda };
            if is_valid_label(t, &l) {
                out.push(l);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The partner of (ω^k∘det) ⊗ π_r in its packet.
pub fn supercuspidal_partner(p: u64, k: u64, r: u64) -> IrrepLabel {
    IrrepLabel::Supercuspidal {
        k: (k + r + 1) % (p + 1),
        r: p - 1 - r,
    }
}

pub fn packet_of(p: u64, label: &IrrepLabel) -> LPacket {
    match *label {
        IrrepLabel::Supercuspidal { k, r } => {
            LPacket::new(vec![*label, supercuspidal_partner(p, k, r)])
        }
        _ => LPacket::new(vec![*label]),
    }
}

/// The distinct supercuspidal packets, sorted.
pub fn supercuspidal_packets(p: u64) -> Vec<LPacket> {
    let mut set = BTreeSet::new();
    for k in 0..=p {
        for r in 0..p {
            set.insert(packet_of(p, &IrrepLabel::Supercuspidal { k, r }));
        }
    }
    set.into_iter().collect()
}

pub fn restrict_to_su(p: u64, label: &IrrepLabel) -> SLLabel {
    match *label {
        IrrepLabel::Char { .. } => SLLabel::Trivial,
        IrrepLabel::Steinberg { .. } => SLLabel::SteinbergS,
        IrrepLabel::PrincipalSeries { r, lambda } => SLLabel::PrincipalSeriesS {
            r: r % (p - 1),
            lambda,
        },
        IrrepLabel::Supercuspidal { r, .. } => SLLabel::CuspS { r },
    }
}

/// Twist by ω^j∘det.
pub fn twist_label(p: u64, label: &IrrepLabel, j: i64) -> IrrepLabel {
    let m = p + 1;
    let shift = |k: u64| md(k as i128 + j as i128, m);
    match *label {
        IrrepLabel::Char { k } => IrrepLabel::Char { k: shift(k) },
        IrrepLabel::Steinberg { k } => IrrepLabel::Steinberg { k: shift(k) },
        IrrepLabel::Supercuspidal { k, r } => IrrepLabel::Supercuspidal { k: shift(k), r },
        IrrepLabel::PrincipalSeries { r, lambda } => IrrepLabel::PrincipalSeries {
            r: md(r as i128 + (1 - p as i128) * j as i128, p * p - 1),
            lambda,
        },
    }
}

/// Semisimplified reduction attached to π(r, 0, μ_λ) for 0 ≤ r ≤ p-1, as a multiset.
pub fn pi_ss(t: &FieldTower, r: u64, lambda: FFElem) -> Result<Vec<IrrepLabel>> {
    let p = require_prime_field(t)?;
    if r >= p {
        return Err(Error::OutOfRange(format!("r = {r} not in [0, {}]", p - 1)));
    }
    if lambda == FFElem::ONE && r == 0 {
        return Ok(vec![
            IrrepLabel::Char { k: 0 },
            IrrepLabel::Steinberg { k: 0 },
        ]);
    }
    if lambda == FFElem::ONE && r == p - 1 {
        return Ok(vec![
            IrrepLabel::Char { k: p },
            IrrepLabel::Steinberg { k: p },
        ]);
    }
    Ok(vec![IrrepLabel::PrincipalSeries {
        r: md(-(p as i128) * r as i128, p * p - 1),
        lambda: t.inv(lambda)?,
    }])
}

/// The isomorphism class of π(r, 0, χ) under χ ~ χμ_{-1} and
/// (r, χ) ~ (p-1-r, χω^r).
pub fn gl2_class(t: &FieldTower, x: &GL2Label) -> Result<Vec<GL2Label>> {
    let p = require_prime_field(t)?;
    if x.r >= p || x.nu.is_zero() {
        return Err(Error::OutOfRange("GL_2 label".into()));
    }
    let start = GL2Label {
        a: x.a % (p - 1),
        ..*x
    };
    let minus = t.from_int(-1);
    let mut seen = BTreeSet::from([start]);
    let mut frontier = vec![start];
    while let Some(y) = frontier.pop() {
        let flip = GL2Label {
            nu: t.mul(y.nu, minus),
            ..y
        };
        let refl = GL2Label {
            r: p - 1 - y.r,
            nu: y.nu,
            a: (y.a + y.r) % (p - 1),
        };
        for z in [flip, refl] {
            if seen.insert(z) {
                frontier.push(z);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

pub fn gl2_normalize(t: &FieldTower, x: &GL2Label) -> Result<GL2Label> {
    Ok(gl2_class(t, x)?[0])
}

pub fn label_json(t: &FieldTower, label: &IrrepLabel) -> Result<serde_json::Value> {
    let ty = label.type_name();
    Ok(match *label {
        IrrepLabel::Char { k } | IrrepLabel::Steinberg { k } => json!({"type": ty, "k": k}),
        IrrepLabel::Supercuspidal { k, r } => json!({"type": ty, "k": k, "r": r}),
        IrrepLabel::PrincipalSeries { r, lambda } => json!({
            "type": ty,
            "r": r,
            "lambda": t.format(lambda, t.layer_degree(Layer::Lambda), "g")?,
        }),
    })
}

pub fn sl_label_json(t: &FieldTower, label: &SLLabel) -> Result<serde_json::Value> {
    Ok(match *label {
        SLLabel::Trivial => json!({"type": "trivial"}),
        SLLabel::SteinbergS => json!({"type": "steinberg"}),
        SLLabel::CuspS { r } => json!({"type": "cusp", "r": r}),
        SLLabel::PrincipalSeriesS { r, lambda } => json!({
            "type": "principal_series",
            "r": r,
            "lambda": t.format(lambda, t.layer_degree(Layer::Lambda), "g")?,
        }),
    })
}

/// One-line human form, for CSV and Markdown tables.
pub fn label_text(t: &FieldTower, label: &IrrepLabel) -> Result<String> {
    Ok(match *label {
        IrrepLabel::Char { k } => format!("w^{k}∘det"),
        IrrepLabel::Steinberg { k } => format!("w^{k}∘det ⊗ St"),
        IrrepLabel::Supercuspidal { k, r } => format!("w^{k}∘det ⊗ π_{r}"),
        IrrepLabel::PrincipalSeries { r, lambda } => format!(
            "ind(μ_{} ω^{r})",
            t.format(lambda, t.layer_degree(Layer::Lambda), "g")?
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u64) -> FieldTower {
        FieldTower::new(p, 1, 1).unwrap()
    }

    #[test]
    fn counts_at_p3() {
        let t3 = t(3);
        let labels = classify(&t3, 1).unwrap();
        assert_eq!(labels.len(), 32);
        let count = |name: &str| labels.iter().filter(|l| l.type_name() == name).count();
        assert_eq!(count("char"), 4);
        assert_eq!(count("steinberg"), 4);
        assert_eq!(count("principal_series"), 12);
        assert_eq!(count("supercuspidal"), 12);
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
        assert!(classify(&FieldTower::new(3, 2, 1).unwrap(), 1).is_err());
    }

    #[test]
    fn packets_at_p3() {
        assert_eq!(
            packet_of(3, &IrrepLabel::Supercuspidal { k: 0, r: 0 }),
            LPacket::new(vec![
                IrrepLabel::Supercuspidal { k: 0, r: 0 },
                IrrepLabel::Supercuspidal { k: 1, r: 2 }
            ])
        );
        assert_eq!(
            packet_of(3, &IrrepLabel::Supercuspidal { k: 1, r: 1 }),
            LPacket::new(vec![
                IrrepLabel::Supercuspidal { k: 1, r: 1 },
                IrrepLabel::Supercuspidal { k: 3, r: 1 }
            ])
        );
        assert_eq!(supercuspidal_packets(3).len(), 6);
        assert_eq!(packet_of(3, &IrrepLabel::Char { k: 2 }).len(), 1);
    }

    #[test]
    fn reductions_at_p3() {
        let t3 = t(3);
        assert_eq!(
            pi_ss(&t3, 0, FFElem::ONE).unwrap(),
            vec![IrrepLabel::Char { k: 0 }, IrrepLabel::Steinberg { k: 0 }]
        );
        assert_eq!(
            pi_ss(&t3, 2, FFElem::ONE).unwrap(),
            vec![IrrepLabel::Char { k: 3 }, IrrepLabel::Steinberg { k: 3 }]
        );
        let two = t3.from_int(2);
        assert_eq!(
            pi_ss(&t3, 1, two).unwrap(),
            vec![IrrepLabel::PrincipalSeries { r: 5, lambda: two }]
        );
    }

    #[test]
    fn gl2_classes() {
        let t3 = t(3);
        let a = GL2Label {
            r: 1,
            nu: FFElem::ONE,
            a: 0,
        };
        let b = GL2Label {
            r: 1,
            nu: FFElem::ONE,
            a: 1,
        };
        assert_eq!(
            gl2_normalize(&t3, &a).unwrap(),
            gl2_normalize(&t3, &b).unwrap()
        );
        let t5 = t(5);
        for r in 0..5 {
            for a in 0..4 {
                for nu in t5.units(2).unwrap() {
                    let x = GL2Label { r, nu, a };
                    let class = gl2_class(&t5, &x).unwrap();
                    assert_eq!(class.len(), 4);
                    for y in &class {
                        assert_eq!(gl2_class(&t5, y).unwrap(), class);
                    }
                }
            }
        }
    }

    #[test]
    fn restriction_and_twist() {
        let t5 = t(5);
        let g = t5.generator(2).unwrap();
        let ps = IrrepLabel::PrincipalSeries { r: 7, lambda: g };
        assert_eq!(
            restrict_to_su(5, &ps),
            SLLabel::PrincipalSeriesS { r: 3, lambda: g }
        );
        assert_eq!(
            restrict_to_su(5, &IrrepLabel::Supercuspidal { k: 2, r: 4 }),
            SLLabel::CuspS { r: 4 }
        );
        assert_eq!(
            twist_label(5, &ps, 1),
            IrrepLabel::PrincipalSeries { r: 3, lambda: g }
        );
        assert_eq!(
            twist_label(5, &IrrepLabel::Char { k: 5 }, 1),
            IrrepLabel::Char { k: 0 }
        );
    }

    #[test]
    fn label_json_shape() {
        let t3 = t(3);
        let v = label_json(&t3, &IrrepLabel::Supercuspidal { k: 1, r: 2 }).unwrap();
        assert_eq!(v, json!({"type": "supercuspidal", "k": 1, "r": 2}));
        let v = label_json(
            &t3,
            &IrrepLabel::PrincipalSeries {
                r: 1,
                lambda: t3.from_int(2),
            },
        )
        .unwrap();
        assert_eq!(
            v,
            json!({"type": "principal_series", "r": 1, "lambda": "g^4"})
        );
    }
}
