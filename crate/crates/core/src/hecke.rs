//! The finite Hecke algebra H(SU(1,1)(F_{q²}/F_q), U), its torus idempotents, and
//! the one-dimensional supersingular modules of the pro-p Iwahori Hecke algebra.
//!
//! The relations used to check a module are not hard-coded: the quadratic relation
//! of T_{n_s} and the commutation of T_{n_s} with the idempotents are computed by
//! convolution on the finite group. The affine generator T_{n_s'} has no finite
//! counterpart inside SU(1,1)(F_q); its relations are the transport of those for
//! T_{n_s} under conjugation by β = [[0, 1], [ϖ, 0]], which inverts the torus.

use serde_json::json;

use crate::error::{Error, Result};
use crate::ffield::{split_prime_power, FFElem, FieldTower, Layer};
use crate::finituni::{convolve, enumerate_group, CosetFunction, CosetSpace, GroupTable, Variant};

pub struct FiniteHecke<'t> {
    tower: &'t FieldTower,
    table: GroupTable,
    cosets: CosetSpace,
    /// H_S = {diag(a, a⁻¹)} in generator-power order of a.
    torus: Vec<usize>,
    n_s: usize,
}

/// A character of the pro-p Iwahori Hecke algebra: e_r ↦ 1, other idempotents
/// ↦ 0, T_{n_s} ↦ a_s and T_{n_s'} ↦ a_s'.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeckeModule1D {
    /// Index in the supersingular table, 0..=q-1.
    pub label: u64,
    /// The idempotent e_r acting by 1, r in [0, q-2].
    pub r: u64,
    pub a_s: i64,
    pub a_s_prime: i64,
}

impl HeckeModule1D {
    pub fn name(&self) -> String {
        format!("M_{}", self.label)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "module": self.name(),
            "r": self.r,
            "a_s": self.a_s,
            "a_s_prime": self.a_s_prime,
        })
    }
}

/// Relations among T_h, T_{n_s} and the idempotents, read off by convolution.
#[derive(Clone, Debug)]
pub struct DerivedRelations {
    /// T_{n_s}² = Σ_h alpha[h] T_h + Σ_h beta[h] T_h T_{n_s}.
    pub alpha: Vec<FFElem>,
    pub beta: Vec<FFElem>,
    /// T_h e_r = scalar[h][r] e_r.
    pub scalar: Vec<Vec<FFElem>>,
    /// T_{n_s} e_r = e_{swap[r]} T_{n_s}.
    pub swap: Vec<u64>,
    /// Position of h⁻¹ in the torus list.
    pub inverse: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub q: u64,
    pub checks: Vec<Check>,
    pub quadratic: String,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "passed": self.passed(),
            "quadratic_relation": self.quadratic,
            "checks": self.checks.iter().map(|c| json!({"check": c.name, "passed": c.passed})).collect::<Vec<_>>(),
        })
    }
}

impl<'t> FiniteHecke<'t> {
    pub fn new(tower: &'t FieldTower) -> Result<Self> {
        let table = enumerate_group(tower, Variant::SU11)?;
        let cosets = CosetSpace::new(tower, &table);
        let torus = table.torus.clone();
        let n_s = table
            .index_of(&table.n_s)
            .ok_or_else(|| Error::Inconsistent("n_s is not in SU(1,1)".into()))?;
        Ok(FiniteHecke {
            tower,
            table,
            cosets,
            torus,
            n_s,
        })
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn tower(&self) -> &FieldTower {
        self.tower
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn torus(&self) -> &[usize] {
        &self.torus
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn t_basis(&self, g: usize) -> CosetFunction {
        CosetFunction::indicator(&self.cosets, g)
    }

    pub fn convolve(&self, a: &CosetFunction, b: &CosetFunction) -> CosetFunction {
        convolve(self.tower, &self.table, &self.cosets, a, b)
    }

    /// χ_r(diag(a, a⁻¹)) = a^r.
    pub fn character_value(&self, r: u64, h: usize) -> FFElem {
        self.tower.pow(self.table.element(h).a, r)
    }

    /// e_r = |H_S|⁻¹ Σ_h χ_r(h) T_h.
    pub fn make_idempotent(&self, r: u64) -> Result<CosetFunction> {
        let q = self.q();
        if r > q - 2 {
            return Err(Error::OutOfRange(format!("r = {r} not in [0, {}]", q - 2)));
        }
        let t = self.tower;
        let inv_order = t.inv(t.from_int(q as i64 - 1))?;
        let mut e = CosetFunction::zero(&self.cosets);
        for &h in &self.torus {
            let c = t.mul(inv_order, self.character_value(r, h));
            e = e.add(t, &self.t_basis(h).scale(t, c));
        }
        Ok(e)
    }

    pub fn idempotents(&self) -> Result<Vec<CosetFunction>> {
        (0..self.q() - 1).map(|r| self.make_idempotent(r)).collect()
    }

    fn torus_position(&self, h: usize) -> usize {
        self.torus
            .iter()
            .position(|&x| x == h)
            .expect("torus element")
    }

    pub fn derive_relations(&self) -> Result<DerivedRelations> {
        let t = self.tower;
        let nh = self.torus.len();
        let es = self.idempotents()?;
        let tn = self.t_basis(self.n_s);

        let mut alpha = vec![FFElem::ZERO; nh];
        let mut beta = vec![FFElem::ZERO; nh];
        let square = self.convolve(&tn, &tn);
        let mut covered = vec![false; self.cosets.num_double()];
        for (i, &h) in self.torus.iter().enumerate() {
            let dh = self.cosets.double_coset_of(h);
            let hn = self.table.mul(t, h, self.n_s);
            let dhn = self.cosets.double_coset_of(hn);
            alpha[i] = square.values[dh];
            beta[i] = square.values[dhn];
            covered[dh] = true;
            covered[dhn] = true;
            if self.convolve(&self.t_basis(h), &tn) != self.t_basis(hn) {
                return Err(Error::Inconsistent("T_h T_{n_s} ≠ T_{h n_s}".into()));
            }
        }
        if covered.iter().any(|c| !c) {
            return Err(Error::Inconsistent(
                "double cosets are not all of the form U h U or U h n_s U".into(),
            ));
        }

        let mut scalar = vec![vec![FFElem::ZERO; es.len()]; nh];
        for (i, &h) in self.torus.iter().enumerate() {
            let th = self.t_basis(h);
            for (r, e) in es.iter().enumerate() {
                let prod = self.convolve(&th, e);
                let id = self.cosets.double_coset_of(self.table.identity);
                let c = t.div(prod.values[id], e.values[id])?;
                if prod != e.scale(t, c) {
                    return Err(Error::Inconsistent(
                        "T_h e_r is not a multiple of e_r".into(),
                    ));
                }
                scalar[i][r] = c;
            }
        }

        let mut swap = Vec::with_capacity(es.len());
        for e in &es {
            let lhs = self.convolve(&tn, e);
            let r2 = es
                .iter()
                .position(|e2| self.convolve(e2, &tn) == lhs)
                .ok_or_else(|| Error::Inconsistent("T_{n_s} e_r has no partner".into()))?;
            swap.push(r2 as u64);
        }

        let inverse = self
            .torus
            .iter()
            .map(|&h| self.torus_position(self.table.inv(h)))
            .collect();
        Ok(DerivedRelations {
            alpha,
            beta,
            scalar,
            swap,
            inverse,
        })
    }

    fn algebra_checks(&self) -> Result<Vec<Check>> {
        let t = self.tower;
        let es = self.idempotents()?;
        let mut checks = Vec::new();
        for (r, e) in es.iter().enumerate() {
            checks.push(Check {
                name: format!("e_{r} * e_{r} = e_{r}"),
                passed: self.convolve(e, e) == *e,
            });
            for (r2, e2) in es.iter().enumerate() {
                if r2 != r {
                    checks.push(Check {
                        name: format!("e_{r} * e_{r2} = 0"),
                        passed: self.convolve(e, e2).is_zero(),
                    });
                }
            }
        }
        let total = es
            .iter()
            .fold(CosetFunction::zero(&self.cosets), |acc, e| acc.add(t, e));
        checks.push(Check {
            name: "sum of e_r = T_1".into(),
            passed: total == self.t_basis(self.table.identity),
        });
        let mut mult = true;
        for &h in &self.torus {
            for &h2 in &self.torus {
                let lhs = self.convolve(&self.t_basis(h), &self.t_basis(h2));
                mult &= lhs == self.t_basis(self.table.mul(t, h, h2));
            }
        }
        checks.push(Check {
            name: "T_h * T_h' = T_hh'".into(),
            passed: mult,
        });
        Ok(checks)
    }

    pub fn format_quadratic(&self, rel: &DerivedRelations) -> Result<String> {
        let t = self.tower;
        let d = t.layer_degree(Layer::Base);
        let mut terms = Vec::new();
        for (i, &h) in self.torus.iter().enumerate() {
            let a = t.format(self.table.element(h).a, d, "z")?;
            if !rel.alpha[i].is_zero() {
                terms.push(format!("{}·T[{a}]", signed(t, rel.alpha[i], d)?));
            }
            if !rel.beta[i].is_zero() {
                terms.push(format!("{}·T[{a}]·T_ns", signed(t, rel.beta[i], d)?));
            }
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        Ok(format!("T_ns^2 = {}", terms.join(" + ")))
    }

    /// Checks the algebra laws and every module against the derived relations.
    pub fn validate_modules(&self, modules: &[HeckeModule1D]) -> Result<RelationReport> {
        let rel = self.derive_relations()?;
        let mut checks = self.algebra_checks()?;
        for m in modules {
            checks.extend(module_checks(self.tower, &rel, m));
        }
        Ok(RelationReport {
            q: self.q(),
            checks,
            quadratic: self.format_quadratic(&rel)?,
        })
    }
}

fn signed(t: &FieldTower, x: FFElem, d: u32) -> Result<String> {
    if let Some(v) = t.to_fp(x) {
        return Ok(symmetric(v, t.p()).to_string());
    }
    t.format(x, d, "z")
}

fn symmetric(v: u64, p: u64) -> i64 {
    if v > p / 2 {
        v as i64 - p as i64
    } else {
        v as i64
    }
}

fn module_checks(t: &FieldTower, rel: &DerivedRelations, m: &HeckeModule1D) -> Vec<Check> {
    let nr = rel.swap.len() as u64;
    let c = m.r as usize;
    let mut out = Vec::new();
    for (gen, a, prime) in [("T_ns", m.a_s, false), ("T_ns'", m.a_s_prime, true)] {
        let a = t.from_int(a);
        let (mut lin, mut cst) = (FFElem::ZERO, FFElem::ZERO);
        for h in 0..rel.alpha.len() {
            let src = if prime { rel.inverse[h] } else { h };
            let tau = rel.scalar[h][c];
            cst = t.add(cst, t.mul(rel.alpha[src], tau));
            lin = t.add(lin, t.mul(rel.beta[src], tau));
        }
        let residual = t.sub(t.sub(t.mul(a, a), cst), t.mul(a, lin));
        out.push(Check {
            name: format!("{}: quadratic relation of {gen}", m.name()),
            passed: residual.is_zero(),
        });
        let mut commutes = true;
        for r in 0..nr {
            let partner = if prime {
                (nr - rel.swap[((nr - r) % nr) as usize]) % nr
            } else {
                rel.swap[r as usize]
            };
            let lhs = (m.r == r) as i64 - (m.r == partner) as i64;
            commutes &= a.is_zero() || lhs == 0;
        }
        out.push(Check {
            name: format!("{}: {gen} e_r = e_r' {gen}", m.name()),
            passed: commutes,
        });
    }
    // ζ = T_ns T_ns' + (T_ns' + e_0)(T_ns + e_0) is central of length 2. It kills
    // the two supersingular characters on e_0 but not the trivial or sign one.
    let d = (m.r == 0) as i64;
    let zeta = t.add(
        t.from_int(m.a_s * m.a_s_prime),
        t.from_int((m.a_s + d) * (m.a_s_prime + d)),
    );
    out.push(Check {
        name: format!("{}: central element acts by zero", m.name()),
        passed: zeta.is_zero(),
    });
    out
}

/// The q supersingular characters, indexed 0..=q-1 with label q-1 sharing the
/// idempotent e_0 with label 0.
pub fn supersingular_table(q: u64) -> Result<Vec<HeckeModule1D>> {
    split_prime_power(q)?;
    let mut out = vec![HeckeModule1D {
        label: 0,
        r: 0,
        a_s: 0,
        a_s_prime: -1,
    }];
    for r in 1..q - 1 {
        out.push(HeckeModule1D {
            label: r,
            r,
            a_s: 0,
            a_s_prime: 0,
        });
    }
    out.push(HeckeModule1D {
        label: q - 1,
        r: 0,
        a_s: -1,
        a_s_prime: 0,
    });
    Ok(out)
}

/// M_r for 0 ≤ r ≤ p-1 (so M_{p-1} is the module labelled q-1 when q = p).
pub fn cusp_module(p: u64, r: u64) -> Result<HeckeModule1D> {
    if r >= p {
        return Err(Error::OutOfRange(format!("r = {r} not in [0, {}]", p - 1)));
    }
    Ok(supersingular_table(p)?[r as usize])
}

pub fn validate_relations(q: u64) -> Result<RelationReport> {
    let (p, f) = split_prime_power(q)?;
    let tower = FieldTower::new(p, f, 1)?;
    let hecke = FiniteHecke::new(&tower)?;
    hecke.validate_modules(&supersingular_table(q)?)
}
