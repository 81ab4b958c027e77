//! Finite unitary groups for F_{q²}/F_q with the hermitian form s = antidiag(1, 1).
//!
//! Elements are enumerated explicitly for q up to a bound, ordered
//! lexicographically by the discrete logs of their entries (zero first).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower, Layer};
use crate::linalg::{nullspace, Mat2};

pub const DEFAULT_BOUND: u64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// g* s g = s.
    U11,
    /// g* s g = s and det g = 1.
    SU11,
    /// g* s g = κ s with κ ∈ F_q^×.
    GU11,
    /// Norm-one scalars.
    U1,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u11" | "u(1,1)" => Ok(Variant::U11),
            "su11" | "su(1,1)" => Ok(Variant::SU11),
            "gu11" | "gu(1,1)" => Ok(Variant::GU11),
            "u1" | "u(1)" => Ok(Variant::U1),
            _ => Err(Error::Parse(format!("unknown group variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    pub variant: Variant,
    pub q: u64,
    elements: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
    inverse: Vec<usize>,
    pub identity: usize,
    /// Upper triangular elements.
    pub borel: Vec<usize>,
    /// u(x) = [[1, x], [0, 1]] with x + x̄ = 0.
    pub unipotent: Vec<usize>,
    /// Diagonal elements.
    pub torus: Vec<usize>,
    /// Scalar elements.
    pub center: Vec<usize>,
    /// The Weyl element [[0, -√ε⁻¹], [√ε, 0]].
    pub n_s: Mat2,
}

/// Similitude factor κ with g* s g = κ s, if g has that shape.
pub fn similitude(t: &FieldTower, g: &Mat2) -> Result<Option<FFElem>> {
    let s = Mat2::antidiag(FFElem::ONE, FFElem::ONE);
    let h = g.star(t)?.mul(t, &s).mul(t, g);
    if h.a.is_zero() && h.d.is_zero() && h.b == h.c && !h.b.is_zero() {
        Ok(Some(h.b))
    } else {
        Ok(None)
    }
}

pub fn weyl_element(t: &FieldTower) -> Mat2 {
    let r = t.sqrt_epsilon();
    Mat2::antidiag(t.neg(t.inv(r).expect("√ε ≠ 0")), r)
}

pub fn enumerate_group(t: &FieldTower, variant: Variant) -> Result<GroupTable> {
    enumerate_group_bounded(t, variant, DEFAULT_BOUND)
}

pub fn enumerate_group_bounded(t: &FieldTower, variant: Variant, bound: u64) -> Result<GroupTable> {
    let q = t.q();
    if q > bound {
        return Err(Error::BoundExceeded { q, bound });
    }
    let d2 = t.layer_degree(Layer::Quadratic);
    let field = t.elements(d2)?;
    let trace_zero = |x: FFElem| -> bool { t.trace(x).map(|v| v.is_zero()).unwrap_or(false) };
    let mut elements = Vec::new();
    if variant == Variant::U1 {
        for &a in &field[1..] {
            if t.norm(a)? == FFElem::ONE {
                elements.push(Mat2::diag(a, a));
            }
        }
    } else {
        let kappas: Vec<FFElem> = match variant {
            Variant::GU11 => t.units(t.layer_degree(Layer::Base))?,
            _ => vec![FFElem::ONE],
        };
        for &a in &field {
            for &c in &field {
                if (a.is_zero() && c.is_zero()) || !trace_zero(t.mul(t.conj(a)?, c)) {
                    continue;
                }
                let abar = t.conj(a)?;
                let cbar = t.conj(c)?;
                for &kappa in &kappas {
                    if !a.is_zero() {
                        for &b in &field {
                            let d = t.div(t.sub(kappa, t.mul(cbar, b)), abar)?;
                            if trace_zero(t.mul(t.conj(b)?, d)) {
                                elements.push(Mat2::new(a, b, c, d));
                            }
                        }
                    } else {
                        let b = t.div(kappa, cbar)?;
                        for &d in &field {
                            if trace_zero(t.mul(t.conj(b)?, d)) {
                                elements.push(Mat2::new(a, b, c, d));
                            }
                        }
                    }
                }
            }
        }
        if variant == Variant::SU11 {
            elements.retain(|g| g.det(t) == FFElem::ONE);
        }
    }
    elements.sort();
    let index: HashMap<Mat2, usize> = elements.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let inverse = elements
        .iter()
        .map(|g| index[&g.inv(t).expect("group elements are invertible")])
        .collect();
    let pick = |pred: &dyn Fn(&Mat2) -> bool| -> Vec<usize> {
        elements
            .iter()
            .enumerate()
            .filter(|(_, g)| pred(g))
            .map(|(i, _)| i)
            .collect()
    };
    let borel = pick(&|g| g.c.is_zero());
    let unipotent = pick(&|g| g.c.is_zero() && g.a == FFElem::ONE && g.d == FFElem::ONE);
    let torus = pick(&|g| g.is_diagonal());
    let center = pick(&|g| g.is_diagonal() && g.a == g.d);
    let identity = index[&Mat2::identity()];
    Ok(GroupTable {
        variant,
        q,
        elements,
        index,
        inverse,
        identity,
        borel,
        unipotent,
        torus,
        center,
        n_s: weyl_element(t),
    })
}

impl GroupTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Mat2 {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Mat2) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn mul(&self, t: &FieldTower, i: usize, j: usize) -> usize {
        let g = self.elements[i].mul(t, &self.elements[j]);
        self.index[&g]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn to_json(&self, t: &FieldTower) -> Result<serde_json::Value> {
        let d2 = t.layer_degree(Layer::Quadratic);
        let fmt = |x: FFElem| t.format(x, d2, "w");
        let mut els = Vec::with_capacity(self.len());
        for g in &self.elements {
            els.push(json!([fmt(g.a)?, fmt(g.b)?, fmt(g.c)?, fmt(g.d)?]));
        }
        Ok(json!({
            "variant": self.variant,
            "q": self.q,
            "order": self.len(),
            "field": t.to_json(),
            "generator": "w",
            "borel_order": self.borel.len(),
            "unipotent_order": self.unipotent.len(),
            "torus_order": self.torus.len(),
            "center_order": self.center.len(),
            "elements": els,
        }))
    }
}

/// [Γ : ker det] for the U(1,1) table; equals the order of the image of det.
pub fn det_norm_index(t: &FieldTower, table: &GroupTable) -> usize {
    let kernel = table
        .elements()
        .iter()
        .filter(|g| g.det(t) == FFElem::ONE)
        .count();
    table.len() / kernel
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruhatCell {
    Borel,
    /// g = u · n_s · b with u unipotent and b upper triangular.
    Big {
        u: Mat2,
        b: Mat2,
    },
}

pub fn bruhat_decompose(t: &FieldTower, table: &GroupTable, g: &Mat2) -> Result<BruhatCell> {
    let gi = table
        .index_of(g)
        .ok_or_else(|| Error::OutOfRange("element not in the group".into()))?;
    if table.element(gi).c.is_zero() {
        return Ok(BruhatCell::Borel);
    }
    let ns_inv = table.n_s.inv(t)?;
    for &ui in &table.unipotent {
        let u = *table.element(ui);
        let b = ns_inv.mul(t, &u.inv(t)?).mul(t, g);
        if b.c.is_zero() {
            return Ok(BruhatCell::Big { u, b });
        }
    }
    Err(Error::Inconsistent("no Bruhat factorisation found".into()))
}

/// g ↦ D g D⁻¹ with D = diag(√ε, 1), sending SU(1,1) onto SL_2(F_q).
pub fn to_sl2(t: &FieldTower, g: &Mat2) -> Result<Mat2> {
    let r = t.sqrt_epsilon();
    let d = Mat2::diag(r, FFElem::ONE);
    Ok(d.mul(t, g).mul(t, &d.inv(t)?))
}

/// Left and double cosets of the unipotent subgroup.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    left: Vec<usize>,
    left_reps: Vec<usize>,
    double: Vec<usize>,
    double_reps: Vec<usize>,
    double_sizes: Vec<usize>,
}

impl CosetSpace {
    pub fn new(t: &FieldTower, table: &GroupTable) -> Self {
        let n = table.len();
        let us = &table.unipotent;
        let mut left = vec![usize::MAX; n];
        let mut left_reps = Vec::new();
        for g in 0..n {
            if left[g] != usize::MAX {
                continue;
            }
            let id = left_reps.len();
            left_reps.push(g);
            for &u in us {
                left[table.mul(t, g, u)] = id;
            }
        }
        let mut double = vec![usize::MAX; n];
        let mut double_reps = Vec::new();
        let mut double_sizes = Vec::new();
        for g in 0..n {
            if double[g] != usize::MAX {
                continue;
            }
            let id = double_reps.len();
            double_reps.push(g);
            let mut size = 0;
            for &u in us {
                let ug = table.mul(t, u, g);
                for &v in us {
                    let x = table.mul(t, ug, v);
                    if double[x] == usize::MAX {
                        double[x] = id;
                        size += 1;
                    }
                }
            }
            double_sizes.push(size);
        }
        CosetSpace {
            left,
            left_reps,
            double,
            double_reps,
            double_sizes,
        }
    }

    pub fn double_coset_of(&self, g: usize) -> usize {
        self.double[g]
    }

    pub fn left_coset_of(&self, g: usize) -> usize {
        self.left[g]
    }

    pub fn double_reps(&self) -> &[usize] {
        &self.double_reps
    }

    pub fn double_sizes(&self) -> &[usize] {
        &self.double_sizes
    }

    pub fn left_reps(&self) -> &[usize] {
        &self.left_reps
    }

    pub fn num_double(&self) -> usize {
        self.double_reps.len()
    }
}

/// A U-bi-invariant function on the group, stored by double coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetFunction {
    pub values: Vec<FFElem>,
}

impl CosetFunction {
    pub fn zero(cs: &CosetSpace) -> Self {
        CosetFunction {
            values: vec![FFElem::ZERO; cs.num_double()],
        }
    }

    /// Characteristic function of U g U.
    pub fn indicator(cs: &CosetSpace, g: usize) -> Self {
        let mut f = Self::zero(cs);
        f.values[cs.double_coset_of(g)] = FFElem::ONE;
        f
    }

    /// Reads a function given on every group element, rejecting non-bi-invariant input.
    pub fn from_full(cs: &CosetSpace, full: &[FFElem]) -> Result<Self> {
        let mut f = Self::zero(cs);
        let mut seen = vec![false; cs.num_double()];
        for (g, &v) in full.iter().enumerate() {
            let d = cs.double_coset_of(g);
            if seen[d] && f.values[d] != v {
                return Err(Error::NotBiInvariant);
            }
            seen[d] = true;
            f.values[d] = v;
        }
        if full.len() != cs.double.len() {
            return Err(Error::OutOfRange("function length".into()));
        }
        Ok(f)
    }

    pub fn eval(&self, cs: &CosetSpace, g: usize) -> FFElem {
        self.values[cs.double_coset_of(g)]
    }

    pub fn add(&self, t: &FieldTower, o: &Self) -> Self {
        CosetFunction {
            values: self
                .values
                .iter()
                .zip(&o.values)
                .map(|(&a, &b)| t.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, t: &FieldTower, s: FFElem) -> Self {
        CosetFunction {
            values: self.values.iter().map(|&a| t.mul(s, a)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// (f₁ ∗ f₂)(g) = Σ_{x ∈ Γ/U} f₁(x) f₂(x⁻¹g); the indicator of U is the unit.
pub fn convolve(
    t: &FieldTower,
    table: &GroupTable,
    cs: &CosetSpace,
    f1: &CosetFunction,
    f2: &CosetFunction,
) -> CosetFunction {
    let mut out = CosetFunction::zero(cs);
    for (d, &g) in cs.double_reps().iter().enumerate() {
        let mut acc = FFElem::ZERO;
        for &x in cs.left_reps() {
            let a = f1.eval(cs, x);
            if a.is_zero() {
                continue;
            }
            let y = table.mul(t, table.inv(x), g);
            acc = t.add(acc, t.mul(a, f2.eval(cs, y)));
        }
        out.values[d] = acc;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymInvariants {
    pub dim: usize,
    /// Coordinates in the basis x^{r-i} y^i, i = 0..r.
    pub basis: Vec<Vec<u64>>,
}

/// Matrix of g on Sym^r(F_p²): column i is the image of x^{r-i} y^i under
/// x^{r-i} y^i ↦ (ax + cy)^{r-i} (bx + dy)^i.
pub fn sym_matrix(t: &FieldTower, g: &Mat2, r: usize) -> Vec<Vec<FFElem>> {
    let binom = |n: usize| -> Vec<FFElem> {
        let mut row = vec![1i64];
        for _ in 0..n {
            let mut next = vec![1i64; row.len() + 1];
            for j in 1..row.len() {
                next[j] = (row[j - 1] + row[j]) % t.p() as i64;
            }
            row = next;
        }
        row.into_iter().map(|c| t.from_int(c)).collect()
    };
    // (u x + v y)^m as coefficients of y^0..y^m
    let expand = |u: FFElem, v: FFElem, m: usize| -> Vec<FFElem> {
        binom(m)
            .into_iter()
            .enumerate()
            .map(|(s, c)| t.mul(c, t.mul(t.pow(u, (m - s) as u64), t.pow(v, s as u64))))
            .collect()
    };
    let mut cols = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let left = expand(g.a, g.c, r - i);
        let right = expand(g.b, g.d, i);
        let mut col = vec![FFElem::ZERO; r + 1];
        for (s, &x) in left.iter().enumerate() {
            for (u, &y) in right.iter().enumerate() {
                col[s + u] = t.add(col[s + u], t.mul(x, y));
            }
        }
        cols.push(col);
    }
    (0..=r)
        .map(|row| (0..=r).map(|c| cols[c][row]).collect())
        .collect()
}

/// Invariants of the unipotent subgroup on Sym^r, through the isomorphism with SL_2(F_p).
pub fn sym_weight_invariants(t: &FieldTower, su: &GroupTable, r: usize) -> Result<SymInvariants> {
    if t.f() != 1 {
        return Err(Error::NeedsPrimeField);
    }
    if su.variant != Variant::SU11 {
        return Err(Error::OutOfRange("expected the SU(1,1) table".into()));
    }
    let mut rows = Vec::new();
    for &ui in &su.unipotent {
        let u = to_sl2(t, su.element(ui))?;
        let m = sym_matrix(t, &u, r);
        for (i, row) in m.into_iter().enumerate() {
            rows.push(
                row.into_iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { t.sub(x, FFElem::ONE) } else { x })
                    .collect(),
            );
        }
    }
    let basis = nullspace(t, &rows, r + 1)?
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|x| t.to_fp(x).expect("prime-field vector"))
                .collect()
        })
        .collect::<Vec<Vec<u64>>>();
    Ok(SymInvariants {
        dim: basis.len(),
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(t: &FieldTower, variant: Variant) -> usize {
        let field = t.elements(2 * t.f()).unwrap();
        let mut n = 0;
        for &a in &field {
            for &b in &field {
                for &c in &field {
                    for &d in &field {
                        let g = Mat2::new(a, b, c, d);
                        let Some(k) = similitude(t, &g).unwrap() else {
                            continue;
                        };
                        let ok = match variant {
                            Variant::U11 => k == FFElem::ONE,
                            Variant::SU11 => k == FFElem::ONE && g.det(t) == FFElem::ONE,
                            Variant::GU11 => t.in_subfield(k, t.f()),
                            Variant::U1 => unreachable!(),
                        };
                        n += ok as usize;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn orders_at_q3_match_brute_force() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        for v in [Variant::U11, Variant::SU11, Variant::GU11] {
            let g = enumerate_group(&t, v).unwrap();
            assert_eq!(g.len(), brute_count(&t, v), "{v:?}");
        }
        assert_eq!(enumerate_group(&t, Variant::U11).unwrap().len(), 96);
        assert_eq!(enumerate_group(&t, Variant::SU11).unwrap().len(), 24);
        assert_eq!(enumerate_group(&t, Variant::U1).unwrap().len(), 4);
    }

    #[test]
    fn order_formulas() {
        for (p, f) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let t = FieldTower::new(p, f, 1).unwrap();
            let q = t.q() as usize;
            let u = enumerate_group(&t, Variant::U11).unwrap();
            assert_eq!(u.len(), q * (q - 1) * (q + 1) * (q + 1));
            assert_eq!(u.unipotent.len(), q);
            assert_eq!(u.borel.len(), q * (q * q - 1));
            assert_eq!(u.center.len(), q + 1);
            assert_eq!(det_norm_index(&t, &u), q + 1);
            let s = enumerate_group(&t, Variant::SU11).unwrap();
            assert_eq!(s.len(), q * (q * q - 1));
            assert_eq!(s.torus.len(), q - 1);
            let gu = enumerate_group(&t, Variant::GU11).unwrap();
            assert_eq!(gu.len(), u.len() * (q - 1));
        }
    }

    #[test]
    fn bound_is_enforced() {
        let t = FieldTower::new(11, 1, 1).unwrap();
        assert_eq!(
            enumerate_group(&t, Variant::SU11).unwrap_err(),
            Error::BoundExceeded { q: 11, bound: 9 }
        );
    }

    #[test]
    fn closed_under_products_and_sorted() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let g = enumerate_group(&t, Variant::U11).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.mul(&t, i, g.inv(i)), g.identity);
            for j in 0..g.len() {
                assert!(g.index_of(&g.element(i).mul(&t, g.element(j))).is_some());
            }
        }
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        assert!(g.index_of(&g.n_s).is_some());
    }

    #[test]
    fn bruhat_cells_partition() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let g = enumerate_group(&t, Variant::U11).unwrap();
        let mut big = 0;
        for x in g.elements() {
            match bruhat_decompose(&t, &g, x).unwrap() {
                BruhatCell::Borel => assert!(x.c.is_zero()),
                BruhatCell::Big { u, b } => {
                    big += 1;
                    assert!(b.c.is_zero() && g.index_of(&b).is_some());
                    assert_eq!(u.mul(&t, &g.n_s).mul(&t, &b), *x);
                }
            }
        }
        assert_eq!(g.borel.len(), 24);
        assert_eq!(big, 72);
    }

    #[test]
    fn su_maps_onto_sl2() {
        for (p, f) in [(3, 1), (5, 1), (3, 2)] {
            let t = FieldTower::new(p, f, 1).unwrap();
            let s = enumerate_group(&t, Variant::SU11).unwrap();
            let mut images = std::collections::HashSet::new();
            for g in s.elements() {
                let h = to_sl2(&t, g).unwrap();
                assert!(h.entries().iter().all(|&x| t.in_subfield(x, f)));
                assert_eq!(h.det(&t), FFElem::ONE);
                images.insert(h);
            }
            assert_eq!(images.len(), s.len());
        }
        let t = FieldTower::new(5, 1, 1).unwrap();
        assert_eq!(
            to_sl2(&t, &weyl_element(&t)).unwrap(),
            Mat2::from_ints(&t, 0, -1, 1, 0)
        );
    }

    #[test]
    fn coset_function_validation() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let s = enumerate_group(&t, Variant::SU11).unwrap();
        let cs = CosetSpace::new(&t, &s);
        assert_eq!(cs.num_double(), 4);
        let mut full = vec![FFElem::ZERO; s.len()];
        full[s.identity] = FFElem::ONE;
        assert_eq!(
            CosetFunction::from_full(&cs, &full).unwrap_err(),
            Error::NotBiInvariant
        );
        for &u in &s.unipotent {
            full[u] = FFElem::ONE;
        }
        let delta = CosetFunction::from_full(&cs, &full).unwrap();
        assert_eq!(delta, CosetFunction::indicator(&cs, s.identity));
    }

    #[test]
    fn indicator_of_u_is_the_unit() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        let s = enumerate_group(&t, Variant::SU11).unwrap();
        let cs = CosetSpace::new(&t, &s);
        let one = CosetFunction::indicator(&cs, s.identity);
        for &g in cs.double_reps() {
            let f = CosetFunction::indicator(&cs, g);
            assert_eq!(convolve(&t, &s, &cs, &one, &f), f);
            assert_eq!(convolve(&t, &s, &cs, &f, &one), f);
        }
    }

    #[test]
    fn sym_invariants_are_highest_weight_lines() {
        for p in [3u64, 5, 7] {
            let t = FieldTower::new(p, 1, 1).unwrap();
            let s = enumerate_group(&t, Variant::SU11).unwrap();
            for r in 0..p as usize {
                let inv = sym_weight_invariants(&t, &s, r).unwrap();
                assert_eq!(inv.dim, 1);
                let mut e0 = vec![0; r + 1];
                e0[0] = 1;
                assert_eq!(inv.basis[0], e0);
            }
        }
    }
}
