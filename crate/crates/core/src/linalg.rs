//! 2×2 matrices and row reduction over the ambient field.

use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower};

/// Row-major [[a, b], [c, d]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: FFElem,
    pub b: FFElem,
    pub c: FFElem,
    pub d: FFElem,
}

impl Mat2 {
    pub fn new(a: FFElem, b: FFElem, c: FFElem, d: FFElem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::diag(FFElem::ONE, FFElem::ONE)
    }

    pub fn diag(a: FFElem, d: FFElem) -> Self {
        Mat2::new(a, FFElem::ZERO, FFElem::ZERO, d)
    }

    pub fn antidiag(b: FFElem, c: FFElem) -> Self {
        Mat2::new(FFElem::ZERO, b, c, FFElem::ZERO)
    }

    pub fn from_ints(t: &FieldTower, a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(t.from_int(a), t.from_int(b), t.from_int(c), t.from_int(d))
    }

    pub fn entries(&self) -> [FFElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn mul(&self, t: &FieldTower, o: &Mat2) -> Mat2 {
        Mat2::new(
            t.add(t.mul(self.a, o.a), t.mul(self.b, o.c)),
            t.add(t.mul(self.a, o.b), t.mul(self.b, o.d)),
            t.add(t.mul(self.c, o.a), t.mul(self.d, o.c)),
            t.add(t.mul(self.c, o.b), t.mul(self.d, o.d)),
        )
    }

    pub fn add(&self, t: &FieldTower, o: &Mat2) -> Mat2 {
        Mat2::new(
            t.add(self.a, o.a),
            t.add(self.b, o.b),
            t.add(self.c, o.c),
            t.add(self.d, o.d),
        )
    }

    pub fn scale(&self, t: &FieldTower, s: FFElem) -> Mat2 {
        Mat2::new(
            t.mul(s, self.a),
            t.mul(s, self.b),
            t.mul(s, self.c),
            t.mul(s, self.d),
        )
    }

    pub fn det(&self, t: &FieldTower) -> FFElem {
        t.sub(t.mul(self.a, self.d), t.mul(self.b, self.c))
    }

    pub fn trace(&self, t: &FieldTower) -> FFElem {
        t.add(self.a, self.d)
    }

    pub fn adjugate(&self, t: &FieldTower) -> Mat2 {
        Mat2::new(self.d, t.neg(self.b), t.neg(self.c), self.a)
    }

    pub fn inv(&self, t: &FieldTower) -> Result<Mat2> {
        let det = self.det(t);
        Ok(self.adjugate(t).scale(t, t.inv(det)?))
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    /// Entrywise x ↦ x^q on an F_{q²}-matrix.
    pub fn conj(&self, t: &FieldTower) -> Result<Mat2> {
        Ok(Mat2::new(
            t.conj(self.a)?,
            t.conj(self.b)?,
            t.conj(self.c)?,
            t.conj(self.d)?,
        ))
    }

    /// Conjugate transpose over F_{q²}/F_q.
    pub fn star(&self, t: &FieldTower) -> Result<Mat2> {
        Ok(self.conj(t)?.transpose())
    }

    /// Entrywise power; on diagonal matrices this is the matrix power.
    pub fn map(&self, f: impl Fn(FFElem) -> FFElem) -> Mat2 {
        Mat2::new(f(self.a), f(self.b), f(self.c), f(self.d))
    }
}

/// Basis of {v : M v = 0} for an m×n matrix given by rows.
pub fn nullspace(t: &FieldTower, rows: &[Vec<FFElem>], n: usize) -> Result<Vec<Vec<FFElem>>> {
    let mut m: Vec<Vec<FFElem>> = rows.to_vec();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::OutOfRange("row length".into()));
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = t.inv(m[row][col])?;
        for x in m[row].iter_mut() {
            *x = t.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col];
                for j in 0..n {
                    let v = t.mul(factor, m[row][j]);
                    m[i][j] = t.sub(m[i][j], v);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&fc| {
            let mut v = vec![FFElem::ZERO; n];
            v[fc] = FFElem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = t.neg(m[r][fc]);
            }
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_adjugate() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        let g = Mat2::from_ints(&t, 1, 2, 3, 4);
        let gi = g.inv(&t).unwrap();
        assert_eq!(g.mul(&t, &gi), Mat2::identity());
        assert_eq!(g.mul(&t, &g.adjugate(&t)), Mat2::diag(g.det(&t), g.det(&t)));
        assert!(Mat2::from_ints(&t, 1, 2, 2, 4).inv(&t).is_err());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let e = |n| t.from_int(n);
        let rows = vec![vec![e(1), e(1), e(0), e(2)], vec![e(0), e(1), e(1), e(1)]];
        let ns = nullspace(&t, &rows, 4).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = t.sum(r.iter().zip(v).map(|(&a, &b)| t.mul(a, b)));
                assert!(dot.is_zero());
            }
        }
    }
}
