//! Exact linear algebra over the rationals: vector helpers and an
//! incrementally built basis that remembers which word produced each vector.

use num::{BigRational, One, Zero};

use crate::words::Word;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x * y
        }
    })
}

/// `m · v` for a row-major matrix.
pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `r · m` for a row vector `r`.
pub fn vec_mat(r: &[Rat], m: &[Vec<Rat>]) -> Vec<Rat> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = zeros(cols);
    for (x, row) in r.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            if !y.is_zero() {
                *o += x * y;
            }
        }
    }
    out
}

/// Spanning set with witnesses, kept in echelon form for membership tests.
///
/// Pivots are chosen as the first nonzero coordinate of each reduced vector.
#[derive(Clone, Debug, Default)]
pub struct VecSpaceBasis {
    dim: usize,
    vectors: Vec<Vec<Rat>>,
    witnesses: Vec<Word>,
    // Echelon rows with pivot entry 1, each row zero at the pivots of earlier rows.
    echelon: Vec<(usize, Vec<Rat>)>,
    // echelon[i] = Σ_j combos[i][j] · vectors[j]
    combos: Vec<Vec<Rat>>,
}

impl VecSpaceBasis {
    pub fn new(dim: usize) -> Self {
        VecSpaceBasis {
            dim,
            ..Default::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    pub fn witnesses(&self) -> &[Word] {
        &self.witnesses
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    /// Reduces `v` against the echelon rows; returns the remainder and the
    /// coefficients used for each row.
    fn reduce(&self, v: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let mut r = v.to_vec();
        let mut coeffs = zeros(self.echelon.len());
        for (i, (p, row)) in self.echelon.iter().enumerate() {
            if r[*p].is_zero() {
                continue;
            }
            let c = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
            coeffs[i] = c;
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        is_zero(&self.reduce(v).0)
    }

    /// Adds `v` if it is independent of the current vectors.
    pub fn insert(&mut self, v: Vec<Rat>, witness: Word) -> bool {
        assert_eq!(v.len(), self.dim, "vector length must match basis dimension");
        let (r, coeffs) = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.vectors.len();
        let inv = r[p].recip();
        let row: Vec<Rat> = r.iter().map(|x| x * &inv).collect();
        let mut combo = zeros(k + 1);
        combo[k] = Rat::one();
        for (c, old) in coeffs.iter().zip(&self.combos) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in combo.iter_mut().zip(old) {
                *x -= c * y;
            }
        }
        for x in combo.iter_mut() {
            *x *= &inv;
        }
        for old in self.combos.iter_mut() {
            old.push(Rat::zero());
        }
        self.echelon.push((p, row));
        self.combos.push(combo);
        self.vectors.push(v);
        self.witnesses.push(witness);
        true
    }

    /// Coefficients `c` with `v = Σ c_j · vectors[j]`, if `v` is in the span.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let (r, coeffs) = self.reduce(v);
        if !is_zero(&r) {
            return None;
        }
        let mut out = zeros(self.rank());
        for (c, combo) in coeffs.iter().zip(&self.combos) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(combo) {
                *x += c * y;
            }
        }
        Some(out)
    }
}

/// Rank of a set of vectors of length `dim`.
pub fn rank_of<'a>(dim: usize, vs: impl IntoIterator<Item = &'a Vec<Rat>>) -> usize {
    let mut b = VecSpaceBasis::new(dim);
    for v in vs {
        b.insert(v.clone(), Word::empty());
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_coords() {
        let mut b = VecSpaceBasis::new(3);
        assert!(b.insert(vec![rat(1), rat(1), rat(0)], Word::empty()));
        assert!(b.insert(vec![rat(0), rat(2), rat(2)], Word::empty()));
        assert!(!b.insert(vec![rat(1), rat(3), rat(2)], Word::empty()));
        assert_eq!(b.rank(), 2);
        let c = b.coords(&[rat(2), rat(5), rat(3)]).unwrap();
        assert_eq!(c, vec![rat(2), ratio(3, 2)]);
        assert!(b.coords(&[rat(0), rat(0), rat(1)]).is_none());
        assert!(b.insert(vec![rat(0), rat(0), rat(1)], Word::empty()));
        assert!(b.is_full());
    }

    #[test]
    fn rationals_stay_reduced() {
        let x = ratio(6, -4);
        assert_eq!(x.numer(), &(-3).into());
        assert_eq!(x.denom(), &2.into());
        assert_eq!(x.clone() * x.recip(), rat(1));
    }

    #[test]
    fn vec_mat_and_mat_vec() {
        let m = vec![vec![rat(1), rat(0)], vec![rat(1), rat(2)]];
        assert_eq!(mat_vec(&m, &[rat(1), rat(0)]), vec![rat(1), rat(1)]);
        assert_eq!(vec_mat(&[rat(0), rat(1)], &m), vec![rat(1), rat(2)]);
    }
}
