//! Subgroups of C^a ⊕ Z^b spanned by complex lines and integer combinations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactnum::{
    denominator_lcm, integer_kernel, q_coords, scalar_rref, scalar_solve, solve_integer,
    IntMatrix, Scalar,
};

/// Element of the free module C^a ⊕ Z^b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    pub cont: Vec<Scalar>,
    pub disc: Vec<BigInt>,
}

impl Elem {
    pub fn zero(a: usize, b: usize) -> Self {
        Elem {
            cont: vec![Scalar::zero(); a],
            disc: vec![BigInt::zero(); b],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cont.iter().all(Scalar::is_zero) && self.disc.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Elem) -> Elem {
        Elem {
            cont: self.cont.iter().zip(&o.cont).map(|(x, y)| x + y).collect(),
            disc: self.disc.iter().zip(&o.disc).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Elem {
        let ks = Scalar::from_bigint(k.clone());
        Elem {
            cont: self.cont.iter().map(|x| x * &ks).collect(),
            disc: self.disc.iter().map(|x| x * k).collect(),
        }
    }

    pub fn neg(&self) -> Elem {
        Elem {
            cont: self.cont.iter().map(|x| -x).collect(),
            disc: self.disc.iter().map(|x| -x).collect(),
        }
    }

    pub fn combination(terms: &[(BigInt, &Elem)], a: usize, b: usize) -> Elem {
        terms
            .iter()
            .filter(|(k, _)| !k.is_zero())
            .fold(Elem::zero(a, b), |acc, (k, e)| acc.add(&e.scale_int(k)))
    }
}

/// The subgroup `C·lines + Z·gens` of C^a ⊕ Z^b; lines have no discrete part.
#[derive(Clone, Debug)]
pub struct Span {
    pub a: usize,
    pub b: usize,
    pub lines: Vec<Vec<Scalar>>,
    pub gens: Vec<Elem>,
    rref: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

/// Coefficients expressing an element in a `Span`.
#[derive(Clone, Debug)]
pub struct SpanSolution {
    pub line_coeffs: Vec<Scalar>,
    pub gen_coeffs: Vec<BigInt>,
}

impl Span {
    pub fn new(a: usize, b: usize, lines: Vec<Vec<Scalar>>, gens: Vec<Elem>) -> Span {
        let (rref, pivots) = scalar_rref(&lines);
        Span {
            a,
            b,
            lines,
            gens,
            rref,
            pivots,
        }
    }

    pub fn line_rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates not eliminated by the lines.
    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.a).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Reduces a continuous vector modulo the C-span of the lines; pivot
    /// coordinates of the result are zero.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (row, &pc) in self.rref.iter().zip(&self.pivots) {
            if out[pc].is_zero() {
                continue;
            }
            let k = out[pc].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o - &(r * &k);
                }
            }
        }
        out
    }

    /// Coordinates of `reduce(v)` on the free coordinates.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.free_coords().into_iter().map(|c| r[c].clone()).collect()
    }

    pub fn contains_line(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Integer system `Σ m_j gens_j ≡ x` modulo lines, as a rational matrix
    /// (one column per generator) and right-hand side.
    fn system(&self, extra: &[&Elem]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
        let free = self.free_coords();
        let proj: Vec<Vec<Scalar>> = self
            .gens
            .iter()
            .chain(extra.iter().copied())
            .map(|g| {
                let r = self.reduce(&g.cont);
                free.iter().map(|&c| r[c].clone()).collect()
            })
            .collect();
        let flat: Vec<&Scalar> = proj.iter().flatten().collect();
        let qc = q_coords(&flat).expect("scalars share one table");
        let nm = qc.monomials.len();
        let ncoord = free.len();
        let all: Vec<&Elem> = self.gens.iter().chain(extra.iter().copied()).collect();
        let cols: Vec<Vec<BigRational>> = all
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let mut col = Vec::with_capacity(ncoord * nm + self.b);
                for c in 0..ncoord {
                    col.extend(qc.rows[k * ncoord + c].iter().cloned());
                }
                col.extend(g.disc.iter().map(|x| BigRational::from_integer(x.clone())));
                col
            })
            .collect();
        let ng = self.gens.len();
        (cols[..ng].to_vec(), cols[ng..].to_vec())
    }

    /// Integer coefficient vectors `m` with `Σ m_j gens_j` in the C-span of the lines.
    pub fn integer_relations(&self) -> Vec<Vec<BigInt>> {
        if self.gens.is_empty() {
            return Vec::new();
        }
        let (cols, _) = self.system(&[]);
        let a = int_matrix_from_cols(&cols, None).0;
        integer_kernel(&a)
    }

    pub fn solve(&self, x: &Elem) -> Option<SpanSolution> {
        let (cols, rhs) = self.system(&[x]);
        let rhs = &rhs[0];
        let gen_coeffs = if self.gens.is_empty() {
            if rhs.iter().any(|v| !v.is_zero()) {
                return None;
            }
            Vec::new()
        } else {
            let (a, b) = int_matrix_from_cols(&cols, Some(rhs));
            solve_integer(&a, &b.expect("rhs requested"))?.particular
        };
        let refs: Vec<(BigInt, &Elem)> = gen_coeffs
            .iter()
            .cloned()
            .zip(self.gens.iter())
            .collect();
        let lattice_part = Elem::combination(&refs, self.a, self.b);
        let residual: Vec<Scalar> = x
            .cont
            .iter()
            .zip(&lattice_part.cont)
            .map(|(p, q)| p - q)
            .collect();
        let line_coeffs = if self.lines.is_empty() {
            if residual.iter().any(|s| !s.is_zero()) {
                return None;
            }
            Vec::new()
        } else {
            scalar_solve(&self.lines, &residual)?
        };
        Some(SpanSolution {
            line_coeffs,
            gen_coeffs,
        })
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.solve(x).is_some()
    }
}

/// Builds an integer matrix from rational columns (and optional rhs), scaling
/// each equation row to clear denominators.
fn int_matrix_from_cols(
    cols: &[Vec<BigRational>],
    rhs: Option<&Vec<BigRational>>,
) -> (IntMatrix, Option<Vec<BigInt>>) {
    let nrows = cols.first().map_or_else(|| rhs.map_or(0, Vec::len), Vec::len);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(nrows);
    let mut b = Vec::with_capacity(nrows);
    for i in 0..nrows {
        let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
        if let Some(r) = rhs {
            row.push(r[i].clone());
        }
        let d = denominator_lcm(std::slice::from_ref(&row));
        let scaled: Vec<BigInt> = row
            .iter()
            .map(|x| (x * BigRational::from_integer(d.clone())).to_integer())
            .collect();
        if scaled.iter().all(Zero::is_zero) {
            continue;
        }
        let mut scaled = scaled;
        if rhs.is_some() {
            b.push(scaled.pop().expect("rhs entry"));
        }
        rows.push(scaled);
    }
    let m = IntMatrix::from_rows_with_cols(&rows, cols.len());
    (m, rhs.map(|_| b))
}

pub(crate) fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|k| if k == i { Scalar::one() } else { Scalar::zero() })
        .collect()
}

pub(crate) fn unit_int(n: usize, i: usize) -> Vec<BigInt> {
    (0..n)
        .map(|k| if k == i { BigInt::one() } else { BigInt::zero() })
        .collect()
}
