//! Q-linear structure of Scalars and linear algebra over Q and Q(symbols).

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::intmat::{hermite_normal_form, IntMatrix};
use super::poly::{Monomial, Poly};
use super::scalar::{Scalar, SymbolTable};
use super::NumError;

/// Scalars written as rational vectors over a monomial basis, `x_i = Σ c_ij m_j / den`.
#[derive(Clone, Debug)]
pub struct QCoords {
    pub den: Poly,
    pub monomials: Vec<Monomial>,
    pub rows: Vec<Vec<BigRational>>,
}

pub fn common_table(xs: &[&Scalar]) -> Result<Option<Arc<SymbolTable>>, NumError> {
    let mut t: Option<Arc<SymbolTable>> = None;
    for x in xs {
        if let Some(tx) = x.table() {
            match &t {
                Some(t0) if !(Arc::ptr_eq(t0, tx) || t0 == tx) => {
                    return Err(NumError::MixedTables)
                }
                Some(_) => {}
                None => t = Some(tx.clone()),
            }
        }
    }
    Ok(t)
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = a.gcd(b);
    a.mul(&b.div_exact(&g).expect("gcd divides")).monic()
}

pub fn q_coords(xs: &[&Scalar]) -> Result<QCoords, NumError> {
    common_table(xs)?;
    let mut den = Poly::one();
    for x in xs {
        if !x.is_zero() {
            den = lcm(&den, x.den());
        }
    }
    let nums: Vec<Poly> = xs
        .iter()
        .map(|x| {
            if x.is_zero() {
                Poly::zero()
            } else {
                x.num()
                    .mul(&den.div_exact(x.den()).expect("lcm is a multiple"))
            }
        })
        .collect();
    let monomials: Vec<Monomial> = nums
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows = nums
        .iter()
        .map(|p| {
            let mut row = vec![BigRational::zero(); monomials.len()];
            for (m, c) in p.terms() {
                let j = monomials.binary_search(m).expect("monomial collected");
                row[j] = c.clone();
            }
            row
        })
        .collect();
    Ok(QCoords {
        den,
        monomials,
        rows,
    })
}

impl QCoords {
    /// Rebuilds the scalar for a coordinate row.
    pub fn to_scalar(&self, row: &[BigRational], table: Option<&Arc<SymbolTable>>) -> Scalar {
        let num = Poly::from_terms(
            self.monomials
                .iter()
                .cloned()
                .zip(row.iter().cloned())
                .filter(|(_, c)| !c.is_zero()),
        );
        Scalar::from_polys(num, self.den.clone(), table.cloned())
    }
}

/// Dimension of the Q-span; exact under the genericity declaration.
pub fn q_linear_rank(xs: &[Scalar]) -> Result<usize, NumError> {
    let refs: Vec<&Scalar> = xs.iter().collect();
    let qc = q_coords(&refs)?;
    Ok(rational_rank(&qc.rows))
}

pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    rational_rref(rows).1.len()
}

/// Reduced row echelon form over Q; returns nonzero rows and pivot columns.
pub fn rational_rref(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for j in 0..ncols {
                    let v = &m[r][j] * &k;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : x·M = 0}` over Q for the row matrix `rows`.
pub fn rational_left_kernel(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let t: Vec<Vec<BigRational>> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    if t.is_empty() {
        return (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if k == i { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
    }
    rational_nullspace(&t, n)
}

/// Basis of `{x : M·x = 0}` over Q where `M` has `n` columns.
pub fn rational_nullspace(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let (r, piv) = rational_rref(rows);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &pc) in r.iter().zip(&piv) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Smallest positive integer making every entry integral.
pub fn denominator_lcm(rows: &[Vec<BigRational>]) -> BigInt {
    let mut l = BigInt::one();
    for r in rows {
        for x in r {
            l = l.lcm(x.denom());
        }
    }
    l
}

pub fn to_int_rows(rows: &[Vec<BigRational>], scale: &BigInt) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let y = x * BigRational::from_integer(scale.clone());
                    debug_assert!(y.is_integer());
                    y.to_integer()
                })
                .collect()
        })
        .collect()
}

/// Canonical Z-basis of the subgroup of Q^n generated by `rows`.
pub fn rational_lattice_basis(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let d = denominator_lcm(rows);
    let ints = to_int_rows(rows, &d);
    let h = hermite_normal_form(&IntMatrix::from_rows_with_cols(&ints, n));
    let dd = BigRational::from_integer(d);
    h.basis()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| BigRational::from_integer(x) / &dd)
                .collect()
        })
        .collect()
}

/// Reduced row echelon form over Q(symbols).
pub fn scalar_rref(rows: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for j in 0..ncols {
                    let v = &m[r][j] * &k;
                    m[i][j] = &m[i][j] - &v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : M·x = 0}` over Q(symbols), `M` with `n` columns.
pub fn scalar_nullspace(rows: &[Vec<Scalar>], n: usize) -> Vec<Vec<Scalar>> {
    let (r, piv) = scalar_rref(rows);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (row, &pc) in r.iter().zip(&piv) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

/// One solution of `Σ_j c_j·cols[j] = b` over Q(symbols), free variables set to zero.
pub fn scalar_solve(cols: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = cols.len();
    let m = b.len();
    let rows: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let mut r: Vec<Scalar> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let (r, piv) = scalar_rref(&rows);
    if piv.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (row, &pc) in r.iter().zip(&piv) {
        x[pc] = row[n].clone();
    }
    Some(x)
}

pub fn scalar_rank(rows: &[Vec<Scalar>]) -> usize {
    scalar_rref(rows).1.len()
}

/// Rank over C of a matrix of scalars after substituting complex values for
/// every symbol. Diagnostics only; results never depend on it.
pub fn numeric_rank(rows: &[Vec<Scalar>], values: &[Complex64], tol: f64) -> usize {
    let mut m: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.eval(values)).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let scale = m
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(1.0_f64, f64::max);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm()))
        else {
            break;
        };
        if m[p][c].norm() <= tol * scale {
            continue;
        }
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let k = m[i][c] / m[rank][c];
            for j in c..ncols {
                let v = k * m[rank][j];
                m[i][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<SymbolTable> {
        SymbolTable::from_names(&["mu", "alpha_t", "beta_t"]).unwrap().shared()
    }

    #[test]
    fn q_rank_examples() {
        let t = table();
        let p = |s: &str| Scalar::parse(s, &t).unwrap();
        assert_eq!(q_linear_rank(&[p("1"), p("2*alpha_t"), p("2*beta_t")]).unwrap(), 3);
        assert_eq!(q_linear_rank(&[p("1"), p("2"), p("1/2")]).unwrap(), 1);
        assert_eq!(q_linear_rank(&[p("1"), p("mu"), p("1+mu")]).unwrap(), 2);
        assert_eq!(q_linear_rank(&[p("1/mu"), p("1/(mu+1)"), p("1/(mu*(mu+1))")]).unwrap(), 2);
    }

    #[test]
    fn mixed_tables_rejected() {
        let a = Scalar::parse("mu", &table()).unwrap();
        let other = SymbolTable::from_names(&["mu"]).unwrap().shared();
        let b = Scalar::parse("mu", &other).unwrap();
        assert!(matches!(q_linear_rank(&[a, b]), Err(NumError::MixedTables)));
    }

    #[test]
    fn lattice_basis_is_canonical() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let g1 = vec![vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(1, 1)]];
        let g2 = vec![
            vec![r(1, 2), r(1, 1)],
            vec![r(1, 1), r(1, 1)],
            vec![r(0, 1), r(3, 1)],
        ];
        assert_eq!(rational_lattice_basis(&g1, 2), rational_lattice_basis(&g2, 2));
    }
}
