use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::FieldElement;
use super::poly::RatPoly;

/// Kernel vector of a rational matrix given by columns, or `None` if the columns are independent.
pub(crate) fn kernel_vector(columns: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let ncols = columns.len();
    let nrows = columns.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = (0..nrows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = BigRational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); ncols];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// Monic minimal polynomial of a field element over Q: the first linear
/// dependence among 1, a, a², ….
pub fn element_minpoly(a: &FieldElement) -> RatPoly {
    let d = a.field().degree();
    let mut powers = vec![FieldElement::one(a.field()).coeffs().to_vec()];
    let mut cur = FieldElement::one(a.field());
    for _ in 1..=d {
        cur = &cur * a;
        powers.push(cur.coeffs().to_vec());
        if let Some(v) = kernel_vector(&powers) {
            let p = RatPoly::new(v).monic();
            debug_assert!(d % p.degree().unwrap() == 0);
            return p;
        }
    }
    unreachable!("d+1 vectors in a d-dimensional space are dependent")
}
