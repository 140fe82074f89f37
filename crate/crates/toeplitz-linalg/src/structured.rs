use faer::Mat;
use symbol_core::LaurentSeries;

use crate::dense::{DenseMatrix, LinalgError, Role};

/// T_n(c): entry (j, l) = c_{j-l}.
pub fn toeplitz_matrix(c: &LaurentSeries, n: usize) -> DenseMatrix {
    let n_i = n as i64;
    let dense = c.dense(-(n_i - 1), n_i - 1);
    DenseMatrix::from_trusted(
        Mat::from_fn(n, n, |j, l| dense[(j as i64 - l as i64 + n_i - 1) as usize]),
        Role::Toeplitz(n),
    )
}

/// Block of H(c) (entry (j, l) = c_{j+l-1}, 1-based) with rows
/// r0+1..=r0+rows and columns c0+1..=c0+cols.
pub fn hankel_block(c: &LaurentSeries, r0: usize, rows: usize, c0: usize, cols: usize) -> DenseMatrix {
    let base = (r0 + c0 + 1) as i64;
    let dense = c.dense(base, base + (rows + cols) as i64);
    DenseMatrix::from_trusted(Mat::from_fn(rows, cols, |i, j| dense[i + j]), Role::HankelBlock)
}

#[derive(Debug, Clone)]
pub struct HankelProduct {
    pub block: DenseMatrix,
    /// Trace-norm bound on the part of Q_n H(phi) H(psi) Q_n not represented
    /// by `block` (rows/columns beyond n+M or inner index beyond M').
    pub tail_bound: f64,
    /// Full Hilbert-Schmidt norms of Q_n H(phi) and H(psi) Q_n.
    pub hs_phi: f64,
    pub hs_psi: f64,
}

/// K_{j,l} = sum_{m=1}^{M'} phi_{j+m-1} psi_{m+l-1} for j, l in n+1..=n+M.
///
/// The block is A B with A = [phi_{n+j+m-1}] (M x M') and
/// B = [psi_{m+n+l-1}] (M' x M). The omitted part is bounded by
/// |A - A_box|_2 |B|_2 + |A_box|_2 |B - B_box|_2, each Hilbert-Schmidt norm
/// computed from the stored coefficients.
pub fn hankel_product_block(
    phi: &LaurentSeries,
    psi: &LaurentSeries,
    n: usize,
    size: usize,
    inner: usize,
) -> Result<HankelProduct, LinalgError> {
    if size == 0 || inner == 0 {
        return Err(LinalgError::Shape("block size and inner cut must be positive".into()));
    }
    let a = hankel_block(phi, n, size, 0, inner);
    let b = hankel_block(psi, 0, inner, n, size);
    let block = DenseMatrix::from_trusted(a.matmul(&b)?.into_faer(), Role::HankelBlock);
    let (box_a, out_a) = split_hs(phi, n, size, inner);
    let (box_b, out_b) = split_hs(psi, n, inner, size);
    let full_a = (box_a + out_a).sqrt();
    let full_b = (box_b + out_b).sqrt();
    let tail_bound = out_a.sqrt() * full_b + box_a.sqrt() * out_b.sqrt();
    Ok(HankelProduct { block, tail_bound, hs_phi: full_a, hs_psi: full_b })
}

/// Squared HS mass of Q_n H(c) (entries c_{n+s}, s = j+m-1 >= 1) inside and
/// outside the box rows 1..=r, columns 1..=q. For fixed s there are s index
/// pairs in total and min(s, r, q, r+q-s) of them in the box.
fn split_hs(c: &LaurentSeries, n: usize, r: usize, q: usize) -> (f64, f64) {
    let n = n as i64;
    let (r, q) = (r as i64, q as i64);
    let mut inside = 0.0;
    let mut outside = 0.0;
    for (&k, v) in c.coeffs.range(n + 1..) {
        let s = k - n;
        let in_box = s.min(r).min(q).min(r + q - s).max(0);
        let w = v.norm_sqr();
        inside += in_box as f64 * w;
        outside += (s - in_box) as f64 * w;
    }
    (inside, outside)
}

/// W_n M W_n: entry (j, l) -> (n+1-j, n+1-l).
pub fn flip_conjugate(m: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let role = match m.role {
        Role::Toeplitz(k) => Role::Toeplitz(k),
        _ => Role::Generic,
    };
    Ok(DenseMatrix::from_trusted(Mat::from_fn(n, n, |j, l| m.get(n - 1 - j, n - 1 - l)), role))
}

#[cfg(test)]
mod tests {
    use super::*;
    use symbol_core::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn toeplitz_examples() {
        let id = toeplitz_matrix(&LaurentSeries::constant(c(1., 0.)), 3);
        assert_eq!(id.entries_row_major(), DenseMatrix::identity(3).entries_row_major());
        let (a, b) = (c(2., 1.), c(-1., 3.));
        let t = toeplitz_matrix(&LaurentSeries::from_pairs([(1, a), (-1, b)]), 2);
        assert_eq!(t.entries_row_major(), vec![c(0., 0.), b, a, c(0., 0.)]);
        assert_eq!(t.role, Role::Toeplitz(2));
    }

    #[test]
    fn flip_examples() {
        let m = DenseMatrix::from_rows(&[vec![c(1., 0.), c(2., 0.)], vec![c(3., 0.), c(4., 0.)]]).unwrap();
        let f = flip_conjugate(&m).unwrap();
        assert_eq!(f.entries_row_major(), vec![c(4., 0.), c(3., 0.), c(2., 0.), c(1., 0.)]);
        assert!(flip_conjugate(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn hankel_product_examples() {
        let one = LaurentSeries::from_pairs([(1, c(1., 0.))]);
        let k = hankel_product_block(&one, &one, 0, 2, 2).unwrap();
        assert_eq!(k.block.entries_row_major(), vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        assert_eq!(k.tail_bound, 0.0);
        let e = hankel_product_block(&LaurentSeries::zero(), &one, 3, 4, 4).unwrap();
        assert_eq!(e.block.max_abs(), 0.0);
    }

    #[test]
    fn split_hs_counts() {
        // coefficient at n+3 appears 3 times in Q_n H(c); a 2x2 box sees 1 of them
        let g = LaurentSeries::from_pairs([(5, c(1., 0.))]);
        assert_eq!(split_hs(&g, 2, 2, 2), (1.0, 2.0));
        assert_eq!(split_hs(&g, 2, 3, 3), (3.0, 0.0));
    }
}
