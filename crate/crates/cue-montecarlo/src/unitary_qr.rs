//! Eigenvalues of a unitary upper Hessenberg matrix by a core-chasing QR
//! iteration.
//!
//! H is stored as a descending product of plane rotations times a unitary
//! diagonal, H = Q_0 Q_1 ... Q_{n-2} D. Each single-shift QR step moves a
//! bulge rotation through the sequence with turnovers, so a step costs
//! O(n) and unitarity is preserved exactly up to renormalization of each
//! rotation. Total cost O(n^2).

use faer::Mat;
use symbol_core::Complex64 as C;

/// Plane rotation [[c, -conj(s)], [s, conj(c)]] with |c|^2 + |s|^2 = 1.
#[derive(Clone, Copy, Debug)]
struct Rot {
    c: C,
    s: C,
}

impl Rot {
    const ID: Rot = Rot { c: C { re: 1.0, im: 0.0 }, s: C { re: 0.0, im: 0.0 } };

    /// Rotation whose first column is (x0, x1) / |(x0, x1)|.
    fn from_col(x0: C, x1: C) -> Rot {
        let nr = (x0.norm_sqr() + x1.norm_sqr()).sqrt();
        if nr == 0.0 {
            return Rot::ID;
        }
        Rot { c: x0 / nr, s: x1 / nr }
    }

    fn renorm(self) -> Rot {
        let nr = (self.c.norm_sqr() + self.s.norm_sqr()).sqrt();
        Rot { c: self.c / nr, s: self.s / nr }
    }

    /// self * o, both acting on the same pair of rows.
    fn mul(self, o: Rot) -> Rot {
        Rot { c: self.c * o.c - self.s.conj() * o.s, s: self.s * o.c + self.c.conj() * o.s }.renorm()
    }

    fn adj(self) -> Rot {
        Rot { c: self.c.conj(), s: -self.s }
    }

    fn apply_adj(self, x: C, y: C) -> (C, C) {
        (self.c.conj() * x + self.s.conj() * y, -self.s * x + self.c * y)
    }
}

/// A on rows (0,1), B on (1,2), C on (0,1): returns (D, E, F) with D, F on
/// (1,2) and E on (0,1) such that ABC = DEF.
fn turnover(a: Rot, b: Rot, c: Rot) -> (Rot, Rot, Rot) {
    let (a00, a01, a10, a11) = (a.c, -a.s.conj(), a.s, a.c.conj());
    let (b00, b10) = (b.c, b.s);
    let (c01, c11) = (-c.s.conj(), c.c.conj());
    // first two columns of the 3x3 product ABC
    let bs = b00 * c.s;
    let m00 = a00 * c.c + a01 * bs;
    let m10 = a10 * c.c + a11 * bs;
    let m20 = b10 * c.s;
    let bc = b00 * c11;
    let m01 = a00 * c01 + a01 * bc;
    let m11 = a10 * c01 + a11 * bc;
    let m21 = b10 * c11;
    let d = Rot::from_col(m10, m20);
    let rho = (m10.norm_sqr() + m20.norm_sqr()).sqrt();
    let e = Rot::from_col(m00, C::new(rho, 0.0));
    let (y1, y2) = d.apply_adj(m11, m21);
    let f = Rot::from_col(-e.s * m01 + e.c * y1, y2);
    (d, e, f)
}

/// Eigenvalues of a unitary upper Hessenberg matrix, or None if some
/// eigenvalue needed more than `30 + n` shifted steps.
///
/// Entries below the first subdiagonal are ignored.
pub fn eig_unitary_hessenberg(h: &Mat<C>) -> Option<Vec<C>> {
    let n = h.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    if n == 1 {
        let z = h[(0, 0)];
        return Some(vec![z / z.norm()]);
    }
    let (mut q, mut d) = factor(h);

    let eps2 = f64::EPSILON * f64::EPSILON;
    let max_its = 30 + n;
    let mut hi = n - 1;
    let mut its = 0usize;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 && q[lo - 1].s.norm_sqr() > eps2 {
            lo -= 1;
        }
        if lo > 0 {
            deflate(&mut q, &mut d, lo - 1);
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        if its > max_its {
            return None;
        }
        // exceptional shift every 11 steps breaks symmetric stalls
        let mu = if its % 11 == 0 { C::from_polar(1.0, its as f64 * 1.3) } else { wilkinson(&q, &d, lo, hi) };
        let u = Rot::from_col(q[lo].c * d[lo] - mu, q[lo].s * d[lo]);
        q[lo] = u.adj().mul(q[lo]);
        let mut b = pass_diag(u, &d, lo);
        for i in lo..hi - 1 {
            let (v, e, f) = turnover(q[i], q[i + 1], b);
            q[i] = e;
            q[i + 1] = f;
            b = pass_diag(v, &d, i + 1);
        }
        q[hi - 1] = q[hi - 1].mul(b);
        if q[hi - 1].s.norm_sqr() <= eps2 {
            deflate(&mut q, &mut d, hi - 1);
            hi -= 1;
            its = 0;
        }
    }
    Some(d)
}

/// H = Q_0 ... Q_{n-2} D by Givens elimination of the subdiagonal.
fn factor(h: &Mat<C>) -> (Vec<Rot>, Vec<C>) {
    let n = h.nrows();
    let mut a: Vec<Vec<C>> =
        (0..n).map(|i| (0..n).map(|j| if i <= j + 1 { h[(i, j)] } else { C::new(0.0, 0.0) }).collect()).collect();
    let mut q = vec![Rot::ID; n - 1];
    for k in 0..n - 1 {
        let r = Rot::from_col(a[k][k], a[k + 1][k]);
        q[k] = r;
        for j in k + 1..n {
            let (x, y) = r.apply_adj(a[k][j], a[k + 1][j]);
            a[k][j] = x;
            a[k + 1][j] = y;
        }
    }
    // the eliminated matrix is diag(1, ..., 1, unit) up to rounding
    let mut d = vec![C::new(1.0, 0.0); n];
    d[n - 1] = a[n - 1][n - 1] / a[n - 1][n - 1].norm();
    (q, d)
}

/// Absorb the (unit) cosine of a negligible rotation into D.
fn deflate(q: &mut [Rot], d: &mut [C], i: usize) {
    let c = q[i].c / q[i].c.norm();
    d[i] *= c;
    d[i + 1] *= c.conj();
    if i + 1 < q.len() {
        q[i + 1].s *= c;
    }
    q[i] = Rot::ID;
}

/// Move a rotation on rows (i, i+1) from the right of D to its left.
fn pass_diag(u: Rot, d: &[C], i: usize) -> Rot {
    Rot { c: u.c, s: u.s * d[i + 1] * d[i].conj() }
}

/// Eigenvalue of the trailing 2x2 block of the active window closest to
/// its last diagonal entry.
fn wilkinson(q: &[Rot], d: &[C], lo: usize, hi: usize) -> C {
    let k = hi - 1;
    let mut h00 = q[k].c * d[k];
    let h10 = q[k].s * d[k];
    let mut h01 = -q[k].s.conj() * d[hi];
    let h11 = q[k].c.conj() * d[hi];
    if k > lo {
        let f = q[k - 1].c.conj();
        h00 *= f;
        h01 *= f;
    }
    let tr = h00 + h11;
    let det = h00 * h11 - h01 * h10;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if (l1 - h11).norm() < (l2 - h11).norm() {
        l1
    } else {
        l2
    }
}
