//! Complex Schur decomposition: Householder reduction to Hessenberg form
//! followed by single-shift QR iteration with Wilkinson shifts.
//!
//! Follows the structure of LAPACK's `zgehd2` and `zlahqr`. The iteration is
//! strictly sequential, so results are bit-identical from run to run.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `A = Q T Q^*` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: DMatrix<Complex64>,
    pub t: DMatrix<Complex64>,
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Sweep budget per unit dimension.
pub const SWEEPS_PER_DIM: usize = 30;

pub fn schur(a: &DMatrix<Complex64>) -> Result<Schur> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { left: a.nrows(), right: a.ncols() });
    }
    let n = a.nrows();
    let mut t = a.clone();
    let mut q = DMatrix::identity(n, n);
    reduce_to_hessenberg(&mut t, &mut q);
    hessenberg_qr(&mut t, &mut q)?;
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = ZERO;
        }
    }
    Ok(Schur { q, t })
}

/// Overwrites `h` with `H = Q₀^* A Q₀` (upper Hessenberg) and `q` with `q Q₀`.
pub fn reduce_to_hessenberg(h: &mut DMatrix<Complex64>, q: &mut DMatrix<Complex64>) {
    let n = h.nrows();
    let mut v = vec![ZERO; n];
    for j in 0..n.saturating_sub(2) {
        let alpha = h[(j + 1, j)];
        let xnorm = (j + 2..n).map(|i| h[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 && alpha.im == 0.0 {
            continue;
        }
        // H = I − τ v v^*, v₀ = 1, with H^* x = β e₁
        let beta = -(alpha.norm().hypot(xnorm)).copysign(alpha.re);
        let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
        let scale = Complex64::new(1.0, 0.0) / (alpha - beta);
        let len = n - j - 1;
        v[0] = Complex64::new(1.0, 0.0);
        for i in 1..len {
            v[i] = h[(j + 1 + i, j)] * scale;
        }
        let v = &v[..len];
        let off = j + 1;

        // from the right on every row: A ← A − τ (A v) v^*
        for r in 0..n {
            let mut w = ZERO;
            for (i, vi) in v.iter().enumerate() {
                w += h[(r, off + i)] * vi;
            }
            let w = w * tau;
            for (i, vi) in v.iter().enumerate() {
                h[(r, off + i)] -= w * vi.conj();
            }
        }
        for r in 0..n {
            let mut w = ZERO;
            for (i, vi) in v.iter().enumerate() {
                w += q[(r, off + i)] * vi;
            }
            let w = w * tau;
            for (i, vi) in v.iter().enumerate() {
                q[(r, off + i)] -= w * vi.conj();
            }
        }
        // from the left on columns j+1..: A ← A − τ̄ v (v^* A)
        let tau_c = tau.conj();
        for col in off..n {
            let mut w = ZERO;
            for (i, vi) in v.iter().enumerate() {
                w += vi.conj() * h[(off + i, col)];
            }
            let w = w * tau_c;
            for (i, vi) in v.iter().enumerate() {
                h[(off + i, col)] -= vi * w;
            }
        }
        h[(off, j)] = Complex64::new(beta, 0.0);
        for i in j + 2..n {
            h[(i, j)] = ZERO;
        }
    }
}

/// Complex Givens rotation `[c s; −s̄ c]` mapping `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    if f == ZERO {
        let gn = g.norm();
        return (0.0, g.conj() / gn, Complex64::new(gn, 0.0));
    }
    let fn_ = f.norm();
    let norm = fn_.hypot(g.norm());
    let phase = f / fn_;
    (fn_ / norm, phase * g.conj() / norm, phase * norm)
}

fn rotate_rows(h: &mut DMatrix<Complex64>, p: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    for col in cols {
        let x = h[(p, col)];
        let y = h[(p + 1, col)];
        h[(p, col)] = x * c + s * y;
        h[(p + 1, col)] = y * c - s.conj() * x;
    }
}

fn rotate_cols(h: &mut DMatrix<Complex64>, p: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
    for r in rows {
        let x = h[(r, p)];
        let y = h[(r, p + 1)];
        h[(r, p)] = x * c + s.conj() * y;
        h[(r, p + 1)] = y * c - s * x;
    }
}

/// Eigenvalue of the trailing 2×2 block `[a b; c d]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    if bc == ZERO {
        return d;
    }
    let mut disc = (p * p + bc).sqrt();
    if (p.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let t = p + disc;
    if t == ZERO {
        d
    } else {
        d - bc / t
    }
}

/// Drives an upper Hessenberg `h` to upper triangular form, accumulating the
/// transformations into `q`.
pub fn hessenberg_qr(h: &mut DMatrix<Complex64>, q: &mut DMatrix<Complex64>) -> Result<()> {
    let n = h.nrows();
    if n <= 1 {
        return Ok(());
    }
    let ulp = f64::EPSILON;
    let safe_min = f64::MIN_POSITIVE * (n as f64 / ulp);
    let budget = SWEEPS_PER_DIM * n.max(10);
    let mut sweeps = 0usize;

    let mut i = n - 1;
    loop {
        let mut its = 0usize;
        loop {
            // look for a negligible subdiagonal entry in rows ..=i
            let mut l = i;
            while l > 0 {
                let sub = cabs1(h[(l, l - 1)]);
                if sub <= safe_min {
                    break;
                }
                let mut tst = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
                if tst == 0.0 {
                    if l >= 2 {
                        tst += cabs1(h[(l - 1, l - 2)]);
                    }
                    if l + 1 < n {
                        tst += cabs1(h[(l + 1, l)]);
                    }
                }
                if sub <= ulp * tst {
                    let ab = cabs1(h[(l, l - 1)]).max(cabs1(h[(l - 1, l)]));
                    let ba = cabs1(h[(l, l - 1)]).min(cabs1(h[(l - 1, l)]));
                    let diff = h[(l - 1, l - 1)] - h[(l, l)];
                    let aa = cabs1(h[(l, l)]).max(cabs1(diff));
                    let bb = cabs1(h[(l, l)]).min(cabs1(diff));
                    let s = aa + ab;
                    if ba * (ab / s) <= safe_min.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                l -= 1;
            }
            if l > 0 {
                h[(l, l - 1)] = ZERO;
            }
            if l == i {
                break;
            }
            if sweeps >= budget {
                return Err(Error::NonConvergence { routine: "Hessenberg QR", budget });
            }
            sweeps += 1;
            its += 1;

            let shift = match its {
                10 => h[(l, l)] + 0.75 * h[(l + 1, l)].re.abs(),
                20 => h[(i, i)] + 0.75 * h[(i, i - 1)].re.abs(),
                _ => wilkinson_shift(h[(i - 1, i - 1)], h[(i - 1, i)], h[(i, i - 1)], h[(i, i)]),
            };

            for j in l..i {
                let (f, g) = if j == l { (h[(l, l)] - shift, h[(l + 1, l)]) } else { (h[(j, j - 1)], h[(j + 1, j - 1)]) };
                let (c, s, r) = givens(f, g);
                let first_col = if j == l {
                    l
                } else {
                    h[(j, j - 1)] = r;
                    h[(j + 1, j - 1)] = ZERO;
                    j
                };
                rotate_rows(h, j, c, s, first_col..n);
                rotate_cols(h, j, c, s, 0..(j + 3).min(i + 1));
                rotate_cols(q, j, c, s, 0..n);
            }
        }
        if i == 0 {
            break;
        }
        i -= 1;
    }
    Ok(())
}

/// Eigenvectors of an upper triangular `t`, one per diagonal entry, by back
/// substitution. Near-zero pivots are lifted to `ulp · max|t|`, which keeps
/// the residual `‖(T − t_ii) y‖` at that level even for defective eigenvalues.
pub fn triangular_eigenvectors(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    const RESCALE: f64 = 1e150;
    let n = t.nrows();
    let tmax = t.iter().map(|z| cabs1(*z)).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tmax).max(f64::MIN_POSITIVE * n.max(1) as f64 / f64::EPSILON);
    let mut out = DMatrix::from_element(n, n, ZERO);
    let mut y = vec![ZERO; n];
    for i in 0..n {
        let lambda = t[(i, i)];
        y[..=i].fill(ZERO);
        y[i] = Complex64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut sum = ZERO;
            for l in j + 1..=i {
                sum += t[(j, l)] * y[l];
            }
            let mut d = t[(j, j)] - lambda;
            if cabs1(d) < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[j] = -sum / d;
            let mag = cabs1(y[j]);
            if mag > RESCALE {
                let inv = 1.0 / mag;
                for yl in &mut y[j..=i] {
                    *yl *= inv;
                }
            }
        }
        for j in 0..=i {
            out[(j, i)] = y[j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn frob(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn hessenberg_reduction_is_a_similarity() {
        let a = random(12, 1);
        let mut h = a.clone();
        let mut q = DMatrix::identity(12, 12);
        reduce_to_hessenberg(&mut h, &mut q);
        for j in 0..12 {
            for i in j + 2..12 {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        assert!(frob(&(&q * &h * q.adjoint() - &a)) < 1e-13 * frob(&a));
        assert!(frob(&(q.adjoint() * &q - DMatrix::identity(12, 12))) < 1e-14);
    }

    #[test]
    fn schur_factorization_of_random_matrices() {
        for (n, seed) in [(1, 3), (2, 4), (5, 5), (17, 6), (64, 7)] {
            let a = random(n, seed);
            let Schur { q, t } = schur(&a).unwrap();
            assert!(frob(&(&q * &t * q.adjoint() - &a)) < 1e-12 * frob(&a).max(1.0), "n={n}");
            assert!(frob(&(q.adjoint() * &q - DMatrix::identity(n, n))) < 1e-12);
        }
    }

    #[test]
    fn triangular_input_is_left_untouched() {
        let mut a = random(9, 8);
        for j in 0..9 {
            for i in j + 1..9 {
                a[(i, j)] = ZERO;
            }
        }
        let Schur { t, .. } = schur(&a).unwrap();
        for i in 0..9 {
            assert_eq!(t[(i, i)], a[(i, i)]);
        }
    }

    #[test]
    fn jordan_block_eigenvectors_have_small_residual() {
        let n = 40;
        let a = DMatrix::from_fn(n, n, |i, j| if j == i + 1 { Complex64::new(1.0, 0.0) } else { ZERO });
        let y = triangular_eigenvectors(&a);
        for i in 0..n {
            let col = y.column(i).into_owned();
            let nrm = col.norm();
            let r = (&a * &col - col.clone() * a[(i, i)]).norm() / nrm;
            assert!(r < 1e-12, "i={i} r={r}");
        }
    }

    #[test]
    fn givens_annihilates() {
        let (c, s, r) = givens(Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let f = Complex64::new(0.3, -1.2);
        let g = Complex64::new(2.0, 0.5);
        assert!((f * c + s * g - r).norm() < 1e-15);
        assert!((g * c - s.conj() * f).norm() < 1e-15);
    }
}
