//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! the implicit QL iteration with Wilkinson-style shifts.
//!
//! Working storage is column-major so the inner loops of both phases run
//! over contiguous memory.

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    n: usize,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column-major; column `j` is the unit eigenvector of `values[j]`.
    vectors: Option<Vec<f64>>,
}

impl SymmetricEigen {
    /// `a` is row-major `n × n` and must be symmetric; only symmetry of the
    /// input makes row-major and column-major coincide.
    pub fn new(a: &[f64], n: usize, want_vectors: bool) -> SymmetricEigen {
        assert_eq!(a.len(), n * n, "matrix must be n × n");
        if n == 0 {
            return SymmetricEigen {
                n,
                values: vec![],
                vectors: want_vectors.then(Vec::new),
            };
        }
        let mut v = a.to_vec();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tred2(&mut v, &mut d, &mut e, n, want_vectors);
        tql2(&mut v, &mut d, &mut e, n, want_vectors);

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
        let values = order.iter().map(|&i| d[i]).collect();
        let vectors = want_vectors.then(|| {
            let mut out = vec![0.0; n * n];
            for (dst, &src) in order.iter().enumerate() {
                out[dst * n..(dst + 1) * n].copy_from_slice(&v[src * n..(src + 1) * n]);
            }
            out
        });
        SymmetricEigen { n, values, vectors }
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    pub fn vector(&self, j: usize) -> Option<&[f64]> {
        self.vectors.as_ref().map(|v| &v[j * self.n..(j + 1) * self.n])
    }
}

// `v[j * n + k]` holds entry (row k, column j).
#[inline]
fn at(n: usize, row: usize, col: usize) -> usize {
    col * n + row
}

fn tred2(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize, accumulate: bool) {
    for j in 0..n {
        d[j] = v[at(n, n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(n, i - 1, j)];
                v[at(n, i, j)] = 0.0;
                v[at(n, j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                f = d[j];
                v[at(n, j, i)] = f;
                g = e[j] + v[at(n, j, j)] * f;
                let col = &v[j * n..(j + 1) * n];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut v[j * n..(j + 1) * n];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = col[i - 1];
                col[i] = 0.0;
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..n - 1 {
            v[at(n, n - 1, i)] = v[at(n, i, i)];
            v[at(n, i, i)] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v[at(n, k, i + 1)] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += v[at(n, k, i + 1)] * v[at(n, k, j)];
                    }
                    for k in 0..=i {
                        v[at(n, k, j)] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[at(n, k, i + 1)] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = v[at(n, n - 1, j)];
            v[at(n, n - 1, j)] = 0.0;
        }
        v[at(n, n - 1, n - 1)] = 1.0;
    } else {
        for j in 0..n {
            d[j] = v[at(n, j, j)];
        }
    }
    e[0] = 0.0;
}

fn tql2(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize, vectors: bool) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if vectors {
                        let (left, right) = v.split_at_mut((i + 1) * n);
                        let col_i = &mut left[i * n..];
                        let col_i1 = &mut right[..n];
                        for (a, b) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                            let hh = *b;
                            *b = s * *a + c * hh;
                            *a = c * *a - s * hh;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.random_range(-1.0..1.0);
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        a
    }

    fn residual(a: &[f64], n: usize, eig: &SymmetricEigen) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let q = eig.vector(j).unwrap();
            for i in 0..n {
                let aq: f64 = (0..n).map(|k| a[i * n + k] * q[k]).sum();
                worst = worst.max((aq - eig.values[j] * q[i]).abs());
            }
        }
        worst
    }

    #[test]
    fn matches_nalgebra() {
        for (n, seed) in [(1, 0), (2, 1), (5, 2), (17, 3), (64, 4), (100, 5)] {
            let a = random_symmetric(n, seed);
            let ours = SymmetricEigen::new(&a, n, true);
            let mut theirs: Vec<f64> = DMatrix::from_row_slice(n, n, &a)
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            theirs.sort_by(f64::total_cmp);
            for (x, y) in ours.values.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
            }
            assert!(residual(&a, n, &ours) < 1e-10);
            let plain = SymmetricEigen::new(&a, n, false);
            assert!(!plain.has_vectors());
            for (x, y) in plain.values.iter().zip(&ours.values) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn vectors_are_orthonormal() {
        let n = 30;
        let eig = SymmetricEigen::new(&random_symmetric(n, 9), n, true);
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = eig.vector(i).unwrap().iter().zip(eig.vector(j).unwrap()).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_and_repeated() {
        let a = [3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let eig = SymmetricEigen::new(&a, 3, true);
        assert_eq!(eig.values, vec![1.0, 1.0, 3.0]);
        let zero = SymmetricEigen::new(&[0.0; 16], 4, true);
        assert!(zero.values.iter().all(|&x| x == 0.0));
    }
}
