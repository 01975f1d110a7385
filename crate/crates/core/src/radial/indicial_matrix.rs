//! The indicial family restricted to one link mode.
//!
//! On a mode the family reads
//!
//! ```text
//! I(ζ) = ( D                       −ζ − (f0 − 𝐍 + a + ½) )
//!        ( ζ + 𝐍 + a + ½           −D                    )
//! ```
//!
//! A harmonic mode in degree `k` has `D = 0`, `𝐍 = k` and gives a 2×2 matrix. A
//! non-harmonic mode couples a Kodaira pair of degrees `(k−1, k)` (exact) or
//! `(k, k+1)` (coexact) through `D = [[0, λ], [λ, 0]]`, giving a 4×4 matrix; an
//! untagged mode is the 8×8 direct sum of both pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::indicial::{HodgeKind, IndicialParams, LinkMode};

/// `|det| <= SINGULAR_TOL · Π max(1, ‖row‖)` flags the matrix as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialMatrix {
    pub size: usize,
    /// Row-major entries.
    pub entries: Vec<Complex64>,
    pub det: Complex64,
    /// `Π max(1, ‖row‖)`: bounds `|det|` and stays away from 0 near roots, so
    /// `|det| / scale` vanishes linearly there.
    pub scale: f64,
    pub invertible: bool,
}

impl IndicialMatrix {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.size + j]
    }

    /// `|det| / scale`, in `[0, 1]`.
    pub fn relative_det(&self) -> f64 {
        self.det.norm() / self.scale
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Vec<Complex64> {
        let n = self.size;
        (0..n * n).map(|idx| self.get(idx % n, idx / n).conj()).collect()
    }
}

fn determinant(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .expect("nonempty range");
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for i in col + 1..n {
            let f = a[i * n + col] / p;
            for j in col..n {
                let v = a[col * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    det
}

/// Kodaira-pair block for degrees `(n₁, n₂)` in a `size × size` matrix at `offset`.
fn pair_block(out: &mut [Complex64], size: usize, offset: usize, lambda: f64, degs: [f64; 2], p: &IndicialParams, zeta: Complex64) {
    let f0 = p.f0 as f64;
    let mut set = |i: usize, j: usize, v: Complex64| out[(offset + i) * size + offset + j] = v;
    let l = Complex64::new(lambda, 0.0);
    set(0, 1, l);
    set(1, 0, l);
    set(2, 3, -l);
    set(3, 2, -l);
    for (j, n) in degs.into_iter().enumerate() {
        set(j, 2 + j, -zeta - (f0 - n + p.a + 0.5));
        set(2 + j, j, zeta + n + p.a + 0.5);
    }
}

/// The indicial family of the mode at `ζ`, with its invertibility flag.
pub fn indicial_family_matrix(p: &IndicialParams, m: &LinkMode, zeta: Complex64) -> IndicialMatrix {
    let f0 = p.f0 as f64;
    let k = m.k as f64;
    let (size, entries) = match m.kind {
        HodgeKind::Harmonic => {
            let zero = Complex64::new(0.0, 0.0);
            (2, vec![zero, -zeta - (f0 - k + p.a + 0.5), zeta + k + p.a + 0.5, zero])
        }
        kind => {
            let mut blocks = Vec::new();
            if matches!(kind, HodgeKind::Exact | HodgeKind::Unspecified) {
                blocks.push([k - 1.0, k]);
            }
            if matches!(kind, HodgeKind::Coexact | HodgeKind::Unspecified) {
                blocks.push([k, k + 1.0]);
            }
            let size = 4 * blocks.len();
            let mut out = vec![Complex64::new(0.0, 0.0); size * size];
            for (b, degs) in blocks.into_iter().enumerate() {
                pair_block(&mut out, size, 4 * b, m.lambda, degs, p, zeta);
            }
            (size, out)
        }
    };
    let scale: f64 = (0..size)
        .map(|i| entries[i * size..(i + 1) * size].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0))
        .product();
    let det = determinant(entries.clone(), size);
    let invertible = det.norm() > SINGULAR_TOL * scale;
    IndicialMatrix {
        size,
        entries,
        det,
        scale,
        invertible,
    }
}

fn relative_det_at(p: &IndicialParams, m: &LinkMode, x: f64) -> f64 {
    indicial_family_matrix(p, m, Complex64::new(x, 0.0)).relative_det()
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

/// Real `ζ` in `[lo, hi]` where the mode's indicial matrix is singular, located
/// by scanning a grid of the given step for local minima of `|det|/scale` and
/// refining each. Values closer than `step` are merged.
pub fn singular_set(p: &IndicialParams, m: &LinkMode, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && hi > lo, "singular_set needs lo < hi and a positive step");
    let n = ((hi - lo) / step).round() as usize + 1;
    let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let rs: Vec<f64> = xs.iter().map(|&x| relative_det_at(p, m, x)).collect();
    let mut found: Vec<f64> = Vec::new();
    for i in 0..n {
        let left = if i > 0 { rs[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n { rs[i + 1] } else { f64::INFINITY };
        if !(rs[i] <= left && rs[i] <= right) {
            continue;
        }
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(n - 1)];
        let x = if rs[i] == 0.0 { xs[i] } else { golden_min(|x| relative_det_at(p, m, x), a, b) };
        if relative_det_at(p, m, x) <= SINGULAR_TOL && found.last().is_none_or(|&last| x - last > step) {
            found.push(x);
        }
    }
    found
}
