//! Independent computation of `B_α = α^{⊗2} ∘ τ ∘ R'` on `Ṽ_1 ⊗ Ṽ_1`,
//! with its own truncated power series. `R'` keeps the `a = 0, 1` terms of
//! the sl2 R-matrix, which are the only ones that act on `Ṽ_1`:
//!
//! `R' = q^{(H⊗H)/2} + (1 - q^{-2}) q^{(H⊗H + H⊗1 - 1⊗H)/2} (X+ ⊗ X-)`,
//!
//! with `q = e^{h/2}`, `H v_i = (-1)^i v_i`, `X+ v_1 = v_0`, `X- v_0 = v_1`
//! and `α(v_i) = γ^{-i} v_i`, `γ = e^{2c}`. Nothing here touches the library.

#![allow(dead_code)]

use num_complex::Complex64;

/// Coefficients of `h^0..h^order`.
pub type Series = Vec<Complex64>;

fn zero(order: usize) -> Series {
    vec![Complex64::new(0.0, 0.0); order + 1]
}

fn constant(z: Complex64, order: usize) -> Series {
    let mut s = zero(order);
    s[0] = z;
    s
}

fn add(a: &Series, b: &Series) -> Series {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mul(a: &Series, b: &Series) -> Series {
    let n = a.len();
    let mut out = zero(n - 1);
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// `q^x = e^{x h / 2}`: coefficient of `h^k` is `(x/2)^k / k!`.
fn q_pow(x: f64, order: usize) -> Series {
    let mut out = zero(order);
    let mut term = 1.0;
    for (k, c) in out.iter_mut().enumerate() {
        if k > 0 {
            term *= x / 2.0 / k as f64;
        }
        *c = Complex64::new(term, 0.0);
    }
    out
}

/// A vector in `Ṽ_1 ⊗ Ṽ_1`, indexed by `2i + j` for `v_i ⊗ v_j`.
type Vec4 = [Series; 4];

fn h_eigen(i: usize) -> f64 {
    if i == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `R'` applied to `v_i ⊗ v_j`.
fn r_prime(i: usize, j: usize, order: usize) -> Vec4 {
    let mut out: Vec4 = std::array::from_fn(|_| zero(order));
    let (hi, hj) = (h_eigen(i), h_eigen(j));
    // first term: q^{(H⊗H)/2}
    out[2 * i + j] = add(&out[2 * i + j], &q_pow(hi * hj / 2.0, order));
    // second term: only v_1 ⊗ v_0 survives X+ ⊗ X-, landing on v_0 ⊗ v_1
    if (i, j) == (1, 0) {
        let (h0, h1) = (h_eigen(0), h_eigen(1));
        let exponent = (h0 * h1 + h0 - h1) / 2.0;
        let one_minus = add(&constant(Complex64::new(1.0, 0.0), order), &{
            let mut s = q_pow(-2.0, order);
            s.iter_mut().for_each(|z| *z = -*z);
            s
        });
        let coef = mul(&one_minus, &q_pow(exponent, order));
        out[1] = add(&out[1], &coef);
    }
    out
}

/// The 4x4 matrix of series, `m[row][col]`, column `col` the image of the
/// basis vector `col` in the order `v0v0, v0v1, v1v0, v1v1`.
pub fn b_alpha_v1(c: Complex64, order: usize) -> [[Series; 4]; 4] {
    let gamma = (2.0 * c).exp();
    let mut m: [[Series; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero(order)));
    for col in 0..4 {
        let (i, j) = (col / 2, col % 2);
        let r = r_prime(i, j, order);
        for (flat, coef) in r.iter().enumerate() {
            let (a, b) = (flat / 2, flat % 2);
            // τ swaps the legs, then α ⊗ α scales by γ^{-(a+b)}
            let row = 2 * b + a;
            let scale = gamma.powi(-((a + b) as i32));
            let scaled: Series = coef.iter().map(|z| z * scale).collect();
            m[row][col] = add(&m[row][col], &scaled);
        }
    }
    m
}

/// The closed form `q^{-1/2}[[q,0,0,0],[0,0,γ⁻¹,0],[0,γ⁻¹,γ⁻¹(q-q⁻¹),0],[0,0,0,γ⁻²q]]`.
pub fn b_alpha_v1_closed_form(c: Complex64, order: usize) -> [[Series; 4]; 4] {
    let g = (2.0 * c).exp().inv();
    let scaled = |s: Series, k: Complex64| -> Series { s.iter().map(|z| z * k).collect() };
    let q = q_pow(1.0, order);
    let q_minus = {
        let mut s = q_pow(-1.0, order);
        s.iter_mut().for_each(|z| *z = -*z);
        add(&q, &s)
    };
    let mut m: [[Series; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero(order)));
    m[0][0] = q.clone();
    m[1][2] = constant(g, order);
    m[2][1] = constant(g, order);
    m[2][2] = scaled(q_minus, g);
    m[3][3] = scaled(q, g * g);
    let half = q_pow(-0.5, order);
    for row in m.iter_mut() {
        for entry in row.iter_mut() {
            *entry = mul(&half, entry);
        }
    }
    m
}
