//! Finite abelian groups and the bialgebras built on them: the group
//! bialgebra `kG`, the function bialgebra `k(G)`, and the anyonic
//! quasi-triangular structure on `kZ/n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::homstruct::HomBialgebra;
use crate::quasitri::QTHomBialgebra;
use crate::scalars::{root_of_unity, Scalar, ScalarRing};
use crate::tensor::{flat_index, multi_index, LinearOperator, TensorElement};
use crate::twisting::{qt_yau_twist, qt_yau_twist_powered, TwistOptions};

/// `Z/n_1 x ... x Z/n_r`, elements enumerated lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidArgument(
                "a group needs at least one cyclic factor".into(),
            ));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "cyclic factor orders must be at least 1, got {orders:?}"
            )));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn cyclic_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }

    pub fn element(&self, index: usize) -> Vec<usize> {
        multi_index(&self.orders, index)
    }

    pub fn index(&self, element: &[usize]) -> usize {
        flat_index(&self.orders, element)
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `uv`.
    pub fn mul(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.element(u), self.element(v));
        let sum: Vec<usize> = a
            .iter()
            .zip(&b)
            .zip(&self.orders)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        self.index(&sum)
    }
}

/// An endomorphism given by the image of each factor's generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMorphism {
    group: FiniteAbelianGroup,
    images: Vec<Vec<usize>>,
}

impl GroupMorphism {
    pub fn new(group: FiniteAbelianGroup, images: Vec<Vec<usize>>) -> Result<Self> {
        let r = group.orders.len();
        if images.len() != r || images.iter().any(|im| im.len() != r) {
            return Err(Error::ShapeMismatch(format!(
                "need {r} generator images of length {r}"
            )));
        }
        for (i, im) in images.iter().enumerate() {
            let n_i = group.orders[i];
            for (j, (&a, &n_j)) in im.iter().zip(&group.orders).enumerate() {
                if a >= n_j {
                    return Err(Error::InvalidArgument(format!(
                        "image component {a} of generator {i} out of range for Z/{n_j}"
                    )));
                }
                if !(n_i * a).is_multiple_of(n_j) {
                    return Err(Error::InvalidArgument(format!(
                        "generator {i} has order {n_i} but its image has component {j} of order {}",
                        n_j / gcd(a, n_j)
                    )));
                }
            }
        }
        Ok(GroupMorphism { group, images })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    /// Index of `α(u)`.
    pub fn apply(&self, u: usize) -> usize {
        let a = self.group.element(u);
        let orders = &self.group.orders;
        let mut out = vec![0; orders.len()];
        for (coef, im) in a.iter().zip(&self.images) {
            for ((slot, &x), &n) in out.iter_mut().zip(im).zip(orders) {
                *slot = (*slot + coef * x) % n;
            }
        }
        self.group.index(&out)
    }

    pub fn is_surjective(&self) -> bool {
        let n = self.group.order();
        let mut hit = vec![false; n];
        for u in 0..n {
            hit[self.apply(u)] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// The induced map on `kG`: column `u` is `e_{α(u)}`.
    pub fn kg_matrix(&self, ring: ScalarRing) -> LinearOperator {
        let n = self.group.order();
        LinearOperator::from_fn(ring, &[n], &[n], |r, c| indicator(ring, r == self.apply(c)))
    }

    /// The pullback `φ ↦ φ ∘ α` on `k(G)` in the delta-function basis.
    pub fn function_matrix(&self, ring: ScalarRing) -> LinearOperator {
        self.kg_matrix(ring).transpose()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn indicator(ring: ScalarRing, b: bool) -> Scalar {
    if b {
        ring.one()
    } else {
        ring.zero()
    }
}

/// `g ↦ g^k` on `Z/n`.
pub fn cyclic_power_endo(n: usize, k: usize) -> Result<GroupMorphism> {
    let g = FiniteAbelianGroup::cyclic(n)?;
    GroupMorphism::new(g, vec![vec![k % n]])
}

/// The group bialgebra with `Δ(g) = g ⊗ g`; the identity `e` is stored as
/// the unit.
pub fn group_bialgebra(g: &FiniteAbelianGroup, ring: ScalarRing) -> Result<HomBialgebra> {
    let n = g.order();
    let mu = LinearOperator::from_fn(ring, &[n], &[n, n], |k, col| {
        indicator(ring, g.mul(col / n, col % n) == k)
    });
    let delta = LinearOperator::from_fn(ring, &[n, n], &[n], |row, k| {
        indicator(ring, row / n == k && row % n == k)
    });
    let alpha = LinearOperator::identity(ring, &[n]);
    let e = TensorElement::basis(ring, &[n], &[g.identity()]);
    HomBialgebra::new(mu, delta, alpha, Some(e))
}

/// The function bialgebra in the basis of delta functions. The unit is the
/// constant function `1 = Σ δ_u`.
pub fn function_bialgebra(g: &FiniteAbelianGroup, ring: ScalarRing) -> Result<HomBialgebra> {
    let n = g.order();
    let mu = LinearOperator::from_fn(ring, &[n], &[n, n], |w, col| {
        indicator(ring, col / n == w && col % n == w)
    });
    let delta = LinearOperator::from_fn(ring, &[n, n], &[n], |row, w| {
        indicator(ring, g.mul(row / n, row % n) == w)
    });
    let alpha = LinearOperator::identity(ring, &[n]);
    let one = TensorElement::from_fn(ring, &[n], |_| ring.one());
    HomBialgebra::new(mu, delta, alpha, Some(one))
}

fn check_table(g: &FiniteAbelianGroup, table: &LinearOperator) -> Result<()> {
    let n = g.order();
    if table.rows() != n || table.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "R table must be {n} x {n}, got {} x {}",
            table.rows(),
            table.cols()
        )));
    }
    Ok(())
}

/// Residuals of `Σ_{xy=v} R(u,x)R(w,y) = δ_{u,w} R(u,v)` and
/// `Σ_{xy=u} R(x,v)R(y,w) = δ_{v,w} R(u,v)` over all `(u, v, w)`.
pub fn check_group_r(g: &FiniteAbelianGroup, table: &LinearOperator) -> Result<(f64, f64)> {
    check_table(g, table)?;
    let n = g.order();
    let ring = *table.ring();
    let r = |u: usize, v: usize| table.entry(u, v);
    let (mut first, mut second) = (0.0f64, 0.0f64);
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let mut s1 = ring.zero();
                let mut s2 = ring.zero();
                for x in 0..n {
                    for y in 0..n {
                        let xy = g.mul(x, y);
                        if xy == v {
                            s1 = &s1 + &(r(u, x) * r(w, y));
                        }
                        if xy == u {
                            s2 = &s2 + &(r(x, v) * r(y, w));
                        }
                    }
                }
                let t1 = if u == w { r(u, v).clone() } else { ring.zero() };
                let t2 = if v == w { r(u, v).clone() } else { ring.zero() };
                first = first.max((&s1 - &t1).max_abs());
                second = second.max((&s2 - &t2).max_abs());
            }
        }
    }
    Ok((first, second))
}

/// Residuals of `R(uv,w) = R(u,w)R(v,w)` and `R(u,vw) = R(u,w)R(u,v)`.
pub fn check_bicharacter(g: &FiniteAbelianGroup, chi: &LinearOperator) -> Result<(f64, f64)> {
    check_table(g, chi)?;
    let n = g.order();
    let (mut first, mut second) = (0.0f64, 0.0f64);
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let a = chi.entry(g.mul(u, v), w) - &(chi.entry(u, w) * chi.entry(v, w));
                let b = chi.entry(u, g.mul(v, w)) - &(chi.entry(u, w) * chi.entry(u, v));
                first = first.max(a.max_abs());
                second = second.max(b.max_abs());
            }
        }
    }
    Ok((first, second))
}

/// `R[u][v] = χ(u, v)` after checking both bicharacter conditions.
pub fn bicharacter_r(g: &FiniteAbelianGroup, chi: &LinearOperator) -> Result<LinearOperator> {
    let (a, b) = check_bicharacter(g, chi)?;
    let tol = chi.ring().tolerance();
    if !(a < tol) {
        return Err(Error::hypothesis(
            "chi(uv, w) = chi(u, w) chi(v, w)",
            Some(a),
            tol,
        ));
    }
    if !(b < tol) {
        return Err(Error::hypothesis(
            "chi(u, vw) = chi(u, w) chi(u, v)",
            Some(b),
            tol,
        ));
    }
    Ok(chi.clone())
}

/// `χ(u, v) = exp(2πi Σ_l u_l v_l / n_l)`.
pub fn exp_bicharacter(g: &FiniteAbelianGroup, ring: ScalarRing) -> LinearOperator {
    let n = g.order();
    LinearOperator::from_fn(ring, &[n], &[n], |u, v| {
        let (a, b) = (g.element(u), g.element(v));
        let turns: f64 = a
            .iter()
            .zip(&b)
            .zip(&g.orders)
            .map(|((x, y), m)| (x * y) as f64 / *m as f64)
            .sum();
        ring.constant(Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * turns,
        ))
    })
}

/// A classical quasi-triangular bialgebra: `alpha = Id`, unit present.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalQT {
    pub bialgebra: HomBialgebra,
    pub r: LinearOperator,
}

impl ClassicalQT {
    pub fn into_qt(self) -> Result<QTHomBialgebra> {
        QTHomBialgebra::from_matrix(self.bialgebra, &self.r)
    }
}

/// `kZ/n` with `R = (1/n) Σ_{p,q} exp(-2πipq/n) g^p ⊗ g^q`.
pub fn anyonic_qt(n: usize) -> Result<ClassicalQT> {
    let ring = ScalarRing::complex();
    let g = FiniteAbelianGroup::cyclic(n)?;
    let bialgebra = group_bialgebra(&g, ring)?;
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    let mut entries = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            entries.push(root_of_unity(n as u32, -((p * q) as i64), &ring)?.scale(scale));
        }
    }
    let r = LinearOperator::from_rows(ring, &[n], &[n], entries)?;
    Ok(ClassicalQT { bialgebra, r })
}

/// `(Z'_n)_{α_k}`, optionally followed by the R-twist `R^{α_k^t}`.
/// The R-twist needs `gcd(k, n) = 1`.
pub fn anyonic_twisted(
    n: usize,
    k: usize,
    t: Option<u32>,
    opts: TwistOptions,
) -> Result<QTHomBialgebra> {
    let base = anyonic_qt(n)?;
    let endo = cyclic_power_endo(n, k)?;
    let alpha = endo.kg_matrix(ScalarRing::complex());
    match t {
        None => qt_yau_twist(&base.bialgebra, &base.r, &alpha, opts),
        Some(t) => {
            if !endo.is_surjective() {
                return Err(Error::hypothesis(
                    format!("alpha not surjective: gcd({k}, {n}) != 1"),
                    None,
                    ScalarRing::complex().tolerance(),
                ));
            }
            qt_yau_twist_powered(&base.bialgebra, &base.r, &alpha, t, opts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homstruct::{check_all_bialgebra, dualize};
    use crate::quasitri::check_qt_axioms;

    fn ring() -> ScalarRing {
        ScalarRing::complex()
    }

    #[test]
    fn group_enumeration() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.element(5), vec![1, 1]);
        assert_eq!(g.mul(5, 7), g.index(&[0, 0]));
        assert!(FiniteAbelianGroup::new(vec![]).is_err());
        assert!(FiniteAbelianGroup::new(vec![3, 0]).is_err());
    }

    #[test]
    fn trivial_and_z2_bialgebras() {
        let b1 = group_bialgebra(&FiniteAbelianGroup::cyclic(1).unwrap(), ring()).unwrap();
        assert_eq!(b1.dim(), 1);
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let b = group_bialgebra(&g, ring()).unwrap();
        let gg = b
            .multiply(
                &TensorElement::basis(ring(), &[2], &[1]),
                &TensorElement::basis(ring(), &[2], &[1]),
            )
            .unwrap();
        assert_eq!(gg, TensorElement::basis(ring(), &[2], &[0]));
        assert!(check_all_bialgebra(&b).unwrap().pass());
    }

    #[test]
    fn group_r_conditions() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let mut trivial = LinearOperator::zeros(ring(), &[2], &[2]);
        trivial.set_entry(0, 0, ring().one());
        assert_eq!(check_group_r(&g, &trivial).unwrap(), (0.0, 0.0));
        let ones = LinearOperator::from_fn(ring(), &[2], &[2], |_, _| ring().one());
        assert!(check_group_r(&g, &ones).unwrap().0 > 0.5);
        for n in 1..=8 {
            let a = anyonic_qt(n).unwrap();
            let g = FiniteAbelianGroup::cyclic(n).unwrap();
            let (x, y) = check_group_r(&g, &a.r).unwrap();
            assert!(x < 1e-12 && y < 1e-12, "n={n}");
            assert!(check_qt_axioms(&a.into_qt().unwrap()).unwrap().pass());
        }
    }

    #[test]
    fn group_r_conditions_match_qt_axioms() {
        // the two table conditions are the first two QT axioms in disguise
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let b = group_bialgebra(&g, ring()).unwrap();
        let table = LinearOperator::from_fn(ring(), &[3], &[3], |u, v| {
            ring().real(((u + 2 * v) % 3) as f64 * 0.1)
        });
        let (x, y) = check_group_r(&g, &table).unwrap();
        let q = QTHomBialgebra::from_matrix(b, &table).unwrap();
        let ax = check_qt_axioms(&q).unwrap();
        assert!((ax.get("qt_delta_alpha").unwrap() - x).abs() < 1e-12);
        assert!((ax.get("qt_alpha_delta").unwrap() - y).abs() < 1e-12);
    }

    #[test]
    fn n1_and_n2_anyonic_r() {
        let a1 = anyonic_qt(1).unwrap();
        assert!(a1.r.entry(0, 0).approx_eq(&ring().one(), 1e-15));
        let a2 = anyonic_qt(2).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (e, w) in a2.r.entries().iter().zip(want) {
            assert!(e.approx_eq(&ring().real(w), 1e-15));
        }
    }

    #[test]
    fn bicharacters() {
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        let chi = exp_bicharacter(&g, ring());
        let r = bicharacter_r(&g, &chi).unwrap();
        let b = function_bialgebra(&g, ring()).unwrap();
        let q = QTHomBialgebra::from_matrix(b, &r).unwrap();
        assert!(check_qt_axioms(&q).unwrap().pass());
        let trivial = LinearOperator::from_fn(ring(), &[6], &[6], |_, _| ring().one());
        assert!(bicharacter_r(&g, &trivial).is_ok());
        let n = 4;
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        let one_sided = LinearOperator::from_fn(ring(), &[n], &[n], |u, _| {
            ring().constant(Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * u as f64 / n as f64,
            ))
        });
        let (_, second) = check_bicharacter(&g, &one_sided).unwrap();
        assert!(second > 0.1);
        assert!(matches!(
            bicharacter_r(&g, &one_sided),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn kg_dual_is_function_bialgebra() {
        for orders in [vec![2], vec![3], vec![2, 2], vec![2, 3]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            let d = dualize(&group_bialgebra(&g, ring()).unwrap()).unwrap();
            let f = function_bialgebra(&g, ring()).unwrap();
            assert_eq!(d.mu(), f.mu());
            assert_eq!(d.delta(), f.delta());
            assert_eq!(d.alpha(), f.alpha());
        }
    }

    #[test]
    fn power_endomorphisms() {
        let id = cyclic_power_endo(5, 1).unwrap();
        assert_eq!(id.kg_matrix(ring()), LinearOperator::identity(ring(), &[5]));
        assert!(!cyclic_power_endo(4, 2).unwrap().is_surjective());
        let e = cyclic_power_endo(5, 4).unwrap();
        assert!(e.is_surjective());
        let m = e.kg_matrix(ring());
        assert_eq!(
            m.compose(&m).unwrap(),
            LinearOperator::identity(ring(), &[5])
        );
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        assert!(GroupMorphism::new(g.clone(), vec![vec![1]]).is_ok());
        let g24 = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        // generator of Z/2 cannot map to an element of order 4
        assert!(GroupMorphism::new(g24, vec![vec![0, 1], vec![0, 1]]).is_err());
    }

    #[test]
    fn function_pullback_is_bialgebra_morphism() {
        let g = FiniteAbelianGroup::cyclic(6).unwrap();
        let f = function_bialgebra(&g, ring()).unwrap();
        let a = GroupMorphism::new(g, vec![vec![5]])
            .unwrap()
            .function_matrix(ring());
        assert_eq!(
            crate::twisting::check_bialgebra_morphism(&a, &f).unwrap(),
            0.0
        );
    }

    #[test]
    fn twisted_anyonic_family() {
        let q = anyonic_twisted(6, 4, None, TwistOptions::default()).unwrap();
        assert!(check_qt_axioms(&q).unwrap().pass());
        let q = anyonic_twisted(7, 3, Some(2), TwistOptions::default()).unwrap();
        assert!(check_qt_axioms(&q).unwrap().pass());
        let err = anyonic_twisted(6, 4, Some(1), TwistOptions::default()).unwrap_err();
        assert!(err.to_string().contains("alpha not surjective"));
    }
}
