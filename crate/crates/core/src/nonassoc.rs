//! The non-associative toolkit: random multiplication tensors, the
//! isotopy group action, Bruck's invertibility classes, the Kaplansky
//! unitalization trick, multiplication envelopes and simplicity checks,
//! the 2^d matrix square roots behind the homotope fiber count, and
//! Monte Carlo genericity sampling.
//!
//! A multiplication tensor is just an [`Algebra`] with no associativity
//! or unit expectations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Element, HomotopeSide};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Subspace};
use crate::structure::polynomial_roots;

/// Uniform random structure constants, deterministic in the seed.
pub fn random_tensor(d: usize, field: FieldSpec, seed: u64) -> Algebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tensor_with(d, field, &mut rng)
}

pub fn random_tensor_with<R: Rng + ?Sized>(d: usize, field: FieldSpec, rng: &mut R) -> Algebra {
    let mut entries = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                let c = field.random_scalar(rng);
                if !c.is_zero() {
                    entries.push((i, j, l, c));
                }
            }
        }
    }
    Algebra::new(field, d, None, entries, None).expect("random entries are valid")
}

/// Three invertible maps acting on a multiplication tensor:
/// `m2(x, y) = g1(m1(g2^{-1} x, g3^{-1} y))`.
#[derive(Clone, Debug)]
pub struct IsotopyTriple {
    g1: Matrix,
    g2: Matrix,
    g3: Matrix,
}

impl IsotopyTriple {
    pub fn new(g1: Matrix, g2: Matrix, g3: Matrix) -> Result<IsotopyTriple> {
        let d = g1.rows();
        for g in [&g1, &g2, &g3] {
            if g.rows() != d || g.cols() != d {
                return Err(Error::DimensionMismatch("isotopy maps must share one size".into()));
            }
            if g.field() != g1.field() {
                return Err(Error::FieldMismatch("isotopy maps must share one field".into()));
            }
            if g.invert()?.is_none() {
                return Err(Error::NotInvertible);
            }
        }
        Ok(IsotopyTriple { g1, g2, g3 })
    }

    pub fn identity(field: FieldSpec, d: usize) -> IsotopyTriple {
        let id = Matrix::identity(field, d);
        IsotopyTriple { g1: id.clone(), g2: id.clone(), g3: id }
    }

    /// Composition matching composition of actions:
    /// `(h . g) m = h (g m)`.
    pub fn compose(&self, inner: &IsotopyTriple) -> Result<IsotopyTriple> {
        IsotopyTriple::new(
            self.g1.mul(&inner.g1),
            self.g2.mul(&inner.g2),
            self.g3.mul(&inner.g3),
        )
    }
}

/// The isotopy action on tensors; the identity triple is the identity
/// operation and composition of triples matches composition of actions.
pub fn apply_isotopy(m: &Algebra, t: &IsotopyTriple) -> Result<Algebra> {
    if t.g1.rows() != m.dim() || t.g1.field() != m.field() {
        return Err(Error::DimensionMismatch("isotopy size does not match the tensor".into()));
    }
    let g2_inv = t.g2.invert()?.expect("validated invertible");
    let g3_inv = t.g3.invert()?.expect("validated invertible");
    let d = m.dim();
    let mut entries = Vec::new();
    for i in 0..d {
        let xi = Element::new(g2_inv.col(i));
        for j in 0..d {
            let yj = Element::new(g3_inv.col(j));
            let prod = Element::new(t.g1.mul_vec(m.multiply(&xi, &yj).coords()));
            for (l, c) in prod.coords().iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, l, c.clone()));
                }
            }
        }
    }
    Algebra::new(m.field(), d, Some(m.labels().to_vec()), entries, None)
}

/// Bruck's four classes under isotopy, assigned by sampling: absence of
/// invertible one-sided multiplications is only ever "none found in N
/// samples".
#[derive(Clone, Debug)]
pub struct InvertibilityClass {
    /// 1 = left and right, 2 = left only, 3 = right only, 4 = neither.
    pub class: u8,
    pub left_witness: Option<Element>,
    pub right_witness: Option<Element>,
    pub samples: usize,
}

pub fn invertibility_class(m: &Algebra, samples: usize, seed: u64) -> InvertibilityClass {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left = None;
    let mut right = None;
    let mut candidates: Vec<Element> = (0..m.dim()).map(|i| m.basis_element(i)).collect();
    for _ in 0..samples {
        candidates.push(m.random_element(&mut rng));
    }
    for v in &candidates {
        if left.is_none() && m.mult_operator(v, HomotopeSide::Left).rank() == m.dim() {
            left = Some(v.clone());
        }
        if right.is_none() && m.mult_operator(v, HomotopeSide::Right).rank() == m.dim() {
            right = Some(v.clone());
        }
        if left.is_some() && right.is_some() {
            break;
        }
    }
    let class = match (&left, &right) {
        (Some(_), Some(_)) => 1,
        (Some(_), None) => 2,
        (None, Some(_)) => 3,
        (None, None) => 4,
    };
    InvertibilityClass { class, left_witness: left, right_witness: right, samples }
}

/// Kaplansky's trick: when `r_b` and `l_a` are invertible,
/// `m'(x, y) = m(r_b^{-1} x, l_a^{-1} y)` is unital with unit `m(a, b)`.
/// The unit is verified before returning.
pub fn kaplansky_unitalize(m: &Algebra, a: &Element, b: &Element) -> Result<Algebra> {
    let r_b = m.mult_operator(b, HomotopeSide::Right);
    let l_a = m.mult_operator(a, HomotopeSide::Left);
    let r_inv = r_b.invert()?.ok_or_else(|| Error::Degenerate("right multiplication by b is singular".into()))?;
    let l_inv = l_a.invert()?.ok_or_else(|| Error::Degenerate("left multiplication by a is singular".into()))?;
    let d = m.dim();
    let mut entries = Vec::new();
    for i in 0..d {
        let xi = Element::new(r_inv.col(i));
        for j in 0..d {
            let yj = Element::new(l_inv.col(j));
            let prod = m.multiply(&xi, &yj);
            for (l, c) in prod.coords().iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, l, c.clone()));
                }
            }
        }
    }
    let expected_unit = m.multiply(a, b);
    let out = Algebra::new(m.field(), d, Some(m.labels().to_vec()), entries, None)?;
    match out.find_unit() {
        Some(u) if u == expected_unit => Algebra::new(
            m.field(),
            d,
            Some(m.labels().to_vec()),
            out.structure_constants().to_vec(),
            Some(expected_unit.coords().to_vec()),
        ),
        _ => Err(Error::Internal("unitalization did not produce the expected unit".into())),
    }
}

/// Which family of multiplication operators generates the envelope.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EnvelopeSide {
    Left,
    Right,
    Both,
}

/// The generating operators of the chosen envelope.
pub fn multiplication_operators(m: &Algebra, side: EnvelopeSide) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for i in 0..m.dim() {
        let e = m.basis_element(i);
        match side {
            EnvelopeSide::Left => gens.push(m.mult_operator(&e, HomotopeSide::Left)),
            EnvelopeSide::Right => gens.push(m.mult_operator(&e, HomotopeSide::Right)),
            EnvelopeSide::Both => {
                gens.push(m.mult_operator(&e, HomotopeSide::Left));
                gens.push(m.mult_operator(&e, HomotopeSide::Right));
            }
        }
    }
    gens
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        v.extend(m.row(r).iter().cloned());
    }
    v
}

fn unflatten(field: FieldSpec, d: usize, v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, d, d);
    for r in 0..d {
        for c in 0..d {
            if !v[r * d + c].is_zero() {
                m.set(r, c, v[r * d + c].clone());
            }
        }
    }
    m
}

/// Basis of the associative algebra generated by the chosen operator
/// family, computed as a span closure under matrix multiplication; the
/// dimension is at most d^2.
pub fn envelope(m: &Algebra, side: EnvelopeSide) -> Vec<Matrix> {
    let d = m.dim();
    let field = m.field();
    let gens = multiplication_operators(m, side);
    let mut span = Subspace::new(field, d * d);
    for g in &gens {
        span.insert(flatten(g));
    }
    loop {
        let mut grew = false;
        let snapshot: Vec<Vec<Scalar>> = span.basis().to_vec();
        for w in &snapshot {
            let wm = unflatten(field, d, w);
            for g in &gens {
                grew |= span.insert(flatten(&g.mul(&wm)));
            }
        }
        if !grew {
            break;
        }
    }
    span.basis().iter().map(|v| unflatten(field, d, v)).collect()
}

/// Outcome of a simplicity check: `Simple` is certified by the Burnside
/// criterion, `NotSimple` carries a verified invariant-subspace witness,
/// and `Inconclusive` is an honest third value.
#[derive(Clone, Debug)]
pub enum Simplicity {
    Simple,
    NotSimple(Vec<Vec<Scalar>>),
    Inconclusive,
}

impl Simplicity {
    pub fn is_simple(&self) -> bool {
        matches!(self, Simplicity::Simple)
    }
}

fn spin_under(gens: &[Matrix], seed_vectors: &[Vec<Scalar>], field: FieldSpec, d: usize) -> Subspace {
    let mut span = Subspace::new(field, d);
    for v in seed_vectors {
        span.insert(v.clone());
    }
    loop {
        let mut grew = false;
        let snapshot: Vec<Vec<Scalar>> = span.basis().to_vec();
        for v in &snapshot {
            for g in gens {
                grew |= span.insert(g.mul_vec(v));
            }
        }
        if !grew {
            return span;
        }
    }
}

/// Searches for a proper nonzero subspace invariant under a family of
/// operators: Burnside certificate first, then spinning standard lines,
/// kernels and eigenspaces of singular span elements. Witnesses are
/// verified invariant by construction.
pub fn invariant_subspace_search(gens: &[Matrix], field: FieldSpec, d: usize) -> Simplicity {
    let mut span = Subspace::new(field, d * d);
    for g in gens {
        span.insert(flatten(g));
    }
    let env = {
        let mut env_span = span.clone();
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<Scalar>> = env_span.basis().to_vec();
            for w in &snapshot {
                let wm = unflatten(field, d, w);
                for g in gens {
                    grew |= env_span.insert(flatten(&g.mul(&wm)));
                }
            }
            if !grew {
                break env_span;
            }
        }
    };
    if env.dim() == d * d {
        return Simplicity::Simple;
    }
    let check = |candidate: Subspace| -> Option<Vec<Vec<Scalar>>> {
        (candidate.dim() > 0 && candidate.dim() < d).then(|| candidate.basis().to_vec())
    };
    // Standard lines.
    for i in 0..d {
        let mut v = vec![field.zero(); d];
        v[i] = field.one();
        if let Some(w) = check(spin_under(gens, &[v], field, d)) {
            return Simplicity::NotSimple(w);
        }
    }
    // Kernels and eigenspaces of envelope elements.
    for w in env.basis() {
        let e = unflatten(field, d, w);
        let kernel = e.kernel_basis();
        if !kernel.is_empty() && kernel.len() < d {
            if let Some(w) = check(spin_under(gens, &kernel, field, d)) {
                return Simplicity::NotSimple(w);
            }
        }
        if let Ok(min_poly) = e.min_poly() {
            if let Ok(roots) = polynomial_roots(field, &min_poly) {
                for lambda in roots {
                    let shifted = e.sub(&Matrix::identity(field, d).scale(&lambda));
                    let eigen = shifted.kernel_basis();
                    if !eigen.is_empty() && eigen.len() < d {
                        if let Some(w) = check(spin_under(gens, &eigen, field, d)) {
                            return Simplicity::NotSimple(w);
                        }
                    }
                }
            }
        }
    }
    Simplicity::Inconclusive
}

/// Left/right/two-sided simplicity of the algebra `(V, m)`: `V` must be a
/// simple module over the corresponding multiplication envelope.
pub fn simplicity_check(m: &Algebra, side: EnvelopeSide) -> Simplicity {
    let gens = multiplication_operators(m, side);
    invariant_subspace_search(&gens, m.field(), m.dim())
}

/// All 2^d square roots of a matrix with d distinct eigenvalues in the
/// field, each a nonzero square: sign choices in the eigenbasis. Every
/// returned root is verified by squaring.
pub fn matrix_square_roots(m: &Matrix) -> Result<Vec<Matrix>> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.rows();
    let field = m.field();
    if field.characteristic() == 2 {
        return Err(Error::Degenerate("square roots need characteristic != 2".into()));
    }
    let min_poly = m.min_poly()?;
    if min_poly.len() != d + 1 {
        return Err(Error::Degenerate("repeated eigenvalues (minimal polynomial has low degree)".into()));
    }
    let eigenvalues = polynomial_roots(field, &min_poly)?;
    if eigenvalues.len() != d {
        return Err(Error::Degenerate("eigenvalues do not all lie in the base field".into()));
    }
    let mut eigvecs = Vec::new();
    let mut sqrts = Vec::new();
    for lambda in &eigenvalues {
        if lambda.is_zero() {
            return Err(Error::Degenerate("zero eigenvalue".into()));
        }
        let roots = lambda.square_roots();
        if roots.is_empty() {
            return Err(Error::Degenerate(format!("eigenvalue {} is not a square", lambda.literal())));
        }
        sqrts.push(roots[0].clone());
        let shifted = m.sub(&Matrix::identity(field, d).scale(lambda));
        let kernel = shifted.kernel_basis();
        if kernel.len() != 1 {
            return Err(Error::Degenerate("eigenspace is not a line".into()));
        }
        eigvecs.push(kernel.into_iter().next().expect("one vector"));
    }
    let p = Matrix::from_cols(field, eigvecs)?;
    let p_inv = p.invert()?.ok_or_else(|| Error::Internal("eigenbasis must be invertible".into()))?;
    let mut out = Vec::with_capacity(1 << d);
    for mask in 0u64..(1 << d) {
        let mut diag = Matrix::zeros(field, d, d);
        for (i, s) in sqrts.iter().enumerate() {
            let signed = if mask >> i & 1 == 1 { s.neg() } else { s.clone() };
            diag.set(i, i, signed);
        }
        let root = p.mul(&diag).mul(&p_inv);
        if root.mul(&root) != *m {
            return Err(Error::Internal("candidate square root fails verification".into()));
        }
        out.push(root);
    }
    Ok(out)
}

/// All preimages of a tensor under the right-homotope map at `v`:
/// recovers the right-multiplication operators from
/// `R'_i = R_i R_1` by taking every square root of `R'_1`. In the
/// generic case there are exactly 2^d preimages; each output is verified
/// to map back to the input exactly.
pub fn homotope_preimages(m_prime: &Algebra, v: &Element) -> Result<Vec<Algebra>> {
    let d = m_prime.dim();
    let field = m_prime.field();
    if v.is_zero() {
        return Err(Error::Degenerate("the homotope direction must be nonzero".into()));
    }
    // Complete v to a basis with standard vectors (deterministic).
    let mut basis_vectors = vec![v.coords().to_vec()];
    let mut span = Subspace::new(field, d);
    span.insert(v.coords().to_vec());
    for i in 0..d {
        if span.dim() == d {
            break;
        }
        let mut e = vec![field.zero(); d];
        e[i] = field.one();
        if span.insert(e.clone()) {
            basis_vectors.push(e);
        }
    }
    let basis = Matrix::from_cols(field, basis_vectors.clone())?;
    let basis_inv = basis.invert()?.expect("completed to a basis");
    // R'_i = m'(-, w_i).
    let r_prime: Vec<Matrix> = basis_vectors
        .iter()
        .map(|w| m_prime.mult_operator(&Element::new(w.clone()), HomotopeSide::Right))
        .collect();
    let roots = matrix_square_roots(&r_prime[0])?;
    let mut out = Vec::with_capacity(roots.len());
    for r1 in roots {
        let r1_inv = r1
            .invert()?
            .ok_or_else(|| Error::Internal("square roots of a nonsingular matrix are nonsingular".into()))?;
        let mut r_ops = vec![r1.clone()];
        for rp in r_prime.iter().skip(1) {
            r_ops.push(rp.mul(&r1_inv));
        }
        // m(-, e_j) = sum_k beta_{kj} R_k with beta = basis^{-1}.
        let mut entries = Vec::new();
        for j in 0..d {
            let mut op = Matrix::zeros(field, d, d);
            for (k, r_op) in r_ops.iter().enumerate() {
                let beta = basis_inv.at(k, j);
                if !beta.is_zero() {
                    op = op.add(&r_op.scale(beta));
                }
            }
            for i in 0..d {
                for (l, c) in op.col(i).into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, l, c));
                    }
                }
            }
        }
        let m = Algebra::new(field, d, Some(m_prime.labels().to_vec()), entries, None)?;
        // Verify R(v)(m) = m' exactly.
        let reapplied = m.homotope(v, HomotopeSide::Right);
        if reapplied.structure_constants() != m_prime.structure_constants() {
            return Err(Error::Internal("preimage fails to reproduce the tensor".into()));
        }
        out.push(m);
    }
    // Preimages are pairwise distinct (distinct first operators).
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].structure_constants() == out[j].structure_constants() {
                return Err(Error::Internal("square-root branches collided".into()));
            }
        }
    }
    Ok(out)
}

/// Monte Carlo genericity estimates: fractions of sampled tensors with
/// invertible one-sided multiplication at the first basis vector, and
/// fractions certified left/right-simple by the Burnside criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub samples: usize,
    pub seed: u64,
    pub l_invertible: usize,
    pub r_invertible: usize,
    pub simple_left: usize,
    pub simple_right: usize,
}

impl DensityReport {
    pub fn frac_l_invertible(&self) -> f64 {
        self.l_invertible as f64 / self.samples as f64
    }

    pub fn frac_r_invertible(&self) -> f64 {
        self.r_invertible as f64 / self.samples as f64
    }

    pub fn frac_simple_left(&self) -> f64 {
        self.simple_left as f64 / self.samples as f64
    }

    pub fn frac_simple_right(&self) -> f64 {
        self.simple_right as f64 / self.samples as f64
    }
}

pub fn genericity_density(d: usize, field: FieldSpec, samples: usize, seed: u64) -> DensityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DensityReport { samples, seed, l_invertible: 0, r_invertible: 0, simple_left: 0, simple_right: 0 };
    for _ in 0..samples {
        let m = random_tensor_with(d, field, &mut rng);
        let v = m.basis_element(0);
        if m.mult_operator(&v, HomotopeSide::Left).rank() == d {
            report.l_invertible += 1;
        }
        if m.mult_operator(&v, HomotopeSide::Right).rank() == d {
            report.r_invertible += 1;
        }
        if envelope(&m, EnvelopeSide::Left).len() == d * d {
            report.simple_left += 1;
        }
        if envelope(&m, EnvelopeSide::Right).len() == d * d {
            report.simple_right += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, polynomial_algebra_i64};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn f101() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    #[test]
    fn random_tensor_examples() {
        let a = random_tensor(3, f101(), 9);
        let b = random_tensor(3, f101(), 9);
        assert_eq!(a.structure_constants(), b.structure_constants());
        assert_ne!(
            a.structure_constants(),
            random_tensor(3, f101(), 10).structure_constants()
        );
        let one = random_tensor(1, f101(), 0);
        assert!(one.structure_constants().len() <= 1);
        // A sampled d = 3 tensor fails associativity.
        assert!(!a.is_associative());
    }

    #[test]
    fn isotopy_is_a_group_action() {
        let m = random_tensor(3, f101(), 2);
        let d = 3;
        assert_eq!(
            apply_isotopy(&m, &IsotopyTriple::identity(f101(), d)).unwrap().structure_constants(),
            m.structure_constants()
        );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut random_triple = || loop {
            let mats: Vec<Matrix> = (0..3)
                .map(|_| {
                    let mut g = Matrix::zeros(f101(), d, d);
                    for r in 0..d {
                        for c in 0..d {
                            g.set(r, c, f101().random_scalar(&mut rng));
                        }
                    }
                    g
                })
                .collect();
            if let Ok(t) = IsotopyTriple::new(mats[0].clone(), mats[1].clone(), mats[2].clone()) {
                return t;
            }
        };
        let t1 = random_triple();
        let t2 = random_triple();
        let step = apply_isotopy(&apply_isotopy(&m, &t1).unwrap(), &t2).unwrap();
        let composed = apply_isotopy(&m, &t2.compose(&t1).unwrap()).unwrap();
        assert_eq!(step.structure_constants(), composed.structure_constants());
    }

    #[test]
    fn inner_automorphism_fixes_matrix_tensor() {
        let m2 = matrix_algebra(2, q());
        // Conjugation by g = [[1, 1], [0, 1]] as a 4x4 matrix on M2.
        let g = Matrix::from_rows(q(), vec![
            vec![q().one(), q().one()],
            vec![q().zero(), q().one()],
        ])
        .unwrap();
        let g_inv = g.invert().unwrap().unwrap();
        let mut ad = Matrix::zeros(q(), 4, 4);
        for (col, (r, c)) in [(0, 0), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
            let mut unit = Matrix::zeros(q(), 2, 2);
            unit.set(*r, *c, q().one());
            let img = g.mul(&unit).mul(&g_inv);
            for rr in 0..2 {
                for cc in 0..2 {
                    ad.set(rr * 2 + cc, col, img.at(rr, cc).clone());
                }
            }
        }
        let t = IsotopyTriple::new(ad.clone(), ad.clone(), ad).unwrap();
        let moved = apply_isotopy(&m2, &t).unwrap();
        assert_eq!(moved.structure_constants(), m2.structure_constants());
    }

    #[test]
    fn invertibility_class_examples() {
        let m2 = matrix_algebra(2, q());
        let report = invertibility_class(&m2, 40, 3);
        assert_eq!(report.class, 1);

        let zero = Algebra::new(q(), 2, None, vec![], None).unwrap();
        assert_eq!(invertibility_class(&zero, 20, 3).class, 4);

        // m(x, y) = x_0 y: every l_v with v_0 != 0 is scalar, every r_y
        // has rank <= 1.
        let proj = Algebra::new(
            q(),
            2,
            None,
            vec![(0, 0, 0, q().one()), (0, 1, 1, q().one())],
            None,
        )
        .unwrap();
        let report = invertibility_class(&proj, 30, 3);
        assert_eq!(report.class, 2);
        assert!(report.right_witness.is_none());
    }

    #[test]
    fn kaplansky_examples() {
        // Associative unital with a = b = 1 returns the same tensor.
        let m2 = matrix_algebra(2, q());
        let unit = m2.unit().unwrap();
        let same = kaplansky_unitalize(&m2, &unit, &unit).unwrap();
        assert_eq!(same.structure_constants(), m2.structure_constants());

        // a = b = diag(1, 2): the unit of the isotope is diag(1, 4).
        let d12 = m2.element_from_i64(&[1, 0, 0, 2]);
        let iso = kaplansky_unitalize(&m2, &d12, &d12).unwrap();
        assert_eq!(iso.unit().unwrap(), m2.element_from_i64(&[1, 0, 0, 4]));

        // Sampled generic tensor over F_101.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = random_tensor(2, f101(), 77);
        loop {
            let a = m.random_element(&mut rng);
            let b = m.random_element(&mut rng);
            if m.mult_operator(&a, HomotopeSide::Left).rank() == 2
                && m.mult_operator(&b, HomotopeSide::Right).rank() == 2
            {
                let unital = kaplansky_unitalize(&m, &a, &b).unwrap();
                assert_eq!(unital.find_unit().unwrap(), m.multiply(&a, &b));
                break;
            }
        }
    }

    #[test]
    fn envelope_examples() {
        let m2 = matrix_algebra(2, q());
        assert_eq!(envelope(&m2, EnvelopeSide::Left).len(), 4);

        let dual = polynomial_algebra_i64(q(), &[0, 0, 1]).unwrap();
        assert_eq!(envelope(&dual, EnvelopeSide::Left).len(), 2);

        let zero = Algebra::new(q(), 2, None, vec![], None).unwrap();
        assert!(envelope(&zero, EnvelopeSide::Left).is_empty());
    }

    #[test]
    fn simplicity_examples() {
        // The defining 2-dimensional action of M2 is simple (Burnside).
        let units: Vec<Matrix> = (0..4)
            .map(|i| {
                let mut u = Matrix::zeros(q(), 2, 2);
                u.set(i / 2, i % 2, q().one());
                u
            })
            .collect();
        assert!(invariant_subspace_search(&units, q(), 2).is_simple());

        // Upper-triangular operators on k^2 keep the first coordinate line.
        let tri: Vec<Matrix> = vec![
            Matrix::from_rows(q(), vec![vec![q().one(), q().zero()], vec![q().zero(), q().zero()]]).unwrap(),
            Matrix::from_rows(q(), vec![vec![q().zero(), q().one()], vec![q().zero(), q().zero()]]).unwrap(),
            Matrix::from_rows(q(), vec![vec![q().zero(), q().zero()], vec![q().zero(), q().one()]]).unwrap(),
        ];
        match invariant_subspace_search(&tri, q(), 2) {
            Simplicity::NotSimple(witness) => {
                assert_eq!(witness.len(), 1);
                assert_eq!(witness[0], vec![q().one(), q().zero()]);
            }
            other => panic!("expected a witness, got {other:?}"),
        }

        // As an algebra, M2 has proper one-sided ideals (the columns).
        match simplicity_check(&matrix_algebra(2, q()), EnvelopeSide::Left) {
            Simplicity::NotSimple(witness) => assert!(witness.len() < 4 && !witness.is_empty()),
            other => panic!("expected a witness, got {other:?}"),
        }

        // A sampled generic tensor is left- and right-simple.
        let m = random_tensor(3, f101(), 4);
        assert!(simplicity_check(&m, EnvelopeSide::Left).is_simple());
        assert!(simplicity_check(&m, EnvelopeSide::Right).is_simple());
    }

    #[test]
    fn square_root_examples() {
        let diag = |vals: &[i64]| {
            let mut m = Matrix::zeros(q(), vals.len(), vals.len());
            for (i, &v) in vals.iter().enumerate() {
                m.set(i, i, q().from_i64(v));
            }
            m
        };
        let roots = matrix_square_roots(&diag(&[1, 4])).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.contains(&diag(&[1, 2])));
        assert!(roots.contains(&diag(&[-1, 2])));
        assert!(roots.contains(&diag(&[1, -2])));
        assert!(roots.contains(&diag(&[-1, -2])));

        assert_eq!(matrix_square_roots(&diag(&[1, 4, 9])).unwrap().len(), 8);

        assert!(matches!(matrix_square_roots(&diag(&[1, 1])), Err(Error::Degenerate(_))));
    }

    /// A tensor whose right-multiplication by e_0 has distinct nonzero
    /// eigenvalues with distinct squares, plus random other operators.
    fn preimage_instance(d: usize, seed: u64) -> (Algebra, Element) {
        let field = f101();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eigen: Vec<i64> = (0..d as i64).map(|i| i + 2).collect(); // 2, 3, 4, ...
        let p = loop {
            let mut g = Matrix::zeros(field, d, d);
            for r in 0..d {
                for c in 0..d {
                    g.set(r, c, field.random_scalar(&mut rng));
                }
            }
            if g.invert().unwrap().is_some() {
                break g;
            }
        };
        let mut diag = Matrix::zeros(field, d, d);
        for (i, &v) in eigen.iter().enumerate() {
            diag.set(i, i, field.from_i64(v));
        }
        let r1 = p.mul(&diag).mul(&p.invert().unwrap().unwrap());
        let mut ops = vec![r1];
        for _ in 1..d {
            let mut g = Matrix::zeros(field, d, d);
            for r in 0..d {
                for c in 0..d {
                    g.set(r, c, field.random_scalar(&mut rng));
                }
            }
            ops.push(g);
        }
        // m(e_i, e_j) = ops[j] e_i.
        let mut entries = Vec::new();
        for (j, op) in ops.iter().enumerate() {
            for i in 0..d {
                for (l, c) in op.col(i).into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, l, c));
                    }
                }
            }
        }
        let m = Algebra::new(field, d, None, entries, None).unwrap();
        let v = m.basis_element(0);
        (m, v)
    }

    #[test]
    fn preimage_examples() {
        for (d, expected) in [(2usize, 4usize), (3, 8)] {
            let (m, v) = preimage_instance(d, 21 + d as u64);
            let m_prime = m.homotope(&v, HomotopeSide::Right);
            let preimages = homotope_preimages(&m_prime, &v).unwrap();
            assert_eq!(preimages.len(), expected);
            // The original tensor is among them.
            assert!(preimages.iter().any(|p| p.structure_constants() == m.structure_constants()));
        }

        // Singular first operator is rejected.
        let zero = Algebra::new(f101(), 2, None, vec![], None).unwrap();
        let v = zero.basis_element(0);
        assert!(matches!(homotope_preimages(&zero, &v), Err(Error::Degenerate(_))));
    }

    #[test]
    fn density_examples() {
        let report = genericity_density(2, f101(), 200, 11);
        assert_eq!(report, genericity_density(2, f101(), 200, 11));
        assert!(report.frac_l_invertible() >= 0.95);
        assert!(report.frac_r_invertible() >= 0.95);

        // A nonzero 1-dimensional tensor is invertible and simple.
        let one = Algebra::new(q(), 1, None, vec![(0, 0, 0, q().from_i64(2))], None).unwrap();
        assert_eq!(envelope(&one, EnvelopeSide::Left).len(), 1);
        assert_eq!(invertibility_class(&one, 5, 0).class, 1);
    }

    #[test]
    fn envelope_inclusion_under_principal_isotopy() {
        // For a unital tensor and a principal isotope built from
        // invertible maps, the left envelope only grows.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in [matrix_algebra(2, q()), polynomial_algebra_i64(q(), &[-2, 0, 1]).unwrap()] {
            let d = m.dim();
            let mut random_invertible = || loop {
                let mut g = Matrix::zeros(q(), d, d);
                for r in 0..d {
                    for c in 0..d {
                        g.set(r, c, q().from_i64(rng.gen_range(-3..=3)));
                    }
                }
                if g.invert().unwrap().is_some() {
                    return g;
                }
            };
            let t = IsotopyTriple::new(Matrix::identity(q(), d), random_invertible(), random_invertible()).unwrap();
            let m_iso = apply_isotopy(&m, &t).unwrap();
            let inner = envelope(&m, EnvelopeSide::Left);
            let outer = envelope(&m_iso, EnvelopeSide::Left);
            let mut outer_span = Subspace::new(q(), d * d);
            for g in &outer {
                outer_span.insert(flatten(g));
            }
            for g in &inner {
                assert!(outer_span.contains(&flatten(g)));
            }
        }
    }
}
