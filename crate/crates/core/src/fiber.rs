//! Gluing and ungluing of modules over the fiber product
//! `B = A x_{A/I} k` of a commutative algebra, realized here for
//! `I = (delta)` with `B` the augmented homotope.
//!
//! Gluing sends a B-module `L` to the triple
//! `(N, M', phi) = (k (x)_B L, A (x)_B L, phi)` with the canonical
//! isomorphism `phi: (A/I) (x)_k N -> (A/I) (x)_A M'`; ungluing rebuilds
//! the fiber-product module inside `N + M'`. Everything is restricted to
//! commutative base algebras.

use crate::algebra::{Algebra, AlgebraMorphism, Element};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::{Matrix, Subspace};
use crate::modules::{
    augmentation_modules, extend_along, regular_module, restrict_along, tensor_over_algebra, ModuleMorphism,
    ModuleRep, Side,
};
use crate::structure::{jacobson_radical, semisimple_quotient, wedderburn_blocks};

/// Gluing data over the common quotient: the k-side dimension, the
/// A-module side, and the comparison isomorphism
/// `phi: (A/I) (x)_k N -> (A/I) (x)_A M'` (the `unglue` orientation; the
/// canonical direction of `glue` is its inverse).
#[derive(Clone, Debug)]
pub struct GluedTriple {
    pub n_dim: usize,
    pub m_prime: ModuleRep,
    pub phi: Matrix,
}

/// Shared setup for the fiber-product operations.
struct FiberContext {
    b: Algebra,
    /// psi: B -> A (the two twists agree over a commutative base).
    psi: AlgebraMorphism,
    /// Quotient A/I for I = A delta.
    quotient: Algebra,
    /// A/I as a right A-module (restriction of its regular module).
    quotient_right_a: ModuleRep,
}

fn fiber_context(a: &Algebra, delta: &Element) -> Result<FiberContext> {
    if !a.is_associative() {
        return Err(Error::NotAssociative);
    }
    if !a.is_commutative() {
        return Err(Error::InvalidInput("fiber-product functors are restricted to commutative algebras".into()));
    }
    if !a.is_unital() {
        return Err(Error::NotUnital);
    }
    let ideal = a.principal_two_sided_ideal(delta)?;
    if ideal.len() == a.dim() {
        return Err(Error::InvalidInput(
            "delta generates the unit ideal; the fiber product degenerates".into(),
        ));
    }
    let (quotient, proj) = a.quotient(&ideal)?;
    let (psi, _) = a.psi_morphisms(delta)?;
    let b = psi.source().clone();
    let quotient_right_a = restrict_along(&proj, &regular_module(&quotient, Side::Right)?)?;
    Ok(FiberContext { b, psi, quotient, quotient_right_a })
}

/// Plain-tensor coordinates of `1 (x) -` for a left factor with the given
/// unit coordinates: maps `w` to the vector of `unit (x) w`.
fn one_tensor_matrix(unit: &[Scalar], w_dim: usize) -> Matrix {
    let field = unit[0].field();
    let mut m = Matrix::zeros(field, unit.len() * w_dim, w_dim);
    for (x, s) in unit.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        for w in 0..w_dim {
            m.set(x * w_dim + w, w, s.clone());
        }
    }
    m
}

/// `id_q (x) g` on plain tensors with the left factor of dimension `q`.
fn left_identity_tensor(q: usize, g: &Matrix) -> Matrix {
    let field = g.field();
    let (rt, rf) = (g.rows(), g.cols());
    let mut out = Matrix::zeros(field, q * rt, q * rf);
    for a in 0..q {
        for r in 0..rt {
            for c in 0..rf {
                let s = g.at(r, c);
                if !s.is_zero() {
                    out.set(a * rt + r, a * rf + c, s.clone());
                }
            }
        }
    }
    out
}

/// The gluing functor: `L |-> (k (x)_B L, A (x)_B L, phi)`. The two
/// sides of `phi` are both quotients of `(A/I) (x)_k L`; the map is
/// induced and verified to be a well-defined isomorphism.
pub fn glue(a: &Algebra, delta: &Element, l: &ModuleRep) -> Result<GluedTriple> {
    let ctx = fiber_context(a, delta)?;
    if *l.algebra() != ctx.b || l.side() != Side::Left {
        return Err(Error::InvalidInput("expected a left module over the augmented homotope".into()));
    }
    let aug = augmentation_modules(a, delta)?;
    let t_n = tensor_over_algebra(&aug.trivial_right, l)?;
    let ext = extend_along(&ctx.psi, l)?;
    let t_m = tensor_over_algebra(&ctx.quotient_right_a, &ext.module)?;
    let q = ctx.quotient.dim();

    // s2: (A/I) (x)_k L -> (A/I) (x)_k N, just the k-side projection.
    let s2 = left_identity_tensor(q, &t_n.projection);
    let sec2 = left_identity_tensor(q, &t_n.section);
    // s1: (A/I) (x)_k L -> (A/I) (x)_A (A (x)_B L).
    let one_l = ext.tensor.projection.mul(&one_tensor_matrix(a.unit().expect("unital").coords(), l.dim()));
    let s1 = t_m.projection.mul(&left_identity_tensor(q, &one_l));
    // Well-definedness of phi = s1 . sec2: the kernel of s2 must die.
    for v in s2.kernel_basis() {
        if !s1.mul_vec(&v).iter().all(Scalar::is_zero) {
            return Err(Error::Internal("comparison map is not constant on k-side fibers".into()));
        }
    }
    let phi = s1.mul(&sec2);
    if t_m.dim != q * t_n.dim || phi.rank() != t_m.dim {
        return Err(Error::Internal("canonical comparison map is not an isomorphism".into()));
    }
    Ok(GluedTriple { n_dim: t_n.dim, m_prime: ext.module, phi })
}

/// The ungluing functor: rebuilds the fiber-product module
/// `{(n, m) : phi(1 (x) n) = 1 (x) m}` inside `N + M'` with the
/// componentwise B-action (augmentation on `N`, the twist on `M'`).
/// Returns the module and the inclusion matrix into `N + M'`.
pub fn unglue(a: &Algebra, delta: &Element, triple: &GluedTriple) -> Result<(ModuleRep, Matrix)> {
    let ctx = fiber_context(a, delta)?;
    if *triple.m_prime.algebra() != *a || triple.m_prime.side() != Side::Left {
        return Err(Error::InvalidInput("the A-side of the triple must be a left module over the base".into()));
    }
    let q = ctx.quotient.dim();
    let t_m = tensor_over_algebra(&ctx.quotient_right_a, &triple.m_prime)?;
    if triple.phi.rows() != t_m.dim || triple.phi.cols() != q * triple.n_dim {
        return Err(Error::DimensionMismatch("phi shape does not match the glued sides".into()));
    }
    if t_m.dim != q * triple.n_dim || triple.phi.rank() != t_m.dim {
        return Err(Error::InvalidInput("phi is not an isomorphism".into()));
    }
    // phi must be A/I-linear for the triple to be an object at all.
    for j in 0..q {
        let lq = ctx.quotient.mult_operator(&ctx.quotient.basis_element(j), crate::algebra::HomotopeSide::Left);
        let left_on_n = left_identity_tensor_on_first(q, triple.n_dim, &lq);
        let left_on_m = t_m.projection.mul(&left_identity_tensor_on_first(q, triple.m_prime.dim(), &lq)).mul(&t_m.section);
        if triple.phi.mul(&left_on_n) != left_on_m.mul(&triple.phi) {
            return Err(Error::InvalidInput("phi is not linear over the common quotient".into()));
        }
    }
    // The fiber subspace: kernel of (n, m) -> phi(1 (x) n) - [1 (x) m].
    let iota_n = one_tensor_matrix(ctx.quotient.unit().expect("unital").coords(), triple.n_dim);
    let phi_iota = triple.phi.mul(&iota_n);
    let class_m = t_m
        .projection
        .mul(&one_tensor_matrix(ctx.quotient.unit().expect("unital").coords(), triple.m_prime.dim()));
    let theta = phi_iota.hstack(&class_m.scale(&a.field().from_i64(-1)));
    let fiber_span = Subspace::from_vectors(
        a.field(),
        triple.n_dim + triple.m_prime.dim(),
        theta.kernel_basis().into_iter(),
    );
    // Ambient B-module: trivial^n + restrict(M').
    let mut ambient = trivial_power(&ctx.b, triple.n_dim)?;
    let restricted = restrict_along(&ctx.psi, &triple.m_prime)?;
    ambient = ambient.direct_sum(&restricted)?;
    let (module, incl) = ambient.submodule(&fiber_span)?;
    Ok((module, incl))
}

fn trivial_power(b: &Algebra, n: usize) -> Result<ModuleRep> {
    let field = b.field();
    let mut action = vec![Matrix::identity(field, n)];
    for _ in 1..b.dim() {
        action.push(Matrix::zeros(field, n, n));
    }
    ModuleRep::new(b.clone(), Side::Left, n, action)
}

/// `id (x) g` acting on the *second* factor: plain index `a * w + r`.
fn left_identity_tensor_on_first(q: usize, w_dim: usize, g: &Matrix) -> Matrix {
    // g acts on the first (A/I) factor, identity on the second.
    let field = g.field();
    let mut out = Matrix::zeros(field, q * w_dim, q * w_dim);
    for r in 0..q {
        for c in 0..q {
            let s = g.at(r, c);
            if s.is_zero() {
                continue;
            }
            for w in 0..w_dim {
                out.set(r * w_dim + w, c * w_dim + w, s.clone());
            }
        }
    }
    out
}

/// The unit `V -> unglue(glue(V))` as a verified morphism of B-modules.
pub fn unit_morphism(a: &Algebra, delta: &Element, v: &ModuleRep) -> Result<ModuleMorphism> {
    let ctx = fiber_context(a, delta)?;
    if *v.algebra() != ctx.b || v.side() != Side::Left {
        return Err(Error::InvalidInput("expected a left module over the augmented homotope".into()));
    }
    let aug = augmentation_modules(a, delta)?;
    let triple = glue(a, delta, v)?;
    let (fiber, incl) = unglue(a, delta, &triple)?;
    // Components of the unit: v |-> (class in N, class of 1 (x) v in M').
    let t_n = tensor_over_algebra(&aug.trivial_right, v)?;
    let ext = extend_along(&ctx.psi, v)?;
    let to_n = t_n.projection.clone();
    let to_m = ext.tensor.projection.mul(&one_tensor_matrix(a.unit().expect("unital").coords(), v.dim()));
    let ambient = to_n.vstack(&to_m);
    // Express through the fiber inclusion.
    let coords = incl
        .solve(&ambient)?
        .ok_or_else(|| Error::Internal("unit image escapes the fiber product".into()))?;
    ModuleMorphism::new(v.clone(), fiber, coords)
}

/// Exact kernel of the unit `V -> unglue(glue(V))`, as a basis of
/// coordinate vectors in `V`.
pub fn unit_kernel(a: &Algebra, delta: &Element, v: &ModuleRep) -> Result<Vec<Vec<Scalar>>> {
    let unit = unit_morphism(a, delta, v)?;
    Ok(unit.matrix().kernel_basis())
}

/// Membership in the glued subcategory: `W` belongs iff `(A/I) (x)_A W`
/// is a free `A/I`-module, decided by cover splitting plus equality of
/// the local multiplicities across the blocks of `A/I`.
pub fn in_glued_subcategory(a: &Algebra, ideal: &[Element], w: &ModuleRep) -> Result<bool> {
    if !a.is_commutative() {
        return Err(Error::InvalidInput("the glued subcategory is defined over commutative algebras".into()));
    }
    if *w.algebra() != *a || w.side() != Side::Left {
        return Err(Error::InvalidInput("expected a left module over the base algebra".into()));
    }
    let span = Subspace::from_vectors(a.field(), a.dim(), ideal.iter().map(|e| e.coords().to_vec()));
    if !a.is_two_sided_ideal(&span) {
        return Err(Error::NotIdeal);
    }
    if span.dim() == a.dim() {
        // I = A: the tensor is zero, free of rank zero.
        return Ok(true);
    }
    let ideal_elems: Vec<Element> = span.basis().iter().map(|b| Element::new(b.clone())).collect();
    let (quotient, proj) = a.quotient(&ideal_elems)?;
    let extended = extend_along(&proj, w)?;
    let w_bar = extended.module;
    if w_bar.dim() == 0 {
        return Ok(true);
    }
    if !crate::modules::is_projective(&w_bar)? {
        return Ok(false);
    }
    // Local multiplicities: dimensions of c_i . (W / rad W).
    let rad = jacobson_radical(&quotient)?;
    let mut rad_w = Subspace::new(a.field(), w_bar.dim());
    for r in &rad {
        let op = w_bar.action_of(r);
        for c in 0..w_bar.dim() {
            rad_w.insert(op.col(c));
        }
    }
    let (w0, _) = w_bar.quotient_module(&rad_w)?;
    let (sbar, sproj) = semisimple_quotient(&quotient)?;
    let blocks = wedderburn_blocks(&sbar)?;
    let mut mults = Vec::new();
    for c in &blocks.idempotents {
        // Any preimage of the idempotent acts correctly on W/(rad W).
        let pre = sproj
            .matrix()
            .solve(&Matrix::column(a.field(), c.coords()))?
            .ok_or_else(|| Error::Internal("projection to the semisimple quotient is not surjective".into()))?;
        let op = w0.action_of(&Element::new(pre.col(0)));
        mults.push(op.rank());
    }
    Ok(mults.windows(2).all(|w| w[0] == w[1]))
}
