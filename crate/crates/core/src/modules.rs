//! Finite-dimensional modules over structure-constant algebras:
//! restriction and extension of scalars, Hom and tensor spaces,
//! projectivity by cover splitting, Ext^1 against the trivial module,
//! low-degree Tor, the comparison map from the tensor functor to the Hom
//! functor, and the recollement identity report for augmented homotopes.
//!
//! A module is one action matrix per algebra basis element; the
//! constructor checks the structure-constant compatibility, so invalid
//! actions never circulate.

use crate::algebra::{Algebra, AlgebraMorphism, Element, HomotopeSide};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Subspace};

/// Module side: a left module carries `a . m`, a right module `m . a`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// A finite-dimensional module given by one action matrix per basis
/// element of its algebra.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    algebra: Algebra,
    side: Side,
    dim: usize,
    action: Vec<Matrix>,
    tag: Option<String>,
}

impl ModuleRep {
    /// Validates shapes and the structure-constant compatibility
    /// `act(e_i) act(e_j) = sum_l c^l_{ij} act(e_l)` (indices transposed
    /// for right modules), plus identity action of a recorded unit.
    pub fn new(algebra: Algebra, side: Side, dim: usize, action: Vec<Matrix>) -> Result<ModuleRep> {
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch("action matrix shape".into()));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch("action matrix field".into()));
            }
        }
        let module = ModuleRep { algebra, side, dim, action, tag: None };
        for i in 0..module.algebra.dim() {
            for j in 0..module.algebra.dim() {
                let composed = module.action[i].mul(&module.action[j]);
                let (a, b) = match side {
                    Side::Left => (i, j),
                    Side::Right => (j, i),
                };
                let prod = module
                    .algebra
                    .multiply(&module.algebra.basis_element(a), &module.algebra.basis_element(b));
                let mut expected = Matrix::zeros(module.algebra.field(), dim, dim);
                for (l, c) in prod.coords().iter().enumerate() {
                    if !c.is_zero() {
                        expected = expected.add(&module.action[l].scale(c));
                    }
                }
                if composed != expected {
                    return Err(Error::InvalidInput(format!(
                        "action violates structure constants on basis pair ({i},{j})"
                    )));
                }
            }
        }
        if let Some(u) = module.algebra.unit() {
            if dim > 0 && !module.action_of(&u).is_identity() {
                return Err(Error::InvalidInput("unit of the algebra does not act as identity".into()));
            }
        }
        Ok(module)
    }

    pub fn with_tag(mut self, tag: &str) -> ModuleRep {
        self.tag = Some(tag.to_string());
        self
    }

    pub fn zero(algebra: Algebra, side: Side) -> ModuleRep {
        let action = (0..algebra.dim()).map(|_| Matrix::zeros(algebra.field(), 0, 0)).collect();
        ModuleRep { algebra, side, dim: 0, action, tag: Some("zero".into()) }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    /// Action matrix of an arbitrary element (linear combination).
    pub fn action_of(&self, x: &Element) -> Matrix {
        assert_eq!(x.dim(), self.algebra.dim(), "element/algebra mismatch");
        let mut out = Matrix::zeros(self.algebra.field(), self.dim, self.dim);
        for (i, c) in x.coords().iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.action[i].scale(c));
            }
        }
        out
    }

    pub fn apply(&self, x: &Element, v: &[Scalar]) -> Vec<Scalar> {
        self.action_of(x).mul_vec(v)
    }

    /// Direct sum with block-diagonal action.
    pub fn direct_sum(&self, other: &ModuleRep) -> Result<ModuleRep> {
        if self.algebra != other.algebra || self.side != other.side {
            return Err(Error::InvalidInput("direct sum needs one algebra and one side".into()));
        }
        let field = self.algebra.field();
        let dim = self.dim + other.dim;
        let mut action = Vec::new();
        for i in 0..self.algebra.dim() {
            let mut m = Matrix::zeros(field, dim, dim);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    m.set(r, c, self.action[i].at(r, c).clone());
                }
            }
            for r in 0..other.dim {
                for c in 0..other.dim {
                    m.set(self.dim + r, self.dim + c, other.action[i].at(r, c).clone());
                }
            }
            action.push(m);
        }
        Ok(ModuleRep { algebra: self.algebra.clone(), side: self.side, dim, action, tag: None })
    }

    /// Closure of a set of vectors under the action (smallest submodule
    /// containing them).
    pub fn spin(&self, vectors: &[Vec<Scalar>]) -> Subspace {
        let mut span = Subspace::new(self.algebra.field(), self.dim);
        for v in vectors {
            span.insert(v.clone());
        }
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<Scalar>> = span.basis().to_vec();
            for v in &snapshot {
                for m in &self.action {
                    grew |= span.insert(m.mul_vec(v));
                }
            }
            if !grew {
                return span;
            }
        }
    }

    /// Minimal generating set chosen by a greedy echelon sweep over the
    /// standard basis (deterministic).
    pub fn minimal_generators(&self) -> Vec<Vec<Scalar>> {
        let field = self.algebra.field();
        let mut gens: Vec<Vec<Scalar>> = Vec::new();
        let mut reached = Subspace::new(field, self.dim);
        for c in 0..self.dim {
            let mut v = vec![field.zero(); self.dim];
            v[c] = field.one();
            if reached.contains(&v) {
                continue;
            }
            gens.push(v.clone());
            let mut spun = reached.basis().to_vec();
            spun.push(v);
            reached = self.spin(&spun);
            if reached.dim() == self.dim {
                break;
            }
        }
        gens
    }

    /// Submodule on an action-invariant span, with the inclusion matrix.
    pub fn submodule(&self, span: &Subspace) -> Result<(ModuleRep, Matrix)> {
        let field = self.algebra.field();
        let k = span.dim();
        let incl = if k == 0 {
            Matrix::zeros(field, self.dim, 0)
        } else {
            Matrix::from_cols(field, span.basis().to_vec())?
        };
        let mut action = Vec::new();
        for m in &self.action {
            let mut cols = Vec::new();
            for v in span.basis() {
                let img = m.mul_vec(v);
                let sol = incl
                    .solve(&Matrix::column(field, &img))?
                    .ok_or_else(|| Error::InvalidInput("span is not action-invariant".into()))?;
                cols.push(sol.col(0));
            }
            action.push(if k == 0 { Matrix::zeros(field, 0, 0) } else { Matrix::from_cols(field, cols)? });
        }
        let module = ModuleRep { algebra: self.algebra.clone(), side: self.side, dim: k, action, tag: None };
        Ok((module, incl))
    }

    /// Quotient module by an action-invariant span, with the projection.
    pub fn quotient_module(&self, span: &Subspace) -> Result<(ModuleRep, Matrix)> {
        let field = self.algebra.field();
        let complement = span.complement_positions();
        let q = complement.len();
        let mut proj = Matrix::zeros(field, q, self.dim);
        for c in 0..self.dim {
            let mut v = vec![field.zero(); self.dim];
            v[c] = field.one();
            for (r, coord) in span.quotient_coords(&v).iter().enumerate() {
                if !coord.is_zero() {
                    proj.set(r, c, coord.clone());
                }
            }
        }
        let mut action = Vec::new();
        for m in &self.action {
            // Induced action: project the image of each complement rep.
            let mut cols = Vec::new();
            for &pos in &complement {
                let mut v = vec![field.zero(); self.dim];
                v[pos] = field.one();
                let img = m.mul_vec(&v);
                cols.push(span.quotient_coords(&img));
            }
            let induced = if q == 0 { Matrix::zeros(field, 0, 0) } else { Matrix::from_cols(field, cols)? };
            action.push(induced);
        }
        // Invariance check: the induced action must commute with proj.
        for (i, m) in self.action.iter().enumerate() {
            if action[i].mul(&proj) != proj.mul(m) {
                return Err(Error::InvalidInput("span is not action-invariant".into()));
            }
        }
        let module = ModuleRep { algebra: self.algebra.clone(), side: self.side, dim: q, action, tag: None };
        Ok((module, proj))
    }

    /// Free cover from the minimal generators: `F = B^g -> M`,
    /// `(b_i) -> sum b_i . v_i`. Returns the cover, the surjection and
    /// the generators.
    pub fn free_cover(&self) -> Result<(ModuleRep, Matrix, Vec<Vec<Scalar>>)> {
        let b = &self.algebra;
        if !b.is_unital() {
            return Err(Error::NotUnital);
        }
        let field = b.field();
        let gens = self.minimal_generators();
        let regular = regular_module(b, self.side)?;
        let mut free = ModuleRep::zero(b.clone(), self.side);
        for _ in 0..gens.len() {
            free = free.direct_sum(&regular)?;
        }
        let mut pi = Matrix::zeros(field, self.dim, gens.len() * b.dim());
        for (slot, v) in gens.iter().enumerate() {
            for t in 0..b.dim() {
                let img = self.action[t].mul_vec(v);
                for (r, s) in img.iter().enumerate() {
                    if !s.is_zero() {
                        pi.set(r, slot * b.dim() + t, s.clone());
                    }
                }
            }
        }
        Ok((free, pi, gens))
    }
}

/// A linear map between modules verified to intertwine the actions.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    source: ModuleRep,
    target: ModuleRep,
    matrix: Matrix,
}

impl ModuleMorphism {
    pub fn new(source: ModuleRep, target: ModuleRep, matrix: Matrix) -> Result<ModuleMorphism> {
        if source.algebra != target.algebra || source.side != target.side {
            return Err(Error::InvalidInput("module morphism needs one algebra and one side".into()));
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(Error::DimensionMismatch("module morphism matrix shape".into()));
        }
        for i in 0..source.algebra.dim() {
            if matrix.mul(&source.action[i]) != target.action[i].mul(&matrix) {
                return Err(Error::InvalidInput(format!(
                    "matrix does not intertwine the action of basis element {i}"
                )));
            }
        }
        Ok(ModuleMorphism { source, target, matrix })
    }

    pub fn source(&self) -> &ModuleRep {
        &self.source
    }

    pub fn target(&self) -> &ModuleRep {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.rows() == self.matrix.cols() && self.matrix.rank() == self.matrix.rows()
    }
}

/// The rank-one free module: the algebra acting on itself.
pub fn regular_module(a: &Algebra, side: Side) -> Result<ModuleRep> {
    if !a.is_associative() {
        return Err(Error::NotAssociative);
    }
    let action = (0..a.dim())
        .map(|i| {
            let e = a.basis_element(i);
            match side {
                Side::Left => a.mult_operator(&e, HomotopeSide::Left),
                Side::Right => a.mult_operator(&e, HomotopeSide::Right),
            }
        })
        .collect();
    Ok(ModuleRep { algebra: a.clone(), side, dim: a.dim(), action, tag: Some("regular".into()) })
}

/// The standard modules attached to an augmented homotope `B = A^_delta`:
/// the augmentation ideal as a left and as a right module (through the
/// two twisting morphisms), and the one-dimensional trivial module on
/// each side.
#[derive(Clone, Debug)]
pub struct AugmentationModules {
    pub b: Algebra,
    pub b_plus_left: ModuleRep,
    pub b_plus_right: ModuleRep,
    pub trivial: ModuleRep,
    pub trivial_right: ModuleRep,
}

pub fn augmentation_modules(a: &Algebra, delta: &Element) -> Result<AugmentationModules> {
    let b = a.augmented_homotope(delta)?;
    let field = a.field();
    let d = a.dim();
    let mut left_action = vec![Matrix::identity(field, d)];
    let mut right_action = vec![Matrix::identity(field, d)];
    for i in 0..d {
        let e = a.basis_element(i);
        // Left action of the embedded e_i: multiply by e_i delta.
        left_action.push(a.mult_operator(&a.multiply(&e, delta), HomotopeSide::Left));
        // Right action of the embedded e_i: multiply by delta e_i.
        right_action.push(a.mult_operator(&a.multiply(delta, &e), HomotopeSide::Right));
    }
    let b_plus_left = ModuleRep::new(b.clone(), Side::Left, d, left_action)?.with_tag("B-plus-left");
    let b_plus_right = ModuleRep::new(b.clone(), Side::Right, d, right_action)?.with_tag("B-plus-right");
    let trivial = trivial_module(&b, Side::Left)?;
    let trivial_right = trivial_module(&b, Side::Right)?;
    Ok(AugmentationModules { b, b_plus_left, b_plus_right, trivial, trivial_right })
}

/// One-dimensional module through the augmentation of an augmented
/// homotope (adjoined unit acts by 1, the embedded algebra by 0). Only
/// meaningful for algebras produced by `augmented_homotope`.
pub fn trivial_module(b: &Algebra, side: Side) -> Result<ModuleRep> {
    let field = b.field();
    let mut action = vec![Matrix::identity(field, 1)];
    for _ in 1..b.dim() {
        action.push(Matrix::zeros(field, 1, 1));
    }
    ModuleRep::new(b.clone(), side, 1, action).map(|m| m.with_tag("trivial"))
}

/// Restriction of scalars along an algebra morphism: the source acts
/// through its image.
pub fn restrict_along(f: &AlgebraMorphism, m: &ModuleRep) -> Result<ModuleRep> {
    if *m.algebra() != *f.target() {
        return Err(Error::InvalidInput("module is not over the morphism target".into()));
    }
    let action = (0..f.source().dim()).map(|i| m.action_of(&f.apply(&f.source().basis_element(i)))).collect();
    ModuleRep::new(f.source().clone(), m.side, m.dim, action)
}

/// Exact basis of the intertwiner space `Hom(M, N)` for two modules over
/// one algebra and side.
pub fn hom_space(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<ModuleMorphism>> {
    if m.algebra != n.algebra || m.side != n.side {
        return Err(Error::InvalidInput("hom space needs one algebra and one side".into()));
    }
    let field = m.algebra.field();
    let unknowns = n.dim * m.dim; // F[r][c], index r * m.dim + c
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Subspace::new(field, unknowns);
    for i in 0..m.algebra.dim() {
        // F . act_m(e_i) - act_n(e_i) . F = 0, entry (r, c).
        for r in 0..n.dim {
            for c in 0..m.dim {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..m.dim {
                    let a = m.action[i].at(k, c);
                    if !a.is_zero() {
                        row[r * m.dim + k] = row[r * m.dim + k].add(a);
                    }
                }
                for k in 0..n.dim {
                    let b = n.action[i].at(r, k);
                    if !b.is_zero() {
                        row[k * m.dim + c] = row[k * m.dim + c].sub(b);
                    }
                }
                rows.insert(row);
            }
        }
    }
    let mut basis = Vec::new();
    for v in rows.solution_space() {
        let mut f = Matrix::zeros(field, n.dim, m.dim);
        for r in 0..n.dim {
            for c in 0..m.dim {
                f.set(r, c, v[r * m.dim + c].clone());
            }
        }
        basis.push(ModuleMorphism { source: m.clone(), target: n.clone(), matrix: f });
    }
    Ok(basis)
}

/// Tensor product over the algebra: quotient of the plain tensor space by
/// the balancing relations `(m b) x n - m x (b n)`. Keeps the projection,
/// a section of it, and the relation span for downstream induced maps.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub dim: usize,
    /// Plain-tensor coordinates -> quotient coordinates.
    pub projection: Matrix,
    /// Canonical section (quotient basis to plain-tensor representatives).
    pub section: Matrix,
    /// Echelonized balancing relations inside the plain tensor space.
    pub relations: Subspace,
}

pub fn tensor_over_algebra(m: &ModuleRep, n: &ModuleRep) -> Result<TensorProduct> {
    if m.algebra != n.algebra {
        return Err(Error::InvalidInput("tensor product needs one algebra".into()));
    }
    if m.side != Side::Right || n.side != Side::Left {
        return Err(Error::InvalidInput("tensor product takes a right module and a left module".into()));
    }
    let field = m.algebra.field();
    let plain = m.dim * n.dim; // index (a, b) -> a * n.dim + b
    let mut relations = Subspace::new(field, plain);
    for k in 0..m.algebra.dim() {
        for a in 0..m.dim {
            for b in 0..n.dim {
                let mut row = vec![field.zero(); plain];
                for i in 0..m.dim {
                    let s = m.action[k].at(i, a);
                    if !s.is_zero() {
                        row[i * n.dim + b] = row[i * n.dim + b].add(s);
                    }
                }
                for j in 0..n.dim {
                    let s = n.action[k].at(j, b);
                    if !s.is_zero() {
                        row[a * n.dim + j] = row[a * n.dim + j].sub(s);
                    }
                }
                relations.insert(row);
            }
        }
    }
    let complement = relations.complement_positions();
    let dim = complement.len();
    let mut projection = Matrix::zeros(field, dim, plain);
    for c in 0..plain {
        let mut v = vec![field.zero(); plain];
        v[c] = field.one();
        for (r, s) in relations.quotient_coords(&v).iter().enumerate() {
            if !s.is_zero() {
                projection.set(r, c, s.clone());
            }
        }
    }
    let mut section = Matrix::zeros(field, plain, dim);
    for (col, &pos) in complement.iter().enumerate() {
        section.set(pos, col, field.one());
    }
    Ok(TensorProduct { dim, projection, section, relations })
}

/// Decides projectivity by splitting the free cover: a section is a
/// tuple of homomorphisms into the regular module whose evaluation
/// against the generators is the identity - one exact linear system.
pub fn is_projective(m: &ModuleRep) -> Result<bool> {
    let b = &m.algebra;
    if !b.is_unital() {
        return Err(Error::NotUnital);
    }
    if m.dim == 0 {
        return Ok(true);
    }
    let field = b.field();
    let gens = m.minimal_generators();
    let regular = regular_module(b, m.side)?;
    let homs = hom_space(m, &regular)?;
    if homs.is_empty() {
        return Ok(false);
    }
    // K[(i,t)] column c = action_of(f_t(e_c)) applied to gens[i].
    let g = gens.len();
    let k = homs.len();
    let mut rows: Vec<Vec<Scalar>> = vec![vec![field.zero(); g * k]; m.dim * m.dim];
    for (t, f) in homs.iter().enumerate() {
        for c in 0..m.dim {
            let elem = Element::new(f.matrix.col(c));
            let op = m.action_of(&elem);
            for (i, v) in gens.iter().enumerate() {
                let img = op.mul_vec(v);
                for (r, s) in img.iter().enumerate() {
                    if !s.is_zero() {
                        rows[r * m.dim + c][i * k + t] = s.clone();
                    }
                }
            }
        }
    }
    let mut rhs_rows = Vec::with_capacity(m.dim * m.dim);
    for r in 0..m.dim {
        for c in 0..m.dim {
            rhs_rows.push(vec![if r == c { field.one() } else { field.zero() }]);
        }
    }
    let lhs = Matrix::from_rows(field, rows)?;
    let rhs = Matrix::from_rows(field, rhs_rows)?;
    Ok(lhs.solve(&rhs)?.is_some())
}

/// `dim Ext^1(k, k) = dim Hom(B+, k)` over the augmented homotope: the
/// detector for infinite global dimension.
pub fn ext1_trivial(a: &Algebra, delta: &Element) -> Result<usize> {
    let aug = augmentation_modules(a, delta)?;
    Ok(hom_space(&aug.b_plus_left, &aug.trivial)?.len())
}

/// `dim Tor_i(M, V)` for `i <= 2`, from a two-step free presentation of
/// `V` (free cover, kernel, free cover of the kernel) by dimension
/// shifting.
pub fn tor_low(m: &ModuleRep, v: &ModuleRep, degree: usize) -> Result<usize> {
    if degree > 2 {
        return Err(Error::InvalidInput("tor_low supports degrees 0..=2".into()));
    }
    if m.algebra != v.algebra {
        return Err(Error::InvalidInput("tor needs one algebra".into()));
    }
    match degree {
        0 => Ok(tensor_over_algebra(m, v)?.dim),
        1 => tor_one(m, v),
        _ => {
            if v.dim == 0 {
                return Ok(0);
            }
            let (f0, pi, _) = v.free_cover()?;
            let kernel = Subspace::from_vectors(
                m.algebra.field(),
                f0.dim(),
                pi.kernel_basis().into_iter(),
            );
            let (k0, _) = f0.submodule(&kernel)?;
            // Tor_2(M, V) = Tor_1(M, K0).
            tor_one(m, &k0)
        }
    }
}

fn tor_one(m: &ModuleRep, v: &ModuleRep) -> Result<usize> {
    if v.dim == 0 || m.dim == 0 {
        return Ok(0);
    }
    let field = m.algebra.field();
    let (f0, pi, _) = v.free_cover()?;
    let kernel = Subspace::from_vectors(field, f0.dim(), pi.kernel_basis().into_iter());
    let (k0, incl) = f0.submodule(&kernel)?;
    if k0.dim() == 0 {
        return Ok(0);
    }
    let t_k = tensor_over_algebra(m, &k0)?;
    let t_f = tensor_over_algebra(m, &f0)?;
    // Induced map M x K0 -> M x F0 from the inclusion.
    let plain = tensor_map_plain(field, m.dim, &incl);
    let induced = t_f.projection.mul(&plain).mul(&t_k.section);
    Ok(t_k.dim - induced.rank())
}

/// Plain-tensor matrix of `id_M (x) g` for `g: N -> N'`.
fn tensor_map_plain(field: FieldSpec, m_dim: usize, g: &Matrix) -> Matrix {
    let (n_to, n_from) = (g.rows(), g.cols());
    let mut out = Matrix::zeros(field, m_dim * n_to, m_dim * n_from);
    for a in 0..m_dim {
        for r in 0..n_to {
            for c in 0..n_from {
                let s = g.at(r, c);
                if !s.is_zero() {
                    out.set(a * n_to + r, a * n_from + c, s.clone());
                }
            }
        }
    }
    out
}

/// The extension-of-scalars module `A (x)_B V` (through the right twist)
/// as an A-module, together with its tensor presentation.
pub struct ExtendedModule {
    pub module: ModuleRep,
    pub tensor: TensorProduct,
}

/// Extension of scalars along an algebra morphism `f: B -> A`: the
/// module `A (x)_B V` for a left B-module `V`, with `A` acting by left
/// multiplication on the left factor.
pub fn extend_along(f: &AlgebraMorphism, v: &ModuleRep) -> Result<ExtendedModule> {
    if *v.algebra() != *f.source() || v.side() != Side::Left {
        return Err(Error::InvalidInput("expected a left module over the morphism source".into()));
    }
    let a = f.target();
    let right = restrict_along(f, &regular_module(a, Side::Right)?)?;
    let tensor = tensor_over_algebra(&right, v)?;
    let field = a.field();
    let mut action = Vec::new();
    for j in 0..a.dim() {
        let l = a.mult_operator(&a.basis_element(j), HomotopeSide::Left);
        let plain = left_factor_map_plain(field, &l, v.dim());
        action.push(tensor.projection.mul(&plain).mul(&tensor.section));
    }
    let module = ModuleRep::new(a.clone(), Side::Left, tensor.dim, action)?;
    Ok(ExtendedModule { module, tensor })
}

/// `V |-> A (x)_B V` through the right twist `psi_2: a |-> delta a`.
pub fn extension_along_psi2(a: &Algebra, delta: &Element, v: &ModuleRep) -> Result<ExtendedModule> {
    let (_, psi2) = a.psi_morphisms(delta)?;
    extend_along(&psi2, v)
}

/// Plain-tensor matrix of `g (x) id_V` for `g` acting on the left factor.
fn left_factor_map_plain(field: FieldSpec, g: &Matrix, v_dim: usize) -> Matrix {
    let (m_to, m_from) = (g.rows(), g.cols());
    let mut out = Matrix::zeros(field, m_to * v_dim, m_from * v_dim);
    for r in 0..m_to {
        for c in 0..m_from {
            let s = g.at(r, c);
            if s.is_zero() {
                continue;
            }
            for b in 0..v_dim {
                out.set(r * v_dim + b, c * v_dim + b, s.clone());
            }
        }
    }
    out
}

/// The coinduced module `Hom_B(B+, V)` (through the left twist) as an
/// A-module, with the chosen homomorphism basis.
pub struct CoinducedModule {
    pub module: ModuleRep,
    pub basis: Vec<Matrix>,
}

/// `V |-> Hom_B(B+, V)`: homomorphisms out of the augmentation ideal as
/// a left B-module (the `a delta` twist), with A acting by
/// precomposition with right multiplication.
pub fn coinduction_along_psi1(a: &Algebra, delta: &Element, v: &ModuleRep) -> Result<CoinducedModule> {
    let aug = augmentation_modules(a, delta)?;
    if *v.algebra() != aug.b || v.side() != Side::Left {
        return Err(Error::InvalidInput("expected a left module over the augmented homotope".into()));
    }
    let homs = hom_space(&aug.b_plus_left, v)?;
    let basis: Vec<Matrix> = homs.into_iter().map(|h| h.matrix).collect();
    let field = a.field();
    let hom_dim = basis.len();
    let mut action = Vec::new();
    for j in 0..a.dim() {
        let right = a.mult_operator(&a.basis_element(j), HomotopeSide::Right);
        let mut cols = Vec::new();
        for f in &basis {
            let composed = f.mul(&right);
            let coords = express_in_matrix_basis(field, &basis, &composed)?
                .ok_or_else(|| Error::Internal("hom space is not closed under the A-action".into()))?;
            cols.push(coords);
        }
        let m = if hom_dim == 0 {
            Matrix::zeros(field, 0, 0)
        } else {
            Matrix::from_cols(field, cols)?
        };
        action.push(m);
    }
    let module = ModuleRep::new(a.clone(), Side::Left, hom_dim, action)?;
    Ok(CoinducedModule { module, basis })
}

fn express_in_matrix_basis(field: FieldSpec, basis: &[Matrix], target: &Matrix) -> Result<Option<Vec<Scalar>>> {
    if basis.is_empty() {
        return Ok(if target.is_zero() { Some(Vec::new()) } else { None });
    }
    let flatten = |m: &Matrix| -> Vec<Scalar> {
        let mut v = Vec::with_capacity(m.rows() * m.cols());
        for r in 0..m.rows() {
            v.extend(m.row(r).iter().cloned());
        }
        v
    };
    let cols: Vec<Vec<Scalar>> = basis.iter().map(&flatten).collect();
    let lhs = Matrix::from_cols(field, cols)?;
    let rhs = Matrix::column(field, &flatten(target));
    Ok(lhs.solve(&rhs)?.map(|s| s.col(0)))
}

/// The comparison morphism from the tensor functor to the Hom functor:
/// `a (x) v |-> (a' |-> (a' a) . v)`, realized as a morphism of
/// A-modules `A (x)_B V -> Hom_B(B+, V)`. Well-definedness on the
/// balancing relations is verified; a failure is an internal bug.
pub fn mu_transform(a: &Algebra, delta: &Element, v: &ModuleRep) -> Result<ModuleMorphism> {
    let source = extension_along_psi2(a, delta, v)?;
    let target = coinduction_along_psi1(a, delta, v)?;
    let field = a.field();
    let n = v.dim();
    let d = a.dim();
    // phi(x_idx, v_idx) as an n x d matrix: column j = act_V(embed(e_j e_x)) e_v.
    let phi = |x_idx: usize, v_idx: usize| -> Matrix {
        let mut out = Matrix::zeros(field, n, d);
        for j in 0..d {
            let prod = a.multiply(&a.basis_element(j), &a.basis_element(x_idx));
            let op = v.action_of(&a.embed_in_augmented(&prod));
            for (r, s) in op.col(v_idx).into_iter().enumerate() {
                if !s.is_zero() {
                    out.set(r, j, s);
                }
            }
        }
        out
    };
    let phi_of_plain = |coords: &[Scalar]| -> Matrix {
        let mut acc = Matrix::zeros(field, n, d);
        for (idx, s) in coords.iter().enumerate() {
            if !s.is_zero() {
                acc = acc.add(&phi(idx / n.max(1), idx % n.max(1)).scale(s));
            }
        }
        acc
    };
    // Well-definedness: the balancing relations must map to zero.
    for rel in source.tensor.relations.basis() {
        if !phi_of_plain(rel).is_zero() {
            return Err(Error::Internal("comparison map does not kill the balancing relations".into()));
        }
    }
    let mut cols = Vec::new();
    for t in 0..source.tensor.dim {
        let plain = source.tensor.section.col(t);
        let mat = phi_of_plain(&plain);
        let coords = express_in_matrix_basis(field, &target.basis, &mat)?
            .ok_or_else(|| Error::Internal("comparison image escapes the hom space".into()))?;
        cols.push(coords);
    }
    let matrix = if target.module.dim() == 0 {
        Matrix::zeros(field, 0, source.tensor.dim)
    } else {
        Matrix::from_cols(field, cols)?
    };
    ModuleMorphism::new(source.module, target.module, matrix)
}

/// One named identity check inside a recollement report.
#[derive(Clone, Debug)]
pub struct RecollementCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of the recollement identity suite for one `(A, delta)`.
#[derive(Clone, Debug)]
pub struct RecollementReport {
    pub well_tempered: bool,
    pub checks: Vec<RecollementCheck>,
}

impl RecollementReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verifies the recollement identities on sample left A-modules: the
/// unit of restriction/coinduction and the counit of
/// extension/restriction are isomorphisms, the triangle identities hold
/// as exact matrix equations, trivial-isotypic modules are exactly the
/// kernel of the extension functor, and the comparison map is an
/// isomorphism. For non-well-tempered elements the failures are
/// recorded, not hidden.
pub fn recollement_report(a: &Algebra, delta: &Element, samples: &[ModuleRep]) -> Result<RecollementReport> {
    let well_tempered = a.is_well_tempered_criterion(delta)?;
    let aug = augmentation_modules(a, delta)?;
    let (psi1, psi2) = a.psi_morphisms(delta)?;
    let field = a.field();
    let unit_a = a.unit().expect("well-tempered criterion required a unit");
    let mut checks = Vec::new();
    let mut push = |name: String, pass: bool, detail: String| {
        checks.push(RecollementCheck { name, pass, detail });
    };

    for (s_idx, m) in samples.iter().enumerate() {
        if *m.algebra() != *a || m.side() != Side::Left {
            return Err(Error::InvalidInput(format!("sample {s_idx} is not a left module over the base algebra")));
        }
        let v1 = restrict_along(&psi1, m)?;
        // Unit of (restriction -| coinduction): m |-> (x |-> x . m).
        let coind = coinduction_along_psi1(a, delta, &v1)?;
        let mut eta_cols = Vec::new();
        let mut eta_ok = true;
        for c in 0..m.dim() {
            let mut g = Matrix::zeros(field, m.dim(), a.dim());
            for j in 0..a.dim() {
                let img = m.action(j).col(c);
                for (r, s) in img.into_iter().enumerate() {
                    if !s.is_zero() {
                        g.set(r, j, s);
                    }
                }
            }
            match express_in_matrix_basis(field, &coind.basis, &g)? {
                Some(coords) => eta_cols.push(coords),
                None => {
                    eta_ok = false;
                    break;
                }
            }
        }
        if !eta_ok {
            push(
                format!("sample {s_idx}: unit into Hom(B+, -) lands in the hom space"),
                false,
                "unit image escapes the hom space".into(),
            );
            continue;
        }
        let eta = if coind.module.dim() == 0 {
            Matrix::zeros(field, 0, m.dim())
        } else {
            Matrix::from_cols(field, eta_cols)?
        };
        let eta_iso = coind.module.dim() == m.dim() && eta.rank() == m.dim();
        push(
            format!("sample {s_idx}: Hom(B+, restrict(M)) = M"),
            eta_iso,
            format!("dim M = {}, dim Hom = {}, rank eta = {}", m.dim(), coind.module.dim(), eta.rank()),
        );
        if eta_iso {
            // The unit must be a morphism of A-modules.
            let eta_morph = ModuleMorphism::new(m.clone(), coind.module.clone(), eta.clone());
            push(
                format!("sample {s_idx}: unit is A-linear"),
                eta_morph.is_ok(),
                String::new(),
            );
        }
        // Triangle: evaluation at 1 after the unit is the identity.
        if coind.module.dim() > 0 {
            let mut eval = Matrix::zeros(field, v1.dim(), coind.module.dim());
            for (t, f) in coind.basis.iter().enumerate() {
                for (r, s) in f.mul_vec(unit_a.coords()).into_iter().enumerate() {
                    if !s.is_zero() {
                        eval.set(r, t, s);
                    }
                }
            }
            let composite = eval.mul(&eta);
            push(
                format!("sample {s_idx}: triangle (eval at 1) . unit = id"),
                composite.is_identity(),
                String::new(),
            );
        }

        // Counit of (extension -| restriction): a (x) m |-> a . m.
        let v2 = restrict_along(&psi2, m)?;
        let ext = extension_along_psi2(a, delta, &v2)?;
        let mut counit_plain = Matrix::zeros(field, m.dim(), a.dim() * m.dim());
        for x in 0..a.dim() {
            for w in 0..m.dim() {
                let img = m.action(x).col(w);
                for (r, s) in img.into_iter().enumerate() {
                    if !s.is_zero() {
                        counit_plain.set(r, x * m.dim() + w, s);
                    }
                }
            }
        }
        let counit = counit_plain.mul(&ext.tensor.section);
        let counit_iso = ext.module.dim() == m.dim() && counit.rank() == m.dim();
        push(
            format!("sample {s_idx}: A (x) restrict(M) = M"),
            counit_iso,
            format!("dim M = {}, dim A(x)M = {}, rank counit = {}", m.dim(), ext.module.dim(), counit.rank()),
        );
        if counit_iso {
            let counit_morph = ModuleMorphism::new(ext.module.clone(), m.clone(), counit.clone());
            push(
                format!("sample {s_idx}: counit is A-linear"),
                counit_morph.is_ok(),
                String::new(),
            );
        }
        // Triangle: restrict(counit) . unit' = id on restrict(M), where
        // unit' sends w to the class of 1 (x) w.
        let mut one_tensor = Matrix::zeros(field, a.dim() * m.dim(), m.dim());
        for (x, s) in unit_a.coords().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for w in 0..m.dim() {
                one_tensor.set(x * m.dim() + w, w, s.clone());
            }
        }
        let unit_prime = ext.tensor.projection.mul(&one_tensor);
        let composite = counit.mul(&unit_prime);
        push(
            format!("sample {s_idx}: triangle counit . (1 (x) -) = id"),
            composite.is_identity(),
            String::new(),
        );

        // Comparison map on the restricted sample.
        let mu = mu_transform(a, delta, &v1)?;
        push(
            format!("sample {s_idx}: comparison tensor->hom is an isomorphism"),
            mu.is_bijective(),
            format!("source dim {}, target dim {}, rank {}", mu.source().dim(), mu.target().dim(), mu.rank()),
        );
    }

    // Trivial-isotypic kernel identity: extension kills the trivial
    // module, and modules killed by extension are trivial-isotypic.
    let mut b_samples: Vec<(String, ModuleRep)> = vec![
        ("trivial".into(), aug.trivial.clone()),
        ("trivial + trivial".into(), aug.trivial.direct_sum(&aug.trivial)?),
        ("regular B".into(), regular_module(&aug.b, Side::Left)?),
    ];
    for (s_idx, m) in samples.iter().enumerate() {
        b_samples.push((format!("restricted sample {s_idx}"), restrict_along(&psi1, m)?));
    }
    for (name, v) in &b_samples {
        let ext = extension_along_psi2(a, delta, v)?;
        let killed = ext.module.dim() == 0;
        let trivial_isotypic = (1..aug.b.dim()).all(|i| v.action(i).is_zero());
        push(
            format!("B-sample {name}: extension kills the module iff it is trivial-isotypic"),
            killed == trivial_isotypic,
            format!("dim A(x)V = {}, trivial-isotypic = {trivial_isotypic}", ext.module.dim()),
        );
        let mu = mu_transform(a, delta, v)?;
        push(
            format!("B-sample {name}: comparison map is an isomorphism"),
            mu.is_bijective(),
            format!("source dim {}, target dim {}, rank {}", mu.source().dim(), mu.target().dim(), mu.rank()),
        );
    }

    Ok(RecollementReport { well_tempered, checks })
}

/// The simple module of one Wedderburn block of a constructed algebra:
/// basis elements act through their block coordinate matrices.
pub fn block_simple_module(a: &Algebra, block: usize) -> Result<ModuleRep> {
    let bd = crate::structure::block_data(a)?;
    let units = bd
        .matrix_units
        .as_ref()
        .ok_or_else(|| Error::MissingSplitting("block simple module needs matrix units".into()))?;
    if block >= bd.block_sizes.len() {
        return Err(Error::InvalidInput("block index out of range".into()));
    }
    let s = &bd.semisimple;
    let field = s.field();
    let n = bd.block_sizes[block];
    let mut flat = Vec::new();
    for row in &units[block] {
        for u in row {
            flat.push(u.coords().to_vec());
        }
    }
    let unit_matrix = Matrix::from_cols(field, flat)?;
    let mut action = Vec::new();
    for i in 0..a.dim() {
        let bar = Element::new(bd.proj.mul_vec(a.basis_element(i).coords()));
        let component = s.multiply(&bar, &bd.idempotents[block]);
        let coords = unit_matrix
            .solve(&Matrix::column(field, component.coords()))?
            .ok_or_else(|| Error::Internal("block component escapes the matrix units".into()))?;
        let mut g = Matrix::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                g.set(r, c, coords.at(r * n + c, 0).clone());
            }
        }
        action.push(g);
    }
    ModuleRep::new(a.clone(), Side::Left, n, action)
}
