//! Structure-constant algebras and their element arithmetic: homotopes,
//! augmented homotopes, ideals, quotients and the two unital morphisms
//! from an augmented homotope back to the base algebra.
//!
//! An algebra is a basis `e_0 .. e_{d-1}` plus a sparse tensor
//! `c^l_{ij}` with `e_i e_j = sum_l c^l_{ij} e_l`. Nothing here assumes
//! associativity; operations that require it check and say so.

use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Subspace};
use crate::structure::BlockData;

/// Which side a multiplication operator or homotope deformation acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HomotopeSide {
    Left,
    Right,
}

/// Coordinate vector in the basis of some algebra. Elements do not carry
/// a back-reference; every operation takes the algebra explicitly and
/// validates the length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    coords: Vec<Scalar>,
}

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Element {
        Element { coords }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(self.dim(), other.dim(), "element dimension mismatch");
        Element::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Element) -> Element {
        assert_eq!(self.dim(), other.dim(), "element dimension mismatch");
        Element::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Element {
        Element::new(self.coords.iter().map(Scalar::neg).collect())
    }

    pub fn literals(&self) -> Vec<String> {
        self.coords.iter().map(Scalar::literal).collect()
    }
}

/// Finite-dimensional algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    labels: Vec<String>,
    /// Sparse entries `(i, j, l, c)` meaning `e_i e_j` contains `c * e_l`;
    /// sorted by `(i, j, l)`, zero coefficients dropped.
    sc: Vec<(usize, usize, usize, Scalar)>,
    /// Dense product table: `table[i * dim + j]` lists `(l, c)` pairs.
    table: Vec<Vec<(usize, Scalar)>>,
    unit: Option<Vec<Scalar>>,
    blocks: Option<Box<BlockData>>,
    assoc: OnceLock<bool>,
}

impl PartialEq for Algebra {
    /// Algebras are compared by multiplication data (field, dimension,
    /// structure constants, unit); labels and cached metadata are
    /// cosmetic.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.sc == other.sc && self.unit == other.unit
    }
}

impl Algebra {
    pub fn new(
        field: FieldSpec,
        dim: usize,
        labels: Option<Vec<String>>,
        entries: Vec<(usize, usize, usize, Scalar)>,
        unit: Option<Vec<Scalar>>,
    ) -> Result<Algebra> {
        if dim == 0 {
            return Err(Error::InvalidInput("algebra dimension must be positive".into()));
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != dim {
                    return Err(Error::DimensionMismatch(format!("{} labels for dimension {dim}", l.len())));
                }
                l
            }
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        // Merge duplicate entries, validate indices and fields.
        let mut merged: std::collections::BTreeMap<(usize, usize, usize), Scalar> = Default::default();
        for (i, j, l, c) in entries {
            if i >= dim || j >= dim || l >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure constant index ({i},{j},{l}) out of range for dimension {dim}"
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(format!("structure constant over {}", c.field())));
            }
            merged
                .entry((i, j, l))
                .and_modify(|v| *v = v.add(&c))
                .or_insert(c);
        }
        let sc: Vec<(usize, usize, usize, Scalar)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j, l), c)| (i, j, l, c))
            .collect();
        let mut table = vec![Vec::new(); dim * dim];
        for (i, j, l, c) in &sc {
            table[i * dim + j].push((*l, c.clone()));
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(Error::DimensionMismatch("unit coordinate length".into()));
            }
            for s in u {
                if s.field() != field {
                    return Err(Error::FieldMismatch("unit coordinates".into()));
                }
            }
        }
        let algebra = Algebra { field, dim, labels, sc, table, unit, blocks: None, assoc: OnceLock::new() };
        if let Some(u) = algebra.unit.clone() {
            let u = Element::new(u);
            for i in 0..dim {
                let e = algebra.basis_element(i);
                if algebra.multiply(&u, &e) != e || algebra.multiply(&e, &u) != e {
                    return Err(Error::InvalidInput(format!(
                        "declared unit fails on basis element {}",
                        algebra.labels[i]
                    )));
                }
            }
        }
        Ok(algebra)
    }

    /// Attaches verified block metadata (used by the constructed test
    /// algebras; external callers may supply their own splitting).
    pub fn with_blocks(mut self, blocks: BlockData) -> Result<Algebra> {
        blocks.validate(&self)?;
        self.blocks = Some(Box::new(blocks));
        Ok(self)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of a uniquely labelled basis vector; `None` when the label
    /// is absent or ambiguous.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        let mut hits = self.labels.iter().enumerate().filter(|(_, l)| l.as_str() == label);
        let first = hits.next()?;
        if hits.next().is_some() {
            return None;
        }
        Some(first.0)
    }

    pub fn structure_constants(&self) -> &[(usize, usize, usize, Scalar)] {
        &self.sc
    }

    pub fn unit(&self) -> Option<Element> {
        self.unit.clone().map(Element::new)
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn blocks(&self) -> Option<&BlockData> {
        self.blocks.as_deref()
    }

    pub fn zero_element(&self) -> Element {
        Element::new(vec![self.field.zero(); self.dim])
    }

    pub fn basis_element(&self, i: usize) -> Element {
        assert!(i < self.dim, "basis index out of range");
        let mut coords = vec![self.field.zero(); self.dim];
        coords[i] = self.field.one();
        Element::new(coords)
    }

    pub fn element_from_coords(&self, coords: Vec<Scalar>) -> Result<Element> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for dimension {}",
                coords.len(),
                self.dim
            )));
        }
        for c in &coords {
            if c.field() != self.field {
                return Err(Error::FieldMismatch("element coordinates".into()));
            }
        }
        Ok(Element::new(coords))
    }

    /// Convenience for tests and instance builders.
    pub fn element_from_i64(&self, coords: &[i64]) -> Element {
        assert_eq!(coords.len(), self.dim, "element dimension mismatch");
        Element::new(coords.iter().map(|&v| self.field.from_i64(v)).collect())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        Element::new((0..self.dim).map(|_| self.field.random_scalar(rng)).collect())
    }

    /// Bilinear product against the structure-constant tensor.
    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        assert_eq!(x.dim(), self.dim, "left factor dimension mismatch");
        assert_eq!(y.dim(), self.dim, "right factor dimension mismatch");
        let mut out = vec![self.field.zero(); self.dim];
        for i in 0..self.dim {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y.coords[j].is_zero() {
                    continue;
                }
                let xy = x.coords[i].mul(&y.coords[j]);
                for (l, c) in &self.table[i * self.dim + j] {
                    out[*l] = out[*l].add(&xy.mul(c));
                }
            }
        }
        Element::new(out)
    }

    /// True iff `(e_i e_j) e_k = e_i (e_j e_k)` for all basis triples.
    /// The answer is computed once and cached.
    pub fn is_associative(&self) -> bool {
        *self.assoc.get_or_init(|| {
            for i in 0..self.dim {
                let ei = self.basis_element(i);
                for j in 0..self.dim {
                    let ej = self.basis_element(j);
                    let eij = self.multiply(&ei, &ej);
                    for k in 0..self.dim {
                        let ek = self.basis_element(k);
                        let left = self.multiply(&eij, &ek);
                        let right = self.multiply(&ei, &self.multiply(&ej, &ek));
                        if left != right {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| {
            let ei = self.basis_element(i);
            (i + 1..self.dim).all(|j| {
                let ej = self.basis_element(j);
                self.multiply(&ei, &ej) == self.multiply(&ej, &ei)
            })
        })
    }

    /// Solves `u e_i = e_i u = e_i` for all `i`; the solution is unique
    /// when it exists (any solution is a two-sided unit).
    pub fn find_unit(&self) -> Option<Element> {
        let mut lhs_rows: Vec<Vec<Scalar>> = Vec::with_capacity(2 * self.dim * self.dim);
        let mut rhs_rows: Vec<Vec<Scalar>> = Vec::with_capacity(2 * self.dim * self.dim);
        for i in 0..self.dim {
            let e = self.basis_element(i);
            let right_op = self.mult_operator(&e, HomotopeSide::Right); // u -> u * e_i
            let left_op = self.mult_operator(&e, HomotopeSide::Left); // u -> e_i * u
            for r in 0..self.dim {
                lhs_rows.push(right_op.row(r).to_vec());
                rhs_rows.push(vec![if r == i { self.field.one() } else { self.field.zero() }]);
                lhs_rows.push(left_op.row(r).to_vec());
                rhs_rows.push(vec![if r == i { self.field.one() } else { self.field.zero() }]);
            }
        }
        let lhs = Matrix::from_rows(self.field, lhs_rows).expect("consistent rows");
        let rhs = Matrix::from_rows(self.field, rhs_rows).expect("consistent rows");
        let sol = lhs.solve(&rhs).expect("shapes agree")?;
        Some(Element::new(sol.col(0)))
    }

    /// Matrix of `x -> a x` (Left) or `x -> x a` (Right) in the basis.
    pub fn mult_operator(&self, a: &Element, side: HomotopeSide) -> Matrix {
        assert_eq!(a.dim(), self.dim, "operator element dimension mismatch");
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            let e = self.basis_element(j);
            let col = match side {
                HomotopeSide::Left => self.multiply(a, &e),
                HomotopeSide::Right => self.multiply(&e, a),
            };
            for (r, v) in col.coords.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, j, v.clone());
                }
            }
        }
        m
    }

    /// The a-homotope: same underlying space, deformed product
    /// `x * y = x (a y)` (Left) or `x * y = (x a) y` (Right). No unit is
    /// recorded even when one exists.
    pub fn homotope(&self, a: &Element, side: HomotopeSide) -> Algebra {
        assert_eq!(a.dim(), self.dim, "homotope element dimension mismatch");
        let mut entries = Vec::new();
        for i in 0..self.dim {
            let ei = self.basis_element(i);
            for j in 0..self.dim {
                let ej = self.basis_element(j);
                let prod = match side {
                    HomotopeSide::Left => self.multiply(&ei, &self.multiply(a, &ej)),
                    HomotopeSide::Right => self.multiply(&self.multiply(&ei, a), &ej),
                };
                for (l, c) in prod.coords.iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, l, c.clone()));
                    }
                }
            }
        }
        Algebra::new(self.field, self.dim, Some(self.labels.clone()), entries, None)
            .expect("homotope entries are valid")
    }

    /// The augmented homotope: adjoin an external unit to the homotope.
    /// Basis index 0 is the new unit, indices `1..=dim` carry the copy of
    /// the base algebra (the augmentation ideal). The product law is
    /// `(l + a)(m + b) = lm + lb + ma + a delta b`.
    pub fn augmented_homotope(&self, delta: &Element) -> Result<Algebra> {
        if !self.is_associative() {
            return Err(Error::NotAssociative);
        }
        if !self.is_unital() {
            return Err(Error::NotUnital);
        }
        assert_eq!(delta.dim(), self.dim, "homotope element dimension mismatch");
        let d = self.dim;
        let mut entries = Vec::new();
        entries.push((0, 0, 0, self.field.one()));
        for i in 0..d {
            entries.push((0, i + 1, i + 1, self.field.one()));
            entries.push((i + 1, 0, i + 1, self.field.one()));
        }
        for i in 0..d {
            let ei = self.basis_element(i);
            let ei_delta = self.multiply(&ei, delta);
            for j in 0..d {
                let prod = self.multiply(&ei_delta, &self.basis_element(j));
                for (l, c) in prod.coords.iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i + 1, j + 1, l + 1, c.clone()));
                    }
                }
            }
        }
        let mut labels = vec!["1_B".to_string()];
        labels.extend(self.labels.iter().cloned());
        let mut unit = vec![self.field.zero(); d + 1];
        unit[0] = self.field.one();
        Algebra::new(self.field, d + 1, Some(labels), entries, Some(unit))
    }

    /// Canonical embedding of coordinates into the augmentation ideal of
    /// an augmented homotope (shift past the adjoined unit).
    pub fn embed_in_augmented(&self, x: &Element) -> Element {
        assert_eq!(x.dim(), self.dim, "element dimension mismatch");
        let mut coords = vec![self.field.zero(); self.dim + 1];
        coords[1..].clone_from_slice(&x.coords);
        Element::new(coords)
    }

    /// Projection of an augmented-homotope element to the base algebra
    /// coordinates (drops the adjoined-unit coordinate).
    pub fn project_from_augmented(&self, x: &Element) -> Element {
        assert_eq!(x.dim(), self.dim + 1, "element dimension mismatch");
        Element::new(x.coords[1..].to_vec())
    }

    /// Exact basis of the two-sided ideal `A x A` of a unital algebra,
    /// computed as the span of all `e_i x e_j`.
    pub fn principal_two_sided_ideal(&self, x: &Element) -> Result<Vec<Element>> {
        if !self.is_associative() {
            return Err(Error::NotAssociative);
        }
        if !self.is_unital() {
            return Err(Error::NotUnital);
        }
        let mut span = Subspace::new(self.field, self.dim);
        for i in 0..self.dim {
            let left = self.multiply(&self.basis_element(i), x);
            for j in 0..self.dim {
                let v = self.multiply(&left, &self.basis_element(j));
                span.insert(v.coords);
            }
        }
        Ok(span.basis().iter().map(|b| Element::new(b.clone())).collect())
    }

    /// Ideal criterion for well-temperedness: `dim A delta A = dim A`.
    pub fn is_well_tempered_criterion(&self, delta: &Element) -> Result<bool> {
        Ok(self.principal_two_sided_ideal(delta)?.len() == self.dim)
    }

    /// Closure of a generating set into the smallest two-sided ideal
    /// containing it (fixed-point span sweep; terminates because the
    /// dimension is bounded).
    pub fn two_sided_ideal_closure(&self, generators: &[Element]) -> Subspace {
        let mut span = Subspace::new(self.field, self.dim);
        for g in generators {
            span.insert(g.coords.clone());
        }
        loop {
            let mut grew = false;
            let current: Vec<Vec<Scalar>> = span.basis().to_vec();
            for v in &current {
                let ve = Element::new(v.clone());
                for i in 0..self.dim {
                    let e = self.basis_element(i);
                    grew |= span.insert(self.multiply(&e, &ve).coords);
                    grew |= span.insert(self.multiply(&ve, &e).coords);
                }
            }
            if !grew {
                return span;
            }
        }
    }

    /// True iff the span of the given vectors absorbs multiplication on
    /// both sides.
    pub fn is_two_sided_ideal(&self, span: &Subspace) -> bool {
        span.basis().iter().all(|v| {
            let ve = Element::new(v.clone());
            (0..self.dim).all(|i| {
                let e = self.basis_element(i);
                span.contains(&self.multiply(&e, &ve).coords) && span.contains(&self.multiply(&ve, &e).coords)
            })
        })
    }

    /// Quotient by a verified two-sided ideal. The quotient basis is the
    /// canonical complement (non-pivot coordinates of the echelonized
    /// ideal); the returned morphism is the projection.
    pub fn quotient(&self, ideal: &[Element]) -> Result<(Algebra, AlgebraMorphism)> {
        let span = Subspace::from_vectors(self.field, self.dim, ideal.iter().map(|e| e.coords.clone()));
        if !self.is_two_sided_ideal(&span) {
            return Err(Error::NotIdeal);
        }
        let complement = span.complement_positions();
        let q = complement.len();
        if q == 0 {
            return Err(Error::InvalidInput("quotient by the whole algebra is empty".into()));
        }
        let reps: Vec<Element> = complement.iter().map(|&c| self.basis_element(c)).collect();
        let mut entries = Vec::new();
        for (i, ri) in reps.iter().enumerate() {
            for (j, rj) in reps.iter().enumerate() {
                let prod = self.multiply(ri, rj);
                let coords = span.quotient_coords(&prod.coords);
                for (l, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, l, c.clone()));
                    }
                }
            }
        }
        let labels: Vec<String> = complement.iter().map(|&c| self.labels[c].clone()).collect();
        let unit = self.unit.as_ref().map(|u| span.quotient_coords(u));
        let quotient = Algebra::new(self.field, q, Some(labels), entries, unit)?;
        let mut proj = Matrix::zeros(self.field, q, self.dim);
        for i in 0..self.dim {
            let coords = span.quotient_coords(&self.basis_element(i).coords);
            for (r, v) in coords.iter().enumerate() {
                if !v.is_zero() {
                    proj.set(r, i, v.clone());
                }
            }
        }
        let morphism = AlgebraMorphism::new(self.clone(), quotient.clone(), proj)?;
        Ok((quotient, morphism))
    }

    /// Block-diagonal direct sum. Block metadata is merged when both
    /// summands carry it.
    pub fn direct_sum(&self, other: &Algebra) -> Result<Algebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("direct sum over different fields".into()));
        }
        let d1 = self.dim;
        let dim = d1 + other.dim;
        let mut entries: Vec<(usize, usize, usize, Scalar)> = self.sc.clone();
        for (i, j, l, c) in &other.sc {
            entries.push((i + d1, j + d1, l + d1, c.clone()));
        }
        let mut labels: Vec<String> = Vec::with_capacity(dim);
        let collision = self.labels.iter().any(|l| other.labels.contains(l));
        for l in &self.labels {
            labels.push(if collision { format!("a.{l}") } else { l.clone() });
        }
        for l in &other.labels {
            labels.push(if collision { format!("b.{l}") } else { l.clone() });
        }
        let unit = match (&self.unit, &other.unit) {
            (Some(u1), Some(u2)) => {
                let mut u = u1.clone();
                u.extend(u2.iter().cloned());
                Some(u)
            }
            _ => None,
        };
        let algebra = Algebra::new(self.field, dim, Some(labels), entries, unit)?;
        match (self.blocks(), other.blocks()) {
            (Some(b1), Some(b2)) => {
                let merged = BlockData::direct_sum(b1, b2)?;
                algebra.with_blocks(merged)
            }
            _ => Ok(algebra),
        }
    }

    /// The two unital algebra morphisms from the augmented homotope
    /// `B = A^_delta` back to `A`: `psi_1` sends the embedded `a` to
    /// `a delta`, `psi_2` sends it to `delta a`; both send the adjoined
    /// unit to the unit of `A`. Their images are verified to be
    /// `k 1 + A delta` and `k 1 + delta A` respectively.
    pub fn psi_morphisms(&self, delta: &Element) -> Result<(AlgebraMorphism, AlgebraMorphism)> {
        let b = self.augmented_homotope(delta)?;
        let unit = self.unit().expect("augmented_homotope checked unitality");
        let build = |left_factor: bool| -> Result<AlgebraMorphism> {
            let mut m = Matrix::zeros(self.field, self.dim, self.dim + 1);
            for (r, v) in unit.coords.iter().enumerate() {
                m.set(r, 0, v.clone());
            }
            for i in 0..self.dim {
                let e = self.basis_element(i);
                let img = if left_factor { self.multiply(&e, delta) } else { self.multiply(delta, &e) };
                for (r, v) in img.coords.iter().enumerate() {
                    if !v.is_zero() {
                        m.set(r, i + 1, v.clone());
                    }
                }
            }
            AlgebraMorphism::new(b.clone(), self.clone(), m)
                .map_err(|e| Error::Internal(format!("psi morphism verification failed: {e}")))
        };
        let psi1 = build(true)?;
        let psi2 = build(false)?;
        for (psi, left_factor) in [(&psi1, true), (&psi2, false)] {
            let mut expected = Subspace::new(self.field, self.dim);
            expected.insert(unit.coords.clone());
            for i in 0..self.dim {
                let e = self.basis_element(i);
                let v = if left_factor { self.multiply(&e, delta) } else { self.multiply(delta, &e) };
                expected.insert(v.coords);
            }
            if psi.image_subspace() != expected {
                return Err(Error::Internal("psi image differs from k.1 + principal ideal".into()));
            }
        }
        Ok((psi1, psi2))
    }

    /// Unitalization `A^1 = k.1 + A` (products of `A` untouched). Distinct
    /// from the augmented homotope, which also deforms the product.
    pub fn adjoin_unit(&self) -> Algebra {
        let d = self.dim;
        let mut entries = Vec::new();
        entries.push((0, 0, 0, self.field.one()));
        for i in 0..d {
            entries.push((0, i + 1, i + 1, self.field.one()));
            entries.push((i + 1, 0, i + 1, self.field.one()));
        }
        for (i, j, l, c) in &self.sc {
            entries.push((i + 1, j + 1, l + 1, c.clone()));
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(self.labels.iter().cloned());
        let mut unit = vec![self.field.zero(); d + 1];
        unit[0] = self.field.one();
        Algebra::new(self.field, d + 1, Some(labels), entries, Some(unit)).expect("unitalization entries are valid")
    }
}

/// A linear map between algebras verified multiplicative on construction.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: Algebra,
    target: Algebra,
    matrix: Matrix,
    unital: bool,
}

impl AlgebraMorphism {
    /// Verifies `f(x y) = f(x) f(y)` on all basis pairs. The unital flag
    /// is set when both algebras are unital and the unit maps to the unit.
    pub fn new(source: Algebra, target: Algebra, matrix: Matrix) -> Result<AlgebraMorphism> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if matrix.field() != source.field() || source.field() != target.field() {
            return Err(Error::FieldMismatch("morphism fields".into()));
        }
        let apply = |x: &Element| Element::new(matrix.mul_vec(x.coords()));
        for i in 0..source.dim() {
            let ei = source.basis_element(i);
            let fi = apply(&ei);
            for j in 0..source.dim() {
                let ej = source.basis_element(j);
                let lhs = apply(&source.multiply(&ei, &ej));
                let rhs = target.multiply(&fi, &apply(&ej));
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!(
                        "linear map is not multiplicative on basis pair ({i},{j})"
                    )));
                }
            }
        }
        let unital = match (source.unit(), target.unit()) {
            (Some(u), Some(v)) => apply(&u) == v,
            _ => false,
        };
        Ok(AlgebraMorphism { source, target, matrix, unital })
    }

    pub fn identity(a: &Algebra) -> AlgebraMorphism {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            matrix: Matrix::identity(a.field(), a.dim()),
            unital: a.is_unital(),
        }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::new(self.matrix.mul_vec(x.coords()))
    }

    pub fn image_subspace(&self) -> Subspace {
        Subspace::from_vectors(
            self.matrix.field(),
            self.matrix.rows(),
            (0..self.matrix.cols()).map(|c| self.matrix.col(c)),
        )
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.rows() == self.matrix.cols() && self.matrix.rank() == self.matrix.rows()
    }
}

/// Full matrix algebra `M_n` with matrix-unit basis `e_{ij}` (row-major),
/// single-block metadata attached.
pub fn matrix_algebra(n: usize, field: FieldSpec) -> Algebra {
    semisimple_algebra(field, &[n])
}

/// Direct sum of matrix algebras `M_{n_1} + ... + M_{n_t}`, with canonical
/// matrix-unit basis and full block metadata (the algebra is its own
/// semisimple quotient).
pub fn semisimple_algebra(field: FieldSpec, sizes: &[usize]) -> Algebra {
    assert!(!sizes.is_empty() && sizes.iter().all(|&n| n > 0), "block sizes must be positive");
    let dim: usize = sizes.iter().map(|n| n * n).sum();
    let single = sizes.len() == 1;
    let mut labels = Vec::with_capacity(dim);
    let mut entries = Vec::new();
    let mut unit = vec![field.zero(); dim];
    let mut offset = 0;
    for (b, &n) in sizes.iter().enumerate() {
        let idx = |r: usize, c: usize| offset + r * n + c;
        for r in 0..n {
            for c in 0..n {
                labels.push(if single {
                    format!("e{}{}", r + 1, c + 1)
                } else {
                    format!("b{b}.e{}{}", r + 1, c + 1)
                });
            }
        }
        // e_{rc} e_{cd} = e_{rd}
        for r in 0..n {
            for c in 0..n {
                for d in 0..n {
                    entries.push((idx(r, c), idx(c, d), idx(r, d), field.one()));
                }
            }
        }
        for r in 0..n {
            unit[idx(r, r)] = field.one();
        }
        offset += n * n;
    }
    let algebra = Algebra::new(field, dim, Some(labels), entries, Some(unit)).expect("matrix-unit constants are valid");
    let blocks = BlockData::canonical_semisimple(&algebra, sizes);
    algebra.with_blocks(blocks).expect("canonical block data is valid")
}

/// `k[x]/(f)` for a monic polynomial `f` (coefficients lowest-first, with
/// the leading 1 included). Basis is `1, x, ..., x^{deg-1}`.
pub fn polynomial_algebra(field: FieldSpec, f: &[Scalar]) -> Result<Algebra> {
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return Err(Error::InvalidInput("modulus must have positive degree".into()));
    }
    if !f[deg].is_one() {
        return Err(Error::InvalidInput("modulus must be monic".into()));
    }
    // Powers x^k reduced modulo f, for k up to 2 deg - 2.
    let mut powers: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..deg {
        let mut v = vec![field.zero(); deg];
        v[k] = field.one();
        powers.push(v);
    }
    while powers.len() < 2 * deg - 1 {
        let prev = powers.last().expect("at least one power").clone();
        // Multiply by x: shift, then reduce the overflow by f.
        let overflow = prev[deg - 1].clone();
        let mut v = vec![field.zero(); deg];
        for k in 1..deg {
            v[k] = prev[k - 1].clone();
        }
        for k in 0..deg {
            v[k] = v[k].sub(&overflow.mul(&f[k]));
        }
        powers.push(v);
    }
    let mut entries = Vec::new();
    for i in 0..deg {
        for j in 0..deg {
            for (l, c) in powers[i + j].iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, l, c.clone()));
                }
            }
        }
    }
    let labels = (0..deg)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let mut unit = vec![field.zero(); deg];
    unit[0] = field.one();
    Algebra::new(field, deg, Some(labels), entries, Some(unit))
}

/// Integer-coefficient convenience wrapper for [`polynomial_algebra`].
pub fn polynomial_algebra_i64(field: FieldSpec, f: &[i64]) -> Result<Algebra> {
    polynomial_algebra(field, &f.iter().map(|&c| field.from_i64(c)).collect::<Vec<_>>())
}

/// Block upper-triangular matrix algebra inside `M_n`, `n = sum(sizes)`:
/// basis are the matrix units `e_{ab}` with `block(a) <= block(b)`.
/// Carries full block metadata (diagonal blocks are the semisimple part,
/// the strictly upper blocks the radical).
pub fn triangular_algebra(field: FieldSpec, sizes: &[usize]) -> Algebra {
    assert!(!sizes.is_empty() && sizes.iter().all(|&n| n > 0), "block sizes must be positive");
    let n: usize = sizes.iter().sum();
    let block_of = |r: usize| -> usize {
        let mut acc = 0;
        for (b, &s) in sizes.iter().enumerate() {
            acc += s;
            if r < acc {
                return b;
            }
        }
        unreachable!()
    };
    // Kept matrix-unit positions, row-major.
    let mut positions = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if block_of(r) <= block_of(c) {
                positions.push((r, c));
            }
        }
    }
    let index_of = |r: usize, c: usize| positions.iter().position(|&p| p == (r, c));
    let dim = positions.len();
    let labels: Vec<String> = positions.iter().map(|&(r, c)| format!("e{}{}", r + 1, c + 1)).collect();
    let mut entries = Vec::new();
    for (i, &(r1, c1)) in positions.iter().enumerate() {
        for (j, &(r2, c2)) in positions.iter().enumerate() {
            if c1 == r2 {
                let l = index_of(r1, c2).expect("product of kept units is kept");
                entries.push((i, j, l, field.one()));
            }
        }
    }
    let mut unit = vec![field.zero(); dim];
    for r in 0..n {
        unit[index_of(r, r).expect("diagonal units are kept")] = field.one();
    }
    let algebra = Algebra::new(field, dim, Some(labels), entries, Some(unit)).expect("triangular constants are valid");
    // Block metadata: S is the diagonal-block subalgebra.
    let s = semisimple_algebra(field, sizes);
    let mut lift = Matrix::zeros(field, dim, s.dim());
    let mut proj = Matrix::zeros(field, s.dim(), dim);
    let mut s_col = 0;
    let mut row_offset = 0;
    for &size in sizes {
        for r in 0..size {
            for c in 0..size {
                let a_idx = index_of(row_offset + r, row_offset + c).expect("diagonal block kept");
                lift.set(a_idx, s_col, field.one());
                proj.set(s_col, a_idx, field.one());
                s_col += 1;
            }
        }
        row_offset += size;
    }
    let blocks = BlockData::with_lift(&algebra, s, sizes, proj, lift);
    algebra.with_blocks(blocks).expect("triangular block data is valid")
}

/// Square-zero extension of a split semisimple algebra by bimodule
/// "arrows": for each arrow `(i, j)` the radical gains a copy of the
/// `n_i x n_j` matrix bimodule. All radical products vanish.
pub fn semisimple_plus_nilpotent(field: FieldSpec, sizes: &[usize], arrows: &[(usize, usize)]) -> Algebra {
    assert!(!sizes.is_empty() && sizes.iter().all(|&n| n > 0), "block sizes must be positive");
    assert!(arrows.iter().all(|&(i, j)| i < sizes.len() && j < sizes.len()), "arrow block out of range");
    let s = semisimple_algebra(field, sizes);
    let s_dim = s.dim();
    let block_offset = |b: usize| -> usize { sizes[..b].iter().map(|n| n * n).sum() };
    let mut dim = s_dim;
    let mut labels: Vec<String> = s.labels().to_vec();
    let mut arrow_offsets = Vec::new();
    for (t, &(i, j)) in arrows.iter().enumerate() {
        arrow_offsets.push(dim);
        for a in 0..sizes[i] {
            for b in 0..sizes[j] {
                labels.push(format!("r{t}.e{}{}", a + 1, b + 1));
            }
        }
        dim += sizes[i] * sizes[j];
    }
    let mut entries: Vec<(usize, usize, usize, Scalar)> = s.structure_constants().to_vec();
    for (t, &(bi, bj)) in arrows.iter().enumerate() {
        let (ni, nj) = (sizes[bi], sizes[bj]);
        let u_idx = |a: usize, b: usize| arrow_offsets[t] + a * nj + b;
        // Left action of block bi: e_{pq} . u_{ab} = [q == a] u_{pb}
        for p in 0..ni {
            for q in 0..ni {
                let e = block_offset(bi) + p * ni + q;
                for b in 0..nj {
                    entries.push((e, u_idx(q, b), u_idx(p, b), field.one()));
                }
            }
        }
        // Right action of block bj: u_{ab} . e_{pq} = [b == p] u_{aq}
        for p in 0..nj {
            for q in 0..nj {
                let e = block_offset(bj) + p * nj + q;
                for a in 0..ni {
                    entries.push((u_idx(a, p), e, u_idx(a, q), field.one()));
                }
            }
        }
    }
    let mut unit = vec![field.zero(); dim];
    for (r, v) in s.unit().expect("semisimple part is unital").coords().iter().enumerate() {
        unit[r] = v.clone();
    }
    let algebra = Algebra::new(field, dim, Some(labels), entries, Some(unit)).expect("bimodule constants are valid");
    let mut lift = Matrix::zeros(field, dim, s_dim);
    let mut proj = Matrix::zeros(field, s_dim, dim);
    for k in 0..s_dim {
        lift.set(k, k, field.one());
        proj.set(k, k, field.one());
    }
    let blocks = BlockData::with_lift(&algebra, s, sizes, proj, lift);
    algebra.with_blocks(blocks).expect("square-zero block data is valid")
}

/// Instance profiles for the seeded test-algebra generator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TestProfile {
    SplitSemisimple,
    SemisimplePlusNilpotent,
    TriangularLike,
}

/// Deterministic-in-seed associative unital algebra with known block
/// metadata; dimensions stay at most 8.
pub fn random_test_algebra(field: FieldSpec, profile: TestProfile, seed: u64) -> Algebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        TestProfile::SplitSemisimple => {
            let sizes = draw_sizes(&mut rng, 8);
            semisimple_algebra(field, &sizes)
        }
        TestProfile::SemisimplePlusNilpotent => {
            let sizes = draw_sizes(&mut rng, 6);
            let mut dim: usize = sizes.iter().map(|n| n * n).sum();
            let mut arrows = Vec::new();
            let wanted = rng.gen_range(1..=2);
            for _ in 0..8 {
                if arrows.len() == wanted {
                    break;
                }
                let i = rng.gen_range(0..sizes.len());
                let j = rng.gen_range(0..sizes.len());
                if dim + sizes[i] * sizes[j] <= 8 {
                    arrows.push((i, j));
                    dim += sizes[i] * sizes[j];
                }
            }
            if arrows.is_empty() {
                arrows.push((0, 0));
            }
            semisimple_plus_nilpotent(field, &sizes, &arrows)
        }
        TestProfile::TriangularLike => {
            let choices: [&[usize]; 4] = [&[1, 1], &[1, 1, 1], &[1, 2], &[2, 1]];
            let sizes = choices[rng.gen_range(0..choices.len())];
            triangular_algebra(field, sizes)
        }
    }
}

fn draw_sizes<R: Rng + ?Sized>(rng: &mut R, budget: usize) -> Vec<usize> {
    let t = rng.gen_range(1..=3);
    let mut sizes: Vec<usize> = (0..t).map(|_| if rng.gen_bool(0.4) { 2 } else { 1 }).collect();
    while sizes.iter().map(|n| n * n).sum::<usize>() > budget {
        let pos = sizes.iter().position(|&n| n == 2).expect("over budget implies a 2");
        sizes[pos] = 1;
    }
    sizes
}
