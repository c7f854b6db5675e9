//! Structure theory: Jacobson radical, Wedderburn blocks of split
//! semisimple algebras, rank functions of elements, the suitable normal
//! form `u delta v = s + r` (s idempotent, sr = rs = 0), unit-group
//! factorization, and the representation dimensions of augmented
//! homotopes.
//!
//! The radical is computed from the trace form of the regular
//! representation, which identifies the Jacobson radical over Q and over
//! F_p with p > dim. Block discovery splits the center by searching
//! rational (or prime-field) roots of minimal polynomials; algebras whose
//! center does not split completely report `NotSplit` instead of
//! guessing.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::algebra::{Algebra, AlgebraMorphism, Element, HomotopeSide};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Subspace};

/// Wedderburn data of an algebra `A`: its semisimple quotient `S`, the
/// projection, an optional splitting `S -> A`, central primitive
/// idempotents and block sizes, plus (when available) diagonal
/// idempotents and full matrix units inside each block.
#[derive(Clone, Debug)]
pub struct BlockData {
    /// The semisimple quotient `S` (equal to `A` when the radical is 0).
    pub semisimple: Algebra,
    /// Projection `A -> S` (dim S x dim A), an algebra morphism.
    pub proj: Matrix,
    /// Splitting `S -> A` with `proj . lift = id`, when known.
    pub lift: Option<Matrix>,
    pub block_sizes: Vec<usize>,
    /// Central primitive idempotents of `S`, one per block.
    pub idempotents: Vec<Element>,
    /// Orthogonal idempotents `e^j_i` in `S` summing to the block
    /// identity; present for constructed algebras.
    pub diag_idempotents: Option<Vec<Vec<Element>>>,
    /// Full matrix units `e^{jk}_i` per block (as elements of `S`);
    /// present for constructed algebras.
    pub matrix_units: Option<Vec<Vec<Vec<Element>>>>,
}

impl BlockData {
    /// Metadata for an algebra that *is* a canonical direct sum of matrix
    /// algebras in matrix-unit basis (block-major, row-major in block).
    pub(crate) fn canonical_semisimple(algebra: &Algebra, sizes: &[usize]) -> BlockData {
        let field = algebra.field();
        let dim = algebra.dim();
        let offset_of = |b: usize| -> usize { sizes[..b].iter().map(|n| n * n).sum() };
        let mut idempotents = Vec::new();
        let mut diag = Vec::new();
        let mut units = Vec::new();
        for (b, &n) in sizes.iter().enumerate() {
            let off = offset_of(b);
            let mut c = vec![field.zero(); dim];
            let mut block_diag = Vec::new();
            let mut block_units = Vec::new();
            for j in 0..n {
                c[off + j * n + j] = field.one();
                let mut e = vec![field.zero(); dim];
                e[off + j * n + j] = field.one();
                block_diag.push(Element::new(e));
                let mut row = Vec::new();
                for k in 0..n {
                    let mut u = vec![field.zero(); dim];
                    u[off + j * n + k] = field.one();
                    row.push(Element::new(u));
                }
                block_units.push(row);
            }
            idempotents.push(Element::new(c));
            diag.push(block_diag);
            units.push(block_units);
        }
        BlockData {
            semisimple: algebra.clone(),
            proj: Matrix::identity(field, dim),
            lift: Some(Matrix::identity(field, dim)),
            block_sizes: sizes.to_vec(),
            idempotents,
            diag_idempotents: Some(diag),
            matrix_units: Some(units),
        }
    }

    /// Metadata for an algebra `A = lift(S) + R` with `S` a canonical
    /// semisimple algebra carrying its own block metadata.
    pub(crate) fn with_lift(
        _algebra: &Algebra,
        s: Algebra,
        sizes: &[usize],
        proj: Matrix,
        lift: Matrix,
    ) -> BlockData {
        let inner = s.blocks().expect("semisimple part carries canonical metadata").clone();
        BlockData {
            semisimple: s.clone(),
            proj,
            lift: Some(lift),
            block_sizes: sizes.to_vec(),
            idempotents: inner.idempotents,
            diag_idempotents: inner.diag_idempotents,
            matrix_units: inner.matrix_units,
        }
    }

    /// Block-diagonal merge for direct sums (`d1` = dimension of the
    /// first summand).
    pub(crate) fn direct_sum(b1: &BlockData, b2: &BlockData) -> Result<BlockData> {
        let field = b1.semisimple.field();
        let s1 = strip_blocks(&b1.semisimple);
        let s2 = strip_blocks(&b2.semisimple);
        let s = s1.direct_sum(&s2)?;
        let (sd1, sd2) = (s1.dim(), s2.dim());
        let pad_left = |e: &Element| -> Element {
            let mut coords = e.coords().to_vec();
            coords.extend(std::iter::repeat(field.zero()).take(sd2));
            Element::new(coords)
        };
        let pad_right = |e: &Element| -> Element {
            let mut coords = vec![field.zero(); sd1];
            coords.extend(e.coords().iter().cloned());
            Element::new(coords)
        };
        let mut idempotents: Vec<Element> = b1.idempotents.iter().map(&pad_left).collect();
        idempotents.extend(b2.idempotents.iter().map(&pad_right));
        let mut sizes = b1.block_sizes.clone();
        sizes.extend(b2.block_sizes.iter().copied());
        let proj = block_diag(&b1.proj, &b2.proj);
        let lift = match (&b1.lift, &b2.lift) {
            (Some(l1), Some(l2)) => Some(block_diag(l1, l2)),
            _ => None,
        };
        let diag = match (&b1.diag_idempotents, &b2.diag_idempotents) {
            (Some(x1), Some(x2)) => {
                let mut d: Vec<Vec<Element>> = x1.iter().map(|v| v.iter().map(&pad_left).collect()).collect();
                d.extend(x2.iter().map(|v| v.iter().map(&pad_right).collect::<Vec<_>>()));
                Some(d)
            }
            _ => None,
        };
        let units = match (&b1.matrix_units, &b2.matrix_units) {
            (Some(x1), Some(x2)) => {
                let mut u: Vec<Vec<Vec<Element>>> = x1
                    .iter()
                    .map(|grid| grid.iter().map(|row| row.iter().map(&pad_left).collect()).collect())
                    .collect();
                u.extend(
                    x2.iter()
                        .map(|grid| grid.iter().map(|row| row.iter().map(&pad_right).collect::<Vec<_>>()).collect::<Vec<_>>()),
                );
                Some(u)
            }
            _ => None,
        };
        Ok(BlockData {
            semisimple: s,
            proj,
            lift,
            block_sizes: sizes,
            idempotents,
            diag_idempotents: diag,
            matrix_units: units,
        })
    }

    /// Consistency checks: the projection (and splitting, if present) are
    /// algebra morphisms, the idempotents are central, orthogonal,
    /// primitive of the declared sizes, and the finer data multiplies as
    /// matrix units.
    pub fn validate(&self, a: &Algebra) -> Result<()> {
        let s = &self.semisimple;
        if self.block_sizes.len() != self.idempotents.len() {
            return Err(Error::InvalidInput("one idempotent per block required".into()));
        }
        AlgebraMorphism::new(a.clone(), strip_blocks(s), self.proj.clone())
            .map_err(|e| Error::InvalidInput(format!("projection is not a morphism: {e}")))?;
        if let Some(lift) = &self.lift {
            AlgebraMorphism::new(strip_blocks(s), a.clone(), lift.clone())
                .map_err(|e| Error::InvalidInput(format!("lift is not a morphism: {e}")))?;
            if !self.proj.mul(lift).is_identity() {
                return Err(Error::InvalidInput("lift does not split the projection".into()));
            }
            if let (Some(us), Some(ua)) = (s.unit(), a.unit()) {
                if Element::new(lift.mul_vec(us.coords())) != ua {
                    return Err(Error::InvalidInput("lift does not preserve the unit".into()));
                }
            }
        }
        let unit = s.unit().ok_or(Error::NotUnital)?;
        let mut sum = s.zero_element();
        for (i, c) in self.idempotents.iter().enumerate() {
            sum = sum.add(c);
            for (j, c2) in self.idempotents.iter().enumerate() {
                let prod = s.multiply(c, c2);
                let expected = if i == j { c.clone() } else { s.zero_element() };
                if prod != expected {
                    return Err(Error::InvalidInput("idempotents are not orthogonal idempotents".into()));
                }
            }
            for b in 0..s.dim() {
                let e = s.basis_element(b);
                if s.multiply(c, &e) != s.multiply(&e, c) {
                    return Err(Error::InvalidInput("idempotent is not central".into()));
                }
            }
            let mut span = Subspace::new(s.field(), s.dim());
            for b in 0..s.dim() {
                span.insert(s.multiply(&s.basis_element(b), c).coords().to_vec());
            }
            let n = self.block_sizes[i];
            if span.dim() != n * n {
                return Err(Error::InvalidInput(format!(
                    "block {i} has dimension {} but declared size {n}",
                    span.dim()
                )));
            }
        }
        if sum != unit {
            return Err(Error::InvalidInput("idempotents do not sum to the unit".into()));
        }
        if let Some(units) = &self.matrix_units {
            for (i, grid) in units.iter().enumerate() {
                let n = self.block_sizes[i];
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for m in 0..n {
                                let prod = s.multiply(&grid[j][k], &grid[l][m]);
                                let expected = if k == l { grid[j][m].clone() } else { s.zero_element() };
                                if prod != expected {
                                    return Err(Error::InvalidInput("matrix units fail the unit relations".into()));
                                }
                            }
                        }
                    }
                }
            }
        }
        if let Some(diag) = &self.diag_idempotents {
            for (i, row) in diag.iter().enumerate() {
                let mut sum = s.zero_element();
                for e in row {
                    sum = sum.add(e);
                }
                if sum != self.idempotents[i] {
                    return Err(Error::InvalidInput("diagonal idempotents do not sum to the block identity".into()));
                }
            }
        }
        Ok(())
    }
}

fn strip_blocks(a: &Algebra) -> Algebra {
    Algebra::new(
        a.field(),
        a.dim(),
        Some(a.labels().to_vec()),
        a.structure_constants().to_vec(),
        a.unit().map(|u| u.coords().to_vec()),
    )
    .expect("existing algebra data is valid")
}

fn block_diag(m1: &Matrix, m2: &Matrix) -> Matrix {
    let field = m1.field();
    let mut out = Matrix::zeros(field, m1.rows() + m2.rows(), m1.cols() + m2.cols());
    for r in 0..m1.rows() {
        for c in 0..m1.cols() {
            out.set(r, c, m1.at(r, c).clone());
        }
    }
    for r in 0..m2.rows() {
        for c in 0..m2.cols() {
            out.set(m1.rows() + r, m1.cols() + c, m2.at(r, c).clone());
        }
    }
    out
}

fn check_characteristic(field: FieldSpec, dim: usize) -> Result<()> {
    if let FieldSpec::PrimeField(p) = field {
        if p <= dim as u64 {
            return Err(Error::SmallCharacteristic { p, dim });
        }
    }
    Ok(())
}

/// Exact basis of the Jacobson radical, from the trace form
/// `(x, y) -> tr(L_x L_y)` of the regular representation (computed in the
/// unitalization when the algebra has no recorded unit). Valid over Q and
/// over F_p with p > dim; the result is verified nilpotent.
pub fn jacobson_radical(a: &Algebra) -> Result<Vec<Element>> {
    if !a.is_associative() {
        return Err(Error::NotAssociative);
    }
    let work = if a.is_unital() { a.clone() } else { a.adjoin_unit() };
    let embedded = !a.is_unital();
    check_characteristic(a.field(), work.dim())?;
    let d = work.dim();
    let ops: Vec<Matrix> = (0..d)
        .map(|i| work.mult_operator(&work.basis_element(i), HomotopeSide::Left))
        .collect();
    let mut gram = Matrix::zeros(work.field(), d, d);
    for i in 0..d {
        for j in 0..d {
            // tr(L_i L_j) without forming the product.
            let mut acc = work.field().zero();
            for r in 0..d {
                for c in 0..d {
                    let x = ops[i].at(r, c);
                    if x.is_zero() {
                        continue;
                    }
                    let y = ops[j].at(c, r);
                    if y.is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(y));
                }
            }
            gram.set(i, j, acc);
        }
    }
    let kernel = gram.kernel_basis();
    let mut basis = Vec::new();
    for v in kernel {
        if embedded {
            if !v[0].is_zero() {
                return Err(Error::Internal("radical of the unitalization leaks into the unit".into()));
            }
            basis.push(Element::new(v[1..].to_vec()));
        } else {
            basis.push(Element::new(v));
        }
    }
    // Sanity: the span must be a nilpotent two-sided ideal.
    let span = Subspace::from_vectors(a.field(), a.dim(), basis.iter().map(|e| e.coords().to_vec()));
    if !a.is_two_sided_ideal(&span) {
        return Err(Error::Internal("radical candidate is not an ideal".into()));
    }
    let mut current = span.clone();
    for _ in 0..=a.dim() {
        if current.dim() == 0 {
            break;
        }
        let mut next = Subspace::new(a.field(), a.dim());
        for x in current.basis() {
            let xe = Element::new(x.clone());
            for r in span.basis() {
                let re = Element::new(r.clone());
                next.insert(a.multiply(&xe, &re).coords().to_vec());
            }
        }
        current = next;
    }
    if current.dim() != 0 {
        return Err(Error::Internal("radical candidate is not nilpotent".into()));
    }
    Ok(basis)
}

/// Quotient by the Jacobson radical, with the projection morphism.
pub fn semisimple_quotient(a: &Algebra) -> Result<(Algebra, AlgebraMorphism)> {
    let rad = jacobson_radical(a)?;
    a.quotient(&rad)
}

/// Splits a semisimple algebra into its Wedderburn blocks by refining
/// central idempotents along roots of minimal polynomials of center
/// elements. Fails with `NotSplit` when some block keeps a center of
/// dimension > 1 (or a non-square block dimension) over the base field.
pub fn wedderburn_blocks(s: &Algebra) -> Result<BlockData> {
    if !s.is_associative() {
        return Err(Error::NotAssociative);
    }
    if !jacobson_radical(s)?.is_empty() {
        return Err(Error::InvalidInput("algebra is not semisimple".into()));
    }
    let unit = match s.unit() {
        Some(u) => u,
        // A semisimple algebra always has a unit even if none was recorded.
        None => s.find_unit().ok_or(Error::NotUnital)?,
    };
    let field = s.field();
    let d = s.dim();
    // Center: kernel of z -> (z e_i - e_i z)_i.
    let mut rows = Vec::new();
    for i in 0..d {
        let e = s.basis_element(i);
        let diff = s.mult_operator(&e, HomotopeSide::Right).sub(&s.mult_operator(&e, HomotopeSide::Left));
        for r in 0..d {
            rows.push(diff.row(r).to_vec());
        }
    }
    let center_matrix = Matrix::from_rows(field, rows).expect("rows are consistent");
    let center: Vec<Element> = center_matrix.kernel_basis().into_iter().map(Element::new).collect();

    let mut pieces = vec![unit.clone()];
    loop {
        let mut refined = false;
        'outer: for z in &center {
            for (idx, e) in pieces.iter().enumerate() {
                // The center of the piece: span{z_t e}.
                let mut piece_center = Subspace::new(field, d);
                for zt in &center {
                    piece_center.insert(s.multiply(zt, e).coords().to_vec());
                }
                if piece_center.dim() <= 1 {
                    continue;
                }
                let w = s.multiply(z, e);
                // Matrix of multiplication-by-w on the piece center.
                let basis_vectors: Vec<Vec<Scalar>> = piece_center.basis().to_vec();
                let basis_matrix = Matrix::from_cols(field, basis_vectors.clone()).expect("consistent");
                let mut cols = Vec::new();
                for bv in &basis_vectors {
                    let img = s.multiply(&w, &Element::new(bv.clone()));
                    let coords = basis_matrix
                        .solve(&Matrix::column(field, img.coords()))
                        .expect("shapes agree")
                        .ok_or_else(|| Error::Internal("center is not closed under multiplication".into()))?;
                    cols.push(coords.col(0));
                }
                let op = Matrix::from_cols(field, cols).expect("consistent");
                let min_poly = op.min_poly()?;
                if min_poly.len() <= 2 {
                    continue; // scalar action, no split from this element
                }
                let roots = polynomial_roots(field, &min_poly)?;
                let mut new_idempotents = Vec::new();
                for lambda in &roots {
                    // Kernel of (w - lambda e) on the piece center.
                    let shifted = op.sub(&Matrix::identity(field, op.rows()).scale(lambda));
                    let ker = shifted.kernel_basis();
                    if ker.is_empty() || ker.len() == piece_center.dim() {
                        continue;
                    }
                    // The eigenspace is an ideal of the piece center;
                    // its unit is a central idempotent below e.
                    let ker_vectors: Vec<Vec<Scalar>> =
                        ker.iter().map(|k| basis_matrix.mul_vec(k)).collect();
                    if let Some(idem) = unit_of_commutative_ideal(s, &ker_vectors)? {
                        new_idempotents.push(idem);
                    }
                }
                if new_idempotents.is_empty() {
                    continue;
                }
                let mut rest = e.clone();
                for n in &new_idempotents {
                    rest = rest.sub(n);
                }
                let mut replacement = new_idempotents;
                if !rest.is_zero() {
                    replacement.push(rest);
                }
                if replacement.len() > 1 {
                    pieces.splice(idx..=idx, replacement);
                    refined = true;
                    break 'outer;
                }
            }
        }
        if !refined {
            break;
        }
    }
    // Every piece must now have a one-dimensional center.
    let mut sizes = Vec::new();
    for e in &pieces {
        let mut piece_center = Subspace::new(field, d);
        for zt in &center {
            piece_center.insert(s.multiply(zt, e).coords().to_vec());
        }
        if piece_center.dim() > 1 {
            return Err(Error::NotSplit(format!(
                "a central minimal polynomial has no complete root set (block center has dimension {})",
                piece_center.dim()
            )));
        }
        let mut block = Subspace::new(field, d);
        for i in 0..d {
            block.insert(s.multiply(&s.basis_element(i), e).coords().to_vec());
        }
        let n = isqrt(block.dim());
        if n * n != block.dim() {
            return Err(Error::NotSplit(format!("block dimension {} is not a perfect square", block.dim())));
        }
        sizes.push(n);
    }
    // Deterministic order: sort blocks by idempotent coordinates.
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by_key(|&i| pieces[i].coords().iter().map(Scalar::sort_key).collect::<Vec<_>>());
    let pieces: Vec<Element> = order.iter().map(|&i| pieces[i].clone()).collect();
    let sizes: Vec<usize> = order.iter().map(|&i| sizes[i]).collect();

    let all_rank_one = sizes.iter().all(|&n| n == 1);
    let diag = all_rank_one.then(|| pieces.iter().map(|c| vec![c.clone()]).collect::<Vec<_>>());
    let units = all_rank_one.then(|| pieces.iter().map(|c| vec![vec![c.clone()]]).collect::<Vec<_>>());
    Ok(BlockData {
        semisimple: strip_blocks(s),
        proj: Matrix::identity(field, d),
        lift: Some(Matrix::identity(field, d)),
        block_sizes: sizes,
        idempotents: pieces,
        diag_idempotents: diag,
        matrix_units: units,
    })
}

/// The unit element of an ideal of a commutative (sub)algebra, if the
/// span really is one (solve `u k = k` for a basis of the span).
fn unit_of_commutative_ideal(s: &Algebra, span_vectors: &[Vec<Scalar>]) -> Result<Option<Element>> {
    let field = s.field();
    let d = s.dim();
    let span = Matrix::from_cols(field, span_vectors.to_vec()).expect("consistent");
    let k = span.cols();
    // Unknown u = span * y; equations: u * v_t = v_t for each basis vector.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for t in 0..k {
        let v = Element::new(span.col(t));
        // Row block: (v_t acted by each candidate column) coefficients.
        for r in 0..d {
            let mut row = Vec::with_capacity(k);
            for c in 0..k {
                let col = Element::new(span.col(c));
                let prod = s.multiply(&col, &v);
                row.push(prod.coords()[r].clone());
            }
            rows.push(row);
            rhs.push(vec![v.coords()[r].clone()]);
        }
    }
    let lhs = Matrix::from_rows(field, rows).expect("consistent");
    let rhs = Matrix::from_rows(field, rhs).expect("consistent");
    match lhs.solve(&rhs)? {
        None => Ok(None),
        Some(y) => {
            let u = Element::new(span.mul_vec(&y.col(0)));
            Ok((!u.is_zero() && s.multiply(&u, &u) == u).then_some(u))
        }
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All roots of a polynomial that lie in the base field, in deterministic
/// order. Over F_p the search is exhaustive (p capped at 10^6); over Q it
/// enumerates rational-root candidates from integer divisors.
pub fn polynomial_roots(field: FieldSpec, coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let eval = |x: &Scalar| -> Scalar {
        let mut acc = field.zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    };
    let mut roots = Vec::new();
    match field {
        FieldSpec::PrimeField(p) => {
            if p > 1_000_000 {
                return Err(Error::InvalidInput(
                    "root search over F_p is exhaustive and limited to p <= 10^6".into(),
                ));
            }
            for v in 0..p {
                let x = Scalar::Residue { value: v, modulus: p };
                if eval(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
        FieldSpec::Rationals => {
            // Clear denominators to a primitive integer polynomial.
            let mut lcm = BigInt::one();
            for c in coeffs {
                if let Scalar::Rational(r) = c {
                    lcm = lcm.lcm(r.denom());
                }
            }
            let ints: Vec<BigInt> = coeffs
                .iter()
                .map(|c| match c {
                    Scalar::Rational(r) => r.numer() * (&lcm / r.denom()),
                    _ => unreachable!("field checked"),
                })
                .collect();
            // Zero constant coefficient: 0 is a root, deflate once
            // (minimal polynomials here are squarefree).
            let mut low = 0;
            while low < deg && ints[low].is_zero() {
                low += 1;
            }
            if low > 0 {
                roots.push(field.zero());
            }
            let tail = &ints[low..];
            if tail.len() > 1 {
                let a0 = tail[0].abs();
                let alead = tail[tail.len() - 1].abs();
                let num_divs = divisors(&a0);
                let den_divs = divisors(&alead);
                let mut seen = std::collections::BTreeSet::new();
                for n in &num_divs {
                    for m in &den_divs {
                        for sign in [1i64, -1] {
                            let cand = Scalar::Rational(num::rational::BigRational::new(
                                n * BigInt::from(sign),
                                m.clone(),
                            ));
                            if seen.insert(cand.literal()) && eval(&cand).is_zero() {
                                roots.push(cand);
                            }
                        }
                    }
                }
            }
        }
    }
    roots.sort_by_key(|r| r.sort_key());
    roots.dedup();
    Ok(roots)
}

/// All positive divisors of |n| by trial division (the factor base covers
/// the coefficient sizes this crate produces; a surviving cofactor is
/// treated as prime).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n && p < BigInt::from(1_000_000) {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += 1;
    }
    if !n.is_one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Block data for an algebra: constructor metadata when present,
/// otherwise computed through the radical quotient and center splitting.
pub fn block_data(a: &Algebra) -> Result<BlockData> {
    if let Some(bd) = a.blocks() {
        return Ok(bd.clone());
    }
    let (s, proj) = semisimple_quotient(a)?;
    let mut bd = wedderburn_blocks(&s)?;
    if s.dim() == a.dim() {
        // Radical zero: the quotient is the identity relabelling.
        return Ok(bd);
    }
    bd.proj = proj.matrix().clone();
    bd.lift = None;
    Ok(bd)
}

/// Ranks `rank_i(delta)` of the element in each Wedderburn block,
/// computed without explicit irreducibles: the rank of left
/// multiplication by `proj(delta) c_i` on the block `S c_i` is
/// `n_i * rank_i`, and the division is exact.
pub fn block_ranks(a: &Algebra, delta: &Element) -> Result<Vec<usize>> {
    let bd = block_data(a)?;
    let s = &bd.semisimple;
    let field = s.field();
    let delta_bar = Element::new(bd.proj.mul_vec(delta.coords()));
    let mut ranks = Vec::new();
    for (c, &n) in bd.idempotents.iter().zip(&bd.block_sizes) {
        let w = s.multiply(&delta_bar, c);
        let op = s.mult_operator(&w, HomotopeSide::Left);
        // Restrict to the block S c_i.
        let mut block = Subspace::new(field, s.dim());
        for i in 0..s.dim() {
            block.insert(s.multiply(&s.basis_element(i), c).coords().to_vec());
        }
        let basis_matrix = Matrix::from_cols(field, block.basis().to_vec()).expect("consistent");
        let mut cols = Vec::new();
        for v in block.basis() {
            let img = op.mul_vec(v);
            let coords = basis_matrix
                .solve(&Matrix::column(field, &img))
                .expect("shapes agree")
                .ok_or_else(|| Error::Internal("block is not invariant under the block action".into()))?;
            cols.push(coords.col(0));
        }
        let restricted = Matrix::from_cols(field, cols).expect("consistent");
        let r = restricted.rank();
        if r % n != 0 {
            return Err(Error::Internal(format!("block rank {r} is not a multiple of {n}")));
        }
        ranks.push(r / n);
    }
    Ok(ranks)
}

/// Suitable double-coset normal form of an element.
#[derive(Clone, Debug)]
pub struct SuitableForm {
    /// Idempotent semisimple part (in the lifted complement).
    pub s: Element,
    /// Radical part with `s r = r s = 0`.
    pub r: Element,
    /// Invertible witnesses with `u delta v = s + r`.
    pub u: Element,
    pub v: Element,
    /// Per block, the indices of diagonal idempotents entering `s`
    /// (always a prefix `0..rank_i`).
    pub i_sets: Vec<Vec<usize>>,
}

/// Runs the three normalization steps: blockwise rank normal form of the
/// semisimple part, then right and left translations by `(1 + r)^{-1}` to
/// kill the mixed terms. Requires constructed (or user-supplied)
/// splitting metadata with matrix units.
pub fn suitable_form(a: &Algebra, delta: &Element) -> Result<SuitableForm> {
    let bd = block_data(a)?;
    let lift = bd
        .lift
        .clone()
        .ok_or_else(|| Error::MissingSplitting("suitable_form needs a Wedderburn-Malcev lift".into()))?;
    let units = bd
        .matrix_units
        .clone()
        .ok_or_else(|| Error::MissingSplitting("suitable_form needs explicit matrix units".into()))?;
    let s_alg = &bd.semisimple;
    let field = a.field();
    let unit = a.unit().ok_or(Error::NotUnital)?;

    // Decompose delta = lift(s1) + r1 along A = lift(S) + R.
    let rad_basis = bd.proj.kernel_basis();
    let mut cols: Vec<Vec<Scalar>> = (0..lift.cols()).map(|c| lift.col(c)).collect();
    cols.extend(rad_basis.iter().cloned());
    let basis_matrix = Matrix::from_cols(field, cols).expect("consistent");
    let y = basis_matrix
        .solve(&Matrix::column(field, delta.coords()))?
        .ok_or_else(|| Error::Internal("lift + radical do not span the algebra".into()))?;
    let s1_s = Element::new((0..s_alg.dim()).map(|i| y.at(i, 0).clone()).collect());

    // Blockwise rank normal form h1 s1 h2 = s with s a prefix idempotent.
    let mut h1_s = s_alg.zero_element();
    let mut h2_s = s_alg.zero_element();
    let mut s_s = s_alg.zero_element();
    let mut i_sets = Vec::new();
    for (b, (c, &n)) in bd.idempotents.iter().zip(&bd.block_sizes).enumerate() {
        let component = s_alg.multiply(&s1_s, c);
        // Coordinates of the block component in the matrix-unit basis.
        let mut flat_units = Vec::new();
        for row in &units[b] {
            for u in row {
                flat_units.push(u.coords().to_vec());
            }
        }
        let unit_matrix = Matrix::from_cols(field, flat_units).expect("consistent");
        let coords = unit_matrix
            .solve(&Matrix::column(field, component.coords()))?
            .ok_or_else(|| Error::Internal("block component escapes the matrix-unit span".into()))?;
        let mut m: Vec<Vec<Scalar>> = (0..n)
            .map(|j| (0..n).map(|k| coords.at(j * n + k, 0).clone()).collect())
            .collect();
        let (e_ops, f_ops, rank) = rank_normal_form(field, &mut m);
        i_sets.push((0..rank).collect());
        // Assemble h1 += sum E[j][k] e^{jk}, etc.
        for j in 0..n {
            for k in 0..n {
                if !e_ops[j][k].is_zero() {
                    h1_s = h1_s.add(&units[b][j][k].scale(&e_ops[j][k]));
                }
                if !f_ops[j][k].is_zero() {
                    h2_s = h2_s.add(&units[b][j][k].scale(&f_ops[j][k]));
                }
            }
        }
        for j in 0..rank {
            s_s = s_s.add(&units[b][j][j]);
        }
    }
    let lift_elem = |e: &Element| Element::new(lift.mul_vec(e.coords()));
    let h1 = lift_elem(&h1_s);
    let h2 = lift_elem(&h2_s);
    let s = lift_elem(&s_s);

    let x2 = a.multiply(&a.multiply(&h1, delta), &h2);
    let r2 = x2.sub(&s);
    let inv_1r2 = inverse(a, &unit.add(&r2))?.ok_or_else(|| Error::Internal("1 + radical must be invertible".into()))?;
    let x3 = a.multiply(&x2, &inv_1r2);
    let r3 = x3.sub(&s);
    let inv_1r3 = inverse(a, &unit.add(&r3))?.ok_or_else(|| Error::Internal("1 + radical must be invertible".into()))?;
    let x = a.multiply(&inv_1r3, &x3);
    let r = x.sub(&s);
    let u = a.multiply(&inv_1r3, &h1);
    let v = a.multiply(&h2, &inv_1r2);

    // Exact invariants of the form.
    if a.multiply(&s, &s) != s
        || !a.multiply(&s, &r).is_zero()
        || !a.multiply(&r, &s).is_zero()
        || a.multiply(&a.multiply(&u, delta), &v) != s.add(&r)
    {
        return Err(Error::Internal("suitable form invariants failed".into()));
    }
    Ok(SuitableForm { s, r, u, v, i_sets })
}

/// Gaussian rank normal form with recorded row and column operations:
/// returns (E, F, rank) with `E m F = diag(1..1, 0..0)` as coefficient
/// grids.
fn rank_normal_form(
    field: FieldSpec,
    m: &mut Vec<Vec<Scalar>>,
) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>, usize) {
    let n = m.len();
    let mut e: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    let mut f = e.clone();
    let mut rank = 0;
    for k in 0..n {
        // Deterministic pivot: first nonzero scanning rows then columns.
        let mut pivot = None;
        'search: for r in k..n {
            for c in k..n {
                if !m[r][c].is_zero() {
                    pivot = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(k, pr);
        e.swap(k, pr);
        if pc != k {
            for row in m.iter_mut() {
                row.swap(k, pc);
            }
            for row in f.iter_mut() {
                row.swap(k, pc);
            }
        }
        let inv = m[k][k].inv().expect("pivot nonzero");
        if !inv.is_one() {
            for c in 0..n {
                m[k][c] = m[k][c].mul(&inv);
                e[k][c] = e[k][c].mul(&inv);
            }
        }
        for r in 0..n {
            if r == k || m[r][k].is_zero() {
                continue;
            }
            let factor = m[r][k].clone();
            for c in 0..n {
                m[r][c] = m[r][c].sub(&factor.mul(&m[k][c]));
                e[r][c] = e[r][c].sub(&factor.mul(&e[k][c]));
            }
        }
        for c in 0..n {
            if c == k || m[k][c].is_zero() {
                continue;
            }
            let factor = m[k][c].clone();
            for r in 0..n {
                let delta = factor.mul(&f[r][k]);
                f[r][c] = f[r][c].sub(&delta);
                let dm = factor.mul(&m[r][k]);
                m[r][c] = m[r][c].sub(&dm);
            }
        }
        rank += 1;
    }
    (e, f, rank)
}

/// Two-sided inverse of an element of a unital algebra, or `None`.
pub fn inverse(a: &Algebra, x: &Element) -> Result<Option<Element>> {
    let unit = a.unit().ok_or(Error::NotUnital)?;
    let op = a.mult_operator(x, HomotopeSide::Left);
    let Some(inv) = op.invert()? else {
        return Ok(None);
    };
    let y = Element::new(inv.mul_vec(unit.coords()));
    if a.is_associative() && a.multiply(&y, x) != unit {
        return Err(Error::Internal("one-sided inverse in an associative algebra".into()));
    }
    Ok(Some(y))
}

pub fn is_invertible(a: &Algebra, x: &Element) -> Result<bool> {
    Ok(inverse(a, x)?.is_some())
}

/// Radical comparison between `A` and its augmented homotope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadicalCompare {
    pub contained: bool,
    pub equal: bool,
    pub dims: (usize, usize),
}

pub fn radical_compare(a: &Algebra, delta: &Element) -> Result<RadicalCompare> {
    let ra = jacobson_radical(a)?;
    let b = a.augmented_homotope(delta)?;
    let rb = jacobson_radical(&b)?;
    let rb_span = Subspace::from_vectors(b.field(), b.dim(), rb.iter().map(|e| e.coords().to_vec()));
    let contained = ra
        .iter()
        .all(|e| rb_span.contains(a.embed_in_augmented(e).coords()));
    let equal = contained && ra.len() == rb.len();
    Ok(RadicalCompare { contained, equal, dims: (ra.len(), rb.len()) })
}

/// Dimensions of the irreducible representations of the augmented
/// homotope: the nonzero block ranks of delta plus 1 for the trivial
/// representation. Returned sorted ascending (a multiset).
pub fn homotope_rep_dims(a: &Algebra, delta: &Element) -> Result<Vec<usize>> {
    let ranks = block_ranks(a, delta)?;
    let mut dims: Vec<usize> = ranks.into_iter().filter(|&r| r > 0).collect();
    dims.push(1);
    dims.sort_unstable();
    Ok(dims)
}

/// Factorization of a unit as (unipotent) * (invertible semisimple part):
/// `u = (1 + n) g` with `g` in the lifted complement and `n` in the
/// radical.
#[derive(Clone, Debug)]
pub struct UnitFactorization {
    pub semisimple_part: Element,
    pub unipotent_part: Element,
}

pub fn unit_factor(a: &Algebra, u: &Element) -> Result<UnitFactorization> {
    let bd = block_data(a)?;
    let lift = bd
        .lift
        .clone()
        .ok_or_else(|| Error::MissingSplitting("unit_factor needs a Wedderburn-Malcev lift".into()))?;
    if inverse(a, u)?.is_none() {
        return Err(Error::NotInvertible);
    }
    let field = a.field();
    let rad_basis = bd.proj.kernel_basis();
    let mut cols: Vec<Vec<Scalar>> = (0..lift.cols()).map(|c| lift.col(c)).collect();
    cols.extend(rad_basis.iter().cloned());
    let basis_matrix = Matrix::from_cols(field, cols).expect("consistent");
    let y = basis_matrix
        .solve(&Matrix::column(field, u.coords()))?
        .ok_or_else(|| Error::Internal("lift + radical do not span the algebra".into()))?;
    let s_part = Element::new(lift.mul_vec(
        &(0..lift.cols()).map(|i| y.at(i, 0).clone()).collect::<Vec<_>>(),
    ));
    let r_part = u.sub(&s_part);
    let g_inv = inverse(a, &s_part)?
        .ok_or_else(|| Error::Internal("semisimple part of a unit must be invertible".into()))?;
    let n = a.multiply(&r_part, &g_inv);
    let unit = a.unit().expect("invertibility check required a unit");
    let unipotent = unit.add(&n);
    let rad_span = Subspace::from_vectors(field, a.dim(), rad_basis.into_iter());
    if !rad_span.contains(n.coords()) || a.multiply(&unipotent, &s_part) != *u {
        return Err(Error::Internal("unit factorization invariants failed".into()));
    }
    Ok(UnitFactorization { semisimple_part: s_part, unipotent_part: unipotent })
}
