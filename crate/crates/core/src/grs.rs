//! Generalized Reed-Solomon codes over GF(q^2): the generator matrix built
//! from evaluation points and column multipliers, Hermitian inner products of
//! power vectors, and small-scale distance / MDS / hull oracles.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::field::{FieldElem, FieldError, FieldSpec};
use crate::matrix::{Matrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("evaluation points at positions {0} and {1} coincide")]
    DuplicateEvaluationPoint(usize, usize),
    #[error("multiplier at position {0} is zero")]
    ZeroMultiplier(usize),
    #[error("dimension k={k} out of range for length n={n}")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("vector lengths differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("enumeration of size {needed} exceeds the cap {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The classical object: evaluation points `a`, nonzero multipliers `v`, and
/// dimension `k` over GF(q^2).
#[derive(Clone, Debug)]
pub struct GrsCode {
    field: Arc<FieldSpec>,
    a: Vec<FieldElem>,
    v: Vec<FieldElem>,
    k: usize,
}

impl GrsCode {
    /// Strict constructor: points must be pairwise distinct.
    pub fn new(
        field: Arc<FieldSpec>,
        a: Vec<FieldElem>,
        v: Vec<FieldElem>,
        k: usize,
    ) -> Result<GrsCode, CodeError> {
        let code = Self::new_allowing_duplicates(field, a, v, k)?;
        if let Some((i, j)) = code.first_duplicate() {
            return Err(CodeError::DuplicateEvaluationPoint(i, j));
        }
        Ok(code)
    }

    /// Constructor that tolerates repeated evaluation points. Paper-layout
    /// constructions can overlap cosets; the caller is expected to surface
    /// that as a warning rather than lose the Gram analysis.
    pub fn new_allowing_duplicates(
        field: Arc<FieldSpec>,
        a: Vec<FieldElem>,
        v: Vec<FieldElem>,
        k: usize,
    ) -> Result<GrsCode, CodeError> {
        if a.len() != v.len() {
            return Err(CodeError::DimensionMismatch(a.len(), v.len()));
        }
        if k == 0 || k > a.len() {
            return Err(CodeError::DimensionOutOfRange { k, n: a.len() });
        }
        if let Some(i) = v.iter().position(|x| x.is_zero()) {
            return Err(CodeError::ZeroMultiplier(i));
        }
        Ok(GrsCode { field, a, v, k })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.a
    }

    pub fn multipliers(&self) -> &[FieldElem] {
        &self.v
    }

    pub fn first_duplicate(&self) -> Option<(usize, usize)> {
        let mut seen = std::collections::HashMap::new();
        for (i, &x) in self.a.iter().enumerate() {
            if let Some(&j) = seen.get(&x) {
                return Some((j, i));
            }
            seen.insert(x, i);
        }
        None
    }

    pub fn duplicate_point_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        self.a.iter().filter(|&&x| !seen.insert(x)).count()
    }

    /// k x n generator with row r, column i entry v_i * a_i^r. Row 0 is the
    /// multiplier row: a_i^0 = 1 even when a_i = 0.
    pub fn generator_matrix(&self) -> Matrix {
        let f = &self.field;
        let n = self.n();
        let mut m = Matrix::zeros(self.field.clone(), self.k, n);
        for i in 0..n {
            let mut p = f.one();
            for r in 0..self.k {
                m.set(r, i, f.mul(self.v[i], p));
                p = f.mul(p, self.a[i]);
            }
        }
        m
    }

    /// Generator of the Hermitian dual, obtained by a nullspace solve against
    /// the conjugated rows of the generator.
    pub fn hermitian_dual_generator(&self) -> Result<Matrix, CodeError> {
        Ok(self.generator_matrix().conj()?.nullspace_basis())
    }

    /// dim(C intersect C^{perp_H}) = k - rank(G G^dagger).
    pub fn hull_dim(&self) -> Result<usize, CodeError> {
        let g = self.generator_matrix();
        let dual = self.hermitian_dual_generator()?;
        Ok(g.row_space_intersection_dim(&dual)?)
    }

    /// Exact minimum Hamming weight by enumerating the message space (q^2)^k.
    pub fn min_distance_bruteforce(&self, cap: u64) -> Result<usize, CodeError> {
        let f = &self.field;
        let order = f.order();
        let total = (order as u128).pow(self.k as u32);
        if total > cap as u128 {
            return Err(CodeError::CapExceeded { needed: total, cap });
        }
        let gen = self.generator_matrix();
        let n = self.n();
        let mut msg = vec![0u64; self.k];
        let mut best = n + 1;
        'outer: loop {
            // advance odometer
            let mut i = 0;
            loop {
                if i == self.k {
                    break 'outer;
                }
                msg[i] += 1;
                if msg[i] < order {
                    break;
                }
                msg[i] = 0;
                i += 1;
            }
            let mut weight = 0;
            for col in 0..n {
                let mut acc = f.zero();
                for (row, &d) in msg.iter().enumerate() {
                    if d != 0 {
                        acc = f.add(acc, f.mul(f.elem_from_index(d), gen.get(row, col)));
                    }
                }
                if !acc.is_zero() {
                    weight += 1;
                }
            }
            best = best.min(weight);
        }
        Ok(best)
    }

    /// True iff every tested k x k minor of the generator matrix is nonzero.
    pub fn mds_minor_check(&self, mode: MinorCheckMode) -> Result<bool, CodeError> {
        let gen = self.generator_matrix();
        let n = self.n();
        let k = self.k;
        let minor_full_rank = |cols: &[usize]| -> bool {
            let mut sub = Matrix::zeros(self.field.clone(), k, k);
            for (ci, &c) in cols.iter().enumerate() {
                for r in 0..k {
                    sub.set(r, ci, gen.get(r, c));
                }
            }
            sub.rank() == k
        };
        match mode {
            MinorCheckMode::Exhaustive { cap } => {
                let total = binomial(n as u64, k as u64);
                if total > cap as u128 {
                    return Err(CodeError::CapExceeded { needed: total, cap });
                }
                let mut comb: Vec<usize> = (0..k).collect();
                loop {
                    if !minor_full_rank(&comb) {
                        return Ok(false);
                    }
                    if !next_combination(&mut comb, n) {
                        break;
                    }
                }
                Ok(true)
            }
            MinorCheckMode::Sample { count, seed } => {
                let mut rng = StdRng::seed_from_u64(seed);
                for _ in 0..count {
                    let mut cols: Vec<usize> = (0..n).collect();
                    for i in 0..k {
                        let j = rng.gen_range(i..n);
                        cols.swap(i, j);
                    }
                    let mut pick: Vec<usize> = cols[..k].to_vec();
                    pick.sort_unstable();
                    if !minor_full_rank(&pick) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum MinorCheckMode {
    Exhaustive { cap: u64 },
    Sample { count: u64, seed: u64 },
}

/// Hermitian inner product sum_i x_i * y_i^q.
pub fn hermitian_inner(
    f: &FieldSpec,
    x: &[FieldElem],
    y: &[FieldElem],
) -> Result<FieldElem, CodeError> {
    if x.len() != y.len() {
        return Err(CodeError::DimensionMismatch(x.len(), y.len()));
    }
    let mut acc = f.zero();
    for (&xi, &yi) in x.iter().zip(y) {
        acc = f.add(acc, f.mul(xi, f.frobenius(yi)?));
    }
    Ok(acc)
}

/// sum_t a_t^{qi+j} * v_t^{q+1}, with 0^0 = 1 so that (i, j) = (0, 0) counts
/// every coordinate including zero evaluation points.
pub fn power_inner(
    f: &FieldSpec,
    a: &[FieldElem],
    v: &[FieldElem],
    i: u64,
    j: u64,
) -> Result<FieldElem, CodeError> {
    if a.len() != v.len() {
        return Err(CodeError::DimensionMismatch(a.len(), v.len()));
    }
    let q = f
        .subfield_order()
        .ok_or(FieldError::NotAQuadraticExtension)?;
    let e = q * i + j;
    let mut acc = f.zero();
    for (&at, &vt) in a.iter().zip(v) {
        acc = f.add(acc, f.mul(f.pow(at, e), f.pow(vt, q + 1)));
    }
    Ok(acc)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i_rev in 0..k {
        let i = k - 1 - i_rev;
        if comb[i] < n - (k - i) {
            comb[i] += 1;
            for j in (i + 1)..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_code(f: &Arc<FieldSpec>, n: usize, k: usize, rng: &mut StdRng) -> GrsCode {
        let mut points: Vec<u64> = (0..f.order()).collect();
        for i in 0..n {
            let j = rng.gen_range(i..points.len());
            points.swap(i, j);
        }
        let a: Vec<_> = points[..n].iter().map(|&i| f.elem_from_index(i)).collect();
        let v: Vec<_> = (0..n)
            .map(|_| f.elem_from_index(rng.gen_range(1..f.order())))
            .collect();
        GrsCode::new(f.clone(), a, v, k).unwrap()
    }

    #[test]
    fn generator_small_cases() {
        let f = FieldSpec::new(3, 2).unwrap();
        let a = vec![f.zero(), f.one()];
        let v = vec![f.one(), f.one()];
        let code = GrsCode::new(f.clone(), a, v, 2).unwrap();
        let g = code.generator_matrix();
        assert_eq!(
            (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)),
            (f.one(), f.one(), f.zero(), f.one())
        );

        let code1 = GrsCode::new(
            f.clone(),
            (0..5).map(|i| f.elem_from_index(i)).collect(),
            vec![f.elem_from_int(2); 5],
            1,
        )
        .unwrap();
        let g1 = code1.generator_matrix();
        assert!((0..5).all(|i| g1.get(0, i) == f.elem_from_int(2)));
    }

    #[test]
    fn constructor_invariants() {
        let f = FieldSpec::new(3, 2).unwrap();
        let dup = vec![f.one(), f.one()];
        let v = vec![f.one(), f.one()];
        assert!(matches!(
            GrsCode::new(f.clone(), dup.clone(), v.clone(), 1).unwrap_err(),
            CodeError::DuplicateEvaluationPoint(0, 1)
        ));
        let relaxed = GrsCode::new_allowing_duplicates(f.clone(), dup, v, 1).unwrap();
        assert_eq!(relaxed.duplicate_point_count(), 1);

        let a = vec![f.zero(), f.one()];
        assert!(matches!(
            GrsCode::new(f.clone(), a.clone(), vec![f.one(), f.zero()], 1).unwrap_err(),
            CodeError::ZeroMultiplier(1)
        ));
        assert!(matches!(
            GrsCode::new(f.clone(), a, vec![f.one(), f.one()], 3).unwrap_err(),
            CodeError::DimensionOutOfRange { k: 3, n: 2 }
        ));
    }

    #[test]
    fn hermitian_inner_basics() {
        let f = FieldSpec::new(5, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let x: Vec<_> = (0..6)
            .map(|_| f.elem_from_index(rng.gen_range(0..25)))
            .collect();
        let zeros = vec![f.zero(); 6];
        assert!(hermitian_inner(&f, &x, &zeros).unwrap().is_zero());
        // <x, x> lands in the subfield.
        let xx = hermitian_inner(&f, &x, &x).unwrap();
        assert!(f.is_in_subfield(xx).unwrap());
        assert!(matches!(
            hermitian_inner(&f, &x, &zeros[..3]).unwrap_err(),
            CodeError::DimensionMismatch(6, 3)
        ));
    }

    #[test]
    fn dual_generator_is_orthogonal() {
        let f = FieldSpec::new(3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(17);
        let code = random_code(&f, 6, 3, &mut rng);
        let g = code.generator_matrix();
        let dual = code.hermitian_dual_generator().unwrap();
        assert_eq!(dual.rows(), 3);
        for r in 0..dual.rows() {
            for cr in 0..g.rows() {
                let ip = hermitian_inner(&f, dual.row(r), g.row(cr)).unwrap();
                assert!(ip.is_zero());
            }
        }
    }

    #[test]
    fn power_inner_all_ones() {
        let f = FieldSpec::new(5, 2).unwrap();
        let a: Vec<_> = (0..7).map(|i| f.elem_from_index(i)).collect();
        let v = vec![f.one(); 7];
        // (i, j) = (0, 0) sums v_t^{q+1} over all t, including the zero point.
        assert_eq!(power_inner(&f, &a, &v, 0, 0).unwrap(), f.elem_from_int(7));
    }

    #[test]
    fn power_inner_matches_gram() {
        let f = FieldSpec::new(3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..10 {
            let code = random_code(&f, 5, 3, &mut rng);
            let gram = code.generator_matrix().gram().unwrap();
            for i in 0..3u64 {
                for j in 0..3u64 {
                    let pi =
                        power_inner(&f, code.points(), code.multipliers(), i, j).unwrap();
                    assert_eq!(pi, gram.get(j as usize, i as usize));
                }
            }
        }
    }

    #[test]
    fn brute_force_distance() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let code = GrsCode::new(
            f9.clone(),
            (0..5).map(|i| f9.elem_from_index(i)).collect(),
            vec![f9.one(); 5],
            1,
        )
        .unwrap();
        assert_eq!(code.min_distance_bruteforce(1 << 20).unwrap(), 5);

        let mut rng = StdRng::seed_from_u64(41);
        let code = random_code(&f9, 4, 2, &mut rng);
        assert_eq!(code.min_distance_bruteforce(1 << 20).unwrap(), 3);

        let f25 = FieldSpec::new(5, 2).unwrap();
        let code = random_code(&f25, 6, 2, &mut rng);
        assert_eq!(code.min_distance_bruteforce(1 << 20).unwrap(), 5);

        let code = random_code(&f25, 8, 4, &mut rng);
        assert!(matches!(
            code.min_distance_bruteforce(1 << 10).unwrap_err(),
            CodeError::CapExceeded { .. }
        ));
    }

    #[test]
    fn minor_check_modes() {
        let f = FieldSpec::new(3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(43);
        let code = random_code(&f, 8, 3, &mut rng);
        assert!(code
            .mds_minor_check(MinorCheckMode::Exhaustive { cap: 1 << 20 })
            .unwrap());
        assert!(code
            .mds_minor_check(MinorCheckMode::Sample { count: 0, seed: 1 })
            .unwrap());

        // A duplicated evaluation point forces a zero minor.
        let mut a: Vec<_> = (0..5).map(|i| f.elem_from_index(i)).collect();
        a.push(a[0]);
        let corrupted =
            GrsCode::new_allowing_duplicates(f.clone(), a, vec![f.one(); 6], 2).unwrap();
        assert!(!corrupted
            .mds_minor_check(MinorCheckMode::Exhaustive { cap: 1 << 20 })
            .unwrap());
        assert!(matches!(
            code.mds_minor_check(MinorCheckMode::Exhaustive { cap: 8 })
                .unwrap_err(),
            CodeError::CapExceeded { .. }
        ));
    }

    #[test]
    fn hull_identity_on_random_codes() {
        let f = FieldSpec::new(5, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(47);
        for _ in 0..25 {
            let n = rng.gen_range(3..9);
            let k = rng.gen_range(1..=n.min(4));
            let code = random_code(&f, n, k, &mut rng);
            let gram_rank = code.generator_matrix().gram().unwrap().rank();
            assert_eq!(code.hull_dim().unwrap(), k - gram_rank);
        }
    }

    #[test]
    fn dual_of_grs_is_mds_small_scale() {
        // The Hermitian dual of a small GRS code is itself MDS.
        let f = FieldSpec::new(3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..5 {
            let n = rng.gen_range(4..7);
            let k = rng.gen_range(1..n - 1);
            let code = random_code(&f, n, k, &mut rng);
            let dual = code.hermitian_dual_generator().unwrap();
            let dual_code = GrsCodeSpan {
                gen: dual,
                n,
            };
            let d = dual_code.min_distance(&f);
            assert_eq!(d, n - (n - k) + 1);
        }
    }

    /// Brute-force distance of an arbitrary generator matrix span (test helper).
    struct GrsCodeSpan {
        gen: Matrix,
        n: usize,
    }

    impl GrsCodeSpan {
        fn min_distance(&self, f: &FieldSpec) -> usize {
            let k = self.gen.rows();
            let order = f.order();
            assert!((order as u128).pow(k as u32) <= 1 << 20);
            let mut msg = vec![0u64; k];
            let mut best = self.n + 1;
            'outer: loop {
                let mut i = 0;
                loop {
                    if i == k {
                        break 'outer;
                    }
                    msg[i] += 1;
                    if msg[i] < order {
                        break;
                    }
                    msg[i] = 0;
                    i += 1;
                }
                let mut weight = 0;
                for col in 0..self.n {
                    let mut acc = f.zero();
                    for (row, &d) in msg.iter().enumerate() {
                        if d != 0 {
                            acc = f.add(acc, f.mul(f.elem_from_index(d), self.gen.get(row, col)));
                        }
                    }
                    if !acc.is_zero() {
                        weight += 1;
                    }
                }
                best = best.min(weight);
            }
            best
        }
    }
}
