//! Extremal constructions and brute-force verifiers for matrix and
//! permutation supersaturation at small sizes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::combin::{binomial, factorial_big, next_permutation, Combinations};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matrix::{contains_pattern, count_matrix_copies, BinaryMatrix};
use crate::perm::{copy_count_distribution, count_in, Permutation};
use crate::rational::serialize_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Every candidate was examined or pruned by a valid bound.
    Exact,
    /// The search stopped at its node budget; `measured` is a lower bound.
    Search,
}

fn serialize_opt_rational<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

/// An extremum over 0-1 matrices together with a witness achieving it.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    pub pattern: Permutation,
    pub mode: SearchMode,
    pub measured: u64,
    /// a^{2k−1}/n^{2k−2} for copy minima; absent for ones maxima.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub bound: Option<BigRational>,
    /// measured/n for ones maxima (a c_π estimate), measured/bound for copy minima.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub ratio: Option<BigRational>,
    pub witness: BinaryMatrix,
}

fn rational(num: u64, den: u64) -> Option<BigRational> {
    (den != 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Default node budget for the branch-and-bound mode of [`max_ones_avoiding`].
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

/// Maximum number of ones in an n×n matrix avoiding A_π.
///
/// Sides up to `limits.matrix_cap` are searched exhaustively. Larger sides
/// use branch and bound over cells in row-major order; the report is
/// `Exact` only when the search finishes within `node_budget`.
pub fn max_ones_avoiding(n: usize, pi: &Permutation, limits: &Limits, node_budget: u64) -> Result<ExtremalReport> {
    let (measured, witness, mode) = if n <= limits.matrix_cap && n * n <= 64 {
        let (best, mask) = exhaustive_max_ones(n, pi);
        (best, BinaryMatrix::from_mask(n, mask), SearchMode::Exact)
    } else {
        if n * n > 64 * 64 {
            return Err(Error::cap("matrix side for branch and bound", n as u128, 64u128));
        }
        branch_and_bound_max_ones(n, pi, node_budget)
    };
    Ok(ExtremalReport { n, a: None, pattern: pi.clone(), mode, measured, bound: None, ratio: rational(measured, n as u64), witness })
}

fn exhaustive_max_ones(n: usize, pi: &Permutation) -> (u64, u64) {
    let cells = n * n;
    let mut best = (0u64, 0u64);
    let end: u64 = if cells == 64 { u64::MAX } else { (1u64 << cells) - 1 };
    let mut mask = 0u64;
    loop {
        let ones = mask.count_ones() as u64;
        if ones > best.0 && !contains_pattern(&BinaryMatrix::from_mask(n, mask), pi) {
            best = (ones, mask);
        }
        if mask == end {
            break;
        }
        mask += 1;
    }
    best
}

struct BranchAndBound<'a> {
    n: usize,
    pi: &'a Permutation,
    current: BinaryMatrix,
    best: u64,
    witness: BinaryMatrix,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl BranchAndBound<'_> {
    fn visit(&mut self, cell: usize) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let total = self.n * self.n;
        if self.current.ones() + (total - cell) as u64 <= self.best {
            return;
        }
        if cell == total {
            self.best = self.current.ones();
            self.witness = self.current.clone();
            return;
        }
        let (i, j) = (cell / self.n, cell % self.n);
        self.current.set(i, j, true);
        if !contains_pattern(&self.current, self.pi) {
            self.visit(cell + 1);
        }
        self.current.set(i, j, false);
        self.visit(cell + 1);
    }
}

fn branch_and_bound_max_ones(n: usize, pi: &Permutation, budget: u64) -> (u64, BinaryMatrix, SearchMode) {
    let mut search = BranchAndBound {
        n,
        pi,
        current: BinaryMatrix::zeros(n, n),
        best: 0,
        witness: BinaryMatrix::zeros(n, n),
        nodes: 0,
        budget,
        exhausted: false,
    };
    search.visit(0);
    let mode = if search.exhausted { SearchMode::Search } else { SearchMode::Exact };
    (search.best, search.witness, mode)
}

/// copies(M) ≥ ones(M) − c·n, with n the row count of M.
pub fn easy_bound_check(m: &BinaryMatrix, pi: &Permutation, c: &BigRational) -> bool {
    let copies = BigRational::from_integer(BigInt::from(count_matrix_copies(m, pi)));
    let ones = BigRational::from_integer(BigInt::from(m.ones()));
    let n = BigRational::from_integer(BigInt::from(m.rows()));
    copies >= ones - c * n
}

/// a^{2k−1}/n^{2k−2}.
pub fn supersaturation_bound(n: usize, a: u64, k: usize) -> Option<BigRational> {
    if n == 0 || k == 0 {
        return None;
    }
    let num = BigInt::from(a).pow(2 * k as u32 - 1);
    let den = BigInt::from(n).pow(2 * k as u32 - 2);
    Some(BigRational::new(num, den))
}

/// Minimum copies of A_π over all n×n matrices with exactly `a` ones,
/// with the lexicographically first minimizing support as witness.
pub fn min_copies_brute(n: usize, a: u64, pi: &Permutation, limits: &Limits) -> Result<ExtremalReport> {
    limits.check_matrix(n)?;
    let cells = n * n;
    if a > cells as u64 {
        return Err(Error::InvalidArgument(format!("{a} ones do not fit in a {n}×{n} matrix")));
    }
    let mut best: Option<(u64, BinaryMatrix)> = None;
    for support in Combinations::new(cells, a as usize) {
        let mut m = BinaryMatrix::zeros(n, n);
        for cell in support {
            m.set(cell / n, cell % n, true);
        }
        let copies = count_matrix_copies(&m, pi);
        if best.as_ref().is_none_or(|(b, _)| copies < *b) {
            best = Some((copies, m));
            if copies == 0 {
                break;
            }
        }
    }
    let (measured, witness) = best.expect("at least one support exists");
    let bound = supersaturation_bound(n, a, pi.len());
    let ratio = bound.as_ref().filter(|b| !b.is_zero()).map(|b| BigRational::from_integer(BigInt::from(measured)) / b);
    Ok(ExtremalReport { n, a: Some(a), pattern: pi.clone(), mode: SearchMode::Exact, measured, bound, ratio, witness })
}

/// The n²/a diagonal blocks of side a/n filled with ones.
pub fn extremal_block_diagonal(n: usize, a: u64) -> Result<BinaryMatrix> {
    let n64 = n as u64;
    if n == 0 || a == 0 || !a.is_multiple_of(n64) || !(n64 * n64).is_multiple_of(a) {
        return Err(Error::InvalidArgument(format!("block construction needs n | a and a | n², got n={n}, a={a}")));
    }
    let side = (a / n64) as usize;
    let mut m = BinaryMatrix::zeros(n, n);
    for block in 0..n / side {
        for i in block * side..(block + 1) * side {
            for j in block * side..(block + 1) * side {
                m.set(i, j, true);
            }
        }
    }
    Ok(m)
}

/// Returns π unchanged when π(1) > π(k); otherwise its reversal and `true`.
///
/// Reversal is a bijection on both sides: σ has as many copies of π as
/// rev(σ) has of rev(π), and a matrix M has as many copies of A_π as M with
/// its row order reversed has of A_{rev(π)}.
pub fn normalize_first_greater_last(pi: &Permutation) -> (Permutation, bool) {
    let v = pi.values();
    if v.len() >= 2 && v[0] < v[v.len() - 1] {
        (pi.reverse(), true)
    } else {
        (pi.clone(), false)
    }
}

/// M with its row order reversed.
pub fn reverse_rows(m: &BinaryMatrix) -> BinaryMatrix {
    let rows: Vec<usize> = (0..m.rows()).rev().collect();
    let cols: Vec<usize> = (0..m.cols()).collect();
    m.submatrix(&rows, &cols)
}

/// S_{n,a}: permutations where each index block {ta+1, …, (t+1)a} (and the
/// final short block of length r) maps onto its own value range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SnaFamily {
    pub n: usize,
    pub a: usize,
    pub q: usize,
    pub r: usize,
}

impl SnaFamily {
    pub fn new(n: usize, a: usize) -> Result<Self> {
        if a == 0 || a > n {
            return Err(Error::InvalidArgument(format!("block length {a} must lie in 1..={n}")));
        }
        Ok(SnaFamily { n, a, q: n / a, r: n % a })
    }

    /// (a!)^q · r!.
    pub fn size(&self) -> BigUint {
        factorial_big(self.a as u64).pow(self.q as u32) * factorial_big(self.r as u64)
    }

    fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.q).map(|t| (t * self.a, self.a)).collect();
        if self.r > 0 {
            out.push((self.q * self.a, self.r));
        }
        out
    }

    pub fn contains(&self, sigma: &Permutation) -> bool {
        sigma.len() == self.n
            && sigma.values().iter().enumerate().all(|(i, &v)| {
                let start = i / self.a * self.a;
                (start..(start + self.a).min(self.n)).contains(&(v as usize))
            })
    }

    /// All members in lexicographic order; gated by the enumeration cap.
    pub fn members(&self, limits: &Limits) -> Result<SnaMembers> {
        limits.check_enumeration(self.n)?;
        Ok(SnaMembers { blocks: self.blocks(), current: (0..self.n as u32).collect(), done: false })
    }
}

#[derive(Debug, Clone)]
pub struct SnaMembers {
    blocks: Vec<(usize, usize)>,
    current: Vec<u32>,
    done: bool,
}

impl Iterator for SnaMembers {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = Permutation::from_values_unchecked(self.current.clone());
        self.done = true;
        for &(start, len) in self.blocks.iter().rev() {
            if next_permutation(&mut self.current[start..start + len]) {
                self.done = false;
                break;
            }
        }
        Some(out)
    }
}

/// Occurrence budget for members of S_{n,a} under a pattern with π(1) > π(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CopyBudget {
    pub n: usize,
    pub a: usize,
    pub k: usize,
    pub q: usize,
    pub r: usize,
    /// q·C(a,k) + C(r,k).
    pub budget: u64,
    /// n·a^{k−1}.
    pub ceiling: u64,
}

pub fn sna_copy_budget(n: usize, a: usize, pi: &Permutation) -> Result<CopyBudget> {
    let k = pi.len();
    let v = pi.values();
    if k < 2 || v[0] < v[k - 1] {
        return Err(Error::InvalidArgument(format!("pattern {pi} must satisfy π(1) > π(k); reverse it first")));
    }
    let family = SnaFamily::new(n, a)?;
    let overflow = || Error::InvalidArgument("copy budget overflows u64".into());
    let budget = (family.q as u64)
        .checked_mul(binomial(a as u64, k as u64).ok_or_else(overflow)?)
        .and_then(|x| x.checked_add(binomial(family.r as u64, k as u64)?))
        .ok_or_else(overflow)?;
    let ceiling = (a as u64).checked_pow(k as u32 - 1).and_then(|x| x.checked_mul(n as u64)).ok_or_else(overflow)?;
    Ok(CopyBudget { n, a, k, q: family.q, r: family.r, budget, ceiling })
}

#[derive(Debug, Clone, Serialize)]
pub struct SnaVerification {
    pub family: SnaFamily,
    pub pattern: Permutation,
    pub budget: CopyBudget,
    pub expected_size: String,
    pub members: u64,
    pub max_copies: u64,
    pub within_budget: bool,
    pub within_ceiling: bool,
}

/// Streams S_{n,a} and checks every member against the budget.
pub fn verify_sna_budget(n: usize, a: usize, pi: &Permutation, limits: &Limits) -> Result<SnaVerification> {
    let budget = sna_copy_budget(n, a, pi)?;
    let family = SnaFamily::new(n, a)?;
    let mut members = 0u64;
    let mut max_copies = 0u64;
    for sigma in family.members(limits)? {
        members += 1;
        max_copies = max_copies.max(count_in(sigma.values(), pi.values()));
    }
    Ok(SnaVerification {
        family,
        pattern: pi.clone(),
        expected_size: family.size().to_string(),
        members,
        max_copies,
        within_budget: max_copies <= budget.budget,
        within_ceiling: max_copies <= budget.ceiling,
        budget,
    })
}

/// |S_n(m, π)|: permutations of length n with at most m copies of π.
pub fn count_snm(n: usize, m: u64, pi: &Permutation, limits: &Limits) -> Result<u64> {
    Ok(copy_count_distribution(n, pi, limits)?.at_most(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{contains, enumerate_permutations};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn max_ones_examples() {
        let limits = Limits::default();
        let r = max_ones_avoiding(2, &p("1,2"), &limits, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.measured, 3);
        assert_eq!(r.witness.row_strings(), vec!["11", "10"]);
        assert_eq!(r.mode, SearchMode::Exact);
        assert_eq!(max_ones_avoiding(3, &p("1,2"), &limits, DEFAULT_NODE_BUDGET).unwrap().measured, 5);
        assert_eq!(max_ones_avoiding(1, &p("2,1"), &limits, DEFAULT_NODE_BUDGET).unwrap().measured, 1);
        assert_eq!(max_ones_avoiding(1, &p("1,3,2"), &limits, DEFAULT_NODE_BUDGET).unwrap().measured, 1);
    }

    #[test]
    fn branch_and_bound_agrees_with_exhaustive() {
        let exhaustive = Limits::default();
        let forced = Limits { matrix_cap: 0, ..Limits::default() };
        for pi in ["1,2", "2,1", "1,3,2"] {
            for n in 1..=4 {
                let a = max_ones_avoiding(n, &p(pi), &exhaustive, DEFAULT_NODE_BUDGET).unwrap();
                let b = max_ones_avoiding(n, &p(pi), &forced, DEFAULT_NODE_BUDGET).unwrap();
                assert_eq!(a.measured, b.measured, "{pi} n={n}");
                assert_eq!(b.mode, SearchMode::Exact);
                assert!(!contains_pattern(&b.witness, &p(pi)));
                assert_eq!(b.witness.ones(), b.measured);
            }
        }
        let starved = max_ones_avoiding(4, &p("1,2"), &forced, 10).unwrap();
        assert_eq!(starved.mode, SearchMode::Search);
    }

    #[test]
    fn easy_bound_examples() {
        let c = BigRational::new(5.into(), 3.into());
        assert!(easy_bound_check(&BinaryMatrix::filled(3, 3), &p("1,2"), &c));
        let avoider = BinaryMatrix::from_row_strings(&["11", "10"]).unwrap();
        assert!(easy_bound_check(&avoider, &p("1,2"), &BigRational::new(3.into(), 2.into())));
    }

    #[test]
    fn min_copies_examples() {
        let limits = Limits::default();
        assert_eq!(min_copies_brute(2, 4, &p("1,2"), &limits).unwrap().measured, 1);
        assert_eq!(min_copies_brute(3, 9, &p("1,2"), &limits).unwrap().measured, 9);
        for a in 0..=5 {
            assert_eq!(min_copies_brute(3, a, &p("1,2"), &limits).unwrap().measured, 0);
        }
        assert!(min_copies_brute(5, 3, &p("1,2"), &limits).unwrap_err().is_limit());
        assert!(min_copies_brute(2, 5, &p("1,2"), &limits).is_err());
        let r = min_copies_brute(3, 7, &p("2,1"), &limits).unwrap();
        assert_eq!(count_matrix_copies(&r.witness, &p("2,1")), r.measured);
        assert_eq!(r.witness.ones(), 7);
    }

    #[test]
    fn block_diagonal_examples() {
        let m = extremal_block_diagonal(4, 8).unwrap();
        assert_eq!(m.row_strings(), vec!["1100", "1100", "0011", "0011"]);
        assert_eq!(count_matrix_copies(&m, &p("2,1")), 2);
        assert_eq!(extremal_block_diagonal(3, 3).unwrap(), BinaryMatrix::from_mask(3, 0b100_010_001));
        assert_eq!(extremal_block_diagonal(4, 16).unwrap(), BinaryMatrix::filled(4, 4));
        assert!(extremal_block_diagonal(4, 6).is_err());
        assert!(extremal_block_diagonal(4, 12).is_err());
        assert_eq!(supersaturation_bound(4, 8, 2), Some(BigRational::from_integer(32.into())));
    }

    #[test]
    fn sna_sizes_and_members() {
        let limits = Limits::default();
        for (n, a, size) in [(4, 2, 4u64), (5, 2, 4), (5, 1, 1), (6, 3, 36), (7, 3, 36)] {
            let f = SnaFamily::new(n, a).unwrap();
            assert_eq!(f.size(), BigUint::from(size));
            let members: Vec<_> = f.members(&limits).unwrap().collect();
            assert_eq!(members.len() as u64, size);
            assert!(members.windows(2).all(|w| w[0] < w[1]));
            assert!(members.iter().all(|s| f.contains(s)));
        }
        let f = SnaFamily::new(4, 2).unwrap();
        let brute = enumerate_permutations(4, &limits).unwrap().filter(|s| f.contains(s)).count();
        assert_eq!(brute, 4);
        assert_eq!(SnaFamily::new(1, 1).unwrap().members(&limits).unwrap().count(), 1);
        assert!(SnaFamily::new(3, 0).is_err());
        assert!(SnaFamily::new(3, 4).is_err());
    }

    #[test]
    fn copy_budget_examples() {
        let limits = Limits::default();
        let b = sna_copy_budget(4, 2, &p("2,1")).unwrap();
        assert_eq!((b.budget, b.ceiling), (2, 8));
        let v = verify_sna_budget(4, 2, &p("2,1"), &limits).unwrap();
        assert_eq!(v.members, 4);
        assert!(v.within_budget && v.within_ceiling);
        assert_eq!(v.max_copies, 2);

        let b = sna_copy_budget(5, 2, &p("3,2,1")).unwrap();
        assert_eq!(b.budget, 0);
        let v = verify_sna_budget(5, 2, &p("3,2,1"), &limits).unwrap();
        assert_eq!(v.max_copies, 0);

        let b = sna_copy_budget(6, 3, &p("3,2,1")).unwrap();
        assert_eq!(b.budget, 2);
        let v = verify_sna_budget(6, 3, &p("3,2,1"), &limits).unwrap();
        assert_eq!(v.members, 36);
        assert!(v.within_budget);

        assert!(sna_copy_budget(4, 2, &p("1,2")).is_err());
        assert!(sna_copy_budget(4, 2, &p("1")).is_err());
    }

    #[test]
    fn normalization() {
        let (q, flipped) = normalize_first_greater_last(&p("1,3,2"));
        assert_eq!((q.to_string(), flipped), ("2,3,1".to_string(), true));
        let (q, flipped) = normalize_first_greater_last(&p("3,1,2"));
        assert_eq!((q.to_string(), flipped), ("3,1,2".to_string(), false));
        for mask in (0..1u64 << 9).step_by(7) {
            let m = BinaryMatrix::from_mask(3, mask);
            assert_eq!(count_matrix_copies(&m, &p("1,3,2")), count_matrix_copies(&reverse_rows(&m), &p("2,3,1")));
        }
    }

    #[test]
    fn snm_examples() {
        let limits = Limits::default();
        assert_eq!(count_snm(3, 1, &p("1,2"), &limits).unwrap(), 3);
        assert_eq!(count_snm(4, 6, &p("1,2"), &limits).unwrap(), 24);
        assert_eq!(count_snm(4, 100, &p("1,2"), &limits).unwrap(), 24);
        assert_eq!(count_snm(5, 0, &p("3,2,1"), &limits).unwrap(), 42);
        let oracle = enumerate_permutations(5, &limits).unwrap().filter(|s| !contains(s, &p("3,2,1"))).count();
        assert_eq!(oracle, 42);
    }
}
