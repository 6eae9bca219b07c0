//! Entrywise evaluation of the inverse lower-triangular matrix pair
//! (M, M*) in both families, plus block assembly and admissibility
//! scans over a working box.
//!
//! Rows and columns are multi-indices of rank l; an entry is supported
//! only when j <= i componentwise and is exactly 0 otherwise. Writing
//! |j| = j_1 + ... + j_l and C(m,2) = m(m-1)/2, the entries are:
//!
//! Family A (parameters q, a, x_1..x_l):
//!
//!   M\[A\](i; j) = prod_{r,s=1..l} 1/(q (x_r/x_s) q^(j_r-j_s); q)_(i_r-j_r)
//!              * prod_{k=1..l} 1/(a q (x_k/x_l); q)_(i_k+|j|)
//!
//!   M*\[A\](i; j) = prod_{k=1..l} [1 - a (x_k/x_l) q^(i_k+|i|)]
//!               * prod_{k=1..l} (a q (x_k/x_l); q)_(j_k+|i|-1)
//!               * prod_{r,s=1..l} 1/(q (x_r/x_s) q^(j_r-j_s); q)_(i_r-j_r)
//!               * (-1)^(|i|-|j|) * q^C(|i|-|j|,2)
//!
//! Family C (parameters q, x_1..x_l):
//!
//!   M\[C\](i; j) = prod_{r,s=1..l} 1/[ (q (x_r/x_s) q^(j_r-j_s); q)_(i_r-j_r)
//!                                  * (q x_r x_s q^(j_r+j_s); q)_(i_r-j_r) ]
//!
//!   M*\[C\](i; j) = prod_{r,s=1..l} 1/[ (q (x_r/x_s) q^(j_r-j_s); q)_(i_r-j_r)
//!                                   * (x_r x_s q^(j_r+i_s); q)_(i_r-j_r) ]
//!               * prod_{1<=r<s<=l} (1 - x_r x_s q^(j_r+j_s))
//!                                / (1 - x_r x_s q^(i_r+i_s))
//!               * (-1)^(|i|-|j|) * q^C(|i|-|j|,2)
//!
//! The mixed exponent j_r + i_s in the second base of M*\[C\] is
//! intentional (column entry for r, row entry for s): the inversion
//! test suite fails by rank 2 under either symmetric variant j_r + j_s
//! or i_r + j_s, and passes as written.
//!
//! # Support convention
//! Off-support entries short-circuit to 0 before any factor is
//! evaluated. This realizes the usual convention that a reciprocal
//! 1/(q; q)_n with n < 0 kills the term, without ever dividing by a
//! detected pole. On support, every Pochhammer subscript in a
//! denominator is >= 0; the only negative subscript anywhere is
//! (a q x_k/x_l; q)_(j_k+|i|-1) in M*\[A\] at i = j = 0, a numerator
//! factor handled by the negative-subscript extension in `qfield`.
//!
//! # Admissibility
//! Parameters are admissible on a box when no denominator of any
//! on-support entry vanishes there. `admissibility` scans every cell of
//! both matrices eagerly and returns the full witness list; samplers
//! and checkers gate on it so that evaluation never crashes mid-block.
//!
//! # Edge cases
//! * i = j makes every subscript in the double products 0 and the sign
//!   factor 1, so diagonal entries are reciprocals of plain Pochhammer
//!   products; M(i;i) * M*(i;i) = 1;
//! * family A entries depend on x only through ratios, so scaling every
//!   x_k by a common nonzero c leaves them unchanged; family C entries
//!   contain the products x_r * x_s and do change.

use std::fmt;

use rayon::prelude::*;

use crate::error::Error;
use crate::lattice::{box_enumerate, IndexBox, MultiIndex};
use crate::qfield::{choose2, qpoch, qpow, Rational};
use crate::Result;

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

/// Family tag for everything downstream: matrices, pairs, reports.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Group {
    A,
    C,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::A => write!(f, "A"),
            Group::C => write!(f, "C"),
        }
    }
}

fn validate_common(q: &Rational, x: &[Rational]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::DomainError {
            detail: "rank must be >= 1 (empty x vector)".into(),
        });
    }
    if q.is_zero() || q.is_one() || (-q).is_one() {
        return Err(Error::DomainError {
            detail: format!("q must avoid {{0, 1, -1}}, got {q}"),
        });
    }
    if x.iter().any(Rational::is_zero) {
        return Err(Error::DomainError {
            detail: "every x_k must be nonzero".into(),
        });
    }
    Ok(())
}

/// Parameters (q, a, x_1..x_l) of family A.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupParamsA {
    q: Rational,
    a: Rational,
    x: Vec<Rational>,
}

impl GroupParamsA {
    /// Validates q outside {0, 1, -1} and every x_k nonzero. Box-level
    /// admissibility is a separate, explicit scan.
    pub fn new(q: Rational, a: Rational, x: Vec<Rational>) -> Result<Self> {
        validate_common(&q, &x)?;
        Ok(GroupParamsA { q, a, x })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }
}

/// Parameters (q, x_1..x_l) of family C.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupParamsC {
    q: Rational,
    x: Vec<Rational>,
}

impl GroupParamsC {
    pub fn new(q: Rational, x: Vec<Rational>) -> Result<Self> {
        validate_common(&q, &x)?;
        Ok(GroupParamsC { q, x })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }
}

/// Either family's parameter set; lets pair and verification machinery
/// stay generic while the entry formulas remain family-specific.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Params {
    A(GroupParamsA),
    C(GroupParamsC),
}

impl Params {
    pub fn group(&self) -> Group {
        match self {
            Params::A(_) => Group::A,
            Params::C(_) => Group::C,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Params::A(p) => p.rank(),
            Params::C(p) => p.rank(),
        }
    }

    pub fn q(&self) -> &Rational {
        match self {
            Params::A(p) => p.q(),
            Params::C(p) => p.q(),
        }
    }

    pub fn x(&self) -> &[Rational] {
        match self {
            Params::A(p) => p.x(),
            Params::C(p) => p.x(),
        }
    }

    /// Entry of M at (i, j) for whichever family these parameters are.
    pub fn m_entry(&self, i: &MultiIndex, j: &MultiIndex) -> Result<Rational> {
        match self {
            Params::A(p) => m_entry_a(i, j, p),
            Params::C(p) => m_entry_c(i, j, p),
        }
    }

    /// Entry of M* at (i, j) for whichever family these parameters are.
    pub fn mstar_entry(&self, i: &MultiIndex, j: &MultiIndex) -> Result<Rational> {
        match self {
            Params::A(p) => mstar_entry_a(i, j, p),
            Params::C(p) => mstar_entry_c(i, j, p),
        }
    }

    /// Space-separated "key=value" rendering used by block headers and
    /// report parameter lines, e.g. "q=1/2 a=1/3 x=1/3,2/5".
    pub fn render(&self) -> String {
        fn xs(x: &[Rational]) -> String {
            x.iter()
                .map(Rational::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            Params::A(p) => format!("q={} a={} x={}", p.q, p.a, xs(&p.x)),
            Params::C(p) => format!("q={} x={}", p.q, xs(&p.x)),
        }
    }
}

// ---------------------------------------------------------------------------
// Entry evaluation
// ---------------------------------------------------------------------------

/// Checks i, j, and the parameter rank agree, and returns Some(()) when
/// the cell is on support (j <= i componentwise), None when the entry
/// is the structural 0.
fn cell_support(i: &MultiIndex, j: &MultiIndex, rank: usize) -> Result<Option<()>> {
    if i.rank() != rank {
        return Err(Error::RankMismatch {
            left: i.rank(),
            right: rank,
        });
    }
    Ok(if j.leq(i)? { Some(()) } else { None })
}

/// Divides acc by a denominator factor, reporting a pole with the given
/// description when the factor is zero.
fn div_factor(
    acc: Rational,
    den: Rational,
    describe: impl FnOnce() -> String,
) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::PoleEncountered { factor: describe() });
    }
    acc.checked_div(&den)
}

/// (-1)^d * q^C(d,2) with d = |i| - |j| >= 0 on support.
fn sign_weight(q: &Rational, d: i64) -> Result<Rational> {
    let v = qpow(q, choose2(d))?;
    Ok(if d % 2 == 1 { -v } else { v })
}

/// Entry of M for family A at (i, j).
pub fn m_entry_a(i: &MultiIndex, j: &MultiIndex, p: &GroupParamsA) -> Result<Rational> {
    if cell_support(i, j, p.rank())?.is_none() {
        return Ok(Rational::zero());
    }
    let l = p.rank();
    let (q, x) = (&p.q, &p.x);
    let wj = j.weight();
    let mut acc = Rational::one();
    for r in 0..l {
        for s in 0..l {
            let base = q * x[r].checked_div(&x[s])? * qpow(q, j.get(r) - j.get(s))?;
            let den = qpoch(&base, q, i.get(r) - j.get(r))?;
            acc = div_factor(acc, den, || {
                format!(
                    "M[A] i={i} j={j}: ratio factor ({base}; {q})_{n} = 0 at r={r1} s={s1}",
                    n = i.get(r) - j.get(r),
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
        }
    }
    for k in 0..l {
        let base = &p.a * q * x[k].checked_div(&x[l - 1])?;
        let den = qpoch(&base, q, i.get(k) + wj)?;
        acc = div_factor(acc, den, || {
            format!(
                "M[A] i={i} j={j}: a-line factor ({base}; {q})_{n} = 0 at k={k1}",
                n = i.get(k) + wj,
                k1 = k + 1
            )
        })?;
    }
    Ok(acc)
}

/// Entry of M* for family A at (i, j).
pub fn mstar_entry_a(i: &MultiIndex, j: &MultiIndex, p: &GroupParamsA) -> Result<Rational> {
    if cell_support(i, j, p.rank())?.is_none() {
        return Ok(Rational::zero());
    }
    let l = p.rank();
    let (q, x) = (&p.q, &p.x);
    let (wi, wj) = (i.weight(), j.weight());
    let mut acc = Rational::one();
    for k in 0..l {
        let ratio = x[k].checked_div(&x[l - 1])?;
        acc *= Rational::one() - &p.a * &ratio * qpow(q, i.get(k) + wi)?;
    }
    for k in 0..l {
        let base = &p.a * q * x[k].checked_div(&x[l - 1])?;
        // subscript j_k + |i| - 1 is negative exactly at i = j = 0;
        // the extension is a numerator factor but can itself pole
        acc *= qpoch(&base, q, j.get(k) + wi - 1)
            .map_err(|e| e.at_cell(&format!("M*[A] i={i} j={j}")))?;
    }
    for r in 0..l {
        for s in 0..l {
            let base = q * x[r].checked_div(&x[s])? * qpow(q, j.get(r) - j.get(s))?;
            let den = qpoch(&base, q, i.get(r) - j.get(r))?;
            acc = div_factor(acc, den, || {
                format!(
                    "M*[A] i={i} j={j}: ratio factor ({base}; {q})_{n} = 0 at r={r1} s={s1}",
                    n = i.get(r) - j.get(r),
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
        }
    }
    Ok(acc * sign_weight(q, wi - wj)?)
}

/// Entry of M for family C at (i, j).
pub fn m_entry_c(i: &MultiIndex, j: &MultiIndex, p: &GroupParamsC) -> Result<Rational> {
    if cell_support(i, j, p.rank())?.is_none() {
        return Ok(Rational::zero());
    }
    let l = p.rank();
    let (q, x) = (&p.q, &p.x);
    let mut acc = Rational::one();
    for r in 0..l {
        for s in 0..l {
            let n = i.get(r) - j.get(r);
            let ratio_base = q * x[r].checked_div(&x[s])? * qpow(q, j.get(r) - j.get(s))?;
            let den = qpoch(&ratio_base, q, n)?;
            acc = div_factor(acc, den, || {
                format!(
                    "M[C] i={i} j={j}: ratio factor ({ratio_base}; {q})_{n} = 0 at r={r1} s={s1}",
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
            let coupling_base = q * &x[r] * &x[s] * qpow(q, j.get(r) + j.get(s))?;
            let den = qpoch(&coupling_base, q, n)?;
            acc = div_factor(acc, den, || {
                format!(
                    "M[C] i={i} j={j}: coupling factor ({coupling_base}; {q})_{n} = 0 at r={r1} s={s1}",
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
        }
    }
    Ok(acc)
}

/// Entry of M* for family C at (i, j).
pub fn mstar_entry_c(i: &MultiIndex, j: &MultiIndex, p: &GroupParamsC) -> Result<Rational> {
    if cell_support(i, j, p.rank())?.is_none() {
        return Ok(Rational::zero());
    }
    let l = p.rank();
    let (q, x) = (&p.q, &p.x);
    let (wi, wj) = (i.weight(), j.weight());
    let mut acc = Rational::one();
    for r in 0..l {
        for s in 0..l {
            let n = i.get(r) - j.get(r);
            let ratio_base = q * x[r].checked_div(&x[s])? * qpow(q, j.get(r) - j.get(s))?;
            let den = qpoch(&ratio_base, q, n)?;
            acc = div_factor(acc, den, || {
                format!(
                    "M*[C] i={i} j={j}: ratio factor ({ratio_base}; {q})_{n} = 0 at r={r1} s={s1}",
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
            // mixed exponent: column entry j_r with row entry i_s
            let mixed_base = &x[r] * &x[s] * qpow(q, j.get(r) + i.get(s))?;
            let den = qpoch(&mixed_base, q, n)?;
            acc = div_factor(acc, den, || {
                format!(
                    "M*[C] i={i} j={j}: coupling factor ({mixed_base}; {q})_{n} = 0 at r={r1} s={s1}",
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
        }
    }
    for r in 0..l {
        for s in (r + 1)..l {
            let num = Rational::one() - &x[r] * &x[s] * qpow(q, j.get(r) + j.get(s))?;
            let den = Rational::one() - &x[r] * &x[s] * qpow(q, i.get(r) + i.get(s))?;
            acc = div_factor(acc * num, den, || {
                format!(
                    "M*[C] i={i} j={j}: bracket (1 - x_r x_s q^(i_r+i_s)) = 0 at r={r1} s={s1}",
                    r1 = r + 1,
                    s1 = s + 1
                )
            })?;
        }
    }
    Ok(acc * sign_weight(q, wi - wj)?)
}

// ---------------------------------------------------------------------------
// Blocks and admissibility
// ---------------------------------------------------------------------------

/// Which of the two inverse matrices a block holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixKind {
    M,
    MStar,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixKind::M => write!(f, "M"),
            MatrixKind::MStar => write!(f, "Mstar"),
        }
    }
}

/// Dense square block of one matrix over a box, rows and columns in
/// lexicographic index order. Immutable once assembled.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixBlock {
    kind: MatrixKind,
    params: Params,
    upper: MultiIndex,
    indices: Vec<MultiIndex>,
    entries: Vec<Rational>,
}

impl MatrixBlock {
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn group(&self) -> Group {
        self.params.group()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn upper(&self) -> &MultiIndex {
        &self.upper
    }

    /// Side length: the number of indices in the box.
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Row/column labels in enumeration order.
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// Entry by lexicographic (row, col) position.
    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.indices.len() + col]
    }

    /// Entry by multi-index labels; None when either label is outside
    /// the box.
    pub fn get_at(&self, i: &MultiIndex, j: &MultiIndex) -> Option<&Rational> {
        let b = IndexBox::new(self.upper.clone());
        Some(self.get(b.position(i)?, b.position(j)?))
    }

    /// Golden-file serialization: one header line
    /// `matrix=<M|Mstar> group=<A|C> rank=<l> box=<N> <params>`, then
    /// the dense entries row-major, one space-separated line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "matrix={} group={} rank={} box={} {}\n",
            self.kind,
            self.group(),
            self.params.rank(),
            self.upper,
            self.params.render()
        );
        let dim = self.dim();
        for row in 0..dim {
            let line = (0..dim)
                .map(|col| self.get(row, col).to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Assembles the dense blocks of M and M* over the box [0, upper].
/// Cells are evaluated in parallel; placement (and any reported error)
/// is deterministic. Callers wanting a witness list instead of a first
/// error should run `admissibility` beforehand.
pub fn matrix_block(p: &Params, upper: &MultiIndex) -> Result<(MatrixBlock, MatrixBlock)> {
    if upper.rank() != p.rank() {
        return Err(Error::RankMismatch {
            left: upper.rank(),
            right: p.rank(),
        });
    }
    let indices: Vec<MultiIndex> = box_enumerate(upper).collect();
    let dim = indices.len();
    let assemble = |kind: MatrixKind| -> Result<MatrixBlock> {
        let cells: Vec<Result<Rational>> = (0..dim * dim)
            .into_par_iter()
            .map(|flat| {
                let (i, j) = (&indices[flat / dim], &indices[flat % dim]);
                match kind {
                    MatrixKind::M => p.m_entry(i, j),
                    MatrixKind::MStar => p.mstar_entry(i, j),
                }
            })
            .collect();
        // surface the lexicographically first error, if any
        let mut entries = Vec::with_capacity(dim * dim);
        for cell in cells {
            entries.push(cell?);
        }
        Ok(MatrixBlock {
            kind,
            params: p.clone(),
            upper: upper.clone(),
            indices: indices.clone(),
            entries,
        })
    };
    Ok((assemble(MatrixKind::M)?, assemble(MatrixKind::MStar)?))
}

/// Scans every on-support cell of both matrices over the box and
/// returns all pole witnesses, in lexicographic (i, j) order; an empty
/// list means the parameters are admissible there.
pub fn admissibility(p: &Params, bbox: &IndexBox) -> Vec<Error> {
    let indices: Vec<MultiIndex> = bbox.iter().collect();
    let dim = indices.len();
    (0..dim * dim)
        .into_par_iter()
        .flat_map_iter(|flat| {
            let (i, j) = (&indices[flat / dim], &indices[flat % dim]);
            let mut found = Vec::new();
            if let Err(e) = p.m_entry(i, j) {
                found.push(e);
            }
            if let Err(e) = p.mstar_entry(i, j) {
                found.push(e);
            }
            found
        })
        .collect()
}

/// True when no denominator of either matrix vanishes over the box.
pub fn is_admissible(p: &Params, bbox: &IndexBox) -> bool {
    admissibility(p, bbox).is_empty()
}

// ---------------------------------------------------------------------------
