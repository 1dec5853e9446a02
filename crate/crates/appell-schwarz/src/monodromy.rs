//! Exact arithmetic for the monodromy group: the five circuit matrices,
//! membership in the block/parity congruence description, breadth-first
//! closure at desk scale, and a constructive word decomposition.
//!
//! Every group element is `i^e` times an integer matrix. The member shape is
//! `i^{-n1+n2} [[G, 0], [L, J2^{n1+n2}]]` with `G` in the Igusa group,
//! `(n1, n2)` in `(Z/2)^2`, and both row sums of `L` congruent to `n1`
//! mod 2. The scalar and the `(2,2)`-block determine `(n1, n2)` uniquely.

// index loops below mirror the matrix algebra
#![allow(clippy::needless_range_loop)]

use std::collections::HashSet;

use crate::error::{Error, Result};

/// A Gaussian integer with checked arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    fn add(self, o: GaussInt) -> Result<GaussInt> {
        Ok(GaussInt {
            re: self.re.checked_add(o.re).ok_or(Error::Overflow)?,
            im: self.im.checked_add(o.im).ok_or(Error::Overflow)?,
        })
    }

    fn mul(self, o: GaussInt) -> Result<GaussInt> {
        let a = self.re.checked_mul(o.re).ok_or(Error::Overflow)?;
        let b = self.im.checked_mul(o.im).ok_or(Error::Overflow)?;
        let c = self.re.checked_mul(o.im).ok_or(Error::Overflow)?;
        let d = self.im.checked_mul(o.re).ok_or(Error::Overflow)?;
        Ok(GaussInt {
            re: a.checked_sub(b).ok_or(Error::Overflow)?,
            im: c.checked_add(d).ok_or(Error::Overflow)?,
        })
    }

    /// Multiply by `i^e`.
    fn rot(self, e: u8) -> GaussInt {
        match e % 4 {
            0 => self,
            1 => GaussInt {
                re: -self.im,
                im: self.re,
            },
            2 => GaussInt {
                re: -self.re,
                im: -self.im,
            },
            _ => GaussInt {
                re: self.im,
                im: -self.re,
            },
        }
    }
}

/// `i^e` times a 4x4 Gaussian-integer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianMatrix {
    pub phase: u8,
    pub entries: [[GaussInt; 4]; 4],
}

impl GaussianMatrix {
    pub fn identity() -> Self {
        let mut entries = [[GaussInt::ZERO; 4]; 4];
        for (k, row) in entries.iter_mut().enumerate() {
            row[k] = GaussInt::new(1, 0);
        }
        GaussianMatrix { phase: 0, entries }
    }

    pub fn from_integers(phase: u8, m: [[i64; 4]; 4]) -> Self {
        let mut entries = [[GaussInt::ZERO; 4]; 4];
        for r in 0..4 {
            for cidx in 0..4 {
                entries[r][cidx] = GaussInt::new(m[r][cidx], 0);
            }
        }
        GaussianMatrix {
            phase: phase % 4,
            entries,
        }
    }

    /// The true matrix entries with the scalar folded in.
    pub fn resolved(&self) -> [[GaussInt; 4]; 4] {
        let mut out = self.entries;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e = e.rot(self.phase);
            }
        }
        out
    }

    /// Canonical key for hashing: the resolved entries.
    pub fn key(&self) -> [i64; 32] {
        let r = self.resolved();
        let mut k = [0i64; 32];
        for i in 0..4 {
            for j in 0..4 {
                k[8 * i + 2 * j] = r[i][j].re;
                k[8 * i + 2 * j + 1] = r[i][j].im;
            }
        }
        k
    }

    pub fn mul(&self, o: &GaussianMatrix) -> Result<GaussianMatrix> {
        let mut entries = [[GaussInt::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = GaussInt::ZERO;
                for k in 0..4 {
                    acc = acc.add(self.entries[i][k].mul(o.entries[k][j])?)?;
                }
                entries[i][j] = acc;
            }
        }
        Ok(GaussianMatrix {
            phase: (self.phase + o.phase) % 4,
            entries,
        })
    }

    /// Determinant of the entry matrix (the scalar contributes `i^{4e} = 1`).
    /// Products of three entries must stay inside checked `i64` range.
    pub fn det(&self) -> Result<GaussInt> {
        fn det3(m: &[[GaussInt; 4]; 4], rows: [usize; 3], cols: [usize; 3]) -> Result<GaussInt> {
            let e = |r: usize, c: usize| m[rows[r]][cols[c]];
            let mut acc = e(0, 0).mul(e(1, 1).mul(e(2, 2))?)?;
            acc = acc.add(e(0, 1).mul(e(1, 2).mul(e(2, 0))?)?)?;
            acc = acc.add(e(0, 2).mul(e(1, 0).mul(e(2, 1))?)?)?;
            acc = acc.add(e(0, 2).mul(e(1, 1).mul(e(2, 0))?)?.rot(2))?;
            acc = acc.add(e(0, 1).mul(e(1, 0).mul(e(2, 2))?)?.rot(2))?;
            acc = acc.add(e(0, 0).mul(e(1, 2).mul(e(2, 1))?)?.rot(2))?;
            Ok(acc)
        }
        let m = &self.entries;
        let mut acc = GaussInt::ZERO;
        for j in 0..4 {
            let cols: [usize; 3] = match j {
                0 => [1, 2, 3],
                1 => [0, 2, 3],
                2 => [0, 1, 3],
                _ => [0, 1, 2],
            };
            let minor = det3(m, [1, 2, 3], cols)?;
            let term = m[0][j].mul(minor)?;
            acc = acc.add(if j % 2 == 0 { term } else { term.rot(2) })?;
        }
        Ok(acc)
    }

    /// Inverse of a member (integer part in `SL_4(Z)` after peeling the
    /// scalar): the adjugate divided by the determinant.
    pub fn inverse(&self) -> Result<GaussianMatrix> {
        let det = self.det()?;
        let unit = match (det.re, det.im) {
            (1, 0) => 0u8,
            (0, 1) => 3, // multiply adjugate by i^3 to divide by i
            (-1, 0) => 2,
            (0, -1) => 1,
            _ => {
                return Err(Error::Domain(format!(
                    "matrix determinant {det:?} is not a unit; no exact inverse"
                )))
            }
        };
        let mut adj = [[GaussInt::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let rows: Vec<usize> = (0..4).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..4).filter(|&c| c != i).collect();
                // 3x3 minor determinant
                let e = |r: usize, c: usize| self.entries[rows[r]][cols[c]];
                let mut m3 = e(0, 0).mul(e(1, 1).mul(e(2, 2))?)?;
                m3 = m3.add(e(0, 1).mul(e(1, 2).mul(e(2, 0))?)?)?;
                m3 = m3.add(e(0, 2).mul(e(1, 0).mul(e(2, 1))?)?)?;
                m3 = m3.add(e(0, 2).mul(e(1, 1).mul(e(2, 0))?)?.rot(2))?;
                m3 = m3.add(e(0, 1).mul(e(1, 0).mul(e(2, 2))?)?.rot(2))?;
                m3 = m3.add(e(0, 0).mul(e(1, 2).mul(e(2, 1))?)?.rot(2))?;
                adj[i][j] = if (i + j) % 2 == 0 { m3 } else { m3.rot(2) };
            }
        }
        for row in adj.iter_mut() {
            for e in row.iter_mut() {
                *e = e.rot(unit);
            }
        }
        // phase inverts: (i^p)^{-1} = i^{4-p}
        Ok(GaussianMatrix {
            phase: (4 - self.phase % 4) % 4,
            entries: adj,
        })
    }
}

/// Generator tokens for words over `M1..M5` and their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenToken {
    /// Generator index in `1..=5`.
    pub index: u8,
    pub inverse: bool,
}

impl GenToken {
    pub fn gen(index: u8) -> Self {
        GenToken {
            index,
            inverse: false,
        }
    }
    pub fn inv(index: u8) -> Self {
        GenToken {
            index,
            inverse: true,
        }
    }
}

impl std::fmt::Display for GenToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.inverse {
            write!(f, "M{}^-1", self.index)
        } else {
            write!(f, "M{}", self.index)
        }
    }
}

/// The five circuit matrices.
pub fn generators() -> [GaussianMatrix; 5] {
    [
        GaussianMatrix::from_integers(
            1,
            [[0, 1, 0, 0], [-1, 0, 0, 0], [-1, 0, 0, 1], [0, 1, -1, 0]],
        ),
        GaussianMatrix::from_integers(
            1,
            [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        ),
        GaussianMatrix::from_integers(0, [[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        GaussianMatrix::from_integers(
            0,
            [[2, 1, 0, 0], [-1, 0, 0, 0], [-1, -1, 1, 0], [0, 0, 0, 1]],
        ),
        GaussianMatrix::from_integers(0, [[2, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
    ]
}

/// The complex change-of-basis matrix of the modified solution vector, as
/// printed in [`crate::schwarz::q_matrix`].
pub fn q_matrix() -> [[num_complex::Complex64; 4]; 4] {
    crate::schwarz::q_matrix()
}

fn token_matrix(t: GenToken) -> Result<GaussianMatrix> {
    let g = generators();
    let m = g
        .get((t.index - 1) as usize)
        .ok_or_else(|| Error::Domain(format!("no generator M{}", t.index)))?;
    if t.inverse {
        m.inverse()
    } else {
        Ok(*m)
    }
}

/// Evaluate a word left-to-right.
pub fn evaluate(word: &[GenToken]) -> Result<GaussianMatrix> {
    let mut acc = GaussianMatrix::identity();
    for t in word {
        acc = acc.mul(&token_matrix(*t)?)?;
    }
    Ok(acc)
}

/// Witness data for membership: the block decomposition
/// `g = i^{-n1+n2} [[G, 0], [L, J2^{n1+n2}]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemberWitness {
    pub n1: u8,
    pub n2: u8,
    pub g_block: [[i64; 2]; 2],
    pub l_block: [[i64; 2]; 2],
}

fn j2_power(k: u8) -> [[i64; 2]; 2] {
    match k % 4 {
        0 => [[1, 0], [0, 1]],
        1 => [[0, -1], [1, 0]],
        2 => [[-1, 0], [0, -1]],
        _ => [[0, 1], [-1, 0]],
    }
}

fn det2(m: [[i64; 2]; 2]) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Igusa-group membership for the `(1,1)`-block: determinant one and
/// `g11 g12 = g21 g22 = 0 mod 2`.
fn igusa_block(m: [[i64; 2]; 2]) -> bool {
    det2(m) == 1 && (m[0][0] * m[0][1]).rem_euclid(2) == 0 && (m[1][0] * m[1][1]).rem_euclid(2) == 0
}

/// Membership test with witness extraction.
pub fn is_in_m(g: &GaussianMatrix) -> Option<MemberWitness> {
    for n1 in 0..2u8 {
        for n2 in 0..2u8 {
            // h = i^{n1 - n2} g must be the plain block matrix
            let rot = (4 + n1 - n2) % 4;
            let resolved = g.resolved();
            let mut h = [[GaussInt::ZERO; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    h[i][j] = resolved[i][j].rot(rot);
                }
            }
            if h.iter().flatten().any(|e| e.im != 0) {
                continue;
            }
            let m: [[i64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| h[i][j].re));
            // (1,2)-block must vanish
            if m[0][2] != 0 || m[0][3] != 0 || m[1][2] != 0 || m[1][3] != 0 {
                continue;
            }
            let g_block = [[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
            let l_block = [[m[2][0], m[2][1]], [m[3][0], m[3][1]]];
            let d_block = [[m[2][2], m[2][3]], [m[3][2], m[3][3]]];
            if d_block != j2_power(n1 + n2) {
                continue;
            }
            if !igusa_block(g_block) {
                continue;
            }
            let r1 = (l_block[0][0] + l_block[0][1]).rem_euclid(2);
            let r2 = (l_block[1][0] + l_block[1][1]).rem_euclid(2);
            if r1 != i64::from(n1) || r2 != i64::from(n1) {
                continue;
            }
            return Some(MemberWitness {
                n1,
                n2,
                g_block,
                l_block,
            });
        }
    }
    None
}

// The radius-8 ball measures 1,350,351 elements; the cap guards runaway
// enumeration while leaving room for the full desk-scale check.
const BFS_CAPACITY: usize = 2_000_000;

/// All products of generators and inverses up to the given word length,
/// deduplicated as group elements and returned in a canonical order.
pub fn bfs_closure(max_len: u32) -> Result<Vec<GaussianMatrix>> {
    if max_len > 10 {
        return Err(Error::Domain("closure word length is capped at 10".into()));
    }
    let gens = generators();
    let mut step: Vec<GaussianMatrix> = Vec::with_capacity(10);
    for g in &gens {
        step.push(*g);
        step.push(g.inverse()?);
    }
    // compact dedup keys: entries stay tiny at desk scale
    let small_key = |m: &GaussianMatrix| -> Result<[i16; 32]> {
        let k = m.key();
        let mut out = [0i16; 32];
        for (dst, src) in out.iter_mut().zip(k.iter()) {
            *dst = i16::try_from(*src).map_err(|_| Error::Overflow)?;
        }
        Ok(out)
    };
    let id = GaussianMatrix::identity();
    let mut seen: HashSet<[i16; 32]> = HashSet::new();
    seen.insert(small_key(&id)?);
    let mut all: Vec<GaussianMatrix> = vec![id];
    let mut frontier: Vec<GaussianMatrix> = vec![id];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &step {
                let h = g.mul(s)?;
                if seen.len() >= BFS_CAPACITY {
                    return Err(Error::Capacity(format!(
                        "closure exceeded {BFS_CAPACITY} elements"
                    )));
                }
                if seen.insert(small_key(&h)?) {
                    all.push(h);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    all.sort_by_key(|m| m.key());
    Ok(all)
}

// Words for the translation generators [[E,0],[L,E]]: left-multiplying by
// one of these adds its L-block. Tokens read left to right as the product.
fn h1_word(invert: bool) -> Vec<GenToken> {
    // H1 = M4 M5^{-1}, L = [[-1,-1],[0,0]]
    if invert {
        vec![GenToken::gen(5), GenToken::inv(4)]
    } else {
        vec![GenToken::gen(4), GenToken::inv(5)]
    }
}

fn h2sq_word(invert: bool) -> Vec<GenToken> {
    // ((M3 M5)^2 M1 M2)^2 = H2^2 with L = 2*[[0,-1],[-1,0]]: the sign in
    // H2 = -(M3 M5)^2 M1 M2 squares away
    let a = vec![
        GenToken::gen(3),
        GenToken::gen(5),
        GenToken::gen(3),
        GenToken::gen(5),
        GenToken::gen(1),
        GenToken::gen(2),
    ];
    let mut w: Vec<GenToken> = a.clone();
    w.extend(a);
    if invert {
        w.reverse();
        for t in &mut w {
            t.inverse = !t.inverse;
        }
    }
    w
}

fn h3_word(invert: bool) -> Vec<GenToken> {
    // M2 H1^{±1} M2^{-1}, L = ±[[0,0],[-1,1]]
    let mut w = vec![GenToken::gen(2)];
    w.extend(h1_word(invert));
    w.push(GenToken::inv(2));
    w
}

fn h4_word(invert: bool) -> Vec<GenToken> {
    // (M3 M5^{-1}) H1^{±1} (M3 M5^{-1})^{-1}, L = ±[[-1,1],[0,0]]
    let mut w = vec![GenToken::gen(3), GenToken::inv(5)];
    w.extend(h1_word(invert));
    w.push(GenToken::gen(5));
    w.push(GenToken::inv(3));
    w
}

fn repeat_word(base: fn(bool) -> Vec<GenToken>, count: i64) -> Vec<GenToken> {
    let mut w = Vec::new();
    let inv = count < 0;
    for _ in 0..count.unsigned_abs() {
        w.extend(base(inv));
    }
    w
}

/// Decompose a member into a word over the generators; evaluating the word
/// reproduces the input exactly.
///
/// Reduction order: clear the scalar/(2,2)-block with `M1`, `M2`; bring the
/// `(1,1)`-block to the identity by even row translations (`M3`) and signed
/// row swaps (`M3 M5`); expand the leftover translation block over the four
/// translation generators and cancel it.
pub fn decompose(g: &GaussianMatrix) -> Result<Vec<GenToken>> {
    if is_in_m(g).is_none() {
        return Err(Error::NotMember);
    }
    let mut word = Vec::new();
    decompose_blocks(g, &mut word)?;
    Ok(word)
}

fn decompose_blocks(g: &GaussianMatrix, out: &mut Vec<GenToken>) -> Result<()> {
    let mut blocks: Vec<Vec<GenToken>> = Vec::new();
    let mut cur = *g;
    let mut apply = |tokens: Vec<GenToken>, cur: &mut GaussianMatrix| -> Result<()> {
        if tokens.is_empty() {
            return Ok(());
        }
        let w = evaluate(&tokens)?;
        *cur = w.mul(cur)?;
        blocks.push(tokens);
        Ok(())
    };

    let witness = is_in_m(&cur).ok_or(Error::NotMember)?;
    if witness.n1 == 1 {
        apply(vec![GenToken::gen(1)], &mut cur)?;
    }
    if witness.n2 == 1 {
        apply(vec![GenToken::gen(2)], &mut cur)?;
    }

    let t2_step = |k: i64| -> Vec<GenToken> {
        (0..k.unsigned_abs())
            .map(|_| {
                if k > 0 {
                    GenToken::gen(3)
                } else {
                    GenToken::inv(3)
                }
            })
            .collect()
    };
    let jswap = vec![GenToken::gen(3), GenToken::gen(5)];
    let read_g = |m: &GaussianMatrix| -> [[i64; 2]; 2] {
        let r = m.resolved();
        [[r[0][0].re, r[0][1].re], [r[1][0].re, r[1][1].re]]
    };
    let mut guard = 0;
    loop {
        let gb = read_g(&cur);
        let (a, cl) = (gb[0][0], gb[1][0]);
        if cl == 0 {
            break;
        }
        let k = (-(a as f64) / (2.0 * cl as f64)).round() as i64;
        if k != 0 {
            apply(t2_step(k), &mut cur)?;
        }
        apply(jswap.clone(), &mut cur)?;
        guard += 1;
        if guard > 128 {
            return Err(Error::NonConvergent(
                "row reduction failed to terminate".into(),
            ));
        }
    }
    if read_g(&cur)[0][0] == -1 {
        apply(jswap.clone(), &mut cur)?;
        apply(jswap.clone(), &mut cur)?;
    }
    let gb = read_g(&cur);
    if gb[0][0] != 1 || gb[1][1] != 1 || gb[0][1].rem_euclid(2) != 0 {
        return Err(Error::NonConvergent(
            "unexpected shape after row reduction".into(),
        ));
    }
    if gb[0][1] != 0 {
        apply(t2_step(-gb[0][1] / 2), &mut cur)?;
    }

    let w = is_in_m(&cur).ok_or(Error::NotMember)?;
    let l = w.l_block;
    let c3 = l[1][1];
    let c2 = -(l[1][0] + l[1][1]);
    let c1 = -(l[0][0] + l[0][1] - l[1][0] - l[1][1]) / 2;
    let c4 = -l[0][0] - c1;
    if c2.rem_euclid(2) != 0 {
        return Err(Error::NotMember);
    }
    apply(repeat_word(h1_word, -c1), &mut cur)?;
    apply(repeat_word(h2sq_word, -c2 / 2), &mut cur)?;
    apply(repeat_word(h3_word, -c3), &mut cur)?;
    apply(repeat_word(h4_word, -c4), &mut cur)?;

    if cur.key() != GaussianMatrix::identity().key() {
        return Err(Error::NonConvergent(
            "decomposition did not reach the identity".into(),
        ));
    }

    // cur_final = W_m ... W_1 g = E, hence g = W_1^{-1} ... W_m^{-1}
    out.clear();
    for block in blocks {
        let mut inv: Vec<GenToken> = block.into_iter().rev().collect();
        for t in &mut inv {
            t.inverse = !t.inverse;
        }
        out.extend(inv);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Igusa group utilities
// ---------------------------------------------------------------------------

/// An element of `SL_2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IgusaElement {
    pub m: [[i64; 2]; 2],
}

impl IgusaElement {
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        if det2(m) != 1 {
            return Err(Error::Domain("determinant must be 1".into()));
        }
        Ok(IgusaElement { m })
    }
}

/// Membership by the mod-2 parity predicate.
pub fn igusa_membership(g: &IgusaElement) -> bool {
    igusa_block(g.m)
}

/// All six elements of `SL_2(Z/2)`.
fn sl2_f2() -> Vec<[[u8; 2]; 2]> {
    let mut out = Vec::new();
    for bits in 0..16u8 {
        let m = [
            [bits & 1, (bits >> 1) & 1],
            [(bits >> 2) & 1, (bits >> 3) & 1],
        ];
        let det = (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2;
        if det == 1 {
            out.push(m);
        }
    }
    out
}

/// Index of the Igusa group in `SL_2(Z)`, by enumerating its image inside
/// `SL_2(Z/2)`.
pub fn igusa_index() -> usize {
    let all = sl2_f2();
    let image: Vec<_> = all
        .iter()
        .filter(|m| (m[0][0] * m[0][1]) % 2 == 0 && (m[1][0] * m[1][1]) % 2 == 0)
        .collect();
    all.len() / image.len()
}

/// Index of the level-2 principal congruence subgroup inside the Igusa
/// group: the order of the Igusa group's image in `SL_2(Z/2)`.
pub fn gamma2_index_in_igusa() -> usize {
    sl2_f2()
        .iter()
        .filter(|m| (m[0][0] * m[0][1]) % 2 == 0 && (m[1][0] * m[1][1]) % 2 == 0)
        .count()
}
