//! The `(Z2)^n` action on `T^n` defined by a Bott matrix, its affine lift,
//! induced actions on the base of a Seifert form, and fixed-point sets.
//!
//! Generator `g_i` negates `z_i` and conjugates every `z_j` with
//! `A[i][j] = 1`. Every group element is therefore a product of per-circle
//! maps drawn from `{z, -z, conj z, -conj z}`, which is what
//! [`CoordinateMap`] stores as two bit masks.
//!
//! Fixed points are exact. A coordinate where both sides conjugate (or both
//! don't) is either free or has no solution; a coordinate where exactly one
//! side conjugates forces `z^2 = +-1`, so its value is a 4th root of unity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::BottMatrix;
use crate::seifert::{block_type, BlockType, SeifertForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordinateOp {
    Id,
    Neg,
    Conj,
    NegConj,
}

impl CoordinateOp {
    pub const ALL: [CoordinateOp; 4] = [
        CoordinateOp::Id,
        CoordinateOp::Neg,
        CoordinateOp::Conj,
        CoordinateOp::NegConj,
    ];

    pub fn from_bits(neg: bool, conj: bool) -> Self {
        match (neg, conj) {
            (false, false) => CoordinateOp::Id,
            (true, false) => CoordinateOp::Neg,
            (false, true) => CoordinateOp::Conj,
            (true, true) => CoordinateOp::NegConj,
        }
    }

    pub fn negates(self) -> bool {
        matches!(self, CoordinateOp::Neg | CoordinateOp::NegConj)
    }

    pub fn conjugates(self) -> bool {
        matches!(self, CoordinateOp::Conj | CoordinateOp::NegConj)
    }

    pub fn compose(self, other: Self) -> Self {
        Self::from_bits(
            self.negates() ^ other.negates(),
            self.conjugates() ^ other.conjugates(),
        )
    }

    pub fn apply_root(self, z: Root4) -> Root4 {
        let mut e = z.0;
        if self.conjugates() {
            e = (4 - e) % 4;
        }
        if self.negates() {
            e = (e + 2) % 4;
        }
        Root4(e)
    }

    /// Action on the circle point `exp(2 pi i x / denom)`, `x` in `0..denom`.
    /// `denom` must be even.
    pub fn apply_grid(self, x: u32, denom: u32) -> u32 {
        let mut x = x % denom;
        if self.conjugates() {
            x = (denom - x) % denom;
        }
        if self.negates() {
            x = (x + denom / 2) % denom;
        }
        x
    }

    pub fn name(self) -> &'static str {
        match self {
            CoordinateOp::Id => "Id",
            CoordinateOp::Neg => "Neg",
            CoordinateOp::Conj => "Conj",
            CoordinateOp::NegConj => "NegConj",
        }
    }
}

impl Mul for CoordinateOp {
    type Output = CoordinateOp;

    fn mul(self, rhs: Self) -> Self {
        self.compose(rhs)
    }
}

impl fmt::Display for CoordinateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A 4th root of unity `i^e`, stored by its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root4(u8);

impl Root4 {
    pub const ONE: Root4 = Root4(0);
    pub const I: Root4 = Root4(1);
    pub const MINUS_ONE: Root4 = Root4(2);
    pub const MINUS_I: Root4 = Root4(3);

    pub fn from_exponent(e: u8) -> Self {
        Root4(e % 4)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// Position on a circle sampled at `denom` points; `denom` must be a
    /// multiple of 4.
    pub fn grid_point(self, denom: u32) -> u32 {
        self.0 as u32 * denom / 4
    }
}

impl fmt::Display for Root4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

/// One map of circles per coordinate of `T^m`, `m <= 8`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinateMap {
    len: u8,
    neg: u8,
    conj: u8,
}

impl CoordinateMap {
    pub fn identity(len: usize) -> Self {
        assert!(len <= 8, "torus dimension {len} exceeds 8");
        CoordinateMap {
            len: len as u8,
            neg: 0,
            conj: 0,
        }
    }

    pub fn from_masks(len: usize, neg: u8, conj: u8) -> Self {
        let keep = if len >= 8 {
            0xff
        } else {
            (1u16 << len) as u8 - 1
        };
        CoordinateMap {
            len: len as u8,
            neg: neg & keep,
            conj: conj & keep,
        }
    }

    pub fn from_ops(ops: &[CoordinateOp]) -> Self {
        let mut out = CoordinateMap::identity(ops.len());
        for (j, op) in ops.iter().enumerate() {
            out.neg |= (op.negates() as u8) << j;
            out.conj |= (op.conjugates() as u8) << j;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn neg_mask(&self) -> u8 {
        self.neg
    }

    pub fn conj_mask(&self) -> u8 {
        self.conj
    }

    pub fn is_identity(&self) -> bool {
        self.neg == 0 && self.conj == 0
    }

    pub fn op(&self, j: usize) -> CoordinateOp {
        CoordinateOp::from_bits((self.neg >> j) & 1 == 1, (self.conj >> j) & 1 == 1)
    }

    pub fn ops(&self) -> Vec<CoordinateOp> {
        (0..self.len()).map(|j| self.op(j)).collect()
    }

    pub fn compose(&self, other: &CoordinateMap) -> Result<CoordinateMap> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(CoordinateMap {
            len: self.len,
            neg: self.neg ^ other.neg,
            conj: self.conj ^ other.conj,
        })
    }

    pub fn apply_grid(&self, x: &[u32], denom: u32) -> Vec<u32> {
        x.iter()
            .enumerate()
            .map(|(j, &v)| self.op(j).apply_grid(v, denom))
            .collect()
    }
}

impl fmt::Debug for CoordinateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.ops()).finish()
    }
}

impl Serialize for CoordinateMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for op in self.ops() {
            seq.serialize_element(op.name())?;
        }
        seq.end()
    }
}

fn check_row(a: &BottMatrix, i: usize) -> Result<()> {
    if i < a.size() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: i,
            size: a.size(),
        })
    }
}

/// Action of generator `g_i` (0-based row `i`).
pub fn generator_action(a: &BottMatrix, i: usize) -> Result<CoordinateMap> {
    check_row(a, i)?;
    Ok(CoordinateMap {
        len: a.size() as u8,
        neg: 1 << i,
        conj: a.row_mask(i),
    })
}

/// Product of the generators whose rows are set in `rows`.
pub fn deck_element(a: &BottMatrix, rows: u8) -> CoordinateMap {
    let n = a.size();
    let mut conj = 0u8;
    for i in 0..n {
        if (rows >> i) & 1 == 1 {
            conj ^= a.row_mask(i);
        }
    }
    CoordinateMap::from_masks(n, rows, conj)
}

/// Product of the generators listed in `rows` (0-based).
pub fn compose_subset(a: &BottMatrix, rows: &[usize]) -> Result<CoordinateMap> {
    let mut mask = 0u8;
    for &i in rows {
        check_row(a, i)?;
        mask ^= 1 << i;
    }
    Ok(deck_element(a, mask))
}

/// Affine lift of a generator to `R^m`: `x_j -> sign_j x_j + t_j` with
/// `t_j` in `{0, 1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineLift {
    len: u8,
    half: u8,
    flip: u8,
}

impl AffineLift {
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Translation in units of 1/2.
    pub fn translation_halves(&self) -> Vec<u8> {
        (0..self.len()).map(|j| (self.half >> j) & 1).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len())
            .map(|j| if (self.flip >> j) & 1 == 1 { -1 } else { 1 })
            .collect()
    }

    /// Image of the point `x / denom` reduced mod 1; `denom` must be even.
    pub fn apply_grid(&self, x: &[u32], denom: u32) -> Vec<u32> {
        x.iter()
            .enumerate()
            .map(|(j, &v)| {
                let v = v % denom;
                let v = if (self.flip >> j) & 1 == 1 {
                    (denom - v) % denom
                } else {
                    v
                };
                let t = if (self.half >> j) & 1 == 1 {
                    denom / 2
                } else {
                    0
                };
                (v + t) % denom
            })
            .collect()
    }
}

pub fn affine_lift(a: &BottMatrix, i: usize) -> Result<AffineLift> {
    let g = generator_action(a, i)?;
    Ok(AffineLift {
        len: g.len,
        half: g.neg,
        flip: g.conj,
    })
}

/// Action of the torus element selected by `v` (one flag per row of `C`) on
/// the base `T^(n-k)`: conjugation wherever `v . C` is 1.
pub fn induced_action(sf: &SeifertForm, v: &[bool]) -> Result<CoordinateMap> {
    if v.len() != sf.k() {
        return Err(Error::DimensionMismatch {
            expected: sf.k(),
            found: v.len(),
        });
    }
    let conj = sf
        .coupling()
        .iter()
        .zip(v)
        .filter(|(_, &on)| on)
        .fold(0u8, |acc, (&row, _)| acc ^ row);
    Ok(CoordinateMap::from_masks(sf.base_size(), 0, conj))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternEntry {
    Free,
    Point(Root4),
}

impl fmt::Display for PatternEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternEntry::Free => f.write_str("*"),
            PatternEntry::Point(z) => z.fmt(f),
        }
    }
}

/// A coordinate subtorus of `T^m`: free circles times fixed roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubtorusPattern(Vec<PatternEntry>);

impl SubtorusPattern {
    pub fn entries(&self) -> &[PatternEntry] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|e| **e == PatternEntry::Free).count()
    }

    pub fn contains_grid_point(&self, x: &[u32], denom: u32) -> bool {
        self.0.iter().zip(x).all(|(e, &v)| match e {
            PatternEntry::Free => true,
            PatternEntry::Point(z) => z.grid_point(denom) == v % denom,
        })
    }
}

impl fmt::Display for SubtorusPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (j, e) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            e.fmt(f)?;
        }
        f.write_str("]")
    }
}

impl Serialize for SubtorusPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for e in &self.0 {
            seq.serialize_element(&e.to_string())?;
        }
        seq.end()
    }
}

/// A connected component of a fixed set in the base manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    /// Least pattern of the deck orbit that forms this component.
    pub pattern: SubtorusPattern,
    /// Number of patterns in the orbit.
    pub lifts: usize,
    pub dimension: usize,
    /// Free coordinates bucketed by block of the base's type.
    pub free_counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProfileEntry {
    pub dimension: usize,
    pub free_counts: Vec<usize>,
    pub multiplicity: usize,
}

impl ProfileEntry {
    fn sort_key(&self) -> (std::cmp::Reverse<usize>, &[usize], usize) {
        (
            std::cmp::Reverse(self.dimension),
            &self.free_counts,
            self.multiplicity,
        )
    }
}

impl Ord for ProfileEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for ProfileEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Components of a fixed set grouped by `(dimension, free_counts)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FixedPointProfile {
    entries: Vec<ProfileEntry>,
}

impl FixedPointProfile {
    fn from_counts(counts: BTreeMap<(usize, Vec<usize>), usize>) -> Self {
        let mut entries: Vec<ProfileEntry> = counts
            .into_iter()
            .map(|((dimension, free_counts), multiplicity)| ProfileEntry {
                dimension,
                free_counts,
                multiplicity,
            })
            .collect();
        entries.sort();
        FixedPointProfile { entries }
    }

    pub fn from_components(components: &[FixedComponent]) -> Self {
        let mut counts = BTreeMap::new();
        for c in components {
            *counts
                .entry((c.dimension, c.free_counts.clone()))
                .or_insert(0) += 1;
        }
        Self::from_counts(counts)
    }

    pub fn entries(&self) -> &[ProfileEntry] {
        &self.entries
    }

    pub fn component_count(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Component counts keyed by dimension, highest first.
    pub fn dimension_counts(&self) -> Vec<(usize, usize)> {
        let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &self.entries {
            *by_dim.entry(e.dimension).or_insert(0) += e.multiplicity;
        }
        by_dim.into_iter().rev().collect()
    }

    /// Union of several profiles, multiplicities added.
    pub fn merge<'a>(profiles: impl IntoIterator<Item = &'a FixedPointProfile>) -> Self {
        let mut counts = BTreeMap::new();
        for p in profiles {
            for e in &p.entries {
                *counts
                    .entry((e.dimension, e.free_counts.clone()))
                    .or_insert(0) += e.multiplicity;
            }
        }
        Self::from_counts(counts)
    }
}

/// Patterns are packed three bits per coordinate, coordinate 0 most
/// significant, so integer order is the lexicographic order of entries:
/// 0 is free, `1 + e` is the point `i^e`.
type Packed = u32;

fn shift(m: usize, j: usize) -> usize {
    3 * (m - 1 - j)
}

fn unpack(code: Packed, m: usize) -> SubtorusPattern {
    SubtorusPattern(
        (0..m)
            .map(|j| match (code >> shift(m, j)) & 7 {
                0 => PatternEntry::Free,
                v => PatternEntry::Point(Root4::from_exponent(v as u8 - 1)),
            })
            .collect(),
    )
}

fn apply_packed(g: &CoordinateMap, code: Packed, m: usize) -> Packed {
    let mut out = 0;
    for j in 0..m {
        let v = (code >> shift(m, j)) & 7;
        let w = if v == 0 {
            0
        } else {
            g.op(j).apply_root(Root4::from_exponent(v as u8 - 1)).0 as Packed + 1
        };
        out |= w << shift(m, j);
    }
    out
}

#[cfg(debug_assertions)]
fn packed_intersect(a: Packed, b: Packed, m: usize) -> bool {
    (0..m).all(|j| {
        let (x, y) = ((a >> shift(m, j)) & 7, (b >> shift(m, j)) & 7);
        x == 0 || y == 0 || x == y
    })
}

/// Solutions of `beta(z) = g(z)` for one deck element `g`, expanded into
/// patterns with explicit point values.
fn solve_against(beta: &CoordinateMap, g: &CoordinateMap, out: &mut Vec<Packed>) {
    let m = beta.len();
    let mut base: Packed = 0;
    let mut branching: Vec<usize> = Vec::with_capacity(m);
    for j in 0..m {
        let (b, h) = (beta.op(j), g.op(j));
        if b.conjugates() == h.conjugates() {
            if b.negates() != h.negates() {
                return;
            }
        } else {
            // z = conj z gives 1, -1; z = -conj z gives i, -i
            let first = if b.negates() == h.negates() {
                Root4::ONE
            } else {
                Root4::I
            };
            base |= (first.0 as Packed + 1) << shift(m, j);
            branching.push(j);
        }
    }
    for pick in 0u32..1 << branching.len() {
        let mut code = base;
        for (bit, &j) in branching.iter().enumerate() {
            if (pick >> bit) & 1 == 1 {
                // second root is the first times -1
                code += 2 << shift(m, j);
            }
        }
        out.push(code);
    }
}

/// Connected components of the fixed set of `beta` acting on `M(B)`,
/// sorted by representative pattern.
pub fn fixed_components(
    beta: &CoordinateMap,
    b: &BottMatrix,
    blocks: &BlockType,
) -> Result<Vec<FixedComponent>> {
    let m = b.size();
    if beta.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: beta.len(),
        });
    }
    if blocks.coordinate_count() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: blocks.coordinate_count(),
        });
    }
    let mut patterns: Vec<Packed> = Vec::new();
    #[cfg(debug_assertions)]
    let mut owner: Vec<u16> = Vec::new();
    for rows in 0u16..1 << m {
        #[cfg(debug_assertions)]
        let before = patterns.len();
        solve_against(beta, &deck_element(b, rows as u8), &mut patterns);
        // Freeness of the deck group makes patterns of distinct elements
        // disjoint; spot-check it where the quadratic scan is cheap.
        #[cfg(debug_assertions)]
        {
            owner.resize(patterns.len(), rows);
            if m <= 4 {
                for &p in &patterns[before..] {
                    for (&q, &o) in patterns[..before].iter().zip(&owner) {
                        debug_assert!(o == rows || !packed_intersect(p, q, m));
                    }
                }
            }
        }
    }
    let generators: Vec<CoordinateMap> = (0..m).map(|i| deck_element(b, 1 << i)).collect();
    patterns.sort_unstable();
    let mut seen = vec![false; patterns.len()];
    let slot = |code: Packed| patterns.binary_search(&code).ok();
    let mut out = Vec::new();
    for start in 0..patterns.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![patterns[start]];
        let mut lifts = 0;
        while let Some(q) = stack.pop() {
            lifts += 1;
            for g in &generators {
                let r = apply_packed(g, q, m);
                let Some(at) = slot(r) else {
                    return Err(Error::InternalInconsistency(format!(
                        "deck image {} of fixed pattern {} is not fixed",
                        unpack(r, m),
                        unpack(q, m)
                    )));
                };
                if !seen[at] {
                    seen[at] = true;
                    stack.push(r);
                }
            }
        }
        let pattern = unpack(patterns[start], m);
        let mut free_counts = vec![0; blocks.block_count()];
        for (j, e) in pattern.entries().iter().enumerate() {
            if *e == PatternEntry::Free {
                free_counts[blocks.block_of(j)] += 1;
            }
        }
        out.push(FixedComponent {
            dimension: pattern.dimension(),
            pattern,
            lifts,
            free_counts,
        });
    }
    Ok(out)
}

pub fn fixed_points(
    beta: &CoordinateMap,
    b: &BottMatrix,
    blocks: &BlockType,
) -> Result<FixedPointProfile> {
    Ok(FixedPointProfile::from_components(&fixed_components(
        beta, b, blocks,
    )?))
}

/// Fixed-point data of one nontrivial element of the effective group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementProfile {
    /// Selector over the basis of the row space of `C` (bit `t` = basis row `t`).
    pub element: u32,
    pub action: CoordinateMap,
    pub profile: FixedPointProfile,
}

/// Per-element fixed-point profiles of the effective `(Z2)^s` action on the
/// base, plus the sorted multiset used for comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionProfile {
    pub elements: Vec<ElementProfile>,
}

impl ActionProfile {
    /// Profiles sorted, forgetting which element produced which; this is
    /// what equivariant diffeomorphisms preserve.
    pub fn canonical(&self) -> Vec<FixedPointProfile> {
        let mut v: Vec<FixedPointProfile> =
            self.elements.iter().map(|e| e.profile.clone()).collect();
        v.sort();
        v
    }

    /// All components of all nontrivial elements together.
    pub fn aggregate(&self) -> FixedPointProfile {
        FixedPointProfile::merge(self.elements.iter().map(|e| &e.profile))
    }
}

/// Action of the effective-group element selected by `selector` over the
/// basis of the row space of `C`.
pub fn effective_element(sf: &SeifertForm, selector: u32) -> Result<CoordinateMap> {
    let basis = sf.effective_basis();
    if selector >> basis.len() != 0 {
        return Err(Error::IndexOutOfRange {
            index: selector as usize,
            size: 1 << basis.len(),
        });
    }
    Ok(CoordinateMap::from_masks(
        sf.base_size(),
        0,
        crate::gf2::combine(&basis, selector),
    ))
}

pub fn action_profile(sf: &SeifertForm) -> Result<ActionProfile> {
    let blocks = block_type(sf.base());
    let mut elements = Vec::new();
    for selector in 1..1u32 << sf.s() {
        let action = effective_element(sf, selector)?;
        let profile = fixed_points(&action, sf.base(), &blocks)?;
        elements.push(ElementProfile {
            element: selector,
            action,
            profile,
        });
    }
    Ok(ActionProfile { elements })
}
