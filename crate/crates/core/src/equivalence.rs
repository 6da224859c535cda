//! Diffeomorphism of real Bott manifolds via closure under matrix moves,
//! cross-checked against invariant keys.
//!
//! Three moves generate the equivalence. Each is an involution, and each is
//! induced by an affine diffeomorphism that conjugates the whole group:
//!
//! * quarter turn at `j`: `z_j -> i z_j` turns `conj z_j` into `-conj z_j`,
//!   so every generator that conjugates `z_j` picks up a copy of `g_j`;
//! * adjacent swap at `j`: relabel `z_j`, `z_(j+1)` when `g_j` does not
//!   conjugate `z_(j+1)`;
//! * twin merge `(target, source)`: when columns `target` and `source` are
//!   equal, replace `g_target` by `g_target g_source` and change coordinates
//!   by `w_source = z_target z_source`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::action::{action_profile, FixedPointProfile};
use crate::error::{Error, Result};
use crate::matrix::BottMatrix;
use crate::seifert::normal_form;

/// Identifies the move set; stored in caches so a change invalidates them.
pub const MOVE_SET_ID: u32 = 3;
pub const MOVE_SET_NAME: &str = "quarter-turn+adjacent-swap+twin-merge";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Move {
    QuarterTurn(usize),
    AdjacentSwap(usize),
    TwinMerge { target: usize, source: usize },
}

fn check_coord(a: &BottMatrix, j: usize) -> Result<()> {
    if j < a.size() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: j,
            size: a.size(),
        })
    }
}

fn quarter_unchecked(a: &BottMatrix, j: usize) -> BottMatrix {
    let mut out = *a;
    let row_j = a.row_mask(j);
    for i in 0..j {
        if a.get(i, j) {
            out.set_row_mask(i, a.row_mask(i) ^ row_j);
        }
    }
    out
}

fn swap_unchecked(a: &BottMatrix, j: usize) -> Option<BottMatrix> {
    if a.get(j, j + 1) {
        return None;
    }
    let n = a.size();
    let mut out = *a;
    let flip = |r: u8| {
        let (x, y) = ((r >> j) & 1, (r >> (j + 1)) & 1);
        (r & !(0b11 << j)) | (x << (j + 1)) | (y << j)
    };
    for i in 0..n {
        let src = if i == j {
            j + 1
        } else if i == j + 1 {
            j
        } else {
            i
        };
        out.set_row_mask(i, flip(a.row_mask(src)));
    }
    Some(out)
}

fn twin_unchecked(a: &BottMatrix, target: usize, source: usize) -> Option<BottMatrix> {
    if target == source || a.column_mask(target) != a.column_mask(source) {
        return None;
    }
    let src = a.row_mask(source);
    if source < target {
        // bits source+1 ..= target of row `source` would land on or below
        // the diagonal of row `target`
        let between = ((1u16 << (target + 1)) - (1u16 << (source + 1))) as u8;
        if src & between != 0 {
            return None;
        }
    }
    let mut out = *a;
    out.set_row_mask(target, a.row_mask(target) ^ src);
    Some(out)
}

/// Quarter-turn conjugation at coordinate `j` (0-based).
pub fn quarter_move(a: &BottMatrix, j: usize) -> Result<BottMatrix> {
    check_coord(a, j)?;
    Ok(quarter_unchecked(a, j))
}

/// Relabels coordinates `j` and `j + 1`; `None` when `A[j][j+1] = 1`.
pub fn swap_move(a: &BottMatrix, j: usize) -> Result<Option<BottMatrix>> {
    if j + 1 >= a.size() {
        return Err(Error::IndexOutOfRange {
            index: j,
            size: a.size(),
        });
    }
    Ok(swap_unchecked(a, j))
}

/// Generator change for two equal columns; `None` when the columns differ
/// or the result would not be upper triangular.
pub fn twin_merge_move(a: &BottMatrix, target: usize, source: usize) -> Result<Option<BottMatrix>> {
    check_coord(a, target)?;
    check_coord(a, source)?;
    Ok(twin_unchecked(a, target, source))
}

pub fn apply_move(a: &BottMatrix, mv: Move) -> Result<Option<BottMatrix>> {
    match mv {
        Move::QuarterTurn(j) => quarter_move(a, j).map(Some),
        Move::AdjacentSwap(j) => swap_move(a, j),
        Move::TwinMerge { target, source } => twin_merge_move(a, target, source),
    }
}

/// Calls `f` for every applicable move and its result, in a fixed order.
/// Results equal to `a` are included.
pub fn for_each_neighbor(a: &BottMatrix, mut f: impl FnMut(Move, BottMatrix)) {
    let n = a.size();
    for j in 0..n.saturating_sub(1) {
        if let Some(b) = swap_unchecked(a, j) {
            f(Move::AdjacentSwap(j), b);
        }
    }
    let mut cols = [0u8; 8];
    for (j, c) in cols.iter_mut().enumerate().take(n) {
        *c = a.column_mask(j);
    }
    for (j, &c) in cols.iter().enumerate().take(n) {
        if c != 0 {
            f(Move::QuarterTurn(j), quarter_unchecked(a, j));
        }
    }
    for target in 0..n {
        for source in 0..n {
            if target != source && cols[target] == cols[source] {
                if let Some(b) = twin_unchecked(a, target, source) {
                    f(Move::TwinMerge { target, source }, b);
                }
            }
        }
    }
}

pub fn neighbors(a: &BottMatrix) -> Vec<(Move, BottMatrix)> {
    let mut out = Vec::new();
    for_each_neighbor(a, |mv, b| out.push((mv, b)));
    out
}

/// Closure of `{a}` under all moves.
pub fn orbit(a: &BottMatrix) -> BTreeSet<BottMatrix> {
    let mut seen = BTreeSet::from([*a]);
    let mut queue = VecDeque::from([*a]);
    while let Some(x) = queue.pop_front() {
        for_each_neighbor(&x, |_, y| {
            if seen.insert(y) {
                queue.push_back(y);
            }
        });
    }
    seen
}

/// Necessary conditions for diffeomorphism: sizes, torus ranks, the sorted
/// fixed-point profiles of the effective action, and the same data for the
/// base, recursively.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct InvariantKey {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub profile: Vec<FixedPointProfile>,
    pub base: Option<Box<InvariantKey>>,
}

impl InvariantKey {
    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("key serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

pub fn invariant_key(a: &BottMatrix) -> Result<InvariantKey> {
    let sf = normal_form(a);
    let profile = action_profile(&sf)?.canonical();
    let base = if sf.base_size() == 0 {
        None
    } else {
        Some(Box::new(invariant_key(sf.base())?))
    };
    Ok(InvariantKey {
        n: sf.n(),
        k: sf.k(),
        s: sf.s(),
        profile,
        base,
    })
}

/// A pair in different orbits whose invariant keys agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub a: BottMatrix,
    pub b: BottMatrix,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub equivalent: bool,
    pub keys_agree: bool,
    pub digest_a: String,
    pub digest_b: String,
    pub representative_a: BottMatrix,
    pub representative_b: BottMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditRecord>,
}

pub fn equivalent(a: &BottMatrix, b: &BottMatrix) -> Result<Verdict> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    let orbit_a = orbit(a);
    let same = orbit_a.contains(b);
    let orbit_b = if same { orbit_a.clone() } else { orbit(b) };
    let (key_a, key_b) = (invariant_key(a)?, invariant_key(b)?);
    let keys_agree = key_a == key_b;
    if same && !keys_agree {
        return Err(Error::InternalInconsistency(format!(
            "invariant keys differ inside one orbit: {a:?} vs {b:?}"
        )));
    }
    let (digest_a, digest_b) = (key_a.digest(), key_b.digest());
    let audit = (!same && keys_agree).then(|| AuditRecord {
        a: *a,
        b: *b,
        digest: digest_a.clone(),
    });
    Ok(Verdict {
        equivalent: same,
        keys_agree,
        digest_a,
        digest_b,
        representative_a: *orbit_a.first().expect("orbit contains its seed"),
        representative_b: *orbit_b.first().expect("orbit contains its seed"),
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::enumerate;

    fn m(text: &str) -> BottMatrix {
        BottMatrix::parse(text).unwrap()
    }

    #[test]
    fn quarter_examples() {
        let a = m("110\n011\n001\n");
        assert_eq!(quarter_move(&a, 1).unwrap(), m("111\n011\n001\n"));
        let i4 = BottMatrix::identity(4);
        for j in 0..4 {
            assert_eq!(quarter_move(&i4, j).unwrap(), i4);
        }
        let k = m("11\n01\n");
        assert_eq!(quarter_move(&k, 1).unwrap(), k);
        assert!(quarter_move(&k, 2).is_err());
    }

    #[test]
    fn swap_examples() {
        let i3 = BottMatrix::identity(3);
        assert_eq!(swap_move(&i3, 0).unwrap(), Some(i3));
        assert_eq!(swap_move(&m("11\n01\n"), 0).unwrap(), None);
        assert!(swap_move(&i3, 2).is_err());
        // trivial column 3 moves in front of column 2
        assert_eq!(
            swap_move(&m("110\n010\n001\n"), 1).unwrap(),
            Some(m("101\n010\n001\n"))
        );
    }

    #[test]
    fn twin_merge_examples() {
        // two trivial columns: merging torus generators
        let a = m("1011\n0101\n0011\n0001\n");
        assert_eq!(
            twin_merge_move(&a, 1, 0).unwrap(),
            Some(m("1011\n0110\n0011\n0001\n"))
        );
        assert_eq!(twin_merge_move(&a, 0, 2).unwrap(), None);
        assert_eq!(twin_merge_move(&a, 0, 0).unwrap(), None);
    }

    #[test]
    fn all_moves_are_involutions() {
        for n in 1..=5 {
            for a in enumerate(n).unwrap() {
                for (mv, b) in neighbors(&a) {
                    assert_eq!(apply_move(&b, mv).unwrap(), Some(a), "{a:?} {mv:?}");
                }
            }
        }
    }

    #[test]
    fn identity_orbit_is_a_singleton() {
        for n in 1..=6 {
            let i = BottMatrix::identity(n);
            assert_eq!(orbit(&i), BTreeSet::from([i]));
        }
    }

    #[test]
    fn examples_of_equivalence() {
        let a1 = m("10110\n01010\n00110\n00011\n00001\n");
        let a2 = m("10010\n01100\n00110\n00011\n00001\n");
        let a3 = m("10100\n01001\n00110\n00011\n00001\n");
        let v = equivalent(&a1, &a2).unwrap();
        assert!(v.equivalent && v.keys_agree);
        let v = equivalent(&a2, &a3).unwrap();
        assert!(!v.equivalent && !v.keys_agree);
        assert!(equivalent(&a1, &a1).unwrap().equivalent);
        assert!(matches!(
            equivalent(&a1, &BottMatrix::identity(4)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn digest_is_hex_sha256() {
        let d = invariant_key(&m("11\n01\n")).unwrap().digest();
        assert_eq!(d.len(), 64);
        assert!(d.bytes().all(|c| c.is_ascii_hexdigit()));
    }
}
