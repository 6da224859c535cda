//! Row reduction over GF(2) for the small bit-mask matrices used here.

/// Reduced row echelon form of `rows` (bit masks). Nonzero rows come first,
/// sorted by decreasing pivot (highest set bit); zero rows are kept at the
/// end so the length is unchanged.
pub fn rref(rows: &[u8]) -> Vec<u8> {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in (0..8).rev() {
        let pivot_mask = 1u8 << bit;
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] & pivot_mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & pivot_mask != 0 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rows
}

pub fn rank(rows: &[u8]) -> usize {
    rref(rows).iter().take_while(|&&r| r != 0).count()
}

/// A basis of the row space: the nonzero rows of the reduced form.
pub fn basis(rows: &[u8]) -> Vec<u8> {
    rref(rows).into_iter().filter(|&r| r != 0).collect()
}

/// Combination of `basis` vectors selected by the bits of `selector`.
pub fn combine(basis: &[u8], selector: u32) -> u8 {
    basis
        .iter()
        .enumerate()
        .filter(|(i, _)| (selector >> i) & 1 == 1)
        .fold(0, |acc, (_, &v)| acc ^ v)
}
