//! Seifert normal form `(k, s, C, B)` of a Bott matrix and the block type of
//! its base.
//!
//! Moving every trivial column (no entry above the diagonal) to the front,
//! order-preserving on both sides, puts the matrix in the shape
//!
//! ```text
//!   [ I_k  C ]
//!   [  0   B ]
//! ```
//!
//! where `I_k` is maximal, `B` is the Bott matrix of the base and the rows of
//! the coupling matrix `C` say how the torus generators act on the base. The
//! effective rank `s` is the GF(2) rank of `C`: a product of torus generators
//! acts trivially on the base exactly when the matching sum of rows of `C`
//! vanishes.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::gf2;
use crate::matrix::BottMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertForm {
    n: usize,
    k: usize,
    s: usize,
    /// Position `p` of the normal form holds original coordinate `perm[p]`.
    perm: Vec<usize>,
    /// `k` rows, each a mask over the `n - k` base coordinates.
    coupling: Vec<u8>,
    base: BottMatrix,
}

pub fn normal_form(a: &BottMatrix) -> SeifertForm {
    let n = a.size();
    let (torus, rest): (Vec<usize>, Vec<usize>) = (0..n).partition(|&j| a.column_is_trivial(j));
    let coupling: Vec<u8> = torus
        .iter()
        .map(|&t| {
            rest.iter()
                .enumerate()
                .filter(|&(_, &j)| a.get(t, j))
                .fold(0u8, |mask, (c, _)| mask | (1 << c))
        })
        .collect();
    let base = a.principal_submatrix(&rest);
    let s = gf2::rank(&coupling);
    let k = torus.len();
    let mut perm = torus;
    perm.extend(rest);
    SeifertForm {
        n,
        k,
        s,
        perm,
        coupling,
        base,
    }
}

impl SeifertForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the maximal torus acting on the manifold.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Rank of the group acting effectively on the base.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn coupling(&self) -> &[u8] {
        &self.coupling
    }

    pub fn base(&self) -> &BottMatrix {
        &self.base
    }

    pub fn base_size(&self) -> usize {
        self.n - self.k
    }

    /// The permuted matrix `[I_k C; 0 B]`.
    pub fn normalized_matrix(&self) -> BottMatrix {
        let mut rows = vec![0u8; self.n];
        for (t, &c) in self.coupling.iter().enumerate() {
            rows[t] = c << self.k;
        }
        for i in 0..self.base_size() {
            rows[self.k + i] = self.base.row_mask(i) << self.k;
        }
        BottMatrix::from_row_masks(self.n, &rows).expect("normal form is upper triangular")
    }

    /// Undoes the coordinate permutation and returns the original matrix.
    pub fn reconstruct(&self) -> BottMatrix {
        let normal = self.normalized_matrix();
        let mut inverse = vec![0; self.n];
        for (p, &orig) in self.perm.iter().enumerate() {
            inverse[orig] = p;
        }
        normal
            .permuted(&inverse)
            .expect("original matrix is upper triangular")
    }

    /// Row-reduced coupling matrix; its last `k - s` rows are zero, which is
    /// the circle factor that composing coupled rows splits off.
    pub fn reduced_coupling(&self) -> Vec<u8> {
        gf2::rref(&self.coupling)
    }

    /// Basis of the row space of `C`, i.e. generators of the effective group.
    pub fn effective_basis(&self) -> Vec<u8> {
        gf2::basis(&self.coupling)
    }

    fn bits(&self, mask: u8) -> String {
        (0..self.base_size())
            .map(|j| if (mask >> j) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Rows of `C` as bit strings over the base coordinates.
    pub fn coupling_strings(&self) -> Vec<String> {
        self.coupling.iter().map(|&r| self.bits(r)).collect()
    }
}

impl Serialize for SeifertForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SeifertForm", 5)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("s", &self.s)?;
        let perm: Vec<usize> = self.perm.iter().map(|p| p + 1).collect();
        st.serialize_field("perm", &perm)?;
        st.serialize_field("C", &self.coupling_strings())?;
        st.serialize_field("B", &self.base.to_text())?;
        st.end()
    }
}

/// Iterated maximal-torus decomposition `(b_2, .., b_l)` of a base matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockType {
    sizes: Vec<usize>,
    /// Block index of every coordinate of the matrix.
    #[serde(skip)]
    coordinate_block: Vec<usize>,
}

impl BlockType {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn coordinate_count(&self) -> usize {
        self.coordinate_block.len()
    }

    pub fn block_of(&self, coordinate: usize) -> usize {
        self.coordinate_block[coordinate]
    }
}

/// Peels off the maximal torus of `b`, then of its base, and so on until the
/// base is empty.
pub fn block_type(b: &BottMatrix) -> BlockType {
    let mut sizes = Vec::new();
    let mut coordinate_block = vec![0; b.size()];
    let mut current = *b;
    // original coordinate of each coordinate of `current`
    let mut labels: Vec<usize> = (0..b.size()).collect();
    while current.size() > 0 {
        let sf = normal_form(&current);
        let stage = sizes.len();
        for &p in &sf.perm()[..sf.k()] {
            coordinate_block[labels[p]] = stage;
        }
        labels = sf.perm()[sf.k()..].iter().map(|&p| labels[p]).collect();
        sizes.push(sf.k());
        current = *sf.base();
    }
    BlockType {
        sizes,
        coordinate_block,
    }
}
