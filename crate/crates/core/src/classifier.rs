//! Exhaustive classification of Bott matrices of one size into orbits of the
//! move groupoid, plus family filters over the result.
//!
//! Every matrix is a node; every move is an edge. Moves are involutions, so
//! each node only links to neighbours with a smaller index. The union-find
//! always hangs the larger root under the smaller one, which makes the root
//! of every class its lexicographically least matrix regardless of the order
//! in which threads merge.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::{for_each_neighbor, invariant_key, orbit, InvariantKey, MOVE_SET_NAME};
use crate::error::{Error, Result};
use crate::matrix::{matrix_count, BottMatrix, MAX_SIZE};
use crate::seifert::{block_type, normal_form};
use crate::tables;

/// Class counts known for small sizes; a mismatch is a hard error.
pub const KNOWN_CLASS_COUNTS: [(usize, usize); 4] = [(2, 2), (3, 4), (4, 12), (5, 54)];

/// Sizes up to this one are always audited matrix by matrix.
pub const FULL_AUDIT_MAX: usize = 5;

pub fn known_class_count(n: usize) -> Option<usize> {
    KNOWN_CLASS_COUNTS
        .iter()
        .find(|(m, _)| *m == n)
        .map(|&(_, c)| c)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Compare every matrix's invariant key with its class representative's.
    /// Always on for sizes up to [`FULL_AUDIT_MAX`].
    pub audit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub representative: BottMatrix,
    pub orbit_size: u64,
    pub k: usize,
    pub s: usize,
    /// Block type of the base.
    pub block_type: Vec<usize>,
    pub profile_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub class_count: usize,
    pub total_matrices: u64,
    /// True when the count was checked against a known value.
    pub verified: bool,
    pub move_set: String,
    pub audited: bool,
    pub orbits: Vec<OrbitSummary>,
    /// Representatives of distinct orbits whose invariant keys coincide.
    pub coincident_keys: Vec<[BottMatrix; 2]>,
}

/// A report together with the class of every matrix.
#[derive(Clone, Debug)]
pub struct Classification {
    pub report: ClassificationReport,
    /// `roots[i]` is the index of the least matrix in the class of matrix `i`.
    roots: Vec<u32>,
}

impl Classification {
    pub fn n(&self) -> usize {
        self.report.n
    }

    pub fn class_count(&self) -> usize {
        self.report.class_count
    }

    fn check(&self, a: &BottMatrix) -> Result<()> {
        if a.size() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: a.size(),
            });
        }
        Ok(())
    }

    /// The least matrix equivalent to `a`.
    pub fn representative(&self, a: &BottMatrix) -> Result<BottMatrix> {
        self.check(a)?;
        Ok(BottMatrix::from_index_unchecked(
            self.n(),
            self.roots[a.index() as usize],
        ))
    }

    pub fn same_class(&self, a: &BottMatrix, b: &BottMatrix) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.roots[a.index() as usize] == self.roots[b.index() as usize])
    }

    /// Distinct class representatives (as indices) among matrices passing
    /// `pred`.
    fn classes_where(&self, pred: impl Fn(&BottMatrix) -> bool + Sync) -> BTreeSet<u32> {
        let n = self.n();
        (0..self.roots.len() as u32)
            .into_par_iter()
            .filter(|&i| pred(&BottMatrix::from_index_unchecked(n, i)))
            .map(|i| self.roots[i as usize])
            .collect::<Vec<u32>>()
            .into_iter()
            .collect()
    }
}

struct UnionFind {
    parent: Vec<AtomicU32>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).map(AtomicU32::new).collect(),
        }
    }

    fn find(&self, mut x: u32) -> u32 {
        loop {
            let p = self.parent[x as usize].load(Ordering::Acquire);
            if p == x {
                return x;
            }
            let gp = self.parent[p as usize].load(Ordering::Acquire);
            if gp != p {
                // path halving; losing the race is harmless
                let _ = self.parent[x as usize].compare_exchange_weak(
                    p,
                    gp,
                    Ordering::AcqRel,
                    Ordering::Relaxed,
                );
            }
            x = gp;
        }
    }

    fn union(&self, a: u32, b: u32) {
        let (mut a, mut b) = (a, b);
        loop {
            a = self.find(a);
            b = self.find(b);
            if a == b {
                return;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if self.parent[hi as usize]
                .compare_exchange(hi, lo, Ordering::AcqRel, Ordering::Acquire)
                .is_ok()
            {
                return;
            }
        }
    }

    /// Final root of every element. Parents never point upward, so one
    /// ascending pass suffices.
    fn into_roots(self) -> Vec<u32> {
        let mut roots: Vec<u32> = self.parent.into_iter().map(AtomicU32::into_inner).collect();
        for i in 0..roots.len() {
            let p = roots[i] as usize;
            roots[i] = roots[p];
        }
        roots
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InternalInconsistency(format!("thread pool: {e}")))
}

fn summarize(rep: &BottMatrix, size: u64, key: &InvariantKey) -> OrbitSummary {
    let sf = normal_form(rep);
    OrbitSummary {
        representative: *rep,
        orbit_size: size,
        k: sf.k(),
        s: sf.s(),
        block_type: block_type(sf.base()).sizes().to_vec(),
        profile_digest: key.digest(),
    }
}

pub fn classify(n: usize, options: ClassifyOptions) -> Result<Classification> {
    if !(2..=MAX_SIZE).contains(&n) {
        return Err(Error::SizeOutOfRange {
            size: n,
            min: 2,
            max: MAX_SIZE,
        });
    }
    pool(options.jobs)?.install(|| classify_in_pool(n, options))
}

fn classify_in_pool(n: usize, options: ClassifyOptions) -> Result<Classification> {
    let total = matrix_count(n);
    let uf = UnionFind::new(total as usize);
    (0..total as u32)
        .into_par_iter()
        .with_min_len(256)
        .for_each(|i| {
            let a = BottMatrix::from_index_unchecked(n, i);
            for_each_neighbor(&a, |_, b| {
                let j = b.index();
                if j < i {
                    uf.union(i, j);
                }
            });
        });
    let roots = uf.into_roots();

    let mut sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_insert(0) += 1;
    }
    let class_count = sizes.len();
    let verified = match known_class_count(n) {
        Some(expected) if expected != class_count => {
            return Err(Error::InternalInconsistency(format!(
                "size {n}: found {class_count} classes, expected {expected}"
            )))
        }
        Some(_) => true,
        None => false,
    };

    let reps: Vec<(u32, u64)> = sizes.into_iter().collect();
    let keys: Vec<InvariantKey> = reps
        .par_iter()
        .map(|&(r, _)| invariant_key(&BottMatrix::from_index_unchecked(n, r)))
        .collect::<Result<_>>()?;

    let audited = options.audit || n <= FULL_AUDIT_MAX;
    if audited {
        let slot: HashMap<u32, usize> =
            reps.iter().enumerate().map(|(s, &(r, _))| (r, s)).collect();
        (0..total as u32).into_par_iter().try_for_each(|i| {
            let root = roots[i as usize];
            if root == i {
                return Ok(());
            }
            let a = BottMatrix::from_index_unchecked(n, i);
            if invariant_key(&a)? != keys[slot[&root]] {
                let rep = BottMatrix::from_index_unchecked(n, root);
                return Err(Error::InternalInconsistency(format!(
                    "invariant key of {a:?} differs from its class representative {rep:?}"
                )));
            }
            Ok(())
        })?;
    }

    let orbits: Vec<OrbitSummary> = reps
        .iter()
        .zip(&keys)
        .map(|(&(r, size), key)| summarize(&BottMatrix::from_index_unchecked(n, r), size, key))
        .collect();

    let mut by_digest: BTreeMap<&str, Vec<BottMatrix>> = BTreeMap::new();
    for o in &orbits {
        by_digest
            .entry(&o.profile_digest)
            .or_default()
            .push(o.representative);
    }
    let mut coincident_keys = Vec::new();
    for group in by_digest.values() {
        for (x, a) in group.iter().enumerate() {
            for b in &group[x + 1..] {
                coincident_keys.push([*a, *b]);
            }
        }
    }
    coincident_keys.sort();

    let report = ClassificationReport {
        n,
        class_count,
        total_matrices: total,
        verified,
        move_set: MOVE_SET_NAME.to_owned(),
        audited,
        orbits,
        coincident_keys,
    };
    Ok(Classification { report, roots })
}

/// Histogram of classes by the maximal torus rank `k` of the representative.
pub fn subcase_counts(classification: &Classification) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for o in &classification.report.orbits {
        *out.entry(o.k).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCheck {
    pub name: String,
    pub listed: usize,
    /// Distinct class representatives reached by the listed matrices.
    pub representatives: Vec<BottMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub n: usize,
    pub ok: bool,
    pub classes: Vec<ClassCheck>,
    pub listed_matrices: usize,
    pub total_matrices: u64,
    /// Every class of the classification is named by the table.
    pub covers_every_class: bool,
    pub violations: Vec<String>,
}

/// Sizes for which reference tables are embedded.
pub fn table_sizes() -> Vec<usize> {
    (1..=MAX_SIZE)
        .filter(|&n| tables::for_size(n).is_some())
        .collect()
}

/// Checks the reference class list for the size of `classification`.
pub fn verify_table(classification: &Classification) -> Result<TableReport> {
    let n = classification.n();
    let list = tables::for_size(n).ok_or(Error::SizeOutOfRange {
        size: n,
        min: 2,
        max: 4,
    })?;
    let mut classes = Vec::new();
    let mut violations = Vec::new();
    let mut owner: BTreeMap<BottMatrix, String> = BTreeMap::new();
    let mut listed_matrices = 0;
    for (name, texts) in list {
        let mut reps = BTreeSet::new();
        for text in *texts {
            let a = BottMatrix::parse(text)?;
            reps.insert(classification.representative(&a)?);
            listed_matrices += 1;
        }
        if reps.len() != 1 {
            violations.push(format!("class {name} spans {} orbits", reps.len()));
        }
        for rep in &reps {
            if let Some(other) = owner.insert(*rep, name.to_string()) {
                violations.push(format!(
                    "classes {other} and {name} share the orbit of {rep:?}"
                ));
            }
        }
        classes.push(ClassCheck {
            name: name.to_string(),
            listed: texts.len(),
            representatives: reps.into_iter().collect(),
        });
    }
    let covers_every_class = owner.len() == classification.class_count();
    Ok(TableReport {
        n,
        ok: violations.is_empty(),
        classes,
        listed_matrices,
        total_matrices: classification.report.total_matrices,
        covers_every_class,
        violations,
    })
}

/// Classifies every size with a reference table and checks each table.
pub fn verify_reference_tables(options: ClassifyOptions) -> Result<Vec<TableReport>> {
    table_sizes()
        .into_iter()
        .map(|n| verify_table(&classify(n, options)?))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fibre {
    Torus,
    Klein,
}

/// Families of Bott matrices selected from their Seifert data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `k >= n - 2`.
    CorankAtMost2,
    /// Circle over `S^1 x_Z2 T^(n-2)`: `k = 1` and the base is equivalent to
    /// the matrix whose first row is all ones and whose other rows are the
    /// identity.
    CircleOverCircleTorus,
    /// `k = 1`, the base has torus rank `n - 3`, and the base of the base is
    /// the 2-torus or the Klein bottle.
    CircleOverTorusBundle(Fibre),
    /// `T^k x_Z2 T^(n-k)`: torus rank `k`, `s = 1`, base the identity.
    TorusOverTorus(usize),
    /// `k = 1` and the base is equivalent to the size `n - 1` matrix whose
    /// top `n - 1 - K` rows are all ones right of the diagonal, followed by
    /// an identity block of size `K`.
    CircleOverChain(usize),
}

impl FamilySpec {
    pub const NAMES: [&'static str; 6] = [
        "corank-le-2",
        "circle-over-circle-torus",
        "circle-over-torus-t2",
        "circle-over-torus-klein",
        "torus-over-torus:K",
        "circle-over-chain:K",
    ];
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::CorankAtMost2 => f.write_str("corank-le-2"),
            FamilySpec::CircleOverCircleTorus => f.write_str("circle-over-circle-torus"),
            FamilySpec::CircleOverTorusBundle(Fibre::Torus) => f.write_str("circle-over-torus-t2"),
            FamilySpec::CircleOverTorusBundle(Fibre::Klein) => {
                f.write_str("circle-over-torus-klein")
            }
            FamilySpec::TorusOverTorus(k) => write!(f, "torus-over-torus:{k}"),
            FamilySpec::CircleOverChain(k) => write!(f, "circle-over-chain:{k}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFamily(s.to_owned());
        let (name, param) = match s.split_once(':') {
            Some((name, p)) => (name, Some(p.parse::<usize>().map_err(|_| unknown())?)),
            None => (s, None),
        };
        match (name, param) {
            ("corank-le-2", None) => Ok(FamilySpec::CorankAtMost2),
            ("circle-over-circle-torus", None) => Ok(FamilySpec::CircleOverCircleTorus),
            ("circle-over-torus-t2", None) => Ok(FamilySpec::CircleOverTorusBundle(Fibre::Torus)),
            ("circle-over-torus-klein", None) => {
                Ok(FamilySpec::CircleOverTorusBundle(Fibre::Klein))
            }
            ("torus-over-torus", Some(k)) => Ok(FamilySpec::TorusOverTorus(k)),
            ("circle-over-chain", Some(k)) => Ok(FamilySpec::CircleOverChain(k)),
            _ => Err(unknown()),
        }
    }
}

/// Size `t + 1`: first row all ones, identity below.
fn circle_torus_base(t: usize) -> BottMatrix {
    let mut rows = vec![0u8; t + 1];
    rows[0] = (((1u16 << (t + 1)) - 1) as u8) & !1;
    BottMatrix::from_row_masks(t + 1, &rows).expect("valid base")
}

fn chain_base(size: usize, tail: usize) -> BottMatrix {
    let full = if size >= 8 {
        0xffu8
    } else {
        ((1u16 << size) - 1) as u8
    };
    let rows: Vec<u8> = (0..size)
        .map(|i| {
            if i < size - tail {
                full & !(((1u16 << (i + 1)) - 1) as u8)
            } else {
                0
            }
        })
        .collect();
    BottMatrix::from_row_masks(size, &rows).expect("valid base")
}

fn out_of_range(spec: &FamilySpec, n: usize) -> Error {
    Error::UnknownFamily(format!("{spec} is not defined in size {n}"))
}

/// Membership test over matrices of one size.
pub type MatrixPredicate = Box<dyn Fn(&BottMatrix) -> bool + Sync>;

/// Predicate selecting the members of `spec` among size-`n` matrices.
pub fn family_filter(n: usize, spec: &FamilySpec) -> Result<MatrixPredicate> {
    Ok(match *spec {
        FamilySpec::CorankAtMost2 => Box::new(move |a| normal_form(a).k() + 2 >= n),
        FamilySpec::CircleOverCircleTorus => {
            if n < 3 {
                return Err(out_of_range(spec, n));
            }
            let bases = orbit(&circle_torus_base(n - 2));
            Box::new(move |a| {
                let sf = normal_form(a);
                sf.k() == 1 && bases.contains(sf.base())
            })
        }
        FamilySpec::CircleOverTorusBundle(fibre) => {
            if n < 4 {
                return Err(out_of_range(spec, n));
            }
            let bottom = match fibre {
                Fibre::Torus => BottMatrix::identity(2),
                Fibre::Klein => BottMatrix::from_row_masks(2, &[0b10, 0]).expect("valid"),
            };
            Box::new(move |a| {
                let sf = normal_form(a);
                if sf.k() != 1 {
                    return false;
                }
                let inner = normal_form(sf.base());
                inner.k() == n - 3 && *inner.base() == bottom
            })
        }
        FamilySpec::TorusOverTorus(k) => {
            if k == 0 || k >= n {
                return Err(out_of_range(spec, n));
            }
            let base = BottMatrix::identity(n - k);
            Box::new(move |a| {
                let sf = normal_form(a);
                sf.k() == k && sf.s() == 1 && *sf.base() == base
            })
        }
        FamilySpec::CircleOverChain(tail) => {
            if tail == 0 || tail + 2 > n {
                return Err(out_of_range(spec, n));
            }
            let bases = orbit(&chain_base(n - 1, tail));
            Box::new(move |a| {
                let sf = normal_form(a);
                sf.k() == 1 && bases.contains(sf.base())
            })
        }
    })
}

/// Number of classes containing at least one member of `spec`.
pub fn family_count(classification: &Classification, spec: &FamilySpec) -> Result<usize> {
    let pred = family_filter(classification.n(), spec)?;
    Ok(classification.classes_where(|a| pred(a)).len())
}

/// Representatives of the classes counted by [`family_count`].
pub fn family_members(
    classification: &Classification,
    spec: &FamilySpec,
) -> Result<Vec<BottMatrix>> {
    let pred = family_filter(classification.n(), spec)?;
    let n = classification.n();
    Ok(classification
        .classes_where(|a| pred(a))
        .into_iter()
        .map(|r| BottMatrix::from_index_unchecked(n, r))
        .collect())
}
