//! Orbifold signatures `(g; p_1, ..., p_m)` of closed orientable
//! 2-orbifolds, their classification (finite / torus / nice), the exact
//! orbifold Euler characteristic, and the group `Sigma` of cone-point
//! permutations preserving cone orders.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// Genus and cone orders of a closed orientable 2-orbifold. Cone orders keep
/// their input order: extension-class columns are indexed by cone position,
/// so sorting here would silently reindex user data.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrbifoldSignature {
    genus: u64,
    cone_orders: Vec<u64>,
}

/// Coarse type of the orbifold group: finite, `Z^2` (the torus), or nice
/// (infinite and not the torus).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignatureKind {
    Finite,
    EuclideanTorus,
    Nice,
}

impl OrbifoldSignature {
    /// Validates and builds a signature. Accepts any genus `>= 0` and cone
    /// orders `>= 2`, in the given order.
    pub fn new(genus: i64, cone_orders: &[i64]) -> Result<Self, Error> {
        if genus < 0 {
            return Err(Error::NegativeGenus { genus });
        }
        for &p in cone_orders {
            if p <= 1 {
                return Err(Error::NonPositiveOrder { order: p });
            }
        }
        Ok(OrbifoldSignature {
            genus: genus as u64,
            cone_orders: cone_orders.iter().map(|&p| p as u64).collect(),
        })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn cone_orders(&self) -> &[u64] {
        &self.cone_orders
    }

    /// Number of cone points, `m`.
    pub fn cone_count(&self) -> usize {
        self.cone_orders.len()
    }

    /// Exact orbifold Euler characteristic
    /// `chi = 2 - 2g - sum_i (1 - 1/p_i)`.
    ///
    /// Exactness matters: the finite/infinite boundary is `chi = 0`.
    pub fn euler_characteristic(&self) -> BigRational {
        let mut chi = BigRational::from_integer(BigInt::from(2) - 2 * BigInt::from(self.genus));
        for &p in &self.cone_orders {
            chi -= BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p));
        }
        chi
    }

    /// `Finite` iff `chi > 0`; `EuclideanTorus` iff `g = 1, m = 0`;
    /// `Nice` otherwise.
    pub fn kind(&self) -> SignatureKind {
        if self.euler_characteristic() > BigRational::zero() {
            SignatureKind::Finite
        } else if self.genus == 1 && self.cone_orders.is_empty() {
            SignatureKind::EuclideanTorus
        } else {
            SignatureKind::Nice
        }
    }

    /// The group of cone-point permutations preserving cone orders.
    pub fn symmetry_group(&self) -> SymmetryGroup {
        SymmetryGroup::new(self)
    }
}

/// Permutation of cone positions `{0, ..., m-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (0..m).collect(),
        }
    }

    /// Builds from an image table; must be a bijection on `{0, ..., m-1}`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let m = images.len();
        let mut seen = alloc::vec![false; m];
        for &i in &images {
            if i >= m || seen[i] {
                return Err(Error::PermutationNotInSigma);
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0usize; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// True iff the permutation preserves cone orders elementwise.
    pub fn preserves(&self, sig: &OrbifoldSignature) -> bool {
        self.images.len() == sig.cone_count()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, &img)| sig.cone_orders()[img] == sig.cone_orders()[i])
    }

    /// Sign of the permutation, +-1.
    pub fn sign(&self) -> i8 {
        let mut visited = alloc::vec![false; self.images.len()];
        let mut sign = 1i8;
        for start in 0..self.images.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0usize;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len.is_multiple_of(2) {
                sign = -sign;
            }
        }
        sign
    }
}

/// `Sigma`: the full direct product of symmetric groups on the blocks of
/// equal cone orders. Stored as block structure plus generators; elements
/// are enumerated lazily in a fixed deterministic order (blocks by first
/// occurrence, each block's permutations lexicographically, last block
/// varying fastest) since the order of the group is a product of factorials.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    m: usize,
    /// Positions grouped by equal cone order, by first occurrence.
    blocks: Vec<Vec<usize>>,
}

impl SymmetryGroup {
    fn new(sig: &OrbifoldSignature) -> Self {
        let mut blocks: Vec<(u64, Vec<usize>)> = Vec::new();
        for (i, &p) in sig.cone_orders().iter().enumerate() {
            match blocks.iter_mut().find(|(q, _)| *q == p) {
                Some((_, b)) => b.push(i),
                None => blocks.push((p, alloc::vec![i])),
            }
        }
        SymmetryGroup {
            m: sig.cone_count(),
            blocks: blocks.into_iter().map(|(_, b)| b).collect(),
        }
    }

    /// Adjacent transpositions within each block of equal orders.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = Vec::new();
        for block in &self.blocks {
            for w in block.windows(2) {
                let mut images: Vec<usize> = (0..self.m).collect();
                images.swap(w[0], w[1]);
                gens.push(Permutation { images });
            }
        }
        gens
    }

    /// `prod (multiplicity!)` over distinct cone orders.
    pub fn order(&self) -> BigInt {
        let mut ord = BigInt::one();
        for block in &self.blocks {
            for k in 2..=block.len() {
                ord *= BigInt::from(k);
            }
        }
        ord
    }

    pub fn contains(&self, sigma: &Permutation) -> bool {
        if sigma.len() != self.m {
            return false;
        }
        // Membership: sigma maps each block into itself.
        self.blocks.iter().all(|block| {
            block
                .iter()
                .all(|&i| block.contains(&sigma.apply(i)))
        })
    }

    pub fn iter(&self) -> SymmetryIter<'_> {
        SymmetryIter::new(self)
    }
}

/// Lazy enumeration of `Sigma`; identity first.
pub struct SymmetryIter<'a> {
    group: &'a SymmetryGroup,
    /// Per-block arrangements: current permutation of the block positions.
    state: Option<Vec<Vec<usize>>>,
}

impl<'a> SymmetryIter<'a> {
    fn new(group: &'a SymmetryGroup) -> Self {
        SymmetryIter {
            group,
            state: Some(group.blocks.to_vec()),
        }
    }

    fn advance(&mut self) {
        let Some(state) = self.state.as_mut() else {
            return;
        };
        // Mixed-radix odometer over per-block lexicographic permutations,
        // last block fastest.
        for k in (0..state.len()).rev() {
            if next_permutation(&mut state[k]) {
                return;
            }
            state[k].sort_unstable();
        }
        self.state = None;
    }
}

impl<'a> Iterator for SymmetryIter<'a> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let state = self.state.as_ref()?;
        let mut images: Vec<usize> = (0..self.group.m).collect();
        for (block, arrangement) in self.group.blocks.iter().zip(state) {
            for (&from, &to) in block.iter().zip(arrangement) {
                images[from] = to;
            }
        }
        self.advance();
        Some(Permutation { images })
    }
}

/// Standard in-place next lexicographic permutation; false on wrap.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
