use std::cmp::Ordering;
use std::fmt;

/// Leaf set as a bit mask, leaf `u` at bit `u`.
pub type LeafSet = u64;

/// Maximum number of leaves supported by the bit-mask representation.
pub const MAX_LEAVES: usize = 64;

/// Bipartition of the leaves of one connected component.
///
/// `inner | outer` is the component's leaf set. The lowest leaf of the
/// component always sits in `outer`, which makes the encoding unique. For a
/// single tree on all leaves `inner` is exactly the "side" bit vector with the
/// bit of leaf 0 clear.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    inner: LeafSet,
    outer: LeafSet,
}

impl Split {
    /// Builds a split from one side and the component it lives in. Either side
    /// may be passed; the orientation is fixed here.
    pub fn new(side: LeafSet, component: LeafSet) -> Option<Split> {
        let side = side & component;
        let other = component & !side;
        if side == 0 || other == 0 {
            return None;
        }
        let low = component & component.wrapping_neg();
        let (inner, outer) = if side & low != 0 { (other, side) } else { (side, other) };
        Some(Split { inner, outer })
    }

    /// Split of the whole leaf set `0..n` from an inner side.
    pub fn of_tree(side: LeafSet, n: usize) -> Option<Split> {
        Split::new(side, full_set(n))
    }

    pub fn inner(&self) -> LeafSet {
        self.inner
    }

    pub fn outer(&self) -> LeafSet {
        self.outer
    }

    pub fn component(&self) -> LeafSet {
        self.inner | self.outer
    }

    /// The side containing leaf `u`, if `u` is in the component.
    pub fn side_of(&self, u: usize) -> Option<LeafSet> {
        let b = 1u64 << u;
        if self.inner & b != 0 {
            Some(self.inner)
        } else if self.outer & b != 0 {
            Some(self.outer)
        } else {
            None
        }
    }

    /// True when the edge lies on the path between leaves `u` and `v`.
    pub fn separates(&self, u: usize, v: usize) -> bool {
        let (bu, bv) = (1u64 << u, 1u64 << v);
        (self.inner & bu != 0 && self.outer & bv != 0) || (self.inner & bv != 0 && self.outer & bu != 0)
    }

    /// Pendant splits have a single leaf on one side.
    pub fn is_pendant(&self) -> bool {
        self.inner.count_ones() == 1 || self.outer.count_ones() == 1
    }

    /// The leaf cut off by a pendant split. For a two-leaf component this is
    /// the lower leaf.
    pub fn pendant_leaf(&self) -> Option<usize> {
        if self.outer.count_ones() == 1 {
            Some(self.outer.trailing_zeros() as usize)
        } else if self.inner.count_ones() == 1 {
            Some(self.inner.trailing_zeros() as usize)
        } else {
            None
        }
    }

    /// Two splits can coexist in one forest when they live in disjoint
    /// components, or in the same component with one empty side-intersection.
    pub fn compatible(&self, other: &Split) -> bool {
        let (c1, c2) = (self.component(), other.component());
        if c1 & c2 == 0 {
            return true;
        }
        if c1 != c2 {
            return false;
        }
        self.inner & other.inner == 0
            || self.inner & other.outer == 0
            || self.outer & other.inner == 0
            || self.outer & other.outer == 0
    }

    fn order_key(&self) -> (bool, u64, u64) {
        match self.pendant_leaf() {
            Some(u) => (false, u as u64, 0),
            None => (true, self.inner, self.outer),
        }
    }
}

impl Ord for Split {
    /// Pendant splits first by leaf, then internal splits by bit pattern.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", fmt_set(self.inner), fmt_set(self.outer))
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Leaf labels (1-based) of a set, comma separated.
pub fn fmt_set(s: LeafSet) -> String {
    leaves(s).map(|u| (u + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn full_set(n: usize) -> LeafSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the leaves of a set in increasing order.
pub fn leaves(s: LeafSet) -> impl Iterator<Item = usize> {
    let mut rest = s;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(u)
        }
    })
}
