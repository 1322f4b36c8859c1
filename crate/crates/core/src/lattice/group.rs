//! Row/column rotation-reflection symmetries of the torus, plus transposition
//! for square lattices.

use super::state::{full_mask, LatticeDims, LatticeState};
use crate::error::{Error, Result};

/// A permutation of lattice sites. Applying it to `x` yields the state whose
/// site `s` holds `x` at site `source[s]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SitePermutation {
    source: Vec<u8>,
}

impl SitePermutation {
    pub fn identity(dims: LatticeDims) -> Self {
        Self {
            source: (0..dims.sites() as u8).collect(),
        }
    }

    /// Permutation given by the source site of every target site.
    pub fn from_sources(dims: LatticeDims, sources: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; dims.sites()];
        if sources.len() != dims.sites() {
            return Err(Error::DimensionMismatch(format!(
                "{} sources for {} sites",
                sources.len(),
                dims.sites()
            )));
        }
        for &s in &sources {
            if s >= dims.sites() || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidConfig(
                    "not a permutation of the sites".into(),
                ));
            }
        }
        Ok(Self {
            source: sources.into_iter().map(|s| s as u8).collect(),
        })
    }

    fn from_map(dims: LatticeDims, f: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let mut source = Vec::with_capacity(dims.sites());
        for i in 0..dims.m {
            for j in 0..dims.n {
                let (si, sj) = f(i, j);
                source.push(dims.site(si, sj) as u8);
            }
        }
        Self { source }
    }

    /// Site that feeds site `s` of the image.
    #[inline]
    pub fn source(&self, s: usize) -> usize {
        self.source[s] as usize
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &SitePermutation) -> SitePermutation {
        // (x_other)_self: site s reads (x_other)[self(s)] = x[other(self(s))]
        SitePermutation {
            source: self
                .source
                .iter()
                .map(|&s| other.source[s as usize])
                .collect(),
        }
    }

    #[inline]
    pub fn apply_bits(&self, bits: u32) -> u32 {
        let mut out = 0u32;
        for (s, &src) in self.source.iter().enumerate() {
            out |= ((bits >> src) & 1) << s;
        }
        out
    }
}

/// Applies `sigma` to `x`: entry `(i, j)` of the result equals entry `sigma(i, j)` of `x`.
pub fn apply_permutation(x: &LatticeState, sigma: &SitePermutation) -> Result<LatticeState> {
    if sigma.len() != x.dims().sites() {
        return Err(Error::DimensionMismatch(format!(
            "permutation on {} sites applied to a {} lattice",
            sigma.len(),
            x.dims()
        )));
    }
    Ok(LatticeState::from_bits_unchecked(
        sigma.apply_bits(x.bits()),
        x.dims(),
    ))
}

/// Element of the dihedral group acting on `0..len` (rotation, or reflection
/// composed with rotation).
#[derive(Clone, Copy, Debug)]
struct Dihedral {
    shift: usize,
    reflect: bool,
}

impl Dihedral {
    fn all(len: usize) -> Vec<Dihedral> {
        let rot = (0..len).map(|shift| Dihedral {
            shift,
            reflect: false,
        });
        let refl = (0..len).map(|shift| Dihedral {
            shift,
            reflect: true,
        });
        rot.chain(refl).collect()
    }

    #[inline]
    fn map(&self, k: usize, len: usize) -> usize {
        if self.reflect {
            (self.shift + len - k) % len
        } else {
            (self.shift + k) % len
        }
    }
}

/// The symmetry group generated by row rotation/reflection, column
/// rotation/reflection and (optionally, square lattices only) transposition.
///
/// Every element is materialized both as a site permutation and in a
/// factored row/column form used by the canonicalization hot loop.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    dims: LatticeDims,
    transpose: bool,
    elements: Vec<SitePermutation>,
    row_ops: Vec<Vec<u8>>,
    // col_tables[k][r]: row pattern r with columns permuted by the k-th column op
    col_tables: Vec<Vec<u32>>,
}

impl SymmetryGroup {
    pub fn new(dims: LatticeDims, transpose: bool) -> Result<Self> {
        dims.check_cap(super::MAX_PACKED_SITES)?;
        if transpose && !dims.is_square() {
            return Err(Error::TransposeNonSquare {
                m: dims.m,
                n: dims.n,
            });
        }
        let (m, n) = (dims.m, dims.n);
        let rows = Dihedral::all(m);
        let cols = Dihedral::all(n);

        let mut elements = Vec::with_capacity(rows.len() * cols.len() * (1 + transpose as usize));
        for flipped in [false, true].into_iter().take(1 + transpose as usize) {
            for r in &rows {
                for c in &cols {
                    elements.push(SitePermutation::from_map(dims, |i, j| {
                        if flipped {
                            (r.map(j, m), c.map(i, n))
                        } else {
                            (r.map(i, m), c.map(j, n))
                        }
                    }));
                }
            }
        }

        let row_ops = rows
            .iter()
            .map(|r| (0..m).map(|i| r.map(i, m) as u8).collect())
            .collect();
        let col_tables = cols
            .iter()
            .map(|c| {
                (0..1u32 << n)
                    .map(|pattern| {
                        (0..n).fold(0u32, |acc, j| acc | (((pattern >> c.map(j, n)) & 1) << j))
                    })
                    .collect()
            })
            .collect();

        Ok(Self {
            dims,
            transpose,
            elements,
            row_ops,
            col_tables,
        })
    }

    pub fn dims(&self) -> LatticeDims {
        self.dims
    }

    pub fn uses_transpose(&self) -> bool {
        self.transpose
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SitePermutation] {
        &self.elements
    }

    /// Generators: row rotation, row reflection, column rotation, column
    /// reflection and, when enabled, transposition.
    pub fn generators(&self) -> Vec<SitePermutation> {
        generators(self.dims, self.transpose)
    }

    #[inline]
    fn transpose_bits(&self, bits: u32) -> u32 {
        let n = self.dims.n;
        let mut out = 0u32;
        for i in 0..n {
            for j in 0..n {
                out |= ((bits >> (i * n + j)) & 1) << (j * n + i);
            }
        }
        out
    }

    /// Calls `visit` with the image of `bits` under every group element; stops
    /// early when `visit` returns `false`.
    #[inline]
    fn for_each_image(&self, bits: u32, mut visit: impl FnMut(u32) -> bool) -> bool {
        let (m, n) = (self.dims.m, self.dims.n);
        let row_mask = (1u32 << n) - 1;
        let mut rows = [0u32; 8];
        let sources = [
            bits,
            if self.transpose {
                self.transpose_bits(bits)
            } else {
                0
            },
        ];
        for &src in &sources[..1 + self.transpose as usize] {
            for table in &self.col_tables {
                for (i, row) in rows.iter_mut().enumerate().take(m) {
                    *row = table[((src >> (i * n)) & row_mask) as usize];
                }
                for op in &self.row_ops {
                    let mut image = 0u32;
                    for (i, &ri) in op.iter().enumerate() {
                        image |= rows[ri as usize] << (i * n);
                    }
                    if !visit(image) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Smallest bit pattern in the orbit of `bits`.
    #[inline]
    pub fn canonical_bits(&self, bits: u32) -> u32 {
        let mut best = bits;
        self.for_each_image(bits, |img| {
            best = best.min(img);
            true
        });
        best
    }

    /// True when no image of `bits` is smaller than `bits` itself.
    #[inline]
    pub fn is_canonical(&self, bits: u32) -> bool {
        self.for_each_image(bits, |img| img >= bits)
    }

    /// Number of group elements fixing `bits`.
    pub fn stabilizer_order(&self, bits: u32) -> usize {
        let mut count = 0;
        self.for_each_image(bits, |img| {
            count += (img == bits) as usize;
            true
        });
        count
    }

    /// Orbit representative: the minimum bits-value over all images.
    pub fn canonicalize(&self, x: &LatticeState) -> Result<LatticeState> {
        if x.dims() != self.dims {
            return Err(Error::DimensionMismatch(format!(
                "group for {} applied to {} state",
                self.dims,
                x.dims()
            )));
        }
        Ok(LatticeState::from_bits_unchecked(
            self.canonical_bits(x.bits()),
            self.dims,
        ))
    }

    /// Set of all images of `x`.
    pub fn orbit(&self, x: &LatticeState) -> Vec<LatticeState> {
        let mut out: Vec<u32> = Vec::new();
        self.for_each_image(x.bits(), |img| {
            out.push(img);
            true
        });
        out.sort_unstable();
        out.dedup();
        debug_assert!(out.iter().all(|&b| b & !full_mask(self.dims) == 0));
        out.into_iter()
            .map(|b| LatticeState::from_bits_unchecked(b, self.dims))
            .collect()
    }
}

/// The generating permutations for `dims`.
pub fn generators(dims: LatticeDims, transpose: bool) -> Vec<SitePermutation> {
    let (m, n) = (dims.m, dims.n);
    let mut gens = vec![
        SitePermutation::from_map(dims, |i, j| ((i + 1) % m, j)),
        SitePermutation::from_map(dims, |i, j| (m - 1 - i, j)),
        SitePermutation::from_map(dims, |i, j| (i, (j + 1) % n)),
        SitePermutation::from_map(dims, |i, j| (i, n - 1 - j)),
    ];
    if transpose && dims.is_square() {
        gens.push(SitePermutation::from_map(dims, |i, j| (j, i)));
    }
    gens
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn dims(m: usize, n: usize) -> LatticeDims {
        LatticeDims::new(m, n).unwrap()
    }

    /// Closure of the generator set under composition.
    fn closure(gens: &[SitePermutation]) -> HashSet<SitePermutation> {
        let mut seen: HashSet<SitePermutation> = HashSet::new();
        let mut frontier = vec![SitePermutation::identity(dims_of(gens))];
        while let Some(g) = frontier.pop() {
            if seen.insert(g.clone()) {
                for h in gens {
                    frontier.push(h.compose(&g));
                }
            }
        }
        seen
    }

    fn dims_of(gens: &[SitePermutation]) -> LatticeDims {
        let len = gens[0].len();
        // only used with 3x3, 3x4 and 4x4 below
        match len {
            9 => dims(3, 3),
            12 => dims(3, 4),
            16 => dims(4, 4),
            _ => unreachable!(),
        }
    }

    #[test]
    fn materialized_elements_equal_generated_group() {
        for (m, n, t) in [(3, 3, false), (3, 3, true), (3, 4, false), (4, 4, true)] {
            let d = dims(m, n);
            let g = SymmetryGroup::new(d, t).unwrap();
            let listed: HashSet<_> = g.elements().iter().cloned().collect();
            assert_eq!(listed.len(), g.order(), "duplicate elements for {d}");
            assert_eq!(listed, closure(&g.generators()), "{d} transpose={t}");
            assert_eq!(8 * m * n % g.order(), 0);
        }
    }

    #[test]
    fn factored_images_match_site_permutations() {
        for (m, n, t) in [(3, 3, true), (3, 4, false), (4, 3, false)] {
            let g = SymmetryGroup::new(dims(m, n), t).unwrap();
            for bits in (0..1u32 << (m * n)).step_by(7) {
                let mut fast = Vec::new();
                g.for_each_image(bits, |img| {
                    fast.push(img);
                    true
                });
                let mut slow: Vec<u32> = g.elements().iter().map(|s| s.apply_bits(bits)).collect();
                fast.sort_unstable();
                slow.sort_unstable();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn generators_commute_with_neighbor_counts() {
        let d = dims(3, 3);
        for sigma in generators(d, true) {
            for bits in 0..512u32 {
                let x = LatticeState::new(bits, d).unwrap();
                let xs = apply_permutation(&x, &sigma).unwrap();
                for s in 0..9 {
                    let src = sigma.source(s);
                    assert_eq!(
                        xs.neighbor_count(s / 3, s % 3).unwrap(),
                        x.neighbor_count(src / 3, src % 3).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn rotation_has_order_m() {
        let d = dims(4, 3);
        let x = LatticeState::new(0b1011_0010_0110, d).unwrap();
        let rot = &generators(d, false)[0];
        let mut y = x;
        for k in 1..=4 {
            y = apply_permutation(&y, rot).unwrap();
            assert_eq!(y == x, k == 4);
        }
        assert_eq!(
            apply_permutation(&x, &SitePermutation::identity(d)).unwrap(),
            x
        );
    }

    #[test]
    fn constant_states_are_fixed() {
        let d = dims(3, 4);
        let g = SymmetryGroup::new(d, false).unwrap();
        let zero = LatticeState::zeros(d);
        let one = LatticeState::ones(d);
        for sigma in g.elements() {
            assert_eq!(apply_permutation(&zero, sigma).unwrap(), zero);
        }
        assert_eq!(g.canonicalize(&one).unwrap(), one);
    }

    #[test]
    fn transpose_rejected_for_rectangles() {
        assert!(matches!(
            SymmetryGroup::new(dims(3, 4), true),
            Err(Error::TransposeNonSquare { .. })
        ));
    }

    #[test]
    fn canonical_form_is_orbit_invariant_and_idempotent() {
        let d = dims(3, 3);
        let g = SymmetryGroup::new(d, true).unwrap();
        for bits in 0..512u32 {
            let x = LatticeState::new(bits, d).unwrap();
            let c = g.canonicalize(&x).unwrap();
            assert_eq!(g.canonicalize(&c).unwrap(), c);
            for sigma in g.elements() {
                let y = apply_permutation(&x, sigma).unwrap();
                assert_eq!(g.canonicalize(&y).unwrap(), c);
            }
            assert_eq!(g.orbit(&x).len() * g.stabilizer_order(bits), g.order());
        }
    }

    #[test]
    fn mismatched_dims_rejected() {
        let g = SymmetryGroup::new(dims(3, 3), false).unwrap();
        let x = LatticeState::zeros(dims(3, 4));
        assert!(g.canonicalize(&x).is_err());
        assert!(apply_permutation(&x, &g.elements()[1]).is_err());
    }
}
