//! Basis blades of the exterior algebra as index bitmasks.

use std::fmt;

/// An increasing wedge of coframe elements `e^{i1} ∧ … ∧ e^{ik}` with
/// `1 ≤ i1 < … < ik ≤ 8`, stored as a `u8` bitmask (bit `i-1` set iff the
/// index `i` occurs). The empty blade is the scalar basis element `1`.
///
/// The derived `Ord` is ascending-mask order, which is the fixed enumeration
/// convention for matrix columns throughout the crate.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u8);

impl Blade {
    /// The degree-zero blade `1`.
    pub const SCALAR: Blade = Blade(0);

    /// Builds a blade directly from its bitmask.
    pub const fn from_mask(mask: u8) -> Blade {
        Blade(mask)
    }

    /// Builds the blade with the given ascending 1-based indices.
    ///
    /// Returns `None` if any index is 0, exceeds `dim`, repeats, or is out of
    /// order. Unordered input belongs in [`Blade::from_unsorted`].
    pub fn from_indices(indices: &[u8], dim: u8) -> Option<Blade> {
        let mut mask = 0u8;
        let mut prev = 0u8;
        for &i in indices {
            if i == 0 || i > dim || i <= prev {
                return None;
            }
            mask |= 1 << (i - 1);
            prev = i;
        }
        Some(Blade(mask))
    }

    /// Builds a blade from arbitrary-order 1-based indices, returning the
    /// sorted blade and the sign of the sorting permutation.
    ///
    /// Returns `None` if any index is 0, exceeds `dim`, or repeats.
    pub fn from_unsorted(indices: &[u8], dim: u8) -> Option<(Blade, i8)> {
        let mut mask = 0u8;
        let mut sign = 1i8;
        for (pos, &i) in indices.iter().enumerate() {
            if i == 0 || i > dim {
                return None;
            }
            let bit = 1u8 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            // Parity of the number of earlier entries greater than i.
            let later = indices[..pos].iter().filter(|&&j| j > i).count();
            if later % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((Blade(mask), sign))
    }

    /// The blade `e^{1…dim}` spanning the top exterior power.
    pub fn top(dim: u8) -> Blade {
        debug_assert!(dim <= 8);
        Blade(if dim == 8 { u8::MAX } else { (1 << dim) - 1 })
    }

    /// The raw bitmask.
    pub const fn mask(self) -> u8 {
        self.0
    }

    /// Number of indices in the blade.
    pub const fn degree(self) -> u8 {
        self.0.count_ones() as u8
    }

    /// True when the 1-based index `i` occurs in the blade.
    pub const fn contains(self, i: u8) -> bool {
        i >= 1 && i <= 8 && self.0 & (1 << (i - 1)) != 0
    }

    /// Largest 1-based index in the blade, or 0 for the scalar blade.
    pub const fn max_index(self) -> u8 {
        (8 - self.0.leading_zeros()) as u8
    }

    /// Ascending 1-based indices of the blade.
    pub fn indices(self) -> impl Iterator<Item = u8> {
        let mask = self.0;
        (1..=8u8).filter(move |i| mask & (1 << (i - 1)) != 0)
    }

    /// Complementary blade inside `e^{1…dim}`.
    pub fn complement(self, dim: u8) -> Blade {
        debug_assert_eq!(self.0 & !Blade::top(dim).0, 0);
        Blade(Blade::top(dim).0 & !self.0)
    }

    /// Wedge of two blades: `None` when they share an index, otherwise the
    /// merged blade together with the sign of the merging permutation.
    ///
    /// The sign is `(-1)^c` where `c` counts pairs `(i, j)` with `i` in
    /// `self`, `j` in `other`, and `i > j`.
    pub fn wedge(self, other: Blade) -> Option<(Blade, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut crossings = 0u32;
        for j in other.indices() {
            // Indices of self strictly greater than j.
            let above = self.0 & !((1u16 << j) as u8).wrapping_sub(1);
            crossings += above.count_ones();
        }
        let sign = if crossings.is_multiple_of(2) { 1 } else { -1 };
        Some((Blade(self.0 | other.0), sign))
    }

    /// Removes index `i` (which must occur), returning the reduced blade and
    /// the sign `(-1)^{pos}` where `pos` counts indices of the blade below `i`.
    pub fn remove(self, i: u8) -> Option<(Blade, i8)> {
        if !self.contains(i) {
            return None;
        }
        let below = (self.0 & ((1 << (i - 1)) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1 } else { -1 };
        Some((Blade(self.0 & !(1 << (i - 1))), sign))
    }

    /// All blades of the given degree in ascending-mask order.
    pub fn enumerate(dim: u8, degree: u8) -> Vec<Blade> {
        let top = Blade::top(dim).0 as u16;
        (0..=top)
            .map(|m| Blade(m as u8))
            .filter(|b| b.degree() == degree)
            .collect()
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e^{{")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs_match_hand_computations() {
        let e13 = Blade::from_indices(&[1, 3], 7).unwrap();
        let e2 = Blade::from_indices(&[2], 7).unwrap();
        // e^{13} ∧ e^{2} = -e^{123}: moving 2 past 3 costs one transposition.
        let (b, s) = e13.wedge(e2).unwrap();
        assert_eq!(b, Blade::from_indices(&[1, 2, 3], 7).unwrap());
        assert_eq!(s, -1);
        // e^{2} ∧ e^{13} = -e^{123}: the pair (2, 1) crosses.
        let (b, s) = e2.wedge(e13).unwrap();
        assert_eq!(b.mask(), 0b111);
        assert_eq!(s, -1);
        // e^{1} ∧ e^{23} = +e^{123}: nothing crosses.
        let e1 = Blade::from_indices(&[1], 7).unwrap();
        let e23 = Blade::from_indices(&[2, 3], 7).unwrap();
        assert_eq!(e1.wedge(e23).unwrap(), (Blade::from_mask(0b111), 1));
    }

    #[test]
    fn wedge_rejects_shared_indices() {
        let e12 = Blade::from_mask(0b11);
        let e23 = Blade::from_mask(0b110);
        assert!(e12.wedge(e23).is_none());
    }

    #[test]
    fn remove_signs_alternate_with_position() {
        let e123 = Blade::from_mask(0b111);
        let (b, s) = e123.remove(1).unwrap();
        assert_eq!((b.mask(), s), (0b110, 1));
        let (b, s) = e123.remove(2).unwrap();
        assert_eq!((b.mask(), s), (0b101, -1));
        let (b, s) = e123.remove(3).unwrap();
        assert_eq!((b.mask(), s), (0b011, 1));
        assert!(e123.remove(4).is_none());
    }

    #[test]
    fn from_unsorted_tracks_permutation_sign() {
        let (b, s) = Blade::from_unsorted(&[2, 1], 7).unwrap();
        assert_eq!((b.mask(), s), (0b11, -1));
        let (b, s) = Blade::from_unsorted(&[3, 1, 2], 7).unwrap();
        assert_eq!((b.mask(), s), (0b111, 1));
        assert!(Blade::from_unsorted(&[1, 1], 7).is_none());
        assert!(Blade::from_unsorted(&[8], 7).is_none());
    }

    #[test]
    fn enumerate_is_ascending_mask_order() {
        let blades = Blade::enumerate(4, 2);
        let masks: Vec<u8> = blades.iter().map(|b| b.mask()).collect();
        assert_eq!(masks, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(Blade::enumerate(7, 3).len(), 35);
    }

    #[test]
    fn complement_and_top() {
        let e12 = Blade::from_mask(0b11);
        assert_eq!(e12.complement(7).mask(), 0b111_1100);
        assert_eq!(Blade::top(7).mask(), 0b111_1111);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Blade::SCALAR.to_string(), "1");
        assert_eq!(Blade::from_mask(0b101).to_string(), "e^{13}");
    }
}
