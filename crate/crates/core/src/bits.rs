//! Subsets of a ground set of at most 24 points, stored as `u32` masks.

pub type Subset = u32;

pub const MAX_POINTS: usize = 24;

#[inline]
pub fn full(n: usize) -> Subset {
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
pub fn single(i: usize) -> Subset {
    1u32 << i
}

#[inline]
pub fn contains(s: Subset, i: usize) -> bool {
    s >> i & 1 == 1
}

#[inline]
pub fn is_subset(a: Subset, b: Subset) -> bool {
    a & !b == 0
}

pub fn members(s: Subset) -> impl Iterator<Item = usize> {
    let mut rest = s;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Nonempty submasks of `s`, in decreasing numeric order.
pub fn nonempty_submasks(s: Subset) -> impl Iterator<Item = Subset> {
    let mut cur = Some(s);
    std::iter::from_fn(move || {
        let c = cur?;
        if c == 0 {
            return None;
        }
        cur = Some((c - 1) & s);
        Some(c)
    })
}

/// Packs the bits of `s` that lie in `domain` into the low positions.
pub fn compress(s: Subset, domain: Subset) -> Subset {
    let mut out = 0;
    for (k, i) in members(domain).enumerate() {
        if contains(s, i) {
            out |= single(k);
        }
    }
    out
}

/// Inverse of [`compress`].
pub fn expand(s: Subset, domain: Subset) -> Subset {
    let mut out = 0;
    for (k, i) in members(domain).enumerate() {
        if contains(s, k) {
            out |= single(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_cover_powerset_minus_empty() {
        let v: Vec<_> = nonempty_submasks(0b101).collect();
        assert_eq!(v, vec![0b101, 0b100, 0b001]);
        assert_eq!(nonempty_submasks(0).count(), 0);
    }

    #[test]
    fn compress_expand_roundtrip() {
        let dom = 0b1011_0010;
        for s in 0..256u32 {
            let c = compress(s, dom);
            assert_eq!(expand(c, dom), s & dom);
        }
    }
}
