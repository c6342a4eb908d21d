//! Fixed-width bitsets for symbol alphabets (up to 256 ids).

/// Set of symbol ids in `0..256`, stored as four machine words.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug, Hash)]
pub struct SymSet {
    words: [u64; 4],
}

impl SymSet {
    pub const EMPTY: SymSet = SymSet { words: [0; 4] };

    #[inline]
    pub fn insert(&mut self, sym: u16) {
        self.words[(sym >> 6) as usize] |= 1u64 << (sym & 63);
    }

    #[inline]
    pub fn remove(&mut self, sym: u16) {
        self.words[(sym >> 6) as usize] &= !(1u64 << (sym & 63));
    }

    #[inline]
    pub fn contains(&self, sym: u16) -> bool {
        self.words[(sym >> 6) as usize] >> (sym & 63) & 1 != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words == [0; 4]
    }

    pub fn union(&self, other: &SymSet) -> SymSet {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
        SymSet { words }
    }

    pub fn intersection(&self, other: &SymSet) -> SymSet {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= o;
        }
        SymSet { words }
    }

    pub fn difference(&self, other: &SymSet) -> SymSet {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        SymSet { words }
    }

    pub fn is_subset(&self, other: &SymSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(w, o)| w & !o == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        (0..4usize).flat_map(move |wi| {
            let mut w = self.words[wi];
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as u16;
                    w &= w - 1;
                    Some((wi as u16) << 6 | b)
                }
            })
        })
    }
}

impl FromIterator<u16> for SymSet {
    fn from_iter<T: IntoIterator<Item = u16>>(iter: T) -> Self {
        let mut set = SymSet::EMPTY;
        for sym in iter {
            set.insert(sym);
        }
        set
    }
}
