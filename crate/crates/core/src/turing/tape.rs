//! Tape configurations: finite-support words `ℤ → Σ` read relative to the head.

use std::collections::BTreeMap;
use std::fmt;

use super::{Move, BLANK};

/// A tape with the head at offset 0.
///
/// Cells are stored at absolute positions together with the absolute head position, so
/// a head move is O(1). All public accessors speak relative offsets; equality compares
/// the relative configuration. Blanks are never stored.
#[derive(Clone, Debug, Default)]
pub struct Tape {
    cells: BTreeMap<i64, char>,
    head: i64,
}

impl Tape {
    pub fn blank() -> Self {
        Tape::default()
    }

    /// The word written at offsets `0..n`, head on the first symbol.
    pub fn from_literal(word: &str) -> Self {
        Tape::from_cells(word.chars().enumerate().map(|(i, c)| (i as i64, c)))
    }

    pub fn from_cells<I: IntoIterator<Item = (i64, char)>>(cells: I) -> Self {
        let cells = cells.into_iter().filter(|(_, c)| *c != BLANK).collect();
        Tape { cells, head: 0 }
    }

    /// `w(z)`
    pub fn get(&self, offset: i64) -> char {
        self.cells
            .get(&(self.head + offset))
            .copied()
            .unwrap_or(BLANK)
    }

    pub fn read(&self) -> char {
        self.get(0)
    }

    pub fn write(&mut self, sym: char) {
        if sym == BLANK {
            self.cells.remove(&self.head);
        } else {
            self.cells.insert(self.head, sym);
        }
    }

    /// Re-indexes so the cell in direction `m` becomes offset 0: `◁` gives
    /// `w'(z) = w(z - 1)`, `▷` gives `w'(z) = w(z + 1)`.
    pub fn shift(&mut self, m: Move) {
        self.head += m.delta();
    }

    /// Non-blank cells as `(relative offset, symbol)`, in increasing offset order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, char)> + '_ {
        self.cells.iter().map(move |(z, c)| (z - self.head, *c))
    }

    /// `supp(w)`
    pub fn support(&self) -> Vec<i64> {
        self.cells().map(|(z, _)| z).collect()
    }

    pub fn is_blank(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lowest and highest non-blank offsets.
    pub fn extent(&self) -> Option<(i64, i64)> {
        let lo = self.cells.keys().next()?;
        let hi = self.cells.keys().next_back()?;
        Some((lo - self.head, hi - self.head))
    }

    /// Contiguous rendering over `supp(w) ∪ {0}`, blanks as `_`, head cell in brackets.
    pub fn render(&self) -> String {
        let (lo, hi) = match self.extent() {
            Some((lo, hi)) => (lo.min(0), hi.max(0)),
            None => (0, 0),
        };
        let mut out = String::new();
        for z in lo..=hi {
            if z == 0 {
                out.push('[');
                out.push(self.get(z));
                out.push(']');
            } else {
                out.push(self.get(z));
            }
        }
        out
    }
}

impl PartialEq for Tape {
    fn eq(&self, other: &Self) -> bool {
        self.cells.len() == other.cells.len() && self.cells().eq(other.cells())
    }
}

impl Eq for Tape {}

/// `{offset:sym,...}` in increasing offset order.
impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (z, c)) in self.cells().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{z}:{c}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_and_display() {
        let t = Tape::from_literal("1_1");
        assert_eq!(t.to_string(), "{0:1,2:1}");
        assert_eq!(t.render(), "[1]_1");
        assert_eq!(Tape::blank().render(), "[_]");
    }

    #[test]
    fn shift_reindexes_relative_to_the_head() {
        let mut t = Tape::from_literal("11");
        t.shift(Move::Right);
        assert_eq!(t, Tape::from_cells([(-1, '1'), (0, '1')]));
        t.shift(Move::Left);
        t.shift(Move::Left);
        assert_eq!(t.to_string(), "{1:1,2:1}");
        assert_eq!(t.render(), "[_]11");
    }

    #[test]
    fn writing_blank_erases() {
        let mut t = Tape::from_literal("1");
        t.write(BLANK);
        assert!(t.is_blank());
        assert_eq!(t, Tape::blank());
    }

    #[test]
    fn equality_ignores_absolute_position() {
        let mut a = Tape::from_literal("_1");
        a.shift(Move::Right);
        let b = Tape::from_literal("1");
        assert_eq!(a, b);
        assert_ne!(Tape::from_literal("1"), Tape::from_literal("_1"));
    }
}
