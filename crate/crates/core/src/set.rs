use crate::expr::Expr;

/// One expression together with its evaluated value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub value: u64,
    pub expr: Expr,
}

/// Expressions kept in strictly ascending order of value.
///
/// Values are held as `u64`; every generator that fills an `ExprSet` caps its
/// output far below that range.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExprSet {
    entries: Vec<Entry>,
}

impl ExprSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary entries, sorting by value. Returns `None`
    /// if two entries share a value.
    pub fn from_unsorted(mut entries: Vec<Entry>) -> Option<Self> {
        entries.sort_unstable_by_key(|e| e.value);
        if entries.windows(2).any(|w| w[0].value == w[1].value) {
            return None;
        }
        Some(ExprSet { entries })
    }

    /// Appends an entry whose value exceeds every value already present.
    pub fn push(&mut self, value: u64, expr: Expr) {
        if let Some(last) = self.entries.last() {
            assert!(value > last.value, "ExprSet values must ascend ({} after {})", value, last.value);
        }
        self.entries.push(Entry { value, expr });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Entry> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn exprs(&self) -> impl Iterator<Item = &Expr> + '_ {
        self.entries.iter().map(|e| &e.expr)
    }

    pub fn get(&self, value: u64) -> Option<&Expr> {
        self.entries
            .binary_search_by_key(&value, |e| e.value)
            .ok()
            .map(|i| &self.entries[i].expr)
    }

    pub fn contains_value(&self, value: u64) -> bool {
        self.get(value).is_some()
    }

    pub fn max_value(&self) -> Option<u64> {
        self.entries.last().map(|e| e.value)
    }

    /// True when the values are exactly `1..=len`.
    pub fn is_contiguous(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, e)| e.value == i as u64 + 1)
    }

    pub fn truncate_to_value(&mut self, max: u64) {
        let keep = self.entries.partition_point(|e| e.value <= max);
        self.entries.truncate(keep);
    }
}

impl<'a> IntoIterator for &'a ExprSet {
    type Item = &'a Entry;
    type IntoIter = std::slice::Iter<'a, Entry>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}
