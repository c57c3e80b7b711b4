use std::collections::HashMap;

use crate::error::{Error, Result};

/// Ordered finite item domain. Position in the list is the item's index and,
/// for ordinal metrics, its ordinal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    items: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let items: Vec<String> = items.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            if index.insert(item.clone(), i).is_some() {
                return Err(Error::DuplicateItem(item.clone()));
            }
        }
        if items.len() < 2 {
            return Err(Error::UniverseTooSmall(items.len()));
        }
        Ok(Self { items, index })
    }

    /// The integers `0..n` as decimal strings.
    pub fn integers(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    /// Parses the universe file format: one identifier per line, surrounding
    /// whitespace trimmed, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.lines().map(str::trim).filter(|l| !l.is_empty()))
    }

    pub fn size(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn item(&self, index: usize) -> Option<&str> {
        self.items.get(index).map(String::as_str)
    }

    pub fn index_of(&self, item: &str) -> Option<usize> {
        self.index.get(item).copied()
    }

    /// Like [`Universe::index_of`] but unknown items are an error.
    pub fn require(&self, item: &str) -> Result<usize> {
        self.index_of(item)
            .ok_or_else(|| Error::UnknownItem(item.to_string()))
    }

    pub fn check_index(&self, index: usize) -> Result<usize> {
        if index < self.size() {
            Ok(index)
        } else {
            Err(Error::IndexOutOfRange {
                index,
                size: self.size(),
            })
        }
    }
}
