//! Permutations in one-line notation, classical pattern occurrences and the
//! three standard symmetries.
//!
//! Values and positions are 1-based throughout, matching one-line notation:
//! the permutation `42135` sends position 1 to 4, position 2 to 2, and so on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};

/// A bijection on `{1..k}`, stored as its one-line word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    word: Vec<usize>,
}

/// A point `(col, π(col))` of the graph of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub col: usize,
    pub row: usize,
}

impl Point {
    pub fn new(col: usize, row: usize) -> Self {
        Point { col, row }
    }
}

/// Strictly increasing 1-based positions in a host permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occurrence(Vec<usize>);

impl Occurrence {
    /// Wraps positions without checking them against a host.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidOccurrence("empty index tuple".into()));
        }
        if indices[0] == 0 {
            return Err(Error::InvalidOccurrence("positions are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidOccurrence(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        Ok(Occurrence(indices))
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Occurrence(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that every position lies in `1..=n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last <= n => Ok(()),
            _ => Err(Error::InvalidOccurrence(format!(
                "{self} does not fit in a host of length {n}"
            ))),
        }
    }

    /// Host values at these positions, in position order.
    pub fn values(&self, host: &Permutation) -> Vec<usize> {
        self.0.iter().map(|&i| host.at(i)).collect()
    }

    /// The occurrence in `sym(host)` that corresponds to this one in `host`.
    pub fn transform(&self, host: &Permutation, sym: Symmetry) -> Occurrence {
        let n = host.len();
        let mut idx: Vec<usize> = match sym {
            Symmetry::Reverse => self.0.iter().map(|&i| n + 1 - i).collect(),
            Symmetry::Complement => self.0.clone(),
            Symmetry::Inverse => self.values(host),
        };
        idx.sort_unstable();
        Occurrence(idx)
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Occurrence {
    type Err = Error;

    /// Accepts `1,2,4`, `(1,2,4)` or, for single-digit positions, `124`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let indices = parse_int_list(body)?;
        Occurrence::new(indices).map_err(|e| parse_err(s, e.to_string()))
    }
}

/// One of the three generators of the symmetry group of the square acting
/// on permutation diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// Position `i` goes to `k+1-i`.
    Reverse,
    /// Value `v` goes to `k+1-v`.
    Complement,
    /// Functional inverse; transposes the diagram.
    Inverse,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::Reverse, Symmetry::Complement, Symmetry::Inverse];
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reverse" => Ok(Symmetry::Reverse),
            "complement" => Ok(Symmetry::Complement),
            "inverse" => Ok(Symmetry::Inverse),
            _ => Err(parse_err(s, "expected reverse, complement or inverse")),
        }
    }
}

impl Permutation {
    /// Builds a permutation from its one-line word.
    pub fn from_word(values: Vec<usize>) -> Result<Self> {
        let k = values.len();
        if k == 0 {
            return Err(Error::InvalidPermutation("empty word".into()));
        }
        let mut seen = vec![false; k + 1];
        for &v in &values {
            if v == 0 || v > k {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={k}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("repeated value {v}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { word: values })
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            word: (1..=k).collect(),
        }
    }

    /// `k k-1 ... 1`.
    pub fn decreasing(k: usize) -> Self {
        Permutation {
            word: (1..=k).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// `π(i)` for a 1-based position.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    /// Whether `(col,row)` is a point of the graph. Coordinates outside
    /// `1..=k` are never points.
    #[inline]
    pub fn has_point(&self, col: usize, row: usize) -> bool {
        col >= 1 && col <= self.word.len() && self.word[col - 1] == row
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.word
            .iter()
            .enumerate()
            .map(|(i, &v)| Point::new(i + 1, v))
    }

    pub fn reverse(&self) -> Permutation {
        Permutation {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn complement(&self) -> Permutation {
        let k = self.len();
        Permutation {
            word: self.word.iter().map(|&v| k + 1 - v).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v - 1] = i + 1;
        }
        Permutation { word }
    }

    pub fn apply(&self, sym: Symmetry) -> Permutation {
        match sym {
            Symmetry::Reverse => self.reverse(),
            Symmetry::Complement => self.complement(),
            Symmetry::Inverse => self.inverse(),
        }
    }

    /// Every classical occurrence of `pattern`, in lexicographic order of
    /// index tuples.
    pub fn occurrences(&self, pattern: &Permutation) -> Vec<Occurrence> {
        let mut out = Vec::new();
        self.for_each_occurrence(pattern, |idx| {
            out.push(Occurrence::from_sorted(idx.to_vec()));
            true
        });
        out
    }

    pub fn contains(&self, pattern: &Permutation) -> bool {
        let mut found = false;
        self.for_each_occurrence(pattern, |_| {
            found = true;
            false
        });
        found
    }

    /// Depth-first walk over occurrences in lexicographic order. The visitor
    /// returns `false` to stop early.
    pub(crate) fn for_each_occurrence<F>(&self, pattern: &Permutation, mut visit: F)
    where
        F: FnMut(&[usize]) -> bool,
    {
        let k = pattern.len();
        if k > self.len() {
            return;
        }
        let mut idx = Vec::with_capacity(k);
        self.occurrence_dfs(pattern, 1, &mut idx, &mut visit);
    }

    fn occurrence_dfs<F>(
        &self,
        pattern: &Permutation,
        from: usize,
        idx: &mut Vec<usize>,
        visit: &mut F,
    ) -> bool
    where
        F: FnMut(&[usize]) -> bool,
    {
        let t = idx.len();
        let k = pattern.len();
        if t == k {
            return visit(idx);
        }
        let n = self.len();
        // leave room for the remaining k - t - 1 entries
        for pos in from..=(n - (k - t - 1)) {
            let v = self.at(pos);
            let pv = pattern.word[t];
            let consistent = idx
                .iter()
                .enumerate()
                .all(|(s, &q)| (v > self.at(q)) == (pv > pattern.word[s]));
            if !consistent {
                continue;
            }
            idx.push(pos);
            let keep_going = self.occurrence_dfs(pattern, pos + 1, idx, visit);
            idx.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// The occurrence-independent "pattern" of a subsequence.
    pub fn pattern_at(&self, occ: &Occurrence) -> Permutation {
        flatten_ints(&occ.values(self)).expect("host values are distinct")
    }

    /// Rendered as digits when `k <= 9`, otherwise comma-separated.
    pub fn to_text(&self) -> String {
        if self.len() <= 9 {
            self.word.iter().map(usize::to_string).collect()
        } else {
            let parts: Vec<String> = self.word.iter().map(usize::to_string).collect();
            parts.join(",")
        }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(word: Vec<usize>) -> Result<Self> {
        Permutation::from_word(word)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.word
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_text())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = parse_int_list(s.trim())?;
        Permutation::from_word(word).map_err(|e| parse_err(s, e.to_string()))
    }
}

/// Parses `4,2,1,3,5` or the digit form `42135`.
pub(crate) fn parse_int_list(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(parse_err(s, "empty"));
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .map_err(|_| parse_err(t, "expected a non-negative integer"))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| parse_err(c.to_string(), "expected a digit"))
            })
            .collect()
    }
}

/// The unique permutation order-isomorphic to a sequence of distinct values.
pub fn flatten<T: PartialOrd + fmt::Debug>(values: &[T]) -> Result<Permutation> {
    if values.is_empty() {
        return Err(Error::InvalidPermutation("empty word".into()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    let mut tie = None;
    order.sort_by(|&a, &b| {
        values[a].partial_cmp(&values[b]).unwrap_or_else(|| {
            tie = Some(a);
            std::cmp::Ordering::Equal
        })
    });
    if let Some(a) = tie {
        return Err(Error::Tie(format!("{:?} is not comparable", values[a])));
    }
    if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::Tie(format!("{:?}", values[w[0]])));
    }
    let mut word = vec![0; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        word[i] = rank + 1;
    }
    Ok(Permutation { word })
}

pub(crate) fn flatten_ints(values: &[usize]) -> Result<Permutation> {
    flatten(values)
}

/// All permutations of `{1..n}` in lexicographic order.
pub fn all_permutations(n: usize) -> Result<Permutations> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(Permutations {
        next: Some((1..=n).collect()),
    })
}

/// Lexicographic iterator over `S_n`.
#[derive(Debug, Clone)]
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lexicographic(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { word: current })
    }
}

fn next_lexicographic(w: &mut [usize]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| w[i] < w[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
    w.swap(i, j);
    w[i + 1..].reverse();
    true
}
