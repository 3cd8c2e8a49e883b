use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TriGroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    S,
    T,
}

impl Gen {
    pub fn symbol(self) -> char {
        match self {
            Gen::S => 's',
            Gen::T => 't',
        }
    }
}

/// Word in the generators s, t as a list of (generator, nonzero exponent) blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroupWord {
    blocks: Vec<(Gen, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord { blocks: Vec::new() }
    }

    /// Builds a word, merging adjacent equal generators and dropping zero exponents.
    pub fn new(blocks: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut out: Vec<(Gen, i64)> = Vec::new();
        for (g, e) in blocks {
            if let Some(last) = out.last_mut() {
                if last.0 == g {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            if e != 0 {
                out.push((g, e));
            }
        }
        GroupWord { blocks: out }
    }

    pub fn single(g: Gen, e: i64) -> Self {
        Self::new([(g, e)])
    }

    pub fn blocks(&self) -> &[(Gen, i64)] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total number of letters, Σ|exponent|.
    pub fn letter_count(&self) -> u64 {
        self.blocks.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            blocks: self.blocks.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        Self::new(self.blocks.iter().chain(other.blocks.iter()).copied())
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::new((0..k).flat_map(|_| self.blocks.iter().copied()))
    }

    /// Rotation that moves the first `k` blocks to the end (merging at the seam).
    pub fn rotate(&self, k: usize) -> Self {
        let k = k % self.blocks.len().max(1);
        Self::new(self.blocks[k..].iter().chain(self.blocks[..k].iter()).copied())
    }

    /// Reduces exponents of finite-order generators into 1..order-1 (projectively).
    pub fn canonical(&self, order_s: Option<u32>, order_t: Option<u32>) -> Self {
        let reduce = |g: Gen, e: i64| -> i64 {
            let order = match g {
                Gen::S => order_s,
                Gen::T => order_t,
            };
            match order {
                Some(o) => e.rem_euclid(o as i64),
                None => e,
            }
        };
        let mut w = self.clone();
        loop {
            let next = GroupWord::new(w.blocks.iter().map(|&(g, e)| (g, reduce(g, e))));
            if next == w {
                return w;
            }
            w = next;
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            if *e == 1 {
                write!(f, "{}", g.symbol())?;
            } else {
                write!(f, "{}^{}", g.symbol(), e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = TriGroupError;

    /// Parses "t^3.s.t^-1.s^5"; "1" or the empty string is the identity.
    /// Braces as in "t^{3}" are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(GroupWord::identity());
        }
        let bad = || TriGroupError::WordSyntax(s.to_string());
        let mut blocks = Vec::new();
        for part in s.split('.') {
            let part = part.trim();
            let (g, rest) = part.split_at(part.chars().next().map_or(0, char::len_utf8));
            let gen = match g {
                "s" => Gen::S,
                "t" => Gen::T,
                _ => return Err(bad()),
            };
            let e = if rest.is_empty() {
                1
            } else {
                let exp = rest.strip_prefix('^').ok_or_else(bad)?;
                let exp = exp.trim_start_matches('{').trim_end_matches('}');
                exp.parse::<i64>().map_err(|_| bad())?
            };
            if e == 0 {
                return Err(bad());
            }
            blocks.push((gen, e));
        }
        let w = GroupWord::new(blocks.iter().copied());
        if w.blocks.len() != blocks.len() {
            // adjacent repeated generators are not canonical input
            return Err(bad());
        }
        Ok(w)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
