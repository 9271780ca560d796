use std::cmp::Ordering;

use crate::epcore::EpSet;
use crate::error::{Error, Result};

/// Order type of one block of a [`BasisOrderFlag`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// Finitely many points in order; each point lists the basis indices
    /// placed there.
    FinitePoints(Vec<Vec<usize>>),
    /// The block's indices in ascending order.
    OmegaUp(EpSet),
    /// The block's indices in descending order.
    OmegaDown(EpSet),
}

/// Place of a basis index: block number and rank inside the block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub block: usize,
    pub key: i64,
}

impl PartialOrd for Position {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Position {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.block, self.key).cmp(&(o.block, o.key))
    }
}

/// Flag in a pure-basis `V` given by an ordered partition of the basis:
/// its members are `span(e_i : sigma(i) <= x)` and `span(e_i : sigma(i) < x)`.
#[derive(Clone, Debug)]
pub struct BasisOrderFlag {
    blocks: Vec<Block>,
    sets: Vec<EpSet>,
}

impl BasisOrderFlag {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let mut sets = Vec::new();
        let mut seen = EpSet::empty();
        for b in &blocks {
            let s = match b {
                Block::FinitePoints(points) => EpSet::finite(points.iter().flatten().copied()),
                Block::OmegaUp(s) | Block::OmegaDown(s) => s.clone(),
            };
            if let Block::FinitePoints(points) = b {
                let total: usize = points.iter().map(Vec::len).sum();
                if total != s.members_in(0, s.max_member().map_or(0, |m| m + 1)).len() {
                    return Err(Error::Invalid("basis index repeated inside a block".into()));
                }
            }
            if !seen.is_disjoint(&s) {
                return Err(Error::Invalid("blocks overlap".into()));
            }
            seen = seen.union(&s);
            sets.push(s);
        }
        if !seen.is_naturals() {
            return Err(Error::Invalid("blocks do not cover every basis index".into()));
        }
        Ok(BasisOrderFlag { blocks, sets })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_set(&self, k: usize) -> &EpSet {
        &self.sets[k]
    }

    pub fn position(&self, i: usize) -> Position {
        let block = self.sets.iter().position(|s| s.contains(i)).expect("partition");
        let key = match &self.blocks[block] {
            Block::FinitePoints(points) => points.iter().position(|p| p.contains(&i)).unwrap() as i64,
            Block::OmegaUp(s) => s.rank(i) as i64,
            Block::OmegaDown(s) => -(s.rank(i) as i64),
        };
        Position { block, key }
    }

    /// `sigma(i) <= sigma(j)`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.position(i) <= self.position(j)
    }

    /// All quotients are one-dimensional, i.e. no two indices share a place.
    pub fn is_maximal_closed(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::FinitePoints(points) => points.iter().all(|p| p.len() == 1),
            _ => true,
        })
    }
}
