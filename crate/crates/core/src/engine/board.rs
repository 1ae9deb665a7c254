use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::error::CompileError;
use super::Player;

pub type CellId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoardFamily {
    Hex,
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    N,
    S,
    E,
    W,
    NE,
    NW,
    SE,
    SW,
}

impl FromStr for Direction {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "N" => Direction::N,
            "S" => Direction::S,
            "E" => Direction::E,
            "W" => Direction::W,
            "NE" => Direction::NE,
            "NW" => Direction::NW,
            "SE" => Direction::SE,
            "SW" => Direction::SW,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub owner: Player,
    pub edge: Direction,
    pub cells: Vec<CellId>,
}

/// Cell topology of a board: connection adjacency, straight-line rays and
/// player-owned edge regions.
///
/// Cells are indexed row-major from the bottom-left corner: row `r` and
/// column `c` (both 0-based here) map to `r * side + c`. Labels use a column
/// letter and a 1-based row number, so cell 0 is `a1`.
#[derive(Clone, Debug)]
pub struct BoardGraph {
    family: BoardFamily,
    side: usize,
    neighbors: Vec<Vec<CellId>>,
    /// Unit steps in (row, column). The first half are the positive axes,
    /// the second half their opposites in the same order.
    directions: Vec<(i32, i32)>,
    /// `rays[cell][d]`: cells reached by stepping from `cell` along direction `d`.
    rays: Vec<Vec<Vec<CellId>>>,
    labels: Vec<String>,
    regions: Vec<Region>,
    /// Per player, per cell: bit `i` set when the cell lies in that player's `i`-th region.
    region_bits: [Vec<u32>; 2],
    region_counts: [u32; 2],
}

const HEX_AXES: [(i32, i32); 3] = [(0, 1), (1, 0), (1, -1)];
const SQUARE_AXES: [(i32, i32); 4] = [(0, 1), (1, 0), (1, 1), (1, -1)];

/// Column letters: a..z, then aa, ab, ...
pub fn column_name(mut col: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (col % 26) as u8);
        if col < 26 {
            break;
        }
        col = col / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

impl BoardGraph {
    pub fn new(family: BoardFamily, side: usize) -> Result<Self, CompileError> {
        if side < 2 {
            return Err(CompileError::BoardTooSmall(side));
        }
        let axes: &[(i32, i32)] = match family {
            BoardFamily::Hex => &HEX_AXES,
            BoardFamily::Square => &SQUARE_AXES,
        };
        let mut directions = axes.to_vec();
        directions.extend(axes.iter().map(|&(dr, dc)| (-dr, -dc)));
        let n = side as i32;
        let cells = side * side;
        let id = |r: i32, c: i32| -> Option<CellId> {
            (0..n).contains(&r).then_some(())?;
            (0..n).contains(&c).then_some(())?;
            Some((r * n + c) as CellId)
        };
        let mut neighbors = Vec::with_capacity(cells);
        let mut rays = Vec::with_capacity(cells);
        let mut labels = Vec::with_capacity(cells);
        for cell in 0..cells {
            let (r, c) = ((cell / side) as i32, (cell % side) as i32);
            labels.push(format!("{}{}", column_name(c as usize), r + 1));
            let steps: &[(i32, i32)] = match family {
                BoardFamily::Hex => &directions,
                BoardFamily::Square => &[(0, 1), (1, 0), (0, -1), (-1, 0)],
            };
            neighbors.push(
                steps
                    .iter()
                    .filter_map(|&(dr, dc)| id(r + dr, c + dc))
                    .collect::<Vec<_>>(),
            );
            rays.push(
                directions
                    .iter()
                    .map(|&(dr, dc)| {
                        (1..)
                            .map_while(|k| id(r + k * dr, c + k * dc))
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            );
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(BoardGraph {
            family,
            side,
            neighbors,
            directions,
            rays,
            labels,
            regions: Vec::new(),
            region_bits: [vec![0; cells], vec![0; cells]],
            region_counts: [0, 0],
        })
    }

    /// Adds the region of cells along one edge. N/NE is the top row,
    /// S/SW the bottom row, W/NW the left column and E/SE the right column;
    /// corner cells belong to both incident edges.
    pub fn add_edge_region(&mut self, owner: Player, edge: Direction) -> Result<(), CompileError> {
        let k = &mut self.region_counts[owner.index()];
        if *k >= 32 {
            return Err(CompileError::TooManyRegions(owner));
        }
        let bit = 1u32 << *k;
        *k += 1;
        let s = self.side;
        let cells: Vec<CellId> = match edge {
            Direction::N | Direction::NE => ((s - 1) * s..s * s).collect(),
            Direction::S | Direction::SW => (0..s).collect(),
            Direction::W | Direction::NW => (0..s).map(|r| r * s).collect(),
            Direction::E | Direction::SE => (0..s).map(|r| r * s + s - 1).collect(),
        };
        for &c in &cells {
            self.region_bits[owner.index()][c] |= bit;
        }
        self.regions.push(Region { owner, edge, cells });
        Ok(())
    }

    pub fn family(&self) -> BoardFamily {
        self.family
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cell_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, cell: CellId) -> &[CellId] {
        &self.neighbors[cell]
    }

    pub fn directions(&self) -> &[(i32, i32)] {
        &self.directions
    }

    pub fn ray(&self, cell: CellId, direction: usize) -> &[CellId] {
        &self.rays[cell][direction]
    }

    /// Non-empty rays leaving `cell`.
    pub fn line_rays(&self, cell: CellId) -> impl Iterator<Item = &[CellId]> {
        self.rays[cell]
            .iter()
            .filter(|r| !r.is_empty())
            .map(Vec::as_slice)
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn regions_of(&self, player: Player) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(move |r| r.owner == player)
    }

    pub fn region_count(&self, player: Player) -> u32 {
        self.region_counts[player.index()]
    }

    pub fn label(&self, cell: CellId) -> &str {
        &self.labels[cell]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cell_by_label(&self, label: &str) -> Option<CellId> {
        self.labels.iter().position(|l| l == label)
    }

    /// 0-based (row, column) of a cell.
    pub fn coords(&self, cell: CellId) -> (usize, usize) {
        (cell / self.side, cell % self.side)
    }

    pub fn cell_at(&self, row: usize, col: usize) -> Option<CellId> {
        (row < self.side && col < self.side).then_some(row * self.side + col)
    }

    fn all_regions(&self, player: Player) -> u32 {
        match self.region_counts[player.index()] {
            32 => u32::MAX,
            k => (1u32 << k) - 1,
        }
    }

    /// True when one group of `player`'s pieces touches every region the
    /// player owns. A player without at least two regions never connects.
    pub fn connected(&self, occupancy: &[Option<Player>], player: Player) -> bool {
        if self.region_count(player) < 2 {
            return false;
        }
        let mut seen = vec![false; self.cell_count()];
        (0..self.cell_count()).any(|start| {
            occupancy[start] == Some(player)
                && !seen[start]
                && self.group_touches_all(occupancy, player, start, &mut seen)
        })
    }

    /// Whether the group containing `cell` touches every region of `player`.
    pub fn connected_through(
        &self,
        occupancy: &[Option<Player>],
        player: Player,
        cell: CellId,
    ) -> bool {
        if self.region_count(player) < 2 || occupancy[cell] != Some(player) {
            return false;
        }
        let mut seen = vec![false; self.cell_count()];
        self.group_touches_all(occupancy, player, cell, &mut seen)
    }

    fn group_touches_all(
        &self,
        occupancy: &[Option<Player>],
        player: Player,
        start: CellId,
        seen: &mut [bool],
    ) -> bool {
        let want = self.all_regions(player);
        let bits = &self.region_bits[player.index()];
        let mut touched = 0u32;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(c) = queue.pop_front() {
            touched |= bits[c];
            if touched == want {
                return true;
            }
            for &nb in &self.neighbors[c] {
                if !seen[nb] && occupancy[nb] == Some(player) {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        false
    }

    /// True when `n` consecutive pieces of `player` lie along one line.
    pub fn line_exists(&self, occupancy: &[Option<Player>], player: Player, n: usize) -> bool {
        let axes = self.directions.len() / 2;
        (0..self.cell_count()).any(|cell| {
            occupancy[cell] == Some(player)
                && (0..axes).any(|d| {
                    // Count only from the start of a run.
                    let back = self.rays[cell][d + axes].first();
                    back.is_none_or(|&b| occupancy[b] != Some(player))
                        && 1 + self.run(occupancy, player, cell, d) >= n
                })
        })
    }

    /// Whether a line of `n` through `cell` exists for `player`.
    pub fn line_through(
        &self,
        occupancy: &[Option<Player>],
        player: Player,
        cell: CellId,
        n: usize,
    ) -> bool {
        if occupancy[cell] != Some(player) {
            return false;
        }
        let axes = self.directions.len() / 2;
        (0..axes).any(|d| {
            1 + self.run(occupancy, player, cell, d) + self.run(occupancy, player, cell, d + axes)
                >= n
        })
    }

    fn run(&self, occupancy: &[Option<Player>], player: Player, cell: CellId, d: usize) -> usize {
        self.rays[cell][d]
            .iter()
            .take_while(|&&c| occupancy[c] == Some(player))
            .count()
    }
}
