//! Connected components of a labelled raster and their hole counts.
//!
//! Components use 4-adjacency and complements use 8-adjacency, the usual
//! pairing that keeps a diagonal chain from both connecting and separating.
//! Complement pieces that touch the window border are merged into the outer
//! piece, which stands in for the unbounded complement component plus the
//! point at infinity.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dynamics::{PixelLabel, RasterGrid};
use crate::error::{Error, Result};
use crate::numerics::{ComplexBox, ComplexPoint, Region};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub id: u32,
    pub pixel_count: usize,
    pub touches_border: bool,
    pub behavior: PixelLabel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentMap {
    pub window: ComplexBox,
    pub width: usize,
    pub height: usize,
    /// Component id per pixel, 0 for non-candidates.
    pub labels: Vec<u32>,
    /// `components[id - 1]` describes component `id`.
    pub components: Vec<ComponentInfo>,
    pub marks: Vec<ComplexPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub representative_pixel: (usize, usize),
    pub pixel_count: usize,
    pub contains: Vec<ComplexPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub component_id: u32,
    pub hole_count: usize,
    pub connectivity: usize,
    pub holes: Vec<Hole>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub sequence: Vec<(u32, usize)>,
    /// Components skipped because they touch the window border.
    pub skipped: Vec<u32>,
    pub monotone: bool,
}

fn neighbours8(i: usize, j: usize, w: usize, h: usize) -> impl Iterator<Item = (usize, usize)> {
    (-1i64..=1)
        .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
        .filter(|d| *d != (0, 0))
        .map(move |(di, dj)| ((i as i64 + di) as usize, (j as i64 + dj) as usize))
        .filter(move |(x, y)| *x < w && *y < h)
}

fn on_border(i: usize, j: usize, w: usize, h: usize) -> bool {
    i == 0 || j == 0 || i + 1 == w || j + 1 == h
}

/// Union-find over 4-adjacent Fatou-candidate pixels that carry the same
/// label. Ids are assigned densely from 1 in raster scan order.
pub fn label_components(grid: &RasterGrid) -> ComponentMap {
    let (w, h) = (grid.width, grid.height);
    let mut uf = UnionFind::new(w * h);
    for j in 0..h {
        for i in 0..w {
            let l = grid.label(i, j);
            if !l.is_fatou_candidate() {
                continue;
            }
            if i + 1 < w && grid.label(i + 1, j) == l {
                uf.union(j * w + i, j * w + i + 1);
            }
            if j + 1 < h && grid.label(i, j + 1) == l {
                uf.union(j * w + i, (j + 1) * w + i);
            }
        }
    }
    let mut root_id = vec![0u32; w * h];
    let mut labels = vec![0u32; w * h];
    let mut components: Vec<ComponentInfo> = Vec::new();
    for j in 0..h {
        for i in 0..w {
            let idx = j * w + i;
            let l = grid.labels[idx];
            if !l.is_fatou_candidate() {
                continue;
            }
            let r = uf.find(idx);
            if root_id[r] == 0 {
                components.push(ComponentInfo {
                    id: components.len() as u32 + 1,
                    pixel_count: 0,
                    touches_border: false,
                    behavior: l,
                });
                root_id[r] = components.len() as u32;
            }
            let id = root_id[r];
            labels[idx] = id;
            let info = &mut components[id as usize - 1];
            info.pixel_count += 1;
            info.touches_border |= on_border(i, j, w, h);
        }
    }
    ComponentMap { window: grid.window, width: w, height: h, labels, components, marks: grid.marks.clone() }
}

impl ComponentMap {
    pub fn component(&self, id: u32) -> Result<&ComponentInfo> {
        id.checked_sub(1)
            .and_then(|k| self.components.get(k as usize))
            .ok_or_else(|| Error::Domain(format!("no component with id {id}")))
    }

    fn geometry(&self) -> RasterGrid {
        RasterGrid::from_labels(self.window, self.width, self.height, Vec::new())
    }

    pub fn pixel_of(&self, p: ComplexPoint) -> Result<(usize, usize)> {
        self.geometry().pixel_of(p)
    }

    pub fn id_at(&self, i: usize, j: usize) -> u32 {
        self.labels[j * self.width + i]
    }

    /// Component whose pixel contains `p`, if that pixel is a candidate.
    pub fn component_at(&self, p: ComplexPoint) -> Result<Option<u32>> {
        let (i, j) = self.pixel_of(p)?;
        Ok(Some(self.id_at(i, j)).filter(|id| *id != 0))
    }

    /// The most frequent component among pixels whose cells meet `region`
    /// (ties go to the smaller id).
    pub fn component_meeting(&self, region: &Region) -> Option<u32> {
        let view = self.geometry();
        let mut counts = std::collections::BTreeMap::<u32, usize>::new();
        for j in 0..self.height {
            for i in 0..self.width {
                let id = self.id_at(i, j);
                if id != 0 && !region.box_disjoint(&view.pixel_cell(i, j)) {
                    *counts.entry(id).or_default() += 1;
                }
            }
        }
        counts.into_iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|(id, _)| id)
    }

    /// Component containing `anchor`'s pixel, or failing that the dominant
    /// component among pixels meeting `fallback`.
    pub fn component_for_anchor(&self, anchor: ComplexPoint, fallback: Option<&Region>) -> Result<Option<u32>> {
        if let Some(id) = self.component_at(anchor)? {
            return Ok(Some(id));
        }
        Ok(fallback.and_then(|r| self.component_meeting(r)))
    }
}

/// Complement components of `id` (8-adjacency) that do not reach the border.
/// Returns per-pixel hole index (`usize::MAX` for outside / the component).
fn hole_labels(cm: &ComponentMap, id: u32) -> (Vec<usize>, Vec<Hole>) {
    let (w, h) = (cm.width, cm.height);
    let outside = w * h;
    let mut uf = UnionFind::new(w * h + 1);
    let in_complement = |idx: usize| cm.labels[idx] != id;
    for j in 0..h {
        for i in 0..w {
            let idx = j * w + i;
            if !in_complement(idx) {
                continue;
            }
            if on_border(i, j, w, h) {
                uf.union(idx, outside);
            }
            // forward half of the 8-neighbourhood
            for (di, dj) in [(1i64, 0i64), (-1, 1), (0, 1), (1, 1)] {
                let (x, y) = (i as i64 + di, j as i64 + dj);
                if x < 0 || x >= w as i64 || y >= h as i64 {
                    continue;
                }
                let n = y as usize * w + x as usize;
                if in_complement(n) {
                    uf.union(idx, n);
                }
            }
        }
    }
    let outside_root = uf.find(outside);
    let mut hole_of_root = std::collections::HashMap::new();
    let mut holes: Vec<Hole> = Vec::new();
    let mut per_pixel = vec![usize::MAX; w * h];
    for j in 0..h {
        for i in 0..w {
            let idx = j * w + i;
            if !in_complement(idx) {
                continue;
            }
            let r = uf.find(idx);
            if r == outside_root {
                continue;
            }
            let k = *hole_of_root.entry(r).or_insert_with(|| {
                holes.push(Hole { representative_pixel: (i, j), pixel_count: 0, contains: Vec::new() });
                holes.len() - 1
            });
            holes[k].pixel_count += 1;
            per_pixel[idx] = k;
        }
    }
    for mark in &cm.marks {
        if let Ok((i, j)) = cm.pixel_of(*mark) {
            let k = per_pixel[j * w + i];
            if k != usize::MAX {
                holes[k].contains.push(*mark);
            }
        }
    }
    (per_pixel, holes)
}

pub fn connectivity(cm: &ComponentMap, id: u32) -> Result<ConnectivityReport> {
    cm.component(id)?;
    let (_, holes) = hole_labels(cm, id);
    Ok(ConnectivityReport { component_id: id, hole_count: holes.len(), connectivity: holes.len() + 1, holes })
}

/// Hole count by breadth-first flooding: first flood the complement from the
/// border, then count the remaining complement pieces. Shares no code with
/// [`connectivity`].
pub fn hole_count_by_flood(cm: &ComponentMap, id: u32) -> usize {
    let (w, h) = (cm.width, cm.height);
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::new();
    let free = |i: usize, j: usize| cm.labels[j * w + i] != id;
    let flood = |start: (usize, usize), seen: &mut Vec<bool>, queue: &mut VecDeque<(usize, usize)>| {
        seen[start.1 * w + start.0] = true;
        queue.push_back(start);
        while let Some((i, j)) = queue.pop_front() {
            for (x, y) in neighbours8(i, j, w, h) {
                if free(x, y) && !seen[y * w + x] {
                    seen[y * w + x] = true;
                    queue.push_back((x, y));
                }
            }
        }
    };
    for j in 0..h {
        for i in 0..w {
            if on_border(i, j, w, h) && free(i, j) && !seen[j * w + i] {
                flood((i, j), &mut seen, &mut queue);
            }
        }
    }
    let mut holes = 0;
    for j in 0..h {
        for i in 0..w {
            if free(i, j) && !seen[j * w + i] {
                holes += 1;
                flood((i, j), &mut seen, &mut queue);
            }
        }
    }
    holes
}

/// True iff the pixel containing `p` lies in a hole of component `id`.
pub fn surrounds(cm: &ComponentMap, id: u32, p: ComplexPoint) -> Result<bool> {
    cm.component(id)?;
    let (i, j) = cm.pixel_of(p)?;
    let (per_pixel, _) = hole_labels(cm, id);
    Ok(per_pixel[j * cm.width + i] != usize::MAX)
}

/// Connectivity along an orbit of components; checks `c(U_n) >= c(U_{n+1})`
/// over consecutive bounded (non-border) components.
pub fn connectivity_monotonicity_check(cm: &ComponentMap, orbit_component_ids: &[u32]) -> Result<MonotonicityReport> {
    let mut sequence = Vec::new();
    let mut skipped = Vec::new();
    for &id in orbit_component_ids {
        if cm.component(id)?.touches_border {
            skipped.push(id);
            continue;
        }
        sequence.push((id, connectivity(cm, id)?.connectivity));
    }
    let monotone = monotone_non_increasing(sequence.iter().map(|s| s.1));
    Ok(MonotonicityReport { sequence, skipped, monotone })
}

pub fn monotone_non_increasing(values: impl IntoIterator<Item = usize>) -> bool {
    let v: Vec<usize> = values.into_iter().collect();
    v.windows(2).all(|w| w[0] >= w[1])
}

/// Raster of a boolean mask as Fatou candidates (`true` -> basin 0). Cells
/// outside the mask that touch it are `JuliaSuspect`, the rest `Unresolved`.
pub fn mask_grid(mask: &[bool], width: usize, height: usize) -> RasterGrid {
    assert_eq!(mask.len(), width * height, "mask size must equal width * height");
    let at = |i: i64, j: i64| {
        (0..width as i64).contains(&i) && (0..height as i64).contains(&j) && mask[j as usize * width + i as usize]
    };
    let labels = (0..width * height)
        .map(|k| {
            let (i, j) = ((k % width) as i64, (k / width) as i64);
            if mask[k] {
                PixelLabel::AttractedTo(0)
            } else if at(i - 1, j) || at(i + 1, j) || at(i, j - 1) || at(i, j + 1) {
                PixelLabel::JuliaSuspect
            } else {
                PixelLabel::Unresolved
            }
        })
        .collect();
    RasterGrid::from_labels(ComplexBox::new(0.0, width as f64, 0.0, height as f64), width, height, labels)
}
