//! Text measurement, line filling and block placement.

use alloc::string::String;
use alloc::vec::Vec;

use crate::clustering::dbscan;
use crate::model::{Point, Rect};

/// Gap between words on a line (h).
pub(crate) const SPACE: f64 = 0.3;

/// Horizontal advance of one code point (h).
pub(crate) fn advance(c: char) -> f64 {
    match c as u32 {
        0x0E31 | 0x0E34..=0x0E3A | 0x0E47..=0x0E4E => 0.0,
        0x0300..=0x036F => 0.0,
        0x3000..=0x30FF | 0x3400..=0x9FFF | 0xF900..=0xFAFF | 0xFF00..=0xFFEF => 1.0,
        _ => 0.5,
    }
}

#[cfg(test)]
pub(crate) fn text_width(s: &str, h: f64) -> f64 {
    s.chars().map(advance).sum::<f64>() * h
}

/// A word to be placed: its code points tagged with the ingredient they belong to.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Unit {
    pub chars: Vec<(char, Option<usize>)>,
}

impl Unit {
    pub fn text(&self) -> String {
        self.chars.iter().map(|(c, _)| *c).collect()
    }

    pub fn width(&self, h: f64) -> f64 {
        self.chars.iter().map(|(c, _)| advance(*c)).sum::<f64>() * h
    }

    pub fn entries(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.chars.iter().filter_map(|(_, t)| *t).collect();
        e.dedup();
        e
    }
}

/// Splits a tagged stream on spaces.
pub(crate) fn units(stream: &[(char, Option<usize>)]) -> Vec<Unit> {
    stream.split(|(c, _)| *c == ' ').filter(|s| !s.is_empty()).map(|s| Unit { chars: s.to_vec() }).collect()
}

/// Breaks units wider than `max_width` after delimiter code points.
pub(crate) fn break_long(units: Vec<Unit>, max_width: f64, h: f64, is_delim: impl Fn(char) -> bool) -> Vec<Unit> {
    let mut out = Vec::new();
    for u in units {
        if u.width(h) <= max_width {
            out.push(u);
            continue;
        }
        let mut piece: Vec<(char, Option<usize>)> = Vec::new();
        let mut segment: Vec<(char, Option<usize>)> = Vec::new();
        let seg_width = |s: &[(char, Option<usize>)]| s.iter().map(|(c, _)| advance(*c)).sum::<f64>() * h;
        for &(c, tag) in &u.chars {
            segment.push((c, tag));
            if is_delim(c) {
                if !piece.is_empty() && seg_width(&piece) + seg_width(&segment) > max_width {
                    out.push(Unit { chars: core::mem::take(&mut piece) });
                }
                piece.append(&mut segment);
            }
        }
        if !piece.is_empty() && !segment.is_empty() && seg_width(&piece) + seg_width(&segment) > max_width {
            out.push(Unit { chars: core::mem::take(&mut piece) });
        }
        piece.append(&mut segment);
        if !piece.is_empty() {
            out.push(Unit { chars: piece });
        }
    }
    out
}

/// Greedy line filling. Each group starts on a new line; a unit wider than
/// `max_width` gets a line of its own.
pub(crate) fn flow(groups: &[Vec<Unit>], max_width: f64, h: f64) -> Vec<Vec<Unit>> {
    let mut lines = Vec::new();
    for group in groups {
        let mut line: Vec<Unit> = Vec::new();
        let mut used = 0.0;
        for u in group {
            let w = u.width(h);
            if !line.is_empty() && used + SPACE * h + w > max_width {
                lines.push(core::mem::take(&mut line));
                used = 0.0;
            }
            used += if line.is_empty() { w } else { SPACE * h + w };
            line.push(u.clone());
        }
        if !line.is_empty() {
            lines.push(line);
        }
    }
    lines
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Placed {
    pub unit: Unit,
    pub rect: Rect,
    /// Line index within its block.
    pub line: usize,
}

fn line_width(line: &[Unit], h: f64) -> f64 {
    line.iter().map(|u| u.width(h)).sum::<f64>() + SPACE * h * line.len().saturating_sub(1) as f64
}

/// Places lines top-down from the origin with the given pitch. Centered lines
/// share the middle of the widest line.
pub(crate) fn place(lines: &[Vec<Unit>], h: f64, pitch: f64, centered: bool) -> Vec<Placed> {
    let block_w = lines.iter().map(|l| line_width(l, h)).fold(0.0, f64::max);
    let mut out = Vec::new();
    for (li, line) in lines.iter().enumerate() {
        let mut x = if centered { (block_w - line_width(line, h)) / 2.0 } else { 0.0 };
        let y = li as f64 * pitch;
        for u in line {
            let w = u.width(h).max(0.5 * h);
            out.push(Placed { unit: u.clone(), rect: Rect { x, y, width: w, height: h }, line: li });
            x += w + SPACE * h;
        }
    }
    out
}

/// True when the words form one DBSCAN cluster without noise, or when there
/// are too few words for any cluster to exist.
pub(crate) fn connected(placed: &[Placed], eps: f64, min_samples: usize) -> bool {
    if placed.len() < min_samples {
        return true;
    }
    let pts: Vec<Point> = placed.iter().map(|p| p.rect.centroid()).collect();
    let clusters = dbscan(&pts, eps, min_samples);
    clusters.len() == 1 && !clusters[0].is_noise()
}

/// Centered block whose words form a single cluster at `eps`. The wrap width
/// shrinks from `max_width` until the block is connected; one word per line,
/// centered, is the last resort and always connects when pitch <= eps.
pub(crate) fn connected_block(groups: &[Vec<Unit>], max_width: f64, h: f64, pitch: f64, eps: f64) -> Vec<Placed> {
    let widest = groups.iter().flatten().map(|u| u.width(h)).fold(0.0, f64::max);
    let mut width = max_width;
    loop {
        let placed = place(&flow(groups, width, h), h, pitch, true);
        if width <= 0.0 || connected(&placed, eps, 3) {
            return placed;
        }
        let next = width * 0.85;
        width = if next >= widest {
            next
        } else if width > widest {
            widest
        } else {
            0.0
        };
    }
}

pub(crate) fn bounds(rects: impl IntoIterator<Item = Rect>) -> Option<Rect> {
    rects.into_iter().reduce(|a, b| a.union(&b))
}

pub(crate) fn translate(placed: &mut [Placed], dx: f64, dy: f64) {
    for p in placed {
        p.rect = p.rect.translated(dx, dy);
    }
}
