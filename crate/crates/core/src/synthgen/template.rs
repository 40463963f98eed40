use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::SynthError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// One ingredient per row.
    A,
    /// Delimiter-joined paragraph.
    B,
    /// Parallel columns, each an independent panel.
    C,
    /// Dense small-font block.
    D,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        }
    }
}

fn one() -> usize {
    1
}

/// Geometry of one synthetic label layout. Lengths marked "h" are multiples
/// of the font height; the rest are pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutTemplate {
    pub id: String,
    pub family: Family,
    pub page_size: (f64, f64),
    pub ingredient_count_range: (usize, usize),
    pub font_height_range: (f64, f64),
    #[serde(default = "one")]
    pub column_count: usize,
    /// Extra space between rows (h).
    pub row_gap: f64,
    /// Horizontal gap between panels and distractor blocks (h).
    pub column_gap: f64,
    pub margin: f64,
    /// Wrap width of a text block (h).
    pub block_width: f64,
    /// Brand words above the block, as an inclusive count range.
    #[serde(default)]
    pub brand_words: (usize, usize),
    /// Rows of a nutrition column beside the block, as an inclusive count range.
    #[serde(default)]
    pub nutrition_rows: (usize, usize),
    /// Maximum vertical jitter of a panel (h).
    #[serde(default)]
    pub panel_offset: f64,
}

/// Largest row pitch, in font heights, that keeps a centered one-word column connected.
pub const MAX_ROW_GAP: f64 = 0.25;

/// Panel jitter below the default row tolerance of 0.5 h.
pub const MAX_PANEL_OFFSET: f64 = 0.4;

impl LayoutTemplate {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |reason: &'static str| Err(SynthError::InvalidTemplate { id: self.id.clone(), reason });
        let (pw, ph) = self.page_size;
        if !(pw > 0.0 && ph > 0.0 && self.margin >= 0.0 && 2.0 * self.margin < pw.min(ph)) {
            return bad("page size and margin do not leave a content area");
        }
        let (cmin, cmax) = self.ingredient_count_range;
        if cmin == 0 || cmin > cmax {
            return bad("ingredient_count_range must satisfy 1 <= min <= max");
        }
        let (fmin, fmax) = self.font_height_range;
        if !(fmin > 0.0 && fmin <= fmax) {
            return bad("font_height_range must satisfy 0 < min <= max");
        }
        if !(0.0..=MAX_ROW_GAP).contains(&self.row_gap) {
            return bad("row_gap must lie in [0, 0.25]");
        }
        if !(self.column_gap >= 2.0 && self.block_width > 0.0 && self.panel_offset >= 0.0) {
            return bad("column_gap must be at least 2 and block_width positive");
        }
        if self.brand_words.0 > self.brand_words.1 || self.nutrition_rows.0 > self.nutrition_rows.1 {
            return bad("distractor ranges must satisfy min <= max");
        }
        match self.family {
            Family::C if self.column_count < 2 => bad("C templates need at least two columns"),
            Family::C if self.panel_offset > MAX_PANEL_OFFSET => bad("C panel_offset must keep rows aligned"),
            Family::D if fmax > 8.0 => bad("D templates use fonts of at most 8 px"),
            _ => Ok(()),
        }
    }
}
