use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    GroupError, GroupPreset, PresetName, enumerate_by_entry, enumerate_group, stabilizer_order,
};
use crate::moebius::{GroupElement, Point, apply_moebius, to_disc};

/// Images closer than this hyperbolic distance are merged.
pub const DEDUP_DISTANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitBudget {
    /// `None` enumerates by entry bound alone and records no words.
    pub max_word_len: Option<usize>,
    pub max_entry: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub element: GroupElement,
    pub image: Point,
    /// `|cz + d|²` at the base point.
    pub j_abs_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub preset: PresetName,
    pub base: Point,
    pub entries: Vec<OrbitEntry>,
    pub budget: OrbitBudget,
    pub stabilizer_order: u32,
    /// Number of group elements enumerated before merging images.
    pub enumerated: usize,
    /// Largest number of elements observed mapping to one image.
    pub max_multiplicity: usize,
}

fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
}

fn cell(z: Complex64) -> (i64, i64) {
    (
        (z.re / (z.im * DEDUP_DISTANCE)).floor() as i64,
        (z.im.ln() / DEDUP_DISTANCE).floor() as i64,
    )
}

/// The orbit of `z` under the preset, truncated by `budget`.
///
/// Elements fixing the image of an earlier element are merged into it, so
/// for an elliptic base point each image appears once.
pub fn orbit_sample(
    preset: &GroupPreset,
    z: Point,
    budget: OrbitBudget,
) -> Result<OrbitSample, GroupError> {
    let base = z.as_half_plane()?;
    let elements = match budget.max_word_len {
        Some(len) => enumerate_group(preset, len, budget.max_entry)?,
        None => enumerate_by_entry(preset, budget.max_entry)?,
    };
    let zv = base.value();
    let images: Vec<Result<OrbitEntry, GroupError>> = elements
        .par_iter()
        .map(|g| {
            Ok(OrbitEntry {
                element: g.clone(),
                image: apply_moebius(g, base)?,
                j_abs_sq: g.j(zv).norm_sqr(),
            })
        })
        .collect();
    let stab = stabilizer_order(preset, base)?;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut entries: Vec<OrbitEntry> = Vec::new();
    let mut multiplicity: Vec<usize> = Vec::new();
    for e in images {
        let e = e?;
        let v = e.image.value();
        let (cx, cy) = cell(v);
        let mut hit = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = grid.get(&(cx + dx, cy + dy)) {
                    for &k in list {
                        let dist = hyperbolic_distance(entries[k].image.value(), v);
                        if dist < DEDUP_DISTANCE {
                            hit = Some(k);
                            break 'search;
                        }
                    }
                }
            }
        }
        match hit {
            Some(k) => multiplicity[k] += 1,
            None => {
                grid.entry((cx, cy)).or_default().push(entries.len());
                entries.push(e);
                multiplicity.push(1);
            }
        }
    }
    let max_multiplicity = multiplicity.iter().copied().max().unwrap_or(0);
    if max_multiplicity > stab as usize {
        return Err(GroupError::InconsistentStabilizer {
            observed: max_multiplicity,
            expected: stab,
        });
    }
    Ok(OrbitSample {
        preset: preset.name,
        base,
        entries,
        budget,
        stabilizer_order: stab,
        enumerated: elements.len(),
        max_multiplicity,
    })
}

impl OrbitSample {
    /// Images in the disc model, in entry order.
    pub fn disc_images(&self) -> Result<Vec<Complex64>, GroupError> {
        self.entries.iter().map(|e| Ok(to_disc(e.image)?.value())).collect()
    }

    /// Largest disc radius within which this sample contains every orbit
    /// point (for samples enumerated by entry bound).
    pub fn certified_radius(&self) -> Result<f64, GroupError> {
        if self.budget.max_word_len.is_some() {
            return Ok(0.0);
        }
        certified_radius(self.budget.max_entry, self.base)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,c,d,re_image,im_image,j_abs_sq\n");
        for e in &self.entries {
            let g = &e.element;
            s.push_str(&format!(
                "{},{},{},{},{:.16e},{:.16e},{:.16e}\n",
                g.a,
                g.b,
                g.c,
                g.d,
                e.image.value().re,
                e.image.value().im,
                e.j_abs_sq
            ));
        }
        s
    }
}

/// For `g(z)` with hyperbolic distance `R` from `i`, `‖g‖² <= 2 cosh(R + d(z, i))`
/// (Frobenius norm), which bounds every entry.
pub fn certified_radius(max_entry: i64, z: Point) -> Result<f64, GroupError> {
    let d0 = z.distance(&Point::i())?;
    let n = max_entry as f64;
    let big_r = (n * n / 2.0).max(1.0).acosh() - d0;
    Ok(if big_r <= 0.0 { 0.0 } else { (big_r / 2.0).tanh() })
}

/// Smallest entry bound that certifies every orbit point of `z` with disc
/// radius below `radius`.
pub fn certified_entry_bound(radius: f64, z: Point) -> Result<i64, GroupError> {
    let d0 = z.distance(&Point::i())?;
    let big_r = 2.0 * radius.atanh() + d0;
    Ok((2.0 * big_r.cosh()).sqrt().ceil() as i64)
}

impl GroupPreset {
    /// Convenience: orbit by entry bound only.
    pub fn orbit(&self, z: Point, max_entry: i64) -> Result<OrbitSample, GroupError> {
        orbit_sample(self, z, OrbitBudget { max_word_len: None, max_entry })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_budget() {
        let o = orbit_sample(
            &GroupPreset::psl2z(),
            Point::i(),
            OrbitBudget { max_word_len: Some(0), max_entry: 10 },
        )
        .unwrap();
        assert_eq!(o.entries.len(), 1);
        assert!(o.entries[0].element.is_identity());
    }

    #[test]
    fn order_two_point_halves_count() {
        let o = GroupPreset::psl2z().orbit(Point::i(), 12).unwrap();
        assert_eq!(o.stabilizer_order, 2);
        assert_eq!(o.enumerated, 2 * o.entries.len());
    }

    #[test]
    fn certified_bound_round_trip() {
        let z = Point::half_plane(Complex64::new(0.0, 2.0)).unwrap();
        let n = certified_entry_bound(0.9, z).unwrap();
        assert!(certified_radius(n, z).unwrap() >= 0.9);
        assert!(certified_radius(n - 1, z).unwrap() < 0.9);
    }
}
