//! Procedural grayscale test images, used when no image files are given.
//!
//! Each image is a Voronoi partition of the plane; every cell is filled
//! with a shaded flat region, an oriented grating or a checkerboard, and
//! the whole image is lit by a slowly varying illumination field plus a
//! little sensor noise. The mix gives patches with edges, textures and
//! smooth areas.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::rng::{index_below, standard_normal, stream, Seed};

use super::pgm::Raster;

enum Fill {
    Shaded { level: f64, gx: f64, gy: f64 },
    Grating { level: f64, amp: f64, kx: f64, ky: f64, phase: f64 },
    Checker { low: f64, high: f64, period: f64, angle: f64 },
}

impl Fill {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let level = rng.random_range(0.15..0.85);
        match index_below(rng, 4) {
            0 | 1 => Fill::Shaded {
                level,
                gx: rng.random_range(-0.004..0.004),
                gy: rng.random_range(-0.004..0.004),
            },
            2 => {
                let period = rng.random_range(3.0..24.0);
                let angle = rng.random_range(0.0..PI);
                let k = 2.0 * PI / period;
                Fill::Grating {
                    level,
                    amp: rng.random_range(0.05..0.3),
                    kx: k * angle.cos(),
                    ky: k * angle.sin(),
                    phase: rng.random_range(0.0..2.0 * PI),
                }
            }
            _ => {
                let contrast = rng.random_range(0.1..0.4);
                Fill::Checker {
                    low: (level - contrast / 2.0).max(0.0),
                    high: (level + contrast / 2.0).min(1.0),
                    period: rng.random_range(4.0..16.0),
                    angle: rng.random_range(0.0..PI / 2.0),
                }
            }
        }
    }

    fn value(&self, x: f64, y: f64, cx: f64, cy: f64) -> f64 {
        match *self {
            Fill::Shaded { level, gx, gy } => level + gx * (x - cx) + gy * (y - cy),
            Fill::Grating {
                level,
                amp,
                kx,
                ky,
                phase,
            } => level + amp * (kx * x + ky * y + phase).sin(),
            Fill::Checker {
                low,
                high,
                period,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let u = ((c * x + s * y) / period).floor() as i64;
                let v = ((-s * x + c * y) / period).floor() as i64;
                if (u + v).rem_euclid(2) == 0 {
                    low
                } else {
                    high
                }
            }
        }
    }
}

/// One `size x size` 8-bit procedural image.
pub fn texture_image(size: usize, seed: Seed) -> Raster {
    let mut rng = seed.derive(stream::TEXTURE).rng();
    let cells = 6 + index_below(&mut rng, 10);
    let extent = size as f64;
    let sites: Vec<(f64, f64, Fill)> = (0..cells)
        .map(|_| {
            let x = rng.random_range(0.0..extent);
            let y = rng.random_range(0.0..extent);
            (x, y, Fill::random(&mut rng))
        })
        .collect();

    // low-frequency illumination
    let waves: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            let k = 2.0 * PI / rng.random_range(extent / 2.0..2.0 * extent);
            let angle = rng.random_range(0.0..2.0 * PI);
            (
                k * angle.cos(),
                k * angle.sin(),
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(0.02..0.08),
            )
        })
        .collect();
    let noise_sigma = rng.random_range(0.002..0.01);

    let mut pixels = Vec::with_capacity(size * size);
    for py in 0..size {
        for px in 0..size {
            let (x, y) = (px as f64 + 0.5, py as f64 + 0.5);
            let (sx, sy, fill) = sites
                .iter()
                .min_by(|a, b| {
                    let da = (a.0 - x).powi(2) + (a.1 - y).powi(2);
                    let db = (b.0 - x).powi(2) + (b.1 - y).powi(2);
                    da.total_cmp(&db)
                })
                .expect("at least one site");
            let mut v = fill.value(x, y, *sx, *sy);
            for &(kx, ky, phase, amp) in &waves {
                v += amp * (kx * x + ky * y + phase).sin();
            }
            v += noise_sigma * standard_normal::<f64, _>(&mut rng);
            pixels.push((v.clamp(0.0, 1.0) * 255.0).round() as u16);
        }
    }
    Raster {
        width: size,
        height: size,
        maxval: 255,
        pixels,
    }
}

/// `count` independent procedural images.
pub fn texture_set(count: usize, size: usize, seed: Seed) -> Vec<Raster> {
    (0..count)
        .map(|i| texture_image(size, seed.derive(i as u64)))
        .collect()
}
