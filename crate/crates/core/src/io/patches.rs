use log::warn;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::model::SignalSet;
use crate::rng::{index_below, stream, Seed};
use crate::scalar::Scalar;

use super::pgm::Raster;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatchOptions {
    /// Side of the square patch; signals have `patch_size²` entries.
    pub patch_size: usize,
    /// Subtract each patch's mean after scaling.
    pub remove_mean: bool,
}

impl Default for PatchOptions {
    fn default() -> Self {
        Self {
            patch_size: 8,
            remove_mean: false,
        }
    }
}

/// Draws `m` square patches at uniformly random positions from `images`
/// (image chosen uniformly per patch, with replacement). Samples are
/// divided by each image's maxval and each patch is flattened column by
/// column. Images smaller than a patch are skipped.
pub fn extract_patches<T: Scalar>(
    images: &[Raster],
    m: usize,
    options: PatchOptions,
    seed: Seed,
) -> Result<SignalSet<T>> {
    let size = options.patch_size;
    if size == 0 || m == 0 {
        return Err(Error::config(format!(
            "need a positive patch size and signal count, got {size} and {m}"
        )));
    }
    let usable: Vec<&Raster> = images
        .iter()
        .enumerate()
        .filter_map(|(i, img)| {
            if img.width >= size && img.height >= size {
                Some(img)
            } else {
                warn!(
                    "skipping image {i}: {}x{} is smaller than a {size}x{size} patch",
                    img.width, img.height
                );
                None
            }
        })
        .collect();
    if usable.is_empty() {
        return Err(Error::config("no image is large enough to extract patches"));
    }

    let mut rng = seed.derive(stream::PATCHES).rng();
    let p = size * size;
    let mut data = Vec::with_capacity(p * m);
    for _ in 0..m {
        let img = usable[index_below(&mut rng, usable.len())];
        let x0 = index_below(&mut rng, img.width - size + 1);
        let y0 = index_below(&mut rng, img.height - size + 1);
        let scale = 1.0 / img.maxval as f64;
        let start = data.len();
        for col in 0..size {
            for row in 0..size {
                data.push(T::of(img.pixel(x0 + col, y0 + row) as f64 * scale));
            }
        }
        if options.remove_mean {
            let patch = &mut data[start..];
            let mean = patch.iter().fold(T::zero(), |a, &b| a + b) / T::of(p as f64);
            for v in patch {
                *v -= mean;
            }
        }
    }
    SignalSet::new(DenseMatrix::from_column_major(p, m, data)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> Raster {
        Raster::new(w, h, 255, (0..w * h).map(|i| (i % 256) as u16).collect()).unwrap()
    }

    #[test]
    fn single_position_image() {
        let img = ramp(8, 8);
        let y: SignalSet<f64> = extract_patches(&[img.clone()], 3, PatchOptions::default(), Seed(1)).unwrap();
        assert_eq!((y.dim(), y.len()), (64, 3));
        // column-major flattening: entry (row 2, col 1) sits at 1 * 8 + 2
        assert_eq!(y.signal(0)[8 + 2], img.pixel(1, 2) as f64 / 255.0);
        assert_eq!(y.signal(0), y.signal(2));
    }

    #[test]
    fn constant_image_and_mean_removal() {
        let img = Raster::new(10, 9, 255, vec![51; 90]).unwrap();
        let y: SignalSet<f64> = extract_patches(&[img.clone()], 4, PatchOptions::default(), Seed(2)).unwrap();
        assert!(y.matrix().as_slice().iter().all(|&v| v == 0.2));
        let opts = PatchOptions {
            remove_mean: true,
            ..PatchOptions::default()
        };
        let y: SignalSet<f64> = extract_patches(&[img], 4, opts, Seed(2)).unwrap();
        assert!(y.matrix().as_slice().iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn small_images_are_skipped() {
        let small = ramp(4, 20);
        assert!(extract_patches::<f64>(&[small.clone()], 2, PatchOptions::default(), Seed(0)).is_err());
        let y: SignalSet<f64> =
            extract_patches(&[small, ramp(16, 16)], 5, PatchOptions::default(), Seed(0)).unwrap();
        assert_eq!(y.len(), 5);
    }

    #[test]
    fn seeded_extraction_is_reproducible() {
        let imgs = [ramp(30, 20), ramp(12, 40)];
        let a: SignalSet<f64> = extract_patches(&imgs, 50, PatchOptions::default(), Seed(5)).unwrap();
        let b: SignalSet<f64> = extract_patches(&imgs, 50, PatchOptions::default(), Seed(5)).unwrap();
        assert_eq!(a, b);
    }
}
