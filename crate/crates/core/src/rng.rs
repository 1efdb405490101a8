//! Reproducible random number streams.
//!
//! Every sampler in the crate draws from a ChaCha8 counter-based generator.
//! Work is split into fixed-size chunks; chunk `c` of a run seeded with `s`
//! always uses the stream `(s, c)`, and chunk partials are reduced in chunk
//! order. Results are therefore bit-identical no matter how many threads
//! execute the chunks.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per chunk. Fixed: changing it changes every estimate.
pub const CHUNK_SAMPLES: u64 = 1 << 14;

/// Standard-normal source: polar (Marsaglia) rejection on top of a
/// dedicated ChaCha8 stream.
pub struct NormalSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSource {
    pub fn from_seed(seed: u64) -> Self {
        Self::for_chunk(seed, 0)
    }

    /// Generator for chunk `chunk` of a run seeded with `seed`.
    pub fn for_chunk(seed: u64, chunk: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        NormalSource { rng, spare: None }
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_uniform() - 1.0;
            let v = 2.0 * self.next_uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn fill_normals(&mut self, buf: &mut [f64]) {
        for z in buf {
            *z = self.next_normal();
        }
    }
}

/// Runs `n_samples` of work split into [`CHUNK_SAMPLES`]-sized chunks and
/// returns the per-chunk partials in chunk order. `work` receives the chunk
/// index, the number of samples in the chunk and the chunk's generator.
///
/// Executes on the current rayon pool; a single-threaded pool yields the
/// same bits as a parallel one because the output order is fixed.
pub fn run_chunks<T, F>(n_samples: u64, seed: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64, &mut NormalSource) -> T + Sync,
{
    let n_chunks = n_samples.div_ceil(CHUNK_SAMPLES).max(1);
    (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK_SAMPLES;
            let len = CHUNK_SAMPLES.min(n_samples - start.min(n_samples));
            let mut source = NormalSource::for_chunk(seed, chunk);
            work(chunk, len, &mut source)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = NormalSource::from_seed(7);
        let mut b = NormalSource::from_seed(7);
        for _ in 0..100 {
            assert_eq!(a.next_normal().to_bits(), b.next_normal().to_bits());
        }
    }

    #[test]
    fn different_chunks_differ() {
        let mut a = NormalSource::for_chunk(7, 0);
        let mut b = NormalSource::for_chunk(7, 1);
        let eq = (0..16).filter(|_| a.next_normal() == b.next_normal()).count();
        assert!(eq < 4);
    }

    #[test]
    fn normals_have_unit_scale() {
        let mut src = NormalSource::from_seed(42);
        let n = 200_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let z = src.next_normal();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn chunked_partials_independent_of_pool_size() {
        let work = |_c: u64, len: u64, src: &mut NormalSource| -> f64 {
            (0..len).map(|_| src.next_normal()).sum()
        };
        let seq_pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let par_pool = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a: Vec<f64> = seq_pool.install(|| run_chunks(50_000, 3, work));
        let b: Vec<f64> = par_pool.install(|| run_chunks(50_000, 3, work));
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
