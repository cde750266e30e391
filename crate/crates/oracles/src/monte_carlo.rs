use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `count` independent uniform points on the sphere of radius `radius` about
/// the origin of `R^dim`, row-major. Normalized Gaussian vectors.
pub fn uniform_sphere_samples(count: usize, dim: usize, radius: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count * dim);
    let mut v = vec![0.0; dim];
    for _ in 0..count {
        loop {
            for c in v.iter_mut() {
                *c = StandardNormal.sample(&mut rng);
            }
            let len = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if len > 1e-12 {
                out.extend(v.iter().map(|c| radius * c / len));
                break;
            }
        }
    }
    out
}

/// Mean and standard error of `|y - x|^(2-d)` over the sample points.
pub fn mc_sphere_potential(samples: &[f64], dim: usize, y: &[f64]) -> (f64, f64) {
    let values: Vec<f64> = samples
        .chunks_exact(dim)
        .map(|x| {
            let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            r2.sqrt().powf(2.0 - dim as f64)
        })
        .collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_lie_on_the_sphere() {
        let s = uniform_sphere_samples(100, 4, 2.0, 1);
        for p in s.chunks_exact(4) {
            let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((r - 2.0).abs() < 1e-12);
        }
        assert_eq!(s, uniform_sphere_samples(100, 4, 2.0, 1));
    }

    #[test]
    fn exterior_potential_converges() {
        let s = uniform_sphere_samples(20_000, 3, 1.0, 3);
        let (mean, se) = mc_sphere_potential(&s, 3, &[0.0, 0.0, 2.0]);
        assert!((mean - 0.5).abs() < 4.0 * se + 1e-12, "{mean} {se}");
    }
}
