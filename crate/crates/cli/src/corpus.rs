//! The seeded generator shared by every randomized suite.

use charkit::algebra::{Ambient, Point, Subspace};
use charkit::fourier::GridFunction;
use charkit::scalars::{rational, Rational};
use charkit::zmodpl::{RingAmbient, RingFunction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Numerators in `-5..=5`, denominators in `1..=4`; subsets keep each point
/// with probability 1/2.
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A stream derived from `seed` and a label, so suites do not depend on
    /// the order they run in.
    pub fn for_suite(seed: u64, label: &str) -> Self {
        let salt = label
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        Corpus::new(seed ^ salt)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn rational(&mut self) -> Rational {
        rational(self.rng.gen_range(-5..=5), self.rng.gen_range(1..=4))
    }

    pub fn function(&mut self, a: Ambient) -> GridFunction {
        let values = (0..a.size()).map(|_| self.rational()).collect();
        GridFunction::from_rationals(a, values).expect("sizes agree")
    }

    pub fn subset(&mut self, a: Ambient) -> Vec<Point> {
        a.points().filter(|_| self.rng.gen_bool(0.5)).collect()
    }

    pub fn nonempty_subset(&mut self, a: Ambient) -> Vec<Point> {
        loop {
            let s = self.subset(a);
            if !s.is_empty() {
                return s;
            }
        }
    }

    pub fn point(&mut self, a: Ambient) -> Point {
        let i = self.rng.gen_range(0..a.size());
        a.point(i)
    }

    pub fn nonzero_point(&mut self, a: Ambient) -> Point {
        let i = self.rng.gen_range(1..a.size());
        a.point(i)
    }

    /// A uniformly chosen dimension in `1..=max_dim`, then random generators.
    pub fn subspace(&mut self, a: Ambient, max_dim: usize) -> Subspace {
        let k = self.rng.gen_range(1..=max_dim.min(a.d()));
        loop {
            let gens: Vec<Point> = (0..k).map(|_| self.nonzero_point(a)).collect();
            let v = Subspace::span(&a, &gens);
            if v.dim() == k {
                return v;
            }
        }
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        *items.choose(&mut self.rng).expect("nonempty choice")
    }

    pub fn ring_function(&mut self, a: RingAmbient) -> RingFunction {
        let values = (0..a.size()).map(|_| self.rational()).collect();
        RingFunction::from_rationals(a, values).expect("sizes agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = Ambient::new(3, 2).unwrap();
        let f = Corpus::new(42).function(a);
        assert_eq!(f, Corpus::new(42).function(a));
        assert_ne!(f, Corpus::new(43).function(a));
        assert_ne!(
            Corpus::for_suite(42, "galois").function(a),
            Corpus::for_suite(42, "wavelet").function(a)
        );
    }

    #[test]
    fn ranges_are_respected() {
        let mut c = Corpus::new(1);
        for _ in 0..500 {
            let r = c.rational();
            assert!(r.numer().magnitude() <= &5u32.into());
            assert!(r.denom() <= &4.into());
        }
        let a = Ambient::new(2, 3).unwrap();
        for _ in 0..50 {
            assert!((1..=2).contains(&c.subspace(a, 2).dim()));
            assert!(!c.nonempty_subset(a).is_empty());
        }
    }
}
