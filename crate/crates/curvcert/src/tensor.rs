//! Small dense tensors over a single dimension `n`, rank fixed at compile
//! time. Used for Christoffel symbols (rank 3), the curvature tensor
//! (rank 4), and its covariant derivative (rank 5), both with numeric and
//! polynomial entries.

/// Dense rank-`R` tensor with all axes of length `n`.
#[derive(Debug, Clone)]
pub struct Tensor<T, const R: usize> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone + Default, const R: usize> Tensor<T, R> {
    pub fn new(n: usize) -> Self {
        Tensor {
            n,
            data: vec![T::default(); n.pow(R as u32)],
        }
    }
}

impl<T: Clone, const R: usize> Tensor<T, R> {
    /// Tensor with every cell set to `value` (for entry types without a
    /// meaningful `Default`, e.g. polynomials that carry their nvars).
    pub fn filled(n: usize, value: T) -> Self {
        Tensor {
            n,
            data: vec![value; n.pow(R as u32)],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, idx: [usize; R]) -> usize {
        let mut o = 0;
        for i in idx {
            debug_assert!(i < self.n);
            o = o * self.n + i;
        }
        o
    }

    #[inline]
    pub fn get(&self, idx: [usize; R]) -> &T {
        &self.data[self.offset(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: [usize; R], value: T) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Enumerate `(multi_index, &value)` pairs in row-major order.
    pub fn enumerate(&self) -> impl Iterator<Item = ([usize; R], &T)> {
        let n = self.n;
        self.data.iter().enumerate().map(move |(flat, v)| {
            let mut idx = [0usize; R];
            let mut rem = flat;
            for k in (0..R).rev() {
                idx[k] = rem % n;
                rem /= n;
            }
            (idx, v)
        })
    }
}

pub type Tensor3 = Tensor<f64, 3>;
pub type Tensor4 = Tensor<f64, 4>;
pub type Tensor5 = Tensor<f64, 5>;

impl<const R: usize> Tensor<f64, R> {
    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Entries with nonzero value, as `(multi_index, value)` pairs.
    pub fn nonzero(&self) -> Vec<([usize; R], f64)> {
        self.enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect()
    }
}
