use std::ops::Sub;

use num_traits::Zero;

fn subtract_known<T: Copy + Zero + Sub<Output = T>>(sum: &[T], known: &[T]) -> Vec<T> {
    sum.iter()
        .enumerate()
        .map(|(idx, &s)| s - known.get(idx).copied().unwrap_or_else(T::zero))
        .collect()
}

/// Recovers every block from the `K-1` pairwise sums `b_j + b_{j+1}` and the
/// one block receiver `i` already knows.
///
/// The backward pass peels `b_{i-1}, ..., b_1` off the sums to the left of
/// `i`; the forward pass peels `b_{i+1}, ..., b_K` to the right. Recovered
/// blocks carry the length of the pair sum they came from (zero-padded);
/// entry `i` of the result is `own` itself.
pub fn backward_forward_cancel<T: Copy + Zero + Sub<Output = T>>(
    i: usize,
    own: &[T],
    pair_sums: &[&[T]],
) -> Vec<Vec<T>> {
    let k = pair_sums.len() + 1;
    assert!(i < k, "receiver index {i} out of range for K = {k}");
    let mut blocks: Vec<Vec<T>> = vec![Vec::new(); k];
    blocks[i] = own.to_vec();

    let mut known = own.to_vec();
    for j in (1..=i).rev() {
        blocks[j - 1] = subtract_known(pair_sums[j - 1], &known);
        known = blocks[j - 1].clone();
    }

    let mut known = own.to_vec();
    for j in i..k - 1 {
        blocks[j + 1] = subtract_known(pair_sums[j], &known);
        known = blocks[j + 1].clone();
    }
    blocks
}
