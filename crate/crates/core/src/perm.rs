//! Permutations in one-line notation (0-based images).
//!
//! `p[i]` is the image of `i`. Throughout the crate a permutation acts on an
//! n-ary operation by input relabelling: `(f^σ)(a_0, …, a_{n-1}) =
//! f(a_{σ(0)}, …, a_{σ(n-1)})`, so `σ ↦ action(σ)` is an anti-homomorphism
//! realized by composing generator matrices in reversed word order.

use alloc::vec;
use alloc::vec::Vec;

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let n = p.len();
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// `(compose(p, q))(i) = p(q(i))`.
pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Adjacent transposition `(i, i+1)` in `S_n`.
pub fn adjacent(n: usize, i: usize) -> Perm {
    let mut p = identity(n);
    p.swap(i, i + 1);
    p
}

/// Write `p` as a product of adjacent transpositions:
/// `p = adjacent(i_0) ∘ adjacent(i_1) ∘ …` (apply rightmost first).
pub fn adjacent_word(p: &[usize]) -> Vec<usize> {
    // Bubble-sort p to the identity; each swap at position i multiplies by
    // adjacent(i) on the right, so the collected word (in reverse order of
    // discovery) is a left-to-right factorization of p.
    let mut v = p.to_vec();
    let mut word = Vec::new();
    let n = v.len();
    loop {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1) {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                word.push(i);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    // v * (word applied) = identity, i.e. p = adjacent(w_k) ∘ … ∘ adjacent(w_0)
    // reversed below so callers can apply left factor last.
    word.reverse();
    word
}

/// All permutations of `S_n` in lexicographic one-line order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity(n);
    loop {
        out.push(cur.clone());
        if !next_perm(&mut cur) {
            break;
        }
    }
    out
}

fn next_perm(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Lexicographic rank of a permutation (Lehmer code).
pub fn lex_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0usize;
    let mut fact = 1usize;
    for k in 1..n {
        fact *= k;
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let pos = remaining.iter().position(|&x| x == p[i]).unwrap();
        rank += pos * fact;
        remaining.remove(pos);
        if n - i > 1 {
            fact /= n - i - 1;
        }
    }
    rank
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Permutation of `Σ sizes` letters that permutes contiguous blocks of the
/// given sizes according to `p`, preserving order inside each block: block
/// `b` (occupying the `b`-th source interval) is moved to the interval of
/// target position `p(b)`.
pub fn block_perm(p: &[usize], sizes: &[usize]) -> Perm {
    let total: usize = sizes.iter().sum();
    let mut target_start = vec![0usize; p.len()];
    // Target interval layout: blocks appear in the order of their target
    // positions; the block at target position t is the source block p^{-1}(t).
    let inv = inverse(p);
    let mut acc = 0;
    for t in 0..p.len() {
        let src = inv[t];
        target_start[src] = acc;
        acc += sizes[src];
    }
    let mut out = vec![0usize; total];
    let mut src_pos = 0;
    for (b, &len) in sizes.iter().enumerate() {
        for k in 0..len {
            out[src_pos + k] = target_start[b] + k;
        }
        src_pos += len;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = vec![2, 0, 1];
        let q = vec![1, 2, 0];
        assert_eq!(compose(&p, &inverse(&p)), identity(3));
        assert_eq!(compose(&p, &q)[0], p[q[0]]);
    }

    #[test]
    fn adjacent_word_reconstructs() {
        for p in all_perms(5) {
            let word = adjacent_word(&p);
            let mut acc = identity(5);
            for &i in word.iter().rev() {
                acc = compose(&adjacent(5, i), &acc);
            }
            assert_eq!(acc, p, "word failed for {:?}", p);
        }
    }

    #[test]
    fn lex_rank_matches_enumeration_order() {
        for (r, p) in all_perms(4).iter().enumerate() {
            assert_eq!(lex_rank(p), r);
        }
    }

    #[test]
    fn block_perm_swaps_blocks() {
        // Swap a block of size 2 with a block of size 1: p = (1 0).
        let bp = block_perm(&[1, 0], &[2, 1]);
        // Source [A0 A1 | B0] -> target [B0 | A0 A1]: A-block starts at 1.
        assert_eq!(bp, vec![1, 2, 0]);
    }

    #[test]
    fn block_perm_identity_sizes() {
        let p = vec![2, 0, 1];
        assert_eq!(block_perm(&p, &[1, 1, 1]), p);
    }
}
