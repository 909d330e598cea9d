//! Index-tuple bookkeeping for antisymmetric tables.

/// Sorts `idx` increasingly and reports whether an odd permutation was
/// needed. Returns `None` when an index repeats (the entry vanishes).
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// All strictly increasing `k`-tuples drawn from `0..r`, in lexicographic order.
pub fn increasing_tuples(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

/// `(-1)^n`.
pub fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Copy of `v` with the entries at positions `skip` removed.
pub fn omit<T: Clone>(v: &[T], skip: &[usize]) -> Vec<T> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, x)| x.clone())
        .collect()
}

/// Calls `f` on every permutation of `idx` with its parity.
pub fn for_each_permutation(idx: &[usize], mut f: impl FnMut(&[usize], bool)) {
    let mut v = idx.to_vec();
    let n = v.len();
    // Heap's algorithm; each step is one transposition
    let mut c = vec![0usize; n];
    let mut odd = false;
    f(&v, odd);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                v.swap(0, i);
            } else {
                v.swap(c[i], i);
            }
            odd = !odd;
            f(&v, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn signs_of_small_permutations() {
        assert_eq!(sort_with_sign(&[0, 1, 2]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_with_sign(&[1, 0, 2]), Some((vec![0, 1, 2], true)));
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
        assert_eq!(sort_with_sign(&[]), Some((vec![], false)));
    }

    #[test]
    fn tuple_counts_are_binomial() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(2, 3).is_empty());
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative_under_swaps(v in proptest::collection::vec(0usize..20, 2..6), i in 0usize..5) {
            let i = i % (v.len() - 1);
            let mut w = v.clone();
            w.swap(i, i + 1);
            match (sort_with_sign(&v), sort_with_sign(&w)) {
                (Some((a, sa)), Some((b, sb))) => {
                    prop_assert_eq!(a, b);
                    prop_assert_eq!(sa, !sb);
                }
                (None, None) => {}
                _ => prop_assert!(false, "repeat detection differs"),
            }
        }
    }
}
