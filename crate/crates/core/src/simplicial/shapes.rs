//! Combinatorics of the simplex category: monotone surjections, faces,
//! degeneracies, and epi-mono factorization.

/// All monotone surjections `[n] ↠ [k]`, as value vectors of length
/// `n + 1`, in lexicographic order.
pub fn monotone_surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n + 1);
    fn rec(current: &mut Vec<usize>, n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == n + 1 {
            if current.last() == Some(&k) {
                out.push(current.clone());
            }
            return;
        }
        let last = current.last().copied();
        let lo = last.unwrap_or(0);
        let hi = (last.map_or(0, |l| l + 1)).min(k);
        // Next value keeps the map monotone and steps by at most one so
        // the result is onto a prefix.
        for v in lo..=hi {
            // Onto requires enough remaining slots to reach k.
            let remaining = n + 1 - current.len() - 1;
            if v + remaining >= k {
                current.push(v);
                rec(current, n, k, out);
                current.pop();
            }
        }
    }
    rec(&mut current, n, k, &mut out);
    out
}

/// The face inclusion `δ_i: [n−1] → [n]` omitting `i`, as a value vector.
pub fn face_map(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|j| if j < i { j } else { j + 1 }).collect()
}

/// The degeneracy `σ_i: [n+1] → [n]` repeating `i`, as a value vector.
pub fn degeneracy_map(n: usize, i: usize) -> Vec<usize> {
    (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect()
}

/// Factors a monotone map as an epi `τ` followed by a mono `δ` (the list
/// of distinct values hit, in order).
pub fn epi_mono_factor(f: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut delta: Vec<usize> = f.to_vec();
    delta.dedup();
    let tau = f
        .iter()
        .map(|v| delta.iter().position(|d| d == v).expect("value is hit"))
        .collect();
    (tau, delta)
}
