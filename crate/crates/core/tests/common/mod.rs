//! Test-side oracles, written independently of the library.
#![allow(dead_code)]

/// True when no non-trivial signed sum of at most `t` elements of `xs`
/// (repetition allowed) vanishes mod `n`. Checks every combination from
/// scratch.
pub fn naive_sidon(xs: &[u64], n: u64, t: u32) -> bool {
    let m = |v: i64| v.rem_euclid(n as i64) == 0;
    let v: Vec<i64> = xs.iter().map(|&x| x as i64).collect();
    for &a in &v {
        if m(a) {
            return false;
        }
        if t < 2 {
            continue;
        }
        for &b in &v {
            if m(a + b) || (a != b && m(a - b)) {
                return false;
            }
            if t < 3 {
                continue;
            }
            for &c in &v {
                if m(a + b + c) || (c != a && c != b && m(a + b - c)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Largest Sidon-type set mod `n`, by plain backtracking: each candidate is
/// admitted only if the enlarged set passes [`naive_sidon`], and a branch is
/// abandoned when even taking every remaining admissible candidate cannot
/// beat the best size found.
pub fn oracle_max_size(n: u64, t: u32) -> usize {
    fn go(n: u64, t: u32, set: &mut Vec<u64>, candidates: &[u64], best: &mut usize) {
        *best = (*best).max(set.len());
        for (i, &x) in candidates.iter().enumerate() {
            if set.len() + candidates.len() - i <= *best {
                return;
            }
            set.push(x);
            let rest: Vec<u64> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&y| {
                    set.push(y);
                    let ok = naive_sidon(set, n, t);
                    set.pop();
                    ok
                })
                .collect();
            go(n, t, set, &rest, best);
            set.pop();
        }
    }
    let candidates: Vec<u64> = (1..n).filter(|&x| naive_sidon(&[x], n, t)).collect();
    let mut best = 0;
    go(n, t, &mut Vec::new(), &candidates, &mut best);
    best
}
