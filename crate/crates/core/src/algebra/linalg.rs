//! Dense linear algebra over ℤ/p for small systems.

use super::fp::{mulmod, powmod};

/// Row-reduce in place; returns the pivot columns.
fn rref(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] % p != 0) else { continue };
        a.swap(r, pr);
        let inv = powmod(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    let sub = mulmod(f, a[r][j], p);
                    a[i][j] = (a[i][j] + p - sub) % p;
                }
            }
        }
        piv.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    piv
}

/// Basis of the right null space of `a` (rows × cols) over 𝔽_p.
pub fn nullspace_mod_p(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let piv = rref(&mut m, p);
    let mut out = Vec::new();
    for fc in (0..cols).filter(|c| !piv.contains(c)) {
        let mut v = vec![0u64; cols];
        v[fc] = 1;
        for (i, &c) in piv.iter().enumerate() {
            v[c] = (p - m[i][fc]) % p;
        }
        out.push(v);
    }
    out
}

/// Solve a·x = b for square invertible a.
pub fn solve_mod_p(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row: Vec<u64> = r.iter().map(|x| x % p).collect();
            row.push(bi % p);
            row
        })
        .collect();
    let piv = rref(&mut m, p);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.iter().map(|r| r[n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_systems() {
        let a = vec![vec![1, 2], vec![3, 4]];
        let x = solve_mod_p(&a, &[5, 6], 7).unwrap();
        assert_eq!(((x[0] + 2 * x[1]) % 7, (3 * x[0] + 4 * x[1]) % 7), (5, 6));
        let n = nullspace_mod_p(&[vec![1, 1, 0]], 5);
        assert_eq!(n.len(), 2);
    }
}
