//! Small independent oracles on `i128`, written without the library's
//! Hermite or Smith machinery. Inputs are tiny, so nothing here overflows.
#![allow(dead_code)]

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// gcd of all `r×r` minors (0 when there are none or all vanish).
pub fn minors_gcd(m: &[Vec<i128>], r: usize) -> i128 {
    if r == 0 {
        return 1;
    }
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = 0;
    for rs in combinations(rows, r) {
        for cs in combinations(cols, r) {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            g = gcd(g, det(&sub));
        }
    }
    g
}

/// Rank as the largest size of a nonvanishing minor.
pub fn rank(m: &[Vec<i128>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (1..=rows.min(cols)).rev().find(|&r| minors_gcd(m, r) != 0).unwrap_or(0)
}

pub fn to_i128(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

/// `θ` lies in the integer span of `gens` iff adding it keeps both the rank
/// and the gcd of maximal minors.
pub fn in_lattice(theta: &[i64], gens: &[Vec<i64>]) -> bool {
    let g = to_i128(gens);
    let r = rank(&g);
    let mut h = g.clone();
    h.push(theta.iter().map(|&x| x as i128).collect());
    if rank(&h) != r {
        return false;
    }
    r == 0 || minors_gcd(&g, r) == minors_gcd(&h, r)
}

/// Some support set `S` whose isotropy has an orbit-space stratum of
/// codimension exactly 1.
pub fn boundary_nonempty(fixed_dim: usize, weights: &[(Vec<i64>, usize)]) -> bool {
    let all: Vec<Vec<i64>> = weights.iter().map(|(v, _)| v.clone()).collect();
    let total = fixed_dim + 2 * weights.iter().map(|(_, m)| m).sum::<usize>();
    let chm = total - rank(&to_i128(&all));
    (0u32..1 << weights.len()).any(|mask| {
        let s: Vec<Vec<i64>> = (0..weights.len()).filter(|i| mask & (1 << i) != 0).map(|i| all[i].clone()).collect();
        let fixed = fixed_dim + 2 * weights.iter().filter(|(v, _)| in_lattice(v, &s)).map(|(_, m)| m).sum::<usize>();
        let quotient = fixed - rank(&to_i128(&s));
        chm - quotient == 1
    })
}

/// First bipartition (class 0 on the left) with additive ranks.
pub fn brute_split(classes: &[Vec<i64>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let m = classes.len();
    if m < 2 {
        return None;
    }
    let r = |idx: &[usize]| rank(&to_i128(&idx.iter().map(|&i| classes[i].clone()).collect::<Vec<_>>()));
    let all: Vec<usize> = (0..m).collect();
    let total = r(&all);
    (1u32..1 << (m - 1)).find_map(|mask| {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| i == 0 || mask & (1 << (i - 1)) == 0);
        (r(&a) + r(&b) == total).then_some((a, b))
    })
}

/// Split recursively until no part splits further.
pub fn iterated_blocks(classes: &[Vec<i64>]) -> Vec<Vec<usize>> {
    fn go(idx: Vec<usize>, classes: &[Vec<i64>], out: &mut Vec<Vec<usize>>) {
        let sub: Vec<Vec<i64>> = idx.iter().map(|&i| classes[i].clone()).collect();
        match brute_split(&sub) {
            Some((a, b)) => {
                go(a.into_iter().map(|i| idx[i]).collect(), classes, out);
                go(b.into_iter().map(|i| idx[i]).collect(), classes, out);
            }
            None => out.push(idx),
        }
    }
    let mut out = Vec::new();
    go((0..classes.len()).collect(), classes, &mut out);
    for b in &mut out {
        b.sort_unstable();
    }
    out.sort();
    out
}
