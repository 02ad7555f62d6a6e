//! Exact convex hull of integer points in R³.

use std::collections::{BTreeMap, HashMap, HashSet};

pub type P3 = [i128; 3];

fn sub(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: &P3, b: &P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: &P3, b: &P3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Sign of `det(b - a, c - a, d - a)`.
fn orient(a: &P3, b: &P3, c: &P3, d: &P3) -> i128 {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a)).signum()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: P3) -> P3 {
    let g = gcd(gcd(v[0], v[1]), v[2]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g, v[2] / g]
    }
}

/// A facet: polygon corners in counterclockwise order seen from outside, with
/// primitive outward normal `n` and offset `n·x = h` on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub corners: Vec<usize>,
    pub normal: P3,
    pub offset: i128,
}

/// Hull facets of `pts`, coplanar triangles merged and collinear boundary
/// points dropped. `None` when the points are coplanar.
pub fn convex_hull(pts: &[P3]) -> Option<Vec<Facet>> {
    let n = pts.len();
    if n < 4 {
        return None;
    }
    let i0 = 0;
    let i1 = (1..n).find(|&i| pts[i] != pts[i0])?;
    let d01 = sub(&pts[i1], &pts[i0]);
    let i2 = (1..n).find(|&i| cross(&d01, &sub(&pts[i], &pts[i0])) != [0, 0, 0])?;
    let i3 = (1..n).find(|&i| orient(&pts[i0], &pts[i1], &pts[i2], &pts[i]) != 0)?;
    let mut tris: Vec<[usize; 3]> = if orient(&pts[i0], &pts[i1], &pts[i2], &pts[i3]) < 0 {
        vec![[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]]
    } else {
        vec![[i0, i2, i1], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    };
    for p in 0..n {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        let visible: Vec<bool> = tris.iter().map(|t| orient(&pts[t[0]], &pts[t[1]], &pts[t[2]], &pts[p]) > 0).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (t, _) in tris.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                edges.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let mut next = Vec::with_capacity(tris.len());
        for (t, &v) in tris.iter().zip(&visible) {
            if !v {
                next.push(*t);
            }
        }
        for &(a, b) in &edges {
            if !edges.contains(&(b, a)) {
                next.push([a, b, p]);
            }
        }
        tris = next;
    }
    Some(merge(pts, &tris))
}

fn merge(pts: &[P3], tris: &[[usize; 3]]) -> Vec<Facet> {
    let mut groups: BTreeMap<(P3, i128), Vec<[usize; 3]>> = BTreeMap::new();
    for t in tris {
        let nrm = primitive(cross(&sub(&pts[t[1]], &pts[t[0]]), &sub(&pts[t[2]], &pts[t[0]])));
        let h = dot(&nrm, &pts[t[0]]);
        groups.entry((nrm, h)).or_default().push(*t);
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((normal, offset), ts) in groups {
        let mut directed: HashSet<(usize, usize)> = HashSet::new();
        for t in &ts {
            for k in 0..3 {
                directed.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let mut succ: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in &directed {
            if !directed.contains(&(b, a)) {
                succ.insert(a, b);
            }
        }
        let start = *succ.keys().min().expect("nonempty facet");
        let mut cycle = vec![start];
        let mut cur = succ[&start];
        while cur != start {
            cycle.push(cur);
            cur = succ[&cur];
        }
        let m = cycle.len();
        let corners: Vec<usize> = (0..m)
            .filter(|&k| {
                let a = &pts[cycle[(k + m - 1) % m]];
                let b = &pts[cycle[k]];
                let c = &pts[cycle[(k + 1) % m]];
                cross(&sub(b, a), &sub(c, b)) != [0, 0, 0]
            })
            .map(|k| cycle[k])
            .collect();
        out.push(Facet { corners, normal, offset });
    }
    out
}
