use std::collections::HashSet;

use crate::error::{Error, Result};

use super::{inv_mod, Ambient, Point, ProjectiveLine, MAX_ENUMERATION};

/// A linear subspace of `Z_p^d`, stored as the rows of its reduced echelon
/// form. Two subspaces are equal iff their echelon forms are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: Ambient,
    basis: Vec<Point>,
}

impl Subspace {
    pub fn zero(ambient: &Ambient) -> Self {
        Subspace {
            ambient: *ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: &Ambient) -> Self {
        let basis = (0..ambient.d())
            .map(|i| {
                let mut c = vec![0; ambient.d()];
                c[i] = 1;
                Point(c)
            })
            .collect();
        Subspace {
            ambient: *ambient,
            basis,
        }
    }

    /// Span of arbitrary generators (zero and dependent ones allowed).
    pub fn span(ambient: &Ambient, generators: &[Point]) -> Self {
        let p = ambient.p();
        let d = ambient.d();
        let mut rows: Vec<Vec<u64>> = generators.iter().map(|g| g.0.clone()).collect();
        let mut rank = 0;
        for col in 0..d {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = inv_mod(rows[rank][col], p);
            for v in rows[rank].iter_mut() {
                *v = *v * inv % p;
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + p * p - factor * pv % p) % p;
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        Subspace {
            ambient: *ambient,
            basis: rows.into_iter().map(Point).collect(),
        }
    }

    pub fn line(ambient: &Ambient, line: &ProjectiveLine) -> Self {
        Subspace::span(ambient, std::slice::from_ref(line.rep()))
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Echelon basis rows.
    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn size(&self) -> usize {
        (self.ambient.p() as usize).pow(self.dim() as u32)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.0.iter().position(|&c| c != 0).expect("echelon rows are nonzero"))
            .collect()
    }

    /// Subtracts basis multiples so that every pivot coordinate becomes 0.
    /// Two points are congruent modulo the subspace iff they reduce equally.
    pub fn reduce(&self, x: &Point) -> Point {
        let a = &self.ambient;
        let mut out = x.clone();
        for (row, col) in self.basis.iter().zip(self.pivots()) {
            let c = out.0[col];
            if c != 0 {
                out = a.sub(&out, &a.scale(c, row));
            }
        }
        out
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.reduce(x).is_zero()
    }

    /// All `p^k` points, in the order of their coefficient vectors.
    pub fn points(&self) -> Vec<Point> {
        let a = &self.ambient;
        let p = a.p() as usize;
        let k = self.dim();
        (0..self.size())
            .map(|mut idx| {
                let mut x = a.zero();
                for row in self.basis.iter().rev().take(k) {
                    let c = (idx % p) as u64;
                    idx /= p;
                    if c != 0 {
                        x = a.add(&x, &a.scale(c, row));
                    }
                }
                x
            })
            .collect()
    }

    /// The lines through the origin contained in this subspace.
    pub fn lines(&self) -> Vec<ProjectiveLine> {
        let set: HashSet<ProjectiveLine> = self
            .points()
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| ProjectiveLine::through(&self.ambient, x).expect("nonzero"))
            .collect();
        let mut lines: Vec<_> = set.into_iter().collect();
        lines.sort();
        lines
    }

    /// Dot-product orthocomplement `{ x : x . v = 0 for all v }`.
    pub fn perp(&self) -> Subspace {
        let a = &self.ambient;
        let p = a.p();
        let pivots = self.pivots();
        let generators: Vec<Point> = (0..a.d())
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0u64; a.d()];
                v[free] = 1;
                for (row, &pc) in self.basis.iter().zip(&pivots) {
                    v[pc] = (p - row.0[free]) % p;
                }
                Point(v)
            })
            .collect();
        Subspace::span(a, &generators)
    }

    pub fn is_lagrangian(&self) -> bool {
        2 * self.dim() == self.ambient.d() && self.perp() == *self
    }

    /// Smallest subspace containing both.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Subspace::span(&self.ambient, &gens)
    }

    /// The subspace spanned by `points` when `points` is itself a subspace.
    pub fn from_point_set(ambient: &Ambient, points: &[Point]) -> Option<Subspace> {
        let span = Subspace::span(ambient, points);
        let distinct: HashSet<&Point> = points.iter().collect();
        (distinct.len() == span.size() && points.iter().all(|x| span.contains(x))).then_some(span)
    }

    /// Indicator membership for every point index.
    pub fn membership(&self) -> Vec<bool> {
        let mut m = vec![false; self.ambient.size()];
        for x in self.points() {
            m[self.ambient.index(&x)] = true;
        }
        m
    }
}

/// A coset `anchor + direction`, with the anchor reduced against the
/// direction's echelon form so that equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    direction: Subspace,
    anchor: Point,
}

impl AffineSubspace {
    pub fn new(direction: Subspace, x: &Point) -> Self {
        let anchor = direction.reduce(x);
        AffineSubspace { direction, anchor }
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.direction.reduce(x) == self.anchor
    }

    pub fn points(&self) -> Vec<Point> {
        let a = self.direction.ambient();
        self.direction
            .points()
            .iter()
            .map(|v| a.add(&self.anchor, v))
            .collect()
    }

    /// The `p^(d-k)` cosets of `direction`, ordered by anchor.
    pub fn cosets(direction: &Subspace) -> Vec<AffineSubspace> {
        let a = direction.ambient();
        let mut anchors: Vec<Point> = a
            .points()
            .map(|x| direction.reduce(&x))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        anchors.sort();
        anchors
            .into_iter()
            .map(|anchor| AffineSubspace {
                direction: direction.clone(),
                anchor,
            })
            .collect()
    }
}

/// Gaussian binomial coefficient `[d choose k]_p`: the number of
/// `k`-dimensional subspaces of `Z_p^d`.
pub fn gaussian_binomial(d: usize, k: usize, p: u64) -> u128 {
    if k > d {
        return 0;
    }
    let p = p as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= p.pow((d - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Every `k`-dimensional subspace, enumerated through its reduced echelon
/// form (pivot columns, then free entries).
pub fn enumerate_subspaces(ambient: &Ambient, k: usize) -> Result<Vec<Subspace>> {
    let d = ambient.d();
    if k > d {
        return Ok(Vec::new());
    }
    let count = gaussian_binomial(d, k, ambient.p());
    if count > MAX_ENUMERATION as u128 {
        return Err(Error::Capacity(format!("{count} subspaces of dimension {k}")));
    }
    let p = ambient.p();
    let mut out = Vec::with_capacity(count as usize);
    for pivots in combinations(d, k) {
        // Free slots: row i, column c > pivots[i] that is not a pivot.
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = &pivots;
                ((pv[i] + 1)..d)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let total = (p as usize).pow(slots.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; d]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            for &(i, c) in &slots {
                rows[i][c] = (code % p as usize) as u64;
                code /= p as usize;
            }
            out.push(Subspace {
                ambient: *ambient,
                basis: rows.into_iter().map(Point).collect(),
            });
        }
    }
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

/// Every subspace of every dimension, by increasing dimension.
pub fn enumerate_all_subspaces(ambient: &Ambient) -> Result<Vec<Subspace>> {
    let mut all = Vec::new();
    for k in 0..=ambient.d() {
        all.extend(enumerate_subspaces(ambient, k)?);
    }
    Ok(all)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A `(k+1)`-dimensional subspace meeting none of the `avoid` lines except at
/// the origin. Grows a chain `V_1 < ... < V_{k+1}`, at each step taking the
/// first extension (in lexicographic order of the quotient line
/// representative) that avoids every line. Requires
/// `|avoid| < (p^(d-k) - 1) / (p - 1)`.
pub fn avoid_lines_subspace(
    ambient: &Ambient,
    avoid: &[ProjectiveLine],
    k: usize,
) -> Result<Subspace> {
    let d = ambient.d();
    let p = ambient.p() as u128;
    if k >= d {
        return Err(Error::Precondition(format!("need k < d, got k={k}, d={d}")));
    }
    let blocked: HashSet<&ProjectiveLine> = avoid.iter().collect();
    let bound = (p.pow((d - k) as u32) - 1) / (p - 1);
    if blocked.len() as u128 >= bound {
        return Err(Error::Precondition(format!(
            "{} lines to avoid, need fewer than {bound}",
            blocked.len()
        )));
    }
    let avoids = |v: &Subspace| {
        v.points().iter().filter(|x| !x.is_zero()).all(|x| {
            !blocked.contains(&ProjectiveLine::through(ambient, x).expect("nonzero"))
        })
    };
    let mut current = Subspace::zero(ambient);
    for _ in 0..=k {
        let pivots = current.pivots();
        let next = ambient
            .points()
            .filter(|w| {
                pivots.iter().all(|&c| w.0[c] == 0)
                    && w.0.iter().copied().find(|&c| c != 0) == Some(1)
            })
            .map(|w| current.join(&Subspace::span(ambient, &[w])))
            .find(|v| avoids(v));
        current = next.expect("line-avoidance extension must exist below the bound");
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(p: u64, d: usize) -> Ambient {
        Ambient::new(p, d).unwrap()
    }

    fn line(a: &Ambient, c: &[u64]) -> ProjectiveLine {
        ProjectiveLine::through(a, &Point(c.to_vec())).unwrap()
    }

    /// Brute-force orthocomplement: filter all points by dot products.
    fn perp_brute(v: &Subspace) -> Vec<Point> {
        let a = v.ambient();
        a.points()
            .filter(|x| v.basis().iter().all(|b| a.dot(x, b) == 0))
            .collect()
    }

    #[test]
    fn perp_examples() {
        let a = amb(2, 2);
        let v = Subspace::span(&a, &[Point(vec![1, 1])]);
        assert_eq!(v.perp(), v);
        assert!(v.is_lagrangian());

        let a = amb(3, 2);
        let v = Subspace::span(&a, &[Point(vec![1, 0])]);
        assert_eq!(v.perp(), Subspace::span(&a, &[Point(vec![0, 1])]));

        let a = amb(5, 4);
        let v = Subspace::span(&a, &[Point(vec![1, 2, 0, 0]), Point(vec![0, 0, 1, 3])]);
        let w = v.perp();
        assert_eq!(w.dim(), 2);
        let mut brute = perp_brute(&v);
        let mut got = w.points();
        brute.sort();
        got.sort();
        assert_eq!(got, brute);
        assert_eq!(w.perp(), v);
    }

    #[test]
    fn perp_is_involutive_and_complementary() {
        for (p, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
            let a = amb(p, d);
            for v in enumerate_all_subspaces(&a).unwrap() {
                let w = v.perp();
                assert_eq!(v.dim() + w.dim(), d);
                assert_eq!(w.perp(), v);
                let mut brute = perp_brute(&v);
                let mut got = w.points();
                brute.sort();
                got.sort();
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        for (p, d) in [(2, 3), (3, 3), (5, 2)] {
            let a = amb(p, d);
            for k in 0..=d {
                let subs = enumerate_subspaces(&a, k).unwrap();
                let distinct: HashSet<_> = subs.iter().collect();
                assert_eq!(distinct.len() as u128, gaussian_binomial(d, k, p));
                assert!(subs.iter().all(|s| s.dim() == k));
            }
        }
    }

    #[test]
    fn span_is_canonical() {
        let a = amb(5, 3);
        let s1 = Subspace::span(&a, &[Point(vec![1, 2, 3]), Point(vec![0, 1, 1])]);
        let s2 = Subspace::span(
            &a,
            &[Point(vec![1, 3, 4]), Point(vec![2, 4, 1]), a.zero()],
        );
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
        assert_eq!(s1.size(), 25);
    }

    #[test]
    fn affine_cosets() {
        let a = amb(3, 2);
        let v = Subspace::span(&a, &[Point(vec![0, 1])]);
        let cosets = AffineSubspace::cosets(&v);
        assert_eq!(cosets.len(), 3);
        let c1 = AffineSubspace::new(v.clone(), &Point(vec![1, 2]));
        let c2 = AffineSubspace::new(v.clone(), &Point(vec![1, 0]));
        assert_eq!(c1, c2);
        assert!(c1.contains(&Point(vec![1, 1])));
        assert!(!c1.contains(&Point(vec![2, 1])));
        let mut all: Vec<Point> = cosets.iter().flat_map(|c| c.points()).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn from_point_set_detects_subspaces() {
        let a = amb(3, 2);
        let v = Subspace::span(&a, &[Point(vec![1, 2])]);
        assert_eq!(Subspace::from_point_set(&a, &v.points()), Some(v));
        assert_eq!(
            Subspace::from_point_set(&a, &[a.zero(), Point(vec![1, 2])]),
            None
        );
    }

    #[test]
    fn avoid_lines_examples() {
        let a = amb(3, 2);
        let v = avoid_lines_subspace(&a, &[line(&a, &[1, 0])], 0).unwrap();
        assert_eq!(v, Subspace::line(&a, &line(&a, &[0, 1])));

        let a = amb(2, 3);
        let v = avoid_lines_subspace(&a, &[], 1).unwrap();
        assert_eq!(
            v,
            Subspace::span(&a, &[Point(vec![0, 0, 1]), Point(vec![0, 1, 0])])
        );

        let s = [line(&a, &[1, 0, 0]), line(&a, &[0, 1, 0])];
        let v = avoid_lines_subspace(&a, &s, 1).unwrap();
        assert_eq!(v.dim(), 2);
        // Exhaustive oracle: the 2-dim subspaces avoiding both lines.
        let valid: Vec<Subspace> = enumerate_subspaces(&a, 2)
            .unwrap()
            .into_iter()
            .filter(|w| s.iter().all(|l| !w.contains(l.rep())))
            .collect();
        assert!(!valid.is_empty());
        assert!(valid.contains(&v));
    }

    #[test]
    fn avoid_lines_rejects_too_many() {
        let a = amb(2, 3);
        let lines = crate::algebra::enumerate_lines(&a).unwrap();
        assert!(matches!(
            avoid_lines_subspace(&a, &lines[..3], 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            avoid_lines_subspace(&a, &[], 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn avoid_lines_at_boundary_size_is_exhaustively_sound() {
        let a = amb(2, 3);
        let lines = crate::algebra::enumerate_lines(&a).unwrap();
        for k in 0..3usize {
            let size = (2usize.pow((3 - k) as u32) - 1) - 1;
            for mask in 0u32..(1 << lines.len()) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let s: Vec<_> = (0..lines.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| lines[i].clone())
                    .collect();
                let v = avoid_lines_subspace(&a, &s, k).unwrap();
                assert_eq!(v.dim(), k + 1);
                for l in &s {
                    assert!(!v.contains(l.rep()));
                }
            }
        }
    }
}
