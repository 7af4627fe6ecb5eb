//! Box search for vectors of prescribed square and parity.
//!
//! All but the last coordinate are enumerated; the last one is solved from
//! the quadratic `a·y² + 2·b·y + c = target`, so a box of side `2B+1` in
//! rank `r` costs about `(B+1)^(r-1)` nodes once parity is fixed.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::forms::IntersectionForm;

pub(crate) trait SearchInt: Clone + Ord + Integer + Signed + Roots + ToPrimitive + From<i64> {}

impl<T: Clone + Ord + Integer + Signed + Roots + ToPrimitive + From<i64>> SearchInt for T {}

pub(crate) struct LatticeSearch<T> {
    gram: Vec<Vec<T>>,
    target: T,
    odd: Vec<bool>,
}

/// Values in `[-m, m]` with the requested parity, ascending.
fn coordinate_values(m: i64, odd: bool) -> impl Iterator<Item = i64> {
    let start = if (-m).rem_euclid(2) == i64::from(odd) { -m } else { -m + 1 };
    (start..=m).step_by(2)
}

impl<T: SearchInt> LatticeSearch<T> {
    pub(crate) fn new(gram: Vec<Vec<T>>, target: T, odd: Vec<bool>) -> Self {
        Self { gram, target, odd }
    }

    fn rank(&self) -> usize {
        self.odd.len()
    }

    /// Smallest max-norm solution, lexicographically least at that norm.
    pub(crate) fn first(&self, bound: i64) -> Option<Vec<i64>> {
        (0..=bound).find_map(|m| {
            let mut hit = None;
            self.scan(m, true, &mut |x| {
                hit = Some(x.to_vec());
                ControlFlow::Break(())
            });
            hit
        })
    }

    /// Every solution in `[-bound, bound]^r`, lexicographically.
    pub(crate) fn all(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.scan(bound, false, &mut |x| {
            out.push(x.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    fn scan(&self, m: i64, shell: bool, visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>) {
        let r = self.rank();
        if r == 0 {
            if m == 0 && self.target.is_zero() {
                let _ = visit(&[]);
            }
            return;
        }
        let mut state = Walk {
            search: self,
            m,
            shell,
            x: vec![0; r],
            lin: vec![T::zero(); r],
        };
        let _ = state.descend(0, T::zero(), 0, visit);
    }
}

struct Walk<'a, T> {
    search: &'a LatticeSearch<T>,
    m: i64,
    shell: bool,
    x: Vec<i64>,
    /// lin[j] = Σ_{assigned i} Q_ij x_i
    lin: Vec<T>,
}

impl<T: SearchInt> Walk<'_, T> {
    fn descend(
        &mut self,
        depth: usize,
        partial: T,
        prefix_max: i64,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let r = self.search.rank();
        let gram = &self.search.gram;
        if depth + 1 == r {
            return self.solve_last(depth, partial, prefix_max, visit);
        }
        for v in coordinate_values(self.m, self.search.odd[depth]) {
            let tv = T::from(v);
            let two = T::from(2);
            let next = partial.clone()
                + gram[depth][depth].clone() * tv.clone() * tv.clone()
                + two * tv.clone() * self.lin[depth].clone();
            for j in depth + 1..r {
                self.lin[j] = self.lin[j].clone() + gram[depth][j].clone() * tv.clone();
            }
            self.x[depth] = v;
            let flow = self.descend(depth + 1, next, prefix_max.max(v.abs()), visit);
            for j in depth + 1..r {
                self.lin[j] = self.lin[j].clone() - gram[depth][j].clone() * tv.clone();
            }
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn solve_last(
        &mut self,
        last: usize,
        partial: T,
        prefix_max: i64,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let a = self.search.gram[last][last].clone();
        let b = self.lin[last].clone();
        let rest = partial - self.search.target.clone();
        let odd = self.search.odd[last];
        let (m, shell) = (self.m, self.shell);
        let accept = |y: i64| {
            y.abs() <= m && (y.rem_euclid(2) == 1) == odd && (!shell || prefix_max.max(y.abs()) == m)
        };

        let mut roots: Vec<i64> = Vec::with_capacity(2);
        if a.is_zero() {
            if b.is_zero() {
                if rest.is_zero() {
                    let free: Vec<i64> = coordinate_values(m, odd).filter(|&y| accept(y)).collect();
                    for y in free {
                        self.x[last] = y;
                        visit(&self.x)?;
                    }
                }
                return ControlFlow::Continue(());
            }
            let den = T::from(2) * b;
            let num = -rest;
            if num.is_multiple_of(&den) {
                push_small(&mut roots, num / den, m);
            }
        } else {
            let disc = b.clone() * b.clone() - a.clone() * rest;
            if disc.is_negative() {
                return ControlFlow::Continue(());
            }
            let s = disc.sqrt();
            if s.clone() * s.clone() != disc {
                return ControlFlow::Continue(());
            }
            for num in [-b.clone() - s.clone(), -b + s] {
                if num.is_multiple_of(&a) {
                    push_small(&mut roots, num / a.clone(), m);
                }
            }
            roots.sort_unstable();
            roots.dedup();
        }
        for y in roots {
            if accept(y) {
                self.x[last] = y;
                visit(&self.x)?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn push_small<T: SearchInt>(roots: &mut Vec<i64>, y: T, m: i64) {
    if let Some(v) = y.to_i64().filter(|v| v.abs() <= m) {
        roots.push(v);
    }
}

/// Search parameters prepared from an exact form, choosing `i128`
/// arithmetic whenever every intermediate value provably fits.
pub(crate) enum PreparedSearch {
    Machine(LatticeSearch<i128>),
    Exact(LatticeSearch<BigInt>),
}

impl PreparedSearch {
    pub(crate) fn new(form: &IntersectionForm, target: &BigInt, odd: &[bool], bound: i64) -> Self {
        let n = form.rank();
        let q = form.matrix();
        let gram: Vec<Vec<BigInt>> = (0..n).map(|i| q.row(i).to_vec()).collect();
        let max_entry = gram.iter().flatten().map(Signed::abs).max().unwrap_or_else(BigInt::zero);
        let scale = &max_entry * BigInt::from(n.max(1)) * BigInt::from(bound.max(1));
        let worst = BigInt::from(8) * &scale * &scale + &max_entry * target.abs() + BigInt::one();
        let fits = worst.bits() < 125 && target.to_i128().is_some();
        if fits {
            let gram = gram
                .iter()
                .map(|r| r.iter().map(|v| v.to_i128().expect("checked above")).collect())
                .collect();
            PreparedSearch::Machine(LatticeSearch::new(
                gram,
                target.to_i128().expect("checked above"),
                odd.to_vec(),
            ))
        } else {
            PreparedSearch::Exact(LatticeSearch::new(gram, target.clone(), odd.to_vec()))
        }
    }

    pub(crate) fn first(&self, bound: i64) -> Option<Vec<i64>> {
        match self {
            PreparedSearch::Machine(s) => s.first(bound),
            PreparedSearch::Exact(s) => s.first(bound),
        }
    }

    pub(crate) fn all(&self, bound: i64) -> Vec<Vec<i64>> {
        match self {
            PreparedSearch::Machine(s) => s.all(bound),
            PreparedSearch::Exact(s) => s.all(bound),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::build_form;

    fn brute(form: &IntersectionForm, target: i64, odd: &[bool], bound: i64) -> Vec<Vec<i64>> {
        let n = form.rank();
        let mut out = Vec::new();
        let mut x = vec![-bound; n];
        loop {
            let ok = x.iter().zip(odd).all(|(v, &o)| (v.rem_euclid(2) == 1) == o);
            if ok {
                let xs: Vec<BigInt> = x.iter().map(|&v| v.into()).collect();
                if form.evaluate(&xs).unwrap() == BigInt::from(target) {
                    out.push(x.clone());
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = -bound;
            }
        }
    }

    #[test]
    fn matches_brute_force_on_small_boxes() {
        let cases = [
            ("H", vec![false, false]),
            ("diag(1,-1)", vec![true, true]),
            ("matrix [[2,1,0],[1,-2,1],[0,1,3]]", vec![false, true, true]),
            ("diag(3)", vec![true]),
            ("matrix [[0,0],[0,0]]", vec![false, true]),
        ];
        for (spec, odd) in cases {
            let form = build_form(spec).unwrap();
            for target in -20..=20 {
                let want = brute(&form, target, &odd, 5);
                let s = PreparedSearch::new(&form, &BigInt::from(target), &odd, 5);
                assert_eq!(s.all(5), want, "{spec} target {target}");
                let exact = LatticeSearch::new(
                    (0..form.rank()).map(|i| form.matrix().row(i).to_vec()).collect(),
                    BigInt::from(target),
                    odd.clone(),
                );
                assert_eq!(exact.all(5), want);
                let best = want.iter().min_by_key(|x| (x.iter().map(|v| v.abs()).max().unwrap_or(0), (*x).clone()));
                assert_eq!(s.first(5).as_ref(), best, "{spec} target {target}");
            }
        }
    }

    #[test]
    fn rank_zero() {
        let s = LatticeSearch::<i128>::new(vec![], 0, vec![]);
        assert_eq!(s.first(3), Some(vec![]));
        let s = LatticeSearch::<i128>::new(vec![], 1, vec![]);
        assert_eq!(s.first(3), None);
    }

    #[test]
    fn parity_ranges() {
        assert_eq!(coordinate_values(3, false).collect::<Vec<_>>(), vec![-2, 0, 2]);
        assert_eq!(coordinate_values(3, true).collect::<Vec<_>>(), vec![-3, -1, 1, 3]);
        assert_eq!(coordinate_values(0, true).count(), 0);
    }
}
