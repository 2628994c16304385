use std::collections::{BTreeMap, BTreeSet};

use super::{Cube, SopExpr, TruthTableSpec};

/// All prime implicants of `on ∪ dc` that cover at least one on-set
/// minterm, sorted.
pub fn prime_implicants(spec: &TruthTableSpec) -> Vec<Cube> {
    let n = spec.n_vars();
    let on = spec.on_set();
    if on.is_empty() {
        return Vec::new();
    }
    let mut current: BTreeSet<Cube> = on
        .iter()
        .chain(&spec.dc_set())
        .map(|&m| Cube::minterm(n, m))
        .collect();
    let mut primes = BTreeSet::new();
    while !current.is_empty() {
        // Only cubes with the same dash positions can merge.
        let mut groups: BTreeMap<Vec<bool>, Vec<Cube>> = BTreeMap::new();
        for c in &current {
            let dashes = (0..n)
                .map(|v| c.literal(v) == super::Literal::Dash)
                .collect();
            groups.entry(dashes).or_default().push(*c);
        }
        let mut next = BTreeSet::new();
        let mut merged = BTreeSet::new();
        for group in groups.values() {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    if let Some(m) = a.merge(b) {
                        next.insert(m);
                        merged.insert(*a);
                        merged.insert(*b);
                    }
                }
            }
        }
        primes.extend(current.difference(&merged).copied());
        current = next;
    }
    primes
        .into_iter()
        .filter(|p| on.iter().any(|&m| p.covers(m)))
        .collect()
}

type Cost = (usize, usize, Vec<Cube>);

fn cost_of(selection: &[usize], primes: &[Cube]) -> Cost {
    let mut cubes: Vec<Cube> = selection.iter().map(|&i| primes[i]).collect();
    cubes.sort();
    let literals = cubes.iter().map(Cube::literal_count).sum();
    (cubes.len(), literals, cubes)
}

/// Minimum-cost sum of prime implicants covering the on-set.
///
/// Essential primes are taken first. The rest of the cover is found by an
/// exact branch-and-bound search: branch on the uncovered minterm with the
/// fewest candidate primes, and prune with a lower bound from pairwise
/// disjoint candidate sets. The search starts from a greedy cover, so it
/// always has a valid answer to improve on.
pub fn minimize_exact(spec: &TruthTableSpec) -> SopExpr {
    let n = spec.n_vars();
    let primes = prime_implicants(spec);
    let on = spec.on_set();
    if on.is_empty() {
        return SopExpr::zero(n);
    }

    let covering =
        |m: u32| -> Vec<usize> { (0..primes.len()).filter(|&i| primes[i].covers(m)).collect() };
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    for &m in &on {
        let c = covering(m);
        if c.len() == 1 {
            chosen.insert(c[0]);
        }
    }
    let remaining: Vec<u32> = on
        .iter()
        .copied()
        .filter(|&m| !chosen.iter().any(|&i| primes[i].covers(m)))
        .collect();
    if remaining.is_empty() {
        return SopExpr::new(n, chosen.iter().map(|&i| primes[i]));
    }

    // Each remaining minterm contributes a clause: the primes covering it.
    let mut clauses: Vec<Vec<usize>> = remaining.iter().map(|&m| covering(m)).collect();
    clauses.sort();
    clauses.dedup();
    for clause in &mut clauses {
        clause.sort_by_key(|&i| (primes[i].literal_count(), i));
    }

    let essentials: Vec<usize> = chosen.into_iter().collect();
    let mut greedy = greedy_cover(&clauses, &primes);
    greedy.extend(essentials.iter().copied());
    let mut search = CoverSearch {
        clauses: &clauses,
        primes: &primes,
        essentials: &essentials,
        base_literals: essentials.iter().map(|&i| primes[i].literal_count()).sum(),
        forbidden: vec![false; primes.len()],
        taken: vec![false; primes.len()],
        best: (cost_of(&greedy, &primes), greedy),
    };
    let mut selection = Vec::new();
    search.explore(&mut selection, 0);
    let (_, best) = search.best;
    SopExpr::new(n, best.into_iter().map(|i| primes[i]))
}

struct CoverSearch<'a> {
    clauses: &'a [Vec<usize>],
    primes: &'a [Cube],
    essentials: &'a [usize],
    base_literals: usize,
    /// Primes excluded in this branch (an earlier sibling already tried them).
    forbidden: Vec<bool>,
    taken: Vec<bool>,
    best: (Cost, Vec<usize>),
}

impl CoverSearch<'_> {
    fn bound(&self) -> (usize, usize) {
        (self.best.0 .0, self.best.0 .1)
    }

    fn explore(&mut self, selection: &mut Vec<usize>, literals: usize) {
        let terms = self.essentials.len() + selection.len();
        let literals_total = self.base_literals + literals;

        let open: Vec<&Vec<usize>> = self
            .clauses
            .iter()
            .filter(|c| !c.iter().any(|&p| self.taken[p]))
            .collect();
        if open.is_empty() {
            let mut full = selection.clone();
            full.extend(self.essentials.iter().copied());
            let cost = cost_of(&full, self.primes);
            if cost < self.best.0 {
                self.best = (cost, full);
            }
            return;
        }

        // Candidates per open clause, minus primes ruled out in this branch.
        let mut options: Vec<Vec<usize>> = open
            .iter()
            .map(|c| c.iter().copied().filter(|&p| !self.forbidden[p]).collect())
            .collect();
        if options.iter().any(Vec::is_empty) {
            return;
        }
        options.sort_by_key(Vec::len);

        // Clauses with pairwise disjoint candidates each need their own term.
        let mut used = vec![false; self.primes.len()];
        let (mut extra_terms, mut extra_literals) = (0, 0);
        for opt in &options {
            if opt.iter().all(|&p| !used[p]) {
                opt.iter().for_each(|&p| used[p] = true);
                extra_terms += 1;
                extra_literals += opt
                    .iter()
                    .map(|&p| self.primes[p].literal_count())
                    .min()
                    .unwrap_or(0);
            }
        }
        if (terms + extra_terms, literals_total + extra_literals) > self.bound() {
            return;
        }

        let branch = options.swap_remove(0);
        let mut newly_forbidden = Vec::new();
        for &p in &branch {
            let lits = self.primes[p].literal_count();
            if (terms + 1, literals_total + lits) <= self.bound() {
                self.taken[p] = true;
                selection.push(p);
                self.explore(selection, literals + lits);
                selection.pop();
                self.taken[p] = false;
            }
            self.forbidden[p] = true;
            newly_forbidden.push(p);
        }
        for p in newly_forbidden {
            self.forbidden[p] = false;
        }
    }
}

/// Any valid cover; used only as an upper bound for pruning.
fn greedy_cover(clauses: &[Vec<usize>], primes: &[Cube]) -> Vec<usize> {
    let mut open: Vec<&Vec<usize>> = clauses.iter().collect();
    let mut sel = Vec::new();
    while !open.is_empty() {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for clause in &open {
            for &c in clause.iter() {
                *counts.entry(c).or_default() += 1;
            }
        }
        let (&pick, _) = counts
            .iter()
            .max_by(|a, b| {
                a.1.cmp(b.1).then_with(|| {
                    primes[*b.0]
                        .literal_count()
                        .cmp(&primes[*a.0].literal_count())
                })
            })
            .expect("open clauses are non-empty");
        sel.push(pick);
        open.retain(|clause| !clause.contains(&pick));
    }
    sel.sort_unstable();
    sel
}

#[cfg(test)]
mod tests {
    use super::super::{check_equiv, Tri};
    use super::*;

    fn spec4(f: impl Fn(u32, u32, u32, u32) -> bool) -> TruthTableSpec {
        TruthTableSpec::from_fn(["x1", "x2", "y1", "y2"], |m| {
            f(m >> 3 & 1, m >> 2 & 1, m >> 1 & 1, m & 1)
        })
        .unwrap()
    }

    fn cubes(list: &[&str]) -> Vec<Cube> {
        list.iter().map(|s| Cube::parse(s).unwrap()).collect()
    }

    #[test]
    fn primes_of_simple_functions() {
        let m2 = spec4(|_, x2, _, y2| x2 & y2 == 1);
        assert_eq!(prime_implicants(&m2), cubes(&["-1-1"]));
        let zero = spec4(|_, _, _, _| false);
        assert!(prime_implicants(&zero).is_empty());
        let a2 = spec4(|_, x2, _, y2| x2 ^ y2 == 1);
        assert_eq!(prime_implicants(&a2), cubes(&["-1-0", "-0-1"]));
    }

    #[test]
    fn exact_covers() {
        let m2 = spec4(|_, x2, _, y2| x2 & y2 == 1);
        let e = minimize_exact(&m2);
        assert_eq!((e.term_count(), e.literal_count()), (1, 2));
        let one = spec4(|_, _, _, _| true);
        let e = minimize_exact(&one);
        assert_eq!(e.cubes(), &[Cube::universe(4)]);
        assert_eq!(e.literal_count(), 0);
        let zero = spec4(|_, _, _, _| false);
        assert_eq!(minimize_exact(&zero).term_count(), 0);
    }

    #[test]
    fn cyclic_core_needs_petrick() {
        // f = sum m(0,1,2,5,6,7) over 3 variables has no essential primes.
        let spec =
            TruthTableSpec::from_fn(["a", "b", "c"], |m| [0, 1, 2, 5, 6, 7].contains(&m)).unwrap();
        let e = minimize_exact(&spec);
        assert!(check_equiv(&e, &spec));
        assert_eq!((e.term_count(), e.literal_count()), (3, 6));
        // Tie-break is deterministic.
        assert_eq!(e, minimize_exact(&spec.clone()));
    }

    #[test]
    fn dont_cares_are_used() {
        let mut outs = vec![Tri::Off; 8];
        outs[7] = Tri::On;
        outs[6] = Tri::DontCare;
        outs[5] = Tri::DontCare;
        outs[4] = Tri::DontCare;
        let spec = TruthTableSpec::new(["a", "b", "c"], outs).unwrap();
        let e = minimize_exact(&spec);
        assert_eq!(e.cubes(), &cubes(&["1--"]));
        // A dc-only region never yields a prime on its own.
        let mut outs = vec![Tri::Off; 4];
        outs[0] = Tri::DontCare;
        outs[3] = Tri::On;
        let spec = TruthTableSpec::new(["a", "b"], outs).unwrap();
        assert_eq!(prime_implicants(&spec), cubes(&["11"]));
    }
}
