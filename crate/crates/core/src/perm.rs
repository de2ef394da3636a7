//! Permutations on `{0, .., n-1}` and Schreier–Sims stabilizer chains.
//!
//! Products compose left to right: `x^(pq) = (x^p)^q`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    /// From an image list; `None` if it is not a bijection of `0..n`.
    pub fn from_images(images: Vec<u32>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm(images))
    }

    /// From disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Perm {
        let mut im: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                im[x as usize] = c[(i + 1) % c.len()];
            }
        }
        Perm::from_images(im).expect("cycles must be disjoint")
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
    pub fn images(&self) -> &[u32] {
        &self.0
    }
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `o`.
    pub fn mul(&self, o: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| o.0[x as usize]).collect())
    }

    pub fn inv(&self) -> Perm {
        let mut im = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            im[x as usize] = i as u32;
        }
        Perm(im)
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Nontrivial cycles, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s as u32];
            seen[s] = true;
            let mut x = self.0[s];
            while x as usize != s {
                seen[x as usize] = true;
                c.push(x);
                x = self.0[x as usize];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Restriction to the block `[lo, lo + len)`, renumbered from 0; `None`
    /// if the block is not invariant.
    pub fn restrict(&self, lo: usize, len: usize) -> Option<Perm> {
        let im: Vec<u32> = (lo..lo + len)
            .map(|i| self.0[i].checked_sub(lo as u32).filter(|&x| (x as usize) < len))
            .collect::<Option<_>>()?;
        Some(Perm(im))
    }

    /// Place `self` on `[lo, lo + self.degree())` inside `n` points.
    pub fn shifted(&self, lo: usize, n: usize) -> Perm {
        let mut im: Vec<u32> = (0..n as u32).collect();
        for (i, &x) in self.0.iter().enumerate() {
            im[lo + i] = lo as u32 + x;
        }
        Perm(im)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

struct Level {
    base: u32,
    gens: Vec<Perm>,
    /// `trans[β]` maps the base point to `β`.
    trans: HashMap<u32, Perm>,
    orbit: Vec<u32>,
}

/// Base and strong generating set.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut sc = StabChain { degree, levels: Vec::new() };
        for g in gens {
            if !g.is_identity() && !sc.contains(g) {
                sc.extend(0, g.clone());
            }
        }
        sc
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.sift(0, g.clone()).is_identity()
    }

    fn sift(&self, from: usize, mut h: Perm) -> Perm {
        for l in &self.levels[from.min(self.levels.len())..] {
            let g = h.apply(l.base);
            match l.trans.get(&g) {
                None => return h,
                Some(u) => h = h.mul(&u.inv()),
            }
        }
        h
    }

    fn extend(&mut self, i: usize, g: Perm) {
        if i == self.levels.len() {
            let base = (0..self.degree as u32).find(|&x| g.apply(x) != x).expect("identity passed as strong generator");
            let mut trans = HashMap::new();
            trans.insert(base, Perm::identity(self.degree));
            self.levels.push(Level { base, gens: Vec::new(), trans, orbit: vec![base] });
        }
        self.levels[i].gens.push(g);
        // Orbit closure plus Schreier generator test; deeper levels only grow,
        // so a residue that sifted away stays sifted.
        let mut k = 0;
        loop {
            let mut pending = None;
            'outer: while k < self.levels[i].orbit.len() {
                let beta = self.levels[i].orbit[k];
                let gens = self.levels[i].gens.clone();
                for s in &gens {
                    let gamma = s.apply(beta);
                    let ub = self.levels[i].trans[&beta].clone();
                    if let Some(ug) = self.levels[i].trans.get(&gamma) {
                        let schreier = ub.mul(s).mul(&ug.inv());
                        let r = self.sift(i + 1, schreier);
                        if !r.is_identity() {
                            pending = Some((k, r));
                            break 'outer;
                        }
                    } else {
                        let lvl = &mut self.levels[i];
                        lvl.trans.insert(gamma, ub.mul(s));
                        lvl.orbit.push(gamma);
                    }
                }
                k += 1;
            }
            match pending {
                Some((_, r)) => self.extend(i + 1, r),
                None => break,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_left_to_right() {
        let p = Perm::from_cycles(3, &[&[0, 1]]);
        let q = Perm::from_cycles(3, &[&[1, 2]]);
        // 0 -> 1 under p, then 1 -> 2 under q
        assert_eq!(p.mul(&q).apply(0), 2);
        assert_eq!(p.mul(&p.inv()), Perm::identity(3));
        assert_eq!(Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).order(), 6);
    }

    #[test]
    fn chain_orders() {
        let s4 = StabChain::new(4, &[Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 1]])]);
        assert_eq!(s4.order(), 24);
        let a5 = StabChain::new(5, &[Perm::from_cycles(5, &[&[0, 1, 2]]), Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]])]);
        assert_eq!(a5.order(), 60);
        assert!(!a5.contains(&Perm::from_cycles(5, &[&[0, 1]])));
        let s8 = StabChain::new(8, &[Perm::from_cycles(8, &[&[0, 1, 2, 3, 4, 5, 6, 7]]), Perm::from_cycles(8, &[&[0, 1]])]);
        assert_eq!(s8.order(), 40320);
        assert_eq!(StabChain::new(3, &[]).order(), 1);
    }
}
