//! Canonical names for finite abelian groups.
//!
//! The invariants of an abelian group are read off from the counts
//! `s_k = #{x : x^(p^k) = 1}`: the number of cyclic factors of order at
//! least `p^k` is `log_p s_k - log_p s_(k-1)`. No basis extraction needed,
//! and the result is canonical by construction.

use serde::{Deserialize, Serialize};
use std::fmt;

use super::{GroupError, GroupTable};

/// Multiset of prime-power cyclic factor orders, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub factors: Vec<u64>,
}

impl AbelianInvariants {
    pub fn new(mut factors: Vec<u64>) -> AbelianInvariants {
        factors.retain(|&f| f > 1);
        factors.sort_unstable_by(|a, b| b.cmp(a));
        AbelianInvariants { factors }
    }

    pub fn trivial() -> AbelianInvariants {
        AbelianInvariants { factors: vec![] }
    }

    /// `k` copies of the cyclic group of order `q`.
    pub fn homocyclic(q: u64, k: usize) -> AbelianInvariants {
        AbelianInvariants::new(vec![q; k])
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// True if all factors are one shared prime.
    pub fn is_elementary(&self) -> bool {
        match self.factors.first() {
            None => false,
            Some(&p) => super::is_prime(p) && self.factors.iter().all(|&f| f == p),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let q = self.factors[i];
            let mut k = 0;
            while i < self.factors.len() && self.factors[i] == q {
                k += 1;
                i += 1;
            }
            if k == 1 {
                parts.push(format!("C{q}"));
            } else {
                parts.push(format!("C{q}^({k})"));
            }
        }
        write!(f, "{}", parts.join(" x "))
    }
}

impl GroupTable {
    /// Canonical prime-power decomposition of an abelian group.
    pub fn abelian_invariants(&self) -> Result<AbelianInvariants, GroupError> {
        if let Some((x, y)) = self.first_noncommuting_pair() {
            return Err(GroupError::NotAbelian { x, y });
        }
        let mut primes: Vec<u64> = Vec::new();
        let mut n = self.order() as u64;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }

        let mut factors = Vec::new();
        for p in primes {
            // s[k] = number of elements whose order divides p^k.
            let mut s = vec![1u64];
            loop {
                let k = s.len() as u32;
                let pk = p.checked_pow(k).expect("order fits in u64");
                let count = (0..self.order())
                    .filter(|&x| {
                        let o = self.elem_order(x) as u64;
                        pk % o == 0
                    })
                    .count() as u64;
                if count == *s.last().unwrap() {
                    break;
                }
                s.push(count);
            }
            let log_p = |v: u64| {
                let mut e = 0u32;
                let mut v = v;
                while v > 1 {
                    debug_assert_eq!(v % p, 0);
                    v /= p;
                    e += 1;
                }
                e
            };
            // d[k] = number of factors of order >= p^k.
            let d: Vec<u32> = (1..s.len())
                .map(|k| log_p(s[k]) - log_p(s[k - 1]))
                .collect();
            for k in 1..=d.len() {
                let here = d[k - 1];
                let next = if k < d.len() { d[k] } else { 0 };
                for _ in 0..(here - next) {
                    factors.push(p.pow(k as u32));
                }
            }
        }
        Ok(AbelianInvariants::new(factors))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for x in 0..self.order() {
            let o = self.elem_order(x) as u64;
            e = lcm(e, o);
        }
        e
    }

    /// Abelian of prime exponent.
    pub fn is_elementary_abelian(&self) -> bool {
        self.is_abelian() && super::is_prime(self.exponent())
    }

    /// Center and derived subgroup coincide, have prime order, and the
    /// central quotient is elementary abelian.
    pub fn is_extra_special(&self) -> bool {
        let z = self.center();
        if !super::is_prime(z.len() as u64) {
            return false;
        }
        let d = self.derived_subgroup();
        if !d.same_members(&z) {
            return false;
        }
        match self.quotient(&z) {
            Ok((q, _)) => q.is_elementary_abelian(),
            Err(_) => false,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
