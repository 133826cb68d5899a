//! Smallest-prime-factor table over all monic polynomials of bounded degree.
//!
//! Entry layout: degree-n monic N sits at `offset[n] + Σ_{i<n} c_i q^i`.
//! Each entry stores its smallest prime factor (as an index into `primes`)
//! and the table slot of the cofactor N / spf(N), which always has smaller
//! degree. Bulk arithmetic functions are then one pass in slot order.

use alloc::vec;
use alloc::vec::Vec;

use super::{Poly, Ring};
use crate::error::{Budget, Result};

const UNSET: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SpfSieve {
    ring: Ring,
    maxdeg: usize,
    offset: Vec<usize>,
    spf: Vec<u32>,
    cof: Vec<u32>,
    primes: Vec<Poly>,
}

impl SpfSieve {
    pub fn new(ring: &Ring, maxdeg: usize, budget: &Budget) -> Result<SpfSieve> {
        let q = ring.q() as u64;
        let mut offset = Vec::with_capacity(maxdeg + 2);
        let mut total: u64 = 0;
        for n in 0..=maxdeg {
            offset.push(total as usize);
            total = total.saturating_add(q.saturating_pow(n as u32));
        }
        budget.check_table("spf sieve entries", total)?;
        offset.push(total as usize);
        let total = total as usize;
        let mut s = SpfSieve {
            ring: ring.clone(),
            maxdeg,
            offset,
            spf: vec![UNSET; total],
            cof: vec![0; total],
            primes: Vec::new(),
        };
        let mut buf = vec![0; maxdeg + 1];
        for d in 1..=maxdeg {
            let first = s.primes.len();
            for slot in s.offset[d]..s.offset[d + 1] {
                if s.spf[slot] == UNSET {
                    s.spf[slot] = s.primes.len() as u32;
                    s.cof[slot] = 0;
                    s.primes.push(s.poly(slot));
                }
            }
            // primes come out of the slot scan in index order; relabel so the
            // prime list is in canonical order before marking multiples
            let mut batch: Vec<(Poly, usize)> = s.primes[first..]
                .iter()
                .map(|p| (p.clone(), s.slot(p).unwrap()))
                .collect();
            batch.sort();
            for (k, (p, slot)) in batch.iter().enumerate() {
                s.primes[first + k] = p.clone();
                s.spf[*slot] = (first + k) as u32;
            }
            for k in first..s.primes.len() {
                let p = s.primes[k].clone();
                for m_deg in 1..=maxdeg - d {
                    for m_slot in s.offset[m_deg]..s.offset[m_deg + 1] {
                        let m = s.poly(m_slot);
                        let n = d + m_deg;
                        super::mul_into(ring.field(), p.coeffs(), m.coeffs(), &mut buf[..=n]);
                        let slot = s.slot_of_coeffs(&buf[..=n]);
                        if s.spf[slot] == UNSET {
                            s.spf[slot] = k as u32;
                            s.cof[slot] = m_slot as u32;
                        }
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn len(&self) -> usize {
        self.spf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spf.is_empty()
    }

    /// Slots holding the monic polynomials of degree n.
    pub fn degree_slots(&self, n: usize) -> core::ops::Range<usize> {
        self.offset[n]..self.offset[n + 1]
    }

    /// Degree of the polynomial in `slot`.
    pub fn degree_of_slot(&self, slot: usize) -> usize {
        self.offset.partition_point(|&o| o <= slot) - 1
    }

    fn slot_of_coeffs(&self, c: &[u16]) -> usize {
        let n = c.len() - 1;
        let q = self.ring.q() as usize;
        let low = c[..n].iter().rev().fold(0usize, |acc, &x| acc * q + x as usize);
        self.offset[n] + low
    }

    /// Slot of a monic polynomial within the table, if it is covered.
    pub fn slot(&self, a: &Poly) -> Option<usize> {
        let n = a.degree()?;
        (a.is_monic() && n <= self.maxdeg).then(|| self.slot_of_coeffs(a.coeffs()))
    }

    pub fn poly(&self, slot: usize) -> Poly {
        let n = self.degree_of_slot(slot);
        let mut low = (slot - self.offset[n]) as u64;
        let q = self.ring.q() as u64;
        let mut c = vec![0u16; n + 1];
        for x in c.iter_mut().take(n) {
            *x = (low % q) as u16;
            low /= q;
        }
        c[n] = 1;
        Poly::from_coeffs(c)
    }

    /// All monic irreducibles of degree ≤ maxdeg, canonical order.
    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    /// Index into [`SpfSieve::primes`] of the smallest prime factor; `None` for 1.
    pub fn spf(&self, slot: usize) -> Option<usize> {
        let s = self.spf[slot];
        (s != UNSET).then_some(s as usize)
    }

    pub fn cofactor(&self, slot: usize) -> usize {
        self.cof[slot] as usize
    }

    /// (prime index, exponent) pairs in canonical prime order.
    pub fn factor_slot(&self, mut slot: usize) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        while let Some(p) = self.spf(slot) {
            match out.last_mut() {
                Some((last, e)) if *last == p => *e += 1,
                _ => out.push((p, 1)),
            }
            slot = self.cofactor(slot);
        }
        out
    }

    fn bulk<T: Copy>(&self, one: T, step: impl Fn(T, bool, u32) -> T) -> Vec<T> {
        // step(value at cofactor, spf is new to the cofactor, exponent of spf)
        let n = self.len();
        let mut out = vec![one; n];
        let mut exps = vec![0u32; n];
        for slot in 1..n {
            let c = self.cof[slot] as usize;
            let fresh = self.spf[c] != self.spf[slot];
            let e = if fresh { 1 } else { exps[c] + 1 };
            exps[slot] = e;
            out[slot] = step(out[c], fresh, e);
        }
        out
    }

    pub fn omega_table(&self) -> Vec<u8> {
        self.bulk(0u8, |v, fresh, _| v + fresh as u8)
    }

    pub fn bigomega_table(&self) -> Vec<u8> {
        self.bulk(0u8, |v, _, _| v + 1)
    }

    pub fn mu_table(&self) -> Vec<i8> {
        self.bulk(1i8, |v, fresh, _| if fresh { -v } else { 0 })
    }

    pub fn divisor_table(&self) -> Vec<u32> {
        self.bulk(1u32, |v, _, e| v / e * (e + 1))
    }

    /// Largest prime-factor degree (p_+), 0 for 1.
    pub fn p_plus_table(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len()];
        for slot in 1..self.len() {
            let pd = self.primes[self.spf[slot] as usize].deg() as u8;
            out[slot] = out[self.cof[slot] as usize].max(pd);
        }
        out
    }

    /// Smallest prime-factor degree (p_−), 0 for 1.
    pub fn p_minus_table(&self) -> Vec<u8> {
        (0..self.len())
            .map(|slot| self.spf(slot).map_or(0, |p| self.primes[p].deg() as u8))
            .collect()
    }

    /// `true` where the entry is coprime to `r`.
    pub fn coprime_table(&self, r: &Poly) -> Result<Vec<bool>> {
        let fac = self.ring.factor(r)?;
        let mut bad = vec![false; self.primes.len()];
        for p in fac.primes() {
            if let Some(slot) = self.slot(p) {
                bad[self.spf[slot] as usize] = true;
            }
        }
        let mut out = vec![true; self.len()];
        for slot in 1..self.len() {
            out[slot] = out[self.cof[slot] as usize] && !bad[self.spf[slot] as usize];
        }
        Ok(out)
    }
}
