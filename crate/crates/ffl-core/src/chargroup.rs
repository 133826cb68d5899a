//! The unit group (F_q[T]/R)^* and its Dirichlet characters.
//!
//! Residues of degree < deg R are addressed by their base-q index (see
//! [`Ring::index_of`]). Units carry a packed discrete log: with generators
//! g_1..g_k of orders d_1..d_k, the exponent vector (x_1..x_k) is stored as
//! x_1 + d_1(x_2 + d_2(x_3 + ...)).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Budget, Error, Result};
use crate::gf::{Elem, Field};
use crate::multfun;
use crate::poly::{Factorization, Poly, Ring};

pub const NO_LOG: u32 = u32::MAX;

/// Multiplication of residues modulo a fixed monic R, on digit buffers.
pub struct ModCtx<'a> {
    f: &'a Field,
    r: Vec<Elem>,
    n: usize,
    q: u64,
    a: Vec<Elem>,
    b: Vec<Elem>,
    prod: Vec<Elem>,
}

impl<'a> ModCtx<'a> {
    pub fn new(ring: &'a Ring, r: &Poly) -> ModCtx<'a> {
        let n = r.deg();
        ModCtx {
            f: ring.field(),
            r: r.coeffs().to_vec(),
            n,
            q: ring.q() as u64,
            a: vec![0; n],
            b: vec![0; n],
            prod: vec![0; 2 * n.max(1)],
        }
    }

    fn decode(q: u64, mut idx: u64, out: &mut [Elem]) {
        for x in out.iter_mut() {
            *x = (idx % q) as Elem;
            idx /= q;
        }
    }

    fn encode(q: u64, c: &[Elem]) -> u64 {
        c.iter().rev().fold(0, |acc, &x| acc * q + x as u64)
    }

    pub fn mul(&mut self, x: u64, y: u64) -> u64 {
        let n = self.n;
        if n == 0 {
            return 0;
        }
        Self::decode(self.q, x, &mut self.a);
        Self::decode(self.q, y, &mut self.b);
        let f = self.f;
        for v in self.prod.iter_mut() {
            *v = 0;
        }
        for i in 0..n {
            let ai = self.a[i];
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                let bj = self.b[j];
                if bj != 0 {
                    self.prod[i + j] = f.add(self.prod[i + j], f.mul(ai, bj));
                }
            }
        }
        // reduce by monic R
        for i in (n..2 * n - 1).rev() {
            let c = self.prod[i];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for k in 0..n {
                let rk = self.r[k];
                if rk != 0 {
                    self.prod[i - n + k] = f.add(self.prod[i - n + k], f.mul(nc, rk));
                }
            }
            self.prod[i] = 0;
        }
        Self::encode(self.q, &self.prod[..n])
    }

    pub fn pow(&mut self, x: u64, mut k: u64) -> u64 {
        let mut acc = self.one();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn one(&self) -> u64 {
        u64::from(self.n > 0)
    }
}

fn small_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct UnitGroup {
    ring: Ring,
    modulus: Poly,
    fac: Factorization,
    n: usize,
    size: u64,
    gens: Vec<Poly>,
    orders: Vec<u32>,
    dlog: Vec<u32>,
    exponent: u32,
    roots: Vec<Complex64>,
    // For each prime P | R: packed logs of the units ≡ 1 mod R/P.
    kernels: Vec<Vec<u32>>,
}

impl UnitGroup {
    /// Builds the group with greedily chosen generators: at each step the
    /// canonically smallest unit of maximal order in the quotient by the
    /// subgroup generated so far is taken, then replaced by the canonically
    /// smallest element of its coset whose order equals that quotient order.
    /// The replacement keeps the generated subgroup a direct summand.
    pub fn new(ring: &Ring, modulus: &Poly, budget: &Budget) -> Result<UnitGroup> {
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        let fac = ring.factor(modulus)?;
        let phi = multfun::phi_of(ring.q() as u64, &fac);
        budget.check_group("unit group order", phi)?;
        let n = modulus.deg();
        let size = ring.q_pow(n);
        budget.check_table("residues", size)?;

        let is_unit: Vec<bool> = if n == 0 {
            vec![true]
        } else {
            (0..size)
                .map(|i| {
                    let a = ring.from_index(i);
                    !a.is_zero()
                        && fac.primes().all(|p| !ring.rem(&a, p).map(|r| r.is_zero()).unwrap_or(true))
                })
                .collect()
        };
        // canonical order of unit residues
        let mut units: Vec<(Poly, u64)> = (0..size)
            .filter(|&i| is_unit[i as usize])
            .map(|i| (ring.from_index(i), i))
            .collect();
        units.sort();
        let units: Vec<u64> = units.into_iter().map(|(_, i)| i).collect();
        debug_assert_eq!(units.len() as u64, phi);

        let mut ctx = ModCtx::new(ring, modulus);
        let mut dlog = vec![NO_LOG; size as usize];
        let one = ctx.one();
        dlog[one as usize] = 0;
        let mut members: Vec<u64> = vec![one]; // members[c] has packed log c
        let mut gens = Vec::new();
        let mut orders: Vec<u32> = Vec::new();

        while (members.len() as u64) < phi {
            let quot = phi / members.len() as u64;
            let primes = small_prime_factors(quot);
            let mut best: Option<(u64, u64)> = None;
            for &u in &units {
                if dlog[u as usize] != NO_LOG {
                    continue;
                }
                let mut m = quot;
                for &l in &primes {
                    if m % l == 0 && dlog[ctx.pow(u, m / l) as usize] != NO_LOG {
                        m /= l;
                    }
                }
                if best.map_or(true, |(_, bm)| m > bm) {
                    best = Some((u, m));
                }
            }
            let (u, m) = best.expect("quotient is nontrivial");
            let mut pick: Option<(Poly, u64)> = None;
            for &h in &members {
                let x = ctx.mul(u, h);
                if ctx.pow(x, m) == one {
                    let px = ring.from_index(x);
                    if pick.as_ref().map_or(true, |(pp, _)| px < *pp) {
                        pick = Some((px, x));
                    }
                }
            }
            let (gp, g) = pick.expect("coset contains an element of quotient order");
            let stride = members.len();
            let mut next = Vec::with_capacity(stride * m as usize);
            next.extend_from_slice(&members);
            let mut gj = one;
            for j in 1..m {
                gj = ctx.mul(gj, g);
                for (c, &h) in members.iter().enumerate() {
                    let x = ctx.mul(h, gj);
                    dlog[x as usize] = (c + j as usize * stride) as u32;
                    next.push(x);
                }
            }
            members = next;
            gens.push(gp);
            orders.push(m as u32);
        }

        let exponent = orders.iter().fold(1u64, |l, &d| l / gcd_u64(l, d as u64) * d as u64) as u32;
        let tau = 2.0 * core::f64::consts::PI;
        let roots = (0..exponent)
            .map(|j| {
                let t = tau * j as f64 / exponent as f64;
                Complex64::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        let mut g = UnitGroup {
            ring: ring.clone(),
            modulus: modulus.clone(),
            fac,
            n,
            size,
            gens,
            orders,
            dlog,
            exponent,
            roots,
            kernels: Vec::new(),
        };
        g.kernels = g
            .fac
            .primes()
            .map(|p| {
                let s = ring.div_exact(modulus, p).expect("prime divides modulus");
                g.kernel_logs(&s)
            })
            .collect();
        Ok(g)
    }

    /// Packed logs of all units A ≡ 1 (mod s), for a monic s | R.
    pub fn kernel_logs(&self, s: &Poly) -> Vec<u32> {
        let room = self.n - s.deg();
        let mut out: Vec<u32> = self
            .ring
            .enumerate_below(room)
            .map(|b| self.ring.add(&Poly::one(), &self.ring.mul(s, &b)))
            .filter_map(|a| {
                let l = self.dlog[self.residue_index(&a) as usize];
                (l != NO_LOG).then_some(l)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn factorization(&self) -> &Factorization {
        &self.fac
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// φ(R)
    pub fn order(&self) -> u64 {
        self.orders.iter().map(|&d| d as u64).product()
    }

    pub fn residue_count(&self) -> u64 {
        self.size
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn gen_orders(&self) -> &[u32] {
        &self.orders
    }

    /// lcm of the generator orders.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Unit residues in canonical order.
    pub fn units(&self) -> Vec<Poly> {
        let mut v: Vec<Poly> = (0..self.size)
            .filter(|&i| self.dlog[i as usize] != NO_LOG)
            .map(|i| self.ring.from_index(i))
            .collect();
        v.sort();
        v
    }

    /// Index of a mod R among residues.
    pub fn residue_index(&self, a: &Poly) -> u64 {
        if self.n == 0 {
            return 0;
        }
        let r = self.ring.rem(a, &self.modulus).expect("modulus is nonzero");
        self.ring.index_of(&r)
    }

    /// Packed log of the residue with index `idx`, `NO_LOG` for non-units.
    #[inline]
    pub fn log_of_index(&self, idx: u64) -> u32 {
        self.dlog[idx as usize]
    }

    pub fn dlog_table(&self) -> &[u32] {
        &self.dlog
    }

    /// Exponent vector of a, or `None` when (a, R) ≠ 1.
    pub fn dlog(&self, a: &Poly) -> Option<Vec<u32>> {
        let l = self.dlog[self.residue_index(a) as usize];
        (l != NO_LOG).then(|| self.unpack(l))
    }

    pub fn unpack(&self, mut c: u32) -> Vec<u32> {
        self.orders
            .iter()
            .map(|&d| {
                let x = c % d;
                c /= d;
                x
            })
            .collect()
    }

    pub fn pack(&self, x: &[u32]) -> u32 {
        x.iter()
            .zip(&self.orders)
            .rev()
            .fold(0, |acc, (&xi, &d)| acc * d + xi % d)
    }

    /// Product of two units given by packed logs.
    pub fn log_mul(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for &d in &self.orders {
            let x = (a % d + b % d) % d;
            out += x * place;
            place *= d;
            a /= d;
            b /= d;
        }
        out
    }

    pub fn log_inv(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for &d in &self.orders {
            let x = (d - a % d) % d;
            out += x * place;
            place *= d;
            a /= d;
        }
        out
    }

    /// Residue with packed log c.
    pub fn element(&self, c: u32) -> Poly {
        let mut ctx = ModCtx::new(&self.ring, &self.modulus);
        let mut acc = ctx.one();
        for (x, g) in self.unpack(c).iter().zip(&self.gens) {
            let gi = self.ring.index_of(g);
            let t = ctx.pow(gi, *x as u64);
            acc = ctx.mul(acc, t);
        }
        self.ring.from_index(acc)
    }

    /// Number of characters (= φ(R)).
    pub fn char_count(&self) -> u64 {
        self.order()
    }

    /// The `i`-th character in kvec-lex order (k_1 most significant).
    pub fn character(&self, i: u64) -> Character<'_> {
        let mut k = vec![0u32; self.orders.len()];
        let mut i = i;
        for (slot, &d) in k.iter_mut().zip(&self.orders).rev() {
            *slot = (i % d as u64) as u32;
            i /= d as u64;
        }
        Character { g: self, k }
    }

    pub fn characters(&self) -> impl Iterator<Item = Character<'_>> + '_ {
        (0..self.char_count()).map(move |i| self.character(i))
    }

    pub fn character_from_kvec(&self, k: &[u32]) -> Result<Character<'_>> {
        if k.len() != self.orders.len() || k.iter().zip(&self.orders).any(|(x, d)| x >= d) {
            return Err(Error::pre("kvec does not match the group shape"));
        }
        Ok(Character { g: self, k: k.to_vec() })
    }

    pub fn root(&self, phase: u32) -> Complex64 {
        self.roots[phase as usize]
    }

    /// Packed log of the constant `a` ∈ F_q^* (R ≠ 1).
    pub fn constant_log(&self, a: Elem) -> u32 {
        self.dlog[self.residue_index(&Poly::constant(a)) as usize]
    }

    pub(crate) fn kernels(&self) -> &[Vec<u32>] {
        &self.kernels
    }
}

/// A Dirichlet character mod R: χ(A) = exp(2πi Σ k_i x_i / d_i).
#[derive(Clone, Debug)]
pub struct Character<'g> {
    g: &'g UnitGroup,
    k: Vec<u32>,
}

impl<'g> Character<'g> {
    pub fn group(&self) -> &'g UnitGroup {
        self.g
    }

    pub fn kvec(&self) -> &[u32] {
        &self.k
    }

    /// Position in [`UnitGroup::characters`].
    pub fn index(&self) -> u64 {
        self.k
            .iter()
            .zip(&self.g.orders)
            .fold(0u64, |acc, (&x, &d)| acc * d as u64 + x as u64)
    }

    pub fn is_trivial(&self) -> bool {
        self.k.iter().all(|&x| x == 0)
    }

    pub fn conj(&self) -> Character<'g> {
        let k = self
            .k
            .iter()
            .zip(&self.g.orders)
            .map(|(&x, &d)| (d - x) % d)
            .collect();
        Character { g: self.g, k }
    }

    /// Weight of coordinate i in units of 2π/exponent.
    fn weights(&self) -> Vec<u32> {
        let e = self.g.exponent as u64;
        self.k
            .iter()
            .zip(&self.g.orders)
            .map(|(&x, &d)| ((x as u64 * (e / d as u64)) % e) as u32)
            .collect()
    }

    /// χ(g^x) = root(phase(c)) for a packed log c.
    pub fn phase(&self, c: u32) -> u32 {
        let e = self.g.exponent as u64;
        let mut c = c;
        let mut acc = 0u64;
        for (w, &d) in self.weights().iter().zip(&self.g.orders) {
            acc += *w as u64 * (c % d) as u64;
            c /= d;
        }
        (acc % e) as u32
    }

    /// Phases for every packed log 0..φ.
    pub fn phase_table(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.phase_table_into(&mut out);
        out
    }

    pub fn phase_table_into(&self, out: &mut Vec<u32>) {
        let e = self.g.exponent;
        let w = self.weights();
        let orders = &self.g.orders;
        let phi = self.g.order() as usize;
        out.clear();
        out.reserve(phi);
        let mut digits = vec![0u32; orders.len()];
        let mut ph = 0u32;
        for _ in 0..phi {
            out.push(ph);
            // d_i · w_i ≡ 0 mod e, so a wrapping digit needs no correction
            for i in 0..orders.len() {
                digits[i] += 1;
                ph = (ph + w[i]) % e;
                if digits[i] < orders[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    pub fn value_log(&self, c: u32) -> Complex64 {
        self.g.roots[self.phase(c) as usize]
    }

    pub fn value_index(&self, idx: u64) -> Complex64 {
        match self.g.log_of_index(idx) {
            NO_LOG => Complex64::new(0.0, 0.0),
            c => self.value_log(c),
        }
    }

    pub fn value(&self, a: &Poly) -> Complex64 {
        self.value_index(self.g.residue_index(a))
    }

    /// Trivial on F_q^*.
    pub fn is_even(&self) -> bool {
        if self.g.n == 0 {
            return true;
        }
        let gen = self.g.ring.field().generator();
        self.phase(self.g.constant_log(gen)) == 0
    }

    fn trivial_on(&self, logs: &[u32]) -> bool {
        logs.iter().all(|&c| self.phase(c) == 0)
    }

    /// χ is induced from s | R iff it is trivial on the units ≡ 1 mod s.
    pub fn induced_by(&self, s: &Poly) -> bool {
        self.trivial_on(&self.g.kernel_logs(s))
    }

    /// Not induced from any R/P, hence from no proper divisor.
    pub fn is_primitive(&self) -> bool {
        if self.g.n == 0 {
            return true;
        }
        self.g.kernels().iter().all(|ker| !self.trivial_on(ker))
    }

    /// Smallest-degree inducing modulus among the monic divisors of R.
    pub fn conductor(&self) -> Poly {
        let divs = multfun::divisors_of(&self.g.ring, &self.g.fac);
        let inducing: Vec<&Poly> = divs.iter().filter(|s| self.induced_by(s)).collect();
        let c = inducing[0].clone();
        debug_assert!(inducing.iter().all(|s| self.g.ring.divides(&c, s)));
        c
    }
}

/// Σ_{χ primitive mod R} χ(A) conj χ(B) = Σ_{EF=R, F | A−B} μ(E) φ(F) when
/// (AB, R) = 1, else 0. Evaluated with polynomial arithmetic only.
pub fn primitive_pair_sum(ring: &Ring, a: &Poly, b: &Poly, r: &Poly) -> Result<i64> {
    if !r.is_monic() {
        return Err(Error::NotMonic);
    }
    if !ring.coprime(&ring.mul(a, b), r) {
        return Ok(0);
    }
    let fac = ring.factor(r)?;
    let q = ring.q() as u64;
    let diff = ring.sub(a, b);
    let mut total = 0i64;
    for (e, m) in multfun::mobius_divisors(ring, &fac) {
        let f = ring.div_exact(r, &e)?;
        if diff.is_zero() || ring.divides(&f, &diff) {
            let ff = ring.factor(&f)?;
            total += m as i64 * multfun::phi_of(q, &ff) as i64;
        }
    }
    Ok(total)
}

/// Per-unit weight w(u) = Σ_{EF=R} μ(E) φ(F) [u ≡ 1 mod F], indexed by packed
/// log. Then Σ*_χ χ(A) conj χ(B) = w(A B^{-1}) for units A, B.
pub fn pair_weights(g: &UnitGroup) -> Result<Vec<i64>> {
    let ring = g.ring();
    let q = ring.q() as u64;
    let mut w = vec![0i64; g.order() as usize];
    for (e, m) in multfun::mobius_divisors(ring, g.factorization()) {
        let f = ring.div_exact(g.modulus(), &e)?;
        let phi_f = multfun::phi_of(q, &ring.factor(&f)?) as i64;
        for c in g.kernel_logs(&f) {
            w[c as usize] += m as i64 * phi_f;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::p;

    fn group(q: u64, r: &[Elem]) -> UnitGroup {
        let ring = Ring::with_order(q).unwrap();
        UnitGroup::new(&ring, &p(r), &Budget::default()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn small_groups() {
        let g = group(2, &[0, 0, 1]);
        assert_eq!(g.units(), alloc::vec![Poly::one(), p(&[1, 1])]);
        assert_eq!(g.generators(), &[p(&[1, 1])]);
        assert_eq!(g.gen_orders(), &[2]);
        let g = group(2, &[0, 0, 0, 1]);
        assert_eq!(g.generators(), &[p(&[1, 1])]);
        assert_eq!(g.gen_orders(), &[4]);
        let g = group(3, &[1]);
        assert_eq!(g.order(), 1);
        assert_eq!(g.characters().count(), 1);
        let chi = g.character(0);
        assert_eq!(chi.value(&p(&[0, 0, 2])), Complex64::new(1.0, 0.0));
        assert!(chi.is_primitive() && chi.is_even());
    }

    #[test]
    fn character_examples() {
        let g = group(2, &[0, 0, 1]);
        assert_eq!(g.characters().count(), 2);
        let chi = g.character(1);
        assert!(chi.is_primitive());
        assert!(close(chi.value(&p(&[1, 1])), Complex64::new(-1.0, 0.0), 1e-15));

        let g = group(2, &[1, 1, 1]);
        let vals: Vec<Complex64> = g.characters().map(|c| c.value(&Poly::t())).collect();
        assert_eq!(vals.len(), 3);
        for v in vals {
            assert!(close(v * v * v, Complex64::new(1.0, 0.0), 1e-12));
        }

        // χ(1+T) = −1 mod T³ has conductor T²
        let g = group(2, &[0, 0, 0, 1]);
        let chi = g.characters().find(|c| close(c.value(&p(&[1, 1])), Complex64::new(-1.0, 0.0), 1e-12)).unwrap();
        assert_eq!(chi.conductor(), p(&[0, 0, 1]));
        assert!(!chi.is_primitive());
        assert_eq!(g.character(0).conductor(), Poly::one());
    }

    #[test]
    fn parity() {
        let g = group(2, &[0, 0, 1, 1]);
        assert!(g.characters().all(|c| c.is_even()));
        let g = group(3, &[0, 0, 1]);
        let odd = g.characters().find(|c| close(c.value(&Poly::constant(2)), Complex64::new(-1.0, 0.0), 1e-12)).unwrap();
        assert!(!odd.is_even());
        assert!(g.character(0).is_even());
        for (q, r) in [(3u64, alloc::vec![1u16, 0, 1]), (4, alloc::vec![0, 0, 1]), (5, alloc::vec![1, 2, 0, 1])] {
            let g = group(q, &r);
            let even = g.characters().filter(|c| c.is_even()).count() as u64;
            assert_eq!(even * (q - 1), g.order());
        }
    }

    #[test]
    fn pair_sum_examples() {
        let ring = Ring::with_order(2).unwrap();
        let r = p(&[0, 0, 1]);
        assert_eq!(primitive_pair_sum(&ring, &p(&[1, 1]), &Poly::one(), &r).unwrap(), -1);
        assert_eq!(primitive_pair_sum(&ring, &Poly::one(), &Poly::one(), &r).unwrap(), 1);
        assert_eq!(primitive_pair_sum(&ring, &Poly::t(), &Poly::one(), &r).unwrap(), 0);
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for (q, top) in [(2u64, 6usize), (3, 4), (4, 3), (5, 2)] {
            let ring = Ring::with_order(q).unwrap();
            for r in ring.enumerate_monic_upto(top) {
                let g = UnitGroup::new(&ring, &r, &Budget::default()).unwrap();
                let phi = multfun::phi(&ring, &r).unwrap();
                assert_eq!(g.order(), phi);
                let units = g.units();
                assert_eq!(units.len() as u64, phi);
                let mut seen = alloc::collections::BTreeSet::new();
                for u in &units {
                    assert!(seen.insert(g.dlog(u).unwrap()));
                }
                if r.deg() == 0 {
                    continue;
                }
                for (i, u) in units.iter().enumerate().step_by(3) {
                    for v in units.iter().skip(i % 5).step_by(2) {
                        let uv = ring.mulmod(u, v, &r).unwrap();
                        let c = g.log_mul(g.pack(&g.dlog(u).unwrap()), g.pack(&g.dlog(v).unwrap()));
                        assert_eq!(g.unpack(c), g.dlog(&uv).unwrap());
                    }
                    assert_eq!(g.element(g.pack(&g.dlog(u).unwrap())), *u);
                }
            }
        }
    }

    #[test]
    fn pair_sum_matches_characters() {
        for (q, top) in [(2u64, 4usize), (3, 3)] {
            let ring = Ring::with_order(q).unwrap();
            for r in ring.enumerate_monic_upto(top) {
                let g = UnitGroup::new(&ring, &r, &Budget::default()).unwrap();
                let prim: Vec<_> = g.characters().filter(|c| c.is_primitive()).collect();
                assert_eq!(prim.len() as u64, multfun::phi_star(&ring, &r).unwrap());
                let w = pair_weights(&g).unwrap();
                let residues: Vec<Poly> = ring.enumerate_below(r.deg()).collect();
                for a in residues.iter().step_by(2) {
                    for b in residues.iter().step_by(3) {
                        let direct: Complex64 = prim.iter().map(|c| c.value(a) * c.value(b).conj()).sum();
                        let exact = primitive_pair_sum(&ring, a, b, &r).unwrap();
                        assert!(close(direct, Complex64::new(exact as f64, 0.0), 1e-8));
                        if let (Some(x), Some(y)) = (g.dlog(a), g.dlog(b)) {
                            let u = g.log_mul(g.pack(&x), g.log_inv(g.pack(&y)));
                            assert_eq!(w[u as usize], exact);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn phase_table_matches_phase() {
        let g = group(3, &[0, 0, 1, 0, 1]);
        for chi in g.characters().step_by(7) {
            let t = chi.phase_table();
            for (c, &ph) in t.iter().enumerate() {
                assert_eq!(ph, chi.phase(c as u32));
            }
            let inv = chi.conj();
            for u in g.units().iter().take(20) {
                let ui = g.element(g.log_inv(g.pack(&g.dlog(u).unwrap())));
                assert!(close(chi.value(&ui), inv.value(u), 1e-12));
            }
        }
    }

    #[test]
    fn budget_guard() {
        let ring = Ring::with_order(2).unwrap();
        let b = Budget { max_group: 10, ..Budget::default() };
        assert!(UnitGroup::new(&ring, &Poly::monomial(1, 6), &b).unwrap_err().is_budget());
    }
}
