//! Factorization of univariate polynomials over ℚ.
//!
//! Squarefree parts are made monic over ℤ, factored modulo a small prime with
//! Berlekamp's algorithm, Hensel-lifted past the Mignotte bound and
//! recombined by subset search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

type ZPoly = Vec<BigInt>;
type FpPoly = Vec<u64>;

/// Yun's squarefree decomposition of the monic associate of `p`.
/// Returns `(s_i, i)` with `p ~ ∏ s_iⁱ`, every `s_i` monic and squarefree.
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let a = p.monic();
    let mut out = Vec::new();
    if a.degree() == Some(0) {
        return Ok(out);
    }
    let b = a.derivative();
    let c = a.gcd(&b);
    let mut w = a.div_rem(&c).0;
    let mut y = b.div_rem(&c).0;
    let mut z = &y - &w.derivative();
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let g = w.gcd(&z);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        w = w.div_rem(&g).0;
        y = z.div_rem(&g).0;
        z = &y - &w.derivative();
        i += 1;
    }
    Ok(out)
}

/// Complete factorization into monic irreducibles over ℚ with multiplicities,
/// sorted by degree and then coefficients.
pub fn factor_over_q(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    for (s, mult) in squarefree_decomposition(p)? {
        for f in factor_squarefree(&to_primitive(&s)) {
            out.push((from_zpoly(&f).monic(), mult));
        }
    }
    out.sort_by_cached_key(|(f, _)| factor_order_key(f));
    Ok(out)
}

/// Degree first; linear factors then come out by increasing root.
fn factor_order_key(f: &Poly) -> (usize, Vec<Rational>) {
    let d = f.degree().unwrap_or(0);
    (d, (0..d).rev().map(|i| -f.coeff(i)).collect())
}

fn to_primitive(p: &Poly) -> ZPoly {
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut z: ZPoly = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let content = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() {
        for c in &mut z {
            *c /= &content;
        }
    }
    if z.last().is_some_and(Signed::is_negative) {
        for c in &mut z {
            *c = -&*c;
        }
    }
    z
}

fn from_zpoly(z: &[BigInt]) -> Poly {
    Poly::new(
        z.iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    )
}

/// Factors a primitive squarefree integer polynomial with positive leading
/// coefficient into primitive irreducibles.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f[n].clone();
    if lc.is_one() {
        return factor_monic(f);
    }
    // F(y) = lc^(n-1) f(y / lc) is monic; factors G(y) map back to pp(G(lc x)).
    let monic: ZPoly = f
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == n {
                BigInt::one()
            } else {
                c * num_traits::pow(lc.clone(), n - 1 - i)
            }
        })
        .collect();
    factor_monic(&monic)
        .into_iter()
        .map(|g| {
            let mut scaled: ZPoly = Vec::with_capacity(g.len());
            let mut pw = BigInt::one();
            for c in &g {
                scaled.push(c * &pw);
                pw *= &lc;
            }
            primitive_part(&scaled)
        })
        .collect()
}

fn primitive_part(z: &[BigInt]) -> ZPoly {
    let content = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: ZPoly = z.iter().map(|c| c / &content).collect();
    if out.last().is_some_and(Signed::is_negative) {
        for c in &mut out {
            *c = -&*c;
        }
    }
    out
}

fn factor_monic(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let bound = mignotte_bound(f);
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k);
    recombine(f, lifted, &pk)
}

fn mignotte_bound(f: &ZPoly) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    // ceil(sqrt(norm2)) * 2^n
    let root = norm2.sqrt() + 1;
    root << n
}

fn choose_prime(f: &ZPoly) -> (u64, Vec<FpPoly>) {
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&q| is_small_prime(q)) {
        let fp = reduce(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let d = fp_derivative(&fp, p);
        if fp_gcd(&fp, &d, p).len() != 1 {
            continue;
        }
        let factors = berlekamp(&fp, p);
        let better = best.as_ref().is_none_or(|(_, b)| factors.len() < b.len());
        if better {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("a squarefree polynomial stays squarefree modulo all but finitely many primes")
}

fn is_small_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

// ---- arithmetic in F_p[x] ----

fn reduce(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by zero in F_p[x]");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![], r);
    }
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bc % p) % p;
        }
        q[i] = c;
    }
    r.truncate(db);
    fp_trim(&mut r);
    fp_trim(&mut q);
    (q, r)
}

fn fp_monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => vec![],
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// `(g, s, t)` with `s·a + t·b = g` and `g` monic.
fn fp_xgcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let norm = |v: &[u64]| -> FpPoly {
        let mut o: FpPoly = v.iter().map(|c| c * inv % p).collect();
        fp_trim(&mut o);
        o
    };
    (norm(&r0), norm(&s0), norm(&t0))
}

fn fp_derivative(a: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> FpPoly {
    let mut acc = vec![1u64];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divrem(&fp_mul(&acc, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    acc
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<FpPoly> {
    let n = f.len() - 1;
    let xp = fp_powmod(&[0, 1], p, f, p);
    // rows[i] = x^(i p) mod f
    let mut rows: Vec<FpPoly> = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        rows.push(cur.clone());
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // (Q - I)^T v = 0
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            let q = row.get(j).copied().unwrap_or(0);
            let v = if i == j { (q + p - 1) % p } else { q };
            a[j][i] = v;
        }
    }
    let basis = fp_kernel(a, p);
    let r = basis.len();
    let mut factors: Vec<FpPoly> = vec![f.to_vec()];
    for v in &basis {
        if factors.len() == r {
            break;
        }
        let mut v = v.clone();
        fp_trim(&mut v);
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut pieces = Vec::new();
            for s in 0..p {
                let shifted = fp_sub(&v, &[s], p);
                let g = fp_gcd(&u, &shifted, p);
                if g.len() > 1 {
                    pieces.push(g);
                }
            }
            if pieces.is_empty() {
                next.push(u);
            } else {
                next.extend(pieces);
            }
        }
        factors = next;
    }
    factors.into_iter().map(|g| fp_monic(&g, p)).collect()
}

fn fp_kernel(mut a: Vec<Vec<u64>>, p: u64) -> Vec<FpPoly> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][free]) % p;
            }
            v
        })
        .collect()
}

// ---- Hensel lifting and recombination ----

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn lift_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn zreduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

/// Lifts `f ≡ ∏ factors (mod p)` (all monic) to a factorization modulo `p^k`.
fn hensel_lift(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let m = num_traits::pow(BigInt::from(p), k as usize);
        return vec![zreduce(f, &m)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g0 = left.iter().fold(vec![1u64], |acc, g| fp_mul(&acc, g, p));
    let h0 = right.iter().fold(vec![1u64], |acc, g| fp_mul(&acc, g, p));
    let (g, h) = hensel_pair(f, &g0, &h0, p, k);
    let mut out = hensel_lift(&g, left, p, k);
    out.extend(hensel_lift(&h, right, p, k));
    out
}

/// Linear Hensel lifting of `f ≡ g0·h0 (mod p)` with monic `g0`, `h0` and monic `f`.
fn hensel_pair(f: &ZPoly, g0: &[u64], h0: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, s, t) = fp_xgcd(g0, h0, p);
    let pb = BigInt::from(p);
    let mut g = lift_fp(g0);
    let mut h = lift_fp(h0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = zsub(f, &zmul(&g, &h));
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let e = reduce(&e, p);
        let te = fp_mul(&t, &e, p);
        let (q, sigma) = fp_divrem(&te, g0, p);
        let tau = fp_add(&fp_mul(&s, &e, p), &fp_mul(&q, h0, p), p);
        let next = &pj * &pb;
        let add = |base: &ZPoly, delta: &FpPoly| -> ZPoly {
            let n = base.len().max(delta.len());
            let v: ZPoly = (0..n)
                .map(|i| {
                    base.get(i).cloned().unwrap_or_default()
                        + &pj * BigInt::from(delta.get(i).copied().unwrap_or(0))
                })
                .collect();
            zreduce(&v, &next)
        };
        g = add(&g, &sigma);
        h = add(&h, &tau);
        pj = next;
    }
    // keep leading coefficients exactly 1
    let trim = |mut v: ZPoly| {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    };
    (trim(g), trim(h))
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

/// Exact division over ℤ by a monic divisor.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &c * bc;
        }
        q[i] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(q)
    } else {
        None
    }
}

fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut found = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let prod = idx.iter().fold(vec![BigInt::one()], |acc, &i| {
                zreduce(&zmul(&acc, &lifted[i]), pk)
            });
            let cand = symmetric(&prod, pk);
            if let Some(q) = zdiv_exact(&rest, &cand) {
                found.push(cand);
                rest = q;
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        size += 1;
    }
    if rest.len() > 1 {
        found.push(rest);
    }
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
