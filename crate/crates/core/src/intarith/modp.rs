//! Word-sized modular arithmetic for primes below 2^63.

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces a signed value into `[0, p)`.
pub fn reduce_i128(a: i128, p: u64) -> u64 {
    a.rem_euclid(p as i128) as u64
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root modulo an odd prime; `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut c = pow_mod(z, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    let mut t = pow_mod(a, q, p);
    let mut m = s;
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        r = mul_mod(r, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    Some(r)
}

/// Dense polynomial over F_p, coefficients ascending, no trailing zeros.
type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut r = trim(f.to_vec());
    let g = trim(g.to_vec());
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p);
    while r.len() > dg {
        let dr = r.len() - 1;
        let q = mul_mod(r[dr], lead_inv, p);
        for (i, &gc) in g.iter().enumerate() {
            let idx = dr - dg + i;
            r[idx] = sub_mod(r[idx], mul_mod(q, gc, p), p);
        }
        r = trim(r);
    }
    r
}

fn poly_mul_rem(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    poly_rem(&out, modulus, p)
}

fn poly_pow_rem(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_rem(&acc, &b, modulus, p);
        }
        b = poly_mul_rem(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

fn poly_div_exact(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut r = trim(f.to_vec());
    let g = trim(g.to_vec());
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p);
    let mut q = vec![0u64; r.len().saturating_sub(dg)];
    while r.len() > dg {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        q[dr - dg] = c;
        for (i, &gc) in g.iter().enumerate() {
            let idx = dr - dg + i;
            r[idx] = sub_mod(r[idx], mul_mod(c, gc, p), p);
        }
        r = trim(r);
    }
    q
}

/// Distinct roots of a squarefree product of linear factors (equal-degree splitting).
fn split_linear(f: Poly, p: u64, out: &mut Vec<u64>) {
    let f = trim(f);
    let deg = f.len() - 1;
    if deg == 0 {
        return;
    }
    if deg == 1 {
        let inv = inv_mod(f[1], p);
        out.push(mul_mod(p - f[0] % p, inv, p) % p);
        return;
    }
    // deterministic shifts: gcd(f, (x + d)^((p-1)/2) - 1)
    for d in 0..p {
        let h = poly_pow_rem(&[d, 1], (p - 1) / 2, &f, p);
        let mut h = h;
        if h.is_empty() {
            h.push(0);
        }
        h[0] = sub_mod(h[0], 1, p);
        let g = poly_gcd(&f, &h, p);
        let dg = g.len().saturating_sub(1);
        if dg > 0 && dg < deg {
            let cof = poly_div_exact(&f, &g, p);
            split_linear(g, p, out);
            split_linear(cof, p, out);
            return;
        }
    }
    unreachable!("equal-degree splitting exhausted all shifts");
}

/// All roots of `x^3 - a` modulo the prime `p`, sorted ascending.
pub fn cube_roots(a: u64, p: u64) -> Vec<u64> {
    let a = a % p;
    if p < 64 {
        return (0..p).filter(|&x| mul_mod(mul_mod(x, x, p), x, p) == a).collect();
    }
    if a == 0 {
        return vec![0];
    }
    if p % 3 == 2 {
        // cubing is a bijection; the inverse exponent is (2p - 1)/3
        return vec![pow_mod(a, (2 * p - 1) / 3, p)];
    }
    let f: Poly = vec![p - a, 0, 0, 1];
    // product of the linear factors: gcd(f, x^p - x)
    let xp = poly_pow_rem(&[0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(2.max(xp_minus_x.len()), 0);
    xp_minus_x[1] = sub_mod(xp_minus_x[1], 1, p);
    let lin = poly_gcd(&f, &xp_minus_x, p);
    let mut roots = Vec::new();
    split_linear(lin, p, &mut roots);
    roots.sort_unstable();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_roots_of_eleven_mod_37() {
        // w = -9, -12, -16 mod 37
        assert_eq!(cube_roots(11, 37), vec![21, 25, 28]);
    }

    #[test]
    fn cube_roots_match_brute_force() {
        for p in [67u64, 73, 79, 97, 101, 103, 109, 113, 127, 1_000_003] {
            for a in [2u64, 3, 5, 11, 219, 515] {
                let fast = cube_roots(a, p);
                if p < 2000 {
                    let slow: Vec<u64> =
                        (0..p).filter(|&x| mul_mod(mul_mod(x, x, p), x, p) == a % p).collect();
                    assert_eq!(fast, slow, "a = {a}, p = {p}");
                }
                for r in fast {
                    assert_eq!(mul_mod(mul_mod(r, r, p), r, p), a % p);
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3u64, 5, 13, 17, 41, 97, 65537] {
            for a in 1..p.min(200) {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a % p),
                    None => assert_eq!(legendre(a, p), -1),
                }
            }
        }
    }
}
