//! Flat arithmetic in towers `Z/n [x_1]/(g_1) [x_2]/(g_2) ...` of monic
//! polynomial quotients.
//!
//! An element of level `l` is a flat vector of `size(l)` residues mod `n`.
//! Level `l` is a polynomial of degree `< deg_l` in `x_l` whose coefficients
//! are contiguous blocks of level `l - 1`. Embedding a lower level into a
//! higher one is therefore zero-padding.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layer {
    pub degree: usize,
    /// Non-leading coefficients `g_0 .. g_{d-1}` of the monic modulus.
    pub coeffs: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Tower {
    pub p: u64,
    pub digits: u32,
    pub modulus: u64,
    pub layers: Vec<Layer>,
    sizes: Vec<usize>,
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub(crate) fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

impl Tower {
    pub fn new(p: u64, digits: u32) -> Self {
        let modulus = p.checked_pow(digits).expect("p^digits overflows u64");
        Tower {
            p,
            digits,
            modulus,
            layers: Vec::new(),
            sizes: vec![1],
        }
    }

    /// Largest `M` with `p^M < 2^62`.
    pub fn max_digits(p: u64) -> u32 {
        let mut m = 0u32;
        let mut acc: u128 = 1;
        while acc * (p as u128) < (1u128 << 62) {
            acc *= p as u128;
            m += 1;
        }
        m
    }

    pub fn push_layer(&mut self, coeffs: Vec<Vec<u64>>) {
        let degree = coeffs.len();
        let n = self.size(self.top());
        for c in &coeffs {
            assert_eq!(c.len(), n, "layer coefficient has wrong size");
        }
        self.layers.push(Layer { degree, coeffs });
        self.sizes.push(n * degree);
    }

    pub fn top(&self) -> usize {
        self.layers.len()
    }

    pub fn size(&self, level: usize) -> usize {
        self.sizes[level]
    }

    pub fn zero(&self, level: usize) -> Vec<u64> {
        vec![0; self.size(level)]
    }

    pub fn one(&self, level: usize) -> Vec<u64> {
        let mut v = self.zero(level);
        v[0] = 1 % self.modulus;
        v
    }

    pub fn from_int(&self, level: usize, k: i128) -> Vec<u64> {
        let mut v = self.zero(level);
        v[0] = reduce_i128(k, self.modulus);
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| addmod(x, y, self.modulus))
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| submod(x, y, self.modulus))
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|&x| if x == 0 { 0 } else { self.modulus - x })
            .collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        let k = k % self.modulus;
        a.iter().map(|&x| mulmod(x, k, self.modulus)).collect()
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, level: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), self.size(level));
        debug_assert_eq!(b.len(), self.size(level));
        if level == 0 {
            return vec![mulmod(a[0], b[0], self.modulus)];
        }
        let layer = &self.layers[level - 1];
        let d = layer.degree;
        let n = self.size(level - 1);
        let m = self.modulus;
        if n == 1 {
            // scalar coefficients: plain convolution and reduction
            let mut prod = vec![0u128; 2 * d - 1];
            for i in 0..d {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..d {
                    if b[j] == 0 {
                        continue;
                    }
                    prod[i + j] = (prod[i + j] + a[i] as u128 * b[j] as u128) % m as u128;
                }
            }
            let mut prod: Vec<u64> = prod.into_iter().map(|x| x as u64).collect();
            for k in (d..2 * d - 1).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, g) in layer.coeffs.iter().enumerate() {
                    prod[k - d + i] = submod(prod[k - d + i], mulmod(c, g[0], m), m);
                }
            }
            prod.truncate(d);
            return prod;
        }
        let mut prod: Vec<Vec<u64>> = vec![vec![0; n]; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * n..(i + 1) * n];
            if Self::is_zero(ai) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * n..(j + 1) * n];
                if Self::is_zero(bj) {
                    continue;
                }
                let t = self.mul(level - 1, ai, bj);
                prod[i + j] = self.add(&prod[i + j], &t);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut prod[k], vec![0; n]);
            if Self::is_zero(&c) {
                continue;
            }
            for (i, g) in layer.coeffs.iter().enumerate() {
                let t = self.mul(level - 1, &c, g);
                prod[k - d + i] = self.sub(&prod[k - d + i], &t);
            }
        }
        prod.truncate(d);
        prod.concat()
    }

    pub fn pow(&self, level: usize, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one(level);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(level, &acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(level, &base, &base);
            }
        }
        acc
    }

    /// Zero-pad a lower-level element to `level`.
    pub fn embed(&self, from: usize, to: usize, a: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), self.size(from));
        let mut v = self.zero(to);
        v[..a.len()].copy_from_slice(a);
        v
    }

    /// The generator `x_level` of the given layer.
    pub fn generator(&self, level: usize) -> Vec<u64> {
        let n = self.size(level - 1);
        let mut v = self.zero(level);
        v[n] = 1;
        v
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integers_mod_25() {
        // Z/25[i]/(i^2 + 1)
        let mut t = Tower::new(5, 2);
        t.push_layer(vec![vec![1], vec![0]]);
        let i = t.generator(1);
        let i2 = t.mul(1, &i, &i);
        assert_eq!(i2, vec![24, 0]);
        let a = vec![2, 3];
        let b = vec![4, 1];
        // (2+3i)(4+i) = 8 + 2i + 12i - 3 = 5 + 14i
        assert_eq!(t.mul(1, &a, &b), vec![5, 14]);
    }

    #[test]
    fn two_level_tower_is_associative() {
        let mut t = Tower::new(3, 5);
        // x^2 + 3x + 3, then y^3 - x
        t.push_layer(vec![vec![3], vec![3]]);
        let minus_x = t.neg(&t.generator(1));
        t.push_layer(vec![minus_x, t.zero(1), t.zero(1)]);
        let y = t.generator(2);
        let y3 = t.pow(2, &y, 3);
        assert_eq!(y3, t.embed(1, 2, &t.generator(1)));
        let a: Vec<u64> = (0..6).map(|k| (k * 7 + 1) % 243).collect();
        let b: Vec<u64> = (0..6).map(|k| (k * 11 + 5) % 243).collect();
        let c: Vec<u64> = (0..6).map(|k| (k * k + 2) % 243).collect();
        let l = t.mul(2, &t.mul(2, &a, &b), &c);
        let r = t.mul(2, &a, &t.mul(2, &b, &c));
        assert_eq!(l, r);
    }

    #[test]
    fn max_digits_fit() {
        for p in [2u64, 3, 5, 7, 11, 101] {
            let m = Tower::max_digits(p);
            assert!((p as u128).pow(m) < (1u128 << 62));
            assert!((p as u128).pow(m + 1) >= (1u128 << 62));
        }
    }
}
