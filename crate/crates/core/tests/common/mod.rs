//! Independent oracles: direct transforms and convolutions over `Z_{n_1} × … × Z_{n_r}`
//! with the last coordinate varying fastest.

#![allow(dead_code)]

use std::cell::OnceCell;
use std::f64::consts::PI;

use num_complex::Complex64;

pub struct Shape {
    pub orders: Vec<usize>,
    pub n: usize,
    phases: OnceCell<Vec<u32>>,
    diffs: OnceCell<Vec<u32>>,
}

impl Shape {
    pub fn new(orders: &[usize]) -> Self {
        Self {
            orders: orders.to_vec(),
            n: orders.iter().product(),
            phases: OnceCell::new(),
            diffs: OnceCell::new(),
        }
    }

    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut c = vec![0; self.orders.len()];
        for j in (0..self.orders.len()).rev() {
            c[j] = idx % self.orders[j];
            idx /= self.orders[j];
        }
        c
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.orders).fold(0, |acc, (&c, &n)| acc * n + c % n)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        let (cx, cy) = (self.coords(x), self.coords(y));
        let d: Vec<usize> = cx.iter().zip(&cy).zip(&self.orders).map(|((&a, &b), &n)| (a + n - b) % n).collect();
        self.index(&d)
    }

    /// `k` with `χ_a(x) = exp(2πi k/N)`.
    pub fn phase(&self, a: usize, x: usize) -> usize {
        let (ca, cx) = (self.coords(a), self.coords(x));
        let mut acc = 0u128;
        for j in 0..self.orders.len() {
            let nj = self.orders[j] as u128;
            acc += (ca[j] as u128 * cx[j] as u128 % nj) * (self.n as u128 / nj);
        }
        (acc % self.n as u128) as usize
    }

    fn roots(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / self.n as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect()
    }

    fn phase_table(&self) -> &[u32] {
        self.phases.get_or_init(|| {
            let mut t = Vec::with_capacity(self.n * self.n);
            for a in 0..self.n {
                for x in 0..self.n {
                    t.push(self.phase(a, x) as u32);
                }
            }
            t
        })
    }

    fn diff_table(&self) -> &[u32] {
        self.diffs.get_or_init(|| {
            let mut t = Vec::with_capacity(self.n * self.n);
            for x in 0..self.n {
                for y in 0..self.n {
                    t.push(self.sub(x, y) as u32);
                }
            }
            t
        })
    }

    /// `f̂(a) = Σ_x f(x) χ_a(x)`.
    pub fn dft(&self, f: &[Complex64]) -> Vec<Complex64> {
        let roots = self.roots();
        let phases = self.phase_table();
        (0..self.n)
            .map(|a| {
                let row = &phases[a * self.n..(a + 1) * self.n];
                row.iter().zip(f).map(|(&k, v)| v * roots[k as usize]).sum()
            })
            .collect()
    }

    /// `(f*g)(x) = Σ_y f(y) g(x − y)`.
    pub fn convolve(&self, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let diffs = self.diff_table();
        (0..self.n)
            .map(|x| {
                let row = &diffs[x * self.n..(x + 1) * self.n];
                row.iter().zip(f).map(|(&d, v)| v * g[d as usize]).sum()
            })
            .collect()
    }

    /// As [`Shape::convolve`] for real inputs, cyclic groups only, without the table.
    pub fn cyclic_convolve_real(&self, f: &[f64], g: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|x| (0..n).map(|y| f[y] * g[(x + n - y) % n]).sum()).collect()
    }
}

/// `#{(a, b) ∈ A² : a + b = x}` in `Z_N`.
pub fn count_at(members: &[bool], x: usize) -> u64 {
    let n = members.len();
    (0..n).filter(|&a| members[a] && members[(x + n - a) % n]).count() as u64
}

/// `|A + A|` in `Z_N` by marking all pair sums.
pub fn sumset_size(members: &[bool]) -> usize {
    let n = members.len();
    let elems: Vec<usize> = (0..n).filter(|&x| members[x]).collect();
    let mut hit = vec![false; n];
    for &a in &elems {
        for &b in &elems {
            hit[(a + b) % n] = true;
        }
    }
    hit.iter().filter(|&&h| h).count()
}

/// `|1 − exp(2πi c x / N)|` from floating-point trigonometry.
pub fn distance(c: usize, x: usize, n: usize) -> f64 {
    let t = 2.0 * PI * ((c as u128 * x as u128) % n as u128) as f64 / n as f64;
    Complex64::new(1.0 - t.cos(), -t.sin()).norm()
}

pub fn primes_up_to(n: usize) -> Vec<usize> {
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    if n >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).collect()
}
