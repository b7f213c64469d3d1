use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::One;

use crate::abelian::AbelianGroupSpec;
use crate::numtheory::factor;
use crate::{Error, Result};

/// Default largest group order handled.
pub const DEFAULT_ORDER_CAP: u64 = 5000;
const HARD_ORDER_CAP: u64 = u16::MAX as u64;

/// A finite group given by its multiplication table on `0..order`.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: u16,
}

impl FiniteGroup {
    /// Builds the table from a multiplication function on element indices.
    pub fn from_fn(order: usize, identity: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if order == 0 || order as u64 > HARD_ORDER_CAP || identity >= order {
            return Err(Error::invalid(format!("unsupported group order {order}")));
        }
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = f(a, b) as u16;
            }
        }
        let mut inv = vec![u16::MAX; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mul[a * order + b] as usize == identity)
                .ok_or_else(|| Error::invalid(format!("element {a} has no inverse")))? as u16;
        }
        Ok(Self {
            order,
            mul,
            inv,
            identity: identity as u16,
        })
    }

    /// `C_{x_1} × … × C_{x_t}` in mixed radix, first factor most significant.
    pub fn from_abelian(spec: &AbelianGroupSpec, cap: u64) -> Result<Self> {
        let order = spec.order();
        if order > BigUint::from(cap.min(HARD_ORDER_CAP)) {
            return Err(Error::resource(format!("|{spec}| = {order} exceeds the cap {cap}")));
        }
        let radices = spec.cyclic_orders().to_vec();
        let n = radices.iter().product::<u64>() as usize;
        let digits = |mut a: usize| {
            let mut d = vec![0u64; radices.len()];
            for (slot, &r) in d.iter_mut().zip(&radices).rev() {
                *slot = a as u64 % r;
                a /= r as usize;
            }
            d
        };
        Self::from_fn(n, 0, |a, b| {
            let (da, db) = (digits(a), digits(b));
            da.iter()
                .zip(&db)
                .zip(&radices)
                .fold(0usize, |acc, ((x, y), r)| acc * *r as usize + ((x + y) % r) as usize)
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn singleton_identity(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.order);
        s.insert(self.identity());
        s
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> FixedBitSet {
        let mut set = self.singleton_identity();
        let mut elems = vec![self.identity()];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !set.put(y) {
                    elems.push(y);
                }
            }
        }
        set
    }

    /// Whether `set` is closed under multiplication and contains the identity.
    pub fn is_subgroup(&self, set: &FixedBitSet) -> bool {
        set.contains(self.identity())
            && set.ones().all(|a| set.ones().all(|b| set.contains(self.mul(a, b))))
    }
}

/// `|SL2(Z/m)| = m³ ∏_{p | m} (1 − p⁻²)`.
pub fn sl2_order(m: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let f = factor(m as u128);
    let mut order = BigUint::from(m).pow(3);
    for p in f.primes() {
        let p = BigUint::from(p);
        order = order / (&p * &p) * (&p * &p - BigUint::one());
    }
    Ok(order)
}

/// `SL2(Z/mZ)` with elements `(a, b, c, d)` for `[[a, b], [c, d]]`, in
/// row-major lexicographic order.
#[derive(Debug, Clone)]
pub struct Sl2ModM {
    pub m: u64,
    pub elements: Vec<[u32; 4]>,
    pub group: FiniteGroup,
}

fn encode(m: u64, x: &[u32; 4]) -> usize {
    x.iter().fold(0usize, |acc, &v| acc * m as usize + v as usize)
}

impl Sl2ModM {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, x: &[u32; 4]) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    /// Kernel of reduction modulo `d`, for `d | m`.
    pub fn reduction_kernel(&self, d: u64) -> Result<FixedBitSet> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::invalid(format!("{d} does not divide {}", self.m)));
        }
        let d = d as u32;
        let mut set = FixedBitSet::with_capacity(self.order());
        for (i, x) in self.elements.iter().enumerate() {
            if [x[0] % d, x[1] % d, x[2] % d, x[3] % d] == [1 % d, 0, 0, 1 % d] {
                set.insert(i);
            }
        }
        Ok(set)
    }
}

/// Builds `SL2(Z/mZ)` with its multiplication table.
pub fn build_sl2(m: u64, cap: u64) -> Result<Sl2ModM> {
    let order = sl2_order(m)?;
    if order > BigUint::from(cap.min(HARD_ORDER_CAP)) {
        return Err(Error::resource(format!("|SL2(Z/{m})| = {order} exceeds the cap {cap}")));
    }
    let mm = m as u32;
    let mut elements = Vec::new();
    for a in 0..mm {
        for b in 0..mm {
            for c in 0..mm {
                for d in 0..mm {
                    let det = (a as u64 * d as u64 + (m - 1) * (b as u64 * c as u64 % m)) % m;
                    if det == 1 % m {
                        elements.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let mut lookup = vec![u32::MAX; (m as usize).pow(4)];
    for (i, x) in elements.iter().enumerate() {
        lookup[encode(m, x)] = i as u32;
    }
    let identity = lookup[encode(m, &[1 % mm, 0, 0, 1 % mm])] as usize;
    let mm = m as u64;
    let group = FiniteGroup::from_fn(elements.len(), identity, |i, j| {
        let (x, y) = (elements[i].map(u64::from), elements[j].map(u64::from));
        let prod = [
            ((x[0] * y[0] + x[1] * y[2]) % mm) as u32,
            ((x[0] * y[1] + x[1] * y[3]) % mm) as u32,
            ((x[2] * y[0] + x[3] * y[2]) % mm) as u32,
            ((x[2] * y[1] + x[3] * y[3]) % mm) as u32,
        ];
        lookup[encode(m, &prod)] as usize
    })?;
    Ok(Sl2ModM { m, elements, group })
}
