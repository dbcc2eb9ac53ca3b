use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// A finite group as an explicit multiplication table over `0..order`.
/// Validation finds the identity and checks closure, associativity and
/// inverses, so arbitrary user tables can be trusted downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(name: &str, order: usize, mul: Vec<usize>) -> Result<Self, Error> {
        if order == 0 || mul.len() != order * order {
            return Err(Error::DimensionMismatch {
                detail: format!(
                    "group of order {} needs {} products, got {}",
                    order,
                    order * order,
                    mul.len()
                ),
            });
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(Error::TooLarge {
                detail: format!("table entry out of range for order {}", order),
            });
        }
        let at = |a: usize, b: usize| mul[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::TooLarge {
                detail: "table has no identity element".into(),
            })?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::TooLarge {
                            detail: format!("table is not associative at ({}, {}, {})", a, b, c),
                        });
                    }
                }
            }
        }
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(a, b) == identity)
                    .ok_or_else(|| Error::TooLarge {
                        detail: format!("element {} has no inverse", a),
                    })
            })
            .collect::<Result<Vec<usize>, Error>>()?;
        Ok(GroupTable {
            name: String::from(name),
            order,
            mul,
            identity,
            inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    /// `a^e` for `e >= 0`. Exponents reduce mod the group order, so this is
    /// constant-bounded regardless of `e`.
    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..(e % self.order as u64) {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut acc = a;
        let mut k = 1;
        while acc != self.identity {
            acc = self.mul(acc, a);
            k += 1;
        }
        k
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|a| self.mul(z, a) == self.mul(a, z)))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.center().len() == self.order
    }
}

fn cyclic(k: usize) -> GroupTable {
    let mul = (0..k * k).map(|idx| (idx / k + idx % k) % k).collect();
    GroupTable::new(&format!("Z{}", k), k, mul).unwrap()
}

fn direct_product(name: &str, a: &GroupTable, b: &GroupTable) -> GroupTable {
    let n = a.order() * b.order();
    let bo = b.order();
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (xa, xb) = (x / bo, x % bo);
            let (ya, yb) = (y / bo, y % bo);
            mul.push(a.mul(xa, ya) * bo + b.mul(xb, yb));
        }
    }
    GroupTable::new(name, n, mul).unwrap()
}

/// Dihedral group of order `2k`, `k >= 3`: elements `r^i s^e` indexed
/// `i + k e`, with `s r = r^{-1} s`.
fn dihedral(k: usize) -> GroupTable {
    let n = 2 * k;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (i, e) = (x % k, x / k);
            let (j, f) = (y % k, y / k);
            let rot = if e == 0 { (i + j) % k } else { (i + k - j % k) % k };
            mul.push(rot + k * ((e + f) % 2));
        }
    }
    let name = if k == 3 {
        String::from("S3")
    } else {
        format!("D{}", k)
    };
    GroupTable::new(&name, n, mul).unwrap()
}

/// Quaternion group of order 8: `{+-1, +-i, +-j, +-k}` indexed
/// `axis + 4 * sign`.
fn quaternion8() -> GroupTable {
    // basis products: (axis, axis) -> (axis, negative?)
    const BASIS: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut mul = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (ax, sx) = (x % 4, x / 4 == 1);
            let (ay, sy) = (y % 4, y / 4 == 1);
            let (az, sb) = BASIS[ax][ay];
            let neg = (sx ^ sy) ^ sb;
            mul.push(az + if neg { 4 } else { 0 });
        }
    }
    GroupTable::new("Q8", 8, mul).unwrap()
}

/// Alternating group on 4 points: the 12 even permutations in
/// lexicographic order, composed as `(f * g)(x) = f(g(x))`.
fn alternating4() -> GroupTable {
    fn perms() -> Vec<[usize; 4]> {
        let mut all = Vec::new();
        let mut items = [0usize, 1, 2, 3];
        loop {
            let even = {
                let mut inversions = 0;
                for i in 0..4 {
                    for j in i + 1..4 {
                        if items[i] > items[j] {
                            inversions += 1;
                        }
                    }
                }
                inversions % 2 == 0
            };
            if even {
                all.push(items);
            }
            if !next_perm(&mut items) {
                break;
            }
        }
        all
    }
    fn next_perm(a: &mut [usize; 4]) -> bool {
        let mut i = 3;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = 3;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }
    let elems = perms();
    let index = |p: &[usize; 4]| elems.iter().position(|q| q == p).unwrap();
    let mut mul = Vec::with_capacity(144);
    for f in &elems {
        for g in &elems {
            let composed = [f[g[0]], f[g[1]], f[g[2]], f[g[3]]];
            mul.push(index(&composed));
        }
    }
    GroupTable::new("A4", 12, mul).unwrap()
}

/// Dicyclic group of order 12: `a^6 = 1, b^2 = a^3, b a b^{-1} = a^{-1}`,
/// elements `a^i b^e` indexed `i + 6 e`.
fn dicyclic3() -> GroupTable {
    let mut mul = Vec::with_capacity(144);
    for x in 0..12 {
        for y in 0..12 {
            let (i, e) = (x % 6, x / 6);
            let (j, f) = (y % 6, y / 6);
            let idx = if e == 0 {
                ((i + j) % 6) + 6 * f
            } else if f == 0 {
                ((i + 6 - j) % 6) + 6
            } else {
                (i + 6 - j + 3) % 6
            };
            mul.push(idx);
        }
    }
    GroupTable::new("Dic3", 12, mul).unwrap()
}

/// All 24 groups of order at most 12, by (order, name). Tables are produced
/// by validated constructors, not external data.
pub fn groups_up_to_order_12() -> Vec<GroupTable> {
    let z = cyclic;
    let mut out = alloc::vec![
        cyclic(1),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        direct_product("Z2xZ2", &z(2), &z(2)),
        cyclic(5),
        cyclic(6),
        dihedral(3),
        cyclic(7),
        cyclic(8),
        direct_product("Z4xZ2", &z(4), &z(2)),
        direct_product("Z2xZ2xZ2", &direct_product("Z2xZ2", &z(2), &z(2)), &z(2)),
        dihedral(4),
        quaternion8(),
        cyclic(9),
        direct_product("Z3xZ3", &z(3), &z(3)),
        cyclic(10),
        dihedral(5),
        cyclic(11),
        cyclic(12),
        direct_product("Z6xZ2", &z(6), &z(2)),
        dihedral(6),
        alternating4(),
        dicyclic3(),
    ];
    out.sort_by(|a, b| {
        (a.order(), String::from(a.name())).cmp(&(b.order(), String::from(b.name())))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_has_24_validated_groups() {
        let lib = groups_up_to_order_12();
        assert_eq!(lib.len(), 24);
        let mut by_order = [0usize; 13];
        for g in &lib {
            by_order[g.order()] += 1;
        }
        assert_eq!(&by_order[1..], &[1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]);
        // Names are unique.
        for i in 0..lib.len() {
            for j in i + 1..lib.len() {
                assert_ne!(lib[i].name(), lib[j].name());
            }
        }
    }

    #[test]
    fn center_sizes() {
        let lib = groups_up_to_order_12();
        let center_of = |name: &str| {
            lib.iter()
                .find(|g| g.name() == name)
                .unwrap()
                .center()
                .len()
        };
        assert_eq!(center_of("S3"), 1);
        assert_eq!(center_of("D4"), 2);
        assert_eq!(center_of("Q8"), 2);
        assert_eq!(center_of("D5"), 1);
        assert_eq!(center_of("D6"), 2);
        assert_eq!(center_of("A4"), 1);
        assert_eq!(center_of("Dic3"), 2);
        assert_eq!(center_of("Z12"), 12);
    }

    #[test]
    fn element_orders_make_sense() {
        let lib = groups_up_to_order_12();
        for g in &lib {
            for a in 0..g.order() {
                let o = g.element_order(a);
                assert_eq!(g.order() % o, 0, "Lagrange broken in {}", g.name());
                assert_eq!(g.pow(a, o as u64), g.identity());
            }
        }
        let q8 = lib.iter().find(|g| g.name() == "Q8").unwrap();
        let orders: Vec<usize> = (0..8).map(|a| q8.element_order(a)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
    }

    #[test]
    fn rejects_broken_tables() {
        // A latin square that is not associative (order 5 loop).
        let mut mul = alloc::vec![0usize; 25];
        for a in 0..5 {
            for b in 0..5 {
                mul[a * 5 + b] = (2 * a + 3 * b) % 5;
            }
        }
        assert!(GroupTable::new("bad", 5, mul).is_err());
        assert!(GroupTable::new("short", 3, alloc::vec![0, 1, 2]).is_err());
    }
}
