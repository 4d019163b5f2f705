//! JSON catalog of finite models and the builtin catalog.
//!
//! An entry names a group (permutation generators or a Cayley table), the
//! generators of N and J̃, and explicit matrices of ρ̃ on the J̃ generators.
//! Matrix entries are coefficient vectors in the power basis of Q(ζ_c).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::{HeckeError, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GroupSpec {
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
    Table { table: Vec<Vec<usize>> },
}

/// A group element: an index into the table, or a permutation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Permutation(Vec<usize>),
}

/// A rational coefficient, written as an integer or a string like "-3/2".
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn value(&self) -> Result<BigRational> {
        match self {
            Coeff::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            Coeff::Text(s) => s.trim().parse().map_err(|_| HeckeError::Parse(format!("bad coefficient `{s}`"))),
        }
    }

    fn from_rational(r: &BigRational) -> Self {
        match (r.is_integer(), i64::try_from(r.to_integer())) {
            (true, Ok(n)) => Coeff::Int(n),
            _ => Coeff::Text(r.to_string()),
        }
    }
}

/// Matrix entries as coefficient vectors.
pub type MatrixSpec = Vec<Vec<Vec<Coeff>>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EntrySpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub group: GroupSpec,
    /// Generators (or the full element list) of N.
    pub normal: Vec<ElementRef>,
    /// Generators of J̃; `rep` gives one matrix for each, in order.
    pub jtilde: Vec<ElementRef>,
    pub conductor: usize,
    pub rep: Vec<MatrixSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CatalogFile {
    pub entries: Vec<EntrySpec>,
}

impl CatalogFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HeckeError::Parse(format!("catalog: {e}")))
    }
}

pub fn parse_matrix(spec: &MatrixSpec, conductor: usize) -> Result<Vec<Vec<Cyclotomic>>> {
    spec.iter()
        .map(|row| {
            row.iter()
                .map(|coeffs| {
                    let cs = coeffs.iter().map(Coeff::value).collect::<Result<Vec<_>>>()?;
                    Ok(Cyclotomic::from_coefficients(conductor, cs))
                })
                .collect()
        })
        .collect()
}

fn matrix_spec(m: &[Vec<Cyclotomic>]) -> MatrixSpec {
    m.iter()
        .map(|row| row.iter().map(|c| c.coefficients().iter().map(Coeff::from_rational).collect()).collect())
        .collect()
}

mod build {
    use super::*;

    pub type Perm = Vec<usize>;
    pub type Mat = Vec<Vec<Cyclotomic>>;

    /// a∘b.
    pub fn compose(a: &Perm, b: &Perm) -> Perm {
        b.iter().map(|&x| a[x]).collect()
    }

    pub fn power(a: &Perm, k: usize) -> Perm {
        (0..k).fold((0..a.len()).collect(), |acc, _| compose(&acc, a))
    }

    pub fn cycle(n: usize) -> Perm {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    /// Left-regular permutation of element `a` under `mul` on `0..order`.
    pub fn regular(order: usize, mul: impl Fn(usize, usize) -> usize, a: usize) -> Perm {
        (0..order).map(|x| mul(a, x)).collect()
    }

    /// A permutation of the first factor inside a product on `d1 + d2` points.
    pub fn left(p: &Perm, d2: usize) -> Perm {
        let d1 = p.len();
        p.iter().copied().chain(d1..d1 + d2).collect()
    }

    pub fn right(d1: usize, p: &Perm) -> Perm {
        (0..d1).chain(p.iter().map(|&x| x + d1)).collect()
    }

    pub fn int_mat(conductor: usize, rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&v| Cyclotomic::from_int(conductor, v)).collect()).collect()
    }

    pub fn scalar(c: Cyclotomic) -> Mat {
        vec![vec![c]]
    }

    pub fn eye(conductor: usize, n: usize) -> Mat {
        (0..n).map(|i| (0..n).map(|j| Cyclotomic::from_int(conductor, (i == j) as i64)).collect()).collect()
    }

    pub fn lift(m: &Mat, conductor: usize) -> Mat {
        m.iter().map(|r| r.iter().map(|c| c.lift(conductor)).collect()).collect()
    }

    pub fn kron(a: &Mat, b: &Mat) -> Mat {
        let (n, k) = (a.len(), b.len());
        (0..n * k).map(|i| (0..n * k).map(|j| &a[i / k][j / k] * &b[i % k][j % k]).collect()).collect()
    }

    /// Quaternion units ±1, ±i, ±j, ±k encoded as 4·sign + unit.
    pub fn q8_mul(x: usize, y: usize) -> usize {
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let (s, u) = UNIT[x % 4][y % 4];
        4 * ((x / 4 + y / 4 + s) % 2) + u
    }

    /// Unitriangular (a, b, c) ↦ index a·p² + b·p + c, with
    /// (a, b, c)(a', b', c') = (a+a', b+b', c+c'+ab').
    pub fn heis_mul(p: usize) -> impl Fn(usize, usize) -> usize {
        move |x, y| {
            let (a, b, c) = (x / (p * p), (x / p) % p, x % p);
            let (a2, b2, c2) = (y / (p * p), (y / p) % p, y % p);
            ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
        }
    }

    /// Schrödinger representation of the Heisenberg group mod p on x = (1,0,0)
    /// and y = (0,1,0): x shifts the basis, y is diag(ζ_p^k).
    pub fn schroedinger(p: usize, conductor: usize) -> (Mat, Mat) {
        let x = (0..p)
            .map(|i| (0..p).map(|j| Cyclotomic::from_int(conductor, (i == (j + 1) % p) as i64)).collect())
            .collect();
        let step = (conductor / p) as i64;
        let y = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        if i == j {
                            Cyclotomic::zeta_pow(conductor, step * i as i64)
                        } else {
                            Cyclotomic::zero(conductor)
                        }
                    })
                    .collect()
            })
            .collect();
        (x, y)
    }
}

use build::*;

struct Builder {
    name: &'static str,
    description: &'static str,
    degree: usize,
    generators: Vec<Perm>,
    normal: Vec<Perm>,
    jtilde: Vec<Perm>,
    conductor: usize,
    rep: Vec<Mat>,
}

impl Builder {
    fn spec(self) -> EntrySpec {
        EntrySpec {
            name: self.name.into(),
            description: self.description.into(),
            group: GroupSpec::Permutations { degree: self.degree, generators: self.generators },
            normal: self.normal.into_iter().map(ElementRef::Permutation).collect(),
            jtilde: self.jtilde.into_iter().map(ElementRef::Permutation).collect(),
            conductor: self.conductor,
            rep: self.rep.iter().map(|m| matrix_spec(m)).collect(),
        }
    }
}

/// The catalog shipped with the library: dihedral, quaternion, Heisenberg
/// mod 2 and mod 3, symmetric groups, and direct products with small abelian
/// groups, so that G/N ranges over several abelian groups.
pub fn builtin_catalog() -> CatalogFile {
    let r = cycle(4);
    let s: Perm = vec![0, 3, 2, 1];
    let r2 = power(&r, 2);
    let d8_rep = |c: usize| (int_mat(c, &[&[0, -1], &[1, 0]]), int_mat(c, &[&[1, 0], &[0, -1]]));

    let qi = regular(8, q8_mul, 1);
    let qj = regular(8, q8_mul, 2);
    let qminus = regular(8, q8_mul, 4);
    let q8_rep = |c: usize| {
        let i = Cyclotomic::zeta_pow(c, (c / 4) as i64);
        let zero = Cyclotomic::zero(c);
        (vec![vec![i.clone(), zero.clone()], vec![zero, -i]], int_mat(c, &[&[0, -1], &[1, 0]]))
    };

    let h2 = heis_mul(2);
    let (h2x, h2y, h2z) = (regular(8, &h2, 4), regular(8, &h2, 2), regular(8, &h2, 1));
    let h3 = heis_mul(3);
    let (hx, hy, hz) = (regular(27, &h3, 9), regular(27, &h3, 3), regular(27, &h3, 1));

    let c3 = cycle(3);
    let c2 = cycle(2);
    let zeta = |c: usize, n: usize| Cyclotomic::zeta_pow(c, (c / n) as i64);

    let mut entries = Vec::new();
    let (dr, ds) = d8_rep(4);
    entries.push(Builder {
        name: "d8-c4-full",
        description: "D8 with N = C4 and the 2-dimensional irreducible on J~ = G",
        degree: 4,
        generators: vec![r.clone(), s.clone()],
        normal: vec![r.clone()],
        jtilde: vec![r.clone(), s.clone()],
        conductor: 4,
        rep: vec![dr, ds],
    });
    entries.push(Builder {
        name: "d8-c4-induced",
        description: "D8 with N = J~ = C4 and a faithful character of C4",
        degree: 4,
        generators: vec![r.clone(), s.clone()],
        normal: vec![r.clone()],
        jtilde: vec![r.clone()],
        conductor: 4,
        rep: vec![scalar(zeta(4, 4))],
    });
    entries.push(Builder {
        name: "d8-center-induced",
        description: "D8 with N = Z(D8) and J~ = C4; the center is G-invariant so I_G(rho) = G",
        degree: 4,
        generators: vec![r.clone(), s.clone()],
        normal: vec![r2.clone()],
        jtilde: vec![r.clone()],
        conductor: 4,
        rep: vec![scalar(zeta(4, 4))],
    });
    let (a, b) = q8_rep(4);
    entries.push(Builder {
        name: "q8-center-full",
        description: "Q8 with N = Z(Q8) and the 2-dimensional irreducible",
        degree: 8,
        generators: vec![qi.clone(), qj.clone()],
        normal: vec![qminus.clone()],
        jtilde: vec![qi.clone(), qj.clone()],
        conductor: 4,
        rep: vec![a.clone(), b.clone()],
    });
    entries.push(Builder {
        name: "q8-c4-full",
        description: "Q8 with N = <i> and the 2-dimensional irreducible",
        degree: 8,
        generators: vec![qi.clone(), qj.clone()],
        normal: vec![qi.clone()],
        jtilde: vec![qi.clone(), qj.clone()],
        conductor: 4,
        rep: vec![a, b],
    });
    entries.push(Builder {
        name: "q8-c4-induced",
        description: "Q8 with N = J~ = <i> and a faithful character of <i>",
        degree: 8,
        generators: vec![qi.clone(), qj.clone()],
        normal: vec![qi.clone()],
        jtilde: vec![qi.clone()],
        conductor: 4,
        rep: vec![scalar(zeta(4, 4))],
    });
    let (sx, sy) = schroedinger(2, 4);
    entries.push(Builder {
        name: "heis2-center-full",
        description: "Heisenberg group mod 2 with N = center and its 2-dimensional irreducible",
        degree: 8,
        generators: vec![h2x.clone(), h2y.clone()],
        normal: vec![h2z.clone()],
        jtilde: vec![h2x, h2y],
        conductor: 4,
        rep: vec![sx, sy],
    });
    let (sx, sy) = schroedinger(3, 3);
    entries.push(Builder {
        name: "heis3-center-full",
        description: "Heisenberg group mod 3 with N = center and a 3-dimensional irreducible",
        degree: 27,
        generators: vec![hx.clone(), hy.clone()],
        normal: vec![hz.clone()],
        jtilde: vec![hx.clone(), hy.clone()],
        conductor: 3,
        rep: vec![sx.clone(), sy.clone()],
    });
    entries.push(Builder {
        name: "heis3-abelian-full",
        description: "Heisenberg group mod 3 with N = <y, z> of index 3",
        degree: 27,
        generators: vec![hx.clone(), hy.clone()],
        normal: vec![hy.clone(), hz.clone()],
        jtilde: vec![hx.clone(), hy.clone()],
        conductor: 3,
        rep: vec![sx.clone(), sy.clone()],
    });
    entries.push(Builder {
        name: "heis3-abelian-induced",
        description: "Heisenberg group mod 3 with N = J~ = <y, z> and a character nontrivial on the center",
        degree: 27,
        generators: vec![hx.clone(), hy.clone()],
        normal: vec![hy.clone(), hz.clone()],
        jtilde: vec![hy.clone(), hz.clone()],
        conductor: 3,
        rep: vec![scalar(Cyclotomic::one(3)), scalar(zeta(3, 3))],
    });
    entries.push(Builder {
        name: "heis3-center-induced",
        description: "Heisenberg group mod 3 with N = center and J~ = <y, z>; I_G(rho) = G",
        degree: 27,
        generators: vec![hx.clone(), hy.clone()],
        normal: vec![hz.clone()],
        jtilde: vec![hy.clone(), hz.clone()],
        conductor: 3,
        rep: vec![scalar(Cyclotomic::one(3)), scalar(zeta(3, 3))],
    });
    let t: Perm = vec![1, 0, 2, 3];
    entries.push(Builder {
        name: "s4-a4-full",
        description: "S4 with N = A4 and the 2-dimensional irreducible pulled back from S3",
        degree: 4,
        generators: vec![t.clone(), r.clone()],
        normal: vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]],
        jtilde: vec![t, r.clone()],
        conductor: 12,
        rep: vec![int_mat(12, &[&[1, 0], &[-1, -1]]), int_mat(12, &[&[-1, -1], &[0, 1]])],
    });
    entries.push(Builder {
        name: "s3-trivial",
        description: "S3 with N = J~ = G and the trivial character",
        degree: 3,
        generators: vec![c3.clone(), vec![1, 0, 2]],
        normal: vec![c3.clone(), vec![1, 0, 2]],
        jtilde: vec![c3.clone(), vec![1, 0, 2]],
        conductor: 6,
        rep: vec![scalar(Cyclotomic::one(6)), scalar(Cyclotomic::one(6))],
    });
    let (dr, ds) = d8_rep(12);
    let w = scalar(zeta(12, 3));
    entries.push(Builder {
        name: "d8xc3-c4-full",
        description:
            "D8 x C3 with N = C4 x 1 (G/N = C6) and the 2-dimensional irreducible twisted by a cube root of unity",
        degree: 7,
        generators: vec![left(&r, 3), left(&s, 3), right(4, &c3)],
        normal: vec![left(&r, 3)],
        jtilde: vec![left(&r, 3), left(&s, 3), right(4, &c3)],
        conductor: 12,
        rep: vec![dr, ds, kron(&eye(12, 2), &w)],
    });
    entries.push(Builder {
        name: "d8xc3-c4-induced",
        description: "D8 x C3 with N = C4 x 1 and J~ = C4 x C3",
        degree: 7,
        generators: vec![left(&r, 3), left(&s, 3), right(4, &c3)],
        normal: vec![left(&r, 3)],
        jtilde: vec![left(&r, 3), right(4, &c3)],
        conductor: 12,
        rep: vec![scalar(zeta(12, 4)), w.clone()],
    });
    let (a, b) = q8_rep(4);
    let sign = scalar(Cyclotomic::from_int(4, -1));
    entries.push(Builder {
        name: "q8xc2-center-full",
        description: "Q8 x C2 with N = Z(Q8) x 1 (G/N = C2^3) and the 2-dimensional irreducible times the sign",
        degree: 10,
        generators: vec![left(&qi, 2), left(&qj, 2), right(8, &c2)],
        normal: vec![left(&qminus, 2)],
        jtilde: vec![left(&qi, 2), left(&qj, 2), right(8, &c2)],
        conductor: 4,
        rep: vec![a, b, kron(&eye(4, 2), &sign)],
    });
    let (sx6, sy6) = (lift(&sx, 6), lift(&sy, 6));
    entries.push(Builder {
        name: "heis3xc2-center-full",
        description: "Heisenberg mod 3 x C2 with N = center x 1 (G/N = C3^2 x C2)",
        degree: 29,
        generators: vec![left(&hx, 2), left(&hy, 2), right(27, &c2)],
        normal: vec![left(&hz, 2)],
        jtilde: vec![left(&hx, 2), left(&hy, 2), right(27, &c2)],
        conductor: 6,
        rep: vec![sx6, sy6, kron(&eye(6, 3), &scalar(Cyclotomic::from_int(6, -1)))],
    });
    let (dr, ds) = d8_rep(4);
    let (i2, i2b) = (eye(4, 2), eye(4, 2));
    entries.push(Builder {
        name: "d8xd8-c4xc4-full",
        description: "D8 x D8 with N = C4 x C4 and the outer tensor product of 2-dimensional irreducibles",
        degree: 8,
        generators: vec![left(&r, 4), left(&s, 4), right(4, &r), right(4, &s)],
        normal: vec![left(&r, 4), right(4, &r)],
        jtilde: vec![left(&r, 4), left(&s, 4), right(4, &r), right(4, &s)],
        conductor: 4,
        rep: vec![kron(&dr, &i2), kron(&ds, &i2b), kron(&i2, &dr), kron(&i2, &ds)],
    });
    let (dr, ds) = d8_rep(12);
    let (sx12, sy12) = (lift(&sx, 12), lift(&sy, 12));
    entries.push(Builder {
        name: "heis3xd8-center-full",
        description: "Heisenberg mod 3 x D8 with N = center x C4 and a 6-dimensional irreducible",
        degree: 31,
        generators: vec![left(&hx, 4), left(&hy, 4), right(27, &r), right(27, &s)],
        normal: vec![left(&hz, 4), right(27, &r)],
        jtilde: vec![left(&hx, 4), left(&hy, 4), right(27, &r), right(27, &s)],
        conductor: 12,
        rep: vec![kron(&sx12, &eye(12, 2)), kron(&sy12, &eye(12, 2)), kron(&eye(12, 3), &dr), kron(&eye(12, 3), &ds)],
    });
    let (dr, ds) = d8_rep(4);
    let (a, b) = q8_rep(4);
    entries.push(Builder {
        name: "q8xq8-mixed-full",
        description: "Q8 x Q8 with N = Q8 x Z(Q8) (G/N = C2^2); the restriction is twice a 2-dimensional irreducible",
        degree: 16,
        generators: vec![left(&qi, 8), left(&qj, 8), right(8, &qi), right(8, &qj)],
        normal: vec![left(&qi, 8), left(&qj, 8), right(8, &qminus)],
        jtilde: vec![left(&qi, 8), left(&qj, 8), right(8, &qi), right(8, &qj)],
        conductor: 4,
        rep: vec![kron(&a, &eye(4, 2)), kron(&b, &eye(4, 2)), kron(&eye(4, 2), &a), kron(&eye(4, 2), &b)],
    });
    // Induced from ρ ⊠ ψ on the base D8 x D8, ψ the character with ψ(r) = 1, ψ(s) = -1.
    let block = |x: &Mat, y: &Mat| {
        let z = Cyclotomic::zero(4);
        let mut m = vec![vec![z; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = x[i][j].clone();
                m[i + 2][j + 2] = y[i][j].clone();
            }
        }
        m
    };
    let swap = int_mat(4, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let minus = int_mat(4, &[&[-1, 0], &[0, -1]]);
    entries.push(Builder {
        name: "d8wrc2-base-full",
        description: "D8 wreath C2 with N = D8 x D8 and a 4-dimensional irreducible whose restriction has two 2-dimensional constituents",
        degree: 8,
        generators: vec![left(&r, 4), left(&s, 4), vec![4, 5, 6, 7, 0, 1, 2, 3]],
        normal: vec![left(&r, 4), left(&s, 4), right(4, &r), right(4, &s)],
        jtilde: vec![left(&r, 4), left(&s, 4), vec![4, 5, 6, 7, 0, 1, 2, 3]],
        conductor: 4,
        rep: vec![block(&dr, &eye(4, 2)), block(&ds, &minus), swap],
    });
    CatalogFile { entries: entries.into_iter().map(Builder::spec).collect() }
}
