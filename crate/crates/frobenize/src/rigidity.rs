//! Local-monodromy Jordan data and the Katz rigidity criterion.
//!
//! Local monodromy eigenvalues exp(2*pi*i*r) are represented by their rational
//! residues r mod 1, so everything stays exact.

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Conjugacy-class data of one local monodromy matrix: for each distinct
/// eigenvalue residue, the multiset of Jordan block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanType {
    n: usize,
    /// (eigenvalue residue in [0,1), block sizes descending), residues distinct.
    blocks: Vec<(Rat, Vec<usize>)>,
}

impl JordanType {
    pub fn new(blocks: Vec<(Rat, Vec<usize>)>) -> Result<Self> {
        let mut n = 0usize;
        for (i, (res, sizes)) in blocks.iter().enumerate() {
            if res.is_negative() || res >= &Rat::one() {
                return Err(Error::Input(format!(
                    "eigenvalue residue {res} outside [0,1)"
                )));
            }
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::Input("empty or zero Jordan block".into()));
            }
            for (j, (other, _)) in blocks.iter().enumerate() {
                if i != j && res == other {
                    return Err(Error::Input(format!("repeated eigenvalue residue {res}")));
                }
            }
            n += sizes.iter().sum::<usize>();
        }
        if n == 0 {
            return Err(Error::Input("empty Jordan type".into()));
        }
        let mut blocks = blocks;
        for (_, sizes) in blocks.iter_mut() {
            sizes.sort_unstable_by(|a, b| b.cmp(a));
        }
        blocks.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(JordanType { n, blocks })
    }

    /// Semisimple type with the given eigenvalue residues (mod 1), one 1-block
    /// per occurrence.
    pub fn semisimple(residues: &[Rat]) -> Result<Self> {
        let mut grouped: Vec<(Rat, Vec<usize>)> = Vec::new();
        for r in residues {
            let r = r.mod_one();
            match grouped.iter_mut().find(|(g, _)| *g == r) {
                Some((_, sizes)) => sizes.push(1),
                None => grouped.push((r, vec![1])),
            }
        }
        JordanType::new(grouped)
    }

    /// Nonderogatory (companion-style) type: one Jordan block per distinct
    /// residue, of size equal to its multiplicity.
    pub fn companion(residues: &[Rat]) -> Result<Self> {
        let mut grouped: Vec<(Rat, usize)> = Vec::new();
        for r in residues {
            let r = r.mod_one();
            match grouped.iter_mut().find(|(g, _)| *g == r) {
                Some((_, m)) => *m += 1,
                None => grouped.push((r, 1)),
            }
        }
        JordanType::new(grouped.into_iter().map(|(r, m)| (r, vec![m])).collect())
    }

    /// Pseudo-reflection type in dimension n: a repeated eigenvalue of
    /// multiplicity n-1 and a special one. When the two residues agree the
    /// type degenerates to a transvection-like single eigenvalue with blocks
    /// {2, 1^(n-2)}, preserving the rank-1 property of M - c*Id.
    pub fn reflection(n: usize, repeated: &Rat, special: &Rat) -> Result<Self> {
        assert!(n >= 1);
        let repeated = repeated.mod_one();
        let special = special.mod_one();
        if n == 1 {
            return JordanType::new(vec![(special, vec![1])]);
        }
        if special == repeated {
            let mut sizes = vec![2];
            sizes.extend(std::iter::repeat_n(1, n - 2));
            JordanType::new(vec![(repeated, sizes)])
        } else {
            JordanType::new(vec![(repeated, vec![1; n - 1]), (special, vec![1])])
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[(Rat, Vec<usize>)] {
        &self.blocks
    }

    pub fn is_scalar(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].1.iter().all(|&s| s == 1)
    }
}

/// Dimension of the centralizer {C : MC = CM} of a matrix with this Jordan
/// type: sum over eigenvalues of sum_{i,j} min(b_i, b_j) over its block sizes.
pub fn centralizer_dim(jt: &JordanType) -> usize {
    let mut dim = 0;
    for (_, sizes) in jt.blocks() {
        for &a in sizes {
            for &b in sizes {
                dim += a.min(b);
            }
        }
    }
    dim
}

/// Centralizer codimension omega = n^2 - centralizer_dim.
pub fn omega(jt: &JordanType) -> usize {
    jt.dim() * jt.dim() - centralizer_dim(jt)
}

/// Outcome of the Katz rigidity count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    /// Whether the irreducibility precondition held.
    pub applicable: bool,
    pub omegas: Vec<usize>,
    pub sum: usize,
    /// 2(n^2 - 1).
    pub target: usize,
    pub rigid: bool,
}

/// Katz criterion: an irreducible tuple with product Id generates a rigid
/// group iff sum omega_i = 2(n^2 - 1).
pub fn katz_rigidity(data: &[JordanType], n: usize, irreducible: bool) -> Result<RigidityReport> {
    for jt in data {
        if jt.dim() != n {
            return Err(Error::Input(format!(
                "Jordan type of dimension {} in a rank-{n} rigidity check",
                jt.dim()
            )));
        }
    }
    let omegas: Vec<usize> = data.iter().map(omega).collect();
    let sum = omegas.iter().sum();
    let target = 2 * (n * n - 1);
    Ok(RigidityReport {
        applicable: irreducible,
        omegas,
        sum,
        target,
        rigid: irreducible && sum == target,
    })
}

/// Local monodromy data of the hypergeometric operator, in point order
/// (0, 1, infinity): companion types at 0 and infinity (Levelt), a
/// pseudo-reflection at 1 with special residue -1 + sum(beta - alpha).
pub fn hypergeometric_local_data(alpha: &[Rat], beta: &[Rat]) -> Result<(Vec<JordanType>, bool)> {
    let n = alpha.len();
    if n == 0 || beta.len() != n {
        return Err(Error::Input("need n alphas and n betas".into()));
    }
    let at_zero: Vec<Rat> = beta.iter().map(|b| (&Rat::one() - b).mod_one()).collect();
    let at_infinity: Vec<Rat> = alpha.iter().map(|a| a.mod_one()).collect();
    let mut special = Rat::from_int(-1);
    for (b, a) in beta.iter().zip(alpha) {
        special = &special + &(b - a);
    }
    let h0 = JordanType::companion(&at_zero)?;
    let h1 = JordanType::reflection(n, &Rat::zero(), &special.mod_one())?;
    let hinf = JordanType::companion(&at_infinity)?;
    let irreducible = crate::families::hypergeometric_irreducible(alpha, beta);
    Ok((vec![h0, h1, hinf], irreducible))
}

/// Local monodromy data of the Jordan-Pochhammer operator: n + 1
/// pseudo-reflections, at alpha_1..alpha_n (special residue a + b_i over the
/// repeated residue 0) and at infinity (special -(a + sum b) over -a).
pub fn pochhammer_local_data(
    a: &Rat,
    alphas: &[Rat],
    bs: &[Rat],
) -> Result<(Vec<JordanType>, bool)> {
    let n = alphas.len();
    if n == 0 || bs.len() != n {
        return Err(Error::Input("need n alphas and n bs".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if alphas[i] == alphas[j] {
                return Err(Error::Input(format!("repeated alpha = {}", alphas[i])));
            }
        }
    }
    let mut types = Vec::with_capacity(n + 1);
    for b in bs {
        types.push(JordanType::reflection(n, &Rat::zero(), &(a + b).mod_one())?);
    }
    let mut sum = a.clone();
    for b in bs {
        sum = &sum + b;
    }
    types.push(JordanType::reflection(
        n,
        &(-a).mod_one(),
        &(-&sum).mod_one(),
    )?);
    let irreducible = crate::families::pochhammer_irreducible(a, bs);
    Ok((types, irreducible))
}

/// Heuristic local data for a generic operator: assumes every local monodromy
/// is semisimple with eigenvalues exp(2 pi i e) for the exponents e. This is
/// an opt-in guess; only family constructors carry certified Jordan data.
pub fn assume_semisimple_local_data(op: &crate::operator::DiffOp) -> Result<Vec<JordanType>> {
    let points = op.singular_points()?;
    points
        .iter()
        .map(|pt| {
            let exps = op.exponents(pt)?;
            JordanType::semisimple(&exps.exponents)
        })
        .collect()
}
