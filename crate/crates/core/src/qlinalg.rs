//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{invalid, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Default tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Default tolerance for eigensolver-backed checks.
pub const EIG_TOL: f64 = 1e-10;

pub const I: C64 = Complex { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// `e^{i x}`
#[inline]
pub fn cis(x: f64) -> C64 {
    Complex::from_polar(1.0, x)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn from_rows(rows: &[&[C64]]) -> ComplexMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |row| row.len());
    ComplexMatrix::from_fn(n, m, |i, j| rows[i][j])
}

/// Single-qubit operators in the `|0> = up` basis.
pub mod ops {
    use super::*;

    pub fn s_plus() -> ComplexMatrix {
        from_rows(&[&[r(0.0), r(1.0)], &[r(0.0), r(0.0)]])
    }

    pub fn s_minus() -> ComplexMatrix {
        s_plus().transpose()
    }

    pub fn s3() -> ComplexMatrix {
        from_rows(&[&[r(1.0), r(0.0)], &[r(0.0), r(-1.0)]])
    }

    pub fn id2() -> ComplexMatrix {
        identity(2)
    }
}

/// Computational basis ket `|index>` of dimension `dim`.
pub fn basis_ket(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = r(1.0);
    v
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, leftmost first.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(identity(1), |acc, f| kron(&acc, f))
}

fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// Places `op` on the consecutive sites starting at `first_site` (1-based)
/// of an `n_sites` register.
pub fn embed(op: &ComplexMatrix, first_site: usize, n_sites: usize) -> Result<ComplexMatrix> {
    let k = match (op.is_square(), qubit_count(op.nrows())) {
        (true, Some(k)) if k >= 1 => k,
        _ => return invalid(format!("operator of shape {:?} is not 2^k square", op.shape())),
    };
    if first_site == 0 || first_site + k - 1 > n_sites {
        return invalid(format!(
            "{k}-site operator at site {first_site} does not fit in {n_sites} sites"
        ));
    }
    let sites: Vec<usize> = (first_site..first_site + k).collect();
    embed_sites(op, &sites, n_sites)
}

/// Places `op` on an arbitrary ordered list of distinct sites. The first
/// listed site is the most significant qubit of `op`. Needed for periodic
/// chains where a triple wraps past the last site.
pub fn embed_sites(op: &ComplexMatrix, sites: &[usize], n_sites: usize) -> Result<ComplexMatrix> {
    if n_sites > 16 {
        return invalid(format!("{n_sites} sites exceeds the dense limit"));
    }
    let dim = 1usize << n_sites;
    let mut out = ComplexMatrix::zeros(dim, dim);
    add_embedded(&mut out, op, sites, n_sites)?;
    Ok(out)
}

/// `out += embed_sites(op, sites, n_sites)` without the temporary.
pub fn add_embedded(
    out: &mut ComplexMatrix,
    op: &ComplexMatrix,
    sites: &[usize],
    n_sites: usize,
) -> Result<()> {
    let k = sites.len();
    if !op.is_square() || qubit_count(op.nrows()) != Some(k) || k == 0 {
        return invalid(format!(
            "operator of shape {:?} does not act on {k} qubits",
            op.shape()
        ));
    }
    let dim = 1usize << n_sites;
    if out.shape() != (dim, dim) {
        return invalid(format!("target shape {:?} is not {dim}x{dim}", out.shape()));
    }
    for (i, &s) in sites.iter().enumerate() {
        if s == 0 || s > n_sites {
            return invalid(format!("site {s} outside 1..={n_sites}"));
        }
        if sites[..i].contains(&s) {
            return invalid(format!("site {s} listed twice"));
        }
    }
    let shifts: Vec<usize> = sites.iter().map(|&s| n_sites - s).collect();
    let mask = shifts.iter().fold(0usize, |m, &sh| m | (1 << sh));
    let local_index = |full: usize| {
        shifts
            .iter()
            .fold(0usize, |acc, &sh| (acc << 1) | ((full >> sh) & 1))
    };
    let scatter = |local: usize| {
        shifts.iter().enumerate().fold(0usize, |acc, (pos, &sh)| {
            acc | (((local >> (k - 1 - pos)) & 1) << sh)
        })
    };
    let local_dim = 1usize << k;
    let columns: Vec<usize> = (0..local_dim).map(scatter).collect();
    for row in 0..dim {
        let rest = row & !mask;
        let a = local_index(row);
        for (b, &col) in columns.iter().enumerate() {
            let v = op[(a, b)];
            if v != C64::new(0.0, 0.0) {
                out[(row, rest | col)] += v;
            }
        }
    }
    Ok(())
}

fn frob(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// `exp(t G)` for anti-Hermitian `G`, through the spectral decomposition of
/// the Hermitian matrix `iG`.
pub fn matexp_skew(g: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !g.is_square() {
        return invalid("matexp_skew needs a square matrix");
    }
    let skew = (g + g.adjoint()).norm();
    if skew > ALGEBRAIC_TOL * frob(g).max(1.0) {
        return invalid(format!("generator is not anti-Hermitian (residual {skew:.3e})"));
    }
    // exp(tG) = exp(-i t H) with H = iG
    let h = g * I;
    let h = (&h + h.adjoint()) * r(0.5);
    let eig = herm_eig(&h)?;
    let phases = ComplexVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| cis(-l * t)),
    );
    let v = &eig.eigenvectors;
    Ok(v * ComplexMatrix::from_diagonal(&phases) * v.adjoint())
}

#[derive(Debug, Clone)]
pub struct HermEigResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` belongs to `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEigResult> {
    if !h.is_square() {
        return invalid("herm_eig needs a square matrix");
    }
    let res = (h - h.adjoint()).norm();
    if res > ALGEBRAIC_TOL * frob(h).max(1.0) {
        return invalid(format!("matrix is not Hermitian (residual {res:.3e})"));
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let eigenvectors = ComplexMatrix::from_fn(h.nrows(), h.ncols(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok(HermEigResult { eigenvalues, eigenvectors })
}

/// Reduced density matrix of a pure state on the sites in `keep` (1-based),
/// ordered as they appear in the register.
pub fn partial_trace(state: &ComplexVector, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = match qubit_count(state.len()) {
        Some(n) if n >= 1 => n,
        _ => return invalid(format!("state dimension {} is not 2^n", state.len())),
    };
    if keep.is_empty() {
        return invalid("keep set is empty");
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return invalid("keep set has repeated sites");
    }
    if kept.iter().any(|&s| s == 0 || s > n) {
        return invalid(format!("keep set {keep:?} outside 1..={n}"));
    }
    let traced: Vec<usize> = (1..=n).filter(|s| !kept.contains(s)).collect();
    let gather = |full: usize, sites: &[usize]| {
        sites
            .iter()
            .fold(0usize, |acc, &s| (acc << 1) | ((full >> (n - s)) & 1))
    };
    let dk = 1usize << kept.len();
    let dr = 1usize << traced.len();
    let mut amp = ComplexMatrix::zeros(dk, dr);
    for (full, &a) in state.iter().enumerate() {
        amp[(gather(full, &kept), gather(full, &traced))] = a;
    }
    Ok(&amp * amp.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub residual: f64,
    pub ok: bool,
}

pub fn check_unitary(a: &ComplexMatrix, tol: f64) -> Residual {
    let residual = if a.is_square() {
        (a.adjoint() * a - identity(a.nrows())).norm()
    } else {
        f64::INFINITY
    };
    Residual { residual, ok: residual <= tol }
}

pub fn check_hermitian(a: &ComplexMatrix, tol: f64) -> Residual {
    let residual = if a.is_square() {
        (a - a.adjoint()).norm()
    } else {
        f64::INFINITY
    };
    Residual { residual, ok: residual <= tol }
}

/// Orthonormal basis of the column span of `vectors` (modified Gram-Schmidt,
/// dropping columns whose remainder falls below `tol`).
pub fn orthonormalize(vectors: &[ComplexVector], tol: f64) -> Vec<ComplexVector> {
    let mut basis: Vec<ComplexVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let norm = w.norm();
        if norm > tol {
            basis.push(w / r(norm));
        }
    }
    basis
}

/// Orthogonal projector onto the span of orthonormal `basis`.
pub fn projector(basis: &[ComplexVector], dim: usize) -> ComplexMatrix {
    basis
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, b| acc + b * b.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn herm_from(seed: &[f64], n: usize) -> ComplexMatrix {
        let m = ComplexMatrix::from_fn(n, n, |i, j| c(seed[(i * n + j) % seed.len()], seed[(i + 2 * j + 1) % seed.len()]));
        (&m + m.adjoint()) * r(0.5)
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn kron_pauli_pattern() {
        let s1 = from_rows(&[&[r(0.0), r(1.0)], &[r(1.0), r(0.0)]]);
        let s2 = from_rows(&[&[r(0.0), -I], &[I, r(0.0)]]);
        let k = kron(&s2, &s1);
        let expect = [(0, 3, -I), (1, 2, -I), (2, 1, I), (3, 0, I)];
        for (i, j, v) in expect {
            assert_eq!(k[(i, j)], v);
        }
        assert_eq!(k.iter().filter(|z| z.norm() > 0.0).count(), 4);
    }

    #[test]
    fn kron_spectrum_is_products() {
        let a = herm_from(&[0.3, -1.2, 0.7, 0.1], 2);
        let b = herm_from(&[1.1, 0.4, -0.5, 0.9], 2);
        let la = herm_eig(&a).unwrap().eigenvalues;
        let lb = herm_eig(&b).unwrap().eigenvalues;
        let mut prod: Vec<f64> = la.iter().flat_map(|x| lb.iter().map(move |y| x * y)).collect();
        prod.sort_by(f64::total_cmp);
        let got = herm_eig(&kron(&a, &b)).unwrap().eigenvalues;
        for (p, g) in prod.iter().zip(&got) {
            assert!((p - g).abs() < 1e-12);
        }
    }

    #[test]
    fn embed_identity_and_middle_s3() {
        assert_eq!(embed(&identity(4), 1, 3).unwrap(), identity(8));
        let e = embed(&ops::s3(), 2, 3).unwrap();
        for k in 0..8 {
            let middle = (k >> 1) & 1;
            let expect = if middle == 0 { 1.0 } else { -1.0 };
            assert_eq!(e[(k, k)], r(expect));
        }
    }

    #[test]
    fn embed_rejects_bad_shapes() {
        assert!(embed(&identity(3), 1, 3).is_err());
        assert!(embed(&identity(4), 3, 3).is_err());
        assert!(embed(&identity(2), 0, 3).is_err());
        assert!(embed_sites(&identity(4), &[1, 1], 3).is_err());
    }

    #[test]
    fn embed_sites_matches_permuted_kron() {
        // S+ on site 3 and S- on site 1, listed as (3, 1)
        let op = kron(&ops::s_plus(), &ops::s_minus());
        let got = embed_sites(&op, &[3, 1], 3).unwrap();
        let expect = kron_all(&[ops::s_minus(), identity(2), ops::s_plus()]);
        assert_eq!(got, expect);
    }

    #[test]
    fn matexp_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(4, 4);
        assert!((matexp_skew(&z, 2.0).unwrap() - identity(4)).norm() < 1e-15);
    }

    #[test]
    fn matexp_rejects_hermitian() {
        assert!(matexp_skew(&identity(2), 1.0).is_err());
    }

    #[test]
    fn herm_eig_diagonal() {
        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![r(3.0), r(1.0), r(2.0)]));
        let e = herm_eig(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        for (col, row) in [(0, 1), (1, 2), (2, 0)] {
            assert!((e.eigenvectors[(row, col)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let zero = basis_ket(8, 0);
        let rho = partial_trace(&zero, &[1]).unwrap();
        assert_eq!(rho, from_rows(&[&[r(1.0), r(0.0)], &[r(0.0), r(0.0)]]));

        let s = 0.5f64.sqrt();
        let mut ghz = ComplexVector::zeros(8);
        ghz[0] = r(s);
        ghz[7] = r(s);
        let rho = partial_trace(&ghz, &[1]).unwrap();
        assert!((rho - identity(2) * r(0.5)).norm() < 1e-15);

        let t = (1.0f64 / 3.0).sqrt();
        let mut w = ComplexVector::zeros(8);
        for k in [1, 2, 4] {
            w[k] = r(t);
        }
        let rho = partial_trace(&w, &[2]).unwrap();
        assert!((rho[(0, 0)].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((rho[(1, 1)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!(rho[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let v = basis_ket(8, 0);
        assert!(partial_trace(&v, &[]).is_err());
        assert!(partial_trace(&v, &[4]).is_err());
        assert!(partial_trace(&v, &[1, 1]).is_err());
        assert!(partial_trace(&ComplexVector::zeros(6), &[1]).is_err());
    }

    #[test]
    fn unitary_and_hermitian_checks() {
        let id = identity(4);
        assert_eq!(check_unitary(&id, 1e-12), Residual { residual: 0.0, ok: true });
        let mut bad = id.clone();
        bad[(0, 0)] += r(0.1);
        assert!(!check_unitary(&bad, 1e-12).ok);
        let mut skew = ComplexMatrix::zeros(2, 2);
        skew[(0, 1)] = r(1.0);
        assert!(!check_hermitian(&skew, 1e-12).ok);
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| c(v[i * n + j].0, v[i * n + j].1)))
    }

    fn arb_state(n_qubits: usize) -> impl Strategy<Value = ComplexVector> {
        let dim = 1 << n_qubits;
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
            "nonzero",
            move |v| {
                let s = ComplexVector::from_iterator(dim, v.iter().map(|&(a, b)| c(a, b)));
                let n = s.norm();
                (n > 1e-3).then(|| s / r(n))
            },
        )
    }

    proptest! {
        #[test]
        fn kron_is_associative(a in arb_matrix(2), b in arb_matrix(2), cm in arb_matrix(2)) {
            prop_assert!((kron(&kron(&a, &b), &cm) - kron(&a, &kron(&b, &cm))).iter().all(|z| z.norm() <= 1e-15));
        }

        #[test]
        fn disjoint_embeds_commute(x in arb_matrix(4), y in arb_matrix(2)) {
            let ex = embed(&x, 1, 4).unwrap();
            let ey = embed(&y, 3, 4).unwrap();
            prop_assert!((&ex * &ey - &ey * &ex).norm() <= 1e-13);
        }

        #[test]
        fn one_parameter_group(m in arb_matrix(4), s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let g = (&m - m.adjoint()) * r(0.5);
            let lhs = matexp_skew(&g, s).unwrap() * matexp_skew(&g, t).unwrap();
            let rhs = matexp_skew(&g, s + t).unwrap();
            prop_assert!((lhs - &rhs).norm() <= 1e-12);
            prop_assert!(check_unitary(&rhs, 1e-12).ok);
        }

        #[test]
        fn herm_eig_reconstructs(m in arb_matrix(6)) {
            let h = (&m + m.adjoint()) * r(0.5);
            let e = herm_eig(&h).unwrap();
            let v = &e.eigenvectors;
            let lam = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(6, e.eigenvalues.iter().map(|&x| r(x))));
            prop_assert!((v * lam * v.adjoint() - &h).norm() <= 1e-10);
            prop_assert!((v.adjoint() * v - identity(6)).norm() <= 1e-10);
            let tr: f64 = (0..6).map(|i| h[(i, i)].re).sum();
            prop_assert!((e.eigenvalues.iter().sum::<f64>() - tr).abs() <= 1e-10);
            prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn partial_trace_properties(psi in arb_state(3)) {
            let full = partial_trace(&psi, &[1, 2, 3]).unwrap();
            prop_assert!((full - &psi * psi.adjoint()).norm() <= 1e-12);
            let rho = partial_trace(&psi, &[1, 3]).unwrap();
            prop_assert!((rho.trace() - r(1.0)).norm() <= 1e-12);
            let min = herm_eig(&((&rho + rho.adjoint()) * r(0.5))).unwrap().eigenvalues[0];
            prop_assert!(min >= -1e-12);
            // tracing in two stages agrees with tracing at once
            let rho23 = partial_trace(&psi, &[2, 3]).unwrap();
            let staged = ComplexMatrix::from_fn(2, 2, |a, b| {
                rho23[(2 * a, 2 * b)] + rho23[(2 * a + 1, 2 * b + 1)]
            });
            let direct = partial_trace(&psi, &[2]).unwrap();
            prop_assert!((staged - direct).norm() <= 1e-14);
        }
    }
}
