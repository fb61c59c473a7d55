#pragma once

#include <vector>

#include "trivirus/model.hpp"

namespace trivirus {

inline constexpr double kDefaultSpectralTol = 1e-12;

/// Perron root and eigenvector pair of a nonnegative irreducible matrix.
/// right has unit 1-norm; left is scaled so that left' * right == 1.
struct PerronTriple {
    double rho = 0.0;
    Vector right;
    Vector left;
    int iterations = 0;
};

/// Strong connectivity of the digraph with an edge j -> i whenever A(i, j) != 0.
/// A 1x1 matrix counts as irreducible. Throws NegativeEntry on negative input.
bool is_irreducible(const Matrix& a);

/// Strongly connected components of the nonzero pattern of a (ignoring the
/// diagonal), each as a sorted list of node indices.
std::vector<std::vector<int>> strongly_connected_components(const Matrix& a);

/// Shifted power iteration on A + I (and its transpose for the left vector).
/// The shift makes every irreducible input primitive, so periodic patterns
/// such as weighted cycles converge. Start vector is uniform; the run stops
/// when both the 1-norm change of the normalized iterate and the residual
/// ||A v - rho v||_1 fall below tol, or fails after 100 n ceil(log10(1/tol))
/// iterations.
///
/// Errors: NegativeEntry, NotIrreducible, NoConvergence.
PerronTriple perron(const Matrix& a, double tol = kDefaultSpectralTol);

/// Spectral radius of a nonnegative matrix that need not be irreducible:
/// maximum Perron root over the diagonal blocks of its strongly connected
/// components.
double spectral_radius_nonnegative(const Matrix& a, double tol = kDefaultSpectralTol);

/// s(M), the largest real part of the spectrum of a Metzler matrix. Computed
/// as rho(M + cI) - c with c = 1 + max_i |M(i, i)|, per strongly connected
/// component, so reducible inputs are handled exactly.
///
/// Errors: NotMetzler, NoConvergence.
double spectral_abscissa_metzler(const Matrix& m, double tol = kDefaultSpectralTol);

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol = kDefaultSpectralTol);

/// Smallest eigenvalue >= -tol.
bool is_positive_semidefinite(const Matrix& s, double tol = kDefaultSpectralTol);

} // namespace trivirus
