#pragma once

#include <span>
#include <vector>

namespace riceband {

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// s^T M s for a row-major d*d matrix.
double quadratic_form(std::span<const double> m, std::span<const double> s);

// Eigenvalues (ascending) of a symmetric d*d matrix by cyclic Jacobi.
// When `vectors` is non-null it receives the eigenvectors as columns.
std::vector<double> eigen_symmetric(std::span<const double> m, int d,
                                    std::vector<double>* vectors = nullptr);

// Clamps negative eigenvalues to zero and reassembles the matrix. Throws if
// an eigenvalue falls below -tol.
std::vector<double> clamp_psd(std::span<const double> m, int d, double tol = 1e-10);

}  // namespace riceband
