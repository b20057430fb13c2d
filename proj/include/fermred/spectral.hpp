#ifndef FERMRED_SPECTRAL_HPP
#define FERMRED_SPECTRAL_HPP

#include <string>
#include <vector>

#include "fermred/matrix.hpp"

namespace fermred {

struct SpectrumReport {
    std::vector<double> values; // descending
    std::size_t dim = 0;        // dimension of the source matrix
    double zero_threshold = 0.0;
    std::size_t dropped_zeros = 0;
    std::string source_tag;

    SpectrumReport stripped(double zero_thr) const;
};

struct EigOptions {
    double hermiticity_tol = 1e-12;
    // off-diagonal Frobenius mass below off_tol * ||M||_F stops the sweep loop
    double off_tol = 1e-14;
    int max_sweeps = 100;
    bool want_vectors = false;
};

struct EigResult {
    SpectrumReport spectrum;
    Mat vectors;             // columns are eigenvectors when requested
    double asymmetry = 0.0;  // hermiticity defect of the input
    double off_final = 0.0;  // remaining off-diagonal Frobenius mass
    int sweeps = 0;
};

// Cyclic Jacobi for complex Hermitian matrices.  The input is symmetrized
// as (M + M^dag)/2; inputs whose defect exceeds hermiticity_tol are
// rejected.  Eigenvalues come back sorted descending; exact ties are
// ordered by the first differing eigenvector coordinate.  Eigenvector
// phases are fixed so the largest-magnitude coordinate is real positive.
EigResult eig_hermitian(const Mat& m, const EigOptions& opts = {},
                        const std::string& source_tag = "");

std::vector<double> eigenvalues(const Mat& m, const std::string& tag = "");

struct SpectraCompare {
    bool equal = false;
    double max_gap = 0.0;
};

// Elementwise comparison of two descending spectra; with pad = true the
// shorter list is extended with zeros.
SpectraCompare spectra_equal(const SpectrumReport& a, const SpectrumReport& b,
                             double tol, bool pad);

// -sum lambda log2 lambda over a spectrum of a unit-trace PSD matrix.
double von_neumann_entropy_bits(const SpectrumReport& values);

} // namespace fermred

#endif
