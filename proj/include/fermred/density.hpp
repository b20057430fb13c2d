#ifndef FERMRED_DENSITY_HPP
#define FERMRED_DENSITY_HPP

#include <string>
#include <vector>

#include "fermred/fock.hpp"
#include "fermred/matrix.hpp"

namespace fermred {

enum class DensityTag { Total, ModeReduced, PRdm };

struct DensityMatrix {
    Mat m;
    DensityTag tag = DensityTag::Total;

    std::size_t dim() const { return m.rows(); }

    // Hermitian within 1e-12, PSD within -1e-10, unit trace within 1e-12
    // (trace unconstrained for the particle-reduced tag).  Throws naming
    // the violated invariant.
    void validate() const;
};

enum class ParityClass { Even, Odd, Mixed };

const char* to_string(ParityClass c);

// The ordered product of per-mode factors realizing |J><K|: daggered
// factors over modes 1..n (creator where j_s = 1, vacancy projector where
// j_s = 0), then the plain factors over modes n..1.
std::vector<LadderOp> matrix_unit_factors(const MultiIndex& J, const MultiIndex& K);

// A_JK built by multiplying the factor chain column by column; equals the
// elementary matrix |J><K| exactly, which the tests assert rather than
// assume.
Mat matrix_unit(const MultiIndex& J, const MultiIndex& K);

// sum_{J,K} lambda_JK A_JK, the honest reassembly of a density matrix as
// an operator in the occupation basis.
Mat operator_from_lambda(const DensityMatrix& lambda);

// Pure-state density matrix: entry (J,K) is the average of A_KJ, which for
// a pure state reduces to amp_J * conj(amp_K).
DensityMatrix lambda_from_state(const FockVector& psi);

// Same entries evaluated through the factor-chain products; the slow path
// that cross-checks the outer-product shortcut.
DensityMatrix lambda_from_state_monomials(const FockVector& psi);

ParityClass parity_classify(const FockVector& psi, double zero_threshold = 1e-12);

struct EvennessReport {
    bool even = false;
    double max_violation = 0.0;
    std::vector<LadderOp> worst_monomial; // empty when even
    std::size_t monomials_checked = 0;
};

// Scans odd-order monomials of distinct-mode ladder operators up to order
// 2*ceil(n/2)-1 and reports the largest |<psi| M |psi>|.
EvennessReport is_even_state(const FockVector& psi, double tol);

std::string monomial_to_string(const std::vector<LadderOp>& ops);

} // namespace fermred

#endif
