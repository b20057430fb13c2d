#ifndef FERMRED_MODE_REDUCE_HPP
#define FERMRED_MODE_REDUCE_HPP

#include <array>
#include <vector>

#include "fermred/density.hpp"
#include "fermred/fock.hpp"
#include "fermred/matrix.hpp"
#include "fermred/spectral.hpp"

namespace fermred {

struct Bipartition {
    int m = 1; // size of the first block after relabeling
    int n = 2;
    std::vector<int> permutation; // optional relabeling applied first; empty = identity

    void validate() const;
};

enum class Block { First, Second };

// Restriction of |psi><psi| to the subalgebra generated by one block of
// modes.  Entry (J,K) is the average of the block matrix unit A_KJ, each
// evaluated as a full-space ladder product (string phases included); this
// is not a partial trace of the total density matrix.
DensityMatrix reduce_modes(const FockVector& psi, const Bipartition& part, Block block);

struct EquispectralResult {
    bool equal = false;
    double max_gap = 0.0;
    SpectrumReport first;
    SpectrumReport second;
};

EquispectralResult equispectral(const FockVector& psi, const Bipartition& part, double tol);

// Re(c00 c11 conj(c01) conj(c10)); zero iff the two-mode state has
// matching reduced spectra.
double two_mode_criterion(const std::array<cplx, 4>& c);

struct TensorEmbed {
    Mat coeffs; // 2^m x 2^(n-m) coefficient matrix under the relabeling isometry
    Mat omega1; // conventional partial trace over the second factor
    Mat omega2; // conventional partial trace over the first factor
};

// The basis-relabeling isometry onto H_m (x) H_(n-m), exposing ordinary
// Schmidt-based partial traces for comparison against the subalgebra
// reductions.
TensorEmbed tensor_embed(const FockVector& psi, int m);

// phi = sum_t sqrt(lambda_t) |0..0 bin(t) bin(t)>; requires m >= n-m and
// lambda of size 2^(n-m) summing to one.
FockVector canonical_ssr_purification(const std::vector<double>& lambda,
                                      const Bipartition& part);

// Unitary on the full space implementing a rotation of one block's
// occupation labels: V (x) I for the first block, and the parity-twisted
// embedding for the second.
Mat embed_block_unitary(const Mat& v, Block block, int m, int n);

// Same element assembled from block matrix units (slow oracle).
Mat embed_block_unitary_from_units(const Mat& v, Block block, int m, int n);

struct PurificationResult {
    FockVector phi;            // superselection-compliant core state
    Mat u1, u2;                // block unitaries on the full space
    FockVector reconstructed;  // U2 U1 |phi>
    std::vector<double> lambda;
    double fidelity = 0.0;     // |<psi|U2 U1 phi>|
    double marginal_gap1 = 0.0;
    double marginal_gap2 = 0.0;
    bool simple_spectrum = false;
    bool recovered = false;
    bool used_fallback = false;    // eigenbasis pairing instead of column readoff
    std::vector<int> relabeling;   // mode permutation applied before the construction
};

struct ReconstructOptions {
    double tol = 1e-9;
    double gap_threshold = 1e-8;  // below this, spectra count as degenerate
    double zero_threshold = 1e-10;
};

// Constructive purification: diagonalize the second marginal, transport the
// state by the inverse block rotation, and read the first-block frame off
// the columns of the transported coefficient matrix.  Falls back to
// eigenbasis pairing when the columns fail to be orthogonal.
PurificationResult reconstruct_locals(const FockVector& psi, const Bipartition& part,
                                      const ReconstructOptions& opts = {});

struct EntropyReport {
    double s1_bits = 0.0;
    double s2_bits = 0.0;
    double violation_bits = 0.0; // |S1 - S2|; nonzero flags an Araki-Lieb violation
};

EntropyReport entropy_report(const FockVector& psi, const Bipartition& part);

} // namespace fermred

#endif
