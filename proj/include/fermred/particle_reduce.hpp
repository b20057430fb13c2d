#ifndef FERMRED_PARTICLE_REDUCE_HPP
#define FERMRED_PARTICLE_REDUCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fermred/density.hpp"
#include "fermred/fock.hpp"
#include "fermred/matrix.hpp"
#include "fermred/spectral.hpp"

namespace fermred {

// Ordered p-tuples s_1 < ... < s_p of modes, as bitmasks, in
// colexicographic order.  The tuple order fixes the row/column indexing of
// the particle-reduced matrix.
std::vector<std::uint32_t> mode_tuples_colex(int n, int p);

struct PRdmMatrix {
    Mat m; // C(n,p) x C(n,p)
    int n = 0;
    int p = 0;
    std::vector<std::uint32_t> tuples; // basis masks, colex order

    // trace equals the expected number of occupied p-tuples; no
    // normalization factor is applied
    double trace_real() const { return m.trace().real(); }

    Mat normalized() const; // optional unit-trace copy
};

// Entry ((s),(t)) = <psi| a_{s1}^+ ... a_{sp}^+ a_{tp} ... a_{t1} |psi>.
PRdmMatrix rdm_matrix(const FockVector& psi, int p);

// The same data as an operator on the full space, supported on the
// p-particle sector.
Mat rdm_operator(const FockVector& psi, int p);

// One-particle trace-out map: sum_j a_j rho a_j^+.
Mat phi_map(const Mat& rho, int n);

// p-fold composition; p = 0 is the identity.
Mat phi_pow(const Mat& rho, int n, int p);

std::uint64_t factorial(int k);

struct FixedNReport {
    int n = 0;
    int N = 0; // particle number of the input
    int p = 0;
    double max_gap = 0.0;       // entrywise, after dividing the map side by (N-p)!
    double factor = 1.0;        // (N-p)! applied to align the two sides
    bool pass = false;
};

// Compares Phi^(N-p)(|psi><psi|) with the p-particle reduced operator for a
// fixed-N input.  Iterating the one-particle trace counts ordered removals,
// so the map side is divided by (N-p)! before the entrywise comparison.
FixedNReport check_fixed_n_reduction(const FockVector& psi, int p, double tol = 1e-12);

// Particle number of a fixed-N state; throws if the support mixes weights.
int fixed_particle_number(const FockVector& psi, double zero_threshold = 1e-12);

// Descending eigenvalues of the 1-particle reduced matrix.
std::vector<double> natural_occupations(const FockVector& psi);

struct PauliReport {
    ParityClass parity = ParityClass::Mixed;
    std::vector<double> occupations;
    bool asserted = false; // true when (n, parity) is one of the constrained cases
    bool pass = true;
    std::string description;
};

// Parity-superselected occupation-number constraints: even 2-mode states
// have equal occupations, odd 2-mode states have a vanishing second
// occupation, odd 3-mode states pin the top occupation to one and equate
// the other two.  Other shapes are reported without assertion.
PauliReport pauli_constraint_check(const FockVector& psi, double tol);

enum class Verdict { Agree, Disagree, Inconclusive };
const char* to_string(Verdict v);

struct ConjectureTrial {
    int n = 0;
    int p = 0;
    double max_gap = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    double scale = 1.0; // p! divided out of the iterated map's spectrum
    SpectrumReport spectrum_rdm;
    SpectrumReport spectrum_phi;
    bool retried = false; // recomputed with tightened eigensolver settings
};

struct ConjectureOptions {
    double agree_tol = 1e-8;
    double disagree_floor = 1e-4;
    double zero_threshold = 1e-10;
};

// Compares the nonzero spectra of the p-particle reduced operator and of
// the p-fold particle-trace map (divided by p!), zero-padded to a common
// length.  Inconclusive gaps trigger one recomputation at tightened
// eigensolver settings.
ConjectureTrial conjecture_trial(const FockVector& psi, int p,
                                 const ConjectureOptions& opts = {});

} // namespace fermred

#endif
