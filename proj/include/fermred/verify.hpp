#ifndef FERMRED_VERIFY_HPP
#define FERMRED_VERIFY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "fermred/sample.hpp"

namespace fermred {

enum class Suite { Car, MatrixUnits, Theorem1, Theorem2, Prop4, Prop5, Pauli };

std::optional<Suite> suite_from_string(const std::string& s);
const char* to_string(Suite s);

struct SuiteParams {
    std::uint64_t trials = 100;
    int n_max = 5;
    std::uint64_t seed = 1;
    double tol = 1e-9;
};

struct SuiteResult {
    Suite suite = Suite::Car;
    bool passed = false;
    std::uint64_t trials_run = 0;
    double max_gap = 0.0;
    // first counterexample, when any
    bool has_counterexample = false;
    std::uint64_t cx_seed = 0;
    std::string cx_description;
};

SuiteResult run_suite(Suite suite, const SuiteParams& params);

// Forward-constructed purification test input: a canonical core state with
// the given block spectrum rotated by superselection-compliant block
// unitaries (applied first block last).  Exercised by the Theorem2 suite
// and the acceptance run.
FockVector forward_purification_instance(int n, int m, const std::vector<double>& lambda,
                                         Rng& rng);

// Two-mode amplitudes on the zero-criterion manifold: random moduli with
// the phase of c00 chosen so the four-amplitude product is purely
// imaginary.
std::array<cplx, 4> sample_zero_criterion_amplitudes(Rng& rng);

} // namespace fermred

#endif
