#ifndef FERMRED_SAMPLE_HPP
#define FERMRED_SAMPLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermred/fock.hpp"
#include "fermred/matrix.hpp"

namespace fermred {

// splitmix64 stream; hand-rolled so the same seed reproduces the same
// amplitudes on every platform and standard library.
struct Rng {
    std::uint64_t state = 0x9e3779b97f4a7c15ull;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    // standard normal via Box-Muller
    double next_gauss();

    cplx next_cgauss() { return cplx(next_gauss(), next_gauss()); }

private:
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Deterministic per-trial seed derived from a campaign seed.
std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t trial_index);

enum class Ensemble { General, Ssr, FixedN };

const char* to_string(Ensemble e);
std::optional<Ensemble> ensemble_from_string(const std::string& s);

// Uniform on the unit sphere of C^(2^n).
FockVector sample_general(int n, Rng& rng);

// Parity-restricted: oppose-parity amplitudes zeroed, renormalized.
FockVector sample_parity(int n, bool even, Rng& rng);

// Support on weight-N labels only.
FockVector sample_fixed_n(int n, int N, Rng& rng);

// Haar-distributed unitary of dimension d (Gram-Schmidt on a Gaussian
// matrix, deterministic).
Mat sample_unitary(std::size_t d, Rng& rng);

// Unitary on 2^k occupation labels whose columns carry definite parity:
// either parity-preserving on both sectors or parity-flipping (the
// superselection-compliant local rotations).
Mat sample_graded_unitary(int k, bool flip, Rng& rng);

// Probability vector of given size; min_gap > 0 forces pairwise-distinct
// entries (resampled until distinct), used for simple-spectrum inputs.
std::vector<double> sample_spectrum(std::size_t size, Rng& rng, double min_gap = 0.0);

} // namespace fermred

#endif
