#ifndef FERMRED_FOCK_HPP
#define FERMRED_FOCK_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermred/matrix.hpp"

namespace fermred {

// Occupation-number basis over n modes, dimension 2^n.  A basis label
// J = (j_1,...,j_n) maps to the integer with j_1 as the most significant
// bit: index(J) = sum_s j_s * 2^(n-s).
constexpr int kMaxModes = 12;

inline std::size_t fock_dim(int n) { return std::size_t{1} << n; }

inline void require_mode_count(int n) {
    if (n < 1 || n > kMaxModes)
        throw std::invalid_argument("mode count must be in [1, " +
                                    std::to_string(kMaxModes) + "], got " +
                                    std::to_string(n));
}

inline void require_mode_index(int s, int n, const char* what) {
    if (s < 1 || s > n)
        throw std::invalid_argument(std::string(what) + " out of range: " +
                                    std::to_string(s) + " for n=" + std::to_string(n));
}

// Bit position of mode s (1-based) inside a basis index.
inline int mode_bitpos(int n, int s) { return n - s; }

inline std::uint32_t mode_bit(int n, int s) {
    return std::uint32_t{1} << mode_bitpos(n, s);
}

inline int occupation(std::uint32_t idx, int n, int s) {
    return (idx >> mode_bitpos(n, s)) & 1u;
}

inline int weight(std::uint32_t idx) { return std::popcount(idx); }

// Mask of all modes strictly before mode t (these carry the string phase).
inline std::uint32_t string_mask(int n, int t) {
    // modes 1..t-1 occupy bit positions n-1 down to n-t+1
    if (t <= 1) return 0;
    return ((std::uint32_t{1} << (t - 1)) - 1u) << (n - t + 1);
}

struct MultiIndex {
    int n = 0;
    std::uint32_t bits = 0; // index(J), j_1 = MSB

    int occ(int s) const { return occupation(bits, n, s); }
    int weight() const { return std::popcount(bits); }

    static MultiIndex from_index(int n, std::uint32_t idx) { return MultiIndex{n, idx}; }

    // e.g. "011" with j_1 first
    std::string bitstring() const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int k = 1; k <= n; ++k)
            if (occ(k)) s[static_cast<std::size_t>(k - 1)] = '1';
        return s;
    }
};

struct FockVector {
    int n = 0;
    std::vector<cplx> amp; // size 2^n

    FockVector() = default;
    explicit FockVector(int modes) : n(modes), amp(fock_dim(modes), cplx(0.0, 0.0)) {
        require_mode_count(modes);
    }

    std::size_t dim() const { return amp.size(); }

    double norm2() const {
        double s = 0.0;
        for (const auto& v : amp) s += std::norm(v);
        return s;
    }

    void normalize() {
        double s = std::sqrt(norm2());
        if (s == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
        for (auto& v : amp) v /= s;
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(norm2() - 1.0) <= tol; }
};

inline cplx inner(const FockVector& a, const FockVector& b) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.amp.size(); ++k) s += std::conj(a.amp[k]) * b.amp[k];
    return s;
}

// One ladder factor.  Vacancy = a_s a_s^dag (projector onto j_s = 0),
// Occupy = a_s^dag a_s.  Vacancy/Occupy are the diagonal factors that
// appear in matrix-unit products.
enum class Ladder { Create, Annihilate, Vacancy, Occupy };

struct LadderOp {
    int mode = 1;
    Ladder kind = Ladder::Create;
};

// Action of one factor on a basis state: survives with sign +-1 or dies.
struct BasisImage {
    std::uint32_t idx = 0;
    int sign = 1;
    bool alive = true;
};

// a_t^dag |J> = (-1)^(j_1+...+j_{t-1}) |J + e_t> when j_t = 0, else 0;
// a_t is its conjugate.
inline BasisImage apply_ladder_basis(std::uint32_t idx, int n, const LadderOp& op) {
    const std::uint32_t bit = mode_bit(n, op.mode);
    const bool occ = (idx & bit) != 0;
    switch (op.kind) {
    case Ladder::Create: {
        if (occ) return {0, 1, false};
        const int ph = std::popcount(idx & string_mask(n, op.mode)) & 1;
        return {idx | bit, ph ? -1 : 1, true};
    }
    case Ladder::Annihilate: {
        if (!occ) return {0, 1, false};
        const int ph = std::popcount(idx & string_mask(n, op.mode)) & 1;
        return {idx & ~bit, ph ? -1 : 1, true};
    }
    case Ladder::Vacancy:
        return occ ? BasisImage{0, 1, false} : BasisImage{idx, 1, true};
    case Ladder::Occupy:
        return occ ? BasisImage{idx, 1, true} : BasisImage{0, 1, false};
    }
    return {0, 1, false};
}

// Apply a single ladder factor to a state (sparse, O(2^n)).
FockVector apply_ladder(const FockVector& v, const LadderOp& op);

// Apply an ordered product op[0] op[1] ... op[k-1] to a state; the
// rightmost factor op[k-1] acts first.
FockVector apply_monomial(const FockVector& v, const std::vector<LadderOp>& ops);

// Image of a single basis state under the ordered product (rightmost first).
BasisImage monomial_on_basis(std::uint32_t idx, int n, const std::vector<LadderOp>& ops);

// Dense matrices of the generators in the occupation basis; entries are
// exact 0/+-1.
Mat creation_op(int t, int n);
Mat annihilation_op(int t, int n);

// Diagonal (-1)^(sum of occupations over `subset`).  subset = {1..m} is
// the block parity operator used throughout.
Mat parity_operator(const std::vector<int>& subset, int n);

// Anticommutator checks over all mode pairs; deviations are exactly zero
// for the integer-exact matrices above.
struct CarReport {
    int n = 0;
    double max_dev_mixed = 0.0; // a_s a_t^dag + a_t^dag a_s - delta_st I
    double max_dev_same = 0.0;  // a_s a_t + a_t a_s
    bool exact() const { return max_dev_mixed == 0.0 && max_dev_same == 0.0; }
};
CarReport verify_car(int n);

// Fermionic swap of adjacent modes s, s+1: exchanges occupations and
// flips the sign on doubly occupied pairs.  Unitary involution.
FockVector mode_swap(const FockVector& v, int s);

// Apply a full mode relabeling built from adjacent swaps.  perm[s-1] is the
// new position of mode s; the resulting unitary P satisfies
// P a_s P^dag = a_{perm(s)}.
FockVector apply_mode_permutation(const FockVector& v, const std::vector<int>& perm);

// The same relabeling as a dense unitary (for tests and operator transport).
Mat mode_permutation_unitary(const std::vector<int>& perm, int n);

// Permutation sending the modes in `subset` (kept in the given order) to the
// front, preserving the relative order of the rest.
std::vector<int> front_permutation(const std::vector<int>& subset, int n);

bool is_permutation(const std::vector<int>& perm, int n);

} // namespace fermred

#endif
