#include "fermred/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fermred/spectral.hpp"

namespace fermred {

const char* to_string(ParityClass c) {
    switch (c) {
    case ParityClass::Even: return "even";
    case ParityClass::Odd: return "odd";
    case ParityClass::Mixed: return "mixed";
    }
    return "?";
}

void DensityMatrix::validate() const {
    if (!m.square()) throw std::invalid_argument("density matrix must be square");
    const double herm = m.hermiticity_defect();
    if (herm > 1e-12)
        throw std::invalid_argument("density matrix is not Hermitian: defect " +
                                    std::to_string(herm));
    if (tag != DensityTag::PRdm) {
        const double tr = std::abs(m.trace() - cplx(1.0, 0.0));
        if (tr > 1e-12)
            throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                        std::to_string(tr));
    }
    const auto vals = eigenvalues(m);
    if (!vals.empty() && vals.back() < -1e-10)
        throw std::invalid_argument("density matrix is not PSD: min eigenvalue " +
                                    std::to_string(vals.back()));
}

std::vector<LadderOp> matrix_unit_factors(const MultiIndex& J, const MultiIndex& K) {
    if (J.n != K.n) throw std::invalid_argument("matrix unit indices over different n");
    std::vector<LadderOp> ops;
    ops.reserve(2 * static_cast<std::size_t>(J.n));
    for (int s = 1; s <= J.n; ++s)
        ops.push_back({s, J.occ(s) ? Ladder::Create : Ladder::Vacancy});
    for (int s = K.n; s >= 1; --s)
        ops.push_back({s, K.occ(s) ? Ladder::Annihilate : Ladder::Vacancy});
    return ops;
}

Mat matrix_unit(const MultiIndex& J, const MultiIndex& K) {
    const auto ops = matrix_unit_factors(J, K);
    const std::size_t d = fock_dim(J.n);
    Mat m(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        const BasisImage im = monomial_on_basis(static_cast<std::uint32_t>(col), J.n, ops);
        if (im.alive) m(im.idx, col) += static_cast<double>(im.sign);
    }
    return m;
}

Mat operator_from_lambda(const DensityMatrix& lambda) {
    lambda.validate();
    const std::size_t d = lambda.dim();
    int n = 0;
    while (fock_dim(n) < d) ++n;
    if (fock_dim(n) != d)
        throw std::invalid_argument("density matrix dimension is not a power of two");
    Mat out(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            const cplx c = lambda.m(j, k);
            if (c == cplx(0.0, 0.0)) continue;
            const Mat unit = matrix_unit(MultiIndex::from_index(n, static_cast<std::uint32_t>(j)),
                                         MultiIndex::from_index(n, static_cast<std::uint32_t>(k)));
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t cidx = 0; cidx < d; ++cidx) {
                    const cplx u = unit(r, cidx);
                    if (u != cplx(0.0, 0.0)) out(r, cidx) += c * u;
                }
        }
    return out;
}

DensityMatrix lambda_from_state(const FockVector& psi) {
    if (!psi.is_normalized())
        throw std::invalid_argument("lambda_from_state needs a normalized state");
    const std::size_t d = psi.dim();
    DensityMatrix out{Mat(d, d), DensityTag::Total};
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k)
            out.m(j, k) = psi.amp[j] * std::conj(psi.amp[k]);
    return out;
}

DensityMatrix lambda_from_state_monomials(const FockVector& psi) {
    if (!psi.is_normalized())
        throw std::invalid_argument("lambda_from_state needs a normalized state");
    const std::size_t d = psi.dim();
    DensityMatrix out{Mat(d, d), DensityTag::Total};
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            // entry (J,K) = <A_KJ>
            const auto ops =
                matrix_unit_factors(MultiIndex::from_index(psi.n, static_cast<std::uint32_t>(k)),
                                    MultiIndex::from_index(psi.n, static_cast<std::uint32_t>(j)));
            out.m(j, k) = inner(psi, apply_monomial(psi, ops));
        }
    return out;
}

ParityClass parity_classify(const FockVector& psi, double zero_threshold) {
    if (zero_threshold < 0.0) throw std::invalid_argument("zero threshold must be >= 0");
    bool any = false, even = false, odd = false;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (std::abs(psi.amp[i]) <= zero_threshold) continue;
        any = true;
        (weight(static_cast<std::uint32_t>(i)) % 2 == 0 ? even : odd) = true;
    }
    if (!any) throw std::invalid_argument("all amplitudes below the zero threshold");
    if (even && odd) return ParityClass::Mixed;
    return even ? ParityClass::Even : ParityClass::Odd;
}

namespace {

void enumerate_odd_monomials(int n, int max_order,
                             const std::function<void(const std::vector<LadderOp>&)>& visit) {
    // subsets of modes with odd size <= max_order, each mode carrying
    // either a creator or an annihilator; creators first (ascending),
    // annihilators after (descending) as the normal-order representative
    const std::uint32_t lim = std::uint32_t{1} << n;
    std::vector<int> modes;
    std::vector<LadderOp> ops;
    for (std::uint32_t set = 1; set < lim; ++set) {
        const int k = std::popcount(set);
        if (k % 2 == 0 || k > max_order) continue;
        modes.clear();
        for (int s = 1; s <= n; ++s)
            if (set & (std::uint32_t{1} << (s - 1))) modes.push_back(s);
        for (std::uint32_t pat = 0; pat < (std::uint32_t{1} << k); ++pat) {
            ops.clear();
            for (int i = 0; i < k; ++i)
                if (pat & (std::uint32_t{1} << i)) ops.push_back({modes[i], Ladder::Create});
            for (int i = k - 1; i >= 0; --i)
                if (!(pat & (std::uint32_t{1} << i)))
                    ops.push_back({modes[i], Ladder::Annihilate});
            visit(ops);
        }
    }
}

} // namespace

EvennessReport is_even_state(const FockVector& psi, double tol) {
    if (!psi.is_normalized())
        throw std::invalid_argument("is_even_state needs a normalized state");
    const int max_order = 2 * ((psi.n + 1) / 2) - 1;
    EvennessReport rep;
    enumerate_odd_monomials(psi.n, max_order, [&](const std::vector<LadderOp>& ops) {
        ++rep.monomials_checked;
        const double v = std::abs(inner(psi, apply_monomial(psi, ops)));
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst_monomial = ops;
        }
    });
    rep.even = rep.max_violation <= tol;
    if (rep.even) rep.worst_monomial.clear();
    return rep;
}

std::string monomial_to_string(const std::vector<LadderOp>& ops) {
    if (ops.empty()) return "1";
    std::string s;
    for (const auto& op : ops) {
        if (!s.empty()) s += ' ';
        s += 'a';
        switch (op.kind) {
        case Ladder::Create: s += '+'; break;
        case Ladder::Annihilate: break;
        case Ladder::Vacancy: s += "v"; break;
        case Ladder::Occupy: s += "n"; break;
        }
        s += '_' + std::to_string(op.mode);
    }
    return s;
}

} // namespace fermred
