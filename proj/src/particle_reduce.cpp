#include "fermred/particle_reduce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermred {

std::vector<std::uint32_t> mode_tuples_colex(int n, int p) {
    require_mode_count(n);
    if (p < 0 || p > n) throw std::invalid_argument("tuple size out of range");
    std::vector<std::uint32_t> tuples;
    // masks over mode numbers: bit (s-1) set means mode s is in the tuple
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask)
        if (std::popcount(mask) == p) tuples.push_back(mask);
    std::sort(tuples.begin(), tuples.end(), [](std::uint32_t a, std::uint32_t b) {
        // colex: compare the largest differing element
        const std::uint32_t diff = a ^ b;
        if (diff == 0) return false;
        const int hi = 31 - std::countl_zero(diff);
        return ((b >> hi) & 1u) != 0;
    });
    return tuples;
}

namespace {

std::vector<int> tuple_modes(std::uint32_t mask) {
    std::vector<int> modes;
    for (int s = 1; mask; ++s, mask >>= 1)
        if (mask & 1u) modes.push_back(s);
    return modes;
}

// a_{s1}^+ ... a_{sp}^+ a_{tp} ... a_{t1}
std::vector<LadderOp> rdm_entry_ops(const std::vector<int>& s, const std::vector<int>& t) {
    std::vector<LadderOp> ops;
    ops.reserve(s.size() + t.size());
    for (int mode : s) ops.push_back({mode, Ladder::Create});
    for (auto it = t.rbegin(); it != t.rend(); ++it) ops.push_back({*it, Ladder::Annihilate});
    return ops;
}

// a_{t1}^+ ... a_{tp}^+ a_{sp} ... a_{s1} times vacancy projectors on the
// modes outside s and t
std::vector<LadderOp> rdm_term_ops(const std::vector<int>& s, const std::vector<int>& t,
                                   std::uint32_t smask, std::uint32_t tmask, int n) {
    std::vector<LadderOp> ops;
    for (int mode : t) ops.push_back({mode, Ladder::Create});
    for (auto it = s.rbegin(); it != s.rend(); ++it) ops.push_back({*it, Ladder::Annihilate});
    const std::uint32_t covered = smask | tmask;
    for (int mode = 1; mode <= n; ++mode)
        if (!(covered & (std::uint32_t{1} << (mode - 1)))) ops.push_back({mode, Ladder::Vacancy});
    return ops;
}

std::uint32_t tuple_to_basis_index(std::uint32_t mask, int n) {
    std::uint32_t idx = 0;
    for (int s = 1; s <= n; ++s)
        if (mask & (std::uint32_t{1} << (s - 1))) idx |= mode_bit(n, s);
    return idx;
}

} // namespace

PRdmMatrix rdm_matrix(const FockVector& psi, int p) {
    require_mode_count(psi.n);
    if (p < 1 || p > psi.n)
        throw std::invalid_argument("particle reduction order out of range: p=" +
                                    std::to_string(p));
    if (!psi.is_normalized())
        throw std::invalid_argument("rdm_matrix needs a normalized state");
    PRdmMatrix out;
    out.n = psi.n;
    out.p = p;
    out.tuples = mode_tuples_colex(psi.n, p);
    const std::size_t d = out.tuples.size();
    out.m = Mat(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto s = tuple_modes(out.tuples[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const auto t = tuple_modes(out.tuples[j]);
            out.m(i, j) = inner(psi, apply_monomial(psi, rdm_entry_ops(s, t)));
        }
    }
    return out;
}

Mat PRdmMatrix::normalized() const {
    const double tr = trace_real();
    if (tr <= 1e-10) throw std::invalid_argument("cannot normalize a traceless reduction");
    Mat copy = m;
    copy *= cplx(1.0 / tr, 0.0);
    return copy;
}

Mat rdm_operator(const FockVector& psi, int p) {
    const PRdmMatrix lam = rdm_matrix(psi, p);
    const std::size_t dtup = lam.tuples.size();
    const std::size_t d = fock_dim(psi.n);
    Mat out(d, d);
    for (std::size_t i = 0; i < dtup; ++i) {
        const auto s = tuple_modes(lam.tuples[i]);
        const std::uint32_t sidx = tuple_to_basis_index(lam.tuples[i], psi.n);
        for (std::size_t j = 0; j < dtup; ++j) {
            const cplx c = lam.m(i, j);
            if (c == cplx(0.0, 0.0)) continue;
            const auto t = tuple_modes(lam.tuples[j]);
            const auto ops = rdm_term_ops(s, t, lam.tuples[i], lam.tuples[j], psi.n);
            // the term annihilates every basis state except |s-tuple>
            const BasisImage im = monomial_on_basis(sidx, psi.n, ops);
            if (im.alive) out(im.idx, sidx) += (im.sign < 0 ? -c : c);
        }
    }
    return out;
}

Mat phi_map(const Mat& rho, int n) {
    if (!rho.square() || rho.rows() != fock_dim(n))
        throw std::invalid_argument("phi_map dimension mismatch");
    const std::size_t d = rho.rows();
    Mat out(d, d);
    for (int j = 1; j <= n; ++j) {
        const std::uint32_t bit = mode_bit(n, j);
        const std::uint32_t smask = string_mask(n, j);
        for (std::size_t r = 0; r < d; ++r) {
            if (!(r & bit)) continue;
            const int sr = std::popcount(static_cast<std::uint32_t>(r) & smask) & 1 ? -1 : 1;
            const std::size_t r2 = r & ~static_cast<std::size_t>(bit);
            for (std::size_t c = 0; c < d; ++c) {
                if (!(c & bit)) continue;
                const cplx v = rho(r, c);
                if (v == cplx(0.0, 0.0)) continue;
                const int sc =
                    std::popcount(static_cast<std::uint32_t>(c) & smask) & 1 ? -1 : 1;
                out(r2, c & ~static_cast<std::size_t>(bit)) +=
                    static_cast<double>(sr * sc) * v;
            }
        }
    }
    return out;
}

Mat phi_pow(const Mat& rho, int n, int p) {
    if (p < 0) throw std::invalid_argument("phi_pow needs p >= 0");
    Mat out = rho;
    for (int k = 0; k < p; ++k) out = phi_map(out, n);
    return out;
}

std::uint64_t factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

int fixed_particle_number(const FockVector& psi, double zero_threshold) {
    int N = -1;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (std::abs(psi.amp[i]) <= zero_threshold) continue;
        const int w = weight(static_cast<std::uint32_t>(i));
        if (N < 0) N = w;
        else if (N != w)
            throw std::domain_error("state does not have a fixed particle number");
    }
    if (N < 0) throw std::domain_error("state has empty support");
    return N;
}

FixedNReport check_fixed_n_reduction(const FockVector& psi, int p, double tol) {
    FixedNReport rep;
    rep.n = psi.n;
    rep.N = fixed_particle_number(psi);
    rep.p = p;
    if (p < 1 || p > rep.N)
        throw std::invalid_argument("need 1 <= p <= N for the fixed-N comparison");

    const DensityMatrix rho = lambda_from_state(psi);
    Mat lhs = phi_pow(rho.m, psi.n, rep.N - p);
    rep.factor = static_cast<double>(factorial(rep.N - p));
    lhs *= cplx(1.0 / rep.factor, 0.0);
    const Mat rhs = rdm_operator(psi, p);
    rep.max_gap = Mat::max_abs_diff(lhs, rhs);
    rep.pass = rep.max_gap <= tol;
    return rep;
}

std::vector<double> natural_occupations(const FockVector& psi) {
    const PRdmMatrix one = rdm_matrix(psi, 1);
    auto vals = eigenvalues(one.m, "1-rdm");
    for (double v : vals)
        if (v < -1e-10 || v > 1.0 + 1e-10)
            throw std::runtime_error("natural occupation outside [0,1]: " + std::to_string(v));
    return vals;
}

PauliReport pauli_constraint_check(const FockVector& psi, double tol) {
    PauliReport rep;
    rep.parity = parity_classify(psi);
    if (rep.parity == ParityClass::Mixed)
        throw std::domain_error("pauli constraint check needs a parity-definite state");
    rep.occupations = natural_occupations(psi);
    const auto& occ = rep.occupations;
    if (psi.n == 2 && rep.parity == ParityClass::Even) {
        rep.asserted = true;
        rep.pass = std::abs(occ[0] - occ[1]) <= tol;
        rep.description = "even 2-mode: lambda1 = lambda2";
    } else if (psi.n == 2 && rep.parity == ParityClass::Odd) {
        rep.asserted = true;
        rep.pass = occ[1] <= tol;
        rep.description = "odd 2-mode: lambda2 = 0";
    } else if (psi.n == 3 && rep.parity == ParityClass::Odd) {
        rep.asserted = true;
        rep.pass = std::abs(occ[0] - 1.0) <= tol && std::abs(occ[1] - occ[2]) <= tol;
        rep.description = "odd 3-mode: lambda1 = 1 and lambda2 = lambda3";
    } else {
        rep.asserted = false;
        rep.description = "no constraint asserted for this shape";
    }
    return rep;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Agree: return "agree";
    case Verdict::Disagree: return "disagree";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

ConjectureTrial run_trial(const FockVector& psi, int p, const ConjectureOptions& opts,
                          const EigOptions& eopts) {
    ConjectureTrial t;
    t.n = psi.n;
    t.p = p;
    t.scale = static_cast<double>(factorial(p));

    // nonzero block of the reduced operator is the tuple matrix itself;
    // diagonalize the compact form
    const PRdmMatrix lam = rdm_matrix(psi, p);
    t.spectrum_rdm = eig_hermitian(lam.m, eopts, "p-rdm").spectrum;

    const DensityMatrix rho = lambda_from_state(psi);
    Mat mapped = phi_pow(rho.m, psi.n, p);
    mapped *= cplx(1.0 / t.scale, 0.0);
    t.spectrum_phi = eig_hermitian(mapped, eopts, "phi^p").spectrum;

    const SpectrumReport a = t.spectrum_rdm.stripped(opts.zero_threshold);
    const SpectrumReport b = t.spectrum_phi.stripped(opts.zero_threshold);
    t.max_gap = spectra_equal(a, b, opts.agree_tol, true).max_gap;
    if (t.max_gap <= opts.agree_tol) t.verdict = Verdict::Agree;
    else if (t.max_gap >= opts.disagree_floor) t.verdict = Verdict::Disagree;
    else t.verdict = Verdict::Inconclusive;
    return t;
}

} // namespace

ConjectureTrial conjecture_trial(const FockVector& psi, int p, const ConjectureOptions& opts) {
    if (!psi.is_normalized())
        throw std::invalid_argument("conjecture_trial needs a normalized state");
    ConjectureTrial t = run_trial(psi, p, opts, {});
    if (t.verdict == Verdict::Inconclusive) {
        EigOptions tight;
        tight.off_tol = 1e-16;
        tight.max_sweeps = 200;
        t = run_trial(psi, p, opts, tight);
        t.retried = true;
    }
    return t;
}

} // namespace fermred
