#include "fermred/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermred {

double Rng::next_gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    do {
        u = next_double();
    } while (u <= 0.0);
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
}

std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t trial_index) {
    Rng mix(campaign_seed ^ (0xd1b54a32d192ed03ull * (trial_index + 1)));
    return mix.next_u64();
}

const char* to_string(Ensemble e) {
    switch (e) {
    case Ensemble::General: return "general";
    case Ensemble::Ssr: return "ssr";
    case Ensemble::FixedN: return "fixed-N";
    }
    return "?";
}

std::optional<Ensemble> ensemble_from_string(const std::string& s) {
    if (s == "general") return Ensemble::General;
    if (s == "ssr") return Ensemble::Ssr;
    if (s == "fixed-N" || s == "fixed-n" || s == "fixedN") return Ensemble::FixedN;
    return std::nullopt;
}

FockVector sample_general(int n, Rng& rng) {
    FockVector v(n);
    for (auto& a : v.amp) a = rng.next_cgauss();
    v.normalize();
    return v;
}

FockVector sample_parity(int n, bool even, Rng& rng) {
    FockVector v(n);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const bool w_even = (weight(static_cast<std::uint32_t>(i)) % 2) == 0;
        if (w_even != even) continue;
        v.amp[i] = rng.next_cgauss();
        norm2 += std::norm(v.amp[i]);
    }
    if (norm2 == 0.0) return sample_parity(n, even, rng);
    v.normalize();
    return v;
}

FockVector sample_fixed_n(int n, int N, Rng& rng) {
    if (N < 0 || N > n)
        throw std::invalid_argument("fixed-N particle number out of range: N=" +
                                    std::to_string(N) + ", n=" + std::to_string(n));
    FockVector v(n);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (weight(static_cast<std::uint32_t>(i)) != N) continue;
        v.amp[i] = rng.next_cgauss();
        norm2 += std::norm(v.amp[i]);
    }
    if (norm2 == 0.0) return sample_fixed_n(n, N, rng);
    v.normalize();
    return v;
}

Mat sample_unitary(std::size_t d, Rng& rng) {
    Mat g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.next_cgauss();
    // modified Gram-Schmidt on columns
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < d; ++i) proj += std::conj(g(i, k)) * g(i, j);
            for (std::size_t i = 0; i < d; ++i) g(i, j) -= proj * g(i, k);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < d; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) return sample_unitary(d, rng);
        for (std::size_t i = 0; i < d; ++i) g(i, j) /= nrm;
    }
    return g;
}

Mat sample_graded_unitary(int k, bool flip, Rng& rng) {
    const std::size_t d = fock_dim(k);
    std::vector<std::size_t> even_idx, odd_idx;
    for (std::size_t i = 0; i < d; ++i)
        ((weight(static_cast<std::uint32_t>(i)) % 2 == 0) ? even_idx : odd_idx).push_back(i);
    Mat u(d, d);
    if (!flip) {
        const Mat ue = sample_unitary(even_idx.size(), rng);
        const Mat uo = sample_unitary(odd_idx.size(), rng);
        for (std::size_t c = 0; c < even_idx.size(); ++c)
            for (std::size_t r = 0; r < even_idx.size(); ++r)
                u(even_idx[r], even_idx[c]) = ue(r, c);
        for (std::size_t c = 0; c < odd_idx.size(); ++c)
            for (std::size_t r = 0; r < odd_idx.size(); ++r)
                u(odd_idx[r], odd_idx[c]) = uo(r, c);
    } else {
        if (even_idx.size() != odd_idx.size())
            throw std::invalid_argument("parity-flipping unitary needs equal sector sizes");
        const Mat ueo = sample_unitary(even_idx.size(), rng); // even columns -> odd sector
        const Mat uoe = sample_unitary(odd_idx.size(), rng);
        for (std::size_t c = 0; c < even_idx.size(); ++c)
            for (std::size_t r = 0; r < odd_idx.size(); ++r)
                u(odd_idx[r], even_idx[c]) = ueo(r, c);
        for (std::size_t c = 0; c < odd_idx.size(); ++c)
            for (std::size_t r = 0; r < even_idx.size(); ++r)
                u(even_idx[r], odd_idx[c]) = uoe(r, c);
    }
    return u;
}

std::vector<double> sample_spectrum(std::size_t size, Rng& rng, double min_gap) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> v(size);
        double sum = 0.0;
        for (auto& x : v) {
            const double g = rng.next_gauss();
            x = g * g;
            sum += x;
        }
        for (auto& x : v) x /= sum;
        std::sort(v.rbegin(), v.rend());
        if (min_gap > 0.0) {
            bool ok = true;
            for (std::size_t i = 0; i + 1 < size; ++i)
                if (v[i] - v[i + 1] < min_gap) ok = false;
            if (!ok) continue;
        }
        return v;
    }
    throw std::runtime_error("could not sample a spectrum with the requested gap");
}

} // namespace fermred
