#include "fermred/fuzz.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "fermred/state_io.hpp"

namespace fermred {

std::string format_record_line(std::uint64_t seed, int n, int p, Ensemble e, double max_gap,
                               Verdict v) {
    std::ostringstream os;
    os << seed << ' ' << n << ' ' << p << ' ' << to_string(e) << ' '
       << format_double(max_gap) << ' ' << to_string(v);
    return os.str();
}

TrialPlan plan_trial(const FuzzParams& params, std::uint64_t index) {
    TrialPlan plan;
    plan.seed = trial_seed(params.seed, index);
    Rng rng(plan.seed);
    // a fixed p narrows the mode range so p <= n always holds
    const int n_lo = std::max(params.n_min, params.p > 0 ? params.p : params.n_min);
    const int span = params.n_max - n_lo + 1;
    plan.n = n_lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(span)));
    const int drawn =
        1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(plan.n)));
    plan.p = params.p > 0 ? params.p : drawn;
    return plan;
}

FockVector sample_trial_state(const TrialPlan& plan, Ensemble e) {
    // planning consumes two draws (n, p); skip them so the state stream is
    // aligned
    Rng rng(plan.seed);
    rng.next_u64();
    rng.next_u64();
    switch (e) {
    case Ensemble::General:
        return sample_general(plan.n, rng);
    case Ensemble::Ssr:
        return sample_parity(plan.n, rng.next_below(2) == 0, rng);
    case Ensemble::FixedN: {
        const int N = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(plan.n)));
        return sample_fixed_n(plan.n, N, rng);
    }
    }
    throw std::logic_error("unknown ensemble");
}

int default_thread_count() {
    if (const char* env = std::getenv("FERMRED_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

namespace {

// Count and validate already-recorded trials; returns the number of valid
// leading lines.
std::uint64_t validate_record_prefix(const FuzzParams& params) {
    std::ifstream in(params.record_path);
    if (!in) return 0;
    std::uint64_t index = 0;
    std::uint64_t offset = 0;
    std::string line;
    while (std::getline(in, line)) {
        const std::uint64_t line_offset = offset;
        offset += line.size() + 1;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t seed = 0;
        int n = 0, p = 0;
        std::string ens, verdict;
        double gap = 0.0;
        if (!(ls >> seed >> n >> p >> ens >> gap >> verdict))
            throw FuzzRecordError(line_offset, "corrupt record line at byte offset " +
                                                   std::to_string(line_offset));
        if (index >= params.trials)
            throw FuzzRecordError(line_offset,
                                  "record file holds more trials than the campaign");
        const TrialPlan plan = plan_trial(params, index);
        if (seed != plan.seed || n != plan.n || p != plan.p ||
            ens != to_string(params.ensemble))
            throw FuzzRecordError(line_offset,
                                  "record line " + std::to_string(index) +
                                      " does not match the campaign plan (byte offset " +
                                      std::to_string(line_offset) + ")");
        ++index;
    }
    return index;
}

void absorb(FuzzSummary& sum, std::uint64_t index, const TrialPlan& plan, double gap,
            Verdict v) {
    switch (v) {
    case Verdict::Agree: ++sum.agree; break;
    case Verdict::Disagree: ++sum.disagree; break;
    case Verdict::Inconclusive: ++sum.inconclusive; break;
    }
    sum.worst_gap = std::max(sum.worst_gap, gap);
    if (v == Verdict::Disagree && !sum.has_first_disagree) {
        sum.has_first_disagree = true;
        sum.first_disagree_index = index;
        sum.first_disagree_seed = plan.seed;
        sum.first_disagree_n = plan.n;
        sum.first_disagree_p = plan.p;
        sum.first_disagree_gap = gap;
    }
}

} // namespace

FuzzSummary run_fuzz_campaign(const FuzzParams& params,
                              const std::function<void(std::uint64_t, std::uint64_t)>& progress) {
    if (params.n_min < 1 || params.n_max < params.n_min)
        throw std::invalid_argument("invalid fuzz mode range");
    if (params.p > params.n_max)
        throw std::invalid_argument("fixed reduction order exceeds the largest mode count");

    FuzzSummary sum;
    std::uint64_t start = 0;

    if (!params.record_path.empty() && params.resume) {
        start = validate_record_prefix(params);
        // fold the already-recorded lines into the summary
        std::ifstream in(params.record_path);
        std::string line;
        std::uint64_t idx = 0;
        while (std::getline(in, line) && idx < start) {
            std::istringstream ls(line);
            std::uint64_t seed;
            int n, p;
            std::string ens, verdict;
            double gap;
            ls >> seed >> n >> p >> ens >> gap >> verdict;
            Verdict v = Verdict::Inconclusive;
            if (verdict == "agree") v = Verdict::Agree;
            else if (verdict == "disagree") v = Verdict::Disagree;
            absorb(sum, idx, plan_trial(params, idx), gap, v);
            ++idx;
        }
    }

    std::ofstream rec;
    if (!params.record_path.empty()) {
        rec.open(params.record_path, params.resume ? std::ios::app : std::ios::trunc);
        if (!rec)
            throw std::runtime_error("cannot open record file: " + params.record_path);
    }

    const int threads = std::max(1, params.threads);
    const std::uint64_t chunk = threads == 1 ? 64 : static_cast<std::uint64_t>(threads) * 16;

    for (std::uint64_t base = start; base < params.trials; base += chunk) {
        const std::uint64_t count = std::min<std::uint64_t>(chunk, params.trials - base);
        std::vector<ConjectureTrial> results(count);
        std::vector<TrialPlan> plans(count);
        for (std::uint64_t k = 0; k < count; ++k) plans[k] = plan_trial(params, base + k);

        std::exception_ptr worker_error;
        std::mutex error_mutex;
        auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
            try {
                for (std::uint64_t k = lo; k < hi; ++k) {
                    const FockVector psi = sample_trial_state(plans[k], params.ensemble);
                    results[k] = conjecture_trial(psi, plans[k].p, params.conjecture);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!worker_error) worker_error = std::current_exception();
            }
        };
        if (threads == 1) {
            worker(0, count);
        } else {
            std::vector<std::thread> pool;
            const std::uint64_t per = (count + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const std::uint64_t lo = std::min<std::uint64_t>(count, per * t);
                const std::uint64_t hi = std::min<std::uint64_t>(count, per * (t + 1));
                if (lo < hi) pool.emplace_back(worker, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        if (worker_error) std::rethrow_exception(worker_error);

        // single writer, trial order
        for (std::uint64_t k = 0; k < count; ++k) {
            const auto& r = results[k];
            if (rec.is_open()) {
                rec << format_record_line(plans[k].seed, r.n, r.p, params.ensemble, r.max_gap,
                                          r.verdict)
                    << '\n';
            }
            absorb(sum, base + k, plans[k], r.max_gap, r.verdict);
            ++sum.trials_run;
        }
        if (rec.is_open()) rec.flush();
        if (progress) progress(base + count, params.trials);
    }
    sum.trials_total = params.trials;
    return sum;
}

} // namespace fermred
