#ifndef FERMRED_FUZZ_HPP
#define FERMRED_FUZZ_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "fermred/particle_reduce.hpp"
#include "fermred/sample.hpp"

namespace fermred {

struct FuzzParams {
    int n_min = 2;
    int n_max = 4;
    int p = 0; // 0 = all (drawn per trial), otherwise fixed
    std::uint64_t trials = 1000;
    Ensemble ensemble = Ensemble::General;
    std::uint64_t seed = 1;
    std::string record_path; // empty = no record file
    bool resume = false;
    int threads = 1;
    ConjectureOptions conjecture;
};

struct FuzzSummary {
    std::uint64_t trials_run = 0;     // executed in this invocation
    std::uint64_t trials_total = 0;   // including resumed lines
    std::uint64_t agree = 0;
    std::uint64_t disagree = 0;
    std::uint64_t inconclusive = 0;
    double worst_gap = 0.0;
    bool has_first_disagree = false;
    std::uint64_t first_disagree_index = 0;
    std::uint64_t first_disagree_seed = 0;
    int first_disagree_n = 0;
    int first_disagree_p = 0;
    double first_disagree_gap = 0.0;
};

struct FuzzRecordError : std::runtime_error {
    std::uint64_t offset = 0; // byte offset of the offending line
    FuzzRecordError(std::uint64_t off, const std::string& msg)
        : std::runtime_error(msg), offset(off) {}
};

// One record line per trial: seed, n, p, ensemble, max_gap, verdict
// (space-delimited, gap printed with 17 significant digits).
std::string format_record_line(std::uint64_t seed, int n, int p, Ensemble e, double max_gap,
                               Verdict v);

// The deterministic per-trial inputs: everything is derived from
// trial_seed(params.seed, index).
struct TrialPlan {
    std::uint64_t seed = 0;
    int n = 0;
    int p = 0;
};
TrialPlan plan_trial(const FuzzParams& params, std::uint64_t index);

FockVector sample_trial_state(const TrialPlan& plan, Ensemble e);

// Runs (or resumes) a campaign.  Existing record lines are validated
// against the plan; a mismatch raises FuzzRecordError with the byte
// offset.  Disagreements never abort the campaign.
FuzzSummary run_fuzz_campaign(const FuzzParams& params,
                              const std::function<void(std::uint64_t done,
                                                       std::uint64_t total)>& progress = {});

int default_thread_count();

} // namespace fermred

#endif
