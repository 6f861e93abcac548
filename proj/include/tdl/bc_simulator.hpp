#pragma once

// Product-uniform simulation of the events U_l = {det(I - h_l) = 0}: one
// independent uniform draw h_l per prime l and trial. Exact per-l
// probabilities come from group enumeration.

#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tdl/group_models.hpp"

namespace tdl {

using BigRational = boost::multiprecision::cpp_rational;

struct EventModel {
    u64 ell = 0;
    EventTarget target;
    BigRational p_exact;
};

/// count_eigen1 / order by enumeration. For the full GL(2) model beyond the
/// budget the class-census count is used instead; anything else throws TooLarge.
BigRational exact_event_prob(const EventTarget& target, const Budget& budget = {});
EventModel make_event_model(const EventTarget& target, const Budget& budget = {});

struct EllStats {
    u64 ell = 0;
    BigRational p_exact;
    u64 hits = 0;
    double empirical_freq = 0.0;
};

struct TrialReport {
    u64 seed = 0;
    u64 trials = 0;
    std::vector<EllStats> per_ell;
    /// success_counts[k] = number of trials in which exactly k events occurred
    std::vector<u64> success_counts;
    BigRational expected_sum;
    BigRational harmonic_sum;
    /// joint[i][j] (i < j) = trials where the events for per_ell[i] and per_ell[j] both occurred
    std::vector<std::vector<u64>> joint;

    double mean_successes() const;
};

/// Folds per-trial event vectors into a TrialReport; merge() is associative.
class TrialAccumulator {
public:
    explicit TrialAccumulator(std::vector<u64> ells);

    void add_trial(std::span<const bool> events);
    void merge(const TrialAccumulator& other);

    /// probabilities are copied from `models` when given (same order as ells)
    TrialReport finish(u64 seed, std::span<const EventModel> models = {}) const;

private:
    std::vector<u64> ells_;
    u64 trials_ = 0;
    std::vector<u64> hits_;
    std::vector<u64> histogram_;
    std::vector<std::vector<u64>> joint_;
};

/// Deterministic given (models, trials, seed); the stream for prime l in trial
/// t is keyed by (seed, l, t), so the result does not depend on `jobs`.
TrialReport run_bc_trials(std::span<const EventModel> models, u64 trials, u64 seed, unsigned jobs = 1);

struct ChiSquare {
    bool degenerate = false;
    /// unset when the table is degenerate (a marginal is 0 or the full count)
    std::optional<double> statistic;
    double min_expected = 0.0;
    u64 table[2][2] = {{0, 0}, {0, 0}};
};

/// 0.999 quantile of chi-square with one degree of freedom.
inline constexpr double kChiSquare999 = 10.827566170662733;

/// Pearson statistic of the 2x2 table (event at l1) x (event at l2). Throws
/// UnknownPrime when either prime is absent from the report.
ChiSquare independence_chi_square(const TrialReport& report, u64 l1, u64 l2);

struct DivergencePoint {
    u64 ell = 0;
    BigRational sum_p;
    BigRational sum_inv_ell;
};

/// Partial sums of p_exact and of 1/l along models (which must be ordered by l).
std::vector<DivergencePoint> divergence_profile(std::span<const EventModel> models);

} // namespace tdl
