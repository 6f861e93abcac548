#include "tdl/bc_simulator.hpp"

#include <algorithm>
#include <thread>

namespace tdl {

namespace {

bool is_full_gl2(const EventTarget& target)
{
    const GroupModelSpec* g = std::get_if<GroupModelSpec>(&target);
    if (!g)
        g = &std::get<CosetSpec>(target).group;
    // a coset of the whole group is the whole group
    return g->kind == GroupKind::GL && g->dim == 2;
}

u64 target_ell(const EventTarget& target)
{
    if (const auto* g = std::get_if<GroupModelSpec>(&target))
        return g->ell;
    return std::get<CosetSpec>(target).group.ell;
}

} // namespace

BigRational exact_event_prob(const EventTarget& target, const Budget& budget)
{
    const u64 order = target_order(target);
    u64 count = 0;
    try {
        count = count_eigen1(target, budget);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooLarge || !is_full_gl2(target))
            throw;
        count = gl2_eigen1_by_classes(target_ell(target));
    }
    return BigRational(static_cast<unsigned long long>(count), static_cast<unsigned long long>(order));
}

EventModel make_event_model(const EventTarget& target, const Budget& budget)
{
    return EventModel{target_ell(target), target, exact_event_prob(target, budget)};
}

double TrialReport::mean_successes() const
{
    if (trials == 0)
        return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < success_counts.size(); ++k)
        s += static_cast<double>(k) * static_cast<double>(success_counts[k]);
    return s / static_cast<double>(trials);
}

// --- accumulation ---------------------------------------------------------

TrialAccumulator::TrialAccumulator(std::vector<u64> ells)
    : ells_(std::move(ells)), hits_(ells_.size(), 0), histogram_(ells_.size() + 1, 0),
      joint_(ells_.size(), std::vector<u64>(ells_.size(), 0))
{
}

void TrialAccumulator::add_trial(std::span<const bool> events)
{
    if (events.size() != ells_.size())
        throw Error(ErrorCode::InvalidArgument, "event vector length does not match the prime list");
    std::size_t k = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (!events[i])
            continue;
        ++k;
        ++hits_[i];
        for (std::size_t j = i + 1; j < events.size(); ++j)
            joint_[i][j] += events[j];
    }
    ++histogram_[k];
    ++trials_;
}

void TrialAccumulator::merge(const TrialAccumulator& other)
{
    if (other.ells_ != ells_)
        throw Error(ErrorCode::InvalidArgument, "cannot merge accumulators over different primes");
    trials_ += other.trials_;
    for (std::size_t i = 0; i < hits_.size(); ++i)
        hits_[i] += other.hits_[i];
    for (std::size_t k = 0; k < histogram_.size(); ++k)
        histogram_[k] += other.histogram_[k];
    for (std::size_t i = 0; i < joint_.size(); ++i)
        for (std::size_t j = 0; j < joint_.size(); ++j)
            joint_[i][j] += other.joint_[i][j];
}

TrialReport TrialAccumulator::finish(u64 seed, std::span<const EventModel> models) const
{
    TrialReport rep;
    rep.seed = seed;
    rep.trials = trials_;
    rep.success_counts = histogram_;
    rep.joint = joint_;
    for (std::size_t i = 0; i < ells_.size(); ++i) {
        EllStats st;
        st.ell = ells_[i];
        st.hits = hits_[i];
        st.empirical_freq = trials_ ? static_cast<double>(hits_[i]) / static_cast<double>(trials_) : 0.0;
        if (i < models.size()) {
            st.p_exact = models[i].p_exact;
            rep.expected_sum += models[i].p_exact;
        }
        rep.harmonic_sum += BigRational(1, static_cast<long long>(ells_[i]));
        rep.per_ell.push_back(std::move(st));
    }
    return rep;
}

TrialReport run_bc_trials(std::span<const EventModel> models, u64 trials, u64 seed, unsigned jobs)
{
    if (trials == 0)
        throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    std::vector<u64> ells;
    for (const auto& m : models)
        ells.push_back(m.ell);

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<u64>(trials, 256))));
    std::vector<TrialAccumulator> parts(jobs, TrialAccumulator(ells));
    auto worker = [&](unsigned w) {
        // contiguous block of trials per worker; streams are keyed by trial index
        const u64 lo = trials * w / jobs;
        const u64 hi = trials * (w + 1) / jobs;
        std::unique_ptr<bool[]> events(new bool[models.size()]);
        for (u64 t = lo; t < hi; ++t) {
            for (std::size_t i = 0; i < models.size(); ++i) {
                CounterRng rng{seed, models[i].ell, t};
                events[i] = has_eigenvalue_one(sample_uniform(models[i].target, rng));
            }
            parts[w].add_trial(std::span<const bool>(events.get(), models.size()));
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(worker, w);
        for (auto& th : pool)
            th.join();
    }
    for (unsigned w = 1; w < jobs; ++w)
        parts[0].merge(parts[w]);
    return parts[0].finish(seed, models);
}

ChiSquare independence_chi_square(const TrialReport& report, u64 l1, u64 l2)
{
    auto index_of = [&](u64 ell) {
        for (std::size_t i = 0; i < report.per_ell.size(); ++i)
            if (report.per_ell[i].ell == ell)
                return i;
        throw Error(ErrorCode::UnknownPrime, "prime " + std::to_string(ell) + " is not in the report");
    };
    std::size_t i = index_of(l1), j = index_of(l2);
    if (i == j)
        throw Error(ErrorCode::InvalidArgument, "chi-square needs two distinct primes");
    const u64 both = i < j ? report.joint[i][j] : report.joint[j][i];
    const u64 n = report.trials;
    const u64 a = report.per_ell[i].hits;
    const u64 b = report.per_ell[j].hits;

    ChiSquare out;
    out.table[1][1] = both;
    out.table[1][0] = a - both;
    out.table[0][1] = b - both;
    out.table[0][0] = n - a - b + both;
    if (a == 0 || a == n || b == 0 || b == n) {
        out.degenerate = true;
        return out;
    }
    const double row[2] = {static_cast<double>(n - a), static_cast<double>(a)};
    const double col[2] = {static_cast<double>(n - b), static_cast<double>(b)};
    double stat = 0.0;
    out.min_expected = static_cast<double>(n);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const double expected = row[r] * col[c] / static_cast<double>(n);
            const double diff = static_cast<double>(out.table[r][c]) - expected;
            stat += diff * diff / expected;
            out.min_expected = std::min(out.min_expected, expected);
        }
    out.statistic = stat;
    return out;
}

std::vector<DivergencePoint> divergence_profile(std::span<const EventModel> models)
{
    std::vector<DivergencePoint> out;
    BigRational sp = 0, si = 0;
    u64 prev = 0;
    for (const auto& m : models) {
        if (m.ell < prev)
            throw Error(ErrorCode::InvalidArgument, "divergence profile needs models ordered by l");
        prev = m.ell;
        sp += m.p_exact;
        si += BigRational(1, static_cast<long long>(m.ell));
        out.push_back({m.ell, sp, si});
    }
    return out;
}

} // namespace tdl
