#include "tdl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "tdl/bc_simulator.hpp"
#include "tdl/frobenius.hpp"
#include "tdl/serialize.hpp"
#include "tdl/torus.hpp"
#include "tdl/weil_bounds.hpp"

namespace tdl {

namespace {

struct Params {
    // global
    std::string out_path;
    std::string format = "json";
    u64 seed = 1;
    std::optional<u64> budget;
    unsigned jobs = 1;

    // group-models / torus-machinery
    std::string group = "gl2";
    u64 ell = 0;
    std::vector<u64> ells;
    unsigned N = 1;
    std::vector<unsigned> Ns{1};
    std::string elements;
    std::string coset;
    u64 samples = 1;
    bool identity = false;
    bool with_union = false;
    bool split_separable = false;
    std::string matrix_B;

    // weil-bounds
    std::vector<std::string> polys;
    std::vector<u64> qs;
    int dim = -1;
    int m = 1;
    bool two_sided = false;
    std::string corpus;

    // frobenius-data
    std::optional<i64> a, b;
    u64 pmin = 3;
    u64 pmax = 100;
    u64 modulus = 1;
    u64 kappa = 2;
    u64 xmax = 0;
    u64 witness = 0;
    std::string cache;

    // bc-simulator
    u64 trials = 100'000;
};

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ')
        s.pop_back();
    return s;
}

Budget resolve_budget(const Params& p)
{
    if (p.budget)
        return Budget{*p.budget};
    if (const char* env = std::getenv("TDL_BUDGET")) {
        std::istringstream is(env);
        u64 v = 0;
        if (!(is >> v) || !is.eof())
            throw Error(ErrorCode::InvalidArgument, std::string("TDL_BUDGET is not a nonnegative integer: '") + env + "'");
        return Budget{v};
    }
    return Budget{};
}

void emit(const Params& p, std::ostream& out, const Json& j, const std::string& csv)
{
    const std::string text = p.format == "csv" ? csv : j.dump(2) + "\n";
    if (p.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(p.out_path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error(ErrorCode::Io, "cannot open " + p.out_path + " for writing");
    f << text;
    if (!f)
        throw Error(ErrorCode::Io, "write to " + p.out_path + " failed");
}

unsigned parse_dimension(const std::string& s, std::size_t prefix)
{
    const std::string digits = s.substr(prefix);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3)
        throw Error(ErrorCode::InvalidArgument, "unknown group '" + s + "' (use glN or gspN)");
    return static_cast<unsigned>(std::stoul(digits));
}

GroupModelSpec make_group(const Params& p, u64 ell, unsigned N)
{
    if (!p.elements.empty()) {
        std::ifstream in(p.elements);
        if (!in)
            throw Error(ErrorCode::Io, "cannot read " + p.elements);
        std::size_t n = 0;
        u64 file_ell = 0;
        auto mats = read_matrices(in, &n, &file_ell);
        if (ell != 0 && ell != file_ell)
            throw Error(ErrorCode::InvalidArgument, "--ell " + std::to_string(ell) + " disagrees with " + p.elements);
        return GroupModelSpec::explicit_group(ExplicitGroup(n, file_ell, std::move(mats)), static_cast<int>(n), N);
    }
    if (ell == 0)
        throw Error(ErrorCode::InvalidArgument, "--ell is required");
    std::string g = p.group;
    std::transform(g.begin(), g.end(), g.begin(), [](unsigned char c) { return std::tolower(c); });
    if (g.rfind("gsp", 0) == 0)
        return GroupModelSpec::gsp(parse_dimension(g, 3), ell, N);
    if (g.rfind("gl", 0) == 0)
        return GroupModelSpec::gl(parse_dimension(g, 2), ell, N);
    throw Error(ErrorCode::InvalidArgument, "unknown group '" + p.group + "' (use glN or gspN)");
}

FpMatrix parse_flag_matrix(const std::string& text, std::size_t n, u64 ell)
{
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    return parse_matrix(s, n, ell);
}

/// Runs f(0..count-1) on `jobs` threads; the first failure by index is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f)
{
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += jobs) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(worker, w);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// --- subcommands ----------------------------------------------------------

void run_eigen1(const Params& p, std::ostream& out)
{
    const Budget budget = resolve_budget(p);
    const GroupModelSpec g = make_group(p, p.ell, p.N);
    EventTarget target = g;
    if (!p.coset.empty())
        target = CosetSpec(g, parse_flag_matrix(p.coset, g.dim, g.ell));
    const u64 count = count_eigen1(target, budget);
    const u64 order = target_order(target);
    const BigRational prob(static_cast<unsigned long long>(count), static_cast<unsigned long long>(order));

    Json j;
    j["group"] = g.name();
    j["ell"] = g.ell;
    j["N"] = g.index_exponent;
    j["coset"] = !p.coset.empty();
    j["count"] = count;
    j["order"] = order;
    j["probability"] = rational_string(prob);
    if (g.kind == GroupKind::GL && g.dim == 2 && p.coset.empty())
        j["class_count"] = gl2_eigen1_by_classes(g.ell);
    j["meets_half_inverse_ell"] = prob >= BigRational(1, static_cast<long long>(2 * g.ell));

    std::ostringstream csv;
    csv << "group,ell,count,order,probability\n"
        << g.name() << ',' << g.ell << ',' << count << ',' << order << ',' << rational_string(prob) << '\n';
    emit(p, out, j, csv.str());
}

void run_torus_scan(const Params& p, std::ostream& out)
{
    const Budget budget = resolve_budget(p);
    if (p.ells.empty())
        throw Error(ErrorCode::InvalidArgument, "--ell is required");
    if (p.samples == 0)
        throw Error(ErrorCode::InvalidArgument, "--samples must be >= 1");
    const u64 samples = (p.identity || !p.matrix_B.empty()) ? 1 : p.samples;

    struct Task {
        u64 ell;
        unsigned N;
        u64 b_index;
    };
    std::vector<Task> tasks;
    for (u64 ell : p.ells)
        for (unsigned N : p.Ns)
            for (u64 b = 0; b < samples; ++b)
                tasks.push_back({ell, N, b});

    std::vector<std::optional<TorusScanReport>> scans(tasks.size());
    std::vector<std::optional<UnionBound>> unions(tasks.size());
    parallel_for(tasks.size(), p.jobs, [&](std::size_t i) {
        const Task& t = tasks[i];
        const GroupModelSpec spec = make_group(p, t.ell, t.N);
        const TorusDesc desc = standard_torus(spec);
        FpMatrix B = FpMatrix::identity(spec.dim, spec.ell);
        if (!p.matrix_B.empty()) {
            B = parse_flag_matrix(p.matrix_B, spec.dim, spec.ell);
        } else if (p.split_separable) {
            auto drawn = sample_split_separable(spec, t.N, p.seed, t.b_index);
            if (!drawn)
                throw Error(ErrorCode::InvalidArgument, "no B with det(x^N I - B) split separable found at l = " +
                                                            std::to_string(t.ell) + ", N = " + std::to_string(t.N));
            B = *drawn;
        } else if (!p.identity) {
            CounterRng rng{p.seed, t.ell, t.b_index};
            B = sample_uniform(spec, rng);
        }
        scans[i] = scan_W_variety(B, t.N, desc, budget);
        if (p.with_union)
            unions[i] = union_lower_bound(B, t.N, spec, budget);
    });

    Json j;
    j["group"] = make_group(p, p.ells.front(), p.Ns.front()).name();
    j["seed"] = p.seed;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << torus_csv_header() << (p.with_union ? ",exact_union,divided_estimate,disjoint" : "") << '\n';
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        Json row;
        row["b_index"] = tasks[i].b_index;
        row.update(to_json(*scans[i]));
        csv << torus_csv_row(*scans[i], tasks[i].b_index);
        if (unions[i]) {
            row["union"] = to_json(*unions[i]);
            csv << ',' << unions[i]->exact_union << ',' << unions[i]->divided_estimate << ','
                << (unions[i]->disjoint ? "true" : "false");
        }
        csv << '\n';
        rows.push_back(std::move(row));
    }
    j["scans"] = rows;

    Json irregular = Json::array();
    for (u64 ell : p.ells)
        for (unsigned N : p.Ns) {
            const auto ib = irregular_power_bound(N, standard_torus(make_group(p, ell, N)), budget);
            irregular.push_back({{"ell", ell},
                                 {"N", N},
                                 {"irregular_power_count", ib.irregular_power_count},
                                 {"bound", ib.bound},
                                 {"nonregular_count", ib.nonregular_count}});
        }
    j["irregular"] = irregular;
    emit(p, out, j, csv.str());
}

void run_weil_check(const Params& p, std::ostream& out)
{
    const Budget budget = resolve_budget(p);
    if (p.qs.empty())
        throw Error(ErrorCode::InvalidArgument, "--q is required");
    std::vector<CorpusEntry> systems;
    if (!p.corpus.empty()) {
        std::ifstream in(p.corpus);
        if (!in)
            throw Error(ErrorCode::Io, "cannot read " + p.corpus);
        systems = read_weil_corpus(in);
    }
    if (!p.polys.empty()) {
        if (p.dim < 0)
            throw Error(ErrorCode::InvalidArgument, "--dim is required with --poly");
        CorpusEntry e;
        e.name = "cli";
        e.declared_dim = p.dim;
        e.declared_m = p.m;
        for (const auto& s : p.polys)
            e.polys.push_back(parse_multipoly(s));
        systems.push_back(std::move(e));
    }
    if (systems.empty())
        throw Error(ErrorCode::InvalidArgument, "give --poly or --corpus");

    // a lone system reports TooLarge as an error; a corpus records it as skipped
    const bool single = systems.size() == 1 && p.qs.size() == 1;
    Json reports = Json::array();
    std::ostringstream csv;
    csv << "name,q,n,r,d,dim,m,count,deviation,constant,holds\n";
    bool all_hold = true;
    for (const auto& e : systems)
        for (u64 q : p.qs) {
            const PolySystem sys = e.at(q);
            Json row;
            row["name"] = e.name;
            try {
                const WeilReport r = check_weil_inequality(sys, p.two_sided, budget, p.jobs);
                row.update(to_json(sys, r));
                all_hold = all_hold && r.holds;
                csv << e.name << ',' << q << ',' << sys.n << ',' << sys.r() << ',' << sys.d() << ','
                    << sys.declared_dim << ',' << sys.declared_m << ',' << r.count << ',' << r.deviation << ','
                    << r.constant << ',' << (r.holds ? "true" : "false") << '\n';
            } catch (const Error& err) {
                if (single || err.code() != ErrorCode::TooLarge)
                    throw;
                row["q"] = q;
                row["skipped"] = std::string(to_string(err.code()));
            }
            reports.push_back(std::move(row));
        }
    Json j;
    j["two_sided"] = p.two_sided;
    j["all_hold"] = all_hold;
    j["reports"] = reports;
    emit(p, out, j, csv.str());
}

CurveSpec require_curve(const Params& p)
{
    if (!p.a || !p.b)
        throw Error(ErrorCode::InvalidArgument, "--a and --b are required");
    return CurveSpec(*p.a, *p.b);
}

Json curve_json(const CurveSpec& c)
{
    return {{"a", c.a}, {"b", c.b}, {"discriminant", c.discriminant()}};
}

std::optional<ApCache> open_cache(const Params& p, const CurveSpec& curve)
{
    if (p.cache.empty())
        return std::nullopt;
    ApCache cache(curve);
    cache.attach(p.cache);
    return cache;
}

void run_ap(const Params& p, std::ostream& out)
{
    const CurveSpec curve = require_curve(p);
    auto cache = open_cache(p, curve);
    Json records = Json::array();
    std::ostringstream csv;
    csv << "p,ap\n";
    for (u64 q : primes_up_to(p.pmax)) {
        if (q < p.pmin || !nonsingular_reduction(curve, q))
            continue;
        const i64 ap = cache ? cache->get(q) : a_p(curve, q);
        records.push_back({{"p", q},
                           {"ap", ap},
                           {"points", static_cast<i64>(q) + 1 - ap},
                           {"good_reduction", good_reduction(curve, q)},
                           {"hasse", ap * ap <= 4 * static_cast<i64>(q)}});
        csv << q << ',' << ap << '\n';
    }
    if (cache)
        cache->flush();
    Json j;
    j["curve"] = curve_json(curve);
    j["records"] = records;
    emit(p, out, j, csv.str());
}

struct PrimeSetResult {
    std::vector<u64> S;
    u64 witness = 0;
    int d_C = 0;
};

PrimeSetResult compute_S(const Params& p, const CurveSpec& curve, ApCache* cache)
{
    PrimeSetResult r;
    if (p.witness == 0) {
        const DcScan scan = dC_scan(curve, p.N, 5, p.pmax, cache);
        r.witness = scan.witness_p;
        r.d_C = scan.d_C;
    } else {
        r.witness = p.witness;
        const i64 ap = cache ? cache->get(r.witness) : a_p(curve, r.witness);
        std::vector<i64> w(2 * p.N + 1, 0);
        w[0] = static_cast<i64>(r.witness);
        w[p.N] = -ap;
        w[2 * p.N] = 1;
        r.d_C = qbar_distinct_roots(w);
    }
    if (p.xmax == 0)
        throw Error(ErrorCode::InvalidArgument, "--xmax is required");
    r.S = build_S(PrimeSetSpec{curve, p.N, r.witness, p.kappa, p.modulus, p.xmax}, cache);
    return r;
}

void run_set_s(const Params& p, std::ostream& out)
{
    const CurveSpec curve = require_curve(p);
    auto cache = open_cache(p, curve);
    const PrimeSetResult r = compute_S(p, curve, cache ? &*cache : nullptr);
    if (cache)
        cache->flush();
    const BigRational dens = density_estimate(r.S, p.xmax);

    Json j;
    j["curve"] = curve_json(curve);
    j["N"] = p.N;
    j["witness_p"] = r.witness;
    j["d_C"] = r.d_C;
    j["kappa_min"] = p.kappa;
    j["modulus_m"] = p.modulus;
    j["cutoff_X"] = p.xmax;
    j["S"] = r.S;
    j["pi_X"] = primes_up_to(p.xmax).size();
    j["density"] = rational_string(dens);
    j["density_float"] = static_cast<double>(dens);
    std::ostringstream csv;
    csv << "ell\n";
    for (u64 ell : r.S)
        csv << ell << '\n';
    emit(p, out, j, csv.str());
}

/// The prime list for bc-sim / density: --ell if given, else the set S.
std::vector<u64> simulation_primes(const Params& p)
{
    if (!p.ells.empty()) {
        std::vector<u64> ells = p.ells;
        std::sort(ells.begin(), ells.end());
        if (std::adjacent_find(ells.begin(), ells.end()) != ells.end())
            throw Error(ErrorCode::InvalidArgument, "--ell values must be distinct");
        return ells;
    }
    const CurveSpec curve = require_curve(p);
    auto cache = open_cache(p, curve);
    auto S = compute_S(p, curve, cache ? &*cache : nullptr).S;
    if (cache)
        cache->flush();
    return S;
}

std::vector<EventModel> build_models(const Params& p, const std::vector<u64>& ells, const Budget& budget)
{
    std::vector<EventModel> models;
    for (u64 ell : ells)
        models.push_back(make_event_model(make_group(p, ell, p.N), budget));
    return models;
}

void run_bc_sim(const Params& p, std::ostream& out)
{
    const Budget budget = resolve_budget(p);
    const auto models = build_models(p, simulation_primes(p), budget);
    const TrialReport rep = run_bc_trials(models, p.trials, p.seed, p.jobs);

    Json j = to_json(rep);
    // binomial z-scores of each frequency and of the mean success count
    double max_z = 0.0, var_sum = 0.0;
    for (const auto& e : rep.per_ell) {
        const double pe = static_cast<double>(e.p_exact);
        const double var = pe * (1.0 - pe);
        var_sum += var;
        if (var > 0)
            max_z = std::max(max_z, std::abs(e.empirical_freq - pe) / std::sqrt(var / static_cast<double>(rep.trials)));
    }
    const double mean_sd = std::sqrt(var_sum / static_cast<double>(rep.trials));
    const double mean_dev = std::abs(rep.mean_successes() - static_cast<double>(rep.expected_sum));
    j["max_freq_z"] = max_z;
    j["mean_z"] = mean_sd > 0 ? mean_dev / mean_sd : 0.0;

    u64 tested = 0, passing = 0, degenerate = 0, sparse = 0;
    double max_stat = 0.0;
    for (std::size_t a = 0; a < rep.per_ell.size(); ++a)
        for (std::size_t b = a + 1; b < rep.per_ell.size(); ++b) {
            const ChiSquare c = independence_chi_square(rep, rep.per_ell[a].ell, rep.per_ell[b].ell);
            if (c.degenerate) {
                ++degenerate;
                continue;
            }
            if (c.min_expected < 5.0) {
                ++sparse;
                continue;
            }
            ++tested;
            passing += *c.statistic < kChiSquare999;
            max_stat = std::max(max_stat, *c.statistic);
        }
    j["chi_square"] = {{"quantile", kChiSquare999},
                       {"min_expected_cell", 5},
                       {"tested_pairs", tested},
                       {"passing_pairs", passing},
                       {"degenerate_pairs", degenerate},
                       {"sparse_pairs", sparse},
                       {"max_statistic", max_stat}};
    emit(p, out, j, trial_csv(rep));
}

void run_density(const Params& p, std::ostream& out)
{
    const Budget budget = resolve_budget(p);
    const auto ells = simulation_primes(p);
    const auto models = build_models(p, ells, budget);
    const auto profile = divergence_profile(models);

    Json rows = Json::array();
    std::ostringstream csv;
    csv << "ell,sum_p,sum_inv_ell\n";
    bool dominates = true;
    for (const auto& pt : profile) {
        const bool ok = pt.sum_p * 2 >= pt.sum_inv_ell;
        dominates = dominates && ok;
        rows.push_back({{"ell", pt.ell},
                        {"sum_p", rational_string(pt.sum_p)},
                        {"sum_inv_ell", rational_string(pt.sum_inv_ell)},
                        {"ratio", static_cast<double>(pt.sum_p / pt.sum_inv_ell)},
                        {"dominates_half", ok}});
        csv << pt.ell << ',' << rational_string(pt.sum_p) << ',' << rational_string(pt.sum_inv_ell) << '\n';
    }
    Json j;
    j["S"] = ells;
    if (p.xmax != 0 && p.ells.empty()) {
        const BigRational dens = density_estimate(ells, p.xmax);
        j["density"] = rational_string(dens);
        j["density_float"] = static_cast<double>(dens);
    }
    j["profile"] = rows;
    j["dominates_half"] = dominates;
    emit(p, out, j, csv.str());
}

// --- flag wiring ----------------------------------------------------------

void add_group_flags(CLI::App* sub, Params& p)
{
    sub->add_option("--group", p.group, "[group-models] group model: glN or gspN (default gl2)");
    sub->add_option("--elements", p.elements, "[group-models] explicit subgroup file (header \"n ell\", one matrix per line)");
}

void add_curve_flags(CLI::App* sub, Params& p)
{
    sub->add_option("--a", p.a, "[frobenius-data] curve coefficient a in y^2 = x^3 + a x + b");
    sub->add_option("--b", p.b, "[frobenius-data] curve coefficient b");
    sub->add_option("--cache", p.cache, "[frobenius-data] a_p cache file (created if missing)");
}

void add_prime_set_flags(CLI::App* sub, Params& p)
{
    sub->add_option("--N", p.N, "[frobenius-data] index exponent N")->check(CLI::PositiveNumber);
    sub->add_option("--witness", p.witness, "[frobenius-data] witness prime (default: maximizer of d_C over p <= --pmax)");
    sub->add_option("--pmax", p.pmax, "[frobenius-data] upper end of the witness scan");
    sub->add_option("--modulus", p.modulus, "[frobenius-data] keep l = 1 mod m")->check(CLI::PositiveNumber);
    sub->add_option("--kappa", p.kappa, "[frobenius-data] minimum prime kappa");
    sub->add_option("--xmax", p.xmax, "[frobenius-data] cutoff X for the prime set");
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Params p;
    CLI::App app{"Finite-field counting, torus scans, point-count bounds and event simulation.", "tdl"};
    app.set_help_flag();
    app.set_help_all_flag("-h,--help", "[cli] print help for every subcommand");
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--out", p.out_path, "[cli] write the report to this path instead of stdout");
    app.add_option("--format", p.format, "[cli] output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", p.seed, "[cli] master seed for sampling");
    app.add_option("--budget", p.budget, "[cli] enumeration budget (overrides TDL_BUDGET)");
    app.add_option("--jobs", p.jobs, "[cli] worker threads")->check(CLI::Range(1u, 256u));

    auto* eigen1 = app.add_subcommand("eigen1", "count elements with eigenvalue 1 in a group or coset");
    add_group_flags(eigen1, p);
    eigen1->add_option("--ell", p.ell, "[group-models] prime l");
    eigen1->add_option("--N", p.N, "[group-models] index exponent N")->check(CLI::PositiveNumber);
    eigen1->add_option("--coset", p.coset, "[group-models] coset representative B, entries row-major");

    auto* torus = app.add_subcommand("torus-scan", "scan det(I - B t^N) = 0 on the diagonal torus");
    add_group_flags(torus, p);
    torus->add_option("--ell", p.ells, "[torus-machinery] primes l (repeatable or comma-separated)")->delimiter(',');
    torus->add_option("--N", p.Ns, "[torus-machinery] exponents N (repeatable or comma-separated)")->delimiter(',');
    torus->add_option("--samples", p.samples, "[torus-machinery] random B per (l, N)");
    torus->add_flag("--identity", p.identity, "[torus-machinery] use B = I");
    torus->add_option("--B", p.matrix_B, "[torus-machinery] explicit B, entries row-major");
    torus->add_flag("--split-separable", p.split_separable,
                    "[torus-machinery] draw B with det(x^N I - B) having distinct roots, all in F_l");
    torus->add_flag("--union", p.with_union, "[torus-machinery] also compute the union bound over split tori (GL(2))");

    auto* weil = app.add_subcommand("weil-check", "check the point-count inequality by brute force");
    weil->add_option("--poly", p.polys, "[weil-bounds] polynomial \"c:e1,..,en;...\" (repeatable)");
    weil->add_option("--corpus", p.corpus, "[weil-bounds] corpus file, one \"name dim m poly...\" per line");
    weil->add_option("--q", p.qs, "[weil-bounds] primes q (repeatable or comma-separated)")->delimiter(',');
    weil->add_option("--dim", p.dim, "[weil-bounds] declared dimension");
    weil->add_option("--m", p.m, "[weil-bounds] declared number of top-dimensional components");
    weil->add_flag("--two-sided", p.two_sided, "[weil-bounds] bound |deviation| instead of the excess only");

    auto* ap = app.add_subcommand("ap", "traces of Frobenius a_p for odd primes of nonsingular reduction");
    add_curve_flags(ap, p);
    ap->add_option("--pmin", p.pmin, "[frobenius-data] smallest prime");
    ap->add_option("--pmax", p.pmax, "[frobenius-data] largest prime");

    auto* sets = app.add_subcommand("set-s", "build the prime set S");
    add_curve_flags(sets, p);
    add_prime_set_flags(sets, p);

    auto* bc = app.add_subcommand("bc-sim", "simulate the events over S and test their independence");
    add_curve_flags(bc, p);
    add_prime_set_flags(bc, p);
    add_group_flags(bc, p);
    bc->add_option("--ell", p.ells, "[bc-simulator] explicit primes instead of S")->delimiter(',');
    bc->add_option("--trials", p.trials, "[bc-simulator] number of trials");

    auto* dens = app.add_subcommand("density", "partial sums of exact probabilities against sum 1/l");
    add_curve_flags(dens, p);
    add_prime_set_flags(dens, p);
    add_group_flags(dens, p);
    dens->add_option("--ell", p.ells, "[bc-simulator] explicit primes instead of S")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "ERROR Parse: " << one_line(e.what()) << '\n';
        return kExitDomain;
    }

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "eigen1")
            run_eigen1(p, out);
        else if (cmd == "torus-scan")
            run_torus_scan(p, out);
        else if (cmd == "weil-check")
            run_weil_check(p, out);
        else if (cmd == "ap")
            run_ap(p, out);
        else if (cmd == "set-s")
            run_set_s(p, out);
        else if (cmd == "bc-sim")
            run_bc_sim(p, out);
        else
            run_density(p, out);
    } catch (const Error& e) {
        err << "ERROR " << to_string(e.code()) << ": " << one_line(e.what()) << '\n';
        return e.code() == ErrorCode::TooLarge ? kExitTooLarge : kExitDomain;
    } catch (const std::exception& e) {
        err << "ERROR Internal: " << one_line(e.what()) << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

} // namespace tdl
