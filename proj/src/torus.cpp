#include "tdl/torus.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace tdl {

namespace {

std::vector<Character> differences(const std::vector<Character>& weights)
{
    std::vector<Character> roots;
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (std::size_t j = 0; j < weights.size(); ++j) {
            if (i == j)
                continue;
            Character d(weights[i].size());
            for (std::size_t k = 0; k < d.size(); ++k)
                d[k] = weights[i][k] - weights[j][k];
            if (std::all_of(d.begin(), d.end(), [](int v) { return v == 0; }))
                continue;
            if (std::find(roots.begin(), roots.end(), d) == roots.end())
                roots.push_back(std::move(d));
        }
    return roots;
}

// Per-prime lookup tables shared by the scans.
struct UnitTables {
    u64 p;
    std::vector<u64> inv;

    explicit UnitTables(u64 ell) : p(ell), inv(ell, 0)
    {
        for (u64 x = 1; x < ell; ++x)
            inv[x] = invmod(x, ell);
    }

    u64 eval(const Character& chi, std::span<const u64> coords) const
    {
        u64 v = 1 % p;
        for (std::size_t i = 0; i < chi.size(); ++i) {
            int e = chi[i];
            if (e == 0)
                continue;
            u64 base = e > 0 ? coords[i] : inv[coords[i]];
            for (int k = 0; k < (e > 0 ? e : -e); ++k)
                v = mulmod(v, base, p);
        }
        return v;
    }

    bool regular(const TorusDesc& desc, std::span<const u64> coords) const
    {
        for (const auto& alpha : desc.roots)
            if (eval(alpha, coords) == 1 % p)
                return false;
        return true;
    }
};

// Odometer over (F_l^x)^r, lexicographic.
bool next_units(std::vector<u64>& t, u64 p)
{
    for (std::size_t k = t.size(); k-- > 0;) {
        if (++t[k] < p)
            return true;
        t[k] = 1;
    }
    return false;
}

u64 unit_space(const TorusDesc& desc)
{
    return saturating_pow(desc.conjugator.modulus() - 1, static_cast<u64>(desc.rank_r));
}

// det(I - Bc diag(s)) where Bc is already conjugated into the torus frame.
u64 det_one_minus_scaled(const FpMatrix& bc, std::span<const u64> s, std::vector<u64>& scratch)
{
    const std::size_t n = bc.n();
    const u64 p = bc.modulus();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            scratch[i * n + j] = submod(i == j ? 1 % p : 0, mulmod(bc(i, j), s[j], p), p);
    return det_in_place(scratch, n, p);
}

void require_gl2(const GroupModelSpec& spec, const char* what)
{
    if (spec.kind != GroupKind::GL || spec.dim != 2)
        throw Error(ErrorCode::UnsupportedKind, std::string(what) + " is implemented for GL(2) only");
}

} // namespace

TorusDesc standard_torus(const GroupModelSpec& spec)
{
    const u64 p = spec.ell;
    const std::size_t n = spec.dim;
    TorusDesc desc{FpMatrix::identity(n, p), 0, {}, {}, {}};
    if (spec.kind == GroupKind::GL) {
        desc.rank_r = static_cast<int>(n);
        for (std::size_t i = 0; i < n; ++i) {
            Character w(n, 0);
            w[i] = 1;
            desc.weights.push_back(std::move(w));
        }
        desc.homothety.assign(n, 1);
    } else if (spec.kind == GroupKind::GSp) {
        const std::size_t g = n / 2;
        desc.rank_r = static_cast<int>(g + 1);
        desc.weights.assign(n, Character(g + 1, 0));
        for (std::size_t i = 0; i < g; ++i) {
            desc.weights[i][i] = 1;
            desc.weights[n - 1 - i][i] = -1;
            desc.weights[n - 1 - i][g] = 1;
        }
        desc.homothety.assign(g + 1, 1);
        desc.homothety[g] = 2;
    } else {
        throw Error(ErrorCode::UnsupportedKind, "no standard torus for " + spec.name());
    }
    desc.roots = differences(desc.weights);
    return desc;
}

u64 eval_character(const Character& chi, std::span<const u64> coords, u64 ell)
{
    u64 v = 1 % ell;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        if (chi[i] == 0)
            continue;
        u64 base = chi[i] > 0 ? coords[i] : invmod(coords[i], ell);
        v = mulmod(v, powmod(base, static_cast<u64>(chi[i] > 0 ? chi[i] : -chi[i]), ell), ell);
    }
    return v;
}

FpMatrix torus_matrix(const TorusDesc& desc, std::span<const u64> coords)
{
    const u64 p = desc.conjugator.modulus();
    std::vector<u64> diag;
    diag.reserve(desc.weights.size());
    for (const auto& w : desc.weights)
        diag.push_back(eval_character(w, coords, p));
    return desc.conjugator * FpMatrix::diagonal(diag, p) * desc.conjugator.inverse();
}

void for_each_torus_point(const TorusDesc& desc, const std::function<void(const TorusPoint&)>& visit,
                          const Budget& budget)
{
    const u64 p = desc.conjugator.modulus();
    budget.require(unit_space(desc), "enumerating torus points");
    const FpMatrix cinv = desc.conjugator.inverse();
    UnitTables tab(p);
    TorusPoint pt{std::vector<u64>(static_cast<std::size_t>(desc.rank_r), 1), FpMatrix(desc.conjugator.n(), p)};
    std::vector<u64> diag(desc.weights.size());
    do {
        for (std::size_t i = 0; i < diag.size(); ++i)
            diag[i] = tab.eval(desc.weights[i], pt.coords);
        pt.matrix = desc.conjugator * FpMatrix::diagonal(diag, p) * cinv;
        visit(pt);
    } while (next_units(pt.coords, p));
}

std::vector<TorusPoint> enumerate_torus_points(const TorusDesc& desc, const Budget& budget)
{
    std::vector<TorusPoint> out;
    for_each_torus_point(desc, [&](const TorusPoint& pt) { out.push_back(pt); }, budget);
    return out;
}

std::vector<TorusDesc> enumerate_split_tori(const GroupModelSpec& spec)
{
    require_gl2(spec, "enumerate_split_tori");
    const u64 p = spec.ell;
    // P^1(F_l): [1:0] then [x:1]
    std::vector<std::pair<u64, u64>> lines{{1, 0}};
    for (u64 x = 0; x < p; ++x)
        lines.emplace_back(x, 1);
    const TorusDesc base = standard_torus(spec);
    std::vector<TorusDesc> tori;
    tori.reserve(lines.size() * (lines.size() - 1) / 2);
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            TorusDesc t = base;
            t.conjugator = FpMatrix(2, p, {lines[i].first, lines[j].first, lines[i].second, lines[j].second});
            tori.push_back(std::move(t));
        }
    return tori;
}

u64 torus_count_formula(const GroupModelSpec& spec)
{
    u64 weyl = 1;
    u64 rank = 0;
    switch (spec.kind) {
    case GroupKind::GL:
        for (u64 k = 2; k <= spec.dim; ++k)
            weyl *= k;
        rank = spec.dim;
        break;
    case GroupKind::GSp: {
        const u64 g = spec.dim / 2;
        for (u64 k = 1; k <= g; ++k)
            weyl *= 2 * k;
        rank = g + 1;
        break;
    }
    case GroupKind::Explicit:
        throw Error(ErrorCode::UnsupportedKind, "Weyl group order unknown for " + spec.name());
    }
    const u64 denom = weyl * saturating_pow(spec.ell - 1, rank);
    const u64 order = group_order(spec);
    if (order % denom != 0)
        throw Error(ErrorCode::InvalidArgument, "torus count is not integral for " + spec.name());
    return order / denom;
}

bool is_regular(std::span<const u64> coords, const TorusDesc& desc)
{
    const u64 p = desc.conjugator.modulus();
    for (const auto& alpha : desc.roots)
        if (eval_character(alpha, coords, p) == 1 % p)
            return false;
    return true;
}

TorusScanReport scan_W_variety(const FpMatrix& B, unsigned N, const TorusDesc& desc, const Budget& budget)
{
    const u64 p = desc.conjugator.modulus();
    const std::size_t n = desc.conjugator.n();
    if (B.n() != n || B.modulus() != p)
        throw Error(ErrorCode::InvalidArgument, "B does not match the torus ambient group");
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    if (desc.homothety.empty() || desc.homothety[0] != 1)
        throw Error(ErrorCode::InvalidArgument, "orbit normalization needs homothety exponent 1 on t_1");
    budget.require(unit_space(desc), "scanning the W variety");

    const auto r = static_cast<std::size_t>(desc.rank_r);
    const FpMatrix bc = desc.conjugator.inverse() * B * desc.conjugator;
    UnitTables tab(p);
    std::vector<u64> pow_n(p, 0);
    for (u64 x = 1; x < p; ++x)
        pow_n[x] = powmod(x, N, p);

    TorusScanReport rep{.ell = p, .N = N, .representative_B = B, .w_count = 0, .regular_count = 0,
                        .irregular_in_W = 0, .fiber_sizes = {}, .degree_d = 0};
    std::vector<u64> orbit_hits(static_cast<std::size_t>(saturating_pow(p - 1, r - 1)), 0);
    std::vector<u64> t(r, 1), tn(r), s(n), scratch(n * n);
    do {
        for (std::size_t i = 0; i < r; ++i)
            tn[i] = pow_n[t[i]];
        for (std::size_t k = 0; k < n; ++k)
            s[k] = tab.eval(desc.weights[k], tn);
        if (det_one_minus_scaled(bc, s, scratch) != 0)
            continue;
        ++rep.w_count;
        if (tab.regular(desc, tn))
            ++rep.regular_count;
        // orbit representative: scale by lambda = t_1^-1 so the first coordinate is 1
        std::size_t orbit = 0;
        const u64 lam = tab.inv[t[0]];
        for (std::size_t i = 1; i < r; ++i) {
            u64 v = t[i];
            for (int k = 0; k < desc.homothety[i]; ++k)
                v = mulmod(v, lam, p);
            orbit = orbit * (p - 1) + (v - 1);
        }
        ++orbit_hits[orbit];
    } while (next_units(t, p));

    rep.irregular_in_W = rep.w_count - rep.regular_count;
    rep.fiber_sizes = std::move(orbit_hits);
    std::sort(rep.fiber_sizes.begin(), rep.fiber_sizes.end());
    rep.degree_d = rep.fiber_sizes.empty() ? 0 : rep.fiber_sizes.back();
    return rep;
}

bool split_separable_power(const FpMatrix& B, unsigned N)
{
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    const int want = static_cast<int>(B.n() * N);
    const RootCounts rc = distinct_root_counts(substitute_power(charpoly(B), N));
    return rc.in_field == want && rc.in_closure == want;
}

std::optional<FpMatrix> sample_split_separable(const GroupModelSpec& spec, unsigned N, u64 seed, u64 index,
                                               u64 max_attempts)
{
    for (u64 k = 0; k < max_attempts; ++k) {
        CounterRng rng{seed, spec.ell, N, index, k};
        FpMatrix B = sample_uniform(spec, rng);
        if (split_separable_power(B, N))
            return B;
    }
    return std::nullopt;
}

UnionBound union_lower_bound(const FpMatrix& B, unsigned N, const GroupModelSpec& spec, const Budget& budget)
{
    require_gl2(spec, "union_lower_bound");
    if (B.n() != 2 || B.modulus() != spec.ell)
        throw Error(ErrorCode::InvalidArgument, "B does not match the group model");
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    const u64 p = spec.ell;
    const auto tori = enumerate_split_tori(spec);
    budget.require(saturating_pow(p - 1, 2) * tori.size(), "union over split tori");

    UnitTables tab(p);
    std::vector<u64> pow_n(p, 0);
    for (u64 x = 1; x < p; ++x)
        pow_n[x] = powmod(x, N, p);

    UnionBound out;
    std::unordered_map<u64, std::size_t> owner;
    std::vector<u64> t(2, 1), tn(2), scratch(4);
    for (std::size_t ti = 0; ti < tori.size(); ++ti) {
        const TorusDesc& desc = tori[ti];
        const FpMatrix cinv = desc.conjugator.inverse();
        const FpMatrix bc = cinv * B * desc.conjugator;
        const FpMatrix b_conj = B * desc.conjugator;
        std::unordered_set<u64> images;
        t.assign(2, 1);
        do {
            tn[0] = pow_n[t[0]];
            tn[1] = pow_n[t[1]];
            if (det_one_minus_scaled(bc, tn, scratch) != 0 || !tab.regular(desc, tn))
                continue;
            ++out.sum_regular;
            const u64 key = matrix_index(b_conj * FpMatrix::diagonal(tn, p) * cinv);
            if (!images.insert(key).second)
                continue;
            auto [it, fresh] = owner.emplace(key, ti);
            if (!fresh && it->second != ti)
                out.disjoint = false;
        } while (next_units(t, p));
        out.sum_images += images.size();
    }
    out.exact_union = owner.size();
    out.divided_estimate = out.sum_regular / saturating_pow(N, 2);
    return out;
}

IrregularPowerBound irregular_power_bound(unsigned N, const TorusDesc& desc, const Budget& budget)
{
    const u64 p = desc.conjugator.modulus();
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    budget.require(unit_space(desc), "counting irregular torus points");
    UnitTables tab(p);
    IrregularPowerBound out;
    std::vector<u64> t(static_cast<std::size_t>(desc.rank_r), 1), tn(t.size());
    do {
        for (std::size_t i = 0; i < t.size(); ++i)
            tn[i] = powmod(t[i], N, p);
        out.nonregular_count += !tab.regular(desc, t);
        out.irregular_power_count += !tab.regular(desc, tn);
    } while (next_units(t, p));
    out.bound = saturating_pow(N, static_cast<u64>(desc.rank_r)) * out.nonregular_count;
    if (out.irregular_power_count > out.bound)
        throw Error(ErrorCode::InvalidArgument, "irregular power count exceeds N^r times the non-regular count");
    return out;
}

std::string torus_csv_header() { return "ell,N,B_index,w_count,regular_count,irregular_in_W,degree_d,fiber_sizes"; }

std::string torus_csv_row(const TorusScanReport& r, std::size_t b_index)
{
    std::ostringstream os;
    os << r.ell << ',' << r.N << ',' << b_index << ',' << r.w_count << ',' << r.regular_count << ','
       << r.irregular_in_W << ',' << r.degree_d << ',';
    for (std::size_t i = 0; i < r.fiber_sizes.size(); ++i)
        os << (i ? ";" : "") << r.fiber_sizes[i];
    return os.str();
}

} // namespace tdl
