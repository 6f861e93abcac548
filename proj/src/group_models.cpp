#include "tdl/group_models.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace tdl {

namespace {

u64 checked_mul(u64 a, u64 b, const char* what)
{
    unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    if (r > UINT64_MAX)
        throw Error(ErrorCode::TooLarge, std::string(what) + " overflows 64 bits");
    return static_cast<u64>(r);
}

u64 candidate_space(std::size_t n, u64 ell) { return saturating_pow(ell, n * n); }

} // namespace

u64 matrix_index(const FpMatrix& m)
{
    const u64 ell = m.modulus();
    if (candidate_space(m.n(), ell) == UINT64_MAX)
        throw Error(ErrorCode::TooLarge, "matrix index does not fit in 64 bits");
    u64 idx = 0;
    for (u64 e : m.entries())
        idx = idx * ell + e;
    return idx;
}

FpMatrix matrix_from_index(u64 index, std::size_t n, u64 ell)
{
    std::vector<u64> e(n * n);
    for (std::size_t k = n * n; k-- > 0;) {
        e[k] = index % ell;
        index /= ell;
    }
    return FpMatrix(n, ell, std::move(e));
}

// --- ExplicitGroup --------------------------------------------------------

ExplicitGroup::ExplicitGroup(std::size_t n, u64 ell, std::vector<FpMatrix> elements)
    : n_(n), ell_(ell), elements_(std::move(elements))
{
    require_field_modulus(ell);
    if (elements_.empty())
        throw Error(ErrorCode::NotAGroup, "explicit group needs at least one element");
    for (const auto& m : elements_)
        if (m.n() != n || m.modulus() != ell)
            throw Error(ErrorCode::InvalidArgument, "explicit group element has wrong shape or modulus");
    std::sort(elements_.begin(), elements_.end(),
              [](const FpMatrix& a, const FpMatrix& b) { return matrix_index(a) < matrix_index(b); });
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    keys_.reserve(elements_.size());
    for (const auto& m : elements_)
        keys_.push_back(matrix_index(m));

    if (!contains(FpMatrix::identity(n, ell)))
        throw Error(ErrorCode::NotAGroup, "explicit group does not contain the identity");
    for (const auto& a : elements_) {
        if (mat_det(a) == 0 || !contains(a.inverse()))
            throw Error(ErrorCode::NotAGroup, "explicit group is not closed under inverses");
        for (const auto& b : elements_)
            if (!contains(a * b))
                throw Error(ErrorCode::NotAGroup, "explicit group is not closed under products");
    }
}

bool ExplicitGroup::contains(const FpMatrix& m) const
{
    if (m.n() != n_ || m.modulus() != ell_)
        return false;
    return std::binary_search(keys_.begin(), keys_.end(), matrix_index(m));
}

// --- GroupModelSpec -------------------------------------------------------

GroupModelSpec GroupModelSpec::gl(std::size_t n, u64 ell, unsigned index_exponent)
{
    require_field_modulus(ell);
    if (n == 0 || index_exponent == 0)
        throw Error(ErrorCode::InvalidArgument, "GL(n) needs n >= 1 and N >= 1");
    return GroupModelSpec{GroupKind::GL, ell, n, static_cast<int>(n), index_exponent, nullptr};
}

GroupModelSpec GroupModelSpec::gsp(std::size_t two_g, u64 ell, unsigned index_exponent)
{
    require_field_modulus(ell);
    if (two_g == 0 || two_g % 2 != 0 || index_exponent == 0)
        throw Error(ErrorCode::InvalidArgument, "GSp(2g) needs an even positive dimension and N >= 1");
    return GroupModelSpec{GroupKind::GSp, ell, two_g, static_cast<int>(two_g / 2 + 1), index_exponent, nullptr};
}

GroupModelSpec GroupModelSpec::explicit_group(ExplicitGroup g, int rank_r, unsigned index_exponent)
{
    if (index_exponent == 0 || rank_r < 0)
        throw Error(ErrorCode::InvalidArgument, "explicit group model needs N >= 1 and r >= 0");
    const auto n = g.n();
    const auto ell = g.ell();
    return GroupModelSpec{GroupKind::Explicit, ell, n, rank_r, index_exponent,
                          std::make_shared<const ExplicitGroup>(std::move(g))};
}

std::string GroupModelSpec::name() const
{
    switch (kind) {
    case GroupKind::GL: return "GL(" + std::to_string(dim) + ")";
    case GroupKind::GSp: return "GSp(" + std::to_string(dim) + ")";
    case GroupKind::Explicit: return "Explicit(" + std::to_string(group->size()) + ")";
    }
    return "?";
}

bool GroupModelSpec::contains(const FpMatrix& m) const
{
    if (m.n() != dim || m.modulus() != ell)
        return false;
    switch (kind) {
    case GroupKind::GL: return mat_det(m) != 0;
    case GroupKind::GSp: return similitude_multiplier(m) != 0;
    case GroupKind::Explicit: return group->contains(m);
    }
    return false;
}

CosetSpec::CosetSpec(GroupModelSpec g, FpMatrix b) : group(std::move(g)), representative(std::move(b))
{
    if (representative.n() != group.dim || representative.modulus() != group.ell)
        throw Error(ErrorCode::InvalidArgument, "coset representative has wrong shape or modulus");
    if (mat_det(representative) == 0)
        throw Error(ErrorCode::InvalidArgument, "coset representative is singular");
}

// --- symplectic similitudes -----------------------------------------------

FpMatrix symplectic_form(std::size_t two_g, u64 ell)
{
    FpMatrix j(two_g, ell);
    const std::size_t g = two_g / 2;
    for (std::size_t i = 0; i < two_g; ++i)
        j.set(i, two_g - 1 - i, i < g ? 1 : ell - 1);
    return j;
}

u64 similitude_multiplier(const FpMatrix& m)
{
    const std::size_t n = m.n();
    if (n % 2 != 0)
        return 0;
    const FpMatrix j = symplectic_form(n, m.modulus());
    const FpMatrix lhs = m.transpose() * j * m;
    // J(0, n-1) = 1, so mu is read off that entry
    const u64 mu = lhs(0, n - 1);
    if (mu == 0 || lhs != j.scaled(mu))
        return 0;
    return mu;
}

namespace {

// u^T J v for the fixed antidiagonal J.
u64 symplectic_pairing(std::span<const u64> u, std::span<const u64> v, u64 p)
{
    const std::size_t n = u.size();
    const std::size_t g = n / 2;
    u64 s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        u64 term = mulmod(u[i], v[n - 1 - i], p);
        s = i < g ? addmod(s, term, p) : submod(s, term, p);
    }
    return s;
}

// Rows of a similitude satisfy row_i^T J row_j = mu J(i, j) (M J M^T = mu J),
// so rows are chosen one at a time and pruned against the earlier ones.
// Candidate rows are visited lexicographically, which keeps the output in
// matrix_index order.
void for_each_gsp(std::size_t n, u64 p, const std::function<void(const FpMatrix&)>& visit)
{
    const u64 rows_per_level = saturating_pow(p, n);
    std::vector<std::vector<u64>> rows(n, std::vector<u64>(n));
    FpMatrix current(n, p);

    auto row_from_index = [&](u64 idx, std::vector<u64>& out) {
        for (std::size_t k = n; k-- > 0;) {
            out[k] = idx % p;
            idx /= p;
        }
    };

    std::function<void(std::size_t, u64)> descend = [&](std::size_t k, u64 mu) {
        if (k == n) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    current.set(i, j, rows[i][j]);
            visit(current);
            return;
        }
        for (u64 idx = 0; idx < rows_per_level; ++idx) {
            row_from_index(idx, rows[k]);
            u64 next_mu = mu;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                u64 w = symplectic_pairing(rows[j], rows[k], p);
                if (k == n - 1 - j) {
                    // J(j, k) = +1 since j < g here
                    if (next_mu == 0) {
                        next_mu = w;
                        ok = w != 0;
                    } else {
                        ok = w == next_mu;
                    }
                } else {
                    ok = w == 0;
                }
            }
            if (ok)
                descend(k + 1, next_mu);
        }
    };
    descend(0, 0);
}

} // namespace

// --- orders ---------------------------------------------------------------

u64 group_order(const GroupModelSpec& spec)
{
    const u64 l = spec.ell;
    switch (spec.kind) {
    case GroupKind::GL: {
        const u64 ln = saturating_pow(l, spec.dim);
        if (ln == UINT64_MAX)
            throw Error(ErrorCode::TooLarge, "GL order overflows 64 bits");
        u64 order = 1;
        u64 li = 1;
        for (std::size_t i = 0; i < spec.dim; ++i) {
            order = checked_mul(order, ln - li, "GL order");
            li *= l;
        }
        return order;
    }
    case GroupKind::GSp: {
        const std::size_t g = spec.dim / 2;
        u64 order = checked_mul(l - 1, saturating_pow(l, g * g), "GSp order");
        if (saturating_pow(l, g * g) == UINT64_MAX)
            throw Error(ErrorCode::TooLarge, "GSp order overflows 64 bits");
        for (std::size_t i = 1; i <= g; ++i) {
            u64 l2i = saturating_pow(l, 2 * i);
            if (l2i == UINT64_MAX)
                throw Error(ErrorCode::TooLarge, "GSp order overflows 64 bits");
            order = checked_mul(order, l2i - 1, "GSp order");
        }
        return order;
    }
    case GroupKind::Explicit: return spec.group->size();
    }
    throw Error(ErrorCode::UnsupportedKind, "unknown group kind");
}

// --- enumeration ----------------------------------------------------------

void for_each_element(const GroupModelSpec& spec, const std::function<void(const FpMatrix&)>& visit,
                      const Budget& budget)
{
    if (spec.kind == GroupKind::Explicit) {
        for (const auto& m : spec.group->elements())
            visit(m);
        return;
    }
    const std::size_t n = spec.dim;
    const u64 p = spec.ell;
    budget.require(candidate_space(n, p), "enumerating " + spec.name() + " over F_" + std::to_string(p));

    if (spec.kind == GroupKind::GSp) {
        for_each_gsp(n, p, visit);
        return;
    }

    std::vector<u64> digits(n * n, 0);
    std::vector<u64> scratch(n * n);
    FpMatrix m(n, p);
    for (;;) {
        std::copy(digits.begin(), digits.end(), scratch.begin());
        if (det_in_place(scratch, n, p) != 0) {
            for (std::size_t k = 0; k < n * n; ++k)
                m.set(k / n, k % n, digits[k]);
            visit(m);
        }
        // odometer, last entry least significant
        std::size_t k = n * n;
        while (k > 0) {
            --k;
            if (++digits[k] < p)
                break;
            digits[k] = 0;
            if (k == 0)
                return;
        }
    }
}

std::vector<FpMatrix> enumerate_group(const GroupModelSpec& spec, const Budget& budget)
{
    std::vector<FpMatrix> out;
    for_each_element(spec, [&](const FpMatrix& m) { out.push_back(m); }, budget);
    return out;
}

// --- sampling -------------------------------------------------------------

FpMatrix sample_uniform(const GroupModelSpec& spec, CounterRng& rng)
{
    if (spec.kind == GroupKind::Explicit)
        return spec.group->elements()[rng.below(spec.group->size())];
    const std::size_t n = spec.dim;
    std::vector<u64> e(n * n);
    for (;;) {
        for (auto& v : e)
            v = rng.below(spec.ell);
        FpMatrix m(n, spec.ell, e);
        if (spec.contains(m))
            return m;
    }
}

FpMatrix sample_uniform(const CosetSpec& coset, CounterRng& rng)
{
    return coset.representative * sample_uniform(coset.group, rng);
}

FpMatrix sample_uniform(const EventTarget& target, CounterRng& rng)
{
    return std::visit([&](const auto& t) { return sample_uniform(t, rng); }, target);
}

// --- eigenvalue-1 counts --------------------------------------------------

u64 count_eigen1(const GroupModelSpec& spec, const Budget& budget)
{
    u64 count = 0;
    for_each_element(spec, [&](const FpMatrix& h) { count += has_eigenvalue_one(h); }, budget);
    return count;
}

u64 count_eigen1(const CosetSpec& coset, const Budget& budget)
{
    u64 count = 0;
    for_each_element(
        coset.group, [&](const FpMatrix& g) { count += has_eigenvalue_one(coset.representative * g); }, budget);
    return count;
}

u64 count_eigen1(const EventTarget& target, const Budget& budget)
{
    return std::visit([&](const auto& t) { return count_eigen1(t, budget); }, target);
}

u64 target_order(const EventTarget& target)
{
    if (const auto* g = std::get_if<GroupModelSpec>(&target))
        return group_order(*g);
    return group_order(std::get<CosetSpec>(target).group);
}

u64 gl2_eigen1_by_classes(u64 ell)
{
    require_field_modulus(ell);
    const u64 identity = 1;
    const u64 unipotent = ell * ell - 1;
    const u64 split = (ell - 2) * ell * (ell + 1);
    return identity + unipotent + split;
}

bool check_index_condition(const ExplicitGroup& subgroup, const GroupModelSpec& ambient, unsigned N,
                           const Budget& budget)
{
    if (N == 0)
        throw Error(ErrorCode::InvalidArgument, "index exponent must be >= 1");
    if (subgroup.n() != ambient.dim || subgroup.ell() != ambient.ell)
        return false;
    bool ok = true;
    for_each_element(
        ambient,
        [&](const FpMatrix& h) {
            if (ok && !subgroup.contains(h.pow(N)))
                ok = false;
        },
        budget);
    return ok;
}

// --- text format ----------------------------------------------------------

FpMatrix parse_matrix(const std::string& entries, std::size_t n, u64 ell)
{
    std::istringstream is(entries);
    std::vector<u64> e;
    i64 v;
    while (is >> v)
        e.push_back(reduce(v, ell));
    if (!is.eof())
        throw Error(ErrorCode::Parse, "non-integer matrix entry in '" + entries + "'");
    if (e.size() != n * n)
        throw Error(ErrorCode::Parse, "expected " + std::to_string(n * n) + " entries, got " +
                                          std::to_string(e.size()) + " in '" + entries + "'");
    return FpMatrix(n, ell, std::move(e));
}

std::vector<FpMatrix> read_matrices(std::istream& in, std::size_t* n_out, u64* ell_out)
{
    std::string line;
    std::size_t n = 0;
    u64 ell = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream hs(line);
        if (!(hs >> n >> ell) || n == 0)
            throw Error(ErrorCode::Parse, "bad matrix file header '" + line + "', expected \"n ell\"");
        break;
    }
    if (n == 0)
        throw Error(ErrorCode::Parse, "empty matrix file");
    require_field_modulus(ell);
    std::vector<FpMatrix> out;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        out.push_back(parse_matrix(line, n, ell));
    }
    if (n_out)
        *n_out = n;
    if (ell_out)
        *ell_out = ell;
    return out;
}

void write_matrices(std::ostream& out, std::size_t n, u64 ell, const std::vector<FpMatrix>& mats)
{
    out << n << ' ' << ell << '\n';
    for (const auto& m : mats) {
        for (std::size_t k = 0; k < m.entries().size(); ++k)
            out << (k ? " " : "") << m.entries()[k];
        out << '\n';
    }
}

} // namespace tdl
