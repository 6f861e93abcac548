#include "tdl/weil_bounds.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace tdl {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    return out;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <class T>
T parse_int(const std::string& s, const std::string& context)
{
    std::istringstream is(trim(s));
    T v{};
    if (!(is >> v) || !is.eof())
        throw Error(ErrorCode::Parse, "bad integer '" + s + "' in term '" + context + "'");
    return v;
}

// One polynomial compiled against a fixed q: coefficients reduced and each
// term's exponents kept for table lookups.
struct CompiledPoly {
    std::vector<u64> coeffs;
    std::vector<std::vector<unsigned>> exps;
};

} // namespace

MultiPoly parse_multipoly(const std::string& text)
{
    MultiPoly poly;
    std::size_t nvars = 0;
    for (const auto& raw : split(text, ';')) {
        const std::string term = trim(raw);
        if (term.empty())
            continue;
        auto colon = term.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::Parse, "term '" + term + "' lacks ':'");
        Term t;
        t.coeff = parse_int<i64>(term.substr(0, colon), term);
        for (const auto& e : split(term.substr(colon + 1), ',')) {
            if (trim(e).rfind('-', 0) == 0)
                throw Error(ErrorCode::Parse, "negative exponent in term '" + term + "'");
            t.exponents.push_back(parse_int<unsigned>(e, term));
        }
        if (t.exponents.empty())
            throw Error(ErrorCode::Parse, "term '" + term + "' has no exponents");
        if (nvars == 0)
            nvars = t.exponents.size();
        else if (t.exponents.size() != nvars)
            throw Error(ErrorCode::Parse, "inconsistent variable count in '" + text + "'");
        poly.push_back(std::move(t));
    }
    if (poly.empty())
        throw Error(ErrorCode::Parse, "empty polynomial '" + text + "'");
    return poly;
}

std::string format_multipoly(const MultiPoly& poly)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        os << (i ? ";" : "") << poly[i].coeff << ':';
        for (std::size_t k = 0; k < poly[i].exponents.size(); ++k)
            os << (k ? "," : "") << poly[i].exponents[k];
    }
    return os.str();
}

unsigned total_degree(const MultiPoly& poly)
{
    unsigned d = 0;
    for (const auto& t : poly) {
        unsigned s = 0;
        for (unsigned e : t.exponents)
            s += e;
        if (t.coeff != 0)
            d = std::max(d, s);
    }
    return d;
}

PolySystem::PolySystem(unsigned n_, u64 q_, std::vector<MultiPoly> polys_, int dim, int m)
    : n(n_), q(q_), polys(std::move(polys_)), declared_dim(dim), declared_m(m)
{
    require_field_modulus(q);
    if (polys.empty())
        throw Error(ErrorCode::InvalidArgument, "a polynomial system needs at least one polynomial");
    for (const auto& f : polys)
        for (const auto& t : f)
            if (t.exponents.size() != n)
                throw Error(ErrorCode::InvalidArgument,
                            "term has " + std::to_string(t.exponents.size()) + " exponents, system has n = " +
                                std::to_string(n));
    if (declared_dim < 0 || declared_dim > static_cast<int>(n))
        throw Error(ErrorCode::InvalidArgument, "declared dimension must lie in [0, n]");
    if (declared_m < 0)
        throw Error(ErrorCode::InvalidArgument, "declared component count must be >= 0");
}

unsigned PolySystem::d() const
{
    unsigned d = 1;
    for (const auto& f : polys)
        d = std::max(d, total_degree(f));
    return d;
}

u64 brute_variety_count(const PolySystem& sys, const Budget& budget, unsigned jobs)
{
    const u64 q = sys.q;
    const unsigned n = sys.n;
    budget.require(saturating_pow(q, n), "brute-force point count");

    unsigned max_exp = 0;
    std::vector<CompiledPoly> compiled;
    for (const auto& f : sys.polys) {
        CompiledPoly c;
        for (const auto& t : f) {
            c.coeffs.push_back(reduce(t.coeff, q));
            c.exps.push_back(t.exponents);
            for (unsigned e : t.exponents)
                max_exp = std::max(max_exp, e);
        }
        compiled.push_back(std::move(c));
    }
    // pw[e * q + x] = x^e
    std::vector<u64> pw(static_cast<std::size_t>(max_exp + 1) * q);
    for (u64 x = 0; x < q; ++x)
        for (unsigned e = 0; e <= max_exp; ++e)
            pw[e * q + x] = powmod(x, e, q);

    auto vanishes = [&](const std::vector<u64>& x) {
        for (const auto& c : compiled) {
            u64 acc = 0;
            for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
                u64 v = c.coeffs[k];
                for (unsigned i = 0; i < n && v; ++i)
                    v = mulmod(v, pw[c.exps[k][i] * q + x[i]], q);
                acc = addmod(acc, v, q);
            }
            if (acc != 0)
                return false;
        }
        return true;
    };

    auto count_slab = [&](u64 lead) {
        std::vector<u64> x(n, 0);
        x[0] = lead;
        u64 count = 0;
        for (;;) {
            count += vanishes(x);
            std::size_t k = n;
            while (k > 1) {
                --k;
                if (++x[k] < q)
                    break;
                x[k] = 0;
                if (k == 1)
                    return count;
            }
            if (n == 1)
                return count;
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(q)));
    std::vector<u64> partial(jobs, 0);
    auto worker = [&](unsigned w) {
        for (u64 lead = w; lead < q; lead += jobs)
            partial[w] += count_slab(lead);
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
    u64 total = 0;
    for (u64 c : partial)
        total += c;
    return total;
}

std::vector<CorpusEntry> read_weil_corpus(std::istream& in)
{
    std::vector<CorpusEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        CorpusEntry e;
        if (!(ls >> e.name))
            continue;
        if (!(ls >> e.declared_dim >> e.declared_m))
            throw Error(ErrorCode::Parse, "corpus line " + std::to_string(lineno) + ": expected 'name dim m poly...'");
        std::string poly;
        while (ls >> poly)
            e.polys.push_back(parse_multipoly(poly));
        if (e.polys.empty())
            throw Error(ErrorCode::Parse, "corpus line " + std::to_string(lineno) + ": no polynomials");
        for (const auto& f : e.polys)
            if (f.front().exponents.size() != e.n())
                throw Error(ErrorCode::Parse, "corpus line " + std::to_string(lineno) + ": variable counts differ");
        out.push_back(std::move(e));
    }
    return out;
}

BigInt katz_constant(unsigned n, unsigned r, unsigned d)
{
    if (n <= 1)
        throw Error(ErrorCode::InvalidArgument, "the point-count bound needs n > 1");
    if (r < 1 || d < 1)
        throw Error(ErrorCode::InvalidArgument, "the point-count bound needs r >= 1 and d >= 1");
    BigInt base = 3 + BigInt(r) * d;
    return 6 * boost::multiprecision::pow(base, n + 1) * boost::multiprecision::pow(BigInt(2), r);
}

WeilReport check_weil_inequality(const PolySystem& sys, bool two_sided, const Budget& budget, unsigned jobs)
{
    WeilReport rep;
    rep.two_sided = two_sided;
    rep.constant = katz_constant(sys.n, sys.r(), sys.d());
    rep.count = brute_variety_count(sys, budget, jobs);
    const auto dim = static_cast<unsigned>(sys.declared_dim);
    const BigInt qdim = boost::multiprecision::pow(BigInt(sys.q), dim);
    rep.main_term = BigInt(sys.declared_m) * qdim;
    rep.deviation = BigInt(rep.count) - rep.main_term;
    // |dev| <= C q^(dim - 1/2)  <=>  dev^2 q <= C^2 q^(2 dim)
    rep.lhs = rep.deviation * rep.deviation * sys.q;
    rep.rhs = rep.constant * rep.constant * qdim * qdim;
    rep.slack = rep.rhs - rep.lhs;
    const bool squared_ok = rep.lhs <= rep.rhs;
    rep.holds = two_sided ? squared_ok : (rep.deviation <= 0 || squared_ok);
    return rep;
}

} // namespace tdl
