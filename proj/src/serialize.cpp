#include "tdl/serialize.hpp"

#include <sstream>

namespace tdl {

std::string rational_string(const BigRational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

Json big_to_json(const BigInt& v)
{
    if (v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max())
        return static_cast<i64>(v);
    return v.str();
}

Json matrix_to_json(const FpMatrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.n(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const TorusScanReport& r)
{
    Json j;
    j["ell"] = r.ell;
    j["N"] = r.N;
    j["representative_B"] = matrix_to_json(r.representative_B);
    j["w_count"] = r.w_count;
    j["regular_count"] = r.regular_count;
    j["irregular_in_W"] = r.irregular_in_W;
    j["fiber_sizes"] = r.fiber_sizes;
    j["degree_d"] = r.degree_d;
    return j;
}

Json to_json(const UnionBound& u)
{
    Json j;
    j["exact_union"] = u.exact_union;
    j["divided_estimate"] = u.divided_estimate;
    j["sum_regular"] = u.sum_regular;
    j["sum_images"] = u.sum_images;
    j["disjoint"] = u.disjoint;
    return j;
}

Json to_json(const PolySystem& sys, const WeilReport& r)
{
    Json j;
    j["n"] = sys.n;
    j["q"] = sys.q;
    Json polys = Json::array();
    for (const auto& f : sys.polys)
        polys.push_back(format_multipoly(f));
    j["polys"] = polys;
    j["r"] = sys.r();
    j["d"] = sys.d();
    j["declared_dim"] = sys.declared_dim;
    j["declared_m"] = sys.declared_m;
    j["count"] = r.count;
    j["main_term"] = big_to_json(r.main_term);
    j["deviation"] = big_to_json(r.deviation);
    j["constant"] = big_to_json(r.constant);
    j["lhs"] = big_to_json(r.lhs);
    j["rhs"] = big_to_json(r.rhs);
    j["slack"] = big_to_json(r.slack);
    j["two_sided"] = r.two_sided;
    j["holds"] = r.holds;
    return j;
}

Json to_json(const TrialReport& r)
{
    Json j;
    j["model"] = "product-uniform";
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    Json per = Json::array();
    for (const auto& e : r.per_ell) {
        Json row;
        row["ell"] = e.ell;
        row["p_exact"] = rational_string(e.p_exact);
        row["hits"] = e.hits;
        row["empirical_freq"] = e.empirical_freq;
        per.push_back(std::move(row));
    }
    j["per_ell"] = per;
    j["success_counts"] = r.success_counts;
    j["mean_successes"] = r.mean_successes();
    j["expected_sum"] = rational_string(r.expected_sum);
    j["harmonic_sum"] = rational_string(r.harmonic_sum);
    return j;
}

Json to_json(const ChiSquare& c)
{
    Json j;
    j["degenerate"] = c.degenerate;
    j["statistic"] = c.statistic ? Json(*c.statistic) : Json(nullptr);
    j["min_expected"] = c.min_expected;
    j["table"] = {{c.table[0][0], c.table[0][1]}, {c.table[1][0], c.table[1][1]}};
    return j;
}

std::string format_double(double v) { return Json(v).dump(); }

std::string trial_csv(const TrialReport& r)
{
    std::ostringstream os;
    os << "ell,p_exact,empirical_freq\n";
    for (const auto& e : r.per_ell)
        os << e.ell << ',' << rational_string(e.p_exact) << ',' << format_double(e.empirical_freq) << '\n';
    return os.str();
}

} // namespace tdl
