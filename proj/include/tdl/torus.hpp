#pragma once

// Split maximal tori, given by parameterization: a point of T(F_l) is an
// r-tuple of units t, mapped to conjugator * diag(w_1(t), ..., w_n(t)) *
// conjugator^-1 where w_i are the weights (integer exponent vectors).

#include <functional>
#include <optional>
#include <vector>

#include "tdl/group_models.hpp"

namespace tdl {

using Character = std::vector<int>;

struct TorusDesc {
    FpMatrix conjugator;
    int rank_r = 0;
    /// one per diagonal slot of the embedding
    std::vector<Character> weights;
    /// distinct nonzero differences of weights
    std::vector<Character> roots;
    /// exponents of the homothety cocharacter: lambda acts as t_i -> lambda^h_i t_i
    Character homothety;
};

/// The diagonal torus of GL(n) or of GSp(2g) (for GSp the coordinates are
/// (t_1, ..., t_g, mu) with slot i -> t_i and slot 2g+1-i -> mu / t_i).
TorusDesc standard_torus(const GroupModelSpec& spec);

/// Value of a character at coords (units of F_l).
u64 eval_character(const Character& chi, std::span<const u64> coords, u64 ell);
FpMatrix torus_matrix(const TorusDesc& desc, std::span<const u64> coords);

struct TorusPoint {
    std::vector<u64> coords;
    FpMatrix matrix;
};

/// All (l-1)^r points, coordinates in lexicographic order over 1..l-1.
void for_each_torus_point(const TorusDesc& desc, const std::function<void(const TorusPoint&)>& visit,
                          const Budget& budget = {});
std::vector<TorusPoint> enumerate_torus_points(const TorusDesc& desc, const Budget& budget = {});

/// GL(2) only: one torus per unordered pair of distinct lines of P^1(F_l).
std::vector<TorusDesc> enumerate_split_tori(const GroupModelSpec& spec);

/// |H(F_l)| / (|W| (l-1)^r) with |W| = n! for GL(n), 2^g g! for GSp(2g).
u64 torus_count_formula(const GroupModelSpec& spec);

/// True iff alpha(coords) != 1 for every root alpha.
bool is_regular(std::span<const u64> coords, const TorusDesc& desc);

struct TorusScanReport {
    u64 ell = 0;
    unsigned N = 1;
    FpMatrix representative_B;
    u64 w_count = 0;
    u64 regular_count = 0;
    u64 irregular_in_W = 0;
    /// one entry per T/G_m orbit, sorted ascending
    std::vector<u64> fiber_sizes;
    u64 degree_d = 0;
};

/// Scans W = {t : det(I - B t^N) = 0} on the torus.
TorusScanReport scan_W_variety(const FpMatrix& B, unsigned N, const TorusDesc& desc, const Budget& budget = {});

/// det(x^N I - B) has n N distinct roots, all in F_l. A Frobenius image at the
/// witness prime satisfies this for every l in the prime set.
bool split_separable_power(const FpMatrix& B, unsigned N);

/// Uniform element of `spec` conditioned on split_separable_power, by rejection;
/// attempt k of draw `index` uses the stream (seed, l, N, index, k). Returns
/// nothing if max_attempts draws all fail.
std::optional<FpMatrix> sample_split_separable(const GroupModelSpec& spec, unsigned N, u64 seed, u64 index,
                                               u64 max_attempts = 1'000'000);

struct UnionBound {
    u64 exact_union = 0;
    u64 divided_estimate = 0;
    u64 sum_regular = 0;
    /// sum over tori of the number of distinct images B t^N per torus
    u64 sum_images = 0;
    /// no image B t^N was produced by two different tori
    bool disjoint = true;
};

/// Union over all split tori of GL(2) of {B t^N : det(I - B t^N) = 0, t^N regular}.
UnionBound union_lower_bound(const FpMatrix& B, unsigned N, const GroupModelSpec& spec, const Budget& budget = {});

struct IrregularPowerBound {
    u64 irregular_power_count = 0;
    u64 bound = 0;
    u64 nonregular_count = 0;
};

IrregularPowerBound irregular_power_bound(unsigned N, const TorusDesc& desc, const Budget& budget = {});

/// "ell,N,B_index,w_count,regular_count,irregular_in_W,degree_d,fiber_sizes"
std::string torus_csv_header();
std::string torus_csv_row(const TorusScanReport& r, std::size_t b_index);

} // namespace tdl
