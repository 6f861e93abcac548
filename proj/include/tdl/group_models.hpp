#pragma once

// Finite models of the image group H_l(F_l): GL(n), GSp(2g) for the fixed
// antidiagonal form J, and explicit element lists. Everything counted here is
// counted by exhaustive enumeration within a Budget.

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tdl/budget.hpp"
#include "tdl/ff_core.hpp"
#include "tdl/rng.hpp"

namespace tdl {

enum class GroupKind { GL, GSp, Explicit };

/// Base-l index of a matrix, first row-major entry most significant. Throws
/// TooLarge when l^(n^2) does not fit in 64 bits.
u64 matrix_index(const FpMatrix& m);
FpMatrix matrix_from_index(u64 index, std::size_t n, u64 ell);

/// A finite subgroup given by its elements, kept sorted by matrix_index.
class ExplicitGroup {
public:
    /// Sorts and deduplicates; throws NotAGroup unless the list contains the
    /// identity and is closed under products and inverses.
    ExplicitGroup(std::size_t n, u64 ell, std::vector<FpMatrix> elements);

    std::size_t n() const { return n_; }
    u64 ell() const { return ell_; }
    const std::vector<FpMatrix>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool contains(const FpMatrix& m) const;

private:
    std::size_t n_;
    u64 ell_;
    std::vector<FpMatrix> elements_;
    std::vector<u64> keys_;
};

struct GroupModelSpec {
    GroupKind kind = GroupKind::GL;
    u64 ell = 2;
    /// matrix size: n for GL(n), 2g for GSp(2g)
    std::size_t dim = 2;
    /// the rank r: n for GL(n), g + 1 for GSp(2g); caller-supplied for Explicit
    int rank_r = 2;
    /// the index exponent N (>= 1)
    unsigned index_exponent = 1;
    std::shared_ptr<const ExplicitGroup> group;

    static GroupModelSpec gl(std::size_t n, u64 ell, unsigned index_exponent = 1);
    static GroupModelSpec gsp(std::size_t two_g, u64 ell, unsigned index_exponent = 1);
    static GroupModelSpec explicit_group(ExplicitGroup g, int rank_r, unsigned index_exponent = 1);

    /// "GL(2)", "GSp(4)", "Explicit(24)"
    std::string name() const;
    bool contains(const FpMatrix& m) const;
};

/// B * G for a representative B.
struct CosetSpec {
    GroupModelSpec group;
    FpMatrix representative;

    CosetSpec(GroupModelSpec g, FpMatrix b);
};

using EventTarget = std::variant<GroupModelSpec, CosetSpec>;

/// The fixed form with J(i, 2g+1-i) = 1 for i <= g and -1 for i > g.
FpMatrix symplectic_form(std::size_t two_g, u64 ell);
/// Multiplier mu with M^T J M = mu J, or 0 when M is not a similitude.
u64 similitude_multiplier(const FpMatrix& m);

u64 group_order(const GroupModelSpec& spec);

/// Visits every element once, in increasing matrix_index order.
void for_each_element(const GroupModelSpec& spec, const std::function<void(const FpMatrix&)>& visit,
                      const Budget& budget = {});
std::vector<FpMatrix> enumerate_group(const GroupModelSpec& spec, const Budget& budget = {});

/// Uniform element by rejection from the full matrix space.
FpMatrix sample_uniform(const GroupModelSpec& spec, CounterRng& rng);
FpMatrix sample_uniform(const CosetSpec& coset, CounterRng& rng);
FpMatrix sample_uniform(const EventTarget& target, CounterRng& rng);

inline bool has_eigenvalue_one(const FpMatrix& h) { return det_one_minus(h) == 0; }

u64 count_eigen1(const GroupModelSpec& spec, const Budget& budget = {});
u64 count_eigen1(const CosetSpec& coset, const Budget& budget = {});
u64 count_eigen1(const EventTarget& target, const Budget& budget = {});
u64 target_order(const EventTarget& target);

/// #{h in GL_2(F_l) : det(I - h) = 0} from the conjugacy-class census:
/// identity, the l^2 - 1 nontrivial unipotents, and the l - 2 split classes
/// diag(1, mu) of size l(l + 1). Equals l^3 - 2l.
u64 gl2_eigen1_by_classes(u64 ell);

/// True iff h^N lies in `subgroup` for every h of `ambient`.
bool check_index_condition(const ExplicitGroup& subgroup, const GroupModelSpec& ambient, unsigned N,
                           const Budget& budget = {});

/// Text format: header "n ell", then one matrix per line, n^2 entries row-major.
std::vector<FpMatrix> read_matrices(std::istream& in, std::size_t* n_out = nullptr, u64* ell_out = nullptr);
void write_matrices(std::ostream& out, std::size_t n, u64 ell, const std::vector<FpMatrix>& mats);
FpMatrix parse_matrix(const std::string& entries, std::size_t n, u64 ell);

} // namespace tdl
