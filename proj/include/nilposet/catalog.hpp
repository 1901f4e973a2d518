#pragma once

#include <array>
#include <filesystem>
#include <utility>

#include "nilposet/group.hpp"

namespace nilposet {

/// Power-commutator presentation: generators g_1..g_n with prime-power
/// relative orders e_i, normal words for g_i^{e_i} and for [g_j,g_i] (j > i).
/// Normal words are exponent vectors (a_1..a_n), 0 <= a_k < e_k.
struct PcPresentation {
    std::vector<int> orders;
    std::vector<std::vector<int>> power_tails;  // one per generator; empty => trivial
    struct CommTail {
        int j = 0, i = 0;  // 0-based, j > i
        std::vector<int> word;
    };
    std::vector<CommTail> comm_tails;

    int size() const { return int(orders.size()); }
    long long total_order() const;
    void validate_structure() const;  // shapes, ranges, prime-power orders
};

struct PcConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Group realized from a consistent pc presentation. Elements are normal
/// forms; multiplication is collection from the left.
class PcGroup final : public FiniteGroup {
public:
    PcGroup(PcPresentation pres, std::string name, Elem table_cap = kDefaultMulTableCap);

    const PcPresentation& presentation() const { return pres_; }
    const std::vector<int>& exponents_of(Elem a) const { return elems_[std::size_t(a)]; }
    Elem elem_of_exponents(std::span<const int> exps) const;
    std::string describe(Elem a) const override;

protected:
    Elem mul_impl(Elem a, Elem b) const override;

private:
    PcPresentation pres_;
    std::vector<std::vector<int>> elems_;     // id -> exponent vector
    std::vector<Elem> radix_to_id_;           // mixed-radix index -> id
    std::vector<std::vector<Elem>> gen_step_; // gen -> (id -> id * g)
    std::size_t radix_of(std::span<const int> exps) const;
};

// Runs the standard overlap tests; throws PcConsistencyError describing the
// first failing overlap. Called by the PcGroup constructor.
void check_pc_consistency(const PcPresentation& pres);

// --- catalog constructors ---------------------------------------------------

// 4x4 upper unitriangular matrices over F_p; generators a=I+E12, b=I+E23,
// c=I+E34 get ids 1,2,3. p must be prime and <= 7.
GroupPtr build_u4(int p, Elem table_cap = kDefaultMulTableCap);

/// Matrix backend for build_u4. Elements are the six strictly-upper entries
/// in the order (12,13,14,23,24,34).
class MatrixU4Group final : public FiniteGroup {
public:
    explicit MatrixU4Group(int p, Elem table_cap);
    int p() const { return p_; }
    std::array<int, 6> entries_of(Elem a) const;
    Elem elem_of_entries(const std::array<int, 6>& e) const;
    std::string describe(Elem a) const override;

protected:
    Elem mul_impl(Elem a, Elem b) const override;

private:
    int p_;
    std::vector<std::int32_t> id_to_key_;
    std::vector<Elem> key_to_id_;
};

GroupPtr build_pc_group(const PcPresentation& pres, std::string name,
                        Elem table_cap = kDefaultMulTableCap);

// B(3,3) as a 7-generator pc group (weight-graded basis, all relative orders
// 3). The commutator tails are validated by the consistency checker plus a
// battery: order 2187, exponent 3, 2-Engel, class 3, |T^2|=81, |T^3|=3.
GroupPtr build_burnside33();

// (He(Z/9), central extension with [x,y,y]=z=[y,x,x] central of order 9).
// Both are battery-validated; the extension has order 3^8 and exp(T^3)=9.
std::pair<GroupPtr, GroupPtr> build_he9_family();

GroupPtr build_direct_product(GroupPtr G, GroupPtr H, Elem table_cap = kDefaultMulTableCap);

/// Direct product with id pairing (i,j) -> i*|H| + j.
class ProductGroup final : public FiniteGroup {
public:
    ProductGroup(GroupPtr A, GroupPtr B, Elem table_cap);
    Elem pair(Elem a, Elem b) const { return a * B_->order() + b; }
    std::pair<Elem, Elem> components(Elem x) const {
        return {x / B_->order(), x % B_->order()};
    }
    std::string describe(Elem a) const override;

protected:
    Elem mul_impl(Elem a, Elem b) const override;

private:
    GroupPtr A_, B_;
};

// Small helpers used across tests and presets.
GroupPtr build_cyclic(int n);
GroupPtr build_elementary_abelian(int p, int r);
GroupPtr build_s3();
GroupPtr build_a4();
GroupPtr build_d4();

// --- group-spec files --------------------------------------------------------

/// Expected invariants attached to a group-spec file; each present field is
/// checked after construction.
struct GroupExpectations {
    std::optional<long long> order;
    std::optional<int> cls;
    std::optional<bool> two_engel;
    std::optional<long long> exponent;
    std::optional<long long> gamma2_order;
    std::optional<long long> gamma3_order;
    std::optional<long long> center_order;
};

struct GroupSpec {
    GroupPtr group;
    GroupExpectations expect;
};

// Loads a JSON group-spec file (kind in {matrix_u4, pc, product}); see
// README for the schema. Throws std::runtime_error with a description on
// malformed input.
GroupSpec load_group_spec(const std::filesystem::path& file);

// Runs the expectation battery; returns one CheckResult per present field.
std::vector<std::pair<std::string, CheckResult>> run_expectations(
    const FiniteGroup& G, const GroupExpectations& e);

}  // namespace nilposet
