#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nilposet {

// Element id inside a FiniteGroup. Id 0 is always the identity.
using Elem = std::int32_t;

enum class Backend { Matrix, PowerCommutator, Product, Table };

std::string backend_name(Backend b);

/// Enumerated finite group with element-indexed multiplication.
///
/// Ids are assigned in BFS order from the declared generators (identity
/// first), except for direct products which use the pairing (i,j) -> i*|H|+j.
/// Groups are immutable after construction; all queries are pure.
class FiniteGroup {
public:
    virtual ~FiniteGroup() = default;

    Elem order() const { return order_; }
    Backend backend() const { return backend_; }
    const std::string& name() const { return name_; }
    const std::vector<Elem>& generators() const { return generators_; }

    Elem mul(Elem a, Elem b) const {
        if (mul_table_ptr_) return mul_table_ptr_[std::size_t(a) * std::size_t(order_) + std::size_t(b)];
        return mul_impl(a, b);
    }
    Elem inv(Elem a) const { return inv_table_[std::size_t(a)]; }

    Elem conj(Elem a, Elem g) const { return mul(mul(inv(g), a), g); }  // g^{-1} a g
    // [x,y] = x^{-1} y^{-1} x y
    Elem commutator(Elem x, Elem y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }
    // [[x,y],z]
    Elem commutator3(Elem x, Elem y, Elem z) const { return commutator(commutator(x, y), z); }
    Elem power(Elem x, long long n) const;
    int element_order(Elem x) const;
    // Largest element order lcm, i.e. exp(G).
    long long exponent() const;

    bool has_mul_table() const { return mul_table_ptr_ != nullptr; }

    // Human-readable rendering of an element (matrices for the matrix
    // backend, normal words for pc groups, plain ids otherwise).
    virtual std::string describe(Elem a) const;

protected:
    FiniteGroup(Backend b, std::string name) : backend_(b), name_(std::move(name)) {}

    virtual Elem mul_impl(Elem a, Elem b) const = 0;

    // Called once by each backend at the end of construction. Builds the
    // inverse table and, when order <= table_cap, the flat mul table.
    void finish_construction(Elem order, std::vector<Elem> generators, Elem table_cap);

    Backend backend_;
    std::string name_;
    Elem order_ = 0;
    std::vector<Elem> generators_;
    std::vector<std::uint16_t> mul_table_small_;
    std::vector<Elem> mul_table_wide_;
    const Elem* mul_table_ptr_ = nullptr;  // points into one of the above (widened)
    std::vector<Elem> inv_table_;

private:
    std::vector<Elem> mul_table_flat_;  // canonical Elem-typed table
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Default cap on the order up to which a flat order^2 multiplication table
// is materialized (8192^2 int32 entries = 256 MiB upper bound; the catalog
// maximum is 6561).
inline constexpr Elem kDefaultMulTableCap = 8192;

/// Group given by an explicit multiplication table (quotients, ad-hoc tests).
class TableGroup final : public FiniteGroup {
public:
    TableGroup(std::vector<Elem> table, Elem order, std::vector<Elem> generators,
               std::string name);

protected:
    Elem mul_impl(Elem a, Elem b) const override;

private:
    std::vector<Elem> table_;
};

/// Element-set subgroup with a generator witness.
struct Subgroup {
    const FiniteGroup* parent = nullptr;
    std::vector<Elem> elements;    // sorted, contains 0
    std::vector<Elem> generators;  // witness; closure(generators) == elements

    std::size_t order() const { return elements.size(); }
    bool contains(Elem g) const;
    bool contains_all(const Subgroup& other) const;
    bool same_elements(const Subgroup& other) const { return elements == other.elements; }
};

/// Lower central series G = T^1 >= T^2 >= ... ; cls is empty when the series
/// stabilizes at a nontrivial term (not nilpotent).
struct CentralSeries {
    std::vector<Subgroup> terms;
    std::optional<int> cls;

    bool nilpotent() const { return cls.has_value(); }
    int class_or_throw() const;
    // T^k, 1-based; past the computed terms this is the stable tail
    // (trivial for nilpotent groups).
    const Subgroup& term(int k) const;
};

/// Outcome of a swept predicate check: ok/witness, plus whether the sweep
/// was exhaustive or budget-sampled.
struct CheckResult {
    bool ok = true;
    bool sampled = false;
    std::vector<Elem> witness;  // offending tuple when !ok
    std::string detail;
    std::uint64_t checked = 0;
};

struct SweepOptions {
    std::uint64_t budget = 100'000'000;  // elementary evaluations before sampling
    std::uint64_t seed = 12345;
    std::uint64_t sample_count = 1'000'000;
};

// --- group_core operations -------------------------------------------------

Subgroup subgroup_closure(const FiniteGroup& G, std::vector<Elem> gens);
Subgroup trivial_subgroup(const FiniteGroup& G);
Subgroup whole_group(const FiniteGroup& G);

CentralSeries lower_central_series(const FiniteGroup& G, const Subgroup& H);
CentralSeries lower_central_series(const FiniteGroup& G);
int nilpotency_class(const FiniteGroup& G);  // throws if not nilpotent

Subgroup center(const FiniteGroup& G);
bool is_abelian(const FiniteGroup& G);

// [x,y,y] = 1 for all pairs; witness is the first violating pair.
CheckResult is_two_engel(const FiniteGroup& G, const SweepOptions& opt = {});

// True iff the tuple lies in one left coset of a class <= q subgroup,
// i.e. cl(<x_k^{-1}x_0, ..., x_k^{-1}x_{k-1}>) <= q.
bool is_affinely_nil(const FiniteGroup& G, std::span<const Elem> tuple, int q);

// cl(<gens>) <= q. For q <= 2 this is decided by generator commutators
// alone ([s_i,s_j] = 1, resp. [s_i,s_j,s_k] = 1, which is exact in any
// group); higher q falls back to closure plus the central series.
bool generated_class_le(const FiniteGroup& G, std::span<const Elem> gens, int q);

// Fast test for cl<u,v> <= 2: the commutator [u,v] commutes with both
// generators. Cross-validated against closure+series in the test suite.
bool pair_class_le2(const FiniteGroup& G, Elem u, Elem v);

// Left transversal of the subgroup Z: minimal element id per coset,
// ascending. reps[0] == 0.
std::vector<Elem> left_transversal(const FiniteGroup& G, const Subgroup& Z);

/// Quotient of G by a normal subgroup, as a table-backed group on coset ids.
/// Coset ids are assigned by ascending minimal element; the identity coset
/// gets id 0. coset_of[g] is the coset id of g; reps[c] its canonical rep.
struct QuotientGroup {
    GroupPtr group;
    std::vector<Elem> coset_of;
    std::vector<Elem> reps;
};
QuotientGroup quotient_by_normal(const FiniteGroup& G, const Subgroup& N, std::string name);
bool is_normal(const FiniteGroup& G, const Subgroup& N);

// Spot-check of the group axioms (associativity, identity, inverses);
// exhaustive for order <= 256, seeded-sampled above.
CheckResult validate_group_axioms(const FiniteGroup& G, const SweepOptions& opt = {});

// Image of a subgroup under the quotient map described by coset_of.
Subgroup image_subgroup(const FiniteGroup& Q, const std::vector<Elem>& coset_of,
                        const Subgroup& H);

}  // namespace nilposet
