#pragma once

#include "nilposet/group.hpp"

namespace nilposet {

/// Family of subgroups of a fixed parent, deduplicated and canonically
/// ordered by (order, element set). For the nil-q families every member has
/// class <= q; custom families (reduced subspace models) reuse the type.
struct SubgroupFamily {
    const FiniteGroup* parent = nullptr;
    int q = 0;
    std::vector<Subgroup> members;
    std::vector<std::size_t> maximal_members;

    std::size_t size() const { return members.size(); }
    // index of the member with exactly these elements, or npos
    std::size_t find(const std::vector<Elem>& elements) const;
    bool contains_whole_group() const;
    static constexpr std::size_t npos = std::size_t(-1);
};

// All subgroups via cyclic extension: layer k+1 closures of layer-k
// subgroups with one extra element. Throws when |G| exceeds the cap.
std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& G, Elem order_cap = 1024);

// Members of N_{q+1}: subgroups of class <= q, maximal members marked.
SubgroupFamily family_nil_q(const FiniteGroup& G, int q, Elem order_cap = 1024);

// Wraps an explicit member list (sorted, deduplicated, maximal marked).
SubgroupFamily family_from_subgroups(const FiniteGroup& G, int q, std::vector<Subgroup> members);

// Verifies that pairwise intersections of members are members.
CheckResult verify_intersection_closed(const SubgroupFamily& family);

// For all pairs with cl<x,y> <= 2 (cheap criterion), checks [x,y]^3 in Z(G).
// Pairs are swept modulo Z(G)-cosets; requires cl(G) <= 3.
CheckResult centrality_hypothesis_check(const FiniteGroup& G);

// Validates the cheap pair criterion against closure+series on random pairs.
CheckResult validate_pair_criterion(const FiniteGroup& G, std::uint64_t samples = 10'000,
                                    std::uint64_t seed = 12345);

// Checks [xz,y] = [x,y] = [x,yz] for central z, exhaustively over
// transversal pairs and the center. The mod-center sweeps rely on this.
CheckResult verify_central_shift_invariance(const FiniteGroup& G, const Subgroup& Z,
                                            const SweepOptions& opt = {});

// True iff every k-generated subgroup has class <= q. Budgeted: switches to
// seeded sampling and flags the result when |G|^k exceeds the budget.
CheckResult k_generated_class_bound(const FiniteGroup& G, int k, int q,
                                    const SweepOptions& opt = {});

struct QuotientPreconditionError : std::runtime_error {
    Subgroup offending;
    QuotientPreconditionError(std::string msg, Subgroup H)
        : std::runtime_error(std::move(msg)), offending(std::move(H)) {}
};

/// Outcome of the quotient reduction: the quotient group, the pushed-forward
/// family {NH/N}, and certificates that every fiber of the poset map has a
/// maximum (plus the cl(NH) <= q precondition, checked member by member).
struct QuotientFamilyResult {
    QuotientGroup quotient;
    SubgroupFamily family;           // family on the quotient group
    CheckResult precondition;        // cl(NH) <= q for every member
    CheckResult fiber_certificates;  // each fiber has the preimage coset as maximum
    std::uint64_t fibers_checked = 0;
};

QuotientFamilyResult quotient_family(const FiniteGroup& G, const Subgroup& N, int q,
                                     const SubgroupFamily* precomputed = nullptr);

/// Split family along a normal subgroup: lower = {H : HN != G},
/// upper = {H : HN = G}; divides = closure conditions hold.
struct DividesResult {
    std::vector<std::size_t> lower;  // indices into family.members
    std::vector<std::size_t> upper;
    bool divides = false;
    std::string detail;
};

DividesResult divides_check(const FiniteGroup& G, const SubgroupFamily& family, const Subgroup& N);

}  // namespace nilposet
