#pragma once

#include "nilposet/families.hpp"
#include "nilposet/group.hpp"
#include "nilposet/homology.hpp"

namespace nilposet {

/// Coset poset of a subgroup family: one node per left coset of each member,
/// ordered by inclusion. Node ids increase along chains (members are sorted
/// by order, nodes by (member, canonical rep)).
struct CosetPoset {
    const FiniteGroup* parent = nullptr;
    SubgroupFamily family;

    struct Node {
        std::uint32_t member = 0;
        Elem rep = 0;  // minimal element id of the coset
    };
    std::vector<Node> nodes;
    std::vector<std::vector<std::uint32_t>> succ;         // strictly larger nodes, ascending
    std::vector<std::vector<std::uint32_t>> member_succ;  // member-level strict containment
    std::vector<std::vector<std::uint32_t>> coset_node;   // [member][element] -> node id

    std::size_t size() const { return nodes.size(); }
    std::string describe_node(std::uint32_t n) const;
};

CosetPoset build_coset_poset(const FiniteGroup& G, SubgroupFamily family,
                             std::size_t max_nodes = 2'000'000);

/// Cells per dimension as flattened sorted vertex tuples; shared by order
/// complexes and normalized tuple complexes.
struct CellComplex {
    std::vector<std::vector<std::uint32_t>> cells;  // dim k: n_k tuples of k+1 vertex ids
    bool drop_degenerate_faces = false;             // for normalized tuple complexes
    bool truncated = false;                         // higher cells exist but were not built

    int max_dim() const { return int(cells.size()) - 1; }
    std::int64_t count(int k) const;
    std::vector<std::int64_t> counts() const;
    ChainComplex chain_complex() const;
};

// All strictly increasing chains up to length max_dim+1 (max_dim = -1 for
// the full complex). Sets `truncated` when longer chains exist.
CellComplex order_complex(const CosetPoset& poset, int max_dim = -1);

// Chain counts only (no storage); full height when max_dim = -1.
std::vector<std::int64_t> chain_counts(const CosetPoset& poset, int max_dim = -1);

struct EulerCharacteristic {
    long long enumerated = 0;  // sum (-1)^k n_k over all chains
    long long weighted = 0;    // sum over member flags of (-1)^k [G:H_0]
    bool agree() const { return enumerated == weighted; }
};

// Both Euler characteristic routes at full height; they must agree.
EulerCharacteristic euler_characteristic(const CosetPoset& poset);

// The member-flag route alone (cheap even when chain enumeration is not).
long long flag_euler_characteristic(const CosetPoset& poset);

// Connected components of the 1-skeleton, each a sorted node list.
std::vector<std::vector<std::uint32_t>> connected_components(const CosetPoset& poset);

// The unique maximum node, when one exists.
std::optional<std::uint32_t> poset_maximum(const CosetPoset& poset);

/// Join decomposition along a normal subgroup N dividing the family:
/// the upper piece C(F^N, G) and the quotient piece C(im F_N, G/N).
struct JoinDecomposition {
    DividesResult split;
    CosetPoset upper_poset;
    CellComplex upper_complex;
    QuotientGroup quotient;
    CosetPoset quotient_poset;
    CellComplex quotient_complex;
};

JoinDecomposition join_decompose(const FiniteGroup& G, const SubgroupFamily& family,
                                 const Subgroup& N);

/// Slice of the complex of nil-q tuples: E_k = (k+1)-tuples lying in one
/// coset of a class <= q subgroup, with the alternating-sum boundary on the
/// normalized (no adjacent repeats) tuples.
struct MooreComplexSlice {
    int q = 0;
    int max_dim = 0;
    std::vector<std::int64_t> full_counts;  // |E_k| including degenerate tuples
    CellComplex normalized;                 // truncated at max_dim
};

MooreComplexSlice moore_complex_small(const FiniteGroup& G, int q, int max_dim,
                                      std::uint64_t budget = 10'000'000);

}  // namespace nilposet
