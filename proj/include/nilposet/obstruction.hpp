#pragma once

#include "nilposet/group.hpp"

namespace nilposet {

/// Additive coordinates of an element of the last central term, in its
/// invariant-factor basis; component i is reduced mod orders[i].
struct CochainValue {
    std::vector<int> c;
    bool zero() const {
        for (int x : c)
            if (x) return false;
        return true;
    }
    bool operator==(const CochainValue&) const = default;
};

/// Abelian structure of T^3(G) (cl(G) <= 3): invariant-factor generators,
/// their orders, the exponent, and a discrete log for every element.
struct Gamma3Data {
    const FiniteGroup* parent = nullptr;
    Subgroup gamma3;
    std::vector<Elem> gens;          // one per invariant factor > 1
    std::vector<long long> orders;   // divisibility chain, each > 1
    long long exponent = 1;          // lcm = last order (1 for trivial T^3)

    CochainValue dlog(Elem g) const;  // g must lie in T^3
    CochainValue zero_value() const { return CochainValue{std::vector<int>(orders.size(), 0)}; }
    CochainValue add(const CochainValue& a, const CochainValue& b) const;
    CochainValue sub(const CochainValue& a, const CochainValue& b) const;

    // internal: dense coordinates per T^3 element, index via pos_in_gamma3
    std::vector<std::vector<int>> coords;
    std::vector<std::int32_t> pos_in_gamma3;  // -1 outside T^3
};

Gamma3Data gamma3_data(const FiniteGroup& G);

// omega1(x,y) = dlog [x,y,xy];  omega2(x,y,z) = dlog [x,y,z]
CochainValue omega1(const Gamma3Data& D, Elem x, Elem y);
CochainValue omega2(const Gamma3Data& D, Elem x, Elem y, Elem z);

/// Result of a cocycle verification sweep.
struct CocycleOutcome {
    enum class Status { Verified, HypothesisViolated, IdentityViolated };
    Status status = Status::Verified;
    CheckResult sweep;              // counts, sampled flag, witness on failure
    std::vector<Elem> witness;      // hypothesis witness or violating tuple
    std::string note;

    bool verified() const { return status == Status::Verified; }
};

// Verifies omega1(d(x,y,z)) = 0 over all nil-2 triples, swept as transversal
// pairs (u,v) passing the class<=2 criterion times all translates
// (center cosets factored out; the shift invariance is asserted first).
// Requires the centrality hypothesis; on violation reports the witness pair.
CocycleOutcome cocycle_check_w1(const FiniteGroup& G, const SweepOptions& opt = {});

// Verifies omega2(d(x,y,z,w)) = 0 over all nil-2 quadruples. Direct sweep
// for small groups; otherwise the certified quotient strategy: (a) the
// bracket factors through G/T^2 (exhaustive shift check), (b) nil-2 iff the
// induced form vanishes on the difference triple (sampled lifts), then the
// identity over all quadruple images. Requires a 2-Engel group.
CocycleOutcome cocycle_check_w2(const FiniteGroup& G, const SweepOptions& opt = {},
                                std::uint64_t sample_lifts = 100'000);

/// Cochain evaluated against the explicit homology cycles
/// c(x,y) = (x,y)+(y,1)+(1,x) and c(x,y,z) = (x,y,z)-(1,y,z)+(1,x,z)-(1,x,y).
struct PairingResult {
    CochainValue value;
    bool boundary_is_zero = false;        // formal d(cycle) = 0 verified
    bool matches_commutator = false;      // value == dlog [x,y,xy] resp. [x,y,z]
};

enum class PairingMode { C2, C3 };

PairingResult cycle_pairing(const FiniteGroup& G, const Gamma3Data& D, PairingMode mode,
                            std::span<const Elem> args);

/// Named identity sweeps: Hall-Witt, the 2-Engel cyclic identity, and
/// trilinearity of the bracket into T^3. Direct exhaustive within budget,
/// otherwise certified on T^2-coset representatives plus seeded sampling.
struct IdentityReport {
    std::vector<std::pair<std::string, CheckResult>> checks;
    bool all_ok() const {
        for (const auto& [n, r] : checks)
            if (!r.ok) return false;
        return true;
    }
};

IdentityReport identity_suite(const FiniteGroup& G, const SweepOptions& opt = {});

}  // namespace nilposet
