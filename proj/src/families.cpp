#include "nilposet/families.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace nilposet {

namespace {

// dedup key: FNV-1a over the sorted element ids
std::uint64_t elements_hash(const std::vector<Elem>& v) {
    std::uint64_t h = 1469598103934665603ull;
    for (Elem e : v) {
        h ^= std::uint64_t(std::uint32_t(e));
        h *= 1099511628211ull;
    }
    return h;
}

struct SubgroupSetKey {
    bool insert(const Subgroup& H) {  // true if new
        auto range = seen.equal_range(elements_hash(H.elements));
        for (auto it = range.first; it != range.second; ++it)
            if (store->at(it->second).elements == H.elements) return false;
        seen.emplace(elements_hash(H.elements), store->size());
        store->push_back(H);
        return true;
    }
    std::vector<Subgroup>* store;
    std::unordered_multimap<std::uint64_t, std::size_t> seen;
};

void sort_canonically(std::vector<Subgroup>& subs) {
    std::sort(subs.begin(), subs.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
        return a.elements < b.elements;
    });
}

std::vector<std::size_t> mark_maximal(const std::vector<Subgroup>& members) {
    std::vector<std::size_t> maximal;
    for (std::size_t i = 0; i < members.size(); ++i) {
        bool is_max = true;
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (i == j) continue;
            if (members[j].order() > members[i].order() && members[j].contains_all(members[i])) {
                is_max = false;
                break;
            }
        }
        if (is_max) maximal.push_back(i);
    }
    return maximal;
}

}  // namespace

std::size_t SubgroupFamily::find(const std::vector<Elem>& elements) const {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].elements == elements) return i;
    return npos;
}

bool SubgroupFamily::contains_whole_group() const {
    return !members.empty() && Elem(members.back().order()) == parent->order();
}

std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& G, Elem order_cap) {
    if (G.order() > order_cap)
        throw std::runtime_error("enumerate_subgroups: |G| = " + std::to_string(G.order()) +
                                 " exceeds the cap " + std::to_string(order_cap) +
                                 "; use the reduced/quotient route");
    std::vector<Subgroup> subs;
    SubgroupSetKey key{&subs, {}};
    key.insert(trivial_subgroup(G));
    // cyclic extension: grow every known subgroup by one outside element
    for (std::size_t next = 0; next < subs.size(); ++next) {
        // copy generators; subs may reallocate during the loop
        const std::vector<Elem> base_gens = subs[next].generators;
        std::vector<char> inside(std::size_t(G.order()), 0);
        for (Elem e : subs[next].elements) inside[std::size_t(e)] = 1;
        for (Elem g = 1; g < G.order(); ++g) {
            if (inside[std::size_t(g)]) continue;
            std::vector<Elem> gens = base_gens;
            gens.push_back(g);
            key.insert(subgroup_closure(G, std::move(gens)));
        }
    }
    sort_canonically(subs);
    return subs;
}

SubgroupFamily family_nil_q(const FiniteGroup& G, int q, Elem order_cap) {
    std::vector<Subgroup> all = enumerate_subgroups(G, order_cap);
    std::vector<Subgroup> members;
    for (auto& H : all) {
        CentralSeries s = lower_central_series(G, H);
        if (s.nilpotent() && *s.cls <= q) members.push_back(std::move(H));
    }
    return family_from_subgroups(G, q, std::move(members));
}

SubgroupFamily family_from_subgroups(const FiniteGroup& G, int q, std::vector<Subgroup> members) {
    std::vector<Subgroup> dedup;
    SubgroupSetKey key{&dedup, {}};
    for (auto& H : members) key.insert(H);
    sort_canonically(dedup);
    SubgroupFamily fam;
    fam.parent = &G;
    fam.q = q;
    fam.members = std::move(dedup);
    fam.maximal_members = mark_maximal(fam.members);
    return fam;
}

CheckResult verify_intersection_closed(const SubgroupFamily& family) {
    CheckResult r;
    const auto& m = family.members;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            std::vector<Elem> inter;
            std::set_intersection(m[i].elements.begin(), m[i].elements.end(),
                                  m[j].elements.begin(), m[j].elements.end(),
                                  std::back_inserter(inter));
            ++r.checked;
            if (family.find(inter) == SubgroupFamily::npos) {
                r.ok = false;
                r.detail = "intersection of members " + std::to_string(i) + " and " +
                           std::to_string(j) + " is not a member";
                return r;
            }
        }
    return r;
}

CheckResult centrality_hypothesis_check(const FiniteGroup& G) {
    CentralSeries s = lower_central_series(G);
    if (!s.nilpotent() || *s.cls > 3)
        throw std::invalid_argument("centrality_hypothesis_check requires cl(G) <= 3");
    Subgroup Z = center(G);
    std::vector<char> in_z(std::size_t(G.order()), 0);
    for (Elem z : Z.elements) in_z[std::size_t(z)] = 1;
    std::vector<Elem> reps = left_transversal(G, Z);

    CheckResult r;
    for (Elem x : reps)
        for (Elem y : reps) {
            if (!pair_class_le2(G, x, y)) continue;
            ++r.checked;
            Elem c = G.commutator(x, y);
            Elem c3 = G.mul(G.mul(c, c), c);
            if (!in_z[std::size_t(c3)]) {
                r.ok = false;
                r.witness = {x, y};
                r.detail = "cl<x,y> <= 2 but [x,y]^3 is not central";
                return r;
            }
        }
    r.detail = "pairs swept modulo center cosets";
    return r;
}

CheckResult validate_pair_criterion(const FiniteGroup& G, std::uint64_t samples,
                                    std::uint64_t seed) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, G.order() - 1);
    const std::uint64_t total = std::uint64_t(G.order()) * std::uint64_t(G.order());
    const bool exhaustive = total <= samples;
    r.sampled = !exhaustive;
    // ground truth by closure + central series, memoized per subgroup
    std::map<std::vector<Elem>, bool> memo;
    auto truth_of = [&](Elem u, Elem v) {
        Subgroup H = subgroup_closure(G, {u, v});
        auto it = memo.find(H.elements);
        if (it != memo.end()) return it->second;
        CentralSeries s = lower_central_series(G, H);
        bool truth = s.nilpotent() && *s.cls <= 2;
        memo.emplace(std::move(H.elements), truth);
        return truth;
    };
    auto trial = [&](Elem u, Elem v) {
        ++r.checked;
        if (truth_of(u, v) != pair_class_le2(G, u, v)) {
            r.ok = false;
            r.witness = {u, v};
            r.detail = "fast class<=2 criterion disagrees with closure computation";
            return false;
        }
        return true;
    };
    if (exhaustive) {
        for (Elem u = 0; u < G.order(); ++u)
            for (Elem v = 0; v < G.order(); ++v)
                if (!trial(u, v)) return r;
    } else {
        for (std::uint64_t i = 0; i < samples; ++i)
            if (!trial(pick(rng), pick(rng))) return r;
    }
    return r;
}

CheckResult verify_central_shift_invariance(const FiniteGroup& G, const Subgroup& Z,
                                            const SweepOptions& opt) {
    CheckResult r;
    std::vector<Elem> reps = left_transversal(G, Z);
    // transversal reps x all second arguments x center shifts: enough to
    // propagate invariance to arbitrary pairs
    const std::uint64_t total =
        std::uint64_t(reps.size()) * std::uint64_t(G.order()) * Z.elements.size();
    std::mt19937_64 rng(opt.seed);
    auto trial = [&](Elem x, Elem y, Elem z) {
        Elem base = G.commutator(x, y);
        ++r.checked;
        if (G.commutator(G.mul(x, z), y) != base || G.commutator(x, G.mul(y, z)) != base) {
            r.ok = false;
            r.witness = {x, y, z};
            r.detail = "[xz,y] or [x,yz] differs from [x,y] for central z";
            return false;
        }
        return true;
    };
    if (total <= opt.budget) {
        for (Elem x : reps)
            for (Elem y = 0; y < G.order(); ++y)
                for (Elem z : Z.elements)
                    if (!trial(x, y, z)) return r;
    } else {
        r.sampled = true;
        std::uniform_int_distribution<Elem> py(0, G.order() - 1);
        std::uniform_int_distribution<std::size_t> pr(0, reps.size() - 1);
        std::uniform_int_distribution<std::size_t> pz(0, Z.elements.size() - 1);
        for (std::uint64_t i = 0; i < opt.sample_count; ++i)
            if (!trial(reps[pr(rng)], py(rng), Z.elements[pz(rng)])) return r;
    }
    return r;
}

CheckResult k_generated_class_bound(const FiniteGroup& G, int k, int q, const SweepOptions& opt) {
    CheckResult r;
    double total = 1;
    for (int i = 0; i < k; ++i) total *= double(G.order());

    std::vector<Elem> tuple(std::size_t(k), 0);
    auto class_ok = [&]() {
        ++r.checked;
        if (!generated_class_le(G, tuple, q)) {
            r.ok = false;
            r.witness = tuple;
            r.detail = std::to_string(k) + "-generated subgroup of class > " + std::to_string(q);
            return false;
        }
        return true;
    };
    if (total <= double(opt.budget)) {
        // odometer over G^k
        while (true) {
            if (!class_ok()) return r;
            int i = k - 1;
            while (i >= 0 && tuple[std::size_t(i)] == G.order() - 1) tuple[std::size_t(i--)] = 0;
            if (i < 0) break;
            ++tuple[std::size_t(i)];
        }
    } else {
        r.sampled = true;
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<Elem> pick(0, G.order() - 1);
        for (std::uint64_t s = 0; s < opt.sample_count; ++s) {
            for (auto& t : tuple) t = pick(rng);
            if (!class_ok()) return r;
        }
    }
    return r;
}

QuotientFamilyResult quotient_family(const FiniteGroup& G, const Subgroup& N, int q,
                                     const SubgroupFamily* precomputed) {
    SubgroupFamily local;
    if (!precomputed) {
        local = family_nil_q(G, q);
        precomputed = &local;
    }
    const SubgroupFamily& fam = *precomputed;

    QuotientFamilyResult out;
    out.quotient = quotient_by_normal(G, N, G.name() + "/N");
    const FiniteGroup& Q = *out.quotient.group;
    const auto& coset_of = out.quotient.coset_of;

    // precondition: cl(NH) <= q for every member, NH itself a member
    out.precondition.ok = true;
    std::vector<std::vector<Elem>> nh_elements;  // per member
    for (const Subgroup& H : fam.members) {
        std::vector<Elem> gens = N.generators;
        gens.insert(gens.end(), H.generators.begin(), H.generators.end());
        if (N.order() > 1 && N.generators.empty())
            gens.insert(gens.end(), N.elements.begin(), N.elements.end());
        Subgroup NH = subgroup_closure(G, std::move(gens));
        CentralSeries s = lower_central_series(G, NH);
        ++out.precondition.checked;
        if (!(s.nilpotent() && *s.cls <= q)) {
            out.precondition.ok = false;
            out.precondition.detail = "cl(NH) > q for a member of order " + std::to_string(H.order());
            out.precondition.witness = H.generators;
            throw QuotientPreconditionError("quotient_family: cl(NH) > q for some member", H);
        }
        if (fam.find(NH.elements) == SubgroupFamily::npos) {
            out.precondition.ok = false;
            throw QuotientPreconditionError("quotient_family: NH is not a family member", NH);
        }
        nh_elements.push_back(std::move(NH.elements));
    }

    // pushed-forward family {NH/N} = {image of H}
    std::vector<Subgroup> pushed;
    for (const Subgroup& H : fam.members) pushed.push_back(image_subgroup(Q, coset_of, H));
    out.family = family_from_subgroups(Q, q, std::move(pushed));

    // fiber certificates: for the poset map gH -> im(g) im(H), the fiber over
    // every target node must have the preimage coset as its maximum.
    CheckResult& fc = out.fiber_certificates;
    fc.ok = true;
    // source nodes: (member index, canonical rep)
    struct SrcNode {
        std::size_t member;
        Elem rep;
    };
    std::vector<SrcNode> src;
    for (std::size_t mi = 0; mi < fam.members.size(); ++mi) {
        const Subgroup& H = fam.members[mi];
        std::vector<char> covered(std::size_t(G.order()), 0);
        for (Elem g = 0; g < G.order(); ++g) {
            if (covered[std::size_t(g)]) continue;
            src.push_back({mi, g});
            for (Elem h : H.elements) covered[std::size_t(G.mul(g, h))] = 1;
        }
    }
    for (std::size_t ti = 0; ti < out.family.members.size(); ++ti) {
        const Subgroup& Ht = out.family.members[ti];
        std::vector<char> covered(std::size_t(Q.order()), 0);
        for (Elem gbar = 0; gbar < Q.order(); ++gbar) {
            if (covered[std::size_t(gbar)]) continue;
            // target node gbar*Ht; mark its cosets
            std::vector<char> in_target(std::size_t(Q.order()), 0);
            for (Elem h : Ht.elements) {
                Elem e = Q.mul(gbar, h);
                covered[std::size_t(e)] = 1;
                in_target[std::size_t(e)] = 1;
            }
            // preimage coset in G
            std::vector<char> in_preimage(std::size_t(G.order()), 0);
            std::size_t pre_size = 0;
            for (Elem x = 0; x < G.order(); ++x)
                if (in_target[std::size_t(coset_of[std::size_t(x)])]) {
                    in_preimage[std::size_t(x)] = 1;
                    ++pre_size;
                }
            // the preimage subgroup of Ht must itself be a family member
            std::vector<Elem> sub_elems;
            for (Elem x = 0; x < G.order(); ++x)
                if (Elem c = coset_of[std::size_t(x)]; Ht.contains(c)) sub_elems.push_back(x);
            if (fam.find(sub_elems) == SubgroupFamily::npos) {
                fc.ok = false;
                fc.detail = "preimage subgroup of a pushed member is not a family member";
                return out;
            }
            ++fc.checked;
            ++out.fibers_checked;
            bool fiber_nonempty = false;
            for (const SrcNode& s : src) {
                // node rep coset: s.rep * H_member; image inside target?
                const Subgroup& Hs = fam.members[s.member];
                bool in_fiber = true;
                for (Elem h : Hs.elements) {
                    Elem x = G.mul(s.rep, h);
                    if (!in_target[std::size_t(coset_of[std::size_t(x)])]) {
                        in_fiber = false;
                        break;
                    }
                }
                if (!in_fiber) continue;
                fiber_nonempty = true;
                for (Elem h : Hs.elements) {
                    if (!in_preimage[std::size_t(G.mul(s.rep, h))]) {
                        fc.ok = false;
                        fc.detail = "fiber node not below the preimage coset";
                        fc.witness = {s.rep};
                        return out;
                    }
                }
            }
            if (!fiber_nonempty || pre_size == 0) {
                fc.ok = false;
                fc.detail = "fiber unexpectedly empty";
                return out;
            }
        }
    }
    return out;
}

DividesResult divides_check(const FiniteGroup& G, const SubgroupFamily& family,
                            const Subgroup& N) {
    if (!is_normal(G, N)) throw std::invalid_argument("divides_check: N is not normal");
    DividesResult out;
    std::vector<std::vector<Elem>> products;  // HN element sets per member
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const Subgroup& H = family.members[i];
        std::vector<Elem> gens = H.generators;
        gens.insert(gens.end(), N.generators.begin(), N.generators.end());
        if (N.generators.empty() && N.order() > 1)
            gens.insert(gens.end(), N.elements.begin(), N.elements.end());
        Subgroup HN = subgroup_closure(G, std::move(gens));
        bool whole = Elem(HN.order()) == G.order();
        (whole ? out.upper : out.lower).push_back(i);
        products.push_back(std::move(HN.elements));
    }
    out.divides = true;
    for (std::size_t i : out.lower) {
        if (family.find(products[i]) == SubgroupFamily::npos) {
            out.divides = false;
            out.detail = "HN not in family for a lower member";
            return out;
        }
        for (std::size_t j : out.upper) {
            std::vector<Elem> inter;
            std::set_intersection(products[i].begin(), products[i].end(),
                                  family.members[j].elements.begin(),
                                  family.members[j].elements.end(), std::back_inserter(inter));
            if (family.find(inter) == SubgroupFamily::npos) {
                out.divides = false;
                out.detail = "HN ∩ K not in family";
                return out;
            }
        }
    }
    return out;
}

}  // namespace nilposet
