#include "nilposet/poset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace nilposet {

std::string CosetPoset::describe_node(std::uint32_t n) const {
    const Node& nd = nodes[std::size_t(n)];
    std::ostringstream os;
    os << parent->describe(nd.rep) << " * H" << nd.member << "(order "
       << family.members[nd.member].order() << ")";
    return os.str();
}

CosetPoset build_coset_poset(const FiniteGroup& G, SubgroupFamily family, std::size_t max_nodes) {
    CosetPoset P;
    P.parent = &G;
    P.family = std::move(family);
    const auto& members = P.family.members;

    std::size_t expected = 0;
    for (const auto& H : members) expected += std::size_t(G.order()) / H.order();
    if (expected > max_nodes)
        throw std::runtime_error("coset poset would have " + std::to_string(expected) +
                                 " nodes, over the budget of " + std::to_string(max_nodes));

    P.coset_node.resize(members.size());
    for (std::uint32_t mi = 0; mi < members.size(); ++mi) {
        const Subgroup& H = members[mi];
        auto& slot = P.coset_node[mi];
        slot.assign(std::size_t(G.order()), UINT32_MAX);
        for (Elem g = 0; g < G.order(); ++g) {
            if (slot[std::size_t(g)] != UINT32_MAX) continue;
            auto id = std::uint32_t(P.nodes.size());
            P.nodes.push_back({mi, g});
            for (Elem h : H.elements) slot[std::size_t(G.mul(g, h))] = id;
        }
    }

    // member-level containment (strict)
    P.member_succ.resize(members.size());
    for (std::uint32_t a = 0; a < members.size(); ++a)
        for (std::uint32_t b = a + 1; b < members.size(); ++b)
            if (members[b].order() > members[a].order() && members[b].contains_all(members[a]))
                P.member_succ[a].push_back(b);

    P.succ.resize(P.nodes.size());
    for (std::uint32_t n = 0; n < P.nodes.size(); ++n) {
        const auto& nd = P.nodes[n];
        for (std::uint32_t m2 : P.member_succ[nd.member])
            P.succ[n].push_back(P.coset_node[m2][std::size_t(nd.rep)]);
        // member indices ascend, hence node ids do as well
    }
    return P;
}

std::int64_t CellComplex::count(int k) const {
    if (k < 0 || k > max_dim()) return 0;
    return std::int64_t(cells[std::size_t(k)].size() / std::size_t(k + 1));
}

std::vector<std::int64_t> CellComplex::counts() const {
    std::vector<std::int64_t> out;
    for (int k = 0; k <= max_dim(); ++k) out.push_back(count(k));
    return out;
}

namespace {

bool tuple_degenerate(const std::uint32_t* t, int len) {
    for (int i = 0; i + 1 < len; ++i)
        if (t[i] == t[i + 1]) return true;
    return false;
}

// index of a sorted tuple list entry via binary search
std::int64_t tuple_index(const std::vector<std::uint32_t>& flat, int len,
                         const std::uint32_t* needle) {
    std::int64_t lo = 0, hi = std::int64_t(flat.size() / std::size_t(len)) - 1;
    while (lo <= hi) {
        std::int64_t mid = (lo + hi) / 2;
        const std::uint32_t* probe = flat.data() + std::size_t(mid) * std::size_t(len);
        int cmp = 0;
        for (int i = 0; i < len; ++i) {
            if (probe[i] != needle[i]) {
                cmp = probe[i] < needle[i] ? -1 : 1;
                break;
            }
        }
        if (cmp == 0) return mid;
        if (cmp < 0)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return -1;
}

}  // namespace

ChainComplex CellComplex::chain_complex() const {
    ChainComplex cc;
    cc.truncated = truncated;
    for (int k = 0; k <= max_dim(); ++k) cc.dims.push_back(count(k));
    for (int k = 1; k <= max_dim(); ++k) {
        SparseIntMatrix d;
        d.rows = count(k - 1);
        d.cols = count(k);
        const auto& flat = cells[std::size_t(k)];
        const int len = k + 1;
        std::vector<std::uint32_t> face(static_cast<std::size_t>(k));
        for (std::int64_t j = 0; j < d.cols; ++j) {
            const std::uint32_t* t = flat.data() + std::size_t(j) * std::size_t(len);
            for (int i = 0; i < len; ++i) {
                int fi = 0;
                for (int s = 0; s < len; ++s)
                    if (s != i) face[std::size_t(fi++)] = t[s];
                if (drop_degenerate_faces && tuple_degenerate(face.data(), k)) continue;
                std::int64_t row = tuple_index(cells[std::size_t(k - 1)], k, face.data());
                if (row < 0) throw std::logic_error("cell complex: face not found");
                d.add(std::int32_t(row), std::int32_t(j), (i % 2) ? -1 : 1);
            }
        }
        d.canonicalize();
        cc.boundaries.push_back(std::move(d));
    }
    return cc;
}

namespace {

// DFS over increasing chains; records counts, optionally stores tuples.
struct ChainWalker {
    const CosetPoset& P;
    int max_dim;  // -1: unlimited
    std::vector<std::int64_t> counts;
    std::vector<std::vector<std::uint32_t>>* store = nullptr;
    bool overflow = false;  // found a chain longer than max_dim+1 nodes

    std::vector<std::uint32_t> path;

    void visit(std::uint32_t n) {
        if (max_dim >= 0 && int(path.size()) == max_dim + 1) {
            overflow = true;
            return;
        }
        path.push_back(n);
        int dim = int(path.size()) - 1;
        if (int(counts.size()) <= dim) counts.resize(std::size_t(dim) + 1, 0);
        ++counts[std::size_t(dim)];
        if (store) {
            if (int(store->size()) <= dim) store->resize(std::size_t(dim) + 1);
            auto& flat = (*store)[std::size_t(dim)];
            flat.insert(flat.end(), path.begin(), path.end());
        }
        for (std::uint32_t s : P.succ[n]) visit(s);
        path.pop_back();
    }

    void run() {
        for (std::uint32_t n = 0; n < P.nodes.size(); ++n) visit(n);
    }
};

}  // namespace

CellComplex order_complex(const CosetPoset& poset, int max_dim) {
    CellComplex cx;
    ChainWalker w{poset, max_dim, {}, &cx.cells, false, {}};
    w.run();
    cx.truncated = w.overflow;
    if (cx.cells.empty()) cx.cells.resize(1);  // at least degree 0 slot
    return cx;
}

std::vector<std::int64_t> chain_counts(const CosetPoset& poset, int max_dim) {
    ChainWalker w{poset, max_dim, {}, nullptr, false, {}};
    w.run();
    return w.counts;
}

long long flag_euler_characteristic(const CosetPoset& poset) {
    // each member flag H_0 < ... < H_k contributes (-1)^k [G:H_0] chains
    const auto& members = poset.family.members;
    const long long n = poset.parent->order();
    struct FlagWalker {
        const CosetPoset& P;
        long long total = 0;
        int depth = 0;
        void visit(std::uint32_t m, long long idx0) {
            total += (depth % 2 ? -1 : 1) * idx0;
            ++depth;
            for (std::uint32_t s : P.member_succ[m]) visit(s, idx0);
            --depth;
        }
    } fw{poset, 0, 0};
    for (std::uint32_t m = 0; m < members.size(); ++m)
        fw.visit(m, n / (long long)members[m].order());
    return fw.total;
}

EulerCharacteristic euler_characteristic(const CosetPoset& poset) {
    EulerCharacteristic chi;
    auto counts = chain_counts(poset, -1);
    for (std::size_t k = 0; k < counts.size(); ++k)
        chi.enumerated += (k % 2 ? -1 : 1) * counts[k];
    chi.weighted = flag_euler_characteristic(poset);
    return chi;
}

std::vector<std::vector<std::uint32_t>> connected_components(const CosetPoset& poset) {
    const std::size_t n = poset.size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v : poset.succ[u]) parent[find(u)] = find(v);
    std::map<std::uint32_t, std::vector<std::uint32_t>> comps;
    for (std::uint32_t u = 0; u < n; ++u) comps[find(u)].push_back(u);
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& [root, members] : comps) out.push_back(std::move(members));
    return out;
}

std::optional<std::uint32_t> poset_maximum(const CosetPoset& poset) {
    std::optional<std::uint32_t> cand;
    for (std::uint32_t u = 0; u < poset.size(); ++u) {
        if (!poset.succ[u].empty()) continue;
        if (cand) return std::nullopt;  // two maximal nodes
        cand = u;
    }
    if (!cand) return std::nullopt;
    for (std::uint32_t u = 0; u < poset.size(); ++u) {
        if (u == *cand) continue;
        if (!std::binary_search(poset.succ[u].begin(), poset.succ[u].end(), *cand))
            return std::nullopt;
    }
    return cand;
}

JoinDecomposition join_decompose(const FiniteGroup& G, const SubgroupFamily& family,
                                 const Subgroup& N) {
    JoinDecomposition out;
    out.split = divides_check(G, family, N);
    if (!out.split.divides)
        throw std::runtime_error("join_decompose: N does not divide the family (" +
                                 out.split.detail + ")");
    if (out.split.upper.empty())
        throw std::runtime_error("join_decompose: the upper family F^N is empty");

    std::vector<Subgroup> upper;
    for (std::size_t i : out.split.upper) upper.push_back(family.members[i]);
    out.upper_poset = build_coset_poset(G, family_from_subgroups(G, family.q, std::move(upper)));
    out.upper_complex = order_complex(out.upper_poset);

    out.quotient = quotient_by_normal(G, N, G.name() + "/N");
    std::vector<Subgroup> lower_images;
    for (std::size_t i : out.split.lower)
        lower_images.push_back(
            image_subgroup(*out.quotient.group, out.quotient.coset_of, family.members[i]));
    out.quotient_poset = build_coset_poset(
        *out.quotient.group, family_from_subgroups(*out.quotient.group, family.q, std::move(lower_images)));
    out.quotient_complex = order_complex(out.quotient_poset);
    return out;
}

MooreComplexSlice moore_complex_small(const FiniteGroup& G, int q, int max_dim,
                                      std::uint64_t budget) {
    double total = 1;
    for (int k = 0; k <= max_dim; ++k) total *= double(G.order());
    if (total > double(budget))
        throw std::runtime_error("moore_complex_small: |G|^(max_dim+1) exceeds the budget");

    MooreComplexSlice out;
    out.q = q;
    out.max_dim = max_dim;
    out.normalized.drop_degenerate_faces = true;
    out.normalized.truncated = true;  // tuple complexes continue in all dimensions
    out.normalized.cells.resize(std::size_t(max_dim) + 1);

    // memoized nil-q test on the set of difference elements
    std::map<std::vector<Elem>, bool> memo;
    auto tuple_ok = [&](std::span<const Elem> tuple) {
        Elem last = tuple.back();
        Elem li = G.inv(last);
        std::vector<Elem> diffs;
        for (std::size_t i = 0; i + 1 < tuple.size(); ++i) diffs.push_back(G.mul(li, tuple[i]));
        std::sort(diffs.begin(), diffs.end());
        diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
        auto it = memo.find(diffs);
        if (it != memo.end()) return it->second;
        Subgroup H = subgroup_closure(G, diffs);
        CentralSeries s = lower_central_series(G, H);
        bool ok = s.nilpotent() && *s.cls <= q;
        memo.emplace(std::move(diffs), ok);
        return ok;
    };

    // E_k extends E_{k-1} (subtuples of nil-q tuples are nil-q)
    std::vector<std::vector<Elem>> frontier;  // all tuples of E_{k}, flattened per tuple
    for (Elem x = 0; x < G.order(); ++x) frontier.push_back({x});
    out.full_counts.push_back(G.order());
    for (Elem x = 0; x < G.order(); ++x)
        out.normalized.cells[0].push_back(std::uint32_t(x));

    for (int k = 1; k <= max_dim; ++k) {
        std::vector<std::vector<Elem>> next;
        std::int64_t count = 0;
        for (const auto& t : frontier) {
            std::vector<Elem> ext(t);
            ext.push_back(0);
            for (Elem x = 0; x < G.order(); ++x) {
                ext.back() = x;
                if (!tuple_ok(ext)) continue;
                ++count;
                next.push_back(ext);
                bool degen = false;
                for (std::size_t i = 0; i + 1 < ext.size(); ++i)
                    if (ext[i] == ext[i + 1]) degen = true;
                if (!degen) {
                    auto& flat = out.normalized.cells[std::size_t(k)];
                    for (Elem e : ext) flat.push_back(std::uint32_t(e));
                }
            }
        }
        out.full_counts.push_back(count);
        frontier = std::move(next);
    }
    return out;
}

}  // namespace nilposet
