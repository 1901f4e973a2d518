#include "nilposet/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nilposet {

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Matrix: return "matrix";
        case Backend::PowerCommutator: return "pc";
        case Backend::Product: return "product";
        case Backend::Table: return "table";
    }
    return "?";
}

void FiniteGroup::finish_construction(Elem order, std::vector<Elem> generators, Elem table_cap) {
    order_ = order;
    generators_ = std::move(generators);
    if (order_ <= 0) throw std::logic_error("group with nonpositive order");

    if (order_ <= table_cap) {
        mul_table_flat_.assign(std::size_t(order_) * std::size_t(order_), 0);
        for (Elem a = 0; a < order_; ++a)
            for (Elem b = 0; b < order_; ++b)
                mul_table_flat_[std::size_t(a) * order_ + b] = mul_impl(a, b);
        mul_table_ptr_ = mul_table_flat_.data();
    }

    // inv(x) = x^(ord(x)-1), found by walking powers until the identity.
    inv_table_.assign(std::size_t(order_), 0);
    for (Elem x = 0; x < order_; ++x) {
        Elem prev = 0, p = x;
        while (p != 0) {
            prev = p;
            p = mul(p, x);
        }
        inv_table_[std::size_t(x)] = x == 0 ? 0 : prev;
    }
}

Elem FiniteGroup::power(Elem x, long long n) const {
    if (n < 0) {
        x = inv(x);
        n = -n;
    }
    Elem r = 0;
    while (n > 0) {
        if (n & 1) r = mul(r, x);
        x = mul(x, x);
        n >>= 1;
    }
    return r;
}

int FiniteGroup::element_order(Elem x) const {
    int k = 1;
    Elem p = x;
    while (p != 0) {
        p = mul(p, x);
        ++k;
    }
    return k;
}

long long FiniteGroup::exponent() const {
    long long e = 1;
    for (Elem x = 0; x < order_; ++x) e = std::lcm(e, (long long)element_order(x));
    return e;
}

std::string FiniteGroup::describe(Elem a) const {
    return "#" + std::to_string(a);
}

TableGroup::TableGroup(std::vector<Elem> table, Elem order, std::vector<Elem> generators,
                       std::string name)
    : FiniteGroup(Backend::Table, std::move(name)), table_(std::move(table)) {
    if (table_.size() != std::size_t(order) * std::size_t(order))
        throw std::invalid_argument("TableGroup: table size mismatch");
    for (Elem x = 0; x < order; ++x)
        if (table_[std::size_t(x)] != x || table_[std::size_t(x) * order] != x)
            throw std::invalid_argument("TableGroup: id 0 is not the identity");
    finish_construction(order, std::move(generators), kDefaultMulTableCap);
}

Elem TableGroup::mul_impl(Elem a, Elem b) const {
    return table_[std::size_t(a) * std::size_t(order_) + std::size_t(b)];
}

bool Subgroup::contains(Elem g) const {
    return std::binary_search(elements.begin(), elements.end(), g);
}

bool Subgroup::contains_all(const Subgroup& other) const {
    return std::includes(elements.begin(), elements.end(), other.elements.begin(),
                         other.elements.end());
}

int CentralSeries::class_or_throw() const {
    if (!cls) throw std::runtime_error("group is not nilpotent");
    return *cls;
}

const Subgroup& CentralSeries::term(int k) const {
    if (k < 1) throw std::invalid_argument("central series term index is 1-based");
    std::size_t i = std::size_t(k - 1);
    return terms[std::min(i, terms.size() - 1)];
}

Subgroup subgroup_closure(const FiniteGroup& G, std::vector<Elem> gens) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::erase(gens, Elem(0));

    std::vector<char> seen(std::size_t(G.order()), 0);
    std::vector<Elem> elems;
    std::deque<Elem> queue;
    seen[0] = 1;
    elems.push_back(0);
    queue.push_back(0);
    while (!queue.empty()) {
        Elem x = queue.front();
        queue.pop_front();
        for (Elem g : gens) {
            Elem y = G.mul(x, g);
            if (!seen[std::size_t(y)]) {
                seen[std::size_t(y)] = 1;
                elems.push_back(y);
                queue.push_back(y);
            }
        }
    }
    std::sort(elems.begin(), elems.end());
    Subgroup H;
    H.parent = &G;
    H.elements = std::move(elems);
    H.generators = std::move(gens);
    if (G.order() % Elem(H.elements.size()) != 0)
        throw std::logic_error("closure order does not divide the group order");
    return H;
}

Subgroup trivial_subgroup(const FiniteGroup& G) {
    Subgroup H;
    H.parent = &G;
    H.elements = {0};
    return H;
}

Subgroup whole_group(const FiniteGroup& G) {
    Subgroup H;
    H.parent = &G;
    H.elements.resize(std::size_t(G.order()));
    for (Elem x = 0; x < G.order(); ++x) H.elements[std::size_t(x)] = x;
    H.generators = G.generators();
    return H;
}

CentralSeries lower_central_series(const FiniteGroup& G, const Subgroup& H) {
    CentralSeries s;
    s.terms.push_back(H);
    while (true) {
        const Subgroup& top = s.terms.back();
        if (top.order() == 1) {
            s.cls = int(s.terms.size()) - 1;
            return s;
        }
        // next term = <[a,b] : a in top, b in H>
        std::vector<Elem> gens;
        gens.reserve(64);
        std::vector<char> in_gens(std::size_t(G.order()), 0);
        for (Elem a : top.elements)
            for (Elem b : H.elements) {
                Elem c = G.commutator(a, b);
                if (c != 0 && !in_gens[std::size_t(c)]) {
                    in_gens[std::size_t(c)] = 1;
                    gens.push_back(c);
                }
            }
        Subgroup next = subgroup_closure(G, std::move(gens));
        if (next.elements == top.elements) {
            s.cls = std::nullopt;  // stabilized above the trivial group
            return s;
        }
        s.terms.push_back(std::move(next));
    }
}

CentralSeries lower_central_series(const FiniteGroup& G) {
    return lower_central_series(G, whole_group(G));
}

int nilpotency_class(const FiniteGroup& G) {
    return lower_central_series(G).class_or_throw();
}

Subgroup center(const FiniteGroup& G) {
    // centralizing the generators centralizes the group
    std::vector<Elem> zs;
    for (Elem z = 0; z < G.order(); ++z) {
        bool central = true;
        for (Elem g : G.generators())
            if (G.mul(z, g) != G.mul(g, z)) {
                central = false;
                break;
            }
        if (central) zs.push_back(z);
    }
    Subgroup Z;
    Z.parent = &G;
    Z.elements = std::move(zs);  // already sorted
    if (!Z.elements.empty() && Z.elements[0] != 0)
        throw std::logic_error("center does not contain the identity");
    return Z;
}

bool is_abelian(const FiniteGroup& G) {
    for (Elem a : G.generators())
        for (Elem b : G.generators())
            if (G.mul(a, b) != G.mul(b, a)) return false;
    return true;
}

CheckResult is_two_engel(const FiniteGroup& G, const SweepOptions& opt) {
    CheckResult r;
    const std::uint64_t total = std::uint64_t(G.order()) * std::uint64_t(G.order());
    if (total <= opt.budget) {
        for (Elem x = 0; x < G.order(); ++x)
            for (Elem y = 0; y < G.order(); ++y) {
                ++r.checked;
                if (G.commutator3(x, y, y) != 0) {
                    r.ok = false;
                    r.witness = {x, y};
                    r.detail = "[x,y,y] != 1";
                    return r;
                }
            }
        return r;
    }
    r.sampled = true;
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<Elem> pick(0, G.order() - 1);
    for (std::uint64_t i = 0; i < opt.sample_count; ++i) {
        Elem x = pick(rng), y = pick(rng);
        ++r.checked;
        if (G.commutator3(x, y, y) != 0) {
            r.ok = false;
            r.witness = {x, y};
            r.detail = "[x,y,y] != 1 (sampled)";
            return r;
        }
    }
    return r;
}

bool generated_class_le(const FiniteGroup& G, std::span<const Elem> gens, int q) {
    std::vector<Elem> s(gens.begin(), gens.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::erase(s, Elem(0));
    if (s.empty()) return q >= 0;
    if (q <= 0) return false;
    if (q == 1) {
        for (Elem a : s)
            for (Elem b : s)
                if (G.commutator(a, b) != 0) return false;
        return true;
    }
    if (q == 2) {
        // the generator commutators must be central in <S>; then the bracket
        // is bilinear and [H,H] is generated by them
        for (Elem a : s)
            for (Elem b : s) {
                Elem c = G.commutator(a, b);
                if (c == 0) continue;
                for (Elem d : s)
                    if (G.commutator(c, d) != 0) return false;
            }
        return true;
    }
    Subgroup H = subgroup_closure(G, s);
    CentralSeries cs = lower_central_series(G, H);
    return cs.cls && *cs.cls <= q;
}

bool is_affinely_nil(const FiniteGroup& G, std::span<const Elem> tuple, int q) {
    if (tuple.empty()) throw std::invalid_argument("is_affinely_nil: empty tuple");
    Elem last = tuple.back();
    Elem li = G.inv(last);
    std::vector<Elem> diffs;
    diffs.reserve(tuple.size() - 1);
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i) diffs.push_back(G.mul(li, tuple[i]));
    return generated_class_le(G, diffs, q);
}

bool pair_class_le2(const FiniteGroup& G, Elem u, Elem v) {
    Elem c = G.commutator(u, v);
    if (c == 0) return true;
    return G.commutator(c, u) == 0 && G.commutator(c, v) == 0;
}

std::vector<Elem> left_transversal(const FiniteGroup& G, const Subgroup& Z) {
    std::vector<char> covered(std::size_t(G.order()), 0);
    std::vector<Elem> reps;
    for (Elem g = 0; g < G.order(); ++g) {
        if (covered[std::size_t(g)]) continue;
        reps.push_back(g);
        for (Elem z : Z.elements) covered[std::size_t(G.mul(g, z))] = 1;
    }
    return reps;
}

bool is_normal(const FiniteGroup& G, const Subgroup& N) {
    for (Elem g : G.generators())
        for (Elem n : N.elements)
            if (!N.contains(G.conj(n, g))) return false;
    return true;
}

QuotientGroup quotient_by_normal(const FiniteGroup& G, const Subgroup& N, std::string name) {
    if (N.parent != &G) throw std::invalid_argument("quotient: subgroup of a different group");
    if (!is_normal(G, N)) throw std::invalid_argument("quotient: subgroup is not normal");

    const Elem n = G.order();
    std::vector<Elem> coset_of(std::size_t(n), -1);
    std::vector<Elem> reps;
    for (Elem g = 0; g < n; ++g) {
        if (coset_of[std::size_t(g)] >= 0) continue;
        Elem id = Elem(reps.size());
        reps.push_back(g);  // g is minimal in its coset (ascending scan)
        for (Elem h : N.elements) coset_of[std::size_t(G.mul(g, h))] = id;
    }
    const Elem q = Elem(reps.size());
    std::vector<Elem> table(std::size_t(q) * std::size_t(q));
    for (Elem i = 0; i < q; ++i)
        for (Elem j = 0; j < q; ++j)
            table[std::size_t(i) * q + j] = coset_of[std::size_t(G.mul(reps[std::size_t(i)], reps[std::size_t(j)]))];

    std::vector<Elem> gens;
    for (Elem g : G.generators()) {
        Elem img = coset_of[std::size_t(g)];
        if (img != 0 && std::find(gens.begin(), gens.end(), img) == gens.end()) gens.push_back(img);
    }
    QuotientGroup out;
    out.group = std::make_shared<TableGroup>(std::move(table), q, std::move(gens), std::move(name));
    out.coset_of = std::move(coset_of);
    out.reps = std::move(reps);
    return out;
}

Subgroup image_subgroup(const FiniteGroup& Q, const std::vector<Elem>& coset_of,
                        const Subgroup& H) {
    std::vector<Elem> img;
    img.reserve(H.elements.size());
    for (Elem h : H.elements) img.push_back(coset_of[std::size_t(h)]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    Subgroup S;
    S.parent = &Q;
    S.elements = std::move(img);
    for (Elem g : H.generators) {
        Elem i = coset_of[std::size_t(g)];
        if (i != 0) S.generators.push_back(i);
    }
    return S;
}

CheckResult validate_group_axioms(const FiniteGroup& G, const SweepOptions& opt) {
    CheckResult r;
    const Elem n = G.order();
    for (Elem x = 0; x < n; ++x) {
        if (G.mul(0, x) != x || G.mul(x, 0) != x) {
            r.ok = false;
            r.witness = {x};
            r.detail = "identity axiom fails";
            return r;
        }
        if (G.mul(x, G.inv(x)) != 0 || G.mul(G.inv(x), x) != 0) {
            r.ok = false;
            r.witness = {x};
            r.detail = "inverse axiom fails";
            return r;
        }
    }
    auto assoc = [&](Elem a, Elem b, Elem c) {
        return G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c));
    };
    if (n <= 256) {
        for (Elem a = 0; a < n; ++a)
            for (Elem b = 0; b < n; ++b)
                for (Elem c = 0; c < n; ++c) {
                    ++r.checked;
                    if (!assoc(a, b, c)) {
                        r.ok = false;
                        r.witness = {a, b, c};
                        r.detail = "associativity fails";
                        return r;
                    }
                }
    } else {
        r.sampled = true;
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<Elem> pick(0, n - 1);
        for (std::uint64_t i = 0; i < opt.sample_count; ++i) {
            Elem a = pick(rng), b = pick(rng), c = pick(rng);
            ++r.checked;
            if (!assoc(a, b, c)) {
                r.ok = false;
                r.witness = {a, b, c};
                r.detail = "associativity fails (sampled)";
                return r;
            }
        }
    }
    return r;
}

}  // namespace nilposet
