#include "nilposet/catalog.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace nilposet {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_prime_power(int n) {
    if (n < 2) return false;
    for (int p = 2; p <= n; ++p) {
        if (!is_prime(p)) continue;
        if (n % p) continue;
        while (n % p == 0) n /= p;
        return n == 1;
    }
    return false;
}

using Run = std::pair<int, int>;  // (generator, exponent > 0)

std::vector<Run> runs_of_word(const std::vector<int>& exps) {
    std::vector<Run> rs;
    for (int g = 0; g < int(exps.size()); ++g)
        if (exps[std::size_t(g)] > 0) rs.push_back({g, exps[std::size_t(g)]});
    return rs;
}

constexpr std::size_t kCollectStepCap = 1'000'000;

struct Collector {
    const PcPresentation& pres;
    std::vector<const std::vector<int>*> comm_tail;  // flat [j*n+i], null => trivial

    explicit Collector(const PcPresentation& p) : pres(p) {
        const int n = pres.size();
        comm_tail.assign(std::size_t(n) * std::size_t(n), nullptr);
        for (const auto& t : pres.comm_tails)
            comm_tail[std::size_t(t.j) * std::size_t(n) + std::size_t(t.i)] = &t.word;
    }

    const std::vector<int>* power_tail(int g) const {
        if (std::size_t(g) >= pres.power_tails.size()) return nullptr;
        const auto& w = pres.power_tails[std::size_t(g)];
        return w.empty() ? nullptr : &w;
    }

    // Collection from the left: resolve the leftmost violation (oversized
    // exponent or out-of-order adjacent pair) until the word is normal.
    std::vector<int> collect(std::vector<Run> w) const {
        const int n = pres.size();
        std::size_t steps = 0;
        std::size_t i = 0;
        auto backup = [&] { i = i > 0 ? i - 1 : 0; };
        while (i < w.size()) {
            if (++steps > kCollectStepCap)
                throw PcConsistencyError("collection did not terminate (invalid presentation?)");
            if (w[i].second == 0) {
                w.erase(w.begin() + long(i));
                backup();
                continue;
            }
            if (i + 1 < w.size() && w[i].first == w[i + 1].first) {
                w[i].second += w[i + 1].second;
                w.erase(w.begin() + long(i) + 1);
                continue;
            }
            const int g = w[i].first;
            const int e = pres.orders[std::size_t(g)];
            if (w[i].second >= e) {
                // g^a = g^{a-e} * (g^e) with g^e rewritten to its tail
                w[i].second -= e;
                if (const auto* t = power_tail(g)) {
                    auto tr = runs_of_word(*t);
                    w.insert(w.begin() + long(i) + 1, tr.begin(), tr.end());
                }
                continue;
            }
            if (i + 1 < w.size() && w[i].first > w[i + 1].first) {
                // gj^a gi^b -> gj^{a-1} gi gj [gj,gi] gi^{b-1}
                const auto [gj, a] = w[i];
                const auto [gi, b] = w[i + 1];
                std::vector<Run> repl;
                if (a > 1) repl.push_back({gj, a - 1});
                repl.push_back({gi, 1});
                repl.push_back({gj, 1});
                if (const auto* t = comm_tail[std::size_t(gj) * std::size_t(n) + std::size_t(gi)]) {
                    auto tr = runs_of_word(*t);
                    repl.insert(repl.end(), tr.begin(), tr.end());
                }
                if (b > 1) repl.push_back({gi, b - 1});
                w.erase(w.begin() + long(i), w.begin() + long(i) + 2);
                w.insert(w.begin() + long(i), repl.begin(), repl.end());
                backup();
                continue;
            }
            ++i;
        }
        std::vector<int> exps(std::size_t(n), 0);
        for (const auto& r : w) exps[std::size_t(r.first)] = r.second;
        return exps;
    }

    std::vector<int> mul_words(const std::vector<int>& a, const std::vector<int>& b) const {
        auto w = runs_of_word(a);
        auto wb = runs_of_word(b);
        w.insert(w.end(), wb.begin(), wb.end());
        return collect(std::move(w));
    }
};

std::string render_word(const std::vector<int>& exps) {
    std::ostringstream os;
    bool first = true;
    for (int g = 0; g < int(exps.size()); ++g) {
        if (exps[std::size_t(g)] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << "g" << (g + 1);
        if (exps[std::size_t(g)] > 1) os << "^" << exps[std::size_t(g)];
    }
    if (first) os << "1";
    return os.str();
}

}  // namespace

long long PcPresentation::total_order() const {
    long long t = 1;
    for (int e : orders) {
        t *= e;
        if (t > 100'000'000) throw std::runtime_error("pc presentation: order overflow");
    }
    return t;
}

void PcPresentation::validate_structure() const {
    const int n = size();
    for (int e : orders)
        if (!is_prime_power(e))
            throw std::invalid_argument("pc presentation: relative orders must be prime powers >= 2");
    auto check_word = [&](const std::vector<int>& w, const char* what) {
        if (w.empty()) return;
        if (int(w.size()) != n) throw std::invalid_argument(std::string(what) + ": wrong word length");
        for (int g = 0; g < n; ++g)
            if (w[std::size_t(g)] < 0 || w[std::size_t(g)] >= orders[std::size_t(g)])
                throw std::invalid_argument(std::string(what) + ": exponent out of range");
    };
    if (!power_tails.empty() && int(power_tails.size()) != n)
        throw std::invalid_argument("pc presentation: power_tails size mismatch");
    for (const auto& w : power_tails) check_word(w, "power tail");
    for (const auto& t : comm_tails) {
        if (t.i < 0 || t.j >= n || t.j <= t.i)
            throw std::invalid_argument("pc presentation: comm tail needs 0 <= i < j < n");
        check_word(t.word, "comm tail");
    }
    (void)total_order();
}

void check_pc_consistency(const PcPresentation& pres) {
    Collector col(pres);
    const int n = pres.size();
    auto letter = [&](int g) {
        std::vector<int> w(std::size_t(n), 0);
        w[std::size_t(g)] = 1;
        return w;
    };
    auto power_word = [&](int g, int e) {
        std::vector<int> w(std::size_t(n), 0);
        // g^e as a fully collected normal form
        std::vector<Run> rs{{g, e}};
        return col.collect(std::move(rs));
        (void)w;
    };
    auto fail = [&](const std::string& what, const std::vector<int>& lhs,
                    const std::vector<int>& rhs) {
        throw PcConsistencyError("inconsistent pc presentation, overlap " + what + ": " +
                                 render_word(lhs) + " != " + render_word(rhs));
    };

    // g_k (g_j g_i) == (g_k g_j) g_i for k > j > i
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < j; ++i) {
                auto lhs = col.mul_words(letter(k), col.mul_words(letter(j), letter(i)));
                auto rhs = col.mul_words(col.mul_words(letter(k), letter(j)), letter(i));
                if (lhs != rhs)
                    fail("g" + std::to_string(k + 1) + "(g" + std::to_string(j + 1) + "g" +
                             std::to_string(i + 1) + ")",
                         lhs, rhs);
            }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            // (g_j^{e_j}) g_i == g_j^{e_j-1} (g_j g_i)
            auto lhs = col.mul_words(power_word(j, pres.orders[std::size_t(j)]), letter(i));
            auto rhs = col.mul_words(power_word(j, pres.orders[std::size_t(j)] - 1),
                                     col.mul_words(letter(j), letter(i)));
            if (lhs != rhs) fail("(g" + std::to_string(j + 1) + "^e)g" + std::to_string(i + 1), lhs, rhs);
            // g_j (g_i^{e_i}) == (g_j g_i) g_i^{e_i-1}
            auto lhs2 = col.mul_words(letter(j), power_word(i, pres.orders[std::size_t(i)]));
            auto rhs2 = col.mul_words(col.mul_words(letter(j), letter(i)),
                                      power_word(i, pres.orders[std::size_t(i)] - 1));
            if (lhs2 != rhs2) fail("g" + std::to_string(j + 1) + "(g" + std::to_string(i + 1) + "^e)", lhs2, rhs2);
        }
    for (int i = 0; i < n; ++i) {
        // g_i (g_i^{e_i}) == (g_i^{e_i}) g_i
        auto lhs = col.mul_words(letter(i), power_word(i, pres.orders[std::size_t(i)]));
        auto rhs = col.mul_words(power_word(i, pres.orders[std::size_t(i)]), letter(i));
        if (lhs != rhs) fail("g" + std::to_string(i + 1) + "^(e+1)", lhs, rhs);
    }
}

std::size_t PcGroup::radix_of(std::span<const int> exps) const {
    std::size_t idx = 0, stride = 1;
    for (int g = 0; g < pres_.size(); ++g) {
        idx += stride * std::size_t(exps[std::size_t(g)]);
        stride *= std::size_t(pres_.orders[std::size_t(g)]);
    }
    return idx;
}

PcGroup::PcGroup(PcPresentation pres, std::string name, Elem table_cap)
    : FiniteGroup(Backend::PowerCommutator, std::move(name)), pres_(std::move(pres)) {
    pres_.validate_structure();
    check_pc_consistency(pres_);

    const long long total = pres_.total_order();
    Collector col(pres_);
    const int n = pres_.size();

    radix_to_id_.assign(std::size_t(total), -1);
    elems_.reserve(std::size_t(total));
    gen_step_.assign(std::size_t(n), std::vector<Elem>(std::size_t(total), -1));

    std::vector<int> identity(std::size_t(n), 0);
    elems_.push_back(identity);
    radix_to_id_[radix_of(identity)] = 0;
    std::deque<Elem> queue{0};
    while (!queue.empty()) {
        Elem x = queue.front();
        queue.pop_front();
        for (int g = 0; g < n; ++g) {
            auto w = runs_of_word(elems_[std::size_t(x)]);
            w.push_back({g, 1});
            auto prod = col.collect(std::move(w));
            std::size_t rx = radix_of(prod);
            Elem id = radix_to_id_[rx];
            if (id < 0) {
                id = Elem(elems_.size());
                elems_.push_back(prod);
                radix_to_id_[rx] = id;
                queue.push_back(id);
            }
            gen_step_[std::size_t(g)][std::size_t(x)] = id;
        }
    }
    if ((long long)elems_.size() != total)
        throw PcConsistencyError("pc group: closure order " + std::to_string(elems_.size()) +
                                 " != expected " + std::to_string(total));

    std::vector<Elem> gens;
    for (int g = 0; g < n; ++g) gens.push_back(gen_step_[std::size_t(g)][0]);
    finish_construction(Elem(total), std::move(gens), table_cap);
}

Elem PcGroup::mul_impl(Elem a, Elem b) const {
    Elem x = a;
    const auto& be = elems_[std::size_t(b)];
    for (int g = 0; g < pres_.size(); ++g)
        for (int k = 0; k < be[std::size_t(g)]; ++k) x = gen_step_[std::size_t(g)][std::size_t(x)];
    return x;
}

Elem PcGroup::elem_of_exponents(std::span<const int> exps) const {
    if (int(exps.size()) != pres_.size()) throw std::invalid_argument("exponent vector length");
    for (int g = 0; g < pres_.size(); ++g)
        if (exps[std::size_t(g)] < 0 || exps[std::size_t(g)] >= pres_.orders[std::size_t(g)])
            throw std::invalid_argument("exponent out of range");
    Elem id = radix_to_id_[radix_of(exps)];
    if (id < 0) throw std::logic_error("normal form not enumerated");
    return id;
}

std::string PcGroup::describe(Elem a) const {
    return render_word(elems_[std::size_t(a)]);
}

// --- U4(F_p) -----------------------------------------------------------------

namespace {
// entry order within keys: (12,13,14,23,24,34)
inline void u4_decode(std::int32_t key, int p, int* e) {
    for (int i = 0; i < 6; ++i) {
        e[i] = key % p;
        key /= p;
    }
}
inline std::int32_t u4_encode(const int* e, int p) {
    std::int32_t k = 0;
    for (int i = 5; i >= 0; --i) k = k * p + e[i];
    return k;
}
}  // namespace

MatrixU4Group::MatrixU4Group(int p, Elem table_cap)
    : FiniteGroup(Backend::Matrix, "U4(F" + std::to_string(p) + ")"), p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("build_u4: p must be prime");
    if (p > 7) throw std::invalid_argument("build_u4: p > 7 exceeds the memory guard");
    std::int64_t total = 1;
    for (int i = 0; i < 6; ++i) total *= p;

    key_to_id_.assign(std::size_t(total), -1);
    id_to_key_.reserve(std::size_t(total));

    auto add = [&](std::int32_t key) {
        Elem id = Elem(id_to_key_.size());
        id_to_key_.push_back(key);
        key_to_id_[std::size_t(key)] = id;
        return id;
    };
    // generators a = I+E12, b = I+E23, c = I+E34
    int ea[6] = {1, 0, 0, 0, 0, 0};
    int eb[6] = {0, 0, 0, 1, 0, 0};
    int ec[6] = {0, 0, 0, 0, 0, 1};
    std::array<std::int32_t, 3> genkeys{u4_encode(ea, p), u4_encode(eb, p), u4_encode(ec, p)};

    add(0);  // identity
    std::deque<Elem> queue{0};
    auto mul_keys = [&](std::int32_t ka, std::int32_t kb) {
        int x[6], y[6], z[6];
        u4_decode(ka, p, x);
        u4_decode(kb, p, y);
        z[0] = (x[0] + y[0]) % p;                                   // 12
        z[1] = (x[1] + y[1] + x[0] * y[3]) % p;                     // 13
        z[2] = (x[2] + y[2] + x[0] * y[4] + x[1] * y[5]) % p;       // 14
        z[3] = (x[3] + y[3]) % p;                                   // 23
        z[4] = (x[4] + y[4] + x[3] * y[5]) % p;                     // 24
        z[5] = (x[5] + y[5]) % p;                                   // 34
        return u4_encode(z, p);
    };
    while (!queue.empty()) {
        Elem x = queue.front();
        queue.pop_front();
        for (std::int32_t gk : genkeys) {
            std::int32_t ky = mul_keys(id_to_key_[std::size_t(x)], gk);
            if (key_to_id_[std::size_t(ky)] < 0) queue.push_back(add(ky));
        }
    }
    if (std::int64_t(id_to_key_.size()) != total)
        throw std::logic_error("U4 closure does not exhaust p^6 elements");

    std::vector<Elem> gens{key_to_id_[std::size_t(genkeys[0])], key_to_id_[std::size_t(genkeys[1])],
                           key_to_id_[std::size_t(genkeys[2])]};
    finish_construction(Elem(total), std::move(gens), table_cap);
}

Elem MatrixU4Group::mul_impl(Elem a, Elem b) const {
    int x[6], y[6], z[6];
    u4_decode(id_to_key_[std::size_t(a)], p_, x);
    u4_decode(id_to_key_[std::size_t(b)], p_, y);
    z[0] = (x[0] + y[0]) % p_;
    z[1] = (x[1] + y[1] + x[0] * y[3]) % p_;
    z[2] = (x[2] + y[2] + x[0] * y[4] + x[1] * y[5]) % p_;
    z[3] = (x[3] + y[3]) % p_;
    z[4] = (x[4] + y[4] + x[3] * y[5]) % p_;
    z[5] = (x[5] + y[5]) % p_;
    return key_to_id_[std::size_t(u4_encode(z, p_))];
}

std::array<int, 6> MatrixU4Group::entries_of(Elem a) const {
    int e[6];
    u4_decode(id_to_key_[std::size_t(a)], p_, e);
    return {e[0], e[1], e[2], e[3], e[4], e[5]};
}

Elem MatrixU4Group::elem_of_entries(const std::array<int, 6>& e) const {
    int w[6];
    for (int i = 0; i < 6; ++i) {
        w[i] = e[std::size_t(i)] % p_;
        if (w[i] < 0) w[i] += p_;
    }
    return key_to_id_[std::size_t(u4_encode(w, p_))];
}

std::string MatrixU4Group::describe(Elem a) const {
    auto e = entries_of(a);
    std::ostringstream os;
    os << "[1 " << e[0] << " " << e[1] << " " << e[2] << "; 0 1 " << e[3] << " " << e[4]
       << "; 0 0 1 " << e[5] << "; 0 0 0 1]";
    return os.str();
}

GroupPtr build_u4(int p, Elem table_cap) {
    return std::make_shared<MatrixU4Group>(p, table_cap);
}

GroupPtr build_pc_group(const PcPresentation& pres, std::string name, Elem table_cap) {
    return std::make_shared<PcGroup>(pres, std::move(name), table_cap);
}

// --- product ------------------------------------------------------------------

ProductGroup::ProductGroup(GroupPtr A, GroupPtr B, Elem table_cap)
    : FiniteGroup(Backend::Product, A->name() + " x " + B->name()),
      A_(std::move(A)),
      B_(std::move(B)) {
    std::int64_t total = std::int64_t(A_->order()) * std::int64_t(B_->order());
    if (total > 50'000'000) throw std::runtime_error("direct product: order overflow");
    std::vector<Elem> gens;
    for (Elem g : A_->generators()) gens.push_back(g * B_->order());
    for (Elem h : B_->generators()) gens.push_back(h);
    finish_construction(Elem(total), std::move(gens), table_cap);
}

Elem ProductGroup::mul_impl(Elem a, Elem b) const {
    const Elem nb = B_->order();
    return A_->mul(a / nb, b / nb) * nb + B_->mul(a % nb, b % nb);
}

std::string ProductGroup::describe(Elem a) const {
    auto [x, y] = components(a);
    return "(" + A_->describe(x) + ", " + B_->describe(y) + ")";
}

GroupPtr build_direct_product(GroupPtr G, GroupPtr H, Elem table_cap) {
    return std::make_shared<ProductGroup>(std::move(G), std::move(H), table_cap);
}

// --- named constructions --------------------------------------------------------

namespace {

PcPresentation abelian_presentation(std::vector<int> orders) {
    PcPresentation p;
    p.orders = std::move(orders);
    return p;
}

std::vector<int> word(int n, std::initializer_list<std::pair<int, int>> terms) {
    std::vector<int> w(std::size_t(n), 0);
    for (auto [g, e] : terms) w[std::size_t(g)] = e;
    return w;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error("validation battery failed: " + what);
}

}  // namespace

GroupPtr build_cyclic(int n) {
    if (n <= 0) throw std::invalid_argument("build_cyclic: n must be positive");
    std::vector<int> orders;
    int m = n;
    for (int p = 2; p <= m; ++p) {
        if (m % p) continue;
        int q = 1;
        while (m % p == 0) {
            q *= p;
            m /= p;
        }
        orders.push_back(q);
    }
    return build_pc_group(abelian_presentation(std::move(orders)), "C" + std::to_string(n));
}

GroupPtr build_elementary_abelian(int p, int r) {
    return build_pc_group(abelian_presentation(std::vector<int>(std::size_t(r), p)),
                          "(F" + std::to_string(p) + ")^" + std::to_string(r));
}

GroupPtr build_s3() {
    PcPresentation p;
    p.orders = {2, 3};
    p.comm_tails.push_back({1, 0, word(2, {{1, 1}})});
    return build_pc_group(p, "S3");
}

GroupPtr build_a4() {
    PcPresentation p;
    p.orders = {3, 2, 2};
    p.comm_tails.push_back({1, 0, word(3, {{1, 1}, {2, 1}})});
    p.comm_tails.push_back({2, 0, word(3, {{1, 1}})});
    return build_pc_group(p, "A4");
}

GroupPtr build_d4() {
    PcPresentation p;
    p.orders = {2, 4};
    p.comm_tails.push_back({1, 0, word(2, {{1, 2}})});
    return build_pc_group(p, "D4");
}

GroupPtr build_burnside33() {
    PcPresentation p;
    p.orders = std::vector<int>(7, 3);
    p.comm_tails.push_back({1, 0, word(7, {{3, 1}})});  // [g2,g1] = g4
    p.comm_tails.push_back({2, 0, word(7, {{4, 1}})});  // [g3,g1] = g5
    p.comm_tails.push_back({2, 1, word(7, {{5, 1}})});  // [g3,g2] = g6
    p.comm_tails.push_back({3, 2, word(7, {{6, 1}})});  // [g4,g3] = g7
    p.comm_tails.push_back({4, 1, word(7, {{6, 2}})});  // [g5,g2] = g7^-1
    p.comm_tails.push_back({5, 0, word(7, {{6, 1}})});  // [g6,g1] = g7
    GroupPtr G = build_pc_group(p, "B(3,3)");

    require(G->order() == 2187, "B(3,3) order != 2187");
    require(G->exponent() == 3, "B(3,3) exponent != 3");
    require(is_two_engel(*G).ok, "B(3,3) is not 2-Engel");
    auto lcs = lower_central_series(*G);
    require(lcs.nilpotent() && *lcs.cls == 3, "B(3,3) class != 3");
    require(lcs.term(2).order() == 81, "|[B,B]| != 81");
    require(lcs.term(3).order() == 3, "|T^3(B)| != 3");
    return G;
}

std::pair<GroupPtr, GroupPtr> build_he9_family() {
    PcPresentation he;
    he.orders = {9, 9, 9};
    he.comm_tails.push_back({1, 0, word(3, {{2, 1}})});  // [y,x] = c
    GroupPtr He = build_pc_group(he, "He(Z/9)");
    require(He->order() == 729, "He(Z/9) order != 729");
    {
        auto lcs = lower_central_series(*He);
        require(lcs.nilpotent() && *lcs.cls == 2, "He(Z/9) class != 2");
    }

    PcPresentation ext;
    ext.orders = {9, 9, 9, 9};                            // x, y, c=[y,x], z
    ext.comm_tails.push_back({1, 0, word(4, {{2, 1}})});  // [y,x] = c
    ext.comm_tails.push_back({2, 0, word(4, {{3, 1}})});  // [c,x] = z
    ext.comm_tails.push_back({2, 1, word(4, {{3, 8}})});  // [c,y] = z^-1
    auto Gx = std::make_shared<PcGroup>(ext, "He(Z/9):C9", kDefaultMulTableCap);
    GroupPtr Gext = Gx;

    require(Gext->order() == 6561, "extension order != 3^8");
    auto lcs = lower_central_series(*Gext);
    require(lcs.nilpotent() && *lcs.cls == 3, "extension class != 3");
    const Subgroup& g3 = lcs.term(3);
    require(g3.order() == 9, "T^3 of extension has order != 9");
    long long e = 1;
    for (Elem t : g3.elements) e = std::lcm(e, (long long)Gext->element_order(t));
    require(e == 9, "exp(T^3) != 9");

    const Elem x = Gx->elem_of_exponents(std::array<int, 4>{1, 0, 0, 0});
    const Elem y = Gx->elem_of_exponents(std::array<int, 4>{0, 1, 0, 0});
    const Elem z = Gx->elem_of_exponents(std::array<int, 4>{0, 0, 0, 1});
    require(Gext->commutator3(x, y, y) == z, "[x,y,y] != z");
    require(Gext->commutator3(y, x, x) == z, "[y,x,x] != z");
    require(Gext->commutator(x, z) == 0 && Gext->commutator(y, z) == 0, "z not central");
    require(subgroup_closure(*Gext, {x, y}).order() == 6561, "<x,y> != G");

    Subgroup zsub = subgroup_closure(*Gext, {z});
    auto quo = quotient_by_normal(*Gext, zsub, "He(Z/9):C9 / <z>");
    require(quo.group->order() == 729, "extension / <z> has order != 729");
    auto qlcs = lower_central_series(*quo.group);
    require(qlcs.nilpotent() && *qlcs.cls == 2, "extension / <z> has class != 2");

    return {He, Gext};
}

// --- group-spec files ------------------------------------------------------------

namespace {

using nlohmann::json;

GroupPtr group_from_json(const json& j);

PcPresentation pres_from_json(const json& j) {
    PcPresentation p;
    p.orders = j.at("orders").get<std::vector<int>>();
    const int n = p.size();
    if (j.contains("power_tails")) {
        p.power_tails = j.at("power_tails").get<std::vector<std::vector<int>>>();
    }
    if (j.contains("comm_tails")) {
        for (const auto& t : j.at("comm_tails")) {
            PcPresentation::CommTail ct;
            ct.j = t.at("j").get<int>() - 1;  // file uses 1-based generator indices
            ct.i = t.at("i").get<int>() - 1;
            ct.word = t.at("word").get<std::vector<int>>();
            if (int(ct.word.size()) != n)
                throw std::runtime_error("group spec: comm tail word length mismatch");
            p.comm_tails.push_back(std::move(ct));
        }
    }
    return p;
}

GroupPtr group_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    std::string name = j.value("name", "");
    if (kind == "matrix_u4") {
        return build_u4(j.at("p").get<int>());
    }
    if (kind == "pc") {
        auto p = pres_from_json(j);
        if (name.empty()) name = "pc group";
        return build_pc_group(p, name);
    }
    if (kind == "product") {
        const auto& f = j.at("factors");
        if (!f.is_array() || f.size() != 2)
            throw std::runtime_error("group spec: product needs exactly two factors");
        return build_direct_product(group_from_json(f[0]), group_from_json(f[1]));
    }
    throw std::runtime_error("group spec: unknown kind '" + kind + "'");
}

}  // namespace

GroupSpec load_group_spec(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open group spec file: " + file.string());
    json j = json::parse(in);
    GroupSpec spec;
    spec.group = group_from_json(j);
    if (j.contains("expect")) {
        const auto& e = j.at("expect");
        auto opt_ll = [&](const char* k) -> std::optional<long long> {
            if (e.contains(k)) return e.at(k).get<long long>();
            return std::nullopt;
        };
        spec.expect.order = opt_ll("order");
        if (e.contains("class")) spec.expect.cls = e.at("class").get<int>();
        if (e.contains("two_engel")) spec.expect.two_engel = e.at("two_engel").get<bool>();
        spec.expect.exponent = opt_ll("exponent");
        spec.expect.gamma2_order = opt_ll("gamma2_order");
        spec.expect.gamma3_order = opt_ll("gamma3_order");
        spec.expect.center_order = opt_ll("center_order");
    }
    return spec;
}

std::vector<std::pair<std::string, CheckResult>> run_expectations(const FiniteGroup& G,
                                                                  const GroupExpectations& e) {
    std::vector<std::pair<std::string, CheckResult>> out;
    auto push = [&](const std::string& name, bool ok, const std::string& detail) {
        CheckResult r;
        r.ok = ok;
        r.detail = detail;
        out.emplace_back(name, std::move(r));
    };
    if (e.order)
        push("order", G.order() == *e.order,
             "got " + std::to_string(G.order()) + ", expected " + std::to_string(*e.order));
    std::optional<CentralSeries> lcs;
    auto series = [&]() -> const CentralSeries& {
        if (!lcs) lcs = lower_central_series(G);
        return *lcs;
    };
    if (e.cls) {
        const auto& s = series();
        bool ok = s.nilpotent() && *s.cls == *e.cls;
        push("class", ok,
             s.nilpotent() ? "got " + std::to_string(*s.cls) : "group is not nilpotent");
    }
    if (e.two_engel) {
        auto r = is_two_engel(G);
        push("two_engel", r.ok == *e.two_engel, r.ok ? "2-Engel" : "not 2-Engel");
    }
    if (e.exponent) push("exponent", G.exponent() == *e.exponent, std::to_string(G.exponent()));
    if (e.gamma2_order)
        push("gamma2_order", (long long)series().term(2).order() == *e.gamma2_order,
             std::to_string(series().term(2).order()));
    if (e.gamma3_order)
        push("gamma3_order", (long long)series().term(3).order() == *e.gamma3_order,
             std::to_string(series().term(3).order()));
    if (e.center_order)
        push("center_order", (long long)center(G).order() == *e.center_order, "");
    return out;
}

}  // namespace nilposet
