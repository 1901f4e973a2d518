#include "nilposet/subspace.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace nilposet {

namespace {

int mod(int a, int p) {
    int r = a % p;
    return r < 0 ? r + p : r;
}

int inv_mod(int a, int p) {
    a = mod(a, p);
    for (int x = 1; x < p; ++x)
        if (a * x % p == 1) return x;
    throw std::logic_error("inv_mod: not invertible");
}

// in-place RREF; returns rank
int rref(std::vector<std::vector<int>>& rows, int p, int r) {
    int rank = 0;
    for (int col = 0; col < r && rank < int(rows.size()); ++col) {
        int piv = -1;
        for (int i = rank; i < int(rows.size()); ++i)
            if (rows[std::size_t(i)][std::size_t(col)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[std::size_t(rank)], rows[std::size_t(piv)]);
        int s = inv_mod(rows[std::size_t(rank)][std::size_t(col)], p);
        for (int c = 0; c < r; ++c)
            rows[std::size_t(rank)][std::size_t(c)] = mod(rows[std::size_t(rank)][std::size_t(c)] * s, p);
        for (int i = 0; i < int(rows.size()); ++i) {
            if (i == rank) continue;
            int f = rows[std::size_t(i)][std::size_t(col)];
            if (f == 0) continue;
            for (int c = 0; c < r; ++c)
                rows[std::size_t(i)][std::size_t(c)] =
                    mod(rows[std::size_t(i)][std::size_t(c)] - f * rows[std::size_t(rank)][std::size_t(c)], p);
        }
        ++rank;
    }
    rows.resize(std::size_t(rank));
    return rank;
}

}  // namespace

bool SubspaceFp::contains(const std::vector<int>& v) const {
    // reduce v by the RREF basis
    std::vector<int> w = v;
    for (const auto& row : basis) {
        int pivot = -1;
        for (int c = 0; c < r; ++c)
            if (row[std::size_t(c)] != 0) {
                pivot = c;
                break;
            }
        int f = w[std::size_t(pivot)];
        if (f == 0) continue;
        for (int c = 0; c < r; ++c) w[std::size_t(c)] = mod(w[std::size_t(c)] - f * row[std::size_t(c)], p);
    }
    return std::all_of(w.begin(), w.end(), [](int x) { return x == 0; });
}

std::vector<std::vector<int>> SubspaceFp::elements() const {
    std::vector<std::vector<int>> out;
    const int d = dim();
    std::vector<int> coef(std::size_t(d), 0);
    while (true) {
        std::vector<int> v(std::size_t(r), 0);
        for (int i = 0; i < d; ++i)
            for (int c = 0; c < r; ++c)
                v[std::size_t(c)] = mod(v[std::size_t(c)] + coef[std::size_t(i)] * basis[std::size_t(i)][std::size_t(c)], p);
        out.push_back(std::move(v));
        int i = d - 1;
        while (i >= 0 && coef[std::size_t(i)] == p - 1) coef[std::size_t(i--)] = 0;
        if (i < 0) break;
        ++coef[std::size_t(i)];
    }
    return out;
}

std::string SubspaceFp::key() const {
    std::ostringstream os;
    for (const auto& row : basis) {
        for (int x : row) os << x;
        os << "|";
    }
    return os.str();
}

bool SubspaceFp::subset_of(const SubspaceFp& o) const {
    for (const auto& row : basis)
        if (!o.contains(row)) return false;
    return true;
}

SubspaceFp span_of(int p, int r, std::vector<std::vector<int>> vectors) {
    for (auto& v : vectors)
        for (auto& x : v) x = mod(x, p);
    rref(vectors, p, r);
    SubspaceFp U;
    U.p = p;
    U.r = r;
    U.basis = std::move(vectors);
    return U;
}

long long gaussian_binomial(int r, int k, int p) {
    if (k < 0 || k > r) return 0;
    // q-Pascal recurrence: (r,k) = (r-1,k-1) + p^k (r-1,k); integral throughout
    std::vector<std::vector<long long>> t(std::size_t(r) + 1,
                                          std::vector<long long>(std::size_t(r) + 1, 0));
    for (int n = 0; n <= r; ++n) {
        t[std::size_t(n)][0] = 1;
        for (int m = 1; m <= n; ++m) {
            long long pk = 1;
            for (int i = 0; i < m; ++i) pk *= p;
            long long v = t[std::size_t(n) - 1][std::size_t(m) - 1];
            long long w = t[std::size_t(n) - 1][std::size_t(m)];
            if (w != 0 && pk > (std::numeric_limits<long long>::max() - v) / w)
                throw std::overflow_error("gaussian_binomial: value exceeds int64");
            t[std::size_t(n)][std::size_t(m)] = v + pk * w;
        }
    }
    return t[std::size_t(r)][std::size_t(k)];
}

std::vector<SubspaceFp> enumerate_subspaces(int p, int r, int k) {
    std::vector<SubspaceFp> out;
    if (k == 0) {
        SubspaceFp z;
        z.p = p;
        z.r = r;
        out.push_back(z);
        return out;
    }
    // choose pivot columns c_1 < ... < c_k, then fill the free entries:
    // row i has 1 at c_i, zeros at other pivots, zeros left of c_i, and
    // arbitrary values at non-pivot columns right of c_i.
    std::vector<int> pivots(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pivots[std::size_t(i)] = i;
    auto emit_for_pivots = [&]() {
        std::vector<std::pair<int, int>> free_cells;  // (row, col)
        std::vector<char> is_pivot(std::size_t(r), 0);
        for (int c : pivots) is_pivot[std::size_t(c)] = 1;
        for (int i = 0; i < k; ++i)
            for (int c = pivots[std::size_t(i)] + 1; c < r; ++c)
                if (!is_pivot[std::size_t(c)]) free_cells.push_back({i, c});
        std::vector<int> vals(free_cells.size(), 0);
        while (true) {
            SubspaceFp U;
            U.p = p;
            U.r = r;
            U.basis.assign(std::size_t(k), std::vector<int>(std::size_t(r), 0));
            for (int i = 0; i < k; ++i) U.basis[std::size_t(i)][std::size_t(pivots[std::size_t(i)])] = 1;
            for (std::size_t f = 0; f < free_cells.size(); ++f)
                U.basis[std::size_t(free_cells[f].first)][std::size_t(free_cells[f].second)] = vals[f];
            out.push_back(std::move(U));
            std::size_t i = vals.size();
            while (i > 0 && vals[i - 1] == p - 1) vals[--i] = 0;
            if (i == 0) break;
            ++vals[i - 1];
        }
    };
    while (true) {
        emit_for_pivots();
        // next pivot combination
        int i = k - 1;
        while (i >= 0 && pivots[std::size_t(i)] == r - k + i) --i;
        if (i < 0) break;
        ++pivots[std::size_t(i)];
        for (int j = i + 1; j < k; ++j) pivots[std::size_t(j)] = pivots[std::size_t(j - 1)] + 1;
    }
    if ((long long)out.size() != gaussian_binomial(r, k, p))
        throw std::logic_error("enumerate_subspaces: count mismatch with Gaussian binomial");
    std::sort(out.begin(), out.end(),
              [](const SubspaceFp& a, const SubspaceFp& b) { return a.key() < b.key(); });
    return out;
}

std::vector<SubspaceFp> subspaces_dim_le(int p, int r, int dmax) {
    std::vector<SubspaceFp> out;
    for (int k = 0; k <= dmax; ++k) {
        auto level = enumerate_subspaces(p, r, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

int TrilinearForm::eval(const std::vector<int>& x, const std::vector<int>& y,
                        const std::vector<int>& z) const {
    long long s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                s += (long long)t[std::size_t((i * 3 + j) * 3 + k)] * x[std::size_t(i)] * y[std::size_t(j)] * z[std::size_t(k)];
    return int(((s % p) + p) % p);
}

bool TrilinearForm::vanishes_on(const SubspaceFp& U) const {
    auto elems = U.elements();
    for (const auto& x : elems)
        for (const auto& y : elems)
            for (const auto& z : elems)
                if (eval(x, y, z) != 0) return false;
    return true;
}

TrilinearForm beta_closed_form(int p) {
    TrilinearForm f;
    f.p = p;
    f.source = TrilinearForm::Source::ClosedForm;
    // det(x | y | phi(z)), phi = diag(-1,0,1)
    auto det3 = [&](int a0, int a1, int a2, int b0, int b1, int b2, int c0, int c1, int c2) {
        long long d = (long long)a0 * (b1 * c2 - b2 * c1) - (long long)b0 * (a1 * c2 - a2 * c1) +
                      (long long)c0 * (a1 * b2 - a2 * b1);
        return mod(int(d % p), p);
    };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                int x[3] = {0, 0, 0}, y[3] = {0, 0, 0}, z[3] = {0, 0, 0};
                x[i] = 1;
                y[j] = 1;
                z[k] = 1;
                int phi_z[3] = {mod(-z[0], p), 0, z[2]};
                f.t[std::size_t((i * 3 + j) * 3 + k)] =
                    det3(x[0], x[1], x[2], y[0], y[1], y[2], phi_z[0], phi_z[1], phi_z[2]);
            }
    return f;
}

namespace {

// lift of an abelianization vector: a^{v1} b^{v2} c^{v3}
Elem u4_lift(const MatrixU4Group& G, const std::vector<int>& v) {
    Elem a = G.generators()[0], b = G.generators()[1], c = G.generators()[2];
    return G.mul(G.mul(G.power(a, v[0]), G.power(b, v[1])), G.power(c, v[2]));
}

// discrete log in T^3 = <I + E14>: the (1,4) entry of the commutator
int u4_gamma3_dlog(const MatrixU4Group& G, Elem t) {
    auto e = G.entries_of(t);
    if (e[0] || e[1] || e[3] || e[4] || e[5])
        throw std::logic_error("element is not in the last central term");
    return e[2];
}

}  // namespace

TrilinearForm beta_from_group(const MatrixU4Group& G) {
    TrilinearForm f;
    f.p = G.p();
    f.source = TrilinearForm::Source::FromGroup;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                std::vector<int> x(3, 0), y(3, 0), z(3, 0);
                x[std::size_t(i)] = y[std::size_t(j)] = z[std::size_t(k)] = 1;
                Elem t = G.commutator3(u4_lift(G, x), u4_lift(G, y), u4_lift(G, z));
                f.t[std::size_t((i * 3 + j) * 3 + k)] = u4_gamma3_dlog(G, t);
            }
    return f;
}

TrilinearForm beta_tensor(const MatrixU4Group& G, std::uint64_t seed) {
    TrilinearForm grp = beta_from_group(G);
    TrilinearForm cls = beta_closed_form(G.p());
    if (grp.t != cls.t)
        throw std::runtime_error("beta tensor mismatch between group and closed form on basis triples");

    const int p = G.p();
    auto check = [&](const std::vector<int>& x, const std::vector<int>& y,
                     const std::vector<int>& z) {
        Elem t = G.commutator3(u4_lift(G, x), u4_lift(G, y), u4_lift(G, z));
        if (u4_gamma3_dlog(G, t) != cls.eval(x, y, z))
            throw std::runtime_error("beta tensor mismatch on a general triple");
    };
    if (p <= 3) {
        const int n = p * p * p;
        auto vec = [&](int idx) {
            return std::vector<int>{idx % p, (idx / p) % p, idx / (p * p)};
        };
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) check(vec(a), vec(b), vec(c));
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, p - 1);
        for (int s = 0; s < 1'000'000; ++s) {
            std::vector<int> x{pick(rng), pick(rng), pick(rng)};
            std::vector<int> y{pick(rng), pick(rng), pick(rng)};
            std::vector<int> z{pick(rng), pick(rng), pick(rng)};
            check(x, y, z);
        }
    }
    return grp;
}

std::vector<SubspaceFp> isotropic_family(const TrilinearForm& beta, int r) {
    if (r != 3) throw std::invalid_argument("isotropic_family: only r = 3 is supported");
    const int p = beta.p;
    std::vector<SubspaceFp> brute;
    for (const auto& U : subspaces_dim_le(p, 3, 2))
        if (beta.vanishes_on(U)) brute.push_back(U);

    // independent route: dim <= 1 always; planes exactly when phi(U) <= U
    auto phi = [&](const std::vector<int>& v) {
        return std::vector<int>{mod(-v[0], p), 0, v[2]};
    };
    std::vector<SubspaceFp> shortcut;
    for (const auto& U : subspaces_dim_le(p, 3, 1)) shortcut.push_back(U);
    for (const auto& U : enumerate_subspaces(p, 3, 2)) {
        bool inv = true;
        for (const auto& row : U.basis)
            if (!U.contains(phi(row))) {
                inv = false;
                break;
            }
        if (inv) shortcut.push_back(U);
    }
    auto by_key = [](const SubspaceFp& a, const SubspaceFp& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        return a.key() < b.key();
    };
    std::sort(brute.begin(), brute.end(), by_key);
    std::sort(shortcut.begin(), shortcut.end(), by_key);
    if (!(brute == shortcut))
        throw std::runtime_error("isotropic family: brute-force and phi-invariance routes disagree");
    return brute;
}

BurnsideCounts burnside_counts(int r) {
    if (r < 3) throw std::invalid_argument("burnside_counts: r >= 3 required");
    auto pow3 = [](int e) {
        long long x = 1;
        while (e--) x *= 3;
        return x;
    };
    BurnsideCounts c;
    const long long b1 = gaussian_binomial(r, 1, 3);
    const long long b2 = gaussian_binomial(r, 2, 3);
    const long long lines_per_plane = gaussian_binomial(2, 1, 3);  // 4
    c.n0 = pow3(r) + pow3(r - 1) * b1 + pow3(r - 2) * b2;
    c.n1 = pow3(r) * b1 + pow3(r) * b2 + pow3(r - 1) * lines_per_plane * b2;
    c.n2 = pow3(r) * lines_per_plane * b2;
    c.chi = c.n0 - c.n1 + c.n2;
    c.m = c.chi - 1;
    const long long closed = pow3(r - 3) * (pow3(2 * r) - 13 * pow3(r) + 39) - 1;
    if (c.m != closed)
        throw std::logic_error("burnside_counts: alternating sum disagrees with the closed form");
    return c;
}

VectorSpaceGroup make_vector_space_group(int p, int r) {
    VectorSpaceGroup V;
    V.group = build_elementary_abelian(p, r);
    V.p = p;
    V.r = r;
    return V;
}

Elem VectorSpaceGroup::elem_of(const std::vector<int>& v) const {
    std::vector<int> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = mod(v[i], p);
    return pc().elem_of_exponents(w);
}

std::vector<int> VectorSpaceGroup::vector_of(Elem e) const { return pc().exponents_of(e); }

Subgroup subspace_to_subgroup(const VectorSpaceGroup& V, const SubspaceFp& U) {
    Subgroup H;
    H.parent = V.group.get();
    for (const auto& v : U.elements()) H.elements.push_back(V.elem_of(v));
    std::sort(H.elements.begin(), H.elements.end());
    for (const auto& row : U.basis) H.generators.push_back(V.elem_of(row));
    return H;
}

SubgroupFamily family_from_subspaces(const VectorSpaceGroup& V,
                                     const std::vector<SubspaceFp>& subs, int q) {
    std::vector<Subgroup> members;
    for (const auto& U : subs) members.push_back(subspace_to_subgroup(V, U));
    return family_from_subgroups(*V.group, q, std::move(members));
}

std::vector<int> abelian_coordinates(const FiniteGroup& Q, const std::vector<Elem>& basis_images,
                                     int p, Elem x) {
    // brute-force dlog over the little vector space spanned by the images
    const int r = int(basis_images.size());
    std::vector<int> coef(std::size_t(r), 0);
    while (true) {
        Elem e = 0;
        for (int i = 0; i < r; ++i) e = Q.mul(e, Q.power(basis_images[std::size_t(i)], coef[std::size_t(i)]));
        if (e == x) return coef;
        int i = r - 1;
        while (i >= 0 && coef[std::size_t(i)] == p - 1) coef[std::size_t(i--)] = 0;
        if (i < 0) throw std::logic_error("abelian_coordinates: element not in the span");
        ++coef[std::size_t(i)];
    }
}

SubspaceFp subgroup_to_subspace(const FiniteGroup& Q, const std::vector<Elem>& basis_images,
                                int p, int r, const Subgroup& H) {
    std::vector<std::vector<int>> vecs;
    for (Elem x : H.elements) vecs.push_back(abelian_coordinates(Q, basis_images, p, x));
    return span_of(p, r, std::move(vecs));
}

}  // namespace nilposet
