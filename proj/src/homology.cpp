#include "nilposet/homology.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace nilposet {

void SparseIntMatrix::canonicalize() {
    for (const auto& e : entries)
        if (e.r < 0 || e.r >= rows || e.c < 0 || e.c >= cols)
            throw std::invalid_argument("sparse matrix entry out of bounds");
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        if (!out.empty() && out.back().r == e.r && out.back().c == e.c)
            out.back().v += e.v;
        else
            out.push_back(e);
    }
    std::erase_if(out, [](const Entry& e) { return e.v == 0; });
    entries = std::move(out);
}

SparseIntMatrix SparseIntMatrix::read_smat(std::istream& in) {
    SparseIntMatrix m;
    std::size_t nnz = 0;
    if (!(in >> m.rows >> m.cols >> nnz)) throw std::runtime_error("smat: bad header");
    m.entries.reserve(nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        Entry e;
        if (!(in >> e.r >> e.c >> e.v)) throw std::runtime_error("smat: truncated entry list");
        m.entries.push_back(e);
    }
    m.canonicalize();
    return m;
}

void SparseIntMatrix::write_smat(std::ostream& out) const {
    out << rows << " " << cols << " " << entries.size() << "\n";
    for (const auto& e : entries) out << e.r << " " << e.c << " " << e.v << "\n";
}

SparseIntMatrix sparse_mul(const SparseIntMatrix& A, const SparseIntMatrix& B) {
    if (A.cols != B.rows) throw std::invalid_argument("sparse_mul: shape mismatch");
    // rows of A indexed by column for the combination step
    std::vector<std::vector<std::pair<std::int32_t, long long>>> a_by_col(std::size_t(A.cols));
    for (const auto& e : A.entries) a_by_col[std::size_t(e.c)].push_back({e.r, e.v});
    SparseIntMatrix C;
    C.rows = A.rows;
    C.cols = B.cols;
    std::map<std::pair<std::int32_t, std::int32_t>, long long> acc;
    for (const auto& e : B.entries)
        for (const auto& [r, v] : a_by_col[std::size_t(e.r)]) acc[{r, e.c}] += v * e.v;
    for (const auto& [rc, v] : acc)
        if (v != 0) C.entries.push_back({rc.first, rc.second, v});
    return C;
}

std::vector<long long> SnfResult::torsion() const {
    std::vector<long long> t;
    for (long long f : factors)
        if (f > 1) t.push_back(f);
    return t;
}

namespace {

struct OverflowDetected {};

// checked int64 scalar ----------------------------------------------------

struct I64 {
    long long v = 0;
    I64() = default;
    I64(long long x) : v(x) {}
    friend I64 operator+(I64 a, I64 b) {
        long long r;
        if (__builtin_add_overflow(a.v, b.v, &r)) throw OverflowDetected{};
        return r;
    }
    friend I64 operator-(I64 a, I64 b) {
        long long r;
        if (__builtin_sub_overflow(a.v, b.v, &r)) throw OverflowDetected{};
        return r;
    }
    friend I64 operator*(I64 a, I64 b) {
        long long r;
        if (__builtin_mul_overflow(a.v, b.v, &r)) throw OverflowDetected{};
        return r;
    }
    friend I64 operator/(I64 a, I64 b) { return a.v / b.v; }  // truncating
    friend bool operator==(I64 a, I64 b) { return a.v == b.v; }
    friend bool operator<(I64 a, I64 b) { return a.v < b.v; }
    bool is_zero() const { return v == 0; }
};

inline I64 abs_of(I64 a) {
    if (a.v == std::numeric_limits<long long>::min()) throw OverflowDetected{};
    return a.v < 0 ? -a.v : a.v;
}
inline bool is_unit(I64 a) { return a.v == 1 || a.v == -1; }
inline long long to_ll(I64 a) { return a.v; }

inline mpz_class abs_of(const mpz_class& a) { return abs(a); }
inline bool is_unit(const mpz_class& a) { return a == 1 || a == -1; }
inline long long to_ll(const mpz_class& a) {
    if (!a.fits_slong_p()) throw std::runtime_error("invariant factor exceeds int64 range");
    return a.get_si();
}

template <typename I>
struct is_zero_helper {
    static bool zero(const I& x) { return x.is_zero(); }
};
template <>
struct is_zero_helper<mpz_class> {
    static bool zero(const mpz_class& x) { return x == 0; }
};
template <typename I>
bool is_zero(const I& x) {
    return is_zero_helper<I>::zero(x);
}

template <typename I>
I from_ll(long long v) {
    return I(v);
}
template <>
mpz_class from_ll<mpz_class>(long long v) {
    return mpz_class(static_cast<long>(v));
}

// balanced quotient: |a - q*b| <= |b|/2
template <typename I>
I balanced_quotient(const I& a, const I& b) {
    I q = a / b;
    I r = a - q * b;
    if (is_zero(r)) return q;
    I ar = abs_of(r), ab = abs_of(b);
    // adjust when 2|r| > |b|  <=>  |r| > |b| - |r|
    if (ab - ar < ar) {
        bool rpos = I(0) < r;
        bool bpos = I(0) < b;
        if (rpos == bpos)
            q = q + I(1);
        else
            q = q - I(1);
    }
    return q;
}

// sparse elimination ---------------------------------------------------------

template <typename I>
class SnfEliminator {
public:
    using RowEntry = std::pair<std::int32_t, I>;  // (col, value), sorted by col

    SnfEliminator(const SparseIntMatrix& M)
        : nrows_(std::size_t(M.rows)), ncols_(std::size_t(M.cols)), rows_(nrows_),
          col_rows_(ncols_), row_alive_(nrows_, 1), col_alive_(ncols_, 1) {
        for (const auto& e : M.entries) rows_[std::size_t(e.r)].push_back({e.c, from_ll<I>(e.v)});
        for (auto& row : rows_)
            std::sort(row.begin(), row.end(),
                      [](const RowEntry& a, const RowEntry& b) { return a.first < b.first; });
        for (std::size_t r = 0; r < nrows_; ++r)
            for (const auto& [c, v] : rows_[r]) col_rows_[std::size_t(c)].push_back(std::int32_t(r));
        for (std::size_t r = 0; r < nrows_; ++r)
            if (!rows_[r].empty()) heap_.push({rows_[r].size(), std::int32_t(r)});
    }

    std::vector<I> run() {
        std::vector<I> diagonal;
        while (true) {
            auto pivot = select_pivot();
            if (!pivot) break;
            auto [pr, pc] = *pivot;
            reduce_until_divisible(pr, pc);
            clear_pivot(pr, pc);
            diagonal.push_back(abs_of(value_at(pr, pc)));
            row_alive_[std::size_t(pr)] = 0;
            col_alive_[std::size_t(pc)] = 0;
        }
        return diagonal;
    }

private:
    std::size_t nrows_, ncols_;
    std::vector<std::vector<RowEntry>> rows_;
    std::vector<std::vector<std::int32_t>> col_rows_;  // may contain stale row ids
    std::vector<char> row_alive_, col_alive_;
    // lazy min-heap of (row nnz, row); sizes revalidated on pop
    using HeapItem = std::pair<std::size_t, std::int32_t>;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap_;

    I value_at(std::int32_t r, std::int32_t c) const {
        for (const auto& [cc, v] : rows_[std::size_t(r)])
            if (cc == c) return v;
        return I(0);
    }

    std::size_t live_row_nnz(std::int32_t r) {
        std::erase_if(rows_[std::size_t(r)],
                      [&](const RowEntry& e) { return !col_alive_[std::size_t(e.first)]; });
        return rows_[std::size_t(r)].size();
    }

    std::size_t col_degree(std::int32_t c) {
        auto& cr = col_rows_[std::size_t(c)];
        std::erase_if(cr, [&](std::int32_t r) {
            return !row_alive_[std::size_t(r)] || value_at(r, c) == I(0);
        });
        std::sort(cr.begin(), cr.end());
        cr.erase(std::unique(cr.begin(), cr.end()), cr.end());
        return cr.size();
    }

    // choose a live entry: prefer units, small fill estimate
    std::optional<std::pair<std::int32_t, std::int32_t>> select_pivot() {
        constexpr int kCandidates = 24;
        std::vector<std::int32_t> seen;
        std::optional<std::pair<std::int32_t, std::int32_t>> best_unit, best_any;
        std::size_t best_unit_score = SIZE_MAX, best_any_score = SIZE_MAX;
        int popped = 0;
        while (!heap_.empty() && popped < kCandidates) {
            auto [sz, r] = heap_.top();
            heap_.pop();
            if (!row_alive_[std::size_t(r)]) continue;
            std::size_t live = live_row_nnz(r);
            if (live == 0) continue;
            if (live != sz) {  // stale size, requeue with the true one
                heap_.push({live, r});
                continue;
            }
            ++popped;
            seen.push_back(r);
            for (const auto& [c, v] : rows_[std::size_t(r)]) {
                std::size_t score = (live - 1) * (col_rows_[std::size_t(c)].size());
                if (is_unit(v)) {
                    if (score < best_unit_score) {
                        best_unit_score = score;
                        best_unit = {{r, c}};
                    }
                } else if (score < best_any_score) {
                    best_any_score = score;
                    best_any = {{r, c}};
                }
            }
            if (best_unit && best_unit_score == 0) break;
        }
        for (std::int32_t r : seen)
            if (row_alive_[std::size_t(r)] && !rows_[std::size_t(r)].empty())
                heap_.push({rows_[std::size_t(r)].size(), r});
        if (best_unit) return best_unit;
        return best_any;
    }

    // row[dst] -= q * row[src]
    void row_axpy(std::int32_t dst, std::int32_t src, const I& q) {
        const auto& s = rows_[std::size_t(src)];
        auto& d = rows_[std::size_t(dst)];
        std::vector<RowEntry> out;
        out.reserve(d.size() + s.size());
        std::size_t i = 0, j = 0;
        while (i < d.size() || j < s.size()) {
            if (j >= s.size() || (i < d.size() && d[i].first < s[j].first)) {
                out.push_back(d[i++]);
            } else if (i >= d.size() || s[j].first < d[i].first) {
                I nv = I(0) - q * s[j].second;
                if (!is_zero(nv)) {
                    out.push_back({s[j].first, nv});
                    col_rows_[std::size_t(s[j].first)].push_back(dst);
                }
                ++j;
            } else {
                I nv = d[i].second - q * s[j].second;
                if (!is_zero(nv)) out.push_back({d[i].first, nv});
                ++i;
                ++j;
            }
        }
        d = std::move(out);
        heap_.push({d.size(), dst});
    }

    // col[dst] -= q * col[src]
    void col_axpy(std::int32_t dst, std::int32_t src, const I& q) {
        col_degree(src);  // compact the source column index first
        for (std::int32_t r : col_rows_[std::size_t(src)]) {
            I sv = value_at(r, src);
            if (is_zero(sv)) continue;
            auto& row = rows_[std::size_t(r)];
            I delta = I(0) - q * sv;
            auto it = std::lower_bound(row.begin(), row.end(), dst,
                                       [](const RowEntry& e, std::int32_t c) { return e.first < c; });
            if (it != row.end() && it->first == dst) {
                it->second = it->second + delta;
                if (is_zero(it->second)) row.erase(it);
            } else {
                row.insert(it, {dst, delta});
                col_rows_[std::size_t(dst)].push_back(r);
            }
            heap_.push({row.size(), r});
        }
    }

    // establish: pivot value divides every entry in its row and column
    void reduce_until_divisible(std::int32_t& pr, std::int32_t& pc) {
        while (true) {
            I v = value_at(pr, pc);
            if (is_unit(v)) return;
            bool changed = false;
            // column entries not divisible by v
            col_degree(pc);
            for (std::int32_t r : col_rows_[std::size_t(pc)]) {
                if (r == pr || !row_alive_[std::size_t(r)]) continue;
                I val = value_at(r, pc);
                if (is_zero(val)) continue;
                I q = val / v;
                if (val - q * v == I(0)) continue;
                q = balanced_quotient(val, v);
                row_axpy(r, pr, q);
                // the remainder is smaller than |v|; make it the new pivot
                pr = r;
                changed = true;
                break;
            }
            if (changed) continue;
            for (const auto& [c, val] : rows_[std::size_t(pr)]) {
                if (c == pc || !col_alive_[std::size_t(c)]) continue;
                I q = val / v;
                if (val - q * v == I(0)) continue;
                q = balanced_quotient(val, v);
                col_axpy(c, pc, q);
                pc = c;
                changed = true;
                break;
            }
            if (!changed) return;
        }
    }

    void clear_pivot(std::int32_t pr, std::int32_t pc) {
        I v = value_at(pr, pc);
        col_degree(pc);
        // clear the column
        auto rows_in_col = col_rows_[std::size_t(pc)];
        for (std::int32_t r : rows_in_col) {
            if (r == pr || !row_alive_[std::size_t(r)]) continue;
            I val = value_at(r, pc);
            if (is_zero(val)) continue;
            row_axpy(r, pr, val / v);
        }
        // clear the row
        auto row_copy = rows_[std::size_t(pr)];
        for (const auto& [c, val] : row_copy) {
            if (c == pc || !col_alive_[std::size_t(c)]) continue;
            col_axpy(c, pc, val / v);
        }
    }
};

std::vector<long long> fixup_divisibility(std::vector<long long> d) {
    // diag(a,b) ~ diag(gcd,lcm); sweep until the chain divides
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                if (d[j] % d[i] == 0) continue;
                long long g = std::gcd(d[i], d[j]);
                long long l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
                changed = true;
            }
        std::sort(d.begin(), d.end());
    }
    return d;
}

template <typename I>
SnfResult snf_with(const SparseIntMatrix& M) {
    SnfEliminator<I> elim(M);
    auto diag = elim.run();
    SnfResult r;
    for (const auto& d : diag) r.factors.push_back(to_ll(d));
    r.factors = fixup_divisibility(std::move(r.factors));
    return r;
}

}  // namespace

SnfResult smith_normal_form(const SparseIntMatrix& M) {
    SparseIntMatrix C = M;
    C.canonicalize();
    try {
        return snf_with<I64>(C);
    } catch (const OverflowDetected&) {
        SnfResult r = snf_with<mpz_class>(C);
        r.used_bigint = true;
        return r;
    }
}

long long rank_mod_p(const SparseIntMatrix& M, long long p) {
    if (p < 2) throw std::invalid_argument("rank_mod_p: p >= 2 required");
    SparseIntMatrix C = M;
    C.canonicalize();
    auto modp = [&](long long v) {
        long long r = v % p;
        return r < 0 ? r + p : r;
    };
    auto inv_mod = [&](long long a) {
        long long t = 0, newt = 1, r = p, newr = a % p;
        while (newr != 0) {
            long long q = r / newr;
            std::swap(t -= q * newt, newt);
            std::swap(r -= q * newr, newr);
        }
        if (r != 1) throw std::invalid_argument("rank_mod_p: p is not prime");
        return modp(t);
    };
    using Row = std::vector<std::pair<std::int32_t, long long>>;
    std::vector<Row> rows(std::size_t(C.rows));
    for (const auto& e : C.entries)
        if (modp(e.v) != 0) rows[std::size_t(e.r)].push_back({e.c, modp(e.v)});
    std::map<std::int32_t, Row> pivots;  // leading col -> normalized row
    long long rank = 0;
    auto axpy = [&](Row& dst, const Row& src, long long f) {
        Row out;
        out.reserve(dst.size() + src.size());
        std::size_t i = 0, j = 0;
        while (i < dst.size() || j < src.size()) {
            if (j >= src.size() || (i < dst.size() && dst[i].first < src[j].first))
                out.push_back(dst[i++]);
            else if (i >= dst.size() || src[j].first < dst[i].first) {
                long long nv = modp(f * src[j].second);
                if (nv) out.push_back({src[j].first, nv});
                ++j;
            } else {
                long long nv = modp(dst[i].second + f * src[j].second);
                if (nv) out.push_back({dst[i].first, nv});
                ++i;
                ++j;
            }
        }
        dst = std::move(out);
    };
    for (auto& row : rows) {
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) break;
            axpy(row, it->second, p - row.front().second);
        }
        if (row.empty()) continue;
        long long s = inv_mod(row.front().second);
        for (auto& [c, v] : row) v = modp(v * s);
        pivots.emplace(row.front().first, std::move(row));
        ++rank;
    }
    return rank;
}

void ChainComplex::validate() const {
    if (boundaries.size() + 1 != dims.size())
        throw std::invalid_argument("chain complex: dims/boundaries size mismatch");
    for (std::size_t k = 0; k < boundaries.size(); ++k) {
        if (boundaries[k].rows != dims[k] || boundaries[k].cols != dims[k + 1])
            throw std::invalid_argument("chain complex: boundary shape mismatch at degree " +
                                        std::to_string(k + 1));
    }
    for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
        SparseIntMatrix prod = sparse_mul(boundaries[k], boundaries[k + 1]);
        prod.canonicalize();
        if (!prod.entries.empty())
            throw std::runtime_error("chain complex: d(" + std::to_string(k + 1) + ") * d(" +
                                     std::to_string(k + 2) + ") != 0");
    }
}

std::vector<long long> HomologyResult::reduced_betti() const {
    std::vector<long long> r = betti;
    if (!r.empty() && r[0] > 0) r[0] -= 1;
    return r;
}

long long HomologyResult::euler_from_betti() const {
    if (truncated) throw std::logic_error("euler_from_betti: truncated complex");
    long long chi = 0;
    for (int k = 0; k <= top_degree; ++k) chi += (k % 2 ? -1 : 1) * betti[std::size_t(k)];
    return chi;
}

bool HomologyResult::torsion_free() const {
    for (const auto& t : torsion)
        if (!t.empty()) return false;
    return true;
}

HomologyResult homology(const ChainComplex& cc, long long modulus) {
    cc.validate();
    const int D = int(cc.boundaries.size());
    HomologyResult out;
    out.truncated = cc.truncated;
    out.top_degree = cc.truncated ? D - 1 : D;
    out.modulus = modulus;

    std::vector<SnfResult> snf(static_cast<std::size_t>(D));
    for (int k = 0; k < D; ++k) snf[std::size_t(k)] = smith_normal_form(cc.boundaries[std::size_t(k)]);
    auto rank_d = [&](int k) -> long long {  // rank of d_k
        if (k <= 0 || k > D) return 0;
        return snf[std::size_t(k - 1)].rank();
    };
    for (int i = 0; i <= out.top_degree; ++i) {
        long long b = cc.dims[std::size_t(i)] - rank_d(i) - rank_d(i + 1);
        out.betti.push_back(b);
        if (i + 1 <= D)
            out.torsion.push_back(snf[std::size_t(i)].torsion());
        else
            out.torsion.push_back({});
    }
    if (!cc.truncated) {
        long long chi_cells = 0, chi_betti = 0;
        for (int k = 0; k <= D; ++k) chi_cells += (k % 2 ? -1 : 1) * cc.dims[std::size_t(k)];
        for (int k = 0; k <= D; ++k) chi_betti += (k % 2 ? -1 : 1) * out.betti[std::size_t(k)];
        if (chi_cells != chi_betti)
            throw std::logic_error("homology: Betti alternating sum disagrees with cell counts");
    }

    if (modulus != 0) {
        // H_i(-;Z/e) = H_i ⊗ Z/e  ⊕  Tor(H_{i-1}, Z/e); torsion of H_i needs
        // d_{i+1}, so the top truncated degree has no modular answer.
        out.mod_top_degree = std::min(out.top_degree, D - 1);
        if (!cc.truncated) out.mod_top_degree = out.top_degree;
        for (int i = 0; i <= out.mod_top_degree; ++i) {
            std::vector<long long> f;
            for (long long k = 0; k < out.betti[std::size_t(i)]; ++k) f.push_back(modulus);
            for (long long t : out.torsion[std::size_t(i)]) {
                long long g = std::gcd(t, modulus);
                if (g > 1) f.push_back(g);
            }
            if (i > 0)
                for (long long t : out.torsion[std::size_t(i - 1)]) {
                    long long g = std::gcd(t, modulus);
                    if (g > 1) f.push_back(g);
                }
            std::sort(f.begin(), f.end());
            out.mod_factors.push_back(std::move(f));
        }
    }
    return out;
}

bool compare_wedge_suspension(const HomologyResult& total, const HomologyResult& piece,
                              long long copies) {
    auto tb = total.reduced_betti();
    auto pb = piece.reduced_betti();
    int top = total.top_degree;
    if (!total.truncated && !piece.truncated) top = std::max(top, piece.top_degree + 1);
    top = std::min(top, total.top_degree);
    for (int n = 0; n <= top; ++n) {
        long long want_b = 0;
        std::vector<long long> want_t;
        if (n >= 1 && n - 1 <= piece.top_degree) {
            want_b = copies * pb[std::size_t(n - 1)];
            for (long long t : piece.torsion[std::size_t(n - 1)])
                for (long long c = 0; c < copies; ++c) want_t.push_back(t);
        }
        std::vector<long long> have_t = total.torsion[std::size_t(n)];
        std::sort(want_t.begin(), want_t.end());
        std::sort(have_t.begin(), have_t.end());
        if (tb[std::size_t(n)] != want_b || have_t != want_t) return false;
    }
    return true;
}

}  // namespace nilposet
