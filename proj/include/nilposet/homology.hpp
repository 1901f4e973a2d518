#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nilposet {

/// Exact integer sparse matrix in triplet form. `canonicalize` sorts,
/// merges duplicates and drops explicit zeros.
struct SparseIntMatrix {
    std::int64_t rows = 0, cols = 0;
    struct Entry {
        std::int32_t r = 0, c = 0;
        long long v = 0;
    };
    std::vector<Entry> entries;

    void add(std::int32_t r, std::int32_t c, long long v) { entries.push_back({r, c, v}); }
    void canonicalize();
    std::size_t nnz() const { return entries.size(); }

    // triplet text format: header "rows cols nnz", then one "row col value"
    // entry per line (0-based indices)
    static SparseIntMatrix read_smat(std::istream& in);
    void write_smat(std::ostream& out) const;
};

SparseIntMatrix sparse_mul(const SparseIntMatrix& A, const SparseIntMatrix& B);

/// Invariant factors d_1 | d_2 | ... (including the 1s), ascending.
struct SnfResult {
    std::vector<long long> factors;
    bool used_bigint = false;

    long long rank() const { return (long long)factors.size(); }
    std::vector<long long> torsion() const;  // factors > 1
};

// Exact Smith normal form by sparse elimination with small-pivot /
// fill-aware selection. Arithmetic runs in checked int64 and transparently
// restarts with big integers on overflow.
SnfResult smith_normal_form(const SparseIntMatrix& M);

// Independent GF(p) elimination; cross-check for SNF-implied ranks.
long long rank_mod_p(const SparseIntMatrix& M, long long p);

/// Boundary matrices d_1..d_D of a complex with dims[k] k-cells.
/// `truncated` means d_{D+1} was not built, so degree D homology is unknown.
struct ChainComplex {
    std::vector<std::int64_t> dims;
    std::vector<SparseIntMatrix> boundaries;
    bool truncated = false;

    int top_dim() const { return int(dims.size()) - 1; }
    void validate() const;  // shape checks and d(k) * d(k+1) = 0
};

struct HomologyResult {
    int top_degree = -1;  // degrees 0..top_degree are valid
    bool truncated = false;
    std::vector<long long> betti;
    std::vector<std::vector<long long>> torsion;
    // For a requested modulus e != 0: cyclic factors of H_i(-; Z/e) per
    // degree (universal coefficients), valid through mod_top_degree.
    long long modulus = 0;
    int mod_top_degree = -1;
    std::vector<std::vector<long long>> mod_factors;

    std::vector<long long> reduced_betti() const;
    long long euler_from_betti() const;  // requires !truncated
    bool torsion_free() const;
};

// Integer homology of the complex (and Z/e answers when modulus != 0).
// Throws if d∘d != 0.
HomologyResult homology(const ChainComplex& cc, long long modulus = 0);

// Reduced-homology comparison H~_n(total) == copies * H~_{n-1}(piece) in all
// shared degrees, Betti numbers and torsion lists alike.
bool compare_wedge_suspension(const HomologyResult& total, const HomologyResult& piece,
                              long long copies);

}  // namespace nilposet
