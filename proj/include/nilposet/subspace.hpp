#pragma once

#include <array>

#include "nilposet/catalog.hpp"
#include "nilposet/families.hpp"
#include "nilposet/group.hpp"

namespace nilposet {

/// Subspace of (F_p)^r in reduced row-echelon form; the RREF matrix is the
/// canonical key, so equal subspaces compare equal.
struct SubspaceFp {
    int p = 0, r = 0;
    std::vector<std::vector<int>> basis;  // RREF rows, each of length r

    int dim() const { return int(basis.size()); }
    bool contains(const std::vector<int>& v) const;
    std::vector<std::vector<int>> elements() const;  // all p^dim vectors
    std::string key() const;

    bool operator==(const SubspaceFp& o) const { return p == o.p && r == o.r && basis == o.basis; }
    bool subset_of(const SubspaceFp& o) const;
};

// Canonical subspace spanned by arbitrary vectors.
SubspaceFp span_of(int p, int r, std::vector<std::vector<int>> vectors);

long long gaussian_binomial(int r, int k, int p);

// All k-dimensional subspaces, canonically ordered; the count is checked
// against the Gaussian binomial.
std::vector<SubspaceFp> enumerate_subspaces(int p, int r, int k);

// All subspaces of dimension <= dmax (dimension 0 included).
std::vector<SubspaceFp> subspaces_dim_le(int p, int r, int dmax);

/// Trilinear form on (F_p)^3 given by its structure tensor.
struct TrilinearForm {
    int p = 0;
    std::array<int, 27> t{};  // t[(i*3+j)*3+k]
    enum class Source { FromGroup, ClosedForm } source = Source::ClosedForm;

    int eval(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& z) const;
    bool vanishes_on(const SubspaceFp& U) const;
};

// det(x | y | phi(z)) with phi = diag(-1, 0, 1).
TrilinearForm beta_closed_form(int p);

// Structure tensor of the 3-fold commutator of U4(F_p) through its
// abelianization, read off from the group itself (basis lifts a,b,c).
TrilinearForm beta_from_group(const MatrixU4Group& G);

// Builds both tensors and cross-validates them: on all basis triples, and on
// general triples (exhaustively for p <= 3, >= 10^6 seeded samples above).
// Throws on any mismatch.
TrilinearForm beta_tensor(const MatrixU4Group& G, std::uint64_t seed = 12345);

// Subspaces of dim <= 2 on which the form vanishes, computed by brute-force
// vanishing AND by the phi-invariance criterion for planes; throws if the two
// routes disagree.
std::vector<SubspaceFp> isotropic_family(const TrilinearForm& beta, int r = 3);

struct BurnsideCounts {
    long long n0 = 0, n1 = 0, n2 = 0;
    long long chi = 0;  // n0 - n1 + n2
    long long m = 0;    // chi - 1, must match the closed form
};

// Closed-form chain counts of the dim<=2 subspace coset poset of (F_3)^r and
// the wedge size m(r) = 3^{r-3}(9^r - 13*3^r + 39) - 1; both routes checked.
BurnsideCounts burnside_counts(int r);

// --- bridges to the group-level machinery -----------------------------------

/// Elementary abelian group (F_p)^r together with coordinate accessors, so
/// subspaces can be converted to subgroups and back.
struct VectorSpaceGroup {
    GroupPtr group;
    int p = 0, r = 0;

    const PcGroup& pc() const { return static_cast<const PcGroup&>(*group); }
    Elem elem_of(const std::vector<int>& v) const;
    std::vector<int> vector_of(Elem e) const;
};

VectorSpaceGroup make_vector_space_group(int p, int r);

Subgroup subspace_to_subgroup(const VectorSpaceGroup& V, const SubspaceFp& U);
SubgroupFamily family_from_subspaces(const VectorSpaceGroup& V,
                                     const std::vector<SubspaceFp>& subs, int q = 2);

// Coordinates of a quotient-group element with respect to the images of the
// listed generators; the quotient must be elementary abelian of rank
// basis_images.size(). Used to match pushed-forward families with subspace
// families.
std::vector<int> abelian_coordinates(const FiniteGroup& Q, const std::vector<Elem>& basis_images,
                                     int p, Elem x);

// Converts a subgroup of an elementary abelian quotient into a canonical
// subspace via the coordinate map above.
SubspaceFp subgroup_to_subspace(const FiniteGroup& Q, const std::vector<Elem>& basis_images,
                                int p, int r, const Subgroup& H);

}  // namespace nilposet
