#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gf/quadform.hpp"

namespace gf {

// Reduced Betti numbers \tilde beta_0, \tilde beta_1, ...; trailing zeros
// trimmed canonically.
class BettiVector {
public:
    BettiVector() = default;
    explicit BettiVector(std::vector<long> entries);
    static BettiVector sphere(int d);  // single 1 in degree d; d = -1 gives all zeros

    const std::vector<long>& entries() const { return entries_; }
    long at(int k) const {
        return (k >= 0 && k < static_cast<int>(entries_.size())) ? entries_[k] : 0;
    }
    BettiVector shifted(int by) const;  // degree shift upward
    bool operator==(const BettiVector& o) const { return entries_ == o.entries_; }
    bool is_zero() const { return entries_.empty(); }
    int differing_entries(const BettiVector& o) const;
    std::string str() const;

private:
    std::vector<long> entries_;
};

// Homotopy type of {Q <= 0} on the sphere.
struct SublevelType {
    enum class Kind { Empty, Sphere, Explicit } kind;
    int sphere_dim = -1;
    BettiVector betti;

    static SublevelType empty() { return {Kind::Empty, -1, {}}; }
    static SublevelType sphere(int d) { return {Kind::Sphere, d, BettiVector::sphere(d)}; }
    static SublevelType explicit_betti(BettiVector b) {
        return {Kind::Explicit, -1, std::move(b)};
    }
    bool is_empty() const { return kind == Kind::Empty; }
    const BettiVector& to_betti() const;  // throws for Empty
    std::string str() const;
};

// {Q <= 0} on S^{dim-1}: Empty when positive definite, otherwise the strong
// deformation retract S^{ind+nullity-1}. The paper states S^{ind-1}; the two
// agree exactly when the form is nondegenerate, and the 0-sublevel of a
// degenerate form retracts onto the larger sphere (e.g. diag(-1,0,1) on S^2
// gives a pinched annulus, not S^0).
SublevelType quad_sublevel_type(const QuadForm& Q, double tol_eig = 1e-9);

// Reduced Betti of S^d * X; Empty joins via the M * {} = M convention.
BettiVector join_betti(int d, const SublevelType& X);

// Homology of {A_t # F <= 0} for t in {0, 1}: Z in degree ind(\hat A_t) for
// empty input, else the input shifted by ind(\hat A_t).
BettiVector composed_sublevel_betti(int n, int t, const SublevelType& F_sub);

struct BruteForceResult {
    BettiVector betti;
    bool empty;
    int vertices_used;
    int top_cells;
};

// Triangulates S^{k-1} (boundary of the cross-polytope, iteratively
// subdivided), takes the full subcomplex on vertices with f <= level and
// computes reduced Betti numbers over the rationals. Requires agreement
// between `subdivisions` and `subdivisions + 1`, else ResolutionTooCoarse.
// Converges for regular levels; ambient k <= 5.
BruteForceResult brute_force_betti(int k, const std::function<double(const Vec&)>& f,
                                   double level, int subdivisions);

struct JoinCheckResult {
    bool match;
    BettiVector oracle;
    BettiVector expected;
};

// Verifies {Q1 <= 0} * {Q2 <= 0} ~ {Q1 (+) Q2 <= 0} at Betti level against
// the brute-force oracle; factor dims <= 3.
JoinCheckResult direct_sum_join_check(const QuadForm& Q1, const QuadForm& Q2,
                                      double level = -1e-6, int subdivisions = 1);

// Mesh export for external inspection (OFF text; 2-dimensional complexes only).
std::string sublevel_mesh_off(int k, const std::function<double(const Vec&)>& f, double level,
                              int subdivisions);

} // namespace gf
