#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gf/contact.hpp"
#include "gf/genfun.hpp"
#include "gf/homology.hpp"

namespace gf {

// One detected zero-crossing of a critical value of G_t = F # A_t restricted
// to the sphere; attaches `multiplicity` cells of index `attachment_index`.
struct Crossing {
    double t;
    int attachment_index;
    int multiplicity;
    Vec witness;  // unit vector in the composed space, fiber-critical, |G_t| <= tol
    BettiVector betti_before;
    BettiVector betti_after;
};

struct GridSample {
    double t;
    int index;
    int nullity;
    BettiVector betti;
};

struct SweepLedger {
    int n = 0;
    double reeb_preshift = 0.0;  // crossings are reported in shifted time already
    bool complete = true;
    bool betti_tracked = true;
    std::string hypothesis_status;  // met | not-met | unknown
    std::vector<GridSample> grid;   // exact eigen data for quadratic sweeps
    std::vector<Crossing> crossings;

    int total_multiplicity() const {
        int s = 0;
        for (const auto& c : crossings) s += c.multiplicity;
        return s;
    }
};

struct SweepOptions {
    double tol_eig = 1e-9;
    double t_refine = 1e-10;
    double cluster_t = 1e-7;
    double cluster_angle = 1e-5;
    int newton_max_iter = 80;
    double newton_tol = 1e-11;
    int reseed_interval = 8;
    double validation_tol = 1e-6;
    int threads = 1;
};

// Eigenvalue-tracking sweep of M(t) = matrix of F_phi # \hat A_t for a
// unitary contactomorphism; F_phi is the Cayley form of the lift (pre-composed
// with a small Reeb shift when Id + Phi is singular). Crossings are sign
// changes of eigenvalues through 0, refined by bisection.
SweepLedger quadratic_sweep(const Contactomorphism& phi, int grid_size,
                            const SweepOptions& opts = {});

// Multi-start Newton sweep over G_t = F # \hat A_t for arbitrary generating
// functions F of the lift of phi; critical-point paths are tracked across the
// grid and their values decrease monotonically through 0 at most once.
SweepLedger numeric_sweep(const Contactomorphism& phi, const GenFun& F, int grid_size,
                          int starts = 0, const SweepOptions& opts = {});

struct TranslatedPointReport {
    SpherePoint p;
    double t_reeb;  // phi(p) = reeb_flow(t_reeb, p)
    bool nondegenerate;
    int multiplicity;
    double fixed_residual;
    double conformal_residual;
};

std::vector<TranslatedPointReport> translated_points_from_ledger(const Contactomorphism& phi,
                                                                 const SweepLedger& ledger,
                                                                 double tol = 1e-8);

struct RegularShiftResult {
    bool found = false;
    double t_star = 0.0;
    std::optional<GenFun> shifted;        // generates a_{t*} o phi
    std::vector<double> failed_ts;        // each failure certifies critical value 0
};

// Tries an increasing sequence of Reeb shifts until 0 is a regular value of
// the shifted composed generating function on the sphere; exhaustion is
// evidence of many translated points.
RegularShiftResult find_regular_shift(const Contactomorphism& phi, const GenFun& F, int max_tries,
                                      const SweepOptions& opts = {});

// Sublevel type of {F # 0 <= 0}, the theorem's hypothesis object. Exact for
// quadratic F; for simple numeric F in oracle range it is derived from the
// brute-force type of {F <= 0} joined with S^{2n-1}; otherwise unknown.
std::optional<SublevelType> hypothesis_sublevel_type(const GenFun& F);

} // namespace gf
