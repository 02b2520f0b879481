#include "gf/sweep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "gf/errors.hpp"
#include "gf/symplectization.hpp"

namespace gf {

namespace {

BettiVector sphere_betti_of(const Inertia& in) {
    return BettiVector::sphere(in.index + in.nullity - 1);
}

std::string status_from_type(const std::optional<SublevelType>& t) {
    if (!t) return "unknown";
    if (t->is_empty()) return "met";
    return t->to_betti().is_zero() ? "not-met" : "met";
}

// Betti bookkeeping across one crossing: `mult` cells starting at index
// `lambda`. Simple crossings attach one cell; degenerate ones are modeled as
// a Morse-Bott sphere family with cells at lambda and lambda + mult - 1.
BettiVector apply_attachment(const BettiVector& before, int lambda, int mult) {
    std::vector<long> v(std::max<std::size_t>(before.entries().size(), lambda + mult + 1), 0);
    for (std::size_t i = 0; i < before.entries().size(); ++i) v[i] = before.entries()[i];
    if (mult == 1) {
        if (lambda >= 1 && v[lambda - 1] > 0)
            --v[lambda - 1];
        else
            ++v[lambda];
    } else {
        if (lambda >= 1 && v[lambda - 1] > 0) {
            --v[lambda - 1];
            ++v[lambda + mult - 1];
        } else {
            ++v[lambda];
            ++v[lambda + mult - 1];
        }
    }
    return BettiVector(v);
}

// --- quadratic path -------------------------------------------------------

struct EigenData {
    Inertia inertia;
    Vec eigenvalues;
    Mat eigenvectors;
};

struct QuadraticFamily {
    int n;
    GenFun F;  // base 2n, quadratic

    Mat matrix(double t) const { return compose(F, reeb_family(n, t)).quad().matrix(); }

    EigenData eigen(double t, double tol_eig) const {
        Eigen::SelfAdjointEigenSolver<Mat> es(matrix(t));
        EigenData d;
        d.eigenvalues = es.eigenvalues();
        d.eigenvectors = es.eigenvectors();
        const double scale = d.eigenvalues.cwiseAbs().maxCoeff();
        const double cut = scale > 0 ? tol_eig * scale : tol_eig;
        d.inertia = {0, 0, 0};
        for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
            if (std::abs(d.eigenvalues[i]) <= cut)
                ++d.inertia.nullity;
            else if (d.eigenvalues[i] < 0)
                ++d.inertia.index;
            else
                ++d.inertia.positive;
        }
        return d;
    }

    // eigenvalue of smallest magnitude, signed
    double nearest_eigenvalue(double t) const {
        Eigen::SelfAdjointEigenSolver<Mat> es(matrix(t), Eigen::EigenvaluesOnly);
        const Vec& ev = es.eigenvalues();
        double best = ev[0];
        for (Eigen::Index i = 1; i < ev.size(); ++i)
            if (std::abs(ev[i]) < std::abs(best)) best = ev[i];
        return best;
    }
};

// Locate all index changes inside (a, b): recursive bisection separates
// distinct crossings, then a strict sign bisection on the nearest eigenvalue
// pins each crossing time without the null-band offset.
void locate_crossings(const QuadraticFamily& fam, double a, int ind_a, double b, int ind_b,
                      const SweepOptions& opts, std::vector<std::pair<double, int>>& out,
                      int depth = 0) {
    if (ind_a == ind_b) return;
    if (depth > 80) throw GridTooCoarse("crossing refinement exceeded bisection budget");
    if (b - a < 1e-7) {
        double lo = a, hi = b;
        while (hi - lo > opts.t_refine) {
            const double mid = 0.5 * (lo + hi);
            (fam.nearest_eigenvalue(mid) > 0 ? lo : hi) = mid;
        }
        out.emplace_back(0.5 * (lo + hi), ind_b - ind_a);
        return;
    }
    const double m = 0.5 * (a + b);
    const int ind_m = fam.eigen(m, opts.tol_eig).inertia.index;
    locate_crossings(fam, a, ind_a, m, ind_m, opts, out, depth + 1);
    locate_crossings(fam, m, ind_m, b, ind_b, opts, out, depth + 1);
}

} // namespace

std::optional<SublevelType> hypothesis_sublevel_type(const GenFun& F) {
    const int b = F.base_dim();
    if (F.is_quadratic()) {
        GenFun zero = GenFun::quadratic(b, QuadForm::zero(b));
        return quad_sublevel_type(compose(F, zero).quad());
    }
    if (F.fiber_dim() == 0 && b <= 4) {
        // {F # 0 <= 0} ~ S^{2n-1} * {F <= 0}; the factor type comes from the
        // oracle on the small sphere.
        try {
            BruteForceResult r =
                brute_force_betti(b, [&](const Vec& x) { return F.value(x); }, -1e-6, 2);
            SublevelType factor = r.empty ? SublevelType::empty()
                                          : SublevelType::explicit_betti(r.betti);
            return SublevelType::explicit_betti(join_betti(b - 1, factor));
        } catch (const ResolutionTooCoarse&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

SweepLedger quadratic_sweep(const Contactomorphism& phi, int grid_size, const SweepOptions& opts) {
    if (!phi.is_unitary()) throw Error("quadratic_sweep needs a unitary contactomorphism");
    if (grid_size < 2) throw GridTooCoarse("grid needs at least two samples");
    const int n = phi.n();
    const int d = 2 * n;

    // Cayley form of the lift; pre-compose a Reeb shift when Id + Phi is singular.
    double preshift = 0.0;
    Mat U = phi.matrix();
    std::optional<QuadForm> F_quad;
    for (int attempt = 0; attempt < 64 && !F_quad; ++attempt) {
        try {
            F_quad = cayley_genfun(LinearSymplectomorphism(U));
        } catch (const NearIdentityMinusOne&) {
            preshift += 0.013;
            const double ang = -2.0 * M_PI * preshift;
            Mat R = std::cos(ang) * Mat::Identity(d, d) + std::sin(ang) * J_matrix(d);
            U = R * phi.matrix();
        }
    }
    if (!F_quad) throw Error("no Reeb shift made Id + Phi invertible");

    QuadraticFamily fam{n, GenFun::quadratic(d, *F_quad)};

    SweepLedger led;
    led.n = n;
    led.reeb_preshift = preshift;
    led.hypothesis_status = status_from_type(hypothesis_sublevel_type(fam.F));

    std::vector<double> ts(grid_size);
    for (int i = 0; i < grid_size; ++i) ts[i] = static_cast<double>(i) / (grid_size - 1);
    std::vector<EigenData> eig(grid_size);
    parallel_for(grid_size, opts.threads,
                 [&](int i) { eig[i] = fam.eigen(ts[i], opts.tol_eig); });

    led.grid.reserve(grid_size);
    for (int i = 0; i < grid_size; ++i)
        led.grid.push_back({ts[i], eig[i].inertia.index, eig[i].inertia.nullity,
                            sphere_betti_of(eig[i].inertia)});

    auto witness_at = [&](double t) {
        EigenData e = fam.eigen(t, opts.tol_eig);
        int best = 0;
        for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i)
            if (std::abs(e.eigenvalues[i]) < std::abs(e.eigenvalues[best])) best = static_cast<int>(i);
        return e.eigenvectors.col(best).eval();
    };

    auto betti_near = [&](double t) { return sphere_betti_of(fam.eigen(t, opts.tol_eig).inertia); };

    // boundary crossing at t = 0: the sweep starts on a discriminant set
    if (eig[0].inertia.nullity > 0) {
        Crossing c;
        c.t = 0.0;
        c.attachment_index = eig[0].inertia.index;
        c.multiplicity = eig[0].inertia.nullity;
        c.witness = witness_at(0.0);
        c.betti_before = sphere_betti_of(eig[0].inertia);
        c.betti_after = sphere_betti_of(eig[0].inertia);
        led.crossings.push_back(std::move(c));
    }

    for (int i = 0; i + 1 < grid_size; ++i) {
        // eigenvalues sitting on 0 at t = 0 move negative immediately; they
        // belong to the boundary crossing already recorded
        const int ind_left =
            eig[i].inertia.index + (i == 0 ? eig[0].inertia.nullity : 0);
        if (ind_left == eig[i + 1].inertia.index) continue;
        std::vector<std::pair<double, int>> found;
        locate_crossings(fam, ts[i], ind_left, ts[i + 1], eig[i + 1].inertia.index,
                         opts, found);
        for (auto [tc, jump] : found) {
            if (jump <= 0)
                throw GridTooCoarse("non-monotone index path; eigenvalues should only decrease");
            Crossing c;
            c.t = tc;
            EigenData before = fam.eigen(std::max(0.0, tc - 8 * opts.t_refine), opts.tol_eig);
            c.attachment_index = before.inertia.index;
            c.multiplicity = jump;
            c.witness = witness_at(tc);
            c.betti_before = betti_near(std::max(0.0, tc - 1e-6));
            c.betti_after = betti_near(std::min(1.0, tc + 1e-6));
            led.crossings.push_back(std::move(c));
        }
    }
    std::sort(led.crossings.begin(), led.crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
    return led;
}

// --- numeric path ----------------------------------------------------------

namespace {

struct CriticalPoint {
    Vec x;       // unit
    double value;
    bool ok;
};

// Damped Newton on the Lagrange system (grad G(x) - mu x, |x| = 1), with the
// iterate kept on the sphere and mu the Rayleigh quotient.
CriticalPoint solve_critical(const GenFun& G, Vec x0, const SweepOptions& opts) {
    const int m = G.dim();
    Vec x = x0.normalized();
    Vec g = G.gradient(x);
    double res_norm = (g - x.dot(g) * x).norm();
    for (int it = 0; it < opts.newton_max_iter; ++it) {
        const double mu = x.dot(g);
        Vec res = g - mu * x;
        const double scale = 1.0 + g.norm();
        if (res_norm <= opts.newton_tol * scale) return {x, G.value(x), true};
        Mat Jm(m + 1, m + 1);
        Jm.topLeftCorner(m, m) = G.hessian(x) - mu * Mat::Identity(m, m);
        Jm.topRightCorner(m, 1) = -x;
        Jm.bottomLeftCorner(1, m) = x.transpose();
        Jm(m, m) = 0.0;
        Vec rhs(m + 1);
        rhs.head(m) = res;
        rhs[m] = 0.0;
        // minimum-norm least-squares step: Bott-degenerate critical circles
        // leave the system singular along the circle direction
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(Jm);
        cod.setThreshold(1e-12);
        Vec step = cod.solve(rhs);
        if (!step.allFinite()) return {x, 0.0, false};

        double alpha = 1.0;
        bool improved = false;
        for (int bt = 0; bt < 12; ++bt) {
            Vec xn = (x - alpha * step.head(m)).normalized();
            Vec gn = G.gradient(xn);
            const double rn = (gn - xn.dot(gn) * xn).norm();
            if (rn < res_norm * (1.0 - 0.01 * alpha)) {
                x = xn;
                g = gn;
                res_norm = rn;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) return {x, 0.0, false};
    }
    return {x, 0.0, false};
}

struct TrackedPath {
    Vec x;
    double value;
    double prev_t;
    bool alive;
};

double point_distance(const Vec& a, const Vec& b) {
    return std::min((a - b).norm(), (a + b).norm());
}

} // namespace

SweepLedger numeric_sweep(const Contactomorphism& phi, const GenFun& F, int grid_size, int starts,
                          const SweepOptions& opts) {
    if (grid_size < 2) throw GridTooCoarse("grid needs at least two samples");
    const int n = phi.n();
    const int d = 2 * n;
    if (F.base_dim() != d) throw DimensionMismatch("generating function base must be 2n");

    // Validate that F generates the lift of phi on samples.
    {
        LiftedMap lift(phi);
        std::vector<Vec> pts = F.is_quadratic() ? sigma_samples(F, 12, 23)
                                                : sphere_samples(F.dim(), 12, 23);
        for (const Vec& s : pts) {
            if (!is_fiber_critical(F, s, 1e-6)) continue;
            auto [z, Z] = generated_map_point(F, s, 1e-6);
            if (z.norm() < 1e-9) continue;
            if ((Z - lift.evaluate(z)).norm() > opts.validation_tol * std::max(1.0, z.norm()))
                throw Error("generating function does not generate the lift of phi");
        }
    }

    SweepLedger led;
    led.n = n;
    led.hypothesis_status = status_from_type(hypothesis_sublevel_type(F));

    auto G_at = [&](double t) { return compose(F, reeb_family(n, t)); };
    const int m = 3 * d + F.fiber_dim() + 8 * n;
    if (starts <= 0) starts = 64 * m;

    std::vector<double> ts(grid_size);
    for (int i = 0; i < grid_size; ++i) ts[i] = static_cast<double>(i) / (grid_size - 1);

    std::vector<TrackedPath> paths;
    auto absorb = [&](const CriticalPoint& cp, double t) {
        if (!cp.ok) return;
        if (cp.value < -1e-6) return;  // values only decrease; already below 0
        for (const auto& p : paths)
            if (point_distance(p.x, cp.x) < 1e-6 && std::abs(p.value - cp.value) < 1e-7)
                return;
        paths.push_back({cp.x, cp.value, t, true});
    };

    auto multistart = [&](double t, int count, std::uint64_t seed) {
        GenFun G = G_at(t);
        std::vector<Vec> ss = sphere_samples(m, count, seed);
        std::vector<CriticalPoint> results(ss.size());
        parallel_for(static_cast<int>(ss.size()), opts.threads,
                     [&](int i) { results[i] = solve_critical(G, ss[i], opts); });
        for (const auto& cp : results) absorb(cp, t);
    };

    struct Event {
        double t;
        Vec witness;
    };
    std::vector<Event> events;

    multistart(ts[0], starts, 1);

    // paths already at value ~ 0 at t = 0 cross at the boundary
    for (auto& p : paths)
        if (std::abs(p.value) <= 1e-9) {
            events.push_back({0.0, p.x});
            p.alive = false;
        }

    for (int i = 1; i < grid_size; ++i) {
        GenFun G = G_at(ts[i]);
        std::vector<int> live;
        for (std::size_t k = 0; k < paths.size(); ++k)
            if (paths[k].alive) live.push_back(static_cast<int>(k));
        std::vector<CriticalPoint> moved(live.size());
        parallel_for(static_cast<int>(live.size()), opts.threads, [&](int j) {
            moved[j] = solve_critical(G, paths[live[j]].x, opts);
        });
        for (std::size_t j = 0; j < live.size(); ++j) {
            TrackedPath& p = paths[live[j]];
            if (!moved[j].ok) {
                led.complete = false;
                p.alive = false;
                continue;
            }
            const double v_prev = p.value;
            const double v_now = moved[j].value;
            if (v_prev > 0.0 && v_now <= 0.0) {
                // bisect the crossing time along this path
                double lo = p.prev_t, hi = ts[i];
                Vec x_lo = p.x, x_hi = moved[j].x;
                while (hi - lo > opts.t_refine) {
                    const double mid = 0.5 * (lo + hi);
                    CriticalPoint cp = solve_critical(G_at(mid), (0.5 * (x_lo + x_hi)).eval(), opts);
                    if (!cp.ok) break;
                    if (cp.value > 0.0) {
                        lo = mid;
                        x_lo = cp.x;
                    } else {
                        hi = mid;
                        x_hi = cp.x;
                    }
                }
                events.push_back({0.5 * (lo + hi), x_hi});
                p.alive = false;  // monotone: each path crosses at most once
            } else {
                p.x = moved[j].x;
                p.value = v_now;
                p.prev_t = ts[i];
                if (v_now < -1e-6) p.alive = false;
            }
        }
        if (opts.reseed_interval > 0 && i % opts.reseed_interval == 0 && i + 1 < grid_size)
            multistart(ts[i], std::max(8, starts / 8), 1000 + i);
    }

    // merge events into crossings by time, then classify via the tangent Hessian
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < events.size();) {
        std::size_t j = i + 1;
        while (j < events.size() && events[j].t - events[i].t <= std::max(opts.cluster_t, 1e-9))
            ++j;
        const Event& ev = events[i];
        GenFun G = G_at(ev.t);
        const Mat T = tangent_basis(ev.witness);
        Mat Ht = T.transpose() * G.hessian(ev.witness) * T;
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Ht + Ht.transpose()), Eigen::EigenvaluesOnly);
        const Vec lam = es.eigenvalues();
        const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
        int neg = 0, null = 0;
        for (Eigen::Index k = 0; k < lam.size(); ++k) {
            if (std::abs(lam[k]) <= 1e-6 * scale)
                ++null;
            else if (lam[k] < 0)
                ++neg;
        }
        Crossing c;
        c.t = ev.t;
        c.attachment_index = neg;
        c.multiplicity = null + 1;
        c.witness = ev.witness;
        led.crossings.push_back(std::move(c));
        i = j;
    }

    // model-based Betti bookkeeping seeded from the composed sublevel formula
    std::optional<SublevelType> F_sub = hypothesis_sublevel_type(F);
    if (F_sub) {
        BettiVector current = composed_sublevel_betti(n, 0, *F_sub);
        for (auto& c : led.crossings) {
            c.betti_before = current;
            current = apply_attachment(current, c.attachment_index, c.multiplicity);
            c.betti_after = current;
        }
        led.grid.reserve(ts.size());
        std::size_t ci = 0;
        BettiVector running = led.crossings.empty() ? composed_sublevel_betti(n, 0, *F_sub)
                                                    : led.crossings[0].betti_before;
        for (double t : ts) {
            while (ci < led.crossings.size() && led.crossings[ci].t <= t)
                running = led.crossings[ci++].betti_after;
            led.grid.push_back({t, -1, -1, running});
        }
    } else {
        led.betti_tracked = false;
    }
    return led;
}

std::vector<TranslatedPointReport> translated_points_from_ledger(const Contactomorphism& phi,
                                                                 const SweepLedger& ledger,
                                                                 double tol) {
    std::vector<TranslatedPointReport> out;
    const int d = 2 * ledger.n;
    for (const Crossing& c : ledger.crossings) {
        const Vec q = c.witness.head(d);
        if (q.norm() < 1e-8)
            throw ZeroBaseCoordinate("crossing witness has vanishing base coordinate");
        SpherePoint p{Vec(q)};
        double t_reeb = std::fmod(2.0 * M_PI * (c.t + ledger.reeb_preshift), 2.0 * M_PI);
        if (t_reeb < 0) t_reeb += 2.0 * M_PI;
        auto [phip, g] = phi.apply_with_factor(p);
        TranslatedPointReport rep{p, t_reeb, c.multiplicity == 1, c.multiplicity,
                                  (rotate_J(-t_reeb, phip.coords()) - p.coords()).norm(),
                                  std::abs(g)};
        (void)tol;
        out.push_back(std::move(rep));
    }
    return out;
}

RegularShiftResult find_regular_shift(const Contactomorphism& phi, const GenFun& F, int max_tries,
                                      const SweepOptions& opts) {
    (void)phi;
    RegularShiftResult res;
    const int n = F.base_dim() / 2;
    for (int i = 1; i <= max_tries; ++i) {
        const double t = static_cast<double>(i) / (max_tries + 1);
        GenFun G = compose(F, reeb_family(n, t));
        bool regular;
        if (G.is_quadratic()) {
            Inertia in = index_nullity(G.quad());
            regular = in.nullity == 0;
        } else {
            // multistart scan for sphere-critical points with value near 0
            regular = true;
            for (const Vec& s : sphere_samples(G.dim(), 48, 100 + i)) {
                CriticalPoint cp = solve_critical(G, s, opts);
                if (cp.ok && std::abs(cp.value) <= 1e-8) {
                    regular = false;
                    break;
                }
            }
        }
        if (regular) {
            res.found = true;
            res.t_star = t;
            res.shifted = G;
            return res;
        }
        res.failed_ts.push_back(t);
    }
    return res;
}

} // namespace gf
