// gft: batch front end for the generating-function toolkit. Builds objects
// from JSON files or flags, runs the pipelines and emits tables, CSV or JSON.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "gf/acceptance.hpp"
#include "gf/errors.hpp"
#include "gf/genfun.hpp"
#include "gf/homology.hpp"
#include "gf/json_io.hpp"
#include "gf/sweep.hpp"
#include "gf/symplectization.hpp"

using namespace gf;

namespace {

struct Shared {
    int n = 1;
    double t = 0.0;
    double tol = 1e-8;
    int grid = 400;
    std::uint64_t seed = 0;
    bool json = false;
    std::string out;
    std::string ham_expr;
    std::string input;
    int threads = 1;
};

void add_shared(CLI::App* cmd, Shared& s) {
    cmd->add_option("--n", s.n, "complex dimension n (sphere S^{2n-1})");
    cmd->add_option("--t", s.t, "parameter t");
    cmd->add_option("--tol", s.tol, "tolerance");
    cmd->add_option("--grid", s.grid, "grid size");
    cmd->add_option("--seed", s.seed, "sampling seed");
    cmd->add_flag("--json", s.json, "machine-readable JSON output");
    cmd->add_option("--out", s.out, "output path (default stdout)");
    cmd->add_option("--ham-expr", s.ham_expr, "Hamiltonian expression");
    cmd->add_option("--input", s.input, "input JSON file");
    cmd->add_option("--threads", s.threads, "worker cap");
}

void emit(const Shared& s, const Json& j, const std::string& text) {
    std::string payload = s.json ? j.dump(2) + "\n" : text;
    if (s.out.empty())
        std::cout << payload;
    else
        write_text_file(s.out, payload);
}

Contactomorphism load_contacto(const Shared& s) {
    if (!s.input.empty()) return contactomorphism_from_json(load_json_file(s.input));
    if (!s.ham_expr.empty())
        return Contactomorphism::flow(HamSpec::expression(s.ham_expr, s.n), s.t == 0 ? 1.0 : s.t);
    throw Error("need --input or --ham-expr");
}

HamSpec load_ham(const Shared& s) {
    if (!s.ham_expr.empty()) return HamSpec::expression(s.ham_expr, s.n);
    if (!s.input.empty()) return hamspec_from_json(load_json_file(s.input));
    throw Error("need --input or --ham-expr");
}

int cmd_reeb_family(const Shared& s) {
    GenFun A = reeb_family(s.n, s.t);
    Inertia in = index_nullity(A.quad());
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = s.n;
    j["t"] = s.t;
    j["index"] = in.index;
    j["nullity"] = in.nullity;
    j["matrix"] = matrix_to_json(A.quad().matrix());
    std::ostringstream os;
    os.precision(12);
    os << "reeb family A_t: n = " << s.n << ", t = " << s.t << ", dim = " << A.dim()
       << " (fiber " << A.fiber_dim() << ")\n"
       << "index = " << in.index << ", nullity = " << in.nullity << "\n"
       << "matrix:\n"
       << A.quad().matrix() << "\n";
    emit(s, j, os.str());
    return 0;
}

int cmd_cayley(const Shared& s) {
    Contactomorphism phi = load_contacto(s);
    if (!phi.is_unitary()) throw Error("cayley needs a unitary contactomorphism");
    QuadForm S = cayley_genfun(LinearSymplectomorphism(phi.matrix()));
    Inertia in = index_nullity(S);
    Json j = quadform_to_json(S, 2 * s.n);
    j["schema_version"] = kSchemaVersion;
    j["index"] = in.index;
    j["nullity"] = in.nullity;
    std::ostringstream os;
    os.precision(12);
    os << "cayley generating form, index " << in.index << ", nullity " << in.nullity << ":\n"
       << S.matrix() << "\n";
    emit(s, j, os.str());
    return 0;
}

int cmd_compose(const Shared& s, const std::string& input2) {
    auto [q1, b1] = quadform_from_json(load_json_file(s.input));
    auto [q2, b2] = quadform_from_json(load_json_file(input2));
    if (b1 != b2) throw DimensionMismatch("base dimensions differ");
    GenFun F = compose(GenFun::quadratic(b1, q1), GenFun::quadratic(b2, q2));
    Inertia in = index_nullity(F.quad());
    Json j = quadform_to_json(F.quad(), b1);
    j["schema_version"] = kSchemaVersion;
    j["index"] = in.index;
    j["nullity"] = in.nullity;
    std::ostringstream os;
    os << "composed form: dim " << F.dim() << ", fiber " << F.fiber_dim() << ", index "
       << in.index << ", nullity " << in.nullity << "\n";
    emit(s, j, os.str());
    return 0;
}

int cmd_lift(const Shared& s, const std::vector<double>& point) {
    Contactomorphism phi = load_contacto(s);
    LiftedMap L = lift_map(phi);
    Vec z(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) z[i] = point[i];
    Vec Z = L.evaluate(z);
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < Z.size(); ++i) arr.push_back(Z[i]);
    j["value"] = arr;
    std::ostringstream os;
    os.precision(12);
    os << "lift(z) = " << Z.transpose() << "\n";
    emit(s, j, os.str());
    return 0;
}

int cmd_flow(const Shared& s, const std::vector<double>& point) {
    HamSpec H = load_ham(s);
    Vec z(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) z[i] = point[i];
    auto [p, g] = contact_flow(H, s.t == 0 ? 1.0 : s.t, SpherePoint(z));
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < p.coords().size(); ++i) arr.push_back(p.coords()[i]);
    j["point"] = arr;
    j["conformal_factor"] = g;
    std::ostringstream os;
    os.precision(12);
    os << "phi_t(p) = " << p.coords().transpose() << "\ng = " << g << "\n";
    emit(s, j, os.str());
    return 0;
}

int cmd_genfun(const Shared& s, int nsteps) {
    HamSpec H = load_ham(s);
    GenFun F = nsteps <= 1 ? action_genfun(H) : genfun_for_isotopy(H, nsteps);
    // validate the generating property on samples via the lift
    Contactomorphism phi = Contactomorphism::flow(H, 1.0);
    LiftedMap L = lift_map(phi);
    double worst = 0.0;
    int checked = 0;
    for (const Vec& w : sphere_samples(2 * s.n, 16, s.seed)) {
        if (F.fiber_dim() != 0) break;
        auto [z, Z] = generated_map_point(F, w, 1e-6);
        worst = std::max(worst, (Z - L.evaluate(z)).norm());
        ++checked;
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["base_dim"] = F.base_dim();
    j["fiber_dim"] = F.fiber_dim();
    j["samples_checked"] = checked;
    j["max_lift_deviation"] = worst;
    std::ostringstream os;
    os << "generating function: base " << F.base_dim() << ", fiber " << F.fiber_dim() << "\n";
    if (checked)
        os << "lift fidelity on " << checked << " samples: max deviation " << worst << "\n";
    emit(s, j, os.str());
    return worst <= 1e-5 ? 0 : 2;
}

int cmd_sweep(const Shared& s, int starts) {
    Contactomorphism phi = load_contacto(s);
    SweepOptions opts;
    opts.threads = s.threads;
    SweepLedger led;
    if (phi.is_unitary()) {
        led = quadratic_sweep(phi, s.grid, opts);
    } else {
        GenFun F = action_genfun(phi.hamiltonian(), {}, 0.0, phi.time());
        led = numeric_sweep(phi, F, std::min(s.grid, 64), starts, opts);
    }
    Json j = ledger_to_json(led);
    std::ostringstream os;
    os.precision(12);
    for (const auto& c : led.crossings)
        os << "crossing t = " << c.t << "  index " << c.attachment_index << "  multiplicity "
           << c.multiplicity << (c.multiplicity > 1 ? "  (degenerate)" : "") << "\n";
    os << "translated points (with multiplicity): " << led.total_multiplicity()
       << "; hypothesis status: " << led.hypothesis_status << "\n";
    emit(s, j, os.str());
    if (!s.out.empty()) write_text_file(s.out + ".csv", ledger_to_csv(led));
    return 0;
}

int cmd_betti(const Shared& s, int subdivisions) {
    auto [Q, base] = quadform_from_json(load_json_file(s.input));
    (void)base;
    SublevelType type = quad_sublevel_type(Q);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["type"] = type.str();
    std::ostringstream os;
    os << "quadratic sublevel type: " << type.str() << "\n";
    if (Q.dim() <= 5) {
        BruteForceResult r = brute_force_betti(
            Q.dim(), [&](const Vec& x) { return Q.value(x); }, s.t, subdivisions);
        j["oracle_betti"] = betti_to_json(r.betti);
        j["oracle_empty"] = r.empty;
        os << "oracle Betti at level " << s.t << ": " << r.betti.str()
           << (r.empty ? " (empty)" : "") << "\n";
    }
    emit(s, j, os.str());
    return 0;
}

int cmd_rp_check(const Shared& s) {
    Contactomorphism phi = load_contacto(s);
    RpLiftReport rep = rp_lift_report(phi, 64, s.tol);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["equivariant"] = rep.equivariant;
    j["max_violation"] = rep.max_violation;
    j["samples"] = rep.samples;
    std::ostringstream os;
    os << (rep.equivariant ? "equivariant" : "NOT equivariant") << ", max violation "
       << rep.max_violation << " on " << rep.samples << " samples\n";
    emit(s, j, os.str());
    return rep.equivariant ? 0 : 2;
}

int cmd_verify(const Shared& s, const std::string& only) {
    auto results = run_acceptance(only, s.threads);
    if (s.json) {
        Json j;
        j["schema_version"] = kSchemaVersion;
        Json arr = Json::array();
        for (const auto& r : results)
            arr.push_back({{"id", r.id},
                           {"module", r.module_tag},
                           {"description", r.description},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
        j["criteria"] = arr;
        j["all_passed"] = all_passed(results);
        emit(s, j, "");
    }
    return all_passed(results) ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generating functions of sphere contactomorphisms: construction, composition "
                 "and translated-point detection"};
    app.require_subcommand(1);

    Shared s;
    std::string input2, only;
    std::vector<double> point;
    int nsteps = 1, starts = 128, subdivisions = 2;

    auto* c_reeb = app.add_subcommand("reeb-family", "matrix, index and nullity of A_t");
    add_shared(c_reeb, s);
    auto* c_cayley = app.add_subcommand("cayley", "simple generating form of a unitary map");
    add_shared(c_cayley, s);
    auto* c_compose = app.add_subcommand("compose", "composition of two quadratic forms");
    add_shared(c_compose, s);
    c_compose->add_option("--input2", input2, "second QuadForm JSON")->required();
    auto* c_lift = app.add_subcommand("lift", "evaluate the lifted map at a point");
    add_shared(c_lift, s);
    c_lift->add_option("--point", point, "ambient point coordinates")->required();
    auto* c_flow = app.add_subcommand("flow", "contact Hamiltonian flow of a sphere point");
    add_shared(c_flow, s);
    c_flow->add_option("--point", point, "sphere point coordinates")->required();
    auto* c_genfun = app.add_subcommand("genfun", "action generating function of a flow");
    add_shared(c_genfun, s);
    c_genfun->add_option("--nsteps", nsteps, "isotopy subdivision count");
    auto* c_sweep = app.add_subcommand("sweep", "translated-point sweep over t in [0,1]");
    add_shared(c_sweep, s);
    c_sweep->add_option("--starts", starts, "Newton multistart count (numeric path)");
    auto* c_betti = app.add_subcommand("betti", "sublevel type and brute-force Betti oracle");
    add_shared(c_betti, s);
    c_betti->add_option("--subdivisions", subdivisions, "oracle subdivision level");
    auto* c_rp = app.add_subcommand("rp-check", "antipodal equivariance report");
    add_shared(c_rp, s);
    auto* c_verify = app.add_subcommand("verify", "run the acceptance suite");
    add_shared(c_verify, s);
    c_verify->add_option("--only", only, "filter criteria by module tag");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_reeb->parsed()) return cmd_reeb_family(s);
        if (c_cayley->parsed()) return cmd_cayley(s);
        if (c_compose->parsed()) return cmd_compose(s, input2);
        if (c_lift->parsed()) return cmd_lift(s, point);
        if (c_flow->parsed()) return cmd_flow(s, point);
        if (c_genfun->parsed()) return cmd_genfun(s, nsteps);
        if (c_sweep->parsed()) return cmd_sweep(s, starts);
        if (c_betti->parsed()) return cmd_betti(s, subdivisions);
        if (c_rp->parsed()) return cmd_rp_check(s);
        if (c_verify->parsed()) return cmd_verify(s, only);
    } catch (const GridTooCoarse& e) {
        std::cerr << "error: " << e.what() << "\nincrease --grid and retry\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
