#include "gf/json_io.hpp"

#include <fstream>
#include <sstream>

#include "gf/errors.hpp"

namespace gf {

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw Error("matrix JSON must be a nonempty array of rows");
    const auto rows = j.size();
    const auto cols = j[0].size();
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw Error("ragged matrix JSON");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

Json hamspec_to_json(const HamSpec& h) {
    Json j;
    j["n"] = h.n();
    if (h.is_quadratic()) {
        j["kind"] = "quadratic";
        j["matrix"] = matrix_to_json(h.matrix());
    } else {
        j["kind"] = "expr";
        j["expr"] = h.source();
    }
    return j;
}

HamSpec hamspec_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
        Mat S = matrix_from_json(j.at("matrix"));
        if (S.rows() != 2 * n) throw Error("hamiltonian matrix size does not match n");
        return HamSpec::quadratic(std::move(S));
    }
    if (kind == "expr") return HamSpec::expression(j.at("expr").get<std::string>(), n);
    throw Error("unknown hamiltonian kind: " + kind);
}

Json contactomorphism_to_json(const Contactomorphism& c) {
    Json j;
    if (c.is_unitary()) {
        j["kind"] = "unitary";
        j["matrix"] = matrix_to_json(c.matrix());
    } else {
        j["kind"] = "flow";
        j["hamiltonian"] = hamspec_to_json(c.hamiltonian());
        j["time"] = c.time();
    }
    return j;
}

Contactomorphism contactomorphism_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "unitary") return Contactomorphism::unitary(matrix_from_json(j.at("matrix")));
    if (kind == "flow")
        return Contactomorphism::flow(hamspec_from_json(j.at("hamiltonian")),
                                      j.value("time", 1.0));
    throw Error("unknown contactomorphism kind: " + kind);
}

Json quadform_to_json(const QuadForm& q, int base_dim) {
    Json j;
    j["dim"] = q.dim();
    j["base_dim"] = base_dim;
    j["matrix"] = matrix_to_json(q.matrix());
    return j;
}

std::pair<QuadForm, int> quadform_from_json(const Json& j) {
    Mat S = matrix_from_json(j.at("matrix"));
    const int dim = j.value("dim", static_cast<int>(S.rows()));
    if (dim != S.rows()) throw Error("quadform dim does not match matrix");
    return {QuadForm(std::move(S)), j.value("base_dim", dim)};
}

Json betti_to_json(const BettiVector& b) {
    Json arr = Json::array();
    for (long e : b.entries()) arr.push_back(e);
    return arr;
}

Json ledger_to_json(const SweepLedger& led) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = led.n;
    j["reeb_preshift"] = led.reeb_preshift;
    j["complete"] = led.complete;
    j["hypothesis_status"] = led.hypothesis_status;
    j["translated_points_with_multiplicity"] = led.total_multiplicity();
    Json cs = Json::array();
    for (const Crossing& c : led.crossings) {
        Json cj;
        cj["t"] = c.t;
        cj["attachment_index"] = c.attachment_index;
        cj["multiplicity"] = c.multiplicity;
        Json w = Json::array();
        for (Eigen::Index i = 0; i < c.witness.size(); ++i) w.push_back(c.witness[i]);
        cj["witness"] = std::move(w);
        if (led.betti_tracked) {
            cj["betti_before"] = betti_to_json(c.betti_before);
            cj["betti_after"] = betti_to_json(c.betti_after);
        }
        cs.push_back(std::move(cj));
    }
    j["crossings"] = std::move(cs);
    return j;
}

std::string ledger_to_csv(const SweepLedger& led) {
    std::ostringstream os;
    os.precision(15);
    std::size_t maxb = 0;
    for (const auto& g : led.grid) maxb = std::max(maxb, g.betti.entries().size());
    os << "t,index,multiplicity";
    for (std::size_t i = 0; i < maxb; ++i) os << ",betti_" << i;
    os << "\n";
    for (const auto& g : led.grid) {
        int mult = 0;
        for (const Crossing& c : led.crossings)
            if (std::abs(c.t - g.t) <= 0.5 / std::max<std::size_t>(1, led.grid.size() - 1))
                mult = c.multiplicity;
        os << g.t << "," << g.index << "," << mult;
        for (std::size_t i = 0; i < maxb; ++i) os << "," << g.betti.at(static_cast<int>(i));
        os << "\n";
    }
    return os.str();
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

} // namespace gf
