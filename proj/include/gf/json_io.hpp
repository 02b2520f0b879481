#pragma once

#include <json.hpp>
#include <string>

#include "gf/contact.hpp"
#include "gf/quadform.hpp"
#include "gf/sweep.hpp"

namespace gf {

using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

// {"n": int, "kind": "quadratic"|"expr", "matrix": [[...]], "expr": "..."}
Json hamspec_to_json(const HamSpec& h);
HamSpec hamspec_from_json(const Json& j);

// {"kind":"unitary","matrix":[[...]]} or {"kind":"flow","hamiltonian":{...},"time":1.0}
Json contactomorphism_to_json(const Contactomorphism& c);
Contactomorphism contactomorphism_from_json(const Json& j);

// {"dim": m, "base_dim": 2n, "matrix": [[...]]}
Json quadform_to_json(const QuadForm& q, int base_dim);
std::pair<QuadForm, int> quadform_from_json(const Json& j);  // (form, base_dim)

Json betti_to_json(const BettiVector& b);
Json ledger_to_json(const SweepLedger& led);
std::string ledger_to_csv(const SweepLedger& led);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace gf
