#pragma once

#include "bbinterp/circuit.hpp"
#include "bbinterp/conformal.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/instances.hpp"

#include <json.hpp>

#include <string>

namespace bbinterp {

using Json = nlohmann::ordered_json;

/// A malformed document. `where` is a JSON pointer to the offending field.
class FormatError : public Error {
public:
    FormatError(std::string where, const std::string& what);
    std::string where, detail;
};

Json to_json(const Rational& r);
Json to_json(const Integer& z);
Json to_json(const LinSystem& sys);
Json to_json(const BBTree& tree);
Json to_json(const CertifiedTree& tree);
/// Adds the box and each leaf's quasi_case relative to `sys`.
Json to_json(const QuasiCertifiedTree& tree, const LinSystem& sys);
Json to_json(const GateFn& f);
Json to_json(const Circuit& c);
Json to_json(const InterpolationInstance& inst);

LinSystem linsystem_from_json(const Json& j);
/// Leaves without "cert" get empty certificates.
CertifiedTree tree_from_json(const Json& j);
QuasiCertifiedTree quasi_tree_from_json(const Json& j);
GateFn gatefn_from_json(const Json& j);
Circuit circuit_from_json(const Json& j);
InterpolationInstance instance_from_json(const Json& j);
/// Either a bare 0/1 array or {"z": [...]}.
std::vector<int> z_from_json(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Parses a file; FormatError messages are prefixed with the file name.
Json read_json_file(const std::string& path);

}  // namespace bbinterp
