#pragma once

#include <string>
#include <vector>

// vendored single-header nlohmann/json
#include "json.hpp"

#include "ellipsoid_entropy/bound.hpp"
#include "ellipsoid_entropy/codec.hpp"
#include "ellipsoid_entropy/lattice.hpp"

namespace ellipsoid_entropy::io {

/// Signal file formats: CSV holds one value per line; JSON holds an array.
std::vector<double> read_signal_csv(const std::string& path);
std::vector<double> read_signal_json(const std::string& path);
std::vector<double> parse_signal_json(const std::string& text);

/// Codes travel as JSON integer arrays.
std::string code_to_json(const codec::CodeVector& code);

nlohmann::json spectrum_to_json(const lattice::Spectrum& s);
/// CSV rows "value,multiplicity" under a schema comment line.
std::string spectrum_to_csv(const lattice::Spectrum& s);

nlohmann::json count_to_json(const lattice::CountResult& r);

/// Full audit serialization: every parameter, integral, log term, and the
/// ledger snapshot with provenance notes.
nlohmann::json report_to_json(const bound::BoundReport& rep);

nlohmann::json ledger_to_json(const bound::ConstantsLedger& ledger);

std::string format_double(double v);  // locale-independent %.12g

}  // namespace ellipsoid_entropy::io
