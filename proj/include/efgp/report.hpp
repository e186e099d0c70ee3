#pragma once

// CSV and JSON renderings of spectral and analysis results.

#include <ostream>
#include <string>

#include "json.hpp"

#include "efgp/analysis.hpp"
#include "efgp/spectral.hpp"

namespace efgp {

using Json = nlohmann::ordered_json;

// Columns E,weight,x,certificate_N,certificate_RNsq,certificate_passed,decay_exponent.
void write_spectrum_csv(std::ostream& out, const EigenvalueSet& set,
                        const std::string& header_comment = {});

Json to_json(const EigenvalueRecord& r);
Json to_json(const EigenvalueSet& s);
Json to_json(const BoundReport& r);
Json to_json(const DyadicProfile& p);
Json to_json(const OscSumSeries& s);
Json to_json(const PruferSumDiagnostics& d);
Json to_json(const RecursionResiduals& r);
Json to_json(const ResonanceConstruction& c);
Json to_json(const Potential& p);

}  // namespace efgp
