#include "efgp/report.hpp"

#include "efgp/numeric.hpp"

namespace efgp {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

void write_spectrum_csv(std::ostream& out, const EigenvalueSet& set,
                        const std::string& header_comment) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "E,weight,x,certificate_N,certificate_RNsq,certificate_passed,decay_exponent\n";
  for (const auto& r : set.records()) {
    out << format_double(r.E) << ',' << format_double(r.weight) << ','
        << (r.x ? format_double(*r.x) : std::string()) << ',' << r.certificate.N_star << ','
        << format_double(r.certificate.RN_sq) << ',' << (r.certificate.passed ? "true" : "false")
        << ',' << (r.decay_exponent ? format_double(*r.decay_exponent) : std::string()) << '\n';
  }
}

Json to_json(const EigenvalueRecord& r) {
  Json j;
  j["E"] = r.E;
  j["x"] = r.x ? Json(*r.x) : Json(nullptr);
  j["weight"] = r.weight;
  j["certificate"] = {{"N_star", r.certificate.N_star},
                      {"RN_sq", number_or_null(r.certificate.RN_sq)},
                      {"passed", r.certificate.passed}};
  j["decay_exponent"] = r.decay_exponent ? number_or_null(*r.decay_exponent) : Json(nullptr);
  Json cps = Json::array();
  for (const auto& c : r.checkpoints) cps.push_back({{"N", c.N}, {"RN_sq", number_or_null(c.RN_sq)}});
  j["checkpoints"] = std::move(cps);
  return j;
}

Json to_json(const EigenvalueSet& s) {
  Json recs = Json::array();
  for (const auto& r : s.records()) recs.push_back(to_json(r));
  return {{"tolerance", s.tolerance()}, {"count", s.size()}, {"records", std::move(recs)}};
}

Json to_json(const BoundReport& r) {
  Json recs = Json::array();
  for (const auto& rec : r.records) recs.push_back(to_json(rec));
  Json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["C_used"] = r.C_used;
  j["satisfied"] = r.satisfied;
  j["margin"] = r.margin;
  j["records_used"] = r.records_used;
  j["records"] = std::move(recs);
  return j;
}

Json to_json(const DyadicProfile& p) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < p.sup.size(); ++i) arr.push_back({{"N", p.window_end[i]}, {"sup", p.sup[i]}});
  return arr;
}

Json to_json(const OscSumSeries& s) {
  Json j;
  j["alpha"] = s.alpha;
  j["sup_abs"] = s.sup_abs;
  j["dyadic_profile"] = to_json(s.profile);
  j["hypothesis_max_n_dgamma"] = s.hypothesis_max_n_dgamma;
  j["last_window_growth"] = s.profile.last_growth();
  return j;
}

Json to_json(const PruferSumDiagnostics& d) {
  const auto m = d.diag.size();
  Json cross = Json::array();
  for (Eigen::Index j = 0; j < m; ++j) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m; ++k) row.push_back(d.cross(j, k));
    cross.push_back(std::move(row));
  }
  Json diag = Json::array();
  Json growth = Json::array();
  for (Eigen::Index j = 0; j < m; ++j) {
    diag.push_back(d.diag(j));
    growth.push_back(d.diag_profiles[static_cast<std::size_t>(j)].last_growth());
  }
  Json j;
  j["n0"] = d.n0;
  j["cross"] = std::move(cross);
  j["diag"] = std::move(diag);
  j["diag_last_window_growth"] = std::move(growth);
  j["hypothesis_ok"] = d.hypothesis_ok;
  return j;
}

Json to_json(const RecursionResiduals& r) {
  return {{"max_res_efgp0", r.max_res_efgp0},
          {"max_res_efgp1", r.max_res_efgp1},
          {"max_res_efgp2", r.max_res_efgp2}};
}

Json to_json(const Potential& p) {
  Json j;
  j["family"] = std::string(to_string(p.family()));
  switch (p.family()) {
    case PotentialFamily::Table:
      j["values"] = p.table();
      break;
    case PotentialFamily::Resonant:
      j["c"] = p.amplitude();
      j["omega"] = p.frequency();
      j["delta"] = p.phase();
      break;
    case PotentialFamily::RandomSign:
      j["c"] = p.amplitude();
      j["seed"] = p.seed();
      break;
    default:
      j["c"] = p.amplitude();
  }
  j["onset"] = p.onset();
  return j;
}

Json to_json(const ResonanceConstruction& c) {
  Json j;
  j["x"] = c.x;
  j["c"] = c.c;
  j["E"] = c.E;
  j["phi"] = c.phi;
  j["delta"] = c.delta;
  j["predicted_exponent"] = c.predicted_exponent;
  j["fitted_exponent"] = c.fitted_exponent;
  j["N"] = c.N;
  j["potential"] = to_json(c.potential);
  return j;
}

}  // namespace efgp
