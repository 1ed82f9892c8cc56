#include "ridge/reports.h"

#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace ridge {

using nlohmann::json;

namespace {

// Adding zero turns -0 into 0.
std::vector<double> to_std(const Vector& v) {
  std::vector<double> out(v.size());
  for (int k = 0; k < v.size(); ++k) out[k] = v[k] + 0.0;
  return out;
}

json assumption_json(const AssumptionReport& rep) {
  json w = json::array();
  for (const auto& x : rep.witnesses) {
    w.push_back({{"assumption", x.assumption},
                 {"x", to_std(x.sample.x)},
                 {"S", x.sample.s.mask()},
                 {"i", x.sample.i + 1},
                 {"value", x.value},
                 {"detail", x.detail}});
  }
  json j{{"A1_square", to_string(rep.a1_square)},
         {"A1_restricted", to_string(rep.a1_restricted)},
         {"A2", to_string(rep.a2)},
         {"A3", to_string(rep.a3)},
         {"samples", rep.samples},
         {"A1_checked", rep.a1_checked},
         {"A2_checked", rep.a2_checked},
         {"A3_checked", rep.a3_checked},
         {"witnesses", w}};
  j["sigma_min"] = rep.sigma_min ? json(*rep.sigma_min) : json(nullptr);
  j["sigma_max"] = rep.sigma_max ? json(*rep.sigma_max) : json(nullptr);
  return j;
}

json parity_json(const ParityReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"passed", c.passed},
                      {"checked", c.checked},
                      {"witnesses", c.witnesses}});
  }
  return {{"all_passed", rep.all_passed()}, {"checks", checks}};
}

}  // namespace

std::string run_summary_json(const VIProblem& p, const std::string& method, const Trajectory& traj) {
  json j{{"problem", p.name()}, {"method", method}, {"status", to_string(traj.status)}};
  if (!traj.message.empty()) j["message"] = traj.message;
  j["records"] = traj.records.size();
  if (!traj.records.empty()) {
    const auto& last = traj.records.back();
    j["steps"] = last.step;
    j["epochs"] = last.epoch;
    j["final_point"] = to_std(last.x);
    j["final_v"] = to_std(last.v);
    j["final_gap"] = vi_gap(p, p.domain().to_unit(last.x));
    json epochs = json::array();
    for (const auto& r : traj.records) {
      if (r.event.empty() || r.event == event_tag::kStart || r.event == event_tag::kFinal ||
          r.i < 0) {
        continue;
      }
      epochs.push_back({{"epoch", r.epoch}, {"i", r.i + 1}, {"S", r.s_mask}, {"exit", r.event},
                        {"step", r.step}, {"x", to_std(r.x)}});
    }
    j["exits"] = epochs;
  }
  return j.dump(2) + "\n";
}

std::string assumption_report_json(const AssumptionReport& rep) {
  return assumption_json(rep).dump(2) + "\n";
}

std::string parity_report_json(const ParityReport& rep) { return parity_json(rep).dump(2) + "\n"; }

std::string check_report_json(const VIProblem& p, const AssumptionReport& a, const ParityReport& r,
                              bool passed) {
  json j{{"problem", p.name()},
         {"passed", passed},
         {"assumptions", assumption_json(a)},
         {"parity", parity_json(r)}};
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ridge
