#include "entangle_coord/serialize.hpp"

#include <cmath>

namespace entangle {

namespace {

Json bit_strings(const std::vector<protocol::Bits>& all) {
  Json arr = Json::array();
  for (const auto& bits : all) arr.push_back(protocol::to_string(bits));
  return arr;
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string format_number(double value) { return Json(value).dump(); }

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

namespace protocol {

void to_json(Json& j, const RunRecord& r) {
  j = Json{{"seed", r.seed},
           {"alice_bits", to_string(r.alice_bits)},
           {"bob_bits", to_string(r.bob_bits)},
           {"alice_actions", r.alice_actions},
           {"bob_actions", r.bob_actions},
           {"alice_action_number", r.alice_action_number},
           {"bob_action_number", r.bob_action_number},
           {"agree", r.agree},
           {"strike", r.strike}};
}

void to_json(Json& j, const MultiRunRecord& r) {
  Json pairs = Json::array();
  for (std::size_t a = 0; a < r.bits.size(); ++a) {
    for (std::size_t b = a + 1; b < r.bits.size(); ++b) {
      pairs.push_back(Json{{"agents", {a, b}}, {"agree", static_cast<bool>(r.pairwise_agree[a][b])}});
    }
  }
  j = Json{{"seed", r.seed},
           {"bits", bit_strings(r.bits)},
           {"actions", r.actions},
           {"action_numbers", r.action_numbers},
           {"pairwise_agree", std::move(pairs)},
           {"all_agree", r.all_agree},
           {"strike", r.strike}};
}

}  // namespace protocol

namespace adversary {

Json attack_report_json(const AttackReport& r, bool include_trials) {
  Json j{{"kind", to_string(r.kind)},
         {"n_bits", r.n_bits},
         {"trials", r.trials},
         {"seed", r.seed},
         {"eavesdrop_success_rate", r.eavesdrop_success_rate},
         {"agreement_rate", r.agreement_rate}};
  if (r.fidelity) j["fidelity"] = *r.fidelity;
  Json stats = Json::object();
  for (const auto& [name, value] : r.conditional_stats) stats[name] = value;
  j["conditional_stats"] = std::move(stats);
  if (include_trials) {
    j[r.attacker_name() + "_bits"] = bit_strings(r.attacker_bits);
    j["alice_bits"] = bit_strings(r.alice_bits);
    j["bob_bits"] = bit_strings(r.bob_bits);
  }
  return j;
}

void to_json(Json& j, const AttackReport& r) { j = attack_report_json(r, true); }

}  // namespace adversary

namespace analysis {

void to_json(Json& j, const BoundRow& r) {
  j = Json{{"eps", r.eps}, {"entropy", r.entropy}};
  if (r.unbounded()) {
    j["raw_bound"] = nullptr;
    j["max_error_free_length"] = nullptr;
  } else {
    j["raw_bound"] = r.raw_bound;
    j["max_error_free_length"] = *r.max_error_free_length;
  }
}

void to_json(Json& j, const NicdResult& r) {
  j = Json{{"m", r.m},
           {"eps", r.eps},
           {"max_agreement", r.max_agreement},
           {"max_correlation", r.max_correlation},
           {"achiever",
            {{"f_table", r.achiever.f.table},
             {"g_table", r.achiever.g.table},
             {"matching_dictator", r.achiever.matching_dictator},
             {"description", r.achiever.description}}},
           {"search_size", r.search_size}};
}

void to_json(Json& j, const NicdCertificate& c) {
  Json rows = Json::array();
  for (const auto& row : c.rows) {
    rows.push_back(Json{{"eps", row.eps},
                        {"bound", row.bound},
                        {"within_bound", row.within_bound},
                        {"dictator_attains", row.dictator_attains},
                        {"result", row.result}});
  }
  j = Json{{"m", c.m}, {"certified", c.certified}, {"rows", std::move(rows)}};
}

void to_json(Json& j, const ReconcileReport& r) {
  j = Json{{"n", r.n},
           {"errors_before", r.errors_before},
           {"errors_after", r.errors_after},
           {"disclosed_bits", r.disclosed_bits},
           {"passes", r.passes},
           {"success", r.success},
           {"alice", protocol::to_string(r.alice)},
           {"bob_corrected", protocol::to_string(r.bob_corrected)}};
}

}  // namespace analysis

}  // namespace entangle
