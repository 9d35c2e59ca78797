#include "entangle_coord/cli.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "entangle_coord/adversary.hpp"
#include "entangle_coord/analysis/entropy.hpp"
#include "entangle_coord/analysis/nicd.hpp"
#include "entangle_coord/analysis/reconcile.hpp"
#include "entangle_coord/error.hpp"
#include "entangle_coord/protocol.hpp"
#include "entangle_coord/random.hpp"
#include "entangle_coord/serialize.hpp"
#include "entangle_coord/version.hpp"

namespace entangle::cli {

namespace {

// Flag combinations CLI11 cannot express; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

struct Output {
  Json envelope;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

Json envelope(const std::string& command, Json parameters, std::uint64_t seed, Json results) {
  return Json{{"command", command},
              {"parameters", std::move(parameters)},
              {"seed", seed},
              {"results", std::move(results)},
              {"version", kVersion},
              {"schema", kReportSchema}};
}

double rate(std::size_t num, std::size_t den) { return static_cast<double>(num) / static_cast<double>(den); }

std::string str(std::uint64_t v) { return std::to_string(v); }

// ---------------------------------------------------------------- run

struct RunArgs {
  std::size_t bits = 1;
  double eps = 0.0;
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::size_t trials = 1;
  std::size_t agents = 2;
  bool records = false;
};

Output cmd_run(const RunArgs& a, std::uint64_t seed) {
  protocol::NoiseModel noise{a.eps, a.theta_a, a.theta_b, protocol::kBob};
  noise.validate();

  std::map<std::uint64_t, std::size_t> histogram;
  std::vector<std::size_t> bit_disagree(a.bits, 0);
  std::size_t agree = 0;
  Json runs = Json::array();

  for (std::size_t t = 0; t < a.trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    std::vector<protocol::Bits> bits;
    std::uint64_t number;
    bool all_agree;
    if (a.agents == 2) {
      auto rec = protocol::run_protocol(a.bits, noise, s);
      ensure(rec.agree == (rec.alice_bits == rec.bob_bits), "agree flag inconsistent with bit strings");
      ensure(rec.alice_action_number == protocol::action_number(rec.alice_bits), "action number mismatch");
      number = rec.alice_action_number;
      all_agree = rec.agree;
      bits = {rec.alice_bits, rec.bob_bits};
      if (a.records) runs.push_back(rec);
    } else {
      auto rec = protocol::run_multiagent(a.agents, a.bits, noise, s);
      number = rec.action_numbers[0];
      all_agree = rec.all_agree;
      bits = rec.bits;
      if (a.records) runs.push_back(rec);
    }
    ++histogram[number];
    agree += all_agree;
    for (std::size_t i = 0; i < a.bits; ++i) {
      for (std::size_t k = 1; k < bits.size(); ++k) {
        if (bits[k][i] != bits[0][i]) {
          ++bit_disagree[i];
          break;
        }
      }
    }
  }

  Output out;
  Json hist = Json::array();
  for (const auto& [number, count] : histogram) {
    hist.push_back(Json{{"action_number", number}, {"count", count}, {"frequency", rate(count, a.trials)}});
    out.csv_rows.push_back({str(number), str(count), format_number(rate(count, a.trials))});
  }
  out.csv_header = {"action_number", "count", "frequency"};
  Json per_bit = Json::array();
  std::size_t total_disagree = 0;
  for (auto d : bit_disagree) {
    per_bit.push_back(rate(d, a.trials));
    total_disagree += d;
  }
  Json results{{"n_bits", a.bits},
               {"agents", a.agents},
               {"trials", a.trials},
               {"agreement_rate", rate(agree, a.trials)},
               {"bit_disagreement_rate", rate(total_disagree, a.trials * a.bits)},
               {"per_bit_disagreement", std::move(per_bit)},
               {"action_histogram", std::move(hist)}};
  if (a.records) results["runs"] = std::move(runs);
  Json params{{"bits", a.bits},         {"eps", a.eps},       {"theta_a", a.theta_a}, {"theta_b", a.theta_b},
              {"trials", a.trials},     {"agents", a.agents}, {"records", a.records}};
  out.envelope = envelope("run", std::move(params), seed, std::move(results));
  return out;
}

// ---------------------------------------------------------------- attack

struct AttackArgs {
  std::string kind;
  std::size_t bits = 1;
  std::size_t trials = 1;
  bool eve_first = false;
  int target_bit = 0;
  bool records = false;
};

Output cmd_attack(const AttackArgs& a, bool target_given, std::uint64_t seed) {
  if (a.eve_first && a.kind != "ghz") throw UsageError("--eve-first applies only to the ghz attack");
  if (target_given && a.kind != "wolf") throw UsageError("--target-bit applies only to the wolf attack");

  adversary::AttackReport report = [&] {
    if (a.kind == "ghz") return adversary::eve_ghz_attack(a.bits, a.trials, a.eve_first, seed);
    if (a.kind == "w") return adversary::eve_w_attack(a.bits, a.trials, seed);
    if (a.kind == "biseparable") return adversary::biseparable_attack(a.bits, a.trials, seed);
    return adversary::wolf_cnot_attack(a.bits, a.trials, a.target_bit, seed);
  }();
  ensure(report.eavesdrop_success_rate >= 0.0 && report.eavesdrop_success_rate <= 1.0, "rate out of range");
  ensure(report.agreement_rate >= 0.0 && report.agreement_rate <= 1.0, "rate out of range");

  Output out;
  out.csv_header = {"statistic", "value"};
  out.csv_rows.push_back({"eavesdrop_success_rate", format_number(report.eavesdrop_success_rate)});
  out.csv_rows.push_back({"agreement_rate", format_number(report.agreement_rate)});
  if (report.fidelity) out.csv_rows.push_back({"fidelity", format_number(*report.fidelity)});
  for (const auto& [name, value] : report.conditional_stats) out.csv_rows.push_back({name, format_number(value)});

  Json params{{"kind", a.kind}, {"bits", a.bits}, {"trials", a.trials}, {"records", a.records}};
  if (a.kind == "ghz") params["eve_first"] = a.eve_first;
  if (a.kind == "wolf") params["target_bit"] = a.target_bit;
  out.envelope = envelope("attack", std::move(params), seed, adversary::attack_report_json(report, a.records));
  return out;
}

// ---------------------------------------------------------------- bound

std::vector<std::string> bound_cells(const analysis::BoundRow& r) {
  return {format_number(r.eps), format_number(r.entropy), format_number(r.raw_bound),
          std::to_string(*r.max_error_free_length)};
}

std::vector<double> parse_grid(const std::string& spec, bool log_spaced) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = spec.find(':', start)) != std::string::npos; start = pos + 1) {
    parts.push_back(spec.substr(start, pos - start));
  }
  parts.push_back(spec.substr(start));
  if (parts.size() != 3) throw UsageError("--grid expects LO:HI:STEPS");
  double lo;
  double hi;
  long steps;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    steps = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError("--grid expects numeric LO:HI:STEPS, got '" + spec + "'");
  }
  if (steps < 1) throw UsageError("--grid needs at least one step");
  if (!(lo <= hi)) throw UsageError("--grid needs LO <= HI");
  if (log_spaced && !(lo > 0.0)) throw UsageError("--log needs LO > 0");
  std::vector<double> out;
  for (long i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    out.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  if (steps > 1) out.back() = hi;
  return out;
}

Output cmd_bound(const std::vector<double>& eps_list, const std::string& grid, bool log_spaced, std::uint64_t seed) {
  if (eps_list.empty() == grid.empty()) throw UsageError("give exactly one of --eps or --grid");
  const auto values = grid.empty() ? eps_list : parse_grid(grid, log_spaced);
  for (double e : values) {
    if (!(e > 0.0 && e <= 0.5)) throw UsageError("every eps must lie in (0, 0.5], got " + format_number(e));
  }
  Output out;
  out.csv_header = {"eps", "entropy", "raw_bound", "max_error_free_length"};
  Json rows = Json::array();
  for (double e : values) {
    const auto row = analysis::shannon_length_bound(e);
    ensure(!row.unbounded(), "positive eps produced an unbounded row");
    ensure(static_cast<double>(*row.max_error_free_length) < row.raw_bound &&
               row.raw_bound <= static_cast<double>(*row.max_error_free_length + 1),
           "max_error_free_length is not the largest integer below the bound");
    rows.push_back(row);
    out.csv_rows.push_back(bound_cells(row));
  }
  Json params = grid.empty() ? Json{{"eps", eps_list}} : Json{{"grid", grid}, {"log", log_spaced}};
  out.envelope = envelope("bound", std::move(params), seed, Json{{"rows", std::move(rows)}});
  return out;
}

// ---------------------------------------------------------------- nicd

std::vector<std::string> nicd_cells(const analysis::NicdResult& r) {
  return {std::to_string(r.m),           format_number(r.eps), format_number(r.max_agreement),
          format_number(r.max_correlation), r.achiever.description, std::to_string(r.search_size)};
}

Output cmd_nicd(std::size_t m, const std::vector<double>& eps_list, std::uint64_t seed) {
  for (double e : eps_list) {
    if (!(e >= 0.0 && e <= 0.5)) throw UsageError("every eps must lie in [0, 0.5], got " + format_number(e));
  }
  Output out;
  out.csv_header = {"m", "eps", "max_agreement", "max_correlation", "achiever", "search_size"};
  Json results;
  if (eps_list.size() == 1) {
    const auto r = analysis::nicd_max_correlation(m, eps_list.front());
    ensure(std::abs(r.max_correlation - (2.0 * r.max_agreement - 1.0)) <= 1e-12,
           "correlation and agreement disagree");
    out.csv_rows.push_back(nicd_cells(r));
    results = r;
  } else {
    if (m > analysis::kMaxExhaustiveBits) throw UsageError("a certificate over several eps needs --m <= 3");
    const auto cert = analysis::nicd_no_improvement_certificate(m, eps_list);
    for (const auto& row : cert.rows) out.csv_rows.push_back(nicd_cells(row.result));
    results = cert;
  }
  out.envelope = envelope("nicd", Json{{"m", m}, {"eps", eps_list}}, seed, std::move(results));
  return out;
}

// ---------------------------------------------------------------- reconcile

struct ReconcileArgs {
  std::size_t bits = 64;
  double eps = 0.0;
  std::size_t trials = 1;
  bool records = false;
};

Output cmd_reconcile(const ReconcileArgs& a, std::uint64_t seed) {
  if (!(a.eps > 0.0 && a.eps <= 0.5)) throw UsageError("--eps must lie in (0, 0.5]");
  const protocol::NoiseModel noise{a.eps, 0.0, 0.0, protocol::kBob};
  Output out;
  out.csv_header = {"trial", "seed", "n", "errors_before", "errors_after", "disclosed_bits", "passes", "success"};
  std::size_t successes = 0;
  double disclosed = 0.0;
  double before = 0.0;
  double after = 0.0;
  Json records = Json::array();
  for (std::size_t t = 0; t < a.trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    const auto run = protocol::run_protocol(a.bits, noise, s);
    const auto rep = analysis::reconcile(run.alice_bits, run.bob_bits, a.eps, derive_seed(s, 1));
    ensure(rep.errors_after <= rep.errors_before, "reconciliation added errors");
    ensure(rep.success == (rep.alice == rep.bob_corrected), "success flag inconsistent");
    successes += rep.success;
    disclosed += static_cast<double>(rep.disclosed_bits);
    before += static_cast<double>(rep.errors_before);
    after += static_cast<double>(rep.errors_after);
    out.csv_rows.push_back({std::to_string(t), str(s), std::to_string(rep.n), std::to_string(rep.errors_before),
                            std::to_string(rep.errors_after), std::to_string(rep.disclosed_bits),
                            std::to_string(rep.passes), rep.success ? "true" : "false"});
    if (a.records) records.push_back(rep);
  }
  const double trials = static_cast<double>(a.trials);
  const double entropy = analysis::binary_entropy(a.eps);
  const double per_bit = disclosed / trials / static_cast<double>(a.bits);
  Json results{{"n", a.bits},
               {"trials", a.trials},
               {"first_block_size", analysis::first_block_size(a.bits, a.eps)},
               {"success_rate", static_cast<double>(successes) / trials},
               {"mean_disclosed_bits", disclosed / trials},
               {"mean_disclosed_per_bit", per_bit},
               {"mean_errors_before", before / trials},
               {"mean_errors_after", after / trials},
               {"binary_entropy", entropy},
               {"leakage_exceeds_entropy", per_bit > entropy}};
  if (a.records) results["reports"] = std::move(records);
  Json params{{"bits", a.bits}, {"eps", a.eps}, {"trials", a.trials}, {"records", a.records}};
  out.envelope = envelope("reconcile", std::move(params), seed, std::move(results));
  return out;
}

std::uint64_t parse_env_seed(const std::string& raw) {
  std::uint64_t value = 0;
  const auto* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(raw.data(), end, value);
  if (raw.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned 64-bit integer: '" + raw + "'");
  }
  return value;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"Simulator for entanglement-based correlated action selection"};
  app.name("entangle-coord");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string format = "json";
  auto common = [&](CLI::App* sub, bool seeded) {
    if (seeded) sub->add_option("--seed", seed, "Master seed (default: $" + std::string(kSeedEnvVar) + " or 0)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Honest protocol runs");
  run_cmd->add_option("--bits", run_args.bits, "Action bits per run")->check(CLI::Range(1, 64));
  run_cmd->add_option("--eps", run_args.eps, "Outcome flip probability")->check(CLI::Range(0.0, 0.5));
  run_cmd->add_option("--theta-a", run_args.theta_a, "Alice's frame misalignment (radians)");
  run_cmd->add_option("--theta-b", run_args.theta_b, "Bob's frame misalignment (radians)");
  run_cmd->add_option("--trials", run_args.trials, "Number of runs")->check(CLI::PositiveNumber);
  run_cmd->add_option("--agents", run_args.agents, "Field agents sharing GHZ states")->check(CLI::Range(2, 20));
  run_cmd->add_flag("--records", run_args.records, "Include every RunRecord");
  common(run_cmd, true);

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Adversary scenarios");
  attack_cmd->add_option("kind", attack_args.kind, "ghz | w | biseparable | wolf")
      ->required()
      ->check(CLI::IsMember({"ghz", "w", "biseparable", "wolf"}));
  attack_cmd->add_option("--bits", attack_args.bits, "Action bits per trial")->check(CLI::Range(1, 64));
  attack_cmd->add_option("--trials", attack_args.trials, "Number of trials")->check(CLI::PositiveNumber);
  attack_cmd->add_flag("--eve-first", attack_args.eve_first, "Eve measures before Alice and Bob (ghz)");
  auto* target_opt = attack_cmd->add_option("--target-bit", attack_args.target_bit, "Wolf's ancilla state (wolf)")
                         ->check(CLI::IsMember({0, 1}));
  attack_cmd->add_flag("--records", attack_args.records, "Include per-trial bit strings");
  common(attack_cmd, true);

  std::vector<double> bound_eps;
  std::string grid;
  bool log_grid = false;
  auto* bound_cmd = app.add_subcommand("bound", "Error-free string length bound");
  bound_cmd->add_option("--eps", bound_eps, "Flip probabilities")->delimiter(',');
  bound_cmd->add_option("--grid", grid, "LO:HI:STEPS");
  bound_cmd->add_flag("--log", log_grid, "Geometric spacing for --grid");
  common(bound_cmd, false);

  std::size_t nicd_m = 1;
  std::vector<double> nicd_eps;
  auto* nicd_cmd = app.add_subcommand("nicd", "Non-interactive correlation distillation search");
  nicd_cmd->add_option("--m", nicd_m, "Substring length")->required()->check(CLI::Range(1, 4));
  nicd_cmd->add_option("--eps", nicd_eps, "Flip probabilities")->required()->delimiter(',');
  common(nicd_cmd, false);

  ReconcileArgs rec_args;
  auto* rec_cmd = app.add_subcommand("reconcile", "Block-parity reconciliation of protocol output");
  rec_cmd->add_option("--bits", rec_args.bits, "String length")->check(CLI::Range(1, 64));
  rec_cmd->add_option("--eps", rec_args.eps, "Flip probability (also the reconciliation hint)")->required();
  rec_cmd->add_option("--trials", rec_args.trials, "Number of trials")->check(CLI::PositiveNumber);
  rec_cmd->add_flag("--records", rec_args.records, "Include every ReconcileReport");
  common(rec_cmd, true);

  std::vector<const char*> argv{"entangle-coord"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    // bound and nicd are deterministic; their envelope seed stays 0.
    const auto* sub = app.get_subcommands().front();
    const bool seeded = sub != bound_cmd && sub != nicd_cmd;
    if (seeded && sub->count("--seed") == 0 && env.seed) seed = parse_env_seed(*env.seed);

    Output result;
    if (app.got_subcommand(run_cmd)) {
      result = cmd_run(run_args, seed);
    } else if (app.got_subcommand(attack_cmd)) {
      result = cmd_attack(attack_args, target_opt->count() > 0, seed);
    } else if (app.got_subcommand(bound_cmd)) {
      result = cmd_bound(bound_eps, grid, log_grid, seed);
    } else if (app.got_subcommand(nicd_cmd)) {
      result = cmd_nicd(nicd_m, nicd_eps, seed);
    } else {
      result = cmd_reconcile(rec_args, seed);
    }
    if (format == "csv") {
      out << to_csv(result.csv_header, result.csv_rows);
    } else {
      out << result.envelope.dump(2) << "\n";
    }
    return kExitOk;
  } catch (...) {
    return report_failure(std::current_exception(), err);
  }
}

int report_failure(std::exception_ptr failure, std::ostream& err) {
  try {
    std::rethrow_exception(failure);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (...) {
    err << "internal error: unknown exception\n";
    return kExitInternal;
  }
}

}  // namespace entangle::cli
