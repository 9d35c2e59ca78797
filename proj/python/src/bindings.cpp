#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entangle_coord/adversary.hpp"
#include "entangle_coord/analysis/entropy.hpp"
#include "entangle_coord/analysis/nicd.hpp"
#include "entangle_coord/analysis/reconcile.hpp"
#include "entangle_coord/cli.hpp"
#include "entangle_coord/error.hpp"
#include "entangle_coord/protocol.hpp"
#include "entangle_coord/qsim.hpp"
#include "entangle_coord/random.hpp"
#include "entangle_coord/serialize.hpp"
#include "entangle_coord/version.hpp"

namespace py = pybind11;
using namespace entangle;

namespace {

// Reports cross the boundary as plain dicts with the same keys as the JSON.
py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

protocol::NoiseModel noise(double flip_prob, double misalign_alice, double misalign_bob) {
  protocol::NoiseModel n{flip_prob, misalign_alice, misalign_bob, protocol::kBob};
  n.validate();
  return n;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entanglement-based correlated action selection: simulator, attacks and bounds";
  m.attr("__version__") = kVersion;

  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform)
      .def("next_u64", &Rng::next_u64);
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));

  py::class_<qsim::PureState>(m, "PureState")
      .def(py::init([](std::size_t n, std::vector<qsim::Amplitude> amps) { return qsim::PureState(n, std::move(amps)); }),
           py::arg("num_qubits"), py::arg("amplitudes"))
      .def_property_readonly("num_qubits", &qsim::PureState::num_qubits)
      .def_property_readonly("amplitudes", [](const qsim::PureState& s) {
        return std::vector<qsim::Amplitude>(s.amplitudes().begin(), s.amplitudes().end());
      })
      .def("norm_squared", &qsim::PureState::norm_squared)
      .def("__len__", &qsim::PureState::dimension)
      .def("__getitem__", [](const qsim::PureState& s, std::size_t i) { return s[i]; })
      .def(py::self == py::self)
      .def("__repr__", [](const qsim::PureState& s) {
        std::ostringstream os;
        os << "PureState(num_qubits=" << s.num_qubits() << ")";
        return os.str();
      });

  m.def("basis_state", [](std::size_t n, std::size_t i) { return qsim::basis_state(n, i); }, py::arg("num_qubits"),
        py::arg("index"));
  m.def("prepare_bell", &qsim::prepare_bell);
  m.def("prepare_ghz", [](std::size_t k) { return qsim::prepare_ghz(k); }, py::arg("k"));
  m.def("prepare_w", &qsim::prepare_w);
  m.def("prepare_biseparable", &qsim::prepare_biseparable);
  m.def("tensor", [](const qsim::PureState& a, const qsim::PureState& b) { return qsim::tensor(a, b); });
  m.def("apply_cnot", &qsim::apply_cnot, py::arg("state"), py::arg("control"), py::arg("target"));
  m.def("apply_y_rotation", &qsim::apply_y_rotation, py::arg("state"), py::arg("qubit"), py::arg("theta"));
  m.def("measurement_probabilities", [](const qsim::PureState& s, qsim::Qubit q) {
    const auto p = qsim::measurement_probabilities(s, q);
    return std::make_tuple(p.p0, p.p1);
  }, py::arg("state"), py::arg("qubit"));
  m.def("collapse", [](const qsim::PureState& s, qsim::Qubit q, int bit) {
    auto o = qsim::collapse(s, q, bit);
    return std::make_tuple(o.bit, o.probability, o.post_state);
  }, py::arg("state"), py::arg("qubit"), py::arg("bit"));
  m.def("measure_qubit", [](const qsim::PureState& s, qsim::Qubit q, Rng& rng) {
    auto o = qsim::measure_qubit(s, q, rng);
    return std::make_tuple(o.bit, o.probability, o.post_state);
  }, py::arg("state"), py::arg("qubit"), py::arg("rng"));
  m.def("is_product", [](const qsim::PureState& s, std::vector<qsim::Qubit> left, std::vector<qsim::Qubit> right) {
    const auto r = qsim::is_product(s, {std::move(left), std::move(right)});
    return std::make_tuple(r.product, r.purity);
  }, py::arg("state"), py::arg("left"), py::arg("right"));
  m.def("fidelity", &qsim::fidelity);

  m.def("run_protocol", [](std::size_t n_bits, std::uint64_t seed, double flip_prob, double misalign_alice,
                           double misalign_bob) {
    return to_python(Json(protocol::run_protocol(n_bits, noise(flip_prob, misalign_alice, misalign_bob), seed)));
  }, py::arg("n_bits"), py::arg("seed"), py::arg("flip_prob") = 0.0, py::arg("misalign_alice") = 0.0,
        py::arg("misalign_bob") = 0.0);
  m.def("run_multiagent", [](std::size_t agents, std::size_t n_bits, std::uint64_t seed, double flip_prob) {
    return to_python(Json(protocol::run_multiagent(agents, n_bits, noise(flip_prob, 0.0, 0.0), seed)));
  }, py::arg("agents"), py::arg("n_bits"), py::arg("seed"), py::arg("flip_prob") = 0.0);

  m.def("eve_ghz_attack", [](std::size_t n_bits, std::size_t trials, bool eve_first, std::uint64_t seed,
                             bool include_trials) {
    return to_python(adversary::attack_report_json(adversary::eve_ghz_attack(n_bits, trials, eve_first, seed),
                                                   include_trials));
  }, py::arg("n_bits"), py::arg("trials"), py::arg("eve_first"), py::arg("seed"), py::arg("include_trials") = false);
  m.def("eve_w_attack", [](std::size_t n_bits, std::size_t trials, std::uint64_t seed, bool include_trials) {
    return to_python(adversary::attack_report_json(adversary::eve_w_attack(n_bits, trials, seed), include_trials));
  }, py::arg("n_bits"), py::arg("trials"), py::arg("seed"), py::arg("include_trials") = false);
  m.def("biseparable_attack", [](std::size_t n_bits, std::size_t trials, std::uint64_t seed, bool include_trials) {
    return to_python(
        adversary::attack_report_json(adversary::biseparable_attack(n_bits, trials, seed), include_trials));
  }, py::arg("n_bits"), py::arg("trials"), py::arg("seed"), py::arg("include_trials") = false);
  m.def("wolf_cnot_attack", [](std::size_t n_bits, std::size_t trials, int target_bit, std::uint64_t seed,
                               bool include_trials) {
    return to_python(adversary::attack_report_json(adversary::wolf_cnot_attack(n_bits, trials, target_bit, seed),
                                                   include_trials));
  }, py::arg("n_bits"), py::arg("trials"), py::arg("target_bit"), py::arg("seed"),
        py::arg("include_trials") = false);

  m.def("binary_entropy", &analysis::binary_entropy, py::arg("eps"));
  m.def("shannon_length_bound", [](double eps) { return to_python(Json(analysis::shannon_length_bound(eps))); },
        py::arg("eps"));
  m.def("nicd_max_correlation", [](std::size_t mm, double eps) {
    return to_python(Json(analysis::nicd_max_correlation(mm, eps)));
  }, py::arg("m"), py::arg("eps"));
  m.def("nicd_certificate", [](std::size_t mm, const std::vector<double>& eps) {
    return to_python(Json(analysis::nicd_no_improvement_certificate(mm, eps)));
  }, py::arg("m"), py::arg("eps_list"));
  m.def("reconcile", [](const std::string& alice, const std::string& bob, double eps_hint, std::uint64_t seed,
                        std::optional<std::size_t> first_block_size) {
    analysis::ReconcileOptions opts{first_block_size};
    return to_python(Json(analysis::reconcile(protocol::bits_from_string(alice), protocol::bits_from_string(bob),
                                              eps_hint, seed, opts)));
  }, py::arg("alice"), py::arg("bob"), py::arg("eps_hint"), py::arg("seed"), py::arg("first_block_size") = py::none());

  m.def("cli", [](const std::vector<std::string>& args, std::optional<std::string> env_seed) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err, cli::Environment{std::move(env_seed)});
    return std::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), py::arg("env_seed") = py::none(), "Run one CLI invocation; returns (exit_code, stdout, stderr).");
}
