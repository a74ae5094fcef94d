#pragma once

// Command layer behind the fgur CLI. Each command returns a CommandResult
// that serializes to JSON with a fixed field order and 17 significant digits
// per float; scan commands can also render CSV.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fgur/finegrained.hpp"
#include "fgur/mub.hpp"
#include "fgur/qubit_geometry.hpp"
#include "fgur/thermo_cycle.hpp"

namespace fgur::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kInvalidArgument = 1,  // a value violates a documented precondition
  kUsage = 2,            // malformed command line or conflicting modes
  kNumerical = 3,        // eigensolver or basis search failed
};

struct CommandResult {
  std::string command;
  json parameters = json::object();
  json payload = json::object();
  std::string provenance;
  int exit_status = kOk;

  bool operator==(const CommandResult&) const = default;
};

inline void to_json(json& j, const CommandResult& r) {
  j = json{{"command", r.command},
           {"parameters", r.parameters},
           {"payload", r.payload},
           {"provenance", r.provenance},
           {"exit_status", r.exit_status}};
}

inline void from_json(const json& j, CommandResult& r) {
  r.command = j.at("command").get<std::string>();
  r.parameters = j.at("parameters");
  r.payload = j.at("payload");
  r.provenance = j.at("provenance").get<std::string>();
  r.exit_status = j.at("exit_status").get<int>();
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep the value a JSON float so it parses back as a double.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline void write(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars ([re, im] pairs, rows, index lists) stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat || indent == 0) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << (indent > 0 ? ", " : ",");
          write(os, j[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// JSON text with fixed key order and %.17g floats.
inline std::string serialize(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::write(os, j, indent, 0);
  return os.str();
}

inline std::string serialize(const CommandResult& r, int indent = 2) { return serialize(json(r), indent); }

inline CommandResult parse_result(const std::string& text) { return json::parse(text).get<CommandResult>(); }

// ---------------------------------------------------------------------------
// Payload helpers

inline json amplitudes_json(const StateVector& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(json::array({z.real(), z.imag()}));
  return a;
}

inline json bloch_json(const BlochVector& b) { return json::array({b.x, b.y, b.z}); }

inline json verification_json(const MubVerification& rep) {
  json j{{"pass", rep.pass},
         {"tolerance", rep.tolerance},
         {"max_orthonormality_deviation", rep.max_orthonormality_deviation},
         {"max_overlap_deviation", rep.max_overlap_deviation}};
  auto offender = [](const std::optional<MubOffender>& o) -> json {
    if (!o) return nullptr;
    auto label = [](std::size_t slot) { return basis_label_name(static_cast<BasisLabel>(slot) - 1); };
    return json{{"basis_a", label(o->basis_a)},
                {"vector_a", o->vector_a},
                {"basis_b", label(o->basis_b)},
                {"vector_b", o->vector_b},
                {"deviation", o->deviation}};
  };
  j["worst_orthonormality"] = offender(rep.worst_orthonormality);
  j["worst_overlap"] = offender(rep.worst_overlap);
  return j;
}

inline BasisLabel parse_basis_label(const std::string& s) {
  if (s == "Z" || s == "z" || s == "c") return kComputational;
  try {
    std::size_t pos = 0;
    const int k = std::stoi(s, &pos);
    if (pos == s.size()) return k;
  } catch (const std::exception&) {
  }
  throw DomainError("basis label must be 'Z' or an integer, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// mub

inline CommandResult cmd_mub(int d, bool verify, double tol) {
  CommandResult r;
  r.command = "mub";
  r.parameters = json{{"d", d}, {"verify", verify}, {"tol", tol}};
  const MubFamily f = mub_family(d);
  json bases = json::array();
  for (std::size_t slot = 0; slot < f.bases.size(); ++slot) {
    json vecs = json::array();
    for (const auto& v : f.bases[slot]) vecs.push_back(amplitudes_json(v));
    bases.push_back(json{{"label", basis_label_name(static_cast<BasisLabel>(slot) - 1)}, {"vectors", vecs}});
  }
  r.payload = json{{"d", d}, {"n_bases", f.bases.size()}, {"bases", bases}};
  if (verify) {
    const auto rep = verify_mub(f, tol);
    r.payload["verification"] = verification_json(rep);
  }
  r.provenance = "formula: |j^(k)> = d^-1/2 sum_l w^(k l^2 - 2 j l) |l>; verification is an exhaustive numerical scan";
  return r;
}

// ---------------------------------------------------------------------------
// bound

enum class BoundMode { MubPair, PauliPair, PauliTriple, Gamma };

struct BoundRequest {
  BoundMode mode = BoundMode::MubPair;
  int d = 3;
  BasisLabel k1 = kComputational;
  int j1 = 0;
  BasisLabel k2 = 0;
  int j2 = 0;
  PauliAxis axis_a = PauliAxis::X;
  PauliAxis axis_b = PauliAxis::Z;
  std::vector<int> outcomes;  // pauli modes; defaults to all zeros
  double gamma = kPi / 2.0;
};

inline json certainty_json(const CertaintyBound& b) {
  json j{{"zeta", b.zeta}, {"maximizer", amplitudes_json(b.maximizer)}, {"gap", b.gap}, {"unique", b.unique}};
  if (b.maximizer.dim() == 2) j["maximizer_bloch"] = bloch_json(state_to_bloch(b.maximizer));
  return j;
}

inline CommandResult cmd_bound(const BoundRequest& q) {
  CommandResult r;
  r.command = "bound";
  switch (q.mode) {
    case BoundMode::MubPair: {
      r.parameters = json{{"mode", "d"},
                          {"d", q.d},
                          {"outcome_1", json{{"basis", basis_label_name(q.k1)}, {"index", q.j1}}},
                          {"outcome_2", json{{"basis", basis_label_name(q.k2)}, {"index", q.j2}}}};
      const auto b = zeta_spectral(mub_pair_ensemble(q.d, q.k1, q.j1, q.k2, q.j2));
      r.payload = certainty_json(b);
      r.payload["closed_form"] = mub_pair_bound(q.d);
      r.payload["closed_form_residual"] = std::abs(b.zeta - mub_pair_bound(q.d));
      r.provenance = "numerical: top eigenvalue of (P1 + P2)/2; closed form 1/2 + 1/(2 sqrt d)";
      break;
    }
    case BoundMode::PauliPair: {
      const std::vector<int> o = q.outcomes.empty() ? std::vector<int>{0, 0} : q.outcomes;
      if (o.size() != 2) throw DomainError("--pauli-pair takes two outcomes");
      if (q.axis_a == q.axis_b) throw DomainError("--pauli-pair needs two different axes");
      r.parameters = json{{"mode", "pauli-pair"},
                          {"axes", std::string{axis_name(q.axis_a), axis_name(q.axis_b)}},
                          {"outcomes", o}};
      const auto b = zeta_spectral(pauli_ensemble({{q.axis_a, o[0]}, {q.axis_b, o[1]}}));
      const auto geo = pair_bound(pauli_outcome_direction(q.axis_a, o[0]), pauli_outcome_direction(q.axis_b, o[1]));
      r.payload = certainty_json(b);
      r.payload["closed_form"] = geo.value / 2.0;
      r.payload["closed_form_residual"] = std::abs(b.zeta - geo.value / 2.0);
      r.provenance = "numerical: top eigenvalue of the weighted projector sum; closed form (1 + cos(gamma/2))/2";
      break;
    }
    case BoundMode::PauliTriple: {
      const std::vector<int> o = q.outcomes.empty() ? std::vector<int>{0, 0, 0} : q.outcomes;
      if (o.size() != 3) throw DomainError("--pauli-triple takes three outcomes");
      r.parameters = json{{"mode", "pauli-triple"}, {"outcomes", o}};
      const auto tb = triple_pauli_bound({o[0], o[1], o[2]});
      const auto b = zeta_spectral(pauli_ensemble({{PauliAxis::X, o[0]}, {PauliAxis::Y, o[1]}, {PauliAxis::Z, o[2]}}));
      r.payload = certainty_json(b);
      r.payload["closed_form"] = tb.zeta;
      r.payload["closed_form_residual"] = std::abs(b.zeta - tb.zeta);
      r.payload["body_diagonal"] = bloch_json(tb.maximizer_bloch);
      r.payload["maximizer_angles"] = json{{"theta", tb.maximizer.theta}, {"phi", tb.maximizer.phi}};
      r.provenance = "numerical: top eigenvalue of (Px + Py + Pz)/3; closed form 1/2 + 1/(2 sqrt 3)";
      break;
    }
    case BoundMode::Gamma: {
      r.parameters = json{{"mode", "gamma"}, {"gamma", q.gamma}};
      const double value = pair_bound(q.gamma);
      const BlochVector m{0.0, 0.0, 1.0};
      const BlochVector n{std::sin(q.gamma), 0.0, std::cos(q.gamma)};
      const auto geo = pair_bound(m, n);
      const auto eig = hermitian_eig(spin_projector(m) + spin_projector(n));
      r.payload = json{{"bound", value},
                       {"weighted_bound", value / 2.0},
                       {"spectral_top_eigenvalue", eig.largest()},
                       {"closed_form_residual", std::abs(eig.largest() - value)}};
      r.payload["maximizer_bloch"] = geo.maximizer ? bloch_json(*geo.maximizer) : json(nullptr);
      r.payload["maximizer_unique"] = geo.maximizer.has_value() && q.gamma < kPi;
      r.provenance = "formula: 1 + cos(gamma/2) for p(m_up) + p(n_up); checked against the top eigenvalue of Pm + Pn";
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// scan-alpha

inline CommandResult cmd_scan_alpha(int steps) {
  if (steps < 2) throw DomainError("--steps must be at least 2");
  CommandResult r;
  r.command = "scan-alpha";
  r.parameters = json{{"steps", steps}};
  json rows = json::array();
  double worst = 0.0;
  double best_alpha = 0.0, best = -1.0;
  for (int i = 0; i < steps; ++i) {
    const double alpha = kPi * i / (steps - 1);
    const auto a = average_certainty(alpha);
    worst = std::max(worst, std::abs(a.closed_form - a.quadrature));
    if (a.closed_form > best) {
      best = a.closed_form;
      best_alpha = alpha;
    }
    rows.push_back(json::array({alpha, a.closed_form, a.quadrature}));
  }
  r.payload = json{{"columns", json::array({"alpha", "closed_form", "quadrature"})},
                   {"rows", rows},
                   {"max_abs_difference", worst},
                   {"argmax_alpha", best_alpha}};
  r.provenance = "formula 1 + sin(alpha)/pi alongside composite Simpson quadrature (1024 panels)";
  return r;
}

// ---------------------------------------------------------------------------
// cycle

struct CycleRequest {
  int d = 3;
  std::optional<std::string> basis;  // computational (default) | random | saturating; scans are always random
  std::uint64_t seed = 42;
  int samples = 1;
  std::string layout = "paper";
  std::optional<double> counterfactual_zeta;
  std::vector<double> priors;  // empty: uniform
  bool raw = false;            // skip the binary-entropy form
  bool per_sample = false;
};

inline json work_report_json(const WorkReport& w) {
  json j{{"d", w.d}, {"zeta", w.zeta}, {"w1", w.w1}, {"w2", w.w2}, {"delta_w", w.delta_w}};
  if (w.hb_form_delta_w) {
    j["singleton_args"] = w.singleton_args;
    j["hb_form_delta_w"] = *w.hb_form_delta_w;
    j["consistency_residual"] = *w.consistency_residual;
    j["bound_respected"] = w.bound_respected;
    j["in_window"] = w.in_window;
  }
  if (w.counterfactual) {
    j["counterfactual"] = json{{"label", "counterfactual"},
                               {"zeta_prime", w.counterfactual->zeta_prime},
                               {"singleton_args", w.counterfactual->singleton_args},
                               {"delta_w", w.counterfactual->delta_w},
                               {"second_law_violated", w.counterfactual->delta_w > 0.0}};
  }
  return j;
}

inline json scan_report_json(const ScanReport& s) {
  json j{{"seed", s.seed},
         {"d", s.d},
         {"n_samples", s.n_samples},
         {"layout", s.layout},
         {"zeta", s.zeta},
         {"summary",
          json{{"min_delta_w", s.min_delta_w},
               {"max_delta_w", s.max_delta_w},
               {"mean_delta_w", s.mean_delta_w},
               {"max_consistency_residual", s.max_consistency_residual},
               {"max_singleton_arg", s.max_singleton_arg},
               {"bound_violations", s.bound_violations},
               {"in_window", s.in_window},
               {"in_window_max_delta_w", s.in_window > 0 ? json(s.in_window_max_delta_w) : json(nullptr)},
               {"out_of_window", s.out_of_window.size()},
               {"out_of_window_positive", s.out_of_window_positive}}},
         {"histogram", json{{"lo", s.histogram_lo}, {"hi", s.histogram_hi}, {"counts", s.histogram}}},
         {"out_of_window_indices", s.out_of_window}};
  if (!s.delta_w.empty()) {
    j["per_sample_delta_w"] = s.delta_w;
    j["per_sample_residual"] = s.residuals;
  }
  return j;
}

inline CommandResult cmd_cycle(const CycleRequest& q) {
  CommandResult r;
  r.command = "cycle";
  const std::string basis_kind = q.basis.value_or(q.samples > 1 ? "random" : "computational");
  r.parameters = json{{"d", q.d}, {"basis", basis_kind}, {"seed", q.seed}, {"samples", q.samples}, {"layout", q.layout}};
  r.parameters["counterfactual_zeta"] = q.counterfactual_zeta ? json(*q.counterfactual_zeta) : json(nullptr);
  r.parameters["priors"] = q.priors.empty() ? json(nullptr) : json(q.priors);
  r.parameters["raw"] = q.raw;

  require_prime(q.d);
  if (q.samples < 1) throw DomainError("--samples must be at least 1");
  if (q.samples > 1) {
    if (basis_kind != "random") throw DomainError("--samples > 1 scans random bases; use --basis random");
    if (q.counterfactual_zeta || !q.priors.empty() || q.raw)
      throw DomainError("scans use uniform priors and the binary-entropy form; drop --priors/--raw/--counterfactual-zeta");
    ScanOptions opt;
    opt.layout = q.layout;
    opt.keep_samples = q.per_sample;
    r.payload = scan_report_json(scan_bases(q.d, q.samples, q.seed, opt));
    r.provenance = "numerical: Haar-random membrane bases, one RNG stream per sample derived from the seed";
    return r;
  }

  const MembraneLayout layout = layout_by_name(q.layout, q.d);
  std::vector<StateVector> basis;
  if (basis_kind == "computational") {
    basis = computational_membranes(q.d);
  } else if (basis_kind == "random") {
    auto rng = sample_stream(q.seed, 0);
    basis = random_basis(q.d, rng);
  } else if (basis_kind == "saturating") {
    auto found = saturating_basis(q.d, layout, q.seed);
    if (!found)
      throw ConvergenceError("no membrane basis with every s_j in {zeta, 1 - zeta} was found for layout '" +
                             layout.name + "' at d = " + std::to_string(q.d));
    basis = std::move(*found);
  } else {
    throw DomainError("--basis must be computational, random or saturating, got '" + basis_kind + "'");
  }

  CycleConfig cfg{q.d, q.priors.empty() ? std::vector<double>(q.d, 1.0 / q.d) : q.priors, std::move(basis), layout};
  const auto comps = component_states(q.d);
  DeltaWOptions opt;
  opt.hb_form = !q.raw;
  opt.counterfactual_zeta = q.counterfactual_zeta;
  const WorkReport w = delta_w(cfg, comps, opt);
  r.payload = work_report_json(w);
  json mb = json::array();
  for (const auto& e : cfg.membrane_basis) mb.push_back(amplitudes_json(e));
  r.payload["membrane_basis"] = mb;
  r.provenance = q.counterfactual_zeta
                     ? "counterfactual what-if: hypothetical certainty bound injected; not a physical prediction"
                     : "numerical: entropy bookkeeping in bits (NkT ln 2 omitted)";
  return r;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string to_csv(const CommandResult& r) {
  std::ostringstream os;
  if (r.command == "scan-alpha") {
    os << "alpha,closed_form,quadrature\n";
    for (const auto& row : r.payload.at("rows"))
      os << detail::format_double(row[0].get<double>()) << ',' << detail::format_double(row[1].get<double>()) << ','
         << detail::format_double(row[2].get<double>()) << '\n';
    return os.str();
  }
  if (r.command == "cycle" && r.payload.contains("per_sample_delta_w")) {
    os << "sample,delta_w,consistency_residual\n";
    const auto& dw = r.payload.at("per_sample_delta_w");
    const auto& res = r.payload.at("per_sample_residual");
    for (std::size_t i = 0; i < dw.size(); ++i)
      os << i << ',' << detail::format_double(dw[i].get<double>()) << ',' << detail::format_double(res[i].get<double>())
         << '\n';
    return os.str();
  }
  throw DomainError("CSV output is available for scan-alpha and for cycle scans with --per-sample");
}

}  // namespace fgur::cli
