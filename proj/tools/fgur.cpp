// fgur: fine-grained uncertainty bounds, MUB construction and the membrane
// work cycle from the command line. JSON goes to stdout, diagnostics to stderr.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fgur/commands.hpp"

namespace {

using namespace fgur;
using namespace fgur::cli;

constexpr const char* kExitCodes =
    "Exit status:\n"
    "  0  payload produced\n"
    "  1  invalid argument (value outside its documented domain)\n"
    "  2  usage error (malformed command line, conflicting modes)\n"
    "  3  numerical failure (eigensolver or basis search)\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fine-grained uncertainty bounds and the membrane work cycle"};
  app.footer(kExitCodes);
  app.require_subcommand(1);
  app.fallthrough();
  bool csv = false;
  bool compact = false;
  app.add_flag("--compact", compact, "Single-line JSON");

  // mub
  auto* mub = app.add_subcommand("mub", "Complete set of mutually unbiased bases in odd prime dimension d");
  int mub_d = 3;
  bool mub_verify = false;
  double mub_tol = 1e-10;
  mub->add_option("d", mub_d, "Dimension (odd prime <= 64)")->required();
  mub->add_flag("--verify", mub_verify, "Append the orthonormality / unbiasedness report");
  mub->add_option("--tol", mub_tol, "Verification tolerance")->capture_default_str();

  // bound
  auto* bound = app.add_subcommand("bound", "Certainty bound zeta for an outcome combination");
  std::optional<int> bound_d;
  std::vector<std::string> pauli_pair;
  bool pauli_triple = false;
  std::optional<double> gamma;
  std::string k1 = "Z", k2 = "0";
  int j1 = 0, j2 = 0;
  std::vector<int> outcomes;
  auto* o_d = bound->add_option("--d", bound_d, "MUB pair in prime dimension d");
  auto* o_pp = bound->add_option("--pauli-pair", pauli_pair, "Two Pauli axes, e.g. x z")->expected(2);
  auto* o_pt = bound->add_flag("--pauli-triple", pauli_triple, "sigma_x, sigma_y, sigma_z with weights 1/3");
  auto* o_g = bound->add_option("--gamma", gamma, "Angle between two spin directions (radians)");
  bound->add_option("--k1", k1, "Basis of the first outcome (Z or 0..d-1)")->capture_default_str();
  bound->add_option("--j1", j1, "Index of the first outcome")->capture_default_str();
  bound->add_option("--k2", k2, "Basis of the second outcome (Z or 0..d-1)")->capture_default_str();
  bound->add_option("--j2", j2, "Index of the second outcome")->capture_default_str();
  bound->add_option("--outcomes", outcomes, "Pauli outcomes (0 = +1 eigenvector, 1 = -1)");

  // scan-alpha
  auto* scan_alpha = app.add_subcommand("scan-alpha", "Average certainty 1 + sin(alpha)/pi vs quadrature");
  int alpha_steps = 181;
  scan_alpha->add_option("--steps", alpha_steps, "Grid points on [0, pi] (>= 2)")->capture_default_str();
  scan_alpha->add_flag("--csv", csv, "Emit CSV rows instead of JSON");

  // cycle
  auto* cycle = app.add_subcommand("cycle", "Work balance of the membrane cycle");
  CycleRequest creq;
  double cf = 0.0;
  cycle->add_option("--d", creq.d, "Prime dimension")->capture_default_str();
  cycle->add_option("--basis", creq.basis, "computational | random | saturating (default computational; scans use random)")
      ->check(CLI::IsMember({"computational", "random", "saturating"}));
  cycle->add_option("--seed", creq.seed, "RNG seed")->capture_default_str();
  cycle->add_option("--samples", creq.samples, "Number of random bases (> 1 runs a scan)")->capture_default_str();
  cycle->add_option("--layout", creq.layout, "paper | symmetric")
      ->check(CLI::IsMember({"paper", "symmetric"}))
      ->capture_default_str();
  auto* o_cf = cycle->add_option("--counterfactual-zeta", cf, "Inject a hypothetical certainty bound (what-if)");
  cycle->add_option("--priors", creq.priors, "Component priors p_0..p_{d-1} (default uniform)");
  cycle->add_flag("--raw", creq.raw, "Only W1 - W2; skip the binary-entropy form");
  cycle->add_flag("--per-sample", creq.per_sample, "Include per-sample values in scans");
  cycle->add_flag("--csv", csv, "Per-sample CSV (scans with --per-sample)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    CommandResult result;
    if (*mub) {
      result = cmd_mub(mub_d, mub_verify, mub_tol);
    } else if (*bound) {
      const int modes = static_cast<int>(o_d->count() > 0) + static_cast<int>(o_pp->count() > 0) +
                        static_cast<int>(o_pt->count() > 0) + static_cast<int>(o_g->count() > 0);
      if (modes != 1) {
        std::cerr << "bound: select exactly one of --d, --pauli-pair, --pauli-triple, --gamma\n";
        return kUsage;
      }
      BoundRequest q;
      q.outcomes = outcomes;
      if (bound_d) {
        q.mode = BoundMode::MubPair;
        q.d = *bound_d;
        q.k1 = parse_basis_label(k1);
        q.k2 = parse_basis_label(k2);
        q.j1 = j1;
        q.j2 = j2;
      } else if (!pauli_pair.empty()) {
        q.mode = BoundMode::PauliPair;
        if (pauli_pair[0].size() != 1 || pauli_pair[1].size() != 1)
          throw DomainError("--pauli-pair axes are single letters x, y or z");
        q.axis_a = parse_axis(pauli_pair[0][0]);
        q.axis_b = parse_axis(pauli_pair[1][0]);
      } else if (pauli_triple) {
        q.mode = BoundMode::PauliTriple;
      } else {
        q.mode = BoundMode::Gamma;
        q.gamma = *gamma;
      }
      result = cmd_bound(q);
    } else if (*scan_alpha) {
      result = cmd_scan_alpha(alpha_steps);
    } else if (*cycle) {
      if (o_cf->count() > 0) creq.counterfactual_zeta = cf;
      result = cmd_cycle(creq);
    }
    if (csv) {
      std::cout << to_csv(result);
    } else {
      std::cout << serialize(result, compact ? 0 : 2) << '\n';
    }
    return kOk;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidArgument;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
