// Single-binary front end: one subcommand per pipeline, JSON result documents on
// stdout (CSV plot data with --format csv), timing on stderr only so documents stay
// byte-identical across runs.  Exit 0 pass, 2 tolerance failure, 1 input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "instanton/errors.hpp"
#include "instanton/scenario.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format = "json";
  instanton::RunOverrides ov;
};

const char* describe(const std::string& cmd) {
  if (cmd == "adhm-check") return "moment-map residual and nondegeneracy of a datum";
  if (cmd == "charge") return "total second-Chern integral of a datum";
  if (cmd == "asd-check") return "anti-self-duality residual at sampled points";
  if (cmd == "k1-closed-form") return "generic pipeline vs the charge-1 closed forms";
  if (cmd == "link") return "Gauss linking number of two surfaces";
  if (cmd == "don1") return "first-order Donaldson-type integral of the charge-1 family";
  if (cmd == "delta-limits") return "small-rho delta-family masses";
  if (cmd == "euler") return "equivariant Euler classes of the fixed-point normal bundles";
  if (cmd == "reducible-check") return "restriction of split data to the reducible stratum";
  if (cmd == "vanish") return "certificate enumeration / exhaustive emptiness scan";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instanton: ADHM construction, curvature invariants, and anomaly checks"};
  app.require_subcommand(1);

  std::map<std::string, Flags> flags;
  for (const std::string& cmd : instanton::scenario_commands()) {
    CLI::App* sub = app.add_subcommand(cmd, describe(cmd));
    Flags& f = flags[cmd];
    sub->add_option("--config", f.config, "scenario config (JSON file)");
    sub->add_option("--seed", f.ov.seed, "override the config seed");
    sub->add_option("--budget", f.ov.budget, "override the sample/node budget");
    sub->add_option("--tol", f.ov.tol, "override the pass tolerance");
    sub->add_option("--out", f.out, "also write the output to this file");
    sub->add_option("--format", f.format, "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();
  const Flags& f = flags[cmd];

  const auto t0 = std::chrono::steady_clock::now();
  try {
    instanton::io::json config;
    if (!f.config.empty()) config = instanton::io::load_json(f.config);
    const instanton::RunOutcome outcome = instanton::run_scenario(cmd, config, f.ov);

    const std::string text = f.format == "csv"
                                 ? instanton::emit_plotdata(outcome.document)
                                 : instanton::io::dump_doc(outcome.document);
    std::cout << text;
    if (!f.out.empty()) {
      std::ofstream out(f.out);
      if (!out) throw instanton::ConfigInvalid("cannot write " + f.out);
      out << text;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cerr << "wall_ms=" << ms << "\n";
    return outcome.exit_code;
  } catch (const instanton::Error& e) {
    std::cerr << instanton::io::dump_doc({{"error", "input"}, {"message", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    std::cerr << instanton::io::dump_doc({{"error", "internal"}, {"message", e.what()}});
    return 1;
  }
}
