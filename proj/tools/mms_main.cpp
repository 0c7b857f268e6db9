// Command-line front end: space definition files or inline generator
// expressions in, invariants/distances/check-suites/experiments out.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mms/boxdist.hpp"
#include "mms/harness.hpp"
#include "mms/invariants.hpp"
#include "mms/measure.hpp"
#include "mms/pyramid.hpp"
#include "mms/space.hpp"
#include "mms/spacefile.hpp"

namespace {

using namespace mms;

int usage() {
  std::cerr <<
      "usage:\n"
      "  mms compute <quantity> <space...> [options]\n"
      "      quantities: diam, partialdiam --mass M, sep --kappas K0 K1 ...,\n"
      "                  cov --r R --kappa K, obsdiam --kappa K, net --eps E,\n"
      "                  box, boxupper, prokhorov, tv, dominates, isomorphic,\n"
      "                  decompose\n"
      "  mms check <metric-lemmas|sum-bounds|invariant-lemmas|all>\n"
      "      [--seed S] [--count N] [--out file.csv]\n"
      "  mms experiment <dissipation|ball-decay|wedge|decomposition> [options]\n"
      "      dissipation:   --n 4 8 16\n"
      "      ball-decay:    [--base expr] --p P --r R --n 1 2 4\n"
      "      wedge:         --m 6 --n 1 2 --alpha 0.5 [--seed S]\n"
      "      decomposition: [--seed S] [--count N]\n"
      "  mms validate <file>\n"
      "\n"
      "spaces are file paths or inline expressions, e.g. dissipation(8);\n"
      "MMS_SEED sets the default seed; exit codes: 0 pass, 1 fail, 2 error\n";
  return 2;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MMS_SEED")) return std::strtoull(env, nullptr, 10);
  return 17;
}

ParsedSpace load_space(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_space_text(buf.str());
  }
  return parse_space_expression(arg);
}

FiniteMmSpace load_finite(const std::string& arg) {
  ParsedSpace p = load_space(arg);
  if (std::holds_alternative<FiniteMmSpace>(p)) return std::get<FiniteMmSpace>(p);
  throw std::invalid_argument("'" + arg + "' is an extended space; this quantity needs finite distances");
}

struct Args {
  std::vector<std::string> positional;
  std::vector<std::pair<std::string, std::vector<std::string>>> flags;

  const std::vector<std::string>* flag(const std::string& name) const {
    for (const auto& [k, v] : flags)
      if (k == name) return &v;
    return nullptr;
  }
  double flag_num(const std::string& name, double fallback) const {
    const auto* v = flag(name);
    if (!v || v->empty()) return fallback;
    return std::stod((*v)[0]);
  }
  bool has(const std::string& name) const { return flag(name) != nullptr; }
};

Args parse_args(int argc, char** argv, int from) {
  Args a;
  for (int i = from; i < argc; ++i) {
    std::string s = argv[i];
    if (s.rfind("--", 0) == 0) {
      a.flags.emplace_back(s.substr(2), std::vector<std::string>{});
    } else if (!a.flags.empty()) {
      a.flags.back().second.push_back(s);
    } else {
      a.positional.push_back(s);
    }
  }
  return a;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int cmd_compute(const Args& args) {
  if (args.positional.empty()) return usage();
  const std::string& q = args.positional[0];
  std::vector<std::string> spaces(args.positional.begin() + 1, args.positional.end());

  // positional space args may have been swallowed by a flag list; the flag
  // grammar here is strictly numeric, so no ambiguity arises in practice
  if (q == "diam") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    std::cout << fmt(x.diameter()) << " EXACT\n";
  } else if (q == "partialdiam") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    double mass = args.flag_num("mass", 1.0);
    std::cout << fmt(partial_diameter(x, mass)) << " EXACT\n";
  } else if (q == "sep") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    const auto* ks = args.flag("kappas");
    if (!ks || ks->size() < 2) {
      std::cerr << "sep needs --kappas with at least two values\n";
      return 2;
    }
    std::vector<double> kappas;
    for (const auto& s : *ks) kappas.push_back(std::stod(s));
    std::cout << fmt(separation_distance(x, kappas)) << " EXACT\n";
  } else if (q == "cov") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    CoverResult c = covering_number(x, args.flag_num("r", 1.0), args.flag_num("kappa", 0.5));
    std::cout << c.count << (c.exact ? " EXACT" : " UPPER") << "\n";
  } else if (q == "obsdiam") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    CertifiedInterval iv = obs_diameter(x, args.flag_num("kappa", 0.5), default_seed());
    if (iv.exact())
      std::cout << fmt(iv.upper) << " EXACT\n";
    else
      std::cout << fmt(iv.lower) << " LOWER\n" << fmt(iv.upper) << " UPPER\n";
  } else if (q == "net") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    std::vector<int> net = eps_supporting_net(x, args.flag_num("eps", 0.25));
    std::cout << "[";
    for (std::size_t i = 0; i < net.size(); ++i)
      std::cout << (i ? " " : "") << x.label(net[i]);
    std::cout << "] EXACT\n";
  } else if (q == "box") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    FiniteMmSpace y = load_finite(spaces.at(1));
    std::cout << fmt(box_distance_exact(x, y)) << " EXACT\n";
  } else if (q == "boxupper" || q == "prokhorov" || q == "tv") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    FiniteMmSpace y = load_finite(spaces.at(1));
    if (x.size() != y.size() || x.dist_matrix() != y.dist_matrix()) {
      std::cerr << q << " needs two measures on one metric (same matrix)\n";
      return 2;
    }
    if (q == "tv")
      std::cout << fmt(total_variation(x.weights(), y.weights())) << " EXACT\n";
    else if (q == "prokhorov")
      std::cout << fmt(prokhorov_flow(x, x.weights(), y.weights())) << " EXACT\n";
    else
      std::cout << fmt(box_upper_from_prokhorov(x, x.weights(), y.weights())) << " UPPER\n";
  } else if (q == "dominates") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    FiniteMmSpace y = load_finite(spaces.at(1));
    auto witness = lipschitz_dominates(x, y);
    if (witness) {
      std::cout << "yes EXACT witness:";
      for (int i = 0; i < x.size(); ++i)
        std::cout << " " << x.label(i) << "->" << y.label((*witness)[static_cast<std::size_t>(i)]);
      std::cout << "\n";
    } else {
      std::cout << "no EXACT\n";
    }
  } else if (q == "isomorphic") {
    FiniteMmSpace x = load_finite(spaces.at(0));
    FiniteMmSpace y = load_finite(spaces.at(1));
    auto perm = mm_isomorphic(x, y);
    std::cout << (perm ? "yes" : "no") << " EXACT\n";
  } else if (q == "decompose") {
    ParsedSpace p = load_space(spaces.at(0));
    ExtendedMmSpace z = std::holds_alternative<ExtendedMmSpace>(p)
                            ? std::get<ExtendedMmSpace>(p)
                            : ExtendedMmSpace::from_finite(std::get<FiniteMmSpace>(p));
    DecompositionResult dec = decompose_extended(z);
    for (std::size_t k = 0; k < dec.parts.size(); ++k)
      std::cout << "part " << k << ": weight " << fmt(dec.weights.entries[k]) << ", "
                << dec.parts[k].size() << " points EXACT\n";
  } else {
    std::cerr << "unknown quantity '" << q << "'\n";
    return 2;
  }
  return 0;
}

void write_report(const CheckReport& report, const Args& args, bool& all_pass) {
  std::cout << report_summary(report) << "\n";
  if (!report.pass()) all_pass = false;
  const auto* out = args.flag("out");
  if (out && !out->empty()) {
    std::string path = (*out)[0];
    if (report.name != "all") {
      std::ofstream f(path, std::ios::app);
      f << report_csv(report);
    }
    if (!report.failures.empty()) {
      std::ofstream f(path + ".failures.txt", std::ios::app);
      for (const auto& fail : report.failures)
        f << "[" << fail.check << " #" << fail.instance << "] " << fail.what << "\n"
          << fail.replay << "\n";
    }
  } else {
    std::cout << report_csv(report);
  }
}

int cmd_check(const Args& args) {
  if (args.positional.empty()) return usage();
  const std::string& suite = args.positional[0];
  std::uint64_t seed = static_cast<std::uint64_t>(args.flag_num("seed", static_cast<double>(default_seed())));
  int count = static_cast<int>(args.flag_num("count", 60));
  const auto* out = args.flag("out");
  if (out && !out->empty()) std::remove(((*out)[0]).c_str());

  bool all_pass = true;
  bool known = false;
  if (suite == "metric-lemmas" || suite == "all") {
    write_report(check_metric_lemmas(seed, count), args, all_pass);
    known = true;
  }
  if (suite == "sum-bounds" || suite == "all") {
    write_report(check_sum_bounds(seed, count), args, all_pass);
    known = true;
  }
  if (suite == "invariant-lemmas" || suite == "all") {
    write_report(check_invariant_lemmas(seed, count), args, all_pass);
    known = true;
  }
  if (!known) {
    std::cerr << "unknown suite '" << suite
              << "'; available: metric-lemmas, sum-bounds, invariant-lemmas, all\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}

int cmd_experiment(const Args& args) {
  if (args.positional.empty()) return usage();
  const std::string& name = args.positional[0];
  std::uint64_t seed = static_cast<std::uint64_t>(args.flag_num("seed", static_cast<double>(default_seed())));
  std::vector<int> n_list;
  if (const auto* ns = args.flag("n"))
    for (const auto& s : *ns) n_list.push_back(std::stoi(s));

  bool all_pass = true;
  if (name == "dissipation") {
    if (n_list.empty()) n_list = {4, 8, 16};
    write_report(experiment_dissipation(n_list), args, all_pass);
  } else if (name == "ball-decay") {
    if (n_list.empty()) n_list = {1, 2, 4};
    FiniteMmSpace base = two_point_space(1.0, 0.5);
    if (const auto* b = args.flag("base"); b && !b->empty()) base = load_finite((*b)[0]);
    write_report(experiment_product_ball_decay(base, args.flag_num("p", 2.0),
                                               args.flag_num("r", 0.4), n_list),
                 args, all_pass);
  } else if (name == "wedge") {
    if (n_list.empty()) n_list = {1, 2};
    write_report(experiment_wedge_convergence(static_cast<int>(args.flag_num("m", 6)),
                                              n_list, args.flag_num("alpha", 0.5), seed),
                 args, all_pass);
  } else if (name == "decomposition") {
    write_report(experiment_decomposition(seed, static_cast<int>(args.flag_num("count", 40))),
                 args, all_pass);
  } else {
    std::cerr << "unknown experiment '" << name
              << "'; available: dissipation, ball-decay, wedge, decomposition\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}

int cmd_validate(const Args& args) {
  if (args.positional.empty()) return usage();
  ParsedSpace p = load_space(args.positional[0]);
  if (std::holds_alternative<FiniteMmSpace>(p)) {
    const auto& x = std::get<FiniteMmSpace>(p);
    std::cout << "ok: finite mm-space, " << x.size() << " points, diam "
              << fmt(x.diameter()) << "\n";
  } else {
    const auto& x = std::get<ExtendedMmSpace>(p);
    std::cout << "ok: extended mm-space, " << x.size() << " points, "
              << x.finite_components().size() << " finite components\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return usage();
  std::string cmd = argv[1];
  Args args = parse_args(argc, argv, 2);
  try {
    if (cmd == "compute") return cmd_compute(args);
    if (cmd == "check") return cmd_check(args);
    if (cmd == "experiment") return cmd_experiment(args);
    if (cmd == "validate") return cmd_validate(args);
    return usage();
  } catch (const mms::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mms::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
