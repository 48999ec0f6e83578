// powersum: command-line front end for the difference-set and power-sum
// library. JSON/CSV go to stdout, diagnostics to stderr.
//
// Exit codes: 0 success / Found / Exists / IsMinimizer (and inconclusive
// verdicts), 1 NoneExists / NotMinimizer / Excluded / invalid set,
// 2 invalid-domain input, 64 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "powersum/io.hpp"
#include "powersum/minimax.hpp"
#include "powersum/pds.hpp"
#include "powersum/power_sums.hpp"

namespace {

using powersum::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw CLI::ValidationError("--set", "not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

void emit(const Json& j, const std::string& format) {
  if (format == "human") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
}

struct TupleSource {
  std::string tuple_file;
  std::string from_pds;  // "q=Q"
  std::string from_set;  // "0,1,3"
  std::size_t random_n = 0;
  double alpha = 0.0;

  void add_options(CLI::App* cmd) {
    auto* file = cmd->add_option("--tuple-file", tuple_file, "tuple as JSON {n, alpha_turns, thetas} or theta_turns CSV");
    auto* pds = cmd->add_option("--from-pds", from_pds, "Fabrykowski tuple of the Singer set, e.g. q=2");
    auto* set = cmd->add_option("--from-set", from_set, "Fabrykowski tuple of an explicit set, e.g. 0,1,3");
    auto* rnd = cmd->add_option("--random", random_n, "uniform random tuple of this size (uses --seed)");
    file->excludes(pds)->excludes(set)->excludes(rnd);
    pds->excludes(set)->excludes(rnd);
    set->excludes(rnd);
    cmd->add_option("--alpha", alpha, "global phase in turns for --from-pds / --from-set");
  }

  powersum::UnimodularTuple build(std::uint64_t seed) const {
    if (!tuple_file.empty()) return powersum::io::read_tuple_file(tuple_file);
    if (!from_pds.empty()) {
      if (from_pds.rfind("q=", 0) != 0) throw CLI::ValidationError("--from-pds", "expected q=<order>");
      const auto q = std::stoll(from_pds.substr(2));
      return powersum::fabrykowski_tuple(powersum::pds::singer_construct(q), alpha);
    }
    if (!from_set.empty()) {
      auto residues = parse_list(from_set);
      const auto q = static_cast<std::int64_t>(residues.size()) - 1;
      return powersum::fabrykowski_tuple(powersum::pds::make_pds(q, std::move(residues)), alpha);
    }
    if (random_n >= 2) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      std::vector<double> th(random_n);
      for (auto& t : th) t = uni(rng);
      return powersum::UnimodularTuple(std::move(th));
    }
    throw CLI::ValidationError("tuple", "give one of --tuple-file, --from-pds, --from-set, --random N (N >= 2)");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect difference sets and the power-sum inf-max problem"};
  app.require_subcommand(1, 1);

  std::uint64_t seed = 0;
  std::string format;
  app.add_option("--seed", seed, "RNG seed")->envname("POWERSUM_SEED");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "human"}));

  std::int64_t q = 0;
  auto* singer = app.add_subcommand("singer", "Singer perfect difference set of prime-power order q");
  singer->add_option("--q", q, "order")->required();

  std::string set_text;
  std::optional<std::int64_t> verify_q, verify_m;
  auto* verify = app.add_subcommand("verify", "check the perfect difference set property");
  verify->add_option("--set", set_text, "comma-separated residues")->required();
  auto* vq = verify->add_option("--q", verify_q, "order");
  auto* vm = verify->add_option("--modulus", verify_m, "modulus q^2+q+1");
  vq->excludes(vm);

  std::int64_t order = 0;
  std::uint64_t budget = powersum::pds::kDefaultSearchBudget;
  unsigned parallel = 1;
  auto* feas = app.add_subcommand("feasibility", "existence tests for an order");
  feas->add_option("--order", order, "order")->required();
  feas->add_option("--budget", budget, "search node budget (0 disables search)");
  feas->add_option("--parallel", parallel, "search threads");

  TupleSource profile_src;
  std::int64_t nu_max = 0;
  auto* profile = app.add_subcommand("profile", "|S(nu)| and eps_nu for nu = 1..n^2-n as CSV");
  profile_src.add_options(profile);
  profile->add_option("--nu-max", nu_max, "largest nu (default n^2-n)");

  TupleSource recover_src;
  double tol = powersum::kDefaultRecoveryTol;
  auto* recover = app.add_subcommand("recover", "recover the difference set behind a minimizer");
  recover_src.add_options(recover);
  recover->add_option("--tol", tol, "recovery tolerance");

  powersum::minimax::OptimizerConfig opt;
  std::string trace_path;
  std::string polish = "lp";
  auto* optimize = app.add_subcommand("optimize", "multi-start minimization of max |S(nu)|");
  optimize->add_option("--n", opt.n, "tuple size")->required()->check(CLI::Range(2, 64));
  optimize->add_option("--restarts", opt.restarts, "number of restarts")->check(CLI::PositiveNumber);
  optimize->add_option("--max-iters", opt.max_iters, "descent iterations per smoothing stage");
  optimize->add_option("--parallel", opt.workers, "threads");
  optimize->add_option("--polish", polish, "final polish")->check(CLI::IsMember({"lp", "coordinate"}));
  optimize->add_option("--trace", trace_path, "write per-restart trace CSV (restart,iter,beta,value)");

  std::uint64_t search_budget = powersum::pds::kDefaultSearchBudget;
  unsigned search_parallel = 1;
  auto* search = app.add_subcommand("search", "exhaustive search for a perfect difference set");
  search->add_option("--order", order, "order")->required();
  search->add_option("--budget", search_budget, "node budget");
  search->add_option("--parallel", search_parallel, "threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (singer->parsed()) {
      const auto d = powersum::pds::singer_construct(q);
      emit(powersum::io::to_json(d), format);
      return kExitOk;
    }

    if (verify->parsed()) {
      std::int64_t vqv = 0;
      if (verify_q) {
        vqv = *verify_q;
      } else if (verify_m) {
        auto from_m = powersum::pds::order_for_modulus(*verify_m);
        if (!from_m) throw powersum::Error(powersum::ErrorCode::InvalidArgument, "modulus is not of the form q^2+q+1");
        vqv = *from_m;
      } else {
        throw CLI::ValidationError("verify", "one of --q or --modulus is required");
      }
      if (vqv < 1) throw powersum::Error(powersum::ErrorCode::InvalidArgument, "order must be >= 1");
      const auto res = powersum::pds::verify(parse_list(set_text), vqv);
      emit(powersum::io::to_json(res), format);
      return res.valid ? kExitOk : kExitNegative;
    }

    if (feas->parsed()) {
      const auto r = powersum::pds::feasibility(order, budget, parallel);
      emit(powersum::io::to_json(r), format);
      return r.verdict == powersum::pds::Verdict::Excluded ? kExitNegative : kExitOk;
    }

    if (profile->parsed()) {
      const auto t = profile_src.build(seed);
      const auto p = powersum::power_sums(t, nu_max > 0 ? nu_max : powersum::horizon(t.n()));
      if (format == "json" || format == "human") {
        emit(powersum::io::to_json(p), format);
      } else {
        std::cout << powersum::io::profile_csv(p);
      }
      return kExitOk;
    }

    if (recover->parsed()) {
      const auto t = recover_src.build(seed);
      const auto r = powersum::recover_structure(t, tol);
      emit(powersum::io::to_json(r), format);
      return r.status == powersum::RecoveryStatus::IsMinimizer ? kExitOk : kExitNegative;
    }

    if (optimize->parsed()) {
      opt.seed = seed;
      opt.polish = polish == "lp" ? powersum::minimax::Polish::TrustRegionLP
                                  : powersum::minimax::Polish::CoordinateDescent;
      opt.record_trace = !trace_path.empty();
      const auto rep = powersum::minimax::minimize(opt);
      if (opt.record_trace) {
        std::ofstream out(trace_path);
        if (!out) throw powersum::Error(powersum::ErrorCode::InvalidArgument, "cannot write " + trace_path);
        out << powersum::io::trace_csv(rep.trace);
      }
      emit(powersum::io::to_json(rep, opt), format);
      return kExitOk;
    }

    if (search->parsed()) {
      const auto r = powersum::pds::exhaustive_search(order, search_budget, search_parallel);
      emit(powersum::io::to_json(r, order), format);
      return r.status == powersum::pds::SearchStatus::NoneExists ? kExitNegative : kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const powersum::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
