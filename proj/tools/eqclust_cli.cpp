// eqclust: command-line front end for the clustering kernel pipeline.
//
// Data goes to stdout (or -o files), diagnostics to stderr.
// Exit codes: 0 ok, 1 verification failure, 2 usage, 3 malformed or invalid
// input, 4 infeasible or guard exceeded.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "eqclust/assign.hpp"
#include "eqclust/core.hpp"
#include "eqclust/exact_large.hpp"
#include "eqclust/generators.hpp"
#include "eqclust/io.hpp"
#include "eqclust/kernel.hpp"
#include "eqclust/oracle.hpp"

namespace {

using namespace eqclust;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kFormat = 3;
constexpr int kInfeasible = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  write(out);
}

template <typename Reader>
auto load(const std::string& path, Reader reader) {
  std::istringstream in(read_text(path));
  return reader(in);
}

// ------------------------------------------------------------------- gen

struct GenArgs {
  std::size_t n = 12;
  std::size_t k = 2;
  std::size_t d = 1;
  unsigned p = 1;
  std::int64_t budget = 1;
  std::uint64_t seed = 0;
  Coord bound = 5;
  bool planted = false;
  Coord spread = 20;
  Coord noise = 1;
  std::string out = "-";
  std::string assign_out;
};

int run_gen(const GenArgs& a) {
  if (a.planted) {
    if (a.k == 0 || a.n % a.k != 0) throw UsageError("--k must divide --n");
    PlantedSpec spec{a.k, a.n / a.k, a.d, a.spread, a.noise, a.p, a.budget, a.seed};
    const Planted planted = gen_planted(spec);
    emit(a.out, [&](std::ostream& o) { write_instance(o, planted.instance); });
    if (!a.assign_out.empty()) emit(a.assign_out, [&](std::ostream& o) { write_clustering(o, planted.clustering); });
    return kOk;
  }
  if (!a.assign_out.empty()) throw UsageError("--assign-out needs --planted");
  const Instance inst = gen_random(RandomSpec{a.n, a.k, a.d, a.bound, a.p, a.budget, a.seed});
  emit(a.out, [&](std::ostream& o) { write_instance(o, inst); });
  return kOk;
}

// ----------------------------------------------------------- reductions

struct ReduceArgs {
  std::string input;
  std::string matching;
  std::string out = "-";
  std::string assign_out;
};

int run_reduce_rsm(const ReduceArgs& a) {
  if (a.matching.empty() != a.assign_out.empty()) throw UsageError("--matching and --assign-out go together");
  const Hypergraph h = load(a.input, read_hypergraph);
  const Instance inst = reduce_rsm(h);
  emit(a.out, [&](std::ostream& o) { write_instance(o, inst); });
  if (!a.matching.empty()) {
    const Clustering c = planted_rsm_clustering(h, load(a.matching, read_matching));
    emit(a.assign_out, [&](std::ostream& o) { write_clustering(o, c); });
  }
  return kOk;
}

int run_reduce_3dm(const ReduceArgs& a) {
  if (a.matching.empty() != a.assign_out.empty()) throw UsageError("--matching and --assign-out go together");
  const TdmInstance t = load(a.input, read_tdm);
  const Instance inst = reduce_3dm(t);
  emit(a.out, [&](std::ostream& o) { write_instance(o, inst); });
  if (!a.matching.empty()) {
    const Clustering c = planted_3dm_clustering(t, load(a.matching, read_matching));
    emit(a.assign_out, [&](std::ostream& o) { write_clustering(o, c); });
  }
  return kOk;
}

// ------------------------------------------------------------ kernelize

struct KernelArgs {
  std::string input;
  std::string mode = "lossy";
  std::string out = "-";
  std::string ctx;
};

int run_kernelize(const KernelArgs& a) {
  const Instance inst = load(a.input, read_instance);
  inst.validate();
  if (a.mode == "exact") {
    if (!a.ctx.empty()) throw UsageError("--ctx applies to --mode lossy only");
    const Instance kernel = exact_kernelize(inst);
    emit(a.out, [&](std::ostream& o) { write_instance(o, kernel); });
    std::cerr << "exact kernel: n=" << kernel.size() << " d=" << kernel.dim << " k=" << kernel.k
              << " B=" << kernel.budget << '\n';
    return kOk;
  }
  if (a.ctx.empty()) throw UsageError("--mode lossy needs --ctx");
  const LossyKernel lk = lossy_kernelize(inst);
  emit(a.out, [&](std::ostream& o) { write_instance(o, lk.kernel); });
  emit(a.ctx, [&](std::ostream& o) { write_lift_context(o, lk.context); });
  std::cerr << "lossy kernel (" << to_string(lk.context.branch) << "): n=" << lk.kernel.size()
            << " d=" << lk.kernel.dim << " k=" << lk.kernel.k << " B=" << lk.kernel.budget << '\n';
  return kOk;
}

// ----------------------------------------------------------------- lift

struct LiftArgs {
  std::string ctx;
  std::string clustering;
  std::string out = "-";
};

int run_lift(const LiftArgs& a) {
  const LiftContext ctx = load(a.ctx, read_lift_context);
  const Clustering kernel = load(a.clustering, read_clustering);
  const Clustering lifted = lift_solution(ctx, kernel);
  emit(a.out, [&](std::ostream& o) { write_clustering(o, lifted); });
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string input;
  std::string method = "auto";
  std::string medians;
  std::string out = "-";
  std::uint64_t guard = kPartitionGuard;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = load(a.input, read_instance);
  inst.validate();
  if (a.method != "matching" && !a.medians.empty()) throw UsageError("--medians applies to --method matching");

  std::string method = a.method;
  if (method == "auto") method = inst.large_regime() ? "large" : "brute";

  Clustering clustering;
  CostValue cost;
  if (method == "large") {
    const LargeOutcome outcome = solve_large(inst);
    if (std::holds_alternative<NoBudget>(outcome)) {
      std::cout << "no-budget\n";
      return kOk;
    }
    clustering = std::get<Solution>(outcome).clustering;
    cost = std::get<Solution>(outcome).cost;
  } else if (method == "matching") {
    if (a.medians.empty()) throw UsageError("--method matching needs --medians");
    const std::vector<Median> medians = load(a.medians, read_medians);
    if (medians.size() != inst.k) throw UsageError("medians file must hold exactly k medians");
    Assignment assigned = assign_to_medians(inst, medians);
    clustering = std::move(assigned.clustering);
    cost = assigned.cost;
  } else if (method == "brute") {
    Solution sol = brute_force_opt(inst, a.guard);
    clustering = std::move(sol.clustering);
    cost = sol.cost;
  } else {
    throw UsageError("unknown method '" + a.method + "'");
  }

  emit(a.out, [&](std::ostream& o) { write_clustering(o, clustering); });
  (a.out == "-" ? std::cerr : std::cout) << "cost " << cost.to_string() << '\n';
  return kOk;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
  std::string input;
  std::string clustering;
};

int run_eval(const EvalArgs& a) {
  const Instance inst = load(a.input, read_instance);
  inst.validate();
  const Clustering c = load(a.clustering, read_clustering);
  const CostValue cost = clustering_cost(inst, c);
  std::cout << "cost " << cost.to_string() << '\n';
  std::cout << "truncated " << truncate(cost, inst.budget).to_string() << '\n';
  return kOk;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  std::string input;
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::size_t max_n = 12;
  unsigned jobs = 1;
};

int run_verify(const VerifyArgs& a) {
  if (!a.input.empty()) {
    const Instance inst = load(a.input, read_instance);
    inst.validate();
    const Report r = verify_instance(inst);
    for (const auto& v : r.violations) std::cout << "violation: " << v << '\n';
    std::cout << (r.ok ? "ok" : "FAILED") << '\n';
    return r.ok ? kOk : kViolation;
  }
  if (a.max_n < 2 || a.max_n > 16) throw UsageError("--max-n must lie in 2..16");

  std::vector<Report> reports(a.count);
  std::vector<std::string> errors(a.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < a.count; i = next++) {
      try {
        reports[i] = verify_instance(gen_oracle_sized(a.seed + i, a.max_n));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned jobs = std::max(1u, a.jobs);
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  for (std::size_t i = 0; i < a.count; ++i) {
    const bool bad = !reports[i].ok || !errors[i].empty();
    if (!bad) continue;
    ++failed;
    std::cout << "seed " << a.seed + i << ":";
    if (!errors[i].empty()) std::cout << " error: " << errors[i];
    for (const auto& v : reports[i].violations) std::cout << ' ' << v << ';';
    std::cout << '\n';
  }
  std::cout << "verified " << a.count - failed << "/" << a.count << " instances\n";
  return failed == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equal-size k-median clustering: kernels, exact solvers and oracle checks"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a random or planted instance");
  g->add_option("--n", gen.n, "Number of points");
  g->add_option("--k", gen.k, "Number of clusters");
  g->add_option("--d", gen.d, "Dimension");
  g->add_option("--p", gen.p, "Norm index (0 = Hamming)");
  g->add_option("--B", gen.budget, "Budget");
  g->add_option("--seed", gen.seed, "PRNG seed");
  g->add_option("--bound", gen.bound, "Coordinate bound for random instances");
  g->add_flag("--planted", gen.planted, "Planted clusters instead of uniform noise");
  g->add_option("--spread", gen.spread, "Gap between planted centers");
  g->add_option("--noise", gen.noise, "Per-coordinate noise around planted centers");
  g->add_option("-o,--out", gen.out, "Instance output (default stdout)");
  g->add_option("--assign-out", gen.assign_out, "Planted clustering output");

  ReduceArgs rsm;
  auto* r = app.add_subcommand("reduce-rsm", "Instance from an r-uniform hypergraph");
  r->add_option("input", rsm.input, "Hypergraph file")->required();
  r->add_option("--matching", rsm.matching, "Perfect matching; writes the planted clustering");
  r->add_option("-o,--out", rsm.out, "Instance output");
  r->add_option("--assign-out", rsm.assign_out, "Planted clustering output");

  ReduceArgs tdm;
  auto* t = app.add_subcommand("reduce-3dm", "Instance from a 3-dimensional matching instance");
  t->add_option("input", tdm.input, "3DM file")->required();
  t->add_option("--matching", tdm.matching, "Perfect matching; writes the planted clustering");
  t->add_option("-o,--out", tdm.out, "Instance output");
  t->add_option("--assign-out", tdm.assign_out, "Planted clustering output");

  KernelArgs kern;
  auto* k = app.add_subcommand("kernelize", "Lossy or exact kernel of an instance");
  k->add_option("input", kern.input, "Instance file")->required();
  k->add_option("--mode", kern.mode, "lossy or exact")->check(CLI::IsMember({"lossy", "exact"}));
  k->add_option("-o,--out", kern.out, "Kernel instance output");
  k->add_option("--ctx", kern.ctx, "Lift context output (lossy mode)");

  LiftArgs lift;
  auto* l = app.add_subcommand("lift", "Map a kernel clustering back to the original instance");
  l->add_option("--ctx", lift.ctx, "Lift context from kernelize")->required();
  l->add_option("clustering", lift.clustering, "Kernel clustering")->required();
  l->add_option("-o,--out", lift.out, "Clustering output");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Cluster an instance");
  s->add_option("input", solve.input, "Instance file")->required();
  s->add_option("--method", solve.method, "auto, large, matching or brute")
      ->check(CLI::IsMember({"auto", "large", "matching", "brute"}));
  s->add_option("--medians", solve.medians, "Medians file (matching method)");
  s->add_option("--guard", solve.guard, "Partition limit for brute force");
  s->add_option("-o,--out", solve.out, "Clustering output");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Exact and truncated cost of a clustering");
  e->add_option("input", eval.input, "Instance file")->required();
  e->add_option("clustering", eval.clustering, "Clustering file")->required();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Oracle-backed property checks");
  v->add_option("input", verify.input, "Check one instance instead of a random batch");
  v->add_option("--count", verify.count, "Random instances to check");
  v->add_option("--seed", verify.seed, "First seed");
  v->add_option("--max-n", verify.max_n, "Largest instance size");
  v->add_option("--jobs", verify.jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*r) return run_reduce_rsm(rsm);
    if (*t) return run_reduce_3dm(tdm);
    if (*k) return run_kernelize(kern);
    if (*l) return run_lift(lift);
    if (*s) return run_solve(solve);
    if (*e) return run_eval(eval);
    if (*v) return run_verify(verify);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kUsage;
  } catch (const FormatError& err) {
    std::cerr << "format error: " << err.what() << '\n';
    return kFormat;
  } catch (const GuardExceeded& err) {
    std::cerr << "guard exceeded: " << err.what() << '\n';
    return kInfeasible;
  } catch (const Infeasible& err) {
    std::cerr << "infeasible: " << err.what() << '\n';
    return kInfeasible;
  } catch (const PreconditionViolation& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    return kFormat;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInfeasible;
  }
  return kUsage;
}
