// End-to-end runs of the command-line tool.

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eqclust/io.hpp"
#include "eqclust/oracle.hpp"

namespace fs = std::filesystem;

namespace {

class Workdir {
 public:
  Workdir() {
    dir_ = fs::temp_directory_path() / ("eqclust_cli_" + std::to_string(::getpid()) + "_" + std::to_string(next_++));
    fs::create_directories(dir_);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Runs the tool with stdout captured to `out`, stderr discarded.
  int run(const std::string& args, const std::string& out = "stdout.txt") const {
    const std::string cmd = std::string("\"") + EQCLUST_BIN + "\" " + args + " > \"" + path(out) + "\" 2> \"" +
                            path("stderr.txt") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

 private:
  fs::path dir_;
  static inline int next_ = 0;
};

eqclust::Instance load(const std::string& path) {
  std::ifstream in(path);
  return eqclust::read_instance(in);
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

// Value after `key ` on its own line of `text`.
std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

}  // namespace

TEST_CASE("eval on a noiseless planted instance is zero") {
  Workdir w;
  REQUIRE(w.run("gen --planted --n 12 --k 3 --d 2 --p 1 --B 2 --noise 0 --seed 5 -o " + q(w.path("x.ecl")) +
                " --assign-out " + q(w.path("x.asg"))) == 0);
  REQUIRE(w.run("eval " + q(w.path("x.ecl")) + " " + q(w.path("x.asg"))) == 0);
  const std::string out = w.read("stdout.txt");
  CHECK(field(out, "cost") == "0");
  CHECK(field(out, "truncated") == "0");
}

TEST_CASE("kernelize, solve and lift stay within twice the optimum") {
  Workdir w;
  w.write("x.ecl", "ECL 1\n1 1 12 3 4\n0\n0\n0\n0\n9\n9\n9\n10\n20\n20\n20\n23\n");
  REQUIRE(w.run("kernelize " + q(w.path("x.ecl")) + " --mode lossy -o " + q(w.path("k.ecl")) + " --ctx " +
                q(w.path("k.ctx"))) == 0);
  CHECK(w.read("k.ctx").find("branch generic") != std::string::npos);
  const eqclust::Instance kernel = load(w.path("k.ecl"));
  CHECK(kernel.size() == 8);
  CHECK(kernel.k == 2);

  REQUIRE(w.run("solve " + q(w.path("k.ecl")) + " --method brute -o " + q(w.path("k.asg"))) == 0);
  REQUIRE(w.run("lift --ctx " + q(w.path("k.ctx")) + " " + q(w.path("k.asg")) + " -o " + q(w.path("x.asg"))) == 0);
  REQUIRE(w.run("eval " + q(w.path("x.ecl")) + " " + q(w.path("x.asg"))) == 0);
  const long long lifted = std::stoll(field(w.read("stdout.txt"), "cost"));

  const eqclust::Instance inst = load(w.path("x.ecl"));
  const long long opt = *eqclust::brute_force_opt(inst).cost.exact;
  CHECK(lifted >= opt);
  CHECK(lifted <= 2 * opt);
}

TEST_CASE("hypergraph example reduces to a planted cost of 42") {
  Workdir w;
  w.write("h.rsm", "RSM 3 6 4\n1 2 3\n4 5 6\n1 3 5\n2 4 5\n");
  w.write("m.txt", "MATCH 1 2\n1\n2\n");
  REQUIRE(w.run("reduce-rsm " + q(w.path("h.rsm")) + " --matching " + q(w.path("m.txt")) + " -o " +
                q(w.path("x.ecl")) + " --assign-out " + q(w.path("x.asg"))) == 0);
  const eqclust::Instance inst = load(w.path("x.ecl"));
  CHECK(inst.size() == 24);
  CHECK(inst.dim == 36);
  CHECK(inst.k == 8);
  CHECK(inst.budget == 42);
  REQUIRE(w.run("eval " + q(w.path("x.ecl")) + " " + q(w.path("x.asg"))) == 0);
  CHECK(field(w.read("stdout.txt"), "cost") == "42");
}

TEST_CASE("3DM reduction and planted clustering") {
  Workdir w;
  w.write("t.tdm", "TDM 2 3\n1 1 2\n2 2 1\n1 2 1\n");
  w.write("m.txt", "MATCH 1 2\n1\n2\n");
  REQUIRE(w.run("reduce-3dm " + q(w.path("t.tdm")) + " --matching " + q(w.path("m.txt")) + " -o " +
                q(w.path("x.ecl")) + " --assign-out " + q(w.path("x.asg"))) == 0);
  REQUIRE(w.run("eval " + q(w.path("x.ecl")) + " " + q(w.path("x.asg"))) == 0);
  CHECK(field(w.read("stdout.txt"), "cost") == "42");  // 7N with N = 6
}

TEST_CASE("exit codes") {
  Workdir w;
  SUBCASE("usage") {
    CHECK(w.run("no-such-command") == 2);
    CHECK(w.run("kernelize --mode sideways x") == 2);
  }
  SUBCASE("format") {
    w.write("bad.ecl", "ECL 1\n1 1 3 2 0\n0\n1\n2\n");  // k does not divide n
    CHECK(w.run("eval " + q(w.path("bad.ecl")) + " " + q(w.path("bad.ecl"))) == 3);
    w.write("junk.ecl", "hello\n");
    CHECK(w.run("solve " + q(w.path("junk.ecl"))) == 3);
  }
  SUBCASE("infeasible") {
    REQUIRE(w.run("gen --n 12 --k 3 --d 2 --p 1 --B 0 --seed 3 -o " + q(w.path("x.ecl"))) == 0);
    CHECK(w.run("solve " + q(w.path("x.ecl")) + " --method brute --guard 2") == 4);
  }
  SUBCASE("no budget is not an error") {
    w.write("x.ecl", "ECL 1\n1 1 10 2 0\n0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n");
    CHECK(w.run("solve " + q(w.path("x.ecl")) + " --method large") == 0);
    CHECK(w.read("stdout.txt").find("no-budget") != std::string::npos);
  }
}

TEST_CASE("generated instances round-trip through solve and eval") {
  Workdir w;
  REQUIRE(w.run("gen --n 8 --k 2 --d 3 --p 0 --B 2 --seed 11 -o " + q(w.path("x.ecl"))) == 0);
  const eqclust::Instance inst = load(w.path("x.ecl"));
  CHECK(inst.size() == 8);
  CHECK(inst.dim == 3);
  CHECK(inst.p == 0);
  REQUIRE(w.run("solve " + q(w.path("x.ecl")) + " --method brute -o " + q(w.path("x.asg"))) == 0);
  const std::string solved = field(w.read("stdout.txt"), "cost");
  REQUIRE(w.run("eval " + q(w.path("x.ecl")) + " " + q(w.path("x.asg"))) == 0);
  CHECK(field(w.read("stdout.txt"), "cost") == solved);
  CHECK(solved == std::to_string(*eqclust::brute_force_opt(inst).cost.exact));
}

TEST_CASE("exact kernel keeps the decision") {
  Workdir w;
  w.write("x.ecl", "ECL 1\n1 1 12 3 4\n0\n0\n0\n0\n9\n9\n9\n10\n20\n20\n20\n23\n");
  REQUIRE(w.run("kernelize " + q(w.path("x.ecl")) + " --mode exact -o " + q(w.path("k.ecl"))) == 0);
  const eqclust::Instance inst = load(w.path("x.ecl"));
  const eqclust::Instance kernel = load(w.path("k.ecl"));
  CHECK((*eqclust::brute_force_opt(inst).cost.exact <= inst.budget) ==
        (*eqclust::brute_force_opt(kernel).cost.exact <= kernel.budget));
}

TEST_CASE("verify runs in parallel") {
  Workdir w;
  CHECK(w.run("verify --count 40 --seed 1 --max-n 10 --jobs 4") == 0);
  CHECK(w.read("stdout.txt").find("verified 40/40") != std::string::npos);
}
