#include "eqclust/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace eqclust {

namespace {

class Tokens {
 public:
  Tokens(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

  [[noreturn]] void bad(const std::string& msg) const { throw FormatError(what_ + ": " + msg); }

  std::string word() {
    std::string w;
    if (!(in_ >> w)) bad("unexpected end of input");
    return w;
  }

  void header(std::string_view magic) {
    const std::string got = word();
    if (got != magic) bad("expected header '" + std::string(magic) + "', got '" + got + "'");
  }

  void version(long expected) {
    if (integer() != expected) bad("unsupported version");
  }

  long long integer() {
    const std::string w = word();
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(w, &used);
    } catch (const std::exception&) {
      bad("expected an integer, got '" + w + "'");
    }
    if (used != w.size()) bad("expected an integer, got '" + w + "'");
    return v;
  }

  std::size_t count() {
    const long long v = integer();
    if (v < 0) bad("negative count");
    return static_cast<std::size_t>(v);
  }

  std::size_t index(std::size_t limit) {
    const long long v = integer();
    if (v < 1 || static_cast<unsigned long long>(v) > limit) {
      bad("index " + std::to_string(v) + " outside 1.." + std::to_string(limit));
    }
    return static_cast<std::size_t>(v - 1);
  }

  double real() {
    const std::string w = word();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(w, &used);
    } catch (const std::exception&) {
      bad("expected a number, got '" + w + "'");
    }
    if (used != w.size() || !std::isfinite(v)) bad("expected a finite number, got '" + w + "'");
    return v;
  }

  void finish() {
    std::string extra;
    if (in_ >> extra) bad("trailing token '" + extra + "'");
  }

 private:
  std::istream& in_;
  std::string what_;
};

std::string format_real(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Instance read_instance(std::istream& in) {
  Tokens tok(in, "instance");
  tok.header("ECL");
  tok.version(1);
  const long long p = tok.integer();
  if (p < 0) tok.bad("negative norm index");
  const std::size_t d = tok.count();
  const std::size_t n = tok.count();
  const std::size_t k = tok.count();
  const long long B = tok.integer();
  if (d == 0) tok.bad("dimension must be positive");
  if (k == 0) tok.bad("k must be positive");
  if (B < 0) tok.bad("negative budget");
  if (n % k != 0) tok.bad("n = " + std::to_string(n) + " is not divisible by k = " + std::to_string(k));
  Instance inst;
  inst.dim = d;
  inst.p = static_cast<NormIndex>(p);
  inst.k = k;
  inst.budget = B;
  inst.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.points[i].id = i;
    inst.points[i].coords.resize(d);
    for (auto& v : inst.points[i].coords) v = tok.integer();
  }
  tok.finish();
  return inst;
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << "ECL 1\n" << inst.p << ' ' << inst.dim << ' ' << inst.size() << ' ' << inst.k << ' ' << inst.budget << '\n';
  for (const Point& x : inst.points) {
    for (std::size_t h = 0; h < x.coords.size(); ++h) out << (h ? " " : "") << x.coords[h];
    out << '\n';
  }
}

Clustering read_clustering(std::istream& in) {
  Tokens tok(in, "clustering");
  tok.header("ASSIGN");
  tok.version(1);
  const std::size_t n = tok.count();
  Clustering c;
  c.k = tok.count();
  c.assignment.resize(n);
  for (auto& a : c.assignment) a = tok.index(c.k);
  tok.finish();
  return c;
}

void write_clustering(std::ostream& out, const Clustering& c) {
  out << "ASSIGN 1 " << c.size() << ' ' << c.k << '\n';
  for (std::size_t a : c.assignment) out << a + 1 << '\n';
}

Hypergraph read_hypergraph(std::istream& in) {
  Tokens tok(in, "hypergraph");
  tok.header("RSM");
  Hypergraph h;
  h.r = tok.count();
  h.n = tok.count();
  const std::size_t m = tok.count();
  h.edges.assign(m, std::vector<std::size_t>(h.r));
  for (auto& e : h.edges) {
    for (auto& v : e) v = tok.index(h.n);
  }
  tok.finish();
  return h;
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << "RSM " << h.r << ' ' << h.n << ' ' << h.edges.size() << '\n';
  for (const auto& e : h.edges) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i] + 1;
    out << '\n';
  }
}

TdmInstance read_tdm(std::istream& in) {
  Tokens tok(in, "3dm");
  tok.header("TDM");
  TdmInstance t;
  t.n = tok.count();
  const std::size_t m = tok.count();
  t.triples.resize(m);
  for (auto& tr : t.triples) {
    for (auto& v : tr) v = tok.index(t.n);
  }
  tok.finish();
  return t;
}

void write_tdm(std::ostream& out, const TdmInstance& t) {
  out << "TDM " << t.n << ' ' << t.triples.size() << '\n';
  for (const auto& tr : t.triples) out << tr[0] + 1 << ' ' << tr[1] + 1 << ' ' << tr[2] + 1 << '\n';
}

std::vector<std::size_t> read_matching(std::istream& in) {
  Tokens tok(in, "matching");
  tok.header("MATCH");
  tok.version(1);
  std::vector<std::size_t> out(tok.count());
  for (auto& j : out) j = tok.index(std::numeric_limits<std::size_t>::max());
  tok.finish();
  return out;
}

void write_matching(std::ostream& out, const std::vector<std::size_t>& matching) {
  out << "MATCH 1 " << matching.size() << '\n';
  for (std::size_t j : matching) out << j + 1 << '\n';
}

std::vector<Median> read_medians(std::istream& in) {
  Tokens tok(in, "medians");
  tok.header("MEDIANS");
  tok.version(1);
  const std::size_t k = tok.count();
  const std::size_t d = tok.count();
  if (d == 0) tok.bad("dimension must be positive");
  std::vector<Median> out(k);
  for (auto& m : out) {
    m.coords.resize(d);
    for (auto& v : m.coords) v = tok.real();
    m.source = m.integral() ? MedianSource::CoordinatewiseExact : MedianSource::IterativeApproximate;
  }
  tok.finish();
  return out;
}

void write_medians(std::ostream& out, const std::vector<Median>& medians) {
  const std::size_t d = medians.empty() ? 1 : medians.front().coords.size();
  out << "MEDIANS 1 " << medians.size() << ' ' << d << '\n';
  for (const auto& m : medians) {
    for (std::size_t h = 0; h < m.coords.size(); ++h) out << (h ? " " : "") << format_real(m.coords[h]);
    out << '\n';
  }
}

std::string read_text(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream file(path);
  if (!file) throw FormatError("cannot open '" + path + "'");
  buf << file.rdbuf();
  return buf.str();
}

}  // namespace eqclust
