#include "eqclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace eqclust {

namespace {

using Wide = unsigned __int128;
constexpr Wide kWideMax = ~Wide{0};

constexpr double kBudgetSlack = 1e-9;

Wide abs_diff(Coord a, Coord b) {
  const __int128 d = static_cast<__int128>(a) - static_cast<__int128>(b);
  return static_cast<Wide>(d < 0 ? -d : d);
}

bool mul_overflows(Wide a, Wide b) { return a != 0 && b > kWideMax / a; }

// base^exp, or nullopt on 128-bit overflow
std::optional<Wide> checked_pow(Wide base, unsigned exp) {
  Wide r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (mul_overflows(r, base)) return std::nullopt;
    r *= base;
  }
  return r;
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double lp_norm_real(const std::vector<double>& diffs, NormIndex p) {
  double scale = 0.0;
  for (double v : diffs) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : diffs) sum += std::pow(std::abs(v) / scale, static_cast<double>(p));
  return scale * std::pow(sum, 1.0 / static_cast<double>(p));
}

double real_cost(const PointRefs& points, const std::vector<double>& c, NormIndex p) {
  std::vector<double> diffs(c.size());
  double total = 0.0;
  for (const Point* x : points) {
    for (std::size_t j = 0; j < c.size(); ++j) diffs[j] = c[j] - static_cast<double>(x->coords[j]);
    total += lp_norm_real(diffs, p);
  }
  return total;
}

std::vector<Coord> lower_median(const PointRefs& points) {
  const std::size_t d = points.front()->dimension();
  std::vector<Coord> c(d);
  std::vector<Coord> column(points.size());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < points.size(); ++i) column[i] = points[i]->coords[j];
    const auto mid = column.begin() + static_cast<std::ptrdiff_t>((column.size() - 1) / 2);
    std::nth_element(column.begin(), mid, column.end());
    c[j] = *mid;
  }
  return c;
}

std::vector<Coord> majority(const PointRefs& points) {
  const std::size_t d = points.front()->dimension();
  std::vector<Coord> c(d);
  std::map<Coord, std::size_t> freq;
  for (std::size_t j = 0; j < d; ++j) {
    freq.clear();
    for (const Point* x : points) ++freq[x->coords[j]];
    std::size_t best = 0;
    // ascending map order keeps the smallest value on ties
    for (const auto& [value, count] : freq) {
      if (count > best) {
        best = count;
        c[j] = value;
      }
    }
  }
  return c;
}

Median integer_median(const std::vector<Coord>& c) {
  Median m;
  m.coords.assign(c.begin(), c.end());
  m.source = MedianSource::CoordinatewiseExact;
  return m;
}

// Iteratively reweighted least squares for sum_i ||c - x_i||_p, p >= 2.
// Reduces to Weiszfeld at p = 2; steps that do not decrease the objective
// are shortened by halving.
std::vector<double> fermat_weber(const PointRefs& points, NormIndex p, std::vector<double> c) {
  constexpr int kMaxIterations = 10000;
  constexpr double kRelTol = 1e-9;
  const std::size_t d = c.size();
  const double pd = static_cast<double>(p);

  double f = real_cost(points, c, p);
  std::vector<double> diffs(d), next(d), num(d), den(d);
  for (int it = 0; it < kMaxIterations && f > 0.0; ++it) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (const Point* x : points) {
      for (std::size_t j = 0; j < d; ++j) diffs[j] = c[j] - static_cast<double>(x->coords[j]);
      const double dist = lp_norm_real(diffs, p);
      if (dist < 1e-12) continue;
      const double denom = std::pow(dist, pd - 1.0);
      for (std::size_t j = 0; j < d; ++j) {
        const double w = std::pow(std::abs(diffs[j]), pd - 2.0) / denom;
        num[j] += w * static_cast<double>(x->coords[j]);
        den[j] += w;
      }
    }
    for (std::size_t j = 0; j < d; ++j) next[j] = den[j] > 0.0 ? num[j] / den[j] : c[j];

    double step = 1.0;
    double fn = real_cost(points, next, p);
    std::vector<double> trial = next;
    while (fn >= f && step > 1e-9) {
      step *= 0.5;
      for (std::size_t j = 0; j < d; ++j) trial[j] = c[j] + step * (next[j] - c[j]);
      fn = real_cost(points, trial, p);
    }
    if (fn >= f) break;
    const double gain = f - fn;
    c = trial;
    f = fn;
    if (gain <= kRelTol * f) break;
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------- Instance

std::size_t Instance::cluster_size() const { return k == 0 ? 0 : points.size() / k; }

bool Instance::large_regime() const {
  if (k == 0) return false;
  return static_cast<std::int64_t>(cluster_size()) >= 4 * budget + 1;
}

void Instance::validate() const {
  if (dim == 0) throw InvalidInstance("dimension must be at least 1");
  if (budget < 0) throw InvalidInstance("budget must be nonnegative");
  if (points.empty()) {
    if (k != 0) throw InvalidInstance("empty instance must have k = 0");
    return;
  }
  if (k == 0) throw InvalidInstance("k must be positive");
  if (points.size() % k != 0) {
    throw InvalidInstance("n = " + std::to_string(points.size()) + " is not divisible by k = " +
                          std::to_string(k));
  }
  std::set<PointId> ids;
  for (const Point& x : points) {
    if (x.dimension() != dim) throw InvalidInstance("point " + std::to_string(x.id) + " has wrong dimension");
    if (!ids.insert(x.id).second) throw InvalidInstance("duplicate point id " + std::to_string(x.id));
  }
}

Instance Instance::from_rows(std::vector<std::vector<Coord>> rows, NormIndex p, std::size_t k,
                             std::int64_t budget) {
  Instance inst;
  inst.dim = rows.empty() ? 1 : rows.front().size();
  inst.p = p;
  inst.k = k;
  inst.budget = budget;
  inst.points.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) inst.points.push_back(Point{std::move(rows[i]), i});
  inst.validate();
  return inst;
}

Instance Instance::subset(std::span<const std::size_t> positions, std::size_t new_k) const {
  Instance out;
  out.dim = dim;
  out.p = p;
  out.k = new_k;
  out.budget = budget;
  out.points.reserve(positions.size());
  for (std::size_t pos : positions) out.points.push_back(points.at(pos));
  return out;
}

// --------------------------------------------------------------- CostValue

bool CostValue::within(std::int64_t budget) const {
  if (exact) return *exact <= budget;
  return real <= static_cast<double>(budget) + kBudgetSlack;
}

CostValue& CostValue::operator+=(const CostValue& other) {
  if (exact && other.exact) {
    *exact += *other.exact;
  } else {
    exact.reset();
  }
  real += other.real;
  return *this;
}

bool operator<(const CostValue& a, const CostValue& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  return a.real < b.real - kBudgetSlack * std::max(1.0, std::abs(b.real));
}

bool operator==(const CostValue& a, const CostValue& b) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return std::abs(a.real - b.real) <= kBudgetSlack * std::max(1.0, std::abs(b.real));
}

std::string CostValue::to_string() const {
  if (exact) return std::to_string(*exact);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", real);
  return buf;
}

// ------------------------------------------------------------------ Median

Median Median::from_point(const Point& x) {
  Median m;
  m.coords.assign(x.coords.begin(), x.coords.end());
  m.source = MedianSource::DataPoint;
  return m;
}

std::optional<std::vector<Coord>> Median::integral() const {
  std::vector<Coord> out;
  out.reserve(coords.size());
  for (double v : coords) {
    if (!std::isfinite(v) || std::floor(v) != v || std::abs(v) > 9.0e15) return std::nullopt;
    out.push_back(static_cast<Coord>(v));
  }
  return out;
}

// --------------------------------------------------------------- distances

PointRefs refs_of(std::span<const Point> points) {
  PointRefs out;
  out.reserve(points.size());
  for (const Point& x : points) out.push_back(&x);
  return out;
}

PointRefs refs_of(const Instance& inst, std::span<const std::size_t> positions) {
  PointRefs out;
  out.reserve(positions.size());
  for (std::size_t pos : positions) out.push_back(&inst.points.at(pos));
  return out;
}

CostValue lp_distance(std::span<const Coord> x, std::span<const Coord> y, NormIndex p) {
  require_same_dim(x.size(), y.size());
  if (p == 0) {
    std::int64_t count = 0;
    for (std::size_t j = 0; j < x.size(); ++j) count += x[j] != y[j] ? 1 : 0;
    return CostValue::integer(count);
  }
  if (p == 1) {
    Wide sum = 0;
    for (std::size_t j = 0; j < x.size(); ++j) sum += abs_diff(x[j], y[j]);
    if (sum > static_cast<Wide>(std::numeric_limits<std::int64_t>::max())) {
      throw std::overflow_error("l1 distance exceeds 64-bit range");
    }
    return CostValue::integer(static_cast<std::int64_t>(sum));
  }
  std::vector<double> diffs(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) diffs[j] = static_cast<double>(x[j]) - static_cast<double>(y[j]);
  return CostValue::approximate(lp_norm_real(diffs, p));
}

CostValue lp_distance(const Point& x, const Point& y, NormIndex p) { return lp_distance(x.coords, y.coords, p); }

CostValue lp_distance(const Median& c, const Point& x, NormIndex p) {
  require_same_dim(c.coords.size(), x.dimension());
  if (p <= 1) {
    if (auto ic = c.integral()) return lp_distance(*ic, x.coords, p);
  }
  std::vector<double> diffs(x.dimension());
  for (std::size_t j = 0; j < diffs.size(); ++j) diffs[j] = c.coords[j] - static_cast<double>(x.coords[j]);
  if (p == 0) {
    double count = 0;
    for (double v : diffs) count += v != 0.0 ? 1.0 : 0.0;
    return CostValue::approximate(count);
  }
  if (p == 1) {
    double sum = 0;
    for (double v : diffs) sum += std::abs(v);
    return CostValue::approximate(sum);
  }
  return CostValue::approximate(lp_norm_real(diffs, p));
}

bool distance_leq_budget(const Point& x, const Point& y, NormIndex p, std::int64_t budget) {
  require_same_dim(x.dimension(), y.dimension());
  if (budget < 0) return false;
  const Wide b = static_cast<Wide>(budget);
  if (p == 0) {
    Wide count = 0;
    for (std::size_t j = 0; j < x.dimension(); ++j) {
      if (x.coords[j] != y.coords[j] && ++count > b) return false;
    }
    return true;
  }
  if (p == 1) {
    Wide sum = 0;
    for (std::size_t j = 0; j < x.dimension(); ++j) {
      sum += abs_diff(x.coords[j], y.coords[j]);
      if (sum > b) return false;
    }
    return true;
  }
  const auto cap = checked_pow(b, p);
  if (!cap) throw std::overflow_error("B^p exceeds 128-bit range");
  Wide sum = 0;
  for (std::size_t j = 0; j < x.dimension(); ++j) {
    const Wide diff = abs_diff(x.coords[j], y.coords[j]);
    if (diff > b) return false;
    // diff <= B, so diff^p <= B^p fits
    sum += *checked_pow(diff, p);
    if (sum > *cap) return false;
  }
  return true;
}

CostValue cluster_cost(const PointRefs& points, const Median& center, NormIndex p) {
  CostValue total = CostValue::integer(0);
  for (const Point* x : points) total += lp_distance(center, *x, p);
  return total;
}

CostValue cluster_cost(std::span<const Point> points, const Median& center, NormIndex p) {
  return cluster_cost(refs_of(points), center, p);
}

MedianFit optimum_median(const PointRefs& points, NormIndex p) {
  if (points.empty()) throw std::invalid_argument("optimum_median of an empty multiset");
  const std::size_t d = points.front()->dimension();
  for (const Point* x : points) require_same_dim(d, x->dimension());

  if (p <= 1) {
    Median m = integer_median(p == 0 ? majority(points) : lower_median(points));
    CostValue cost = cluster_cost(points, m, p);
    return MedianFit{std::move(m), cost};
  }

  const std::vector<Coord> start = lower_median(points);
  Median m;
  m.coords = fermat_weber(points, p, std::vector<double>(start.begin(), start.end()));
  m.source = MedianSource::IterativeApproximate;
  double best = real_cost(points, m.coords, p);
  for (const Point* x : points) {
    const std::vector<double> cand(x->coords.begin(), x->coords.end());
    const double f = real_cost(points, cand, p);
    if (f <= best) {
      best = f;
      m = Median::from_point(*x);
    }
  }
  return MedianFit{std::move(m), CostValue::approximate(best)};
}

MedianFit optimum_median(std::span<const Point> points, NormIndex p) { return optimum_median(refs_of(points), p); }

// -------------------------------------------------------------- Clustering

std::vector<std::vector<std::size_t>> Clustering::members() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) out.at(assignment[i]).push_back(i);
  return out;
}

bool Clustering::is_equal() const {
  if (k == 0) return assignment.empty();
  if (assignment.size() % k != 0) return false;
  const std::size_t s = assignment.size() / k;
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : assignment) {
    if (c >= k) return false;
    ++sizes[c];
  }
  return std::all_of(sizes.begin(), sizes.end(), [s](std::size_t v) { return v == s; });
}

void Clustering::validate_for(const Instance& inst, bool require_equal) const {
  if (assignment.size() != inst.size()) {
    throw InvalidClustering("clustering covers " + std::to_string(assignment.size()) + " points, instance has " +
                            std::to_string(inst.size()));
  }
  if (k != inst.k) {
    throw InvalidClustering("clustering has k = " + std::to_string(k) + ", instance has k = " + std::to_string(inst.k));
  }
  for (std::size_t c : assignment) {
    if (c >= k) throw InvalidClustering("cluster index out of range");
  }
  if (require_equal && !is_equal()) throw InvalidClustering("clusters are not of equal size");
}

Clustering Clustering::from_members(std::size_t n, const std::vector<std::vector<std::size_t>>& parts) {
  Clustering c;
  c.k = parts.size();
  c.assignment.assign(n, parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (std::size_t pos : parts[j]) {
      if (pos >= n || c.assignment[pos] != parts.size()) throw InvalidClustering("parts do not partition 0..n-1");
      c.assignment[pos] = j;
    }
  }
  if (std::find(c.assignment.begin(), c.assignment.end(), parts.size()) != c.assignment.end()) {
    throw InvalidClustering("parts do not cover 0..n-1");
  }
  return c;
}

CostValue clustering_cost(const Instance& inst, const Clustering& c) {
  c.validate_for(inst);
  CostValue total = CostValue::integer(0);
  for (const auto& part : c.members()) {
    if (part.empty()) continue;
    total += optimum_median(refs_of(inst, part), inst.p).cost;
  }
  return total;
}

CostValue truncate(const CostValue& cost, std::int64_t budget) {
  if (cost.within(budget)) return cost;
  return CostValue::integer(budget + 1);
}

CostValue truncated_cost(const Instance& inst, const Clustering& c) {
  return truncate(clustering_cost(inst, c), inst.budget);
}

// ---------------------------------------------------------- identical blocks

std::vector<std::vector<std::size_t>> group_identical(const Instance& inst) {
  std::map<std::vector<Coord>, std::size_t> index;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    auto [it, inserted] = index.try_emplace(inst.points[i].coords, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

BlockExtraction extract_full_blocks(const Instance& inst) {
  BlockExtraction out;
  const std::size_t s = inst.cluster_size();
  std::vector<bool> removed(inst.size(), false);
  if (s > 0) {
    for (const auto& group : group_identical(inst)) {
      for (std::size_t start = 0; start + s <= group.size(); start += s) {
        std::vector<std::size_t> block(group.begin() + static_cast<std::ptrdiff_t>(start),
                                       group.begin() + static_cast<std::ptrdiff_t>(start + s));
        for (std::size_t pos : block) removed[pos] = true;
        out.blocks.push_back(std::move(block));
      }
    }
  }
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!removed[i]) out.remainder_positions.push_back(i);
  }
  out.remainder = inst.subset(out.remainder_positions, inst.k - out.blocks.size());
  return out;
}

}  // namespace eqclust
