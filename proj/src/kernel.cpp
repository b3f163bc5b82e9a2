#include "eqclust/kernel.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

#include "eqclust/exact_large.hpp"

namespace eqclust {

namespace {

constexpr std::array<std::pair<KernelBranch, std::string_view>, 6> kBranchNames{{
    {KernelBranch::LargeYes, "large-yes"},
    {KernelBranch::LargeNo, "large-no"},
    {KernelBranch::DimreduceNo, "dimreduce-no"},
    {KernelBranch::EmptyAfterGreedy, "empty-after-greedy"},
    {KernelBranch::Generic, "generic"},
    {KernelBranch::KPrimeTooBig, "kprime-too-big"},
}};

Instance renumbered(Instance inst) {
  for (std::size_t i = 0; i < inst.points.size(); ++i) inst.points[i].id = i;
  return inst;
}

LiftContext base_context(const Instance& inst) {
  LiftContext ctx;
  ctx.original_n = inst.size();
  ctx.original_k = inst.k;
  ctx.p = inst.p;
  ctx.budget = inst.budget;
  return ctx;
}

LossyKernel no_instance(LiftContext ctx, KernelBranch branch) {
  ctx.branch = branch;
  ctx.blocks.clear();
  ctx.kernel_positions.clear();
  ctx.first_map.reset();
  ctx.second_map.reset();
  ctx.stashed.reset();
  const NormIndex p = ctx.p;
  return LossyKernel{trivial_no_instance(p), std::move(ctx)};
}

}  // namespace

std::string_view to_string(KernelBranch branch) {
  for (const auto& [b, name] : kBranchNames) {
    if (b == branch) return name;
  }
  return "unknown";
}

std::optional<KernelBranch> parse_branch(std::string_view text) {
  for (const auto& [b, name] : kBranchNames) {
    if (name == text) return b;
  }
  return std::nullopt;
}

Instance trivial_no_instance(NormIndex p) { return Instance::from_rows({{0}, {1}}, p, 1, 0); }

Instance trivial_yes_instance(NormIndex p) { return Instance::from_rows({{0}}, p, 1, 0); }

Clustering chunked_clustering(std::size_t n, std::size_t k) {
  Clustering c;
  c.k = k;
  c.assignment.resize(n);
  const std::size_t s = k == 0 ? 0 : n / k;
  for (std::size_t i = 0; i < n; ++i) c.assignment[i] = i / s;
  return c;
}

LossyKernel lossy_kernelize(const Instance& inst) {
  inst.validate();
  LiftContext ctx = base_context(inst);

  if (inst.large_regime()) {
    const LargeOutcome outcome = solve_large(inst);
    if (std::holds_alternative<NoBudget>(outcome)) return no_instance(std::move(ctx), KernelBranch::LargeNo);
    ctx.branch = KernelBranch::LargeYes;
    ctx.stashed = std::get<Solution>(outcome).clustering;
    return LossyKernel{trivial_yes_instance(inst.p), std::move(ctx)};
  }

  ReduceOutcome first = reduce_dimension(inst);
  if (std::holds_alternative<NoBudget>(first)) return no_instance(std::move(ctx), KernelBranch::DimreduceNo);
  Reduction& reduced = std::get<Reduction>(first);

  BlockExtraction ext = extract_full_blocks(reduced.reduced);
  const std::size_t k_rest = ext.remainder.k;
  const std::int64_t budget_rest = 2 * inst.budget;
  if (static_cast<std::int64_t>(k_rest) > budget_rest) return no_instance(std::move(ctx), KernelBranch::KPrimeTooBig);

  ctx.blocks = std::move(ext.blocks);
  ctx.first_map = std::move(reduced.map);
  if (k_rest == 0) {
    ctx.branch = KernelBranch::EmptyAfterGreedy;
    return LossyKernel{trivial_yes_instance(inst.p), std::move(ctx)};
  }

  Instance rest = std::move(ext.remainder);
  rest.budget = budget_rest;
  ReduceOutcome second = reduce_dimension(rest);
  if (std::holds_alternative<NoBudget>(second)) return no_instance(std::move(ctx), KernelBranch::DimreduceNo);
  Reduction& again = std::get<Reduction>(second);

  ctx.branch = KernelBranch::Generic;
  ctx.kernel_positions = std::move(ext.remainder_positions);
  ctx.second_map = std::move(again.map);
  return LossyKernel{renumbered(std::move(again.reduced)), std::move(ctx)};
}

Clustering lift_solution(const LiftContext& ctx, const Clustering& kernel_clustering) {
  switch (ctx.branch) {
    case KernelBranch::LargeYes:
      if (!ctx.stashed) throw InvalidClustering("lift context lacks the stashed clustering");
      return *ctx.stashed;
    case KernelBranch::LargeNo:
    case KernelBranch::DimreduceNo:
    case KernelBranch::KPrimeTooBig:
      return chunked_clustering(ctx.original_n, ctx.original_k);
    case KernelBranch::EmptyAfterGreedy:
      return Clustering::from_members(ctx.original_n, ctx.blocks);
    case KernelBranch::Generic:
      break;
  }

  const std::size_t k_rest = ctx.original_k - ctx.blocks.size();
  if (kernel_clustering.size() != ctx.kernel_positions.size() || kernel_clustering.k != k_rest ||
      !kernel_clustering.is_equal()) {
    throw InvalidClustering("kernel clustering does not match the kernel instance (expected " +
                            std::to_string(ctx.kernel_positions.size()) + " points in " + std::to_string(k_rest) +
                            " equal clusters)");
  }
  std::vector<std::vector<std::size_t>> parts = ctx.blocks;
  const std::size_t t = parts.size();
  parts.resize(ctx.original_k);
  for (std::size_t i = 0; i < kernel_clustering.size(); ++i) {
    parts[t + kernel_clustering.assignment[i]].push_back(ctx.kernel_positions[i]);
  }
  return Clustering::from_members(ctx.original_n, parts);
}

Instance exact_kernelize(const Instance& inst) {
  inst.validate();
  if (inst.large_regime()) {
    return std::holds_alternative<NoBudget>(solve_large(inst)) ? trivial_no_instance(inst.p)
                                                               : trivial_yes_instance(inst.p);
  }
  ReduceOutcome reduced = reduce_dimension(inst);
  if (std::holds_alternative<NoBudget>(reduced)) return trivial_no_instance(inst.p);
  return renumbered(std::move(std::get<Reduction>(reduced).reduced));
}

// ----------------------------------------------------------- serialization
//
// LIFTCTX 1
// branch <name>
// original <n> <k> <p> <B>
// blocks <t>            followed by t lines "<size> <positions...>"
// kernel <m> <positions...>
// stash none | stash <k> <n> <assignment...>
// map first|second none | map ... <parts> <width> <sentinel columns> <step> <shift|rank>
//   followed by one "part" line per part
// end

namespace {

template <typename T>
void write_list(std::ostream& out, const std::vector<T>& values) {
  out << values.size();
  for (const T& v : values) out << ' ' << v;
}

void write_map(std::ostream& out, std::string_view label, const std::optional<ReduceMap>& map) {
  out << "map " << label;
  if (!map) {
    out << " none\n";
    return;
  }
  out << ' ' << map->parts.size() << ' ' << map->width << ' ' << map->sentinel_columns << ' '
      << map->sentinel_step << ' ' << (map->encoding == CoordinateEncoding::Rank ? "rank" : "shift") << '\n';
  for (const ReducePart& part : map->parts) {
    out << "part ";
    write_list(out, part.members);
    out << ' ';
    write_list(out, part.selected);
    out << ' ';
    write_list(out, part.shift);
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw FormatError("lift context: unexpected end of input");
    return w;
  }

  void expect(std::string_view w) {
    const std::string got = word();
    if (got != w) throw FormatError("lift context: expected '" + std::string(w) + "', got '" + got + "'");
  }

  template <typename T>
  T number() {
    T v{};
    if (!(in_ >> v)) throw FormatError("lift context: expected a number");
    return v;
  }

  template <typename T>
  std::vector<T> list() {
    const auto n = number<std::size_t>();
    std::vector<T> out(n);
    for (auto& v : out) v = number<T>();
    return out;
  }

 private:
  std::istream& in_;
};

std::optional<ReduceMap> read_map(Reader& r, std::string_view label) {
  r.expect("map");
  r.expect(label);
  const std::string head = r.word();
  if (head == "none") return std::nullopt;
  ReduceMap map;
  std::size_t parts = 0;
  try {
    parts = std::stoul(head);
  } catch (const std::exception&) {
    throw FormatError("lift context: bad part count '" + head + "'");
  }
  map.width = r.number<std::size_t>();
  map.sentinel_columns = r.number<std::size_t>();
  map.sentinel_step = r.number<std::int64_t>();
  const std::string enc = r.word();
  if (enc == "rank") {
    map.encoding = CoordinateEncoding::Rank;
  } else if (enc == "shift") {
    map.encoding = CoordinateEncoding::Shift;
  } else {
    throw FormatError("lift context: unknown encoding '" + enc + "'");
  }
  std::size_t n = 0;
  for (std::size_t j = 0; j < parts; ++j) {
    r.expect("part");
    ReducePart part;
    part.members = r.list<std::size_t>();
    part.selected = r.list<std::size_t>();
    part.shift = r.list<Coord>();
    n += part.members.size();
    map.parts.push_back(std::move(part));
  }
  map.part_of.assign(n, 0);
  for (std::size_t j = 0; j < map.parts.size(); ++j) {
    for (std::size_t pos : map.parts[j].members) {
      if (pos >= n) throw FormatError("lift context: part member out of range");
      map.part_of[pos] = j;
    }
  }
  return map;
}

}  // namespace

void write_lift_context(std::ostream& out, const LiftContext& ctx) {
  out << "LIFTCTX 1\n";
  out << "branch " << to_string(ctx.branch) << '\n';
  out << "original " << ctx.original_n << ' ' << ctx.original_k << ' ' << ctx.p << ' ' << ctx.budget << '\n';
  out << "blocks " << ctx.blocks.size() << '\n';
  for (const auto& block : ctx.blocks) {
    write_list(out, block);
    out << '\n';
  }
  out << "kernel ";
  write_list(out, ctx.kernel_positions);
  out << '\n';
  if (ctx.stashed) {
    out << "stash " << ctx.stashed->k << ' ';
    write_list(out, ctx.stashed->assignment);
    out << '\n';
  } else {
    out << "stash none\n";
  }
  write_map(out, "first", ctx.first_map);
  write_map(out, "second", ctx.second_map);
  out << "end\n";
}

LiftContext read_lift_context(std::istream& in) {
  Reader r(in);
  r.expect("LIFTCTX");
  if (r.number<int>() != 1) throw FormatError("lift context: unsupported version");
  LiftContext ctx;
  r.expect("branch");
  const std::string name = r.word();
  const auto branch = parse_branch(name);
  if (!branch) throw FormatError("lift context: unknown branch '" + name + "'");
  ctx.branch = *branch;
  r.expect("original");
  ctx.original_n = r.number<std::size_t>();
  ctx.original_k = r.number<std::size_t>();
  ctx.p = r.number<NormIndex>();
  ctx.budget = r.number<std::int64_t>();
  r.expect("blocks");
  const auto t = r.number<std::size_t>();
  for (std::size_t i = 0; i < t; ++i) ctx.blocks.push_back(r.list<std::size_t>());
  r.expect("kernel");
  ctx.kernel_positions = r.list<std::size_t>();
  r.expect("stash");
  const std::string stash = r.word();
  if (stash != "none") {
    Clustering c;
    try {
      c.k = std::stoul(stash);
    } catch (const std::exception&) {
      throw FormatError("lift context: bad stash header '" + stash + "'");
    }
    c.assignment = r.list<std::size_t>();
    ctx.stashed = std::move(c);
  }
  ctx.first_map = read_map(r, "first");
  ctx.second_map = read_map(r, "second");
  r.expect("end");

  if (ctx.blocks.size() > ctx.original_k) throw FormatError("lift context: more blocks than clusters");
  for (const auto& block : ctx.blocks) {
    for (std::size_t pos : block) {
      if (pos >= ctx.original_n) throw FormatError("lift context: block member out of range");
    }
  }
  for (std::size_t pos : ctx.kernel_positions) {
    if (pos >= ctx.original_n) throw FormatError("lift context: kernel position out of range");
  }
  if (ctx.branch == KernelBranch::LargeYes && !ctx.stashed) throw FormatError("lift context: large-yes without stash");
  if (ctx.stashed && ctx.stashed->assignment.size() != ctx.original_n) {
    throw FormatError("lift context: stashed clustering has the wrong size");
  }
  return ctx;
}

}  // namespace eqclust
