#pragma once

#include <random>
#include <vector>

#include "eqclust/core.hpp"

namespace testing_support {

using eqclust::Coord;
using eqclust::Instance;
using eqclust::NormIndex;

inline Instance line(const std::vector<Coord>& values, NormIndex p, std::size_t k, std::int64_t budget) {
  std::vector<std::vector<Coord>> rows;
  for (Coord v : values) rows.push_back({v});
  return Instance::from_rows(rows, p, k, budget);
}

inline std::vector<Coord> repeat(Coord v, std::size_t times) { return std::vector<Coord>(times, v); }

inline std::vector<Coord> concat(std::initializer_list<std::vector<Coord>> parts) {
  std::vector<Coord> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline eqclust::Median center(std::vector<double> coords) {
  return eqclust::Median{std::move(coords), eqclust::MedianSource::CoordinatewiseExact};
}

}  // namespace testing_support
